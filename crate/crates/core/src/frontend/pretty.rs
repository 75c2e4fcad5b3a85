//! Printing core terms as parseable surface syntax.
//!
//! Binder names come from an optional list of hints in the order the
//! elaborator introduced them; anything missing, clashing or reserved is
//! replaced by a fresh `xN`.

use crate::bound::{BoundExpr, BoundNF, Factor, Poly, Verdict};
use crate::lattice::ExtNat;
use crate::syntax::Term;

use super::ast::is_keyword;
use super::elab::{Decl, Program};

const BOUND_WORDS: &[&str] = &["inf", "max", "log2", "sum", "fold", "at"];

struct Printer<'h> {
    scope: Vec<String>,
    hints: &'h [String],
    next_hint: usize,
    /// Inlined references to earlier declarations, printed back as names.
    globals: &'h [Global],
}

struct Global {
    reference: Term,
    name: String,
    /// Hints the elaborator recorded when it inlined the reference.
    hints: usize,
}

fn grade(g: ExtNat) -> String {
    match g {
        ExtNat::Fin(n) => n.to_string(),
        ExtNat::Inf => "inf".into(),
    }
}

fn usable(name: &str) -> bool {
    name != "_"
        && !name.is_empty()
        && !is_keyword(name)
        && !BOUND_WORDS.contains(&name)
        && name
            .chars()
            .next()
            .is_some_and(|c| c.is_alphabetic() || c == '_')
        && name
            .chars()
            .all(|c| c.is_alphanumeric() || c == '_' || c == '\'')
}

impl<'h> Printer<'h> {
    fn new(scope: Vec<String>, hints: &'h [String]) -> Self {
        Printer {
            scope,
            hints,
            next_hint: 0,
            globals: &[],
        }
    }

    fn global(&mut self, t: &Term) -> Option<String> {
        if !matches!(t, Term::Ann(..)) {
            return None;
        }
        let g = self.globals.iter().find(|g| g.reference == *t)?;
        self.next_hint += g.hints;
        Some(g.name.clone())
    }

    fn bind(&mut self) -> String {
        let hint = self.hints.get(self.next_hint).cloned();
        self.next_hint += 1;
        let mut name = match hint {
            Some(h) if usable(&h) => h,
            _ => format!("x{}", self.scope.len()),
        };
        while self.scope.contains(&name) {
            name.push('\'');
        }
        self.scope.push(name.clone());
        name
    }

    fn unbind(&mut self, n: usize) {
        self.scope.truncate(self.scope.len() - n);
    }

    fn var(&self, i: usize) -> String {
        match self.scope.len().checked_sub(i + 1) {
            Some(level) => self.scope[level].clone(),
            None => format!("#{i}"),
        }
    }

    fn expr(&mut self, t: &Term) -> String {
        if let Some(name) = self.global(t) {
            return name;
        }
        match t {
            Term::Lam(_) => {
                let mut names = Vec::new();
                let mut cur = t;
                while let Term::Lam(body) = cur {
                    names.push(self.bind());
                    cur = body;
                }
                let body = self.expr(cur);
                self.unbind(names.len());
                format!("fun {} => {body}", names.join(" "))
            }
            Term::Pi(dom, b, cod) => {
                let dependent = cod.has_free_var(0) || b.has_free_var(0);
                let d = if dependent {
                    self.expr(dom)
                } else {
                    self.app(dom)
                };
                let x = self.bind();
                let bs = self.bound(b);
                let c = self.expr(cod);
                self.unbind(1);
                if dependent {
                    format!("({x} : {d}) ->[{bs}] {c}")
                } else {
                    format!("{d} ->[{bs}] {c}")
                }
            }
            Term::Sigma(first, second) => {
                let dependent = second.has_free_var(0);
                let a = if dependent {
                    self.expr(first)
                } else {
                    self.app(first)
                };
                let x = self.bind();
                let b = self.expr(second);
                self.unbind(1);
                if dependent {
                    format!("({x} : {a}) * {b}")
                } else {
                    format!("{a} * {b}")
                }
            }
            _ => self.app(t),
        }
    }

    fn app(&mut self, t: &Term) -> String {
        if let Some(name) = self.global(t) {
            return name;
        }
        let pre = |p: &mut Self, kw: &str, args: &[&Term]| {
            let mut s = kw.to_string();
            for a in args {
                s.push(' ');
                s.push_str(&p.atom(a));
            }
            s
        };
        match t {
            Term::App(f, a) => {
                let fs = self.app(f);
                let as_ = self.atom(a);
                format!("{fs} {as_}")
            }
            Term::Succ(_) if t.as_numeral().is_some() => self.atom(t),
            Term::Succ(a) => pre(self, "succ", &[a]),
            Term::Add(a, b) => pre(self, "add", &[a, b]),
            Term::El(a) => pre(self, "El", &[a]),
            Term::Proj1(a) => pre(self, "fst", &[a]),
            Term::Proj2(a) => pre(self, "snd", &[a]),
            Term::Id(a, x, y) => pre(self, "Id", &[a, x, y]),
            Term::Refl(a) => pre(self, "refl", &[a]),
            Term::Vec(a, n) => pre(self, "Vec", &[a, n]),
            Term::Cons(..) if t.as_vec_literal().is_some() => self.atom(t),
            Term::Cons(h, tl) => pre(self, "cons", &[h, tl]),
            Term::Fin(n) => pre(self, "Fin", &[n]),
            Term::FSucc(i) => pre(self, "fsucc", &[i]),
            Term::Unbox(a) => pre(self, "unbox", &[a]),
            Term::Ann(x, ty) => pre(self, "the", &[ty, x]),
            Term::BoxType(g, a) => pre(self, &format!("Box[{}]", grade(*g)), &[a]),
            Term::BoxIntro(g, a) => pre(self, &format!("box[{}]", grade(*g)), &[a]),
            Term::NatRec {
                motive,
                scrutinee,
                zero,
                succ,
            } => {
                let m = self.motive(motive, 1);
                let s = self.atom(scrutinee);
                let z = self.expr(zero);
                let pred = self.bind();
                let ih = self.bind();
                let st = self.expr(succ);
                self.unbind(2);
                format!("natrec {m} {s} {{ zero => {z}; succ {pred} {ih} => {st} }}")
            }
            Term::VecRec {
                motive,
                scrutinee,
                nil,
                cons,
            } => {
                let m = self.motive(motive, 2);
                let s = self.atom(scrutinee);
                let n = self.expr(nil);
                let names: Vec<String> = (0..4).map(|_| self.bind()).collect();
                let c = self.expr(cons);
                self.unbind(4);
                format!(
                    "vecrec {m} {s} {{ nil => {n}; cons {} => {c} }}",
                    names.join(" ")
                )
            }
            Term::J {
                motive,
                proof,
                method,
            } => {
                let m = self.motive(motive, 2);
                let p = self.atom(proof);
                let r = self.expr(method);
                format!("jelim {m} {p} {{ refl => {r} }}")
            }
            Term::Lam(_) | Term::Pi(..) | Term::Sigma(..) => format!("({})", self.expr(t)),
            _ => self.atom(t),
        }
    }

    fn motive(&mut self, m: &Term, arity: usize) -> String {
        let names: Vec<String> = (0..arity).map(|_| self.bind()).collect();
        let body = self.expr(m);
        self.unbind(arity);
        format!("(fun {} => {body})", names.join(" "))
    }

    fn atom(&mut self, t: &Term) -> String {
        if let Some(name) = self.global(t) {
            return name;
        }
        if let Some(n) = t.as_numeral() {
            return n.to_string();
        }
        if let Some(items) = t.as_vec_literal() {
            if !items.is_empty() {
                let parts: Vec<String> = items.iter().map(|i| self.expr(i)).collect();
                return format!("[{}]", parts.join(", "));
            }
        }
        match t {
            Term::Var(i) => self.var(*i),
            Term::Nat => "Nat".into(),
            Term::Nil => "nil".into(),
            Term::FZero => "fzero".into(),
            Term::Universe(s) => format!("U[{}]", grade(*s)),
            Term::Pair(a, b) => {
                let a = self.expr(a);
                let b = self.expr(b);
                format!("({a}, {b})")
            }
            _ => format!("({})", self.expr(t)),
        }
    }

    fn bound(&mut self, b: &BoundExpr) -> String {
        use BoundExpr::*;
        match b {
            Const(c) => grade(*c),
            Bot => "0".into(),
            ScalarMul(1, i) => self.var(*i),
            ScalarMul(c, i) => format!("{c}*{}", self.var(*i)),
            Plus(x, y) => {
                let l = self.bound(x);
                let r = self.bound(y);
                if matches!(**y, Plus(..)) {
                    format!("{l} + ({r})")
                } else {
                    format!("{l} + {r}")
                }
            }
            Join(x, y) => {
                let l = self.bound(x);
                let r = self.bound(y);
                format!("max({l}, {r})")
            }
            CeilLog2(x) => format!("log2({})", self.bound(x)),
            NFold(x, y) => {
                let l = self.bound(x);
                let r = self.bound(y);
                format!("fold({l}, {r})")
            }
            SumBelow(limit, body) => {
                let l = self.bound(limit);
                let i = self.bind();
                let bd = self.bound(body);
                self.unbind(1);
                format!("sum({i} < {l}, {bd})")
            }
            Apply(body, arg) => {
                let x = self.bind();
                let bd = self.bound(body);
                self.unbind(1);
                let a = self.expr(arg);
                format!("at({x}. {bd}, {a})")
            }
        }
    }

    /// The first `k` binders of a function type, always named so that a
    /// following bound can refer to them.
    fn spine(&mut self, t: &Term, k: usize) -> String {
        match t {
            Term::Pi(dom, b, cod) if k > 0 => {
                let d = self.expr(dom);
                let x = self.bind();
                let bs = self.bound(b);
                let c = self.spine(cod, k - 1);
                format!("({x} : {d}) ->[{bs}] {c}")
            }
            _ => self.expr(t),
        }
    }
}

pub fn level_names(depth: usize) -> Vec<String> {
    (0..depth).map(|l| format!("x{l}")).collect()
}

/// Closed term as source text.
pub fn pretty(t: &Term) -> String {
    Printer::new(Vec::new(), &[]).expr(t)
}

/// Closed term, naming binders from `hints` where possible.
pub fn pretty_with(t: &Term, hints: &[String]) -> String {
    Printer::new(Vec::new(), hints).expr(t)
}

/// Term under `depth` anonymous binders.
pub fn show_term(t: &Term, depth: usize) -> String {
    Printer::new(level_names(depth), &[]).expr(t)
}

/// Term under named binders, outermost first.
pub fn show_term_in(t: &Term, scope: &[String]) -> String {
    Printer::new(scope.to_vec(), &[]).expr(t)
}

pub fn show_bound(b: &BoundExpr, depth: usize) -> String {
    Printer::new(level_names(depth), &[]).bound(b)
}

pub fn show_bound_in(b: &BoundExpr, scope: &[String]) -> String {
    Printer::new(scope.to_vec(), &[]).bound(b)
}

/// A verdict with refutation witnesses named from `scope`.
pub fn show_verdict(v: &Verdict, scope: &[String]) -> String {
    let Verdict::Refuted { witness, lhs, rhs } = v else {
        return v.to_string();
    };
    let at: Vec<String> = witness
        .iter()
        .map(|(k, val)| match scope.len().checked_sub(k + 1).and_then(|l| scope.get(l)) {
            Some(name) => format!("{name}={val}"),
            None => format!("#{k}={val}"),
        })
        .collect();
    format!("refuted at {} ({lhs} > {rhs})", if at.is_empty() { "()".into() } else { at.join(", ") })
}

/// Compact rendering of a normal form, highest degree first: `3*n+2`.
pub fn show_nf(nf: &BoundNF, scope: &[String]) -> String {
    let alts: Vec<String> = nf.alts().iter().map(|p| show_poly(p, scope)).collect();
    if alts.len() == 1 {
        alts.into_iter().next().unwrap_or_default()
    } else {
        format!("max({})", alts.join(", "))
    }
}

fn show_poly(p: &Poly, scope: &[String]) -> String {
    if p.is_inf() {
        return "inf".into();
    }
    let name = |i: usize| match scope.len().checked_sub(i + 1) {
        Some(l) => scope[l].clone(),
        None => format!("#{i}"),
    };
    let mut terms: Vec<_> = p.terms().collect();
    terms.sort_by(|(a, _), (b, _)| b.len().cmp(&a.len()).then(a.cmp(b)));
    let mut s = String::new();
    for (mono, c) in terms {
        let factors: Vec<String> = mono
            .iter()
            .map(|f| match f {
                Factor::Var(i) => name(*i),
                Factor::Log(i) => format!("log2({})", name(*i)),
                Factor::Opaque(b) => format!("[{}]", show_bound_in(b, scope)),
            })
            .collect();
        let mag = c.unsigned_abs();
        let body = match (mono.is_empty(), mag) {
            (true, _) => mag.to_string(),
            (false, 1) => factors.join("*"),
            (false, _) => format!("{mag}*{}", factors.join("*")),
        };
        if c < 0 {
            s.push('-');
        } else if !s.is_empty() {
            s.push('+');
        }
        s.push_str(&body);
    }
    if s.is_empty() {
        s.push('0');
    }
    if p.denom() != 1 {
        s = format!("({s})/{}", p.denom());
    }
    s
}

impl std::fmt::Display for BoundNF {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&show_nf(self, &[]))
    }
}

/// Names of the binders along a Pi spine, replaying `hints` in the order
/// the elaborator recorded them.
fn spine_names(ty: &Term, hints: &[String]) -> Vec<String> {
    let mut p = Printer::new(Vec::new(), hints);
    let mut names = Vec::new();
    let mut cur = ty;
    while let Term::Pi(dom, bnd, cod) = cur {
        p.expr(dom);
        names.push(p.bind());
        p.bound(bnd);
        cur = cod;
    }
    names
}

/// One-line signature of a function type. Binders are shown only when
/// something later mentions them. `last` replaces the bound of arrow
/// number `lams`, counting from 1.
pub fn show_signature(ty: &Term, hints: &[String], lams: usize, last: Option<&BoundExpr>) -> String {
    if !matches!(ty, Term::Pi(..)) {
        return pretty_with(ty, hints);
    }
    let names = spine_names(ty, hints);
    let mut scope: Vec<String> = Vec::new();
    let mut out = String::new();
    let mut cur = ty;
    while let Term::Pi(dom, b, cod) = cur {
        let i = scope.len();
        let name = names.get(i).cloned().unwrap_or_else(|| format!("x{i}"));
        let mut d = show_term_in(dom, &scope);
        if matches!(**dom, Term::Pi(..) | Term::Sigma(..)) {
            d = format!("({d})");
        }
        if b.has_free_var(0) || cod.has_free_var(0) {
            out.push_str(&format!("({name}:{d})"));
        } else {
            out.push_str(&d);
        }
        scope.push(name);
        let bound = match last {
            Some(l) if i + 1 == lams => l,
            _ => b,
        };
        out.push_str(&format!(" ->[{}] ", show_nf(&bound.normalize(), &scope)));
        cur = cod;
    }
    out.push_str(&show_term_in(cur, &scope));
    out
}

/// A declaration as source text, with its `@expect_bound` line if any.
pub fn pretty_decl(d: &Decl) -> String {
    decl_with(d, &[])
}

fn decl_with(d: &Decl, globals: &[Global]) -> String {
    let lams = {
        let mut n = 0;
        let mut t = &d.body;
        while let Term::Lam(inner) = t {
            n += 1;
            t = inner;
        }
        n
    };
    let mut out = String::new();
    let mut tp = Printer::new(Vec::new(), &d.ty_names);
    tp.globals = globals;
    let ty = tp.spine(&d.ty, if d.expect_bound.is_some() { lams } else { 0 });
    if let Some(b) = &d.expect_bound {
        let mut names = Vec::new();
        let mut cur = &d.ty;
        let mut p = Printer::new(Vec::new(), &d.ty_names);
        for _ in 0..lams {
            let Term::Pi(dom, bnd, cod) = cur else { break };
            p.expr(dom);
            names.push(p.bind());
            p.bound(bnd);
            cur = cod;
        }
        out.push_str(&format!("@expect_bound({})\n", show_bound_in(b, &names)));
    }
    let mut bp = Printer::new(Vec::new(), &d.body_names);
    bp.globals = globals;
    let body = bp.expr(&d.body);
    out.push_str(&format!("def {} : {ty} :=\n  {body}\n", d.name));
    out
}

/// A whole program; `@cost` lists entries that differ from the default model.
pub fn pretty_program(p: &Program) -> String {
    let mut out = String::new();
    let ov = p.cost.overrides();
    if !ov.is_empty() {
        let items: Vec<String> = ov
            .iter()
            .map(|(k, v)| format!("{k} = {}", grade(*v)))
            .collect();
        out.push_str(&format!("@cost({})\n\n", items.join(", ")));
    }
    let mut globals = Vec::new();
    for (i, d) in p.decls.iter().enumerate() {
        if i > 0 {
            out.push('\n');
        }
        out.push_str(&decl_with(d, &globals));
        globals.push(Global {
            reference: d.reference(),
            name: d.name.clone(),
            hints: d.ty_names.len() + d.body_names.len(),
        });
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn numerals_and_literals() {
        assert_eq!(pretty(&Term::Zero), "0");
        assert_eq!(pretty(&Term::numeral(2)), "2");
        assert_eq!(pretty(&Term::succ(Term::Var(0))), "succ #0");
        assert_eq!(
            pretty(&Term::vec_literal([Term::numeral(1), Term::Zero])),
            "[1, 0]"
        );
    }

    #[test]
    fn binders_get_fresh_names() {
        let t = Term::lam(Term::lam(Term::app(Term::Var(1), Term::Var(0))));
        assert_eq!(pretty(&t), "fun x0 x1 => x0 x1");
        let hints = vec!["f".to_string(), "f".to_string()];
        assert_eq!(pretty_with(&t, &hints), "fun f f' => f f'");
    }

    #[test]
    fn arrows() {
        let t = Term::pi(
            Term::Nat,
            BoundExpr::scalar(3, 0) + BoundExpr::konst(2),
            Term::vec(Term::Nat, Term::Var(0)),
        );
        assert_eq!(pretty(&t), "(x0 : Nat) ->[3*x0 + 2] Vec Nat x0");
        assert_eq!(
            pretty(&Term::arrow(Term::Nat, BoundExpr::zero(), Term::Nat)),
            "Nat ->[0] Nat"
        );
    }

    #[test]
    fn nf_display() {
        let b = BoundExpr::scalar(3, 0) + BoundExpr::konst(2);
        assert_eq!(show_nf(&b.normalize(), &["n".into()]), "3*n+2");
        let tri = BoundExpr::sum_below(BoundExpr::var(0), BoundExpr::var(0));
        assert_eq!(show_nf(&tri.normalize(), &["n".into()]), "(n*n-n)/2");
    }
}
