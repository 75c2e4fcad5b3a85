//! Named surface syntax to de Bruijn core terms.

use std::collections::HashMap;

use crate::bound::BoundExpr;
use crate::cost::CostModel;
use crate::syntax::Term;

use super::ast::*;
use super::span::SourceSpan;
use super::ElabError;

/// An elaborated declaration.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Decl {
    pub name: String,
    pub ty: Term,
    pub body: Term,
    /// Expected latent bound, in the scope of the leading binders.
    pub expect_bound: Option<BoundExpr>,
    /// Binder names in printing order, for [`super::pretty`].
    pub ty_names: Vec<String>,
    pub body_names: Vec<String>,
    pub span: SourceSpan,
}

impl Decl {
    /// How a reference to this declaration is inlined.
    pub fn reference(&self) -> Term {
        Term::ann(self.body.clone(), self.ty.clone())
    }

    /// Names of the leading binders of the body.
    pub fn leading_names(&self) -> Vec<String> {
        let mut names = Vec::new();
        let mut t = &self.body;
        while let Term::Lam(inner) = t {
            names.push(
                self.body_names
                    .get(names.len())
                    .cloned()
                    .unwrap_or_else(|| "_".into()),
            );
            t = inner;
        }
        names
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Program {
    pub cost: CostModel,
    pub decls: Vec<Decl>,
}

impl Program {
    pub fn get(&self, name: &str) -> Option<&Decl> {
        self.decls.iter().find(|d| d.name == name)
    }
}

#[derive(Debug, Clone)]
struct Binder {
    name: String,
    /// Whether the binder is known to range over naturals.
    nat: Option<bool>,
}

struct Elab<'g> {
    globals: &'g HashMap<String, Decl>,
    later: &'g HashMap<String, SourceSpan>,
    scope: Vec<Binder>,
    names: Vec<String>,
}

type EResult<T> = Result<T, ElabError>;

fn e(span: &SourceSpan, msg: impl Into<String>) -> ElabError {
    ElabError {
        span: span.clone(),
        message: msg.into(),
    }
}

impl<'g> Elab<'g> {
    fn bind(&mut self, name: &str, nat: Option<bool>) {
        self.scope.push(Binder {
            name: name.to_string(),
            nat,
        });
        self.names.push(name.to_string());
    }

    fn unbind(&mut self, n: usize) {
        self.scope.truncate(self.scope.len() - n);
    }

    fn lookup(&self, name: &str) -> Option<(usize, &Binder)> {
        self.scope
            .iter()
            .rev()
            .enumerate()
            .find(|(_, b)| b.name == name)
    }

    fn expr(&mut self, x: &Expr) -> EResult<Term> {
        Ok(match &x.kind {
            ExprKind::Ident(name) => {
                if let Some((i, _)) = self.lookup(name) {
                    Term::Var(i)
                } else if let Some(d) = self.globals.get(name) {
                    self.names.extend(d.ty_names.iter().cloned());
                    self.names.extend(d.body_names.iter().cloned());
                    d.reference()
                } else if self.later.contains_key(name) {
                    return Err(e(
                        &x.span,
                        format!("`{name}` is used before its definition"),
                    ));
                } else {
                    return Err(e(&x.span, format!("unbound identifier `{name}`")));
                }
            }
            ExprKind::Num(n) => Term::numeral(*n),
            ExprKind::VecLit(items) => Term::vec_literal(
                items
                    .iter()
                    .map(|i| self.expr(i))
                    .collect::<EResult<Vec<_>>>()?,
            ),
            ExprKind::Nat => Term::Nat,
            ExprKind::Zero => Term::Zero,
            ExprKind::Nil => Term::Nil,
            ExprKind::FZero => Term::FZero,
            ExprKind::Universe(s) => Term::Universe(*s),
            ExprKind::Pi(name, dom, bound, cod) => {
                let d = self.expr(dom)?;
                self.bind(name.as_deref().unwrap_or("_"), Some(d == Term::Nat));
                let b = self.bound(bound);
                let c = b.and_then(|b| Ok((b, self.expr(cod)?)));
                self.unbind(1);
                let (b, c) = c?;
                Term::pi(d, b, c)
            }
            ExprKind::Sigma(name, first, second) => {
                let a = self.expr(first)?;
                self.bind(name.as_deref().unwrap_or("_"), Some(a == Term::Nat));
                let b = self.expr(second);
                self.unbind(1);
                Term::sigma(a, b?)
            }
            ExprKind::Pair(a, b) => Term::pair(self.expr(a)?, self.expr(b)?),
            ExprKind::Lam(names, body) => {
                for n in names {
                    self.bind(n, None);
                }
                let b = self.expr(body);
                self.unbind(names.len());
                let mut t = b?;
                for _ in names {
                    t = Term::lam(t);
                }
                t
            }
            ExprKind::App(f, a) => Term::app(self.expr(f)?, self.expr(a)?),
            ExprKind::Prim(p, args) => {
                let mut a = args
                    .iter()
                    .map(|x| self.expr(x))
                    .collect::<EResult<Vec<_>>>()?
                    .into_iter();
                let mut next = || a.next().expect("arity checked by the parser");
                match p {
                    Prim::Succ => Term::succ(next()),
                    Prim::Add => Term::add(next(), next()),
                    Prim::El => Term::el(next()),
                    Prim::Fst => Term::proj1(next()),
                    Prim::Snd => Term::proj2(next()),
                    Prim::Id => Term::id(next(), next(), next()),
                    Prim::Refl => Term::refl(next()),
                    Prim::Vec => Term::vec(next(), next()),
                    Prim::Cons => Term::cons(next(), next()),
                    Prim::Fin => Term::fin(next()),
                    Prim::FSucc => Term::fsucc(next()),
                    Prim::Unbox => Term::unbox(next()),
                    Prim::The => {
                        let ty = next();
                        Term::ann(next(), ty)
                    }
                }
            }
            ExprKind::BoxType(g, a) => Term::box_type(*g, self.expr(a)?),
            ExprKind::BoxIntro(g, a) => Term::box_intro(*g, self.expr(a)?),
            ExprKind::NatRec {
                motive,
                scrutinee,
                zero,
                succ,
            } => {
                let m = self.motive(motive, &[Some(true)])?;
                let s = self.expr(scrutinee)?;
                let z = self.expr(zero)?;
                let st = self.under(&succ.0, &[Some(true), None], &succ.1)?;
                Term::natrec(m, s, z, st)
            }
            ExprKind::VecRec {
                motive,
                scrutinee,
                nil,
                cons,
            } => {
                let m = self.motive(motive, &[Some(true), Some(false)])?;
                let s = self.expr(scrutinee)?;
                let n = self.expr(nil)?;
                let c = self.under(&cons.0, &[Some(true), None, Some(false), None], &cons.1)?;
                Term::vecrec(m, s, n, c)
            }
            ExprKind::J {
                motive,
                proof,
                refl,
            } => {
                let m = self.motive(motive, &[None, Some(false)])?;
                let p = self.expr(proof)?;
                let r = self.expr(refl)?;
                Term::j(m, p, r)
            }
        })
    }

    fn under(&mut self, names: &[String], kinds: &[Option<bool>], body: &Expr) -> EResult<Term> {
        for (n, k) in names.iter().zip(kinds) {
            self.bind(n, *k);
        }
        let t = self.expr(body);
        self.unbind(names.len());
        t
    }

    /// An eliminator motive binds `kinds.len()` variables. A `fun` with that
    /// many binders is taken apart; any other expression is applied to them.
    fn motive(&mut self, m: &Expr, kinds: &[Option<bool>]) -> EResult<Term> {
        let want = kinds.len();
        let mut names = Vec::new();
        let mut cur = m;
        while names.len() < want {
            match &cur.kind {
                ExprKind::Lam(xs, body) if names.len() + xs.len() <= want => {
                    names.extend(xs.iter().cloned());
                    cur = body;
                }
                _ => break,
            }
        }
        if names.len() == want {
            return self.under(&names, kinds, cur);
        }
        let f = self.expr(m)?.shift(want, 0);
        for _ in 0..want {
            self.names.push("_".into());
        }
        Ok(Term::apps(f, (0..want).rev().map(Term::Var)))
    }

    fn size_var(&self, name: &str, span: &SourceSpan) -> EResult<usize> {
        match self.lookup(name) {
            Some((
                _,
                Binder {
                    nat: Some(false), ..
                },
            )) => Err(e(
                span,
                format!("size variable `{name}` must be bound to a natural number"),
            )),
            Some((i, _)) => Ok(i),
            None if self.globals.contains_key(name) => Err(e(
                span,
                format!("`{name}` is a declaration, not a size variable"),
            )),
            None => Err(e(span, format!("unbound size variable `{name}`"))),
        }
    }

    fn bound(&mut self, b: &Bound) -> EResult<BoundExpr> {
        Ok(match &b.kind {
            BoundKind::Const(c) => BoundExpr::Const(*c),
            BoundKind::Scaled(c, x) => BoundExpr::ScalarMul(*c, self.size_var(x, &b.span)?),
            BoundKind::Plus(x, y) => {
                BoundExpr::Plus(Box::new(self.bound(x)?), Box::new(self.bound(y)?))
            }
            BoundKind::Max(x, y) => {
                BoundExpr::Join(Box::new(self.bound(x)?), Box::new(self.bound(y)?))
            }
            BoundKind::Log2(x) => BoundExpr::CeilLog2(Box::new(self.bound(x)?)),
            BoundKind::Fold(x, y) => {
                BoundExpr::NFold(Box::new(self.bound(x)?), Box::new(self.bound(y)?))
            }
            BoundKind::Sum(i, limit, body) => {
                let l = self.bound(limit)?;
                self.bind(i, Some(true));
                let bd = self.bound(body);
                self.unbind(1);
                BoundExpr::SumBelow(Box::new(l), Box::new(bd?))
            }
            BoundKind::At(x, body, t) => {
                self.bind(x, Some(true));
                let bd = self.bound(body);
                self.unbind(1);
                let bd = bd?;
                BoundExpr::Apply(Box::new(bd), Box::new(self.expr(t)?))
            }
        })
    }
}

/// Elaborate a parsed file. Declarations may only refer to earlier ones;
/// `@cost` entries are applied on top of `base`.
pub fn elaborate(file: &SurfaceFile, base: &CostModel) -> Result<Program, ElabError> {
    let mut cost = *base;
    for o in &file.cost {
        cost.set(&o.key, o.value)
            .map_err(|err| e(&o.span, err.to_string()))?;
    }
    let mut later: HashMap<String, SourceSpan> = HashMap::new();
    for d in &file.decls {
        if let Some(prev) = later.insert(d.name.clone(), d.span.clone()) {
            return Err(e(
                &d.span,
                format!("`{}` is already defined at {prev}", d.name),
            ));
        }
    }
    let mut globals: HashMap<String, Decl> = HashMap::new();
    let mut decls = Vec::new();
    for d in &file.decls {
        later.remove(&d.name);
        let decl = elaborate_decl(d, &globals, &later)?;
        globals.insert(decl.name.clone(), decl.clone());
        decls.push(decl);
    }
    Ok(Program { cost, decls })
}

fn elaborate_decl(
    d: &SurfaceDecl,
    globals: &HashMap<String, Decl>,
    later: &HashMap<String, SourceSpan>,
) -> Result<Decl, ElabError> {
    let mut el = Elab {
        globals,
        later,
        scope: Vec::new(),
        names: Vec::new(),
    };
    let ty = el.expr(&d.ty)?;
    let ty_names = std::mem::take(&mut el.names);
    let body = el.expr(&d.body)?;
    let body_names = std::mem::take(&mut el.names);

    let expect_bound = match &d.expect_bound {
        None => None,
        Some(b) => {
            // scope: the type's binders under the body's leading lambdas
            let mut lams = 0;
            let mut t = &body;
            while let Term::Lam(inner) = t {
                lams += 1;
                t = inner;
            }
            let mut cur = &d.ty;
            for _ in 0..lams {
                match &cur.kind {
                    ExprKind::Pi(name, dom, _, cod) => {
                        let dom_nat = matches!(dom.kind, ExprKind::Nat);
                        el.bind(name.as_deref().unwrap_or("_"), Some(dom_nat));
                        cur = cod;
                    }
                    _ => break,
                }
            }
            Some(el.bound(b)?)
        }
    };
    Ok(Decl {
        name: d.name.clone(),
        ty,
        body,
        expect_bound,
        ty_names,
        body_names,
        span: d.span.clone(),
    })
}

/// Elaborate a closed expression against earlier declarations.
pub fn elaborate_expr(x: &Expr, program: &Program) -> Result<Term, ElabError> {
    let globals: HashMap<String, Decl> = program
        .decls
        .iter()
        .map(|d| (d.name.clone(), d.clone()))
        .collect();
    let later = HashMap::new();
    let mut el = Elab {
        globals: &globals,
        later: &later,
        scope: Vec::new(),
        names: Vec::new(),
    };
    el.expr(x)
}

#[cfg(test)]
mod tests {
    use super::super::parser::parse_file;
    use super::*;

    fn prog(src: &str) -> Result<Program, ElabError> {
        elaborate(&parse_file("t", src).unwrap(), &CostModel::default())
    }

    #[test]
    fn identity_function() {
        let p = prog("def id : (x : Nat) ->[0] Nat := fun x => x").unwrap();
        assert_eq!(p.decls[0].body, Term::lam(Term::Var(0)));
    }

    #[test]
    fn sum_bound_resolves_outer_binder() {
        let p = prog(
            "def sum : (n : Nat) ->[0] (v : Vec Nat n) ->[3*n + 2] Nat := \
             fun n v => vecrec (fun m w => Nat) v { nil => zero; cons m a w ih => add a ih }",
        )
        .unwrap();
        let Term::Pi(_, _, cod) = &p.decls[0].ty else {
            panic!()
        };
        let Term::Pi(dom, b, _) = &**cod else {
            panic!()
        };
        assert_eq!(**dom, Term::vec(Term::Nat, Term::Var(0)));
        assert_eq!(
            **b,
            BoundExpr::Plus(
                Box::new(BoundExpr::ScalarMul(3, 1)),
                Box::new(BoundExpr::konst(2))
            )
        );
        assert_eq!(p.decls[0].leading_names(), vec!["n", "v"]);
    }

    #[test]
    fn non_nat_size_variable_rejected() {
        let err =
            prog("def f : (n : Nat) ->[0] (v : Vec Nat n) ->[3*v + 2] Nat := fun n v => zero")
                .unwrap_err();
        assert!(err.message.contains("`v`"), "{}", err.message);
    }

    #[test]
    fn scoping_errors() {
        assert!(prog("def a : Nat := b\ndef b : Nat := zero")
            .unwrap_err()
            .message
            .contains("before"));
        assert!(prog("def a : Nat := c")
            .unwrap_err()
            .message
            .contains("unbound"));
        assert!(prog("def a : Nat := 1\ndef a : Nat := 2").is_err());
        assert!(prog("@cost(delta_bogus = 1)\ndef a : Nat := 1").is_err());
    }

    #[test]
    fn references_inline_with_annotation() {
        let p = prog("def one : Nat := 1\ndef two : Nat := succ one").unwrap();
        assert_eq!(
            p.decls[1].body,
            Term::succ(Term::ann(Term::numeral(1), Term::Nat))
        );
    }

    #[test]
    fn eta_motive() {
        let p = prog("def P : (n : Nat) ->[0] U := fun n => Nat\ndef z : Nat := natrec P 2 { zero => 0; succ m ih => ih }")
            .unwrap();
        let Term::NatRec { motive, .. } = &p.decls[1].body else {
            panic!()
        };
        assert!(matches!(**motive, Term::App(_, ref v) if **v == Term::Var(0)));
    }
}
