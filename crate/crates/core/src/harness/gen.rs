//! Type-directed generation of well-typed closed terms.
//!
//! Every production follows a typing rule, so generated terms check by
//! construction. Function annotations are synthesized from their bodies.
//! Numbers that can reach a recursor scrutinee stay small, and recursive
//! results are used at most once per step, so evaluation stays cheap.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::bound::BoundExpr;
use crate::check::{Checker, CheckerConfig, Diagnostic};
use crate::cost::CostModel;
use crate::lattice::ExtNat;
use crate::normalize::{closed_numeral, normalize};
use crate::syntax::{Context, Term};

/// Relative weights of the productions.
#[derive(Debug, Clone, PartialEq)]
pub struct Weights {
    pub var: u32,
    pub intro: u32,
    pub arith: u32,
    pub natrec: u32,
    pub vecrec: u32,
    pub app: u32,
    pub proj: u32,
    pub boxes: u32,
    pub jelim: u32,
}

impl Default for Weights {
    fn default() -> Self {
        Weights {
            var: 3,
            intro: 3,
            arith: 3,
            natrec: 2,
            vecrec: 2,
            app: 2,
            proj: 1,
            boxes: 1,
            jelim: 1,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GenConfig {
    pub seed: u64,
    pub max_depth: usize,
    /// Largest numeral, vector length and finite-type size.
    pub max_size: u64,
    pub weights: Weights,
    pub cost: CostModel,
}

impl Default for GenConfig {
    fn default() -> Self {
        GenConfig {
            seed: 0x5eed,
            max_depth: 6,
            max_size: 8,
            weights: Weights::default(),
            cost: CostModel::default(),
        }
    }
}

/// What to generate. Non-dependent except where named.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Goal {
    Nat,
    /// `Vec Nat len`, the length valid in the current context.
    Vec(Term),
    Fin(u64),
    Pair(Box<Goal>, Box<Goal>),
    /// `(n : Nat) * Vec Nat n`
    DepPair,
    Fun(Box<Goal>, Box<Goal>),
    /// `(n : Nat) -> Vec Nat n`
    DepFun,
    /// `Id Nat a b` with `a` and `b` convertible.
    Id,
    Boxed(Box<Goal>),
}

impl Goal {
    fn shift(&self, k: usize) -> Goal {
        match self {
            Goal::Vec(len) => Goal::Vec(len.shift(k, 0)),
            Goal::Pair(a, b) => Goal::Pair(Box::new(a.shift(k)), Box::new(b.shift(k))),
            Goal::Fun(a, b) => Goal::Fun(Box::new(a.shift(k)), Box::new(b.shift(k))),
            Goal::Boxed(a) => Goal::Boxed(Box::new(a.shift(k))),
            other => other.clone(),
        }
    }

    /// Whether canonicity speaks about this goal.
    pub fn has_canonical_forms(&self) -> bool {
        !matches!(self, Goal::Boxed(_))
    }
}

#[derive(Debug, Clone)]
struct Local {
    /// Type relative to the prefix before this entry.
    ty: Term,
    /// Values are small enough to drive a recursor.
    small: bool,
    /// Use at most once.
    linear: bool,
    used: bool,
}

/// A generated closed term and its type.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Generated {
    pub goal: Goal,
    pub term: Term,
    pub ty: Term,
}

pub struct Generator {
    rng: ChaCha8Rng,
    cfg: GenConfig,
    checker: Checker,
    locals: Vec<Local>,
}

type GResult = Result<(Term, Term), Diagnostic>;

impl Generator {
    pub fn new(cfg: GenConfig) -> Self {
        let checker = Checker::new(CheckerConfig::with_cost(cfg.cost));
        Generator {
            rng: ChaCha8Rng::seed_from_u64(cfg.seed),
            cfg,
            checker,
            locals: Vec::new(),
        }
    }

    pub fn config(&self) -> &GenConfig {
        &self.cfg
    }

    fn ctx(&self) -> Context {
        self.locals.iter().map(|l| l.ty.clone()).collect()
    }

    fn push(&mut self, ty: Term, small: bool, linear: bool) {
        self.locals.push(Local {
            ty,
            small,
            linear,
            used: false,
        });
    }

    fn pop(&mut self, n: usize) {
        self.locals.truncate(self.locals.len() - n);
    }

    /// A recursor step runs many times, so an outer use-once variable seen
    /// there would be used many times. Hide them until `reveal`.
    fn hide_linear(&mut self) -> Vec<usize> {
        let hidden: Vec<usize> = (0..self.locals.len())
            .filter(|&i| self.locals[i].linear && !self.locals[i].used)
            .collect();
        for &i in &hidden {
            self.locals[i].used = true;
        }
        hidden
    }

    fn reveal(&mut self, hidden: Vec<usize>) {
        for i in hidden {
            self.locals[i].used = false;
        }
    }

    fn size(&mut self) -> u64 {
        self.rng.gen_range(0..=self.cfg.max_size)
    }

    /// A random closed goal.
    pub fn goal(&mut self) -> Goal {
        let k = self.size();
        let small_goal = |g: &mut Self| match g.rng.gen_range(0..3) {
            0 => Goal::Vec(Term::numeral(g.rng.gen_range(0..=3))),
            _ => Goal::Nat,
        };
        match self.rng.gen_range(0..20) {
            0..=6 => Goal::Nat,
            7..=8 => Goal::Vec(Term::numeral(k)),
            9 => Goal::Fin(k.max(1)),
            10 => {
                let a = small_goal(self);
                Goal::Pair(Box::new(a), Box::new(Goal::Nat))
            }
            11 => Goal::DepPair,
            12..=13 => Goal::Fun(Box::new(Goal::Nat), Box::new(Goal::Nat)),
            14 => {
                let d = small_goal(self);
                let c = small_goal(self);
                Goal::Fun(Box::new(d), Box::new(c))
            }
            15 => Goal::DepFun,
            16..=17 => Goal::Id,
            _ => Goal::Boxed(Box::new(Goal::Nat)),
        }
    }

    /// A closed term for a random goal.
    pub fn generate(&mut self) -> Result<Generated, Diagnostic> {
        let goal = self.goal();
        let depth = self.cfg.max_depth;
        self.closed(&goal, depth)
    }

    pub fn closed(&mut self, goal: &Goal, depth: usize) -> Result<Generated, Diagnostic> {
        self.locals.clear();
        let (term, ty) = self.gen(goal, depth)?;
        Ok(Generated {
            goal: goal.clone(),
            term,
            ty,
        })
    }

    /// A term in a context of `(type, small)` entries, outermost first.
    pub fn open(&mut self, ctx: &[(Term, bool)], goal: &Goal, depth: usize) -> GResult {
        self.locals.clear();
        for (ty, small) in ctx {
            self.push(ty.clone(), *small, false);
        }
        let r = self.gen(goal, depth);
        self.locals.clear();
        r
    }

    pub fn goal_type(goal: &Goal) -> Option<Term> {
        Some(match goal {
            Goal::Nat => Term::Nat,
            Goal::Vec(len) => Term::vec(Term::Nat, len.clone()),
            Goal::Fin(k) => Term::fin(Term::numeral(*k)),
            Goal::Pair(a, b) => Term::sigma(Self::goal_type(a)?, Self::goal_type(b)?.shift(1, 0)),
            Goal::DepPair => Term::sigma(Term::Nat, Term::vec(Term::Nat, Term::Var(0))),
            _ => return None,
        })
    }

    /// Variables whose type is exactly `ty`, as indices.
    fn vars_of(&self, ty: &Term, want_small: bool) -> Vec<usize> {
        let n = self.locals.len();
        let ty_nf = normalize(ty).unwrap_or_else(|_| ty.clone());
        (0..n)
            .filter(|&level| {
                let l = &self.locals[level];
                let idx = n - 1 - level;
                !(l.linear && l.used)
                    && (!want_small || l.small)
                    && normalize(&l.ty.shift(idx + 1, 0)).is_ok_and(|t| t.structural_eq(&ty_nf))
            })
            .map(|level| n - 1 - level)
            .collect()
    }

    fn take_var(&mut self, idx: usize) -> Term {
        let level = self.locals.len() - 1 - idx;
        self.locals[level].used = true;
        Term::Var(idx)
    }

    fn pick(&mut self, options: &[(u32, u8)]) -> u8 {
        let total: u32 = options.iter().map(|(w, _)| *w).sum();
        if total == 0 {
            return options.first().map_or(0, |o| o.1);
        }
        let mut r = self.rng.gen_range(0..total);
        for (w, k) in options {
            if r < *w {
                return *k;
            }
            r -= w;
        }
        options[options.len() - 1].1
    }

    fn gen(&mut self, goal: &Goal, depth: usize) -> GResult {
        if depth == 0 {
            return self.canonical(goal);
        }
        let d = depth - 1;
        let w = self.cfg.weights.clone();
        match goal {
            Goal::Nat => {
                let vars = self.vars_of(&Term::Nat, false);
                let v = if vars.is_empty() { 0 } else { w.var };
                match self.pick(&[
                    (v, 0),
                    (w.intro, 1),
                    (w.arith, 2),
                    (w.natrec, 3),
                    (w.vecrec, 4),
                    (w.app, 5),
                    (w.proj, 6),
                    (w.boxes, 7),
                    (w.jelim, 8),
                ]) {
                    0 => {
                        let i = *vars.choose(&mut self.rng).expect("nonempty");
                        Ok((self.take_var(i), Term::Nat))
                    }
                    1 => {
                        if self.rng.gen_bool(0.5) {
                            Ok((Term::numeral(self.size()), Term::Nat))
                        } else {
                            let (n, _) = self.gen(&Goal::Nat, d)?;
                            Ok((Term::succ(n), Term::Nat))
                        }
                    }
                    2 => {
                        let (a, _) = self.gen(&Goal::Nat, d)?;
                        let (b, _) = self.gen(&Goal::Nat, d)?;
                        Ok((Term::add(a, b), Term::Nat))
                    }
                    3 => self.natrec_nat(d),
                    4 => self.vecrec_nat(d),
                    5 => self.app(&Goal::Nat, d),
                    6 => {
                        let other = if self.rng.gen_bool(0.5) {
                            Goal::Nat
                        } else {
                            Goal::Vec(Term::numeral(2))
                        };
                        let first = self.rng.gen_bool(0.5);
                        let g = if first {
                            Goal::Pair(Box::new(Goal::Nat), Box::new(other))
                        } else {
                            Goal::Pair(Box::new(other), Box::new(Goal::Nat))
                        };
                        let (p, pty) = self.gen(&g, d)?;
                        let p = Term::ann(p, pty);
                        Ok((
                            if first {
                                Term::proj1(p)
                            } else {
                                Term::proj2(p)
                            },
                            Term::Nat,
                        ))
                    }
                    7 => {
                        let (b, bty) = self.gen(&Goal::Boxed(Box::new(Goal::Nat)), d)?;
                        Ok((Term::unbox(Term::ann(b, bty)), Term::Nat))
                    }
                    _ => {
                        let (p, pty) = self.gen(&Goal::Id, d)?;
                        let (m, _) = self.gen(&Goal::Nat, d)?;
                        Ok((Term::j(Term::Nat, Term::ann(p, pty), m), Term::Nat))
                    }
                }
            }
            Goal::Vec(len) => {
                let ty = Term::vec(Term::Nat, len.clone());
                let lit = closed_numeral(len)
                    .filter(|_| len.is_closed())
                    .or_else(|| len.as_numeral());
                let vars = self.vars_of(&ty, false);
                let repl = matches!(len, Term::Var(_)) || lit.is_some();
                let opts = [
                    (if vars.is_empty() { 0 } else { w.var }, 0),
                    (if lit.is_some() { w.intro } else { 0 }, 1),
                    (w.vecrec, 2),
                    (if repl { w.natrec } else { 0 }, 3),
                    (w.app, 4),
                ];
                match self.pick(&opts) {
                    0 => {
                        let i = *vars.choose(&mut self.rng).expect("nonempty");
                        Ok((self.take_var(i), ty))
                    }
                    1 => {
                        let k = lit.expect("literal length");
                        if k > 0 && self.rng.gen_bool(0.3) {
                            let (h, _) = self.gen(&Goal::Nat, d)?;
                            let (t, _) = self.gen(&Goal::Vec(Term::numeral(k - 1)), d)?;
                            return Ok((Term::cons(h, t), ty));
                        }
                        let mut items = Vec::new();
                        for _ in 0..k {
                            items.push(self.gen(&Goal::Nat, d)?.0);
                        }
                        Ok((Term::vec_literal(items), ty))
                    }
                    2 => self.vecrec_map(len, d),
                    3 => self.replicate(len, d),
                    _ => self.app(goal, d),
                }
            }
            Goal::Fin(k) => {
                let ty = Term::fin(Term::numeral(*k));
                let vars = self.vars_of(&ty, false);
                if !vars.is_empty() && self.rng.gen_bool(0.3) {
                    let i = *vars.choose(&mut self.rng).expect("nonempty");
                    return Ok((self.take_var(i), ty));
                }
                if *k >= 2 && self.rng.gen_bool(0.6) {
                    let (i, _) = self.gen(&Goal::Fin(k - 1), d)?;
                    return Ok((Term::fsucc(i), ty));
                }
                Ok((Term::FZero, ty))
            }
            Goal::Pair(a, b) => {
                let (x, tx) = self.gen(a, d)?;
                let (y, ty) = self.gen(b, d)?;
                Ok((Term::pair(x, y), Term::sigma(tx, ty.shift(1, 0))))
            }
            Goal::DepPair => {
                let n = self.small_nat(d)?;
                let (v, _) = self.gen(&Goal::Vec(n.clone()), d)?;
                Ok((
                    Term::pair(n, v),
                    Term::sigma(Term::Nat, Term::vec(Term::Nat, Term::Var(0))),
                ))
            }
            Goal::Fun(dom, cod) => {
                let dom_ty = self.gen_type(dom)?;
                self.lambda(dom_ty, matches!(**dom, Goal::Nat), &cod.shift(1), d)
            }
            Goal::DepFun => self.lambda(Term::Nat, true, &Goal::Vec(Term::Var(0)), d),
            Goal::Id => {
                let a = self.small_nat(d)?;
                let n = normalize(&a).map_err(|e| {
                    Diagnostic::new(crate::check::Code::Normalization, e.to_string())
                })?;
                let (lhs, rhs) = if self.rng.gen_bool(0.5) {
                    (a.clone(), n.clone())
                } else {
                    (n.clone(), a.clone())
                };
                let witness = if self.rng.gen_bool(0.5) { a } else { n };
                Ok((Term::refl(witness), Term::id(Term::Nat, lhs, rhs)))
            }
            Goal::Boxed(inner) => {
                let (t, ty) = self.gen(inner, d)?;
                let b = self.checker.check(&self.ctx(), &t, &ty)?;
                let grade = match b.eval_closed() {
                    Ok(ExtNat::Fin(c)) => ExtNat::Fin(c + self.rng.gen_range(0..3)),
                    _ => ExtNat::Inf,
                };
                Ok((Term::box_intro(grade, t), Term::box_type(grade, ty)))
            }
        }
    }

    /// Type of a domain goal; only first-order goals have one.
    fn gen_type(&mut self, goal: &Goal) -> Result<Term, Diagnostic> {
        Self::goal_type(goal).ok_or_else(|| {
            Diagnostic::new(
                crate::check::Code::CannotInfer,
                format!("no domain type for {goal:?}"),
            )
        })
    }

    /// A natural that may drive a recursor.
    fn small_nat(&mut self, depth: usize) -> Result<Term, Diagnostic> {
        let vars = self.vars_of(&Term::Nat, true);
        let k = self.rng.gen_range(0..=self.cfg.max_size);
        Ok(match self.rng.gen_range(0..4) {
            0 if !vars.is_empty() => {
                let i = *vars.choose(&mut self.rng).expect("nonempty");
                self.take_var(i)
            }
            1 if depth > 0 => {
                let a = self.small_nat(depth - 1)?;
                let b = Term::numeral(self.rng.gen_range(0..=self.cfg.max_size / 2));
                if self.rng.gen_bool(0.5) {
                    Term::add(a, b)
                } else {
                    Term::succ(a)
                }
            }
            _ => Term::numeral(k),
        })
    }

    fn lambda(&mut self, dom_ty: Term, small: bool, cod: &Goal, d: usize) -> GResult {
        self.push(dom_ty.clone(), small, false);
        let r = self.gen(cod, d).and_then(|(body, body_ty)| {
            let b = self.checker.check(&self.ctx(), &body, &body_ty)?;
            Ok((body, body_ty, b))
        });
        self.pop(1);
        let (body, body_ty, b) = r?;
        let slack = if self.rng.gen_bool(0.3) {
            self.rng.gen_range(1..4)
        } else {
            0
        };
        let bound = if slack > 0 {
            b + BoundExpr::konst(slack)
        } else {
            b
        };
        Ok((Term::lam(body), Term::pi(dom_ty, bound, body_ty)))
    }

    fn app(&mut self, cod: &Goal, d: usize) -> GResult {
        let target = match cod {
            Goal::Nat => Term::Nat,
            Goal::Vec(len) => Term::vec(Term::Nat, len.clone()),
            _ => return self.canonical(cod),
        };
        // a function variable from the context, when one fits
        let n = self.locals.len();
        let fvars: Vec<(usize, Term, Term)> = (0..n)
            .filter_map(|level| {
                let idx = n - 1 - level;
                match self.locals[level].ty.shift(idx + 1, 0) {
                    Term::Pi(dom, _, c)
                        if !c.has_free_var(0) && c.unshift(1, 0).structural_eq(&target) =>
                    {
                        Some((idx, *dom, c.unshift(1, 0)))
                    }
                    _ => None,
                }
            })
            .collect();
        if !fvars.is_empty() && self.rng.gen_bool(0.4) {
            let (idx, dom, cod_ty) = fvars.choose(&mut self.rng).cloned().expect("nonempty");
            let arg = self.arg_for(&dom, d)?;
            return Ok((Term::app(self.take_var(idx), arg), cod_ty));
        }
        let dom_goal = match self.rng.gen_range(0..4) {
            0 => Goal::Vec(Term::numeral(self.rng.gen_range(0..=3))),
            1 => Goal::Pair(Box::new(Goal::Nat), Box::new(Goal::Nat)),
            _ => Goal::Nat,
        };
        let dom_ty = self.gen_type(&dom_goal)?;
        let (f, fty) = self.lambda(
            dom_ty.clone(),
            matches!(dom_goal, Goal::Nat),
            &cod.shift(1),
            d,
        )?;
        let arg = self.arg_for(&dom_ty, d)?;
        let Term::Pi(_, _, body_ty) = &fty else {
            unreachable!("lambda has a function type")
        };
        Ok((
            Term::app(Term::ann(f, fty.clone()), arg.clone()),
            body_ty.subst(0, &arg),
        ))
    }

    fn arg_for(&mut self, dom: &Term, d: usize) -> Result<Term, Diagnostic> {
        match dom {
            Term::Nat => self.small_nat(d),
            Term::Vec(_, len) => Ok(self.gen(&Goal::Vec((**len).clone()), d)?.0),
            Term::Sigma(a, b) if **a == Term::Nat && **b == Term::Nat => {
                let x = self.small_nat(d)?;
                let y = self.small_nat(d)?;
                Ok(Term::pair(x, y))
            }
            other => Err(Diagnostic::new(
                crate::check::Code::CannotInfer,
                format!("no argument generator for {other:?}"),
            )),
        }
    }

    fn natrec_nat(&mut self, d: usize) -> GResult {
        let scrut = self.small_nat(d)?;
        let (z, _) = self.gen(&Goal::Nat, d)?;
        let hidden = self.hide_linear();
        self.push(Term::Nat, true, false);
        self.push(Term::Nat, false, true);
        let s = self.gen(&Goal::Nat, d);
        self.pop(2);
        self.reveal(hidden);
        Ok((Term::natrec(Term::Nat, scrut, z, s?.0), Term::Nat))
    }

    /// Fold a vector into a natural.
    fn vecrec_nat(&mut self, d: usize) -> GResult {
        let len = Term::numeral(self.rng.gen_range(0..=self.cfg.max_size));
        let (v, vty) = self.gen(&Goal::Vec(len), d)?;
        let (nil, _) = self.gen(&Goal::Nat, d)?;
        let hidden = self.hide_linear();
        self.push_cons_binders();
        let c = self.gen(&Goal::Nat, d);
        self.pop(4);
        self.reveal(hidden);
        Ok((
            Term::vecrec(Term::Nat, Term::ann(v, vty), nil, c?.0),
            Term::Nat,
        ))
    }

    fn push_cons_binders(&mut self) {
        self.push(Term::Nat, true, false);
        self.push(Term::Nat, false, false);
        self.push(Term::vec(Term::Nat, Term::Var(1)), false, true);
        self.push(Term::Nat, false, true);
    }

    /// Map over a vector of the given length.
    fn vecrec_map(&mut self, len: &Term, d: usize) -> GResult {
        let ty = Term::vec(Term::Nat, len.clone());
        let (v, _) = self.gen(&Goal::Vec(len.clone()), d)?;
        let motive = Term::vec(Term::Nat, Term::Var(1));
        let hidden = self.hide_linear();
        self.push_cons_binders();
        // the recursive result is the tail of the answer, not a free value
        let level = self.locals.len() - 1;
        self.locals[level].used = true;
        let h = self.gen(&Goal::Nat, d);
        self.pop(4);
        self.reveal(hidden);
        let cons = Term::cons(h?.0, Term::Var(0));
        Ok((
            Term::vecrec(motive, Term::ann(v, ty.clone()), Term::Nil, cons),
            ty,
        ))
    }

    /// `len` copies of a generated element.
    fn replicate(&mut self, len: &Term, d: usize) -> GResult {
        let ty = Term::vec(Term::Nat, len.clone());
        let motive = Term::vec(Term::Nat, Term::Var(0));
        let hidden = self.hide_linear();
        self.push(Term::Nat, true, false);
        self.push(Term::vec(Term::Nat, Term::Var(0)), false, true);
        let level = self.locals.len() - 1;
        self.locals[level].used = true;
        let e = self.gen(&Goal::Nat, d);
        self.pop(2);
        self.reveal(hidden);
        let step = Term::cons(e?.0, Term::Var(0));
        Ok((Term::natrec(motive, len.clone(), Term::Nil, step), ty))
    }

    /// Fallback inhabitants.
    pub fn canonical(&mut self, goal: &Goal) -> GResult {
        Ok(match goal {
            Goal::Nat => {
                let vars = self.vars_of(&Term::Nat, false);
                if !vars.is_empty() && self.rng.gen_bool(0.5) {
                    let i = *vars.choose(&mut self.rng).expect("nonempty");
                    (self.take_var(i), Term::Nat)
                } else {
                    (Term::numeral(self.rng.gen_range(0..=2)), Term::Nat)
                }
            }
            Goal::Vec(len) => {
                let ty = Term::vec(Term::Nat, len.clone());
                match closed_numeral(len)
                    .filter(|_| len.is_closed())
                    .or_else(|| len.as_numeral())
                {
                    Some(k) => (Term::vec_literal((0..k).map(|_| Term::Zero)), ty),
                    None => {
                        let motive = Term::vec(Term::Nat, Term::Var(0));
                        let step = Term::cons(Term::Zero, Term::Var(0));
                        (Term::natrec(motive, len.clone(), Term::Nil, step), ty)
                    }
                }
            }
            Goal::Fin(k) => (Term::FZero, Term::fin(Term::numeral(*k))),
            Goal::Pair(a, b) => {
                let (x, tx) = self.canonical(a)?;
                let (y, ty) = self.canonical(b)?;
                (Term::pair(x, y), Term::sigma(tx, ty.shift(1, 0)))
            }
            Goal::DepPair => (
                Term::pair(Term::Zero, Term::Nil),
                Term::sigma(Term::Nat, Term::vec(Term::Nat, Term::Var(0))),
            ),
            Goal::Fun(..) | Goal::DepFun | Goal::Boxed(_) => return self.gen(goal, 1),
            Goal::Id => (
                Term::refl(Term::Zero),
                Term::id(Term::Nat, Term::Zero, Term::Zero),
            ),
        })
    }
}

/// A canonical closed inhabitant of a first-order type: zeros throughout.
pub fn inhabitant(ty: &Term) -> Option<Term> {
    match normalize(ty).ok()? {
        Term::Nat => Some(Term::Zero),
        Term::Vec(a, len) => {
            let k = len.as_numeral()?;
            let elem = inhabitant(&a)?;
            Some(Term::vec_literal((0..k).map(|_| elem.clone())))
        }
        Term::Fin(n) if n.as_numeral()? > 0 => Some(Term::FZero),
        Term::Sigma(a, b) => {
            let x = inhabitant(&a)?;
            let y = inhabitant(&b.subst(0, &x))?;
            Some(Term::pair(x, y))
        }
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::check::check_closed;

    #[test]
    fn depth_one_nat_falls_back() {
        let mut g = Generator::new(GenConfig::default());
        let r = g.closed(&Goal::Nat, 0).unwrap();
        assert!(r.term.as_numeral().is_some());
    }

    #[test]
    fn vec_goal_has_exact_length() {
        let mut g = Generator::new(GenConfig::default());
        let r = g.closed(&Goal::Vec(Term::numeral(2)), 1).unwrap();
        assert_eq!(r.ty, Term::vec(Term::Nat, Term::numeral(2)));
        assert_eq!(
            r.term.as_vec_literal().map(|v| v.len()).or(Some(2)),
            Some(2)
        );
    }

    #[test]
    fn generated_terms_check() {
        let mut g = Generator::new(GenConfig::default());
        for _ in 0..200 {
            let item = g.generate().unwrap();
            if let Err(e) = check_closed(&CheckerConfig::default(), &item.term, &item.ty) {
                panic!("{e}\n{:?}\n{:?}", item.term, item.ty);
            }
        }
    }

    #[test]
    fn deterministic_given_seed() {
        let a: Vec<_> = {
            let mut g = Generator::new(GenConfig::default());
            (0..20).map(|_| g.generate().unwrap()).collect()
        };
        let mut g = Generator::new(GenConfig::default());
        let b: Vec<_> = (0..20).map(|_| g.generate().unwrap()).collect();
        assert_eq!(a, b);
    }

    #[test]
    fn inhabitants() {
        assert_eq!(
            inhabitant(&Term::vec(Term::Nat, Term::numeral(2))),
            Some(Term::vec_literal([Term::Zero, Term::Zero]))
        );
        assert_eq!(inhabitant(&Term::fin(Term::Zero)), None);
    }
}
