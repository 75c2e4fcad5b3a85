//! Bidirectional type checking with bound synthesis.
//!
//! Every judgment returns the synthesized cost bound alongside the type.
//! Conversion is decided by comparing normal forms from
//! [`crate::normalize`]; bound annotations on function types are compared by
//! bound normal form.

pub mod diagnostics;

use serde::Serialize;

use crate::bound::{bound_leq_with, size_of_term, BoundExpr, DominanceConfig, Verdict};
use crate::cost::CostModel;
use crate::frontend::pretty::{level_names, show_nf, show_term, show_verdict};
use crate::lattice::{ExtNat, Lattice};
use crate::normalize::{self, Normalizer};
use crate::syntax::{Context, Term};

pub use diagnostics::{Code, Diagnostic, Severity};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckerConfig {
    /// Ambient budget; exceeding it only warns.
    pub budget: ExtNat,
    pub cost: CostModel,
    /// Each size variable is sampled in `0..sample_range` when dominance
    /// cannot be proved symbolically.
    pub sample_range: u64,
    /// Treat unproved (empirical) dominance as an error.
    pub strict: bool,
}

impl Default for CheckerConfig {
    fn default() -> Self {
        CheckerConfig {
            budget: ExtNat::Inf,
            cost: CostModel::default(),
            sample_range: DominanceConfig::default().sample_range,
            strict: false,
        }
    }
}

impl CheckerConfig {
    pub fn with_cost(cost: CostModel) -> Self {
        CheckerConfig {
            cost,
            ..CheckerConfig::default()
        }
    }

    fn dominance(&self) -> DominanceConfig {
        DominanceConfig {
            sample_range: self.sample_range.max(1),
            ..DominanceConfig::default()
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TypingResult {
    pub ty: Term,
    pub bound: BoundExpr,
}

/// Result of checking a definition against its declared type.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DeclCheck {
    /// Bound of the definition itself (`⊥` for a function).
    pub bound: BoundExpr,
    /// Types of the leading lambda binders, outermost first.
    pub binders: Context,
    /// Bound synthesized for the body under all leading lambdas.
    pub latent: BoundExpr,
    /// The annotation on the innermost function type, if any.
    pub declared: Option<BoundExpr>,
    /// How the latent bound compares to the declared one.
    pub verdict: Option<Verdict>,
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckSummary {
    pub errors: usize,
    pub warnings: usize,
}

type CResult<T> = Result<T, Diagnostic>;

fn err(code: Code, msg: impl Into<String>) -> Diagnostic {
    Diagnostic::new(code, msg)
}

pub struct Checker {
    cfg: CheckerConfig,
    warnings: Vec<Diagnostic>,
}

impl Checker {
    pub fn new(cfg: CheckerConfig) -> Self {
        Checker {
            cfg,
            warnings: Vec::new(),
        }
    }

    pub fn config(&self) -> &CheckerConfig {
        &self.cfg
    }

    pub fn warnings(&self) -> &[Diagnostic] {
        &self.warnings
    }

    pub fn take_warnings(&mut self) -> Vec<Diagnostic> {
        std::mem::take(&mut self.warnings)
    }

    fn delta(&self, pick: fn(&CostModel) -> ExtNat) -> BoundExpr {
        BoundExpr::Const(pick(&self.cfg.cost))
    }

    fn nf(&self, t: &Term) -> CResult<Term> {
        normalize::normalize(t).map_err(|e| err(Code::Normalization, e.to_string()))
    }

    fn warn(&mut self, code: Code, msg: String) {
        self.warnings.push(err(code, msg));
    }

    /// Record an unproved dominance result; an error in strict mode.
    fn unproved(&mut self, what: &str, v: &Verdict) -> CResult<()> {
        let msg = format!("{what}: {v}");
        if self.cfg.strict {
            let mut d = err(Code::EmpiricalDominance, msg);
            d.severity = Severity::Error;
            return Err(d);
        }
        self.warn(Code::EmpiricalDominance, msg);
        Ok(())
    }

    pub fn leq(&self, lhs: &BoundExpr, rhs: &BoundExpr) -> Verdict {
        bound_leq_with(lhs, rhs, &self.cfg.dominance())
    }

    pub fn check_context(&mut self, ctx: &Context) -> CResult<()> {
        let mut prefix = Context::new();
        for (i, ty) in ctx.entries().iter().enumerate() {
            self.infer_type(&prefix, ty).map_err(|d| Diagnostic {
                message: format!("context entry {i}: {}", d.message),
                ..d
            })?;
            prefix.push(ty.clone());
        }
        Ok(())
    }

    /// Formation cost of a type.
    pub fn infer_type(&mut self, ctx: &Context, a: &Term) -> CResult<BoundExpr> {
        let d = self.cfg.cost;
        Ok(match a {
            Term::Nat => self.delta(|c| c.delta_nat),
            Term::Universe(s) => {
                if !s.leq(&self.cfg.budget) {
                    self.warn(
                        Code::AmbientBudget,
                        format!(
                            "universe grade {s} exceeds the ambient budget {}",
                            self.cfg.budget
                        ),
                    );
                }
                self.delta(|c| c.delta_universe)
            }
            Term::El(code) => {
                let r = self.infer(ctx, code)?;
                match self.nf(&r.ty)? {
                    Term::Universe(_) => r.bound + BoundExpr::Const(d.delta_el),
                    other => return Err(self.not_a_type(ctx, code, &other)),
                }
            }
            Term::Pi(dom, bound, cod) => {
                let b_dom = self.infer_type(ctx, dom)?;
                let inner = ctx.extended((**dom).clone());
                self.infer_type(&inner, cod)?;
                self.check_bound_wf(&inner, bound)?;
                b_dom + BoundExpr::Const(d.delta_pi)
            }
            Term::Sigma(first, second) => {
                let b_first = self.infer_type(ctx, first)?;
                self.infer_type(&ctx.extended((**first).clone()), second)?;
                b_first + BoundExpr::Const(d.delta_sigma)
            }
            Term::Id(ty, x, y) => {
                let b_ty = self.infer_type(ctx, ty)?;
                let b_x = self.check(ctx, x, ty)?;
                let b_y = self.check(ctx, y, ty)?;
                BoundExpr::sum([b_ty, b_x, b_y, BoundExpr::Const(d.delta_id)])
            }
            Term::Vec(elem, len) => {
                let b_elem = self.infer_type(ctx, elem)?;
                let b_len = self.check(ctx, len, &Term::Nat)?;
                BoundExpr::sum([b_elem, b_len, BoundExpr::Const(d.delta_vec)])
            }
            Term::Fin(n) => self.check(ctx, n, &Term::Nat)? + BoundExpr::Const(d.delta_fin),
            Term::BoxType(_, inner) => self.infer_type(ctx, inner)? + BoundExpr::Const(d.delta_box),
            Term::Ann(t, _) => self.infer_type(ctx, t)?,
            other => {
                let r = self.infer(ctx, other)?;
                match self.nf(&r.ty)? {
                    Term::Universe(_) => r.bound,
                    ty => return Err(self.not_a_type(ctx, other, &ty)),
                }
            }
        })
    }

    fn not_a_type(&self, ctx: &Context, t: &Term, ty: &Term) -> Diagnostic {
        err(
            Code::NotAType,
            format!(
                "`{}` is not a type (it has type `{}`)",
                show_term(t, ctx.len()),
                show_term(ty, ctx.len())
            ),
        )
    }

    /// Size variables in a bound annotation must be naturals, and sizes of
    /// terms inside it must be natural-number terms. Bounds are checked at
    /// zero cost.
    fn check_bound_wf(&mut self, ctx: &Context, b: &BoundExpr) -> CResult<()> {
        use BoundExpr::*;
        match b {
            Const(_) | Bot => Ok(()),
            Plus(x, y) | Join(x, y) | NFold(x, y) => {
                self.check_bound_wf(ctx, x)?;
                self.check_bound_wf(ctx, y)
            }
            ScalarMul(_, i) => {
                let ty = ctx.lookup(*i).ok_or_else(|| {
                    err(
                        Code::UnboundVar,
                        format!("size variable #{i} is not in scope"),
                    )
                })?;
                match self.nf(&ty)? {
                    Term::Nat => Ok(()),
                    other => Err(err(
                        Code::SizeVar,
                        format!(
                            "size variable `{}` has type `{}`, expected Nat",
                            show_term(&Term::Var(*i), ctx.len()),
                            show_term(&other, ctx.len())
                        ),
                    )),
                }
            }
            CeilLog2(x) => self.check_bound_wf(ctx, x),
            Apply(body, arg) => {
                self.check(ctx, arg, &Term::Nat)?;
                self.check_bound_wf(&ctx.extended(Term::Nat), body)
            }
            SumBelow(limit, body) => {
                self.check_bound_wf(ctx, limit)?;
                self.check_bound_wf(&ctx.extended(Term::Nat), body)
            }
        }
    }

    /// Type of a type former used as a term: the smallest universe that
    /// holds its code.
    fn code_universe(&self, formation: &BoundExpr) -> Term {
        Term::Universe(formation.eval_closed().unwrap_or(ExtNat::Inf))
    }

    pub fn infer(&mut self, ctx: &Context, t: &Term) -> CResult<TypingResult> {
        let d = self.cfg.cost;
        let k = BoundExpr::Const;
        let res = |ty: Term, bound: BoundExpr| Ok(TypingResult { ty, bound });
        match t {
            Term::Var(i) => match ctx.lookup(*i) {
                Some(ty) => res(ty, BoundExpr::Bot),
                None => Err(err(
                    Code::UnboundVar,
                    format!("variable #{i} is not in scope"),
                )),
            },
            Term::Universe(s) => {
                let b = self.infer_type(ctx, t)?;
                res(Term::Universe(s.combine(&d.delta_universe)), b)
            }
            Term::El(code) => {
                let r = self.infer(ctx, code)?;
                match self.nf(&r.ty)? {
                    Term::Universe(s) => res(Term::Universe(s), r.bound + k(d.delta_el)),
                    other => Err(self.not_a_type(ctx, code, &other)),
                }
            }
            Term::Pi(..)
            | Term::Sigma(..)
            | Term::Id(..)
            | Term::Nat
            | Term::Vec(..)
            | Term::Fin(..)
            | Term::BoxType(..) => {
                let b = self.infer_type(ctx, t)?;
                res(self.code_universe(&b), b)
            }
            Term::Lam(_) => Err(err(
                Code::CannotInfer,
                "cannot infer the type of a function; annotate it with `the`",
            )),
            Term::App(f, a) => {
                if let Term::Lam(body) = &**f {
                    // direct redex: the body's own bound plays the annotation
                    let ra = self.infer(ctx, a)?;
                    let rb = self.infer(&ctx.extended(ra.ty), body)?;
                    return res(
                        rb.ty.subst(0, a),
                        BoundExpr::sum([ra.bound, rb.bound.subst(0, a), k(d.delta_app)]),
                    );
                }
                let rf = self.infer(ctx, f)?;
                match self.nf(&rf.ty)? {
                    Term::Pi(dom, bnd, cod) => {
                        let b_a = self.check(ctx, a, &dom)?;
                        res(
                            cod.subst(0, a),
                            BoundExpr::sum([rf.bound, b_a, bnd.subst(0, a), k(d.delta_app)]),
                        )
                    }
                    other => Err(err(
                        Code::TypeMismatch,
                        format!(
                            "`{}` is applied but has type `{}`",
                            show_term(f, ctx.len()),
                            show_term(&other, ctx.len())
                        ),
                    )),
                }
            }
            Term::Pair(a, b) => {
                let ra = self.infer(ctx, a)?;
                let rb = self.infer(ctx, b)?;
                res(Term::sigma(ra.ty, rb.ty.shift(1, 0)), ra.bound + rb.bound)
            }
            Term::Proj1(p) | Term::Proj2(p) => {
                let rp = self.infer(ctx, p)?;
                match self.nf(&rp.ty)? {
                    Term::Sigma(first, second) => {
                        if matches!(t, Term::Proj1(_)) {
                            res(*first, rp.bound + k(d.delta_proj1))
                        } else {
                            res(
                                second.subst(0, &Term::proj1((**p).clone())),
                                rp.bound + k(d.delta_proj2),
                            )
                        }
                    }
                    other => Err(self.mismatch_msg(ctx, "a pair", &other, p)),
                }
            }
            Term::Refl(a) => {
                let ra = self.infer(ctx, a)?;
                res(
                    Term::id(ra.ty, (**a).clone(), (**a).clone()),
                    ra.bound + k(d.delta_refl),
                )
            }
            Term::J {
                motive,
                proof,
                method,
            } => {
                let rp = self.infer(ctx, proof)?;
                let Term::Id(ty, x, y) = self.nf(&rp.ty)? else {
                    return Err(self.mismatch_msg(ctx, "an identity proof", &rp.ty, proof));
                };
                let motive_ctx = ctx.extended((*ty).clone()).extended(Term::id(
                    ty.shift(1, 0),
                    x.shift(1, 0),
                    Term::Var(0),
                ));
                self.infer_type(&motive_ctx, motive)?;
                let b_d = self.check(
                    ctx,
                    method,
                    &motive.instantiate(&[(*x).clone(), Term::refl((*x).clone())]),
                )?;
                res(
                    motive.instantiate(&[(*y).clone(), (**proof).clone()]),
                    BoundExpr::sum([rp.bound, b_d, k(d.delta_j)]),
                )
            }
            Term::Zero => res(Term::Nat, k(d.delta_zero)),
            Term::Succ(n) => {
                let b = self.check(ctx, n, &Term::Nat)?;
                res(Term::Nat, b + k(d.delta_succ))
            }
            Term::NatRec {
                motive,
                scrutinee,
                zero,
                succ,
            } => {
                let b_n = self.check(ctx, scrutinee, &Term::Nat)?;
                let ctx_m = ctx.extended(Term::Nat);
                self.infer_type(&ctx_m, motive)?;
                let b_z = self.check(ctx, zero, &motive.subst(0, &Term::Zero))?;
                let ctx_s = ctx_m.extended((**motive).clone());
                let b_s =
                    self.check(&ctx_s, succ, &motive.rebind(&[Term::succ(Term::Var(1))], 2))?;
                // the step bound may mention ih; it is then the recursor at m
                let step = if b_s.has_free_var(0) {
                    let rec = Term::natrec(
                        motive.shift(1, 1),
                        Term::Var(0),
                        zero.shift(1, 0),
                        succ.shift(1, 2),
                    );
                    b_s.subst(0, &rec)
                } else {
                    b_s.unshift(1, 0)
                };
                let per_step =
                    BoundExpr::sum_below(size_of_term(scrutinee), step + k(d.delta_natrec));
                res(
                    motive.subst(0, scrutinee),
                    BoundExpr::sum([b_n, b_z, k(d.delta_natrec), per_step]),
                )
            }
            Term::Nil => Err(err(
                Code::CannotInfer,
                "cannot infer the element type of `nil`; annotate it with `the`",
            )),
            Term::Cons(..) if t.as_vec_literal().is_some() => self.infer_vec_literal(ctx, t),
            Term::Cons(h, tl) => {
                let rh = self.infer(ctx, h)?;
                let rt = self.infer(ctx, tl)?;
                match self.nf(&rt.ty)? {
                    Term::Vec(elem, len) => {
                        self.subsume(ctx, &rh.ty, &elem)?;
                        res(
                            Term::vec(*elem, Term::succ(*len)),
                            BoundExpr::sum([rh.bound, rt.bound, k(d.delta_cons)]),
                        )
                    }
                    other => Err(self.mismatch_msg(ctx, "a vector", &other, tl)),
                }
            }
            Term::VecRec {
                motive,
                scrutinee,
                nil,
                cons,
            } => {
                let rv = self.infer(ctx, scrutinee)?;
                let Term::Vec(elem, len) = self.nf(&rv.ty)? else {
                    return Err(self.mismatch_msg(ctx, "a vector", &rv.ty, scrutinee));
                };
                let ctx_mw = ctx
                    .extended(Term::Nat)
                    .extended(Term::vec(elem.shift(1, 0), Term::Var(0)));
                self.infer_type(&ctx_mw, motive)?;
                let b_nil = self.check(ctx, nil, &motive.instantiate(&[Term::Zero, Term::Nil]))?;
                let ctx_c = ctx
                    .extended(Term::Nat)
                    .extended(elem.shift(1, 0))
                    .extended(Term::vec(elem.shift(2, 0), Term::Var(1)))
                    .extended(motive.rebind(&[Term::Var(2), Term::Var(0)], 3));
                let target = motive.rebind(
                    &[
                        Term::succ(Term::Var(3)),
                        Term::cons(Term::Var(2), Term::Var(1)),
                    ],
                    4,
                );
                let b_c = self.check(&ctx_c, cons, &target)?;
                if let Some(v) = (0..3).find(|v| b_c.has_free_var(*v)) {
                    let which = ["the recursive result", "the tail", "the head"][v];
                    return Err(err(
                        Code::BoundDependency,
                        format!(
                            "the cons-step bound `{}` depends on {which}",
                            show_bound_ctx(&b_c, ctx.len() + 4)
                        ),
                    ));
                }
                let per_step =
                    BoundExpr::sum_below(size_of_term(&len), b_c.unshift(3, 0) + k(d.delta_vecrec));
                res(
                    motive.instantiate(&[*len, (**scrutinee).clone()]),
                    BoundExpr::sum([rv.bound, b_nil, k(d.delta_vecrec), per_step]),
                )
            }
            Term::FZero => Err(err(
                Code::CannotInfer,
                "cannot infer the bound of `fzero`; annotate it with `the`",
            )),
            Term::FSucc(i) => {
                let ri = self.infer(ctx, i)?;
                match self.nf(&ri.ty)? {
                    Term::Fin(n) => res(Term::fin(Term::succ(*n)), ri.bound + k(d.delta_fsucc)),
                    other => Err(self.mismatch_msg(ctx, "a finite index", &other, i)),
                }
            }
            Term::BoxIntro(s, inner) => {
                let r = self.infer(ctx, inner)?;
                self.box_budget(&r.bound, *s)?;
                res(Term::box_type(*s, r.ty), r.bound)
            }
            Term::Unbox(inner) => {
                let r = self.infer(ctx, inner)?;
                match self.nf(&r.ty)? {
                    Term::BoxType(_, a) => res(*a, r.bound + k(d.delta_unbox)),
                    other => Err(self.mismatch_msg(ctx, "a boxed value", &other, inner)),
                }
            }
            Term::Add(a, b) => {
                let ba = self.check(ctx, a, &Term::Nat)?;
                let bb = self.check(ctx, b, &Term::Nat)?;
                res(Term::Nat, BoundExpr::sum([ba, bb, k(d.delta_add)]))
            }
            Term::Ann(inner, ty) => {
                self.infer_type(ctx, ty)?;
                let b = self.check(ctx, inner, ty)?;
                res((**ty).clone(), b)
            }
        }
    }

    fn infer_vec_literal(&mut self, ctx: &Context, t: &Term) -> CResult<TypingResult> {
        let d = self.cfg.cost;
        let items: Vec<Term> = t
            .as_vec_literal()
            .unwrap_or_default()
            .into_iter()
            .cloned()
            .collect();
        let first = self.infer(ctx, &items[0])?;
        let mut bounds = vec![first.bound];
        for item in &items[1..] {
            bounds.push(self.check(ctx, item, &first.ty)?);
        }
        let n = items.len() as u64;
        bounds.push(BoundExpr::Const(d.delta_cons.nfold(n)));
        bounds.push(BoundExpr::Const(d.delta_nil));
        Ok(TypingResult {
            ty: Term::vec(first.ty, Term::numeral(n)),
            bound: BoundExpr::sum(bounds),
        })
    }

    fn mismatch_msg(&self, ctx: &Context, expected: &str, got: &Term, t: &Term) -> Diagnostic {
        err(
            Code::TypeMismatch,
            format!(
                "expected {expected}, but `{}` has type `{}`",
                show_term(t, ctx.len()),
                show_term(got, ctx.len())
            ),
        )
    }

    fn box_budget(&mut self, b: &BoundExpr, grade: ExtNat) -> CResult<()> {
        let v = self.leq(b, &BoundExpr::Const(grade));
        match v {
            Verdict::Proved => Ok(()),
            Verdict::Refuted { .. } => Err(err(
                Code::BoxBudget,
                format!(
                    "boxed term has bound `{}`, which exceeds the grade {grade}: {v}",
                    b.normalize()
                ),
            )),
            _ => self.unproved(
                &format!("box grade {grade} against bound `{}`", b.normalize()),
                &v,
            ),
        }
    }

    pub fn check(&mut self, ctx: &Context, t: &Term, expected: &Term) -> CResult<BoundExpr> {
        let d = self.cfg.cost;
        let k = BoundExpr::Const;
        let exp = self.nf(expected)?;
        match (t, &exp) {
            (Term::Lam(body), Term::Pi(dom, bnd, cod)) => {
                let inner = ctx.extended((**dom).clone());
                let b_body = self.check(&inner, body, cod)?;
                self.require_within(&inner, &b_body, bnd)?;
                Ok(BoundExpr::Bot)
            }
            (Term::Lam(_), other) => Err(err(
                Code::TypeMismatch,
                format!(
                    "a function was given where `{}` was expected",
                    show_term(other, ctx.len())
                ),
            )),
            (Term::Pair(a, b), Term::Sigma(first, second)) => {
                let ba = self.check(ctx, a, first)?;
                let bb = self.check(ctx, b, &second.subst(0, a))?;
                Ok(ba + bb)
            }
            (Term::Refl(a), Term::Id(ty, x, y)) => {
                let ba = self.check(ctx, a, ty)?;
                for side in [x, y] {
                    if !self.conv(a, side)? {
                        return Err(self.mismatch(
                            ctx,
                            &Term::id((**ty).clone(), (**a).clone(), (**a).clone()),
                            &exp,
                        ));
                    }
                }
                Ok(ba + k(d.delta_refl))
            }
            (Term::Nil, Term::Vec(_, len)) if **len == Term::Zero => Ok(k(d.delta_nil)),
            (Term::Cons(h, tl), Term::Vec(elem, len)) => match &**len {
                Term::Succ(m) => {
                    let bh = self.check(ctx, h, elem)?;
                    let bt = self.check(ctx, tl, &Term::vec((**elem).clone(), (**m).clone()))?;
                    Ok(BoundExpr::sum([bh, bt, k(d.delta_cons)]))
                }
                _ => Err(err(
                    Code::TypeMismatch,
                    format!(
                        "`cons` builds a non-empty vector, but `{}` was expected",
                        show_term(&exp, ctx.len())
                    ),
                )),
            },
            (Term::FZero, Term::Fin(n)) if matches!(**n, Term::Succ(_)) => Ok(k(d.delta_fzero)),
            (Term::FSucc(i), Term::Fin(n)) => match &**n {
                Term::Succ(m) => {
                    Ok(self.check(ctx, i, &Term::fin((**m).clone()))? + k(d.delta_fsucc))
                }
                _ => Err(err(
                    Code::TypeMismatch,
                    format!(
                        "`fsucc` needs a successor bound, but `{}` was expected",
                        show_term(&exp, ctx.len())
                    ),
                )),
            },
            (Term::BoxIntro(s, inner), Term::BoxType(s2, a)) => {
                if !s.leq(s2) {
                    return Err(err(
                        Code::TypeMismatch,
                        format!("a box of grade {s} does not fit grade {s2}"),
                    ));
                }
                let b = self.check(ctx, inner, a)?;
                self.box_budget(&b, *s)?;
                Ok(b)
            }
            _ => {
                let r = self.infer(ctx, t)?;
                self.subsume(ctx, &r.ty, &exp)?;
                Ok(r.bound)
            }
        }
    }

    /// Body bound against the annotation of its function type.
    fn require_within(
        &mut self,
        ctx: &Context,
        body: &BoundExpr,
        declared: &BoundExpr,
    ) -> CResult<()> {
        let v = self.leq(body, declared);
        match v {
            Verdict::Proved => Ok(()),
            Verdict::Refuted { .. } => {
                let scope = level_names(ctx.len());
                Err(err(
                    Code::BoundExceeded,
                    format!(
                        "synthesized bound `{}` exceeds the declared `{}`: {}",
                        show_nf(&body.normalize(), &scope),
                        show_nf(&declared.normalize(), &scope),
                        show_verdict(&v, &scope)
                    ),
                ))
            }
            _ => self.unproved(
                &format!(
                    "synthesized bound `{}` against declared `{}`",
                    show_bound_ctx(body, ctx.len()),
                    show_bound_ctx(declared, ctx.len())
                ),
                &v,
            ),
        }
    }

    fn mismatch(&self, ctx: &Context, got: &Term, expected: &Term) -> Diagnostic {
        let n = ctx.len();
        let show_nf =
            |t: &Term| show_term(&normalize::normalize(t).unwrap_or_else(|_| t.clone()), n);
        err(
            Code::TypeMismatch,
            format!("expected `{}`, found `{}`", show_nf(expected), show_nf(got)),
        )
    }

    /// `got` may be used where `expected` is required: conversion, plus
    /// cumulativity of universes and monotonicity of box grades.
    fn subsume(&self, ctx: &Context, got: &Term, expected: &Term) -> CResult<()> {
        let g = self.nf(got)?;
        let e = self.nf(expected)?;
        let ok = match (&g, &e) {
            (Term::Universe(s1), Term::Universe(s2)) => s1.leq(s2),
            (Term::BoxType(s1, a), Term::BoxType(s2, b)) => s1.leq(s2) && a.structural_eq(b),
            _ => g.structural_eq(&e),
        };
        if ok {
            Ok(())
        } else {
            Err(self.mismatch(ctx, &g, &e))
        }
    }

    pub fn conv(&self, a: &Term, b: &Term) -> CResult<bool> {
        normalize::convertible(a, b).map_err(|e| err(Code::Normalization, e.to_string()))
    }

    /// Check a closed definition against its declared type.
    pub fn check_decl(&mut self, ty: &Term, body: &Term) -> CResult<DeclCheck> {
        let empty = Context::new();
        self.infer_type(&empty, ty)?;
        let mut binders = Context::new();
        let mut t = body;
        let mut cur = self.nf(ty)?;
        let mut declared = None;
        while let (Term::Lam(inner), Term::Pi(dom, bnd, cod)) = (t, &cur) {
            binders.push((**dom).clone());
            declared = Some((**bnd).clone());
            t = inner;
            cur = Normalizer::default()
                .normalize(cod)
                .map_err(|e| err(Code::Normalization, e.to_string()))?;
        }
        let latent = self.check(&binders, t, &cur)?;
        let verdict = match &declared {
            Some(decl) => {
                self.require_within(&binders, &latent, decl)?;
                Some(self.leq(&latent, decl))
            }
            None => None,
        };
        let bound = if declared.is_some() {
            BoundExpr::Bot
        } else {
            latent.clone()
        };
        if let Verdict::Refuted { .. } = self.leq(&bound, &BoundExpr::Const(self.cfg.budget)) {
            self.warn(
                Code::AmbientBudget,
                format!(
                    "bound `{}` exceeds the ambient budget {}",
                    bound.normalize(),
                    self.cfg.budget
                ),
            );
        }
        Ok(DeclCheck {
            bound,
            binders,
            latent,
            declared,
            verdict,
        })
    }
}

fn show_bound_ctx(b: &BoundExpr, depth: usize) -> String {
    crate::frontend::pretty::show_bound(b, depth)
}

/// Infer a closed term under a configuration, discarding warnings.
pub fn infer_closed(cfg: &CheckerConfig, t: &Term) -> CResult<TypingResult> {
    Checker::new(cfg.clone()).infer(&Context::new(), t)
}

/// Check a closed term against a closed type, discarding warnings.
pub fn check_closed(cfg: &CheckerConfig, t: &Term, ty: &Term) -> CResult<BoundExpr> {
    Checker::new(cfg.clone()).check(&Context::new(), t, ty)
}

#[cfg(test)]
mod tests;
