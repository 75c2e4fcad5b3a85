//! Core term language.
//!
//! Terms use de Bruijn indices. Binders per node:
//!
//! | node      | binders                                        |
//! |-----------|------------------------------------------------|
//! | `Pi`      | codomain and bound annotation bind `x`         |
//! | `Lam`     | body binds `x`                                 |
//! | `Sigma`   | second component binds `x`                     |
//! | `J`       | motive binds `z, w`                            |
//! | `NatRec`  | motive binds `m`; successor case binds `m, ih` |
//! | `VecRec`  | motive binds `m, w`; cons case binds `m, a, w, ih` |
//!
//! Bound annotations on `Pi` share the index space of terms: a size variable
//! `SizeVar(i)` inside a bound refers to the same binder as `Var(i)` would at
//! that position.

use std::cell::RefCell;
use std::collections::BTreeSet;

use crate::bound::BoundExpr;
use crate::lattice::ExtNat;

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Term {
    Var(usize),
    Universe(ExtNat),
    El(Box<Term>),
    Pi(Box<Term>, Box<BoundExpr>, Box<Term>),
    Lam(Box<Term>),
    App(Box<Term>, Box<Term>),
    Sigma(Box<Term>, Box<Term>),
    Pair(Box<Term>, Box<Term>),
    Proj1(Box<Term>),
    Proj2(Box<Term>),
    Id(Box<Term>, Box<Term>, Box<Term>),
    Refl(Box<Term>),
    J {
        motive: Box<Term>,
        proof: Box<Term>,
        method: Box<Term>,
    },
    Nat,
    Zero,
    Succ(Box<Term>),
    NatRec {
        motive: Box<Term>,
        scrutinee: Box<Term>,
        zero: Box<Term>,
        succ: Box<Term>,
    },
    Vec(Box<Term>, Box<Term>),
    Nil,
    Cons(Box<Term>, Box<Term>),
    VecRec {
        motive: Box<Term>,
        scrutinee: Box<Term>,
        nil: Box<Term>,
        cons: Box<Term>,
    },
    Fin(Box<Term>),
    FZero,
    FSucc(Box<Term>),
    BoxType(ExtNat, Box<Term>),
    BoxIntro(ExtNat, Box<Term>),
    Unbox(Box<Term>),
    /// Primitive addition on naturals.
    Add(Box<Term>, Box<Term>),
    /// Type ascription `the A t`; erased by evaluation and conversion.
    Ann(Box<Term>, Box<Term>),
}

fn bx(t: Term) -> Box<Term> {
    Box::new(t)
}

impl Term {
    pub fn pi(dom: Term, bound: BoundExpr, cod: Term) -> Term {
        Term::Pi(bx(dom), Box::new(bound), bx(cod))
    }

    /// Non-dependent arrow `A ->[b] B`; `cod` and `bound` are given in the
    /// outer context and shifted under the vacuous binder.
    pub fn arrow(dom: Term, bound: BoundExpr, cod: Term) -> Term {
        Term::pi(dom, bound.shift(1, 0), cod.shift(1, 0))
    }

    pub fn lam(body: Term) -> Term {
        Term::Lam(bx(body))
    }

    pub fn app(f: Term, a: Term) -> Term {
        Term::App(bx(f), bx(a))
    }

    pub fn apps(f: Term, args: impl IntoIterator<Item = Term>) -> Term {
        args.into_iter().fold(f, Term::app)
    }

    pub fn sigma(a: Term, b: Term) -> Term {
        Term::Sigma(bx(a), bx(b))
    }

    pub fn pair(a: Term, b: Term) -> Term {
        Term::Pair(bx(a), bx(b))
    }

    pub fn proj1(p: Term) -> Term {
        Term::Proj1(bx(p))
    }

    pub fn proj2(p: Term) -> Term {
        Term::Proj2(bx(p))
    }

    pub fn id(ty: Term, lhs: Term, rhs: Term) -> Term {
        Term::Id(bx(ty), bx(lhs), bx(rhs))
    }

    pub fn refl(a: Term) -> Term {
        Term::Refl(bx(a))
    }

    pub fn j(motive: Term, proof: Term, method: Term) -> Term {
        Term::J {
            motive: bx(motive),
            proof: bx(proof),
            method: bx(method),
        }
    }

    pub fn succ(t: Term) -> Term {
        Term::Succ(bx(t))
    }

    pub fn natrec(motive: Term, scrutinee: Term, zero: Term, succ: Term) -> Term {
        Term::NatRec {
            motive: bx(motive),
            scrutinee: bx(scrutinee),
            zero: bx(zero),
            succ: bx(succ),
        }
    }

    pub fn vec(elem: Term, len: Term) -> Term {
        Term::Vec(bx(elem), bx(len))
    }

    pub fn cons(head: Term, tail: Term) -> Term {
        Term::Cons(bx(head), bx(tail))
    }

    pub fn vecrec(motive: Term, scrutinee: Term, nil: Term, cons: Term) -> Term {
        Term::VecRec {
            motive: bx(motive),
            scrutinee: bx(scrutinee),
            nil: bx(nil),
            cons: bx(cons),
        }
    }

    pub fn fin(n: Term) -> Term {
        Term::Fin(bx(n))
    }

    pub fn fsucc(i: Term) -> Term {
        Term::FSucc(bx(i))
    }

    pub fn box_type(grade: ExtNat, a: Term) -> Term {
        Term::BoxType(grade, bx(a))
    }

    pub fn box_intro(grade: ExtNat, t: Term) -> Term {
        Term::BoxIntro(grade, bx(t))
    }

    pub fn unbox(t: Term) -> Term {
        Term::Unbox(bx(t))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn add(a: Term, b: Term) -> Term {
        Term::Add(bx(a), bx(b))
    }

    pub fn ann(t: Term, ty: Term) -> Term {
        Term::Ann(bx(t), bx(ty))
    }

    pub fn el(t: Term) -> Term {
        Term::El(bx(t))
    }

    pub fn numeral(n: u64) -> Term {
        (0..n).fold(Term::Zero, |acc, _| Term::succ(acc))
    }

    pub fn fin_numeral(k: u64) -> Term {
        (0..k).fold(Term::FZero, |acc, _| Term::fsucc(acc))
    }

    pub fn vec_literal(items: impl IntoIterator<Item = Term>) -> Term {
        let items: Vec<Term> = items.into_iter().collect();
        items
            .into_iter()
            .rev()
            .fold(Term::Nil, |tail, head| Term::cons(head, tail))
    }

    /// `Some(n)` if this is `Succ^n(Zero)`.
    pub fn as_numeral(&self) -> Option<u64> {
        let mut n = 0u64;
        let mut t = self;
        loop {
            match t {
                Term::Zero => return Some(n),
                Term::Succ(inner) => {
                    n += 1;
                    t = inner;
                }
                _ => return None,
            }
        }
    }

    /// Elements of a `Cons` chain ending in `Nil`.
    pub fn as_vec_literal(&self) -> Option<Vec<&Term>> {
        let mut out = Vec::new();
        let mut t = self;
        loop {
            match t {
                Term::Nil => return Some(out),
                Term::Cons(h, rest) => {
                    out.push(&**h);
                    t = rest;
                }
                _ => return None,
            }
        }
    }

    /// Rebuild the term, replacing every free variable.
    ///
    /// `f(k, d)` is called for a variable with free index `k` (relative to the
    /// starting context) found under `d` binders, counting from `depth`; it
    /// must return a term valid at that position.
    pub fn map_vars<F>(&self, depth: usize, f: &F) -> Term
    where
        F: Fn(usize, usize) -> Term,
    {
        let go = |t: &Term, extra: usize| bx(t.map_vars(depth + extra, f));
        match self {
            Term::Var(i) if *i < depth => Term::Var(*i),
            Term::Var(i) => f(*i - depth, depth),
            Term::Universe(s) => Term::Universe(*s),
            Term::El(a) => Term::El(go(a, 0)),
            Term::Pi(a, b, c) => Term::Pi(go(a, 0), Box::new(b.map_vars(depth + 1, f)), go(c, 1)),
            Term::Lam(b) => Term::Lam(go(b, 1)),
            Term::App(x, y) => Term::App(go(x, 0), go(y, 0)),
            Term::Sigma(a, b) => Term::Sigma(go(a, 0), go(b, 1)),
            Term::Pair(a, b) => Term::Pair(go(a, 0), go(b, 0)),
            Term::Proj1(p) => Term::Proj1(go(p, 0)),
            Term::Proj2(p) => Term::Proj2(go(p, 0)),
            Term::Id(a, x, y) => Term::Id(go(a, 0), go(x, 0), go(y, 0)),
            Term::Refl(a) => Term::Refl(go(a, 0)),
            Term::J {
                motive,
                proof,
                method,
            } => Term::J {
                motive: go(motive, 2),
                proof: go(proof, 0),
                method: go(method, 0),
            },
            Term::Nat => Term::Nat,
            Term::Zero => Term::Zero,
            Term::Succ(n) => Term::Succ(go(n, 0)),
            Term::NatRec {
                motive,
                scrutinee,
                zero,
                succ,
            } => Term::NatRec {
                motive: go(motive, 1),
                scrutinee: go(scrutinee, 0),
                zero: go(zero, 0),
                succ: go(succ, 2),
            },
            Term::Vec(a, n) => Term::Vec(go(a, 0), go(n, 0)),
            Term::Nil => Term::Nil,
            Term::Cons(h, t) => Term::Cons(go(h, 0), go(t, 0)),
            Term::VecRec {
                motive,
                scrutinee,
                nil,
                cons,
            } => Term::VecRec {
                motive: go(motive, 2),
                scrutinee: go(scrutinee, 0),
                nil: go(nil, 0),
                cons: go(cons, 4),
            },
            Term::Fin(n) => Term::Fin(go(n, 0)),
            Term::FZero => Term::FZero,
            Term::FSucc(i) => Term::FSucc(go(i, 0)),
            Term::BoxType(s, a) => Term::BoxType(*s, go(a, 0)),
            Term::BoxIntro(s, t) => Term::BoxIntro(*s, go(t, 0)),
            Term::Unbox(t) => Term::Unbox(go(t, 0)),
            Term::Add(a, b) => Term::Add(go(a, 0), go(b, 0)),
            Term::Ann(t, a) => Term::Ann(go(t, 0), go(a, 0)),
        }
    }

    /// Increase free indices `>= cutoff` by `amount`.
    pub fn shift(&self, amount: usize, cutoff: usize) -> Term {
        if amount == 0 {
            return self.clone();
        }
        self.map_vars(cutoff, &|k, d| Term::Var(k + d + amount))
    }

    /// Decrease free indices `>= cutoff` by `amount`. Indices in
    /// `cutoff..cutoff + amount` must not occur.
    pub fn unshift(&self, amount: usize, cutoff: usize) -> Term {
        self.map_vars(cutoff, &|k, d| {
            debug_assert!(k >= amount, "unshift of an occurring variable");
            Term::Var(k + d - amount)
        })
    }

    /// `t[index := replacement]`: the variable is removed from the context,
    /// higher indices move down by one. `replacement` is valid in the result
    /// context.
    pub fn subst(&self, index: usize, replacement: &Term) -> Term {
        self.map_vars(0, &|k, d| {
            if k == index {
                replacement.shift(d, 0)
            } else if k > index {
                Term::Var(k - 1 + d)
            } else {
                Term::Var(k + d)
            }
        })
    }

    /// Instantiate the innermost `vals.len()` binders of the context. `vals[0]`
    /// replaces the outermost of them, the last element replaces `Var(0)`.
    pub fn instantiate(&self, vals: &[Term]) -> Term {
        let k = vals.len();
        self.map_vars(0, &|i, d| {
            if i < k {
                vals[k - 1 - i].shift(d, 0)
            } else {
                Term::Var(i - k + d)
            }
        })
    }

    /// Move a term from `Γ, x₁ … x_k` to `Γ, y₁ … y_extra`, replacing the `x`s
    /// by `vals` (outermost first, valid in the target context).
    pub fn rebind(&self, vals: &[Term], extra: usize) -> Term {
        let k = vals.len();
        self.map_vars(0, &|i, d| {
            if i < k {
                vals[k - 1 - i].shift(d, 0)
            } else {
                Term::Var(i - k + extra + d)
            }
        })
    }

    /// Free variables, as indices relative to the term's own context.
    pub fn free_vars(&self) -> BTreeSet<usize> {
        let mut out = BTreeSet::new();
        self.collect_free_vars(0, &mut out);
        out
    }

    pub fn is_closed(&self) -> bool {
        self.free_vars().is_empty()
    }

    pub fn has_free_var(&self, index: usize) -> bool {
        self.free_vars().contains(&index)
    }

    pub(crate) fn collect_free_vars(&self, depth: usize, out: &mut BTreeSet<usize>) {
        let seen = RefCell::new(BTreeSet::new());
        self.map_vars(depth, &|k, d| {
            seen.borrow_mut().insert(k);
            Term::Var(k + d)
        });
        out.extend(seen.into_inner());
    }

    /// Syntactic equality modulo bound annotations, which are compared by
    /// their normal forms.
    pub fn structural_eq(&self, other: &Term) -> bool {
        use Term::*;
        match (self, other) {
            (Var(a), Var(b)) => a == b,
            (Universe(a), Universe(b)) => a == b,
            (El(a), El(b)) => a.structural_eq(b),
            (Pi(a1, b1, c1), Pi(a2, b2, c2)) => {
                a1.structural_eq(a2) && c1.structural_eq(c2) && b1.normalize() == b2.normalize()
            }
            (Lam(a), Lam(b)) => a.structural_eq(b),
            (App(f1, a1), App(f2, a2)) => f1.structural_eq(f2) && a1.structural_eq(a2),
            (Sigma(a1, b1), Sigma(a2, b2)) => a1.structural_eq(a2) && b1.structural_eq(b2),
            (Pair(a1, b1), Pair(a2, b2)) => a1.structural_eq(a2) && b1.structural_eq(b2),
            (Proj1(a), Proj1(b)) | (Proj2(a), Proj2(b)) => a.structural_eq(b),
            (Id(a1, x1, y1), Id(a2, x2, y2)) => {
                a1.structural_eq(a2) && x1.structural_eq(x2) && y1.structural_eq(y2)
            }
            (Refl(a), Refl(b)) => a.structural_eq(b),
            (
                J {
                    motive: m1,
                    proof: p1,
                    method: d1,
                },
                J {
                    motive: m2,
                    proof: p2,
                    method: d2,
                },
            ) => m1.structural_eq(m2) && p1.structural_eq(p2) && d1.structural_eq(d2),
            (Nat, Nat) | (Zero, Zero) | (Nil, Nil) | (FZero, FZero) => true,
            (Succ(a), Succ(b)) => a.structural_eq(b),
            (
                NatRec {
                    motive: m1,
                    scrutinee: s1,
                    zero: z1,
                    succ: c1,
                },
                NatRec {
                    motive: m2,
                    scrutinee: s2,
                    zero: z2,
                    succ: c2,
                },
            ) => {
                m1.structural_eq(m2)
                    && s1.structural_eq(s2)
                    && z1.structural_eq(z2)
                    && c1.structural_eq(c2)
            }
            (Vec(a1, n1), Vec(a2, n2)) => a1.structural_eq(a2) && n1.structural_eq(n2),
            (Cons(h1, t1), Cons(h2, t2)) => h1.structural_eq(h2) && t1.structural_eq(t2),
            (
                VecRec {
                    motive: m1,
                    scrutinee: s1,
                    nil: n1,
                    cons: c1,
                },
                VecRec {
                    motive: m2,
                    scrutinee: s2,
                    nil: n2,
                    cons: c2,
                },
            ) => {
                m1.structural_eq(m2)
                    && s1.structural_eq(s2)
                    && n1.structural_eq(n2)
                    && c1.structural_eq(c2)
            }
            (Fin(a), Fin(b)) => a.structural_eq(b),
            (FSucc(a), FSucc(b)) => a.structural_eq(b),
            (BoxType(s1, a), BoxType(s2, b)) | (BoxIntro(s1, a), BoxIntro(s2, b)) => {
                s1 == s2 && a.structural_eq(b)
            }
            (Unbox(a), Unbox(b)) => a.structural_eq(b),
            (Add(a1, b1), Add(a2, b2)) => a1.structural_eq(a2) && b1.structural_eq(b2),
            (Ann(t1, a1), Ann(t2, a2)) => t1.structural_eq(t2) && a1.structural_eq(a2),
            _ => false,
        }
    }

    /// Number of nodes, used to keep generated corpora small.
    pub fn size(&self) -> usize {
        let mut n = 0usize;
        self.visit(&mut |_| n += 1);
        n
    }

    /// Pre-order traversal over subterms (bound annotations excluded).
    pub fn visit(&self, f: &mut dyn FnMut(&Term)) {
        f(self);
        match self {
            Term::Var(_) | Term::Universe(_) | Term::Nat | Term::Zero | Term::Nil | Term::FZero => {
            }
            Term::El(a)
            | Term::Lam(a)
            | Term::Proj1(a)
            | Term::Proj2(a)
            | Term::Refl(a)
            | Term::Succ(a)
            | Term::Fin(a)
            | Term::FSucc(a)
            | Term::BoxType(_, a)
            | Term::BoxIntro(_, a)
            | Term::Unbox(a) => a.visit(f),
            Term::Pi(a, _, b)
            | Term::App(a, b)
            | Term::Sigma(a, b)
            | Term::Pair(a, b)
            | Term::Vec(a, b)
            | Term::Cons(a, b)
            | Term::Add(a, b)
            | Term::Ann(a, b) => {
                a.visit(f);
                b.visit(f);
            }
            Term::Id(a, b, c)
            | Term::J {
                motive: a,
                proof: b,
                method: c,
            } => {
                a.visit(f);
                b.visit(f);
                c.visit(f);
            }
            Term::NatRec {
                motive,
                scrutinee,
                zero: a,
                succ: b,
            }
            | Term::VecRec {
                motive,
                scrutinee,
                nil: a,
                cons: b,
            } => {
                motive.visit(f);
                scrutinee.visit(f);
                a.visit(f);
                b.visit(f);
            }
        }
    }
}

/// A typing context; the innermost entry is last.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Context {
    entries: Vec<Term>,
}

impl Context {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Type of `Var(index)`, valid in the full context.
    pub fn lookup(&self, index: usize) -> Option<Term> {
        let pos = self.entries.len().checked_sub(index + 1)?;
        Some(self.entries[pos].shift(index + 1, 0))
    }

    pub fn push(&mut self, ty: Term) {
        self.entries.push(ty);
    }

    pub fn pop(&mut self) -> Option<Term> {
        self.entries.pop()
    }

    pub fn extended(&self, ty: Term) -> Context {
        let mut c = self.clone();
        c.push(ty);
        c
    }

    pub fn entries(&self) -> &[Term] {
        &self.entries
    }
}

impl FromIterator<Term> for Context {
    fn from_iter<I: IntoIterator<Item = Term>>(iter: I) -> Self {
        Context {
            entries: iter.into_iter().collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use Term::*;

    #[test]
    fn shift_examples() {
        assert_eq!(Var(0).shift(1, 0), Var(1));
        assert_eq!(Term::lam(Var(0)).shift(1, 0), Term::lam(Var(0)));
        assert_eq!(Term::lam(Var(1)).shift(1, 0), Term::lam(Var(2)));
    }

    #[test]
    fn subst_examples() {
        assert_eq!(Var(0).subst(0, &Zero), Zero);
        assert_eq!(
            Term::app(Var(1), Var(0)).subst(0, &Zero),
            Term::app(Var(0), Zero)
        );
        // under a binder the replacement is shifted
        assert_eq!(
            Term::lam(Term::app(Var(1), Var(0))).subst(0, &Var(3)),
            Term::lam(Term::app(Var(4), Var(0)))
        );
    }

    #[test]
    fn pi_bound_substitutes_in_lockstep() {
        // (y : Nat) ->[3*x] Nat  in context x : Nat, with x := 4
        let ty = Term::pi(Nat, BoundExpr::scalar(3, 1), Nat);
        let out = ty.subst(0, &Term::numeral(4));
        match out {
            Pi(_, b, _) => {
                let v = b.eval(&crate::bound::SizeEnv::new()).unwrap();
                assert_eq!(v, ExtNat::Fin(12));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn instantiate_orders_values_outermost_first() {
        // Var 1 is the outer binder, Var 0 the inner one
        let t = Term::pair(Var(1), Var(0));
        assert_eq!(t.instantiate(&[Zero, Nil]), Term::pair(Zero, Nil));
        assert_eq!(Var(2).instantiate(&[Zero, Nil]), Var(0));
    }

    #[test]
    fn structural_eq_examples() {
        assert!(Term::lam(Var(0)).structural_eq(&Term::lam(Var(0))));
        assert!(!Zero.structural_eq(&Term::succ(Zero)));
        let b1 = BoundExpr::scalar(2, 0) + BoundExpr::scalar(1, 0);
        let b2 = BoundExpr::scalar(3, 0);
        assert_ne!(b1, b2);
        assert!(Term::pi(Nat, b1, Nat).structural_eq(&Term::pi(Nat, b2, Nat)));
    }

    #[test]
    fn numerals_and_literals() {
        assert_eq!(Term::numeral(2), Term::succ(Term::succ(Zero)));
        assert_eq!(Term::numeral(5).as_numeral(), Some(5));
        let v = Term::vec_literal([Term::numeral(1), Term::numeral(2)]);
        assert_eq!(v.as_vec_literal().unwrap().len(), 2);
    }

    #[test]
    fn context_lookup_shifts() {
        let ctx: Context = [Nat, Term::vec(Nat, Var(0))].into_iter().collect();
        assert_eq!(ctx.lookup(0), Some(Term::vec(Nat, Var(1))));
        assert_eq!(ctx.lookup(1), Some(Nat));
        assert_eq!(ctx.lookup(2), None);
    }

    #[test]
    fn free_vars_cross_binders() {
        let t = Term::lam(Term::app(Var(0), Var(2)));
        assert_eq!(
            t.free_vars().into_iter().collect::<std::vec::Vec<_>>(),
            vec![1]
        );
    }
}
