//! Cost-bound expressions.
//!
//! A bound is a symbolic resource expression over size variables. Size
//! variables are de Bruijn indices into the same context as terms, so a bound
//! annotation `(n : Nat) ->[3*n + 2] B` mentions `n` as index `0`.

mod dominance;
mod nf;

use std::collections::BTreeMap;
use std::collections::BTreeSet;
use std::ops::Add;

use crate::lattice::{ceil_log2_succ, ExtNat, Lattice};
use crate::syntax::Term;

pub use dominance::{bound_leq, bound_leq_with, DominanceConfig, Verdict};
pub use nf::{BoundNF, Factor, Poly};

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum BoundExpr {
    Const(ExtNat),
    Bot,
    Plus(Box<BoundExpr>, Box<BoundExpr>),
    Join(Box<BoundExpr>, Box<BoundExpr>),
    /// `c * n` for a size variable `n`.
    ScalarMul(u64, usize),
    /// `⌈log₂(b + 1)⌉`.
    CeilLog2(Box<BoundExpr>),
    /// The body binds one size variable, instantiated with the size of the
    /// term argument.
    Apply(Box<BoundExpr>, Box<Term>),
    /// `Σ_{i < limit} body`; the body binds `i`.
    SumBelow(Box<BoundExpr>, Box<BoundExpr>),
    /// `count ⊗ body`, the `count`-fold `⊕` of the body.
    NFold(Box<BoundExpr>, Box<BoundExpr>),
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum BoundError {
    #[error("size variable #{0} has no value")]
    UnboundSizeVar(usize),
    #[error("size argument does not reduce to a numeral: {0}")]
    NotANumeral(String),
}

/// Values for size variables, keyed by de Bruijn index.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SizeEnv {
    values: BTreeMap<usize, u64>,
}

impl SizeEnv {
    pub fn new() -> Self {
        Self::default()
    }

    /// Environment where `values[0]` is the outermost variable and the last
    /// value is index `0`.
    pub fn from_outermost(values: &[u64]) -> Self {
        let n = values.len();
        SizeEnv {
            values: values
                .iter()
                .enumerate()
                .map(|(k, v)| (n - 1 - k, *v))
                .collect(),
        }
    }

    pub fn get(&self, index: usize) -> Option<u64> {
        self.values.get(&index).copied()
    }

    pub fn set(&mut self, index: usize, value: u64) {
        self.values.insert(index, value);
    }

    /// Enter a binder whose variable takes `value`.
    pub fn push(&self, value: u64) -> SizeEnv {
        let mut values: BTreeMap<usize, u64> =
            self.values.iter().map(|(k, v)| (k + 1, *v)).collect();
        values.insert(0, value);
        SizeEnv { values }
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, u64)> + '_ {
        self.values.iter().map(|(k, v)| (*k, *v))
    }
}

impl BoundExpr {
    pub fn zero() -> BoundExpr {
        BoundExpr::Const(ExtNat::ZERO)
    }

    pub fn konst(n: u64) -> BoundExpr {
        BoundExpr::Const(ExtNat::Fin(n))
    }

    pub fn inf() -> BoundExpr {
        BoundExpr::Const(ExtNat::Inf)
    }

    /// The size variable itself.
    pub fn var(index: usize) -> BoundExpr {
        BoundExpr::ScalarMul(1, index)
    }

    pub fn scalar(c: u64, index: usize) -> BoundExpr {
        BoundExpr::ScalarMul(c, index)
    }

    pub fn ceil_log2(b: BoundExpr) -> BoundExpr {
        BoundExpr::CeilLog2(Box::new(b))
    }

    pub fn apply(body: BoundExpr, arg: Term) -> BoundExpr {
        BoundExpr::Apply(Box::new(body), Box::new(arg))
    }

    pub fn sum_below(limit: BoundExpr, body: BoundExpr) -> BoundExpr {
        BoundExpr::SumBelow(Box::new(limit), Box::new(body))
    }

    pub fn nfold(count: BoundExpr, body: BoundExpr) -> BoundExpr {
        BoundExpr::NFold(Box::new(count), Box::new(body))
    }

    /// `⊕` with light constant folding; `⊥` and `0` are units.
    pub fn plus(a: BoundExpr, b: BoundExpr) -> BoundExpr {
        match (a, b) {
            (x, y) if x.is_unit() => y,
            (x, y) if y.is_unit() => x,
            (BoundExpr::Const(x), BoundExpr::Const(y)) => BoundExpr::Const(x.combine(&y)),
            (BoundExpr::Plus(x, tail), BoundExpr::Const(c))
                if matches!(*tail, BoundExpr::Const(_)) =>
            {
                let BoundExpr::Const(t) = *tail else {
                    unreachable!()
                };
                BoundExpr::Plus(x, Box::new(BoundExpr::Const(t.combine(&c))))
            }
            (x, BoundExpr::Plus(y, tail)) if matches!(*tail, BoundExpr::Const(_)) => {
                BoundExpr::plus(BoundExpr::Plus(Box::new(x), y), *tail)
            }
            (x, y) => BoundExpr::Plus(Box::new(x), Box::new(y)),
        }
    }

    pub fn join(a: BoundExpr, b: BoundExpr) -> BoundExpr {
        match (a, b) {
            (x, y) if x.is_unit() => y,
            (x, y) if y.is_unit() => x,
            (x, y) if x == y => x,
            (BoundExpr::Const(x), BoundExpr::Const(y)) => BoundExpr::Const(x.max(y)),
            (x, y) => BoundExpr::Join(Box::new(x), Box::new(y)),
        }
    }

    pub fn sum(items: impl IntoIterator<Item = BoundExpr>) -> BoundExpr {
        items.into_iter().fold(BoundExpr::zero(), BoundExpr::plus)
    }

    fn is_unit(&self) -> bool {
        matches!(self, BoundExpr::Bot | BoundExpr::Const(ExtNat::Fin(0)))
    }

    /// Rebuild the bound, replacing free size variables by terms.
    ///
    /// Same contract as [`Term::map_vars`]. A replacement that is not a
    /// variable is turned into a bound through [`size_of_term`].
    pub fn map_vars<F>(&self, depth: usize, f: &F) -> BoundExpr
    where
        F: Fn(usize, usize) -> Term,
    {
        use BoundExpr::*;
        match self {
            Const(c) => Const(*c),
            Bot => Bot,
            Plus(a, b) => Plus(
                Box::new(a.map_vars(depth, f)),
                Box::new(b.map_vars(depth, f)),
            ),
            Join(a, b) => Join(
                Box::new(a.map_vars(depth, f)),
                Box::new(b.map_vars(depth, f)),
            ),
            ScalarMul(c, i) if *i < depth => ScalarMul(*c, *i),
            ScalarMul(c, i) => match f(*i - depth, depth) {
                Term::Var(j) => ScalarMul(*c, j),
                t if *c == 1 => size_of_term(&t),
                t => BoundExpr::nfold(size_of_term(&t), BoundExpr::konst(*c)),
            },
            CeilLog2(a) => CeilLog2(Box::new(a.map_vars(depth, f))),
            Apply(body, arg) => Apply(
                Box::new(body.map_vars(depth + 1, f)),
                Box::new(arg.map_vars(depth, f)),
            ),
            SumBelow(limit, body) => SumBelow(
                Box::new(limit.map_vars(depth, f)),
                Box::new(body.map_vars(depth + 1, f)),
            ),
            NFold(count, body) => NFold(
                Box::new(count.map_vars(depth, f)),
                Box::new(body.map_vars(depth, f)),
            ),
        }
    }

    pub fn shift(&self, amount: usize, cutoff: usize) -> BoundExpr {
        if amount == 0 {
            return self.clone();
        }
        self.map_vars(cutoff, &|k, d| Term::Var(k + d + amount))
    }

    pub fn unshift(&self, amount: usize, cutoff: usize) -> BoundExpr {
        self.map_vars(cutoff, &|k, d| Term::Var(k + d - amount))
    }

    /// `b[index := t]`, with the same conventions as [`Term::subst`].
    pub fn subst(&self, index: usize, replacement: &Term) -> BoundExpr {
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

    pub fn instantiate(&self, vals: &[Term]) -> BoundExpr {
        let k = vals.len();
        self.map_vars(0, &|i, d| {
            if i < k {
                vals[k - 1 - i].shift(d, 0)
            } else {
                Term::Var(i - k + d)
            }
        })
    }

    /// Free size variables, including those inside `Apply` arguments.
    pub fn free_vars(&self) -> BTreeSet<usize> {
        let mut out = BTreeSet::new();
        self.collect_free_vars(0, &mut out);
        out
    }

    fn collect_free_vars(&self, depth: usize, out: &mut BTreeSet<usize>) {
        use BoundExpr::*;
        match self {
            Const(_) | Bot => {}
            Plus(a, b) | Join(a, b) | NFold(a, b) => {
                a.collect_free_vars(depth, out);
                b.collect_free_vars(depth, out);
            }
            ScalarMul(_, i) => {
                if *i >= depth {
                    out.insert(*i - depth);
                }
            }
            CeilLog2(a) => a.collect_free_vars(depth, out),
            Apply(body, arg) => {
                body.collect_free_vars(depth + 1, out);
                arg.collect_free_vars(depth, out);
            }
            SumBelow(limit, body) => {
                limit.collect_free_vars(depth, out);
                body.collect_free_vars(depth + 1, out);
            }
        }
    }

    /// Size variables used directly as sizes, excluding those that only
    /// occur inside `Apply` term arguments.
    pub fn size_vars(&self) -> BTreeSet<usize> {
        fn go(b: &BoundExpr, depth: usize, out: &mut BTreeSet<usize>) {
            use BoundExpr::*;
            match b {
                Const(_) | Bot => {}
                Plus(x, y) | Join(x, y) | NFold(x, y) => {
                    go(x, depth, out);
                    go(y, depth, out);
                }
                ScalarMul(_, i) => {
                    if *i >= depth {
                        out.insert(*i - depth);
                    }
                }
                CeilLog2(x) => go(x, depth, out),
                Apply(body, _) => go(body, depth + 1, out),
                SumBelow(limit, body) => {
                    go(limit, depth, out);
                    go(body, depth + 1, out);
                }
            }
        }
        let mut out = BTreeSet::new();
        go(self, 0, &mut out);
        out
    }

    pub fn has_free_var(&self, index: usize) -> bool {
        self.free_vars().contains(&index)
    }

    pub fn is_closed(&self) -> bool {
        self.free_vars().is_empty()
    }

    pub fn normalize(&self) -> BoundNF {
        BoundNF::of(self)
    }

    /// Evaluate under an assignment of naturals to size variables.
    pub fn eval(&self, env: &SizeEnv) -> Result<ExtNat, BoundError> {
        use BoundExpr::*;
        Ok(match self {
            Const(c) => *c,
            Bot => ExtNat::ZERO,
            Plus(a, b) => a.eval(env)?.combine(&b.eval(env)?),
            Join(a, b) => a.eval(env)?.join(&b.eval(env)?),
            ScalarMul(c, i) => {
                let v = env.get(*i).ok_or(BoundError::UnboundSizeVar(*i))?;
                ExtNat::Fin(v).scale(*c)
            }
            CeilLog2(a) => match a.eval(env)? {
                ExtNat::Fin(n) => ExtNat::Fin(ceil_log2_succ(n)),
                ExtNat::Inf => ExtNat::Inf,
            },
            Apply(body, arg) => {
                let n = term_size(arg, env)?;
                body.eval(&env.push(n))?
            }
            SumBelow(limit, body) => match limit.eval(env)? {
                ExtNat::Inf => ExtNat::Inf,
                ExtNat::Fin(n) => {
                    let mut acc = ExtNat::ZERO;
                    for i in 0..n {
                        acc = acc.combine(&body.eval(&env.push(i))?);
                        if acc.is_inf() {
                            break;
                        }
                    }
                    acc
                }
            },
            NFold(count, body) => {
                let b = body.eval(env)?;
                match count.eval(env)? {
                    ExtNat::Fin(n) => b.nfold(n),
                    ExtNat::Inf if b == ExtNat::ZERO => ExtNat::ZERO,
                    ExtNat::Inf => ExtNat::Inf,
                }
            }
        })
    }

    /// Evaluate a closed bound.
    pub fn eval_closed(&self) -> Result<ExtNat, BoundError> {
        self.eval(&SizeEnv::new())
    }
}

impl Add for BoundExpr {
    type Output = BoundExpr;

    fn add(self, rhs: BoundExpr) -> BoundExpr {
        BoundExpr::plus(self, rhs)
    }
}

impl From<u64> for BoundExpr {
    fn from(n: u64) -> Self {
        BoundExpr::konst(n)
    }
}

/// Translate a natural-number term into a size expression.
///
/// Variables, numerals, successors and primitive additions translate
/// structurally; a closed term is reduced to a numeral; anything else stays
/// as an opaque `Apply` whose value is the size of the term.
pub fn size_of_term(t: &Term) -> BoundExpr {
    match t {
        Term::Var(i) => BoundExpr::var(*i),
        Term::Zero => BoundExpr::zero(),
        Term::Succ(a) => size_of_term(a) + BoundExpr::konst(1),
        Term::Add(a, b) => size_of_term(a) + size_of_term(b),
        Term::Ann(a, _) | Term::El(a) => size_of_term(a),
        other => match other
            .is_closed()
            .then(|| crate::normalize::closed_numeral(other))
            .flatten()
        {
            Some(n) => BoundExpr::konst(n),
            None => opaque_size(other.clone()),
        },
    }
}

fn opaque_size(t: Term) -> BoundExpr {
    BoundExpr::apply(BoundExpr::var(0), t)
}

pub(crate) fn is_opaque_size(b: &BoundExpr) -> bool {
    matches!(b, BoundExpr::Apply(body, _) if **body == BoundExpr::var(0))
}

/// Numeric size of a term under a size environment.
fn term_size(t: &Term, env: &SizeEnv) -> Result<u64, BoundError> {
    let s = size_of_term(t);
    if !contains_apply(&s) {
        return match s.eval(env)? {
            ExtNat::Fin(n) => Ok(n),
            ExtNat::Inf => Err(BoundError::NotANumeral(format!("{t:?}"))),
        };
    }
    for v in t.free_vars() {
        if env.get(v).is_none() {
            return Err(BoundError::UnboundSizeVar(v));
        }
    }
    let closed = t.map_vars(0, &|k, _| Term::numeral(env.get(k).unwrap_or(0)));
    crate::normalize::closed_numeral(&closed)
        .ok_or_else(|| BoundError::NotANumeral(format!("{t:?}")))
}

fn contains_apply(b: &BoundExpr) -> bool {
    use BoundExpr::*;
    match b {
        Const(_) | Bot | ScalarMul(..) => false,
        Apply(..) => true,
        Plus(a, b) | Join(a, b) | NFold(a, b) | SumBelow(a, b) => {
            contains_apply(a) || contains_apply(b)
        }
        CeilLog2(a) => contains_apply(a),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use BoundExpr as B;

    fn env(pairs: &[(usize, u64)]) -> SizeEnv {
        let mut e = SizeEnv::new();
        for (k, v) in pairs {
            e.set(*k, *v);
        }
        e
    }

    #[test]
    fn eval_examples() {
        let n10 = env(&[(0, 10)]);
        let b = B::scalar(3, 0) + B::konst(2);
        assert_eq!(b.eval(&n10).unwrap(), ExtNat::Fin(32));

        let lg = B::ceil_log2(B::var(0));
        assert_eq!(lg.eval(&env(&[(0, 8)])).unwrap(), ExtNat::Fin(4));
        assert_eq!(lg.eval(&env(&[(0, 0)])).unwrap(), ExtNat::Fin(0));

        let s = B::sum_below(B::var(0), B::var(0));
        assert_eq!(s.eval(&env(&[(0, 4)])).unwrap(), ExtNat::Fin(6));

        let f = B::nfold(B::var(0), B::konst(5));
        assert_eq!(f.eval(&env(&[(0, 3)])).unwrap(), ExtNat::Fin(15));

        assert_eq!(
            B::join(B::var(0), B::konst(7))
                .eval(&env(&[(0, 3)]))
                .unwrap(),
            ExtNat::Fin(7)
        );
    }

    #[test]
    fn eval_reports_unbound() {
        assert_eq!(
            B::var(2).eval(&SizeEnv::new()),
            Err(BoundError::UnboundSizeVar(2))
        );
    }

    #[test]
    fn apply_uses_term_size() {
        // (fun i. 2*i) applied to succ(succ(n)) at n = 3
        let b = B::apply(B::scalar(2, 0), Term::succ(Term::succ(Term::Var(0))));
        assert_eq!(b.eval(&env(&[(0, 3)])).unwrap(), ExtNat::Fin(10));
        // opaque argument goes through the normalizer
        let arg = Term::natrec(
            Term::Nat,
            Term::Var(0),
            Term::numeral(1),
            Term::succ(Term::succ(Term::Var(0))),
        );
        let b = B::apply(B::var(0), arg);
        assert_eq!(b.eval(&env(&[(0, 3)])).unwrap(), ExtNat::Fin(7));
    }

    #[test]
    fn plus_folds_constants() {
        assert_eq!(B::konst(1) + B::konst(2), B::konst(3));
        assert_eq!(B::Bot + B::var(0), B::var(0));
        assert_eq!(
            (B::var(0) + B::konst(1)) + B::konst(2),
            B::Plus(Box::new(B::var(0)), Box::new(B::konst(3)))
        );
    }

    #[test]
    fn subst_turns_scalar_into_fold() {
        let b = B::scalar(3, 0);
        let out = b.subst(0, &Term::succ(Term::Var(0)));
        assert_eq!(out.eval(&env(&[(0, 4)])).unwrap(), ExtNat::Fin(15));
        assert_eq!(b.subst(0, &Term::Var(5)), B::scalar(3, 5));
        assert_eq!(B::scalar(3, 2).subst(0, &Term::Zero), B::scalar(3, 1));
    }

    #[test]
    fn size_env_push_shifts() {
        let e = SizeEnv::from_outermost(&[7, 9]);
        assert_eq!(e.get(0), Some(9));
        assert_eq!(e.get(1), Some(7));
        let e2 = e.push(1);
        assert_eq!(e2.get(0), Some(1));
        assert_eq!(e2.get(2), Some(7));
    }

    #[test]
    fn free_vars_through_binders() {
        let b = B::sum_below(B::var(2), B::var(0) + B::var(3));
        assert_eq!(b.free_vars().into_iter().collect::<Vec<_>>(), vec![2]);
    }
}
