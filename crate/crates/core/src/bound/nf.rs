//! Normal forms for bounds: a finite join of rational polynomials.
//!
//! Each alternative is a polynomial over size variables, `log2` of size
//! variables, and opaque sub-bounds that the normaliser cannot open (for
//! instance the size of an arbitrary term). Coefficients are rationals with a
//! shared denominator so that closed forms of sums stay exact.

use std::collections::BTreeMap;

use num_integer::Integer;

use super::{is_opaque_size, size_of_term, BoundError, BoundExpr, SizeEnv};
use crate::lattice::{ceil_log2_succ, ExtNat};

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Factor {
    Var(usize),
    Log(usize),
    Opaque(BoundExpr),
}

/// Sorted multiset of factors; the empty monomial is the constant `1`.
pub type Monomial = Vec<Factor>;

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Poly {
    inf: bool,
    terms: BTreeMap<Monomial, i128>,
    denom: i128,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BoundNF {
    alts: Vec<Poly>,
}

impl Poly {
    pub fn zero() -> Poly {
        Poly {
            inf: false,
            terms: BTreeMap::new(),
            denom: 1,
        }
    }

    pub fn inf() -> Poly {
        Poly {
            inf: true,
            ..Poly::zero()
        }
    }

    pub fn constant(c: ExtNat) -> Poly {
        match c {
            ExtNat::Inf => Poly::inf(),
            ExtNat::Fin(n) => Poly::monomial(Vec::new(), n as i128),
        }
    }

    pub fn monomial(mono: Monomial, coeff: i128) -> Poly {
        let mut terms = BTreeMap::new();
        terms.insert(mono, coeff);
        Poly {
            inf: false,
            terms,
            denom: 1,
        }
        .canonical()
    }

    pub fn factor(f: Factor) -> Poly {
        Poly::monomial(vec![f], 1)
    }

    pub fn is_inf(&self) -> bool {
        self.inf
    }

    pub fn is_zero(&self) -> bool {
        !self.inf && self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, i128)> {
        self.terms.iter().map(|(m, c)| (m, *c))
    }

    pub(crate) fn coefficients_nonneg(&self) -> bool {
        self.terms.values().all(|c| *c >= 0)
    }

    pub fn denom(&self) -> i128 {
        self.denom
    }

    /// The constant value if the polynomial has no factors.
    pub fn as_constant(&self) -> Option<ExtNat> {
        if self.inf {
            return Some(ExtNat::Inf);
        }
        match self.terms.len() {
            0 => Some(ExtNat::ZERO),
            1 => {
                let (m, c) = self.terms.iter().next()?;
                if m.is_empty() && *c >= 0 && c % self.denom == 0 {
                    u64::try_from(c / self.denom).ok().map(ExtNat::Fin)
                } else {
                    None
                }
            }
            _ => None,
        }
    }

    fn canonical(mut self) -> Poly {
        if self.inf {
            return Poly::inf();
        }
        self.terms.retain(|_, c| *c != 0);
        if self.terms.is_empty() {
            return Poly::zero();
        }
        let g = self.terms.values().fold(self.denom, |g, c| g.gcd(c));
        if g > 1 {
            for c in self.terms.values_mut() {
                *c /= g;
            }
            self.denom /= g;
        }
        self
    }

    fn checked_add(&self, other: &Poly) -> Option<Poly> {
        if self.inf || other.inf {
            return Some(Poly::inf());
        }
        let denom = self.denom.checked_mul(other.denom)?;
        let mut terms: BTreeMap<Monomial, i128> = BTreeMap::new();
        for (m, c) in &self.terms {
            *terms.entry(m.clone()).or_default() += c.checked_mul(other.denom)?;
        }
        for (m, c) in &other.terms {
            let e = terms.entry(m.clone()).or_default();
            *e = e.checked_add(c.checked_mul(self.denom)?)?;
        }
        Some(
            Poly {
                inf: false,
                terms,
                denom,
            }
            .canonical(),
        )
    }

    /// `self - other`, ignoring infinity flags.
    pub(crate) fn sub_finite(&self, other: &Poly) -> Option<Poly> {
        let neg = Poly {
            inf: false,
            terms: other.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
            denom: other.denom,
        };
        let lhs = Poly {
            inf: false,
            ..self.clone()
        };
        lhs.checked_add(&neg)
    }

    /// Product of two polynomials. `None` when an infinite factor meets a
    /// non-constant one, which has no polynomial normal form.
    fn checked_mul(&self, other: &Poly) -> Option<Poly> {
        if self.inf || other.inf {
            let finite = if self.inf { other } else { self };
            if finite.inf {
                return Some(Poly::inf());
            }
            return match finite.as_constant() {
                Some(ExtNat::Fin(0)) => Some(Poly::zero()),
                Some(_) => Some(Poly::inf()),
                None => None,
            };
        }
        let denom = self.denom.checked_mul(other.denom)?;
        let mut terms: BTreeMap<Monomial, i128> = BTreeMap::new();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                let mut m = m1.clone();
                m.extend(m2.iter().cloned());
                m.sort();
                let e = terms.entry(m).or_default();
                *e = e.checked_add(c1.checked_mul(*c2)?)?;
            }
        }
        Some(
            Poly {
                inf: false,
                terms,
                denom,
            }
            .canonical(),
        )
    }

    fn scale(&self, num: i128, den: i128) -> Option<Poly> {
        if self.inf {
            return Some(if num == 0 { Poly::zero() } else { Poly::inf() });
        }
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| Some((m.clone(), c.checked_mul(num)?)))
            .collect::<Option<_>>()?;
        Some(
            Poly {
                inf: false,
                terms,
                denom: self.denom.checked_mul(den)?,
            }
            .canonical(),
        )
    }

    /// Apply `f` to every factor, rebuilding the polynomial.
    fn map_factors(&self, f: &dyn Fn(&Factor) -> Factor) -> Poly {
        if self.inf {
            return Poly::inf();
        }
        let mut terms: BTreeMap<Monomial, i128> = BTreeMap::new();
        for (m, c) in &self.terms {
            let mut m2: Monomial = m.iter().map(f).collect();
            m2.sort();
            *terms.entry(m2).or_default() += c;
        }
        Poly {
            inf: false,
            terms,
            denom: self.denom,
        }
        .canonical()
    }

    /// Evaluate under a size assignment. An infinite opaque factor acts as
    /// an unboundedly large number: the value is infinite when the terms
    /// carrying the most such factors have a positive total, and those terms
    /// vanish when their finite parts cancel or are zero.
    pub fn eval(&self, env: &SizeEnv) -> Result<ExtNat, BoundError> {
        if self.inf {
            return Ok(ExtNat::Inf);
        }
        // coefficient sums keyed by the number of infinite factors
        let mut by_degree: BTreeMap<usize, i128> = BTreeMap::new();
        for (m, c) in &self.terms {
            let mut prod: i128 = *c;
            let mut degree = 0;
            for f in m {
                let v = match f {
                    Factor::Var(i) => env.get(*i).ok_or(BoundError::UnboundSizeVar(*i))?,
                    Factor::Log(i) => {
                        ceil_log2_succ(env.get(*i).ok_or(BoundError::UnboundSizeVar(*i))?)
                    }
                    Factor::Opaque(e) => match e.eval(env)? {
                        ExtNat::Fin(v) => v,
                        ExtNat::Inf => {
                            degree += 1;
                            1
                        }
                    },
                };
                prod = match prod.checked_mul(v as i128) {
                    Some(p) => p,
                    None => return Ok(ExtNat::Inf),
                };
            }
            let slot = by_degree.entry(degree).or_insert(0);
            *slot = match slot.checked_add(prod) {
                Some(t) => t,
                None => return Ok(ExtNat::Inf),
            };
        }
        if let Some((_, lead)) = by_degree.iter().rev().find(|(d, c)| **d > 0 && **c != 0) {
            return Ok(if *lead > 0 { ExtNat::Inf } else { ExtNat::ZERO });
        }
        let total = by_degree.get(&0).copied().unwrap_or(0);
        let v = Integer::div_floor(&total, &self.denom).max(0);
        Ok(u64::try_from(v).map_or(ExtNat::Inf, ExtNat::Fin))
    }

    /// Index of the highest power of `Var(0)`; `None` if `0` occurs in any
    /// other form (under `log2` or inside an opaque factor).
    fn degree_in_var0(&self) -> Option<usize> {
        let mut deg = 0;
        for m in self.terms.keys() {
            let mut d = 0;
            for f in m {
                match f {
                    Factor::Var(0) => d += 1,
                    Factor::Var(_) => {}
                    Factor::Log(i) => {
                        if *i == 0 {
                            return None;
                        }
                    }
                    Factor::Opaque(e) => {
                        if e.has_free_var(0) {
                            return None;
                        }
                    }
                }
            }
            deg = deg.max(d);
        }
        Some(deg)
    }

    /// Split into coefficients of `Var(0)^k`, each shifted out of the binder.
    fn coefficients_in_var0(&self) -> Vec<Poly> {
        let mut out: Vec<Poly> = Vec::new();
        for (m, c) in &self.terms {
            let k = m.iter().filter(|f| **f == Factor::Var(0)).count();
            let rest: Monomial = m
                .iter()
                .filter(|f| **f != Factor::Var(0))
                .map(unshift_factor)
                .collect();
            while out.len() <= k {
                out.push(Poly::zero());
            }
            let mut terms = std::mem::take(&mut out[k].terms);
            *terms.entry(rest).or_default() += c;
            out[k] = Poly {
                inf: false,
                terms,
                denom: 1,
            };
        }
        out.into_iter()
            .map(|p| {
                Poly {
                    denom: self.denom,
                    ..p
                }
                .canonical()
            })
            .collect()
    }
}

fn unshift_factor(f: &Factor) -> Factor {
    match f {
        Factor::Var(i) => Factor::Var(i - 1),
        Factor::Log(i) => Factor::Log(i - 1),
        Factor::Opaque(e) => Factor::Opaque(e.unshift(1, 0)),
    }
}

/// `Σ_{i<N} i^k` as a polynomial in `N`, for `k ≤ 3`.
fn power_sum(k: usize, n: &Poly) -> Option<Poly> {
    let n2 = n.checked_mul(n)?;
    let n3 = n2.checked_mul(n)?;
    let n4 = n3.checked_mul(n)?;
    let lin = |parts: &[(&Poly, i128)], den: i128| -> Option<Poly> {
        let mut acc = Poly::zero();
        for (p, c) in parts {
            acc = acc.checked_add(&p.scale(*c, 1)?)?;
        }
        acc.scale(1, den)
    };
    match k {
        0 => Some(n.clone()),
        1 => lin(&[(&n2, 1), (n, -1)], 2),
        2 => lin(&[(&n3, 2), (&n2, -3), (n, 1)], 6),
        3 => lin(&[(&n4, 1), (&n3, -2), (&n2, 1)], 4),
        _ => None,
    }
}

impl BoundNF {
    fn from_alts(mut alts: Vec<Poly>) -> BoundNF {
        alts.sort();
        alts.dedup();
        if alts.iter().any(Poly::is_inf) {
            alts = vec![Poly::inf()];
        } else if alts.len() > 1 {
            alts.retain(|p| !p.is_zero());
            if alts.is_empty() {
                alts.push(Poly::zero());
            }
        }
        BoundNF { alts }
    }

    fn single(p: Poly) -> BoundNF {
        BoundNF { alts: vec![p] }
    }

    fn opaque(e: &BoundExpr) -> BoundNF {
        BoundNF::single(Poly::factor(Factor::Opaque(e.clone())))
    }

    pub fn alts(&self) -> &[Poly] {
        &self.alts
    }

    pub fn as_constant(&self) -> Option<ExtNat> {
        match self.alts.as_slice() {
            [p] => p.as_constant(),
            _ => None,
        }
    }

    pub fn eval(&self, env: &SizeEnv) -> Result<ExtNat, BoundError> {
        let mut best = ExtNat::ZERO;
        for p in &self.alts {
            best = best.max(p.eval(env)?);
        }
        Ok(best)
    }

    fn combine_with(
        &self,
        other: &BoundNF,
        op: impl Fn(&Poly, &Poly) -> Option<Poly>,
    ) -> Option<BoundNF> {
        let mut alts = Vec::new();
        for a in &self.alts {
            for b in &other.alts {
                alts.push(op(a, b)?);
            }
        }
        Some(BoundNF::from_alts(alts))
    }

    pub fn of(b: &BoundExpr) -> BoundNF {
        use BoundExpr::*;
        match b {
            Const(c) => BoundNF::single(Poly::constant(*c)),
            Bot => BoundNF::single(Poly::zero()),
            ScalarMul(c, i) => BoundNF::single(Poly::monomial(vec![Factor::Var(*i)], *c as i128)),
            Plus(x, y) => BoundNF::of(x)
                .combine_with(&BoundNF::of(y), Poly::checked_add)
                .unwrap_or_else(|| BoundNF::opaque(b)),
            Join(x, y) => {
                let mut alts = BoundNF::of(x).alts;
                alts.extend(BoundNF::of(y).alts);
                BoundNF::from_alts(alts)
            }
            CeilLog2(x) => {
                let inner = BoundNF::of(x);
                if let Some(c) = inner.as_constant() {
                    return BoundNF::single(Poly::constant(match c {
                        ExtNat::Fin(n) => ExtNat::Fin(ceil_log2_succ(n)),
                        ExtNat::Inf => ExtNat::Inf,
                    }));
                }
                if let [p] = inner.alts.as_slice() {
                    if p.denom == 1 && p.terms.len() == 1 {
                        if let Some((m, 1)) = p.terms.iter().next().map(|(m, c)| (m, *c)) {
                            if let [Factor::Var(i)] = m.as_slice() {
                                return BoundNF::single(Poly::factor(Factor::Log(*i)));
                            }
                        }
                    }
                }
                BoundNF::opaque(b)
            }
            Apply(body, arg) => {
                let size = size_of_term(arg);
                if !is_opaque_size(&size) {
                    return BoundNF::of(&body.subst(0, arg));
                }
                if !body.has_free_var(0) {
                    return BoundNF::of(&body.unshift(1, 0));
                }
                BoundNF::opaque(b)
            }
            SumBelow(limit, body) => {
                sum_closed_form(limit, body).unwrap_or_else(|| BoundNF::opaque(b))
            }
            NFold(count, body) => BoundNF::of(count)
                .combine_with(&BoundNF::of(body), Poly::checked_mul)
                .unwrap_or_else(|| BoundNF::opaque(b)),
        }
    }

    pub fn map_factors(&self, f: &dyn Fn(&Factor) -> Factor) -> BoundNF {
        BoundNF::from_alts(self.alts.iter().map(|p| p.map_factors(f)).collect())
    }
}

fn sum_closed_form(limit: &BoundExpr, body: &BoundExpr) -> Option<BoundNF> {
    let limit_nf = BoundNF::of(limit);
    let body_nf = BoundNF::of(body);
    let [n] = limit_nf.alts.as_slice() else {
        return None;
    };
    let [p] = body_nf.alts.as_slice() else {
        return None;
    };
    if p.inf {
        return match n.as_constant() {
            Some(ExtNat::Fin(0)) => Some(BoundNF::single(Poly::zero())),
            Some(_) => Some(BoundNF::single(Poly::inf())),
            None => None,
        };
    }
    if n.inf {
        return None;
    }
    p.degree_in_var0().filter(|d| *d <= 3)?;
    let mut acc = Poly::zero();
    for (k, coeff) in p.coefficients_in_var0().iter().enumerate() {
        if coeff.is_zero() {
            continue;
        }
        acc = acc.checked_add(&coeff.checked_mul(&power_sum(k, n)?)?)?;
    }
    Some(BoundNF::single(acc))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::Term;
    use BoundExpr as B;

    #[test]
    fn linear_terms_collect() {
        let a = B::scalar(2, 0) + B::var(0) + B::konst(1) + B::konst(1);
        let b = B::scalar(3, 0) + B::konst(2);
        assert_eq!(a.normalize(), b.normalize());
    }

    #[test]
    fn plus_distributes_over_join() {
        let a = B::plus(B::join(B::var(0), B::konst(3)), B::konst(1));
        let b = B::join(B::var(0) + B::konst(1), B::konst(4));
        assert_eq!(a.normalize(), b.normalize());
    }

    #[test]
    fn faulhaber_closed_forms() {
        // sum_{i<n} i = (n^2 - n) / 2
        let s = B::sum_below(B::var(0), B::var(0));
        let nf = s.normalize();
        assert_eq!(nf.alts().len(), 1);
        for n in 0..20u64 {
            let env = SizeEnv::from_outermost(&[n]);
            assert_eq!(
                nf.eval(&env).unwrap(),
                ExtNat::Fin(n * n.saturating_sub(1) / 2)
            );
        }
        // cubic body, constant offset, and an outer variable in the body
        let s3 = B::sum_below(
            B::var(0),
            B::nfold(B::var(0), B::nfold(B::var(0), B::var(0))) + B::var(1) + B::konst(2),
        );
        let nf3 = s3.normalize();
        assert!(nf3.alts().iter().all(|p| p
            .terms()
            .all(|(m, _)| !m.iter().any(|f| matches!(f, Factor::Opaque(_))))));
        for n in 0..12u64 {
            let env = SizeEnv::from_outermost(&[n]);
            assert_eq!(nf3.eval(&env).unwrap(), s3.eval(&env).unwrap(), "n = {n}");
        }
    }

    #[test]
    fn sum_of_constant_is_fold() {
        let s = B::sum_below(B::var(0), B::konst(3));
        assert_eq!(s.normalize(), B::scalar(3, 0).normalize());
    }

    #[test]
    fn log_normalizes_to_factor() {
        let nf = B::ceil_log2(B::var(0)).normalize();
        assert_eq!(
            nf.alts()[0].terms().next().unwrap().0,
            &vec![Factor::Log(0)]
        );
    }

    #[test]
    fn apply_substitutes_structured_sizes() {
        let a = B::apply(B::scalar(2, 0), Term::succ(Term::Var(0)));
        assert_eq!(a.normalize(), (B::scalar(2, 0) + B::konst(2)).normalize());
        let v = B::apply(B::konst(4), Term::app(Term::Var(3), Term::Var(0)));
        assert_eq!(v.normalize(), B::konst(4).normalize());
    }

    #[test]
    fn infinity_absorbs() {
        assert_eq!((B::inf() + B::var(0)).normalize(), B::inf().normalize());
        assert_eq!(
            B::nfold(B::konst(0), B::inf()).normalize(),
            B::zero().normalize()
        );
    }

    #[test]
    fn nf_agrees_with_eval_on_samples() {
        let cases = [
            B::sum_below(B::var(1), B::scalar(3, 0) + B::var(0)),
            B::nfold(B::var(0) + B::konst(1), B::var(1) + B::konst(2)),
            B::join(B::scalar(2, 0), B::var(1) + B::konst(5)),
            B::ceil_log2(B::var(0) + B::var(1)),
        ];
        for b in &cases {
            let nf = b.normalize();
            for x in 0..6 {
                for y in 0..6 {
                    let env = SizeEnv::from_outermost(&[x, y]);
                    assert_eq!(
                        nf.eval(&env).unwrap(),
                        b.eval(&env).unwrap(),
                        "{b:?} at {x},{y}"
                    );
                }
            }
        }
    }
}
