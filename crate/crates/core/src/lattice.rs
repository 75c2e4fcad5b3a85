//! Resource lattices `(L, ≼, ⊕, ⊔, ⊥)`.
//!
//! The kernel is parameterised by a lattice of costs. Two concrete instances
//! ship here: [`ExtNat`], the extended naturals `ℕ ∪ {∞}` with addition, max
//! and zero (the instance the checker and evaluator use), and [`Product`], the
//! componentwise product of two lattices for multi-resource accounting.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::Serialize;

/// A resource lattice with sequential composition.
pub trait Lattice: Clone + PartialEq + fmt::Debug {
    fn bot() -> Self;
    /// Sequential composition `⊕`.
    fn combine(&self, other: &Self) -> Self;
    /// Least upper bound `⊔`.
    fn join(&self, other: &Self) -> Self;
    /// The partial order `≼`.
    fn leq(&self, other: &Self) -> bool;

    /// `n ⊗ b`: the `n`-fold `⊕` of `self`, with `0 ⊗ b = ⊥`.
    fn nfold(&self, n: u64) -> Self {
        let mut acc = Self::bot();
        for _ in 0..n {
            acc = self.combine(&acc);
        }
        acc
    }
}

/// Extended natural numbers. Arithmetic saturates at [`ExtNat::Inf`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ExtNat {
    Fin(u64),
    Inf,
}

impl Serialize for ExtNat {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            ExtNat::Fin(n) => s.serialize_u64(*n),
            ExtNat::Inf => s.serialize_str("inf"),
        }
    }
}

impl ExtNat {
    pub const ZERO: ExtNat = ExtNat::Fin(0);

    pub fn finite(self) -> Option<u64> {
        match self {
            ExtNat::Fin(n) => Some(n),
            ExtNat::Inf => None,
        }
    }

    pub fn is_inf(self) -> bool {
        matches!(self, ExtNat::Inf)
    }

    /// Saturating multiplication by a natural.
    pub fn scale(self, k: u64) -> ExtNat {
        match self {
            _ if k == 0 => ExtNat::ZERO,
            ExtNat::Fin(n) => n.checked_mul(k).map_or(ExtNat::Inf, ExtNat::Fin),
            ExtNat::Inf => ExtNat::Inf,
        }
    }
}

impl Default for ExtNat {
    fn default() -> Self {
        ExtNat::ZERO
    }
}

impl From<u64> for ExtNat {
    fn from(n: u64) -> Self {
        ExtNat::Fin(n)
    }
}

impl PartialOrd for ExtNat {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for ExtNat {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (ExtNat::Fin(a), ExtNat::Fin(b)) => a.cmp(b),
            (ExtNat::Fin(_), ExtNat::Inf) => Ordering::Less,
            (ExtNat::Inf, ExtNat::Fin(_)) => Ordering::Greater,
            (ExtNat::Inf, ExtNat::Inf) => Ordering::Equal,
        }
    }
}

impl Lattice for ExtNat {
    fn bot() -> Self {
        ExtNat::ZERO
    }

    fn combine(&self, other: &Self) -> Self {
        match (self, other) {
            (ExtNat::Fin(a), ExtNat::Fin(b)) => a.checked_add(*b).map_or(ExtNat::Inf, ExtNat::Fin),
            _ => ExtNat::Inf,
        }
    }

    fn join(&self, other: &Self) -> Self {
        (*self).max(*other)
    }

    fn leq(&self, other: &Self) -> bool {
        self <= other
    }

    fn nfold(&self, n: u64) -> Self {
        self.scale(n)
    }
}

impl fmt::Display for ExtNat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtNat::Fin(n) => write!(f, "{n}"),
            ExtNat::Inf => f.write_str("inf"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("invalid lattice element `{0}` (expected a natural number or `inf`)")]
pub struct ParseExtNatError(pub String);

impl FromStr for ExtNat {
    type Err = ParseExtNatError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s.eq_ignore_ascii_case("inf") || s == "∞" {
            return Ok(ExtNat::Inf);
        }
        s.parse::<u64>()
            .map(ExtNat::Fin)
            .map_err(|_| ParseExtNatError(s.to_string()))
    }
}

/// Componentwise product of two lattices.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Product<A, B>(pub A, pub B);

impl<A: Lattice, B: Lattice> Lattice for Product<A, B> {
    fn bot() -> Self {
        Product(A::bot(), B::bot())
    }

    fn combine(&self, other: &Self) -> Self {
        Product(self.0.combine(&other.0), self.1.combine(&other.1))
    }

    fn join(&self, other: &Self) -> Self {
        Product(self.0.join(&other.0), self.1.join(&other.1))
    }

    fn leq(&self, other: &Self) -> bool {
        self.0.leq(&other.0) && self.1.leq(&other.1)
    }
}

impl<A: fmt::Display, B: fmt::Display> fmt::Display for Product<A, B> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.0, self.1)
    }
}

/// `⌈log₂(n + 1)⌉`, which is `0` at `n = 0`.
pub fn ceil_log2_succ(n: u64) -> u64 {
    // bits needed to write n in binary
    (u64::BITS - n.leading_zeros()) as u64
}

#[cfg(test)]
mod tests {
    use super::*;

    fn n(v: u64) -> ExtNat {
        ExtNat::Fin(v)
    }

    #[test]
    fn combine_examples() {
        assert_eq!(n(0).combine(&n(5)), n(5));
        assert_eq!(n(3).combine(&n(4)), n(7));
        assert_eq!(
            Product(n(1), n(2)).combine(&Product(n(3), n(0))),
            Product(n(4), n(2))
        );
        assert_eq!(n(u64::MAX).combine(&n(1)), ExtNat::Inf);
    }

    #[test]
    fn join_and_order_examples() {
        assert_eq!(n(3).join(&n(5)), n(5));
        assert!(!Product(n(1), n(5)).leq(&Product(n(2), n(4))));
        assert!(!Product(n(2), n(4)).leq(&Product(n(1), n(5))));
        for x in [n(0), n(7), ExtNat::Inf] {
            assert!(ExtNat::bot().leq(&x));
        }
    }

    #[test]
    fn nfold_matches_repeated_combine() {
        assert_eq!(n(5).nfold(3), n(15));
        assert_eq!(Product(n(2), n(1)).nfold(4), Product(n(8), n(4)));
        assert_eq!(n(5).nfold(0), ExtNat::bot());
    }

    #[test]
    fn ceil_log2_convention() {
        let expected = [(0, 0), (1, 1), (2, 2), (3, 2), (4, 3), (7, 3), (8, 4)];
        for (input, out) in expected {
            assert_eq!(ceil_log2_succ(input), out, "n = {input}");
            // independent route through floating point
            let f = ((input + 1) as f64).log2().ceil() as u64;
            assert_eq!(f, out);
        }
    }

    #[test]
    fn parse_and_display() {
        assert_eq!("inf".parse::<ExtNat>().unwrap(), ExtNat::Inf);
        assert_eq!("12".parse::<ExtNat>().unwrap(), n(12));
        assert!("-1".parse::<ExtNat>().is_err());
        assert_eq!(ExtNat::Inf.to_string(), "inf");
    }
}
