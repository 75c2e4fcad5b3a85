//! Deciding `b1 ≼ b2` for open bounds, soundly but incompletely.

use std::collections::BTreeSet;
use std::fmt;

use serde::Serialize;

use super::nf::{BoundNF, Factor, Poly};
use super::{BoundExpr, SizeEnv};
use crate::lattice::ExtNat;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum Verdict {
    /// Holds for every assignment.
    Proved,
    /// Fails at the witness assignment (de Bruijn index, value).
    Refuted {
        witness: Vec<(usize, u64)>,
        lhs: ExtNat,
        rhs: ExtNat,
    },
    /// Holds at every assignment with each variable below `range`.
    Empirical { range: u64, samples: u64 },
    /// Could not be evaluated (an opaque size did not reduce).
    Unknown { reason: String },
}

impl Verdict {
    /// Anything but a refutation.
    pub fn accepts(&self) -> bool {
        !matches!(self, Verdict::Refuted { .. })
    }

    pub fn is_proved(&self) -> bool {
        matches!(self, Verdict::Proved)
    }

    pub fn is_refuted(&self) -> bool {
        matches!(self, Verdict::Refuted { .. })
    }

    pub fn witness_env(&self) -> Option<SizeEnv> {
        match self {
            Verdict::Refuted { witness, .. } => {
                let mut env = SizeEnv::new();
                for (k, v) in witness {
                    env.set(*k, *v);
                }
                Some(env)
            }
            _ => None,
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Proved => f.write_str("proved"),
            Verdict::Refuted { witness, lhs, rhs } => {
                f.write_str("refuted at ")?;
                if witness.is_empty() {
                    f.write_str("()")?;
                }
                for (n, (k, v)) in witness.iter().enumerate() {
                    if n > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "#{k}={v}")?;
                }
                write!(f, " ({lhs} > {rhs})")
            }
            Verdict::Empirical { range, samples } => {
                write!(f, "empirical ({samples} samples below {range})")
            }
            Verdict::Unknown { reason } => write!(f, "unknown ({reason})"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DominanceConfig {
    /// Each size variable is sampled in `0..sample_range`.
    pub sample_range: u64,
    /// Cap on the number of assignments; the per-variable range shrinks to
    /// respect it.
    pub max_samples: u64,
}

impl Default for DominanceConfig {
    fn default() -> Self {
        DominanceConfig {
            sample_range: 32,
            max_samples: 50_000,
        }
    }
}

pub fn bound_leq(b1: &BoundExpr, b2: &BoundExpr, sample_range: u64) -> Verdict {
    bound_leq_with(
        b1,
        b2,
        &DominanceConfig {
            sample_range: sample_range.max(1),
            ..DominanceConfig::default()
        },
    )
}

pub fn bound_leq_with(b1: &BoundExpr, b2: &BoundExpr, cfg: &DominanceConfig) -> Verdict {
    if b1 == b2 {
        return Verdict::Proved;
    }
    let (n1, n2) = (b1.normalize(), b2.normalize());
    if nf_proves_leq(&n1, &n2) {
        return Verdict::Proved;
    }
    sample(b1, b2, cfg)
}

/// Every left alternative is dominated, coefficient-wise, by some right one.
pub fn nf_proves_leq(lhs: &BoundNF, rhs: &BoundNF) -> bool {
    lhs.alts()
        .iter()
        .all(|l| rhs.alts().iter().any(|r| poly_dominated(l, r)))
}

fn poly_dominated(l: &Poly, r: &Poly) -> bool {
    if r.is_inf() {
        return true;
    }
    if l.is_inf() {
        return false;
    }
    if l.is_zero() {
        return true;
    }
    let Some(diff) = r.sub_finite(l) else {
        return false;
    };
    if diff.coefficients_nonneg() {
        return true;
    }
    // a negative log term can be traded for the larger variable itself
    let relaxed: Vec<(Vec<Factor>, i128)> = diff
        .terms()
        .map(|(m, c)| {
            if c < 0 {
                let m2 = m
                    .iter()
                    .map(|f| match f {
                        Factor::Log(i) => Factor::Var(*i),
                        other => other.clone(),
                    })
                    .collect::<Vec<_>>();
                (m2, c)
            } else {
                (m.clone(), c)
            }
        })
        .collect();
    let mut acc = Poly::zero();
    for (mut m, c) in relaxed {
        m.sort();
        match acc.sub_finite(&Poly::monomial(m, -c)) {
            Some(p) => acc = p,
            None => return false,
        }
    }
    acc.coefficients_nonneg()
}

fn sample(b1: &BoundExpr, b2: &BoundExpr, cfg: &DominanceConfig) -> Verdict {
    let vars: Vec<usize> = b1
        .free_vars()
        .union(&b2.free_vars())
        .copied()
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let range = effective_range(cfg.sample_range.max(1), vars.len(), cfg.max_samples);
    let mut assignment = vec![0u64; vars.len()];
    let mut samples = 0u64;
    loop {
        let mut env = SizeEnv::new();
        for (k, v) in vars.iter().zip(&assignment) {
            env.set(*k, *v);
        }
        match (b1.eval(&env), b2.eval(&env)) {
            (Ok(l), Ok(r)) => {
                samples += 1;
                if l > r {
                    return Verdict::Refuted {
                        witness: vars
                            .iter()
                            .copied()
                            .zip(assignment.iter().copied())
                            .collect(),
                        lhs: l,
                        rhs: r,
                    };
                }
            }
            (Err(e), _) | (_, Err(e)) => {
                return Verdict::Unknown {
                    reason: e.to_string(),
                }
            }
        }
        // odometer increment, lowest variable fastest
        let mut pos = 0;
        loop {
            if pos == assignment.len() {
                return Verdict::Empirical { range, samples };
            }
            assignment[pos] += 1;
            if assignment[pos] < range {
                break;
            }
            assignment[pos] = 0;
            pos += 1;
        }
    }
}

fn effective_range(range: u64, nvars: usize, cap: u64) -> u64 {
    let mut r = range;
    while r > 1 && (r as f64).powi(nvars as i32) > cap as f64 {
        r -= 1;
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;
    use BoundExpr as B;

    fn lin(a: u64, b: u64) -> BoundExpr {
        B::scalar(a, 0) + B::konst(b)
    }

    #[test]
    fn linear_examples() {
        assert_eq!(bound_leq(&lin(3, 2), &lin(3, 2), 16), Verdict::Proved);
        assert_eq!(bound_leq(&lin(2, 1), &lin(3, 2), 16), Verdict::Proved);
        let v = bound_leq(&lin(3, 2), &lin(2, 1), 16);
        let env = v.witness_env().expect("refuted");
        assert!(lin(3, 2).eval(&env).unwrap() > lin(2, 1).eval(&env).unwrap());
    }

    #[test]
    fn join_rules() {
        let j = B::join(B::var(0), B::konst(5));
        assert!(bound_leq(&j, &(B::var(0) + B::konst(5)), 8).is_proved());
        assert!(bound_leq(&B::var(0), &j, 8).is_proved());
        assert!(bound_leq(&j, &B::var(0), 8).is_refuted());
    }

    #[test]
    fn log_below_linear() {
        let lg = B::ceil_log2(B::var(0));
        assert!(bound_leq(&lg, &B::var(0), 8).is_proved());
        assert!(bound_leq(&B::var(0), &lg, 8).is_refuted());
        // n - log n is not a polynomial identity, needs the relaxation
        let lhs = B::scalar(2, 0) + B::ceil_log2(B::var(0));
        assert!(bound_leq(&lhs, &B::scalar(3, 0), 8).is_proved());
    }

    #[test]
    fn empirical_when_coefficients_fail() {
        // n*n <= n*n + 1 - n + n is trivially fine, but (n^2 - n)/2 <= n*n needs
        // no sampling while n*n <= 2^... style comparisons do
        let tri = B::sum_below(B::var(0), B::var(0));
        let sq = B::nfold(B::var(0), B::var(0));
        assert!(bound_leq(&tri, &sq, 8).is_proved());
        let v = bound_leq(&sq, &(tri.clone() + tri + B::var(0)), 8);
        // n^2 == 2 * (n^2 - n)/2 + n, equal normal forms
        assert!(v.is_proved(), "{v}");
        let v = bound_leq(
            &B::nfold(B::var(0), B::var(0)),
            &(B::scalar(4, 0) + B::konst(4)),
            8,
        );
        assert!(v.is_refuted());
        let v = bound_leq(&B::var(0), &B::nfold(B::var(0), B::var(0)), 8);
        assert!(matches!(v, Verdict::Empirical { .. }), "{v}");
    }

    #[test]
    fn infinity() {
        assert!(bound_leq(&B::var(0), &B::inf(), 4).is_proved());
        assert!(bound_leq(&B::inf(), &B::var(0), 4).is_refuted());
    }

    #[test]
    fn range_shrinks_with_arity() {
        assert_eq!(effective_range(32, 1, 50_000), 32);
        assert!(effective_range(32, 4, 50_000).pow(4) <= 50_000);
        assert_eq!(effective_range(32, 0, 50_000), 32);
    }
}
