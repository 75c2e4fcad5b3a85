//! Randomized checks of the lattice laws and of the bound algebra:
//! normalization preserves meaning, and dominance verdicts are sound.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::suites::{Failure, SuiteReport};
use crate::bound::{bound_leq, BoundExpr, SizeEnv, Verdict};
use crate::lattice::{ExtNat, Lattice, Product};
use crate::syntax::Term;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AlgebraConfig {
    pub seed: u64,
    pub cases: usize,
    /// Number of free size variables in generated bounds.
    pub vars: usize,
    /// Size values are drawn from `0..env_range`.
    pub env_range: u64,
    /// Envs tried per bound.
    pub envs: usize,
    pub sample_range: u64,
}

impl Default for AlgebraConfig {
    fn default() -> Self {
        AlgebraConfig {
            seed: 0x5eed,
            cases: 1000,
            vars: 2,
            env_range: 50,
            envs: 20,
            sample_range: 32,
        }
    }
}

pub fn random_extnat(rng: &mut impl Rng) -> ExtNat {
    match rng.gen_range(0..10) {
        0 => ExtNat::Inf,
        1..=6 => ExtNat::Fin(rng.gen_range(0..10)),
        _ => ExtNat::Fin(rng.gen_range(0..1_000_000)),
    }
}

/// A random bound over `vars` free size variables.
pub fn random_bound(rng: &mut impl Rng, vars: usize, depth: usize) -> BoundExpr {
    let leaf = |rng: &mut dyn rand::RngCore| -> BoundExpr {
        match rng.gen_range(0..5) {
            0 => BoundExpr::Bot,
            1 | 2 if vars > 0 => BoundExpr::scalar(rng.gen_range(0..4), rng.gen_range(0..vars)),
            3 if rng.gen_range(0..10) == 0 => BoundExpr::inf(),
            _ => BoundExpr::konst(rng.gen_range(0..8)),
        }
    };
    if depth == 0 {
        return leaf(rng);
    }
    let d = depth - 1;
    match rng.gen_range(0..9) {
        0 | 1 => leaf(rng),
        2 => BoundExpr::plus(random_bound(rng, vars, d), random_bound(rng, vars, d)),
        3 => BoundExpr::join(random_bound(rng, vars, d), random_bound(rng, vars, d)),
        4 => BoundExpr::ceil_log2(random_bound(rng, vars, d)),
        5 => BoundExpr::sum_below(random_limit(rng, vars), random_bound(rng, vars + 1, d)),
        6 => BoundExpr::nfold(random_limit(rng, vars), random_bound(rng, vars, d)),
        7 => BoundExpr::apply(random_bound(rng, vars + 1, d), Term::numeral(rng.gen_range(0..6))),
        _ => BoundExpr::plus(leaf(rng), leaf(rng)),
    }
}

/// A small count, so sums and folds stay cheap to evaluate.
fn random_limit(rng: &mut impl Rng, vars: usize) -> BoundExpr {
    if vars > 0 && rng.gen_bool(0.6) {
        BoundExpr::var(rng.gen_range(0..vars))
    } else {
        BoundExpr::konst(rng.gen_range(0..6))
    }
}

fn random_env(rng: &mut impl Rng, vars: usize, range: u64) -> SizeEnv {
    let mut env = SizeEnv::new();
    for i in 0..vars {
        env.set(i, rng.gen_range(0..range.max(1)));
    }
    env
}

fn lattice_laws<L: Lattice>(a: &L, b: &L, c: &L) -> Result<(), String> {
    let bot = L::bot();
    let checks = [
        ("combine associative", a.combine(&b.combine(c)) == a.combine(b).combine(c)),
        ("combine commutative", a.combine(b) == b.combine(a)),
        ("bot is a unit", a.combine(&bot) == *a),
        ("join associative", a.join(&b.join(c)) == a.join(b).join(c)),
        ("join commutative", a.join(b) == b.join(a)),
        ("join idempotent", a.join(a) == *a),
        ("bot is least", bot.leq(a)),
        ("order reflexive", a.leq(a)),
        ("order antisymmetric", !(a.leq(b) && b.leq(a)) || a == b),
        ("order transitive", !(a.leq(b) && b.leq(c)) || a.leq(c)),
        ("order agrees with join", a.leq(b) == (a.join(b) == *b)),
        ("combine monotone", !a.leq(b) || a.combine(c).leq(&b.combine(c))),
        ("join is an upper bound", a.leq(&a.join(b)) && b.leq(&a.join(b))),
    ];
    match checks.iter().find(|(_, ok)| !ok) {
        Some((law, _)) => Err(format!("{law} fails for {a:?}, {b:?}, {c:?}")),
        None => Ok(()),
    }
}

fn case_failure(index: usize, what: &str, detail: String) -> Failure {
    Failure {
        index,
        term: what.to_string(),
        detail,
    }
}

/// Laws of the extended naturals and of their product.
pub fn lattice_suite(cfg: &AlgebraConfig) -> SuiteReport {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let outcomes = (0..cfg.cases)
        .map(|i| {
            let [a, b, c] = [(); 3].map(|_| random_extnat(&mut rng));
            let [p, q, r] = [(); 3].map(|_| Product(random_extnat(&mut rng), random_extnat(&mut rng)));
            let res = lattice_laws(&a, &b, &c).and_then(|_| lattice_laws(&p, &q, &r));
            Some(res.map_err(|e| case_failure(i, "lattice", e)))
        })
        .collect();
    SuiteReport::collect("lattice", outcomes)
}

/// Evaluating a bound and evaluating its normal form agree.
pub fn normalize_suite(cfg: &AlgebraConfig) -> SuiteReport {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed.wrapping_add(1));
    let outcomes = (0..cfg.cases)
        .map(|i| {
            let b = random_bound(&mut rng, cfg.vars, 4);
            let nf = b.normalize();
            let envs: Vec<SizeEnv> = (0..cfg.envs).map(|_| random_env(&mut rng, cfg.vars, cfg.env_range)).collect();
            let res = envs.iter().try_for_each(|env| {
                let direct = b.eval(env).map_err(|e| e.to_string())?;
                let normal = nf.eval(env).map_err(|e| e.to_string())?;
                if direct == normal {
                    Ok(())
                } else {
                    Err(format!("at {env:?}: bound gives {direct}, normal form {nf} gives {normal}"))
                }
            });
            Some(res.map_err(|e| case_failure(i, &format!("{b:?}"), e)))
        })
        .collect();
    SuiteReport::collect("normalize", outcomes)
}

/// `Proved` holds at every sampled assignment and a `Refuted` witness really
/// breaks the inequality.
pub fn dominance_suite(cfg: &AlgebraConfig) -> SuiteReport {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed.wrapping_add(2));
    let outcomes = (0..cfg.cases)
        .map(|i| {
            let lhs = random_bound(&mut rng, cfg.vars, 3);
            // half the cases compare against a bound that dominates by construction
            let rhs = if rng.gen_bool(0.5) {
                BoundExpr::plus(lhs.clone(), random_bound(&mut rng, cfg.vars, 2))
            } else {
                random_bound(&mut rng, cfg.vars, 3)
            };
            let verdict = bound_leq(&lhs, &rhs, cfg.sample_range);
            let holds_at = |env: &SizeEnv| -> Result<bool, String> {
                let l = lhs.eval(env).map_err(|e| e.to_string())?;
                let r = rhs.eval(env).map_err(|e| e.to_string())?;
                Ok(l <= r)
            };
            let res = match &verdict {
                Verdict::Proved | Verdict::Empirical { .. } => (0..cfg.envs).try_for_each(|_| {
                    // a proof covers every assignment, not just the sampled box
                    let range = if verdict.is_proved() { cfg.env_range } else { cfg.sample_range };
                    let env = random_env(&mut rng, cfg.vars, range);
                    match holds_at(&env)? {
                        true => Ok(()),
                        false => Err(format!("{verdict} but fails at {env:?}")),
                    }
                }),
                Verdict::Refuted { .. } => {
                    let env = verdict.witness_env().unwrap_or_default();
                    match holds_at(&env) {
                        Ok(false) => Ok(()),
                        Ok(true) => Err(format!("witness {verdict} does not refute")),
                        Err(e) => Err(e),
                    }
                }
                Verdict::Unknown { reason } => Err(format!("closed-form bounds gave unknown: {reason}")),
            };
            Some(res.map_err(|e| case_failure(i, &format!("{lhs:?} <= {rhs:?}"), e)))
        })
        .collect();
    SuiteReport::collect("dominance", outcomes)
}

pub fn run_algebra(cfg: &AlgebraConfig) -> Vec<SuiteReport> {
    vec![lattice_suite(cfg), normalize_suite(cfg), dominance_suite(cfg)]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn algebra_suites_pass() {
        let cfg = AlgebraConfig {
            cases: 300,
            ..AlgebraConfig::default()
        };
        for r in run_algebra(&cfg) {
            assert!(r.ok(), "{r}");
        }
    }
}
