//! Property suites over generated terms: cost soundness, preservation,
//! canonicity and the substitution lemma.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::gen::{GenConfig, Generated, Generator, Goal};
use crate::bound::{BoundExpr, SizeEnv};
use crate::check::{check_closed, Checker, CheckerConfig};
use crate::cost::CostModel;
use crate::eval::{eval, readback, EvalConfig, Mutation, Value};
use crate::frontend::pretty::pretty;
use crate::lattice::ExtNat;
use crate::normalize::{convertible, normalize};
use crate::syntax::{Context, Term};

#[derive(Debug, Clone, PartialEq)]
pub struct SuiteConfig {
    pub gen: GenConfig,
    pub corpus_size: usize,
    pub substitution_pairs: usize,
    /// Values of the remaining free size variable in the substitution suite.
    pub sample_range: u64,
    pub mutation: Option<Mutation>,
    /// Guard against runaway evaluation of generated terms.
    pub step_limit: u64,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            gen: GenConfig::default(),
            corpus_size: 1000,
            substitution_pairs: 300,
            sample_range: 32,
            mutation: None,
            step_limit: 10_000_000,
        }
    }
}

impl SuiteConfig {
    pub fn with_seed(seed: u64) -> Self {
        let mut cfg = SuiteConfig::default();
        cfg.gen.seed = seed;
        cfg
    }

    fn cost(&self) -> CostModel {
        self.gen.cost
    }

    fn eval_config(&self) -> EvalConfig {
        EvalConfig {
            cost: self.cost(),
            step_limit: Some(self.step_limit),
            mutation: self.mutation,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Failure {
    pub index: usize,
    pub term: String,
    pub detail: String,
}

/// Outcome of one suite. Only the first few failures are kept.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SuiteReport {
    pub suite: &'static str,
    pub total: usize,
    pub passed: usize,
    pub failures: Vec<Failure>,
}

const KEPT_FAILURES: usize = 10;

impl SuiteReport {
    pub(crate) fn collect(suite: &'static str, outcomes: Vec<Option<Result<(), Failure>>>) -> SuiteReport {
        let mut report = SuiteReport {
            suite,
            total: 0,
            passed: 0,
            failures: Vec::new(),
        };
        for outcome in outcomes.into_iter().flatten() {
            report.total += 1;
            match outcome {
                Ok(()) => report.passed += 1,
                Err(f) if report.failures.len() < KEPT_FAILURES => report.failures.push(f),
                Err(_) => {}
            }
        }
        report
    }

    pub fn failed(&self) -> usize {
        self.total - self.passed
    }

    pub fn ok(&self) -> bool {
        self.total > 0 && self.passed == self.total
    }
}

impl fmt::Display for SuiteReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mark = if self.ok() { "ok" } else { "FAILED" };
        write!(
            f,
            "{:<13} {}/{} {mark}",
            self.suite, self.passed, self.total
        )?;
        for fail in &self.failures {
            write!(f, "\n  #{}: {}\n    {}", fail.index, fail.detail, fail.term)?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MetatheoryReport {
    pub seed: u64,
    pub corpus_size: usize,
    pub mutation: Option<Mutation>,
    pub suites: Vec<SuiteReport>,
}

impl MetatheoryReport {
    pub fn ok(&self) -> bool {
        self.suites.iter().all(SuiteReport::ok)
    }

    pub fn suite(&self, name: &str) -> Option<&SuiteReport> {
        self.suites.iter().find(|s| s.suite == name)
    }
}

impl fmt::Display for MetatheoryReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "seed {} corpus {}", self.seed, self.corpus_size)?;
        if let Some(m) = self.mutation {
            write!(f, " mutation {m:?}")?;
        }
        for s in &self.suites {
            write!(f, "\n{s}")?;
        }
        Ok(())
    }
}

/// Generated closed terms. A generator fault is kept as an error string so
/// that it shows up as a failure rather than shrinking the corpus.
pub type Corpus = Vec<Result<Generated, String>>;

pub fn corpus(cfg: &GenConfig, size: usize) -> Corpus {
    let mut g = Generator::new(cfg.clone());
    (0..size)
        .map(|_| g.generate().map_err(|e| e.to_string()))
        .collect()
}

fn fail(index: usize, term: &Term, detail: impl Into<String>) -> Failure {
    Failure {
        index,
        term: pretty(term),
        detail: detail.into(),
    }
}

fn gen_failure(index: usize, e: &str) -> Failure {
    Failure {
        index,
        term: String::new(),
        detail: format!("generator produced an ill-typed term: {e}"),
    }
}

/// Worker pool with room for deeply nested numerals and vectors.
fn pool() -> &'static rayon::ThreadPool {
    static POOL: std::sync::OnceLock<rayon::ThreadPool> = std::sync::OnceLock::new();
    POOL.get_or_init(|| {
        rayon::ThreadPoolBuilder::new()
            .stack_size(64 << 20)
            .build()
            .expect("thread pool")
    })
}

fn closed_value(b: &BoundExpr) -> Result<ExtNat, String> {
    b.eval_closed().map_err(|e| e.to_string())
}

/// Measured cost never exceeds the synthesized bound.
pub fn soundness(corpus: &Corpus, cfg: &SuiteConfig) -> SuiteReport {
    let ccfg = CheckerConfig::with_cost(cfg.cost());
    let ecfg = cfg.eval_config();
    let outcomes = pool().install(|| {
        corpus
            .par_iter()
            .enumerate()
            .map(|(i, item)| {
                let item = match item {
                    Ok(item) => item,
                    Err(e) => return Some(Err(gen_failure(i, e))),
                };
                Some((|| {
                    let b = check_closed(&ccfg, &item.term, &item.ty)
                        .map_err(|e| fail(i, &item.term, e.to_string()))?;
                    let bound = closed_value(&b).map_err(|e| fail(i, &item.term, e))?;
                    let r =
                        eval(&item.term, &ecfg).map_err(|e| fail(i, &item.term, e.to_string()))?;
                    if r.cost <= bound {
                        Ok(())
                    } else {
                        Err(fail(
                            i,
                            &item.term,
                            format!("measured {} exceeds bound {bound}", r.cost),
                        ))
                    }
                })())
            })
            .collect()
    });
    SuiteReport::collect("soundness", outcomes)
}

/// The value re-checks at the same type, and under the value-reading cost
/// model its bound stays below the bound of the original term.
pub fn preservation(corpus: &Corpus, cfg: &SuiteConfig) -> SuiteReport {
    let ccfg = CheckerConfig::with_cost(cfg.cost());
    let vcfg = CheckerConfig::with_cost(cfg.cost().value_reading());
    let ecfg = EvalConfig {
        mutation: None,
        ..cfg.eval_config()
    };
    let outcomes = pool().install(|| {
        corpus
            .par_iter()
            .enumerate()
            .map(|(i, item)| {
                let item = match item {
                    Ok(item) => item,
                    Err(e) => return Some(Err(gen_failure(i, e))),
                };
                Some((|| {
                    let b = check_closed(&ccfg, &item.term, &item.ty)
                        .map_err(|e| fail(i, &item.term, e.to_string()))?;
                    let r =
                        eval(&item.term, &ecfg).map_err(|e| fail(i, &item.term, e.to_string()))?;
                    let v = readback(&r.value);
                    let b2 = check_closed(&vcfg, &v, &item.ty).map_err(|e| {
                        fail(
                            i,
                            &item.term,
                            format!("value {} does not re-check: {e}", pretty(&v)),
                        )
                    })?;
                    let (lhs, rhs) = (closed_value(&b2), closed_value(&b));
                    match (lhs, rhs) {
                        (Ok(l), Ok(r)) if l <= r => Ok(()),
                        (l, r) => Err(fail(
                            i,
                            &item.term,
                            format!("value bound {l:?} above term bound {r:?}"),
                        )),
                    }
                })())
            })
            .collect()
    });
    SuiteReport::collect("preservation", outcomes)
}

/// Whether a value has the introduction form its type demands.
pub fn is_canonical(v: &Value, ty: &Term) -> bool {
    let Ok(ty) = normalize(ty) else { return false };
    match (&ty, v) {
        (Term::Nat, Value::Nat(_)) => true,
        (Term::Vec(a, n), Value::Vec(items)) => {
            n.as_numeral() == Some(items.len() as u64) && items.iter().all(|x| is_canonical(x, a))
        }
        (Term::Fin(n), Value::Fin(k)) => n.as_numeral().is_some_and(|n| *k < n),
        (Term::Sigma(a, b), Value::Pair(x, y)) => {
            is_canonical(x, a) && is_canonical(y, &b.subst(0, &readback(x)))
        }
        (Term::Pi(..), Value::Closure { .. }) => true,
        (Term::Id(a, lhs, rhs), Value::Refl(x)) => {
            is_canonical(x, a) && convertible(lhs, rhs).unwrap_or(false)
        }
        (Term::BoxType(_, a), Value::Boxed(_, x)) => is_canonical(x, a),
        (Term::Universe(_) | Term::El(_), Value::Type(_)) => true,
        _ => false,
    }
}

/// Closed terms of first-order and function types evaluate to canonical
/// forms.
pub fn canonicity(corpus: &Corpus, cfg: &SuiteConfig) -> SuiteReport {
    let ecfg = EvalConfig {
        mutation: None,
        ..cfg.eval_config()
    };
    let outcomes = pool().install(|| {
        corpus
            .par_iter()
            .enumerate()
            .map(|(i, item)| {
                let item = match item {
                    Ok(item) => item,
                    Err(e) => return Some(Err(gen_failure(i, e))),
                };
                if !item.goal.has_canonical_forms() {
                    return None;
                }
                Some(match eval(&item.term, &ecfg) {
                    Ok(r) if is_canonical(&r.value, &item.ty) => Ok(()),
                    Ok(r) => Err(fail(
                        i,
                        &item.term,
                        format!("non-canonical value {}", r.value),
                    )),
                    Err(e) => Err(fail(i, &item.term, e.to_string())),
                })
            })
            .collect()
    });
    SuiteReport::collect("canonicity", outcomes)
}

/// An open term, a closed value for its innermost variable, and their types.
/// The term also sees an outer natural, so bounds keep one free size variable.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubstPair {
    pub var_ty: Term,
    pub value: Term,
    pub term: Term,
    pub ty: Term,
}

/// Generate the pairs serially so the set depends only on the seed.
pub fn substitution_pairs(cfg: &GenConfig, count: usize) -> Vec<Result<SubstPair, String>> {
    let mut gcfg = cfg.clone();
    gcfg.seed = cfg.seed.wrapping_add(1);
    let mut rng = ChaCha8Rng::seed_from_u64(gcfg.seed);
    let mut g = Generator::new(gcfg);
    let ecfg = EvalConfig {
        step_limit: Some(10_000_000),
        ..EvalConfig::with_cost(cfg.cost)
    };
    (0..count)
        .map(|_| {
            let var_goal = match rng.gen_range(0..4) {
                0 => Goal::Vec(Term::numeral(rng.gen_range(0..=3))),
                1 => Goal::Fun(Box::new(Goal::Nat), Box::new(Goal::Nat)),
                _ => Goal::Nat,
            };
            let arg = g.closed(&var_goal, 3).map_err(|e| e.to_string())?;
            let v = eval(&arg.term, &ecfg).map_err(|e| e.to_string())?;
            let value = match var_goal {
                Goal::Fun(..) => Term::ann(readback(&v.value), arg.ty.clone()),
                _ => readback(&v.value),
            };
            let goal = match rng.gen_range(0..6) {
                0 => Goal::Vec(Term::numeral(rng.gen_range(0..=3))),
                1 => Goal::Pair(Box::new(Goal::Nat), Box::new(Goal::Nat)),
                2 => Goal::Fun(Box::new(Goal::Nat), Box::new(Goal::Nat)),
                _ => Goal::Nat,
            };
            let small = matches!(var_goal, Goal::Nat);
            let ctx = [(Term::Nat, true), (arg.ty.clone(), small)];
            let (term, ty) = g.open(&ctx, &goal, 4).map_err(|e| e.to_string())?;
            Ok(SubstPair {
                var_ty: arg.ty,
                value,
                term,
                ty,
            })
        })
        .collect()
}

fn check_pair(p: &SubstPair, cost: CostModel, range: u64) -> Result<(), String> {
    let mut c = Checker::new(CheckerConfig::with_cost(cost));
    let open_ctx: Context = [Term::Nat, p.var_ty.clone()].into_iter().collect();
    let closed_ctx: Context = [Term::Nat].into_iter().collect();
    let b = c
        .check(&open_ctx, &p.term, &p.ty)
        .map_err(|e| format!("open term: {e}"))?;
    let substituted = p.term.subst(0, &p.value);
    let b2 = c
        .check(&closed_ctx, &substituted, &p.ty.subst(0, &p.value))
        .map_err(|e| format!("substituted term: {e}"))?;
    let lhs = b.subst(0, &p.value);
    for y in 0..range {
        let env = SizeEnv::from_outermost(&[y]);
        let l = lhs.eval(&env).map_err(|e| e.to_string())?;
        let r = b2.eval(&env).map_err(|e| e.to_string())?;
        if l != r {
            return Err(format!(
                "at size {y}: substituted bound {l}, bound of substituted term {r}"
            ));
        }
    }
    Ok(())
}

/// Substituting a value commutes with typing and with bounds. Bounds are
/// compared under the value-reading model, where the value itself is free.
pub fn substitution(pairs: &[Result<SubstPair, String>], cfg: &SuiteConfig) -> SuiteReport {
    let outcomes = pool().install(|| {
        pairs
            .par_iter()
            .enumerate()
            .map(|(i, p)| {
                let p = match p {
                    Ok(p) => p,
                    Err(e) => return Some(Err(gen_failure(i, e))),
                };
                Some(
                    check_pair(p, cfg.cost().value_reading(), cfg.sample_range)
                        .map_err(|e| fail(i, &p.term, e)),
                )
            })
            .collect()
    });
    SuiteReport::collect("substitution", outcomes)
}

pub fn run_all(cfg: &SuiteConfig) -> MetatheoryReport {
    let c = corpus(&cfg.gen, cfg.corpus_size);
    let pairs = substitution_pairs(&cfg.gen, cfg.substitution_pairs);
    MetatheoryReport {
        seed: cfg.gen.seed,
        corpus_size: cfg.corpus_size,
        mutation: cfg.mutation,
        suites: vec![
            soundness(&c, cfg),
            preservation(&c, cfg),
            canonicity(&c, cfg),
            substitution(&pairs, cfg),
        ],
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small(seed: u64) -> SuiteConfig {
        SuiteConfig {
            corpus_size: 150,
            substitution_pairs: 60,
            ..SuiteConfig::with_seed(seed)
        }
    }

    #[test]
    fn suites_pass_on_small_corpus() {
        let r = run_all(&small(7));
        assert!(r.ok(), "{r}");
    }

    #[test]
    fn unary_add_breaks_soundness() {
        let cfg = SuiteConfig {
            mutation: Some(Mutation::UnaryAdd),
            ..small(7)
        };
        let c = corpus(&cfg.gen, cfg.corpus_size);
        assert!(soundness(&c, &cfg).failed() > 0);
    }

    #[test]
    fn canonical_forms() {
        assert!(is_canonical(&Value::Nat(3), &Term::Nat));
        assert!(!is_canonical(
            &Value::Nat(3),
            &Term::vec(Term::Nat, Term::Zero)
        ));
        assert!(is_canonical(&Value::Fin(1), &Term::fin(Term::numeral(2))));
        assert!(!is_canonical(&Value::Fin(2), &Term::fin(Term::numeral(2))));
    }
}
