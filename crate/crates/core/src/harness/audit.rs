//! Empirical cost audit: run a declaration on canonical inputs of growing
//! size and compare the measured cost with its declared bound.

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use super::gen::inhabitant;
use crate::bound::{BoundError, BoundExpr, Verdict};
use crate::check::{Checker, CheckerConfig, Diagnostic};
use crate::eval::{eval, EvalConfig, EvalError, Mutation};
use crate::frontend::pretty::{show_nf, show_term};
use crate::frontend::Program;
use crate::lattice::ExtNat;
use crate::normalize::normalize;
use crate::syntax::Term;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AuditConfig {
    pub sizes: Vec<u64>,
    pub sample_range: u64,
    pub mutation: Option<Mutation>,
}

impl Default for AuditConfig {
    fn default() -> Self {
        AuditConfig {
            sizes: vec![0, 1, 2, 4, 8, 16, 32, 64],
            sample_range: 32,
            mutation: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AuditError {
    #[error("no declaration named `{0}`")]
    UnknownDecl(String),
    #[error("{0}")]
    Check(Diagnostic),
    #[error("cannot build a canonical argument of type `{0}`")]
    Unsupported(String),
    #[error("evaluation failed at size {n}: {err}")]
    Eval { n: u64, err: EvalError },
    #[error("bound does not evaluate at size {n}: {err}")]
    Bound { n: u64, err: BoundError },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AuditRow {
    pub n: u64,
    pub measured: ExtNat,
    pub bound: ExtNat,
    pub within: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AuditReport {
    pub decl: String,
    /// Cost-model entries that differ from the defaults.
    pub cost_overrides: BTreeMap<&'static str, ExtNat>,
    pub synthesized: String,
    pub declared: Option<String>,
    /// Synthesized bound against the declared one.
    pub comparison: Option<Verdict>,
    pub rows: Vec<AuditRow>,
}

impl AuditReport {
    pub fn ok(&self) -> bool {
        self.rows.iter().all(|r| r.within) && self.comparison.as_ref().is_none_or(Verdict::accepts)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("audit report serializes")
    }
}

impl fmt::Display for AuditReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "audit {}", self.decl)?;
        for (k, v) in &self.cost_overrides {
            writeln!(f, "  cost {k} = {v}")?;
        }
        writeln!(f, "  synthesized  {}", self.synthesized)?;
        if let (Some(d), Some(v)) = (&self.declared, &self.comparison) {
            writeln!(f, "  declared     {d}  ({v})")?;
        }
        writeln!(f, "  {:>6}  {:>10}  {:>10}  verdict", "n", "measured", "bound")?;
        for r in &self.rows {
            let mark = if r.within { "ok" } else { "EXCEEDED" };
            let (m, b) = (r.measured.to_string(), r.bound.to_string());
            writeln!(f, "  {:>6}  {m:>10}  {b:>10}  {mark}", r.n)?;
        }
        Ok(())
    }
}

/// One canonical argument per leading binder: each natural is `n`, every
/// other first-order type gets its all-zero inhabitant.
pub fn canonical_args(binders: &[Term], n: u64) -> Result<Vec<Term>, AuditError> {
    let mut args: Vec<Term> = Vec::new();
    for ty in binders {
        let ty = ty.instantiate(&args);
        let nf = normalize(&ty).unwrap_or_else(|_| ty.clone());
        let arg = match nf {
            Term::Nat => Term::numeral(n),
            _ => inhabitant(&nf).ok_or_else(|| AuditError::Unsupported(show_term(&nf, 0)))?,
        };
        args.push(arg);
    }
    Ok(args)
}

pub fn audit(program: &Program, name: &str, cfg: &AuditConfig) -> Result<AuditReport, AuditError> {
    let decl = program.get(name).ok_or_else(|| AuditError::UnknownDecl(name.into()))?;
    let mut checker = Checker::new(CheckerConfig {
        sample_range: cfg.sample_range,
        ..CheckerConfig::with_cost(program.cost)
    });
    let dc = checker.check_decl(&decl.ty, &decl.body).map_err(AuditError::Check)?;
    let names = decl.leading_names();
    let comparison = decl
        .expect_bound
        .as_ref()
        .map(|e| checker.leq(&dc.latent, e));
    let target: &BoundExpr = decl.expect_bound.as_ref().unwrap_or(&dc.latent);
    let binders: Vec<Term> = dc.binders.entries().to_vec();
    let ecfg = EvalConfig {
        mutation: cfg.mutation,
        ..EvalConfig::with_cost(program.cost)
    };
    let mut rows = Vec::new();
    for &n in &cfg.sizes {
        let args = canonical_args(&binders, n)?;
        let call = Term::apps(decl.reference(), args.iter().cloned());
        let measured = eval(&call, &ecfg).map_err(|err| AuditError::Eval { n, err })?.cost;
        let bound = target
            .instantiate(&args)
            .eval_closed()
            .map_err(|err| AuditError::Bound { n, err })?;
        rows.push(AuditRow {
            n,
            measured,
            bound,
            within: measured <= bound,
        });
    }
    Ok(AuditReport {
        decl: name.into(),
        cost_overrides: program.cost.overrides(),
        synthesized: show_nf(&dc.latent.normalize(), &names),
        declared: decl.expect_bound.as_ref().map(|e| show_nf(&e.normalize(), &names)),
        comparison,
        rows,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cost::CostModel;
    use crate::frontend::load_str;

    const SUM: &str = "@expect_bound(3*n + 2)\ndef sum : (n : Nat) ->[0] (v : Vec Nat n) ->[3*n + 2] Nat := \
        fun n v => vecrec (fun m w => Nat) v { nil => zero; cons m a w ih => add a ih }";

    #[test]
    fn sum_measures_three_n_plus_one() {
        let p = load_str("sum", SUM, &CostModel::default()).unwrap();
        let r = audit(&p, "sum", &AuditConfig::default()).unwrap();
        assert!(r.ok(), "{r}");
        for row in &r.rows {
            assert_eq!(row.measured, ExtNat::Fin(3 * row.n + 1));
            assert_eq!(row.bound, ExtNat::Fin(3 * row.n + 2));
        }
        assert_eq!(r.comparison, Some(Verdict::Proved));
    }

    #[test]
    fn tight_declaration_is_refuted() {
        let src = SUM.replacen("3*n + 2", "2*n + 1", 1);
        let p = load_str("sum", &src, &CostModel::default()).unwrap();
        let r = audit(&p, "sum", &AuditConfig::default()).unwrap();
        assert!(r.comparison.as_ref().is_some_and(Verdict::is_refuted));
        assert!(!r.ok());
    }

    #[test]
    fn canonical_vector_argument() {
        let binders = [Term::Nat, Term::vec(Term::Nat, Term::Var(0))];
        let args = canonical_args(&binders, 2).unwrap();
        assert_eq!(args[1], Term::vec_literal([Term::Zero, Term::Zero]));
    }
}
