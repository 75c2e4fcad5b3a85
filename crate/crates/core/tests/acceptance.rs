//! Acceptance criteria, one PASS/FAIL line each. Exits nonzero if any fails.

use std::path::PathBuf;
use std::time::{Duration, Instant};

use rbmltt::bound::{BoundExpr, Verdict};
use rbmltt::check::{Checker, CheckerConfig};
use rbmltt::cost::CostModel;
use rbmltt::frontend::pretty::show_nf;
use rbmltt::frontend::{load_file, Program};
use rbmltt::harness::algebra::{run_algebra, AlgebraConfig};
use rbmltt::harness::roundtrip::roundtrip_suite;
use rbmltt::harness::suites::{canonicity, corpus, preservation, soundness, substitution, substitution_pairs};
use rbmltt::harness::{audit, AuditConfig, AuditReport, GenConfig, SuiteConfig};
use rbmltt::lattice::ExtNat;

fn corpus_file(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("corpus").join(name)
}

fn program(name: &str) -> Result<Program, String> {
    load_file(&corpus_file(name), &CostModel::default()).map_err(|e| e.to_string())
}

fn audit_sizes(file: &str, decl: &str, max: u64) -> Result<AuditReport, String> {
    let p = program(file)?;
    let cfg = AuditConfig {
        sizes: (0..=max).collect(),
        ..AuditConfig::default()
    };
    audit(&p, decl, &cfg).map_err(|e| e.to_string())
}

fn within(rep: &AuditReport) -> Result<(), String> {
    match rep.rows.iter().find(|r| !r.within) {
        Some(r) => Err(format!("n={} measured {} above bound {}", r.n, r.measured, r.bound)),
        None => Ok(()),
    }
}

fn timed(limit: Duration, f: impl FnOnce() -> Result<String, String>) -> Result<String, String> {
    let start = Instant::now();
    let r = f()?;
    let took = start.elapsed();
    if took > limit {
        return Err(format!("took {took:.2?}, limit {limit:?}"));
    }
    Ok(format!("{r} in {took:.2?}"))
}

fn sum_bound() -> Result<String, String> {
    timed(Duration::from_secs(1), || {
        let p = program("sum.rbm")?;
        let d = p.get("sum").ok_or("no sum")?;
        let r = Checker::new(CheckerConfig::with_cost(p.cost))
            .check_decl(&d.ty, &d.body)
            .map_err(|e| e.to_string())?;
        // n is the outer of the two binders
        let expected = BoundExpr::plus(BoundExpr::scalar(3, 1), BoundExpr::konst(2)).normalize();
        let got = r.latent.normalize();
        if got == expected {
            Ok(format!("normal form {}", show_nf(&got, &d.leading_names())))
        } else {
            Err(format!("normal form {got}, expected {expected}"))
        }
    })
}

fn sum_audit() -> Result<String, String> {
    timed(Duration::from_secs(1), || {
        let rep = audit_sizes("sum.rbm", "sum", 64)?;
        within(&rep)?;
        // hand trace: n+1 recursor steps and n additions at 2 each
        if let Some(r) = rep.rows.iter().find(|r| r.measured != ExtNat::Fin(3 * r.n + 1)) {
            return Err(format!("n={} measured {}, trace formula gives {}", r.n, r.measured, 3 * r.n + 1));
        }
        Ok("k(n) = 3n+1 <= 3n+2 for n in 0..=64".into())
    })
}

fn map_audit() -> Result<String, String> {
    let p = program("map.rbm")?;
    let d = p.get("map").ok_or("no map")?;
    let r = Checker::new(CheckerConfig::with_cost(p.cost))
        .check_decl(&d.ty, &d.body)
        .map_err(|e| e.to_string())?;
    let rep = audit_sizes("map.rbm", "map_incr", 32)?;
    within(&rep)?;
    let synthesized = show_nf(&r.latent.normalize(), &d.leading_names());
    Ok(format!("map synthesizes {synthesized}; map_incr within {} for n in 0..=32", rep.declared.unwrap_or_default()))
}

fn reverse_audit() -> Result<String, String> {
    let rep = audit_sizes("reverse.rbm", "reverse", 32)?;
    within(&rep)?;
    match &rep.comparison {
        Some(Verdict::Refuted { .. }) | None => Err("declared 4n+2 not accepted".into()),
        Some(v) => Ok(format!("synthesized {} vs 4n+2 {v}; cost overrides {:?}", rep.synthesized, rep.cost_overrides)),
    }
}

fn suite_line(r: &rbmltt::harness::SuiteReport, min_total: usize) -> Result<String, String> {
    if r.total < min_total {
        return Err(format!("only {} cases, need {min_total}", r.total));
    }
    if r.ok() {
        Ok(format!("{}/{}", r.passed, r.total))
    } else {
        Err(r.to_string())
    }
}

fn report(n: usize, name: &str, r: Result<String, String>) -> bool {
    match r {
        Ok(msg) => {
            println!("criterion {n:>2} PASS  {name}: {msg}");
            true
        }
        Err(msg) => {
            println!("criterion {n:>2} FAIL  {name}: {msg}");
            false
        }
    }
}

fn main() {
    let mut ok = true;
    ok &= report(1, "sum bound is 3n+2", sum_bound());
    ok &= report(2, "sum audit 0..=64", sum_audit());
    ok &= report(3, "map audit 0..=32", map_audit());
    ok &= report(4, "reverse audit 0..=32 under 4n+2", reverse_audit());

    let cfg = SuiteConfig::default();
    let start = Instant::now();
    let c = corpus(&cfg.gen, cfg.corpus_size);
    let sound = soundness(&c, &cfg);
    let sound_time = start.elapsed();
    let limit = Duration::from_secs(60);
    let r5 = suite_line(&sound, 1000).and_then(|s| {
        if sound_time > limit {
            Err(format!("took {sound_time:.2?}"))
        } else {
            Ok(format!("{s} in {sound_time:.2?}"))
        }
    });
    ok &= report(5, "cost soundness", r5);
    ok &= report(6, "preservation", suite_line(&preservation(&c, &cfg), 1000));
    ok &= report(7, "canonicity", suite_line(&canonicity(&c, &cfg), 1));
    let pairs = substitution_pairs(&cfg.gen, cfg.substitution_pairs);
    ok &= report(8, "substitution", suite_line(&substitution(&pairs, &cfg), 300));

    let algebra = run_algebra(&AlgebraConfig::default());
    let r9 = algebra.iter().try_fold(Vec::new(), |mut acc, r| {
        suite_line(r, 1000).map(|s| {
            acc.push(format!("{} {s}", r.suite));
            acc
        })
    });
    ok &= report(9, "lattice and bound algebra", r9.map(|v| v.join(", ")));

    let files = ["sum.rbm", "map.rbm", "reverse.rbm", "basics.rbm"];
    let programs: Result<Vec<(String, Program)>, String> =
        files.iter().map(|f| program(f).map(|p| (f.to_string(), p))).collect();
    let r10 = programs.and_then(|ps| suite_line(&roundtrip_suite(&ps, &GenConfig::default(), 500), 504));
    ok &= report(10, "frontend roundtrip", r10);

    if !ok {
        std::process::exit(1);
    }
}
