use rbmltt::eval::Mutation;
use rbmltt::harness::{run_all, SuiteConfig};

#[test]
fn suites_pass_across_seeds() {
    for seed in [1, 2, 3, 7, 42] {
        let cfg = SuiteConfig {
            corpus_size: 300,
            substitution_pairs: 100,
            ..SuiteConfig::with_seed(seed)
        };
        let r = run_all(&cfg);
        assert!(r.ok(), "{r}");
    }
}

#[test]
fn every_suite_reports() {
    let r = run_all(&SuiteConfig {
        corpus_size: 50,
        substitution_pairs: 20,
        ..SuiteConfig::default()
    });
    for name in ["soundness", "preservation", "canonicity", "substitution"] {
        assert!(r.suite(name).is_some_and(|s| s.total > 0), "missing {name}\n{r}");
    }
}

#[test]
fn unary_add_mutation_is_caught() {
    let cfg = SuiteConfig {
        corpus_size: 300,
        substitution_pairs: 50,
        mutation: Some(Mutation::UnaryAdd),
        ..SuiteConfig::default()
    };
    let r = run_all(&cfg);
    let sound = r.suite("soundness").unwrap();
    assert!(sound.failed() > 0, "{r}");
    assert!(!r.ok());
}
