//! Audit every declaration with an expected bound in the bundled corpus.
//!
//! cargo run --release --example audit_corpus -- [max-size]

use std::path::Path;

use rbmltt::cost::CostModel;
use rbmltt::frontend::load_file;
use rbmltt::harness::{audit, AuditConfig};

fn main() {
    let max = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(16u64);
    let cfg = AuditConfig {
        sizes: (0..=max).collect(),
        ..AuditConfig::default()
    };
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("corpus");
    let mut failed = false;
    for file in ["sum.rbm", "map.rbm", "reverse.rbm", "basics.rbm"] {
        let program = load_file(&dir.join(file), &CostModel::default()).expect("corpus loads");
        for d in program.decls.iter().filter(|d| d.expect_bound.is_some()) {
            match audit(&program, &d.name, &cfg) {
                Ok(r) => {
                    println!("{file}: {r}");
                    failed |= !r.ok();
                }
                Err(e) => println!("{file}: {}: skipped, {e}\n", d.name),
            }
        }
    }
    if failed {
        std::process::exit(1);
    }
}
