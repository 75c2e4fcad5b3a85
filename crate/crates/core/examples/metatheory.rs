//! Generate a corpus of well-typed terms and run the four property suites.
//!
//! cargo run --release --example metatheory -- [seed] [corpus-size]

use rbmltt::harness::{run_all, SuiteConfig};

fn main() {
    let mut args = std::env::args().skip(1);
    let seed = args.next().and_then(|s| s.parse().ok()).unwrap_or(0x5eed);
    let size = args.next().and_then(|s| s.parse().ok()).unwrap_or(1000);
    let cfg = SuiteConfig {
        corpus_size: size,
        ..SuiteConfig::with_seed(seed)
    };
    let report = run_all(&cfg);
    println!("{report}");
    if !report.ok() {
        std::process::exit(1);
    }
}
