//! Lattice laws, normal forms and dominance verdicts on random bounds.
//!
//! cargo run --release --example bound_algebra -- [seed] [cases]

use rbmltt::bound::{bound_leq, BoundExpr};
use rbmltt::frontend::pretty::show_nf;
use rbmltt::harness::algebra::{run_algebra, AlgebraConfig};

fn main() {
    let mut args = std::env::args().skip(1);
    let seed = args.next().and_then(|s| s.parse().ok()).unwrap_or(0x5eed);
    let cases = args.next().and_then(|s| s.parse().ok()).unwrap_or(1000);

    // sum over i < n of (2 + i) normalizes to a closed polynomial
    let n = BoundExpr::var(0);
    let body = BoundExpr::plus(BoundExpr::konst(2), BoundExpr::var(0));
    let tri = BoundExpr::sum_below(n.clone(), body);
    let names = ["n".to_string()];
    println!("sum(i < n, 2 + i) = {}", show_nf(&tri.normalize(), &names));
    let quad = BoundExpr::plus(BoundExpr::scalar(3, 0), BoundExpr::konst(2));
    println!("3*n + 2 <= 2*n + 1: {}", bound_leq(&quad, &BoundExpr::plus(BoundExpr::scalar(2, 0), BoundExpr::konst(1)), 32));
    println!("3*n + 2 <= 4*n + 2: {}", bound_leq(&quad, &BoundExpr::plus(BoundExpr::scalar(4, 0), BoundExpr::konst(2)), 32));

    let mut failed = false;
    for report in run_algebra(&AlgebraConfig { seed, cases, ..AlgebraConfig::default() }) {
        println!("{report}");
        failed |= !report.ok();
    }
    if failed {
        std::process::exit(1);
    }
}
