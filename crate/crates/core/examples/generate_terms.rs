//! Sample well-typed closed terms and show their type, synthesized bound,
//! value and measured cost.
//!
//! cargo run --example generate_terms -- [seed] [count]

use rbmltt::check::{Checker, CheckerConfig};
use rbmltt::eval::{eval, EvalConfig};
use rbmltt::frontend::pretty::pretty;
use rbmltt::harness::{GenConfig, Generator};
use rbmltt::syntax::Context;

fn main() {
    let mut args = std::env::args().skip(1);
    let seed = args.next().and_then(|s| s.parse().ok()).unwrap_or(0x5eed);
    let count = args.next().and_then(|s| s.parse().ok()).unwrap_or(8);
    let gen = GenConfig {
        seed,
        ..GenConfig::default()
    };
    let mut checker = Checker::new(CheckerConfig::with_cost(gen.cost));
    let ecfg = EvalConfig::with_cost(gen.cost);
    let mut g = Generator::new(gen);
    for _ in 0..count {
        let item = match g.generate() {
            Ok(item) => item,
            Err(e) => {
                println!("generation failed: {e}");
                continue;
            }
        };
        println!("{:?}: {}", item.goal, pretty(&item.term));
        println!("  : {}", pretty(&item.ty));
        match (checker.infer(&Context::new(), &item.term), eval(&item.term, &ecfg)) {
            (Ok(t), Ok(r)) => {
                let bound = t.bound.eval_closed().map_or_else(|e| e.to_string(), |b| b.to_string());
                println!("  => {} with cost {} against bound {bound}\n", r.value, r.cost);
            }
            (Err(d), _) => println!("  rejected: {d}\n"),
            (_, Err(e)) => println!("  stuck: {e}\n"),
        }
    }
}
