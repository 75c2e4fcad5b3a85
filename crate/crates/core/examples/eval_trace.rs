//! Run `sum` on growing vectors and print the per-rule cost ledger.
//!
//! cargo run --example eval_trace -- [max-length]

use rbmltt::cost::CostModel;
use rbmltt::eval::{trace_eval, EvalConfig};
use rbmltt::frontend::load_str;
use rbmltt::syntax::Term;

const SUM: &str = "def sum : (n : Nat) ->[0] (v : Vec Nat n) ->[3*n + 2] Nat :=
  fun n v => vecrec (fun m w => Nat) v { nil => zero; cons m a w ih => add a ih }";

fn main() {
    let max = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(4u64);
    let program = load_str("sum", SUM, &CostModel::default()).expect("parses");
    let sum = program.get("sum").expect("declared").reference();
    let cfg = EvalConfig::with_cost(program.cost);
    for n in 0..=max {
        let v = Term::vec_literal((1..=n).map(Term::numeral));
        let call = Term::apps(sum.clone(), [Term::numeral(n), v]);
        let (r, ledger) = trace_eval(&call, &cfg).expect("evaluates");
        println!("sum [1..{n}] = {} (cost {})", r.value, r.cost);
        println!("{ledger}");
    }
}
