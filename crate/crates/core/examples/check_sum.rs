//! Synthesize the cost of summing a vector and compare it with two
//! declarations: one that holds and one that is too tight.

use rbmltt::check::{Checker, CheckerConfig};
use rbmltt::cost::CostModel;
use rbmltt::frontend::load_str;
use rbmltt::frontend::pretty::{show_nf, show_signature};

const SUM: &str = "def sum : (n : Nat) ->[0] (v : Vec Nat n) ->[BOUND] Nat :=
  fun n v => vecrec (fun m w => Nat) v { nil => zero; cons m a w ih => add a ih }";

fn main() {
    for declared in ["3*n + 2", "2*n + 1"] {
        let src = SUM.replace("BOUND", declared);
        let program = load_str("sum", &src, &CostModel::default()).expect("parses");
        let d = &program.decls[0];
        let mut checker = Checker::new(CheckerConfig::with_cost(program.cost));
        let names = d.leading_names();
        match checker.check_decl(&d.ty, &d.body) {
            Ok(r) => {
                println!("{}", show_signature(&d.ty, &d.ty_names, names.len(), Some(&r.latent)));
                println!("  synthesized {}", show_nf(&r.latent.normalize(), &names));
                if let Some(v) = &r.verdict {
                    println!("  declared {declared}: {v}");
                }
            }
            Err(diag) => println!("declared {declared}: {diag}"),
        }
    }
}
