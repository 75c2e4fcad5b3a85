//! Pretty-print a source file and check that it parses back to the same
//! program.
//!
//! cargo run --example roundtrip -- [file.rbm]

use std::path::PathBuf;

use rbmltt::cost::CostModel;
use rbmltt::frontend::load_file;
use rbmltt::frontend::pretty::pretty_program;
use rbmltt::harness::roundtrip::roundtrip_program;

fn main() {
    let path = std::env::args()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("corpus/basics.rbm"));
    let program = match load_file(&path, &CostModel::default()) {
        Ok(p) => p,
        Err(e) => {
            eprintln!("{e}");
            std::process::exit(1);
        }
    };
    print!("{}", pretty_program(&program));
    match roundtrip_program(&program) {
        Ok(()) => eprintln!("roundtrip ok: {} declarations", program.decls.len()),
        Err(e) => {
            eprintln!("roundtrip failed: {e}");
            std::process::exit(1);
        }
    }
}
