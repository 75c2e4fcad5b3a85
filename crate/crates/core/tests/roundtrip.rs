use std::path::PathBuf;

use rbmltt::cost::CostModel;
use rbmltt::frontend::pretty::pretty_program;
use rbmltt::frontend::{load_file, load_str};
use rbmltt::harness::roundtrip::roundtrip_program;

const FILES: [&str; 4] = ["sum.rbm", "map.rbm", "reverse.rbm", "basics.rbm"];

fn path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("corpus").join(name)
}

#[test]
fn corpus_roundtrips() {
    for f in FILES {
        let p = load_file(&path(f), &CostModel::default()).unwrap();
        roundtrip_program(&p).unwrap_or_else(|e| panic!("{f}: {e}"));
    }
}

#[test]
fn printing_is_idempotent() {
    for f in FILES {
        let p = load_file(&path(f), &CostModel::default()).unwrap();
        let once = pretty_program(&p);
        let twice = pretty_program(&load_str(f, &once, &CostModel::default()).unwrap());
        assert_eq!(once, twice, "{f}");
    }
}
