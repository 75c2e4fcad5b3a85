//! Printing then parsing gives back the same program.

use super::gen::{GenConfig, Generator};
use super::suites::{Failure, SuiteReport};
use crate::cost::CostModel;
use crate::frontend::pretty::{pretty, pretty_program};
use crate::frontend::{elaborate_expr, load_str, parse_expr, Program};
use crate::syntax::Term;

/// `parse(pretty(t))` is `t` up to bound normal forms.
pub fn roundtrip_term(t: &Term) -> Result<(), String> {
    let text = pretty(t);
    let empty = Program {
        cost: CostModel::default(),
        decls: Vec::new(),
    };
    let expr = parse_expr("<roundtrip>", &text).map_err(|e| format!("{e}\n  in {text}"))?;
    let back = elaborate_expr(&expr, &empty).map_err(|e| format!("{e}\n  in {text}"))?;
    if back.structural_eq(t) {
        Ok(())
    } else {
        Err(format!("reparsed term differs\n  printed {text}\n  reprinted {}", pretty(&back)))
    }
}

/// Every declaration survives printing and reparsing, together with its
/// expected bound and the program's cost model.
pub fn roundtrip_program(p: &Program) -> Result<(), String> {
    let text = pretty_program(p);
    let back = load_str("<roundtrip>", &text, &CostModel::default()).map_err(|e| format!("{e}\n{text}"))?;
    if back.cost != p.cost {
        return Err("cost model changed".into());
    }
    if back.decls.len() != p.decls.len() {
        return Err(format!("{} declarations became {}", p.decls.len(), back.decls.len()));
    }
    for (a, b) in p.decls.iter().zip(&back.decls) {
        let bounds_agree = match (&a.expect_bound, &b.expect_bound) {
            (Some(x), Some(y)) => x.normalize() == y.normalize(),
            (None, None) => true,
            _ => false,
        };
        if a.name != b.name || !a.ty.structural_eq(&b.ty) || !a.body.structural_eq(&b.body) || !bounds_agree {
            return Err(format!("declaration `{}` changed\n{text}", a.name));
        }
    }
    Ok(())
}

/// The given programs plus `generated` random closed terms.
pub fn roundtrip_suite(programs: &[(String, Program)], gen: &GenConfig, generated: usize) -> SuiteReport {
    let mut outcomes = Vec::new();
    for (i, (name, p)) in programs.iter().enumerate() {
        outcomes.push(Some(roundtrip_program(p).map_err(|detail| Failure {
            index: i,
            term: name.clone(),
            detail,
        })));
    }
    let mut g = Generator::new(gen.clone());
    for i in 0..generated {
        let r = g
            .generate()
            .map_err(|e| e.to_string())
            .and_then(|item| roundtrip_term(&item.term).and_then(|_| roundtrip_term(&item.ty)));
        outcomes.push(Some(r.map_err(|detail| Failure {
            index: programs.len() + i,
            term: String::new(),
            detail,
        })));
    }
    SuiteReport::collect("roundtrip", outcomes)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generated_terms_roundtrip() {
        let r = roundtrip_suite(&[], &GenConfig::default(), 200);
        assert!(r.ok(), "{r}");
    }

    #[test]
    fn program_with_references_roundtrips() {
        let src = "@cost(delta_add = 3)\ndef one : Nat := 1\n@expect_bound(n + 2)\ndef f : (n : Nat) ->[n + 2] Nat := fun n => add one n";
        let p = load_str("t", src, &CostModel::default()).unwrap();
        roundtrip_program(&p).unwrap();
    }
}
