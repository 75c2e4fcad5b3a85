//! The environment machine agrees with a naive substitution evaluator on
//! values and on every ledger count.

use std::collections::BTreeMap;

use rbmltt::cost::CostModel;
use rbmltt::eval::{trace_eval, readback, EvalConfig, Rule};
use rbmltt::harness::{GenConfig, Generator};
use rbmltt::syntax::Term;

#[derive(Default)]
struct Reference {
    counts: BTreeMap<Rule, u64>,
}

impl Reference {
    fn charge(&mut self, r: Rule) {
        *self.counts.entry(r).or_default() += 1;
    }

    /// Big-step evaluation of a closed term; values are closed terms.
    fn eval(&mut self, t: &Term) -> Term {
        match t {
            Term::App(f, a) => {
                let Term::Lam(body) = self.eval(f) else { panic!("stuck app: {t:?}") };
                let a = self.eval(a);
                let r = self.eval(&body.subst(0, &a));
                self.charge(Rule::App);
                r
            }
            Term::Pair(a, b) => Term::pair(self.eval(a), self.eval(b)),
            Term::Proj1(p) | Term::Proj2(p) => {
                let Term::Pair(a, b) = self.eval(p) else { panic!("stuck proj") };
                if matches!(t, Term::Proj1(_)) {
                    self.charge(Rule::Proj1);
                    *a
                } else {
                    self.charge(Rule::Proj2);
                    *b
                }
            }
            Term::Refl(a) => Term::refl(self.eval(a)),
            Term::J { proof, method, .. } => {
                let Term::Refl(_) = self.eval(proof) else { panic!("stuck J") };
                let r = self.eval(method);
                self.charge(Rule::J);
                r
            }
            Term::Succ(n) => Term::Succ(Box::new(self.eval(n))),
            Term::NatRec { scrutinee, zero, succ, .. } => {
                let n = self.eval(scrutinee).as_numeral().expect("numeral scrutinee");
                let mut acc = self.eval(zero);
                self.charge(Rule::NatRec);
                for m in 0..n {
                    acc = self.eval(&succ.instantiate(&[Term::numeral(m), acc]));
                    self.charge(Rule::NatRec);
                }
                acc
            }
            Term::Cons(h, tl) => Term::Cons(Box::new(self.eval(h)), Box::new(self.eval(tl))),
            Term::VecRec { scrutinee, nil, cons, .. } => {
                let mut items = Vec::new();
                let mut cur = self.eval(scrutinee);
                while let Term::Cons(h, tl) = cur {
                    items.push(*h);
                    cur = *tl;
                }
                assert_eq!(cur, Term::Nil);
                let mut acc = self.eval(nil);
                self.charge(Rule::VecRec);
                for i in (0..items.len()).rev() {
                    let tail = Term::vec_literal(items[i + 1..].iter().cloned());
                    let len = Term::numeral((items.len() - 1 - i) as u64);
                    acc = self.eval(&cons.instantiate(&[len, items[i].clone(), tail, acc]));
                    self.charge(Rule::VecRec);
                }
                acc
            }
            Term::FSucc(i) => Term::FSucc(Box::new(self.eval(i))),
            Term::BoxIntro(s, a) => Term::BoxIntro(*s, Box::new(self.eval(a))),
            Term::Unbox(a) => {
                let Term::BoxIntro(_, v) = self.eval(a) else { panic!("stuck unbox") };
                self.charge(Rule::Unbox);
                *v
            }
            Term::Add(a, b) => {
                let x = self.eval(a).as_numeral().expect("numeral");
                let y = self.eval(b).as_numeral().expect("numeral");
                self.charge(Rule::Add);
                Term::numeral(x + y)
            }
            Term::Ann(a, _) | Term::El(a) => self.eval(a),
            Term::Var(i) => panic!("open term: #{i}"),
            _ => t.clone(),
        }
    }
}

fn agree_on(seed: u64, count: usize) {
    let mut g = Generator::new(GenConfig {
        seed,
        ..GenConfig::default()
    });
    let cfg = EvalConfig::with_cost(CostModel::default());
    for i in 0..count {
        let item = g.generate().unwrap();
        let (machine, ledger) = trace_eval(&item.term, &cfg).unwrap();
        let mut reference = Reference::default();
        let value = reference.eval(&item.term);
        assert!(
            readback(&machine.value).structural_eq(&value),
            "seed {seed} term {i}: machine {} vs reference {value:?}",
            machine.value
        );
        for (rule, n) in &reference.counts {
            assert_eq!(ledger.count(*rule), *n, "seed {seed} term {i}: {rule:?} count");
        }
        let total: u64 = ledger.rules.values().map(|e| e.count).sum();
        assert_eq!(total, reference.counts.values().sum::<u64>(), "seed {seed} term {i}");
    }
}

#[test]
fn machine_matches_substitution_semantics() {
    for seed in 1..=4 {
        agree_on(seed, 250);
    }
}
