//! Cost-instrumented big-step evaluation of closed terms.
//!
//! Values cost nothing; each eliminator, application and primitive addition
//! charges its constant from the [`CostModel`]. The evaluator counts rule
//! firings, so the cost ledger and the total are produced together.

use std::collections::BTreeMap;
use std::fmt;
use std::rc::Rc;

use serde::Serialize;

use crate::cost::CostModel;
use crate::frontend::pretty::pretty;
use crate::lattice::{ExtNat, Lattice};
use crate::syntax::Term;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Value {
    Closure {
        body: Rc<Term>,
        env: Env,
    },
    Pair(Box<Value>, Box<Value>),
    Refl(Box<Value>),
    Nat(u64),
    /// Elements head first.
    Vec(Vec<Value>),
    /// `fsucc^k fzero`.
    Fin(u64),
    Boxed(ExtNat, Box<Value>),
    /// A type used as a term, with its environment substituted.
    Type(Term),
}

/// Persistent environment; the head is de Bruijn index 0.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Env(Option<Rc<EnvNode>>);

#[derive(Debug, PartialEq, Eq)]
pub struct EnvNode {
    value: Value,
    next: Env,
}

impl Env {
    pub fn new() -> Self {
        Env(None)
    }

    pub fn push(&self, value: Value) -> Env {
        Env(Some(Rc::new(EnvNode {
            value,
            next: self.clone(),
        })))
    }

    pub fn get(&self, mut index: usize) -> Option<&Value> {
        let mut cur = self.0.as_ref();
        while let Some(node) = cur {
            if index == 0 {
                return Some(&node.value);
            }
            index -= 1;
            cur = node.next.0.as_ref();
        }
        None
    }
}

/// Rules that charge a constant.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Rule {
    App,
    Proj1,
    Proj2,
    J,
    NatRec,
    VecRec,
    Unbox,
    Add,
}

impl Rule {
    pub const ALL: [Rule; 8] = [
        Rule::App,
        Rule::Proj1,
        Rule::Proj2,
        Rule::J,
        Rule::NatRec,
        Rule::VecRec,
        Rule::Unbox,
        Rule::Add,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Rule::App => "app",
            Rule::Proj1 => "proj1",
            Rule::Proj2 => "proj2",
            Rule::J => "j",
            Rule::NatRec => "natrec",
            Rule::VecRec => "vecrec",
            Rule::Unbox => "unbox",
            Rule::Add => "add",
        }
    }

    pub fn delta(self, cm: &CostModel) -> ExtNat {
        match self {
            Rule::App => cm.delta_app,
            Rule::Proj1 => cm.delta_proj1,
            Rule::Proj2 => cm.delta_proj2,
            Rule::J => cm.delta_j,
            Rule::NatRec => cm.delta_natrec,
            Rule::VecRec => cm.delta_vecrec,
            Rule::Unbox => cm.delta_unbox,
            Rule::Add => cm.delta_add,
        }
    }
}

/// Deliberate evaluator faults, for checking that the test suites notice.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Mutation {
    /// Addition charges once per unit of its first operand, plus once.
    UnaryAdd,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct EvalConfig {
    pub cost: CostModel,
    /// Abort after this many rule applications.
    pub step_limit: Option<u64>,
    pub mutation: Option<Mutation>,
}

impl EvalConfig {
    pub fn with_cost(cost: CostModel) -> Self {
        EvalConfig {
            cost,
            ..EvalConfig::default()
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum EvalError {
    #[error("evaluation is stuck at {rule}: {term}")]
    Stuck { rule: &'static str, term: String },
    #[error("unbound variable #{0} during evaluation")]
    Unbound(usize),
    #[error("step limit of {0} exceeded")]
    StepLimit(u64),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LedgerEntry {
    pub count: u64,
    pub delta: ExtNat,
    pub subtotal: ExtNat,
}

/// Per-rule cost breakdown of one evaluation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Ledger {
    pub rules: BTreeMap<&'static str, LedgerEntry>,
    pub total: ExtNat,
}

impl Ledger {
    fn from_counts(counts: &BTreeMap<Rule, u64>, cm: &CostModel) -> Ledger {
        let mut rules = BTreeMap::new();
        let mut total = ExtNat::ZERO;
        for (rule, count) in counts {
            let delta = rule.delta(cm);
            let subtotal = delta.nfold(*count);
            total = total.combine(&subtotal);
            rules.insert(
                rule.name(),
                LedgerEntry {
                    count: *count,
                    delta,
                    subtotal,
                },
            );
        }
        Ledger { rules, total }
    }

    pub fn count(&self, rule: Rule) -> u64 {
        self.rules.get(rule.name()).map_or(0, |e| e.count)
    }

    pub fn is_empty(&self) -> bool {
        self.rules.is_empty()
    }
}

impl fmt::Display for Ledger {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (name, e) in &self.rules {
            writeln!(
                f,
                "  {name:<8} {:>6} x {:>4} = {}",
                e.count, e.delta, e.subtotal
            )?;
        }
        write!(f, "  total {}", self.total)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EvalResult {
    pub value: Value,
    pub cost: ExtNat,
}

struct Machine<'c> {
    cfg: &'c EvalConfig,
    cost: ExtNat,
    counts: BTreeMap<Rule, u64>,
    steps: u64,
}

fn stuck(rule: &'static str, t: &Term) -> EvalError {
    EvalError::Stuck {
        rule,
        term: pretty(t),
    }
}

impl<'c> Machine<'c> {
    fn charge(&mut self, rule: Rule, times: u64) {
        *self.counts.entry(rule).or_default() += times;
        self.cost = self.cost.combine(&rule.delta(&self.cfg.cost).nfold(times));
    }

    fn tick(&mut self) -> Result<(), EvalError> {
        self.steps += 1;
        match self.cfg.step_limit {
            Some(limit) if self.steps > limit => Err(EvalError::StepLimit(limit)),
            _ => Ok(()),
        }
    }

    fn eval(&mut self, t: &Term, env: &Env) -> Result<Value, EvalError> {
        self.tick()?;
        Ok(match t {
            Term::Var(i) => env.get(*i).cloned().ok_or(EvalError::Unbound(*i))?,
            Term::Lam(body) => Value::Closure {
                body: Rc::new((**body).clone()),
                env: env.clone(),
            },
            Term::App(f, a) => {
                let fv = self.eval(f, env)?;
                let av = self.eval(a, env)?;
                let Value::Closure { body, env: cenv } = fv else {
                    return Err(stuck("application of a non-function", t));
                };
                let r = self.eval(&body, &cenv.push(av))?;
                self.charge(Rule::App, 1);
                r
            }
            Term::Pair(a, b) => {
                Value::Pair(Box::new(self.eval(a, env)?), Box::new(self.eval(b, env)?))
            }
            Term::Proj1(p) | Term::Proj2(p) => {
                let Value::Pair(a, b) = self.eval(p, env)? else {
                    return Err(stuck("projection from a non-pair", t));
                };
                if matches!(t, Term::Proj1(_)) {
                    self.charge(Rule::Proj1, 1);
                    *a
                } else {
                    self.charge(Rule::Proj2, 1);
                    *b
                }
            }
            Term::Refl(a) => Value::Refl(Box::new(self.eval(a, env)?)),
            Term::J { proof, method, .. } => {
                let Value::Refl(_) = self.eval(proof, env)? else {
                    return Err(stuck("J on a non-reflexivity proof", t));
                };
                let r = self.eval(method, env)?;
                self.charge(Rule::J, 1);
                r
            }
            Term::Zero => Value::Nat(0),
            Term::Succ(n) => match self.eval(n, env)? {
                Value::Nat(k) => Value::Nat(k + 1),
                _ => return Err(stuck("successor of a non-number", t)),
            },
            Term::NatRec {
                scrutinee,
                zero,
                succ,
                ..
            } => {
                let Value::Nat(n) = self.eval(scrutinee, env)? else {
                    return Err(stuck("natrec on a non-number", t));
                };
                let mut acc = self.eval(zero, env)?;
                self.charge(Rule::NatRec, 1);
                for m in 0..n {
                    acc = self.eval(succ, &env.push(Value::Nat(m)).push(acc))?;
                    self.charge(Rule::NatRec, 1);
                }
                acc
            }
            Term::Nil => Value::Vec(Vec::new()),
            Term::Cons(h, tl) => {
                let hv = self.eval(h, env)?;
                match self.eval(tl, env)? {
                    Value::Vec(mut items) => {
                        items.insert(0, hv);
                        Value::Vec(items)
                    }
                    _ => return Err(stuck("cons onto a non-vector", t)),
                }
            }
            Term::VecRec {
                scrutinee,
                nil,
                cons,
                ..
            } => {
                let Value::Vec(items) = self.eval(scrutinee, env)? else {
                    return Err(stuck("vecrec on a non-vector", t));
                };
                let mut acc = self.eval(nil, env)?;
                self.charge(Rule::VecRec, 1);
                let n = items.len();
                for i in (0..n).rev() {
                    let inner = env
                        .push(Value::Nat((n - 1 - i) as u64))
                        .push(items[i].clone())
                        .push(Value::Vec(items[i + 1..].to_vec()))
                        .push(acc);
                    acc = self.eval(cons, &inner)?;
                    self.charge(Rule::VecRec, 1);
                }
                acc
            }
            Term::FZero => Value::Fin(0),
            Term::FSucc(i) => match self.eval(i, env)? {
                Value::Fin(k) => Value::Fin(k + 1),
                _ => return Err(stuck("fsucc of a non-index", t)),
            },
            Term::BoxIntro(s, a) => Value::Boxed(*s, Box::new(self.eval(a, env)?)),
            Term::Unbox(a) => {
                let Value::Boxed(_, v) = self.eval(a, env)? else {
                    return Err(stuck("unbox of a non-box", t));
                };
                self.charge(Rule::Unbox, 1);
                *v
            }
            Term::Add(a, b) => {
                let (Value::Nat(x), Value::Nat(y)) = (self.eval(a, env)?, self.eval(b, env)?)
                else {
                    return Err(stuck("addition of non-numbers", t));
                };
                let times = match self.cfg.mutation {
                    Some(Mutation::UnaryAdd) => x + 1,
                    None => 1,
                };
                self.charge(Rule::Add, times);
                Value::Nat(x + y)
            }
            Term::Ann(a, _) | Term::El(a) => self.eval(a, env)?,
            Term::Universe(_)
            | Term::Pi(..)
            | Term::Sigma(..)
            | Term::Id(..)
            | Term::Nat
            | Term::Vec(..)
            | Term::Fin(..)
            | Term::BoxType(..) => Value::Type(close(t, env, 0)),
        })
    }
}

/// Substitute the environment into the free variables of `t` above `depth`.
fn close(t: &Term, env: &Env, depth: usize) -> Term {
    t.map_vars(depth, &|k, d| match env.get(k) {
        Some(v) => readback(v).shift(d, 0),
        None => Term::Var(k + d),
    })
}

/// Closed term denoting a value.
pub fn readback(v: &Value) -> Term {
    match v {
        Value::Closure { body, env } => Term::lam(close(body, env, 1)),
        Value::Pair(a, b) => Term::pair(readback(a), readback(b)),
        Value::Refl(a) => Term::refl(readback(a)),
        Value::Nat(n) => Term::numeral(*n),
        Value::Vec(items) => Term::vec_literal(items.iter().map(readback)),
        Value::Fin(k) => Term::fin_numeral(*k),
        Value::Boxed(s, a) => Term::box_intro(*s, readback(a)),
        Value::Type(t) => t.clone(),
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&pretty(&readback(self)))
    }
}

pub fn eval(t: &Term, cfg: &EvalConfig) -> Result<EvalResult, EvalError> {
    trace_eval(t, cfg).map(|(r, _)| r)
}

pub fn trace_eval(t: &Term, cfg: &EvalConfig) -> Result<(EvalResult, Ledger), EvalError> {
    let mut m = Machine {
        cfg,
        cost: ExtNat::ZERO,
        counts: BTreeMap::new(),
        steps: 0,
    };
    let value = m.eval(t, &Env::new())?;
    let ledger = Ledger::from_counts(&m.counts, &cfg.cost);
    debug_assert_eq!(ledger.total, m.cost);
    Ok((
        EvalResult {
            value,
            cost: m.cost,
        },
        ledger,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frontend::load_str;

    fn run(t: &Term) -> EvalResult {
        eval(t, &EvalConfig::default()).unwrap()
    }

    const SUM: &str = "def sum : (n : Nat) ->[0] (v : Vec Nat n) ->[3*n + 2] Nat := \
        fun n v => vecrec (fun m w => Nat) v { nil => zero; cons m a w ih => add a ih }";

    fn sum_app(xs: &[u64]) -> Term {
        let p = load_str("sum", SUM, &CostModel::default()).unwrap();
        let items = xs.iter().map(|x| Term::numeral(*x));
        Term::apps(
            p.decls[0].reference(),
            [Term::numeral(xs.len() as u64), Term::vec_literal(items)],
        )
    }

    #[test]
    fn values_cost_nothing() {
        let r = run(&Term::Zero);
        assert_eq!((r.value, r.cost), (Value::Nat(0), ExtNat::ZERO));
        let (_, ledger) = trace_eval(
            &Term::vec_literal([Term::numeral(3)]),
            &EvalConfig::default(),
        )
        .unwrap();
        assert!(ledger.is_empty());
    }

    #[test]
    fn sum_of_two() {
        let (r, ledger) = trace_eval(&sum_app(&[1, 2]), &EvalConfig::default()).unwrap();
        assert_eq!(r.value, Value::Nat(3));
        assert_eq!(r.cost, ExtNat::Fin(7));
        assert_eq!(ledger.count(Rule::VecRec), 3);
        assert_eq!(ledger.count(Rule::Add), 2);
        assert_eq!(ledger.total, r.cost);
    }

    #[test]
    fn sum_is_three_n_plus_one() {
        for n in 0..10u64 {
            let xs: Vec<u64> = (0..n).collect();
            assert_eq!(run(&sum_app(&xs)).cost, ExtNat::Fin(3 * n + 1));
        }
    }

    #[test]
    fn j_on_refl() {
        let t = Term::j(
            Term::Nat,
            Term::refl(Term::Zero),
            Term::add(Term::numeral(1), Term::numeral(1)),
        );
        let r = run(&t);
        assert_eq!(r.value, Value::Nat(2));
        assert_eq!(r.cost, ExtNat::Fin(3));
    }

    #[test]
    fn readback_round_trip() {
        let t = Term::app(
            Term::lam(Term::lam(Term::add(Term::Var(1), Term::Var(0)))),
            Term::numeral(2),
        );
        let v = run(&t).value;
        let back = readback(&v);
        assert_eq!(back, Term::lam(Term::add(Term::numeral(2), Term::Var(0))));
        let again = run(&back);
        assert_eq!((readback(&again.value), again.cost), (back, ExtNat::ZERO));
        assert_eq!(
            readback(&Value::Vec(vec![Value::Nat(1)])),
            Term::cons(Term::numeral(1), Term::Nil)
        );
    }

    #[test]
    fn natrec_cost_law() {
        // k_n = 0, k_z = 0, k_s = δ_+ for add ih 1
        let t = Term::natrec(
            Term::Nat,
            Term::numeral(5),
            Term::Zero,
            Term::add(Term::Var(0), Term::numeral(1)),
        );
        let r = run(&t);
        assert_eq!(r.value, Value::Nat(5));
        assert_eq!(r.cost, ExtNat::Fin(1 + 5 * 3));
    }

    #[test]
    fn stuck_is_an_error() {
        let e = eval(&Term::app(Term::Zero, Term::Zero), &EvalConfig::default()).unwrap_err();
        assert!(matches!(e, EvalError::Stuck { .. }));
    }

    #[test]
    fn step_limit() {
        let cfg = EvalConfig {
            step_limit: Some(10),
            ..EvalConfig::default()
        };
        assert_eq!(
            eval(&sum_app(&[1, 2, 3, 4]), &cfg).unwrap_err(),
            EvalError::StepLimit(10)
        );
    }

    #[test]
    fn unary_add_mutation_overcharges() {
        let cfg = EvalConfig {
            mutation: Some(Mutation::UnaryAdd),
            ..EvalConfig::default()
        };
        let t = Term::add(Term::numeral(4), Term::numeral(1));
        assert_eq!(eval(&t, &cfg).unwrap().cost, ExtNat::Fin(10));
    }
}
