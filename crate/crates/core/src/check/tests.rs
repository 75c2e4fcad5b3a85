use super::*;
use crate::bound::BoundExpr as B;
use crate::frontend::load_str;

fn cfg() -> CheckerConfig {
    CheckerConfig::default()
}

fn infer0(t: &Term) -> CResult<TypingResult> {
    infer_closed(&cfg(), t)
}

fn konst(b: &BoundExpr) -> Option<u64> {
    match b.eval_closed() {
        Ok(ExtNat::Fin(n)) => Some(n),
        _ => None,
    }
}

#[test]
fn zero_costs_one() {
    let r = infer0(&Term::Zero).unwrap();
    assert_eq!(r.ty, Term::Nat);
    assert_eq!(konst(&r.bound), Some(1));
}

#[test]
fn box_budget_violation() {
    let e = infer0(&Term::box_intro(ExtNat::ZERO, Term::succ(Term::Zero))).unwrap_err();
    assert_eq!(e.code, Code::BoxBudget);
    let ok = infer0(&Term::box_intro(ExtNat::Fin(2), Term::succ(Term::Zero))).unwrap();
    assert_eq!(ok.ty, Term::box_type(ExtNat::Fin(2), Term::Nat));
}

#[test]
fn formation_costs() {
    let mut c = Checker::new(cfg());
    let ctx = Context::new();
    assert_eq!(konst(&c.infer_type(&ctx, &Term::Nat).unwrap()), Some(1));
    let v = Term::vec(Term::Nat, Term::succ(Term::Zero));
    assert_eq!(konst(&c.infer_type(&ctx, &v).unwrap()), Some(4));
    let id = Term::id(Term::Nat, Term::Zero, Term::Zero);
    assert_eq!(konst(&c.infer_type(&ctx, &id).unwrap()), Some(4));
    let e = c.infer_type(&ctx, &Term::Zero).unwrap_err();
    assert_eq!(e.code, Code::NotAType);
}

#[test]
fn contexts() {
    let mut c = Checker::new(cfg());
    assert!(c.check_context(&Context::new()).is_ok());
    assert!(c.check_context(&[Term::Nat].into_iter().collect()).is_ok());
    let bad: Context = [Term::Zero].into_iter().collect();
    assert_eq!(c.check_context(&bad).unwrap_err().code, Code::NotAType);
}

#[test]
fn lambda_against_pi() {
    let ty = Term::pi(Term::Nat, B::Bot, Term::Nat);
    assert_eq!(
        check_closed(&cfg(), &Term::lam(Term::Var(0)), &ty).unwrap(),
        B::Bot
    );
    let ty2 = Term::pi(Term::Nat, B::Bot, Term::Nat);
    let e = check_closed(&cfg(), &Term::lam(Term::succ(Term::Var(0))), &ty2).unwrap_err();
    assert_eq!(e.code, Code::BoundExceeded);
}

#[test]
fn box_mono_subsumption() {
    let mut c = Checker::new(cfg());
    let ctx: Context = [Term::box_type(ExtNat::Fin(1), Term::Nat)]
        .into_iter()
        .collect();
    let b = c
        .check(
            &ctx,
            &Term::Var(0),
            &Term::box_type(ExtNat::Fin(3), Term::Nat),
        )
        .unwrap();
    assert_eq!(b, B::Bot);
    assert!(c
        .check(
            &ctx,
            &Term::Var(0),
            &Term::box_type(ExtNat::ZERO, Term::Nat)
        )
        .is_err());
}

#[test]
fn universe_cumulativity() {
    let b = check_closed(&cfg(), &Term::Nat, &Term::Universe(ExtNat::Fin(5))).unwrap();
    assert_eq!(konst(&b), Some(1));
    // the code of Nat lives in U[1]
    assert!(check_closed(&cfg(), &Term::Nat, &Term::Universe(ExtNat::ZERO)).is_err());
}

#[test]
fn application_substitutes_bound() {
    // f : (n : Nat) ->[2*n] Nat, applied to 3
    let fty = Term::pi(Term::Nat, B::scalar(2, 0), Term::Nat);
    let ctx: Context = [fty].into_iter().collect();
    let mut c = Checker::new(cfg());
    let r = c
        .infer(&ctx, &Term::app(Term::Var(0), Term::numeral(3)))
        .unwrap();
    // argument 3 costs 4, bound at 3 is 6
    assert_eq!(konst(&r.bound), Some(10));
}

#[test]
fn natrec_with_constant_step() {
    // natrec over 4 with zero-case 0 and step succ ih
    let t = Term::natrec(
        Term::Nat,
        Term::numeral(4),
        Term::Zero,
        Term::succ(Term::Var(0)),
    );
    let r = infer0(&t).unwrap();
    // b_n = 5, b_z = 1, base 1, 4 * (1 + 1)
    assert_eq!(konst(&r.bound), Some(15));
}

#[test]
fn conversion_examples() {
    let c = Checker::new(cfg());
    assert!(c
        .conv(&Term::app(Term::lam(Term::Var(0)), Term::Zero), &Term::Zero)
        .unwrap());
    let v1 = Term::vec(Term::Nat, Term::add(Term::numeral(1), Term::numeral(1)));
    assert!(c
        .conv(&v1, &Term::vec(Term::Nat, Term::numeral(2)))
        .unwrap());
}

#[test]
fn refl_and_j() {
    let id = Term::id(
        Term::Nat,
        Term::numeral(2),
        Term::add(Term::numeral(1), Term::numeral(1)),
    );
    assert!(check_closed(&cfg(), &Term::refl(Term::numeral(2)), &id).is_ok());
    let bad = Term::id(Term::Nat, Term::numeral(2), Term::numeral(3));
    assert_eq!(
        check_closed(&cfg(), &Term::refl(Term::numeral(2)), &bad)
            .unwrap_err()
            .code,
        Code::TypeMismatch
    );
    // transport a number along refl: J(_. Nat, refl 0, 7)
    let j = Term::j(
        Term::Nat,
        Term::ann(
            Term::refl(Term::Zero),
            Term::id(Term::Nat, Term::Zero, Term::Zero),
        ),
        Term::numeral(7),
    );
    let r = infer0(&j).unwrap();
    assert_eq!(r.ty, Term::Nat);
}

#[test]
fn vector_literal_length() {
    let v = Term::vec_literal([Term::numeral(1), Term::numeral(2)]);
    let r = infer0(&v).unwrap();
    assert_eq!(r.ty, Term::vec(Term::Nat, Term::numeral(2)));
    // 2 + 3 for the elements, 2 conses, 1 nil
    assert_eq!(konst(&r.bound), Some(8));
}

#[test]
fn size_variable_must_be_nat() {
    let vty = Term::vec(Term::Nat, Term::Zero);
    let t = Term::pi(vty, B::var(0), Term::Nat);
    let mut c = Checker::new(cfg());
    assert_eq!(
        c.infer_type(&Context::new(), &t).unwrap_err().code,
        Code::SizeVar
    );
}

const SUM: &str = "def sum : (n : Nat) ->[0] (v : Vec Nat n) ->[3*n + 2] Nat := \
    fun n v => vecrec (fun m w => Nat) v { nil => zero; cons m a w ih => add a ih }";

#[test]
fn sum_bound_is_three_n_plus_two() {
    let p = load_str("sum", SUM, &CostModel::default()).unwrap();
    let d = &p.decls[0];
    let mut c = Checker::new(cfg());
    let r = c.check_decl(&d.ty, &d.body).unwrap();
    assert_eq!(
        r.latent.normalize(),
        (B::scalar(3, 1) + B::konst(2)).normalize()
    );
    assert_eq!(r.bound, B::Bot);
    assert_eq!(r.verdict, Some(Verdict::Proved));
}

#[test]
fn declared_bound_too_tight() {
    let src = SUM.replace("3*n + 2", "2*n + 1");
    let p = load_str("sum", &src, &CostModel::default()).unwrap();
    let d = &p.decls[0];
    let e = Checker::new(cfg()).check_decl(&d.ty, &d.body).unwrap_err();
    assert_eq!(e.code, Code::BoundExceeded);
}

#[test]
fn vecrec_bound_dependency() {
    // the cons step applies the recursive result, which is a function
    let src = "def f : (n : Nat) ->[0] (v : Vec Nat n) ->[inf] Nat := fun n v => \
        vecrec (fun m w => Nat) v { nil => zero; cons m a w ih => natrec (fun k => Nat) ih { zero => 0; succ k r => r } }";
    let p = load_str("f", src, &CostModel::default()).unwrap();
    let d = &p.decls[0];
    let e = Checker::new(cfg()).check_decl(&d.ty, &d.body).unwrap_err();
    assert_eq!(e.code, Code::BoundDependency);
}

#[test]
fn ambient_budget_only_warns() {
    let mut c = Checker::new(CheckerConfig {
        budget: ExtNat::Fin(1),
        ..cfg()
    });
    let r = c.check_decl(&Term::Nat, &Term::numeral(3)).unwrap();
    assert_eq!(konst(&r.bound), Some(4));
    assert_eq!(c.warnings()[0].code, Code::AmbientBudget);
}

#[test]
fn deterministic() {
    let t = Term::natrec(
        Term::Nat,
        Term::numeral(2),
        Term::Zero,
        Term::add(Term::Var(1), Term::Var(0)),
    );
    assert_eq!(infer0(&t).unwrap(), infer0(&t).unwrap());
}
