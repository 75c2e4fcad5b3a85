//! Uninstrumented normalisation, used for conversion checking and for
//! reading sizes out of closed terms.
//!
//! Full normalisation by substitution: children first, then the head rule.
//! Recursors over literal scrutinees unfold bottom-up so that deep numerals
//! do not nest the call stack.

use crate::syntax::Term;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum NormError {
    #[error("normalisation exceeded {0} steps")]
    OutOfFuel(u64),
}

pub const DEFAULT_FUEL: u64 = 2_000_000;

pub struct Normalizer {
    steps: u64,
    limit: u64,
}

impl Default for Normalizer {
    fn default() -> Self {
        Normalizer::with_fuel(DEFAULT_FUEL)
    }
}

impl Normalizer {
    pub fn with_fuel(limit: u64) -> Self {
        Normalizer { steps: 0, limit }
    }

    pub fn steps(&self) -> u64 {
        self.steps
    }

    fn tick(&mut self) -> Result<(), NormError> {
        self.steps += 1;
        if self.steps > self.limit {
            Err(NormError::OutOfFuel(self.limit))
        } else {
            Ok(())
        }
    }

    pub fn normalize(&mut self, t: &Term) -> Result<Term, NormError> {
        self.tick()?;
        Ok(match t {
            Term::Var(_) | Term::Universe(_) | Term::Nat | Term::Zero | Term::Nil | Term::FZero => {
                t.clone()
            }
            Term::El(a) | Term::Ann(a, _) => self.normalize(a)?,
            Term::Pi(a, b, c) => Term::Pi(
                Box::new(self.normalize(a)?),
                b.clone(),
                Box::new(self.normalize(c)?),
            ),
            Term::Lam(b) => Term::lam(self.normalize(b)?),
            Term::App(f, a) => {
                let f = self.normalize(f)?;
                let a = self.normalize(a)?;
                self.apply(f, a)?
            }
            Term::Sigma(a, b) => Term::sigma(self.normalize(a)?, self.normalize(b)?),
            Term::Pair(a, b) => Term::pair(self.normalize(a)?, self.normalize(b)?),
            Term::Proj1(p) => match self.normalize(p)? {
                Term::Pair(a, _) => *a,
                other => Term::proj1(other),
            },
            Term::Proj2(p) => match self.normalize(p)? {
                Term::Pair(_, b) => *b,
                other => Term::proj2(other),
            },
            Term::Id(a, x, y) => {
                Term::id(self.normalize(a)?, self.normalize(x)?, self.normalize(y)?)
            }
            Term::Refl(a) => Term::refl(self.normalize(a)?),
            Term::J {
                motive,
                proof,
                method,
            } => {
                let proof = self.normalize(proof)?;
                if let Term::Refl(_) = proof {
                    self.normalize(method)?
                } else {
                    Term::j(self.normalize(motive)?, proof, self.normalize(method)?)
                }
            }
            Term::Succ(n) => Term::succ(self.normalize(n)?),
            Term::NatRec {
                motive,
                scrutinee,
                zero,
                succ,
            } => {
                let scrut = self.normalize(scrutinee)?;
                self.natrec(motive, scrut, zero, succ)?
            }
            Term::Vec(a, n) => Term::vec(self.normalize(a)?, self.normalize(n)?),
            Term::Cons(h, tl) => Term::cons(self.normalize(h)?, self.normalize(tl)?),
            Term::VecRec {
                motive,
                scrutinee,
                nil,
                cons,
            } => {
                let scrut = self.normalize(scrutinee)?;
                self.vecrec(motive, scrut, nil, cons)?
            }
            Term::Fin(n) => Term::fin(self.normalize(n)?),
            Term::FSucc(i) => Term::fsucc(self.normalize(i)?),
            Term::BoxType(s, a) => Term::box_type(*s, self.normalize(a)?),
            Term::BoxIntro(s, a) => Term::box_intro(*s, self.normalize(a)?),
            Term::Unbox(a) => match self.normalize(a)? {
                Term::BoxIntro(_, inner) => *inner,
                other => Term::unbox(other),
            },
            Term::Add(a, b) => {
                let a = self.normalize(a)?;
                let b = self.normalize(b)?;
                add(a, b)
            }
        })
    }

    /// Apply a normal function to a normal argument.
    fn apply(&mut self, f: Term, a: Term) -> Result<Term, NormError> {
        match f {
            Term::Lam(body) => self.normalize(&body.subst(0, &a)),
            other => Ok(Term::app(other, a)),
        }
    }

    fn natrec(
        &mut self,
        motive: &Term,
        scrut: Term,
        zero: &Term,
        succ: &Term,
    ) -> Result<Term, NormError> {
        if let Some(k) = scrut.as_numeral() {
            let mut acc = self.normalize(zero)?;
            let mut index = Term::Zero;
            for _ in 0..k {
                acc = self.normalize(&succ.instantiate(&[index.clone(), acc]))?;
                index = Term::succ(index);
            }
            return Ok(acc);
        }
        match scrut {
            Term::Succ(m) => {
                let rec = Term::natrec(motive.clone(), (*m).clone(), zero.clone(), succ.clone());
                let rec = self.normalize(&rec)?;
                self.normalize(&succ.instantiate(&[*m, rec]))
            }
            other => Ok(Term::natrec(
                self.normalize(motive)?,
                other,
                self.normalize(zero)?,
                self.normalize(succ)?,
            )),
        }
    }

    fn vecrec(
        &mut self,
        motive: &Term,
        scrut: Term,
        nil: &Term,
        cons: &Term,
    ) -> Result<Term, NormError> {
        if let Some(items) = scrut.as_vec_literal() {
            let items: Vec<Term> = items.into_iter().cloned().collect();
            let n = items.len();
            let mut acc = self.normalize(nil)?;
            for j in (0..n).rev() {
                let tail = Term::vec_literal(items[j + 1..].iter().cloned());
                let len = Term::numeral((n - 1 - j) as u64);
                acc = self.normalize(&cons.instantiate(&[len, items[j].clone(), tail, acc]))?;
            }
            return Ok(acc);
        }
        Ok(Term::vecrec(
            self.normalize(motive)?,
            scrut,
            self.normalize(nil)?,
            self.normalize(cons)?,
        ))
    }
}

/// Primitive addition on normal forms: numerals add, and successors float
/// out of either argument.
fn add(a: Term, b: Term) -> Term {
    let mut a = a;
    let mut b = b;
    let mut succs = 0u64;
    loop {
        match (a, b) {
            (Term::Succ(x), y) => {
                succs += 1;
                a = *x;
                b = y;
            }
            (x, Term::Succ(y)) => {
                succs += 1;
                a = x;
                b = *y;
            }
            (x, y) => {
                a = x;
                b = y;
                break;
            }
        }
    }
    let core = match (a, b) {
        (Term::Zero, y) => y,
        (x, Term::Zero) => x,
        (x, y) => Term::add(x, y),
    };
    (0..succs).fold(core, |acc, _| Term::succ(acc))
}

pub fn normalize(t: &Term) -> Result<Term, NormError> {
    Normalizer::default().normalize(t)
}

/// Definitional equality: equal normal forms.
pub fn convertible(a: &Term, b: &Term) -> Result<bool, NormError> {
    if a == b {
        return Ok(true);
    }
    let mut n = Normalizer::default();
    Ok(n.normalize(a)?.structural_eq(&n.normalize(b)?))
}

/// Value of a closed natural-number term, if it reduces to a numeral.
pub fn closed_numeral(t: &Term) -> Option<u64> {
    if let Some(n) = t.as_numeral() {
        return Some(n);
    }
    normalize(t).ok()?.as_numeral()
}

#[cfg(test)]
mod tests {
    use super::*;
    use Term::*;

    fn n(k: u64) -> Term {
        Term::numeral(k)
    }

    #[test]
    fn beta_and_projections() {
        let id = Term::lam(Var(0));
        assert_eq!(normalize(&Term::app(id, n(2))).unwrap(), n(2));
        assert_eq!(normalize(&Term::proj2(Term::pair(Zero, Nil))).unwrap(), Nil);
        assert_eq!(
            normalize(&Term::unbox(Term::box_intro(3.into(), Zero))).unwrap(),
            Zero
        );
    }

    #[test]
    fn natrec_double() {
        // double n = natrec(n, 0, m ih. succ (succ ih))
        let dbl = |k| Term::natrec(Nat, n(k), Zero, Term::succ(Term::succ(Var(0))));
        for k in 0..10 {
            assert_eq!(normalize(&dbl(k)).unwrap(), n(2 * k));
        }
    }

    #[test]
    fn vecrec_sum() {
        // sum of a literal vector with add
        let v = Term::vec_literal([n(1), n(2), n(4)]);
        let t = Term::vecrec(Nat, v, Zero, Term::add(Var(2), Var(0)));
        assert_eq!(normalize(&t).unwrap(), n(7));
    }

    #[test]
    fn add_rules() {
        assert_eq!(normalize(&Term::add(n(2), n(3))).unwrap(), n(5));
        assert_eq!(normalize(&Term::add(Zero, Var(0))).unwrap(), Var(0));
        assert_eq!(
            normalize(&Term::add(Var(1), Term::succ(Var(0)))).unwrap(),
            Term::succ(Term::add(Var(1), Var(0)))
        );
        assert_eq!(normalize(&Term::add(Var(0), Zero)).unwrap(), Var(0));
    }

    #[test]
    fn conversion_checks_pi_bounds() {
        use crate::bound::BoundExpr;
        let a = Term::pi(Nat, BoundExpr::scalar(2, 0) + BoundExpr::var(0), Nat);
        let b = Term::pi(Nat, BoundExpr::scalar(3, 0), Nat);
        assert!(convertible(&a, &b).unwrap());
        let c = Term::pi(Nat, BoundExpr::scalar(4, 0), Nat);
        assert!(!convertible(&a, &c).unwrap());
    }

    #[test]
    fn open_natrec_peels_successor() {
        let t = Term::natrec(Nat, Term::succ(Var(0)), Zero, Term::succ(Var(0)));
        let expect = Term::succ(Term::natrec(Nat, Var(0), Zero, Term::succ(Var(0))));
        assert_eq!(normalize(&t).unwrap(), expect);
    }

    #[test]
    fn fuel_guard() {
        // omega-like blowup is impossible in the typed fragment; force the guard
        let t = Term::natrec(Nat, n(50), Zero, Term::succ(Var(0)));
        assert!(Normalizer::with_fuel(10).normalize(&t).is_err());
    }
}
