//! Structured closed forms: rational combinations of canonical constant atoms.
//!
//! Coefficients stay rational. Irrational multipliers such as `cos(2*pi*a)`
//! live inside the atoms, so the cancellation of Euler's constant in a sum is
//! a syntactic fact about the `Gamma` coefficient. Two closed forms are never
//! compared symbolically; semantic equality is checked numerically.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::expr::Expr;
use crate::hp::{self, HPReal, PrecisionContext};
use crate::rational::{int, rat, Angle, Rational};

/// A constant building block. Declaration order is render order.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Atom {
    /// 1
    Unit,
    /// Euler's constant
    Gamma,
    /// ln n, n >= 2; canonical forms use primes only
    LnNat(u64),
    /// pi * cot(pi * theta)
    PiCot(Angle),
    /// cos(2 pi alpha) * ln sin(pi beta)
    CosLnSin { alpha: Angle, beta: Angle },
}

fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2u64;
    while p * p <= n {
        let mut e = 0;
        while n.is_multiple_of(p) {
            n /= p;
            e += 1;
        }
        if e > 0 {
            out.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

impl Atom {
    pub fn pi_cot(theta: &Rational) -> Atom {
        Atom::PiCot(Angle::new(theta))
    }

    pub fn cos_ln_sin(alpha: &Rational, beta: &Rational) -> Atom {
        Atom::CosLnSin {
            alpha: Angle::new(alpha),
            beta: Angle::new(beta),
        }
    }

    /// Rewrites the atom as a combination of canonical atoms. An empty result
    /// means the atom is identically zero.
    ///
    /// * `LnNat` splits into primes; `ln 1` vanishes.
    /// * `PiCot(theta)` folds theta into (0, 1/2) by oddness; theta = 1/2 vanishes.
    /// * `CosLnSin` folds beta into (0, 1/2) by the symmetry of sine (beta = 1/2
    ///   vanishes since ln 1 = 0) and alpha into [0, 1/4) using
    ///   cos(2 pi (1/2 - a)) = -cos(2 pi a); alpha = 1/4 vanishes.
    pub fn canonical_terms(&self) -> Result<Vec<(Atom, Rational)>> {
        let half = rat(1, 2);
        let quarter = rat(1, 4);
        Ok(match self {
            Atom::Unit | Atom::Gamma => vec![(self.clone(), Rational::one())],
            Atom::LnNat(0) => {
                return Err(Error::Domain {
                    atom: "ln(0)".into(),
                    reason: "logarithm of zero".into(),
                })
            }
            Atom::LnNat(n) => factorize(*n)
                .into_iter()
                .map(|(p, e)| (Atom::LnNat(p), int(e)))
                .collect(),
            Atom::PiCot(theta) => {
                let t = theta.value();
                if t.is_zero() {
                    return Err(Error::Domain {
                        atom: "pi*cot(pi*0)".into(),
                        reason: "cotangent pole".into(),
                    });
                }
                if *t == half {
                    vec![]
                } else if *t > half {
                    vec![(Atom::pi_cot(&(int(1) - t)), int(-1))]
                } else {
                    vec![(self.clone(), Rational::one())]
                }
            }
            Atom::CosLnSin { alpha, beta } => {
                let mut b = beta.value().clone();
                if b.is_zero() {
                    return Err(Error::Domain {
                        atom: format!("cos(2*pi*{alpha})*ln(sin(0))"),
                        reason: "logarithm of zero".into(),
                    });
                }
                if b > half {
                    b = int(1) - b;
                }
                if b == half {
                    return Ok(vec![]);
                }
                let mut a = alpha.value().clone();
                if a > half {
                    a = int(1) - a;
                }
                let mut sign = Rational::one();
                if a > quarter {
                    a = &half - a;
                    sign = -sign;
                }
                if a == quarter {
                    return Ok(vec![]);
                }
                vec![(Atom::cos_ln_sin(&a, &b), sign)]
            }
        })
    }

    pub fn eval(&self, ctx: &PrecisionContext) -> Result<HPReal> {
        match self {
            Atom::Unit => Ok(HPReal::one(ctx)),
            Atom::Gamma => Ok(hp::const_gamma(ctx)),
            Atom::LnNat(n) => hp::eval_ln_int(*n, ctx),
            Atom::PiCot(theta) => Ok(hp::const_pi(ctx) * hp::eval_cot_pi(theta, ctx)?),
            Atom::CosLnSin { alpha, beta } => {
                let s = hp::eval_sin_pi(beta, ctx);
                let ln = hp::eval_ln(&s, ctx).map_err(|_| Error::Domain {
                    atom: format!("ln(sin(pi*{beta}))"),
                    reason: "sine is not positive".into(),
                })?;
                Ok(hp::eval_cos_2pi(alpha, ctx) * ln)
            }
        }
    }

    /// Expression for the atom; `None` for `Unit`, whose value is its coefficient.
    pub fn to_expr(&self) -> Option<Expr> {
        // pi*a as an expression, with a = p/q
        let turn = |a: &Rational| {
            let top = if a.numer().is_one() {
                Expr::Pi
            } else {
                Expr::mul(Expr::Int(a.numer().clone()), Expr::Pi)
            };
            if a.denom().is_one() {
                top
            } else {
                Expr::div(top, Expr::Int(a.denom().clone()))
            }
        };
        Some(match self {
            Atom::Unit => return None,
            Atom::Gamma => Expr::Gamma,
            Atom::LnNat(n) => Expr::ln(Expr::int(*n)),
            Atom::PiCot(theta) => Expr::mul(Expr::Pi, Expr::Cot(Box::new(turn(theta.value())))),
            Atom::CosLnSin { alpha, beta } => {
                let ln = Expr::ln(Expr::Sin(Box::new(turn(beta.value()))));
                if alpha.is_zero() {
                    ln
                } else {
                    let twice = alpha.value() * Rational::from_integer(2.into());
                    Expr::mul(Expr::Cos(Box::new(turn(&twice))), ln)
                }
            }
        })
    }
}

/// Finite rational combination of canonical atoms with no zero coefficients.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ClosedForm {
    terms: BTreeMap<Atom, Rational>,
}

impl ClosedForm {
    pub fn new() -> ClosedForm {
        ClosedForm::default()
    }

    pub fn rational(r: Rational) -> ClosedForm {
        let mut cf = ClosedForm::new();
        cf.merge(Atom::Unit, r);
        cf
    }

    pub fn from_terms<I>(terms: I) -> Result<ClosedForm>
    where
        I: IntoIterator<Item = (Atom, Rational)>,
    {
        let mut cf = ClosedForm::new();
        for (atom, coeff) in terms {
            cf.add_term(atom, coeff)?;
        }
        Ok(cf)
    }

    /// Adds `coeff * atom`, canonicalizing the atom first.
    pub fn add_term(&mut self, atom: Atom, coeff: Rational) -> Result<()> {
        if coeff.is_zero() {
            // still reject malformed atoms
            atom.canonical_terms()?;
            return Ok(());
        }
        for (a, m) in atom.canonical_terms()? {
            self.merge(a, &coeff * m);
        }
        Ok(())
    }

    fn merge(&mut self, atom: Atom, coeff: Rational) {
        let entry = self.terms.entry(atom).or_insert_with(Rational::zero);
        *entry += coeff;
        if entry.is_zero() {
            self.terms.retain(|_, c| !c.is_zero());
        }
    }

    pub fn add_rational(&mut self, r: &Rational) {
        self.merge(Atom::Unit, r.clone());
    }

    /// Re-inserts every term through canonicalization.
    pub fn canonicalize(&self) -> Result<ClosedForm> {
        ClosedForm::from_terms(self.terms.iter().map(|(a, c)| (a.clone(), c.clone())))
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Atom, &Rational)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, atom: &Atom) -> Rational {
        self.terms.get(atom).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn gamma_coefficient(&self) -> Rational {
        self.coefficient(&Atom::Gamma)
    }

    /// The exact value when the form is purely rational.
    pub fn as_rational(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::zero()),
            1 => self.terms.get(&Atom::Unit).cloned(),
            _ => None,
        }
    }

    pub fn add(&self, other: &ClosedForm) -> ClosedForm {
        let mut out = self.clone();
        for (a, c) in &other.terms {
            out.merge(a.clone(), c.clone());
        }
        out
    }

    pub fn scale(&self, r: &Rational) -> ClosedForm {
        if r.is_zero() {
            return ClosedForm::new();
        }
        ClosedForm {
            terms: self.terms.iter().map(|(a, c)| (a.clone(), c * r)).collect(),
        }
    }

    pub fn eval(&self, ctx: &PrecisionContext) -> Result<HPReal> {
        let mut acc = HPReal::zero(ctx);
        for (atom, coeff) in &self.terms {
            let v = match atom {
                Atom::Unit => HPReal::from_rational(coeff, ctx),
                _ => atom.eval(ctx)?.mul_rational(coeff),
            };
            acc = acc + v;
        }
        Ok(acc)
    }

    pub fn to_expr(&self) -> Expr {
        let mut out: Option<Expr> = None;
        for (atom, coeff) in &self.terms {
            let mag = coeff.abs();
            let negative = coeff.is_negative();
            let term = match atom.to_expr() {
                None => Expr::ratio(&mag),
                Some(x) if mag.is_one() => x,
                Some(x) => prepend_factor(Expr::ratio(&mag), x),
            };
            out = Some(match out {
                None if negative => negate_leading(term),
                None => term,
                Some(acc) if negative => Expr::sub(acc, term),
                Some(acc) => Expr::add(acc, term),
            });
        }
        out.unwrap_or_else(|| Expr::int(0))
    }

    pub fn render(&self) -> String {
        self.to_expr().render()
    }
}

/// Multiplies from the left so that products stay left-associated.
fn prepend_factor(factor: Expr, x: Expr) -> Expr {
    match x {
        Expr::Mul(a, b) => Expr::Mul(Box::new(prepend_factor(factor, *a)), b),
        other => Expr::mul(factor, other),
    }
}

/// Puts the minus sign on the leading factor: `-2*ln(2)` rather than `-(2*ln(2))`.
fn negate_leading(term: Expr) -> Expr {
    match term {
        Expr::Mul(a, b) => Expr::Mul(Box::new(negate_leading(*a)), b),
        other => Expr::neg(other),
    }
}

impl fmt::Display for ClosedForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

pub fn cf_add(a: &ClosedForm, b: &ClosedForm) -> ClosedForm {
    a.add(b)
}

pub fn cf_scale(a: &ClosedForm, r: &Rational) -> ClosedForm {
    a.scale(r)
}

pub fn cf_eval(a: &ClosedForm, ctx: &PrecisionContext) -> Result<HPReal> {
    a.eval(ctx)
}

/// Harmonic-type sum 1/a + 1/(a+1) + ... + 1/(a+n-1) as an exact rational.
pub(crate) fn shifted_harmonic(a: &Rational, n: &BigInt) -> Rational {
    let mut acc = Rational::zero();
    let mut k = BigInt::zero();
    while &k < n {
        acc += (a + int(k.clone())).recip();
        k += 1;
    }
    acc
}
