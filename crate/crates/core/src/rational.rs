//! Exact rational arithmetic, Pochhammer symbols and angle reduction.
//!
//! [`Rational`] is an auto-reduced big-integer fraction with a positive
//! denominator. It renders as `n/d`, or `n` when the denominator is one,
//! and [`parse_rational`] accepts the same syntax.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;

/// Reduced fraction `n/d` with a positive denominator.
pub fn make_rational(n: impl Into<BigInt>, d: impl Into<BigInt>) -> Result<Rational> {
    let (n, d) = (n.into(), d.into());
    if d.is_zero() {
        return Err(Error::ZeroDenominator {
            numerator: n.to_string(),
        });
    }
    Ok(BigRational::new(n, d))
}

/// Shorthand for small literal fractions. Panics on a zero denominator.
pub fn rat(n: i64, d: i64) -> Rational {
    make_rational(n, d).expect("nonzero denominator")
}

pub fn int(n: impl Into<BigInt>) -> Rational {
    BigRational::from_integer(n.into())
}

/// Parses `n`, `n/d`, `-n/d`, `n/-d` (whitespace around the slash allowed).
pub fn parse_rational(text: &str) -> Result<Rational> {
    let bad = || Error::RationalSyntax(text.to_string());
    let t = text.trim();
    let parse_int = |s: &str| -> Result<BigInt> {
        let s = s.trim();
        let digits = s.strip_prefix(['-', '+']).unwrap_or(s);
        if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        s.parse::<BigInt>().map_err(|_| bad())
    };
    match t.split_once('/') {
        None => Ok(int(parse_int(t)?)),
        Some((n, d)) => make_rational(parse_int(n)?, parse_int(d)?),
    }
}

pub fn render_rational(r: &Rational) -> String {
    r.to_string()
}

/// Rising factorial (a)_n = a(a+1)...(a+n-1), with (a)_0 = 1 for every a.
pub fn pochhammer(a: &Rational, n: u64) -> Rational {
    let mut acc = Rational::one();
    let mut factor = a.clone();
    for _ in 0..n {
        acc *= &factor;
        factor += Rational::one();
    }
    acc
}

pub fn floor(r: &Rational) -> BigInt {
    r.numer().div_floor(r.denom())
}

/// Fractional part in [0, 1).
pub fn frac(r: &Rational) -> Rational {
    r - int(floor(r))
}

pub fn is_integer(r: &Rational) -> bool {
    r.denom().is_one()
}

/// True for 0, -1, -2, ...
pub fn is_nonpositive_integer(r: &Rational) -> bool {
    is_integer(r) && !r.is_positive()
}

pub(crate) fn to_u64(r: &BigInt) -> Option<u64> {
    r.to_u64()
}

/// A rational multiple of a full or half turn, reduced into [0, 1).
///
/// Whether the stored value means `value*pi` or `value*2*pi` depends on the
/// atom that holds it; the reduction is the same either way.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Angle(Rational);

impl Angle {
    pub fn new(a: &Rational) -> Angle {
        Angle(frac(a))
    }

    pub fn value(&self) -> &Rational {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }
}

impl fmt::Display for Angle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

pub fn normalize_angle(a: &Rational) -> Angle {
    Angle::new(a)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn construction_reduces_and_normalizes_sign() {
        assert_eq!(make_rational(2, 4).unwrap(), rat(1, 2));
        let r = make_rational(3, -6).unwrap();
        assert_eq!(r.numer(), &BigInt::from(-1));
        assert_eq!(r.denom(), &BigInt::from(2));
        let z = make_rational(0, 7).unwrap();
        assert!(z.numer().is_zero() && z.denom().is_one());
        assert!(matches!(make_rational(1, 0), Err(Error::ZeroDenominator { .. })));
    }

    #[test]
    fn render_and_parse() {
        assert_eq!(render_rational(&rat(-3, 6)), "-1/2");
        assert_eq!(render_rational(&int(5)), "5");
        assert_eq!(parse_rational("11/10").unwrap(), rat(11, 10));
        assert_eq!(parse_rational(" -3 / 6 ").unwrap(), rat(-1, 2));
        assert_eq!(parse_rational("4/-8").unwrap(), rat(-1, 2));
        assert_eq!(parse_rational("7").unwrap(), int(7));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
        assert!(parse_rational("1.5").is_err());
        assert!(parse_rational("").is_err());
    }

    #[test]
    fn pochhammer_values() {
        assert_eq!(pochhammer(&int(1), 4), int(24));
        assert_eq!(pochhammer(&int(0), 0), int(1));
        assert_eq!(pochhammer(&rat(1, 2), 2), rat(3, 4));
        assert_eq!(pochhammer(&int(-2), 3), int(0));
    }

    #[test]
    fn angle_reduction() {
        assert_eq!(normalize_angle(&rat(7, 3)).value(), &rat(1, 3));
        assert_eq!(normalize_angle(&rat(-1, 4)).value(), &rat(3, 4));
        assert!(normalize_angle(&int(1)).is_zero());
        assert_eq!(normalize_angle(&rat(-7, 2)).value(), &rat(1, 2));
    }

    fn small_rational() -> impl Strategy<Value = Rational> {
        (-200i64..200, 1i64..60).prop_map(|(n, d)| rat(n, d))
    }

    proptest! {
        #[test]
        fn pochhammer_step(a in small_rational(), n in 0u64..40) {
            let lhs = pochhammer(&a, n + 1);
            let rhs = pochhammer(&a, n) * (&a + int(n));
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn pochhammer_index_shift(a in small_rational(), m in 0u64..=50, n in 0u64..=50) {
            let lhs = pochhammer(&a, m + n);
            let rhs = pochhammer(&a, m) * pochhammer(&(&a + int(m)), n);
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn reduction_is_idempotent(n in -10_000i64..10_000, d in 1i64..10_000) {
            let r = rat(n, d);
            let again = make_rational(r.numer().clone(), r.denom().clone()).unwrap();
            prop_assert_eq!(r.numer(), again.numer());
            prop_assert_eq!(r.denom(), again.denom());
        }

        #[test]
        fn angle_in_unit_interval(a in small_rational()) {
            let v = normalize_angle(&a);
            prop_assert!(!v.value().is_negative() && v.value() < &int(1));
            prop_assert!(is_integer(&(&a - v.value())));
        }
    }
}
