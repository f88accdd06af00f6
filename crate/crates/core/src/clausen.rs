//! The family 3F2[1, 1, c; 2, c+1; 1] = sum_{m>=0} c/((m+1)(m+c)).

use num_traits::{One, Signed, Zero};

use crate::closed::{Atom, ClosedForm};
use crate::digamma::{self, psi_closed, Route};
use crate::error::{Error, Result};
use crate::hp::{self, HPReal, PrecisionContext};
use crate::rational::{int, is_nonpositive_integer, pochhammer, Rational};
use crate::series::{kummer_sum, SeriesConfig, SeriesEstimate};

/// Default cap on the number of terms [`pfq_partial`] will sum.
pub const PFQ_TERM_CAP: u64 = 1_000_000;

/// The third upper parameter `c`; never zero or a negative integer.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClausenParameter(Rational);

impl ClausenParameter {
    pub fn new(c: Rational) -> Result<ClausenParameter> {
        if is_nonpositive_integer(&c) {
            return Err(Error::InvalidParameter(c));
        }
        Ok(ClausenParameter(c))
    }

    /// c = (p + q)/q.
    pub fn from_pair(p: i64, q: i64) -> Result<ClausenParameter> {
        if q == 0 {
            return Err(Error::ZeroDenominator {
                numerator: (p as i128 + q as i128).to_string(),
            });
        }
        let c = Rational::new((p as i128 + q as i128).into(), q.into());
        ClausenParameter::new(c)
    }

    pub fn value(&self) -> &Rational {
        &self.0
    }
}

/// The m-th term, computed from Pochhammer symbols and checked against c/((m+1)(m+c)).
pub fn term_3f2(c: &Rational, m: u64) -> Result<Rational> {
    let c = ClausenParameter::new(c.clone())?.0;
    let one = Rational::one();
    let num = pochhammer(&one, m) * pochhammer(&one, m) * pochhammer(&c, m);
    let den = pochhammer(&int(2), m) * pochhammer(&(&c + &one), m) * pochhammer(&one, m);
    let term = num / den;
    let mm = int(m);
    let simple = &c / ((&mm + &one) * (&mm + &c));
    assert_eq!(term, simple, "Pochhammer and simplified 3F2 terms disagree");
    Ok(term)
}

/// Closed form via ((1+z)/z)(psi(z) + gamma + 1/z), z = c - 1. The gamma atom cancels.
pub fn closed_3f2(c: &Rational, route: Route) -> Result<ClosedForm> {
    let c = ClausenParameter::new(c.clone())?.0;
    if c.is_one() {
        return Err(Error::SingularCase);
    }
    let z = &c - Rational::one();
    let mut inner = psi_closed(&z, route)?;
    inner.add_term(Atom::Gamma, Rational::one())?;
    inner.add_rational(&z.recip());
    let out = inner.scale(&(&c / &z));
    assert!(
        out.gamma_coefficient().is_zero(),
        "gamma failed to cancel in the 3F2 closed form"
    );
    Ok(out)
}

/// The c = 1 value, pi^2/6.
pub fn basel_case(ctx: &PrecisionContext) -> HPReal {
    let pi = hp::const_pi(ctx);
    (&pi * &pi).mul_rational(&Rational::new(1.into(), 6.into()))
}

/// Certified numerical sum, independent of the closed forms.
pub fn series_3f2(c: &Rational, ctx: &PrecisionContext, target_digits: u32) -> Result<SeriesEstimate> {
    series_3f2_with(c, ctx, target_digits, &SeriesConfig::default())
}

pub fn series_3f2_with(
    c: &Rational,
    ctx: &PrecisionContext,
    target_digits: u32,
    cfg: &SeriesConfig,
) -> Result<SeriesEstimate> {
    let c = ClausenParameter::new(c.clone())?.0;
    if target_digits > ctx.digits() {
        return Err(Error::Argument(format!(
            "target {target_digits} digits exceeds context precision {}",
            ctx.digits()
        )));
    }
    // sum_{m>=0} c/((m+1)(m+c)) = sum_{n>=1} c/(n(n+c-1))
    let z = &c - Rational::one();
    kummer_sum(&c, &z, ctx, cfg)?.require(target_digits, cfg.term_cap)
}

/// (c/(c-1)) (psi(c) + gamma) with psi(c) from the series oracle. Returns the
/// value and an absolute error bound.
pub fn telescoped_3f2(c: &Rational, ctx: &PrecisionContext) -> Result<SeriesEstimate> {
    let c = ClausenParameter::new(c.clone())?.0;
    if c.is_one() {
        return Err(Error::SingularCase);
    }
    let target = ctx.digits();
    let psi = digamma::psi_series(&c, ctx, target)?;
    let weight = &c / (&c - Rational::one());
    let value = (psi.value + hp::const_gamma(ctx)).mul_rational(&weight);
    let eps = (psi.eps + hp::gamma_error_bound(ctx) + ctx.ulp()) * weight.abs() + ctx.ulp();
    Ok(SeriesEstimate {
        value,
        eps,
        terms: psi.terms,
    })
}

/// Exact partial sum sum_{m=0}^{n} prod(upper)_m / prod(lower)_m x^m / m!.
pub fn pfq_partial(upper: &[Rational], lower: &[Rational], x: &Rational, n: u64) -> Result<Rational> {
    pfq_partial_capped(upper, lower, x, n, PFQ_TERM_CAP)
}

pub fn pfq_partial_capped(
    upper: &[Rational],
    lower: &[Rational],
    x: &Rational,
    n: u64,
    cap: u64,
) -> Result<Rational> {
    if n > cap {
        return Err(Error::Argument(format!("partial sum length {n} exceeds cap {cap}")));
    }
    let mut term = Rational::one();
    let mut sum = Rational::one();
    for m in 0..n {
        let mm = int(m);
        let mut num = x.clone();
        for a in upper {
            num *= a + &mm;
        }
        if num.is_zero() {
            // terminating series
            return Ok(sum);
        }
        let mut den = &mm + Rational::one();
        for b in lower {
            let f = b + &mm;
            if f.is_zero() {
                return Err(Error::LowerParameter {
                    param: b.clone(),
                    index: m as usize + 1,
                });
            }
            den *= f;
        }
        term = term * num / den;
        sum += &term;
    }
    Ok(sum)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse_expr;
    use crate::rational::rat;
    use crate::series::raw_partial_sums_3f2;
    use proptest::prelude::*;

    fn ctx() -> PrecisionContext {
        PrecisionContext::new(40).unwrap()
    }

    fn value_of(text: &str, c: &PrecisionContext) -> HPReal {
        parse_expr(text).unwrap().eval(c).unwrap()
    }

    #[test]
    fn term_examples() {
        assert_eq!(term_3f2(&int(2), 0).unwrap(), int(1));
        assert_eq!(term_3f2(&rat(3, 2), 1).unwrap(), rat(3, 10));
        assert_eq!(term_3f2(&rat(-1, 2), 2).unwrap(), rat(-1, 9));
        assert!(matches!(term_3f2(&int(0), 1), Err(Error::InvalidParameter(_))));
        assert!(matches!(term_3f2(&int(-3), 1), Err(Error::InvalidParameter(_))));
    }

    #[test]
    fn closed_examples() {
        let cx = ctx();
        let two = closed_3f2(&int(2), Route::Murty).unwrap();
        assert_eq!(two.as_rational(), Some(int(2)));
        assert_eq!(two.len(), 1);
        let cases = [
            (rat(4, 3), "12 - 2*pi/sqrt(3) - 6*ln(3)"),
            (rat(-1, 2), "2/3 - (2/3)*ln(2)"),
            (rat(3, 2), "6 - 6*ln(2)"),
            (rat(7, 2), "(7/5)*(46/15 - 2*ln(2))"),
        ];
        for (c, rhs) in cases {
            for route in [Route::Murty, Route::Gauss] {
                let v = closed_3f2(&c, route).unwrap().eval(&cx).unwrap();
                assert!((v - value_of(rhs, &cx)).abs_lt_pow10(37), "{c} {route}");
            }
        }
        assert!(matches!(closed_3f2(&int(1), Route::Murty), Err(Error::SingularCase)));
        assert!(matches!(closed_3f2(&int(-1), Route::Murty), Err(Error::InvalidParameter(_))));
    }

    #[test]
    fn basel() {
        let c20 = PrecisionContext::new(20).unwrap();
        assert_eq!(basel_case(&c20).to_sig_string(20), "1.6449340668482264365");
        let c10 = PrecisionContext::new(10).unwrap();
        assert_eq!(basel_case(&c10).to_sig_string(10), "1.644934067");
        let s = series_3f2(&int(1), &c20, 18).unwrap();
        assert!((s.value - basel_case(&c20)).abs_lt_rational(&(s.eps + crate::series::pow10_recip(19))));
    }

    #[test]
    fn series_examples() {
        let cx = ctx();
        let s = series_3f2(&int(2), &cx, 35).unwrap();
        assert!((s.value.clone() - HPReal::from_int(2, &cx)).abs_lt_rational(&s.eps));
        for (c, rhs) in [
            (rat(4, 3), "12 - 2*pi/sqrt(3) - 6*ln(3)"),
            (
                rat(11, 10),
                "11*(10 - ln(20) - (sqrt(10 + 2*sqrt(5))/(sqrt(5) - 1))*pi/2 + (1/2)*(sqrt(5)*ln(sqrt(5) - 2) - ln(sqrt(5))))",
            ),
        ] {
            let s = series_3f2(&c, &cx, 35).unwrap();
            let diff = s.value.clone() - value_of(rhs, &cx);
            assert!(diff.abs_lt_rational(&(s.eps.clone() + crate::series::pow10_recip(38))), "{c}");
        }
    }

    #[test]
    fn telescoped_examples() {
        let cx = ctx();
        let t = telescoped_3f2(&int(2), &cx).unwrap();
        assert!((t.value - HPReal::from_int(2, &cx)).abs_lt_pow10(37));
        let t = telescoped_3f2(&rat(3, 2), &cx).unwrap();
        assert!((t.value - value_of("6 - 6*ln(2)", &cx)).abs_lt_pow10(37));
        let t = telescoped_3f2(&rat(7, 2), &cx).unwrap();
        assert!((t.value - value_of("(7/5)*(46/15 - 2*ln(2))", &cx)).abs_lt_pow10(37));
        assert!(matches!(telescoped_3f2(&int(1), &cx), Err(Error::SingularCase)));
    }

    #[test]
    fn pfq_examples() {
        assert_eq!(pfq_partial(&[], &[], &int(1), 3).unwrap(), rat(8, 3));
        assert_eq!(pfq_partial(&[int(-2), int(1)], &[int(1)], &int(1), 5).unwrap(), int(0));
        let c = rat(5, 7);
        let direct: Rational = (0..=12).map(|m| term_3f2(&c, m).unwrap()).sum();
        let general = pfq_partial(&[int(1), int(1), c.clone()], &[int(2), &c + int(1)], &int(1), 12).unwrap();
        assert_eq!(direct, general);
        let err = pfq_partial(&[int(1)], &[int(-2)], &int(1), 5).unwrap_err();
        assert!(matches!(err, Error::LowerParameter { index: 3, .. }));
        assert!(pfq_partial_capped(&[], &[], &int(1), 11, 10).is_err());
    }

    #[test]
    fn monotone_bracketing() {
        let cx = PrecisionContext::new(30).unwrap();
        for c in [rat(1, 6), rat(4, 3), rat(19, 12), int(3)] {
            let closed = closed_3f2(&c, Route::Murty).unwrap().eval(&cx).unwrap();
            let s = series_3f2(&c, &cx, 25).unwrap();
            let top = closed + s.eps_real(&cx);
            let sums = raw_partial_sums_3f2(&c, 400, &cx).unwrap();
            for w in sums.windows(2) {
                assert!(w[0].cmp_value(&w[1]).is_lt());
            }
            assert!(sums.last().unwrap().cmp_value(&top).is_lt());
        }
    }

    fn valid_c() -> impl Strategy<Value = Rational> {
        (-90i64..150, 1i64..30)
            .prop_map(|(n, d)| rat(n, d))
            .prop_filter("valid", |c| !is_nonpositive_integer(c) && !c.is_one())
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(60))]

        #[test]
        fn term_identity(c in valid_c(), m in 0u64..200) {
            prop_assert!(term_3f2(&c, m).is_ok());
        }

        #[test]
        fn gamma_free(c in valid_c()) {
            for route in [Route::Murty, Route::Gauss] {
                prop_assert!(closed_3f2(&c, route).unwrap().gamma_coefficient().is_zero());
            }
        }

        #[test]
        fn route_invariance(c in valid_c()) {
            let cx = PrecisionContext::new(30).unwrap();
            let m = closed_3f2(&c, Route::Murty).unwrap().eval(&cx).unwrap();
            let g = closed_3f2(&c, Route::Gauss).unwrap().eval(&cx).unwrap();
            prop_assert!((m - g).abs_lt_pow10(25));
        }
    }
}
