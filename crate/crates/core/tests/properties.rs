use num_integer::Integer;
use proptest::prelude::*;

use hypsum_core::digamma::{psi_closed, psi_gauss, psi_murty, Route};
use hypsum_core::hp::{self, HPReal, PrecisionContext};
use hypsum_core::rational::{int, is_nonpositive_integer, rat, Angle, Rational};
use hypsum_core::theorems::{verify_all, Thresholds, Verdict};

fn ctx(d: u32) -> PrecisionContext {
    PrecisionContext::new(d).unwrap()
}

#[test]
fn reflection_formula() {
    // psi(1 - f) - psi(f) = pi cot(pi f)
    let c = ctx(40);
    let pi = hp::const_pi(&c);
    for q in 2u64..=30 {
        for p in (1..q).filter(|p| p.gcd(&q) == 1) {
            for (a, b) in [
                (psi_murty(q - p, q), psi_murty(p, q)),
                (psi_gauss(q - p, q), psi_gauss(p, q)),
            ] {
                let lhs = a.unwrap().eval(&c).unwrap() - b.unwrap().eval(&c).unwrap();
                let cot = hp::eval_cot_pi(&Angle::new(&rat(p as i64, q as i64)), &c).unwrap();
                assert!((lhs - &pi * &cot).abs_lt_pow10(35), "{p}/{q}");
            }
        }
    }
}

#[test]
fn verdicts_stable_across_precision() {
    let t = Thresholds::default();
    let low: Vec<Verdict> = verify_all(&ctx(30), &t, Route::Murty)
        .into_iter()
        .map(|r| r.unwrap().verdict)
        .collect();
    let high: Vec<Verdict> = verify_all(&ctx(60), &t, Route::Murty)
        .into_iter()
        .map(|r| r.unwrap().verdict)
        .collect();
    let loose: Vec<Verdict> = verify_all(&ctx(15), &t, Route::Murty)
        .into_iter()
        .map(|r| r.unwrap().verdict)
        .collect();
    assert_eq!(low, high);
    assert_eq!(low, loose);
}

fn non_pole() -> impl Strategy<Value = Rational> {
    (-400i64..400, 1i64..40)
        .prop_map(|(n, d)| rat(n, d))
        .prop_filter("pole", |r| !is_nonpositive_integer(r))
}

proptest! {
    #![proptest_config(ProptestConfig {
        cases: 200,
        failure_persistence: None,
        ..ProptestConfig::default()
    })]

    #[test]
    fn recurrence_evaluated(r in non_pole()) {
        let c = ctx(30);
        let up = psi_closed(&(&r + int(1)), Route::Gauss).unwrap().eval(&c).unwrap();
        let here = psi_closed(&r, Route::Murty).unwrap().eval(&c).unwrap();
        let d = up - here - HPReal::from_rational(&r.recip(), &c);
        prop_assert!(d.abs_lt_pow10(25));
    }
}
