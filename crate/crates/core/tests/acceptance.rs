//! Acceptance criteria, one line each. Runs without the libtest harness so the
//! verdict lines always reach stdout.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_integer::Integer;
use num_traits::{One, Zero};
use proptest::prelude::*;
use proptest::test_runner::{Config, TestRunner};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use hypsum_core::clausen::{basel_case, closed_3f2, series_3f2};
use hypsum_core::closed::ClosedForm;
use hypsum_core::digamma::{psi_closed, psi_gauss, psi_murty, psi_series, Route};
use hypsum_core::expr::{ast_render, parse_expr};
use hypsum_core::hp::{HPReal, PrecisionContext};
use hypsum_core::rational::{int, is_nonpositive_integer, rat, Rational};
use hypsum_core::theorems::{load_database, parse_database, verify_all, Status, Thresholds, DATABASE};

type Outcome = Result<String, String>;
type Criterion = (&'static str, &'static str, fn() -> Outcome);

const PSI_TENTH: &str = "0 - gamma - ln(20) - (sqrt(10 + 2*sqrt(5))/(sqrt(5) - 1))*pi/2 + (1/2)*(sqrt(5)*ln(sqrt(5) - 2) - ln(sqrt(5)))";
const PI2_OVER_6_50: &str = "1.6449340668482264364724151666460251892189499012068";
const GAMMA_39: &str = "0.577215664901532860606512090082402431042";
const GAP_FIXTURES: [(&str, &str); 3] = [("5.1", "3.38"), ("5.2", "4.06"), ("5.3", "4.53")];

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn pow10_recip(k: u32) -> Rational {
    Rational::new(One::one(), num_traits::pow(num_bigint::BigInt::from(10), k as usize))
}

fn theorem_suite() -> Outcome {
    let ctx = PrecisionContext::new(50).unwrap();
    let start = Instant::now();
    let reports = verify_all(&ctx, &Thresholds::default(), Route::Murty);
    let elapsed = start.elapsed();
    let mut worst = HPReal::zero(&ctx);
    let mut checked = 0;
    for r in reports {
        let r = r.map_err(|e| e.to_string())?;
        if r.status == Status::Erroneous {
            continue;
        }
        checked += 1;
        ensure(r.abs_diff_closed_rhs.abs_lt_pow10(40), || {
            format!("{}: |closed - rhs| = {}", r.id, r.abs_diff_closed_rhs.to_sci_string(6))
        })?;
        ensure(r.meets_expectation(), || format!("{}: verdict {}", r.id, r.verdict))?;
        if r.abs_diff_closed_rhs.cmp_value(&worst).is_gt() {
            worst = r.abs_diff_closed_rhs.clone();
        }
    }
    ensure(checked == 23, || format!("checked {checked} records, expected 23"))?;
    ensure(elapsed < Duration::from_secs(60), || format!("took {elapsed:?}"))?;
    Ok(format!(
        "23 identities, max |closed - rhs| = {} < 1e-40, {:.1}s",
        worst.to_sci_string(3),
        elapsed.as_secs_f64()
    ))
}

fn error_detection() -> Outcome {
    let ctx = PrecisionContext::new(30).unwrap();
    let reports = verify_all(&ctx, &Thresholds::default(), Route::Murty);
    let mut gaps = Vec::new();
    for (id, fixture) in GAP_FIXTURES {
        let r = reports
            .iter()
            .flatten()
            .find(|r| r.id == id)
            .ok_or_else(|| format!("{id} missing"))?;
        ensure(r.abs_diff_closed_rhs.gt_rational(&rat(1, 20)), || format!("{id}: gap below 0.05"))?;
        let measured = r.abs_diff_closed_rhs.to_sig_string(3);
        ensure(measured == fixture, || format!("{id}: gap {measured}, fixture {fixture}"))?;
        ensure(r.meets_expectation(), || format!("{id}: verdict {}", r.verdict))?;
        gaps.push(format!("{id}={measured}"));
    }
    Ok(format!("gaps {}", gaps.join(" ")))
}

fn proof_replay() -> Outcome {
    let ctx = PrecisionContext::new(50).unwrap();
    let psi = psi_murty(1, 10).map_err(|e| e.to_string())?.eval(&ctx).map_err(|e| e.to_string())?;
    let printed = parse_expr(PSI_TENTH).unwrap().eval(&ctx).map_err(|e| e.to_string())?;
    let d1 = (&psi - &printed).abs();
    ensure(d1.abs_lt_pow10(40), || format!("psi(1/10) differs by {}", d1.to_sci_string(3)))?;
    // F(11/10) = ((1+z)/z)(psi(z) + gamma + 1/z), z = 1/10
    let z = rat(1, 10);
    let inner = printed + hypsum_core::hp::const_gamma(&ctx) + HPReal::from_rational(&z.recip(), &ctx);
    let f = inner.mul_rational(&((int(1) + &z) / &z));
    let rhs = &load_database().iter().find(|r| r.id == "4.13").unwrap().rhs;
    let d2 = (&f - &rhs.eval(&ctx).map_err(|e| e.to_string())?).abs();
    ensure(d2.abs_lt_pow10(40), || format!("F(11/10) differs by {}", d2.to_sci_string(3)))?;
    Ok(format!(
        "psi(1/10) diff {}, F(11/10) diff {}",
        d1.to_sci_string(3),
        d2.to_sci_string(3)
    ))
}

fn route_equivalence() -> Outcome {
    let ctx = PrecisionContext::new(50).unwrap();
    let mut pairs = 0;
    let mut worst = HPReal::zero(&ctx);
    for q in 2u64..=60 {
        for p in 1..q {
            if p.gcd(&q) != 1 {
                continue;
            }
            let m = psi_murty(p, q).and_then(|c| c.eval(&ctx)).map_err(|e| e.to_string())?;
            let g = psi_gauss(p, q).and_then(|c| c.eval(&ctx)).map_err(|e| e.to_string())?;
            let d = (m - g).abs();
            ensure(d.abs_lt_pow10(45), || format!("{p}/{q}: diff {}", d.to_sci_string(3)))?;
            if d.cmp_value(&worst).is_gt() {
                worst = d;
            }
            pairs += 1;
        }
    }
    Ok(format!("{pairs} reduced p/q, max diff {} < 1e-45", worst.to_sci_string(3)))
}

fn random_rational(rng: &mut ChaCha8Rng, lo: i64, hi: i64, max_den: i64) -> Rational {
    loop {
        let d = rng.gen_range(1..=max_den);
        let n = rng.gen_range(lo * d + 1..hi * d);
        let r = rat(n, d);
        if !is_nonpositive_integer(&r) && !r.is_one() {
            return r;
        }
    }
}

fn oracle_suite() -> Outcome {
    let ctx = PrecisionContext::new(30).unwrap();
    let target = 20;
    let mut rng = ChaCha8Rng::seed_from_u64(0x3f2);
    let slack = pow10_recip(29);
    let start = Instant::now();
    let mut max_terms = 0;
    for _ in 0..50 {
        let c = random_rational(&mut rng, -3, 5, 40);
        let s = series_3f2(&c, &ctx, target).map_err(|e| format!("c = {c}: {e}"))?;
        ensure(s.eps <= pow10_recip(10), || format!("c = {c}: eps too large"))?;
        ensure(s.terms <= 1_000_000, || format!("c = {c}: {} terms", s.terms))?;
        let closed = closed_3f2(&c, Route::Murty)
            .and_then(|cf| cf.eval(&ctx))
            .map_err(|e| e.to_string())?;
        ensure((closed - &s.value).abs_lt_rational(&(&s.eps + &slack)), || {
            format!("c = {c}: closed and series disagree")
        })?;
        max_terms = max_terms.max(s.terms);
    }
    for _ in 0..100 {
        let r = random_rational(&mut rng, -10, 10, 40);
        let s = psi_series(&r, &ctx, target).map_err(|e| format!("r = {r}: {e}"))?;
        let closed = psi_closed(&r, Route::Murty)
            .and_then(|cf| cf.eval(&ctx))
            .map_err(|e| e.to_string())?;
        ensure((closed - &s.value).abs_lt_rational(&(&s.eps + &slack)), || {
            format!("r = {r}: closed and series disagree")
        })?;
        max_terms = max_terms.max(s.terms);
    }
    Ok(format!(
        "50 c and 100 r agree within eps <= 1e-{target}, max {max_terms} terms, {:.1}s",
        start.elapsed().as_secs_f64()
    ))
}

fn forced_values() -> Outcome {
    let two = closed_3f2(&int(2), Route::Murty).map_err(|e| e.to_string())?;
    ensure(two == ClosedForm::rational(int(2)), || format!("closed_3f2(2) = {two}"))?;
    let ctx = PrecisionContext::new(50).unwrap();
    let basel = basel_case(&ctx).to_sig_string(50);
    ensure(basel == PI2_OVER_6_50, || format!("pi^2/6 = {basel}"))?;
    let psi1 = psi_closed(&int(1), Route::Murty).map_err(|e| e.to_string())?;
    ensure(psi1.render() == "-gamma", || format!("psi(1) = {psi1}"))?;
    let v = psi1.eval(&ctx).map_err(|e| e.to_string())?;
    let printed = format!("-{GAMMA_39}");
    ensure(v.to_sig_string(39) == printed, || format!("psi(1) = {}", v.to_sig_string(39)))?;
    Ok("3F2(c=2) = 2 exactly, c = 1 gives pi^2/6, psi(1) = -gamma to 39 digits".into())
}

fn structural_invariants() -> Outcome {
    let mut runner = TestRunner::new(Config {
        cases: 256,
        failure_persistence: None,
        ..Config::default()
    });
    let c_strategy = (-200i64..400, 1i64..60)
        .prop_map(|(n, d)| rat(n, d))
        .prop_filter("valid c", |c| !is_nonpositive_integer(c) && !c.is_one());
    runner
        .run(&c_strategy, |c| {
            for route in [Route::Murty, Route::Gauss] {
                let cf = closed_3f2(&c, route).unwrap();
                prop_assert!(cf.gamma_coefficient().is_zero());
                let once = cf.canonicalize().unwrap();
                prop_assert_eq!(&once, &cf);
                prop_assert_eq!(once.canonicalize().unwrap(), once);
            }
            Ok(())
        })
        .map_err(|e| e.to_string())?;
    let db = parse_database(DATABASE).map_err(|e| e.to_string())?;
    for rec in &db {
        let text = ast_render(&rec.rhs);
        ensure(parse_expr(&text).unwrap() == rec.rhs, || format!("{} does not round-trip", rec.id))?;
        let line = DATABASE
            .lines()
            .find(|l| l.split('|').next().map(str::trim) == Some(rec.id.as_str()))
            .unwrap();
        ensure(line.ends_with(&text), || format!("{} is not stored canonically", rec.id))?;
    }
    Ok(format!("256 random c x 2 routes, {} database records", db.len()))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 7] = [
        ("AC1", "theorem suite at 50 digits", theorem_suite),
        ("AC2", "error detection", error_detection),
        ("AC3", "independent proof replay", proof_replay),
        ("AC4", "route equivalence, q <= 60", route_equivalence),
        ("AC5", "series oracle agreement", oracle_suite),
        ("AC6", "forced values", forced_values),
        ("AC7", "structural invariants", structural_invariants),
    ];
    let mut failed = 0;
    for (tag, name, check) in criteria {
        match check() {
            Ok(detail) => println!("{tag} PASS  {name}: {detail}"),
            Err(detail) => {
                failed += 1;
                println!("{tag} FAIL  {name}: {detail}");
            }
        }
    }
    println!("acceptance: {} of 7 criteria passed", 7 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
