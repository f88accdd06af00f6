//! Certified summation of `sum_{n>=1} a / (n (n + z))` for rational `a`, `z`.
//!
//! The first `N - 1` terms are summed directly. For `n >= N > |z|` the
//! summand is expanded Kummer-style,
//!
//! ```text
//! a/(n(n+z)) = sum_{k<K} a (-z)^k / n^(k+2)  +  a (-z)^K / (n^(K+1) (n+z)),
//! ```
//!
//! so the leftover decays like `n^-(K+2)` and its tail is bounded by an
//! integral. Each extracted comparison tail `sum_{n>=N} n^-s` is evaluated by
//! Euler-Maclaurin with exact Bernoulli coefficients; its remainder is bounded
//! by the first omitted correction term, which is valid because every odd
//! derivative of `x^-s` has the same sign. Nothing here uses a closed form of
//! the digamma function.

use std::sync::OnceLock;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::hp::{HPReal, PrecisionContext};
use crate::rational::{int, is_nonpositive_integer, pochhammer, Rational};

pub const DEFAULT_TERM_CAP: usize = 1_000_000;
const MIN_DIRECT_TERMS: u64 = 256;
const MAX_KUMMER_ORDER: usize = 20_000;
const BERNOULLI_TABLE: usize = 160;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SeriesConfig {
    /// Upper limit on direct terms plus Euler-Maclaurin corrections.
    pub term_cap: usize,
}

impl Default for SeriesConfig {
    fn default() -> Self {
        SeriesConfig {
            term_cap: DEFAULT_TERM_CAP,
        }
    }
}

/// A numerical value with a rigorous absolute error bound.
#[derive(Debug, Clone)]
pub struct SeriesEstimate {
    pub value: HPReal,
    pub eps: Rational,
    /// Direct terms plus Euler-Maclaurin corrections actually evaluated.
    pub terms: usize,
}

impl SeriesEstimate {
    pub fn eps_real(&self, ctx: &PrecisionContext) -> HPReal {
        HPReal::from_rational(&self.eps, ctx)
    }

    /// Whether the bound meets `10^-digits`.
    pub fn meets(&self, digits: u32) -> bool {
        self.eps < pow10_recip(digits)
    }

    pub(crate) fn require(self, target: u32, cap: usize) -> Result<Self> {
        if self.meets(target) {
            Ok(self)
        } else {
            Err(Error::Accuracy {
                target,
                cap,
                best: rational_sci(&self.eps),
            })
        }
    }
}

pub(crate) fn pow10_recip(digits: u32) -> Rational {
    Rational::new(BigInt::one(), num_traits::pow(BigInt::from(10), digits as usize))
}

/// Rough scientific rendering of a (small, positive) rational bound.
pub fn rational_sci(r: &Rational) -> String {
    if r.is_zero() {
        return "0".into();
    }
    let n = r.numer().abs();
    let d = r.denom();
    let e = (n.bits() as f64 - d.bits() as f64) * std::f64::consts::LOG10_2;
    let e = e.floor() as i64;
    let scale = num_traits::pow(BigInt::from(10), e.unsigned_abs() as usize);
    let m = if e >= 0 {
        Rational::new(n, d * scale)
    } else {
        Rational::new(n * scale, d.clone())
    };
    let mut m = m.to_f64().unwrap_or(f64::NAN);
    let mut e = e;
    if m >= 10.0 {
        m /= 10.0;
        e += 1;
    } else if m < 1.0 {
        m *= 10.0;
        e -= 1;
    }
    format!("{m:.3}e{e}")
}

fn bernoulli_even() -> &'static [Rational] {
    static TABLE: OnceLock<Vec<Rational>> = OnceLock::new();
    TABLE.get_or_init(|| {
        // B_0..B_{2*BERNOULLI_TABLE} by the binomial recurrence.
        let m_max = 2 * BERNOULLI_TABLE;
        let mut b: Vec<Rational> = Vec::with_capacity(m_max + 1);
        b.push(Rational::one());
        for m in 1..=m_max {
            if m > 1 && m % 2 == 1 {
                b.push(Rational::zero());
                continue;
            }
            let mut binom = BigInt::one(); // C(m+1, k)
            let mut acc = Rational::zero();
            for (k, bk) in b.iter().enumerate() {
                if !bk.is_zero() {
                    acc += bk * Rational::from_integer(binom.clone());
                }
                binom = binom * BigInt::from(m + 1 - k) / BigInt::from(k + 1);
            }
            b.push(-acc / int(m as u64 + 1));
        }
        (0..=BERNOULLI_TABLE).map(|j| b[2 * j].clone()).collect()
    })
}

/// B_{2j} / (2j)!
fn em_coefficients() -> &'static [Rational] {
    static TABLE: OnceLock<Vec<Rational>> = OnceLock::new();
    TABLE.get_or_init(|| {
        let b = bernoulli_even();
        let mut fact = BigInt::one();
        let mut out = Vec::with_capacity(b.len());
        for (j, bj) in b.iter().enumerate() {
            if j > 0 {
                fact *= BigInt::from(2 * j - 1) * BigInt::from(2 * j);
            }
            out.push(bj / Rational::from_integer(fact.clone()));
        }
        out
    })
}

struct Accumulator<'a> {
    ctx: &'a PrecisionContext,
    sum: HPReal,
    roundings: u64,
    bound: Rational,
    terms: usize,
}

impl Accumulator<'_> {
    fn add(&mut self, r: &Rational) {
        self.sum = &self.sum + &HPReal::from_rational(r, self.ctx);
        self.roundings += 1;
        self.terms += 1;
    }
}

fn ceil_u64(r: &Rational) -> Option<u64> {
    let c = r.ceil();
    c.to_integer().to_u64()
}

/// `sum_{n>=1} a/(n(n+z))` with a certified bound. Requires n + z != 0 for all n >= 1.
pub fn kummer_sum(
    a: &Rational,
    z: &Rational,
    ctx: &PrecisionContext,
    cfg: &SeriesConfig,
) -> Result<SeriesEstimate> {
    if z.is_integer() && z <= &int(-1) {
        return Err(Error::Argument(format!(
            "summand a/(n(n+z)) has a pole at n = {}",
            -z
        )));
    }
    let tol = ctx.ulp();
    let zabs = z.abs();
    let wanted = ceil_u64(&(&zabs * int(16)))
        .unwrap_or(u64::MAX)
        .saturating_add(2)
        .max(MIN_DIRECT_TERMS)
        .max(ctx.bits() as u64);
    let cap = cfg.term_cap as u64;
    let n_direct = wanted.min(cap);
    if Rational::from_integer(BigInt::from(n_direct)) <= &zabs + int(1) {
        return Err(Error::Accuracy {
            target: ctx.digits(),
            cap: cfg.term_cap,
            best: "inf".into(),
        });
    }
    let big_n = int(n_direct);
    let mut acc = Accumulator {
        ctx,
        sum: HPReal::zero(ctx),
        roundings: 0,
        bound: Rational::zero(),
        terms: 0,
    };

    for n in 1..n_direct {
        let n = int(n);
        acc.add(&(a / (&n * (&n + z))));
    }

    // Smallest order K whose leftover tail is below one ulp:
    // |a| |z|^K / (N - |z|) * (N-1)^-K / K.
    let n_minus_one = &big_n - int(1);
    let ratio = &zabs / &n_minus_one;
    let base = a.abs() / (&big_n - &zabs);
    let mut order = 1usize;
    let mut ratio_pow = ratio.clone();
    let residual = loop {
        let r = &base * &ratio_pow / int(order as u64);
        if r <= tol || zabs.is_zero() {
            break if zabs.is_zero() { Rational::zero() } else { r };
        }
        if order >= MAX_KUMMER_ORDER {
            return Err(Error::Accuracy {
                target: ctx.digits(),
                cap: cfg.term_cap,
                best: rational_sci(&r),
            });
        }
        order += 1;
        ratio_pow *= &ratio;
    };
    acc.bound += residual;

    let em = em_coefficients();
    let neg_z = -z;
    let mut coef = a.clone(); // a (-z)^k
    for k in 0..order {
        if k > 0 {
            coef *= &neg_z;
        }
        if coef.is_zero() {
            break;
        }
        let s = k as u64 + 2;
        let coef_abs = coef.abs();
        // N^(1-s)
        let lead = Rational::new(
            BigInt::one(),
            num_traits::pow(BigInt::from(n_direct), (s - 1) as usize),
        );
        // whole tail below tolerance: bound it by (N-1)^(1-s)/(s-1)
        let crude = &coef_abs
            / (num_traits::pow(n_minus_one.clone(), (s - 1) as usize) * int(s - 1));
        if crude <= tol {
            acc.bound += crude;
            continue;
        }
        acc.add(&(&coef * &lead / int(s - 1)));
        acc.add(&(&coef * &lead / (&big_n * int(2))));
        let n2 = &big_n * &big_n;
        let mut npow = n2.clone();
        let mut prev = Rational::zero();
        let mut j = 1usize;
        loop {
            if j >= em.len() {
                return Err(Error::Accuracy {
                    target: ctx.digits(),
                    cap: cfg.term_cap,
                    best: rational_sci(&prev),
                });
            }
            // B_2j/(2j)! (s)_(2j-1) N^(1-s-2j)
            let t = &coef
                * &em[j]
                * pochhammer(&int(s), (2 * j - 1) as u64)
                * &lead
                / &npow;
            let mag = t.abs();
            if mag <= tol {
                acc.bound += mag;
                break;
            }
            if j > 1 && mag >= prev {
                return Err(Error::Accuracy {
                    target: ctx.digits(),
                    cap: cfg.term_cap,
                    best: rational_sci(&mag),
                });
            }
            acc.add(&t);
            prev = mag;
            npow *= &n2;
            j += 1;
        }
        if acc.terms > cfg.term_cap {
            return Err(Error::Accuracy {
                target: ctx.digits(),
                cap: cfg.term_cap,
                best: "unknown".into(),
            });
        }
    }

    // from_rational rounds to nearest: half an ulp each
    let rounding = ctx.ulp() * Rational::new(BigInt::from(acc.roundings + 1), BigInt::from(2));
    let eps = acc.bound + rounding;
    Ok(SeriesEstimate {
        value: acc.sum,
        eps,
        terms: acc.terms,
    })
}

/// S_0, S_1, ..., S_{count-1}: raw partial sums of sum_m c/((m+1)(m+c)).
pub fn raw_partial_sums_3f2(c: &Rational, count: usize, ctx: &PrecisionContext) -> Result<Vec<HPReal>> {
    if is_nonpositive_integer(c) {
        return Err(Error::InvalidParameter(c.clone()));
    }
    let mut out = Vec::with_capacity(count);
    let mut s = HPReal::zero(ctx);
    for m in 0..count {
        let m = int(m as u64);
        s = s + HPReal::from_rational(&(c / ((&m + int(1)) * (&m + c))), ctx);
        out.push(s.clone());
    }
    Ok(out)
}
