//! Arbitrary-precision real kernel.
//!
//! Values are binary fixed-point numbers: an integer mantissa scaled by
//! `2^-bits`. Every context carries `digits + guard_digits` decimal digits of
//! working precision; results are compared at `digits`. Equality between two
//! [`HPReal`]s is never tested, only `|a - b| < 10^-k` with an explicit `k`.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Arc, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::rational::{self, Angle, Rational};

pub const DEFAULT_GUARD_DIGITS: u32 = 15;
pub const MIN_DIGITS: u32 = 10;
pub const MIN_GUARD_DIGITS: u32 = 10;

/// Extra bits used inside the series kernels before the final rounding.
const KERNEL_GUARD_BITS: u32 = 32;

#[derive(Default)]
struct ConstCache {
    pi: OnceLock<BigInt>,
    ln2: OnceLock<BigInt>,
    gamma: OnceLock<BigInt>,
}

/// Requested and guard precision. Constants are memoized per context, so
/// cloning a context and reusing it avoids recomputing pi, ln 2 and gamma.
#[derive(Clone)]
pub struct PrecisionContext {
    digits: u32,
    guard_digits: u32,
    bits: u32,
    cache: Arc<ConstCache>,
}

impl fmt::Debug for PrecisionContext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PrecisionContext")
            .field("digits", &self.digits)
            .field("guard_digits", &self.guard_digits)
            .field("bits", &self.bits)
            .finish()
    }
}

impl PrecisionContext {
    pub fn new(digits: u32) -> Result<Self> {
        Self::with_guard(digits, DEFAULT_GUARD_DIGITS)
    }

    pub fn with_guard(digits: u32, guard_digits: u32) -> Result<Self> {
        if digits < MIN_DIGITS {
            return Err(Error::Precision {
                what: "digits",
                value: digits,
                min: MIN_DIGITS,
            });
        }
        if guard_digits < MIN_GUARD_DIGITS {
            return Err(Error::Precision {
                what: "guard_digits",
                value: guard_digits,
                min: MIN_GUARD_DIGITS,
            });
        }
        let bits = ((digits + guard_digits) as f64 * std::f64::consts::LOG2_10).ceil() as u32 + 16;
        Ok(PrecisionContext {
            digits,
            guard_digits,
            bits,
            cache: Arc::default(),
        })
    }

    pub fn digits(&self) -> u32 {
        self.digits
    }

    pub fn guard_digits(&self) -> u32 {
        self.guard_digits
    }

    /// Binary working precision: mantissas are scaled by `2^bits`.
    pub fn bits(&self) -> u32 {
        self.bits
    }

    /// One unit in the last place, `2^-bits`, as an exact rational.
    pub fn ulp(&self) -> Rational {
        Rational::new(BigInt::one(), BigInt::one() << self.bits)
    }

    fn real(&self, mant: BigInt) -> HPReal {
        HPReal {
            mant,
            bits: self.bits,
            digits: self.digits,
        }
    }
}

/// Fixed-point real paired with the decimal precision it was requested at.
#[derive(Clone)]
pub struct HPReal {
    mant: BigInt,
    bits: u32,
    digits: u32,
}

impl fmt::Debug for HPReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "HPReal({})", self.to_sig_string(self.digits))
    }
}

impl fmt::Display for HPReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_sig_string(self.digits))
    }
}

fn div_round(n: &BigInt, d: &BigInt) -> BigInt {
    debug_assert!(d.is_positive());
    let twice: BigInt = n * 2 + d;
    twice.div_floor(&(d * 2))
}

fn shr_round(x: &BigInt, k: u32) -> BigInt {
    if k == 0 {
        return x.clone();
    }
    (x + (BigInt::one() << (k - 1))) >> k
}

fn pow10(k: u32) -> BigInt {
    num_traits::pow(BigInt::from(10u32), k as usize)
}

impl HPReal {
    pub fn zero(ctx: &PrecisionContext) -> HPReal {
        ctx.real(BigInt::zero())
    }

    pub fn one(ctx: &PrecisionContext) -> HPReal {
        ctx.real(BigInt::one() << ctx.bits)
    }

    pub fn from_int(n: impl Into<BigInt>, ctx: &PrecisionContext) -> HPReal {
        ctx.real(n.into() << ctx.bits)
    }

    /// Correctly rounded to the working precision.
    pub fn from_rational(r: &Rational, ctx: &PrecisionContext) -> HPReal {
        ctx.real(div_round(&(r.numer() << ctx.bits), r.denom()))
    }

    pub fn digits(&self) -> u32 {
        self.digits
    }

    pub fn bits(&self) -> u32 {
        self.bits
    }

    pub fn with_digits(mut self, digits: u32) -> HPReal {
        self.digits = digits;
        self
    }

    fn aligned(&self, other: &HPReal) -> (BigInt, BigInt, u32) {
        match self.bits.cmp(&other.bits) {
            Ordering::Equal => (self.mant.clone(), other.mant.clone(), self.bits),
            Ordering::Less => (
                &self.mant << (other.bits - self.bits),
                other.mant.clone(),
                other.bits,
            ),
            Ordering::Greater => (
                self.mant.clone(),
                &other.mant << (self.bits - other.bits),
                self.bits,
            ),
        }
    }

    fn with_mant(&self, mant: BigInt, bits: u32, other_digits: u32) -> HPReal {
        HPReal {
            mant,
            bits,
            digits: self.digits.max(other_digits),
        }
    }

    pub fn is_negative(&self) -> bool {
        self.mant.is_negative()
    }

    pub fn is_zero(&self) -> bool {
        self.mant.is_zero()
    }

    pub fn abs(&self) -> HPReal {
        HPReal {
            mant: self.mant.abs(),
            ..self.clone()
        }
    }

    pub fn mul_rational(&self, r: &Rational) -> HPReal {
        HPReal {
            mant: div_round(&(&self.mant * r.numer()), r.denom()),
            ..self.clone()
        }
    }

    pub fn checked_div(&self, other: &HPReal) -> Result<HPReal> {
        let (a, b, bits) = self.aligned(other);
        if b.is_zero() {
            return Err(Error::Domain {
                atom: "division".into(),
                reason: "divisor is zero at working precision".into(),
            });
        }
        let (a, b) = if b.is_negative() { (-a, -b) } else { (a, b) };
        Ok(self.with_mant(div_round(&(a << bits), &b), bits, other.digits))
    }

    /// `|self| < 10^-k`, decided exactly on the stored mantissa.
    pub fn abs_lt_pow10(&self, k: i32) -> bool {
        let m = self.mant.abs();
        let one = BigInt::one() << self.bits;
        if k >= 0 {
            m * pow10(k as u32) < one
        } else {
            m < one * pow10((-k) as u32)
        }
    }

    /// `|self| < r` for a nonnegative rational bound.
    pub fn abs_lt_rational(&self, r: &Rational) -> bool {
        let lhs = self.mant.abs() * r.denom();
        let rhs = r.numer() << self.bits;
        lhs < rhs
    }

    pub fn gt_rational(&self, r: &Rational) -> bool {
        &self.mant * r.denom() > (r.numer() << self.bits)
    }

    pub fn cmp_value(&self, other: &HPReal) -> Ordering {
        let (a, b, _) = self.aligned(other);
        a.cmp(&b)
    }

    /// Magnitude no larger than `2^-(bits - slack)`, i.e. zero up to noise.
    pub fn is_negligible(&self, slack_bits: u32) -> bool {
        self.mant.abs() < (BigInt::one() << slack_bits)
    }

    pub fn to_f64(&self) -> f64 {
        let len = self.mant.bits();
        if len <= 1000 {
            let m = self.mant.to_f64().unwrap_or(f64::NAN);
            m / 2f64.powi(self.bits as i32)
        } else {
            let shift = (len - 900) as u32;
            let m = (&self.mant >> shift).to_f64().unwrap_or(f64::NAN);
            m * 2f64.powi(shift as i32 - self.bits as i32)
        }
    }

    /// Nearest rational with denominator `2^bits` (the stored value exactly).
    pub fn to_rational(&self) -> Rational {
        Rational::new(self.mant.clone(), BigInt::one() << self.bits)
    }

    /// Decimal exponent and `sig` significant digits of `|self|`, rounded half up.
    fn decimal_digits(&self, sig: u32) -> Option<(i64, String)> {
        if self.mant.is_zero() {
            return None;
        }
        let m = self.mant.abs();
        let mut e = ((m.bits() as f64 - 1.0 - self.bits as f64) * std::f64::consts::LOG10_2)
            .floor() as i64;
        let lower = pow10(sig - 1);
        let upper = pow10(sig);
        for _ in 0..8 {
            let s = sig as i64 - 1 - e;
            let scaled = if s >= 0 {
                div_round(&(&m * pow10(s as u32)), &(BigInt::one() << self.bits))
            } else {
                div_round(&m, &(pow10((-s) as u32) << self.bits))
            };
            if scaled >= upper {
                e += 1;
            } else if scaled < lower {
                e -= 1;
            } else {
                return Some((e, scaled.to_string()));
            }
        }
        unreachable!("decimal exponent search did not settle")
    }

    /// Renders with exactly `sig` significant digits. Positional notation is
    /// used for moderate exponents, scientific (`d.ddde-N`) otherwise.
    pub fn to_sig_string(&self, sig: u32) -> String {
        let sig = sig.max(1);
        let Some((e, d)) = self.decimal_digits(sig) else {
            return if sig == 1 {
                "0".to_string()
            } else {
                format!("0.{}", "0".repeat(sig as usize - 1))
            };
        };
        let sign = if self.mant.is_negative() { "-" } else { "" };
        if e < -5 || e >= sig as i64 {
            return format!("{sign}{}", sci(&d, e));
        }
        let body = if e >= 0 {
            let (int_part, frac_part) = d.split_at(e as usize + 1);
            if frac_part.is_empty() {
                int_part.to_string()
            } else {
                format!("{int_part}.{frac_part}")
            }
        } else {
            format!("0.{}{}", "0".repeat((-e - 1) as usize), d)
        };
        format!("{sign}{body}")
    }

    /// Always scientific, `sig` significant digits.
    pub fn to_sci_string(&self, sig: u32) -> String {
        let sig = sig.max(1);
        match self.decimal_digits(sig) {
            None => sci(&"0".repeat(sig as usize), 0),
            Some((e, d)) => {
                let sign = if self.mant.is_negative() { "-" } else { "" };
                format!("{sign}{}", sci(&d, e))
            }
        }
    }
}

fn sci(d: &str, e: i64) -> String {
    let (head, tail) = d.split_at(1);
    if tail.is_empty() {
        format!("{head}e{e}")
    } else {
        format!("{head}.{tail}e{e}")
    }
}

macro_rules! binop {
    ($tr:ident, $method:ident, $body:expr) => {
        impl $tr<&HPReal> for &HPReal {
            type Output = HPReal;
            fn $method(self, rhs: &HPReal) -> HPReal {
                let (a, b, bits) = self.aligned(rhs);
                let f: fn(BigInt, BigInt, u32) -> BigInt = $body;
                self.with_mant(f(a, b, bits), bits, rhs.digits)
            }
        }
        impl $tr<HPReal> for HPReal {
            type Output = HPReal;
            fn $method(self, rhs: HPReal) -> HPReal {
                (&self).$method(&rhs)
            }
        }
        impl $tr<&HPReal> for HPReal {
            type Output = HPReal;
            fn $method(self, rhs: &HPReal) -> HPReal {
                (&self).$method(rhs)
            }
        }
    };
}

binop!(Add, add, |a, b, _| a + b);
binop!(Sub, sub, |a, b, _| a - b);
binop!(Mul, mul, |a, b, bits| shr_round(&(a * b), bits));

impl Neg for HPReal {
    type Output = HPReal;
    fn neg(self) -> HPReal {
        HPReal {
            mant: -self.mant,
            ..self
        }
    }
}

impl Neg for &HPReal {
    type Output = HPReal;
    fn neg(self) -> HPReal {
        -(self.clone())
    }
}

// ---------------------------------------------------------------------------
// Raw kernels on mantissas scaled by 2^b.

fn fmul(a: &BigInt, b: &BigInt, bits: u32) -> BigInt {
    shr_round(&(a * b), bits)
}

fn atan_inv(x: u64, bits: u32) -> BigInt {
    let x = BigInt::from(x);
    let x2 = &x * &x;
    let mut term = div_round(&(BigInt::one() << bits), &x);
    let mut sum = BigInt::zero();
    let mut k = 0u64;
    while !term.is_zero() {
        let t = div_round(&term, &BigInt::from(2 * k + 1));
        if k.is_multiple_of(2) {
            sum += t;
        } else {
            sum -= t;
        }
        term = div_round(&term, &x2);
        k += 1;
    }
    sum
}

fn pi_kernel(bits: u32) -> BigInt {
    let b = bits + KERNEL_GUARD_BITS;
    let v = atan_inv(5, b) * 16 - atan_inv(239, b) * 4;
    shr_round(&v, KERNEL_GUARD_BITS)
}

/// atanh(t) for a fixed-point |t| < 1 (at `bits`).
fn atanh_kernel(t: &BigInt, bits: u32) -> BigInt {
    let t2 = fmul(t, t, bits);
    let mut power = t.clone();
    let mut sum = BigInt::zero();
    let mut k = 0u64;
    while !power.is_zero() {
        sum += div_round(&power, &BigInt::from(2 * k + 1));
        power = fmul(&power, &t2, bits);
        k += 1;
    }
    sum
}

fn ln2_kernel(bits: u32) -> BigInt {
    let b = bits + KERNEL_GUARD_BITS;
    let third = div_round(&(BigInt::one() << b), &BigInt::from(3));
    shr_round(&(atanh_kernel(&third, b) * 2), KERNEL_GUARD_BITS)
}

/// ln x for a positive fixed-point mantissa, with ln 2 supplied at the same scale.
fn ln_kernel(x: &BigInt, bits: u32, ln2: &BigInt) -> BigInt {
    debug_assert!(x.is_positive());
    let g = KERNEL_GUARD_BITS;
    let b = bits + g;
    let x = x << g;
    // 2^(len-1) <= x < 2^len, so x / 2^(len-1-b) lies in [1, 2).
    let mut k = x.bits() as i64 - 1 - b as i64;
    let mut m = if k >= 0 {
        shr_round(&x, k as u32)
    } else {
        &x << (-k) as u32
    };
    let one = BigInt::one() << b;
    // sqrt(2) * 2^b, truncated; exact placement of the split is irrelevant.
    let sqrt2 = (BigInt::from(2) << (2 * b)).sqrt();
    if m > sqrt2 {
        m = shr_round(&m, 1);
        k += 1;
    }
    let t = div_round(&((&m - &one) << b), &(&m + &one));
    let ln_m = atanh_kernel(&t, b) * 2;
    let ln2_b = ln2 << g;
    shr_round(&(ln_m + ln2_b * k), g)
}

/// (sin x, cos x) for |x| <= about pi/4.
fn sin_cos_small(x: &BigInt, bits: u32) -> (BigInt, BigInt) {
    let x2 = fmul(x, x, bits);
    let mut sin = BigInt::zero();
    let mut term = x.clone();
    let mut n = 1u64;
    while !term.is_zero() {
        sin += &term;
        term = -div_round(&fmul(&term, &x2, bits), &BigInt::from((n + 1) * (n + 2)));
        n += 2;
    }
    let mut cos = BigInt::zero();
    let mut term = BigInt::one() << bits;
    let mut n = 0u64;
    while !term.is_zero() {
        cos += &term;
        term = -div_round(&fmul(&term, &x2, bits), &BigInt::from((n + 1) * (n + 2)));
        n += 2;
    }
    (sin, cos)
}

/// Rotates (sin r, cos r) by `quadrant` quarter turns.
fn rotate(quadrant: i64, s: BigInt, c: BigInt) -> (BigInt, BigInt) {
    match quadrant.rem_euclid(4) {
        0 => (s, c),
        1 => (c, -s),
        2 => (-s, -c),
        _ => (-c, s),
    }
}

fn gamma_terms(bits: u32) -> u64 {
    // pi * e^(-4n) < 4 * 2^(-5n) <= 2^-(bits + 2).
    (bits as u64 + 4).div_ceil(5)
}

/// Euler's constant by the Brent-McMillan Bessel-function ratio.
fn gamma_kernel(bits: u32) -> BigInt {
    let b = bits + KERNEL_GUARD_BITS;
    let n = gamma_terms(bits);
    let ln2 = ln2_kernel(b);
    let n_fixed = BigInt::from(n) << b;
    let ln_n = ln_kernel(&n_fixed, b, &ln2);
    let n2 = BigInt::from(n * n);
    let mut a = -ln_n;
    let mut bb = BigInt::one() << b;
    let mut u = a.clone();
    let mut v = bb.clone();
    let mut k = 1u64;
    loop {
        let kk = BigInt::from(k);
        bb = div_round(&(&bb * &n2), &(&kk * &kk));
        a = div_round(&(div_round(&(&a * &n2), &kk) + &bb), &kk);
        if a.is_zero() && bb.is_zero() {
            break;
        }
        u += &a;
        v += &bb;
        k += 1;
    }
    shr_round(&div_round(&(u << b), &v), KERNEL_GUARD_BITS)
}

/// Rigorous bound on |computed gamma - gamma| at this context.
pub fn gamma_error_bound(ctx: &PrecisionContext) -> Rational {
    let n = gamma_terms(ctx.bits);
    let truncation = Rational::new(BigInt::from(4), BigInt::one() << (5 * n) as u32);
    truncation + ctx.ulp() * rational::int(4)
}

// ---------------------------------------------------------------------------
// Public operations.

pub fn const_pi(ctx: &PrecisionContext) -> HPReal {
    ctx.real(ctx.cache.pi.get_or_init(|| pi_kernel(ctx.bits)).clone())
}

pub fn const_ln2(ctx: &PrecisionContext) -> HPReal {
    ctx.real(ctx.cache.ln2.get_or_init(|| ln2_kernel(ctx.bits)).clone())
}

pub fn const_gamma(ctx: &PrecisionContext) -> HPReal {
    ctx.real(ctx.cache.gamma.get_or_init(|| gamma_kernel(ctx.bits)).clone())
}

fn domain(atom: &str, reason: impl Into<String>) -> Error {
    Error::Domain {
        atom: atom.to_string(),
        reason: reason.into(),
    }
}

pub fn eval_ln(x: &HPReal, ctx: &PrecisionContext) -> Result<HPReal> {
    if !x.mant.is_positive() {
        return Err(domain("ln", format!("argument {} is not positive", x.to_sci_string(6))));
    }
    let x = rescale(x, ctx);
    let ln2 = const_ln2(ctx);
    Ok(ctx.real(ln_kernel(&x.mant, ctx.bits, &ln2.mant)))
}

pub fn eval_ln_int(n: u64, ctx: &PrecisionContext) -> Result<HPReal> {
    eval_ln(&HPReal::from_int(n, ctx), ctx)
}

pub fn eval_sqrt(x: &HPReal, ctx: &PrecisionContext) -> Result<HPReal> {
    if x.mant.is_negative() {
        return Err(domain("sqrt", format!("argument {} is negative", x.to_sci_string(6))));
    }
    let x = rescale(x, ctx);
    Ok(ctx.real((x.mant << ctx.bits).sqrt()))
}

fn rescale(x: &HPReal, ctx: &PrecisionContext) -> HPReal {
    match x.bits.cmp(&ctx.bits) {
        Ordering::Equal => x.clone(),
        Ordering::Less => ctx.real(&x.mant << (ctx.bits - x.bits)),
        Ordering::Greater => ctx.real(shr_round(&x.mant, x.bits - ctx.bits)),
    }
}

/// (sin(pi*a), cos(pi*a)) for an exact rational a.
fn sin_cos_pi_rational(a: &Rational, ctx: &PrecisionContext) -> (HPReal, HPReal) {
    // a = k/2 + r with |r| <= 1/4
    let twice = a * rational::int(2);
    let k = rational::floor(&(twice + rational::rat(1, 2)));
    let r = a - Rational::new(k.clone(), BigInt::from(2));
    let b = ctx.bits + KERNEL_GUARD_BITS;
    let pi_b = pi_kernel(b);
    let x = div_round(&(&pi_b * r.numer()), r.denom());
    let (s, c) = sin_cos_small(&x, b);
    let q = (k % 4i32).to_i64().unwrap();
    let (s, c) = rotate(q, s, c);
    (
        ctx.real(shr_round(&s, KERNEL_GUARD_BITS)),
        ctx.real(shr_round(&c, KERNEL_GUARD_BITS)),
    )
}

pub fn eval_sin_pi(a: &Angle, ctx: &PrecisionContext) -> HPReal {
    sin_cos_pi_rational(a.value(), ctx).0
}

pub fn eval_cos_pi(a: &Angle, ctx: &PrecisionContext) -> HPReal {
    sin_cos_pi_rational(a.value(), ctx).1
}

pub fn eval_cos_2pi(a: &Angle, ctx: &PrecisionContext) -> HPReal {
    let doubled = a.value() * rational::int(2);
    sin_cos_pi_rational(&doubled, ctx).1
}

pub fn eval_cot_pi(a: &Angle, ctx: &PrecisionContext) -> Result<HPReal> {
    if a.is_zero() {
        return Err(domain("cot(pi*a)", "pole at a = 0 (mod 1)"));
    }
    let (s, c) = sin_cos_pi_rational(a.value(), ctx);
    c.checked_div(&s)
}

/// (sin x, cos x) for an arbitrary real argument.
pub fn eval_sin_cos(x: &HPReal, ctx: &PrecisionContext) -> (HPReal, HPReal) {
    let b = ctx.bits + KERNEL_GUARD_BITS;
    let x = rescale(x, ctx).mant << KERNEL_GUARD_BITS;
    let pi_b = pi_kernel(b);
    // x = k*pi/2 + r with |r| <= pi/4
    let k = div_round(&(&x * 2), &pi_b);
    let r = shr_round(&(&x * 2 - &k * &pi_b), 1);
    let (s, c) = sin_cos_small(&r, b);
    let q = (k % 4i32).to_i64().unwrap();
    let (s, c) = rotate(q, s, c);
    (
        ctx.real(shr_round(&s, KERNEL_GUARD_BITS)),
        ctx.real(shr_round(&c, KERNEL_GUARD_BITS)),
    )
}
