//! Digamma at rational arguments.
//!
//! Two closed routes produce a [`ClosedForm`] for psi(p/q), 0 < p/q < 1:
//!
//! * [`psi_murty`]: `-gamma - ln(2q) - (pi/2) cot(pi p/q) + 2 sum_{j=1}^{q/2} cos(2 pi p j/q) ln sin(pi j/q)`
//! * [`psi_gauss`]: `-gamma - ln q - (pi/2) cot(pi p/q) + sum'_{j=1}^{q/2} cos(2 pi j p/q) ln(2 - 2 cos(2 pi j/q))`,
//!   where the primed sum halves the `j = q/2` term for even `q`.
//!
//! [`psi_closed`] extends either route to every non-pole rational with
//! psi(z+1) = psi(z) + 1/z. [`psi_series`] is the independent numerical oracle
//! `psi(z) = -1/z - gamma + sum_{n>=1} z/(n(n+z))`, and [`psi_hyp`] goes
//! through the Clausen closed form.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::clausen;
use crate::closed::{shifted_harmonic, Atom, ClosedForm};
use crate::error::{Error, Result};
use crate::hp::{self, HPReal, PrecisionContext};
use crate::rational::{floor, frac, int, is_nonpositive_integer, rat, to_u64, Rational};
use crate::series::{kummer_sum, SeriesConfig, SeriesEstimate};

/// Which finite formula supplies psi on (0, 1).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Hash)]
pub enum Route {
    Gauss,
    #[default]
    Murty,
}

impl Route {
    pub fn name(self) -> &'static str {
        match self {
            Route::Gauss => "gauss",
            Route::Murty => "murty",
        }
    }
}

impl fmt::Display for Route {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Route {
    type Err = Error;
    fn from_str(s: &str) -> Result<Route> {
        match s.to_ascii_lowercase().as_str() {
            "gauss" => Ok(Route::Gauss),
            "murty" => Ok(Route::Murty),
            _ => Err(Error::Argument(format!("unknown route {s:?} (gauss|murty)"))),
        }
    }
}

/// A rational that is not a pole of psi.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PsiArgument(Rational);

impl PsiArgument {
    pub fn new(r: Rational) -> Result<PsiArgument> {
        if is_nonpositive_integer(&r) {
            return Err(Error::Pole(r));
        }
        Ok(PsiArgument(r))
    }

    pub fn value(&self) -> &Rational {
        &self.0
    }
}

/// Validates 1 <= p < q and divides out gcd(p, q).
fn reduced_pair(p: u64, q: u64) -> Result<(u64, u64)> {
    if p == 0 || p >= q {
        return Err(Error::Argument(format!(
            "closed digamma formulas need 1 <= p < q, got p = {p}, q = {q}"
        )));
    }
    let g = p.gcd(&q);
    Ok((p / g, q / g))
}

/// Whether gcd(p, q) > 1, i.e. the pair will be reduced before use.
pub fn needs_reduction(p: u64, q: u64) -> bool {
    p.gcd(&q) > 1
}

fn common_head(p: u64, q: u64, ln_arg: u64) -> Result<ClosedForm> {
    ClosedForm::from_terms([
        (Atom::Gamma, int(-1)),
        (Atom::LnNat(ln_arg), int(-1)),
        (Atom::pi_cot(&rat(p as i64, q as i64)), rat(-1, 2)),
    ])
}

fn as_i64(n: u64) -> Result<i64> {
    i64::try_from(n).map_err(|_| Error::Argument(format!("{n} is too large")))
}

pub fn psi_murty(p: u64, q: u64) -> Result<ClosedForm> {
    let (p, q) = reduced_pair(p, q)?;
    let two_q = q
        .checked_mul(2)
        .ok_or_else(|| Error::Argument(format!("q = {q} is too large")))?;
    let (pi, qi) = (as_i64(p)?, as_i64(q)?);
    let mut cf = common_head(p, q, two_q)?;
    for j in 1..=qi / 2 {
        cf.add_term(Atom::cos_ln_sin(&rat(pi * j, qi), &rat(j, qi)), int(2))?;
    }
    Ok(cf)
}

pub fn psi_gauss(p: u64, q: u64) -> Result<ClosedForm> {
    let (p, q) = reduced_pair(p, q)?;
    let (pi, qi) = (as_i64(p)?, as_i64(q)?);
    let mut cf = common_head(p, q, q)?;
    // ln(2 - 2cos(2 pi j/q)) = ln 4 + 2 ln sin(pi j/q), and ln 4 = -2 ln sin(pi/6),
    // which keeps the cosine-weighted ln 4 inside the CosLnSin basis.
    for j in 1..=qi / 2 {
        let weight = if 2 * j == qi { rat(1, 2) } else { int(1) };
        let alpha = rat(j * pi, qi);
        cf.add_term(Atom::cos_ln_sin(&alpha, &rat(1, 6)), &weight * int(-2))?;
        cf.add_term(Atom::cos_ln_sin(&alpha, &rat(j, qi)), &weight * int(2))?;
    }
    Ok(cf)
}

fn psi_unit_interval(f: &Rational, route: Route) -> Result<ClosedForm> {
    let p = to_u64(f.numer()).ok_or_else(|| Error::Argument(format!("numerator of {f} too large")))?;
    let q = to_u64(f.denom()).ok_or_else(|| Error::Argument(format!("denominator of {f} too large")))?;
    match route {
        Route::Murty => psi_murty(p, q),
        Route::Gauss => psi_gauss(p, q),
    }
}

/// Closed form of psi(r) for any rational that is not a pole.
pub fn psi_closed(r: &Rational, route: Route) -> Result<ClosedForm> {
    let r = PsiArgument::new(r.clone())?.0;
    let f = frac(&r);
    let n = floor(&r);
    if f.is_zero() {
        // psi(m) = -gamma + H_{m-1}
        let mut cf = ClosedForm::from_terms([(Atom::Gamma, int(-1))])?;
        cf.add_rational(&shifted_harmonic(&int(1), &(n - BigInt::one())));
        return Ok(cf);
    }
    let mut cf = psi_unit_interval(&f, route)?;
    if n.is_positive() {
        // psi(f + n) = psi(f) + sum_{k<n} 1/(f + k)
        cf.add_rational(&shifted_harmonic(&f, &n));
    } else if n.is_negative() {
        // psi(f - m) = psi(f) - sum_{k=1}^{m} 1/(f - k)
        let m = -n;
        let start = &f - int(m.clone());
        cf.add_rational(&-shifted_harmonic(&start, &m));
    }
    Ok(cf)
}

/// psi(r) from its defining series, with a certified error bound. Fails when
/// the bound cannot reach `10^-target_digits`.
pub fn psi_series(
    r: &Rational,
    ctx: &PrecisionContext,
    target_digits: u32,
) -> Result<SeriesEstimate> {
    psi_series_with(r, ctx, target_digits, &SeriesConfig::default())
}

pub fn psi_series_with(
    r: &Rational,
    ctx: &PrecisionContext,
    target_digits: u32,
    cfg: &SeriesConfig,
) -> Result<SeriesEstimate> {
    let r = PsiArgument::new(r.clone())?.0;
    if target_digits > ctx.digits() {
        return Err(Error::Argument(format!(
            "target {target_digits} digits exceeds context precision {}",
            ctx.digits()
        )));
    }
    let tail = kummer_sum(&r, &r, ctx, cfg)?;
    let value = tail.value - HPReal::from_rational(&r.recip(), ctx) - hp::const_gamma(ctx);
    let eps = tail.eps + hp::gamma_error_bound(ctx) + ctx.ulp() * int(2);
    SeriesEstimate {
        value,
        eps,
        terms: tail.terms,
    }
    .require(target_digits, cfg.term_cap)
}

/// psi(r) = -1/r - gamma + (r/(1+r)) 3F2[1,1,1+r; 2,2+r; 1], with the 3F2
/// taken from its closed form. A consistency route, not an oracle.
pub fn psi_hyp(r: &Rational, ctx: &PrecisionContext, route: Route) -> Result<HPReal> {
    let r = PsiArgument::new(r.clone())?.0;
    if r == int(-1) {
        return Err(Error::Argument("psi_hyp prefactor r/(1+r) is singular at r = -1".into()));
    }
    let c = &r + int(1);
    let f = clausen::closed_3f2(&c, route)?.eval(ctx)?;
    let weight = &r / &c;
    Ok(f.mul_rational(&weight) - HPReal::from_rational(&r.recip(), ctx) - hp::const_gamma(ctx))
}
