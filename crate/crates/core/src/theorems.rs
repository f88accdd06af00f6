//! The identity database and its verifier.

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use rayon::prelude::*;

use crate::clausen::{closed_3f2, series_3f2, ClausenParameter};
use crate::digamma::Route;
use crate::error::{Error, Result};
use crate::expr::{parse_expr, Expr};
use crate::hp::{HPReal, PrecisionContext};
use crate::rational::{parse_rational, rat, Rational};
use crate::series::pow10_recip;

/// The database as shipped.
pub const DATABASE: &str = include_str!("../data/theorems.txt");

/// Records known to be wrong as published.
const ERRONEOUS_IDS: [&str; 3] = ["5.1", "5.2", "5.3"];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Status {
    New,
    Corrected,
    Erroneous,
}

impl Status {
    pub fn name(self) -> &'static str {
        match self {
            Status::New => "new",
            Status::Corrected => "corrected",
            Status::Erroneous => "erroneous",
        }
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Status {
    type Err = Error;
    fn from_str(s: &str) -> Result<Status> {
        match s {
            "new" => Ok(Status::New),
            "corrected" => Ok(Status::Corrected),
            "erroneous" => Ok(Status::Erroneous),
            _ => Err(Error::Database(format!("unknown status {s:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TheoremRecord {
    pub id: String,
    pub c: Rational,
    pub rhs: Expr,
    pub status: Status,
    pub source_note: String,
}

fn note_for(id: &str, status: Status) -> String {
    match status {
        Status::New => format!("{id}: new closed form"),
        Status::Erroneous => format!("{id}: published form, refuted numerically"),
        Status::Corrected => format!("{id}: corrected published form"),
    }
}

/// Parses database text. Blank lines and `#` comments are skipped.
pub fn parse_database(text: &str) -> Result<Vec<TheoremRecord>> {
    let mut out = Vec::new();
    let mut seen = HashSet::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let bad = |msg: String| Error::Database(format!("line {}: {msg}", lineno + 1));
        let fields: Vec<&str> = line.splitn(4, '|').map(str::trim).collect();
        let [id, c, status, expr] = fields[..] else {
            return Err(bad("expected `id | c | status | expression`".into()));
        };
        if !seen.insert(id.to_string()) {
            return Err(bad(format!("duplicate id {id}")));
        }
        let c = parse_rational(c).map_err(|e| bad(e.to_string()))?;
        ClausenParameter::new(c.clone()).map_err(|e| bad(e.to_string()))?;
        let status: Status = status.parse().map_err(|e: Error| bad(e.to_string()))?;
        if (status == Status::Erroneous) != ERRONEOUS_IDS.contains(&id) {
            return Err(bad(format!("status {status} does not fit id {id}")));
        }
        let rhs = parse_expr(expr).map_err(|e| bad(e.to_string()))?;
        out.push(TheoremRecord {
            id: id.to_string(),
            source_note: note_for(id, status),
            c,
            rhs,
            status,
        });
    }
    Ok(out)
}

/// The embedded records, parsed once.
pub fn load_database() -> &'static [TheoremRecord] {
    static DB: OnceLock<Vec<TheoremRecord>> = OnceLock::new();
    DB.get_or_init(|| parse_database(DATABASE).expect("embedded database is well formed"))
}

pub fn find(id: &str) -> Result<&'static TheoremRecord> {
    load_database()
        .iter()
        .find(|r| r.id == id)
        .ok_or_else(|| Error::UnknownId(id.to_string()))
}

/// Acceptance thresholds. `None` fields take defaults scaled to the precision.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Thresholds {
    /// Closed form vs. stored expression; default 10^-(digits-10).
    pub pass: Option<Rational>,
    /// Slack on top of the series bound; default as `pass`.
    pub series: Option<Rational>,
    /// Minimum gap for refuting an erroneous record; default 1/20.
    pub fail_floor: Option<Rational>,
}

impl Thresholds {
    fn default_pass(digits: u32) -> Rational {
        pow10_recip(digits.saturating_sub(10))
    }

    pub fn pass_for(&self, digits: u32) -> Rational {
        self.pass.clone().unwrap_or_else(|| Self::default_pass(digits))
    }

    pub fn series_for(&self, digits: u32) -> Rational {
        self.series.clone().unwrap_or_else(|| Self::default_pass(digits))
    }

    pub fn fail_floor(&self) -> Rational {
        self.fail_floor.clone().unwrap_or_else(|| rat(1, 20))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Verdict {
    Pass,
    Fail,
    ExpectedFail,
}

impl Verdict {
    pub fn name(self) -> &'static str {
        match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
            Verdict::ExpectedFail => "expected-fail",
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone)]
pub struct VerifyReport {
    pub id: String,
    pub c: Rational,
    pub status: Status,
    pub digits: u32,
    pub closed_form: String,
    pub closed_value: HPReal,
    pub series_value: HPReal,
    pub series_eps: Rational,
    pub rhs_value: HPReal,
    pub abs_diff_closed_rhs: HPReal,
    pub abs_diff_series_rhs: HPReal,
    pub verdict: Verdict,
}

impl VerifyReport {
    /// Pass for new and corrected records, expected-fail for erroneous ones.
    pub fn meets_expectation(&self) -> bool {
        match self.status {
            Status::Erroneous => self.verdict == Verdict::ExpectedFail,
            _ => self.verdict == Verdict::Pass,
        }
    }
}

/// Digits the series oracle is asked for at working precision `digits`.
pub fn series_target(digits: u32) -> u32 {
    digits.saturating_sub(5).max(1)
}

pub fn verify_record(
    rec: &TheoremRecord,
    ctx: &PrecisionContext,
    thresholds: &Thresholds,
    route: Route,
) -> Result<VerifyReport> {
    let wrap = |e: Error| Error::Record {
        id: rec.id.clone(),
        source: Box::new(e),
    };
    let digits = ctx.digits();
    let closed = closed_3f2(&rec.c, route).map_err(wrap)?;
    let closed_value = closed.eval(ctx).map_err(wrap)?;
    let series = series_3f2(&rec.c, ctx, series_target(digits)).map_err(wrap)?;
    let rhs_value = rec.rhs.eval(ctx).map_err(wrap)?;
    let abs_diff_closed_rhs = (&closed_value - &rhs_value).abs();
    let abs_diff_series_rhs = (&series.value - &rhs_value).abs();

    let passes = abs_diff_closed_rhs.abs_lt_rational(&thresholds.pass_for(digits))
        && abs_diff_series_rhs.abs_lt_rational(&(&series.eps + thresholds.series_for(digits)));
    let verdict = if rec.status == Status::Erroneous && abs_diff_closed_rhs.gt_rational(&thresholds.fail_floor()) {
        Verdict::ExpectedFail
    } else if passes {
        Verdict::Pass
    } else {
        Verdict::Fail
    };
    Ok(VerifyReport {
        id: rec.id.clone(),
        c: rec.c.clone(),
        status: rec.status,
        digits,
        closed_form: closed.render(),
        closed_value,
        series_value: series.value,
        series_eps: series.eps,
        rhs_value,
        abs_diff_closed_rhs,
        abs_diff_series_rhs,
        verdict,
    })
}

pub fn verify_one(id: &str, ctx: &PrecisionContext, thresholds: &Thresholds) -> Result<VerifyReport> {
    verify_record(find(id)?, ctx, thresholds, Route::default())
}

/// Every record, checked concurrently, reported in database order.
pub fn verify_all(ctx: &PrecisionContext, thresholds: &Thresholds, route: Route) -> Vec<Result<VerifyReport>> {
    load_database()
        .par_iter()
        .map(|rec| verify_record(rec, ctx, thresholds, route))
        .collect()
}
