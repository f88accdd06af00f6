use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use hypsum_core::clausen::{basel_case, closed_3f2, series_3f2, telescoped_3f2, ClausenParameter};
use hypsum_core::digamma::{needs_reduction, psi_closed, psi_series, Route};
use hypsum_core::error::Error;
use hypsum_core::hp::PrecisionContext;
use hypsum_core::rational::{parse_rational, render_rational, Rational};
use hypsum_core::report::{Report, TOOL, VERSION};
use hypsum_core::series::rational_sci;
use hypsum_core::theorems::{find, load_database, series_target, verify_all, verify_record, Thresholds};

#[derive(Parser)]
#[command(name = "hypsum", version, about = "Digamma and 3F2[1,1,c;2,c+1;1] closed forms, with numerical verification")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Significant decimal digits.
    #[arg(long, env = "HYPSUM_DIGITS", default_value_t = 50)]
    digits: u32,
    /// Print notices to stderr.
    #[arg(long, short)]
    verbose: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate psi at a rational argument.
    Psi {
        /// Argument such as 1/10 or -3/2.
        #[arg(allow_hyphen_values = true)]
        arg: String,
        #[arg(long, value_enum, default_value_t = Method::Murty)]
        method: Method,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        #[command(flatten)]
        common: Common,
    },
    /// Evaluate 3F2[1, 1, c; 2, c+1; 1].
    Clausen {
        /// The parameter c.
        #[arg(long, allow_hyphen_values = true, conflicts_with_all = ["p", "q"])]
        c: Option<String>,
        /// With --q, selects c = (p + q)/q.
        #[arg(long, allow_hyphen_values = true, requires = "q")]
        p: Option<i64>,
        #[arg(long, requires = "p")]
        q: Option<i64>,
        #[arg(long, value_enum, default_value_t = Method::Murty)]
        method: Method,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        #[command(flatten)]
        common: Common,
    },
    /// Check the identity database.
    Verify {
        /// Every record.
        #[arg(long, conflicts_with = "id")]
        all: bool,
        /// One record id; repeatable.
        #[arg(long)]
        id: Vec<String>,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        report: Format,
        /// Pass threshold for |closed - rhs|; default 10^-(digits-10).
        #[arg(long)]
        threshold: Option<String>,
        #[arg(long, value_enum, default_value_t = RouteArg::Murty)]
        route: RouteArg,
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Method {
    Murty,
    Gauss,
    Series,
    Telescoped,
    All,
}

impl Method {
    fn route(self) -> Route {
        match self {
            Method::Gauss => Route::Gauss,
            _ => Route::Murty,
        }
    }

    fn closed(self) -> bool {
        matches!(self, Method::Murty | Method::Gauss | Method::All)
    }

    fn series(self) -> bool {
        matches!(self, Method::Series | Method::All)
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum RouteArg {
    Murty,
    Gauss,
}

impl From<RouteArg> for Route {
    fn from(r: RouteArg) -> Route {
        match r {
            RouteArg::Murty => Route::Murty,
            RouteArg::Gauss => Route::Gauss,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Csv,
}

/// A failure and the exit code it maps to.
struct Failure(u8, anyhow::Error);

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        let code = match e.downcast_ref::<Error>() {
            Some(Error::UnknownId(_) | Error::RationalSyntax(_) | Error::ZeroDenominator { .. }) => 2,
            _ => 1,
        };
        Failure(code, e)
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        anyhow::Error::new(e).into()
    }
}

fn context(digits: u32) -> Result<PrecisionContext> {
    PrecisionContext::new(digits).context("invalid --digits")
}

fn json_out(value: serde_json::Value) -> String {
    let mut s = serde_json::to_string_pretty(&value).expect("json value serializes");
    s.push('\n');
    s
}

fn cmd_psi(arg: &str, method: Method, format: Format, common: &Common) -> Result<String> {
    if method == Method::Telescoped {
        bail!("--method telescoped applies to clausen only");
    }
    let r = parse_rational(arg)?;
    let ctx = context(common.digits)?;
    let digits = common.digits;
    let mut fields = serde_json::Map::new();
    fields.insert("tool".into(), json!(TOOL));
    fields.insert("version".into(), json!(VERSION));
    fields.insert("digits".into(), json!(digits));
    fields.insert("argument".into(), json!(render_rational(&r)));
    let mut text = String::new();

    if method.closed() {
        let route = method.route();
        let cf = psi_closed(&r, route)?;
        let value = cf.eval(&ctx)?.to_sig_string(digits);
        text += &format!("psi({}) = {cf}\n        = {value}\n", render_rational(&r));
        fields.insert("route".into(), json!(route.name()));
        fields.insert("closed_form".into(), json!(cf.render()));
        fields.insert("value".into(), json!(value));
        if method == Method::All {
            let g = psi_closed(&r, Route::Gauss)?.eval(&ctx)?.to_sig_string(digits);
            text += &format!("  gauss = {g}\n");
            fields.insert("gauss_value".into(), json!(g));
        }
    }
    if method.series() {
        let s = psi_series(&r, &ctx, series_target(digits))?;
        let v = s.value.to_sig_string(digits);
        let eps = rational_sci(&s.eps);
        text += &format!("  series = {v} (eps {eps}, {} terms)\n", s.terms);
        fields.insert("series_value".into(), json!(v));
        fields.insert("series_eps".into(), json!(eps));
    }
    Ok(match format {
        Format::Json => json_out(serde_json::Value::Object(fields)),
        Format::Text => text,
        Format::Csv => bail!("csv output is only available for verify"),
    })
}

fn clausen_parameter(c: Option<&str>, p: Option<i64>, q: Option<i64>, verbose: bool) -> Result<Rational> {
    match (c, p, q) {
        (Some(c), None, None) => Ok(parse_rational(c)?),
        (None, Some(p), Some(q)) => {
            if verbose && p > 0 && q > 0 && needs_reduction(p as u64, q as u64) {
                eprintln!("note: gcd({p}, {q}) > 1; using the reduced fraction");
            }
            Ok(ClausenParameter::from_pair(p, q)?.value().clone())
        }
        _ => bail!(Error::Argument("give either --c or both --p and --q".into())),
    }
}

fn cmd_clausen(c: Rational, method: Method, format: Format, common: &Common) -> Result<String> {
    let ctx = context(common.digits)?;
    let digits = common.digits;
    let mut fields = serde_json::Map::new();
    fields.insert("tool".into(), json!(TOOL));
    fields.insert("version".into(), json!(VERSION));
    fields.insert("digits".into(), json!(digits));
    fields.insert("c".into(), json!(render_rational(&c)));
    let mut text = format!("3F2[1, 1, {0}; 2, {0} + 1; 1]\n", render_rational(&c));

    if c == Rational::from_integer(1.into()) {
        let v = basel_case(&ctx).to_sig_string(digits);
        text += &format!("  c = 1 is the basel case: pi^2/6\n  = {v}\n");
        fields.insert("closed_form".into(), json!("pi^2/6"));
        fields.insert("value".into(), json!(v));
        fields.insert("note".into(), json!("c = 1: basel case"));
    } else {
        ClausenParameter::new(c.clone())?;
        if method.closed() {
            let route = method.route();
            let cf = closed_3f2(&c, route)?;
            let v = cf.eval(&ctx)?.to_sig_string(digits);
            text += &format!("  closed ({route}) = {cf}\n    = {v}\n");
            fields.insert("route".into(), json!(route.name()));
            fields.insert("closed_form".into(), json!(cf.render()));
            fields.insert("value".into(), json!(v));
        }
        if method.series() {
            let s = series_3f2(&c, &ctx, series_target(digits))?;
            let v = s.value.to_sig_string(digits);
            let eps = rational_sci(&s.eps);
            text += &format!("  series = {v} (eps {eps}, {} terms)\n", s.terms);
            fields.insert("series_value".into(), json!(v));
            fields.insert("series_eps".into(), json!(eps));
        }
        if matches!(method, Method::Telescoped | Method::All) {
            let t = telescoped_3f2(&c, &ctx)?;
            let v = t.value.to_sig_string(digits);
            text += &format!("  telescoped = {v} (eps {})\n", rational_sci(&t.eps));
            fields.insert("telescoped_value".into(), json!(v));
        }
    }
    Ok(match format {
        Format::Json => json_out(serde_json::Value::Object(fields)),
        Format::Text => text,
        Format::Csv => bail!("csv output is only available for verify"),
    })
}

fn cmd_verify(
    all: bool,
    ids: &[String],
    report: Format,
    threshold: Option<&str>,
    route: Route,
    common: &Common,
) -> std::result::Result<(String, bool), Failure> {
    if !all && ids.is_empty() {
        return Err(Failure(2, anyhow::anyhow!("give --all or at least one --id")));
    }
    let ctx = context(common.digits)?;
    let thresholds = Thresholds {
        pass: threshold.map(parse_rational).transpose()?,
        ..Thresholds::default()
    };
    let results = if all {
        verify_all(&ctx, &thresholds, route)
    } else {
        let recs = ids.iter().map(|id| find(id)).collect::<hypsum_core::error::Result<Vec<_>>>()?;
        recs.into_iter().map(|r| verify_record(r, &ctx, &thresholds, route)).collect()
    };
    let reports = results.into_iter().collect::<hypsum_core::error::Result<Vec<_>>>()?;
    let ok = reports.iter().all(|r| r.meets_expectation());
    if common.verbose {
        eprintln!("checked {} of {} records", reports.len(), load_database().len());
    }
    let out = Report::new(common.digits, route.name(), &reports);
    let text = match report {
        Format::Text => out.to_text(),
        Format::Json => out.to_json(),
        Format::Csv => out.to_csv(),
    };
    Ok((text, ok))
}

fn run(cli: Cli) -> std::result::Result<(String, bool), Failure> {
    match cli.command {
        Command::Psi {
            arg,
            method,
            format,
            common,
        } => Ok((cmd_psi(&arg, method, format, &common)?, true)),
        Command::Clausen {
            c,
            p,
            q,
            method,
            format,
            common,
        } => {
            let c = clausen_parameter(c.as_deref(), p, q, common.verbose).map_err(|e| Failure(2, e))?;
            Ok((cmd_clausen(c, method, format, &common)?, true))
        }
        Command::Verify {
            all,
            id,
            report,
            threshold,
            route,
            common,
        } => cmd_verify(all, &id, report, threshold.as_deref(), route.into(), &common),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok((out, ok)) => {
            print!("{out}");
            if ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(Failure(code, e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(code)
        }
    }
}
