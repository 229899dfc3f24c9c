use std::f64::consts::PI;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use argzeta::bounds::{
    choose_params, manual_params, s_bound_direct, s_bound_via_sandwich, BoundParams, BoundReport, Height, Route,
};
use argzeta::explicit::{balance, gaussian_prime_cutoff, BalanceOptions, TestFunction};
use argzeta::extremal::{ExtremalPair, ExtremalSeries, Side, Truncation};
use argzeta::oracle::Oracle;
use argzeta::sieve::{VonMangoldt, MAX_TABLE_CUTOFF};
use argzeta::special::Parity;
use argzeta::verify::{self, Suite};
use argzeta::zeros::ZeroTable;
use argzeta::Error;

const EXIT_CHECK: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_DATA: u8 = 3;

#[derive(Parser, Debug)]
#[command(
    name = "argzeta",
    version,
    about = "Extremal functions, explicit-formula balances and S(t) bounds"
)]
struct Cli {
    #[command(flatten)]
    config: RunConfig,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct RunConfig {
    /// Zero table (text or binary cache); defaults to $ZETA_ZEROS_PATH.
    #[arg(long, global = true)]
    zeros: Option<PathBuf>,
    /// Largest n in the prime sum; by default derived from the test function.
    #[arg(long, global = true, value_parser = clap::value_parser!(u64).range(2..=MAX_TABLE_CUTOFF))]
    lambda_cutoff: Option<u64>,
    /// Quadrature and truncation tolerance, in [1e-14, 1e-2].
    #[arg(long, global = true, default_value_t = 1e-10, value_parser = parse_tolerance)]
    tolerance: f64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Output file; standard output when absent.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Kind {
    Even,
    Odd,
}

impl From<Kind> for Parity {
    fn from(k: Kind) -> Self {
        match k {
            Kind::Even => Parity::Even,
            Kind::Odd => Parity::Odd,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum TestKind {
    Gaussian,
    Majorant,
    Minorant,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum RouteArg {
    Sandwich,
    Direct,
    Fujii,
}

impl From<RouteArg> for Route {
    fn from(r: RouteArg) -> Self {
        match r {
            RouteArg::Sandwich => Route::S1Sandwich,
            RouteArg::Direct => Route::DirectExtremal,
            RouteArg::Fujii => Route::FujiiVariant,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum SuiteArg {
    Identities,
    Domination,
    Fourier,
    Measures,
    OddMeasures,
}

impl From<SuiteArg> for Suite {
    fn from(s: SuiteArg) -> Self {
        match s {
            SuiteArg::Identities => Suite::Identities,
            SuiteArg::Domination => Suite::Domination,
            SuiteArg::Fourier => Suite::Fourier,
            SuiteArg::Measures => Suite::Measures,
            SuiteArg::OddMeasures => Suite::OddMeasures,
        }
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Tabulate a kernel with its minorant and majorant.
    Extremal {
        #[arg(long, default_value_t = 1.0)]
        delta: f64,
        #[arg(long, value_enum, default_value_t = Kind::Even)]
        kind: Kind,
        /// Interval as `lo:hi`.
        #[arg(long, default_value = "-6:6", value_parser = parse_range, allow_hyphen_values = true)]
        range: (f64, f64),
        #[arg(long, default_value_t = 0.01)]
        step: f64,
    },
    /// Run built-in identity and property checks.
    Verify {
        /// Suites to run; all of them when omitted.
        #[arg(long, value_enum)]
        suite: Vec<SuiteArg>,
    },
    /// Balance the explicit formula for one test function.
    Balance {
        #[arg(long)]
        t: f64,
        #[arg(long, default_value_t = 1.0)]
        delta: f64,
        #[arg(long = "test", value_enum, default_value_t = TestKind::Majorant)]
        test: TestKind,
        /// Kernel behind the extremal test functions.
        #[arg(long, value_enum, default_value_t = Kind::Even)]
        kind: Kind,
        /// Width of the Gaussian test function.
        #[arg(long, default_value_t = 1.0)]
        width: f64,
        /// Half-width of the zero window for extremal test functions.
        #[arg(long)]
        window: Option<f64>,
    },
    /// Compare the oracle with the envelopes over a range of heights.
    Bounds {
        #[arg(long, value_parser = parse_range)]
        range: (f64, f64),
        #[arg(long, default_value_t = 100)]
        points: usize,
        #[arg(long, value_enum, default_value_t = RouteArg::Sandwich)]
        route: RouteArg,
        /// Width override; required together with --h below the feasible range.
        #[arg(long, requires = "h")]
        delta: Option<f64>,
        #[arg(long, requires = "delta")]
        h: Option<f64>,
    },
    /// Tabulate N(t), S(t) and S_1(t) from the zero table.
    Oracle {
        #[arg(long, value_parser = parse_range, conflicts_with = "at")]
        range: Option<(f64, f64)>,
        #[arg(long, default_value_t = 100)]
        points: usize,
        /// Individual heights.
        #[arg(long)]
        at: Vec<f64>,
    },
    /// Zero table maintenance.
    Zeros {
        #[command(subcommand)]
        action: ZerosAction,
    },
}

#[derive(Subcommand, Debug)]
enum ZerosAction {
    /// Summarise the table (loading validates it).
    Info,
    /// Write a binary cache of the table to --output.
    Cache,
}

fn parse_tolerance(s: &str) -> Result<f64, String> {
    let v: f64 = s.parse().map_err(|e| format!("{e}"))?;
    if (1e-14..=1e-2).contains(&v) {
        Ok(v)
    } else {
        Err(format!("tolerance must lie in [1e-14, 1e-2], got {v}"))
    }
}

fn parse_range(s: &str) -> Result<(f64, f64), String> {
    let (a, b) = s.split_once(':').ok_or_else(|| format!("expected lo:hi, got {s:?}"))?;
    let lo: f64 = a.trim().parse().map_err(|e| format!("{a:?}: {e}"))?;
    let hi: f64 = b.trim().parse().map_err(|e| format!("{b:?}: {e}"))?;
    if !(lo.is_finite() && hi.is_finite() && lo <= hi) {
        return Err(format!("range must satisfy lo <= hi, got {s:?}"));
    }
    Ok((lo, hi))
}

/// Evenly spaced points, `lo` and `hi` included.
fn grid(lo: f64, hi: f64, points: usize) -> Vec<f64> {
    if points <= 1 || lo == hi {
        return vec![lo];
    }
    let step = (hi - lo) / (points - 1) as f64;
    (0..points)
        .map(|i| if i + 1 == points { hi } else { lo + step * i as f64 })
        .collect()
}

enum Failure {
    Usage(String),
    Data(Error),
    Compute(Error),
    Output(io::Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Domain { .. } | Error::Range(_) | Error::Parameter(_) | Error::Infeasible { .. } => {
                Failure::Usage(e.to_string())
            }
            Error::Coverage { .. }
            | Error::Parse { .. }
            | Error::Monotonicity { .. }
            | Error::Validation(_)
            | Error::EmptyTable
            | Error::Cache(_)
            | Error::NoZeroTable
            | Error::Io { .. } => Failure::Data(e),
            _ => Failure::Compute(e),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Output(e)
    }
}

impl From<csv::Error> for Failure {
    fn from(e: csv::Error) -> Self {
        match e.into_kind() {
            csv::ErrorKind::Io(e) => Failure::Output(e),
            other => Failure::Output(io::Error::other(format!("{other:?}"))),
        }
    }
}

/// 17 significant digits, the same on every platform.
fn num(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else {
        x.to_string()
    }
}

struct Report {
    meta: Vec<(String, String)>,
    header: Vec<&'static str>,
    rows: Vec<Vec<String>>,
    json_rows: Vec<serde_json::Value>,
}

impl Report {
    fn new(command: &str, cfg: &RunConfig) -> Self {
        let meta = vec![
            ("tool".into(), format!("argzeta {}", env!("CARGO_PKG_VERSION"))),
            ("command".into(), command.into()),
            ("tolerance".into(), num(cfg.tolerance)),
        ];
        Report {
            meta,
            header: Vec::new(),
            rows: Vec::new(),
            json_rows: Vec::new(),
        }
    }

    fn meta(&mut self, key: &str, value: impl ToString) {
        self.meta.push((key.into(), value.to_string()));
    }

    fn push(&mut self, row: Vec<String>, json: impl Serialize) {
        self.rows.push(row);
        self.json_rows
            .push(serde_json::to_value(json).expect("report rows serialize"));
    }

    fn write(&self, cfg: &RunConfig) -> Result<(), Failure> {
        let sink: Box<dyn Write> = match &cfg.output {
            Some(p) => Box::new(File::create(p).map_err(|e| Error::Io {
                path: p.clone(),
                source: e,
            })?),
            None => Box::new(io::stdout().lock()),
        };
        let mut out = BufWriter::new(sink);
        match cfg.format {
            Format::Csv => {
                for (k, v) in &self.meta {
                    writeln!(out, "# {k} = {v}")?;
                }
                let mut w = csv::Writer::from_writer(&mut out);
                w.write_record(&self.header)?;
                for r in &self.rows {
                    w.write_record(r)?;
                }
                w.flush()?;
            }
            Format::Json => {
                let meta: serde_json::Map<String, serde_json::Value> =
                    self.meta.iter().map(|(k, v)| (k.clone(), v.clone().into())).collect();
                let doc = serde_json::json!({ "meta": meta, "rows": self.json_rows });
                serde_json::to_writer_pretty(&mut out, &doc).map_err(io::Error::from)?;
                writeln!(out)?;
            }
        }
        out.flush()?;
        Ok(())
    }
}

fn load_zeros(cfg: &RunConfig) -> Result<ZeroTable, Failure> {
    Ok(ZeroTable::load_default(cfg.zeros.as_deref())?)
}

fn cmd_extremal(cfg: &RunConfig, delta: f64, kind: Kind, range: (f64, f64), step: f64) -> Result<bool, Failure> {
    if !(delta >= 1.0 && delta.is_finite()) {
        return Err(Failure::Usage(format!("--delta must be at least 1, got {delta}")));
    }
    if step.is_nan() || step <= 0.0 {
        return Err(Failure::Usage(format!("--step must be positive, got {step}")));
    }
    let (lo, hi) = range;
    let x_max = lo.abs().max(hi.abs()).max(1.0);
    let pair = ExtremalPair::new(kind.into(), delta, &Truncation::adaptive(x_max, cfg.tolerance))?;
    let points = ((hi - lo) / step).round() as usize + 1;
    let slack = pair
        .minorant
        .tail_bound(x_max, 0.0)
        .max(pair.majorant.tail_bound(x_max, 0.0));

    let mut report = Report::new("extremal", cfg);
    report.meta("delta", num(delta));
    report.meta("kind", format!("{kind:?}").to_lowercase());
    report.meta("truncation_radius", pair.majorant.radius());
    report.meta("truncation_bound", num(slack));
    report.header = vec!["x", "target", "minorant", "majorant"];
    let mut ok = true;
    for i in 0..points {
        let x = lo + step * i as f64;
        let target = pair.majorant.target(x);
        let (m, p) = (pair.minorant.eval_real(x), pair.majorant.eval_real(x));
        ok &= m <= target + slack && target <= p + slack;
        report.push(
            vec![num(x), num(target), num(m), num(p)],
            serde_json::json!({ "x": x, "target": target, "minorant": m, "majorant": p }),
        );
    }
    report.meta("dominated", ok);
    report.write(cfg)?;
    Ok(ok)
}

fn cmd_verify(cfg: &RunConfig, suites: &[SuiteArg]) -> Result<bool, Failure> {
    let suites: Vec<Suite> = if suites.is_empty() {
        Suite::ALL.to_vec()
    } else {
        suites.iter().map(|&s| s.into()).collect()
    };
    let mut report = Report::new("verify", cfg);
    report.header = vec!["suite", "check", "measured", "threshold", "passed"];
    let mut ok = true;
    for suite in suites {
        for c in verify::run(suite, cfg.tolerance)? {
            ok &= c.passed;
            report.push(
                vec![
                    suite.name().into(),
                    c.name.clone(),
                    num(c.measured),
                    num(c.threshold),
                    c.passed.to_string(),
                ],
                &c,
            );
        }
    }
    report.meta("all_passed", ok);
    report.write(cfg)?;
    Ok(ok)
}

fn sieve_for(cfg: &RunConfig, needed: u64) -> Result<VonMangoldt, Failure> {
    let cutoff = cfg.lambda_cutoff.unwrap_or(needed).clamp(2, MAX_TABLE_CUTOFF);
    Ok(VonMangoldt::sieve(cutoff)?)
}

#[allow(clippy::too_many_arguments)]
fn cmd_balance(
    cfg: &RunConfig,
    t: f64,
    delta: f64,
    test: TestKind,
    kind: Kind,
    width: f64,
    window: Option<f64>,
) -> Result<bool, Failure> {
    let zeros = load_zeros(cfg)?;
    let (h, needed) = match test {
        TestKind::Gaussian => (
            TestFunction::gaussian(t, width)?,
            gaussian_prime_cutoff(width, 0.1 * cfg.tolerance).min(MAX_TABLE_CUTOFF),
        ),
        TestKind::Majorant | TestKind::Minorant => {
            let side = if test == TestKind::Majorant {
                Side::Majorant
            } else {
                Side::Minorant
            };
            let w = window.unwrap_or_else(|| (50.0 / delta).max(1000.0));
            let series = ExtremalSeries::build(kind.into(), side, delta, &Truncation::adaptive(w, cfg.tolerance))?;
            (
                (TestFunction::shifted(Arc::new(series), t)?),
                (2.0 * PI * delta).exp().floor() as u64,
            )
        }
    };
    let lambda = sieve_for(cfg, needed)?;
    let opts = BalanceOptions {
        quadrature_tol: cfg.tolerance,
        window,
        lambda_cutoff: cfg.lambda_cutoff,
    };
    let r = balance(&h, &zeros, &lambda, &opts)?;

    let mut report = Report::new("balance", cfg);
    report.meta("zeros", zeros.source());
    report.meta("height_max", num(zeros.height_max()));
    report.meta("test", format!("{test:?}").to_lowercase());
    report.meta("t", num(t));
    report.meta("delta", num(delta));
    report.header = vec!["component", "value"];
    let b = r.budget;
    for (name, v) in [
        ("zero_side", r.zero_side),
        ("pole_terms", r.pole_terms),
        ("log_pi_term", r.log_pi_term),
        ("archimedean", r.archimedean),
        ("prime_side", r.prime_side),
        ("residual", r.residual),
        ("truncation_budget", r.truncation_budget),
        ("budget_zero_tail", b.zero_tail),
        ("budget_archimedean_tail", b.archimedean_tail),
        ("budget_prime_tail", b.prime_tail),
        ("budget_quadrature", b.quadrature),
        ("budget_ordinates", b.ordinates),
        ("budget_rounding", b.rounding),
        ("zeros_used", r.zeros_used as f64),
        ("prime_cutoff", r.prime_cutoff as f64),
    ] {
        report.rows.push(vec![name.into(), num(v)]);
    }
    report
        .json_rows
        .push(serde_json::to_value(r).expect("report serializes"));
    report.meta("within_budget", r.within_budget());
    report.write(cfg)?;
    Ok(r.within_budget())
}

fn params_at(t: f64, route: Route, manual: Option<(f64, f64)>) -> Result<BoundParams, Failure> {
    let height = Height::new(t)?;
    match manual {
        Some((delta, h)) => Ok(manual_params(height, delta, h, route)?),
        None => choose_params(height, route).map_err(|e| match e {
            Error::Infeasible { min_log_t } => Failure::Usage(format!(
                "no admissible parameters at t = {t} (need log t >= {min_log_t:.6e}); pass --delta and --h"
            )),
            e => e.into(),
        }),
    }
}

fn bound_row(r: &BoundReport) -> Vec<String> {
    vec![
        num(r.t),
        num(r.envelope_s),
        num(r.oracle_s),
        num(r.slack_s),
        num(r.envelope_s1_lo),
        num(r.envelope_s1_hi),
        num(r.oracle_s1),
        num(r.delta),
        num(r.h),
        r.route.name().into(),
    ]
}

fn cmd_bounds(
    cfg: &RunConfig,
    range: (f64, f64),
    points: usize,
    route: RouteArg,
    manual: Option<(f64, f64)>,
) -> Result<bool, Failure> {
    let zeros = load_zeros(cfg)?;
    let oracle = Oracle::new(&zeros);
    let route: Route = route.into();
    let mut report = Report::new("bounds", cfg);
    report.meta("zeros", zeros.source());
    report.meta("height_max", num(zeros.height_max()));
    report.meta("route", route.name());
    report.header = vec![
        "t",
        "envelope_s",
        "oracle_s",
        "slack_s",
        "envelope_s1_lo",
        "envelope_s1_hi",
        "oracle_s1",
        "delta",
        "h",
        "route",
    ];
    let lambda = match route {
        Route::DirectExtremal => {
            let delta = manual.map(|m| m.0).unwrap_or(1.0);
            Some(sieve_for(cfg, (2.0 * PI * delta).exp().floor() as u64)?)
        }
        _ => None,
    };
    let opts = BalanceOptions {
        quadrature_tol: cfg.tolerance,
        window: None,
        lambda_cutoff: cfg.lambda_cutoff,
    };
    let mut ok = true;
    for t in grid(range.0, range.1, points) {
        let params = params_at(t, route, manual)?;
        let r = match &lambda {
            Some(lambda) => s_bound_direct(&oracle, lambda, t, &params, &opts)?.bound,
            None => s_bound_via_sandwich(&oracle, t, &params)?,
        };
        ok &= r.within();
        report.push(bound_row(&r), r);
    }
    report.meta("all_within", ok);
    report.write(cfg)?;
    Ok(ok)
}

fn cmd_oracle(cfg: &RunConfig, range: Option<(f64, f64)>, points: usize, at: &[f64]) -> Result<bool, Failure> {
    let ts = match range {
        Some((lo, hi)) => grid(lo, hi, points),
        None if !at.is_empty() => at.to_vec(),
        None => return Err(Failure::Usage("give --range lo:hi or at least one --at t".into())),
    };
    let zeros = load_zeros(cfg)?;
    let oracle = Oracle::new(&zeros);
    let mut report = Report::new("oracle", cfg);
    report.meta("zeros", zeros.source());
    report.meta("height_max", num(zeros.height_max()));
    report.header = vec!["t", "n", "s", "s1", "method"];
    for t in ts {
        let r = oracle.row(t)?;
        report.push(
            vec![num(r.t), num(r.n), num(r.s), num(r.s1), r.method.into()],
            serde_json::json!({
                "t": r.t, "n": r.n, "s": r.s, "s1": r.s1, "method": r.method,
            }),
        );
    }
    report.write(cfg)?;
    Ok(true)
}

fn cmd_zeros(cfg: &RunConfig, action: &ZerosAction) -> Result<bool, Failure> {
    let zeros = load_zeros(cfg)?;
    match action {
        ZerosAction::Info => {
            let mut report = Report::new("zeros info", cfg);
            report.header = vec!["source", "count", "first", "last", "height_max"];
            let ords = zeros.ordinates();
            let (first, last) = (ords[0], ords[ords.len() - 1]);
            report.push(
                vec![
                    zeros.source().into(),
                    zeros.len().to_string(),
                    num(first),
                    num(last),
                    num(zeros.height_max()),
                ],
                serde_json::json!({
                    "source": zeros.source(), "count": zeros.len(), "first": first, "last": last,
                    "height_max": zeros.height_max(),
                }),
            );
            report.write(cfg)?;
        }
        ZerosAction::Cache => {
            let path = cfg
                .output
                .as_ref()
                .ok_or_else(|| Failure::Usage("zeros cache needs --output".into()))?;
            zeros.write_cache(path)?;
        }
    }
    Ok(true)
}

fn run(cli: &Cli) -> Result<bool, Failure> {
    let cfg = &cli.config;
    match &cli.command {
        Command::Extremal {
            delta,
            kind,
            range,
            step,
        } => cmd_extremal(cfg, *delta, *kind, *range, *step),
        Command::Verify { suite } => cmd_verify(cfg, suite),
        Command::Balance {
            t,
            delta,
            test,
            kind,
            width,
            window,
        } => cmd_balance(cfg, *t, *delta, *test, *kind, *width, *window),
        Command::Bounds {
            range,
            points,
            route,
            delta,
            h,
        } => cmd_bounds(cfg, *range, *points, *route, delta.zip(*h)),
        Command::Oracle { range, points, at } => cmd_oracle(cfg, *range, *points, at),
        Command::Zeros { action } => cmd_zeros(cfg, action),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(EXIT_CHECK),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}\n\nFor more information, try '--help'.");
            ExitCode::from(EXIT_USAGE)
        }
        Err(Failure::Data(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_DATA)
        }
        Err(Failure::Compute(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_CHECK)
        }
        // a closed pipe (`| head`) is not an error
        Err(Failure::Output(e)) if e.kind() == io::ErrorKind::BrokenPipe => ExitCode::SUCCESS,
        Err(Failure::Output(e)) => {
            eprintln!("error: writing output: {e}");
            ExitCode::from(EXIT_DATA)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn range_parsing() {
        assert_eq!(parse_range("-6:6").unwrap(), (-6.0, 6.0));
        assert!(parse_range("6:-6").is_err());
        assert!(parse_range("6").is_err());
    }

    #[test]
    fn tolerance_bounds() {
        assert!(parse_tolerance("1e-10").is_ok());
        assert!(parse_tolerance("1e-15").is_err());
        assert!(parse_tolerance("0.1").is_err());
    }

    #[test]
    fn grid_endpoints() {
        let g = grid(1000.0, 70000.0, 7);
        assert_eq!(g.len(), 7);
        assert_eq!(g[0], 1000.0);
        assert_eq!(g[6], 70000.0);
        assert_eq!(grid(5.0, 5.0, 10), vec![5.0]);
    }

    #[test]
    fn numbers_carry_seventeen_digits() {
        assert_eq!(num(0.1), "1.0000000000000001e-1");
        assert_eq!(num(-PI), "-3.1415926535897931e0");
    }

    #[test]
    fn cli_definition_is_consistent() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }
}
