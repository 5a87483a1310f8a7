//! Batch front end for `qtrig`: point evaluation, value tables, identity
//! checks and the Daehee-constant limit, emitted as CSV or JSON.
//!
//! Exit codes: 0 success, 1 usage error, 2 evaluation failure (domain, pole,
//! non-convergence), 3 when `check` finds a failing report.

use std::fs::File;
use std::io::{self, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use qtrig::identities::{self, IdentitySet, SweepConfig};
use qtrig::qfunctions::{daehee_constant, DaeheeSequence};
use qtrig::{
    EvalConfig64, IdentityReport, QError, QFunction, QFunctionKind, QParam64, QuadratureConfig64,
};
use serde::Serialize;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_EVAL: i32 = 2;
pub const EXIT_CHECK_FAILED: i32 = 3;

/// Largest default sampling radius used by `check`.
pub const CHECK_RADIUS_CAP: f64 = 4.0;

#[derive(Parser, Debug)]
#[command(
    name = "qtrig",
    version,
    about = "q-exponential and q-trigonometric functions with identity checks"
)]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct GlobalArgs {
    /// Base q, strictly between 0 and 1.
    #[arg(long, global = true, default_value_t = 0.5, allow_hyphen_values = true)]
    pub q: f64,
    /// Absolute tolerance for series tails and quadrature summands.
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    /// Relative tolerance for series tails.
    #[arg(long = "rel-tol", global = true)]
    pub rel_tol: Option<f64>,
    #[arg(long = "max-terms", global = true)]
    pub max_terms: Option<usize>,
    /// Point cap for the Jackson integral.
    #[arg(long = "max-points", global = true)]
    pub max_points: Option<usize>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Seed for randomized sweeps.
    #[arg(long, global = true, default_value_t = 7)]
    pub seed: u64,
    /// Output file; `-` or `stdout` writes to standard output.
    #[arg(long, global = true, default_value = "stdout")]
    pub out: String,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Evaluate one function at one point.
    Eval {
        /// eq, Eq, sinq, cosq, tanq, secq, cscq, cotq or daehee.
        function: String,
        #[arg(long, allow_hyphen_values = true)]
        x: Option<f64>,
    },
    /// Tabulate a function on an evenly spaced grid.
    Table {
        function: String,
        #[arg(long = "x-min", default_value_t = 0.0, allow_hyphen_values = true)]
        x_min: f64,
        #[arg(long = "x-max", default_value_t = 1.0, allow_hyphen_values = true)]
        x_max: f64,
        /// Number of grid points, endpoints included.
        #[arg(long = "x-steps", default_value_t = 11)]
        x_steps: usize,
    },
    /// Run an identity suite: all, daehee, addition, pythagorean, calculus, errata.
    Check {
        #[arg(default_value = "all")]
        set: String,
        /// Sampling radius; defaults to min(0.5/(1-q), 4).
        #[arg(long)]
        radius: Option<f64>,
    },
    /// Tabulate the sequence converging to the Daehee constant.
    DaeheeLimit {
        #[arg(long = "n-max", default_value_t = 50)]
        n_max: usize,
    },
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Eval(QError),
    Io(io::Error),
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Io(e)
    }
}

impl From<csv::Error> for Failure {
    fn from(e: csv::Error) -> Self {
        Failure::Io(e.into())
    }
}

impl From<serde_json::Error> for Failure {
    fn from(e: serde_json::Error) -> Self {
        Failure::Io(e.into())
    }
}

#[derive(Serialize)]
struct ErrorRecord<'a> {
    error: &'a str,
    message: String,
}

#[derive(Serialize)]
struct EvalRecord {
    function: String,
    x: Option<f64>,
    q: f64,
    value_re: f64,
    value_im: f64,
    error_estimate: f64,
    terms_used: usize,
}

#[derive(Serialize)]
struct TableRow {
    x: f64,
    value_re: Option<f64>,
    value_im: Option<f64>,
    error_estimate: Option<f64>,
    status: String,
}

#[derive(Serialize)]
struct ReportRow<'a> {
    identity_id: &'a str,
    q: f64,
    samples: usize,
    max_abs_residual: f64,
    argmax_input: String,
    tolerance: f64,
    pass: bool,
}

#[derive(Serialize)]
struct DaeheeRow {
    n: usize,
    value: f64,
    gap: f64,
}

/// Parses `args` (program name first) and runs the command. Results go to
/// `--out` or `stdout`; diagnostics go to `stderr`.
pub fn run<I, S>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let rendered = e.render().to_string();
            if e.use_stderr() {
                let _ = stderr.write_all(rendered.as_bytes());
            } else {
                let _ = stdout.write_all(rendered.as_bytes());
            }
            return code;
        }
    };
    let format = cli.global.format;
    let mut file;
    let sink: &mut dyn Write = match cli.global.out.as_str() {
        "-" | "stdout" => stdout,
        path => match File::create(PathBuf::from(path)) {
            Ok(f) => {
                file = f;
                &mut file
            }
            Err(e) => {
                let _ = writeln!(stderr, "error: cannot open {path}: {e}");
                return EXIT_USAGE;
            }
        },
    };
    let outcome = dispatch(&cli, sink, stderr);
    let code = match outcome {
        Ok(code) => code,
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(stderr, "error: {msg}");
            EXIT_USAGE
        }
        Err(Failure::Eval(e)) => {
            let record = ErrorRecord {
                error: e.kind(),
                message: e.to_string(),
            };
            if let Err(io) = write_records(sink, format, std::slice::from_ref(&record), false) {
                let _ = writeln!(stderr, "error: {io:?}");
            }
            let _ = writeln!(stderr, "error: {e}");
            EXIT_EVAL
        }
        Err(Failure::Io(e)) => {
            let _ = writeln!(stderr, "error: {e}");
            EXIT_EVAL
        }
    };
    let _ = sink.flush();
    code
}

fn dispatch(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, Failure> {
    let g = &cli.global;
    let q = QParam64::new(g.q).map_err(|e| Failure::Usage(e.to_string()))?;
    let eval = eval_config(g)?;
    match &cli.command {
        Command::Eval { function, x } => cmd_eval(function, *x, q, &eval, g.format, out),
        Command::Table {
            function,
            x_min,
            x_max,
            x_steps,
        } => cmd_table(function, *x_min, *x_max, *x_steps, q, &eval, g.format, out),
        Command::Check { set, radius } => {
            let set: IdentitySet = set
                .parse()
                .map_err(|e: QError| Failure::Usage(e.to_string()))?;
            let mut sweep = SweepConfig::new(g.q, g.seed);
            sweep.eval = eval;
            sweep.quad = quad_config(g)?;
            sweep.radius = match radius {
                Some(r) if !(r.is_finite() && *r > 0.0) => {
                    return Err(Failure::Usage("--radius must be positive".into()))
                }
                Some(r) => *r,
                None => (0.5 / (1.0 - g.q)).min(CHECK_RADIUS_CAP),
            };
            cmd_check(set, &sweep, g.format, out, err)
        }
        Command::DaeheeLimit { n_max } => cmd_daehee_limit(*n_max, q, &eval, g.format, out),
    }
}

fn eval_config(g: &GlobalArgs) -> Result<EvalConfig64, Failure> {
    let mut cfg = EvalConfig64::default();
    if let Some(t) = g.tol {
        cfg.abs_tol = t;
    }
    if let Some(t) = g.rel_tol {
        cfg.rel_tol = t;
    }
    if let Some(m) = g.max_terms {
        cfg.max_terms = m;
    }
    cfg.validate().map_err(|e| Failure::Usage(e.to_string()))?;
    Ok(cfg)
}

fn quad_config(g: &GlobalArgs) -> Result<QuadratureConfig64, Failure> {
    let mut cfg = QuadratureConfig64::default();
    if let Some(t) = g.tol {
        cfg.tail_tol = t;
    }
    if let Some(m) = g.max_points {
        cfg.max_points = m;
    }
    cfg.validate().map_err(|e| Failure::Usage(e.to_string()))?;
    Ok(cfg)
}

fn parse_kind(name: &str) -> Result<QFunctionKind, Failure> {
    name.parse()
        .map_err(|_| Failure::Usage(format!("unknown function {name:?}")))
}

fn cmd_eval(
    function: &str,
    x: Option<f64>,
    q: QParam64,
    cfg: &EvalConfig64,
    format: Format,
    out: &mut dyn Write,
) -> Result<i32, Failure> {
    let record = if function == "daehee" {
        let v = daehee_constant(q, cfg).map_err(Failure::Eval)?;
        EvalRecord {
            function: function.into(),
            x: None,
            q: q.value(),
            value_re: v.value.re,
            value_im: v.value.im,
            error_estimate: v.error_estimate,
            terms_used: v.terms_used,
        }
    } else {
        let kind = parse_kind(function)?;
        let x = x.ok_or_else(|| Failure::Usage(format!("{function} needs --x")))?;
        let f = QFunction::new(kind, q, *cfg).map_err(Failure::Eval)?;
        let v = f.eval(Complex64::new(x, 0.0)).map_err(Failure::Eval)?;
        EvalRecord {
            function: kind.name().into(),
            x: Some(x),
            q: q.value(),
            value_re: v.value.re,
            value_im: v.value.im,
            error_estimate: v.error_estimate,
            terms_used: v.terms_used,
        }
    };
    write_records(out, format, std::slice::from_ref(&record), false)?;
    Ok(EXIT_OK)
}

/// `steps` evenly spaced points from `lo` to `hi`; a single step yields `lo`.
pub fn grid(lo: f64, hi: f64, steps: usize) -> Vec<f64> {
    if steps == 1 {
        return vec![lo];
    }
    let h = (hi - lo) / (steps - 1) as f64;
    (0..steps)
        .map(|i| {
            if i + 1 == steps {
                hi
            } else {
                lo + h * i as f64
            }
        })
        .collect()
}

#[allow(clippy::too_many_arguments)]
fn cmd_table(
    function: &str,
    x_min: f64,
    x_max: f64,
    x_steps: usize,
    q: QParam64,
    cfg: &EvalConfig64,
    format: Format,
    out: &mut dyn Write,
) -> Result<i32, Failure> {
    let kind = parse_kind(function)?;
    if x_steps == 0 {
        return Err(Failure::Usage("--x-steps must be at least 1".into()));
    }
    if !(x_min.is_finite() && x_max.is_finite()) || x_min > x_max {
        return Err(Failure::Usage("need finite --x-min <= --x-max".into()));
    }
    let f = QFunction::new(kind, q, *cfg).map_err(Failure::Eval)?;
    let mut first_error = None;
    let rows: Vec<TableRow> = grid(x_min, x_max, x_steps)
        .into_iter()
        .map(|x| match f.eval(Complex64::new(x, 0.0)) {
            Ok(v) => TableRow {
                x,
                value_re: Some(v.value.re),
                value_im: Some(v.value.im),
                error_estimate: Some(v.error_estimate),
                status: "ok".into(),
            },
            Err(e) => {
                let status = e.kind().to_string();
                first_error.get_or_insert(e);
                TableRow {
                    x,
                    value_re: None,
                    value_im: None,
                    error_estimate: None,
                    status,
                }
            }
        })
        .collect();
    if rows.iter().all(|r| r.status != "ok") {
        return Err(Failure::Eval(first_error.expect("at least one row")));
    }
    write_records(out, format, &rows, true)?;
    Ok(EXIT_OK)
}

fn cmd_check(
    set: IdentitySet,
    sweep: &SweepConfig,
    format: Format,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Result<i32, Failure> {
    writeln!(err, "seed: {}", sweep.seed)?;
    let reports = identities::run(set, sweep).map_err(Failure::Eval)?;
    match format {
        Format::Json => write_records(out, format, &reports, true)?,
        Format::Csv => {
            let rows = reports
                .iter()
                .map(report_row)
                .collect::<Result<Vec<_>, _>>()?;
            write_records(out, format, &rows, true)?;
        }
    }
    let failed: Vec<&str> = reports
        .iter()
        .filter(|r| !r.pass)
        .map(|r| r.identity_id.as_str())
        .collect();
    if failed.is_empty() {
        Ok(EXIT_OK)
    } else {
        writeln!(err, "failed: {}", failed.join(", "))?;
        Ok(EXIT_CHECK_FAILED)
    }
}

fn report_row(r: &IdentityReport) -> Result<ReportRow<'_>, serde_json::Error> {
    Ok(ReportRow {
        identity_id: &r.identity_id,
        q: r.q,
        samples: r.samples,
        max_abs_residual: r.max_abs_residual,
        argmax_input: serde_json::to_string(&r.argmax_input)?,
        tolerance: r.tolerance,
        pass: r.pass,
    })
}

fn cmd_daehee_limit(
    n_max: usize,
    q: QParam64,
    cfg: &EvalConfig64,
    format: Format,
    out: &mut dyn Write,
) -> Result<i32, Failure> {
    if n_max == 0 {
        return Err(Failure::Usage("--n-max must be at least 1".into()));
    }
    let limit = daehee_constant(q, cfg).map_err(Failure::Eval)?.value.re;
    let rows: Vec<DaeheeRow> = DaeheeSequence::new(q)
        .take(n_max)
        .map(|t| DaeheeRow {
            n: t.n,
            value: t.value,
            gap: (t.value - limit).abs(),
        })
        .collect();
    write_records(out, format, &rows, true)?;
    Ok(EXIT_OK)
}

/// CSV with a header row, or JSON (an array when `array`, else one object).
fn write_records<R: Serialize>(
    out: &mut dyn Write,
    format: Format,
    rows: &[R],
    array: bool,
) -> Result<(), Failure> {
    match format {
        Format::Csv => {
            let mut w = csv::Writer::from_writer(&mut *out);
            for row in rows {
                w.serialize(row)?;
            }
            w.flush()?;
        }
        Format::Json => {
            if array {
                serde_json::to_writer_pretty(&mut *out, rows)?;
            } else {
                serde_json::to_writer_pretty(&mut *out, &rows[0])?;
            }
            out.write_all(b"\n")?;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn call(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let argv = std::iter::once("qtrig").chain(args.iter().copied());
        let code = run(argv, &mut out, &mut err);
        (
            code,
            String::from_utf8(out).unwrap(),
            String::from_utf8(err).unwrap(),
        )
    }

    #[test]
    fn grid_endpoints() {
        assert_eq!(grid(0.0, 1.0, 3), vec![0.0, 0.5, 1.0]);
        assert_eq!(grid(2.0, 5.0, 1), vec![2.0]);
    }

    #[test]
    fn eval_cos_at_zero() {
        let (code, out, _) = call(&["eval", "cosq", "--x", "0", "--q", "0.5"]);
        assert_eq!(code, 0);
        let mut lines = out.lines();
        assert_eq!(
            lines.next(),
            Some("function,x,q,value_re,value_im,error_estimate,terms_used")
        );
        assert!(lines
            .next()
            .unwrap()
            .starts_with("cosq,0.0,0.5,1.0,0.0,0.0,"));
    }

    #[test]
    fn usage_errors() {
        assert_eq!(call(&["eval", "nope", "--x", "0"]).0, EXIT_USAGE);
        assert_eq!(call(&["eval", "sinq"]).0, EXIT_USAGE);
        assert_eq!(
            call(&["eval", "sinq", "--x", "0", "--q", "1.5"]).0,
            EXIT_USAGE
        );
        assert_eq!(
            call(&["table", "sinq", "--x-min", "1", "--x-max", "0"]).0,
            EXIT_USAGE
        );
        assert_eq!(call(&["daehee-limit", "--n-max", "0"]).0, EXIT_USAGE);
        assert_eq!(call(&["check", "bogus"]).0, EXIT_USAGE);
        assert_eq!(call(&["--help"]).0, EXIT_OK);
    }

    #[test]
    fn domain_error_record() {
        let (code, out, _) = call(&["eval", "eq", "--x", "3.0", "--q", "0.5", "--format", "json"]);
        assert_eq!(code, EXIT_EVAL);
        let v: serde_json::Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["error"], "DomainError");
    }

    #[test]
    fn negative_x_accepted() {
        let (code, out, _) = call(&["eval", "sinq", "--x", "-0.5", "--q", "0.5"]);
        assert_eq!(code, 0, "{out}");
        assert!(out.contains(",-0.5,"));
    }
}
