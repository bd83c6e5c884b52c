//! Command-line front end. [`run`] returns the process exit status:
//! 0 on success, 1 when an identity fails, 2 on a usage error.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::hankel::{det_exact, hankel_closed_form, hankel_matrix, HankelSpec};
use crate::qcore::{parse_rational, BigRational, LaurentPoly, PolyFraction};
use crate::series::{egf, rational_gf, PowerSeries};
use crate::verify::{parse_selector, render_text, run_suites, Grid};
use crate::whitney::{r_dowling, w, w_star, Rule, WhitneyParams, WhitneyTable};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Parser, Debug)]
#[command(name = "qwhitney", version, about = "Exact q-analogue r-Whitney numbers")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Triangle W[n,k] (or W*[n,k] with --star) for 0 <= k <= n <= nmax.
    Table(TableArgs),
    /// A single W[n,k].
    Value(EntryArgs),
    /// A single normalized W*[n,k].
    Star(EntryArgs),
    /// The r-Dowling number, the row sum of W[n,.].
    Dowling(DowlingArgs),
    /// Hankel determinant of the W* sequence against its product form.
    Hankel(HankelArgs),
    /// Run identity suites over a parameter grid.
    Verify(VerifyArgs),
    /// Evaluate a Laurent polynomial, or generating-function coefficients,
    /// at a rational q.
    Eval(EvalArgs),
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
enum Format {
    #[default]
    Text,
    Csv,
    Json,
}

#[derive(Args, Debug)]
struct ParamArgs {
    #[arg(long, allow_hyphen_values = true)]
    m: String,
    #[arg(long, allow_hyphen_values = true)]
    r: String,
}

#[derive(Args, Debug)]
struct QArgs {
    /// Evaluate results at this rational q, given as "p/q" or an integer.
    #[arg(long = "q-eval", allow_hyphen_values = true)]
    q_eval: Option<String>,
}

#[derive(Args, Debug)]
struct TableArgs {
    #[command(flatten)]
    params: ParamArgs,
    #[arg(long, allow_hyphen_values = true)]
    nmax: String,
    #[arg(long)]
    star: bool,
    #[command(flatten)]
    q: QArgs,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Args, Debug)]
struct EntryArgs {
    #[command(flatten)]
    params: ParamArgs,
    #[arg(long, allow_hyphen_values = true)]
    n: String,
    #[arg(long, allow_hyphen_values = true)]
    k: String,
    #[command(flatten)]
    q: QArgs,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Args, Debug)]
struct DowlingArgs {
    #[command(flatten)]
    params: ParamArgs,
    #[arg(long, allow_hyphen_values = true)]
    n: String,
    #[command(flatten)]
    q: QArgs,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Args, Debug)]
struct HankelArgs {
    #[command(flatten)]
    params: ParamArgs,
    #[arg(long, allow_hyphen_values = true)]
    s: String,
    #[arg(long, allow_hyphen_values = true)]
    n: String,
    #[command(flatten)]
    q: QArgs,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    /// Suite name or "all".
    #[arg(long, default_value = "all")]
    suite: String,
    /// JSON grid configuration; missing fields keep their defaults.
    #[arg(long)]
    grid: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Build tables with a deliberately wrong recurrence.
    #[arg(long, hide = true)]
    mutate: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum GfKind {
    Rational,
    Egf,
}

#[derive(Args, Debug)]
struct EvalArgs {
    /// Laurent polynomial as JSON, e.g. [[0,"1"],[2,"3"]].
    #[arg(long, conflicts_with = "gf", required_unless_present = "gf")]
    poly: Option<String>,
    /// Coefficients of a column generating function.
    #[arg(long, value_enum, requires_all = ["m", "r", "k"])]
    gf: Option<GfKind>,
    #[arg(long, allow_hyphen_values = true)]
    m: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    r: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    k: Option<String>,
    /// Series truncation order.
    #[arg(long, default_value = "12", allow_hyphen_values = true)]
    order: String,
    #[arg(long, allow_hyphen_values = true)]
    q: String,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

/// How a command that ran to completion ended.
enum Outcome {
    Ok,
    Failed,
}

fn usage(msg: impl Into<String>) -> Error {
    Error::InvalidParameter(msg.into())
}

fn int(name: &str, s: &str) -> Result<i64> {
    s.trim()
        .parse::<i64>()
        .map_err(|_| usage(format!("{name} must be a decimal integer, got {s:?}")))
}

fn nonneg(name: &str, s: &str) -> Result<i64> {
    let v = int(name, s)?;
    if v < 0 {
        return Err(usage(format!("{name} must be ≥ 0")));
    }
    Ok(v)
}

fn params(p: &ParamArgs) -> Result<WhitneyParams> {
    WhitneyParams::new(int("m", &p.m)?, int("r", &p.r)?)
}

fn entry_indices(n: &str, k: &str) -> Result<(i64, i64)> {
    let n = nonneg("n", n)?;
    let k = nonneg("k", k)?;
    if k > n {
        return Err(usage("k must satisfy 0 ≤ k ≤ n"));
    }
    Ok((n, k))
}

fn qval(q: &QArgs) -> Result<Option<BigRational>> {
    q.q_eval.as_deref().map(parse_rational).transpose()
}

/// A polynomial result, possibly evaluated at a rational q.
enum Val {
    Poly(LaurentPoly),
    Rat(BigRational),
}

impl Val {
    fn new(p: LaurentPoly, q: &Option<BigRational>) -> Result<Self> {
        Ok(match q {
            Some(a) => Val::Rat(p.eval(a)?),
            None => Val::Poly(p),
        })
    }

    fn text(&self) -> String {
        match self {
            Val::Poly(p) => p.to_string(),
            Val::Rat(a) => a.to_string(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Val::Poly(p) => serde_json::to_value(p).expect("Laurent polynomials serialize"),
            Val::Rat(a) => Value::String(a.to_string()),
        }
    }
}

fn write_json(out: &mut dyn Write, v: &impl Serialize) -> Result<()> {
    let text = serde_json::to_string(v).map_err(|e| usage(format!("json output: {e}")))?;
    writeln!(out, "{text}").map_err(io_err)
}

fn io_err(e: std::io::Error) -> Error {
    usage(format!("write failed: {e}"))
}

fn params_json(p: WhitneyParams) -> Value {
    json!({"m": p.m(), "r": p.r()})
}

fn emit_single(out: &mut dyn Write, format: Format, p: WhitneyParams, extra: Value, v: &Val) -> Result<()> {
    match format {
        Format::Text => writeln!(out, "{}", v.text()).map_err(io_err),
        Format::Json => {
            let mut obj = json!({"params": params_json(p)});
            if let (Value::Object(o), Value::Object(e)) = (&mut obj, extra) {
                o.extend(e);
                o.insert("value".into(), v.json());
            }
            write_json(out, &obj)
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            let keys: Vec<String> = match &extra {
                Value::Object(o) => o.keys().cloned().collect(),
                _ => Vec::new(),
            };
            let mut header = keys.clone();
            header.push("value".into());
            w.write_record(&header).map_err(csv_err)?;
            let mut row: Vec<String> = keys.iter().map(|k| extra[k].to_string()).collect();
            row.push(v.text());
            w.write_record(&row).map_err(csv_err)?;
            flush_csv(out, w)
        }
    }
}

fn csv_err(e: csv::Error) -> Error {
    usage(format!("csv output: {e}"))
}

fn flush_csv(out: &mut dyn Write, w: csv::Writer<Vec<u8>>) -> Result<()> {
    let bytes = w.into_inner().map_err(|e| usage(format!("csv output: {e}")))?;
    out.write_all(&bytes).map_err(io_err)
}

fn cmd_table(a: &TableArgs, out: &mut dyn Write) -> Result<Outcome> {
    let p = params(&a.params)?;
    let nmax = nonneg("nmax", &a.nmax)?;
    let q = qval(&a.q)?;
    let table = WhitneyTable::build(p, nmax as usize);
    let mut rows: Vec<Vec<Val>> = Vec::new();
    for n in 0..=nmax {
        let row = (0..=n)
            .map(|k| Val::new(if a.star { table.star(n, k) } else { table.get(n, k) }, &q))
            .collect::<Result<_>>()?;
        rows.push(row);
    }
    match a.format {
        Format::Json => {
            let rows: Vec<Vec<Value>> = rows.iter().map(|r| r.iter().map(Val::json).collect()).collect();
            write_json(out, &json!({"params": params_json(p), "rows": rows}))?;
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(["n", "k", "value"]).map_err(csv_err)?;
            for (n, row) in rows.iter().enumerate() {
                for (k, v) in row.iter().enumerate() {
                    w.write_record([n.to_string(), k.to_string(), v.text()]).map_err(csv_err)?;
                }
            }
            flush_csv(out, w)?;
        }
        Format::Text => {
            for row in &rows {
                let cells: Vec<String> = row.iter().map(Val::text).collect();
                writeln!(out, "{}", cells.join("\t")).map_err(io_err)?;
            }
        }
    }
    Ok(Outcome::Ok)
}

fn cmd_entry(a: &EntryArgs, star: bool, out: &mut dyn Write) -> Result<Outcome> {
    let p = params(&a.params)?;
    let (n, k) = entry_indices(&a.n, &a.k)?;
    let poly = if star { w_star(p, n, k) } else { w(p, n, k) };
    let v = Val::new(poly, &qval(&a.q)?)?;
    emit_single(out, a.format, p, json!({"n": n, "k": k}), &v)?;
    Ok(Outcome::Ok)
}

fn cmd_dowling(a: &DowlingArgs, out: &mut dyn Write) -> Result<Outcome> {
    let p = params(&a.params)?;
    let n = nonneg("n", &a.n)?;
    let v = Val::new(r_dowling(p, n), &qval(&a.q)?)?;
    emit_single(out, a.format, p, json!({"n": n}), &v)?;
    Ok(Outcome::Ok)
}

fn cmd_hankel(a: &HankelArgs, out: &mut dyn Write) -> Result<Outcome> {
    let p = params(&a.params)?;
    let spec = HankelSpec::new(p, nonneg("s", &a.s)?, nonneg("n", &a.n)?)?;
    let q = qval(&a.q)?;
    let mat = hankel_matrix(&spec);
    let det = det_exact(&mat)?;
    let closed = hankel_closed_form(&spec);
    let pass = det == closed;
    let rows: Vec<Vec<Val>> = mat
        .rows()
        .iter()
        .map(|r| r.iter().map(|e| Val::new(e.clone(), &q)).collect())
        .collect::<Result<_>>()?;
    let det_v = Val::new(det, &q)?;
    let closed_v = Val::new(closed, &q)?;
    let status = if pass { "PASS" } else { "FAIL" };
    match a.format {
        Format::Json => {
            let rows: Vec<Vec<Value>> = rows.iter().map(|r| r.iter().map(Val::json).collect()).collect();
            write_json(
                out,
                &json!({
                    "params": params_json(p),
                    "s": spec.s,
                    "n": spec.n,
                    "matrix": rows,
                    "determinant": det_v.json(),
                    "closed_form": closed_v.json(),
                    "status": status,
                }),
            )?;
        }
        Format::Text | Format::Csv => {
            writeln!(out, "matrix:").map_err(io_err)?;
            for row in &rows {
                let cells: Vec<String> = row.iter().map(Val::text).collect();
                writeln!(out, "  {}", cells.join("\t")).map_err(io_err)?;
            }
            writeln!(out, "determinant: {}", det_v.text()).map_err(io_err)?;
            writeln!(out, "closed form: {}", closed_v.text()).map_err(io_err)?;
            writeln!(out, "{status}").map_err(io_err)?;
        }
    }
    Ok(if pass { Outcome::Ok } else { Outcome::Failed })
}

fn cmd_verify(a: &VerifyArgs, out: &mut dyn Write) -> Result<Outcome> {
    let suites = parse_selector(&a.suite)?;
    let grid = match &a.grid {
        Some(path) => Grid::from_path(path)?,
        None => Grid::default(),
    };
    let rule = if a.mutate { Rule::PerturbedDiagonal } else { Rule::Standard };
    let reports = run_suites(&suites, &grid, rule)?;
    match a.format {
        Format::Json => write_json(out, &reports)?,
        Format::Text | Format::Csv => write!(out, "{}", render_text(&reports)).map_err(io_err)?,
    }
    Ok(if reports.iter().all(|r| r.passed()) {
        Outcome::Ok
    } else {
        Outcome::Failed
    })
}

fn cmd_eval(a: &EvalArgs, out: &mut dyn Write) -> Result<Outcome> {
    let q = parse_rational(&a.q)?;
    if let Some(text) = &a.poly {
        let poly: LaurentPoly =
            serde_json::from_str(text).map_err(|e| usage(format!("bad polynomial {text:?}: {e}")))?;
        let v = poly.eval(&q)?;
        match a.format {
            Format::Json => write_json(out, &v.to_string())?,
            _ => writeln!(out, "{v}").map_err(io_err)?,
        }
        return Ok(Outcome::Ok);
    }
    let kind = a.gf.ok_or_else(|| usage("eval needs --poly or --gf"))?;
    let m = int("m", a.m.as_deref().unwrap_or_default())?;
    let r = int("r", a.r.as_deref().unwrap_or_default())?;
    let p = WhitneyParams::new(m, r)?;
    let k = nonneg("k", a.k.as_deref().unwrap_or_default())? as usize;
    let order = nonneg("order", &a.order)? as usize;
    let series: PowerSeries = match kind {
        GfKind::Rational => rational_gf(p, k, order)?,
        GfKind::Egf => egf(p, k, order)?,
    };
    let coeffs: Vec<BigRational> = series
        .coeffs()
        .iter()
        .map(|c: &PolyFraction| c.eval(&q))
        .collect::<Result<_>>()?;
    match a.format {
        Format::Json => {
            let cs: Vec<String> = coeffs.iter().map(ToString::to_string).collect();
            write_json(out, &json!({"params": params_json(p), "k": k, "q": q.to_string(), "coeffs": cs}))?;
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(["n", "value"]).map_err(csv_err)?;
            for (n, c) in coeffs.iter().enumerate() {
                w.write_record([n.to_string(), c.to_string()]).map_err(csv_err)?;
            }
            flush_csv(out, w)?;
        }
        Format::Text => {
            for (n, c) in coeffs.iter().enumerate() {
                writeln!(out, "{n}\t{c}").map_err(io_err)?;
            }
        }
    }
    Ok(Outcome::Ok)
}

/// Parses `args` (including the program name) and runs the command,
/// writing results to `out` and diagnostics to `err`.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let rendered = e.render().to_string();
            let _ = if e.use_stderr() {
                write!(err, "{rendered}")
            } else {
                write!(out, "{rendered}")
            };
            return code;
        }
    };
    let result = match &cli.command {
        Command::Table(a) => cmd_table(a, out),
        Command::Value(a) => cmd_entry(a, false, out),
        Command::Star(a) => cmd_entry(a, true, out),
        Command::Dowling(a) => cmd_dowling(a, out),
        Command::Hankel(a) => cmd_hankel(a, out),
        Command::Verify(a) => cmd_verify(a, out),
        Command::Eval(a) => cmd_eval(a, out),
    };
    match result {
        Ok(Outcome::Ok) => EXIT_OK,
        Ok(Outcome::Failed) => EXIT_FAILED,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_USAGE
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn call(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let mut full = vec!["qwhitney"];
        full.extend_from_slice(args);
        let code = run(full, &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn table_json_row_two() {
        let (code, out, _) = call(&["table", "--m", "1", "--r", "1", "--nmax", "2", "--format", "json"]);
        assert_eq!(code, 0);
        let v: Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["params"], json!({"m": 1, "r": 1}));
        assert_eq!(v["rows"][2][1], json!([[1, "2"], [2, "1"]]));
        assert_eq!(v["rows"][2][2], json!([[3, "1"]]));
    }

    #[test]
    fn table_csv_at_one_is_stirling() {
        let (code, out, _) = call(&[
            "table", "--m", "1", "--r", "0", "--nmax", "3", "--q-eval", "1", "--format", "csv",
        ]);
        assert_eq!(code, 0);
        assert!(out.starts_with("n,k,value\n"));
        assert!(out.contains("3,2,3\n"));
        assert!(out.contains("3,1,1\n"));
    }

    #[test]
    fn validation_errors_exit_two() {
        let (code, _, err) = call(&["table", "--m", "0", "--r", "0", "--nmax", "2"]);
        assert_eq!(code, 2);
        assert!(err.contains("m must be ≥ 1"), "{err}");
        assert_eq!(call(&["value", "--m", "1", "--r", "0", "--n", "2", "--k", "3"]).0, 2);
        assert_eq!(call(&["value", "--m", "x", "--r", "0", "--n", "2", "--k", "1"]).0, 2);
        assert_eq!(call(&["verify", "--suite", "bogus"]).0, 2);
        assert_eq!(call(&["nonsense"]).0, 2);
        assert_eq!(call(&["eval", "--poly", "[[0,\"1\"]]", "--q", "0"]).0, 2);
    }

    #[test]
    fn hankel_reports() {
        let (code, out, _) = call(&["hankel", "--m", "1", "--r", "1", "--s", "0", "--n", "1", "--format", "json"]);
        assert_eq!(code, 0);
        let v: Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["determinant"], json!([[0, "1"], [1, "1"]]));
        assert_eq!(v["status"], "PASS");
        let (code, out, _) = call(&["hankel", "--m", "1", "--r", "0", "--s", "0", "--n", "2", "--q-eval", "1"]);
        assert_eq!(code, 0);
        assert!(out.contains("determinant: 4\n"), "{out}");
        assert!(out.ends_with("PASS\n"));
        let (_, out, _) = call(&["hankel", "--m", "2", "--r", "1", "--s", "1", "--n", "0"]);
        assert!(out.contains("determinant: 1\n"));
    }

    #[test]
    fn single_values() {
        assert_eq!(call(&["value", "--m", "1", "--r", "1", "--n", "2", "--k", "1"]).1, "2q + q^2\n");
        assert_eq!(call(&["dowling", "--m", "1", "--r", "0", "--n", "4", "--q-eval", "1"]).1, "15\n");
        let (_, out, _) = call(&["star", "--m", "1", "--r", "0", "--n", "4", "--k", "2", "--q-eval", "1"]);
        assert_eq!(out, "7\n");
    }

    #[test]
    fn eval_modes() {
        assert_eq!(call(&["eval", "--poly", "[[-1,\"1\"],[1,\"2\"]]", "--q", "2"]).1, "9/2\n");
        let (code, out, _) = call(&[
            "eval", "--gf", "rational", "--m", "1", "--r", "0", "--k", "2", "--order", "4", "--q", "1",
        ]);
        assert_eq!(code, 0);
        assert_eq!(out, "0\t0\n1\t0\n2\t1\n3\t3\n4\t7\n");
    }
}
