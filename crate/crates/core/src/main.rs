use std::fmt::Write as _;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use instcone::knot::{self, KnotComplexData, KnotError, ValidationReport};
use instcone::linalg::{format_half, parse_half};
use instcone::surgery::{self, SlopeResult, SurgeryError, ZeroCell};
use instcone::verify::{check_suite, Status};

const DEFAULT_SEED: u64 = 42;

#[derive(Parser)]
#[command(name = "instcone", version, about = "Surgery dimensions and invariants from bent-complex knot data")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check the structural invariants of a knot file.
    Validate(Input),
    /// Print τ, ν, ν♯ and r₀.
    Invariants(Input),
    /// Surgery dimensions at one slope or a range of slopes.
    Surgery {
        #[command(flatten)]
        input: Input,
        #[arg(long, allow_hyphen_values = true, conflicts_with = "range")]
        slope: Option<i64>,
        /// Inclusive range `a..b`.
        #[arg(long, allow_hyphen_values = true, value_parser = parse_range)]
        range: Option<(i64, i64)>,
    },
    /// Per-grading dimensions of 0-surgery.
    Zero(Input),
    /// Dual-knot dimensions for surgery parameter m.
    Dual {
        #[command(flatten)]
        input: Input,
        #[arg(long, allow_hyphen_values = true)]
        m: i64,
        /// A single grading, e.g. `1` or `-3/2`.
        #[arg(long, allow_hyphen_values = true, value_parser = parse_grading)]
        grading: Option<i64>,
    },
    /// dim H(A(s)) for every s in [−g, g].
    Table(Input),
    /// Run the property suite.
    Check {
        #[command(flatten)]
        input: Input,
        /// Defaults to $INSTCONE_SEED, then 42.
        #[arg(long)]
        seed: Option<u64>,
    },
}

#[derive(Args)]
struct Input {
    /// JSON knot file, or `catalog:NAME`.
    file: String,
    #[arg(long, conflicts_with = "csv")]
    json: bool,
    #[arg(long)]
    csv: bool,
}

#[derive(Clone, Copy)]
enum Format {
    Table,
    Json,
    Csv,
}

impl Input {
    fn format(&self) -> Format {
        if self.json {
            Format::Json
        } else if self.csv {
            Format::Csv
        } else {
            Format::Table
        }
    }
}

fn parse_range(s: &str) -> Result<(i64, i64), String> {
    let (a, b) = s.split_once("..").ok_or("expected a..b")?;
    let a: i64 = a.trim().parse().map_err(|_| format!("bad range start {a:?}"))?;
    let b: i64 = b.trim().parse().map_err(|_| format!("bad range end {b:?}"))?;
    if a > b {
        return Err(format!("empty range {s}"));
    }
    Ok((a, b))
}

fn parse_grading(s: &str) -> Result<i64, String> {
    parse_half(s).ok_or_else(|| format!("grading {s:?} is not an integer or half-integer"))
}

/// Failure carrying its exit code.
struct Failure {
    code: u8,
    message: String,
    report: Option<ValidationReport>,
}

impl Failure {
    fn new(code: u8, message: String) -> Self {
        Failure { code, message, report: None }
    }
}

impl From<KnotError> for Failure {
    fn from(e: KnotError) -> Self {
        let message = e.to_string();
        match e {
            KnotError::Validation(r) => Failure { code: 1, message, report: Some(r) },
            _ => Failure { code: 3, message, report: None },
        }
    }
}

impl From<SurgeryError> for Failure {
    fn from(e: SurgeryError) -> Self {
        Failure::new(1, e.to_string())
    }
}

struct Output {
    text: String,
    code: u8,
}

impl Output {
    fn ok(text: String) -> Self {
        Output { text, code: 0 }
    }
}

fn read_knot(file: &str) -> Result<KnotComplexData, Failure> {
    match file.strip_prefix("catalog:") {
        Some(name) => knot::by_name(name).ok_or_else(|| Failure::new(3, format!("unknown catalog knot {name:?}; known: {}", knot::CATALOG_NAMES.join(", ")))),
        None => Ok(knot::load(file)?),
    }
}

fn load_valid(input: &Input) -> Result<KnotComplexData, Failure> {
    Ok(read_knot(&input.file)?.validated()?)
}

fn json_text(v: Value) -> String {
    serde_json::to_string_pretty(&v).expect("json value serializes") + "\n"
}

/// Doubled grading as a JSON number when integral, else as an exact string.
fn half_value(doubled: i64) -> Value {
    let s = format_half(doubled);
    match s.parse::<i64>() {
        Ok(n) => json!(n),
        Err(_) => json!(s),
    }
}

fn cell_text(c: ZeroCell) -> String {
    match c {
        ZeroCell::Dim(d) => d.to_string(),
        ZeroCell::Indeterminate => "indeterminate".into(),
    }
}

fn cell_value(c: ZeroCell) -> Value {
    match c {
        ZeroCell::Dim(d) => json!(d),
        ZeroCell::Indeterminate => json!("indeterminate"),
    }
}

fn two_columns(fmt: Format, head: (&str, &str), rows: &[(String, String)]) -> String {
    let mut out = String::new();
    match fmt {
        Format::Csv => {
            writeln!(out, "{},{}", head.0, head.1).unwrap();
            for (a, b) in rows {
                writeln!(out, "{a},{b}").unwrap();
            }
        }
        _ => {
            let w = rows.iter().map(|r| r.0.len()).chain([head.0.len()]).max().unwrap_or(0);
            writeln!(out, "{:<w$}  {}", head.0, head.1).unwrap();
            for (a, b) in rows {
                writeln!(out, "{a:<w$}  {b}").unwrap();
            }
        }
    }
    out
}

fn cmd_validate(input: &Input) -> Result<Output, Failure> {
    // Loading validates, so an invalid file arrives as an error carrying its report.
    let (name, report) = match read_knot(&input.file) {
        Ok(k) => {
            let r = k.validate();
            (k.name, r)
        }
        Err(Failure { report: Some(r), .. }) => (input.file.clone(), r),
        Err(f) => return Err(f),
    };
    let code = if report.is_valid() { 0 } else { 1 };
    let text = match input.format() {
        Format::Json => json_text(json!({
            "name": name,
            "valid": report.is_valid(),
            "checks": report.checks.iter().map(|c| json!({
                "name": c.name,
                "passed": c.passed,
                "offenders": c.offenders,
            })).collect::<Vec<_>>(),
        })),
        Format::Csv => {
            let mut out = String::from("check,passed,offenders\n");
            for c in &report.checks {
                writeln!(out, "{},{},{}", c.name, c.passed, c.offenders.join(" ")).unwrap();
            }
            out
        }
        Format::Table => {
            let mut out = String::new();
            for c in &report.checks {
                let mark = if c.passed { "ok  " } else { "FAIL" };
                write!(out, "{mark}  {}", c.name).unwrap();
                if !c.offenders.is_empty() {
                    write!(out, ": {}", c.offenders.join(", ")).unwrap();
                }
                out.push('\n');
            }
            writeln!(out, "{}: {}", name, if report.is_valid() { "valid" } else { "invalid" }).unwrap();
            out
        }
    };
    Ok(Output { text, code })
}

fn cmd_invariants(input: &Input) -> Result<Output, Failure> {
    let k = load_valid(input)?;
    let r = surgery::invariants(&k)?;
    let nu_sharp = r.nu_sharp.map(|v| v.to_string()).unwrap_or_else(|| "undefined".into());
    let r0 = r.r0.map(|v| v.to_string()).unwrap_or_else(|| "undefined".into());
    let text = match input.format() {
        Format::Json => json_text(json!({
            "tau": half_value(r.tau2),
            "nu": half_value(r.nu2),
            "nu_sharp": r.nu_sharp,
            "r0": r.r0,
        })),
        Format::Csv => format!("tau,nu,nu_sharp,r0\n{},{},{},{}\n", format_half(r.tau2), format_half(r.nu2), nu_sharp, r0),
        Format::Table => format!(
            "tau       {}\nnu        {}\nnu_sharp  {}\nr0        {}\n",
            format_half(r.tau2),
            format_half(r.nu2),
            nu_sharp,
            r0
        ),
    };
    Ok(Output::ok(text))
}

fn cmd_surgery(input: &Input, slopes: Vec<i64>) -> Result<Output, Failure> {
    let k = load_valid(input)?;
    let report = surgery::surgery_report(&k, slopes)?;
    let code = if report.has_indeterminate() { 2 } else { 0 };
    let text = match input.format() {
        Format::Json => json_text(Value::Array(
            report
                .rows
                .iter()
                .map(|(n, r)| match r {
                    SlopeResult::Total(d) => json!({ "slope": n, "dim": d }),
                    SlopeResult::Zero(z) => json!({
                        "slope": n,
                        "gradings": z.iter().map(|(s, c)| json!({ "grading": s, "dim": cell_value(*c) })).collect::<Vec<_>>(),
                    }),
                })
                .collect(),
        )),
        Format::Csv => {
            let mut out = String::from("slope,grading,dim\n");
            for (n, r) in &report.rows {
                match r {
                    SlopeResult::Total(d) => writeln!(out, "{n},,{d}").unwrap(),
                    SlopeResult::Zero(z) => {
                        for (s, c) in z {
                            writeln!(out, "{n},{s},{}", cell_text(*c)).unwrap();
                        }
                    }
                }
            }
            out
        }
        Format::Table => {
            let rows: Vec<(String, String)> = report
                .rows
                .iter()
                .map(|(n, r)| {
                    let v = match r {
                        SlopeResult::Total(d) => d.to_string(),
                        SlopeResult::Zero(z) => {
                            z.iter().map(|(s, c)| format!("s={s}:{}", cell_text(*c))).collect::<Vec<_>>().join(" ")
                        }
                    };
                    (n.to_string(), v)
                })
                .collect();
            two_columns(Format::Table, ("slope", "dim"), &rows)
        }
    };
    Ok(Output { text, code })
}

fn cmd_zero(input: &Input) -> Result<Output, Failure> {
    let k = load_valid(input)?;
    let z = surgery::zero_surgery_dims(&k)?;
    let code = if z.values().any(|c| *c == ZeroCell::Indeterminate) { 2 } else { 0 };
    let text = match input.format() {
        Format::Json => json_text(Value::Array(
            z.iter().map(|(s, c)| json!({ "grading": s, "dim": cell_value(*c) })).collect(),
        )),
        fmt => {
            let rows: Vec<_> = z.iter().map(|(s, c)| (s.to_string(), cell_text(*c))).collect();
            two_columns(fmt, ("grading", "dim"), &rows)
        }
    };
    Ok(Output { text, code })
}

fn cmd_dual(input: &Input, m: i64, grading: Option<i64>) -> Result<Output, Failure> {
    let k = load_valid(input)?;
    let rows = match grading {
        Some(j2) => vec![(j2, surgery::dual_knot_dim(&k, m, j2)?)],
        None => surgery::dual_knot_table(&k, m)?,
    };
    let text = match input.format() {
        Format::Json => json_text(Value::Array(
            rows.iter().map(|(j2, d)| json!({ "grading": format_half(*j2), "dim": d })).collect(),
        )),
        fmt => {
            let rows: Vec<_> = rows.iter().map(|(j2, d)| (format_half(*j2), d.to_string())).collect();
            two_columns(fmt, ("grading", "dim"), &rows)
        }
    };
    Ok(Output::ok(text))
}

fn cmd_table(input: &Input) -> Result<Output, Failure> {
    let k = load_valid(input)?;
    let rows = surgery::large_surgery_table(&k)?;
    let text = match input.format() {
        Format::Json => json_text(Value::Array(rows.iter().map(|(s, d)| json!({ "s": s, "dim": d })).collect())),
        fmt => {
            let rows: Vec<_> = rows.iter().map(|(s, d)| (s.to_string(), d.to_string())).collect();
            two_columns(fmt, ("s", "dim"), &rows)
        }
    };
    Ok(Output::ok(text))
}

fn default_seed() -> Result<u64, Failure> {
    match std::env::var("INSTCONE_SEED") {
        Ok(s) => s.trim().parse().map_err(|_| Failure::new(3, format!("INSTCONE_SEED={s:?} is not a u64"))),
        Err(_) => Ok(DEFAULT_SEED),
    }
}

fn cmd_check(input: &Input, seed: Option<u64>) -> Result<Output, Failure> {
    let seed = match seed {
        Some(s) => s,
        None => default_seed()?,
    };
    let k = read_knot(&input.file)?;
    let results = check_suite(&k, seed)?;
    let code = if results.iter().all(|r| r.passed()) { 0 } else { 1 };
    let text = match input.format() {
        Format::Json => json_text(Value::Array(
            results
                .iter()
                .map(|r| {
                    json!({
                        "name": r.name,
                        "instance": r.instance,
                        "status": r.status.to_string(),
                        "detail": r.detail,
                        "seed": r.seed,
                    })
                })
                .collect(),
        )),
        Format::Csv => {
            let mut out = String::from("name,instance,status,seed,detail\n");
            for r in &results {
                writeln!(out, "{},{},{},{},\"{}\"", r.name, r.instance, r.status, r.seed, r.detail.replace('"', "\"\"")).unwrap();
            }
            out
        }
        Format::Table => {
            let w = results.iter().map(|r| r.name.len()).max().unwrap_or(0);
            let mut out = String::new();
            for r in &results {
                write!(out, "{:<7}  {:<w$}  {}", r.status.to_string(), r.name, r.instance).unwrap();
                if r.status != Status::Pass {
                    write!(out, ": {}", r.detail).unwrap();
                }
                out.push('\n');
            }
            out
        }
    };
    Ok(Output { text, code })
}

fn run(cli: Cli) -> Result<Output, Failure> {
    match cli.command {
        Command::Validate(input) => cmd_validate(&input),
        Command::Invariants(input) => cmd_invariants(&input),
        Command::Surgery { input, slope, range } => {
            let slopes = match (slope, range) {
                (Some(n), _) => vec![n],
                (None, Some((a, b))) => (a..=b).collect(),
                (None, None) => return Err(Failure::new(1, "give --slope or --range".into())),
            };
            cmd_surgery(&input, slopes)
        }
        Command::Zero(input) => cmd_zero(&input),
        Command::Dual { input, m, grading } => cmd_dual(&input, m, grading),
        Command::Table(input) => cmd_table(&input),
        Command::Check { input, seed } => cmd_check(&input, seed),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(cli) {
        Ok(out) => {
            print!("{}", out.text);
            ExitCode::from(out.code)
        }
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
