//! Command-line front end.
//!
//! Every subcommand produces a [`Table`] whose rows carry their full input
//! parameters; the table is written as CSV (with `#` metadata lines) or JSON.
//! Rows are ordered by sorted inputs, never by completion order.

use std::fmt::Write as _;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::Serialize;

use crate::asymptotics::{
    analytic_s0, fit_log_growth, geometric_grid, paired_blocks, scaling_collapse, CollapseConfig,
    EntropySeries, FitWindow, SymmetricBranch, Transition, DEFAULT_COLLAPSE_POINTS, DEFAULT_GRID_POINTS,
};
use crate::entropy::entropy_for_blocks;
use crate::error::Error;
use crate::oracle::{compare_with_correlations, Normalization, MAX_SITES};
use crate::spectrum::{classify_phase, fermi_seas, ModelParams};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;
pub const EXIT_ACCEPTANCE: i32 = 4;
pub const EXIT_DEGENERATE: i32 = 5;

/// Caps the worker pool when set to a positive integer.
pub const THREADS_ENV: &str = "FERMI_SEAS_THREADS";

/// Oracle comparisons fail above this entropy difference.
pub const ORACLE_TOLERANCE: f64 = 1e-8;

const SIGNIFICANT_DIGITS: usize = 12;

/// A whole comma-separated list given as one argument.
pub type ValueList = Vec<f64>;
pub type BlockList = Vec<usize>;

#[derive(Parser, Debug)]
#[command(name = "fermi-seas", version, about = "Block entanglement entropy of the current-carrying XX chain")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Block entropies on a parameter grid.
    Entropy(EntropyArgs),
    /// Fit S = a ln L + b at each parameter point.
    Fit(FitArgs),
    /// Scaling curves across a transition line.
    Collapse(CollapseArgs),
    /// Exact diagonalization against the correlation-matrix method.
    Oracle(OracleArgs),
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct OutputArgs {
    /// Write to this file instead of standard output.
    #[arg(long)]
    #[serde(skip)]
    pub output: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct ParamArgs {
    /// Field values, comma separated; expressions such as `1/sqrt(2)` are accepted.
    #[arg(long, value_parser = parse_list, default_value = "0")]
    pub h: ValueList,
    /// Driving-field values, comma separated.
    #[arg(long, value_parser = parse_list, default_value = "0")]
    pub lambda: ValueList,
    /// Points on the line h·λ = 1, given as λ⁻¹ (replaces --h and --lambda).
    #[arg(long, value_parser = parse_list)]
    pub symmetric: Option<ValueList>,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct EntropyArgs {
    #[command(flatten)]
    pub params: ParamArgs,
    /// Block sizes: `100`, `1:50` (inclusive) or comma-separated mixtures.
    #[arg(long = "L", value_parser = parse_blocks, conflicts_with = "l_geom")]
    pub l: Option<BlockList>,
    /// Geometric block grid `min:count:max`.
    #[arg(long = "L-geom", value_parser = parse_geom)]
    pub l_geom: Option<BlockList>,
    /// Report entropies in bits.
    #[arg(long)]
    pub base2: bool,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct FitArgs {
    #[command(flatten)]
    pub params: ParamArgs,
    /// Fit window `min:max`.
    #[arg(long, value_parser = parse_window, default_value = "200:2048")]
    pub window: FitWindow,
    /// Geometric grid points inside the window (each paired with L+1).
    #[arg(long, default_value_t = DEFAULT_GRID_POINTS)]
    pub points: usize,
    /// Fit a synthetic series with known coefficients instead.
    #[arg(long)]
    pub self_test: bool,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct CollapseArgs {
    #[arg(long, value_enum)]
    pub transition: TransitionArg,
    /// Path coordinates: h for kh-klambda and klambda-zero.
    #[arg(long, value_parser = parse_list)]
    pub h: Option<ValueList>,
    /// Path coordinates: λ for kh-zero.
    #[arg(long, value_parser = parse_list)]
    pub lambda: Option<ValueList>,
    #[arg(long = "L", value_parser = parse_blocks)]
    pub l: BlockList,
    #[arg(long, default_value_t = DEFAULT_COLLAPSE_POINTS)]
    pub points: usize,
    /// Upper end of the x grid (default: a tenth of the way to the next line).
    #[arg(long)]
    pub x_max: Option<f64>,
    /// Largest acceptable spread between curves.
    #[arg(long, default_value_t = 0.02)]
    pub tolerance: f64,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
pub enum TransitionArg {
    #[value(name = "kh-klambda")]
    KhKlambda,
    #[value(name = "kh-zero")]
    KhZero,
    #[value(name = "klambda-zero")]
    KlambdaZero,
}

impl From<TransitionArg> for Transition {
    fn from(t: TransitionArg) -> Self {
        match t {
            TransitionArg::KhKlambda => Transition::HighSymmetry,
            TransitionArg::KhZero => Transition::FieldZero,
            TransitionArg::KlambdaZero => Transition::LambdaZero,
        }
    }
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct OracleArgs {
    /// Ring size.
    #[arg(long = "N")]
    pub n: usize,
    #[command(flatten)]
    pub params: ParamArgs,
    /// Block sizes (default 1..=N/2).
    #[arg(long = "L", value_parser = parse_blocks)]
    pub l: Option<BlockList>,
    #[arg(long, value_enum, default_value_t = NormalizationArg::SpinHalf)]
    pub normalization: NormalizationArg,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
pub enum NormalizationArg {
    Pauli,
    SpinHalf,
}

impl From<NormalizationArg> for Normalization {
    fn from(n: NormalizationArg) -> Self {
        match n {
            NormalizationArg::Pauli => Normalization::Pauli,
            NormalizationArg::SpinHalf => Normalization::SpinHalf,
        }
    }
}

/// Failure of a command, carrying its exit code.
#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    fn config(message: impl Into<String>) -> Self {
        Self { code: EXIT_CONFIG, message: message.into() }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::InvalidParams(_) => EXIT_CONFIG,
            Error::DegenerateGroundState { .. } => EXIT_DEGENERATE,
            _ => EXIT_NUMERICAL,
        };
        Self { code, message: e.to_string() }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        Self::config(format!("cannot write output: {e}"))
    }
}

/// Evaluate one numeric expression.
pub fn parse_value(s: &str) -> Result<f64, String> {
    let v: f64 = exmex::eval_str(s.trim()).map_err(|e| format!("cannot evaluate `{s}`: {e}"))?;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(format!("`{s}` is not finite"))
    }
}

/// Comma-separated expressions, sorted and deduplicated.
pub fn parse_list(s: &str) -> Result<Vec<f64>, String> {
    let mut out = s.split(',').map(parse_value).collect::<Result<Vec<_>, _>>()?;
    if out.is_empty() {
        return Err("empty list".into());
    }
    out.sort_by(f64::total_cmp);
    out.dedup();
    Ok(out)
}

fn parse_count(s: &str) -> Result<usize, String> {
    s.trim().parse::<usize>().map_err(|_| format!("`{s}` is not a non-negative integer"))
}

/// `a`, `a:b` (inclusive) and comma-separated mixtures; sorted, deduplicated.
pub fn parse_blocks(s: &str) -> Result<Vec<usize>, String> {
    let mut out = Vec::new();
    for part in s.split(',') {
        match part.split_once(':') {
            Some((a, b)) => {
                let (a, b) = (parse_count(a)?, parse_count(b)?);
                if a > b {
                    return Err(format!("empty range `{part}`"));
                }
                out.extend(a..=b);
            }
            None => out.push(parse_count(part)?),
        }
    }
    if out.contains(&0) {
        return Err("block sizes must be at least 1".into());
    }
    out.sort_unstable();
    out.dedup();
    Ok(out)
}

/// `min:count:max`.
pub fn parse_geom(s: &str) -> Result<Vec<usize>, String> {
    let parts: Vec<&str> = s.split(':').collect();
    let [min, count, max] = parts[..] else {
        return Err(format!("expected min:count:max, got `{s}`"));
    };
    let (min, count, max) = (parse_count(min)?, parse_count(count)?, parse_count(max)?);
    if min == 0 || max < min || count == 0 {
        return Err(format!("invalid geometric grid `{s}`"));
    }
    Ok(geometric_grid(min, max, count))
}

pub fn parse_window(s: &str) -> Result<FitWindow, String> {
    let (a, b) = s.split_once(':').ok_or_else(|| format!("expected min:max, got `{s}`"))?;
    let (min, max) = (parse_count(a)?, parse_count(b)?);
    if min == 0 || max <= min {
        return Err(format!("invalid window `{s}`"));
    }
    Ok(FitWindow { min, max })
}

/// Decimal with [`SIGNIFICANT_DIGITS`] significant digits; scientific outside
/// a moderate exponent range.
pub fn format_number(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let exp = x.abs().log10().floor() as i32;
    if !(-5..15).contains(&exp) {
        return format!("{:.*e}", SIGNIFICANT_DIGITS - 1, x);
    }
    let decimals = (SIGNIFICANT_DIGITS as i32 - 1 - exp).max(0) as usize;
    let s = format!("{x:.decimals$}");
    // A carry can add a digit (9.99.. -> 10.0..); re-round once at the new exponent.
    let rounded: f64 = s.parse().unwrap_or(x);
    let exp2 = rounded.abs().log10().floor() as i32;
    if exp2 != exp {
        let decimals = (SIGNIFICANT_DIGITS as i32 - 1 - exp2).max(0) as usize;
        return format!("{x:.decimals$}");
    }
    s
}

#[derive(Clone, Debug, PartialEq)]
pub enum Cell {
    Num(f64),
    Int(i64),
    Text(String),
    Empty,
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Num(x) => format_number(*x),
            Cell::Int(i) => i.to_string(),
            Cell::Text(s) => s.clone(),
            Cell::Empty => String::new(),
        }
    }

    fn json(&self) -> serde_json::Value {
        match self {
            Cell::Num(x) => serde_json::Value::from(*x),
            Cell::Int(i) => serde_json::Value::from(*i),
            Cell::Text(s) => serde_json::Value::from(s.as_str()),
            Cell::Empty => serde_json::Value::Null,
        }
    }
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Num(x)
    }
}

impl From<usize> for Cell {
    fn from(x: usize) -> Self {
        Cell::Int(x as i64)
    }
}

impl From<&str> for Cell {
    fn from(s: &str) -> Self {
        Cell::Text(s.into())
    }
}

impl From<Option<f64>> for Cell {
    fn from(x: Option<f64>) -> Self {
        x.map_or(Cell::Empty, Cell::Num)
    }
}

/// Output of one command.
#[derive(Clone, Debug, PartialEq)]
pub struct Table {
    pub command: String,
    pub config: serde_json::Value,
    /// Extra `key value` lines reported with the table.
    pub summary: Vec<(String, String)>,
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    fn new(command: &str, config: &impl Serialize, header: Vec<&'static str>) -> Self {
        Self {
            command: command.into(),
            config: serde_json::to_value(config).expect("configs serialize"),
            summary: Vec::new(),
            header,
            rows: Vec::new(),
        }
    }

    fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn column(&self, name: &str) -> Option<usize> {
        self.header.iter().position(|h| *h == name)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "# fermi-seas {}", env!("CARGO_PKG_VERSION"));
        let _ = writeln!(out, "# command {}", self.command);
        let _ = writeln!(out, "# config {}", self.config);
        for (k, v) in &self.summary {
            let _ = writeln!(out, "# {k} {v}");
        }
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&self.header).expect("in-memory write");
        for row in &self.rows {
            w.write_record(row.iter().map(Cell::csv)).expect("in-memory write");
        }
        out.push_str(&String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 fields"));
        out
    }

    pub fn to_json(&self) -> String {
        let rows: Vec<serde_json::Value> = self
            .rows
            .iter()
            .map(|r| {
                let map = self.header.iter().zip(r).map(|(h, c)| (h.to_string(), c.json())).collect();
                serde_json::Value::Object(map)
            })
            .collect();
        let summary: serde_json::Map<String, serde_json::Value> =
            self.summary.iter().map(|(k, v)| (k.clone(), serde_json::Value::from(v.as_str()))).collect();
        let doc = serde_json::json!({
            "version": env!("CARGO_PKG_VERSION"),
            "command": self.command,
            "config": self.config,
            "summary": summary,
            "rows": rows,
        });
        let mut s = serde_json::to_string_pretty(&doc).expect("json values serialize");
        s.push('\n');
        s
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Csv => self.to_csv(),
            Format::Json => self.to_json(),
        }
    }
}

fn parameter_points(args: &ParamArgs) -> Result<Vec<ModelParams>, CliError> {
    let points = match &args.symmetric {
        Some(inv) => inv.iter().map(|&x| ModelParams::symmetric_line(x)).collect::<crate::Result<Vec<_>>>()?,
        None => {
            let mut v = Vec::with_capacity(args.h.len() * args.lambda.len());
            for &h in &args.h {
                for &lambda in &args.lambda {
                    v.push(ModelParams::new(h, lambda)?);
                }
            }
            v
        }
    };
    Ok(points)
}

fn entropy_table(args: &EntropyArgs) -> Result<Table, CliError> {
    let blocks = match (&args.l, &args.l_geom) {
        (Some(l), _) | (None, Some(l)) => l.clone(),
        (None, None) => return Err(CliError::config("one of --L or --L-geom is required")),
    };
    let points = parameter_points(&args.params)?;
    let per_point = points
        .par_iter()
        .map(|p| entropy_for_blocks(p, &blocks))
        .collect::<crate::Result<Vec<_>>>()?;

    let unit = if args.base2 { "bits" } else { "nats" };
    let mut table = Table::new("entropy", args, vec!["h", "lambda", "L", "S", "units", "R", "phase"]);
    for (p, values) in points.iter().zip(per_point) {
        let r = fermi_seas(p).count();
        let phase = classify_phase(p).phase.as_str();
        for v in values {
            let s = if args.base2 { v.entropy / std::f64::consts::LN_2 } else { v.entropy };
            table.push(vec![p.h().into(), p.lambda().into(), v.block.into(), s.into(), unit.into(), r.into(), phase.into()]);
        }
    }
    Ok(table)
}

/// Offset of the synthetic series used by `fit --self-test`.
const SELF_TEST_COEFFICIENTS: (f64, f64) = (1.0 / 3.0, 0.726);

fn fit_table(args: &FitArgs) -> Result<Table, CliError> {
    if args.points < 2 {
        return Err(CliError::config("--points must be at least 2"));
    }
    let blocks = paired_blocks(&geometric_grid(args.window.min, args.window.max, args.points));
    let header = vec![
        "h",
        "lambda",
        "window_min",
        "window_max",
        "points",
        "a",
        "b",
        "residual_rms",
        "raw_residual_rms",
        "s0_analytic",
        "b_at_two_thirds",
        "b_at_two_thirds_minus_s0",
    ];
    let mut table = Table::new("fit", args, header);

    if args.self_test {
        let (a, b) = SELF_TEST_COEFFICIENTS;
        let pts = blocks.iter().map(|&l| (l, a * (l as f64).ln() + b)).collect();
        let p = ModelParams::new(0.0, 0.0)?;
        let fit = fit_log_growth(&EntropySeries::new(p, pts)?, args.window)?;
        let ok = (fit.prefactor - a).abs() < 1e-10 && (fit.offset - b).abs() < 1e-9;
        table.summary.push(("self_test".into(), if ok { "pass" } else { "fail" }.into()));
        table.push(vec![
            Cell::Empty,
            Cell::Empty,
            args.window.min.into(),
            args.window.max.into(),
            fit.points_used.into(),
            fit.prefactor.into(),
            fit.offset.into(),
            fit.residual_rms.into(),
            fit.raw_residual_rms.into(),
            Cell::Empty,
            Cell::Empty,
            Cell::Empty,
        ]);
        if !ok {
            return Err(CliError { code: EXIT_ACCEPTANCE, message: table.render(args.output.format) });
        }
        return Ok(table);
    }

    let points = parameter_points(&args.params)?;
    let fits = points
        .iter()
        .map(|p| {
            let series = EntropySeries::compute(*p, &blocks)?;
            let fit = fit_log_growth(&series, args.window)?;
            let inside: Vec<f64> = series
                .points()
                .iter()
                .filter(|(l, _)| args.window.contains(*l))
                .map(|&(l, s)| s - 2.0 / 3.0 * (l as f64).ln())
                .collect();
            let fixed = inside.iter().sum::<f64>() / inside.len() as f64;
            Ok((fit, fixed))
        })
        .collect::<crate::Result<Vec<_>>>()?;

    for (p, (fit, fixed)) in points.iter().zip(fits) {
        let on_line = (p.h() * p.lambda() - 1.0).abs() < 1e-12;
        let s0 = if on_line {
            SymmetricBranch::for_lambda(p.lambda()).and_then(|b| analytic_s0(p.lambda(), b).ok())
        } else {
            None
        };
        table.push(vec![
            p.h().into(),
            p.lambda().into(),
            fit.window.min.into(),
            fit.window.max.into(),
            fit.points_used.into(),
            fit.prefactor.into(),
            fit.offset.into(),
            fit.residual_rms.into(),
            fit.raw_residual_rms.into(),
            s0.into(),
            on_line.then_some(fixed).into(),
            s0.map(|s| fixed - s).into(),
        ]);
    }
    Ok(table)
}

fn collapse_table(args: &CollapseArgs) -> Result<Table, CliError> {
    let transition = Transition::from(args.transition);
    let paths = match transition {
        Transition::FieldZero => args.lambda.clone().ok_or_else(|| CliError::config("kh-zero paths need --lambda"))?,
        _ => args.h.clone().ok_or_else(|| CliError::config(format!("{} paths need --h", transition.as_str())))?,
    };
    if args.l.is_empty() {
        return Err(CliError::config("--L is required"));
    }
    let mut config = CollapseConfig::new(transition, paths, args.l.clone());
    config.grid_points = args.points;
    config.x_max = args.x_max;
    let result = scaling_collapse(&config)?;

    let header = vec!["transition", "side", "path", "h", "lambda", "L", "x", "S", "delta_S"];
    let mut table = Table::new("collapse", args, header);
    table.summary.push(("x_max".into(), format_number(*result.x_grid.last().unwrap_or(&0.0))));
    table.summary.push(("spread".into(), format_number(result.spread)));
    table.summary.push(("tolerance".into(), format_number(args.tolerance)));
    for c in &result.curves {
        let side = match c.side {
            crate::asymptotics::Side::Below => "below",
            crate::asymptotics::Side::Above => "above",
        };
        for s in &c.samples {
            table.push(vec![
                transition.as_str().into(),
                side.into(),
                c.path.into(),
                s.params.h().into(),
                s.params.lambda().into(),
                c.block.into(),
                s.x.into(),
                s.entropy.into(),
                s.delta.into(),
            ]);
        }
    }
    if result.spread > args.tolerance {
        return Err(CliError {
            code: EXIT_ACCEPTANCE,
            message: format!("collapse spread {} exceeds {}", result.spread, args.tolerance),
        });
    }
    Ok(table)
}

fn oracle_table(args: &OracleArgs) -> Result<Table, CliError> {
    if !(2..=MAX_SITES).contains(&args.n) {
        return Err(CliError::config(format!("--N must lie in 2..={MAX_SITES}")));
    }
    let blocks = args.l.clone().unwrap_or_else(|| (1..=(args.n / 2).max(1)).collect());
    if let Some(&b) = blocks.iter().find(|&&b| b >= args.n) {
        return Err(CliError::config(format!("block size {b} must be smaller than N = {}", args.n)));
    }
    let norm = Normalization::from(args.normalization);
    let points = parameter_points(&args.params)?;
    let comparisons = points
        .par_iter()
        .map(|p| compare_with_correlations(args.n, p, &blocks, norm))
        .collect::<crate::Result<Vec<_>>>()?;

    let header = vec![
        "N",
        "h",
        "lambda",
        "normalization",
        "offset",
        "ground_energy",
        "gap",
        "L",
        "S_exact",
        "S_correlation",
        "abs_diff",
    ];
    let mut table = Table::new("oracle", args, header);
    let norm_name = match norm {
        Normalization::Pauli => "pauli",
        Normalization::SpinHalf => "spin-half",
    };
    let mut worst = 0.0f64;
    for c in &comparisons {
        worst = worst.max(c.max_difference());
        let offset = match c.filling.offset {
            crate::correlations::MomentumOffset::Integer => "integer",
            crate::correlations::MomentumOffset::HalfInteger => "half-integer",
        };
        for r in &c.rows {
            table.push(vec![
                c.sites.into(),
                c.params.h().into(),
                c.params.lambda().into(),
                norm_name.into(),
                offset.into(),
                c.ground_energy.into(),
                c.gap.into(),
                r.block.into(),
                r.exact.into(),
                r.correlation.into(),
                r.difference().into(),
            ]);
        }
    }
    table.summary.push(("max_abs_diff".into(), format_number(worst)));
    if worst > ORACLE_TOLERANCE {
        return Err(CliError {
            code: EXIT_ACCEPTANCE,
            message: format!("oracle disagreement {worst:e} exceeds {ORACLE_TOLERANCE:e}"),
        });
    }
    Ok(table)
}

fn output_args(cmd: &Command) -> &OutputArgs {
    match cmd {
        Command::Entropy(a) => &a.output,
        Command::Fit(a) => &a.output,
        Command::Collapse(a) => &a.output,
        Command::Oracle(a) => &a.output,
    }
}

/// Run a parsed command and return its table.
pub fn execute(cmd: &Command) -> Result<Table, CliError> {
    match cmd {
        Command::Entropy(a) => entropy_table(a),
        Command::Fit(a) => fit_table(a),
        Command::Collapse(a) => collapse_table(a),
        Command::Oracle(a) => oracle_table(a),
    }
}

/// Cap the global worker pool from [`THREADS_ENV`]. Only the first call in a
/// process has an effect.
pub fn configure_threads() -> Result<(), CliError> {
    let Ok(raw) = std::env::var(THREADS_ENV) else { return Ok(()) };
    let n: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| CliError::config(format!("{THREADS_ENV} must be a positive integer, got `{raw}`")))?;
    let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    Ok(())
}

/// Full command-line entry point. Writes the table to `--output` or `stdout`,
/// diagnostics to `stderr`, and returns the process exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_CONFIG } else { EXIT_OK };
            if code == EXIT_OK {
                let _ = write!(stdout, "{e}");
            } else {
                let _ = write!(stderr, "{e}");
            }
            return code;
        }
    };
    if let Err(e) = configure_threads() {
        let _ = writeln!(stderr, "error: {}", e.message);
        return e.code;
    }
    let out = output_args(&cli.command).clone();
    match execute(&cli.command).and_then(|table| emit(&table, &out, stdout)) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            let _ = writeln!(stderr, "error: {}", e.message);
            e.code
        }
    }
}

fn emit(table: &Table, out: &OutputArgs, stdout: &mut dyn Write) -> Result<(), CliError> {
    let text = table.render(out.format);
    match &out.output {
        Some(path) => std::fs::write(path, text)?,
        None => stdout.write_all(text.as_bytes())?,
    }
    Ok(())
}
