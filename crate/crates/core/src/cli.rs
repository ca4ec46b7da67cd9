//! `gft-frac` command line: build series and models, run checks and sweeps,
//! emit reports and plot data.
//!
//! Exit codes: 0 pass, 1 fail, 2 usage error, 3 premise not met.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex;
use serde::Serialize;
use serde_json::json;

use crate::banachmodel::{
    ball_samples, compactness_decay_check, geometric_slice_sequence, kernel_directions, kernel_vanishing_check,
    pre_schwarzian_estimate, quasi_class_check, sufficient_condition_check, theorem4_check, theorem8_check,
    theorem_boundedness_check, ucv_membership, BanachModel, CoeffFamily, SliceExponent, SliceFamily,
    DEFAULT_DIRECTIONS,
};
use crate::diskcheck::{
    duren_bound_check, goodman_bound_check, is_convex, is_starlike, is_ucv, ucv_two_point, verify_integral_bound,
    verify_theorem2, verify_theorem3, CheckOptions, CheckReport, CoeffKind, Verdict, THEOREM_ORDER,
};
use crate::error::{usage, Error, Result};
use crate::fracseries::{koebe_frac, DiskGrid, FracPowerSeries};
use crate::operators::{noor_frac, ruscheweyh_frac, z_noor_derivative};
use crate::specialfn::{fox_wright_2psi1, integral_operator_bound, BoundKind, FoxWrightParams};

/// Environment variable capping the worker threads (0 or unset = automatic).
pub const THREADS_ENV: &str = "GFT_FRAC_THREADS";

pub const EXIT_USAGE: i32 = 2;

#[derive(Parser, Debug)]
#[command(name = "gft-frac", version, about = "Fractional analytic functions on the unit disk")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Write the generator z^μ/(1−z^μ)^α as a series document.
    Gen(GenArgs),
    /// Apply a coefficient operator to a series document.
    Apply(ApplyArgs),
    /// Evaluate a series and its first two derivatives.
    Eval(EvalArgs),
    /// Run a geometric or coefficient check on a series.
    Check(CheckArgs),
    /// Verify the integral-operator growth bound.
    Bound(BoundArgs),
    /// Evaluate the Fox-Wright function ₂Ψ₁.
    Foxwright(FoxArgs),
    /// Estimate the pre-Schwarzian norm of a series.
    Norm(NormArgs),
    /// Run a check on a Banach-space model document.
    Banach(BanachArgs),
    /// Run a theorem check over a parameter grid; one CSV row per tuple.
    Sweep(SweepArgs),
    /// Emit image points of circles |z| = r.
    Plotdata(PlotArgs),
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum Format {
    #[default]
    Json,
    Csv,
}

#[derive(Args, Debug, Clone)]
pub struct OutputArgs {
    /// Write to this file instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

#[derive(Args, Debug, Clone)]
pub struct GridArgs {
    /// Outermost radius of the default radius ladder.
    #[arg(long)]
    pub rmax: Option<f64>,
    /// Explicit radii: `r1,r2,...` or `start:stop:step`.
    #[arg(long)]
    pub radii: Option<String>,
    #[arg(long, default_value_t = 128)]
    pub angles: usize,
}

impl GridArgs {
    fn grid(&self) -> Result<DiskGrid<f64>> {
        match (&self.radii, self.rmax) {
            (Some(_), Some(_)) => Err(usage("give either --radii or --rmax, not both")),
            (Some(list), None) => DiskGrid::new(parse_list(list)?, self.angles),
            (None, Some(r)) => DiskGrid::with_rmax(r, self.angles),
            (None, None) => DiskGrid::new(DiskGrid::<f64>::default().radii().to_vec(), self.angles),
        }
    }
}

#[derive(Args, Debug, Clone)]
pub struct GenArgs {
    #[arg(long)]
    pub alpha: f64,
    #[arg(long, default_value_t = 1.0)]
    pub mu: f64,
    #[arg(long, default_value_t = 64)]
    pub order: usize,
    /// Also print the coefficient table `n,re,im` to stdout.
    #[arg(long)]
    pub table: bool,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Op {
    Ruscheweyh,
    Noor,
    ZNoor,
}

fn apply_op(f: &FracPowerSeries<f64>, op: Option<Op>, beta: f64) -> Result<FracPowerSeries<f64>> {
    match op {
        None => Ok(f.clone()),
        Some(Op::Ruscheweyh) => ruscheweyh_frac(f, beta),
        Some(Op::Noor) => noor_frac(f, beta),
        Some(Op::ZNoor) => z_noor_derivative(f, beta),
    }
}

#[derive(Args, Debug, Clone)]
pub struct ApplyArgs {
    #[arg(long = "in")]
    pub input: PathBuf,
    #[arg(long, value_enum)]
    pub op: Op,
    #[arg(long, default_value_t = 1.0)]
    pub beta: f64,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Args, Debug, Clone)]
pub struct EvalArgs {
    #[arg(long = "in")]
    pub input: PathBuf,
    /// Evaluation point `re,im`; repeatable. Without it the grid is used.
    #[arg(long = "at", allow_hyphen_values = true)]
    pub at: Vec<String>,
    #[command(flatten)]
    pub grid: GridArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum CheckName {
    Starlike,
    Convex,
    Ucv,
    UcvTwoPoint,
    DurenStarlike,
    DurenConvex,
    Goodman,
}

#[derive(Args, Debug, Clone)]
pub struct CheckArgs {
    #[arg(long = "in")]
    pub input: PathBuf,
    #[arg(long, value_enum)]
    pub check: CheckName,
    /// Ring samples for the two-point UCV check.
    #[arg(long, default_value_t = 64)]
    pub zeta_samples: usize,
    #[arg(long, default_value_t = 1e-9)]
    pub tol: f64,
    #[command(flatten)]
    pub grid: GridArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum BoundName {
    Theorem2,
    Theorem3,
}

impl BoundName {
    fn kind(self) -> BoundKind {
        match self {
            BoundName::Theorem2 => BoundKind::Starlike,
            BoundName::Theorem3 => BoundKind::Convex,
        }
    }
}

#[derive(Args, Debug, Clone)]
pub struct BoundArgs {
    #[arg(long, value_enum)]
    pub kind: BoundName,
    /// Check this series instead of the generator.
    #[arg(long = "in")]
    pub input: Option<PathBuf>,
    #[arg(long, default_value_t = 1.0)]
    pub alpha: f64,
    #[arg(long, default_value_t = 1.0)]
    pub beta: f64,
    #[arg(long, default_value_t = 1.0)]
    pub mu: f64,
    #[arg(long, default_value = "0.1:0.9:0.1")]
    pub radii: String,
    #[arg(long, default_value_t = THEOREM_ORDER)]
    pub order: usize,
    #[arg(long, default_value_t = 1e-9)]
    pub tol: f64,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Args, Debug, Clone)]
pub struct FoxArgs {
    /// `a1,A1,a2,A2,b1,B1`.
    #[arg(long, conflicts_with = "kind")]
    pub coeffs: Option<String>,
    /// Arguments of ₂Ψ₁, as a list or range.
    #[arg(long, default_value = "0.5")]
    pub z: String,
    /// Evaluate the growth-bound instance at each `--radii` value instead.
    #[arg(long, value_enum)]
    pub kind: Option<BoundName>,
    #[arg(long, default_value_t = 1.0)]
    pub beta: f64,
    #[arg(long, default_value_t = 1.0)]
    pub mu: f64,
    #[arg(long, default_value = "0.5")]
    pub radii: String,
    #[arg(long, default_value_t = 1e-12)]
    pub tol: f64,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Args, Debug, Clone)]
pub struct NormArgs {
    #[arg(long = "in")]
    pub input: PathBuf,
    #[arg(long, value_enum)]
    pub op: Option<Op>,
    #[arg(long, default_value_t = 1.0)]
    pub beta: f64,
    #[command(flatten)]
    pub grid: GridArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum BanachCheck {
    Ucv,
    Theorem4,
    Kernel,
    Sufficient,
    Boundedness,
    Compactness,
    Theorem8,
}

#[derive(Args, Debug, Clone)]
pub struct BanachArgs {
    #[arg(long = "in")]
    pub input: PathBuf,
    #[arg(long, value_enum)]
    pub check: BanachCheck,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = DEFAULT_DIRECTIONS)]
    pub directions: usize,
    /// Ball samples for the sufficient-condition check.
    #[arg(long, default_value_t = 100)]
    pub samples: usize,
    #[arg(long, default_value_t = 1.0)]
    pub alpha: f64,
    #[arg(long, default_value_t = 1.0)]
    pub beta: f64,
    /// Use `z^n` in the slices instead of `z^{μn}`.
    #[arg(long)]
    pub homogeneous: bool,
    /// Per-step coefficient ratio of the compactness sequence.
    #[arg(long, default_value_t = 0.5)]
    pub ratio: f64,
    #[arg(long, default_value_t = 10)]
    pub steps: usize,
    #[arg(long, default_value_t = 1e-9)]
    pub tol: f64,
    #[command(flatten)]
    pub grid: GridArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum SweepCheck {
    Theorem2,
    Theorem3,
    Theorem6,
    Theorem8,
}

#[derive(Args, Debug, Clone)]
pub struct SweepArgs {
    #[arg(long, value_enum)]
    pub check: SweepCheck,
    #[arg(long, default_value = "1")]
    pub alpha: String,
    #[arg(long, default_value = "1")]
    pub beta: String,
    #[arg(long, default_value = "1")]
    pub mu: String,
    #[arg(long, default_value = "0.1:0.9:0.1")]
    pub radii: String,
    #[arg(long, default_value_t = THEOREM_ORDER)]
    pub order: usize,
    #[arg(long, default_value_t = 128)]
    pub angles: usize,
    #[arg(long, default_value_t = 1e-9)]
    pub tol: f64,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
}

#[derive(Args, Debug, Clone)]
pub struct PlotArgs {
    #[arg(long = "in")]
    pub input: PathBuf,
    #[arg(long, default_value = "0.9")]
    pub radii: String,
    /// Points per circle.
    #[arg(long, default_value_t = 256)]
    pub samples: usize,
    #[arg(long, value_enum)]
    pub op: Option<Op>,
    #[arg(long, default_value_t = 1.0)]
    pub beta: f64,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
}

/// Parses `a,b,c` or `start:stop:step` (inclusive of `stop` up to rounding).
/// An empty string is the empty list.
pub fn parse_list(text: &str) -> Result<Vec<f64>> {
    let text = text.trim();
    if text.is_empty() {
        return Ok(Vec::new());
    }
    let num = |s: &str| s.trim().parse::<f64>().map_err(|_| usage(format!("not a number: '{s}'")));
    if text.contains(':') {
        let parts: Vec<&str> = text.split(':').collect();
        let [start, stop, step] = parts[..] else {
            return Err(usage(format!("range must be start:stop:step, got '{text}'")));
        };
        let (start, stop, step) = (num(start)?, num(stop)?, num(step)?);
        if !(step > 0.0) || !start.is_finite() || !stop.is_finite() {
            return Err(usage(format!("bad range '{text}'")));
        }
        let count = ((stop - start) / step + 1e-9).floor();
        if count < 0.0 {
            return Ok(Vec::new());
        }
        // start + k·step, rounded to 12 decimals so 0.1:0.9:0.1 yields 0.3, not 0.30000000000000004
        return Ok((0..=count as usize)
            .map(|k| {
                let x = start + k as f64 * step;
                (x * 1e12).round() / 1e12
            })
            .collect());
    }
    text.split(',').map(num).collect()
}

fn parse_point(text: &str) -> Result<Complex<f64>> {
    let v = parse_list(text)?;
    match v[..] {
        [re] => Ok(Complex::new(re, 0.0)),
        [re, im] => Ok(Complex::new(re, im)),
        _ => Err(usage(format!("point must be 're' or 're,im', got '{text}'"))),
    }
}

fn read_text(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| usage(format!("cannot read {}: {e}", path.display())))
}

fn read_series(path: &Path) -> Result<FracPowerSeries<f64>> {
    FracPowerSeries::from_json(&read_text(path)?)
}

/// Destination for one command's primary output.
struct Sink<'a> {
    path: Option<&'a Path>,
    stdout: &'a mut dyn Write,
}

impl Sink<'_> {
    fn write(&mut self, text: &str) -> Result<()> {
        match self.path {
            Some(p) => fs::write(p, text).map_err(|e| usage(format!("cannot write {}: {e}", p.display()))),
            None => self.stdout.write_all(text.as_bytes()).map_err(|e| usage(format!("cannot write output: {e}"))),
        }
    }
}

fn csv_text<R: Serialize>(header: &[&str], rows: &[R]) -> Result<String> {
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(Vec::new());
    let fail = |e: csv::Error| usage(format!("csv: {e}"));
    w.write_record(header).map_err(fail)?;
    for r in rows {
        w.serialize(r).map_err(fail)?;
    }
    let bytes = w.into_inner().map_err(|e| usage(format!("csv: {e}")))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

fn json_text(value: &impl Serialize) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    s
}

fn report_text(report: &CheckReport, format: Format) -> Result<String> {
    match format {
        Format::Json => Ok(json_text(report)),
        Format::Csv => csv_text(
            &["check", "verdict", "worst_margin", "witness_re", "witness_im", "tail_note"],
            &[(
                &report.check,
                verdict_name(report.verdict),
                report.worst_margin,
                report.witness[0],
                report.witness[1],
                report.tail_note,
            )],
        ),
    }
}

fn verdict_name(v: Verdict) -> &'static str {
    match v {
        Verdict::Pass => "pass",
        Verdict::Fail => "fail",
        Verdict::PremiseNotMet => "premise-not-met",
    }
}

fn emit_report(report: &CheckReport, output: &OutputArgs, stdout: &mut dyn Write) -> Result<i32> {
    let text = report_text(report, output.format)?;
    Sink { path: output.out.as_deref(), stdout }.write(&text)?;
    Ok(report.exit_code())
}

fn opts(tol: f64) -> Result<CheckOptions> {
    if !(tol >= 0.0) || !tol.is_finite() {
        return Err(usage(format!("--tol must be a finite non-negative number, got {tol}")));
    }
    Ok(CheckOptions { tol, ..CheckOptions::default() })
}

fn cmd_gen(a: &GenArgs, stdout: &mut dyn Write) -> Result<i32> {
    let f = koebe_frac(a.alpha, a.mu, a.order)?;
    let text = match a.output.format {
        Format::Json => format!("{}\n", f.to_json()),
        Format::Csv => coeff_table(&f)?,
    };
    Sink { path: a.output.out.as_deref(), stdout }.write(&text)?;
    if a.table {
        stdout.write_all(coeff_table(&f)?.as_bytes()).map_err(|e| usage(e.to_string()))?;
    }
    Ok(0)
}

fn coeff_table(f: &FracPowerSeries<f64>) -> Result<String> {
    let rows: Vec<(usize, f64, f64)> = f.coeffs().iter().enumerate().map(|(i, c)| (i + 1, c.re, c.im)).collect();
    csv_text(&["n", "re", "im"], &rows)
}

fn cmd_apply(a: &ApplyArgs, stdout: &mut dyn Write) -> Result<i32> {
    let f = apply_op(&read_series(&a.input)?, Some(a.op), a.beta)?;
    let text = match a.output.format {
        Format::Json => format!("{}\n", f.to_json()),
        Format::Csv => coeff_table(&f)?,
    };
    Sink { path: a.output.out.as_deref(), stdout }.write(&text)?;
    Ok(0)
}

fn cmd_eval(a: &EvalArgs, stdout: &mut dyn Write) -> Result<i32> {
    let f = read_series(&a.input)?;
    let points: Vec<Complex<f64>> = if a.at.is_empty() {
        a.grid.grid()?.points().map(|(_, _, z)| z).collect()
    } else {
        a.at.iter().map(|s| parse_point(s)).collect::<Result<_>>()?
    };
    let mut rows = Vec::with_capacity(points.len());
    for z in points {
        let j = f.jet_full(z)?;
        rows.push([z.re, z.im, j.value.re, j.value.im, j.d1.re, j.d1.im, j.d2.re, j.d2.im]);
    }
    let text = match a.output.format {
        Format::Json => json_text(
            &rows
                .iter()
                .map(|r| json!({"z": [r[0], r[1]], "value": [r[2], r[3]], "d1": [r[4], r[5]], "d2": [r[6], r[7]]}))
                .collect::<Vec<_>>(),
        ),
        Format::Csv => csv_text(&["re", "im", "value_re", "value_im", "d1_re", "d1_im", "d2_re", "d2_im"], &rows)?,
    };
    Sink { path: a.output.out.as_deref(), stdout }.write(&text)?;
    Ok(0)
}

fn cmd_check(a: &CheckArgs, stdout: &mut dyn Write) -> Result<i32> {
    let f = read_series(&a.input)?;
    let o = opts(a.tol)?;
    let grid = a.grid.grid()?;
    let report = match a.check {
        CheckName::Starlike => is_starlike(&f, &grid, &o)?,
        CheckName::Convex => is_convex(&f, &grid, &o)?,
        CheckName::Ucv => is_ucv(&f, &grid, &o)?,
        CheckName::UcvTwoPoint => ucv_two_point(&f, &grid, a.zeta_samples, &o)?,
        CheckName::DurenStarlike => duren_bound_check(&f, CoeffKind::Starlike, &o),
        CheckName::DurenConvex => duren_bound_check(&f, CoeffKind::Convex, &o),
        CheckName::Goodman => goodman_bound_check(&f, &o),
    };
    emit_report(&report, &a.output, stdout)
}

fn cmd_bound(a: &BoundArgs, stdout: &mut dyn Write) -> Result<i32> {
    let o = opts(a.tol)?;
    let radii = parse_list(&a.radii)?;
    let report = match &a.input {
        Some(path) => verify_integral_bound(a.kind.kind(), &read_series(path)?, a.beta, &radii, &o)?,
        None => match a.kind {
            BoundName::Theorem2 => verify_theorem2(a.alpha, a.beta, a.mu, &radii, a.order, &o)?,
            BoundName::Theorem3 => verify_theorem3(a.alpha, a.beta, a.mu, &radii, a.order, &o)?,
        },
    };
    emit_report(&report, &a.output, stdout)
}

fn cmd_foxwright(a: &FoxArgs, stdout: &mut dyn Write) -> Result<i32> {
    let mut rows: Vec<(f64, f64, f64, usize)> = Vec::new();
    match (a.kind, &a.coeffs) {
        (Some(kind), _) => {
            for r in parse_list(&a.radii)? {
                let v = integral_operator_bound(kind.kind(), a.beta, a.mu, r)?;
                rows.push((r, v.value, v.tail_bound, v.terms));
            }
        }
        (None, Some(text)) => {
            let c = parse_list(text)?;
            let [a1, big_a1, a2, big_a2, b1, big_b1] = c[..] else {
                return Err(usage("--coeffs needs six numbers a1,A1,a2,A2,b1,B1"));
            };
            let p = FoxWrightParams::new([(a1, big_a1), (a2, big_a2)], (b1, big_b1), a.tol)?;
            for z in parse_list(&a.z)? {
                let v = fox_wright_2psi1(&p, z)?;
                rows.push((z, v.value, v.tail_bound, v.terms));
            }
        }
        (None, None) => return Err(usage("give --coeffs or --kind")),
    }
    let text = match a.output.format {
        Format::Json => json_text(
            &rows
                .iter()
                .map(|(z, v, t, n)| json!({"z": z, "value": v, "tail_bound": t, "terms": n}))
                .collect::<Vec<_>>(),
        ),
        Format::Csv => csv_text(&["z", "value", "tail_bound", "terms"], &rows)?,
    };
    Sink { path: a.output.out.as_deref(), stdout }.write(&text)?;
    Ok(0)
}

fn cmd_norm(a: &NormArgs, stdout: &mut dyn Write) -> Result<i32> {
    let f = apply_op(&read_series(&a.input)?, a.op, a.beta)?;
    let e = pre_schwarzian_estimate(&f, &a.grid.grid()?)?;
    let text = match a.output.format {
        Format::Json => json_text(&json!({"value": e.value, "grid_value": e.grid_value, "at": [e.at.re, e.at.im]})),
        Format::Csv => {
            csv_text(&["value", "grid_value", "at_re", "at_im"], &[(e.value, e.grid_value, e.at.re, e.at.im)])?
        }
    };
    Sink { path: a.output.out.as_deref(), stdout }.write(&text)?;
    Ok(0)
}

fn cmd_banach(a: &BanachArgs, stdout: &mut dyn Write) -> Result<i32> {
    let mut model = BanachModel::<f64>::from_json(&read_text(&a.input)?)?;
    if a.homogeneous {
        model = model.with_exponent(SliceExponent::Homogeneous);
    }
    let o = opts(a.tol)?;
    let grid = a.grid.grid()?;
    let dirs = || SliceFamily::sample(&model, a.directions, a.seed);
    let report = match a.check {
        BanachCheck::Ucv => ucv_membership(&model, &dirs()?, &grid, &o)?,
        BanachCheck::Theorem4 => theorem4_check(&model, &dirs()?, &grid, &o)?,
        BanachCheck::Kernel => {
            let k = kernel_directions(&model, a.directions, a.seed);
            if k.is_empty() {
                return Err(usage("the kernel of A is trivial in dimension 1"));
            }
            kernel_vanishing_check(&model, &k, &o)?
        }
        BanachCheck::Sufficient => {
            let w = ball_samples(&model, a.samples, grid.r_max(), a.seed)?;
            sufficient_condition_check(&model, &w, &o)?
        }
        BanachCheck::Boundedness => theorem_boundedness_check(&model, &dirs()?, a.beta, &grid, &o)?,
        BanachCheck::Compactness => {
            let d = dirs()?;
            let seq = geometric_slice_sequence(&model, &d.directions()[0], a.ratio, a.steps)?;
            compactness_decay_check(&seq, a.beta, &grid, &o)?
        }
        BanachCheck::Theorem8 => {
            let d = dirs()?;
            theorem8_check(&model, &d.directions()[0], a.alpha, a.beta, &grid, &o)?
        }
    };
    let report = report.with_param("seed", a.seed);
    emit_report(&report, &a.output, stdout)
}

#[derive(Serialize)]
struct SweepRow {
    check: &'static str,
    alpha: f64,
    beta: f64,
    mu: f64,
    r: f64,
    verdict: &'static str,
    margin: f64,
    witness_re: f64,
    witness_im: f64,
    literal_verdict: &'static str,
}

const SWEEP_HEADER: [&str; 10] =
    ["check", "alpha", "beta", "mu", "r", "verdict", "margin", "witness_re", "witness_im", "literal_verdict"];

/// Family for the quasi-Hadamard rows: coefficients of `I_{β,μ}` applied to
/// the generator, read at `|z| = r` (`p_n = c_n r^{μ(n−1)}`), with `A = 1`.
fn sweep_family(alpha: f64, beta: f64, mu: f64, r: f64, order: usize) -> Result<CoeffFamily<f64>> {
    let g = noor_frac(&koebe_frac(alpha, mu, order)?, beta)?;
    let p = (2..=order).map(|n| g.coeff(n).re * r.powf(mu * (n - 1) as f64)).collect();
    Ok(CoeffFamily { a_value: 1.0, p })
}

fn sweep_one(a: &SweepArgs, alpha: f64, beta: f64, mu: f64, r: f64, o: &CheckOptions) -> Result<SweepRow> {
    let (name, report) = match a.check {
        SweepCheck::Theorem2 => ("theorem2", verify_theorem2(alpha, beta, mu, &[r], a.order, o)?),
        SweepCheck::Theorem3 => ("theorem3", verify_theorem3(alpha, beta, mu, &[r], a.order, o)?),
        SweepCheck::Theorem6 => {
            let fam = sweep_family(alpha, beta, mu, r, a.order)?;
            ("theorem6", quasi_class_check(std::slice::from_ref(&fam), std::slice::from_ref(&fam), o)?)
        }
        SweepCheck::Theorem8 => {
            let model = BanachModel::diagonal(2, vec![0.25], mu)?;
            let grid = DiskGrid::new(vec![r], a.angles)?;
            let e1 = [Complex::new(1.0, 0.0), Complex::new(0.0, 0.0)];
            ("theorem8", theorem8_check(&model, &e1, alpha, beta, &grid, o)?)
        }
    };
    let literal = match report.params.get("literal_pass").and_then(|v| v.as_bool()) {
        Some(true) => "pass",
        Some(false) => "fail",
        None => "",
    };
    Ok(SweepRow {
        check: name,
        alpha,
        beta,
        mu,
        r,
        verdict: verdict_name(report.verdict),
        margin: report.worst_margin,
        witness_re: report.witness[0],
        witness_im: report.witness[1],
        literal_verdict: literal,
    })
}

fn cmd_sweep(a: &SweepArgs, stdout: &mut dyn Write) -> Result<i32> {
    let o = opts(a.tol)?;
    let (alphas, betas, mus, radii) =
        (parse_list(&a.alpha)?, parse_list(&a.beta)?, parse_list(&a.mu)?, parse_list(&a.radii)?);
    let mut rows = Vec::new();
    for &alpha in &alphas {
        for &beta in &betas {
            for &mu in &mus {
                for &r in &radii {
                    rows.push(sweep_one(a, alpha, beta, mu, r, &o)?);
                }
            }
        }
    }
    let text = match a.format {
        Format::Csv => csv_text(&SWEEP_HEADER, &rows)?,
        Format::Json => json_text(&rows),
    };
    Sink { path: a.out.as_deref(), stdout }.write(&text)?;
    let code = if rows.iter().any(|r| r.verdict == "fail") {
        1
    } else if rows.iter().any(|r| r.verdict == "premise-not-met") {
        3
    } else {
        0
    };
    Ok(code)
}

fn cmd_plotdata(a: &PlotArgs, stdout: &mut dyn Write) -> Result<i32> {
    if a.samples == 0 {
        return Err(usage("--samples must be positive"));
    }
    let f = apply_op(&read_series(&a.input)?, a.op, a.beta)?;
    let radii = parse_list(&a.radii)?;
    let mut rows = Vec::with_capacity(radii.len() * a.samples);
    for &r in &radii {
        for k in 0..a.samples {
            let theta = std::f64::consts::TAU * k as f64 / a.samples as f64;
            let w = f.jet_full(Complex::from_polar(r, theta))?.value;
            rows.push((r, theta, w.re, w.im));
        }
    }
    let text = match a.format {
        Format::Csv => csv_text(&["r", "theta", "re", "im"], &rows)?,
        Format::Json => json_text(
            &rows.iter().map(|(r, t, x, y)| json!({"r": r, "theta": t, "re": x, "im": y})).collect::<Vec<_>>(),
        ),
    };
    Sink { path: a.out.as_deref(), stdout }.write(&text)?;
    Ok(0)
}

fn dispatch(cli: &Cli, stdout: &mut dyn Write) -> Result<i32> {
    match &cli.command {
        Command::Gen(a) => cmd_gen(a, stdout),
        Command::Apply(a) => cmd_apply(a, stdout),
        Command::Eval(a) => cmd_eval(a, stdout),
        Command::Check(a) => cmd_check(a, stdout),
        Command::Bound(a) => cmd_bound(a, stdout),
        Command::Foxwright(a) => cmd_foxwright(a, stdout),
        Command::Norm(a) => cmd_norm(a, stdout),
        Command::Banach(a) => cmd_banach(a, stdout),
        Command::Sweep(a) => cmd_sweep(a, stdout),
        Command::Plotdata(a) => cmd_plotdata(a, stdout),
    }
}

fn thread_cap() -> Result<usize> {
    match std::env::var(THREADS_ENV) {
        Err(_) => Ok(0),
        Ok(v) if v.trim().is_empty() => Ok(0),
        Ok(v) => {
            v.trim().parse().map_err(|_| usage(format!("{THREADS_ENV} must be a non-negative integer, got '{v}'")))
        }
    }
}

/// Runs the command line `args` (including the program name) and returns
/// the exit code. Reports go to `stdout` unless `--out` is given; messages
/// go to `stderr`.
pub fn run_cli<I, S>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = write!(stderr, "{e}");
            return if e.use_stderr() { EXIT_USAGE } else { 0 };
        }
    };
    let run = |stdout: &mut dyn Write| -> Result<i32> {
        match thread_cap()? {
            0 => dispatch(&cli, stdout),
            n => {
                let pool = rayon::ThreadPoolBuilder::new()
                    .num_threads(n)
                    .build()
                    .map_err(|e| usage(format!("thread pool: {e}")))?;
                // the pool needs a Send closure, so buffer the output
                let (code, buf) = pool.install(|| {
                    let mut buf = Vec::new();
                    (dispatch(&cli, &mut buf), buf)
                });
                stdout.write_all(&buf).map_err(|e| usage(format!("cannot write output: {e}")))?;
                code
            }
        }
    };
    match run(stdout) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(stderr, "gft-frac: {e}");
            exit_code_for(&e)
        }
    }
}

/// Every library error surfaces as a usage-level failure.
fn exit_code_for(_e: &Error) -> i32 {
    EXIT_USAGE
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lists_and_ranges() {
        assert_eq!(parse_list("").unwrap(), Vec::<f64>::new());
        assert_eq!(parse_list("1, 2.5").unwrap(), vec![1.0, 2.5]);
        assert_eq!(parse_list("0.3:0.9:0.3").unwrap(), vec![0.3, 0.6, 0.9]);
        let r = parse_list("0.1:0.9:0.1").unwrap();
        assert_eq!(r.len(), 9);
        assert_eq!(r[2], 0.3);
        assert!(parse_list("1:0:0.5").unwrap().is_empty());
        assert!(parse_list("1:2").is_err());
        assert!(parse_list("x").is_err());
    }

    #[test]
    fn points() {
        assert_eq!(parse_point("0.5").unwrap(), Complex::new(0.5, 0.0));
        assert_eq!(parse_point("-0.5,0.25").unwrap(), Complex::new(-0.5, 0.25));
        assert!(parse_point("1,2,3").is_err());
    }

    #[test]
    fn help_is_not_an_error() {
        let (mut out, mut err) = (Vec::new(), Vec::new());
        assert_eq!(run_cli(["gft-frac", "--help"], &mut out, &mut err), 0);
        assert_eq!(run_cli(["gft-frac", "frobnicate"], &mut out, &mut err), 2);
    }
}
