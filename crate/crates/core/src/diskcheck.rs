//! Grid checks for the starlike, convex and uniformly convex classes, the
//! classical coefficient lemmas, and the integral-operator growth bounds.
//!
//! Every check returns a [`CheckReport`]: the minimum slack of the tested
//! inequality over the samples, the sample attaining it (ties go to the
//! first sample in `(r, θ)` order), and the inputs echoed as `params`.
//! Grid points are evaluated in parallel and reduced sequentially, so reports
//! are bit-identical from run to run.

use num_complex::Complex;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use crate::error::{domain, usage, Error, Result};
use crate::fracseries::{koebe_frac, DiskGrid, FracPowerSeries, DEFAULT_ORDER};
use crate::operators::noor_frac;
use crate::scalar::Real;
use crate::specialfn::{integral_operator_bound, BoundKind};

/// Outcome of a check.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Pass,
    Fail,
    PremiseNotMet,
}

impl Verdict {
    /// Process exit code: 0 pass, 1 fail, 3 premise not met.
    pub fn exit_code(self) -> i32 {
        match self {
            Verdict::Pass => 0,
            Verdict::Fail => 1,
            Verdict::PremiseNotMet => 3,
        }
    }
}

/// Structured result of a check.
///
/// For grid checks `witness` is the sample `[re, im]`; for coefficient checks
/// it is `[n, 0]`, and for radius sweeps `[r, 0]`. When the premise fails,
/// `worst_margin` is the premise's own worst slack.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckReport {
    pub check: String,
    pub verdict: Verdict,
    pub worst_margin: f64,
    pub witness: [f64; 2],
    pub params: Map<String, Value>,
    pub tail_note: f64,
}

impl CheckReport {
    pub fn new(check: impl Into<String>, verdict: Verdict, worst_margin: f64, witness: [f64; 2]) -> Self {
        Self { check: check.into(), verdict, worst_margin, witness, params: Map::new(), tail_note: 0.0 }
    }

    pub fn with_param(mut self, key: &str, value: impl Into<Value>) -> Self {
        self.params.insert(key.to_owned(), value.into());
        self
    }

    pub fn with_tail_note(mut self, tail: f64) -> Self {
        self.tail_note = tail;
        self
    }

    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }

    pub fn exit_code(&self) -> i32 {
        self.verdict.exit_code()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// Tolerances shared by the checks.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CheckOptions {
    /// Strict inequalities pass at `margin ≥ tol`, non-strict ones at `margin ≥ −tol`.
    pub tol: f64,
    /// Relative slack for premise comparisons that may hold with equality.
    pub coeff_slack: f64,
}

impl Default for CheckOptions {
    fn default() -> Self {
        Self { tol: 1e-9, coeff_slack: 1e-12 }
    }
}

impl CheckOptions {
    pub fn strict(&self, margin: f64) -> Verdict {
        if margin >= self.tol {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }

    pub fn non_strict(&self, margin: f64) -> Verdict {
        if margin >= -self.tol {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }
}

pub(crate) fn degenerate<T: Real>(z: Complex<T>, what: &str) -> Error {
    Error::DegenerateSample { re: z.re.to_f64_lossy(), im: z.im.to_f64_lossy(), what: what.to_owned() }
}

pub(crate) fn witness<T: Real>(z: Complex<T>) -> [f64; 2] {
    [z.re.to_f64_lossy(), z.im.to_f64_lossy()]
}

/// Worst margin over the grid.
#[derive(Clone, Copy, Debug)]
pub(crate) struct GridMin<T> {
    pub margin: T,
    pub at: Complex<T>,
    pub index: usize,
    pub tail: T,
}

/// Evaluates `sample` (returning `(margin, tail)`) at every grid point and
/// takes the minimum; ties keep the earliest point, and the first error in
/// grid order wins.
pub(crate) fn grid_min<T, F>(grid: &DiskGrid<T>, sample: F) -> Result<GridMin<T>>
where
    T: Real,
    F: Fn(Complex<T>) -> Result<(T, T)> + Sync,
{
    let points: Vec<Complex<T>> = grid.points().map(|(_, _, z)| z).collect();
    let values: Vec<Result<(T, T)>> = points.par_iter().map(|&z| sample(z)).collect();
    let mut best: Option<GridMin<T>> = None;
    for (index, (value, &z)) in values.into_iter().zip(&points).enumerate() {
        let (margin, tail) = value?;
        if margin.is_nan() {
            return Err(degenerate(z, "criterion evaluates to NaN"));
        }
        let tail = best.map_or(tail, |b| b.tail.max(tail));
        match &mut best {
            Some(b) if !(margin < b.margin) => b.tail = tail,
            _ => best = Some(GridMin { margin, at: z, index, tail }),
        }
    }
    best.ok_or_else(|| usage("empty grid"))
}

fn grid_params<T: Real>(report: CheckReport, f: &FracPowerSeries<T>, grid: &DiskGrid<T>) -> CheckReport {
    report
        .with_param("mu", f.mu().to_f64_lossy())
        .with_param("N", f.order())
        .with_param("r_max", grid.r_max().to_f64_lossy())
        .with_param("radii", grid.radii().len())
        .with_param("angles", grid.angles())
        .with_param("tail_law", f.tail().is_some())
}

/// `z F″/F′`, failing on a vanishing derivative.
fn q_ratio<T: Real>(f: &FracPowerSeries<T>, z: Complex<T>) -> Result<(Complex<T>, T)> {
    let j = f.jet_full(z)?;
    if j.d1.norm() == T::zero() || !j.d1.norm().is_finite() {
        return Err(degenerate(z, "F'(z) vanishes"));
    }
    Ok((z * j.d2 / j.d1, j.tail))
}

/// `Re(zF′/F) > 0` on the grid.
pub fn is_starlike<T: Real>(f: &FracPowerSeries<T>, grid: &DiskGrid<T>, opts: &CheckOptions) -> Result<CheckReport> {
    let m = grid_min(grid, |z| {
        let j = f.jet_full(z)?;
        if j.value.norm() == T::zero() {
            return Err(degenerate(z, "F(z) vanishes"));
        }
        Ok(((z * j.d1 / j.value).re, j.tail))
    })?;
    let margin = m.margin.to_f64_lossy();
    let r =
        CheckReport::new("starlike", opts.strict(margin), margin, witness(m.at)).with_tail_note(m.tail.to_f64_lossy());
    Ok(grid_params(r, f, grid))
}

/// `Re(1 + zF″/F′) > 0` on the grid.
pub fn is_convex<T: Real>(f: &FracPowerSeries<T>, grid: &DiskGrid<T>, opts: &CheckOptions) -> Result<CheckReport> {
    let m = grid_min(grid, |z| {
        let (q, tail) = q_ratio(f, z)?;
        Ok((T::one() + q.re, tail))
    })?;
    let margin = m.margin.to_f64_lossy();
    let r =
        CheckReport::new("convex", opts.strict(margin), margin, witness(m.at)).with_tail_note(m.tail.to_f64_lossy());
    Ok(grid_params(r, f, grid))
}

/// `Re(1 + Q) ≥ |Q|` with `Q = zF″/F′` on the grid.
pub fn is_ucv<T: Real>(f: &FracPowerSeries<T>, grid: &DiskGrid<T>, opts: &CheckOptions) -> Result<CheckReport> {
    let m = grid_min(grid, |z| {
        let (q, tail) = q_ratio(f, z)?;
        Ok((T::one() + q.re - q.norm(), tail))
    })?;
    let margin = m.margin.to_f64_lossy();
    let r =
        CheckReport::new("ucv", opts.non_strict(margin), margin, witness(m.at)).with_tail_note(m.tail.to_f64_lossy());
    Ok(grid_params(r, f, grid))
}

/// Two-point form `Re{(z − ζ)F″(z)/F′(z) + 1} ≥ 0`.
///
/// `ζ` ranges over `zeta_samples` points on `|ζ| = r_max` plus, for each `z`,
/// the minimizer `ζ* = |z|·conj(T)/|T|` (`T = F″/F′`) of the disk `|ζ| ≤ |z|`,
/// so a pass here implies a pass of [`is_ucv`] on the same grid.
pub fn ucv_two_point<T: Real>(
    f: &FracPowerSeries<T>,
    grid: &DiskGrid<T>,
    zeta_samples: usize,
    opts: &CheckOptions,
) -> Result<CheckReport> {
    if zeta_samples == 0 {
        return Err(usage("ucv_two_point needs at least one zeta sample"));
    }
    let r_max = grid.r_max();
    let ring: Vec<Complex<T>> = (0..zeta_samples)
        .map(|k| Complex::from_polar(r_max, T::PI() * T::lit(2.0) * T::of(k) / T::of(zeta_samples)))
        .collect();
    let points: Vec<Complex<T>> = grid.points().map(|(_, _, z)| z).collect();
    let per_point: Vec<Result<(T, Complex<T>, T)>> = points
        .par_iter()
        .map(|&z| {
            let j = f.jet_full(z)?;
            if j.d1.norm() == T::zero() {
                return Err(degenerate(z, "F'(z) vanishes"));
            }
            let t = j.d2 / j.d1;
            let crit = |zeta: Complex<T>| T::one() + ((z - zeta) * t).re;
            let star = if t.norm() > T::zero() {
                t.conj() * (z.norm() / t.norm())
            } else {
                Complex::new(T::zero(), T::zero())
            };
            let mut best = (crit(star), star);
            for &zeta in &ring {
                let v = crit(zeta);
                if v < best.0 {
                    best = (v, zeta);
                }
            }
            Ok((best.0, best.1, j.tail))
        })
        .collect();
    let mut worst: Option<(T, Complex<T>, Complex<T>)> = None;
    let mut tail = T::zero();
    for (value, &z) in per_point.into_iter().zip(&points) {
        let (v, zeta, t) = value?;
        tail = tail.max(t);
        if worst.is_none_or(|w| v < w.0) {
            worst = Some((v, z, zeta));
        }
    }
    let (v, z, zeta) = worst.expect("grid is non-empty");
    let margin = v.to_f64_lossy();
    let r = CheckReport::new("ucv-two-point", opts.non_strict(margin), margin, witness(z))
        .with_param("zeta_samples", zeta_samples)
        .with_param("zeta_witness", witness(zeta).to_vec())
        .with_tail_note(tail.to_f64_lossy());
    Ok(grid_params(r, f, grid))
}

/// Which coefficient bound the Duren lemma supplies.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CoeffKind {
    /// `|a_n| ≤ n`.
    Starlike,
    /// `|a_n| ≤ 1`.
    Convex,
}

fn coefficient_check<T: Real>(
    name: &str,
    f: &FracPowerSeries<T>,
    bound: impl Fn(usize) -> T,
    opts: &CheckOptions,
) -> CheckReport {
    let top = f.order().max(2);
    let (margin, n) = (2..=top)
        .map(|n| (bound(n) - f.coeff(n).norm(), n))
        .fold(None, |acc: Option<(T, usize)>, (m, n)| match acc {
            Some((best, _)) if !(m < best) => acc,
            _ => Some((m, n)),
        })
        .expect("range is non-empty");
    let margin = margin.to_f64_lossy();
    CheckReport::new(name, opts.non_strict(margin), margin, [n as f64, 0.0])
        .with_param("mu", f.mu().to_f64_lossy())
        .with_param("N", f.order())
}

/// Duren's bounds: `|a_n| ≤ n` (starlike) or `|a_n| ≤ 1` (convex).
pub fn duren_bound_check<T: Real>(f: &FracPowerSeries<T>, kind: CoeffKind, opts: &CheckOptions) -> CheckReport {
    let r = match kind {
        CoeffKind::Starlike => coefficient_check("duren-starlike", f, |n| T::of(n), opts),
        CoeffKind::Convex => coefficient_check("duren-convex", f, |_| T::one(), opts),
    };
    r.with_param("kind", serde_json::to_value(kind).expect("kind serializes"))
}

/// Goodman's bound `|a_n| ≤ 1/n`.
pub fn goodman_bound_check<T: Real>(f: &FracPowerSeries<T>, opts: &CheckOptions) -> CheckReport {
    coefficient_check("goodman", f, |n| T::one() / T::of(n), opts)
}

/// One row of a premise table: `ratio = lhs/rhs` and both readings of `lhs < rhs`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PremiseRow<T> {
    pub n: usize,
    pub ratio: T,
    pub strict: bool,
    pub non_strict: bool,
}

fn premise_rows<T: Real>(alpha: T, order: usize, extra_n: bool, slack: f64) -> Result<Vec<PremiseRow<T>>> {
    if !(alpha >= T::one()) || !alpha.is_finite() {
        return Err(domain(format!("alpha must be a finite real >= 1, got {alpha}")));
    }
    let slack = T::lit(slack);
    // (α)_{n−1}/(n−1)! by running ratio, divided by n for the n! comparison
    let mut ratio = T::one();
    Ok((2..=order)
        .map(|n| {
            ratio = ratio * (alpha + T::of(n - 2)) / T::of(n - 1);
            let r = if extra_n { ratio / T::of(n) } else { ratio };
            PremiseRow { n, ratio: r, strict: r < T::one() - slack, non_strict: r <= T::one() + slack }
        })
        .collect())
}

/// `(α)_{n−1} < n!` for each `2 ≤ n ≤ N`.
pub fn theorem2_premise<T: Real>(alpha: T, order: usize) -> Result<Vec<PremiseRow<T>>> {
    premise_rows(alpha, order, true, CheckOptions::default().coeff_slack)
}

/// `(α)_{n−1} < (n−1)!` for each `2 ≤ n ≤ N`.
pub fn theorem3_premise<T: Real>(alpha: T, order: usize) -> Result<Vec<PremiseRow<T>>> {
    premise_rows(alpha, order, false, CheckOptions::default().coeff_slack)
}

fn check_radii<T: Real>(radii: &[T]) -> Result<()> {
    if radii.is_empty() {
        return Err(usage("need at least one radius"));
    }
    if let Some(r) = radii.iter().find(|r| !(**r > T::zero() && **r < T::one())) {
        return Err(domain(format!("radii must lie in (0, 1), got {r}")));
    }
    Ok(())
}

/// `Σ_{n≥2} |b_n| r^{μn} ≤ bound(r)` for `b = I_{β,μ} F`, at each radius.
///
/// The verdict uses the stored terms `2 ≤ n ≤ N`. `params` also carries the
/// full-series margin (stored terms plus the tail law, when present), the
/// literal form with the leading `r` on the left, and whether the per-radius
/// verdicts are monotone in `r`.
pub fn verify_integral_bound<T: Real>(
    kind: BoundKind,
    f: &FracPowerSeries<T>,
    beta: T,
    radii: &[T],
    opts: &CheckOptions,
) -> Result<CheckReport> {
    check_radii(radii)?;
    let transformed = noor_frac(f, beta)?;
    let mu = f.mu();
    let mut worst: Option<(f64, f64)> = None;
    let mut worst_full = f64::INFINITY;
    let mut worst_literal = f64::INFINITY;
    let mut tail_note = 0.0f64;
    let mut rows: Vec<(f64, bool)> = Vec::with_capacity(radii.len());
    for &r in radii {
        let (stored, tail) = transformed.radial_abs_sums(r)?;
        let bound = integral_operator_bound(kind, beta, mu, r)?;
        let margin = (bound.value - stored).to_f64_lossy();
        worst_full = worst_full.min((bound.value - stored - tail).to_f64_lossy());
        worst_literal = worst_literal.min((bound.value - stored - r).to_f64_lossy());
        tail_note = tail_note.max(tail.to_f64_lossy());
        if worst.is_none_or(|(m, _)| margin < m) {
            worst = Some((margin, r.to_f64_lossy()));
        }
        rows.push((r.to_f64_lossy(), opts.non_strict(margin) == Verdict::Pass));
    }
    let (margin, at) = worst.expect("radii are non-empty");
    rows.sort_by(|a, b| a.0.total_cmp(&b.0));
    // a pass at r2 must come with passes at every smaller sampled radius
    let monotone = rows.iter().rev().skip_while(|(_, ok)| !ok).all(|(_, ok)| *ok);
    let name = match kind {
        BoundKind::Starlike => "theorem2",
        BoundKind::Convex => "theorem3",
    };
    Ok(CheckReport::new(name, opts.non_strict(margin), margin, [at, 0.0])
        .with_param("beta", beta.to_f64_lossy())
        .with_param("mu", mu.to_f64_lossy())
        .with_param("N", f.order())
        .with_param("radii", radii.iter().map(|r| r.to_f64_lossy()).collect::<Vec<_>>())
        .with_param("full_series_margin", worst_full)
        .with_param("full_series_pass", opts.non_strict(worst_full) == Verdict::Pass)
        .with_param("literal_margin", worst_literal)
        .with_param("literal_pass", opts.non_strict(worst_literal) == Verdict::Pass)
        .with_param("monotone_in_r", monotone)
        .with_tail_note(tail_note))
}

fn verify_theorem<T: Real>(
    kind: BoundKind,
    alpha: T,
    beta: T,
    mu: T,
    radii: &[T],
    order: usize,
    opts: &CheckOptions,
) -> Result<CheckReport> {
    let rows = match kind {
        BoundKind::Starlike => theorem2_premise(alpha, order)?,
        BoundKind::Convex => theorem3_premise(alpha, order)?,
    };
    let strict = rows.iter().all(|r| r.strict);
    let non_strict = rows.iter().all(|r| r.non_strict);
    let premise_worst = rows.iter().fold(None, |acc: Option<(T, usize)>, r| {
        let m = T::one() - r.ratio;
        match acc {
            Some((best, _)) if !(m < best) => acc,
            _ => Some((m, r.n)),
        }
    });
    let with_premise = |report: CheckReport| {
        report
            .with_param("alpha", alpha.to_f64_lossy())
            .with_param("premise_strict", strict)
            .with_param("premise_non_strict", non_strict)
    };
    if !non_strict {
        let (m, n) = premise_worst.expect("a failing row exists");
        let name = match kind {
            BoundKind::Starlike => "theorem2",
            BoundKind::Convex => "theorem3",
        };
        let report = CheckReport::new(name, Verdict::PremiseNotMet, m.to_f64_lossy(), [n as f64, 0.0])
            .with_param("beta", beta.to_f64_lossy())
            .with_param("mu", mu.to_f64_lossy())
            .with_param("N", order);
        return Ok(with_premise(report));
    }
    let f = koebe_frac(alpha, mu, order)?;
    Ok(with_premise(verify_integral_bound(kind, &f, beta, radii, opts)?))
}

/// Growth bound of `I_{β,μ}F` for the generator `F = koebe_frac(α, μ, N)`
/// under the starlike premise `(α)_{n−1} < n!`.
pub fn verify_theorem2<T: Real>(
    alpha: T,
    beta: T,
    mu: T,
    radii: &[T],
    order: usize,
    opts: &CheckOptions,
) -> Result<CheckReport> {
    verify_theorem(BoundKind::Starlike, alpha, beta, mu, radii, order, opts)
}

/// Same under the convex premise `(α)_{n−1} < (n−1)!` with the convex bound.
pub fn verify_theorem3<T: Real>(
    alpha: T,
    beta: T,
    mu: T,
    radii: &[T],
    order: usize,
    opts: &CheckOptions,
) -> Result<CheckReport> {
    verify_theorem(BoundKind::Convex, alpha, beta, mu, radii, order, opts)
}

/// Default truncation for the theorem checks.
pub const THEOREM_ORDER: usize = DEFAULT_ORDER;

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fracseries::koebe_frac;

    fn c(re: f64, im: f64) -> Complex<f64> {
        Complex::new(re, im)
    }

    fn opts() -> CheckOptions {
        CheckOptions::default()
    }

    fn grid() -> DiskGrid<f64> {
        DiskGrid::default()
    }

    fn two_term(a2: f64) -> FracPowerSeries<f64> {
        FracPowerSeries::from_real_higher(1.0, [a2]).unwrap()
    }

    #[test]
    fn starlike_examples() {
        let k = koebe_frac(2.0, 1.0, 64).unwrap();
        assert!(is_starlike(&k, &grid(), &opts()).unwrap().passed());
        let id = FracPowerSeries::identity(1.0, 8).unwrap();
        let r = is_starlike(&id, &grid(), &opts()).unwrap();
        assert!(r.passed());
        assert!((r.worst_margin - 1.0).abs() < 1e-15);
        let g = DiskGrid::with_rmax(0.95, 128).unwrap();
        let bad = is_starlike(&two_term(5.0), &g, &opts());
        // z + 5z² vanishes at z = −0.2, which the grid samples
        match bad {
            Ok(r) => assert_eq!(r.verdict, Verdict::Fail),
            Err(Error::DegenerateSample { .. }) => {}
            Err(e) => panic!("unexpected {e}"),
        }
    }

    #[test]
    fn starlike_oracle_on_two_term_series() {
        // brute force Re(zF'/F) for z + 5z² away from its zero
        let f = two_term(5.0);
        let g = DiskGrid::new(vec![0.1, 0.3, 0.5, 0.95], 64).unwrap();
        let r = is_starlike(&f, &g, &opts()).unwrap();
        let mut oracle = f64::INFINITY;
        for (_, _, z) in g.points() {
            let v = (z * (1.0 + 10.0 * z) / (z + 5.0 * z * z)).re;
            oracle = oracle.min(v);
        }
        assert_eq!(r.verdict, Verdict::Fail);
        assert!((r.worst_margin - oracle).abs() < 1e-12);
    }

    #[test]
    fn convex_examples() {
        let id = FracPowerSeries::identity(1.0, 8).unwrap();
        let r = is_convex(&id, &grid(), &opts()).unwrap();
        assert!(r.passed() && (r.worst_margin - 1.0).abs() < 1e-15);
        assert!(is_convex(&koebe_frac(1.0, 1.0, 64).unwrap(), &grid(), &opts()).unwrap().passed());
        let k2 = koebe_frac(2.0, 1.0, 64).unwrap();
        let g = DiskGrid::with_rmax(0.6, 128).unwrap();
        let r = is_convex(&k2, &g, &opts()).unwrap();
        assert_eq!(r.verdict, Verdict::Fail);
        // witness sits on the negative real axis: 1 + zk''/k' = (1 + 4z + z²)/(1 − z²)
        let z = c(r.witness[0], r.witness[1]);
        let exact = ((1.0 + 4.0 * z + z * z) / (1.0 - z * z)).re;
        assert!((r.worst_margin - exact).abs() < 1e-10);
    }

    #[test]
    fn ucv_examples() {
        let id = FracPowerSeries::identity(1.0, 8).unwrap();
        assert_eq!(is_ucv(&id, &grid(), &opts()).unwrap().worst_margin, 1.0);
        assert_eq!(is_ucv(&koebe_frac(2.0, 1.0, 64).unwrap(), &grid(), &opts()).unwrap().verdict, Verdict::Fail);
        // z + z²/4 is uniformly convex only for |z| < 2/3; 1/6 is the threshold on the whole disk
        assert_eq!(is_ucv(&two_term(0.25), &grid(), &opts()).unwrap().verdict, Verdict::Fail);
        let inner = DiskGrid::with_rmax(0.65, 128).unwrap();
        assert!(is_ucv(&two_term(0.25), &inner, &opts()).unwrap().passed());
        assert!(is_ucv(&two_term(1.0 / 6.0), &grid(), &opts()).unwrap().passed());
    }

    #[test]
    fn two_point_examples() {
        let id = FracPowerSeries::identity(1.0, 8).unwrap();
        assert!(ucv_two_point(&id, &grid(), 32, &opts()).unwrap().passed());
        let r = ucv_two_point(&two_term(0.6), &grid(), 32, &opts()).unwrap();
        assert_eq!(r.verdict, Verdict::Fail);
        assert!(r.params["zeta_witness"].is_array());
        assert!(ucv_two_point(&id, &grid(), 0, &opts()).is_err());
    }

    #[test]
    fn two_point_implies_one_point() {
        let g = DiskGrid::with_rmax(0.9, 32).unwrap();
        for a2 in [0.05, 0.1, 1.0 / 6.0, 0.2, 0.3] {
            let f = two_term(a2);
            let two = ucv_two_point(&f, &g, 16, &opts()).unwrap();
            let one = is_ucv(&f, &g, &opts()).unwrap();
            assert!(two.worst_margin <= one.worst_margin + 1e-12);
            if two.passed() {
                assert!(one.passed());
            }
        }
    }

    #[test]
    fn coefficient_lemmas() {
        let k2 = koebe_frac(2.0, 1.0, 32).unwrap();
        let r = duren_bound_check(&k2, CoeffKind::Starlike, &opts());
        assert!(r.passed() && r.worst_margin == 0.0);
        let k1 = koebe_frac(1.0, 1.0, 32).unwrap();
        let r = duren_bound_check(&k1, CoeffKind::Convex, &opts());
        assert!(r.passed() && r.worst_margin == 0.0);
        let bad = FracPowerSeries::from_real_higher(1.0, [0.0, 3.5]).unwrap();
        let r = duren_bound_check(&bad, CoeffKind::Starlike, &opts());
        assert_eq!(r.verdict, Verdict::Fail);
        assert_eq!(r.witness, [3.0, 0.0]);

        let g = noor_frac(&k1, 1.0).unwrap();
        let r = goodman_bound_check(&g, &opts());
        assert!(r.passed() && r.worst_margin == 0.0);
        assert!(goodman_bound_check(&FracPowerSeries::identity(1.0, 4).unwrap(), &opts()).passed());
        let r = goodman_bound_check(&two_term(0.6), &opts());
        assert_eq!(r.verdict, Verdict::Fail);
        assert!((r.worst_margin + 0.1).abs() < 1e-15);
    }

    fn loop_ratio(alpha: f64, n: usize, with_n: bool) -> f64 {
        let poch: f64 = (0..n - 1).map(|j| alpha + j as f64).product();
        let fact: f64 = (1..n).map(|j| j as f64).product();
        poch / fact / if with_n { n as f64 } else { 1.0 }
    }

    #[test]
    fn premise_tables() {
        assert!(theorem2_premise(1.0, 30).unwrap().iter().all(|r| r.strict));
        let two = theorem2_premise(2.0, 10).unwrap();
        assert!(two.iter().all(|r| !r.strict && r.non_strict));
        let rows = theorem2_premise(1.5, 20).unwrap();
        for r in &rows {
            assert!(r.strict);
            assert!((r.ratio - loop_ratio(1.5, r.n, true)).abs() < 1e-14);
        }
        let three = theorem3_premise(1.0, 10).unwrap();
        assert!(three.iter().all(|r| !r.strict && r.non_strict));
        assert!(theorem3_premise(1.2, 5).unwrap().iter().all(|r| !r.non_strict));
        assert!(theorem2_premise(0.5, 5).is_err());
    }

    #[test]
    fn theorem2_examples() {
        let r = verify_theorem2(1.0, 1.0, 1.0, &[0.5], 64, &opts()).unwrap();
        assert!(r.passed());
        // tail of Σ_{n≥2} rⁿ/n at r = 1/2 is −ln(1/2) − 1/2
        let full = 0.5 - (-(0.5f64.ln()) - 0.5);
        assert!((r.params["full_series_margin"].as_f64().unwrap() - full).abs() < 1e-12);
        let r = verify_theorem2(1.0, 2.0, 2.0, &[0.9], 64, &opts()).unwrap();
        assert!(r.passed());
        let r = verify_theorem2(3.0, 1.0, 1.0, &[0.5], 64, &opts()).unwrap();
        assert_eq!(r.verdict, Verdict::PremiseNotMet);
        assert_eq!(r.exit_code(), 3);
    }

    #[test]
    fn theorem3_examples() {
        let r = verify_theorem3(1.0, 1.0, 1.0, &[0.5], 64, &opts()).unwrap();
        assert!(r.passed());
        assert_eq!(r.params["premise_strict"], Value::Bool(false));
        let id = FracPowerSeries::identity(1.0, 16).unwrap();
        let r = verify_integral_bound(BoundKind::Convex, &id, 1.0, &[0.2, 0.7], &opts()).unwrap();
        assert!(r.passed());
        let r = verify_theorem3(1.0, 3.0, 1.5, &[0.3, 0.6, 0.9], 64, &opts()).unwrap();
        assert!(r.passed());
        assert_eq!(r.params["monotone_in_r"], Value::Bool(true));
    }

    #[test]
    fn report_json_shape() {
        let id = FracPowerSeries::identity(1.0, 4).unwrap();
        let r = is_starlike(&id, &DiskGrid::with_rmax(0.5, 8).unwrap(), &opts()).unwrap();
        let v: Value = serde_json::from_str(&r.to_json()).unwrap();
        assert_eq!(v["check"], "starlike");
        assert_eq!(v["verdict"], "pass");
        assert!(v["witness"].as_array().unwrap().len() == 2);
        let back: CheckReport = serde_json::from_str(&r.to_json()).unwrap();
        assert_eq!(back, r);
        assert_eq!(serde_json::to_value(Verdict::PremiseNotMet).unwrap(), "premise-not-met");
    }

    #[test]
    fn witness_tie_breaks_to_first_sample() {
        // identity series: every sample ties at margin 1
        let id = FracPowerSeries::identity(1.0, 4).unwrap();
        let g = DiskGrid::new(vec![0.2, 0.4], 8).unwrap();
        let r = is_convex(&id, &g, &opts()).unwrap();
        assert_eq!(r.witness, [0.2, 0.0]);
    }

    #[test]
    fn reports_are_reproducible() {
        let k = koebe_frac(2.0, 1.0, 64).unwrap();
        let a = is_convex(&k, &grid(), &opts()).unwrap();
        let b = is_convex(&k, &grid(), &opts()).unwrap();
        assert_eq!(a.to_json(), b.to_json());
        assert_eq!(a.worst_margin.to_bits(), b.worst_margin.to_bits());
    }
}
