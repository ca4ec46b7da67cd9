//! Finite-dimensional model of a vector-valued analytic function
//! `F(w) = A(w) + Σ_{n=2..N} P_n(w)` on `ℂ^d` (`d ≤ 8`).
//!
//! `A` is a linear functional `A(w) = Σ c_i w_i` and each `P_n` is homogeneous
//! of degree `n`. Everything checkable happens on one-variable slices
//! `F_a(z) = z + Σ P_n(a)/A(a) z^{μn}` along unit directions `a` with
//! `A(a) ≠ 0`; directions with `A(a) = 0` are handled by
//! [`kernel_vanishing_check`].

use std::fmt;
use std::sync::Arc;

use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::diskcheck::{degenerate, grid_min, is_ucv, witness, CheckOptions, CheckReport, Verdict};
use crate::error::{domain, usage, Error, Result};
use crate::fracseries::{DiskGrid, FracPowerSeries};
use crate::operators::{noor_frac, psi_bound_coefficient, psi_monotone_until, psi_weight};
use crate::scalar::Real;

/// Largest supported dimension.
pub const MAX_DIM: usize = 8;
/// Directions with `|A(a)|` at or below this are kernel directions.
pub const KERNEL_THRESHOLD: f64 = 1e-9;
/// Default number of sampled slice directions.
pub const DEFAULT_DIRECTIONS: usize = 64;

const UNIT_TOL: f64 = 1e-12;
const HOMOGENEITY_TOL: f64 = 1e-10;
const NEARBY_STEP: f64 = 1e-3;
const REFINE_STEPS: usize = 16;

/// Norm defining the unit sphere the directions live on.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum NormKind {
    #[default]
    Euclidean,
    Max,
}

impl NormKind {
    pub fn of<T: Real>(self, w: &[Complex<T>]) -> T {
        match self {
            NormKind::Euclidean => w.iter().map(|x| x.norm_sqr()).fold(T::zero(), |a, b| a + b).sqrt(),
            NormKind::Max => w.iter().map(|x| x.norm()).fold(T::zero(), T::max),
        }
    }
}

/// Exponent used by the slice series.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SliceExponent {
    /// `z^{μn}` with the model's `μ`.
    #[default]
    Fractional,
    /// `z^n`, which is what homogeneity of `P_n` actually produces.
    Homogeneous,
}

/// Evaluator `(n, w) ↦ P_n(w)`.
pub type PolyFn<T> = Arc<dyn Fn(usize, &[Complex<T>]) -> Complex<T> + Send + Sync>;

/// The homogeneous family `{P_n}`, `n = 2..=N`; `p[0]` belongs to `n = 2`.
#[derive(Clone)]
pub enum PolyFamily<T> {
    /// `P_n(w) = p_n w_1^n`.
    Diagonal(Vec<T>),
    /// `P_n(w) = p_n A(w)^n`, with `A` as given at model construction.
    APower(Vec<T>),
    /// Arbitrary evaluator for `2 ≤ n ≤ top`.
    Custom { top: usize, eval: PolyFn<T> },
}

impl<T: fmt::Debug> fmt::Debug for PolyFamily<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PolyFamily::Diagonal(p) => f.debug_tuple("Diagonal").field(p).finish(),
            PolyFamily::APower(p) => f.debug_tuple("APower").field(p).finish(),
            PolyFamily::Custom { top, .. } => f.debug_struct("Custom").field("top", top).finish_non_exhaustive(),
        }
    }
}

impl<T: Real> PolyFamily<T> {
    /// Highest degree `N` (1 when the family is empty).
    pub fn top(&self) -> usize {
        match self {
            PolyFamily::Diagonal(p) | PolyFamily::APower(p) => p.len() + 1,
            PolyFamily::Custom { top, .. } => *top,
        }
    }
}

/// `F(w) = A(w) + Σ P_n(w)` on `ℂ^d`.
#[derive(Clone, Debug)]
pub struct BanachModel<T: Real> {
    functional: Vec<Complex<T>>,
    poly_functional: Vec<Complex<T>>,
    polys: PolyFamily<T>,
    poly_scale: Complex<T>,
    mu: T,
    norm: NormKind,
    exponent: SliceExponent,
}

fn cz<T: Real>() -> Complex<T> {
    Complex::new(T::zero(), T::zero())
}

fn dot<T: Real>(c: &[Complex<T>], w: &[Complex<T>]) -> Complex<T> {
    c.iter().zip(w).fold(cz(), |acc, (ci, wi)| acc + ci * wi)
}

fn gaussian_vector<T: Real>(rng: &mut ChaCha8Rng, d: usize) -> Vec<Complex<T>> {
    (0..d)
        .map(|_| {
            let re: f64 = StandardNormal.sample(rng);
            let im: f64 = StandardNormal.sample(rng);
            Complex::new(T::lit(re), T::lit(im))
        })
        .collect()
}

impl<T: Real> BanachModel<T> {
    pub fn new(functional: Vec<Complex<T>>, polys: PolyFamily<T>, mu: T, norm: NormKind) -> Result<Self> {
        let d = functional.len();
        if d == 0 || d > MAX_DIM {
            return Err(usage(format!("dimension must lie in 1..={MAX_DIM}, got {d}")));
        }
        if functional.iter().all(|c| c.norm() == T::zero()) {
            return Err(domain("the linear functional A must be nonzero"));
        }
        if functional.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
            return Err(usage("functional coefficients must be finite"));
        }
        if !(mu >= T::one()) || !mu.is_finite() {
            return Err(domain(format!("mu must be a finite real >= 1, got {mu}")));
        }
        if let PolyFamily::Diagonal(p) | PolyFamily::APower(p) = &polys {
            if p.iter().any(|x| !x.is_finite()) {
                return Err(usage("polynomial coefficients must be finite"));
            }
        }
        let model = Self {
            poly_functional: functional.clone(),
            functional,
            polys,
            poly_scale: Complex::new(T::one(), T::zero()),
            mu,
            norm,
            exponent: SliceExponent::Fractional,
        };
        model.homogeneity_self_test()?;
        Ok(model)
    }

    /// Diagonal model `A(w) = w_1`, `P_n(w) = p_n w_1^n` in dimension `d`.
    pub fn diagonal(d: usize, p: Vec<T>, mu: T) -> Result<Self> {
        let mut c = vec![cz(); d.max(1)];
        c[0] = Complex::new(T::one(), T::zero());
        Self::new(c, PolyFamily::Diagonal(p), mu, NormKind::Euclidean)
    }

    pub fn with_exponent(mut self, exponent: SliceExponent) -> Self {
        self.exponent = exponent;
        self
    }

    fn homogeneity_self_test(&self) -> Result<()> {
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
        let tol = T::lit(HOMOGENEITY_TOL);
        for _ in 0..3 {
            let w = gaussian_vector::<T>(&mut rng, self.dim());
            let lambda = Complex::from_polar(T::lit(rng.random_range(0.3..1.7)), T::lit(rng.random_range(-3.0..3.0)));
            let lw: Vec<_> = w.iter().map(|x| x * lambda).collect();
            for n in 2..=self.order() {
                let lhs = self.poly(n, &lw);
                let rhs = self.poly(n, &w) * lambda.powu(n as u32);
                let scale = lhs.norm().max(rhs.norm()).max(T::min_positive_value());
                if (lhs - rhs).norm() > tol * scale {
                    return Err(usage(format!("P_{n} is not homogeneous of degree {n}")));
                }
            }
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.functional.len()
    }

    pub fn functional(&self) -> &[Complex<T>] {
        &self.functional
    }

    pub fn polys(&self) -> &PolyFamily<T> {
        &self.polys
    }

    pub fn mu(&self) -> T {
        self.mu
    }

    pub fn norm_kind(&self) -> NormKind {
        self.norm
    }

    pub fn exponent(&self) -> SliceExponent {
        self.exponent
    }

    /// Highest polynomial degree `N`.
    pub fn order(&self) -> usize {
        self.polys.top()
    }

    pub fn norm_of(&self, w: &[Complex<T>]) -> T {
        self.norm.of(w)
    }

    pub fn a_value(&self, w: &[Complex<T>]) -> Complex<T> {
        dot(&self.functional, w)
    }

    /// `P_n(w)`; zero outside `2..=N`.
    pub fn poly(&self, n: usize, w: &[Complex<T>]) -> Complex<T> {
        if n < 2 || n > self.order() {
            return cz();
        }
        let raw = match &self.polys {
            PolyFamily::Diagonal(p) => w[0].powu(n as u32) * p[n - 2],
            PolyFamily::APower(p) => dot(&self.poly_functional, w).powu(n as u32) * p[n - 2],
            PolyFamily::Custom { eval, .. } => eval(n, w),
        };
        raw * self.poly_scale
    }

    /// `F(w) = A(w) + Σ P_n(w)`.
    pub fn eval(&self, w: &[Complex<T>]) -> Complex<T> {
        (2..=self.order()).fold(self.a_value(w), |acc, n| acc + self.poly(n, w))
    }

    /// The same model with `A` and every `P_n` multiplied by `lambda`.
    pub fn scaled(&self, lambda: Complex<T>) -> Result<Self> {
        if lambda.norm() == T::zero() {
            return Err(usage("scale factor must be nonzero"));
        }
        let mut out = self.clone();
        out.functional = self.functional.iter().map(|c| c * lambda).collect();
        out.poly_scale = self.poly_scale * lambda;
        Ok(out)
    }

    fn check_direction(&self, a: &[Complex<T>]) -> Result<()> {
        if a.len() != self.dim() {
            return Err(usage(format!("direction has dimension {}, model has {}", a.len(), self.dim())));
        }
        let n = self.norm_of(a);
        if (n - T::one()).abs() > T::lit(UNIT_TOL) {
            return Err(usage(format!("direction must have unit norm, got {n}")));
        }
        Ok(())
    }

    /// Slice `z + Σ P_n(a)/A(a) z^{μn}` (or `z^n`, per the exponent setting).
    pub fn slice(&self, a: &[Complex<T>]) -> Result<FracPowerSeries<T>> {
        self.check_direction(a)?;
        let av = self.a_value(a);
        if av.norm() <= T::lit(KERNEL_THRESHOLD) {
            return Err(Error::KernelDirection(av.norm().to_f64_lossy()));
        }
        let mu = match self.exponent {
            SliceExponent::Fractional => self.mu,
            SliceExponent::Homogeneous => T::one(),
        };
        FracPowerSeries::from_higher(mu, (2..=self.order()).map(|n| self.poly(n, a) / av))
    }

    pub fn to_doc(&self) -> Result<ModelDoc> {
        let (kind, p) = match &self.polys {
            PolyFamily::Diagonal(p) => (PolyKind::Diagonal, p),
            PolyFamily::APower(p) => (PolyKind::APower, p),
            PolyFamily::Custom { .. } => return Err(usage("custom polynomial families have no document form")),
        };
        if self.poly_scale != Complex::new(T::one(), T::zero()) {
            return Err(usage("rescaled models have no document form"));
        }
        Ok(ModelDoc {
            d: self.dim(),
            functional: self.functional.iter().map(|c| [c.re.to_f64_lossy(), c.im.to_f64_lossy()]).collect(),
            mu: self.mu.to_f64_lossy(),
            norm: self.norm,
            polys: PolysDoc { kind, p: p.iter().map(|x| x.to_f64_lossy()).collect() },
        })
    }

    pub fn from_doc(doc: &ModelDoc) -> Result<Self> {
        if doc.d != doc.functional.len() {
            return Err(usage(format!("model declares d = {} but A has {} entries", doc.d, doc.functional.len())));
        }
        let conv = |x: f64| T::from_f64(x).ok_or_else(|| usage(format!("{x} is not representable")));
        let functional = doc
            .functional
            .iter()
            .map(|[re, im]| Ok(Complex::new(conv(*re)?, conv(*im)?)))
            .collect::<Result<Vec<_>>>()?;
        let p = doc.polys.p.iter().map(|&x| conv(x)).collect::<Result<Vec<_>>>()?;
        let polys = match doc.polys.kind {
            PolyKind::Diagonal => PolyFamily::Diagonal(p),
            PolyKind::APower => PolyFamily::APower(p),
        };
        Self::new(functional, polys, conv(doc.mu)?, doc.norm)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(&self.to_doc()?).expect("model document serializes"))
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let doc: ModelDoc = serde_json::from_str(text).map_err(|e| usage(format!("bad model document: {e}")))?;
        Self::from_doc(&doc)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PolyKind {
    Diagonal,
    APower,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PolysDoc {
    pub kind: PolyKind,
    pub p: Vec<f64>,
}

/// JSON form `{"d", "A": [[re, im], ...], "mu", "norm", "polys": {"kind", "p"}}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ModelDoc {
    pub d: usize,
    #[serde(rename = "A")]
    pub functional: Vec<[f64; 2]>,
    pub mu: f64,
    pub norm: NormKind,
    pub polys: PolysDoc,
}

/// Unit directions `a` with `|A(a)| > 1e-9`.
#[derive(Clone, Debug, PartialEq)]
pub struct SliceFamily<T> {
    directions: Vec<Vec<Complex<T>>>,
}

impl<T: Real> SliceFamily<T> {
    /// Validates explicit directions.
    pub fn new(model: &BanachModel<T>, directions: Vec<Vec<Complex<T>>>) -> Result<Self> {
        if directions.is_empty() {
            return Err(usage("need at least one direction"));
        }
        for a in &directions {
            model.check_direction(a)?;
            let av = model.a_value(a).norm();
            if av <= T::lit(KERNEL_THRESHOLD) {
                return Err(Error::KernelDirection(av.to_f64_lossy()));
            }
        }
        Ok(Self { directions })
    }

    /// `count` seeded Gaussian directions normalized in the model's norm.
    pub fn sample(model: &BanachModel<T>, count: usize, seed: u64) -> Result<Self> {
        if count == 0 {
            return Err(usage("need at least one direction"));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut directions = Vec::with_capacity(count);
        while directions.len() < count {
            let v = gaussian_vector::<T>(&mut rng, model.dim());
            let n = model.norm_of(&v);
            if n <= T::zero() {
                continue;
            }
            let a: Vec<_> = v.iter().map(|x| x / n).collect();
            if model.a_value(&a).norm() > T::lit(KERNEL_THRESHOLD) {
                directions.push(a);
            }
        }
        Ok(Self { directions })
    }

    pub fn directions(&self) -> &[Vec<Complex<T>>] {
        &self.directions
    }

    pub fn len(&self) -> usize {
        self.directions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.directions.is_empty()
    }
}

/// Seeded unit directions in the kernel of `A`: `v − (c·v) c̄/‖c‖²`,
/// normalized. Empty in dimension 1, where the kernel is trivial.
pub fn kernel_directions<T: Real>(model: &BanachModel<T>, count: usize, seed: u64) -> Vec<Vec<Complex<T>>> {
    if model.dim() < 2 {
        return Vec::new();
    }
    let c = model.functional();
    let c2 = c.iter().map(|x| x.norm_sqr()).fold(T::zero(), |a, b| a + b);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let v = gaussian_vector::<T>(&mut rng, model.dim());
        let k = dot(c, &v) / c2;
        let a: Vec<_> = v.iter().zip(c).map(|(vi, ci)| vi - ci.conj() * k).collect();
        let n = model.norm_of(&a);
        if n > T::lit(1e-6) {
            out.push(a.iter().map(|x| x / n).collect());
        }
    }
    out
}

fn direction_json<T: Real>(a: &[Complex<T>]) -> serde_json::Value {
    a.iter().map(|x| witness(*x).to_vec()).collect::<Vec<_>>().into()
}

fn model_params<T: Real>(report: CheckReport, model: &BanachModel<T>) -> CheckReport {
    report
        .with_param("d", model.dim())
        .with_param("mu", model.mu().to_f64_lossy())
        .with_param("N", model.order())
        .with_param("exponent", serde_json::to_value(model.exponent()).expect("serializes"))
}

/// Runs [`is_ucv`] on every slice; the verdict is the conjunction and the
/// report carries the worst slice (earliest direction on ties).
pub fn ucv_membership<T: Real>(
    model: &BanachModel<T>,
    directions: &SliceFamily<T>,
    grid: &DiskGrid<T>,
    opts: &CheckOptions,
) -> Result<CheckReport> {
    let mut worst: Option<(usize, CheckReport)> = None;
    for (i, a) in directions.directions().iter().enumerate() {
        let r = is_ucv(&model.slice(a)?, grid, opts)?;
        if worst.as_ref().is_none_or(|(_, w)| r.worst_margin < w.worst_margin) {
            worst = Some((i, r));
        }
    }
    let (i, r) = worst.expect("directions are non-empty");
    let report = CheckReport::new("ucv-membership", opts.non_strict(r.worst_margin), r.worst_margin, r.witness)
        .with_param("directions", directions.len())
        .with_param("direction_index", i)
        .with_param("direction", direction_json(&directions.directions()[i]))
        .with_param("r_max", grid.r_max().to_f64_lossy())
        .with_tail_note(r.tail_note);
    Ok(model_params(report, model))
}

/// `min_{a,n} |A(a)|/n − |P_n(a)|` with the witnessing `(n, direction index)`.
fn coefficient_margin<T: Real>(model: &BanachModel<T>, dirs: &[Vec<Complex<T>>]) -> (T, usize, usize) {
    let mut best: Option<(T, usize, usize)> = None;
    for (i, a) in dirs.iter().enumerate() {
        let av = model.a_value(a).norm();
        for n in 2..=model.order().max(2) {
            let m = av / T::of(n) - model.poly(n, a).norm();
            if best.is_none_or(|b| m < b.0) {
                best = Some((m, n, i));
            }
        }
    }
    best.expect("directions are non-empty")
}

/// Combines a conclusion margin with a premise report: a failing conclusion
/// is a fail regardless of the premise; a holding conclusion with a failing
/// premise is premise-not-met.
fn gate(
    name: &str,
    conclusion: f64,
    at: [f64; 2],
    premise_pass: bool,
    premise_margin: f64,
    opts: &CheckOptions,
) -> CheckReport {
    let concl = opts.non_strict(conclusion);
    let (verdict, margin) = match (concl, premise_pass) {
        (Verdict::Fail, _) => (Verdict::Fail, conclusion),
        (_, false) => (Verdict::PremiseNotMet, premise_margin),
        _ => (Verdict::Pass, conclusion),
    };
    CheckReport::new(name, verdict, margin, at)
        .with_param("conclusion_margin", conclusion)
        .with_param("premise_pass", premise_pass)
        .with_param("premise_margin", premise_margin)
}

/// `|P_n(a)| ≤ |A(a)|/n` over the directions, premised on [`ucv_membership`].
/// Witness is `[n, direction index]`.
pub fn theorem4_check<T: Real>(
    model: &BanachModel<T>,
    directions: &SliceFamily<T>,
    grid: &DiskGrid<T>,
    opts: &CheckOptions,
) -> Result<CheckReport> {
    let premise = ucv_membership(model, directions, grid, opts)?;
    let (m, n, i) = coefficient_margin(model, directions.directions());
    let r = gate("theorem4", m.to_f64_lossy(), [n as f64, i as f64], premise.passed(), premise.worst_margin, opts)
        .with_param("directions", directions.len());
    Ok(model_params(r, model))
}

/// On kernel directions (`A(a) = 0`), every `P_n(a)` must vanish. The
/// premise is the coefficient bound on the nearby non-kernel directions
/// `a + 10⁻³·c̄/‖c‖` (renormalized). Witness is `[n, direction index]`.
pub fn kernel_vanishing_check<T: Real>(
    model: &BanachModel<T>,
    kernel: &[Vec<Complex<T>>],
    opts: &CheckOptions,
) -> Result<CheckReport> {
    if kernel.is_empty() {
        return Err(usage("need at least one kernel direction"));
    }
    let c = model.functional();
    let cn = c.iter().map(|x| x.norm_sqr()).fold(T::zero(), |a, b| a + b).sqrt();
    let mut worst: Option<(T, usize, usize)> = None;
    let mut nearby = Vec::with_capacity(kernel.len());
    for (i, a) in kernel.iter().enumerate() {
        model.check_direction(a)?;
        let av = model.a_value(a).norm();
        if av > T::lit(UNIT_TOL) {
            return Err(usage(format!("direction {i} is not in the kernel: |A(a)| = {av}")));
        }
        for n in 2..=model.order().max(2) {
            let m = T::zero() - model.poly(n, a).norm();
            if worst.is_none_or(|w| m < w.0) {
                worst = Some((m, n, i));
            }
        }
        let step = T::lit(NEARBY_STEP);
        let b: Vec<_> = a.iter().zip(c).map(|(ai, ci)| ai + ci.conj() * (step / cn)).collect();
        let bn = model.norm_of(&b);
        nearby.push(b.iter().map(|x| x / bn).collect::<Vec<_>>());
    }
    let (m, n, i) = worst.expect("kernel is non-empty");
    let (pm, _, _) = coefficient_margin(model, &nearby);
    let pm = pm.to_f64_lossy();
    let r = gate("kernel-vanishing", m.to_f64_lossy(), [n as f64, i as f64], pm >= -opts.tol, pm, opts)
        .with_param("kernel_directions", kernel.len())
        .with_param("nearby_step", NEARBY_STEP);
    Ok(model_params(r, model))
}

/// Seeded samples `w = t·a`, `a` a random unit direction off the kernel and
/// `t` uniform in `(0, r_max]`.
pub fn ball_samples<T: Real>(
    model: &BanachModel<T>,
    count: usize,
    r_max: T,
    seed: u64,
) -> Result<Vec<Vec<Complex<T>>>> {
    if !(r_max > T::zero() && r_max < T::one()) {
        return Err(domain(format!("sample radius must lie in (0, 1), got {r_max}")));
    }
    let dirs = SliceFamily::sample(model, count.max(1), seed)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x9e37_79b9_7f4a_7c15);
    Ok(dirs
        .directions()
        .iter()
        .take(count)
        .map(|a| {
            let t = r_max * T::lit(1.0 - rng.random::<f64>());
            a.iter().map(|x| x * t).collect()
        })
        .collect())
}

/// `Re{1 + F″(w)(w,w)/F′(w)(w)} ≥ |F″(w)(w,w)/F′(w)(w)|` at each sample,
/// through the slice identity `F″(w)(w,w)/F′(w)(w) = zF_a″(z)/F_a′(z)` with
/// `z = ‖w‖`, `a = w/‖w‖`. Witness is `[‖w‖, sample index]`.
pub fn sufficient_condition_check<T: Real>(
    model: &BanachModel<T>,
    samples: &[Vec<Complex<T>>],
    opts: &CheckOptions,
) -> Result<CheckReport> {
    if samples.is_empty() {
        return Err(usage("need at least one sample"));
    }
    let values: Vec<Result<T>> = samples
        .par_iter()
        .map(|w| {
            let z = model.norm_of(w);
            if !(z > T::zero() && z < T::one()) {
                return Err(domain(format!("samples need 0 < ||w|| < 1, got {z}")));
            }
            let a: Vec<_> = w.iter().map(|x| x / z).collect();
            let f = model.slice(&a)?;
            let zc = Complex::new(z, T::zero());
            let j = f.jet(zc)?;
            if j.d1.norm() == T::zero() {
                return Err(degenerate(zc, "F'(w)(w) vanishes"));
            }
            let q = zc * j.d2 / j.d1;
            Ok(T::one() + q.re - q.norm())
        })
        .collect();
    let mut worst: Option<(T, usize)> = None;
    for (i, v) in values.into_iter().enumerate() {
        let m = v?;
        if worst.is_none_or(|w| m < w.0) {
            worst = Some((m, i));
        }
    }
    let (m, i) = worst.expect("samples are non-empty");
    let margin = m.to_f64_lossy();
    let r = CheckReport::new(
        "sufficient-condition",
        opts.non_strict(margin),
        margin,
        [model.norm_of(&samples[i]).to_f64_lossy(), i as f64],
    )
    .with_param("samples", samples.len());
    Ok(model_params(r, model))
}

/// Coefficient sequence `P_n(a)` (`p[0]` at `n = 2`) with its `A(a)`.
#[derive(Clone, Debug, PartialEq)]
pub struct CoeffFamily<T> {
    pub a_value: T,
    pub p: Vec<T>,
}

impl<T: Real> CoeffFamily<T> {
    /// Slack of `Σ n|P_n| ≤ A`.
    pub fn admissibility_margin(&self) -> T {
        self.a_value - self.p.iter().enumerate().fold(T::zero(), |s, (k, x)| s + T::of(k + 2) * x.abs())
    }
}

/// Termwise product `H_n = Π_j P_{n,j} · Π_i Φ_{n,i}`.
pub fn quasi_hadamard<T: Real>(p_families: &[CoeffFamily<T>], phi_families: &[CoeffFamily<T>]) -> Result<Vec<T>> {
    let all: Vec<&CoeffFamily<T>> = p_families.iter().chain(phi_families).collect();
    let Some(first) = all.first() else {
        return Err(usage("quasi-Hadamard product needs at least one family"));
    };
    let len = first.p.len();
    if all.iter().any(|f| f.p.len() != len) {
        return Err(usage("all families must have the same truncation"));
    }
    Ok((0..len).map(|k| all.iter().fold(T::one(), |acc, f| acc * f.p[k])).collect())
}

/// `Σ n^{l+s} |H_n| ≤ Π A` for the quasi-Hadamard product, premised on every
/// family satisfying `Σ n|P_n| ≤ A`. Witness is `[l, s]`.
pub fn quasi_class_check<T: Real>(
    p_families: &[CoeffFamily<T>],
    phi_families: &[CoeffFamily<T>],
    opts: &CheckOptions,
) -> Result<CheckReport> {
    let h = quasi_hadamard(p_families, phi_families)?;
    let (l, s) = (p_families.len(), phi_families.len());
    let fams = p_families.iter().chain(phi_families);
    let premise = fams.clone().map(|f| f.admissibility_margin()).fold(T::infinity(), T::min);
    let scale = fams.clone().map(|f| f.a_value.abs()).fold(T::one(), T::max);
    let premise_ok = premise >= -T::lit(opts.coeff_slack) * scale;
    let power = (l + s) as i32;
    let left = h.iter().enumerate().fold(T::zero(), |acc, (k, x)| acc + T::of(k + 2).powi(power) * x.abs());
    let right = fams.map(|f| f.a_value).fold(T::one(), |a, b| a * b);
    let margin = (right - left).to_f64_lossy();
    let at = [l as f64, s as f64];
    let r = if premise_ok {
        CheckReport::new("quasi-class", opts.non_strict(margin), margin, at)
    } else {
        CheckReport::new("quasi-class", Verdict::PremiseNotMet, premise.to_f64_lossy(), at)
    };
    Ok(r.with_param("l", l)
        .with_param("s", s)
        .with_param("left", left.to_f64_lossy())
        .with_param("right", right.to_f64_lossy())
        .with_param("premise_margin", premise.to_f64_lossy()))
}

/// Grid estimate of `sup (1−|z|²)|F″/F′|`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NormEstimate<T> {
    /// After local refinement around the grid maximizer.
    pub value: T,
    /// Plain grid maximum.
    pub grid_value: T,
    pub at: Complex<T>,
}

fn weighted_t<T: Real>(f: &FracPowerSeries<T>, z: Complex<T>) -> Result<T> {
    let j = f.jet_full(z)?;
    if j.d1.norm() == T::zero() || !j.d1.norm().is_finite() {
        return Err(degenerate(z, "F'(z) vanishes"));
    }
    Ok((T::one() - z.norm_sqr()) * (j.d2 / j.d1).norm())
}

/// Grid maximum of `(1−|z|²)|F″/F′|` followed by one 16×16 radial-angular
/// refinement between the neighbouring samples of the maximizer. A lower
/// estimate of the supremum over the disk.
pub fn pre_schwarzian_estimate<T: Real>(f: &FracPowerSeries<T>, grid: &DiskGrid<T>) -> Result<NormEstimate<T>> {
    // maximize by minimizing the negative; same tie-breaking as the checks
    let m = grid_min(grid, |z| Ok((-weighted_t(f, z)?, T::zero())))?;
    let grid_value = -m.margin;
    let radii = grid.radii();
    let (i, k) = (m.index / grid.angles(), m.index % grid.angles());
    let r_lo = if i == 0 { radii[0] / T::lit(2.0) } else { radii[i - 1] };
    let r_hi = if i + 1 < radii.len() { radii[i + 1] } else { radii[i] };
    let dtheta = T::PI() * T::lit(2.0) / T::of(grid.angles());
    let theta = grid.theta(k);
    let last = T::of(REFINE_STEPS - 1);
    let local: Vec<Complex<T>> = (0..REFINE_STEPS)
        .flat_map(|a| {
            (0..REFINE_STEPS).map(move |b| {
                let r = r_lo + (r_hi - r_lo) * T::of(a) / last;
                let t = theta - dtheta + dtheta * T::lit(2.0) * T::of(b) / last;
                Complex::from_polar(r, t)
            })
        })
        .collect();
    let values: Vec<Result<T>> = local.par_iter().map(|&z| weighted_t(f, z)).collect();
    let mut best = (grid_value, m.at);
    for (v, &z) in values.into_iter().zip(&local) {
        let v = v?;
        if v > best.0 {
            best = (v, z);
        }
    }
    Ok(NormEstimate { value: best.0, grid_value, at: best.1 })
}

/// `‖F‖_T` estimate, see [`pre_schwarzian_estimate`].
pub fn pre_schwarzian_norm<T: Real>(f: &FracPowerSeries<T>, grid: &DiskGrid<T>) -> Result<T> {
    Ok(pre_schwarzian_estimate(f, grid)?.value)
}

/// Pointwise `|z(IF_a)″/(IF_a)′| ≤ 1 + ‖F_a‖_T/(1−|z|²)` for `I = I_{β,μ}`
/// over directions and grid. The statement's `|IF_a(z)|` form is reported
/// in `params`.
pub fn theorem_boundedness_check<T: Real>(
    model: &BanachModel<T>,
    directions: &SliceFamily<T>,
    beta: T,
    grid: &DiskGrid<T>,
    opts: &CheckOptions,
) -> Result<CheckReport> {
    let mut worst: Option<(T, Complex<T>, usize)> = None;
    let mut statement = T::infinity();
    let mut norm_max = T::zero();
    for (i, a) in directions.directions().iter().enumerate() {
        let fa = model.slice(a)?;
        let nt = pre_schwarzian_norm(&fa, grid)?;
        norm_max = norm_max.max(nt);
        let ifa = noor_frac(&fa, beta)?;
        let m = grid_min(grid, |z| {
            let j = ifa.jet_full(z)?;
            if j.d1.norm() == T::zero() {
                return Err(degenerate(z, "(I F_a)'(z) vanishes"));
            }
            let rhs = T::one() + nt / (T::one() - z.norm_sqr());
            Ok((rhs - (z * j.d2 / j.d1).norm(), j.value.norm()))
        })?;
        let s = grid_min(grid, |z| {
            let rhs = T::one() + nt / (T::one() - z.norm_sqr());
            Ok((rhs - ifa.jet_full(z)?.value.norm(), T::zero()))
        })?;
        statement = statement.min(s.margin);
        if worst.is_none_or(|w| m.margin < w.0) {
            worst = Some((m.margin, m.at, i));
        }
    }
    let (m, at, i) = worst.expect("directions are non-empty");
    let margin = m.to_f64_lossy();
    let statement = statement.to_f64_lossy();
    let r = CheckReport::new("boundedness", opts.non_strict(margin), margin, witness(at))
        .with_param("beta", beta.to_f64_lossy())
        .with_param("direction_index", i)
        .with_param("directions", directions.len())
        .with_param("max_norm_t", norm_max.to_f64_lossy())
        .with_param("statement_margin", statement)
        .with_param("statement_pass", opts.non_strict(statement) == Verdict::Pass);
    Ok(model_params(r, model))
}

/// Slices `z + ratio^m · Σ P_n(a)/A(a) z^{μn}` for `m = 0..=steps`.
pub fn geometric_slice_sequence<T: Real>(
    model: &BanachModel<T>,
    a: &[Complex<T>],
    ratio: T,
    steps: usize,
) -> Result<Vec<FracPowerSeries<T>>> {
    let base = model.slice(a)?;
    let mut scale = T::one();
    (0..=steps)
        .map(|m| {
            if m > 0 {
                scale = scale * ratio;
            }
            FracPowerSeries::from_higher(base.mu(), base.coeffs().iter().skip(1).map(|c| c * scale))
        })
        .collect()
}

/// Pre-Schwarzian norms `t_m` of `I_{β,μ}F_m` must decrease (within `1e-6`)
/// and end below `10⁻³·t_0`. Witness is `[m, 0]` at the largest increase.
pub fn compactness_decay_check<T: Real>(
    sequence: &[FracPowerSeries<T>],
    beta: T,
    grid: &DiskGrid<T>,
    opts: &CheckOptions,
) -> Result<CheckReport> {
    if sequence.is_empty() {
        return Err(usage("need at least one series in the sequence"));
    }
    let t = sequence.iter().map(|f| pre_schwarzian_norm(&noor_frac(f, beta)?, grid)).collect::<Result<Vec<T>>>()?;
    let t64: Vec<f64> = t.iter().map(|x| x.to_f64_lossy()).collect();
    let jitter = 1e-6;
    let (mut rise, mut rise_at) = (f64::NEG_INFINITY, 0usize);
    for m in 1..t64.len() {
        let d = t64[m] - t64[m - 1];
        if d > rise {
            rise = d;
            rise_at = m;
        }
    }
    let monotone = rise <= jitter;
    let (first, last) = (t64[0], *t64.last().expect("non-empty"));
    let decayed = first == 0.0 || last < 1e-3 * first;
    let margin = if first == 0.0 { 0.0 } else { 1e-3 * first - last };
    let verdict = if monotone && decayed { Verdict::Pass } else { Verdict::Fail };
    let _ = opts;
    Ok(CheckReport::new("compactness", verdict, margin, [rise_at as f64, 0.0])
        .with_param("beta", beta.to_f64_lossy())
        .with_param("t", t64.clone())
        .with_param("ratio_last_first", if first == 0.0 { 0.0 } else { last / first })
        .with_param("monotone", monotone)
        .with_param("max_rise", if t64.len() > 1 { rise } else { 0.0 }))
}

/// Growth bound `| |G(z)| − |z| | ≤ αA(a)/(2β)·|z|^{2μ}` for the ψ-weighted
/// transform `G(z) = z + Σ ψ(n) P_n(a) z^{μn}` along `a`.
///
/// Premises: `α, β ≥ 1` and `|P_n(a)| ≤ |A(a)|/n` for every `n`. The same
/// bound for `I_{β,μ}F_a` (weights `(n−1)!/(β+1)_{n−1}`) is reported in `params`.
pub fn theorem8_check<T: Real>(
    model: &BanachModel<T>,
    a: &[Complex<T>],
    alpha: T,
    beta: T,
    grid: &DiskGrid<T>,
    opts: &CheckOptions,
) -> Result<CheckReport> {
    let fa = model.slice(a)?;
    let av = model.a_value(a).norm();
    let echo = |r: CheckReport| {
        model_params(r, model)
            .with_param("alpha", alpha.to_f64_lossy())
            .with_param("beta", beta.to_f64_lossy())
            .with_param("A_a", av.to_f64_lossy())
    };
    if !(alpha >= T::one() && beta >= T::one()) {
        let m = (alpha - T::one()).min(beta - T::one()).to_f64_lossy();
        return Ok(echo(CheckReport::new("theorem8", Verdict::PremiseNotMet, m, [0.0, 0.0]))
            .with_param("premise", "alpha >= 1 and beta >= 1"));
    }
    let (pm, pn, _) = coefficient_margin(model, &[a.to_vec()]);
    if pm < -T::lit(opts.coeff_slack) * av.max(T::one()) {
        return Ok(echo(CheckReport::new("theorem8", Verdict::PremiseNotMet, pm.to_f64_lossy(), [pn as f64, 0.0]))
            .with_param("premise", "|P_n(a)| <= |A(a)|/n"));
    }
    let mu = fa.mu();
    let psi_series = FracPowerSeries::from_higher(
        mu,
        (2..=model.order())
            .map(|n| Ok(model.poly(n, a) * psi_weight(n, alpha, beta, av)?))
            .collect::<Result<Vec<_>>>()?,
    )?;
    let noor_series = noor_frac(&fa, beta)?;
    let coef = psi_bound_coefficient(alpha, beta, av)?;
    let margin_of = |g: &FracPowerSeries<T>| {
        grid_min(grid, |z| {
            let bound = coef * z.norm().powf(T::lit(2.0) * mu);
            Ok((bound - (g.evaluate(z)?.norm() - z.norm()).abs(), T::zero()))
        })
    };
    let m = margin_of(&psi_series)?;
    let alt = margin_of(&noor_series)?;
    let margin = m.margin.to_f64_lossy();
    let alt_margin = alt.margin.to_f64_lossy();
    let r = CheckReport::new("theorem8", opts.non_strict(margin), margin, witness(m.at))
        .with_param("bound_coefficient", coef.to_f64_lossy())
        .with_param("psi_2", psi_weight(2, alpha, beta, av)?.to_f64_lossy())
        .with_param(
            "psi_increases_from",
            psi_monotone_until(alpha, beta, av, model.order().max(64))?.map_or(serde_json::Value::Null, |n| n.into()),
        )
        .with_param("noor_form_margin", alt_margin)
        .with_param("noor_form_pass", opts.non_strict(alt_margin) == Verdict::Pass);
    Ok(echo(r))
}
