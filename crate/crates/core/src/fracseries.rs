//! Truncated fractional power series `z + Σ_{n=2..N} a_n z^{μn}`.
//!
//! Powers are principal-branch: `z^{μn} = exp(μn·Log z)` with `arg z ∈ (−π, π]`.
//! A series may additionally carry a [`HyperTail`], the exact coefficient
//! law beyond the stored order. Plain evaluation ([`FracPowerSeries::evaluate`]
//! and friends) sums the stored coefficients only; [`FracPowerSeries::jet_full`]
//! continues through the tail until the remainder is at rounding level.

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{domain, usage, Error, Result};
use crate::scalar::Real;

/// Default truncation order.
pub const DEFAULT_ORDER: usize = 64;
/// Slack admitted by coefficient inequalities (equality cases of the generator).
pub const COEFF_SLACK: f64 = 1e-12;

const MAX_TAIL_TERMS: usize = 5_000_000;

/// Rising factorial `(x)_k = x(x+1)···(x+k−1)`, `(x)_0 = 1`.
pub fn pochhammer<T: Real>(x: T, k: i64) -> Result<T> {
    if k < 0 {
        return Err(usage(format!("pochhammer order must be >= 0, got {k}")));
    }
    Ok((0..k as usize).fold(T::one(), |acc, j| acc * (x + T::of(j))))
}

/// `(x)_m / m!`, accumulated as a running ratio so it never overflows for
/// moderate `x` even when `m` is large.
pub fn pochhammer_over_factorial<T: Real>(x: T, m: usize) -> T {
    (1..=m).fold(T::one(), |acc, k| acc * (x + T::of(k - 1)) / T::of(k))
}

/// Coefficient law `a_{n+1}/a_n = Π(n + upper_i) / Π(n + lower_i)` that a
/// series follows past its stored order.
///
/// Both lists have equal length, so the ratio tends to 1 and the tail
/// converges on the open disk.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HyperTail<T> {
    upper: Vec<T>,
    lower: Vec<T>,
}

impl<T: Real> HyperTail<T> {
    pub fn new(upper: Vec<T>, lower: Vec<T>) -> Result<Self> {
        if upper.len() != lower.len() {
            return Err(usage(format!(
                "tail law needs as many upper as lower parameters ({} vs {})",
                upper.len(),
                lower.len()
            )));
        }
        if upper.iter().chain(lower.iter()).any(|p| !p.is_finite()) {
            return Err(usage("tail law parameters must be finite"));
        }
        Ok(Self::canonical(upper, lower))
    }

    /// Law of the all-ones sequence.
    pub fn unit() -> Self {
        Self { upper: Vec::new(), lower: Vec::new() }
    }

    fn canonical(mut upper: Vec<T>, mut lower: Vec<T>) -> Self {
        let mut i = 0;
        while i < upper.len() {
            if let Some(j) = lower.iter().position(|&l| l == upper[i]) {
                upper.swap_remove(i);
                lower.swap_remove(j);
            } else {
                i += 1;
            }
        }
        let by = |a: &T, b: &T| a.partial_cmp(b).expect("finite parameters");
        upper.sort_by(by);
        lower.sort_by(by);
        Self { upper, lower }
    }

    pub fn upper(&self) -> &[T] {
        &self.upper
    }

    pub fn lower(&self) -> &[T] {
        &self.lower
    }

    /// `a_{n+1} / a_n`.
    pub fn ratio(&self, n: usize) -> T {
        let nf = T::of(n);
        self.upper.iter().zip(&self.lower).fold(T::one(), |acc, (&u, &l)| acc * (nf + u) / (nf + l))
    }

    /// Termwise product law (Hadamard product of two tails).
    pub fn compose(&self, other: &Self) -> Self {
        let mut upper = self.upper.clone();
        upper.extend_from_slice(&other.upper);
        let mut lower = self.lower.clone();
        lower.extend_from_slice(&other.lower);
        Self::canonical(upper, lower)
    }

    /// Upper bound of `ratio(m)` over all `m ≥ n`, once `n` is past every
    /// parameter (each factor `(m+u)/(m+l)` is then monotone towards 1).
    fn sup_ratio_from(&self, n: usize) -> Option<T> {
        let nf = T::of(n);
        let past = self.upper.iter().chain(&self.lower).all(|&p| nf + p > T::zero());
        if !past {
            return None;
        }
        Some(
            self.upper
                .iter()
                .zip(&self.lower)
                .fold(T::one(), |acc, (&u, &l)| acc * ((nf + u) / (nf + l)).max(T::one())),
        )
    }
}

/// Value and first two derivatives at a point, with the truncation
/// majorant of whatever was not summed (zero for tail-free series).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Jet<T> {
    pub value: Complex<T>,
    pub d1: Complex<T>,
    pub d2: Complex<T>,
    pub tail: T,
}

/// Series `z + Σ_{n=2..N} a_n z^{μn}` with `a_1 = 1` stored at index 0.
#[derive(Clone, Debug, PartialEq)]
pub struct FracPowerSeries<T> {
    mu: T,
    coeffs: Vec<Complex<T>>,
    tail: Option<HyperTail<T>>,
}

fn check_mu<T: Real>(mu: T) -> Result<()> {
    if !(mu >= T::one()) || !mu.is_finite() {
        return Err(domain(format!("mu must be a finite real >= 1, got {mu}")));
    }
    Ok(())
}

impl<T: Real> FracPowerSeries<T> {
    /// Builds a series from the full coefficient list, `coeffs[0]` being `a_1`.
    pub fn new(mu: T, coeffs: Vec<Complex<T>>) -> Result<Self> {
        check_mu(mu)?;
        match coeffs.first() {
            None => return Err(usage("a series needs at least the leading coefficient")),
            Some(c) if *c != Complex::new(T::one(), T::zero()) => {
                return Err(usage(format!("leading coefficient must be exactly 1, got {c}")))
            }
            _ => {}
        }
        if coeffs.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
            return Err(usage("coefficients must be finite"));
        }
        Ok(Self { mu, coeffs, tail: None })
    }

    /// Builds `z + Σ higher[k] z^{μ(k+2)}`.
    pub fn from_higher(mu: T, higher: impl IntoIterator<Item = Complex<T>>) -> Result<Self> {
        let coeffs = std::iter::once(Complex::new(T::one(), T::zero())).chain(higher).collect();
        Self::new(mu, coeffs)
    }

    /// Same, for real coefficients.
    pub fn from_real_higher(mu: T, higher: impl IntoIterator<Item = T>) -> Result<Self> {
        Self::from_higher(mu, higher.into_iter().map(|a| Complex::new(a, T::zero())))
    }

    /// The identity `z` (all higher coefficients zero) at the given order.
    pub fn identity(mu: T, order: usize) -> Result<Self> {
        if order == 0 {
            return Err(usage("order must be >= 1"));
        }
        Self::from_higher(mu, std::iter::repeat_n(Complex::new(T::zero(), T::zero()), order - 1))
    }

    /// Attaches the coefficient law past the stored order.
    pub fn with_tail(mut self, tail: HyperTail<T>) -> Self {
        self.tail = Some(tail);
        self
    }

    /// The same stored coefficients, read as an exact polynomial in `z^μ`.
    pub fn without_tail(&self) -> Self {
        Self { tail: None, ..self.clone() }
    }

    pub fn mu(&self) -> T {
        self.mu
    }

    /// Truncation order `N` (number of stored coefficients).
    pub fn order(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[Complex<T>] {
        &self.coeffs
    }

    /// `a_n` for `1 ≤ n ≤ N`, zero outside.
    pub fn coeff(&self, n: usize) -> Complex<T> {
        match n {
            0 => Complex::new(T::zero(), T::zero()),
            _ => self.coeffs.get(n - 1).copied().unwrap_or_else(|| Complex::new(T::zero(), T::zero())),
        }
    }

    pub fn tail(&self) -> Option<&HyperTail<T>> {
        self.tail.as_ref()
    }

    pub fn has_real_coeffs(&self) -> bool {
        self.coeffs.iter().all(|c| c.im == T::zero())
    }

    /// Stored coefficients continued through the tail law up to `order`
    /// (zeros past `N` when there is no tail). The tail is kept.
    pub fn extended(&self, order: usize) -> Self {
        let mut coeffs = self.coeffs.clone();
        if order > coeffs.len() {
            let zero = Complex::new(T::zero(), T::zero());
            match &self.tail {
                None => coeffs.resize(order, zero),
                Some(t) => {
                    let mut c = *coeffs.last().expect("non-empty");
                    for n in coeffs.len()..order {
                        c = c * t.ratio(n);
                        coeffs.push(c);
                    }
                }
            }
        } else {
            coeffs.truncate(order.max(1));
        }
        Self { mu: self.mu, coeffs, tail: self.tail.clone() }
    }

    /// Multiplies `a_n` by `weight(n)` for `n ≥ 2` and composes the tail with
    /// `law`, the ratio law of the weights.
    pub(crate) fn reweighted(&self, weight: impl Fn(usize) -> T, law: &HyperTail<T>) -> Self {
        let coeffs = self.coeffs.iter().enumerate().map(|(i, &a)| if i == 0 { a } else { a * weight(i + 1) }).collect();
        Self { mu: self.mu, coeffs, tail: self.tail.as_ref().map(|t| t.compose(law)) }
    }

    fn check_point(z: Complex<T>) -> Result<()> {
        if !z.re.is_finite() || !z.im.is_finite() || !(z.norm() < T::one()) {
            return Err(domain(format!("|z| must be < 1, got z = {z}")));
        }
        Ok(())
    }

    fn mu_is_integer(&self) -> bool {
        self.mu.fract() == T::zero()
    }

    /// Principal-branch `z^μ`.
    fn pow_mu(&self, z: Complex<T>) -> Complex<T> {
        if self.mu == T::one() {
            z
        } else if self.mu_is_integer() && self.mu <= T::lit(64.0) {
            z.powi(self.mu.to_i32().expect("small integer"))
        } else {
            (z.ln() * self.mu).exp()
        }
    }

    /// `[Σ a_n w^n, Σ n a_n w^n, Σ μn(μn−1) a_n w^n]` over the stored `n ≥ 2`,
    /// plus the running magnitude sums used to scale rounding-level stops.
    fn stored_sums(&self, w: Complex<T>) -> ([Complex<T>; 3], [T; 3]) {
        let zero = Complex::new(T::zero(), T::zero());
        let mut s = [zero; 3];
        let mut mag = [T::zero(); 3];
        let mut wn = w;
        for (i, &a) in self.coeffs.iter().enumerate().skip(1) {
            wn = wn * w;
            let n = T::of(i + 1);
            let t = a * wn;
            let k = [T::one(), n, self.mu * n * (self.mu * n - T::one())];
            let tn = t.norm();
            for j in 0..3 {
                s[j] = s[j] + t * k[j];
                mag[j] = mag[j] + tn * k[j];
            }
        }
        (s, mag)
    }

    /// Continues the three sums past `N` through the tail law; returns the
    /// absolute majorants of what remains unsummed.
    fn tail_sums(&self, w: Complex<T>, s: &mut [Complex<T>; 3], mag: &mut [T; 3]) -> Result<[T; 3]> {
        let Some(law) = &self.tail else {
            return Ok([T::zero(); 3]);
        };
        let rw = w.norm();
        let mu = self.mu;
        let big_n = self.order();
        let mut c = *self.coeffs.last().expect("non-empty");
        let mut wn = w.powu(big_n as u32);
        let mut n = big_n;
        loop {
            c = c * law.ratio(n);
            wn = wn * w;
            n += 1;
            if c.re == T::zero() && c.im == T::zero() {
                return Ok([T::zero(); 3]);
            }
            let nf = T::of(n);
            let t = c * wn;
            let tn = t.norm();
            let k = [T::one(), nf, mu * nf * (mu * nf - T::one())];
            for j in 0..3 {
                s[j] = s[j] + t * k[j];
                mag[j] = mag[j] + tn * k[j];
            }
            if let Some(sup) = law.sup_ratio_from(n) {
                let n1 = nf + T::one();
                let q0 = sup * rw;
                let q = [q0, q0 * n1 / nf, q0 * n1 * (mu * n1 - T::one()) / (nf * (mu * nf - T::one()))];
                if q.iter().all(|&qj| qj < T::one()) {
                    let mut maj = [T::zero(); 3];
                    for j in 0..3 {
                        maj[j] = tn * k[j] * q[j] / (T::one() - q[j]);
                    }
                    let eps = T::epsilon();
                    if (0..3).all(|j| maj[j] <= eps * mag[j]) {
                        return Ok(maj);
                    }
                }
            }
            if n - big_n > MAX_TAIL_TERMS {
                return Err(Error::Convergence(format!(
                    "tail at |z^mu| = {rw} not resolved within {MAX_TAIL_TERMS} terms"
                )));
            }
        }
    }

    /// `Σ_{n≥2} |a_n| r^{μn}` split as (stored terms, tail-law continuation).
    /// The tail part already includes the majorant of what it leaves unsummed
    /// and is zero for tail-free series.
    pub fn radial_abs_sums(&self, r: T) -> Result<(T, T)> {
        if !(r >= T::zero() && r < T::one()) {
            return Err(domain(format!("radius must lie in [0, 1), got {r}")));
        }
        let rho = r.powf(self.mu);
        let mut stored = T::zero();
        let mut p = rho;
        for a in self.coeffs.iter().skip(1) {
            p = p * rho;
            stored = stored + a.norm() * p;
        }
        let Some(law) = &self.tail else {
            return Ok((stored, T::zero()));
        };
        let mut c = self.coeffs.last().expect("non-empty").norm();
        let mut n = self.order();
        let mut tail = T::zero();
        while c > T::zero() && p > T::zero() {
            c = c * law.ratio(n).abs();
            p = p * rho;
            n += 1;
            let t = c * p;
            tail = tail + t;
            if let Some(q) = law.sup_ratio_from(n).map(|s| s * rho) {
                if q < T::one() {
                    let maj = t * q / (T::one() - q);
                    if maj <= T::epsilon() * (stored + tail) {
                        return Ok((stored, tail + maj));
                    }
                }
            }
            if n - self.order() > MAX_TAIL_TERMS {
                return Err(Error::Convergence(format!(
                    "radial tail at r = {r} not resolved within {MAX_TAIL_TERMS} terms"
                )));
            }
        }
        Ok((stored, tail))
    }

    fn origin_derivs(&self) -> Result<(Complex<T>, Complex<T>)> {
        if !self.mu_is_integer() {
            return Err(domain(format!("derivatives at z = 0 need integer mu (z^(mu n - 1) with mu = {})", self.mu)));
        }
        let one = Complex::new(T::one(), T::zero());
        let d2 = if self.mu == T::one() { self.coeff(2) * T::lit(2.0) } else { Complex::new(T::zero(), T::zero()) };
        Ok((one, d2))
    }

    /// `F(z)` from the stored coefficients.
    pub fn evaluate(&self, z: Complex<T>) -> Result<Complex<T>> {
        Self::check_point(z)?;
        if z.norm() == T::zero() {
            return Ok(z);
        }
        let (s, _) = self.stored_sums(self.pow_mu(z));
        Ok(z + s[0])
    }

    /// `F′(z)` from the stored coefficients.
    pub fn evaluate_d1(&self, z: Complex<T>) -> Result<Complex<T>> {
        Ok(self.jet(z)?.d1)
    }

    /// `F″(z)` from the stored coefficients.
    pub fn evaluate_d2(&self, z: Complex<T>) -> Result<Complex<T>> {
        Ok(self.jet(z)?.d2)
    }

    /// Value and derivatives from the stored coefficients.
    pub fn jet(&self, z: Complex<T>) -> Result<Jet<T>> {
        self.jet_impl(z, false)
    }

    /// Value and derivatives including the tail law, summed to rounding level.
    /// Identical to [`Self::jet`] for tail-free series.
    pub fn jet_full(&self, z: Complex<T>) -> Result<Jet<T>> {
        self.jet_impl(z, true)
    }

    fn jet_impl(&self, z: Complex<T>, with_tail: bool) -> Result<Jet<T>> {
        Self::check_point(z)?;
        if z.norm() == T::zero() {
            let (d1, d2) = self.origin_derivs()?;
            return Ok(Jet { value: z, d1, d2, tail: T::zero() });
        }
        let w = self.pow_mu(z);
        let (mut s, mut mag) = self.stored_sums(w);
        let maj = if with_tail { self.tail_sums(w, &mut s, &mut mag)? } else { [T::zero(); 3] };
        let r = z.norm();
        let one = Complex::new(T::one(), T::zero());
        Ok(Jet {
            value: z + s[0],
            d1: one + s[1] * self.mu / z,
            d2: s[2] / (z * z),
            tail: maj[0].max(maj[1] * self.mu / r).max(maj[2] / (r * r)),
        })
    }

    /// Serializable document form.
    pub fn to_doc(&self) -> SeriesDoc {
        SeriesDoc {
            mu: self.mu.to_f64_lossy(),
            order: self.order(),
            coeffs: self.coeffs.iter().map(|c| [c.re.to_f64_lossy(), c.im.to_f64_lossy()]).collect(),
            tail: self.tail.as_ref().map(|t| TailDoc {
                upper: t.upper.iter().map(|p| p.to_f64_lossy()).collect(),
                lower: t.lower.iter().map(|p| p.to_f64_lossy()).collect(),
            }),
        }
    }

    pub fn from_doc(doc: &SeriesDoc) -> Result<Self> {
        if doc.order != doc.coeffs.len() {
            return Err(usage(format!(
                "series document declares N = {} but lists {} coefficients",
                doc.order,
                doc.coeffs.len()
            )));
        }
        let conv = |x: f64| T::from_f64(x).ok_or_else(|| usage(format!("{x} is not representable")));
        let coeffs =
            doc.coeffs.iter().map(|[re, im]| Ok(Complex::new(conv(*re)?, conv(*im)?))).collect::<Result<Vec<_>>>()?;
        let series = Self::new(conv(doc.mu)?, coeffs)?;
        match &doc.tail {
            None => Ok(series),
            Some(t) => {
                let upper = t.upper.iter().map(|&p| conv(p)).collect::<Result<Vec<_>>>()?;
                let lower = t.lower.iter().map(|&p| conv(p)).collect::<Result<Vec<_>>>()?;
                Ok(series.with_tail(HyperTail::new(upper, lower)?))
            }
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_doc()).expect("series document serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let doc: SeriesDoc = serde_json::from_str(text).map_err(|e| usage(format!("bad series document: {e}")))?;
        Self::from_doc(&doc)
    }
}

/// JSON interchange form: `{"mu", "N", "coeffs": [[re, im], ...], "tail"?}`
/// with `coeffs[0]` the `n = 1` coefficient.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SeriesDoc {
    pub mu: f64,
    #[serde(rename = "N")]
    pub order: usize,
    pub coeffs: Vec<[f64; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tail: Option<TailDoc>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TailDoc {
    pub upper: Vec<f64>,
    pub lower: Vec<f64>,
}

/// Normalized generator `z^μ/(1−z^μ)^α` written as `z + Σ (α)_{n−1}/(n−1)! z^{μn}`,
/// carrying its exact tail law.
pub fn koebe_frac<T: Real>(alpha: T, mu: T, order: usize) -> Result<FracPowerSeries<T>> {
    if !(alpha >= T::one()) || !alpha.is_finite() {
        return Err(domain(format!("alpha must be a finite real >= 1, got {alpha}")));
    }
    check_mu(mu)?;
    if order == 0 {
        return Err(usage("order must be >= 1"));
    }
    let mut a = T::one();
    let higher = (2..=order).map(|n| {
        a = a * (alpha + T::of(n - 2)) / T::of(n - 1);
        Complex::new(a, T::zero())
    });
    let series = FracPowerSeries::from_higher(mu, higher.collect::<Vec<_>>())?;
    Ok(series.with_tail(HyperTail::new(vec![alpha - T::one()], vec![T::zero()])?))
}

/// Hadamard (coefficient-wise) product; order `min(N_F, N_G)`.
///
/// The tail law survives only when both factors have one and equal orders.
pub fn hadamard<T: Real>(f: &FracPowerSeries<T>, g: &FracPowerSeries<T>) -> Result<FracPowerSeries<T>> {
    if f.mu != g.mu {
        return Err(usage(format!("hadamard needs equal mu, got {} and {}", f.mu, g.mu)));
    }
    let coeffs: Vec<_> = f.coeffs.iter().zip(&g.coeffs).map(|(a, b)| a * b).collect();
    let tail = match (&f.tail, &g.tail) {
        (Some(a), Some(b)) if f.order() == g.order() => Some(a.compose(b)),
        _ => None,
    };
    Ok(FracPowerSeries { mu: f.mu, coeffs, tail })
}

fn check_alpha<T: Real>(alpha: T) -> Result<()> {
    if !(alpha >= T::one()) || !alpha.is_finite() {
        return Err(domain(format!("alpha must be a finite real >= 1, got {alpha}")));
    }
    Ok(())
}

fn within<T: Real>(value: T, bound: T) -> bool {
    value <= bound + T::lit(COEFF_SLACK) * bound.max(T::one())
}

/// `|a_n| ≤ (α)_{n−1}/(n−1)!` for all stored `n ≥ 2`.
pub fn in_class_a_mu<T: Real>(f: &FracPowerSeries<T>, alpha: T) -> Result<bool> {
    check_alpha(alpha)?;
    let mut bound = T::one();
    Ok(f.coeffs.iter().enumerate().skip(1).all(|(i, a)| {
        bound = bound * (alpha + T::of(i - 1)) / T::of(i);
        within(a.norm(), bound)
    }))
}

/// Class `A_μ` bound plus the sign pattern `z − Σ α_n z^{μn}`, `α_n ≥ 0`.
pub fn in_class_x_mu<T: Real>(f: &FracPowerSeries<T>, alpha: T) -> Result<bool> {
    let slack = T::lit(COEFF_SLACK);
    let signs = f.coeffs.iter().skip(1).all(|a| a.im.abs() <= slack && a.re <= slack);
    Ok(signs && in_class_a_mu(f, alpha)?)
}

/// Sampling grid `z = r·e^{iθ}`, `θ = 2πk/angles`, over ascending radii in `(0, 1)`.
#[derive(Clone, Debug, PartialEq)]
pub struct DiskGrid<T> {
    radii: Vec<T>,
    angles: usize,
}

impl<T: Real> DiskGrid<T> {
    pub const MIN_ANGLES: usize = 8;
    pub const DEFAULT_ANGLES: usize = 128;

    pub fn new(radii: Vec<T>, angles: usize) -> Result<Self> {
        if radii.is_empty() {
            return Err(usage("grid needs at least one radius"));
        }
        if angles < Self::MIN_ANGLES {
            return Err(usage(format!("grid needs >= {} angles, got {angles}", Self::MIN_ANGLES)));
        }
        if !(radii[0] > T::zero()) {
            return Err(domain(format!("radii must be > 0, got {}", radii[0])));
        }
        if radii.windows(2).any(|w| !(w[0] < w[1])) {
            return Err(usage("radii must be strictly ascending"));
        }
        let last = *radii.last().expect("non-empty");
        if !(last < T::one()) {
            return Err(domain(format!("r_max must be < 1, got {last}")));
        }
        Ok(Self { radii, angles })
    }

    /// Radii `0.05, 0.10, …` strictly below `r_max`, then `r_max` itself.
    pub fn with_rmax(r_max: T, angles: usize) -> Result<Self> {
        let step = T::lit(0.05);
        let mut radii: Vec<T> = (1..).map(|k| step * T::of(k)).take_while(|&r| r < r_max - T::lit(1e-9)).collect();
        radii.push(r_max);
        Self::new(radii, angles)
    }

    /// `count` equally spaced radii `r_max·k/count`.
    pub fn uniform(r_max: T, count: usize, angles: usize) -> Result<Self> {
        if count == 0 {
            return Err(usage("uniform grid needs at least one radius"));
        }
        Self::new((1..=count).map(|k| r_max * T::of(k) / T::of(count)).collect(), angles)
    }

    pub fn radii(&self) -> &[T] {
        &self.radii
    }

    pub fn angles(&self) -> usize {
        self.angles
    }

    pub fn r_max(&self) -> T {
        *self.radii.last().expect("non-empty")
    }

    pub fn len(&self) -> usize {
        self.radii.len() * self.angles
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn theta(&self, k: usize) -> T {
        T::PI() * T::lit(2.0) * T::of(k) / T::of(self.angles)
    }

    pub fn point(&self, radius_index: usize, k: usize) -> Complex<T> {
        Complex::from_polar(self.radii[radius_index], self.theta(k))
    }

    /// `(radius index, angle index, z)` in lexicographic `(r, θ)` order.
    pub fn points(&self) -> impl Iterator<Item = (usize, usize, Complex<T>)> + '_ {
        (0..self.radii.len()).flat_map(move |i| (0..self.angles).map(move |k| (i, k, self.point(i, k))))
    }
}

impl<T: Real> Default for DiskGrid<T> {
    /// Radii `0.05, …, 0.95, 0.99` with 128 angles.
    fn default() -> Self {
        Self::with_rmax(T::lit(0.99), Self::DEFAULT_ANGLES).expect("default grid is valid")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex<f64> {
        Complex::new(re, im)
    }

    fn loop_pochhammer(x: f64, k: usize) -> f64 {
        let mut p = 1.0;
        for j in 0..k {
            p *= x + j as f64;
        }
        p
    }

    #[test]
    fn pochhammer_examples() {
        assert_eq!(pochhammer::<f64>(3.7, 0).unwrap(), 1.0);
        assert_eq!(pochhammer::<f64>(1.0, 4).unwrap(), 24.0);
        assert!((pochhammer::<f64>(2.5, 3).unwrap() - loop_pochhammer(2.5, 3)).abs() < 1e-12);
        assert!((pochhammer::<f64>(2.5, 3).unwrap() - 39.375).abs() < 1e-12);
        assert!(matches!(pochhammer::<f64>(1.0, -1), Err(Error::Usage(_))));
    }

    #[test]
    fn koebe_coefficients() {
        let geo = koebe_frac(1.0, 2.0, 5).unwrap();
        assert!(geo.coeffs().iter().all(|&a| a == c(1.0, 0.0)));
        let k2 = koebe_frac(2.0, 1.0, 4).unwrap();
        let re: Vec<f64> = k2.coeffs().iter().map(|a| a.re).collect();
        assert_eq!(re, vec![1.0, 2.0, 3.0, 4.0]);
        let k3 = koebe_frac(3.0, 1.0, 4).unwrap();
        for n in 2..=4 {
            let oracle = loop_pochhammer(3.0, n - 1) / loop_pochhammer(1.0, n - 1);
            assert!((k3.coeff(n).re - oracle).abs() < 1e-12);
        }
        assert!(matches!(koebe_frac(0.5, 1.0, 4), Err(Error::Domain(_))));
        assert!(matches!(koebe_frac(1.0, 0.9, 4), Err(Error::Domain(_))));
    }

    #[test]
    fn evaluate_examples() {
        let geo = koebe_frac(1.0, 1.0, 30).unwrap();
        let v = geo.evaluate(c(0.5, 0.0)).unwrap();
        assert!((v.re - (1.0 - 0.5f64.powi(30))).abs() < 1e-15);
        assert_eq!(geo.evaluate(c(0.0, 0.0)).unwrap(), c(0.0, 0.0));
        let k = koebe_frac(2.0, 1.0, 50).unwrap();
        let v = k.evaluate(c(0.25, 0.0)).unwrap();
        assert!((v.re - 0.25 / 0.75f64.powi(2)).abs() < 1e-12);
        assert!(matches!(k.evaluate(c(1.0, 0.0)), Err(Error::Domain(_))));
        assert!(matches!(k.evaluate(c(0.8, 0.7)), Err(Error::Domain(_))));
    }

    #[test]
    fn derivative_examples() {
        let id = FracPowerSeries::identity(1.0, 5).unwrap();
        let z = c(0.3, 0.1);
        assert_eq!(id.evaluate_d1(z).unwrap(), c(1.0, 0.0));
        assert_eq!(id.evaluate_d2(z).unwrap(), c(0.0, 0.0));
        // leading term z keeps d1 = 1 for any mu
        let id_frac = FracPowerSeries::identity(2.5, 5).unwrap();
        assert_eq!(id_frac.evaluate_d1(z).unwrap(), c(1.0, 0.0));

        let k = koebe_frac(2.0, 1.0, 60).unwrap();
        let d1 = k.evaluate_d1(c(0.2, 0.0)).unwrap();
        assert!((d1.re - 1.2 / 0.8f64.powi(3)).abs() < 1e-12);
        assert!((d1.re - 2.34375).abs() < 1e-12);

        let g = koebe_frac(1.0, 2.0, 40).unwrap();
        let h = 1e-5;
        let z = c(0.5, 0.0);
        let fd = (g.evaluate(z + h).unwrap() - g.evaluate(z - h).unwrap()) / (2.0 * h);
        assert!((g.evaluate_d1(z).unwrap() - fd).norm() < 1e-6);
    }

    #[test]
    fn derivatives_at_origin() {
        let k = koebe_frac(2.0, 1.0, 8).unwrap();
        assert_eq!(k.evaluate_d1(c(0.0, 0.0)).unwrap(), c(1.0, 0.0));
        assert_eq!(k.evaluate_d2(c(0.0, 0.0)).unwrap(), c(4.0, 0.0));
        let frac = koebe_frac(2.0, 1.5, 8).unwrap();
        assert!(matches!(frac.evaluate_d1(c(0.0, 0.0)), Err(Error::Domain(_))));
        assert!(matches!(frac.evaluate_d2(c(0.0, 0.0)), Err(Error::Domain(_))));
        let sq = koebe_frac(2.0, 2.0, 8).unwrap();
        assert_eq!(sq.evaluate_d2(c(0.0, 0.0)).unwrap(), c(0.0, 0.0));
    }

    #[test]
    fn principal_branch_powers() {
        // z^{1.5} for z = -0.25 + 0i uses arg = pi
        let f = FracPowerSeries::from_real_higher(1.5, [1.0]).unwrap();
        let z = c(-0.25, 0.0);
        let expect = z + (z.ln() * 3.0).exp();
        assert!((f.evaluate(z).unwrap() - expect).norm() < 1e-15);
        let sq = FracPowerSeries::from_real_higher(2.0, [1.0]).unwrap();
        let z = c(0.3, -0.4);
        assert!((sq.evaluate(z).unwrap() - (z + z.powi(4))).norm() < 1e-15);
    }

    #[test]
    fn hadamard_examples() {
        let f = FracPowerSeries::from_higher(1.0, [c(0.2, 0.1), c(-0.3, 0.0), c(0.0, 0.5)]).unwrap();
        let ones = koebe_frac(1.0, 1.0, f.order()).unwrap();
        assert_eq!(hadamard(&f, &ones).unwrap().coeffs(), f.coeffs());
        let k = koebe_frac(2.0, 1.0, 4).unwrap();
        let kk = hadamard(&k, &k).unwrap();
        let re: Vec<f64> = kk.coeffs().iter().map(|a| a.re).collect();
        assert_eq!(re, vec![1.0, 4.0, 9.0, 16.0]);
        let id = FracPowerSeries::identity(1.0, 4).unwrap();
        assert_eq!(hadamard(&f, &id).unwrap(), id);
        let other = FracPowerSeries::identity(2.0, 4).unwrap();
        assert!(matches!(hadamard(&f, &other), Err(Error::Usage(_))));
        let short = FracPowerSeries::identity(1.0, 2).unwrap();
        assert_eq!(hadamard(&f, &short).unwrap().order(), 2);
    }

    #[test]
    fn class_membership() {
        let k = koebe_frac(2.0, 1.0, 16).unwrap();
        assert!(in_class_a_mu(&k, 2.0).unwrap());
        assert!(!in_class_a_mu(&k, 1.0).unwrap());
        let id = FracPowerSeries::identity(1.5, 16).unwrap();
        for alpha in [1.0, 2.5, 7.0] {
            assert!(in_class_a_mu(&id, alpha).unwrap());
            assert!(in_class_x_mu(&id, alpha).unwrap());
        }
        assert!(!in_class_x_mu(&k, 2.0).unwrap());
        let neg = FracPowerSeries::from_real_higher(1.0, [-0.5, -1.0]).unwrap();
        assert!(in_class_x_mu(&neg, 2.0).unwrap());
        assert!(matches!(in_class_a_mu(&k, 0.5), Err(Error::Domain(_))));
    }

    #[test]
    fn constructor_invariants() {
        assert!(FracPowerSeries::new(1.0, vec![c(1.0, 1e-300)]).is_err());
        assert!(FracPowerSeries::<f64>::new(1.0, vec![]).is_err());
        assert!(FracPowerSeries::new(0.5, vec![c(1.0, 0.0)]).is_err());
        assert!(FracPowerSeries::<f64>::identity(1.0, 0).is_err());
    }

    #[test]
    fn grid_layout() {
        let g: DiskGrid<f64> = DiskGrid::default();
        assert_eq!(g.radii().len(), 20);
        assert_eq!(g.angles(), 128);
        assert_eq!(g.r_max(), 0.99);
        assert!((g.radii()[18] - 0.95).abs() < 1e-12);
        assert!(g.points().all(|(_, _, z)| z.norm() > 0.0));
        let g = DiskGrid::<f64>::with_rmax(0.999, 64).unwrap();
        assert_eq!(*g.radii().last().unwrap(), 0.999);
        assert!(DiskGrid::new(vec![0.5, 0.4], 16).is_err());
        assert!(DiskGrid::new(vec![0.5, 1.0], 16).is_err());
        assert!(DiskGrid::new(vec![0.5], 4).is_err());
        assert!(DiskGrid::new(vec![0.0, 0.5], 16).is_err());
    }

    #[test]
    fn tail_reaches_closed_form() {
        let k = koebe_frac(2.0, 1.0, 16).unwrap();
        for z in [c(0.9, 0.0), c(-0.95, 0.1), c(0.0, 0.99)] {
            let j = k.jet_full(z).unwrap();
            let one = c(1.0, 0.0);
            let exact = z / ((one - z) * (one - z));
            let exact_d1 = (one + z) / (one - z).powi(3);
            let exact_d2 = (z + 2.0) * 2.0 / (one - z).powi(4);
            assert!((j.value - exact).norm() < 1e-12 * exact.norm().max(1.0));
            assert!((j.d1 - exact_d1).norm() < 1e-11 * exact_d1.norm().max(1.0));
            // cancellation near the rim costs about eps times the magnitude sum
            assert!((j.d2 - exact_d2).norm() < 1e-9 * exact_d2.norm().max(1.0));
        }
        // tail-free series: jet_full equals jet
        let p = k.without_tail();
        assert_eq!(p.jet_full(c(0.5, 0.2)).unwrap(), p.jet(c(0.5, 0.2)).unwrap());
    }

    #[test]
    fn radial_sums_split_at_the_order() {
        let k = koebe_frac(1.0, 1.0, 10).unwrap();
        let (stored, tail) = k.radial_abs_sums(0.5).unwrap();
        let oracle: f64 = (2..=10).map(|n| 0.5f64.powi(n)).sum();
        assert!((stored - oracle).abs() < 1e-15);
        assert!((stored + tail - 0.5).abs() < 1e-15);
        assert_eq!(k.without_tail().radial_abs_sums(0.5).unwrap().1, 0.0);
        assert!(k.radial_abs_sums(1.0).is_err());
    }

    #[test]
    fn tail_law_composition_cancels() {
        let a = HyperTail::new(vec![1.0], vec![0.0]).unwrap();
        let b = HyperTail::new(vec![0.0], vec![1.0]).unwrap();
        assert_eq!(a.compose(&b), HyperTail::unit());
        assert!(HyperTail::<f64>::new(vec![1.0], vec![]).is_err());
    }

    #[test]
    fn extended_follows_law() {
        let short = koebe_frac(3.0, 1.0, 5).unwrap().extended(12);
        let long = koebe_frac(3.0, 1.0, 12).unwrap();
        for n in 1..=12 {
            assert!((short.coeff(n) - long.coeff(n)).norm() < 1e-12 * long.coeff(n).norm());
        }
    }

    #[test]
    fn json_round_trip() {
        let k = koebe_frac(2.5, 1.5, 9).unwrap();
        let back = FracPowerSeries::<f64>::from_json(&k.to_json()).unwrap();
        assert_eq!(back, k);
        let bad = r#"{"mu": 1.0, "N": 3, "coeffs": [[1.0, 0.0]]}"#;
        assert!(FracPowerSeries::<f64>::from_json(bad).is_err());
    }

    #[test]
    fn single_precision_instantiation() {
        let k = koebe_frac(2.0f32, 1.0, 30).unwrap();
        let v = k.evaluate(Complex::new(0.25f32, 0.0)).unwrap();
        assert!((v.re - 0.25 / 0.5625).abs() < 1e-6);
        let j = k.jet_full(Complex::new(0.9f32, 0.0)).unwrap();
        assert!((j.value.re - 0.9 / 0.01).abs() < 1e-3 * 90.0);
    }
}
