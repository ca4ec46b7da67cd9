//! Real Gamma function and the Fox-Wright `₂Ψ₁` series.
//!
//! Series convention: `₂Ψ₁[z | (a1,A1),(a2,A2); (b1,B1)] =
//! Σ_{n≥0} Γ(a1+A1 n) Γ(a2+A2 n) / Γ(b1+B1 n) · zⁿ/n!`.

use crate::error::{domain, usage, Error, Result};
use crate::scalar::Real;

// Lanczos approximation, g = 10.900511 with 11 terms (the statrs/Pugh set).
const LANCZOS_G: f64 = 10.900511;
#[allow(clippy::excessive_precision)] // published digits, kept verbatim
const LANCZOS_DK: [f64; 11] = [
    2.48574089138753565546e-5,
    1.05142378581721974210,
    -3.45687097222016235469,
    4.51227709466894823700,
    -2.98285225323576655721,
    1.05639711577126713077,
    -1.95428773191645869583e-1,
    1.70970543404441224307e-2,
    -5.71926117404305781283e-4,
    4.63399473359905636708e-6,
    -2.71994908488607703910e-9,
];
const TWO_SQRT_E_OVER_PI: f64 = 1.860_382_734_205_265_717_336_249_247_266_663_112_059_421_841_408_575_5;
const LN_2_SQRT_E_OVER_PI: f64 = 0.620_782_237_635_245_222_345_518_445_781_647_212_251_852_727_902_597_8;

/// Above this argument Γ is formed as `exp(ln Γ)`.
const LOG_SPACE_FROM: f64 = 100.0;

fn lanczos_sum<T: Real>(x: T) -> T {
    LANCZOS_DK
        .iter()
        .enumerate()
        .skip(1)
        .fold(T::lit(LANCZOS_DK[0]), |s, (i, &dk)| s + T::lit(dk) / (x + T::of(i) - T::one()))
}

fn check_positive<T: Real>(x: T) -> Result<()> {
    if !(x > T::zero()) || !x.is_finite() {
        return Err(domain(format!("gamma needs a finite x > 0, got {x}")));
    }
    Ok(())
}

/// `ln Γ(x)` for `x > 0`.
pub fn ln_gamma<T: Real>(x: T) -> Result<T> {
    check_positive(x)?;
    let half = T::lit(0.5);
    if x < half {
        // reflection; 1 - x > 1/2
        let pi = T::PI();
        let s = lanczos_sum(T::one() - x);
        return Ok(pi.ln()
            - (pi * x).sin().ln()
            - s.ln()
            - T::lit(LN_2_SQRT_E_OVER_PI)
            - (half - x) * ((half - x + T::lit(LANCZOS_G)) / T::E()).ln());
    }
    let s = lanczos_sum(x);
    Ok(s.ln() + T::lit(LN_2_SQRT_E_OVER_PI) + (x - half) * ((x - half + T::lit(LANCZOS_G)) / T::E()).ln())
}

/// `Γ(x)` for `x > 0`; overflows to `+∞` past `x ≈ 171.6`.
pub fn gamma_real<T: Real>(x: T) -> Result<T> {
    check_positive(x)?;
    if x.fract() == T::zero() && x <= T::lit(LOG_SPACE_FROM) {
        // exact for factorials that fit the mantissa
        let n = x.to_usize().expect("small integer");
        return Ok((1..n).fold(T::one(), |acc, k| acc * T::of(k)));
    }
    let half = T::lit(0.5);
    if x > T::lit(LOG_SPACE_FROM) {
        return Ok(ln_gamma(x)?.exp());
    }
    if x < half {
        let pi = T::PI();
        let s = lanczos_sum(T::one() - x);
        return Ok(pi
            / ((pi * x).sin()
                * s
                * T::lit(TWO_SQRT_E_OVER_PI)
                * ((half - x + T::lit(LANCZOS_G)) / T::E()).powf(half - x)));
    }
    let s = lanczos_sum(x);
    Ok(s * T::lit(TWO_SQRT_E_OVER_PI) * ((x - half + T::lit(LANCZOS_G)) / T::E()).powf(x - half))
}

/// Parameters `((a1,A1),(a2,A2);(b1,B1))` of `₂Ψ₁` plus the relative
/// truncation tolerance.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FoxWrightParams<T> {
    pub a1: T,
    pub big_a1: T,
    pub a2: T,
    pub big_a2: T,
    pub b1: T,
    pub big_b1: T,
    pub tol: T,
}

/// Partial sum together with a majorant of the omitted tail.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FoxWrightValue<T> {
    pub value: T,
    pub tail_bound: T,
    pub terms: usize,
}

impl<T: Real> FoxWrightValue<T> {
    fn scaled(self, k: T) -> Self {
        Self { value: self.value * k, tail_bound: self.tail_bound * k, terms: self.terms }
    }
}

impl<T: Real> FoxWrightParams<T> {
    pub const DEFAULT_TOL: f64 = 1e-12;
    pub const TERM_BUDGET: usize = 10_000;

    /// Unit weights on every pair and the default tolerance.
    pub fn unit_weights(a1: T, a2: T, b1: T) -> Result<Self> {
        Self::new([(a1, T::one()), (a2, T::one())], (b1, T::one()), T::lit(Self::DEFAULT_TOL))
    }

    pub fn new(numer: [(T, T); 2], denom: (T, T), tol: T) -> Result<Self> {
        let p = Self {
            a1: numer[0].0,
            big_a1: numer[0].1,
            a2: numer[1].0,
            big_a2: numer[1].1,
            b1: denom.0,
            big_b1: denom.1,
            tol,
        };
        p.validate()?;
        Ok(p)
    }

    fn validate(&self) -> Result<()> {
        let all = [self.a1, self.big_a1, self.a2, self.big_a2, self.b1, self.big_b1, self.tol];
        if all.iter().any(|v| !v.is_finite()) {
            return Err(usage("Fox-Wright parameters must be finite"));
        }
        if !(self.big_a1 > T::zero() && self.big_a2 > T::zero() && self.big_b1 > T::zero()) {
            return Err(domain("Fox-Wright weights A1, A2, B1 must be > 0"));
        }
        // with positive weights, a + A n > 0 for all n >= 0 iff a > 0
        if !(self.a1 > T::zero() && self.a2 > T::zero() && self.b1 > T::zero()) {
            return Err(domain("Fox-Wright parameters a1, a2, b1 must be > 0 (Gamma poles on the summation path)"));
        }
        if !(self.tol > T::zero()) {
            return Err(usage("Fox-Wright tolerance must be > 0"));
        }
        Ok(())
    }

    fn unit(&self) -> bool {
        self.big_a1 == T::one() && self.big_a2 == T::one() && self.big_b1 == T::one()
    }

    /// `n ↦ ratio of consecutive terms` without the `z` factor.
    fn term_ratio(&self, n: usize) -> Result<T> {
        let nf = T::of(n);
        let step = |a: T, big_a: T| -> Result<T> {
            let from = a + big_a * nf;
            if big_a.fract() == T::zero() && big_a <= T::lit(16.0) {
                let k = big_a.to_usize().expect("small integer weight");
                Ok((0..k).fold(T::one(), |acc, j| acc * (from + T::of(j))))
            } else {
                Ok((ln_gamma(from + big_a)? - ln_gamma(from)?).exp())
            }
        };
        Ok(step(self.a1, self.big_a1)? * step(self.a2, self.big_a2)? / step(self.b1, self.big_b1)? / (nf + T::one()))
    }

    /// Upper bound for the ratio of consecutive terms from index `n` on.
    fn ratio_sup(&self, n: usize, z: T, current: T) -> T {
        if self.unit() {
            // (a1+m)/(m+1) and (a2+m)/(b1+m) are each monotone towards 1
            let nf = T::of(n);
            let f1 = ((self.a1 + nf) / (nf + T::one())).max(T::one());
            let f2 = ((self.a2 + nf) / (self.b1 + nf)).max(T::one());
            return z * f1 * f2;
        }
        let excess = self.big_a1 + self.big_a2 - self.big_b1 - T::one();
        let limit = if excess.abs() <= T::lit(1e-12) {
            z * self.big_a1.powf(self.big_a1) * self.big_a2.powf(self.big_a2) / self.big_b1.powf(self.big_b1)
        } else if excess < T::zero() {
            T::zero()
        } else {
            T::infinity()
        };
        current.max(limit)
    }
}

/// `₂Ψ₁` at real `z ∈ [0, 1)`, summed until both the current term and a
/// geometric majorant of the rest fall below `tol·sum`.
pub fn fox_wright_2psi1<T: Real>(p: &FoxWrightParams<T>, z: T) -> Result<FoxWrightValue<T>> {
    p.validate()?;
    if !(z >= T::zero() && z < T::one()) {
        return Err(domain(format!("Fox-Wright argument must lie in [0, 1), got {z}")));
    }
    let direct = gamma_real(p.a1)? * gamma_real(p.a2)? / gamma_real(p.b1)?;
    let mut term = if direct.is_finite() && direct > T::zero() {
        direct
    } else {
        (ln_gamma(p.a1)? + ln_gamma(p.a2)? - ln_gamma(p.b1)?).exp()
    };
    let mut sum = term;
    if z == T::zero() {
        return Ok(FoxWrightValue { value: sum, tail_bound: T::zero(), terms: 1 });
    }
    for n in 0..FoxWrightParams::<T>::TERM_BUDGET {
        term = term * p.term_ratio(n)? * z;
        sum = sum + term;
        let next = p.term_ratio(n + 1)? * z;
        let q = p.ratio_sup(n + 1, z, next);
        if term <= p.tol * sum && q < T::one() {
            let tail = term * q / (T::one() - q);
            if tail <= p.tol * sum {
                return Ok(FoxWrightValue { value: sum, tail_bound: tail, terms: n + 2 });
            }
        }
        if !sum.is_finite() {
            break;
        }
    }
    Err(Error::Convergence(format!(
        "2Psi1 at z = {z} did not converge within {} terms",
        FoxWrightParams::<T>::TERM_BUDGET
    )))
}

fn check_bound_args<T: Real>(beta: T, mu: T, r: T) -> Result<()> {
    if !(beta >= T::one()) || !beta.is_finite() {
        return Err(domain(format!("beta must be >= 1, got {beta}")));
    }
    if !(mu >= T::one()) || !mu.is_finite() {
        return Err(domain(format!("mu must be >= 1, got {mu}")));
    }
    if !(r > T::zero() && r < T::one()) {
        return Err(domain(format!("r must lie in (0, 1), got {r}")));
    }
    Ok(())
}

/// Which of the two integral-operator bounds.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BoundKind {
    /// Starlike premise, first numerator pair `(3,1)`.
    Starlike,
    /// Convex premise, first numerator pair `(2,1)`.
    Convex,
}

impl BoundKind {
    fn first_numerator(self) -> f64 {
        match self {
            BoundKind::Starlike => 3.0,
            BoundKind::Convex => 2.0,
        }
    }
}

/// `Γ(β+1) r^{2μ} ₂Ψ₁[r^μ | (a,1),(1,1); (β+2,1)]` with `a = 3` (starlike)
/// or `a = 2` (convex), with the scaled tail bound.
pub fn integral_operator_bound<T: Real>(kind: BoundKind, beta: T, mu: T, r: T) -> Result<FoxWrightValue<T>> {
    check_bound_args(beta, mu, r)?;
    let p = FoxWrightParams::unit_weights(T::lit(kind.first_numerator()), T::one(), beta + T::lit(2.0))?;
    let psi = fox_wright_2psi1(&p, r.powf(mu))?;
    Ok(psi.scaled(gamma_real(beta + T::one())? * r.powf(T::lit(2.0) * mu)))
}

pub fn theorem2_bound<T: Real>(beta: T, mu: T, r: T) -> Result<T> {
    Ok(integral_operator_bound(BoundKind::Starlike, beta, mu, r)?.value)
}

pub fn theorem3_bound<T: Real>(beta: T, mu: T, r: T) -> Result<T> {
    Ok(integral_operator_bound(BoundKind::Convex, beta, mu, r)?.value)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gamma_examples() {
        assert!((gamma_real::<f64>(1.0).unwrap() - 1.0).abs() < 1e-15);
        assert!((gamma_real::<f64>(5.0).unwrap() - 24.0).abs() < 24.0 * 1e-13);
        let sqrt_pi = std::f64::consts::PI.sqrt();
        assert!((gamma_real::<f64>(0.5).unwrap() - sqrt_pi).abs() < 1e-13);
        // recurrence cross-check
        assert!((gamma_real::<f64>(1.5).unwrap() - 0.5 * gamma_real::<f64>(0.5).unwrap()).abs() < 1e-13);
        assert!(matches!(gamma_real::<f64>(0.0), Err(Error::Domain(_))));
        assert!(matches!(gamma_real::<f64>(-1.5), Err(Error::Domain(_))));
    }

    #[test]
    fn gamma_factorials_and_log_space() {
        let mut fact = 1.0f64;
        for n in 1..=30u32 {
            let g = gamma_real::<f64>(n as f64 + 1.0).unwrap();
            fact *= n as f64;
            assert!((g - fact).abs() <= 1e-12 * fact, "n = {n}");
        }
        // log-space branch against the recurrence from below
        let below = gamma_real::<f64>(100.0).unwrap();
        let above = gamma_real::<f64>(101.0).unwrap();
        assert!((above / (100.0 * below) - 1.0).abs() < 1e-12);
        assert!((ln_gamma::<f64>(150.0).unwrap() - gamma_real::<f64>(150.0).unwrap().ln()).abs() < 1e-10);
    }

    #[test]
    fn gamma_recurrence_sweep() {
        let mut x = 0.1;
        while x <= 50.0 {
            let lhs = gamma_real::<f64>(x + 1.0).unwrap();
            let rhs = x * gamma_real::<f64>(x).unwrap();
            assert!((lhs - rhs).abs() <= 1e-11 * lhs.abs(), "x = {x}");
            x += 0.37;
        }
    }

    #[test]
    fn fox_wright_examples() {
        let ones = FoxWrightParams::<f64>::unit_weights(1.0, 1.0, 1.0).unwrap();
        assert_eq!(fox_wright_2psi1(&ones, 0.0).unwrap().value, 1.0);
        let v = fox_wright_2psi1(&ones, 0.5).unwrap();
        assert!((v.value - 2.0).abs() < 1e-11);
        let p = FoxWrightParams::<f64>::unit_weights(3.0, 1.0, 3.0).unwrap();
        assert!((fox_wright_2psi1(&p, 0.5).unwrap().value - 2.0).abs() < 1e-11);
        assert!(matches!(fox_wright_2psi1(&ones, 1.0), Err(Error::Domain(_))));
        assert!(matches!(fox_wright_2psi1(&ones, -0.1), Err(Error::Domain(_))));
        assert!(FoxWrightParams::<f64>::unit_weights(0.0, 1.0, 1.0).is_err());
    }

    #[test]
    fn fox_wright_nonconvergent_regime() {
        // A1 + A2 - B1 - 1 = 1 > 0: zero radius of convergence
        let p = FoxWrightParams::<f64>::new([(1.0, 2.0), (1.0, 1.0)], (1.0, 1.0), 1e-12).unwrap();
        assert!(matches!(fox_wright_2psi1(&p, 0.5), Err(Error::Convergence(_))));
    }

    #[test]
    fn fox_wright_non_unit_weights() {
        // (1,2),(1,1);(1,2): Γ(1+2n)Γ(1+n)/Γ(1+2n)/n! z^n = Σ z^n
        let p = FoxWrightParams::<f64>::new([(1.0, 2.0), (1.0, 1.0)], (1.0, 2.0), 1e-12).unwrap();
        assert!((fox_wright_2psi1(&p, 0.3).unwrap().value - 1.0 / 0.7).abs() < 1e-11);
        // non-integer weights route through ln-gamma differences
        let q = FoxWrightParams::<f64>::new([(1.0, 0.5), (1.0, 1.0)], (1.0, 0.5), 1e-12).unwrap();
        assert!((fox_wright_2psi1(&q, 0.3).unwrap().value - 1.0 / 0.7).abs() < 1e-10);
    }

    #[test]
    fn bound_examples() {
        assert!((theorem2_bound::<f64>(1.0, 1.0, 0.5).unwrap() - 0.5).abs() < 1e-10);
        assert!((theorem2_bound::<f64>(1.0, 2.0, 0.5).unwrap() - 1.0 / 12.0).abs() < 1e-10);
        let expect = -(0.5f64.ln()) - 0.5;
        assert!((theorem3_bound::<f64>(1.0, 1.0, 0.5).unwrap() - expect).abs() < 1e-10);
        // small-r leading terms
        for beta in [1.0, 2.5, 4.0] {
            let r: f64 = 1e-4;
            let t2 = theorem2_bound::<f64>(beta, 1.5, r).unwrap();
            let t3 = theorem3_bound::<f64>(beta, 1.5, r).unwrap();
            let lead = r.powf(3.0);
            assert!((t2 / (2.0 * lead / (beta + 1.0)) - 1.0).abs() < 1e-3);
            assert!((t3 / (lead / (beta + 1.0)) - 1.0).abs() < 1e-3);
        }
        assert!(theorem2_bound::<f64>(0.5, 1.0, 0.5).is_err());
        assert!(theorem2_bound::<f64>(1.0, 1.0, 1.0).is_err());
        assert!(theorem3_bound::<f64>(1.0, 0.5, 0.5).is_err());
    }
}
