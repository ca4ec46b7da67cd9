//! Coefficient-weight operators on fractional series.
//!
//! * `D^{β,μ}` multiplies `a_n` by `(β+1)_{n−1}/(n−1)!`, i.e. convolution with
//!   `z^μ/(1−z^μ)^{β+1}`;
//! * `I_{β,μ}` divides by the same weight (its convolution inverse);
//! * `z(I_{β,μ}F)′` carries the extra factor `μn`.
//!
//! Each operator composes the series tail law with the ratio law of its
//! weights, so a generator keeps an exact tail after any chain of transforms.

use num_complex::Complex;

use crate::error::{domain, usage, Result};
use crate::fracseries::{FracPowerSeries, HyperTail};
use crate::scalar::Real;
use crate::specialfn::gamma_real;

/// Operator order `β`, generator parameter `α` and exponent `μ`, validated together.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OperatorParams<T> {
    pub beta: T,
    pub alpha: T,
    pub mu: T,
}

impl<T: Real> OperatorParams<T> {
    pub fn new(beta: T, alpha: T, mu: T) -> Result<Self> {
        check_beta(beta)?;
        if !(alpha >= T::one()) || !alpha.is_finite() {
            return Err(domain(format!("alpha must be a finite real >= 1, got {alpha}")));
        }
        if !(mu >= T::one()) || !mu.is_finite() {
            return Err(domain(format!("mu must be a finite real >= 1, got {mu}")));
        }
        Ok(Self { beta, alpha, mu })
    }
}

/// Leading coefficient convention for `z(I F)′`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum LeadingTerm {
    /// Keep `b_1 = 1`.
    #[default]
    Unit,
    /// Differentiate the leading term as if it were `z^μ`, giving `b_1 = μ`.
    PowerRule,
}

fn check_beta<T: Real>(beta: T) -> Result<()> {
    if !(beta >= T::zero()) || !beta.is_finite() {
        return Err(domain(format!("beta must be a finite real >= 0, got {beta}")));
    }
    Ok(())
}

/// `(β+1)_{n−1}/(n−1)!` for `n = 1..=order`, by the same running product
/// that builds the generator coefficients (so the two agree bit for bit).
pub fn ruscheweyh_weights<T: Real>(beta: T, order: usize) -> Vec<T> {
    let base = beta + T::one();
    let mut w = T::one();
    (1..=order)
        .map(|n| {
            if n >= 2 {
                w = w * (base + T::of(n - 2)) / T::of(n - 1);
            }
            w
        })
        .collect()
}

/// `(β+1)_{n−1}/(n−1)!`; zero for `n = 0`.
pub fn ruscheweyh_weight<T: Real>(n: usize, beta: T) -> T {
    match n {
        0 => T::zero(),
        _ => *ruscheweyh_weights(beta, n).last().expect("n >= 1"),
    }
}

/// `(n−1)!/(β+1)_{n−1}`, reciprocal of [`ruscheweyh_weight`].
pub fn noor_weight<T: Real>(n: usize, beta: T) -> T {
    T::one() / ruscheweyh_weight(n, beta)
}

/// `μ·n!/(β+1)_{n−1}`, the `z(I F)′` weight as a factorial ratio.
pub fn factorial_form_weight<T: Real>(n: usize, beta: T, mu: T) -> T {
    mu * T::of(n) * noor_weight(n, beta)
}

/// `μ·Γ(n+1)Γ(β+1)/Γ(n+β)`, the same weight through the Gamma function.
pub fn gamma_form_weight<T: Real>(n: usize, beta: T, mu: T) -> Result<T> {
    if n == 0 {
        return Err(usage("weight index must be >= 1"));
    }
    check_beta(beta)?;
    let nf = T::of(n);
    Ok(mu * gamma_real(nf + T::one())? * gamma_real(beta + T::one())? / gamma_real(nf + beta)?)
}

/// `D^{β,μ}F`: `b_n = (β+1)_{n−1}/(n−1)!·a_n`.
pub fn ruscheweyh_frac<T: Real>(f: &FracPowerSeries<T>, beta: T) -> Result<FracPowerSeries<T>> {
    check_beta(beta)?;
    let w = ruscheweyh_weights(beta, f.order());
    let law = HyperTail::new(vec![beta], vec![T::zero()])?;
    Ok(f.reweighted(|n| w[n - 1], &law))
}

/// `I_{β,μ}F`: `b_n = (n−1)!/(β+1)_{n−1}·a_n`.
pub fn noor_frac<T: Real>(f: &FracPowerSeries<T>, beta: T) -> Result<FracPowerSeries<T>> {
    check_beta(beta)?;
    let w = ruscheweyh_weights(beta, f.order());
    // divide rather than multiply by the reciprocal so that the pair
    // D then I returns each coefficient to within one rounding
    let coeffs =
        f.coeffs().iter().zip(&w).enumerate().map(|(i, (&a, &wn))| if i == 0 { a } else { a / wn }).collect::<Vec<_>>();
    let out = FracPowerSeries::new(f.mu(), coeffs)?;
    let law = HyperTail::new(vec![T::zero()], vec![beta])?;
    Ok(match f.tail() {
        Some(t) => out.with_tail(t.compose(&law)),
        None => out,
    })
}

/// Raw coefficients of `z(I_{β,μ}F)′`: `b_n = μ·n!/(β+1)_{n−1}·a_n` for `n ≥ 2`
/// and `b_1` per `leading`.
pub fn z_noor_derivative_coeffs<T: Real>(
    f: &FracPowerSeries<T>,
    beta: T,
    leading: LeadingTerm,
) -> Result<Vec<Complex<T>>> {
    check_beta(beta)?;
    let mu = f.mu();
    let w = ruscheweyh_weights(beta, f.order());
    Ok(f.coeffs()
        .iter()
        .zip(&w)
        .enumerate()
        .map(|(i, (&a, &wn))| match (i, leading) {
            (0, LeadingTerm::Unit) => a,
            (0, LeadingTerm::PowerRule) => a * mu,
            _ => a * (mu * T::of(i + 1)) / wn,
        })
        .collect())
}

/// `z(I_{β,μ}F)′` with `b_1 = 1`.
pub fn z_noor_derivative<T: Real>(f: &FracPowerSeries<T>, beta: T) -> Result<FracPowerSeries<T>> {
    let coeffs = z_noor_derivative_coeffs(f, beta, LeadingTerm::Unit)?;
    let out = FracPowerSeries::new(f.mu(), coeffs)?;
    // ratio of μn/(β+1)_{n−1}·(n−1)! is (n+1)/(n+β)
    let law = HyperTail::new(vec![T::one()], vec![beta])?;
    Ok(match f.tail() {
        Some(t) => out.with_tail(t.compose(&law)),
        None => out,
    })
}

fn check_psi_args<T: Real>(alpha: T, beta: T, a_value: T) -> Result<()> {
    if !(alpha >= T::one()) || !alpha.is_finite() {
        return Err(domain(format!("alpha must be >= 1, got {alpha}")));
    }
    if !(beta >= T::one()) || !beta.is_finite() {
        return Err(domain(format!("beta must be >= 1, got {beta}")));
    }
    if !(a_value > T::zero()) || !a_value.is_finite() {
        return Err(domain(format!("A(a) must be > 0, got {a_value}")));
    }
    Ok(())
}

/// `ψ(n) = (α+1)_{n−1}·A(a) / (n·(β+1)_{n−1})`.
pub fn psi_weight<T: Real>(n: usize, alpha: T, beta: T, a_value: T) -> Result<T> {
    if n < 2 {
        return Err(usage(format!("psi weight needs n >= 2, got {n}")));
    }
    check_psi_args(alpha, beta, a_value)?;
    let ratio = (0..n - 1).fold(T::one(), |acc, k| acc * (alpha + T::one() + T::of(k)) / (beta + T::one() + T::of(k)));
    Ok(ratio * a_value / T::of(n))
}

/// Coefficient `αA(a)/(2β)` of the `|z|^{2μ}` growth bound.
pub fn psi_bound_coefficient<T: Real>(alpha: T, beta: T, a_value: T) -> Result<T> {
    check_psi_args(alpha, beta, a_value)?;
    Ok(alpha * a_value / (T::lit(2.0) * beta))
}

/// First `n` in `2..n_max` with `ψ(n+1) > ψ(n)`, or `None` if `ψ` does not
/// increase anywhere on `2..=n_max`.
pub fn psi_monotone_until<T: Real>(alpha: T, beta: T, a_value: T, n_max: usize) -> Result<Option<usize>> {
    check_psi_args(alpha, beta, a_value)?;
    let mut prev = psi_weight(2, alpha, beta, a_value)?;
    for n in 2..n_max {
        let next = psi_weight(n + 1, alpha, beta, a_value)?;
        if next > prev {
            return Ok(Some(n));
        }
        prev = next;
    }
    Ok(None)
}
