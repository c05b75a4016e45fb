//! The incomplete-gamma entropy `S_{c,d}`.
//!
//! With `D = 1 − c + cd` and `L = ln(1/p^c)`,
//! `S_{c,d} = (e/D) Σ Γ(1 + d, 1 + L) − c/D`. Evaluation uses the finite form
//! `Γ(1 + d, K) = e^{−K} Σ_n d!/(d−n)! K^{d−n}`, expanded in powers of `L`;
//! the quadrature oracle integrates the gamma function directly.

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use super::distribution::Distribution;
use crate::numeric::{integrate_to_infinity, QuadratureError};

const QUAD_REL_TOL: f64 = 1e-13;

/// `S_{c,d}` split into its additive constant and its sum over states.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScdValue {
    pub value: f64,
    pub constant: f64,
    pub state_sum: f64,
}

/// `C_m = Σ_{k=0}^{d−m} d!/(d−k)! · binom(d−k, m)`, for `m = 0..=d`.
pub fn inner_coefficients(d: u32) -> Vec<BigUint> {
    let d = d as usize;
    let mut falling = vec![BigUint::one(); d + 1]; // d!/(d−k)!
    for k in 1..=d {
        falling[k] = &falling[k - 1] * BigUint::from(d - k + 1);
    }
    (0..=d)
        .map(|m| {
            (0..=d - m)
                .map(|k| &falling[k] * binomial(d - k, m))
                .fold(BigUint::zero(), |acc, x| acc + x)
        })
        .collect()
}

fn binomial(n: usize, k: usize) -> BigUint {
    let mut acc = BigUint::one();
    for i in 0..k {
        acc = acc * BigUint::from(n - i) / BigUint::from(i + 1);
    }
    acc
}

fn denominator(c: f64, d: u32) -> f64 {
    1.0 - c + c * d as f64
}

/// `true` for the removable singularity `c = 1, d = 0` (`D = 0`).
pub fn is_degenerate(c: f64, d: u32) -> bool {
    c == 1.0 && d == 0
}

/// Per-state term and additive constant of `S_{c,d}`.
#[derive(Debug, Clone, PartialEq)]
pub struct ScdForm {
    c: f64,
    coeffs: Vec<f64>,
    scale: f64,
    constant: f64,
}

impl ScdForm {
    pub fn new(c: f64, d: u32) -> Self {
        if is_degenerate(c, d) {
            // limit 1 + Σ p ln(1/p)
            return ScdForm {
                c,
                coeffs: vec![0.0, 1.0],
                scale: 1.0,
                constant: 1.0,
            };
        }
        let den = denominator(c, d);
        ScdForm {
            c,
            coeffs: inner_coefficients(d).iter().map(|x| x.to_f64().unwrap_or(f64::INFINITY)).collect(),
            scale: 1.0 / den,
            constant: -c / den,
        }
    }

    /// `p^c Σ_m C_m L^m / D` with `L = c ln(1/p)`; zero at `p = 0`.
    pub fn term(&self, p: f64) -> f64 {
        if p <= 0.0 {
            return 0.0;
        }
        let l = -self.c * p.ln();
        let poly = self.coeffs.iter().rev().fold(0.0, |acc, cm| acc * l + cm);
        self.scale * p.powf(self.c) * poly
    }

    pub fn constant(&self) -> f64 {
        self.constant
    }
}

/// Evaluate `S_{c,d}` (with `k_B = 1`) from the polynomial form.
///
/// At `c = 1, d = 0` the analytic limit `1 + Σ p ln(1/p)` is used.
pub fn evaluate(c: f64, d: u32, dist: &Distribution) -> ScdValue {
    let form = ScdForm::new(c, d);
    let state_sum = dist.sum_over_states(|p| form.term(p));
    ScdValue {
        value: state_sum + form.constant(),
        constant: form.constant(),
        state_sum,
    }
}

/// `e^{x} Γ(1 + d, x) = ∫_0^∞ (x + u)^d e^{−u} du`, by quadrature.
fn scaled_upper_gamma(d: u32, x: f64) -> Result<f64, QuadratureError> {
    let d = d as i32;
    integrate_to_infinity(|u| (x + u).powi(d) * (-u).exp(), 0.0, QUAD_REL_TOL, 0.0).map(|q| q.value)
}

/// `S_{c,d}` from the incomplete-gamma form, integrating numerically.
///
/// At `c = 1, d = 0` both numerator and `D` vanish; the value is the ratio of
/// their `c`-derivatives, where `∂_x Γ(s, x) = −x^{s−1} e^{−x}` gives
/// `1 − Σ p ln p`.
pub fn gamma_oracle(c: f64, d: u32, dist: &Distribution) -> Result<f64, QuadratureError> {
    if is_degenerate(c, d) {
        let n_prime = dist.sum_over_states(|p| if p > 0.0 { p * p.ln() } else { 0.0 }) - 1.0;
        return Ok(n_prime / -1.0);
    }
    let mut terms = Vec::with_capacity(dist.atoms().len());
    for &(p, m) in dist.atoms() {
        if p <= 0.0 {
            continue;
        }
        let x = 1.0 - c * p.ln();
        // e Γ(1+d, x) = e^{1−x} e^{x} Γ(1+d, x) = p^c e^{x} Γ(1+d, x)
        terms.push(m * p.powf(c) * scaled_upper_gamma(d, x)?);
    }
    let den = denominator(c, d);
    Ok(crate::numeric::pairwise_sum(&terms) / den - c / den)
}

/// Quadrature and finite-sum values of `∫_K^∞ t^d e^{−t} dt`.
pub fn gamma_identity(d: u32, k: f64) -> Result<(f64, f64), QuadratureError> {
    let di = d as i32;
    let quad = integrate_to_infinity(|t| t.powi(di) * (-t).exp(), k, QUAD_REL_TOL, 0.0)?.value;
    let mut sum = 0.0;
    let mut falling = 1.0;
    for n in 0..=d {
        if n > 0 {
            falling *= (d - n + 1) as f64;
        }
        sum += falling * k.powi((d - n) as i32);
    }
    Ok((quad, (-k).exp() * sum))
}

/// `δ_k = (−1)^{k+1} (k+1) / (k! (k + d + 1))`, the coefficients of
/// `Γ(1 + d, t) = d! + t^d Σ_k δ_k t^{k+1}/(k+1)`.
pub fn lower_gamma_delta(d: u32, k: u32) -> BigRational {
    let mut factorial = BigRational::one();
    for i in 1..=k {
        factorial *= BigRational::from_integer(i.into());
    }
    let sign = if k.is_multiple_of(2) { -BigRational::one() } else { BigRational::one() };
    sign * BigRational::from_integer((k + 1).into()) / (factorial * BigRational::from_integer((k + d + 1).into()))
}

/// `Γ(1 + d, t)` from the `δ_k` series; converges for every `t` but loses
/// accuracy to cancellation once `t` is large.
pub fn upper_gamma_series(d: u32, t: f64) -> f64 {
    let mut factorial = 1.0;
    for i in 1..=d {
        factorial *= i as f64;
    }
    let mut sum = 0.0;
    // term_k = δ_k t^{k+1}/(k+1) = (−1)^{k+1} t^{k+1} / (k! (k+d+1))
    let mut power = t; // t^{k+1}/k!
    for k in 0..500u32 {
        if k > 0 {
            power *= t / k as f64;
        }
        let sign = if k % 2 == 0 { -1.0 } else { 1.0 };
        let term = sign * power / (k + d + 1) as f64;
        sum += term;
        if (k as f64) > t && term.abs() <= 1e-17 * sum.abs().max(f64::MIN_POSITIVE) {
            break;
        }
    }
    factorial + t.powi(d as i32) * sum
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::rat;

    fn as_u64(v: Vec<BigUint>) -> Vec<u64> {
        v.iter().map(|x| x.to_u64().unwrap()).collect()
    }

    #[test]
    fn inner_coefficients_small_d() {
        assert_eq!(as_u64(inner_coefficients(0)), vec![1]);
        assert_eq!(as_u64(inner_coefficients(1)), vec![2, 1]);
        assert_eq!(as_u64(inner_coefficients(2)), vec![5, 4, 1]);
        assert_eq!(as_u64(inner_coefficients(3)), vec![16, 15, 6, 1]);
        assert_eq!(as_u64(inner_coefficients(5)), vec![326, 325, 160, 50, 10, 1]);
    }

    #[test]
    fn special_cases() {
        let dist = Distribution::new(vec![0.5, 0.3, 0.2]).unwrap();
        let s1: f64 = [0.5f64, 0.3, 0.2].iter().map(|p| -p * p.ln()).sum();
        let s2: f64 = [0.5f64, 0.3, 0.2].iter().map(|p| p * p.ln().powi(2)).sum();
        assert!((evaluate(1.0, 1, &dist).value - (1.0 + s1)).abs() < 1e-14);
        assert!((evaluate(1.0, 2, &dist).value - (2.0 + 2.0 * s1 + s2 / 2.0)).abs() < 1e-14);
        assert!((evaluate(1.0, 0, &dist).value - (1.0 + s1)).abs() < 1e-15);
        // d = 0: Tsallis with q = c, shifted by one
        let q: f64 = 0.6;
        let tsallis = ([0.5f64, 0.3, 0.2].iter().map(|p| p.powf(q)).sum::<f64>() - 1.0) / (1.0 - q);
        assert!((evaluate(q, 0, &dist).value - (1.0 + tsallis)).abs() < 1e-14);
    }

    #[test]
    fn polynomial_form_matches_quadrature() {
        let dist = Distribution::new(vec![0.6, 0.25, 0.1, 0.05, 0.0]).unwrap();
        for &(c, d) in &[(0.3, 0), (0.5, 1), (0.9, 3), (1.0, 0), (1.0, 5), (0.2, 7)] {
            let a = evaluate(c, d, &dist).value;
            let b = gamma_oracle(c, d, &dist).unwrap();
            assert!((a - b).abs() <= 1e-11 * a.abs().max(1.0), "c={c} d={d}: {a} vs {b}");
        }
    }

    #[test]
    fn finite_gamma_identity() {
        for d in 0..6 {
            for &k in &[0.0, 0.5, 1.0, 4.0, 30.0] {
                let (quad, closed) = gamma_identity(d, k).unwrap();
                assert!((quad - closed).abs() <= 1e-12 * closed, "d={d} K={k}");
            }
        }
    }

    #[test]
    fn delta_coefficients() {
        assert_eq!(lower_gamma_delta(2, 0), rat(-1, 3));
        assert_eq!(lower_gamma_delta(2, 1), rat(1, 2));
        assert_eq!(lower_gamma_delta(0, 2), rat(-1, 2));
        for d in 0..4 {
            for &t in &[0.3, 1.0, 3.0] {
                let (quad, _) = gamma_identity(d, t).unwrap();
                let series = upper_gamma_series(d, t);
                assert!((series - quad).abs() <= 1e-11 * quad, "d={d} t={t}");
            }
        }
    }
}
