//! Small numerical kernels: reproducible summation, bracketed root finding
//! and adaptive Gauss-Kronrod quadrature.

use thiserror::Error;

/// Pairwise (cascade) summation; the result depends only on the input order.
pub fn pairwise_sum(values: &[f64]) -> f64 {
    const BLOCK: usize = 32;
    if values.len() <= BLOCK {
        return values.iter().sum();
    }
    let mid = values.len() / 2;
    pairwise_sum(&values[..mid]) + pairwise_sum(&values[mid..])
}

/// `x` rounded to `digits` significant digits, in plain notation for
/// moderate exponents and scientific notation otherwise.
pub fn format_significant(x: f64, digits: usize) -> String {
    let digits = digits.max(1);
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    let sci = format!("{:.*e}", digits - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("scientific format has an exponent");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-5..digits as i32).contains(&exp) {
        let decimals = (digits as i32 - 1 - exp).max(0) as usize;
        trim_zeros(&format!("{x:.decimals$}")).to_string()
    } else {
        format!("{}e{exp}", trim_zeros(mantissa))
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// Bisection for an increasing function on `[lo, hi]`.
///
/// Returns the midpoint of the final bracket after the bracket stops
/// shrinking or `max_iter` halvings.
pub fn bisect_increasing(f: impl Fn(f64) -> f64, target: f64, mut lo: f64, mut hi: f64, max_iter: usize) -> f64 {
    for _ in 0..max_iter {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if f(mid) < target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

#[derive(Debug, Clone, PartialEq, Error)]
#[error(
    "quadrature did not converge: estimate {estimate:e}, error estimate {error_estimate:e} after {intervals} subintervals"
)]
pub struct QuadratureError {
    pub estimate: f64,
    pub error_estimate: f64,
    pub intervals: usize,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quadrature {
    pub value: f64,
    pub error_estimate: f64,
    pub intervals: usize,
}

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_18,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_83,
];
// Gauss weights for the odd-indexed Kronrod nodes
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

fn gauss_kronrod_15(f: &impl Fn(f64) -> f64, a: f64, b: f64) -> (f64, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kronrod = WGK[7] * fc;
    let mut gauss = WG[3] * fc;
    for j in 0..7 {
        let dx = half * XGK[j];
        let sum = f(center - dx) + f(center + dx);
        kronrod += WGK[j] * sum;
        if j % 2 == 1 {
            gauss += WG[j / 2] * sum;
        }
    }
    (kronrod * half, ((kronrod - gauss) * half).abs())
}

/// Adaptive Gauss-Kronrod (7/15) quadrature of `f` over `[a, b]`.
pub fn integrate(
    f: impl Fn(f64) -> f64,
    a: f64,
    b: f64,
    rel_tol: f64,
    abs_tol: f64,
) -> Result<Quadrature, QuadratureError> {
    const MAX_INTERVALS: usize = 4000;
    let (v, e) = gauss_kronrod_15(&f, a, b);
    let mut pieces = vec![(a, b, v, e)];
    loop {
        let value: f64 = pieces.iter().map(|p| p.2).sum();
        let error: f64 = pieces.iter().map(|p| p.3).sum();
        if !(value.is_finite() && error.is_finite()) {
            return Err(QuadratureError {
                estimate: value,
                error_estimate: error,
                intervals: pieces.len(),
            });
        }
        if error <= abs_tol.max(rel_tol * value.abs()) {
            return Ok(Quadrature {
                value,
                error_estimate: error,
                intervals: pieces.len(),
            });
        }
        if pieces.len() >= MAX_INTERVALS {
            return Err(QuadratureError {
                estimate: value,
                error_estimate: error,
                intervals: pieces.len(),
            });
        }
        let worst = pieces
            .iter()
            .enumerate()
            .max_by(|x, y| x.1 .3.total_cmp(&y.1 .3))
            .map(|(i, _)| i)
            .expect("at least one piece");
        let (lo, hi, _, _) = pieces.swap_remove(worst);
        let mid = 0.5 * (lo + hi);
        let (v1, e1) = gauss_kronrod_15(&f, lo, mid);
        let (v2, e2) = gauss_kronrod_15(&f, mid, hi);
        pieces.push((lo, mid, v1, e1));
        pieces.push((mid, hi, v2, e2));
    }
}

/// `∫_a^∞ f(t) dt` through the map `t = a + s/(1 − s)`, `s ∈ [0, 1)`.
pub fn integrate_to_infinity(
    f: impl Fn(f64) -> f64,
    a: f64,
    rel_tol: f64,
    abs_tol: f64,
) -> Result<Quadrature, QuadratureError> {
    let g = |s: f64| {
        if s >= 1.0 {
            return 0.0;
        }
        let one_minus = 1.0 - s;
        let t = a + s / one_minus;
        let v = f(t) / (one_minus * one_minus);
        if v.is_finite() {
            v
        } else {
            0.0
        }
    };
    integrate(g, 0.0, 1.0, rel_tol, abs_tol)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pairwise_sum_of_many_equal_terms() {
        let v = vec![1e-6; 1_000_000];
        assert!((pairwise_sum(&v) - 1.0).abs() < 1e-13);
    }

    #[test]
    fn significant_digit_formatting() {
        assert_eq!(format_significant(1.0 / 3.0, 17), "0.33333333333333331");
        assert_eq!(format_significant(-2.5, 17), "-2.5");
        assert_eq!(format_significant(1e80, 17), "1e80");
        assert_eq!(format_significant(1.234e-9, 4), "1.234e-9");
        assert_eq!(format_significant(0.0, 17), "0");
        for x in [0.1, 1.0 / 7.0, 123456.789, 6.02214076e23, 1e-300] {
            assert_eq!(format_significant(x, 17).parse::<f64>().unwrap(), x);
        }
    }

    #[test]
    fn bisection_finds_square_root() {
        let r = bisect_increasing(|x| x * x, 2.0, 0.0, 2.0, 200);
        assert!((r - std::f64::consts::SQRT_2).abs() < 1e-15);
    }

    #[test]
    fn quadrature_polynomial_and_exponential() {
        let q = integrate(|x| x * x, 0.0, 3.0, 1e-14, 0.0).unwrap();
        assert!((q.value - 9.0).abs() < 1e-13);
        let q = integrate_to_infinity(|t| (-t).exp(), 0.0, 1e-13, 0.0).unwrap();
        assert!((q.value - 1.0).abs() < 1e-12);
        // ∫_0^∞ t^2 e^{-t} = 2
        let q = integrate_to_infinity(|t| t * t * (-t).exp(), 0.0, 1e-13, 0.0).unwrap();
        assert!((q.value - 2.0).abs() < 1e-12);
    }

    #[test]
    fn quadrature_reports_non_convergence() {
        let err = integrate(|x| 1.0 / x, 0.0, 1.0, 1e-10, 0.0).unwrap_err();
        assert!(!err.estimate.is_finite() || err.intervals >= 4000);
        assert!(err.to_string().contains("did not converge"));
    }
}
