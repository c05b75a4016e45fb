use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::coeff::{Coefficient, Param};
use crate::numeric::bisect_increasing;
use crate::series::TruncatedSeries;

/// A group exponential `G` with `G(0) = 0`, `G'(0) = 1`.
///
/// Closed forms are evaluated directly; the truncated series is only used to
/// feed the exact formal-group machinery.
#[derive(Debug, Clone, PartialEq)]
pub enum GroupExponential {
    /// `t`
    Identity,
    /// `(e^{σt} − 1)/σ`
    Deformed { sigma: Param },
    /// `sinh(κt)/κ`
    Sinh { kappa: Param },
    /// `(e^{at} − e^{bt})/(a − b)`
    Abel { a: Param, b: Param },
    /// `Σ w e^{rt}` with `Σ w = 0` and `Σ w r = 1`, stored as `(w, r)`.
    ExpSum { terms: Vec<(Param, Param)> },
    /// `Σ a_k t^{k+1}/(k+1)`, a polynomial.
    Polynomial { a: Vec<Param> },
}

fn mul(x: &Param, y: &Param) -> Param {
    Param::new(x.exact() * y.exact())
}

fn div(x: &Param, y: &Param) -> Param {
    Param::new(x.exact() / y.exact())
}

impl GroupExponential {
    /// `G̃(t) = G(ct)/c`, still normalized.
    pub fn scaled(&self, c: &Param) -> Self {
        if c.exact().is_one() {
            return self.clone();
        }
        match self {
            GroupExponential::Identity => GroupExponential::Identity,
            GroupExponential::Deformed { sigma } => GroupExponential::Deformed { sigma: mul(sigma, c) },
            GroupExponential::Sinh { kappa } => GroupExponential::Sinh { kappa: mul(kappa, c) },
            GroupExponential::Abel { a, b } => GroupExponential::Abel {
                a: mul(a, c),
                b: mul(b, c),
            },
            GroupExponential::ExpSum { terms } => GroupExponential::ExpSum {
                terms: terms.iter().map(|(w, r)| (div(w, c), mul(r, c))).collect(),
            },
            GroupExponential::Polynomial { a } => {
                let mut power = BigRational::one();
                let mut out = Vec::with_capacity(a.len());
                for ak in a {
                    out.push(Param::new(ak.exact() * &power));
                    power *= c.exact();
                }
                GroupExponential::Polynomial { a: out }
            }
        }
    }

    pub fn value(&self, t: f64) -> f64 {
        match self {
            GroupExponential::Identity => t,
            GroupExponential::Deformed { sigma } => {
                let s = sigma.value();
                (s * t).exp_m1() / s
            }
            GroupExponential::Sinh { kappa } => {
                let k = kappa.value();
                (k * t).sinh() / k
            }
            GroupExponential::Abel { a, b } => {
                let (a, b) = (a.value(), b.value());
                ((a * t).exp_m1() - (b * t).exp_m1()) / (a - b)
            }
            // Σ w = 0, so Σ w (e^{rt} − 1) avoids cancelling large weights
            GroupExponential::ExpSum { terms } => terms.iter().map(|(w, r)| w.value() * (r.value() * t).exp_m1()).sum(),
            GroupExponential::Polynomial { a } => {
                let mut acc = 0.0;
                for (k, ak) in a.iter().enumerate().rev() {
                    acc = acc * t + ak.value() / (k + 1) as f64;
                }
                acc * t
            }
        }
    }

    pub fn derivative(&self, t: f64) -> f64 {
        match self {
            GroupExponential::Identity => 1.0,
            GroupExponential::Deformed { sigma } => (sigma.value() * t).exp(),
            GroupExponential::Sinh { kappa } => (kappa.value() * t).cosh(),
            GroupExponential::Abel { a, b } => {
                let (a, b) = (a.value(), b.value());
                (a * (a * t).exp() - b * (b * t).exp()) / (a - b)
            }
            GroupExponential::ExpSum { terms } => terms
                .iter()
                .map(|(w, r)| w.value() * r.value() * (r.value() * t).exp())
                .sum(),
            GroupExponential::Polynomial { a } => {
                let mut acc = 0.0;
                for ak in a.iter().rev() {
                    acc = acc * t + ak.value();
                }
                acc
            }
        }
    }

    pub fn second_derivative(&self, t: f64) -> f64 {
        match self {
            GroupExponential::Identity => 0.0,
            GroupExponential::Deformed { sigma } => {
                let s = sigma.value();
                s * (s * t).exp()
            }
            GroupExponential::Sinh { kappa } => {
                let k = kappa.value();
                k * (k * t).sinh()
            }
            GroupExponential::Abel { a, b } => {
                let (a, b) = (a.value(), b.value());
                (a * a * (a * t).exp() - b * b * (b * t).exp()) / (a - b)
            }
            GroupExponential::ExpSum { terms } => terms
                .iter()
                .map(|(w, r)| {
                    let r = r.value();
                    w.value() * r * r * (r * t).exp()
                })
                .sum(),
            GroupExponential::Polynomial { a } => {
                let mut acc = 0.0;
                for (k, ak) in a.iter().enumerate().skip(1).rev() {
                    acc = acc * t + k as f64 * ak.value();
                }
                acc
            }
        }
    }

    /// `true` when [`inverse`](Self::inverse) uses a closed form.
    pub fn has_closed_inverse(&self) -> bool {
        matches!(
            self,
            GroupExponential::Identity | GroupExponential::Deformed { .. } | GroupExponential::Sinh { .. }
        )
    }

    /// `F(x)` with `G(F(x)) = x`, on the branch through the origin.
    ///
    /// Forms without a closed inverse are inverted by bisection along the
    /// monotone branch; `None` when `x` is outside the range of that branch.
    pub fn inverse(&self, x: f64) -> Option<f64> {
        if !x.is_finite() {
            return None;
        }
        match self {
            GroupExponential::Identity => Some(x),
            GroupExponential::Deformed { sigma } => {
                let s = sigma.value();
                let arg = s * x;
                (arg > -1.0).then(|| arg.ln_1p() / s)
            }
            GroupExponential::Sinh { kappa } => {
                let k = kappa.value();
                Some((k * x).asinh() / k)
            }
            _ => self.numeric_inverse(x),
        }
    }

    fn numeric_inverse(&self, x: f64) -> Option<f64> {
        if x == 0.0 {
            return Some(0.0);
        }
        let dir = x.signum();
        // walk outwards while G keeps increasing along the branch
        let mut inner = 0.0;
        let mut outer = dir * 0.5;
        loop {
            let g = self.value(outer);
            if g.is_nan() {
                return None;
            }
            if self.derivative(outer) <= 0.0 {
                // the branch turns between inner and outer
                let u = bisect_increasing(|u| -self.derivative(inner + u * (outer - inner)), 0.0, 0.0, 1.0, 200);
                let turn = inner + u * (outer - inner);
                if (self.value(turn) - x) * dir < 0.0 {
                    return None;
                }
                outer = turn;
                break;
            }
            if (g - x) * dir >= 0.0 {
                break;
            }
            inner = outer;
            outer *= 2.0;
            if outer.abs() > 1e6 {
                return None;
            }
        }
        let (lo, hi) = if dir > 0.0 { (inner, outer) } else { (outer, inner) };
        Some(bisect_increasing(|t| self.value(t), x, lo, hi, 400))
    }

    /// Truncated Taylor series of `G` through `t^order`.
    pub fn series<C: Coefficient>(&self, order: usize) -> TruncatedSeries<C> {
        let mut coeffs = vec![C::zero(); order + 1];
        // n! as the running denominator
        let mut factorial = C::one();
        for (n, slot) in coeffs.iter_mut().enumerate().skip(1) {
            factorial = factorial * C::from_int(n as i64);
            *slot = match self {
                GroupExponential::Identity => {
                    if n == 1 {
                        C::one()
                    } else {
                        C::zero()
                    }
                }
                GroupExponential::Deformed { sigma } => pow(&C::from_param(sigma), n - 1) / factorial.clone(),
                GroupExponential::Sinh { kappa } => {
                    if n % 2 == 1 {
                        pow(&C::from_param(kappa), n - 1) / factorial.clone()
                    } else {
                        C::zero()
                    }
                }
                GroupExponential::Abel { a, b } => {
                    let (a, b) = (C::from_param(a), C::from_param(b));
                    (pow(&a, n) - pow(&b, n)) / ((a - b) * factorial.clone())
                }
                GroupExponential::ExpSum { terms } => {
                    let mut acc = C::zero();
                    for (w, r) in terms {
                        acc = acc + C::from_param(w) * pow(&C::from_param(r), n);
                    }
                    acc / factorial.clone()
                }
                GroupExponential::Polynomial { a } => match a.get(n - 1) {
                    Some(ak) => C::from_param(ak) / C::from_int(n as i64),
                    None => C::zero(),
                },
            };
        }
        TruncatedSeries::new(coeffs)
    }

    /// Human-readable closed form.
    pub fn describe(&self) -> String {
        match self {
            GroupExponential::Identity => "t".to_string(),
            GroupExponential::Deformed { sigma } => format!("(exp({sigma}·t) − 1)/({sigma})"),
            GroupExponential::Sinh { kappa } => format!("sinh({kappa}·t)/({kappa})"),
            GroupExponential::Abel { a, b } => format!("(exp({a}·t) − exp({b}·t))/(({a}) − ({b}))"),
            GroupExponential::ExpSum { terms } => terms
                .iter()
                .map(|(w, r)| format!("({w})·exp({r}·t)"))
                .collect::<Vec<_>>()
                .join(" + "),
            GroupExponential::Polynomial { a } => a
                .iter()
                .enumerate()
                .filter(|(_, ak)| !ak.exact().is_zero())
                .map(|(k, ak)| format!("({ak})·t^{}/{}", k + 1, k + 1))
                .collect::<Vec<_>>()
                .join(" + "),
        }
    }
}

fn pow<C: Coefficient>(x: &C, n: usize) -> C {
    let mut acc = C::one();
    for _ in 0..n {
        acc = acc * x.clone();
    }
    acc
}
