//! Entropy specifications and their evaluation on probability distributions.
//!
//! A trace-form entropy `S[p] = k_B Σ p G(ln 1/p)` is fixed by its group
//! exponential `G`. Catalog entries are evaluated through their closed forms;
//! series expansions only serve coefficient reporting and cross-checks.

mod distribution;
mod exponential;
pub mod scd;
mod spec;

pub use distribution::{Distribution, DistributionError, JointDistribution, NORMALIZATION_TOLERANCE};
pub use exponential::GroupExponential;
pub use spec::{catalog, CatalogEntry, EntropyKind, EntropySpec};

use num_rational::BigRational;
use num_traits::One;
use thiserror::Error;

use crate::coeff::{Coefficient, Param};
use crate::numeric::QuadratureError;
use crate::series::TruncatedSeries;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EntropyError {
    #[error("{kind}: {reason}")]
    InvalidParameter { kind: String, reason: String },
    #[error("unknown entropy kind '{0}'")]
    UnknownKind(String),
    #[error("{0} has no group-exponential representation")]
    Unsupported(String),
    #[error(transparent)]
    Distribution(#[from] DistributionError),
    #[error("{0}")]
    Domain(String),
    #[error(transparent)]
    Numeric(#[from] QuadratureError),
}

/// The (scaled) group exponential of `spec`.
///
/// `S_δ`, `S_{q,δ}` and `S_{c,d}` with `d ≥ 1` have no such representation.
/// `S_{c,0}` maps to its constant-free part, a Tsallis entropy with `q = c`.
pub fn group_exponential_of(spec: &EntropySpec) -> Result<GroupExponential, EntropyError> {
    let one = BigRational::one();
    let base = match spec.kind() {
        EntropyKind::BoltzmannGibbs => GroupExponential::Identity,
        EntropyKind::Tsallis { q } => GroupExponential::Deformed {
            sigma: Param::new(&one - q.exact()),
        },
        EntropyKind::Kaniadakis { kappa } => GroupExponential::Sinh { kappa: kappa.clone() },
        EntropyKind::BorgesRoditi { a, b } => GroupExponential::Abel {
            a: a.clone(),
            b: b.clone(),
        },
        EntropyKind::Scd { c, d: 0 } => {
            if c.exact().is_one() {
                GroupExponential::Identity
            } else {
                GroupExponential::Deformed {
                    sigma: Param::new(&one - c.exact()),
                }
            }
        }
        EntropyKind::Generic { a } => GroupExponential::Polynomial { a: a.clone() },
        kind @ (EntropyKind::GroupEntropy { .. }
        | EntropyKind::SIII { .. }
        | EntropyKind::SIV { .. }
        | EntropyKind::SAlphaBetaQ { .. }) => {
            let (sigma, l, k) = kind.group_coefficients().expect("group kinds have coefficients");
            let terms = k
                .iter()
                .enumerate()
                .filter(|(_, kn)| !kn.is_zero())
                .map(|(i, kn)| {
                    let n = BigRational::from_integer((l as i64 + i as i64).into());
                    (Param::new(kn.exact() / sigma.exact()), Param::new(n * sigma.exact()))
                })
                .collect();
            GroupExponential::ExpSum { terms }
        }
        EntropyKind::Scd { .. } | EntropyKind::SDelta { .. } | EntropyKind::SQDelta { .. } => {
            return Err(EntropyError::Unsupported(spec.to_string()))
        }
    };
    Ok(base.scaled(spec.scale()))
}

/// Largest `δ` admitted by `S_δ` on `states` states.
pub fn max_delta(states: f64) -> f64 {
    1.0 + states.ln()
}

/// The per-state function `φ` and constant `s₀` of `S[p] = k_B (Σ φ(p) + s₀)`.
#[derive(Debug, Clone, PartialEq)]
pub enum TraceForm {
    /// `φ(p) = p G(ln 1/p)`
    Exponential(GroupExponential),
    /// `φ(p) = −p ln p`, the unscaled Boltzmann-Gibbs term.
    Shannon,
    Scd(scd::ScdForm),
    /// `φ(p) = p (ln 1/p)^δ`
    Delta { delta: f64 },
    /// `φ(p) = p (ln_q 1/p)^δ`, stored with `σ = 1 − q`.
    QDelta { sigma: f64, delta: f64 },
}

impl TraceForm {
    pub fn of(spec: &EntropySpec) -> Result<Self, EntropyError> {
        Ok(match spec.kind() {
            EntropyKind::Scd { c, d } => TraceForm::Scd(scd::ScdForm::new(c.value(), *d)),
            EntropyKind::SDelta { delta } => TraceForm::Delta { delta: delta.value() },
            EntropyKind::SQDelta { q, delta } => TraceForm::QDelta {
                sigma: 1.0 - q.value(),
                delta: delta.value(),
            },
            EntropyKind::BoltzmannGibbs if spec.scale().exact().is_one() => TraceForm::Shannon,
            _ => TraceForm::Exponential(group_exponential_of(spec)?),
        })
    }

    /// `φ(p)`, zero at `p = 0`.
    pub fn term(&self, p: f64) -> f64 {
        if p <= 0.0 {
            return 0.0;
        }
        let t = -p.ln();
        match self {
            TraceForm::Exponential(g) => p * g.value(t),
            TraceForm::Shannon => p * t,
            TraceForm::Scd(form) => form.term(p),
            TraceForm::Delta { delta } => p * t.powf(*delta),
            // ln_q(1/p) = (p^{q−1} − 1)/(1 − q)
            TraceForm::QDelta { sigma, delta } => p * ((sigma * t).exp_m1() / sigma).powf(*delta),
        }
    }

    pub fn constant(&self) -> f64 {
        match self {
            TraceForm::Scd(form) => form.constant(),
            _ => 0.0,
        }
    }

    /// `Σ φ(p) + s₀` (with `k_B = 1`).
    pub fn sum(&self, dist: &Distribution) -> f64 {
        dist.sum_over_states(|p| self.term(p)) + self.constant()
    }
}

/// `S[p]`, with impossible states contributing exactly zero.
pub fn evaluate(spec: &EntropySpec, dist: &Distribution) -> Result<f64, EntropyError> {
    if let EntropyKind::SDelta { delta } | EntropyKind::SQDelta { delta, .. } = spec.kind() {
        check_delta(delta, dist)?;
    }
    Ok(spec.kb() * TraceForm::of(spec)?.sum(dist))
}

fn check_delta(delta: &Param, dist: &Distribution) -> Result<(), EntropyError> {
    let max = max_delta(dist.states());
    if delta.value() > max {
        return Err(EntropyError::Domain(format!(
            "delta = {delta} exceeds 1 + ln W = {max} for W = {}",
            dist.states()
        )));
    }
    Ok(())
}

/// `S_k[p] = Σ p (ln 1/p)^k` (with `k_B = 1`).
pub fn elementary_functional(k: u32, dist: &Distribution) -> f64 {
    let k = k as i32;
    dist.sum_over_states(|p| if p > 0.0 { p * (-p.ln()).powi(k) } else { 0.0 })
}

/// The first `count` coefficients `a'_k = a_{k−1}/k` of
/// `S = k_B Σ_k a'_k S_k`, i.e. the Taylor coefficients of `G` at `t^1..`.
pub fn expansion_coefficients<C: Coefficient>(spec: &EntropySpec, count: usize) -> Result<Vec<C>, EntropyError> {
    let series: TruncatedSeries<C> = group_exponential_of(spec)?.series(count);
    Ok(series.coeffs()[1..].to_vec())
}

/// `k_B Σ_{k ≤ count} a'_k S_k[p]`, the truncated elementary expansion.
pub fn expansion_sum(spec: &EntropySpec, dist: &Distribution, count: usize) -> Result<f64, EntropyError> {
    let coeffs = expansion_coefficients::<f64>(spec, count)?;
    let terms: Vec<f64> = coeffs
        .iter()
        .enumerate()
        .map(|(i, a)| a * elementary_functional(i as u32 + 1, dist))
        .collect();
    Ok(spec.kb() * crate::numeric::pairwise_sum(&terms))
}

/// Coefficients of the Tsallis expansion in the two printed branches: the
/// deformation is `1 − q` for `q < 1` and `q − 1` for `q > 1`.
///
/// For `q > 1` these are the coefficients of the `q' = 2 − q` entropy, not
/// of the catalog Tsallis entropy at `q`.
pub fn tsallis_branch_coefficients(q: &Param, count: usize) -> Result<Vec<BigRational>, EntropyError> {
    let one = BigRational::one();
    let sigma = if q.exact() < &one {
        &one - q.exact()
    } else if q.exact() > &one {
        q.exact() - &one
    } else {
        return Err(EntropyError::InvalidParameter {
            kind: "tsallis".into(),
            reason: "q = 1 has no deformation".into(),
        });
    };
    let g = GroupExponential::Deformed { sigma: Param::new(sigma) };
    Ok(g.series::<BigRational>(count).coeffs()[1..].to_vec())
}

/// `Log_G(x) = G(ln x)`; for group entropies `(1/σ) Σ k_n x^{σn}`.
pub fn generalized_log(spec: &EntropySpec, x: f64) -> Result<f64, EntropyError> {
    if !(x > 0.0) {
        return Err(EntropyError::Domain(format!("generalized logarithm needs x > 0, got {x}")));
    }
    let g = group_exponential_of(spec)?;
    Ok(g.value(x.ln()))
}

/// `Φ(x, y) = (x^{1/δ} + y^{1/δ})^δ`, the composition rule of `S_δ` on
/// uniform distributions.
///
/// For `x, y ≥ 0` only: it is a commutative monoid, not a group law over
/// the reals.
pub fn power_mean_law(delta: f64, x: f64, y: f64) -> f64 {
    (x.powf(1.0 / delta) + y.powf(1.0 / delta)).powf(delta)
}

/// `S_δ` composition is a monoid, never a group law.
pub const POWER_MEAN_LAW_IS_GROUP: bool = false;

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::rat;
    use std::f64::consts::LN_2;

    fn dist(p: &[f64]) -> Distribution {
        Distribution::new(p.to_vec()).unwrap()
    }

    #[test]
    fn bg_reference_values() {
        let bg = EntropySpec::bg();
        assert_eq!(evaluate(&bg, &dist(&[1.0, 0.0, 0.0])).unwrap(), 0.0);
        assert!((evaluate(&bg, &dist(&[0.5, 0.5])).unwrap() - LN_2).abs() < 1e-15);
        let big = evaluate(&bg, &Distribution::uniform(1e80).unwrap()).unwrap();
        assert!((big - 80.0 * 10f64.ln()).abs() < 1e-12);
        let kb = EntropySpec::bg().with_kb(2.0).unwrap();
        assert!((evaluate(&kb, &dist(&[0.5, 0.5])).unwrap() - 2.0 * LN_2).abs() < 1e-15);
    }

    #[test]
    fn closed_forms_against_direct_formulas() {
        let p = [0.5, 0.3, 0.15, 0.05];
        let d = dist(&p);
        let q: f64 = 0.7;
        let tsallis = (p.iter().map(|x| x.powf(q)).sum::<f64>() - 1.0) / (1.0 - q);
        assert!((evaluate(&EntropySpec::tsallis(0.7).unwrap(), &d).unwrap() - tsallis).abs() < 1e-14);
        let k: f64 = 0.3;
        let kan: f64 = p.iter().map(|x| x * (x.powf(-k) - x.powf(k)) / (2.0 * k)).sum();
        assert!((evaluate(&EntropySpec::kaniadakis(0.3).unwrap(), &d).unwrap() - kan).abs() < 1e-14);
        let (a, b) = (0.4, -0.2);
        let br: f64 = p.iter().map(|x| x * (x.powf(-a) - x.powf(-b)) / (a - b)).sum();
        assert!((evaluate(&EntropySpec::borges_roditi(0.4, -0.2).unwrap(), &d).unwrap() - br).abs() < 1e-14);
        let s = 1.0 - 0.8;
        let siii: f64 = p
            .iter()
            .map(|x: &f64| x * (x.powf(-s) - 2.0 * x.powf(s) + x.powf(2.0 * s)) / s)
            .sum();
        assert!((evaluate(&EntropySpec::s_iii(0.8).unwrap(), &d).unwrap() - siii).abs() < 1e-13);
        let siv: f64 = p
            .iter()
            .map(|x: &f64| {
                x * (x.powf(-2.0 * s) - 1.5 * x.powf(-s) + 1.5 * x.powf(s) - x.powf(2.0 * s)) / s
            })
            .sum();
        assert!((evaluate(&EntropySpec::s_iv(0.8).unwrap(), &d).unwrap() - siv).abs() < 1e-13);
    }

    #[test]
    fn exponential_representations() {
        assert_eq!(group_exponential_of(&EntropySpec::bg()).unwrap(), GroupExponential::Identity);
        let siii = group_exponential_of(&EntropySpec::s_iii(0.8).unwrap()).unwrap();
        let s: f64 = 0.2;
        for &t in &[-0.5, 0.3, 2.0] {
            let closed = ((s * t).exp() - 2.0 * (-s * t).exp() + (-2.0 * s * t).exp()) / s;
            assert!((siii.value(t) - closed).abs() < 1e-13);
        }
        for spec in [
            EntropySpec::s_delta(1.0).unwrap(),
            EntropySpec::s_q_delta(0.5, 1.0).unwrap(),
            EntropySpec::scd(1.0, 2).unwrap(),
        ] {
            assert!(matches!(group_exponential_of(&spec), Err(EntropyError::Unsupported(_))));
        }
        assert!(group_exponential_of(&EntropySpec::scd(0.5, 0).unwrap()).is_ok());
    }

    #[test]
    fn kaniadakis_expansion() {
        let k = rat(3, 10);
        let c = expansion_coefficients::<BigRational>(&EntropySpec::kaniadakis(Param::new(k.clone())).unwrap(), 7).unwrap();
        let k2 = &k * &k;
        let expect = vec![
            rat(1, 1),
            rat(0, 1),
            &k2 / rat(6, 1),
            rat(0, 1),
            &k2 * &k2 / rat(120, 1),
            rat(0, 1),
            &k2 * &k2 * &k2 / rat(5040, 1),
        ];
        assert_eq!(c, expect);
    }

    #[test]
    fn group_entropy_expansions() {
        let q = rat(4, 5);
        let s = rat(1, 1) - &q;
        let c = expansion_coefficients::<BigRational>(&EntropySpec::s_iii(Param::new(q.clone())).unwrap(), 3).unwrap();
        assert_eq!(c, vec![rat(1, 1), rat(3, 2) * &s, rat(-5, 6) * &s * &s]);
        let (alpha, beta) = (rat(1, 10), rat(-3, 20));
        let spec = EntropySpec::s_alpha_beta_q(Param::new(alpha.clone()), Param::new(beta.clone()), Param::new(q)).unwrap();
        let c = expansion_coefficients::<BigRational>(&spec, 3).unwrap();
        assert_eq!(c[0], rat(1, 1));
        assert_eq!(c[1], rat(3, 2) * (&alpha + &beta) * &s);
        assert_eq!(c[2], rat(1, 6) * (rat(1, 1) + rat(6, 1) * &alpha - rat(6, 1) * &beta) * &s * &s);
    }

    #[test]
    fn impossible_event_is_bit_exact() {
        let p: Vec<f64> = (1..=40).map(|i| i as f64 / 820.0).collect();
        let d = dist(&p);
        for spec in [EntropySpec::bg(), EntropySpec::kaniadakis(0.4).unwrap(), EntropySpec::scd(1.0, 2).unwrap()] {
            let a = evaluate(&spec, &d).unwrap();
            let b = evaluate(&spec, &d.with_impossible_event()).unwrap();
            assert_eq!(a.to_bits(), b.to_bits(), "{spec}");
        }
    }

    #[test]
    fn elementary_functionals() {
        assert!((elementary_functional(1, &dist(&[0.5, 0.5])) - LN_2).abs() < 1e-15);
        assert_eq!(elementary_functional(3, &dist(&[1.0, 0.0])), 0.0);
        let w4 = Distribution::uniform(4.0).unwrap();
        assert!((elementary_functional(2, &w4) - 4f64.ln().powi(2)).abs() < 1e-14);
    }

    #[test]
    fn generalized_logs() {
        let ts = EntropySpec::tsallis(0.3).unwrap();
        assert_eq!(generalized_log(&ts, 1.0).unwrap(), 0.0);
        assert!(generalized_log(&ts, 0.0).is_err());
        let tiny = EntropySpec::group(1e-6, 0, vec![Param::int(-1), Param::int(1)]).unwrap();
        assert!((generalized_log(&tiny, 2.0).unwrap() - LN_2).abs() < 1e-5);
        // Abe's logarithm (x^{σ−1} − x^{1/σ−1})/(σ − 1/σ)
        let sigma: f64 = 0.6;
        let abe = EntropySpec::borges_roditi(sigma - 1.0, 1.0 / sigma - 1.0).unwrap();
        for &x in &[0.3f64, 2.5] {
            let expect = (x.powf(sigma - 1.0) - x.powf(1.0 / sigma - 1.0)) / (sigma - 1.0 / sigma);
            assert!((generalized_log(&abe, x).unwrap() - expect).abs() < 1e-13);
        }
    }

    #[test]
    fn sdelta_reductions() {
        let d = dist(&[0.4, 0.35, 0.25]);
        let bg = evaluate(&EntropySpec::bg(), &d).unwrap();
        assert!((evaluate(&EntropySpec::s_delta(1.0).unwrap(), &d).unwrap() - bg).abs() < 1e-15);
        let ts = evaluate(&EntropySpec::tsallis(0.4).unwrap(), &d).unwrap();
        assert!((evaluate(&EntropySpec::s_q_delta(0.4, 1.0).unwrap(), &d).unwrap() - ts).abs() < 1e-14);
        let too_big = EntropySpec::s_delta(3.0).unwrap();
        assert!(matches!(evaluate(&too_big, &d), Err(EntropyError::Domain(_))));
        let (wa, wb) = (3.0f64, 7.0f64);
        let s = |w: f64| evaluate(&EntropySpec::s_delta(2.0).unwrap(), &Distribution::uniform(w).unwrap()).unwrap();
        assert!((s(wa) - wa.ln().powi(2)).abs() < 1e-13);
        assert!((power_mean_law(2.0, s(wa), s(wb)) - s(wa * wb)).abs() < 1e-12);
    }

    #[test]
    fn scale_constant() {
        let d = dist(&[0.6, 0.3, 0.1]);
        let c = 2.5;
        let spec = EntropySpec::tsallis(0.5).unwrap().with_scale(c).unwrap();
        let g = group_exponential_of(&EntropySpec::tsallis(0.5).unwrap()).unwrap();
        let literal: f64 = [0.6f64, 0.3, 0.1].iter().map(|p| p * g.value(c * (1.0 / p).ln())).sum();
        assert!((c * evaluate(&spec, &d).unwrap() - literal).abs() < 1e-13);
    }

    #[test]
    fn tsallis_printed_branches() {
        let below = tsallis_branch_coefficients(&Param::ratio(1, 2), 3).unwrap();
        assert_eq!(below, vec![rat(1, 1), rat(1, 4), rat(1, 24)]);
        let above = tsallis_branch_coefficients(&Param::ratio(3, 2), 3).unwrap();
        assert_eq!(above, below);
        let catalog = expansion_coefficients::<BigRational>(&EntropySpec::tsallis(Param::ratio(3, 2)).unwrap(), 3).unwrap();
        assert_eq!(catalog, vec![rat(1, 1), rat(-1, 4), rat(1, 24)]);
    }
}
