use num_rational::BigRational;

use super::ThermoError;
use crate::entropy::{group_exponential_of, EntropyKind, EntropySpec, GroupExponential, TraceForm};
use crate::series::FloatSeries;

/// Series order for `F = G⁻¹` of polynomial exponentials.
const REVERT_ORDER: usize = 24;
/// Largest relative size of the last series term accepted as converged.
const TRUNCATION_LIMIT: f64 = 1e-10;

/// How `F = G⁻¹` is evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FMethod {
    ClosedForm,
    /// Bisection along the increasing branch of the closed-form `G`.
    MonotoneInversion,
    /// Reverted truncated series, with its last term as truncation indicator.
    RevertedSeries,
}

/// `W(N) = exp(F(N))`, the phase-space growth that makes `S` extensive.
#[derive(Debug, Clone)]
pub struct OccupationLaw {
    spec: EntropySpec,
    g: GroupExponential,
    method: FMethod,
    f_series: Option<FloatSeries>,
    tested_up_to: u64,
    valid: bool,
    diagnostics: Vec<String>,
}

impl OccupationLaw {
    /// Build the law and test admissibility on `N = 0..=n_max`: `F(N)` must
    /// exist with `W(0) = 1` and `W` strictly increasing.
    pub fn new(spec: &EntropySpec, n_max: u64) -> Result<Self, ThermoError> {
        let g = group_exponential_of(spec)?;
        let (method, f_series) = if matches!(spec.kind(), EntropyKind::Generic { .. }) {
            let series = g.series::<BigRational>(REVERT_ORDER);
            let inverse = series
                .revert()
                .map_err(|e| ThermoError::Unsupported(format!("cannot revert G: {e}")))?;
            (FMethod::RevertedSeries, Some(inverse.to_float()))
        } else if g.has_closed_inverse() {
            (FMethod::ClosedForm, None)
        } else {
            (FMethod::MonotoneInversion, None)
        };
        let mut law = OccupationLaw {
            spec: spec.clone(),
            g,
            method,
            f_series,
            tested_up_to: n_max,
            valid: true,
            diagnostics: Vec::new(),
        };
        law.test_admissibility(n_max);
        Ok(law)
    }

    fn test_admissibility(&mut self, n_max: u64) {
        let mut previous = None;
        for n in 0..=n_max {
            match self.ln_states(n as f64) {
                Ok(f) => {
                    if n == 0 && f != 0.0 {
                        self.fail(format!("W(0) = {} instead of 1", f.exp()));
                        return;
                    }
                    if let Some(prev) = previous {
                        if f <= prev {
                            self.fail(format!("W(N) not increasing at N = {n}"));
                            return;
                        }
                    }
                    previous = Some(f);
                }
                Err(e) => {
                    self.fail(format!("F undefined at N = {n}: {e}"));
                    return;
                }
            }
        }
    }

    fn fail(&mut self, reason: String) {
        self.valid = false;
        self.diagnostics.push(reason);
    }

    pub fn spec(&self) -> &EntropySpec {
        &self.spec
    }

    pub fn method(&self) -> FMethod {
        self.method
    }

    pub fn is_valid(&self) -> bool {
        self.valid
    }

    pub fn tested_up_to(&self) -> u64 {
        self.tested_up_to
    }

    pub fn diagnostics(&self) -> &[String] {
        &self.diagnostics
    }

    /// `ln W(N) = F(N)`; the microcanonical entropy at this `W` is `k_B N`.
    pub fn ln_states(&self, n: f64) -> Result<f64, ThermoError> {
        let f = match &self.f_series {
            Some(series) => {
                let e = series.eval(n);
                let rel = if e.value != 0.0 { (e.last_term / e.value).abs() } else { e.last_term.abs() };
                if !(rel <= TRUNCATION_LIMIT) {
                    return Err(ThermoError::Domain(format!(
                        "reverted series for F not converged at N = {n} (last term {:.3e} relative)",
                        rel
                    )));
                }
                e.value
            }
            None => self
                .g
                .inverse(n)
                .ok_or_else(|| ThermoError::Domain(format!("F is undefined at N = {n}")))?,
        };
        if !f.is_finite() {
            return Err(ThermoError::Domain(format!("F(N) is not finite at N = {n}")));
        }
        Ok(f)
    }

    /// `W(N)`; may overflow to infinity where [`ln_states`](Self::ln_states)
    /// does not.
    pub fn states(&self, n: f64) -> Result<f64, ThermoError> {
        Ok(self.ln_states(n)?.exp())
    }
}

/// `S(uniform W) = k_B G(ln W)`, for real `W ≥ 1`.
pub fn microcanonical(spec: &EntropySpec, w: f64) -> Result<f64, ThermoError> {
    if !(w >= 1.0) {
        return Err(ThermoError::Domain(format!("microcanonical entropy needs W >= 1, got {w}")));
    }
    microcanonical_from_log(spec, w.ln())
}

/// [`microcanonical`] at `W = e^{ln_w}`, usable where `W` overflows.
pub fn microcanonical_from_log(spec: &EntropySpec, ln_w: f64) -> Result<f64, ThermoError> {
    if !(ln_w >= 0.0) {
        return Err(ThermoError::Domain(format!("need ln W >= 0, got {ln_w}")));
    }
    let value = match TraceForm::of(spec)? {
        TraceForm::Exponential(g) => g.value(ln_w),
        TraceForm::Shannon => ln_w,
        // W φ(1/W) + s₀
        form => ln_w.exp() * form.term((-ln_w).exp()) + form.constant(),
    };
    Ok(spec.kb() * value)
}

/// Result of [`extensivity_check`].
#[derive(Debug, Clone, PartialEq)]
pub struct ExtensivityReport {
    /// `max |S(W(N)) − k_B N|` with real-valued `W(N)`.
    pub max_residual: f64,
    pub worst_n: u64,
    /// The same with `W(N)` rounded to an integer; `None` once `W(N)`
    /// exceeds the exactly representable integers.
    pub max_residual_rounded: Option<f64>,
    pub n_max: u64,
}

pub fn extensivity_check(law: &OccupationLaw, n_max: u64) -> Result<ExtensivityReport, ThermoError> {
    if !law.is_valid() {
        return Err(ThermoError::Precondition(format!(
            "occupation law of {} is not admissible: {}",
            law.spec(),
            law.diagnostics().join("; ")
        )));
    }
    let kb = law.spec().kb();
    let mut report = ExtensivityReport {
        max_residual: 0.0,
        worst_n: 0,
        max_residual_rounded: Some(0.0),
        n_max,
    };
    for n in 1..=n_max {
        let ln_w = law.ln_states(n as f64)?;
        let s = microcanonical_from_log(law.spec(), ln_w)?;
        let r = (s - kb * n as f64).abs();
        if r > report.max_residual {
            report.max_residual = r;
            report.worst_n = n;
        }
        let w = ln_w.exp();
        report.max_residual_rounded = match report.max_residual_rounded {
            Some(prev) if w < 9.007_199_254_740_992e15 => {
                let rounded = microcanonical(law.spec(), w.round().max(1.0))?;
                Some(prev.max((rounded - kb * n as f64).abs()))
            }
            _ => None,
        };
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::Param;
    use crate::entropy::{evaluate, Distribution};

    #[test]
    fn closed_form_laws() {
        let bg = OccupationLaw::new(&EntropySpec::bg(), 50).unwrap();
        assert!(bg.is_valid());
        assert!((bg.states(3.0).unwrap() - 3f64.exp()).abs() < 1e-12);
        let ts = OccupationLaw::new(&EntropySpec::tsallis(0.5).unwrap(), 50).unwrap();
        assert!(ts.is_valid());
        for n in [1.0, 7.0, 40.0] {
            let w: f64 = 1.0 + 0.5 * n;
            assert!((ts.states(n).unwrap() - w * w).abs() <= 1e-12 * w * w);
        }
        let bad = OccupationLaw::new(&EntropySpec::tsallis(2.0).unwrap(), 10).unwrap();
        assert!(!bad.is_valid());
        assert!(bad.diagnostics()[0].contains("N = 1"));
        assert!(matches!(extensivity_check(&bad, 5), Err(ThermoError::Precondition(_))));
    }

    #[test]
    fn inverse_methods() {
        let k = OccupationLaw::new(&EntropySpec::kaniadakis(0.3).unwrap(), 10).unwrap();
        assert_eq!(k.method(), FMethod::ClosedForm);
        let br = OccupationLaw::new(&EntropySpec::borges_roditi(0.3, -0.2).unwrap(), 10).unwrap();
        assert_eq!(br.method(), FMethod::MonotoneInversion);
        let generic = EntropySpec::generic(vec![Param::int(1), Param::ratio(-1, 10)]).unwrap();
        let law = OccupationLaw::new(&generic, 1).unwrap();
        assert_eq!(law.method(), FMethod::RevertedSeries);
        // G = t − t²/20, F(x) = 10 − sqrt(100 − 20x)
        let f = law.ln_states(0.5).unwrap();
        assert!((f - (10.0 - (100.0f64 - 10.0).sqrt())).abs() < 1e-10);
        assert!(law.ln_states(4.0).is_err());
    }

    #[test]
    fn extensivity() {
        let law = OccupationLaw::new(&EntropySpec::kaniadakis(0.3).unwrap(), 1000).unwrap();
        let r = extensivity_check(&law, 1000).unwrap();
        assert!(r.max_residual <= 1e-8, "{r:?}");
        let bg = OccupationLaw::new(&EntropySpec::bg(), 1000).unwrap();
        let r = extensivity_check(&bg, 1000).unwrap();
        assert!(r.max_residual <= 1e-8);
        assert!(r.max_residual_rounded.is_none());
    }

    #[test]
    fn microcanonical_matches_uniform_evaluation() {
        for spec in [
            EntropySpec::bg(),
            EntropySpec::tsallis(0.5).unwrap(),
            EntropySpec::scd(0.5, 2).unwrap(),
            EntropySpec::s_delta(1.5).unwrap(),
        ] {
            for w in [2.0, 10.0, 1e6] {
                let a = microcanonical(&spec, w).unwrap();
                let b = evaluate(&spec, &Distribution::uniform(w).unwrap()).unwrap();
                assert!((a - b).abs() <= 1e-12 * b.abs().max(1.0), "{spec} W={w}: {a} vs {b}");
            }
        }
        assert_eq!(microcanonical(&EntropySpec::kaniadakis(0.2).unwrap(), 1.0).unwrap(), 0.0);
        let ts = microcanonical(&EntropySpec::tsallis(0.5).unwrap(), 4.0).unwrap();
        assert!((ts - 2.0).abs() < 1e-15);
    }
}
