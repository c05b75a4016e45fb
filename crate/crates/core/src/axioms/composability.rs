use super::{dirichlet, format_probabilities, trial_rng, Axiom, AxiomError, AxiomReport, Verdict};
use crate::entropy::{Distribution, EntropySpec, GroupExponential, JointDistribution, TraceForm};
use crate::numeric::{bisect_increasing, format_significant};

/// Relative tolerance for closed-form identities.
pub const STRICT_TOLERANCE: f64 = 1e-10;
/// Relative tolerance where numeric inversion enters.
pub const WEAK_TOLERANCE: f64 = 1e-9;

/// The rule `S(A ∪ B) = Φ(S(A), S(B))` for an entropy (with `k_B = 1`).
#[derive(Debug, Clone, PartialEq)]
pub enum CompositionLaw {
    /// `Φ(x, y) = G(F(x) + F(y))`.
    Group(GroupExponential),
    /// `Φ(x, y) = (x^{1/δ} + y^{1/δ})^δ`, a monoid on `x, y ≥ 0`.
    PowerMean { delta: f64 },
    /// `Φ = (u + v + σuv)^δ` with `u = x^{1/δ}`, `v = y^{1/δ}`; a monoid.
    QPowerMean { sigma: f64, delta: f64 },
    /// `Φ(x, y) = g(g⁻¹(x) + g⁻¹(y))` for the uniform profile
    /// `g(t) = S(uniform e^t)`, inverted numerically. Used by `S_{c,d}`,
    /// whose additive constant makes `g(0) ≠ 0`.
    Profile(TraceForm),
}

impl CompositionLaw {
    pub fn of(spec: &EntropySpec) -> Result<Self, AxiomError> {
        Ok(match TraceForm::of(spec)? {
            TraceForm::Exponential(g) => CompositionLaw::Group(g),
            TraceForm::Shannon => CompositionLaw::Group(GroupExponential::Identity),
            TraceForm::Delta { delta } => CompositionLaw::PowerMean { delta },
            TraceForm::QDelta { sigma, delta } => CompositionLaw::QPowerMean { sigma, delta },
            form @ TraceForm::Scd(_) => CompositionLaw::Profile(form),
        })
    }

    /// `false` for the power-mean rules, which have no inverse over the reals.
    pub fn is_group_law(&self) -> bool {
        matches!(self, CompositionLaw::Group(_) | CompositionLaw::Profile(_))
    }

    /// `Φ(x, y)`, or `None` outside the domain of the inverse.
    pub fn apply(&self, x: f64, y: f64) -> Option<f64> {
        match self {
            CompositionLaw::Group(g) => Some(g.value(g.inverse(x)? + g.inverse(y)?)),
            CompositionLaw::PowerMean { delta } => {
                (x >= 0.0 && y >= 0.0).then(|| (x.powf(1.0 / delta) + y.powf(1.0 / delta)).powf(*delta))
            }
            CompositionLaw::QPowerMean { sigma, delta } => {
                if x < 0.0 || y < 0.0 {
                    return None;
                }
                let (u, v) = (x.powf(1.0 / delta), y.powf(1.0 / delta));
                Some((u + v + sigma * u * v).powf(*delta))
            }
            CompositionLaw::Profile(form) => {
                let g = |t: f64| profile(form, t);
                let (tx, ty) = (profile_inverse(form, x)?, profile_inverse(form, y)?);
                Some(g(tx + ty))
            }
        }
    }
}

/// `S(uniform W)` at `W = e^t`, for real `t ≥ 0`.
fn profile(form: &TraceForm, t: f64) -> f64 {
    t.exp() * form.term((-t).exp()) + form.constant()
}

fn profile_inverse(form: &TraceForm, x: f64) -> Option<f64> {
    let g = |t: f64| profile(form, t);
    if x < g(0.0) {
        return None;
    }
    let mut hi = 1.0;
    while g(hi) < x {
        hi *= 2.0;
        if hi > 1e6 {
            return None;
        }
    }
    Some(bisect_increasing(g, x, 0.0, hi, 400))
}

fn relative(a: f64, b: f64) -> f64 {
    let diff = (a - b).abs();
    if a == 0.0 {
        diff
    } else {
        diff / a.abs()
    }
}

/// Weak composability on uniform distributions: `S(W_A W_B)` against
/// `Φ(S(W_A), S(W_B))`, plus the null case `Φ(S(W_A), S(1)) = S(W_A)`.
///
/// Values are computed with `k_B = 1` from the defining sum; admissibility
/// bounds of `S_δ` (`δ ≤ 1 + ln W`) are not applied here.
pub fn check_weak_composability(spec: &EntropySpec, wa: f64, wb: f64) -> Result<AxiomReport, AxiomError> {
    let law = CompositionLaw::of(spec)?;
    let form = TraceForm::of(spec)?;
    let s = |w: f64| -> Result<f64, AxiomError> { Ok(form.sum(&Distribution::uniform(w).map_err(crate::entropy::EntropyError::from)?)) };
    let (sa, sb, sab, s1) = (s(wa)?, s(wb)?, s(wa * wb)?, s(1.0)?);
    let mut report = AxiomReport::new(Axiom::WeakComposability, spec.to_string());
    report.trials = 2;
    if !law.is_group_law() {
        report.details.push("composition rule is a monoid, not a group law".to_string());
    }
    let mut failed = false;
    let cases = [(sa, sb, sab, format!("W_A={wa},W_B={wb}")), (sa, s1, sa, format!("W_A={wa},W_B=1"))];
    for (x, y, expect, label) in cases {
        match law.apply(x, y) {
            Some(phi) => {
                let r = relative(expect, phi);
                report.details.push(format!(
                    "{label}\tS={}\tPhi={}\trel={}",
                    format_significant(expect, 17),
                    format_significant(phi, 17),
                    format_significant(r, 3)
                ));
                failed |= r > WEAK_TOLERANCE;
                report.observe(r, || label.clone());
            }
            None => {
                failed = true;
                report.observe(f64::INFINITY, || format!("{label} (outside the domain of Phi)"));
            }
        }
    }
    report.verdict = if failed { Verdict::Fail } else { Verdict::Pass };
    Ok(report)
}

/// `|S(A ∪ B) − Φ(S(A), S(B))| / |S(A ∪ B)|` for independent `A`, `B`.
pub fn strict_residual(spec: &EntropySpec, a: &Distribution, b: &Distribution) -> Result<f64, AxiomError> {
    let law = CompositionLaw::of(spec)?;
    let form = TraceForm::of(spec)?;
    let joint = JointDistribution::product(a, b).map_err(crate::entropy::EntropyError::from)?;
    let sab = form.sum(&joint.flatten());
    Ok(match law.apply(form.sum(a), form.sum(b)) {
        Some(phi) => relative(sab, phi),
        None => f64::INFINITY,
    })
}

/// Strict composability over `trials` random independent pairs on
/// `W_A × W_B` states; passes when every relative residual is at most
/// `1e-10`.
pub fn check_strict_composability(
    spec: &EntropySpec,
    wa: usize,
    wb: usize,
    trials: usize,
    seed: u64,
) -> Result<AxiomReport, AxiomError> {
    if trials == 0 || wa == 0 || wb == 0 {
        return Err(AxiomError::InvalidInput("need trials, W_A, W_B >= 1".into()));
    }
    let mut report = AxiomReport::new(Axiom::StrictComposability, spec.to_string());
    report.seed = Some(seed);
    report.trials = trials;
    for trial in 0..trials {
        let mut rng = trial_rng(seed, trial);
        let pa = dirichlet(&mut rng, wa);
        let pb = dirichlet(&mut rng, wb);
        let a = Distribution::new(pa.clone()).map_err(crate::entropy::EntropyError::from)?;
        let b = Distribution::new(pb.clone()).map_err(crate::entropy::EntropyError::from)?;
        let r = strict_residual(spec, &a, &b)?;
        report.observe(r, || {
            format!("trial={trial} A={} B={}", format_probabilities(&pa), format_probabilities(&pb))
        });
    }
    report.verdict = if report.worst_residual <= STRICT_TOLERANCE {
        Verdict::Pass
    } else {
        Verdict::Fail
    };
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn d(p: &[f64]) -> Distribution {
        Distribution::new(p.to_vec()).unwrap()
    }

    #[test]
    fn tsallis_weak_composition_closed_form() {
        let q: f64 = 0.5;
        let lnq = |x: f64| (x.powf(1.0 - q) - 1.0) / (1.0 - q);
        let law = CompositionLaw::of(&EntropySpec::tsallis(0.5).unwrap()).unwrap();
        let phi = law.apply(lnq(2.0), lnq(3.0)).unwrap();
        let expect = lnq(2.0) + lnq(3.0) + (1.0 - q) * lnq(2.0) * lnq(3.0);
        assert!((phi - expect).abs() < 1e-14);
        assert!((phi - lnq(6.0)).abs() < 1e-14);
    }

    #[test]
    fn weak_composability_across_kinds() {
        for spec in [
            EntropySpec::bg(),
            EntropySpec::tsallis(0.5).unwrap(),
            EntropySpec::kaniadakis(0.3).unwrap(),
            EntropySpec::borges_roditi(0.4, -0.2).unwrap(),
            EntropySpec::s_iii(0.8).unwrap(),
            EntropySpec::scd(0.5, 3).unwrap(),
            EntropySpec::scd(1.0, 0).unwrap(),
            EntropySpec::s_delta(2.0).unwrap(),
            EntropySpec::s_q_delta(0.5, 1.5).unwrap(),
        ] {
            let r = check_weak_composability(&spec, 3.0, 5.0).unwrap();
            assert_eq!(r.verdict, Verdict::Pass, "{spec}: {:?}", r.details);
        }
        let sd = CompositionLaw::of(&EntropySpec::s_delta(2.0).unwrap()).unwrap();
        assert!(!sd.is_group_law());
        let (l2, l3) = (2f64.ln(), 3f64.ln());
        assert!((sd.apply(l2 * l2, l3 * l3).unwrap() - 6f64.ln().powi(2)).abs() < 1e-14);
    }

    #[test]
    fn strict_composability_split() {
        let bg = check_strict_composability(&EntropySpec::bg(), 3, 4, 50, 1).unwrap();
        assert_eq!(bg.verdict, Verdict::Pass);
        let ts = check_strict_composability(&EntropySpec::tsallis(0.3).unwrap(), 3, 4, 100, 1).unwrap();
        assert_eq!(ts.verdict, Verdict::Pass, "{}", ts.worst_residual);
        let k = EntropySpec::kaniadakis(0.5).unwrap();
        let r = strict_residual(&k, &d(&[0.9, 0.1]), &d(&[0.8, 0.2])).unwrap();
        assert!(r > 1e-6, "{r}");
        let kr = check_strict_composability(&k, 2, 2, 20, 7).unwrap();
        assert_eq!(kr.verdict, Verdict::Fail);
        assert!(kr.witness.as_deref().unwrap().starts_with("trial="));
        let again = check_strict_composability(&k, 2, 2, 20, 7).unwrap();
        assert_eq!(kr, again);
    }
}
