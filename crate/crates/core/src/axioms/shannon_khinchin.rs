use super::{dirichlet, format_probabilities, trial_rng, Axiom, AxiomError, AxiomReport, Verdict};
use crate::entropy::{evaluate, Distribution, EntropyError, EntropyKind, EntropySpec, JointDistribution};
use crate::numeric::format_significant;

/// Absolute slack allowed above the uniform value.
pub const SK2_TOLERANCE: f64 = 1e-12;
/// Absolute tolerance of the chain rule.
pub const SK4_TOLERANCE: f64 = 1e-12;

fn dist(p: Vec<f64>) -> Result<Distribution, AxiomError> {
    Distribution::new(p).map_err(|e| AxiomError::Entropy(EntropyError::from(e)))
}

/// SK2: no random distribution on `w` states exceeds the uniform value.
pub fn check_sk2_maximum(spec: &EntropySpec, w: usize, trials: usize, seed: u64) -> Result<AxiomReport, AxiomError> {
    if trials == 0 || w == 0 {
        return Err(AxiomError::InvalidInput("need trials >= 1 and W >= 1".into()));
    }
    let uniform = evaluate(spec, &Distribution::uniform(w as f64).map_err(EntropyError::from)?)?;
    let mut report = AxiomReport::new(Axiom::Sk2Maximum, spec.to_string());
    report.seed = Some(seed);
    report.trials = trials;
    for trial in 0..trials {
        let p = dirichlet(&mut trial_rng(seed, trial), w);
        let s = evaluate(spec, &dist(p.clone())?)?;
        report.observe(s - uniform, || format!("trial={trial} p={}", format_probabilities(&p)));
    }
    report.details.push(format!("S(uniform)={}", format_significant(uniform, 17)));
    report.verdict = if report.worst_residual <= SK2_TOLERANCE {
        Verdict::Pass
    } else {
        Verdict::Fail
    };
    Ok(report)
}

/// SK3: appending an impossible event leaves the value bit-identical.
pub fn check_sk3_expansibility(spec: &EntropySpec, dist: &Distribution) -> Result<AxiomReport, AxiomError> {
    let before = evaluate(spec, dist)?;
    let after = evaluate(spec, &dist.with_impossible_event())?;
    let mut report = AxiomReport::new(Axiom::Sk3Expansibility, spec.to_string());
    report.trials = 1;
    report.observe((after - before).abs(), || {
        format!(
            "S(p)={} S(p+0)={}",
            format_significant(before, 17),
            format_significant(after, 17)
        )
    });
    report.verdict = if before.to_bits() == after.to_bits() {
        Verdict::Pass
    } else {
        Verdict::Fail
    };
    Ok(report)
}

/// SK4 chain rule `S(A ∪ B) = S(A) + Σ_i p_i(A) S(B | A = i)`, for
/// Boltzmann-Gibbs only: no conditional entropy is defined for other kinds.
pub fn check_sk4_bg(spec: &EntropySpec, joint: &JointDistribution) -> Result<AxiomReport, AxiomError> {
    if *spec.kind() != EntropyKind::BoltzmannGibbs {
        return Err(AxiomError::Unsupported(format!(
            "sk4 needs a conditional entropy, defined here only for bg (got {})",
            spec.name()
        )));
    }
    let (rows, cols) = joint.shape();
    let marginal = joint.marginal_a();
    let pa = marginal.probabilities().map_err(EntropyError::from)?;
    let total = evaluate(spec, &joint.flatten())?;
    let mut conditional_terms = Vec::with_capacity(rows);
    for (i, &pi) in pa.iter().enumerate() {
        if pi <= 0.0 {
            continue;
        }
        let mut row: Vec<f64> = (0..cols).map(|j| joint.get(i, j) / pi).collect();
        // renormalize the row to absorb rounding in p_i
        let s: f64 = row.iter().sum();
        row.iter_mut().for_each(|x| *x /= s);
        conditional_terms.push(pi * evaluate(spec, &dist(row)?)?);
    }
    let conditional = crate::numeric::pairwise_sum(&conditional_terms);
    let sa = evaluate(spec, &marginal)?;
    let mut report = AxiomReport::new(Axiom::Sk4Additivity, spec.to_string());
    report.trials = 1;
    report.details.push(format!(
        "S(AB)={}\tS(A)={}\tS(B|A)={}",
        format_significant(total, 17),
        format_significant(sa, 17),
        format_significant(conditional, 17)
    ));
    report.observe((total - sa - conditional).abs(), || format!("{rows}x{cols} joint"));
    report.verdict = if report.worst_residual <= SK4_TOLERANCE {
        Verdict::Pass
    } else {
        Verdict::Fail
    };
    Ok(report)
}

/// Empirical Lesche modulus `max |S(p) − S(p')| / S_max` over random pairs
/// with `‖p − p'‖₁ ≤ delta`. A measurement, not a proof: the verdict is
/// always inconclusive.
pub fn lesche_probe(
    spec: &EntropySpec,
    w: usize,
    delta: f64,
    trials: usize,
    seed: u64,
) -> Result<AxiomReport, AxiomError> {
    if !(delta >= 0.0) || trials == 0 || w == 0 {
        return Err(AxiomError::InvalidInput("need delta >= 0, trials >= 1, W >= 1".into()));
    }
    let s_max = evaluate(spec, &Distribution::uniform(w as f64).map_err(EntropyError::from)?)?;
    let mut report = AxiomReport::new(Axiom::Lesche, spec.to_string());
    report.seed = Some(seed);
    report.trials = trials;
    for trial in 0..trials {
        let mut rng = trial_rng(seed, trial);
        let p = dirichlet(&mut rng, w);
        let target = dirichlet(&mut rng, w);
        let distance: f64 = p.iter().zip(&target).map(|(a, b)| (a - b).abs()).sum();
        let lambda = if distance > 0.0 { (delta / distance).min(1.0) } else { 0.0 };
        let moved: Vec<f64> = p.iter().zip(&target).map(|(a, b)| a + lambda * (b - a)).collect();
        let ds = (evaluate(spec, &dist(p.clone())?)? - evaluate(spec, &dist(moved.clone())?)?).abs();
        let modulus = if s_max != 0.0 { ds / s_max.abs() } else { ds };
        report.observe(modulus, || {
            format!("trial={trial} p={} p'={}", format_probabilities(&p), format_probabilities(&moved))
        });
    }
    report.details.push(format!(
        "delta={}\tmodulus={}",
        format_significant(delta, 6),
        format_significant(report.worst_residual, 6)
    ));
    report.verdict = Verdict::Inconclusive;
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::Param;

    #[test]
    fn sk2_holds_for_concave_and_fails_for_convex() {
        let bg = check_sk2_maximum(&EntropySpec::bg(), 5, 2000, 11).unwrap();
        assert_eq!(bg.verdict, Verdict::Pass);
        assert_eq!(bg.worst_residual, 0.0);
        let ts = check_sk2_maximum(&EntropySpec::tsallis(0.5).unwrap(), 8, 500, 11).unwrap();
        assert_eq!(ts.verdict, Verdict::Pass);
        // G(t) = t + 10t²
        let convex = EntropySpec::generic(vec![Param::int(1), Param::int(20)]).unwrap();
        let r = check_sk2_maximum(&convex, 2, 200, 11).unwrap();
        assert_eq!(r.verdict, Verdict::Fail);
        assert!(r.witness.is_some());
    }

    #[test]
    fn sk2_matches_simplex_grid_for_tsallis() {
        let spec = EntropySpec::tsallis(0.5).unwrap();
        let uniform = evaluate(&spec, &Distribution::uniform(3.0).unwrap()).unwrap();
        let n = 60;
        for i in 0..=n {
            for j in 0..=n - i {
                let p = vec![i as f64 / n as f64, j as f64 / n as f64, (n - i - j) as f64 / n as f64];
                let s = evaluate(&spec, &Distribution::new(p).unwrap()).unwrap();
                assert!(s <= uniform + 1e-12);
            }
        }
    }

    #[test]
    fn sk3_fixtures() {
        let d = Distribution::new(vec![0.7, 0.2, 0.1]).unwrap();
        for spec in [
            EntropySpec::bg(),
            EntropySpec::kaniadakis(0.4).unwrap(),
            EntropySpec::scd(1.0, 2).unwrap(),
        ] {
            assert_eq!(check_sk3_expansibility(&spec, &d).unwrap().verdict, Verdict::Pass);
        }
    }

    #[test]
    fn sk4_fixtures() {
        let bg = EntropySpec::bg();
        let diag = JointDistribution::new(vec![vec![0.5, 0.0], vec![0.0, 0.5]]).unwrap();
        let r = check_sk4_bg(&bg, &diag).unwrap();
        assert_eq!(r.verdict, Verdict::Pass);
        assert!(r.details[0].contains("S(B|A)=0"));
        let a = Distribution::new(vec![0.3, 0.7]).unwrap();
        let b = Distribution::new(vec![0.2, 0.5, 0.3]).unwrap();
        let prod = JointDistribution::product(&a, &b).unwrap();
        assert_eq!(check_sk4_bg(&bg, &prod).unwrap().verdict, Verdict::Pass);
        let ts = EntropySpec::tsallis(0.5).unwrap();
        assert!(matches!(check_sk4_bg(&ts, &prod), Err(AxiomError::Unsupported(_))));
    }

    #[test]
    fn lesche_modulus() {
        let bg = lesche_probe(&EntropySpec::bg(), 10, 1e-4, 200, 3).unwrap();
        assert_eq!(bg.verdict, Verdict::Inconclusive);
        assert!(bg.worst_residual <= 0.01 && bg.worst_residual > 0.0);
        let zero = lesche_probe(&EntropySpec::tsallis(0.5).unwrap(), 10, 0.0, 20, 3).unwrap();
        assert_eq!(zero.worst_residual, 0.0);
    }
}
