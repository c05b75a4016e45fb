use super::ThermoError;
use crate::entropy::{evaluate, Distribution, EntropyKind, EntropySpec, GroupExponential, TraceForm};
use crate::numeric::{bisect_increasing, pairwise_sum};

/// Probability bracket for inverting the stationarity function.
const P_MIN: f64 = 1e-15;
const P_MAX: f64 = 1.0 - 1e-15;
const MAX_BISECTIONS: usize = 200;
/// Points at which monotonicity of `h` is sampled.
const MONOTONICITY_SAMPLES: usize = 400;
/// Largest `|β|` tried when bracketing a fixed-energy solve.
const BETA_LIMIT: f64 = 1e6;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum EnergyMode {
    FixedBeta(f64),
    /// Target internal energy; `β` is solved for.
    FixedEnergy(f64),
}

#[derive(Debug, Clone, PartialEq)]
pub struct MaxEntProblem {
    pub spec: EntropySpec,
    pub energies: Vec<f64>,
    pub mode: EnergyMode,
}

impl MaxEntProblem {
    pub fn new(spec: EntropySpec, energies: Vec<f64>, mode: EnergyMode) -> Result<Self, ThermoError> {
        if energies.len() < 2 {
            return Err(ThermoError::InvalidInput("MaxEnt needs at least 2 energy levels".into()));
        }
        if energies.iter().any(|e| !e.is_finite()) {
            return Err(ThermoError::InvalidInput("energies must be finite".into()));
        }
        let value = match mode {
            EnergyMode::FixedBeta(b) | EnergyMode::FixedEnergy(b) => b,
        };
        if !value.is_finite() {
            return Err(ThermoError::InvalidInput("beta and target energy must be finite".into()));
        }
        Ok(MaxEntProblem { spec, energies, mode })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MaxEntSolution {
    pub distribution: Distribution,
    pub probabilities: Vec<f64>,
    pub energies: Vec<f64>,
    pub alpha: f64,
    pub beta: f64,
    /// `Σ E(−βε_i / k_B)` with `E = exp ∘ F`.
    pub z: f64,
    pub u: f64,
    pub s: f64,
    /// Largest `|k_B h(p_i) − α − βε_i|`, relative to `max(1, |α + βε_i|)`,
    /// over states with `p_i > 0`.
    pub stationarity_residual: f64,
    /// `|Σ p_i − 1|` before the final renormalization.
    pub normalization_residual: f64,
    /// `|U − target|` in fixed-energy mode.
    pub energy_residual: Option<f64>,
    /// States whose stationarity target lies beyond the bracket, set to zero.
    pub cutoff_states: usize,
}

/// `H(t) = h(e^{−t}) = G(t) − G'(t)`, increasing in `t` exactly when the
/// trace form is strictly concave.
struct Stationarity {
    g: GroupExponential,
    t_min: f64,
    t_max: f64,
    h_min: f64,
    h_max: f64,
}

impl Stationarity {
    fn of(spec: &EntropySpec) -> Result<Self, ThermoError> {
        let g = match TraceForm::of(spec)? {
            TraceForm::Exponential(g) => g,
            TraceForm::Shannon => GroupExponential::Identity,
            _ => {
                return Err(ThermoError::Unsupported(format!(
                    "{} has no group exponential, so no stationarity function h = G − G'",
                    spec.name()
                )))
            }
        };
        let (t_min, t_max) = (-P_MAX.ln(), -P_MIN.ln());
        // H'(t) = G'(t) − G''(t) > 0 on a grid dense near t = 0
        for i in 0..=MONOTONICITY_SAMPLES {
            let u = i as f64 / MONOTONICITY_SAMPLES as f64;
            let t = t_min + (t_max - t_min) * u * u;
            let slope = g.derivative(t) - g.second_derivative(t);
            if !(slope > 0.0) {
                return Err(ThermoError::Unsupported(format!(
                    "stationarity function of {spec} is not strictly monotone (h' changes sign near p = {:e})",
                    (-t).exp()
                )));
            }
        }
        let h = |t: f64| g.value(t) - g.derivative(t);
        let (h_min, h_max) = (h(t_min), h(t_max));
        Ok(Stationarity {
            g,
            t_min,
            t_max,
            h_min,
            h_max,
        })
    }

    fn h_of_t(&self, t: f64) -> f64 {
        self.g.value(t) - self.g.derivative(t)
    }

    fn h(&self, p: f64) -> f64 {
        self.h_of_t(-p.ln())
    }

    /// `p` with `h(p) = target`; zero beyond the bracket.
    fn probability(&self, target: f64) -> f64 {
        if target <= self.h_min {
            return P_MAX;
        }
        if target > self.h_max {
            return 0.0;
        }
        let t = bisect_increasing(|t| self.h_of_t(t), target, self.t_min, self.t_max, MAX_BISECTIONS);
        (-t).exp()
    }
}

fn probabilities(st: &Stationarity, kb: f64, alpha: f64, beta: f64, energies: &[f64]) -> Vec<f64> {
    energies.iter().map(|e| st.probability((alpha + beta * e) / kb)).collect()
}

struct FixedBetaSolve {
    p: Vec<f64>,
    alpha: f64,
    normalization_residual: f64,
}

fn solve_fixed_beta(st: &Stationarity, kb: f64, beta: f64, energies: &[f64]) -> FixedBetaSolve {
    let lowest = energies.iter().map(|e| beta * e).fold(f64::INFINITY, f64::min);
    // α_lo puts the most probable state at P_MAX, α_hi at 1/W
    let alpha_lo = kb * st.h_min - lowest;
    let alpha_hi = kb * st.h(1.0 / energies.len() as f64) - lowest;
    let total = |alpha: f64| pairwise_sum(&probabilities(st, kb, alpha, beta, energies));
    let alpha = bisect_increasing(|a| -total(a), -1.0, alpha_lo, alpha_hi, MAX_BISECTIONS);
    let mut p = probabilities(st, kb, alpha, beta, energies);
    let sum = pairwise_sum(&p);
    p.iter_mut().for_each(|x| *x /= sum);
    FixedBetaSolve {
        p,
        alpha,
        normalization_residual: (sum - 1.0).abs(),
    }
}

fn mean_energy(p: &[f64], energies: &[f64]) -> f64 {
    let terms: Vec<f64> = p.iter().zip(energies).map(|(p, e)| p * e).collect();
    pairwise_sum(&terms)
}

/// Canonical MaxEnt distribution from the stationarity condition
/// `k_B h(p_i) = α + β ε_i`, `h(p) = d/dp [p G(ln 1/p)]`.
pub fn maxent_solve(problem: &MaxEntProblem) -> Result<MaxEntSolution, ThermoError> {
    let spec = &problem.spec;
    let st = Stationarity::of(spec)?;
    let kb = spec.kb();
    let energies = &problem.energies;
    let (beta, solved, energy_target) = match problem.mode {
        EnergyMode::FixedBeta(beta) => (beta, solve_fixed_beta(&st, kb, beta, energies), None),
        EnergyMode::FixedEnergy(target) => {
            let (beta, solved) = solve_fixed_energy(&st, kb, energies, target)?;
            (beta, solved, Some(target))
        }
    };
    let FixedBetaSolve {
        p,
        alpha,
        normalization_residual,
    } = solved;
    let mut stationarity_residual: f64 = 0.0;
    let mut cutoff_states = 0;
    for (pi, e) in p.iter().zip(energies) {
        if *pi == 0.0 {
            cutoff_states += 1;
            continue;
        }
        let rhs = alpha + beta * e;
        stationarity_residual = stationarity_residual.max((kb * st.h(*pi) - rhs).abs() / rhs.abs().max(1.0));
    }
    let distribution = Distribution::new(p.clone())?;
    let u = mean_energy(&p, energies);
    let s = evaluate(spec, &distribution)?;
    let z = partition_value(spec, energies, beta)?;
    Ok(MaxEntSolution {
        distribution,
        probabilities: p,
        energies: energies.clone(),
        alpha,
        beta,
        z,
        u,
        s,
        stationarity_residual,
        normalization_residual,
        energy_residual: energy_target.map(|t| (u - t).abs()),
        cutoff_states,
    })
}

fn solve_fixed_energy(
    st: &Stationarity,
    kb: f64,
    energies: &[f64],
    target: f64,
) -> Result<(f64, FixedBetaSolve), ThermoError> {
    let (lo_e, hi_e) = energies
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &e| (lo.min(e), hi.max(e)));
    let u_at = |beta: f64| mean_energy(&solve_fixed_beta(st, kb, beta, energies).p, energies);
    if hi_e - lo_e == 0.0 {
        if target == lo_e {
            return Ok((0.0, solve_fixed_beta(st, kb, 0.0, energies)));
        }
        return Err(ThermoError::Domain(format!("all levels equal {lo_e}; target energy {target} is unreachable")));
    }
    if !(target > lo_e && target < hi_e) {
        return Err(ThermoError::Domain(format!(
            "target energy {target} must lie strictly between {lo_e} and {hi_e}"
        )));
    }
    // U(β) decreases in β; widen [lo, hi] until it brackets the target
    let (mut lo, mut hi) = (-1.0, 1.0);
    while u_at(lo) < target {
        lo *= 2.0;
        if lo < -BETA_LIMIT {
            return Err(ThermoError::NoConvergence(format!("no beta >= {} reaches U = {target}", -BETA_LIMIT)));
        }
    }
    while u_at(hi) > target {
        hi *= 2.0;
        if hi > BETA_LIMIT {
            return Err(ThermoError::NoConvergence(format!("no beta <= {BETA_LIMIT} reaches U = {target}")));
        }
    }
    let beta = bisect_increasing(|b| -u_at(b), -target, lo, hi, MAX_BISECTIONS);
    Ok((beta, solve_fixed_beta(st, kb, beta, energies)))
}

/// `Z = Σ E(−β ε_i / k_B)`, `E = exp ∘ F`; states past the cutoff of `E`
/// contribute zero.
pub fn partition_value(spec: &EntropySpec, energies: &[f64], beta: f64) -> Result<f64, ThermoError> {
    let g = match TraceForm::of(spec)? {
        TraceForm::Exponential(g) => g,
        TraceForm::Shannon => GroupExponential::Identity,
        _ => return Err(ThermoError::Unsupported(format!("{} has no group exponential", spec.name()))),
    };
    let mut terms = Vec::with_capacity(energies.len());
    for e in energies {
        let x = -beta * e / spec.kb();
        match g.inverse(x) {
            Some(f) => terms.push(f.exp()),
            None if x < 0.0 => terms.push(0.0),
            None => return Err(ThermoError::Domain(format!("E({x}) is undefined for {spec}"))),
        }
    }
    Ok(pairwise_sum(&terms))
}

/// `|k_B Log_G(Z) + β U − S|` with `Log_G(x) = G(ln x)`.
///
/// An identity for Boltzmann-Gibbs; for the other kinds the value is a
/// measurement of how far the linear-constraint solution is from it.
pub fn legendre_check(solution: &MaxEntSolution, spec: &EntropySpec) -> Result<f64, ThermoError> {
    match spec.kind() {
        EntropyKind::BoltzmannGibbs
        | EntropyKind::Tsallis { .. }
        | EntropyKind::Kaniadakis { .. }
        | EntropyKind::BorgesRoditi { .. }
        | EntropyKind::GroupEntropy { .. }
        | EntropyKind::SIII { .. }
        | EntropyKind::SIV { .. }
        | EntropyKind::SAlphaBetaQ { .. } => {}
        _ => {
            return Err(ThermoError::Unsupported(format!(
                "no generalized logarithm for {}",
                spec.name()
            )))
        }
    }
    let z = partition_value(spec, &solution.energies, solution.beta)?;
    let g = crate::entropy::group_exponential_of(spec)?;
    Ok((spec.kb() * g.value(z.ln()) + solution.beta * solution.u - solution.s).abs())
}

#[derive(Debug, Clone, PartialEq)]
pub struct ThermoRow {
    pub beta: f64,
    pub u: f64,
    pub s: f64,
    /// `(∂S/∂U)⁻¹` by finite differences over neighbouring grid points.
    pub temperature: Option<f64>,
    /// `U − T S`.
    pub free_energy: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ThermoTable {
    pub rows: Vec<ThermoRow>,
    /// `U(β)` strictly decreasing along the grid.
    pub u_monotone: bool,
    pub warnings: Vec<String>,
}

/// Relative disagreement of one-sided slopes that triggers a coarse-grid warning.
const SLOPE_DISAGREEMENT: f64 = 0.1;

/// Solves at each `β` of an increasing grid and differentiates `S(U)`:
/// central differences inside, one-sided at the ends.
pub fn temperature_and_free_energy(
    spec: &EntropySpec,
    energies: &[f64],
    betas: &[f64],
) -> Result<ThermoTable, ThermoError> {
    if betas.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(ThermoError::InvalidInput("beta grid must be strictly increasing".into()));
    }
    let mut points = Vec::with_capacity(betas.len());
    for &beta in betas {
        let sol = maxent_solve(&MaxEntProblem::new(spec.clone(), energies.to_vec(), EnergyMode::FixedBeta(beta))?)?;
        points.push((beta, sol.u, sol.s));
    }
    let mut warnings = Vec::new();
    let u_monotone = points.windows(2).all(|w| w[1].1 < w[0].1);
    if !u_monotone {
        warnings.push("U(beta) is not strictly decreasing on the grid".to_string());
    }
    let slope = |i: usize, j: usize| -> Option<f64> {
        let (du, ds) = (points[j].1 - points[i].1, points[j].2 - points[i].2);
        (du != 0.0).then(|| ds / du)
    };
    let n = points.len();
    let mut rows = Vec::with_capacity(n);
    for (i, &(beta, u, s)) in points.iter().enumerate() {
        let backward = (i > 0).then(|| slope(i - 1, i)).flatten();
        let forward = (i + 1 < n).then(|| slope(i, i + 1)).flatten();
        let ds_du = match (backward, forward) {
            (Some(b), Some(f)) => {
                if (b - f).abs() > SLOPE_DISAGREEMENT * b.abs().max(f.abs()) {
                    warnings.push(format!("grid too coarse for stable differences at beta = {beta}"));
                }
                slope(i - 1, i + 1)
            }
            (one, other) => one.or(other),
        };
        let temperature = ds_du.filter(|d| *d != 0.0).map(|d| 1.0 / d);
        if temperature.is_none() && n > 1 {
            warnings.push(format!("temperature undefined at beta = {beta} (degenerate differences)"));
        }
        rows.push(ThermoRow {
            beta,
            u,
            s,
            temperature,
            free_energy: temperature.map(|t| u - t * s),
        });
    }
    Ok(ThermoTable {
        rows,
        u_monotone,
        warnings,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn solve(spec: EntropySpec, e: &[f64], mode: EnergyMode) -> MaxEntSolution {
        maxent_solve(&MaxEntProblem::new(spec, e.to_vec(), mode).unwrap()).unwrap()
    }

    #[test]
    fn boltzmann_two_level() {
        let sol = solve(EntropySpec::bg(), &[0.0, 1.0], EnergyMode::FixedBeta(1.0));
        let z = 1.0 + (-1f64).exp();
        assert!((sol.probabilities[0] - 1.0 / z).abs() < 1e-12);
        assert!((sol.probabilities[1] - (-1f64).exp() / z).abs() < 1e-12);
        assert!((sol.z - z).abs() < 1e-15);
        assert!(sol.stationarity_residual < 1e-12);
        assert!(sol.normalization_residual < 1e-12);
        assert!(legendre_check(&sol, &EntropySpec::bg()).unwrap() < 1e-12);
    }

    #[test]
    fn zero_beta_is_uniform() {
        let sol = solve(EntropySpec::bg(), &[0.0, 3.0, 7.5], EnergyMode::FixedBeta(0.0));
        for p in &sol.probabilities {
            assert!((p - 1.0 / 3.0).abs() < 1e-14);
        }
        assert!((sol.s - 3f64.ln()).abs() < 1e-13);
        assert!(legendre_check(&sol, &EntropySpec::bg()).unwrap() < 1e-13);
    }

    #[test]
    fn boltzmann_constant_enters_the_factor() {
        let spec = EntropySpec::bg().with_kb(2.0).unwrap();
        let sol = solve(spec.clone(), &[0.0, 1.0], EnergyMode::FixedBeta(1.0));
        let w = (-0.5f64).exp();
        assert!((sol.probabilities[1] - w / (1.0 + w)).abs() < 1e-12);
        assert!(legendre_check(&sol, &spec).unwrap() < 1e-12);
    }

    #[test]
    fn fixed_energy() {
        let e = [0.0, 1.0, 2.0];
        let sol = solve(EntropySpec::tsallis(0.5).unwrap(), &e, EnergyMode::FixedEnergy(0.6));
        assert!(sol.energy_residual.unwrap() < 1e-12);
        assert!(sol.beta > 0.0);
        let back = solve(EntropySpec::tsallis(0.5).unwrap(), &e, EnergyMode::FixedBeta(sol.beta));
        assert!((back.u - 0.6).abs() < 1e-12);
        let hot = solve(EntropySpec::bg(), &e, EnergyMode::FixedEnergy(1.5));
        assert!(hot.beta < 0.0);
        let err = maxent_solve(&MaxEntProblem::new(EntropySpec::bg(), e.to_vec(), EnergyMode::FixedEnergy(2.0)).unwrap());
        assert!(matches!(err, Err(ThermoError::Domain(_))));
    }

    #[test]
    fn tsallis_cutoff() {
        // q > 1: h is bounded above by 1/(q−1), so high levels are cut off
        let sol = solve(EntropySpec::tsallis(2.0).unwrap(), &[0.0, 1.0, 50.0], EnergyMode::FixedBeta(1.0));
        assert_eq!(sol.cutoff_states, 1);
        assert_eq!(sol.probabilities[2], 0.0);
        assert!(sol.stationarity_residual < 1e-8);
    }

    #[test]
    fn rejects_non_monotone_and_non_exponential() {
        let siii = EntropySpec::s_iii(0.6).unwrap();
        let p = MaxEntProblem::new(siii, vec![0.0, 1.0], EnergyMode::FixedBeta(1.0)).unwrap();
        assert!(matches!(maxent_solve(&p), Err(ThermoError::Unsupported(_))));
        let sd = EntropySpec::s_delta(1.5).unwrap();
        let p = MaxEntProblem::new(sd, vec![0.0, 1.0], EnergyMode::FixedBeta(1.0)).unwrap();
        assert!(matches!(maxent_solve(&p), Err(ThermoError::Unsupported(_))));
        assert!(MaxEntProblem::new(EntropySpec::bg(), vec![1.0], EnergyMode::FixedBeta(1.0)).is_err());
    }

    #[test]
    fn temperature_table() {
        let betas: Vec<f64> = (0..3).map(|i| 0.999 + 1e-3 * i as f64).collect();
        let table = temperature_and_free_energy(&EntropySpec::bg(), &[0.0, 1.0], &betas).unwrap();
        assert!(table.u_monotone);
        let t = table.rows[1].temperature.unwrap();
        assert!((t - 1.0).abs() < 0.02 * 1.0, "{t}");
        assert!(table.warnings.is_empty(), "{:?}", table.warnings);
        let f = table.rows[1].free_energy.unwrap();
        assert!((f - (table.rows[1].u - t * table.rows[1].s)).abs() < 1e-15);
        assert!(temperature_and_free_energy(&EntropySpec::bg(), &[0.0, 1.0], &[1.0, 0.5]).is_err());
    }
}
