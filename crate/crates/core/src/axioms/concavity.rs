use super::{describe_point, spec_at, AxiomError, AxiomReport, Axiom, ParameterRegion, Verdict};
use crate::coeff::Coefficient;
use crate::entropy::{EntropySpec, TraceForm};
use crate::numeric::format_significant;

/// Sufficient coefficient condition for concavity: `a_k ≥ 0` and
/// `a_k > c (k+1) a_{k+1}` for every consecutive pair.
///
/// An all-zero tail is accepted. Failure of a sufficient condition says
/// nothing about concavity itself, so the verdict is then inconclusive,
/// never fail.
pub fn check_concavity_condition<C: Coefficient>(a: &[C], scale: &C) -> AxiomReport {
    let subject = format!(
        "a=[{}]",
        a.iter().map(ToString::to_string).collect::<Vec<_>>().join(",")
    );
    let mut report = AxiomReport::new(Axiom::ConcavityCondition, subject);
    report.details.push("# k\ta_k\tc(k+1)a_{k+1}\tholds".to_string());
    let mut holds_all = !a.is_empty();
    for (k, ak) in a.iter().enumerate() {
        if *ak < C::zero() {
            holds_all = false;
            report.observe(-ak.to_f64(), || format!("a_{k}<0"));
        }
        let Some(next) = a.get(k + 1) else { break };
        let bound = scale.clone() * C::from_int(k as i64 + 1) * next.clone();
        let zero_tail = ak.is_zero() && next.is_zero();
        let holds = zero_tail || *ak > bound;
        report.details.push(format!("{k}\t{ak}\t{bound}\t{holds}"));
        if !holds {
            holds_all = false;
            let gap = (bound - ak.clone()).to_f64();
            report.observe(gap.max(f64::MIN_POSITIVE), || format!("k={k}"));
        }
    }
    report.trials = a.len().saturating_sub(1);
    report.verdict = if holds_all { Verdict::Pass } else { Verdict::Inconclusive };
    report
}

/// Sampling used by [`check_concavity_numeric`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConcavityOptions {
    /// Log-spaced sample points in `[x_min, x_max]`.
    pub points: usize,
    pub x_min: f64,
    pub x_max: f64,
    /// Relative finite-difference step for forms without closed derivatives.
    pub fd_step: f64,
}

impl Default for ConcavityOptions {
    fn default() -> Self {
        ConcavityOptions {
            points: 400,
            x_min: 1e-8,
            x_max: 1.0 - 1e-8,
            fd_step: 1e-5,
        }
    }
}

/// `x · φ''(x)` for `φ(x) = x G(ln 1/x)`, or `None` when the finite
/// difference fails its Richardson consistency check.
fn scaled_second_derivative(form: &TraceForm, x: f64, step: f64) -> Option<f64> {
    match form {
        // φ'' = −(G'(t) − G''(t))/x at t = ln(1/x)
        TraceForm::Exponential(g) => {
            let t = -x.ln();
            Some(-(g.derivative(t) - g.second_derivative(t)))
        }
        TraceForm::Shannon => Some(-1.0),
        _ => {
            let second = |h: f64| (form.term(x + h) - 2.0 * form.term(x) + form.term(x - h)) / (h * h);
            let h = step * x;
            let coarse = second(h);
            let fine = second(0.5 * h);
            let extrapolated = (4.0 * fine - coarse) / 3.0;
            ((coarse - fine).abs() <= 1e-3 * extrapolated.abs()).then_some(x * extrapolated)
        }
    }
}

/// Checks `φ''(x) < 0` on a log grid of `x` for every parameter point of
/// `region` (parameters not named by the region keep their value in `base`).
///
/// Grid points where the entropy is undefined (for instance `q = 1`) are skipped
/// and listed in the details.
pub fn check_concavity_numeric(
    base: &EntropySpec,
    region: &ParameterRegion,
    options: &ConcavityOptions,
) -> Result<AxiomReport, AxiomError> {
    if options.points < 2 || !(options.x_min > 0.0 && options.x_min < options.x_max && options.x_max < 1.0) {
        return Err(AxiomError::InvalidInput("concavity grid needs 0 < x_min < x_max < 1 and 2+ points".into()));
    }
    let mut report = AxiomReport::new(Axiom::Concavity, base.to_string());
    let mut failed = false;
    let mut unreliable = 0usize;
    let mut checked_points = 0usize;
    report.details.push("# point\tmin_margin".to_string());
    let (ln_lo, ln_hi) = (options.x_min.ln(), options.x_max.ln());
    for point in region.points() {
        let spec = match spec_at(base, &point) {
            Ok(s) => s,
            Err(e) => {
                report.details.push(format!("skipped {}: {e}", describe_point(&point)));
                continue;
            }
        };
        checked_points += 1;
        let form = TraceForm::of(&spec)?;
        let mut min_margin = f64::INFINITY;
        for i in 0..options.points {
            let x = (ln_lo + (ln_hi - ln_lo) * i as f64 / (options.points - 1) as f64).exp();
            report.trials += 1;
            let Some(d2x) = scaled_second_derivative(&form, x, options.fd_step) else {
                unreliable += 1;
                continue;
            };
            min_margin = min_margin.min(-d2x);
            if d2x >= 0.0 {
                failed = true;
                // a zero second derivative still counts against strictness
                report.observe(d2x.max(f64::MIN_POSITIVE), || {
                    let p = describe_point(&point);
                    let sep = if p.is_empty() { "" } else { "," };
                    format!("{p}{sep}x={}", format_significant(x, 17))
                });
            }
        }
        let label = if point.is_empty() { spec.to_string() } else { describe_point(&point) };
        report.details.push(format!("{label}\t{}", format_significant(min_margin, 6)));
    }
    if unreliable > 0 {
        report.details.push(format!("{unreliable} finite-difference samples failed the Richardson check"));
    }
    report.verdict = if failed {
        Verdict::Fail
    } else if unreliable > 0 || checked_points == 0 {
        Verdict::Inconclusive
    } else {
        Verdict::Pass
    };
    Ok(report)
}
