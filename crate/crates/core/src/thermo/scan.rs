use std::fmt;

use crate::entropy::{evaluate, Distribution, EntropySpec};
use crate::numeric::format_significant;

/// Growth class of `S(uniform W)` for large `W`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Asymptotic {
    /// `(ln W)^a`
    LogPower(f64),
    /// `W^b`
    Power(f64),
    Undetermined,
}

impl Asymptotic {
    pub fn exponent(&self) -> Option<f64> {
        match self {
            Asymptotic::LogPower(a) | Asymptotic::Power(a) => Some(*a),
            Asymptotic::Undetermined => None,
        }
    }
}

impl fmt::Display for Asymptotic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Asymptotic::LogPower(a) => write!(f, "(ln W)^{}", format_significant(*a, 6)),
            Asymptotic::Power(b) => write!(f, "W^{}", format_significant(*b, 6)),
            Asymptotic::Undetermined => f.write_str("undetermined"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScanRow {
    pub spec: EntropySpec,
    /// `S(uniform W)` per grid point, `None` where evaluation failed.
    pub values: Vec<Option<f64>>,
    pub class: Asymptotic,
    pub notes: Vec<String>,
}

/// `W = 10, 100, ..., 10¹²`.
pub fn default_scan_grid() -> Vec<f64> {
    (1..=12).map(|k| 10f64.powi(k)).collect()
}

/// Evaluates each spec on uniform distributions over `grid` and classifies
/// the growth by comparing the drift of the local log-log slopes against
/// `ln ln W` and against `ln W` over the three largest grid points.
pub fn asymptotic_scan(specs: &[EntropySpec], grid: &[f64]) -> Vec<ScanRow> {
    specs
        .iter()
        .map(|spec| {
            let mut notes = Vec::new();
            let values: Vec<Option<f64>> = grid
                .iter()
                .map(|&w| match Distribution::uniform(w).map_err(Into::into).and_then(|d| evaluate(spec, &d)) {
                    Ok(s) => Some(s),
                    Err(e) => {
                        notes.push(format!("W={w}: {e}"));
                        None
                    }
                })
                .collect();
            let class = classify(grid, &values);
            ScanRow {
                spec: spec.clone(),
                values,
                class,
                notes,
            }
        })
        .collect()
}

fn classify(grid: &[f64], values: &[Option<f64>]) -> Asymptotic {
    let tail: Vec<(f64, f64)> = grid
        .iter()
        .zip(values)
        .filter_map(|(&w, s)| match s {
            Some(s) if *s > 0.0 && w > 1.0 => Some((w.ln(), s.ln())),
            _ => None,
        })
        .collect();
    if tail.len() < 3 {
        return Asymptotic::Undetermined;
    }
    let last = &tail[tail.len() - 3..];
    let slopes = |x: &dyn Fn(f64) -> f64| -> (f64, f64) {
        let s1 = (last[1].1 - last[0].1) / (x(last[1].0) - x(last[0].0));
        let s2 = (last[2].1 - last[1].1) / (x(last[2].0) - x(last[1].0));
        (s1, s2)
    };
    let (a1, a2) = slopes(&|lnw: f64| lnw.ln());
    let (b1, b2) = slopes(&|lnw: f64| lnw);
    let drift = |s1: f64, s2: f64| (s2 - s1).abs() / s2.abs().max(f64::MIN_POSITIVE);
    if !(a2.is_finite() && b2.is_finite()) {
        return Asymptotic::Undetermined;
    }
    if drift(a1, a2) <= drift(b1, b2) {
        Asymptotic::LogPower(a2)
    } else {
        Asymptotic::Power(b2)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn classifies_reference_growths() {
        let specs = [
            EntropySpec::bg(),
            EntropySpec::tsallis(0.5).unwrap(),
            EntropySpec::s_delta(2.0).unwrap(),
        ];
        let rows = asymptotic_scan(&specs, &default_scan_grid());
        assert!(matches!(rows[0].class, Asymptotic::LogPower(a) if (a - 1.0).abs() < 1e-9));
        assert!(matches!(rows[1].class, Asymptotic::Power(b) if (b - 0.5).abs() < 1e-4));
        assert!(matches!(rows[2].class, Asymptotic::LogPower(a) if (a - 2.0).abs() < 1e-9));
        assert_eq!(rows[0].class.to_string(), "(ln W)^1");
    }

    #[test]
    fn failed_points_are_noted() {
        // δ = 4 exceeds 1 + ln W below W = e³
        let rows = asymptotic_scan(&[EntropySpec::s_delta(4.0).unwrap()], &default_scan_grid());
        assert_eq!(rows[0].values[0], None);
        assert!(rows[0].notes[0].starts_with("W=10:"));
        assert!(matches!(rows[0].class, Asymptotic::LogPower(a) if (a - 4.0).abs() < 1e-9));
        let few = asymptotic_scan(&[EntropySpec::bg()], &[10.0, 100.0]);
        assert_eq!(few[0].class, Asymptotic::Undetermined);
    }
}
