use std::fmt::Write as _;

use thiserror::Error;

use crate::coeff::parse_rational;
use crate::numeric::{format_significant, pairwise_sum};

/// Allowed deviation of `Σ p` from one.
pub const NORMALIZATION_TOLERANCE: f64 = 1e-12;

/// Largest uniform distribution that [`Distribution::probabilities`] expands.
const MAX_EXPANDED_STATES: f64 = 1e8;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DistributionError {
    #[error("probability {value} at index {index} is negative or not finite")]
    InvalidProbability { index: usize, value: f64 },
    #[error("probabilities sum to {sum}, not 1 (tolerance {NORMALIZATION_TOLERANCE:e})")]
    NotNormalized { sum: f64 },
    #[error("distribution is empty")]
    Empty,
    #[error("uniform distribution needs at least one state, got {0}")]
    InvalidStateCount(f64),
    #[error("line {line}: {reason}")]
    Parse { line: usize, reason: String },
    #[error("distribution with {0:e} states is too large to list")]
    TooLarge(f64),
    #[error("joint distribution rows have unequal lengths")]
    Ragged,
}

/// A probability distribution stored as atoms `(p, multiplicity)`.
///
/// Multiplicities let a uniform distribution over `W` states stay a single
/// atom, so `W` may be astronomically large (up to `f64::MAX`).
#[derive(Debug, Clone, PartialEq)]
pub struct Distribution {
    atoms: Vec<(f64, f64)>,
}

impl Distribution {
    pub fn new(p: Vec<f64>) -> Result<Self, DistributionError> {
        if p.is_empty() {
            return Err(DistributionError::Empty);
        }
        for (index, &value) in p.iter().enumerate() {
            if !(value.is_finite() && value >= 0.0) {
                return Err(DistributionError::InvalidProbability { index, value });
            }
        }
        let sum = pairwise_sum(&p);
        if (sum - 1.0).abs() > NORMALIZATION_TOLERANCE {
            return Err(DistributionError::NotNormalized { sum });
        }
        Ok(Distribution {
            atoms: p.into_iter().map(|x| (x, 1.0)).collect(),
        })
    }

    /// Uniform distribution on `states` states.
    pub fn uniform(states: f64) -> Result<Self, DistributionError> {
        if !(states.is_finite() && states >= 1.0 && states.fract() == 0.0) {
            return Err(DistributionError::InvalidStateCount(states));
        }
        Ok(Distribution {
            atoms: vec![(1.0 / states, states)],
        })
    }

    /// `(p, multiplicity)` pairs.
    pub fn atoms(&self) -> &[(f64, f64)] {
        &self.atoms
    }

    /// Number of states, counting impossible ones.
    pub fn states(&self) -> f64 {
        self.atoms.iter().map(|a| a.1).sum()
    }

    /// All probabilities, one per state.
    pub fn probabilities(&self) -> Result<Vec<f64>, DistributionError> {
        let states = self.states();
        if states > MAX_EXPANDED_STATES {
            return Err(DistributionError::TooLarge(states));
        }
        let mut out = Vec::with_capacity(states as usize);
        for &(p, m) in &self.atoms {
            out.extend(std::iter::repeat_n(p, m as usize));
        }
        Ok(out)
    }

    /// The same distribution with one extra state of probability zero.
    pub fn with_impossible_event(&self) -> Self {
        let mut atoms = self.atoms.clone();
        atoms.push((0.0, 1.0));
        Distribution { atoms }
    }

    /// `Σ f(p)` over states with `p > 0`, with pairwise summation over atoms.
    ///
    /// Impossible states are skipped rather than summed as zeros, so
    /// appending one leaves the result bit-identical.
    pub fn sum_over_states(&self, f: impl Fn(f64) -> f64) -> f64 {
        let terms: Vec<f64> = self
            .atoms
            .iter()
            .filter(|a| a.0 > 0.0)
            .map(|&(p, m)| if m == 1.0 { f(p) } else { m * f(p) })
            .collect();
        pairwise_sum(&terms)
    }

    /// Parse one probability per line. Values may be decimals or `p/q`;
    /// `#` starts a comment.
    pub fn parse(text: &str) -> Result<Self, DistributionError> {
        let mut p = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            p.push(parse_value(line, i + 1)?);
        }
        Distribution::new(p)
    }

    /// Text form accepted by [`parse`](Self::parse); doubles are printed
    /// with 17 significant digits so the round trip is exact.
    pub fn to_text(&self) -> Result<String, DistributionError> {
        let mut out = String::new();
        for p in self.probabilities()? {
            let _ = writeln!(out, "{}", format_significant(p, 17));
        }
        Ok(out)
    }
}

pub(crate) fn parse_value(line: &str, line_no: usize) -> Result<f64, DistributionError> {
    let err = |reason: String| DistributionError::Parse { line: line_no, reason };
    if line.contains('/') {
        let r = parse_rational(line).map_err(|e| err(e.to_string()))?;
        Ok(crate::coeff::Coefficient::to_f64(&r))
    } else {
        line.parse::<f64>()
            .map_err(|_| err(format!("cannot parse {line:?} as a number")))
    }
}

/// A joint distribution `p_ij` of two subsystems.
#[derive(Debug, Clone, PartialEq)]
pub struct JointDistribution {
    rows: usize,
    cols: usize,
    p: Vec<f64>,
}

impl JointDistribution {
    pub fn new(matrix: Vec<Vec<f64>>) -> Result<Self, DistributionError> {
        let rows = matrix.len();
        let cols = matrix.first().map_or(0, Vec::len);
        if matrix.iter().any(|r| r.len() != cols) {
            return Err(DistributionError::Ragged);
        }
        let p: Vec<f64> = matrix.into_iter().flatten().collect();
        Distribution::new(p.clone())?;
        Ok(JointDistribution { rows, cols, p })
    }

    /// `p_ij = a_i b_j`.
    pub fn product(a: &Distribution, b: &Distribution) -> Result<Self, DistributionError> {
        let pa = a.probabilities()?;
        let pb = b.probabilities()?;
        let p = pa.iter().flat_map(|x| pb.iter().map(move |y| x * y)).collect();
        Ok(JointDistribution {
            rows: pa.len(),
            cols: pb.len(),
            p,
        })
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.p[i * self.cols + j]
    }

    pub fn marginal_a(&self) -> Distribution {
        let p = (0..self.rows)
            .map(|i| pairwise_sum(&self.p[i * self.cols..(i + 1) * self.cols]))
            .collect();
        Distribution { atoms: with_unit(p) }
    }

    pub fn marginal_b(&self) -> Distribution {
        let p = (0..self.cols)
            .map(|j| {
                let col: Vec<f64> = (0..self.rows).map(|i| self.get(i, j)).collect();
                pairwise_sum(&col)
            })
            .collect();
        Distribution { atoms: with_unit(p) }
    }

    /// The joint distribution as a flat distribution on `rows × cols` states.
    pub fn flatten(&self) -> Distribution {
        Distribution {
            atoms: with_unit(self.p.clone()),
        }
    }
}

fn with_unit(p: Vec<f64>) -> Vec<(f64, f64)> {
    p.into_iter().map(|x| (x, 1.0)).collect()
}
