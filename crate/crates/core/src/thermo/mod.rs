//! Occupation laws, microcanonical entropy, canonical MaxEnt distributions
//! and asymptotic scans.

mod maxent;
mod occupation;
mod scan;

pub use maxent::{
    legendre_check, maxent_solve, partition_value, temperature_and_free_energy, EnergyMode, MaxEntProblem,
    MaxEntSolution, ThermoRow, ThermoTable,
};
pub use occupation::{
    extensivity_check, microcanonical, microcanonical_from_log, ExtensivityReport, OccupationLaw, FMethod,
};
pub use scan::{asymptotic_scan, default_scan_grid, Asymptotic, ScanRow};

use thiserror::Error;

use crate::entropy::{DistributionError, EntropyError};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ThermoError {
    #[error(transparent)]
    Entropy(#[from] EntropyError),
    #[error("{0}")]
    Unsupported(String),
    #[error("{0}")]
    Domain(String),
    #[error("{0}")]
    Precondition(String),
    #[error("{0}")]
    NoConvergence(String),
    #[error("{0}")]
    InvalidInput(String),
}

impl From<DistributionError> for ThermoError {
    fn from(e: DistributionError) -> Self {
        ThermoError::Entropy(EntropyError::from(e))
    }
}

/// Parse energy levels, one real per line; `#` starts a comment.
pub fn parse_energies(text: &str) -> Result<Vec<f64>, ThermoError> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let e: f64 = line
            .parse()
            .map_err(|_| ThermoError::InvalidInput(format!("line {}: cannot parse {line:?} as an energy", i + 1)))?;
        if !e.is_finite() {
            return Err(ThermoError::InvalidInput(format!("line {}: energy must be finite", i + 1)));
        }
        out.push(e);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn energies_file() {
        assert_eq!(parse_energies("# levels\n0\n1.5 # excited\n\n-2e-1\n").unwrap(), vec![0.0, 1.5, -0.2]);
        let err = parse_energies("0\nx\n").unwrap_err();
        assert!(err.to_string().contains("line 2"));
        assert!(parse_energies("inf\n").is_err());
    }
}
