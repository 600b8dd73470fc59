use std::f64::consts::PI;

use super::detection::{estimate_detection, MonteCarloPlan};
use crate::adversary::{controlled_rotation_family, Attack};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Theorem1Row {
    pub theta: f64,
    /// Failed checks over checked atoms, pooled across the four cases.
    pub detection_rate: f64,
    /// Trace distance between Eve's probe states given `k_a = 0` and `k_a = 1`.
    pub probe_information: f64,
    pub atoms_checked: u64,
    pub runs: u64,
}

/// `points` angles evenly spaced over `[0, π]`.
pub fn theta_grid(points: usize) -> Result<Vec<f64>> {
    match points {
        0 => Err(Error::invalid("θ grid needs at least one point")),
        1 => Ok(vec![0.0]),
        n => Ok((0..n).map(|k| k as f64 * PI / (n - 1) as f64).collect()),
    }
}

/// Runs the controlled-rotation attack on Alice's channel at every grid angle.
pub fn theorem1_scan(
    grid: &[f64],
    trials: u64,
    length: usize,
    seed: u64,
) -> Result<Vec<Theorem1Row>> {
    if grid.is_empty() {
        return Err(Error::invalid("θ grid is empty"));
    }
    grid.iter()
        .map(|&theta| {
            if !theta.is_finite() {
                return Err(Error::invalid(format!("θ = {theta} is not finite")));
            }
            let attack = Attack::EntangleMeasure(controlled_rotation_family(theta));
            let stats = estimate_detection(&MonteCarloPlan::new(trials, length, attack, seed))?;
            Ok(Theorem1Row {
                theta,
                detection_rate: stats.atom_detection_rate(),
                probe_information: stats.probe_information()?,
                atoms_checked: stats.per_case.iter().map(|c| c.checked).sum(),
                runs: stats.runs,
            })
        })
        .collect()
}
