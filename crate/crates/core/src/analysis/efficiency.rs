use std::fmt;

use num_rational::Ratio;

use crate::error::{Error, Result};

/// Resource accounting for comparing `L` bits.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EfficiencyReport {
    /// Compared classical bits.
    pub eta_c: u64,
    /// Consumed qubits, including those spent establishing the pre-shared key.
    pub eta_q: u64,
    /// Classical bits transmitted for the comparison itself.
    pub eta_b: u64,
    pub eta: Ratio<u64>,
}

impl fmt::Display for EfficiencyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "eta_c={} eta_q={} eta_b={} eta={}",
            self.eta_c, self.eta_q, self.eta_b, self.eta
        )
    }
}

/// `8L` prepared pairs (two atoms each), `4L` fresh pairs resent by the
/// participants and `24L` qubits for the pre-shared key; `r_a` and `r_b`
/// are the only classical traffic counted.
pub fn qubit_efficiency(length: u64) -> Result<EfficiencyReport> {
    if length == 0 {
        return Err(Error::invalid("compared length L must be at least 1"));
    }
    let l = length;
    let overflow = || Error::invalid(format!("L = {l} overflows the qubit count"));
    let eta_c = l;
    let eta_q = l.checked_mul(8 * 2 + 4 * 2 + 24).ok_or_else(overflow)?;
    let eta_b = l.checked_mul(2).ok_or_else(overflow)?;
    let total = eta_q.checked_add(eta_b).ok_or_else(overflow)?;
    Ok(EfficiencyReport {
        eta_c,
        eta_q,
        eta_b,
        eta: Ratio::new(eta_c, total),
    })
}
