//! Exact finite-dimensional state engine.
//!
//! Everything quantum in the simulator lives in a [`QubitRegister`]: a dense
//! complex statevector over a small set of labelled qubits. Amplitude indices
//! treat the first label as the most significant bit, so for two qubits the
//! basis order is `|gg⟩, |ge⟩, |eg⟩, |ee⟩` with `g ↦ 0` and `e ↦ 1`.

mod density;
mod register;
mod unitary;

use std::fmt;

pub use density::{trace_distance, DensityMatrix};
pub use num_complex::Complex64 as Amplitude;
pub use register::{equal_up_to_global_phase, QubitRegister};
pub use unitary::{cavity_unitary, UnitaryMatrix};

/// Tolerance used for algebraic identities (norms, unitarity, hermiticity).
pub const EXACT_TOLERANCE: f64 = 1e-12;

/// Outcomes with a Born probability below this are never sampled.
pub const IMPOSSIBLE_PROBABILITY: f64 = 1e-15;

/// Opaque label of a qubit inside a register.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QubitId(pub u32);

impl fmt::Display for QubitId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "q{}", self.0)
    }
}

/// Result of a computational (Z) basis measurement of one atom.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ZOutcome {
    /// Ground state `|g⟩`, bit 0.
    G,
    /// Excited state `|e⟩`, bit 1.
    E,
}

impl ZOutcome {
    pub const ALL: [ZOutcome; 2] = [ZOutcome::G, ZOutcome::E];

    pub fn from_bit(bit: bool) -> Self {
        if bit {
            ZOutcome::E
        } else {
            ZOutcome::G
        }
    }

    pub fn bit(self) -> bool {
        self == ZOutcome::E
    }

    pub fn index(self) -> usize {
        self.bit() as usize
    }

    pub fn symbol(self) -> char {
        match self {
            ZOutcome::G => 'g',
            ZOutcome::E => 'e',
        }
    }

    pub fn from_symbol(c: char) -> Option<Self> {
        match c {
            'g' => Some(ZOutcome::G),
            'e' => Some(ZOutcome::E),
            _ => None,
        }
    }
}

impl fmt::Display for ZOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.symbol())
    }
}

/// Result of a measurement in the four-element entangled Δ basis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum DeltaOutcome {
    /// `(|gg⟩ − i|ee⟩)/√2`
    PhiMinus,
    /// `(|ge⟩ − i|eg⟩)/√2`
    PsiMinus,
    /// `(|eg⟩ − i|ge⟩)/√2`
    PsiPlus,
    /// `(|ee⟩ − i|gg⟩)/√2`
    PhiPlus,
}

impl DeltaOutcome {
    pub const ALL: [DeltaOutcome; 4] = [
        DeltaOutcome::PhiMinus,
        DeltaOutcome::PsiMinus,
        DeltaOutcome::PsiPlus,
        DeltaOutcome::PhiPlus,
    ];

    pub fn index(self) -> usize {
        self as usize
    }

    /// Basis vector over `(|gg⟩, |ge⟩, |eg⟩, |ee⟩)`.
    pub fn vector(self) -> [Amplitude; 4] {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let one = Amplitude::new(h, 0.0);
        let mi = Amplitude::new(0.0, -h);
        let z = Amplitude::new(0.0, 0.0);
        match self {
            DeltaOutcome::PhiMinus => [one, z, z, mi],
            DeltaOutcome::PsiMinus => [z, one, mi, z],
            DeltaOutcome::PsiPlus => [z, mi, one, z],
            DeltaOutcome::PhiPlus => [mi, z, z, one],
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            DeltaOutcome::PhiMinus => "phi-",
            DeltaOutcome::PsiMinus => "psi-",
            DeltaOutcome::PsiPlus => "psi+",
            DeltaOutcome::PhiPlus => "phi+",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|d| d.name() == s)
    }
}

impl fmt::Display for DeltaOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}
