use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_4};

use super::{Amplitude, EXACT_TOLERANCE};
use crate::error::{Error, Result};

/// Square unitary over `log2(dim)` qubits, stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct UnitaryMatrix {
    dim: usize,
    entries: Vec<Amplitude>,
}

impl UnitaryMatrix {
    /// Validates shape and `U†U = I` within 1e-12.
    pub fn new(dim: usize, entries: Vec<Amplitude>) -> Result<Self> {
        if dim < 2 || !dim.is_power_of_two() {
            return Err(Error::invalid(format!(
                "unitary dimension {dim} is not a power of two >= 2"
            )));
        }
        if entries.len() != dim * dim {
            return Err(Error::DimensionMismatch {
                expected: dim * dim,
                actual: entries.len(),
            });
        }
        if entries
            .iter()
            .any(|a| !a.re.is_finite() || !a.im.is_finite())
        {
            return Err(Error::invalid("matrix entries must be finite"));
        }
        let m = Self { dim, entries };
        let deviation = m.unitarity_deviation();
        if deviation > EXACT_TOLERANCE {
            return Err(Error::NotUnitary { deviation });
        }
        Ok(m)
    }

    pub fn from_rows(rows: &[Vec<Amplitude>]) -> Result<Self> {
        let dim = rows.len();
        if rows.iter().any(|r| r.len() != dim) {
            return Err(Error::invalid("matrix rows must all have length dim"));
        }
        Self::new(dim, rows.concat())
    }

    pub fn identity(dim: usize) -> Self {
        assert!(dim.is_power_of_two() && dim >= 2);
        let mut entries = vec![Amplitude::new(0.0, 0.0); dim * dim];
        for i in 0..dim {
            entries[i * dim + i] = Amplitude::new(1.0, 0.0);
        }
        Self { dim, entries }
    }

    /// Controlled-NOT, control on the first (most significant) qubit.
    pub fn cnot() -> Self {
        let mut m = Self::identity(4);
        let one = Amplitude::new(1.0, 0.0);
        let zero = Amplitude::new(0.0, 0.0);
        m.entries[2 * 4 + 2] = zero;
        m.entries[3 * 4 + 3] = zero;
        m.entries[2 * 4 + 3] = one;
        m.entries[3 * 4 + 2] = one;
        m
    }

    /// `|0⟩⟨0| ⊗ I + |1⟩⟨1| ⊗ target`, control on the most significant qubit.
    pub fn controlled(target: &UnitaryMatrix) -> Self {
        let d = target.dim;
        let n = 2 * d;
        let mut m = Self::identity(n);
        for r in 0..d {
            for c in 0..d {
                m.entries[(d + r) * n + d + c] = target.get(r, c);
            }
        }
        m
    }

    /// Single-qubit rotation `exp(−i θ Y / 2)`.
    pub fn ry(theta: f64) -> Self {
        let (s, c) = (theta / 2.0).sin_cos();
        Self {
            dim: 2,
            entries: vec![
                Amplitude::new(c, 0.0),
                Amplitude::new(-s, 0.0),
                Amplitude::new(s, 0.0),
                Amplitude::new(c, 0.0),
            ],
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn num_qubits(&self) -> usize {
        self.dim.trailing_zeros() as usize
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> Amplitude {
        self.entries[row * self.dim + col]
    }

    pub fn entries(&self) -> &[Amplitude] {
        &self.entries
    }

    pub fn adjoint(&self) -> Self {
        let d = self.dim;
        let mut entries = vec![Amplitude::new(0.0, 0.0); d * d];
        for r in 0..d {
            for c in 0..d {
                entries[c * d + r] = self.entries[r * d + c].conj();
            }
        }
        Self { dim: d, entries }
    }

    pub fn mul(&self, other: &UnitaryMatrix) -> Result<Self> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                actual: other.dim,
            });
        }
        let d = self.dim;
        let mut entries = vec![Amplitude::new(0.0, 0.0); d * d];
        for r in 0..d {
            for k in 0..d {
                let a = self.entries[r * d + k];
                for c in 0..d {
                    entries[r * d + c] += a * other.entries[k * d + c];
                }
            }
        }
        Ok(Self { dim: d, entries })
    }

    /// Largest entrywise deviation of `U†U` from the identity.
    pub fn unitarity_deviation(&self) -> f64 {
        let d = self.dim;
        let mut worst: f64 = 0.0;
        for r in 0..d {
            for c in 0..d {
                let mut acc = Amplitude::new(0.0, 0.0);
                for k in 0..d {
                    acc += self.entries[k * d + r].conj() * self.entries[k * d + c];
                }
                let target = if r == c { 1.0 } else { 0.0 };
                worst = worst.max((acc - target).norm());
            }
        }
        worst
    }

    /// `U |v⟩` for a column vector of length `dim`.
    pub fn apply_to(&self, v: &[Amplitude]) -> Vec<Amplitude> {
        (0..self.dim)
            .map(|r| (0..self.dim).map(|c| self.get(r, c) * v[c]).sum())
            .collect()
    }
}

/// Two-atom cavity evolution at `λt = π/4`, `Ωt = π` over the ordered basis
/// `(|gg⟩, |ge⟩, |eg⟩, |ee⟩)`. The global phase `e^{−iπ/4}` is kept.
pub fn cavity_unitary() -> UnitaryMatrix {
    let pref = Amplitude::from_polar(FRAC_1_SQRT_2, -FRAC_PI_4);
    let one = pref;
    let mi = pref * Amplitude::new(0.0, -1.0);
    let z = Amplitude::new(0.0, 0.0);
    UnitaryMatrix {
        dim: 4,
        entries: vec![
            one, z, z, mi, //
            z, one, mi, z, //
            z, mi, one, z, //
            mi, z, z, one,
        ],
    }
}
