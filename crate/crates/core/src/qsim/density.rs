use nalgebra::DMatrix;

use super::{Amplitude, EXACT_TOLERANCE};
use crate::error::{Error, Result};

/// Density operator of a (possibly mixed) state, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    dim: usize,
    entries: Vec<Amplitude>,
}

impl DensityMatrix {
    /// Checks hermiticity, unit trace and positivity (eigenvalues ≥ −1e-10).
    pub fn new(dim: usize, entries: Vec<Amplitude>) -> Result<Self> {
        let m = Self::from_entries_unchecked(dim, entries)?;
        let herm = m.hermiticity_deviation();
        if herm > EXACT_TOLERANCE {
            return Err(Error::invalid(format!(
                "matrix is not Hermitian ({herm:e})"
            )));
        }
        let tr = m.trace();
        if (tr - 1.0).abs() > EXACT_TOLERANCE {
            return Err(Error::invalid(format!("trace {tr} is not 1")));
        }
        if m.eigenvalues().iter().any(|&l| l < -1e-10) {
            return Err(Error::invalid("matrix has a negative eigenvalue"));
        }
        Ok(m)
    }

    pub(crate) fn from_entries_unchecked(dim: usize, entries: Vec<Amplitude>) -> Result<Self> {
        if dim == 0 || entries.len() != dim * dim {
            return Err(Error::DimensionMismatch {
                expected: dim * dim,
                actual: entries.len(),
            });
        }
        Ok(Self { dim, entries })
    }

    /// `|ψ⟩⟨ψ|` for a normalised vector.
    pub fn pure(state: &[Amplitude]) -> Result<Self> {
        let dim = state.len();
        let mut entries = Vec::with_capacity(dim * dim);
        for a in state {
            for b in state {
                entries.push(a * b.conj());
            }
        }
        Self::new(dim, entries)
    }

    pub fn maximally_mixed(dim: usize) -> Self {
        let mut entries = vec![Amplitude::new(0.0, 0.0); dim * dim];
        for i in 0..dim {
            entries[i * dim + i] = Amplitude::new(1.0 / dim as f64, 0.0);
        }
        Self { dim, entries }
    }

    /// Convex combination `Σ w_k ρ_k`; weights must be non-negative and sum to 1.
    pub fn mixture<'a>(parts: impl IntoIterator<Item = (f64, &'a DensityMatrix)>) -> Result<Self> {
        let mut acc: Option<Self> = None;
        let mut total = 0.0;
        for (w, rho) in parts {
            if w < 0.0 || !w.is_finite() {
                return Err(Error::invalid("mixture weights must be non-negative"));
            }
            total += w;
            match acc.as_mut() {
                None => {
                    acc = Some(Self {
                        dim: rho.dim,
                        entries: rho.entries.iter().map(|e| e * w).collect(),
                    })
                }
                Some(a) => a.add_scaled(w, rho)?,
            }
        }
        let acc = acc.ok_or_else(|| Error::invalid("empty mixture"))?;
        if (total - 1.0).abs() > 1e-9 {
            return Err(Error::invalid(format!("mixture weights sum to {total}")));
        }
        Ok(acc)
    }

    /// Average of equally weighted states.
    pub fn average<'a>(states: impl IntoIterator<Item = &'a DensityMatrix>) -> Result<Self> {
        let states: Vec<&DensityMatrix> = states.into_iter().collect();
        let w = 1.0 / states.len().max(1) as f64;
        Self::mixture(states.into_iter().map(|s| (w, s)))
    }

    pub(crate) fn add_scaled(&mut self, w: f64, other: &DensityMatrix) -> Result<()> {
        if other.dim != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                actual: other.dim,
            });
        }
        for (a, b) in self.entries.iter_mut().zip(&other.entries) {
            *a += b * w;
        }
        Ok(())
    }

    pub(crate) fn scale(&mut self, w: f64) {
        for a in &mut self.entries {
            *a *= w;
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> Amplitude {
        self.entries[row * self.dim + col]
    }

    pub fn entries(&self) -> &[Amplitude] {
        &self.entries
    }

    pub fn trace(&self) -> f64 {
        (0..self.dim).map(|i| self.get(i, i).re).sum()
    }

    pub fn hermiticity_deviation(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for r in 0..self.dim {
            for c in 0..self.dim {
                worst = worst.max((self.get(r, c) - self.get(c, r).conj()).norm());
            }
        }
        worst
    }

    fn to_nalgebra(&self) -> DMatrix<Amplitude> {
        DMatrix::from_row_slice(self.dim, self.dim, &self.entries)
    }

    /// Eigenvalues in ascending order.
    pub fn eigenvalues(&self) -> Vec<f64> {
        let mut ev: Vec<f64> = self
            .to_nalgebra()
            .symmetric_eigenvalues()
            .iter()
            .copied()
            .collect();
        ev.sort_by(f64::total_cmp);
        ev
    }
}

/// `½ Σ |λ_k(a − b)|`, clamped to `[0, 1]`.
pub fn trace_distance(a: &DensityMatrix, b: &DensityMatrix) -> Result<f64> {
    if a.dim != b.dim {
        return Err(Error::DimensionMismatch {
            expected: a.dim,
            actual: b.dim,
        });
    }
    let diff = a.to_nalgebra() - b.to_nalgebra();
    let half_norm: f64 = diff
        .symmetric_eigenvalues()
        .iter()
        .map(|l| l.abs())
        .sum::<f64>()
        / 2.0;
    Ok(half_norm.clamp(0.0, 1.0))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn basis(dim: usize, k: usize) -> Vec<Amplitude> {
        let mut v = vec![Amplitude::new(0.0, 0.0); dim];
        v[k] = Amplitude::new(1.0, 0.0);
        v
    }

    #[test]
    fn distance_to_self_is_zero() {
        let rho =
            DensityMatrix::pure(&[Amplitude::new(0.6, 0.0), Amplitude::new(0.0, 0.8)]).unwrap();
        assert!(trace_distance(&rho, &rho).unwrap() < 1e-12);
    }

    #[test]
    fn orthogonal_pure_states_are_at_distance_one() {
        let g = DensityMatrix::pure(&basis(2, 0)).unwrap();
        let e = DensityMatrix::pure(&basis(2, 1)).unwrap();
        assert!((trace_distance(&g, &e).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn pure_versus_maximally_mixed_is_half() {
        let g = DensityMatrix::pure(&basis(2, 0)).unwrap();
        let mixed = DensityMatrix::maximally_mixed(2);
        assert!((trace_distance(&g, &mixed).unwrap() - 0.5).abs() < 1e-12);
    }

    #[test]
    fn dimension_mismatch_is_an_error() {
        let a = DensityMatrix::maximally_mixed(2);
        let b = DensityMatrix::maximally_mixed(4);
        assert!(matches!(
            trace_distance(&a, &b),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn validation_rejects_bad_matrices() {
        let z = Amplitude::new(0.0, 0.0);
        let one = Amplitude::new(1.0, 0.0);
        assert!(DensityMatrix::new(2, vec![one, one, z, z]).is_err());
        assert!(DensityMatrix::new(2, vec![one, z, z, one]).is_err());
        assert!(DensityMatrix::new(
            2,
            vec![Amplitude::new(1.5, 0.0), z, z, Amplitude::new(-0.5, 0.0)]
        )
        .is_err());
        assert!(DensityMatrix::new(2, vec![one, z, z, z]).is_ok());
    }

    #[test]
    fn mixture_of_basis_states_is_maximally_mixed() {
        let g = DensityMatrix::pure(&basis(2, 0)).unwrap();
        let e = DensityMatrix::pure(&basis(2, 1)).unwrap();
        let avg = DensityMatrix::average([&g, &e]).unwrap();
        assert!(trace_distance(&avg, &DensityMatrix::maximally_mixed(2)).unwrap() < 1e-12);
        assert!(DensityMatrix::mixture([(0.3, &g)]).is_err());
    }
}
