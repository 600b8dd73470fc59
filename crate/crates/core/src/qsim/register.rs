use std::fmt;

use rand::Rng;

use super::{
    Amplitude, DeltaOutcome, DensityMatrix, QubitId, UnitaryMatrix, ZOutcome, EXACT_TOLERANCE,
    IMPOSSIBLE_PROBABILITY,
};
use crate::error::{Error, Result};

/// Largest register the engine will build.
pub const MAX_QUBITS: usize = 16;

/// Dense pure state over a list of labelled qubits.
///
/// Index bit `n - 1 - p` of an amplitude index holds the value of the qubit at
/// position `p` of [`QubitRegister::labels`].
#[derive(Debug, Clone, PartialEq)]
pub struct QubitRegister {
    labels: Vec<QubitId>,
    amplitudes: Vec<Amplitude>,
    next_id: u32,
}

impl QubitRegister {
    /// Computational basis state `|o_0 o_1 …⟩` with labels `q0, q1, …`.
    pub fn product_state(outcomes: &[ZOutcome]) -> Result<Self> {
        if outcomes.is_empty() {
            return Err(Error::invalid("product state needs at least one qubit"));
        }
        if outcomes.len() > MAX_QUBITS {
            return Err(Error::invalid(format!(
                "register of {} qubits exceeds the {MAX_QUBITS}-qubit limit",
                outcomes.len()
            )));
        }
        let n = outcomes.len();
        let index = outcomes
            .iter()
            .fold(0usize, |acc, o| (acc << 1) | o.index());
        let mut amplitudes = vec![Amplitude::new(0.0, 0.0); 1 << n];
        amplitudes[index] = Amplitude::new(1.0, 0.0);
        Ok(Self {
            labels: (0..n as u32).map(QubitId).collect(),
            amplitudes,
            next_id: n as u32,
        })
    }

    /// Builds a register from raw amplitudes. The vector must be normalised.
    pub fn from_amplitudes(labels: Vec<QubitId>, amplitudes: Vec<Amplitude>) -> Result<Self> {
        if labels.is_empty() || labels.len() > MAX_QUBITS {
            return Err(Error::invalid("register must hold between 1 and 16 qubits"));
        }
        let mut sorted = labels.clone();
        sorted.sort();
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::invalid("duplicate qubit label"));
        }
        if amplitudes.len() != 1 << labels.len() {
            return Err(Error::DimensionMismatch {
                expected: 1 << labels.len(),
                actual: amplitudes.len(),
            });
        }
        if amplitudes
            .iter()
            .any(|a| !a.re.is_finite() || !a.im.is_finite())
        {
            return Err(Error::invalid("amplitudes must be finite"));
        }
        let norm: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum();
        if (norm - 1.0).abs() > EXACT_TOLERANCE {
            return Err(Error::invalid(format!("state norm {norm} is not 1")));
        }
        let next_id = labels.iter().map(|l| l.0 + 1).max().unwrap_or(0);
        Ok(Self {
            labels,
            amplitudes,
            next_id,
        })
    }

    pub fn num_qubits(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[QubitId] {
        &self.labels
    }

    pub fn amplitudes(&self) -> &[Amplitude] {
        &self.amplitudes
    }

    /// Amplitude of the basis state given per label, in label order.
    pub fn amplitude(&self, basis: &[ZOutcome]) -> Result<Amplitude> {
        if basis.len() != self.labels.len() {
            return Err(Error::DimensionMismatch {
                expected: self.labels.len(),
                actual: basis.len(),
            });
        }
        let index = basis.iter().fold(0usize, |acc, o| (acc << 1) | o.index());
        Ok(self.amplitudes[index])
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn contains(&self, id: QubitId) -> bool {
        self.labels.contains(&id)
    }

    fn shift_of(&self, id: QubitId) -> Result<usize> {
        let pos = self
            .labels
            .iter()
            .position(|&l| l == id)
            .ok_or(Error::UnknownQubit(id))?;
        Ok(self.labels.len() - 1 - pos)
    }

    fn shifts_of(&self, targets: &[QubitId]) -> Result<Vec<usize>> {
        let shifts = targets
            .iter()
            .map(|&t| self.shift_of(t))
            .collect::<Result<Vec<_>>>()?;
        for (i, a) in shifts.iter().enumerate() {
            if shifts[i + 1..].contains(a) {
                return Err(Error::invalid("target qubits must be distinct"));
            }
        }
        Ok(shifts)
    }

    /// Appends a fresh qubit prepared in `outcome` as the least significant
    /// position and returns its label.
    pub fn append_qubit(&mut self, outcome: ZOutcome) -> Result<QubitId> {
        if self.labels.len() >= MAX_QUBITS {
            return Err(Error::invalid("register is full"));
        }
        let id = QubitId(self.next_id);
        self.next_id += 1;
        let zero = Amplitude::new(0.0, 0.0);
        let mut amplitudes = vec![zero; self.amplitudes.len() * 2];
        for (i, &a) in self.amplitudes.iter().enumerate() {
            amplitudes[(i << 1) | outcome.index()] = a;
        }
        self.amplitudes = amplitudes;
        self.labels.push(id);
        Ok(id)
    }

    /// Applies `u` to `targets` (first target is the most significant index
    /// of `u`) and the identity elsewhere.
    pub fn apply_unitary(&mut self, targets: &[QubitId], u: &UnitaryMatrix) -> Result<()> {
        let expected = 1usize
            .checked_shl(targets.len() as u32)
            .ok_or_else(|| Error::invalid("too many targets"))?;
        if u.dim() != expected {
            return Err(Error::DimensionMismatch {
                expected,
                actual: u.dim(),
            });
        }
        let shifts = self.shifts_of(targets)?;
        let offsets = local_offsets(&shifts);
        let mask = offsets[offsets.len() - 1];
        let dim = offsets.len();
        let mut local = vec![Amplitude::new(0.0, 0.0); dim];
        for base in 0..self.amplitudes.len() {
            if base & mask != 0 {
                continue;
            }
            for (k, off) in offsets.iter().enumerate() {
                local[k] = self.amplitudes[base | off];
            }
            for (r, off) in offsets.iter().enumerate() {
                let mut acc = Amplitude::new(0.0, 0.0);
                for (c, v) in local.iter().enumerate() {
                    acc += u.get(r, c) * v;
                }
                self.amplitudes[base | off] = acc;
            }
        }
        self.debug_check();
        Ok(())
    }

    /// Projects `targets` onto `vector` without renormalising; returns the
    /// projected (unnormalised) amplitudes and their squared norm.
    fn projection(&self, shifts: &[usize], vector: &[Amplitude]) -> (Vec<Amplitude>, f64) {
        let offsets = local_offsets(shifts);
        let mask = offsets[offsets.len() - 1];
        let mut out = vec![Amplitude::new(0.0, 0.0); self.amplitudes.len()];
        for base in 0..self.amplitudes.len() {
            if base & mask != 0 {
                continue;
            }
            let overlap: Amplitude = offsets
                .iter()
                .zip(vector)
                .map(|(off, v)| v.conj() * self.amplitudes[base | off])
                .sum();
            for (off, v) in offsets.iter().zip(vector) {
                out[base | off] = v * overlap;
            }
        }
        let p = out.iter().map(|a| a.norm_sqr()).sum();
        (out, p)
    }

    /// Born probabilities of a projective measurement of `targets` in the
    /// orthonormal `basis` (vectors indexed like a unitary over the targets).
    pub fn basis_probabilities(
        &self,
        targets: &[QubitId],
        basis: &[Vec<Amplitude>],
    ) -> Result<Vec<f64>> {
        let shifts = self.check_basis(targets, basis)?;
        Ok(basis
            .iter()
            .map(|v| self.projection(&shifts, v).1)
            .collect())
    }

    fn check_basis(&self, targets: &[QubitId], basis: &[Vec<Amplitude>]) -> Result<Vec<usize>> {
        let shifts = self.shifts_of(targets)?;
        if targets.is_empty() {
            return Err(Error::invalid("measurement needs at least one target"));
        }
        let dim = 1 << targets.len();
        if basis.len() != dim || basis.iter().any(|v| v.len() != dim) {
            return Err(Error::DimensionMismatch {
                expected: dim,
                actual: basis.len(),
            });
        }
        Ok(shifts)
    }

    /// Projects onto basis element `outcome` and renormalises. Returns the
    /// probability of that outcome; fails if it is impossible.
    pub fn project(
        &mut self,
        targets: &[QubitId],
        basis: &[Vec<Amplitude>],
        outcome: usize,
    ) -> Result<f64> {
        let shifts = self.check_basis(targets, basis)?;
        let v = basis
            .get(outcome)
            .ok_or_else(|| Error::invalid("outcome index out of range"))?;
        let (projected, p) = self.projection(&shifts, v);
        if p < IMPOSSIBLE_PROBABILITY {
            return Err(Error::invalid("projection onto an impossible outcome"));
        }
        let scale = 1.0 / p.sqrt();
        self.amplitudes = projected.into_iter().map(|a| a * scale).collect();
        self.debug_check();
        Ok(p)
    }

    /// Samples a projective measurement in `basis` and collapses the state.
    pub fn measure_in_basis<R: Rng + ?Sized>(
        &mut self,
        targets: &[QubitId],
        basis: &[Vec<Amplitude>],
        rng: &mut R,
    ) -> Result<usize> {
        let shifts = self.check_basis(targets, basis)?;
        let branches: Vec<(Vec<Amplitude>, f64)> =
            basis.iter().map(|v| self.projection(&shifts, v)).collect();
        let total: f64 = branches
            .iter()
            .map(|(_, p)| *p)
            .filter(|&p| p >= IMPOSSIBLE_PROBABILITY)
            .sum();
        let mut draw = rng.random::<f64>() * total;
        let mut chosen = None;
        for (k, (_, p)) in branches.iter().enumerate() {
            if *p < IMPOSSIBLE_PROBABILITY {
                continue;
            }
            chosen = Some(k);
            if draw < *p {
                break;
            }
            draw -= p;
        }
        let k = chosen.ok_or_else(|| Error::invalid("state has zero norm"))?;
        let (projected, p) = branches.into_iter().nth(k).expect("branch exists");
        let scale = 1.0 / p.sqrt();
        self.amplitudes = projected.into_iter().map(|a| a * scale).collect();
        self.debug_check();
        Ok(k)
    }

    pub fn z_probabilities(&self, target: QubitId) -> Result<[f64; 2]> {
        let p = self.basis_probabilities(&[target], &z_basis())?;
        Ok([p[0], p[1]])
    }

    pub fn measure_z<R: Rng + ?Sized>(&mut self, target: QubitId, rng: &mut R) -> Result<ZOutcome> {
        let k = self.measure_in_basis(&[target], &z_basis(), rng)?;
        Ok(ZOutcome::ALL[k])
    }

    /// Forces the Z outcome of `target`; returns its prior probability.
    pub fn project_z(&mut self, target: QubitId, outcome: ZOutcome) -> Result<f64> {
        self.project(&[target], &z_basis(), outcome.index())
    }

    pub fn delta_probabilities(&self, first: QubitId, second: QubitId) -> Result<[f64; 4]> {
        let p = self.basis_probabilities(&[first, second], &delta_basis())?;
        Ok([p[0], p[1], p[2], p[3]])
    }

    pub fn measure_delta<R: Rng + ?Sized>(
        &mut self,
        first: QubitId,
        second: QubitId,
        rng: &mut R,
    ) -> Result<DeltaOutcome> {
        let k = self.measure_in_basis(&[first, second], &delta_basis(), rng)?;
        Ok(DeltaOutcome::ALL[k])
    }

    pub fn project_delta(
        &mut self,
        first: QubitId,
        second: QubitId,
        outcome: DeltaOutcome,
    ) -> Result<f64> {
        self.project(&[first, second], &delta_basis(), outcome.index())
    }

    /// Partial trace onto `keep` (in the given order).
    pub fn reduced_density(&self, keep: &[QubitId]) -> Result<DensityMatrix> {
        if keep.is_empty() {
            return Err(Error::invalid("reduced state needs at least one qubit"));
        }
        let keep_shifts = self.shifts_of(keep)?;
        let keep_offsets = local_offsets(&keep_shifts);
        let keep_mask = keep_offsets[keep_offsets.len() - 1];
        let dim = keep_offsets.len();
        let mut entries = vec![Amplitude::new(0.0, 0.0); dim * dim];
        for env in 0..self.amplitudes.len() {
            if env & keep_mask != 0 {
                continue;
            }
            for (r, ro) in keep_offsets.iter().enumerate() {
                let a = self.amplitudes[env | ro];
                if a.norm_sqr() == 0.0 {
                    continue;
                }
                for (c, co) in keep_offsets.iter().enumerate() {
                    entries[r * dim + c] += a * self.amplitudes[env | co].conj();
                }
            }
        }
        DensityMatrix::from_entries_unchecked(dim, entries)
    }

    /// Rows of `(basis label, re, im)` in index order, e.g. `("ge", 0.0, 1.0)`.
    pub fn dump(&self) -> Vec<(String, f64, f64)> {
        let n = self.labels.len();
        self.amplitudes
            .iter()
            .enumerate()
            .map(|(i, a)| {
                let label = (0..n)
                    .map(|p| ZOutcome::from_bit((i >> (n - 1 - p)) & 1 == 1).symbol())
                    .collect();
                (label, a.re, a.im)
            })
            .collect()
    }

    #[inline]
    fn debug_check(&self) {
        debug_assert!(self
            .amplitudes
            .iter()
            .all(|a| a.re.is_finite() && a.im.is_finite()));
        debug_assert!((self.norm_sqr() - 1.0).abs() < 1e-9);
    }
}

impl fmt::Display for QubitRegister {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (label, re, im) in self.dump() {
            writeln!(f, "{label} {re:.12} {im:.12}")?;
        }
        Ok(())
    }
}

/// Index offsets of every local basis state of the given targets, where the
/// first target is the most significant local bit. The last entry is the
/// mask with all target bits set.
fn local_offsets(shifts: &[usize]) -> Vec<usize> {
    let k = shifts.len();
    (0..1usize << k)
        .map(|local| {
            shifts
                .iter()
                .enumerate()
                .filter(|(j, _)| (local >> (k - 1 - j)) & 1 == 1)
                .fold(0usize, |acc, (_, s)| acc | (1 << s))
        })
        .collect()
}

pub(crate) fn z_basis() -> Vec<Vec<Amplitude>> {
    let one = Amplitude::new(1.0, 0.0);
    let zero = Amplitude::new(0.0, 0.0);
    vec![vec![one, zero], vec![zero, one]]
}

pub(crate) fn delta_basis() -> Vec<Vec<Amplitude>> {
    DeltaOutcome::ALL
        .iter()
        .map(|d| d.vector().to_vec())
        .collect()
}

/// True when `a = e^{iφ} b` for some global phase φ, entrywise within `tol`.
pub fn equal_up_to_global_phase(a: &[Amplitude], b: &[Amplitude], tol: f64) -> bool {
    if a.len() != b.len() {
        return false;
    }
    let Some((i, _)) = b
        .iter()
        .enumerate()
        .max_by(|x, y| x.1.norm_sqr().total_cmp(&y.1.norm_sqr()))
    else {
        return true;
    };
    if b[i].norm() < tol {
        return a.iter().all(|x| x.norm() < tol);
    }
    let phase = a[i] / b[i];
    if (phase.norm() - 1.0).abs() > tol {
        return false;
    }
    a.iter().zip(b).all(|(x, y)| (x - phase * y).norm() < tol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::FRAC_1_SQRT_2;

    use ZOutcome::{E, G};

    fn c(re: f64, im: f64) -> Amplitude {
        Amplitude::new(re, im)
    }

    #[test]
    fn product_state_places_single_amplitude() {
        let r = QubitRegister::product_state(&[G, G]).unwrap();
        assert_eq!(r.amplitudes()[0], c(1.0, 0.0));
        let r = QubitRegister::product_state(&[G, E]).unwrap();
        assert_eq!(r.amplitudes()[1], c(1.0, 0.0));
        let r = QubitRegister::product_state(&[E, E, G]).unwrap();
        assert_eq!(r.amplitudes().len(), 8);
        assert_eq!(r.amplitudes()[0b110], c(1.0, 0.0));
        assert_eq!(r.amplitude(&[E, E, G]).unwrap(), c(1.0, 0.0));
    }

    #[test]
    fn empty_product_state_is_rejected() {
        assert!(matches!(
            QubitRegister::product_state(&[]),
            Err(Error::InvalidArgument(_))
        ));
    }

    #[test]
    fn first_label_is_most_significant() {
        let r = QubitRegister::product_state(&[E, G]).unwrap();
        assert_eq!(r.dump()[2], ("eg".to_string(), 1.0, 0.0));
        assert_eq!(r.z_probabilities(QubitId(0)).unwrap(), [0.0, 1.0]);
        assert_eq!(r.z_probabilities(QubitId(1)).unwrap(), [1.0, 0.0]);
    }

    #[test]
    fn append_adds_least_significant_qubit() {
        let mut r = QubitRegister::product_state(&[E]).unwrap();
        let id = r.append_qubit(G).unwrap();
        assert_eq!(id, QubitId(1));
        assert_eq!(r.amplitude(&[E, G]).unwrap(), c(1.0, 0.0));
    }

    #[test]
    fn unknown_label_and_dimension_errors() {
        let mut r = QubitRegister::product_state(&[G, G]).unwrap();
        let u = cavity_unitary();
        assert_eq!(
            r.apply_unitary(&[QubitId(0), QubitId(7)], &u),
            Err(Error::UnknownQubit(QubitId(7)))
        );
        assert!(matches!(
            r.apply_unitary(&[QubitId(0)], &u),
            Err(Error::DimensionMismatch { .. })
        ));
        assert!(r.apply_unitary(&[QubitId(0), QubitId(0)], &u).is_err());
        assert!(r.reduced_density(&[]).is_err());
    }

    use super::super::cavity_unitary;

    #[test]
    fn identity_leaves_register_unchanged() {
        let mut r = QubitRegister::product_state(&[G, E, E]).unwrap();
        r.apply_unitary(&[QubitId(0), QubitId(2)], &cavity_unitary())
            .unwrap();
        let before = r.clone();
        r.apply_unitary(&[QubitId(2), QubitId(1)], &UnitaryMatrix::identity(4))
            .unwrap();
        assert_eq!(r, before);
    }

    #[test]
    fn cavity_then_adjoint_restores_state() {
        let mut r = QubitRegister::product_state(&[E, G]).unwrap();
        let u = cavity_unitary();
        r.apply_unitary(&[QubitId(0), QubitId(1)], &u).unwrap();
        r.apply_unitary(&[QubitId(0), QubitId(1)], &u.adjoint())
            .unwrap();
        let expected = QubitRegister::product_state(&[E, G]).unwrap();
        for (a, b) in r.amplitudes().iter().zip(expected.amplitudes()) {
            assert!((a - b).norm() < 1e-12);
        }
    }

    #[test]
    fn cavity_on_ee_matches_evolution() {
        let mut r = QubitRegister::product_state(&[E, E]).unwrap();
        r.apply_unitary(&[QubitId(0), QubitId(1)], &cavity_unitary())
            .unwrap();
        let phase = Amplitude::from_polar(FRAC_1_SQRT_2, -std::f64::consts::FRAC_PI_4);
        let expected = [phase * c(0.0, -1.0), c(0.0, 0.0), c(0.0, 0.0), phase];
        for (a, b) in r.amplitudes().iter().zip(expected) {
            assert!((a - b).norm() < 1e-12);
        }
    }

    #[test]
    fn unitary_target_order_is_respected() {
        // CNOT with control listed first.
        let cnot = UnitaryMatrix::cnot();
        let mut r = QubitRegister::product_state(&[G, E]).unwrap();
        r.apply_unitary(&[QubitId(1), QubitId(0)], &cnot).unwrap();
        assert_eq!(r.amplitude(&[E, E]).unwrap(), c(1.0, 0.0));
    }

    #[test]
    fn z_measurement_of_eigenstate_is_certain() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..50 {
            let mut r = QubitRegister::product_state(&[G]).unwrap();
            assert_eq!(r.measure_z(QubitId(0), &mut rng).unwrap(), G);
        }
    }

    #[test]
    fn z_measurement_of_entangled_pair_collapses_partner() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let mut seen = [0usize; 2];
        for _ in 0..200 {
            let mut r = QubitRegister::product_state(&[G, G]).unwrap();
            r.apply_unitary(&[QubitId(0), QubitId(1)], &cavity_unitary())
                .unwrap();
            let p = r.z_probabilities(QubitId(0)).unwrap();
            assert!((p[0] - 0.5).abs() < 1e-12 && (p[1] - 0.5).abs() < 1e-12);
            let o = r.measure_z(QubitId(0), &mut rng).unwrap();
            seen[o.index()] += 1;
            assert_eq!(r.z_probabilities(QubitId(1)).unwrap()[o.index()], 1.0);
        }
        assert!(seen[0] > 0 && seen[1] > 0);
    }

    #[test]
    fn delta_outcomes_of_evolved_basis_states() {
        let expected = [
            ([G, G], DeltaOutcome::PhiMinus),
            ([G, E], DeltaOutcome::PsiMinus),
            ([E, G], DeltaOutcome::PsiPlus),
            ([E, E], DeltaOutcome::PhiPlus),
        ];
        for (input, outcome) in expected {
            let mut r = QubitRegister::product_state(&input).unwrap();
            r.apply_unitary(&[QubitId(0), QubitId(1)], &cavity_unitary())
                .unwrap();
            let p = r.delta_probabilities(QubitId(0), QubitId(1)).unwrap();
            assert!((p[outcome.index()] - 1.0).abs() < 1e-12, "{input:?}");
        }
    }

    #[test]
    fn delta_on_product_gg_is_phi_only() {
        let r = QubitRegister::product_state(&[G, G]).unwrap();
        let p = r.delta_probabilities(QubitId(0), QubitId(1)).unwrap();
        assert!((p[0] - 0.5).abs() < 1e-12);
        assert!(p[1].abs() < 1e-12 && p[2].abs() < 1e-12);
        assert!((p[3] - 0.5).abs() < 1e-12);
    }

    #[test]
    fn impossible_projection_is_rejected() {
        let mut r = QubitRegister::product_state(&[G]).unwrap();
        assert!(r.project_z(QubitId(0), E).is_err());
        assert_eq!(r.project_z(QubitId(0), G).unwrap(), 1.0);
    }

    #[test]
    fn reduced_states() {
        let mut r = QubitRegister::product_state(&[G, G]).unwrap();
        r.apply_unitary(&[QubitId(0), QubitId(1)], &cavity_unitary())
            .unwrap();
        let full = r.reduced_density(&[QubitId(0), QubitId(1)]).unwrap();
        for i in 0..4 {
            for j in 0..4 {
                let want = r.amplitudes()[i] * r.amplitudes()[j].conj();
                assert!((full.get(i, j) - want).norm() < 1e-12);
            }
        }
        let half = r.reduced_density(&[QubitId(1)]).unwrap();
        let mixed = DensityMatrix::maximally_mixed(2);
        assert!(trace_distance(&half, &mixed).unwrap() < 1e-12);

        let p = QubitRegister::product_state(&[G, E]).unwrap();
        assert!((p.reduced_density(&[QubitId(0)]).unwrap().get(0, 0).re - 1.0).abs() < 1e-12);
        assert!((p.reduced_density(&[QubitId(1)]).unwrap().get(1, 1).re - 1.0).abs() < 1e-12);
    }

    use super::super::trace_distance;

    #[test]
    fn global_phase_helper() {
        let a = [c(1.0, 0.0), c(0.0, 1.0)];
        let b = [c(0.0, 1.0), c(-1.0, 0.0)];
        assert!(equal_up_to_global_phase(&a, &b, 1e-12));
        let d = [c(0.0, 1.0), c(1.0, 0.0)];
        assert!(!equal_up_to_global_phase(&a, &d, 1e-12));
    }

    #[test]
    fn dump_lists_basis_labels_in_index_order() {
        let r = QubitRegister::product_state(&[G, E]).unwrap();
        let labels: Vec<String> = r.dump().into_iter().map(|(l, _, _)| l).collect();
        assert_eq!(labels, ["gg", "ge", "eg", "ee"]);
        assert!(r
            .to_string()
            .starts_with("gg 0.000000000000 0.000000000000\nge 1."));
    }
}
