//! Channel-tap eavesdropping strategies.
//!
//! Taps act directly on the per-atom register so that every qubit Eve steals
//! or entangles with stays inside one pure state; anything she keeps is
//! traced out only when it is analysed.

use std::fmt;

use rand::Rng;

use crate::error::{Error, Result};
use crate::qsim::{trace_distance, DensityMatrix, QubitId, QubitRegister, UnitaryMatrix, ZOutcome};

/// Which semiquantum party a channel leg connects the third party to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Leg {
    Alice,
    Bob,
}

/// Channels an attack is attached to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum TargetChannel {
    #[default]
    Alice,
    Bob,
    Both,
}

impl TargetChannel {
    pub fn covers(self, leg: Leg) -> bool {
        matches!(
            (self, leg),
            (TargetChannel::Both, _)
                | (TargetChannel::Alice, Leg::Alice)
                | (TargetChannel::Bob, Leg::Bob)
        )
    }
}

/// Eve's coupling unitaries for the forward (`u_e`) and return (`u_f`) legs.
/// Both act on `(flying qubit, probe qubits…)` with the flying qubit most
/// significant, and share the same probe register.
#[derive(Debug, Clone, PartialEq)]
pub struct EntangleMeasure {
    u_e: UnitaryMatrix,
    u_f: UnitaryMatrix,
    probe_qubits: usize,
    channel: TargetChannel,
}

impl EntangleMeasure {
    pub fn new(u_e: UnitaryMatrix, u_f: UnitaryMatrix, probe_qubits: usize) -> Result<Self> {
        if probe_qubits == 0 || probe_qubits > 4 {
            return Err(Error::invalid("probe must have between 1 and 4 qubits"));
        }
        let dim = 1usize << (probe_qubits + 1);
        for u in [&u_e, &u_f] {
            if u.dim() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    actual: u.dim(),
                });
            }
        }
        Ok(Self {
            u_e,
            u_f,
            probe_qubits,
            channel: TargetChannel::Alice,
        })
    }

    pub fn on_channel(mut self, channel: TargetChannel) -> Self {
        self.channel = channel;
        self
    }

    pub fn u_e(&self) -> &UnitaryMatrix {
        &self.u_e
    }

    pub fn u_f(&self) -> &UnitaryMatrix {
        &self.u_f
    }

    pub fn probe_qubits(&self) -> usize {
        self.probe_qubits
    }

    pub fn channel(&self) -> TargetChannel {
        self.channel
    }
}

/// `u_e = |g⟩⟨g| ⊗ I + |e⟩⟨e| ⊗ R_y(θ)` on (flying, one probe qubit), `u_f = I`.
///
/// θ = 0 is the identity attack; θ = π copies the flying qubit's Z value
/// into the probe.
pub fn controlled_rotation_family(theta: f64) -> EntangleMeasure {
    let u_e = UnitaryMatrix::controlled(&UnitaryMatrix::ry(theta));
    EntangleMeasure::new(u_e, UnitaryMatrix::identity(4), 1).expect("4x4 unitaries")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum AttackKind {
    None,
    InterceptResend,
    MeasureResend,
    EntangleMeasure,
}

impl AttackKind {
    pub fn name(self) -> &'static str {
        match self {
            AttackKind::None => "none",
            AttackKind::InterceptResend => "intercept-resend",
            AttackKind::MeasureResend => "measure-resend",
            AttackKind::EntangleMeasure => "entangle-measure",
        }
    }
}

impl fmt::Display for AttackKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub enum Attack {
    #[default]
    None,
    /// Keeps the flying atom and forwards a fresh, uniformly random Z state.
    InterceptResend {
        channel: TargetChannel,
    },
    /// Z-measures the flying atom and forwards it.
    MeasureResend {
        channel: TargetChannel,
    },
    EntangleMeasure(EntangleMeasure),
}

/// What Eve did to one atom pair.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct EveRecord {
    /// Stolen qubits; these never re-enter a channel.
    pub retained: Vec<QubitId>,
    pub injected: Vec<(Leg, ZOutcome)>,
    pub measured: Vec<(Leg, ZOutcome)>,
    pub probes: Vec<(Leg, Vec<QubitId>)>,
}

impl EveRecord {
    pub fn probe_labels(&self) -> Vec<QubitId> {
        self.probes
            .iter()
            .flat_map(|(_, p)| p.iter().copied())
            .collect()
    }

    fn probes_for(&self, leg: Leg) -> Option<&[QubitId]> {
        self.probes
            .iter()
            .find(|(l, _)| *l == leg)
            .map(|(_, p)| p.as_slice())
    }
}

impl Attack {
    pub fn kind(&self) -> AttackKind {
        match self {
            Attack::None => AttackKind::None,
            Attack::InterceptResend { .. } => AttackKind::InterceptResend,
            Attack::MeasureResend { .. } => AttackKind::MeasureResend,
            Attack::EntangleMeasure(_) => AttackKind::EntangleMeasure,
        }
    }

    pub fn targets(&self, leg: Leg) -> bool {
        match self {
            Attack::None => false,
            Attack::InterceptResend { channel } | Attack::MeasureResend { channel } => {
                channel.covers(leg)
            }
            Attack::EntangleMeasure(em) => em.channel.covers(leg),
        }
    }

    /// Tap on the third party → participant leg. Returns the label of the
    /// qubit that actually reaches the participant.
    pub fn tap_forward<R: Rng + ?Sized>(
        &self,
        leg: Leg,
        reg: &mut QubitRegister,
        flying: QubitId,
        eve: &mut EveRecord,
        rng: &mut R,
    ) -> Result<QubitId> {
        if !reg.contains(flying) {
            return Err(Error::UnknownQubit(flying));
        }
        if !self.targets(leg) {
            return Ok(flying);
        }
        match self {
            Attack::None => Ok(flying),
            Attack::InterceptResend { .. } => {
                let fake = ZOutcome::from_bit(rng.random_bool(0.5));
                let delivered = reg.append_qubit(fake)?;
                eve.retained.push(flying);
                eve.injected.push((leg, fake));
                Ok(delivered)
            }
            Attack::MeasureResend { .. } => {
                let seen = reg.measure_z(flying, rng)?;
                eve.measured.push((leg, seen));
                Ok(flying)
            }
            Attack::EntangleMeasure(em) => {
                let probes = match eve.probes_for(leg) {
                    Some(p) => p.to_vec(),
                    None => {
                        let p = (0..em.probe_qubits)
                            .map(|_| reg.append_qubit(ZOutcome::G))
                            .collect::<Result<Vec<_>>>()?;
                        eve.probes.push((leg, p.clone()));
                        p
                    }
                };
                let mut targets = vec![flying];
                targets.extend_from_slice(&probes);
                reg.apply_unitary(&targets, &em.u_e)?;
                Ok(flying)
            }
        }
    }

    /// Tap on the participant → third party leg.
    pub fn tap_return<R: Rng + ?Sized>(
        &self,
        leg: Leg,
        reg: &mut QubitRegister,
        returning: QubitId,
        eve: &mut EveRecord,
        _rng: &mut R,
    ) -> Result<QubitId> {
        if !reg.contains(returning) {
            return Err(Error::UnknownQubit(returning));
        }
        if let (true, Attack::EntangleMeasure(em)) = (self.targets(leg), self) {
            let probes = eve
                .probes_for(leg)
                .ok_or_else(|| Error::invalid("return tap without a forward tap"))?
                .to_vec();
            let mut targets = vec![returning];
            targets.extend_from_slice(&probes);
            reg.apply_unitary(&targets, &em.u_f)?;
        }
        Ok(returning)
    }
}

/// Eve's probe state at one position where Alice sifted, with her key bit.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbeSample {
    pub key_bit: bool,
    pub state: DensityMatrix,
}

/// Running sums of probe states split by Alice's key bit.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ProbeAccumulator {
    sums: [Option<DensityMatrix>; 2],
    counts: [u64; 2],
}

impl ProbeAccumulator {
    pub fn add(&mut self, sample: &ProbeSample) -> Result<()> {
        let k = sample.key_bit as usize;
        match self.sums[k].as_mut() {
            Some(sum) => sum.add_scaled(1.0, &sample.state)?,
            None => self.sums[k] = Some(sample.state.clone()),
        }
        self.counts[k] += 1;
        Ok(())
    }

    pub fn merge(&mut self, other: &ProbeAccumulator) -> Result<()> {
        for k in 0..2 {
            if let Some(s) = &other.sums[k] {
                match self.sums[k].as_mut() {
                    Some(sum) => sum.add_scaled(1.0, s)?,
                    None => self.sums[k] = Some(s.clone()),
                }
            }
            self.counts[k] += other.counts[k];
        }
        Ok(())
    }

    pub fn counts(&self) -> [u64; 2] {
        self.counts
    }

    /// Conditional average probe state for key bit `bit`.
    pub fn conditional_state(&self, bit: bool) -> Option<DensityMatrix> {
        let k = bit as usize;
        self.sums[k].as_ref().map(|s| {
            let mut avg = s.clone();
            avg.scale(1.0 / self.counts[k] as f64);
            avg
        })
    }

    /// Trace distance between the two conditional probe states.
    pub fn information(&self) -> Result<f64> {
        match (self.conditional_state(false), self.conditional_state(true)) {
            (Some(zero), Some(one)) => trace_distance(&zero, &one),
            _ => Err(Error::invalid(
                "probe information needs samples for both key-bit values",
            )),
        }
    }
}

/// Distinguishability of Eve's probe conditioned on Alice's key bit.
pub fn probe_information<'a>(samples: impl IntoIterator<Item = &'a ProbeSample>) -> Result<f64> {
    let mut acc = ProbeAccumulator::default();
    for s in samples {
        acc.add(s)?;
    }
    if acc.counts == [0, 0] {
        return Err(Error::invalid("no entangle-measure probe data"));
    }
    acc.information()
}
