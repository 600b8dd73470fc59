//! Three-party comparison protocol: the third party (TP) prepares two-atom
//! product states, evolves them in the cavity and sends one atom to each
//! participant, who either SIFT (Z-measure and resend a fresh copy) or CTRL
//! (reflect). TP runs the eavesdropping checks, the participants derive keys
//! from unchecked both-SIFT atoms, and TP compares the encrypted inputs.

mod run;
pub mod transcript;

use std::fmt;
use std::str::FromStr;

pub use run::{
    derive_keys, encrypt_inputs, evolve_atom_pair, party_interact, prepare_initial_sequence,
    run_checks, run_protocol, tp_compare, CompareMode, KeyShortfall, LiveAtom, RunStreams,
    TpComparison,
};

use crate::adversary::{EveRecord, ProbeSample};
use crate::bits::BitString;
use crate::error::{Error, Result};
use crate::qsim::{DeltaOutcome, ZOutcome};

/// One of the four product states TP prepares.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TwoAtomState {
    GG,
    GE,
    EG,
    EE,
}

impl TwoAtomState {
    pub const ALL: [TwoAtomState; 4] = [
        TwoAtomState::GG,
        TwoAtomState::GE,
        TwoAtomState::EG,
        TwoAtomState::EE,
    ];

    pub fn atoms(self) -> [ZOutcome; 2] {
        use ZOutcome::{E, G};
        match self {
            TwoAtomState::GG => [G, G],
            TwoAtomState::GE => [G, E],
            TwoAtomState::EG => [E, G],
            TwoAtomState::EE => [E, E],
        }
    }

    pub fn from_atoms(a: ZOutcome, b: ZOutcome) -> Self {
        Self::ALL[a.index() * 2 + b.index()]
    }

    pub fn index(self) -> usize {
        self as usize
    }

    /// TP's key bit: 0 for `gg`/`ee`, 1 for `ge`/`eg`.
    pub fn key_bit(self) -> bool {
        matches!(self, TwoAtomState::GE | TwoAtomState::EG)
    }

    /// Δ outcome the evolved state yields with certainty.
    pub fn expected_delta(self) -> DeltaOutcome {
        match self {
            TwoAtomState::GG => DeltaOutcome::PhiMinus,
            TwoAtomState::GE => DeltaOutcome::PsiMinus,
            TwoAtomState::EG => DeltaOutcome::PsiPlus,
            TwoAtomState::EE => DeltaOutcome::PhiPlus,
        }
    }

    /// Whether a Z-basis pair `(a, b)` can come out of the evolved state:
    /// equal results for `gg`/`ee`, different results for `ge`/`eg`.
    pub fn admits(self, a: ZOutcome, b: ZOutcome) -> bool {
        (a != b) == self.key_bit()
    }

    pub fn name(self) -> &'static str {
        match self {
            TwoAtomState::GG => "gg",
            TwoAtomState::GE => "ge",
            TwoAtomState::EG => "eg",
            TwoAtomState::EE => "ee",
        }
    }
}

impl fmt::Display for TwoAtomState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for TwoAtomState {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|t| t.name() == s)
            .ok_or_else(|| Error::invalid(format!("unknown two-atom state {s:?}")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PartyAction {
    /// Measure in Z, record, resend a fresh atom in the found state.
    Sift,
    /// Reflect the atom untouched.
    Ctrl,
}

impl PartyAction {
    pub fn name(self) -> &'static str {
        match self {
            PartyAction::Sift => "SIFT",
            PartyAction::Ctrl => "CTRL",
        }
    }
}

impl fmt::Display for PartyAction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for PartyAction {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "SIFT" => Ok(PartyAction::Sift),
            "CTRL" => Ok(PartyAction::Ctrl),
            _ => Err(Error::invalid(format!("unknown action {s:?}"))),
        }
    }
}

/// Check case selected by the pair of participant actions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CheckCase {
    /// CTRL, CTRL: Δ-basis check.
    BothCtrl,
    /// SIFT, CTRL
    AliceSift,
    /// CTRL, SIFT
    BobSift,
    /// SIFT, SIFT: half checked, the rest feed the keys.
    BothSift,
}

impl CheckCase {
    pub const ALL: [CheckCase; 4] = [
        CheckCase::BothCtrl,
        CheckCase::AliceSift,
        CheckCase::BobSift,
        CheckCase::BothSift,
    ];

    pub fn from_actions(alice: PartyAction, bob: PartyAction) -> Self {
        use PartyAction::{Ctrl, Sift};
        match (alice, bob) {
            (Ctrl, Ctrl) => CheckCase::BothCtrl,
            (Sift, Ctrl) => CheckCase::AliceSift,
            (Ctrl, Sift) => CheckCase::BobSift,
            (Sift, Sift) => CheckCase::BothSift,
        }
    }

    /// 1-based case number.
    pub fn number(self) -> u8 {
        self as u8 + 1
    }

    pub fn from_number(n: u8) -> Option<Self> {
        Self::ALL.get(n.checked_sub(1)? as usize).copied()
    }

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn abort_stage(self) -> AbortStage {
        match self {
            CheckCase::BothCtrl => AbortStage::Case1Check,
            CheckCase::AliceSift => AbortStage::Case2Check,
            CheckCase::BobSift => AbortStage::Case3Check,
            CheckCase::BothSift => AbortStage::Case4Check,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProtocolConfig {
    /// Number of compared bits `L`; TP prepares `8L` atom pairs.
    pub length: usize,
    pub seed: u64,
    /// Abort when a case's observed error rate exceeds this.
    pub error_threshold: f64,
    /// Fraction of both-SIFT positions TP checks (rounded down).
    pub case4_check_fraction: f64,
}

impl ProtocolConfig {
    pub fn new(length: usize, seed: u64) -> Self {
        Self {
            length,
            seed,
            error_threshold: 0.0,
            case4_check_fraction: 0.5,
        }
    }

    pub fn total_atoms(&self) -> usize {
        8 * self.length
    }

    pub fn validate(&self) -> Result<()> {
        if self.length == 0 {
            return Err(Error::invalid("compared length L must be at least 1"));
        }
        if !(0.0..=1.0).contains(&self.error_threshold) {
            return Err(Error::invalid("error threshold must lie in [0, 1]"));
        }
        if !(0.0..=1.0).contains(&self.case4_check_fraction) {
            return Err(Error::invalid("case-4 check fraction must lie in [0, 1]"));
        }
        Ok(())
    }
}

/// What TP measured on a returned pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TpMeasurement {
    Delta(DeltaOutcome),
    Z(ZOutcome, ZOutcome),
}

impl fmt::Display for TpMeasurement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TpMeasurement::Delta(d) => write!(f, "D:{d}"),
            TpMeasurement::Z(a, b) => write!(f, "Z:{a}{b}"),
        }
    }
}

/// Per-atom log entry. `index` is 1-based in transmission order.
#[derive(Debug, Clone, PartialEq)]
pub struct AtomRecord {
    pub index: usize,
    pub initial: TwoAtomState,
    pub alice_action: PartyAction,
    pub bob_action: PartyAction,
    pub alice_sift: Option<ZOutcome>,
    pub bob_sift: Option<ZOutcome>,
    pub case: CheckCase,
    pub checked: bool,
    pub check_passed: Option<bool>,
    pub tp_measurement: Option<TpMeasurement>,
}

impl AtomRecord {
    /// Results the participants publish for this atom during the checks.
    pub fn announced(&self) -> (Option<ZOutcome>, Option<ZOutcome>) {
        match (self.case, self.checked) {
            (CheckCase::AliceSift, _) => (self.alice_sift, None),
            (CheckCase::BobSift, _) => (None, self.bob_sift),
            (CheckCase::BothSift, true) => (self.alice_sift, self.bob_sift),
            _ => (None, None),
        }
    }

    pub fn is_key_candidate(&self) -> bool {
        self.case == CheckCase::BothSift && !self.checked
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct CaseTally {
    pub checked: u64,
    pub failures: u64,
}

impl CaseTally {
    pub fn rate(&self) -> f64 {
        if self.checked == 0 {
            0.0
        } else {
            self.failures as f64 / self.checked as f64
        }
    }
}

/// Check tallies for the four cases, indexed by [`CheckCase::index`].
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct CheckSummary {
    pub cases: [CaseTally; 4],
}

impl CheckSummary {
    pub fn case(&self, case: CheckCase) -> CaseTally {
        self.cases[case.index()]
    }

    pub fn total_failures(&self) -> u64 {
        self.cases.iter().map(|c| c.failures).sum()
    }

    pub fn total_checked(&self) -> u64 {
        self.cases.iter().map(|c| c.checked).sum()
    }

    /// First case, in case order, whose error rate exceeds `threshold`.
    pub fn first_violation(&self, threshold: f64) -> Option<(CheckCase, f64)> {
        CheckCase::ALL
            .into_iter()
            .map(|c| (c, self.case(c)))
            .find(|(_, t)| t.checked > 0 && t.rate() > threshold)
            .map(|(c, t)| (c, t.rate()))
    }
}

/// Private inputs of one comparison.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrivateInputs {
    pub m_a: BitString,
    pub m_b: BitString,
    /// Pre-shared key between the participants.
    pub k_ab: BitString,
}

impl PrivateInputs {
    pub fn new(m_a: BitString, m_b: BitString, k_ab: BitString) -> Self {
        Self { m_a, m_b, k_ab }
    }

    pub fn validate(&self, length: usize) -> Result<()> {
        for (name, b) in [("m_a", &self.m_a), ("m_b", &self.m_b), ("k_ab", &self.k_ab)] {
            if b.len() != length {
                return Err(Error::invalid(format!(
                    "{name} has {} bits, expected L = {length}",
                    b.len()
                )));
            }
        }
        Ok(())
    }
}

/// Keys over the first `L` unchecked both-SIFT positions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KeyMaterial {
    /// 1-based atom indices, ascending.
    pub positions: Vec<usize>,
    pub k_a: BitString,
    pub k_b: BitString,
    pub k_c: BitString,
}

/// Full log of one protocol run.
#[derive(Debug, Clone, PartialEq)]
pub struct Transcript {
    pub config: ProtocolConfig,
    pub records: Vec<AtomRecord>,
    pub checks: CheckSummary,
    pub keys: Option<KeyMaterial>,
    pub r_a: Option<BitString>,
    pub r_b: Option<BitString>,
    /// Eve's per-atom actions, aligned with `records`.
    pub eve: Vec<EveRecord>,
    /// Eve's probe state at every unchecked both-SIFT position.
    pub probe_samples: Vec<ProbeSample>,
}

impl Transcript {
    /// Everything TP observes during the run.
    pub fn tp_view(&self) -> TpView {
        TpView {
            initial: self.records.iter().map(|r| r.initial).collect(),
            actions: self
                .records
                .iter()
                .map(|r| (r.alice_action, r.bob_action))
                .collect(),
            announced: self.records.iter().map(AtomRecord::announced).collect(),
            measurements: self.records.iter().map(|r| r.tp_measurement).collect(),
            r_a: self.r_a.clone(),
            r_b: self.r_b.clone(),
        }
    }
}

/// TP's view of a run: never contains `m_a`, `m_b` or `k_ab`.
#[derive(Debug, Clone, PartialEq)]
pub struct TpView {
    pub initial: Vec<TwoAtomState>,
    pub actions: Vec<(PartyAction, PartyAction)>,
    pub announced: Vec<(Option<ZOutcome>, Option<ZOutcome>)>,
    pub measurements: Vec<Option<TpMeasurement>>,
    pub r_a: Option<BitString>,
    pub r_b: Option<BitString>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum AbortStage {
    Case1Check,
    Case2Check,
    Case3Check,
    Case4Check,
    InsufficientKeyMaterial,
}

impl AbortStage {
    pub fn name(self) -> &'static str {
        match self {
            AbortStage::Case1Check => "Case1Check",
            AbortStage::Case2Check => "Case2Check",
            AbortStage::Case3Check => "Case3Check",
            AbortStage::Case4Check => "Case4Check",
            AbortStage::InsufficientKeyMaterial => "InsufficientKeyMaterial",
        }
    }

    pub fn is_check_failure(self) -> bool {
        self != AbortStage::InsufficientKeyMaterial
    }
}

impl fmt::Display for AbortStage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for AbortStage {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        [
            AbortStage::Case1Check,
            AbortStage::Case2Check,
            AbortStage::Case3Check,
            AbortStage::Case4Check,
            AbortStage::InsufficientKeyMaterial,
        ]
        .into_iter()
        .find(|a| a.name() == s)
        .ok_or_else(|| Error::invalid(format!("unknown abort stage {s:?}")))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum RunOutcome {
    Aborted {
        stage: AbortStage,
        observed_error_rate: f64,
        transcript: Box<Transcript>,
    },
    Completed {
        /// True iff every entry of `r` was computed and is 0.
        equal: bool,
        /// `R^j`; `None` for positions TP skipped after finding a 1.
        r: Vec<Option<bool>>,
        transcript: Box<Transcript>,
    },
}

impl RunOutcome {
    pub fn transcript(&self) -> &Transcript {
        match self {
            RunOutcome::Aborted { transcript, .. } | RunOutcome::Completed { transcript, .. } => {
                transcript
            }
        }
    }

    pub fn abort_stage(&self) -> Option<AbortStage> {
        match self {
            RunOutcome::Aborted { stage, .. } => Some(*stage),
            RunOutcome::Completed { .. } => None,
        }
    }

    pub fn equal(&self) -> Option<bool> {
        match self {
            RunOutcome::Completed { equal, .. } => Some(*equal),
            RunOutcome::Aborted { .. } => None,
        }
    }

    /// `Equal`, `NotEqual` or `Aborted{<stage>}`.
    pub fn label(&self) -> String {
        match self {
            RunOutcome::Completed { equal: true, .. } => "Equal".into(),
            RunOutcome::Completed { equal: false, .. } => "NotEqual".into(),
            RunOutcome::Aborted { stage, .. } => format!("Aborted{{{stage}}}"),
        }
    }
}
