use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{
    AbortStage, AtomRecord, CaseTally, CheckCase, CheckSummary, KeyMaterial, PartyAction,
    PrivateInputs, ProtocolConfig, RunOutcome, TpMeasurement, Transcript, TwoAtomState,
};
use crate::adversary::{Attack, EveRecord, Leg, ProbeSample};
use crate::bits::BitString;
use crate::error::{Error, Result};
use crate::qsim::{cavity_unitary, QubitId, QubitRegister, ZOutcome};

/// Independent random streams of one run, all derived from the run seed.
#[derive(Debug, Clone)]
pub struct RunStreams {
    /// State preparation and check sampling.
    pub tp: ChaCha8Rng,
    pub alice: ChaCha8Rng,
    pub bob: ChaCha8Rng,
    pub eve: ChaCha8Rng,
    /// Born-rule sampling of honest measurements.
    pub nature: ChaCha8Rng,
}

impl RunStreams {
    pub fn from_seed(seed: u64) -> Self {
        Self {
            tp: Self::stream(seed, 0),
            alice: Self::stream(seed, 1),
            bob: Self::stream(seed, 2),
            eve: Self::stream(seed, 3),
            nature: Self::stream(seed, 4),
        }
    }

    /// Stream `id` of the run seeded with `seed`. Ids 0–4 are used by the run
    /// itself; callers may use higher ids for auxiliary draws.
    pub fn stream(seed: u64, id: u64) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(id);
        rng
    }
}

/// `8L` independent uniform picks from the four product states.
pub fn prepare_initial_sequence<R: Rng + ?Sized>(
    config: &ProtocolConfig,
    rng: &mut R,
) -> Vec<TwoAtomState> {
    (0..config.total_atoms())
        .map(|_| TwoAtomState::ALL[rng.random_range(0..4)])
        .collect()
}

/// Cavity evolution of one pair. `q0` is the atom sent to Alice,
/// `q1` the one sent to Bob.
pub fn evolve_atom_pair(initial: TwoAtomState) -> QubitRegister {
    let mut reg = QubitRegister::product_state(&initial.atoms()).expect("two qubits");
    reg.apply_unitary(&[QubitId(0), QubitId(1)], &cavity_unitary())
        .expect("valid targets");
    reg
}

/// One participant's turn. SIFT measures `qubit` and returns a freshly
/// prepared qubit in the found state; CTRL returns `qubit` itself.
pub fn party_interact<R: Rng + ?Sized>(
    reg: &mut QubitRegister,
    qubit: QubitId,
    action: PartyAction,
    rng: &mut R,
) -> Result<(QubitId, Option<ZOutcome>)> {
    match action {
        PartyAction::Ctrl => {
            if !reg.contains(qubit) {
                return Err(Error::UnknownQubit(qubit));
            }
            Ok((qubit, None))
        }
        PartyAction::Sift => {
            let found = reg.measure_z(qubit, rng)?;
            let fresh = reg.append_qubit(found)?;
            Ok((fresh, Some(found)))
        }
    }
}

/// A returned pair still held by TP.
#[derive(Debug, Clone)]
pub struct LiveAtom {
    pub reg: QubitRegister,
    pub alice_return: QubitId,
    pub bob_return: QubitId,
}

fn random_action<R: Rng + ?Sized>(rng: &mut R) -> PartyAction {
    if rng.random_bool(0.5) {
        PartyAction::Sift
    } else {
        PartyAction::Ctrl
    }
}

/// Eavesdropping checks. Selects the checked both-SIFT positions with
/// `tp_rng`, measures every checked pair and records pass/fail.
pub fn run_checks<R: Rng + ?Sized, N: Rng + ?Sized>(
    config: &ProtocolConfig,
    records: &mut [AtomRecord],
    live: &mut [LiveAtom],
    tp_rng: &mut R,
    nature: &mut N,
) -> Result<CheckSummary> {
    if records.len() != live.len() {
        return Err(Error::DimensionMismatch {
            expected: records.len(),
            actual: live.len(),
        });
    }
    let both_sift: Vec<usize> = records
        .iter()
        .enumerate()
        .filter(|(_, r)| r.case == CheckCase::BothSift)
        .map(|(i, _)| i)
        .collect();
    let n4 = both_sift.len();
    let sample = ((n4 as f64) * config.case4_check_fraction).floor() as usize;
    for k in index::sample(tp_rng, n4, sample.min(n4)) {
        records[both_sift[k]].checked = true;
    }
    for r in records.iter_mut() {
        if r.case != CheckCase::BothSift {
            r.checked = true;
        }
    }

    let mut summary = CheckSummary::default();
    for (rec, atom) in records.iter_mut().zip(live.iter_mut()) {
        if !rec.checked {
            continue;
        }
        let (a, b) = (atom.alice_return, atom.bob_return);
        let passed = match rec.case {
            CheckCase::BothCtrl => {
                let d = atom.reg.measure_delta(a, b, nature)?;
                rec.tp_measurement = Some(TpMeasurement::Delta(d));
                d == rec.initial.expected_delta()
            }
            case => {
                let ta = atom.reg.measure_z(a, nature)?;
                let tb = atom.reg.measure_z(b, nature)?;
                rec.tp_measurement = Some(TpMeasurement::Z(ta, tb));
                let consistent = rec.initial.admits(ta, tb);
                match case {
                    CheckCase::AliceSift => consistent && rec.alice_sift == Some(ta),
                    CheckCase::BobSift => consistent && rec.bob_sift == Some(tb),
                    _ => {
                        let announced_ok = match (rec.alice_sift, rec.bob_sift) {
                            (Some(sa), Some(sb)) => rec.initial.admits(sa, sb),
                            _ => false,
                        };
                        announced_ok && rec.alice_sift == Some(ta) && rec.bob_sift == Some(tb)
                    }
                }
            }
        };
        rec.check_passed = Some(passed);
        let tally: &mut CaseTally = &mut summary.cases[rec.case.index()];
        tally.checked += 1;
        tally.failures += u64::from(!passed);
    }
    Ok(summary)
}

/// Fewer unchecked both-SIFT positions than compared bits.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct KeyShortfall {
    pub available: usize,
    pub needed: usize,
}

/// Key derivation over the first `length` unchecked both-SIFT
/// positions in transmission order.
pub fn derive_keys(records: &[AtomRecord], length: usize) -> Result<KeyMaterial, KeyShortfall> {
    let candidates: Vec<&AtomRecord> = records.iter().filter(|r| r.is_key_candidate()).collect();
    if candidates.len() < length {
        return Err(KeyShortfall {
            available: candidates.len(),
            needed: length,
        });
    }
    let used = &candidates[..length];
    let bit = |o: Option<ZOutcome>| o.is_some_and(ZOutcome::bit);
    Ok(KeyMaterial {
        positions: used.iter().map(|r| r.index).collect(),
        k_a: used.iter().map(|r| bit(r.alice_sift)).collect(),
        k_b: used.iter().map(|r| bit(r.bob_sift)).collect(),
        k_c: used.iter().map(|r| r.initial.key_bit()).collect(),
    })
}

/// `m ⊕ k ⊕ k_ab`.
pub fn encrypt_inputs(m: &BitString, k: &BitString, k_ab: &BitString) -> Result<BitString> {
    m.xor(k)?.xor(k_ab)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum CompareMode {
    /// Stop at the first `R^j = 1`.
    #[default]
    EarlyExit,
    /// Compute every position.
    Full,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TpComparison {
    pub equal: bool,
    pub r: Vec<Option<bool>>,
}

/// `R^j = R_A^j ⊕ R_B^j ⊕ K_C^j`, in order.
pub fn tp_compare(
    r_a: &BitString,
    r_b: &BitString,
    k_c: &BitString,
    mode: CompareMode,
) -> Result<TpComparison> {
    if r_a.len() != r_b.len() || r_a.len() != k_c.len() {
        return Err(Error::invalid("comparison inputs must have equal lengths"));
    }
    let mut r = vec![None; r_a.len()];
    let mut equal = true;
    for j in 0..r_a.len() {
        let bit = r_a[j] ^ r_b[j] ^ k_c[j];
        r[j] = Some(bit);
        if bit {
            equal = false;
            if mode == CompareMode::EarlyExit {
                break;
            }
        }
    }
    Ok(TpComparison { equal, r })
}

/// Runs the whole protocol once. Atom `i + 1` enters the channel only after
/// atom `i` has come back to TP.
pub fn run_protocol(
    config: &ProtocolConfig,
    inputs: &PrivateInputs,
    attack: &Attack,
) -> Result<RunOutcome> {
    config.validate()?;
    inputs.validate(config.length)?;
    let mut rng = RunStreams::from_seed(config.seed);

    let initial = prepare_initial_sequence(config, &mut rng.tp);
    let mut records = Vec::with_capacity(initial.len());
    let mut live = Vec::with_capacity(initial.len());
    let mut eve_log = Vec::with_capacity(initial.len());

    for (i, &state) in initial.iter().enumerate() {
        let mut reg = evolve_atom_pair(state);
        let mut eve = EveRecord::default();
        let to_alice =
            attack.tap_forward(Leg::Alice, &mut reg, QubitId(0), &mut eve, &mut rng.eve)?;
        let to_bob = attack.tap_forward(Leg::Bob, &mut reg, QubitId(1), &mut eve, &mut rng.eve)?;

        let alice_action = random_action(&mut rng.alice);
        let bob_action = random_action(&mut rng.bob);
        let (from_alice, alice_sift) =
            party_interact(&mut reg, to_alice, alice_action, &mut rng.nature)?;
        let (from_bob, bob_sift) = party_interact(&mut reg, to_bob, bob_action, &mut rng.nature)?;

        let alice_return =
            attack.tap_return(Leg::Alice, &mut reg, from_alice, &mut eve, &mut rng.eve)?;
        let bob_return = attack.tap_return(Leg::Bob, &mut reg, from_bob, &mut eve, &mut rng.eve)?;

        records.push(AtomRecord {
            index: i + 1,
            initial: state,
            alice_action,
            bob_action,
            alice_sift,
            bob_sift,
            case: CheckCase::from_actions(alice_action, bob_action),
            checked: false,
            check_passed: None,
            tp_measurement: None,
        });
        live.push(LiveAtom {
            reg,
            alice_return,
            bob_return,
        });
        eve_log.push(eve);
    }

    let checks = run_checks(
        config,
        &mut records,
        &mut live,
        &mut rng.tp,
        &mut rng.nature,
    )?;

    let mut probe_samples = Vec::new();
    for ((rec, atom), eve) in records.iter().zip(&live).zip(&eve_log) {
        let probes = eve.probe_labels();
        if rec.is_key_candidate() && !probes.is_empty() {
            probe_samples.push(ProbeSample {
                key_bit: rec.alice_sift.is_some_and(ZOutcome::bit),
                state: atom.reg.reduced_density(&probes)?,
            });
        }
    }

    let mut transcript = Box::new(Transcript {
        config: config.clone(),
        records,
        checks,
        keys: None,
        r_a: None,
        r_b: None,
        eve: eve_log,
        probe_samples,
    });

    if let Some((case, rate)) = checks.first_violation(config.error_threshold) {
        return Ok(RunOutcome::Aborted {
            stage: case.abort_stage(),
            observed_error_rate: rate,
            transcript,
        });
    }

    let keys = match derive_keys(&transcript.records, config.length) {
        Ok(k) => k,
        Err(_) => {
            return Ok(RunOutcome::Aborted {
                stage: AbortStage::InsufficientKeyMaterial,
                observed_error_rate: 0.0,
                transcript,
            })
        }
    };
    let r_a = encrypt_inputs(&inputs.m_a, &keys.k_a, &inputs.k_ab)?;
    let r_b = encrypt_inputs(&inputs.m_b, &keys.k_b, &inputs.k_ab)?;
    let cmp = tp_compare(&r_a, &r_b, &keys.k_c, CompareMode::EarlyExit)?;
    transcript.keys = Some(keys);
    transcript.r_a = Some(r_a);
    transcript.r_b = Some(r_b);
    Ok(RunOutcome::Completed {
        equal: cmp.equal,
        r: cmp.r,
        transcript,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qsim::{Amplitude, DeltaOutcome};
    use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_4};
    use ZOutcome::{E, G};

    fn bits(s: &str) -> BitString {
        s.parse().unwrap()
    }

    #[test]
    fn initial_sequence_has_8l_entries_and_is_deterministic() {
        let cfg = ProtocolConfig::new(1, 9);
        let a = prepare_initial_sequence(&cfg, &mut RunStreams::from_seed(9).tp);
        let b = prepare_initial_sequence(&cfg, &mut RunStreams::from_seed(9).tp);
        assert_eq!(a.len(), 8);
        assert_eq!(a, b);
    }

    #[test]
    fn evolution_of_gg_and_eg() {
        let pref = Amplitude::from_polar(FRAC_1_SQRT_2, -FRAC_PI_4);
        let mi = Amplitude::new(0.0, -1.0);
        let gg = evolve_atom_pair(TwoAtomState::GG);
        let want = [pref, 0.0.into(), 0.0.into(), pref * mi];
        for (a, b) in gg.amplitudes().iter().zip(want) {
            assert!((a - b).norm() < 1e-12);
        }
        let eg = evolve_atom_pair(TwoAtomState::EG);
        let want = [0.0.into(), pref * mi, pref, 0.0.into()];
        for (a, b) in eg.amplitudes().iter().zip(want) {
            assert!((a - b).norm() < 1e-12);
        }
        let ge = evolve_atom_pair(TwoAtomState::GE);
        let p = ge.delta_probabilities(QubitId(0), QubitId(1)).unwrap();
        assert!((p[DeltaOutcome::PsiMinus.index()] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn ctrl_leaves_register_alone_and_sift_regenerates() {
        let mut rng = RunStreams::stream(4, 0);
        let mut reg = evolve_atom_pair(TwoAtomState::GG);
        let before = reg.clone();
        let (q, o) = party_interact(&mut reg, QubitId(0), PartyAction::Ctrl, &mut rng).unwrap();
        assert_eq!((q, o), (QubitId(0), None));
        assert_eq!(reg, before);

        let (fresh, found) =
            party_interact(&mut reg, QubitId(0), PartyAction::Sift, &mut rng).unwrap();
        let found = found.unwrap();
        assert_ne!(fresh, QubitId(0));
        assert_eq!(reg.z_probabilities(fresh).unwrap()[found.index()], 1.0);
        let (_, again) = party_interact(&mut reg, fresh, PartyAction::Sift, &mut rng).unwrap();
        assert_eq!(again, Some(found));
    }

    fn record(initial: TwoAtomState, a: PartyAction, b: PartyAction) -> AtomRecord {
        AtomRecord {
            index: 1,
            initial,
            alice_action: a,
            bob_action: b,
            alice_sift: None,
            bob_sift: None,
            case: CheckCase::from_actions(a, b),
            checked: false,
            check_passed: None,
            tp_measurement: None,
        }
    }

    /// gg, Alice SIFT announcing `announced`, Bob CTRL, with the post-measurement
    /// state forced to the branch Alice actually saw (`seen`).
    fn case2_check(seen: ZOutcome, announced: ZOutcome) -> bool {
        let mut reg = evolve_atom_pair(TwoAtomState::GG);
        reg.project_z(QubitId(0), seen).unwrap();
        let fresh = reg.append_qubit(seen).unwrap();
        let mut rec = record(TwoAtomState::GG, PartyAction::Sift, PartyAction::Ctrl);
        rec.alice_sift = Some(announced);
        let mut records = [rec];
        let mut live = [LiveAtom {
            reg,
            alice_return: fresh,
            bob_return: QubitId(1),
        }];
        let cfg = ProtocolConfig::new(1, 0);
        let mut r = RunStreams::from_seed(0);
        let s = run_checks(&cfg, &mut records, &mut live, &mut r.tp, &mut r.nature).unwrap();
        assert_eq!(s.case(CheckCase::AliceSift).checked, 1);
        records[0].check_passed.unwrap()
    }

    #[test]
    fn case2_check_accepts_honest_and_rejects_false_announcement() {
        assert!(case2_check(G, G));
        assert!(case2_check(E, E));
        assert!(!case2_check(G, E));
    }

    #[test]
    fn case1_check_passes_on_honest_gg() {
        let reg = evolve_atom_pair(TwoAtomState::GG);
        let mut records = [record(
            TwoAtomState::GG,
            PartyAction::Ctrl,
            PartyAction::Ctrl,
        )];
        let mut live = [LiveAtom {
            reg,
            alice_return: QubitId(0),
            bob_return: QubitId(1),
        }];
        let cfg = ProtocolConfig::new(1, 0);
        let mut r = RunStreams::from_seed(0);
        run_checks(&cfg, &mut records, &mut live, &mut r.tp, &mut r.nature).unwrap();
        assert_eq!(
            records[0].tp_measurement,
            Some(TpMeasurement::Delta(DeltaOutcome::PhiMinus))
        );
        assert_eq!(records[0].check_passed, Some(true));
    }

    #[test]
    fn keys_follow_mapping_rules() {
        let mut a = record(TwoAtomState::GG, PartyAction::Sift, PartyAction::Sift);
        a.alice_sift = Some(G);
        a.bob_sift = Some(G);
        let mut b = record(TwoAtomState::GE, PartyAction::Sift, PartyAction::Sift);
        b.index = 2;
        b.alice_sift = Some(G);
        b.bob_sift = Some(E);
        let mut checked = b.clone();
        checked.index = 3;
        checked.checked = true;
        let keys = derive_keys(&[a.clone(), checked, b.clone()], 2).unwrap();
        assert_eq!(keys.positions, vec![1, 2]);
        assert_eq!(keys.k_a, bits("00"));
        assert_eq!(keys.k_b, bits("01"));
        assert_eq!(keys.k_c, bits("01"));
        assert_eq!(
            derive_keys(&[a], 2),
            Err(KeyShortfall {
                available: 1,
                needed: 2
            })
        );
    }

    #[test]
    fn surplus_key_positions_are_discarded_in_order() {
        let recs: Vec<AtomRecord> = (1..=5)
            .map(|i| {
                let mut r = record(TwoAtomState::EE, PartyAction::Sift, PartyAction::Sift);
                r.index = i;
                r.alice_sift = Some(E);
                r.bob_sift = Some(E);
                r
            })
            .collect();
        assert_eq!(derive_keys(&recs, 3).unwrap().positions, vec![1, 2, 3]);
    }

    #[test]
    fn encryption_is_xor() {
        assert_eq!(
            encrypt_inputs(&bits("0"), &bits("0"), &bits("0")).unwrap(),
            bits("0")
        );
        assert_eq!(
            encrypt_inputs(&bits("1"), &bits("1"), &bits("0")).unwrap(),
            bits("0")
        );
        let (m, k, kab) = (bits("1011"), bits("0110"), bits("1100"));
        let c = encrypt_inputs(&m, &k, &kab).unwrap();
        assert_eq!(encrypt_inputs(&c, &k, &kab).unwrap(), m);
        assert!(encrypt_inputs(&bits("1"), &bits("10"), &bits("1")).is_err());
    }

    #[test]
    fn comparison_stops_at_first_one() {
        let z = bits("0000");
        let c = tp_compare(&z, &z, &z, CompareMode::EarlyExit).unwrap();
        assert!(c.equal);
        assert_eq!(c.r, vec![Some(false); 4]);
        let c = tp_compare(&bits("0100"), &z, &bits("0001"), CompareMode::EarlyExit).unwrap();
        assert!(!c.equal);
        assert_eq!(c.r, vec![Some(false), Some(true), None, None]);
        let c = tp_compare(&bits("0100"), &z, &bits("0001"), CompareMode::Full).unwrap();
        assert_eq!(c.r[3], Some(true));
        assert!(tp_compare(&z, &bits("0"), &z, CompareMode::Full).is_err());
    }

    fn honest(seed: u64, ma: &str, mb: &str, kab: &str) -> RunOutcome {
        // Retry seeds until enough key material is available.
        for s in seed.. {
            let cfg = ProtocolConfig::new(ma.len(), s);
            let out = run_protocol(
                &cfg,
                &PrivateInputs::new(bits(ma), bits(mb), bits(kab)),
                &Attack::None,
            )
            .unwrap();
            if out.abort_stage() != Some(AbortStage::InsufficientKeyMaterial) {
                return out;
            }
        }
        unreachable!()
    }

    #[test]
    fn honest_runs_compare_correctly() {
        let out = honest(1, "1010", "1010", "0110");
        assert_eq!(out.label(), "Equal");
        let t = out.transcript();
        let keys = t.keys.as_ref().unwrap();
        let sum = keys.k_a.xor(&keys.k_b).unwrap().xor(&keys.k_c).unwrap();
        assert!(sum.is_all_zero());
        assert_eq!(t.records.len(), 32);
        assert_eq!(t.checks.total_failures(), 0);

        let out = honest(1, "1010", "1011", "0110");
        assert_eq!(out.label(), "NotEqual");
        if let RunOutcome::Completed { r, .. } = out {
            assert_eq!(r, vec![Some(false), Some(false), Some(false), Some(true)]);
        }
    }

    #[test]
    fn mismatched_input_lengths_are_rejected() {
        let cfg = ProtocolConfig::new(4, 0);
        let inputs = PrivateInputs::new(bits("101"), bits("1010"), bits("0000"));
        assert!(run_protocol(&cfg, &inputs, &Attack::None).is_err());
    }

    #[test]
    fn records_satisfy_structural_invariants() {
        let out = honest(30, "11001010", "11001010", "00000000");
        let recs = &out.transcript().records;
        let n4 = recs
            .iter()
            .filter(|r| r.case == CheckCase::BothSift)
            .count();
        let checked4 = recs
            .iter()
            .filter(|r| r.case == CheckCase::BothSift && r.checked)
            .count();
        assert_eq!(checked4, n4 / 2);
        for r in recs {
            assert_eq!(
                r.case,
                CheckCase::from_actions(r.alice_action, r.bob_action)
            );
            assert_eq!(r.alice_sift.is_some(), r.alice_action == PartyAction::Sift);
            assert_eq!(r.bob_sift.is_some(), r.bob_action == PartyAction::Sift);
            if r.case != CheckCase::BothSift {
                assert!(r.checked);
            }
            assert_eq!(r.check_passed.is_some(), r.checked);
        }
    }
}
