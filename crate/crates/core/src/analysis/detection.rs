use rayon::prelude::*;

use crate::adversary::{Attack, AttackKind, ProbeAccumulator, ProbeSample};
use crate::bits::BitString;
use crate::error::{Error, Result};
use crate::protocol::{
    run_protocol, AbortStage, CaseTally, CheckCase, CheckSummary, PrivateInputs, ProtocolConfig,
    RunOutcome, RunStreams,
};

/// Two-sided 99% standard-normal quantile.
pub const WILSON_Z_99: f64 = 2.575_829_303_548_900_4;

/// Stream id used for drawing a trial's random private inputs.
const INPUT_STREAM: u64 = 5;

/// Per-run detection probability for an attack on every atom of one channel,
/// assuming each both-SIFT atom is checked independently with probability ½:
/// `1 − (1/2)^{8L}` for intercept-resend, `1 − (7/8)^{8L}` for measure-resend.
pub fn closed_form_detection(kind: AttackKind, length: usize) -> Result<f64> {
    let atoms = 8.0 * length as f64;
    match kind {
        AttackKind::InterceptResend => Ok(1.0 - 0.5f64.powf(atoms)),
        AttackKind::MeasureResend => Ok(1.0 - 0.875f64.powf(atoms)),
        other => Err(Error::invalid(format!(
            "no closed form for the {other} attack"
        ))),
    }
}

/// Detection probability when exactly `⌊n₄/2⌋` of the `n₄` both-SIFT atoms
/// are checked, summed exactly over `n₄ ~ Binomial(8L, 1/4)`.
pub fn floor_sampled_detection(kind: AttackKind, length: usize) -> Result<f64> {
    // Per-case pass probabilities of one attacked atom.
    let (p1, p2, p3, p4): (f64, f64, f64, f64) = match kind {
        AttackKind::InterceptResend => (0.25, 0.5, 0.5, 0.5),
        AttackKind::MeasureResend => (0.5, 1.0, 1.0, 1.0),
        other => {
            return Err(Error::invalid(format!(
                "no closed form for the {other} attack"
            )))
        }
    };
    let atoms = 8 * length;
    let other = (p1 + p2 + p3) / 4.0;
    let mut log_choose = 0.0f64;
    let mut pass = 0.0;
    for n4 in 0..=atoms {
        if n4 > 0 {
            log_choose += ((atoms - n4 + 1) as f64).ln() - (n4 as f64).ln();
        }
        let log_term = log_choose
            + n4 as f64 * 0.25f64.ln()
            + (atoms - n4) as f64 * other.ln()
            + (n4 / 2) as f64 * p4.ln();
        pass += log_term.exp();
    }
    Ok(1.0 - pass)
}

/// Wilson score interval for `successes / trials` at normal quantile `z`.
pub fn wilson_interval(successes: u64, trials: u64, z: f64) -> (f64, f64) {
    if trials == 0 {
        return (0.0, 1.0);
    }
    let n = trials as f64;
    let p = successes as f64 / n;
    let z2 = z * z;
    let denom = 1.0 + z2 / n;
    let center = (p + z2 / (2.0 * n)) / denom;
    let half = z * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt() / denom;
    ((center - half).max(0.0), (center + half).min(1.0))
}

/// Seed of trial `index` under `base`: a SplitMix64 finaliser over both.
pub fn seed_for_trial(base: u64, index: u64) -> u64 {
    let mut z = base ^ index.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Runs the protocol, preparing a fresh batch under a derived seed whenever
/// a run passes its checks but lacks key material. Returns the final outcome
/// and the number of attempts made (at most `max_attempts`).
pub fn run_with_retries(
    config: &ProtocolConfig,
    inputs: &PrivateInputs,
    attack: &Attack,
    max_attempts: u32,
) -> Result<(RunOutcome, u32)> {
    if max_attempts == 0 {
        return Err(Error::invalid("at least one attempt is required"));
    }
    let mut attempt = 0;
    loop {
        let seed = match attempt {
            0 => config.seed,
            n => seed_for_trial(config.seed, u64::from(n)),
        };
        let outcome = run_protocol(
            &ProtocolConfig {
                seed,
                ..config.clone()
            },
            inputs,
            attack,
        )?;
        attempt += 1;
        if outcome.abort_stage() != Some(AbortStage::InsufficientKeyMaterial)
            || attempt == max_attempts
        {
            return Ok((outcome, attempt));
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MonteCarloPlan {
    pub trials: u64,
    /// Per-run settings; `protocol.seed` is the base seed of the plan.
    pub protocol: ProtocolConfig,
    pub attack: Attack,
    /// Worker threads; `None` uses the global pool.
    pub threads: Option<usize>,
}

impl MonteCarloPlan {
    pub fn new(trials: u64, length: usize, attack: Attack, seed: u64) -> Self {
        Self {
            trials,
            protocol: ProtocolConfig::new(length, seed),
            attack,
            threads: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(Error::invalid("a plan needs at least one trial"));
        }
        self.protocol.validate()
    }
}

/// Result of one trial, reduced to what the statistics need.
#[derive(Debug, Clone, PartialEq)]
pub struct TrialResult {
    pub stage: Option<AbortStage>,
    pub checks: CheckSummary,
    pub probe_samples: Vec<ProbeSample>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DetectionStats {
    pub runs: u64,
    /// Runs aborted by a failed eavesdropping check.
    pub aborts: u64,
    /// Runs that passed every check but lacked key material; tracked apart
    /// from `aborts`.
    pub key_shortfalls: u64,
    pub completed: u64,
    /// Aborts per stage, indexed by [`CheckCase::index`].
    pub aborts_by_case: [u64; 4],
    /// Per-case check tallies summed over every run.
    pub per_case: [CaseTally; 4],
    pub probe: ProbeAccumulator,
}

impl DetectionStats {
    fn empty() -> Self {
        Self {
            runs: 0,
            aborts: 0,
            key_shortfalls: 0,
            completed: 0,
            aborts_by_case: [0; 4],
            per_case: [CaseTally::default(); 4],
            probe: ProbeAccumulator::default(),
        }
    }

    fn absorb(&mut self, t: &TrialResult) -> Result<()> {
        self.runs += 1;
        match t.stage {
            None => self.completed += 1,
            Some(AbortStage::InsufficientKeyMaterial) => self.key_shortfalls += 1,
            Some(stage) => {
                self.aborts += 1;
                let case = match stage {
                    AbortStage::Case1Check => CheckCase::BothCtrl,
                    AbortStage::Case2Check => CheckCase::AliceSift,
                    AbortStage::Case3Check => CheckCase::BobSift,
                    _ => CheckCase::BothSift,
                };
                self.aborts_by_case[case.index()] += 1;
            }
        }
        for (acc, c) in self.per_case.iter_mut().zip(t.checks.cases) {
            acc.checked += c.checked;
            acc.failures += c.failures;
        }
        for s in &t.probe_samples {
            self.probe.add(s)?;
        }
        Ok(())
    }

    /// Fraction of runs aborted by a check failure (run-level detection).
    pub fn abort_rate(&self) -> f64 {
        if self.runs == 0 {
            0.0
        } else {
            self.aborts as f64 / self.runs as f64
        }
    }

    /// Wilson 99% interval for [`Self::abort_rate`].
    pub fn wilson99(&self) -> (f64, f64) {
        wilson_interval(self.aborts, self.runs, WILSON_Z_99)
    }

    pub fn case(&self, case: CheckCase) -> CaseTally {
        self.per_case[case.index()]
    }

    /// Failures over checked atoms, pooled across cases.
    pub fn atom_detection_rate(&self) -> f64 {
        let checked: u64 = self.per_case.iter().map(|c| c.checked).sum();
        let failed: u64 = self.per_case.iter().map(|c| c.failures).sum();
        if checked == 0 {
            0.0
        } else {
            failed as f64 / checked as f64
        }
    }

    pub fn probe_information(&self) -> Result<f64> {
        self.probe.information()
    }
}

fn run_trial(plan: &MonteCarloPlan, index: u64) -> Result<TrialResult> {
    let seed = seed_for_trial(plan.protocol.seed, index);
    let length = plan.protocol.length;
    let mut input_rng = RunStreams::stream(seed, INPUT_STREAM);
    let inputs = PrivateInputs::new(
        BitString::random(length, &mut input_rng),
        BitString::random(length, &mut input_rng),
        BitString::random(length, &mut input_rng),
    );
    let config = ProtocolConfig {
        seed,
        ..plan.protocol.clone()
    };
    let outcome = run_protocol(&config, &inputs, &plan.attack)?;
    let stage = outcome.abort_stage();
    let t = outcome.transcript();
    Ok(TrialResult {
        stage,
        checks: t.checks,
        probe_samples: t.probe_samples.clone(),
    })
}

/// Runs `plan.trials` independent protocol runs with uniformly random
/// inputs. Results depend only on the plan, never on the thread count.
pub fn estimate_detection(plan: &MonteCarloPlan) -> Result<DetectionStats> {
    plan.validate()?;
    let collect = || -> Result<Vec<TrialResult>> {
        (0..plan.trials)
            .into_par_iter()
            .map(|i| run_trial(plan, i))
            .collect()
    };
    let trials = match plan.threads {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| Error::invalid(format!("thread pool: {e}")))?
            .install(collect)?,
        None => collect()?,
    };
    let mut stats = DetectionStats::empty();
    for t in &trials {
        stats.absorb(t)?;
    }
    Ok(stats)
}
