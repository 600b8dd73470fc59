//! Line-oriented transcript dump.
//!
//! ```text
//! sqpc-transcript v1
//! config length=1 seed=7 error_threshold=0 case4_check_fraction=0.5
//! atom 1 gg SIFT CTRL g - 2 1 1 Z:gg
//! atom 2 ge SIFT SIFT e g 4 0 - -
//! ...
//! keys positions=2 k_a=1 k_b=0 k_c=1 r_a=0 r_b=1
//! outcome Equal r=0
//! ```
//!
//! Atom fields are: index, initial state, Alice's action, Bob's action,
//! Alice's SIFT result, Bob's SIFT result, case number, checked (0/1), passed
//! (0/1/-) and TP's measurement (`D:<delta>`, `Z:<ab>` or `-`). A run that
//! never derived keys has a `keys none` line. Aborted runs end with
//! `outcome Aborted stage=<stage> rate=<6 decimals>`.

use std::fmt::Write as _;

use super::{
    AbortStage, AtomRecord, CheckCase, KeyMaterial, PartyAction, ProtocolConfig, RunOutcome,
    TpMeasurement,
};
use crate::bits::BitString;
use crate::error::{Error, Result};
use crate::qsim::{DeltaOutcome, ZOutcome};

const MAGIC: &str = "sqpc-transcript v1";

#[derive(Debug, Clone, PartialEq)]
pub enum OutcomeLine {
    Completed { equal: bool, r: Vec<Option<bool>> },
    Aborted { stage: AbortStage, rate: f64 },
}

/// The serialisable part of a run: everything except quantum state and
/// Eve's private data.
#[derive(Debug, Clone, PartialEq)]
pub struct TranscriptDump {
    pub config: ProtocolConfig,
    pub records: Vec<AtomRecord>,
    pub keys: Option<KeyMaterial>,
    pub r_a: Option<BitString>,
    pub r_b: Option<BitString>,
    pub outcome: OutcomeLine,
}

impl TranscriptDump {
    pub fn from_outcome(outcome: &RunOutcome) -> Self {
        let t = outcome.transcript();
        let line = match outcome {
            RunOutcome::Completed { equal, r, .. } => OutcomeLine::Completed {
                equal: *equal,
                r: r.clone(),
            },
            RunOutcome::Aborted {
                stage,
                observed_error_rate,
                ..
            } => OutcomeLine::Aborted {
                stage: *stage,
                rate: *observed_error_rate,
            },
        };
        Self {
            config: t.config.clone(),
            records: t.records.clone(),
            keys: t.keys.clone(),
            r_a: t.r_a.clone(),
            r_b: t.r_b.clone(),
            outcome: line,
        }
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        let c = &self.config;
        let _ = writeln!(out, "{MAGIC}");
        let _ = writeln!(
            out,
            "config length={} seed={} error_threshold={} case4_check_fraction={}",
            c.length, c.seed, c.error_threshold, c.case4_check_fraction
        );
        for r in &self.records {
            let _ = writeln!(
                out,
                "atom {} {} {} {} {} {} {} {} {} {}",
                r.index,
                r.initial,
                r.alice_action,
                r.bob_action,
                opt_z(r.alice_sift),
                opt_z(r.bob_sift),
                r.case.number(),
                u8::from(r.checked),
                match r.check_passed {
                    Some(true) => "1",
                    Some(false) => "0",
                    None => "-",
                },
                r.tp_measurement
                    .map(|m| m.to_string())
                    .unwrap_or_else(|| "-".into()),
            );
        }
        match &self.keys {
            Some(k) => {
                let positions: Vec<String> = k.positions.iter().map(|p| p.to_string()).collect();
                let _ = writeln!(
                    out,
                    "keys positions={} k_a={} k_b={} k_c={} r_a={} r_b={}",
                    positions.join(","),
                    k.k_a,
                    k.k_b,
                    k.k_c,
                    self.r_a.as_ref().map(|b| b.to_string()).unwrap_or_default(),
                    self.r_b.as_ref().map(|b| b.to_string()).unwrap_or_default(),
                );
            }
            None => {
                let _ = writeln!(out, "keys none");
            }
        }
        match &self.outcome {
            OutcomeLine::Completed { equal, r } => {
                let r: String = r
                    .iter()
                    .map(|b| match b {
                        Some(true) => '1',
                        Some(false) => '0',
                        None => '-',
                    })
                    .collect();
                let label = if *equal { "Equal" } else { "NotEqual" };
                let _ = writeln!(out, "outcome {label} r={r}");
            }
            OutcomeLine::Aborted { stage, rate } => {
                let _ = writeln!(out, "outcome Aborted stage={stage} rate={rate:.6}");
            }
        }
        out
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim_end()))
            .filter(|(_, l)| !l.is_empty());

        let (n, first) = lines
            .next()
            .ok_or_else(|| Error::parse(1, "empty transcript"))?;
        if first != MAGIC {
            return Err(Error::parse(n, "missing transcript header"));
        }
        let (n, cfg_line) = lines
            .next()
            .ok_or_else(|| Error::parse(n + 1, "missing config line"))?;
        let config = parse_config(n, cfg_line)?;

        let mut records = Vec::new();
        let mut keys_line = None;
        for (n, line) in lines.by_ref() {
            if let Some(rest) = line.strip_prefix("atom ") {
                let rec = parse_atom(n, rest)?;
                if rec.index != records.len() + 1 {
                    return Err(Error::parse(n, "atom indices must be consecutive from 1"));
                }
                records.push(rec);
            } else {
                keys_line = Some((n, line));
                break;
            }
        }
        let (n, keys_line) = keys_line.ok_or_else(|| Error::parse(0, "missing keys line"))?;
        let (keys, r_a, r_b) = parse_keys(n, keys_line)?;
        let (n, outcome_line) = lines
            .next()
            .ok_or_else(|| Error::parse(n + 1, "missing outcome line"))?;
        let outcome = parse_outcome(n, outcome_line)?;
        if let Some((n, _)) = lines.next() {
            return Err(Error::parse(n, "trailing content after outcome"));
        }
        Ok(Self {
            config,
            records,
            keys,
            r_a,
            r_b,
            outcome,
        })
    }
}

fn opt_z(o: Option<ZOutcome>) -> String {
    o.map(|z| z.to_string()).unwrap_or_else(|| "-".into())
}

fn fields<'a>(n: usize, s: &'a str, expected: &[&str]) -> Result<Vec<&'a str>> {
    let parts: Vec<&str> = s.split(' ').collect();
    if parts.len() != expected.len() {
        return Err(Error::parse(
            n,
            format!("expected {} fields, found {}", expected.len(), parts.len()),
        ));
    }
    parts
        .iter()
        .zip(expected)
        .map(|(p, key)| {
            p.strip_prefix(key)
                .and_then(|v| v.strip_prefix('='))
                .ok_or_else(|| Error::parse(n, format!("expected field {key}=")))
        })
        .collect()
}

fn num<T: std::str::FromStr>(n: usize, s: &str, what: &str) -> Result<T> {
    s.parse()
        .map_err(|_| Error::parse(n, format!("bad {what}: {s:?}")))
}

fn parse_config(n: usize, line: &str) -> Result<ProtocolConfig> {
    let rest = line
        .strip_prefix("config ")
        .ok_or_else(|| Error::parse(n, "expected config line"))?;
    let v = fields(
        n,
        rest,
        &["length", "seed", "error_threshold", "case4_check_fraction"],
    )?;
    let config = ProtocolConfig {
        length: num(n, v[0], "length")?,
        seed: num(n, v[1], "seed")?,
        error_threshold: num(n, v[2], "error_threshold")?,
        case4_check_fraction: num(n, v[3], "case4_check_fraction")?,
    };
    config
        .validate()
        .map_err(|e| Error::parse(n, e.to_string()))?;
    Ok(config)
}

fn parse_opt_z(n: usize, s: &str) -> Result<Option<ZOutcome>> {
    let mut chars = s.chars();
    match (chars.next(), chars.next()) {
        (Some('-'), None) => Ok(None),
        (Some(c), None) => ZOutcome::from_symbol(c)
            .map(Some)
            .ok_or_else(|| Error::parse(n, format!("bad Z outcome {s:?}"))),
        _ => Err(Error::parse(n, format!("bad Z outcome {s:?}"))),
    }
}

fn parse_tp(n: usize, s: &str) -> Result<Option<TpMeasurement>> {
    if s == "-" {
        return Ok(None);
    }
    if let Some(d) = s.strip_prefix("D:") {
        return DeltaOutcome::from_name(d)
            .map(|d| Some(TpMeasurement::Delta(d)))
            .ok_or_else(|| Error::parse(n, format!("bad delta outcome {d:?}")));
    }
    if let Some(z) = s.strip_prefix("Z:") {
        let mut chars = z.chars();
        if let (Some(a), Some(b), None) = (chars.next(), chars.next(), chars.next()) {
            if let (Some(a), Some(b)) = (ZOutcome::from_symbol(a), ZOutcome::from_symbol(b)) {
                return Ok(Some(TpMeasurement::Z(a, b)));
            }
        }
    }
    Err(Error::parse(n, format!("bad TP measurement {s:?}")))
}

fn parse_atom(n: usize, rest: &str) -> Result<AtomRecord> {
    let p: Vec<&str> = rest.split(' ').collect();
    if p.len() != 10 {
        return Err(Error::parse(
            n,
            format!("atom line needs 10 fields, found {}", p.len()),
        ));
    }
    let parse_err = |e: Error| Error::parse(n, e.to_string());
    let alice_action: PartyAction = p[2].parse().map_err(parse_err)?;
    let bob_action: PartyAction = p[3].parse().map_err(parse_err)?;
    let case_no: u8 = num(n, p[6], "case")?;
    let case = CheckCase::from_number(case_no)
        .ok_or_else(|| Error::parse(n, format!("case {case_no} out of range")))?;
    if case != CheckCase::from_actions(alice_action, bob_action) {
        return Err(Error::parse(n, "case does not match the actions"));
    }
    let alice_sift = parse_opt_z(n, p[4])?;
    let bob_sift = parse_opt_z(n, p[5])?;
    if alice_sift.is_some() != (alice_action == PartyAction::Sift)
        || bob_sift.is_some() != (bob_action == PartyAction::Sift)
    {
        return Err(Error::parse(n, "SIFT result present iff action is SIFT"));
    }
    let checked = match p[7] {
        "0" => false,
        "1" => true,
        other => return Err(Error::parse(n, format!("bad checked flag {other:?}"))),
    };
    let check_passed = match p[8] {
        "-" => None,
        "0" => Some(false),
        "1" => Some(true),
        other => return Err(Error::parse(n, format!("bad passed flag {other:?}"))),
    };
    Ok(AtomRecord {
        index: num(n, p[0], "atom index")?,
        initial: p[1].parse().map_err(parse_err)?,
        alice_action,
        bob_action,
        alice_sift,
        bob_sift,
        case,
        checked,
        check_passed,
        tp_measurement: parse_tp(n, p[9])?,
    })
}

type KeysLine = (Option<KeyMaterial>, Option<BitString>, Option<BitString>);

fn parse_keys(n: usize, line: &str) -> Result<KeysLine> {
    let rest = line
        .strip_prefix("keys ")
        .ok_or_else(|| Error::parse(n, "expected keys line"))?;
    if rest == "none" {
        return Ok((None, None, None));
    }
    let v = fields(n, rest, &["positions", "k_a", "k_b", "k_c", "r_a", "r_b"])?;
    let positions = if v[0].is_empty() {
        Vec::new()
    } else {
        v[0].split(',')
            .map(|s| num::<usize>(n, s, "key position"))
            .collect::<Result<Vec<_>>>()?
    };
    let b = |s: &str| -> Result<BitString> {
        s.parse().map_err(|e: Error| Error::parse(n, e.to_string()))
    };
    let keys = KeyMaterial {
        positions,
        k_a: b(v[1])?,
        k_b: b(v[2])?,
        k_c: b(v[3])?,
    };
    let len = keys.positions.len();
    if [&keys.k_a, &keys.k_b, &keys.k_c]
        .iter()
        .any(|k| k.len() != len)
    {
        return Err(Error::parse(n, "key lengths must match the position count"));
    }
    let opt = |s: &str| -> Result<Option<BitString>> {
        if s.is_empty() {
            Ok(None)
        } else {
            b(s).map(Some)
        }
    };
    Ok((Some(keys), opt(v[4])?, opt(v[5])?))
}

fn parse_outcome(n: usize, line: &str) -> Result<OutcomeLine> {
    let rest = line
        .strip_prefix("outcome ")
        .ok_or_else(|| Error::parse(n, "expected outcome line"))?;
    let (label, tail) = rest.split_once(' ').unwrap_or((rest, ""));
    match label {
        "Equal" | "NotEqual" => {
            let v = fields(n, tail, &["r"])?;
            let r = v[0]
                .chars()
                .map(|c| match c {
                    '0' => Ok(Some(false)),
                    '1' => Ok(Some(true)),
                    '-' => Ok(None),
                    _ => Err(Error::parse(n, format!("bad comparison bit {c:?}"))),
                })
                .collect::<Result<Vec<_>>>()?;
            Ok(OutcomeLine::Completed {
                equal: label == "Equal",
                r,
            })
        }
        "Aborted" => {
            let v = fields(n, tail, &["stage", "rate"])?;
            Ok(OutcomeLine::Aborted {
                stage: v[0]
                    .parse()
                    .map_err(|e: Error| Error::parse(n, e.to_string()))?,
                rate: num(n, v[1], "rate")?,
            })
        }
        other => Err(Error::parse(n, format!("unknown outcome {other:?}"))),
    }
}
