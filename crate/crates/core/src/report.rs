//! Fixed-format report rendering: `key=value` text and CSV tables.
//! Probabilities always carry six decimals and rationals print as `p/q`.

use std::fmt::Write as _;

use crate::analysis::{
    closed_form_detection, floor_sampled_detection, DetectionStats, EfficiencyReport,
    MonteCarloPlan, Table1Row, Theorem1Row,
};
use crate::protocol::{CheckCase, RunOutcome};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Text,
    Csv,
}

/// Rows sharing one column set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(columns: &[&str]) -> Self {
        Self {
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    /// Single-row table from ordered key/value pairs.
    pub fn record(fields: Vec<(&str, String)>) -> Self {
        let (columns, row): (Vec<_>, Vec<_>) =
            fields.into_iter().map(|(k, v)| (k.to_string(), v)).unzip();
        Self {
            columns,
            rows: vec![row],
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        assert_eq!(row.len(), self.columns.len(), "row width");
        self.rows.push(row);
    }

    /// One `key=value` line per field for a single row; one space-separated
    /// line per row otherwise.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        if self.rows.len() == 1 {
            for (k, v) in self.columns.iter().zip(&self.rows[0]) {
                let _ = writeln!(out, "{k}={v}");
            }
        } else {
            for row in &self.rows {
                let line: Vec<String> = self
                    .columns
                    .iter()
                    .zip(row)
                    .map(|(k, v)| format!("{k}={v}"))
                    .collect();
                let _ = writeln!(out, "{}", line.join(" "));
            }
        }
        out
    }

    pub fn to_csv(&self) -> String {
        let mut out = self.columns.join(",");
        out.push('\n');
        for row in &self.rows {
            out.push_str(&row.join(","));
            out.push('\n');
        }
        out
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Text => self.to_text(),
            Format::Csv => self.to_csv(),
        }
    }
}

pub fn prob(x: f64) -> String {
    format!("{x:.6}")
}

fn bit(b: bool) -> String {
    u8::from(b).to_string()
}

fn case_columns(prefix: &str) -> Vec<String> {
    (1..=4).map(|n| format!("case{n}_{prefix}")).collect()
}

/// `seed` is the seed of the reported run; `attempts` counts batches
/// prepared before it, itself included.
pub fn run_table(outcome: &RunOutcome, attempts: u32) -> Table {
    let t = outcome.transcript();
    let mut fields = vec![
        ("outcome", outcome.label()),
        ("L", t.config.length.to_string()),
        ("seed", t.config.seed.to_string()),
        ("attempts", attempts.to_string()),
        ("atoms", t.records.len().to_string()),
    ];
    let checked: Vec<String> = t
        .checks
        .cases
        .iter()
        .map(|c| c.checked.to_string())
        .collect();
    let failed: Vec<String> = t
        .checks
        .cases
        .iter()
        .map(|c| c.failures.to_string())
        .collect();
    fields.push(("checked", checked.join("/")));
    fields.push(("failures", failed.join("/")));
    match outcome {
        RunOutcome::Aborted {
            observed_error_rate,
            ..
        } => fields.push(("error_rate", prob(*observed_error_rate))),
        RunOutcome::Completed { r, .. } => {
            let r: String = r
                .iter()
                .map(|b| match b {
                    Some(true) => '1',
                    Some(false) => '0',
                    None => '-',
                })
                .collect();
            fields.push(("r", r));
        }
    }
    if let (Some(r_a), Some(r_b)) = (&t.r_a, &t.r_b) {
        fields.push(("r_a", r_a.to_string()));
        fields.push(("r_b", r_b.to_string()));
    }
    Table::record(fields)
}

/// Empirical detection next to the idealized and floor-sampled closed forms
/// (`na` when the attack has none).
pub fn attack_table(plan: &MonteCarloPlan, stats: &DetectionStats) -> Table {
    let kind = plan.attack.kind();
    let length = plan.protocol.length;
    let closed = closed_form_detection(kind, length).map_or("na".into(), prob);
    let floor = floor_sampled_detection(kind, length).map_or("na".into(), prob);
    let (lo, hi) = stats.wilson99();
    let mut columns: Vec<String> = [
        "attack",
        "L",
        "trials",
        "seed",
        "runs",
        "aborts",
        "key_shortfalls",
        "completed",
        "empirical",
        "wilson99_low",
        "wilson99_high",
        "closed_form",
        "floor_sampled",
    ]
    .iter()
    .map(|s| s.to_string())
    .collect();
    let mut row = vec![
        kind.name().to_string(),
        length.to_string(),
        plan.trials.to_string(),
        plan.protocol.seed.to_string(),
        stats.runs.to_string(),
        stats.aborts.to_string(),
        stats.key_shortfalls.to_string(),
        stats.completed.to_string(),
        prob(stats.abort_rate()),
        prob(lo),
        prob(hi),
        closed,
        floor,
    ];
    columns.extend(case_columns("checked"));
    columns.extend(case_columns("failures"));
    columns.extend(case_columns("rate"));
    columns.extend(case_columns("aborts"));
    row.extend(CheckCase::ALL.map(|c| stats.case(c).checked.to_string()));
    row.extend(CheckCase::ALL.map(|c| stats.case(c).failures.to_string()));
    row.extend(CheckCase::ALL.map(|c| prob(stats.case(c).rate())));
    row.extend(stats.aborts_by_case.map(|n| n.to_string()));
    columns.push("probe_information".into());
    row.push(stats.probe_information().map_or("na".into(), prob));
    Table {
        columns,
        rows: vec![row],
    }
}

pub fn efficiency_table(reports: &[(u64, EfficiencyReport)]) -> Table {
    let mut t = Table::new(&["L", "eta_c", "eta_q", "eta_b", "eta", "eta_decimal"]);
    for (l, r) in reports {
        t.push(vec![
            l.to_string(),
            r.eta_c.to_string(),
            r.eta_q.to_string(),
            r.eta_b.to_string(),
            r.eta.to_string(),
            prob(*r.eta.numer() as f64 / *r.eta.denom() as f64),
        ]);
    }
    t
}

pub fn table1_table(rows: &[Table1Row]) -> Table {
    let mut t = Table::new(&[
        "m_a", "m_b", "k_ab", "initial", "collapse", "k_a", "k_b", "k_c", "r_a", "r_b", "r", "pass",
    ]);
    for r in rows {
        t.push(vec![
            bit(r.m_a),
            bit(r.m_b),
            bit(r.k_ab),
            r.initial.to_string(),
            format!("{}{}", r.collapse.0, r.collapse.1),
            bit(r.k_a),
            bit(r.k_b),
            bit(r.k_c),
            bit(r.r_a),
            bit(r.r_b),
            bit(r.r),
            r.is_correct().to_string(),
        ]);
    }
    t
}

pub fn theorem1_table(rows: &[Theorem1Row]) -> Table {
    let mut t = Table::new(&[
        "theta",
        "detection_rate",
        "probe_information",
        "atoms_checked",
        "runs",
    ]);
    for r in rows {
        t.push(vec![
            prob(r.theta),
            prob(r.detection_rate),
            prob(r.probe_information),
            r.atoms_checked.to_string(),
            r.runs.to_string(),
        ]);
    }
    t
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::{qubit_efficiency, table1_oracle};

    #[test]
    fn single_row_text_is_key_value_lines() {
        let t = Table::record(vec![("a", "1".into()), ("b", prob(0.5))]);
        assert_eq!(t.to_text(), "a=1\nb=0.500000\n");
        assert_eq!(t.to_csv(), "a,b\n1,0.500000\n");
    }

    #[test]
    fn efficiency_prints_rational() {
        let t = efficiency_table(&[(10, qubit_efficiency(10).unwrap())]);
        assert!(t.to_text().contains("eta=1/50\n"));
        assert_eq!(
            t.to_csv(),
            "L,eta_c,eta_q,eta_b,eta,eta_decimal\n10,10,480,20,1/50,0.020000\n"
        );
    }

    #[test]
    fn table1_csv_has_header_and_64_rows() {
        let csv = table1_table(&table1_oracle()).to_csv();
        assert_eq!(csv.lines().count(), 65);
        assert!(csv.lines().nth(1).unwrap().starts_with("0,0,0,gg,gg,"));
    }

    #[test]
    fn multi_row_text() {
        let mut t = Table::new(&["x", "y"]);
        t.push(vec!["1".into(), "2".into()]);
        t.push(vec!["3".into(), "4".into()]);
        assert_eq!(t.to_text(), "x=1 y=2\nx=3 y=4\n");
    }
}
