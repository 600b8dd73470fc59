//! Plain-text unitary format used to load custom entangle-measure attacks.
//!
//! The first non-comment line holds the dimension `d`; each of the next `d`
//! lines holds `d` complex entries written as `re im` pairs. Blank lines and
//! anything after `#` are ignored.
//!
//! ```text
//! # CNOT, control on the flying atom
//! 4
//! 1 0  0 0  0 0  0 0
//! 0 0  1 0  0 0  0 0
//! 0 0  0 0  0 0  1 0
//! 0 0  0 0  1 0  0 0
//! ```

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::qsim::{Amplitude, UnitaryMatrix};

/// Largest dimension accepted from text (flying atom plus four probe qubits).
pub const MAX_TEXT_DIM: usize = 32;

pub fn parse_unitary(text: &str) -> Result<UnitaryMatrix> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty());

    let (n, header) = lines
        .next()
        .ok_or_else(|| Error::parse(1, "missing dimension header"))?;
    let dim: usize = header
        .parse()
        .map_err(|_| Error::parse(n, format!("bad dimension {header:?}")))?;
    if !(2..=MAX_TEXT_DIM).contains(&dim) || !dim.is_power_of_two() {
        return Err(Error::parse(
            n,
            format!("dimension must be a power of two in 2..={MAX_TEXT_DIM}"),
        ));
    }

    let mut entries = Vec::with_capacity(dim * dim);
    for row in 0..dim {
        let (n, line) = lines
            .next()
            .ok_or_else(|| Error::parse(n, format!("missing row {}", row + 1)))?;
        let values = line
            .split_whitespace()
            .map(|t| {
                t.parse::<f64>()
                    .ok()
                    .filter(|v| v.is_finite())
                    .ok_or_else(|| Error::parse(n, format!("bad number {t:?}")))
            })
            .collect::<Result<Vec<f64>>>()?;
        if values.len() != 2 * dim {
            return Err(Error::parse(
                n,
                format!("row needs {} numbers, found {}", 2 * dim, values.len()),
            ));
        }
        entries.extend(values.chunks(2).map(|c| Amplitude::new(c[0], c[1])));
    }
    if let Some((n, _)) = lines.next() {
        return Err(Error::parse(n, "unexpected extra row"));
    }
    UnitaryMatrix::new(dim, entries)
}

/// Renders with shortest round-trip float formatting.
pub fn render_unitary(u: &UnitaryMatrix) -> String {
    let mut out = format!("{}\n", u.dim());
    for r in 0..u.dim() {
        let row: Vec<String> = (0..u.dim())
            .map(|c| {
                let a = u.get(r, c);
                format!("{:?} {:?}", a.re, a.im)
            })
            .collect();
        let _ = writeln!(out, "{}", row.join("  "));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qsim::cavity_unitary;

    #[test]
    fn parses_documented_example() {
        let text = "# CNOT\n4\n1 0  0 0  0 0  0 0\n0 0  1 0  0 0  0 0\n\n0 0  0 0  0 0  1 0 # swap\n0 0  0 0  1 0  0 0\n";
        assert_eq!(parse_unitary(text).unwrap(), UnitaryMatrix::cnot());
    }

    #[test]
    fn render_round_trips() {
        let u = cavity_unitary();
        assert_eq!(parse_unitary(&render_unitary(&u)).unwrap(), u);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(parse_unitary("").is_err());
        assert!(parse_unitary("3\n").is_err());
        assert!(parse_unitary("1099511627776\n").is_err());
        assert!(parse_unitary("2\n1 0 0 0\n").is_err());
        assert!(parse_unitary("2\n1 0 0\n0 0 1 0\n").is_err());
        assert!(parse_unitary("2\n1 0 0 0\n0 0 1 0\n1 0 0 0\n").is_err());
        assert!(parse_unitary("2\n1 0 NaN 0\n0 0 1 0\n").is_err());
        assert!(matches!(
            parse_unitary("2\n1 0 1 0\n0 0 1 0\n"),
            Err(Error::NotUnitary { .. })
        ));
    }
}
