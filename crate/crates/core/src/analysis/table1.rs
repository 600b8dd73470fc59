use std::fmt;

use crate::protocol::{evolve_atom_pair, TwoAtomState};
use crate::qsim::{ZOutcome, EXACT_TOLERANCE};

/// One fully determined single-bit comparison.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Table1Row {
    pub m_a: bool,
    pub m_b: bool,
    pub k_ab: bool,
    pub initial: TwoAtomState,
    /// Z results of Alice's and Bob's atoms.
    pub collapse: (ZOutcome, ZOutcome),
    pub k_a: bool,
    pub k_b: bool,
    pub k_c: bool,
    pub r_a: bool,
    pub r_b: bool,
    pub r: bool,
}

impl Table1Row {
    pub fn new(
        m_a: bool,
        m_b: bool,
        k_ab: bool,
        initial: TwoAtomState,
        collapse: (ZOutcome, ZOutcome),
    ) -> Self {
        let k_a = collapse.0.bit();
        let k_b = collapse.1.bit();
        let k_c = initial.key_bit();
        let r_a = m_a ^ k_a ^ k_ab;
        let r_b = m_b ^ k_b ^ k_ab;
        Self {
            m_a,
            m_b,
            k_ab,
            initial,
            collapse,
            k_a,
            k_b,
            k_c,
            r_a,
            r_b,
            r: r_a ^ r_b ^ k_c,
        }
    }

    /// Whether TP's output equals `m_a ⊕ m_b`.
    pub fn is_correct(&self) -> bool {
        self.r == (self.m_a ^ self.m_b)
    }
}

impl fmt::Display for Table1Row {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let b = |x: bool| u8::from(x);
        write!(
            f,
            "{} {} {} {} {}{} {} {} {} {} {} {}",
            b(self.m_a),
            b(self.m_b),
            b(self.k_ab),
            self.initial,
            self.collapse.0,
            self.collapse.1,
            b(self.k_a),
            b(self.k_b),
            b(self.k_c),
            b(self.r_a),
            b(self.r_b),
            b(self.r)
        )
    }
}

/// Every combination of inputs, pre-shared key bit, initial state and a
/// collapsed pair with nonzero amplitude after the cavity evolution.
/// Ordered by `m_a`, `m_b`, `k_ab`, initial state, then collapse.
pub fn table1_oracle() -> Vec<Table1Row> {
    let mut support = Vec::new();
    for s in TwoAtomState::ALL {
        let reg = evolve_atom_pair(s);
        for a in ZOutcome::ALL {
            for b in ZOutcome::ALL {
                let amp = reg.amplitude(&[a, b]).expect("two-qubit basis");
                if amp.norm() > EXACT_TOLERANCE {
                    support.push((s, (a, b)));
                }
            }
        }
    }
    let mut rows = Vec::with_capacity(64);
    for m_a in [false, true] {
        for m_b in [false, true] {
            for k_ab in [false, true] {
                for &(s, c) in &support {
                    rows.push(Table1Row::new(m_a, m_b, k_ab, s, c));
                }
            }
        }
    }
    rows
}

#[cfg(test)]
mod tests {
    use super::*;
    use ZOutcome::{E, G};

    #[test]
    fn sixty_four_rows_all_correct() {
        let rows = table1_oracle();
        assert_eq!(rows.len(), 64);
        assert!(rows.iter().all(Table1Row::is_correct));
    }

    #[test]
    fn first_row() {
        let row = table1_oracle()[0];
        assert_eq!(row.initial, TwoAtomState::GG);
        assert_eq!(row.collapse, (G, G));
        assert_eq!(row.to_string(), "0 0 0 gg gg 0 0 0 0 0 0");
    }

    #[test]
    fn gg_collapse_to_ee_with_unequal_inputs() {
        let row = Table1Row::new(false, true, false, TwoAtomState::GG, (E, E));
        assert_eq!(
            (row.k_a, row.k_b, row.k_c, row.r_a, row.r_b, row.r),
            (true, true, false, true, false, true)
        );
    }

    #[test]
    fn mixed_states_yield_key_bit_one() {
        let row = Table1Row::new(false, false, false, TwoAtomState::GE, (G, E));
        assert_eq!((row.k_a, row.k_b, row.k_c), (false, true, true));
        assert!(!row.r);
    }
}
