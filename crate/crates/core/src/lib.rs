//! Simulator for a semiquantum private comparison protocol run over a
//! two-atom cavity-QED resource.
//!
//! Two parties with classical-only quantum abilities (measure in the Z basis
//! or reflect) learn whether their private bit strings are equal with the help
//! of a fully quantum third party. The crate executes the protocol atom by
//! atom on an exact statevector engine, lets an eavesdropper tap the quantum
//! channels, and provides the Monte Carlo harnesses and exact oracles used to
//! check correctness, detection probabilities and qubit efficiency.

pub mod adversary;
pub mod analysis;
pub mod bits;
pub mod error;
pub mod matrix_text;
pub mod protocol;
pub mod qsim;
pub mod report;

pub use bits::BitString;
pub use error::{Error, Result};
