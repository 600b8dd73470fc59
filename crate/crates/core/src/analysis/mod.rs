//! Monte Carlo harnesses, closed-form detection probabilities, the exhaustive
//! correctness table and the qubit-efficiency count.

mod detection;
mod efficiency;
mod table1;
mod theorem1;

pub use detection::{
    closed_form_detection, estimate_detection, floor_sampled_detection, run_with_retries,
    seed_for_trial, wilson_interval, DetectionStats, MonteCarloPlan, TrialResult, WILSON_Z_99,
};
pub use efficiency::{qubit_efficiency, EfficiencyReport};
pub use table1::{table1_oracle, Table1Row};
pub use theorem1::{theorem1_scan, theta_grid, Theorem1Row};
