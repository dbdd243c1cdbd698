//! Exact global evolution for a few collisions and the entropy balance it
//! supports.

mod checks;
mod joint;
mod ledger;

pub use checks::{
    energy_bookkeeping_check, entropy_identity_check, heat_entropy_comparison, EnergyBookkeepingReport,
    EntropyIdentityReport, HeatEntropyComparison, BOOKKEEPING_TOL, IDENTITY_TOL,
};
pub use joint::{
    joint_state_bytes, joint_trajectory, joint_trajectory_each, JointState, DEFAULT_JOINT_CAP, MAX_JOINT_CAP,
};
pub use ledger::{entropy_ledger, ledger_series, EntropyLedger};
