//! Reduction witnesses per the strong/plain discipline, exact oracles, and
//! sample-based verification of the witness catalog.

pub mod oracles;
mod verify;
mod witnesses;

pub use oracles::{oracle, tree_rep, DomainStatus, OracleSpec};
pub use verify::{
    apply_witness, apply_witness_point, check_tightening, cylinder_check, endomap,
    run_post_machine, run_pre_machine, samples_for, transparency_check, value_map_point,
    verify_reduction, verify_witness, SampleStatus, VerificationReport, DEFAULT_FUEL,
};
pub use witnesses::{
    as_plain, build_witness, identity_witness, list_witnesses, node_column, CompareMode,
    ReductionWitness, WitnessForm,
};
