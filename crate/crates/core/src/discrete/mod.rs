//! Exact quenched partition functions and Monte Carlo estimators for the
//! discrete copolymer.

mod estimate;
pub(crate) mod kernel;
mod partition;
mod path;
mod sample;

pub use estimate::{
    estimate_free_energy, estimate_free_energy_single, estimate_hc, probe_localization, weak_coupling_point, Detection,
    EstimateMode, FreeEnergyEstimate, HcEstimate, Probe,
};
pub use partition::{
    brute_force_log_partition, excursion_weight, log_excursion_weight, log_partition_exact, restriction_bound,
    QuenchedRun, BRUTE_FORCE_MAX_N,
};
pub use path::{sample_path, PathSample};
pub use sample::DisorderSample;
