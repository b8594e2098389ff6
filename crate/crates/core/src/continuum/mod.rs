//! α-stable regenerative sets and continuum partition functions.

mod brownian;
mod checks;
mod grid;
mod laws;
mod modified;
mod partition;
mod regen;

pub use brownian::BrownianPath;
pub use checks::{
    campbell_check, excursion_scaling_check, excursion_scaling_limit, CampbellResult, ScalingRow, ScalingTable,
    CAMPBELL_CUTOFF,
};
pub use grid::{estimate_continuum_free_energy, GridRegenerativeLaw};
pub use laws::{d_cdf, g_cdf, sample_d, sample_d_given_g, sample_g, GtDtLaw};
pub use modified::{
    modified_log_partition, modified_partition, start_point_estimate, ModifiedEstimate, StartPointEstimate,
    DEFAULT_GRID_M,
};
pub use partition::{
    continuum_log_partition, continuum_log_partition_keyed, gap_increment, ContinuumQuenched, SignMode,
};
pub use regen::{levy_constant, sample_last_zero, sample_regenerative_excursions, ExcursionDecomposition};
