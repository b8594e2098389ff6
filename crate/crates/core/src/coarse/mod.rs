//! Block skeletons of discrete and continuum paths, the Gaussian block
//! coupling, the discrete-to-continuum likelihood ratio of skeleton
//! increments, and the chain of partition functions linking the two models.

mod chain;
mod hamiltonian;
mod rn;
mod skeleton;
mod skorohod;

pub use chain::{pipeline_chain, ChainConfig, ChainEstimate, ChainReplica};
pub use hamiltonian::{
    coarse_grained_hamiltonian_discrete, skeleton_hamiltonian, skeleton_log_weight, step1_mismatch,
    SkeletonHamiltonian, Step1Mismatch,
};
pub use rn::{i_integral, rn_ratio, skeleton_log_rn_bound, KappaReport, KappaRow, RnEntry, RnReport};
pub use skeleton::{coarse_grain_continuum, coarse_grain_discrete, integer_ratio, Skeleton};
pub use skorohod::{skorohod_exp_moment, skorohod_pair, BlockSumLaw, CoupledBlockPair, DEFAULT_MC_CDF_SAMPLES};
