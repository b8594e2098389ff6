//! Disordered copolymer models on heavy-tailed renewals and on α-stable
//! regenerative sets.
//!
//! The crate is organised bottom-up:
//!
//! * [`model`] holds renewal laws, disorder laws and the derived analytic
//!   quantities (MGF, renewal mass function, critical-curve bounds).
//! * [`discrete`] computes exact quenched partition functions and Monte Carlo
//!   free-energy / critical-point estimates.
//! * [`continuum`] samples regenerative sets and estimates continuum
//!   partition functions, plus a few Poisson-process sanity checks.
//! * [`coarse`] builds block skeletons from discrete and continuum paths and
//!   chains the partition functions that link the two models.

#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod coarse;
pub mod continuum;
pub mod discrete;
pub mod model;
pub mod numerics;
pub mod rng;
pub mod stats;

mod error;

pub use error::{Error, Result};
