//! Planning toolkit for seafloor anchor-cluster deployments supporting
//! large-scale AUV navigation.
//!
//! An AUV crossing a wide area alternates between two error regimes: inside a
//! cluster's acoustic coverage its position error is bounded by the CRLB of
//! the trilateration geometry, and between clusters its dead-reckoning
//! variance diverges exponentially with traveled distance. This crate lays
//! out anchor clusters on a uniform grid, evaluates the hybrid objective that
//! trades those regimes off, checks the stable-navigation feasibility
//! condition, evaluates the closed-form voyage scaling law, and validates
//! plans with seeded Monte Carlo path simulation.
//!
//! Modules mirror the pipeline:
//!
//! - [`profile`]: sound-speed profiles and refraction-aware range variance
//! - [`geometry`]: Jacobians, Fisher information, CRLB, coverage radii, fields
//! - [`ins`]: dead-reckoning divergence model and coefficient fitting
//! - [`deploy`]: grid layout, spacings, feasibility margin, maximum side
//! - [`planner`]: hybrid objective, per-path evaluation, candidate search,
//!   scaling law
//! - [`sim`]: seeded Monte Carlo voyage simulation
//! - [`config`] / [`cli`]: the JSON scenario document and the batch commands

// Validation uses negated comparisons like `!(v > 0.0)` so that NaN fails
// closed; the positive rewrite the lint suggests would let NaN through.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod config;
pub mod deploy;
pub mod error;
pub mod geometry;
pub mod ins;
pub mod planner;
pub mod profile;
pub mod sim;

pub use error::{Error, Result};
