//! Fat-tail analytics.
//!
//! Scale-family densities and their stochastic-volatility perturbations, the
//! four crossover points that split a bell-shaped density into peak,
//! shoulders and tails, Black-Scholes pricing under volatility mixtures,
//! fourth-moment option packages, variance strips and barbell accounting.
//!
//! Everything here is a pure function of its inputs.

// `!(a < b)` is used deliberately so that NaN inputs are rejected.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod barbell;
pub mod crossover;
pub mod distributions;
pub mod error;
pub mod numeric;
pub mod pricing;
pub mod scenario;
pub mod strategies;
pub mod vix;

pub use error::{Error, Result};
