//! Evolutionary optimizers and a seeded benchmark harness.
//!
//! Four algorithms — differential evolution ([`algo::de`]), simplified
//! atavistic DE ([`algo::sade`]), real-coded augmented simulated annealing
//! ([`algo::rasa`]) and integer augmented simulated annealing
//! ([`algo::iasa`]) — run against four objectives: Chebyshev polynomial
//! fitting, the type-0 arctan peak, a penalized reinforced-concrete beam and
//! periodic unit cell reconstruction. Every run counts fitness calls through
//! a single [`problem::Evaluator`]; the [`harness`] repeats runs from derived
//! seeds and aggregates success counts and average calls.

pub mod algo;
pub mod error;
pub mod harness;
pub mod presets;
pub mod problem;
pub mod problems;
pub mod rng;

pub use error::{Error, Result};
