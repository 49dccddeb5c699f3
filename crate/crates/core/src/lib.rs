//! Fair allocation of value in crowd-sourced network systems.
//!
//! The crate pairs an exact Shapley engine (plus a seeded permutation
//! sampler) with closed-form allocators for three families of games:
//!
//! * [`models`]: one founder and its crowd, valued by revenue, weighted work,
//!   or profit;
//! * [`oligopoly`]: several systems joined by bilateral agreements, at the
//!   system level or per participant;
//! * [`geo`]: agents with overlapping coverage regions, with or without a
//!   founder.
//!
//! Every closed form is checked against [`shapley_exact`] in the test suite.

pub mod axioms;
pub mod coalition;
pub mod error;
pub mod game;
pub mod geo;
pub mod models;
pub mod oligopoly;
pub mod shapley;

pub use axioms::{check_axioms, check_linearity, is_supermodular, AxiomReport, LinearityReport};
pub use coalition::{Coalition, PlayerId, PlayerTag, MAX_PLAYERS};
pub use error::{Error, Result};
pub use game::{Allocation, CoalitionGame, Method};
pub use shapley::{
    anonymous_game, marginal_value, shapley_anonymous, shapley_exact, shapley_exact_with, shapley_sample,
    AnonymousShapley, ExactConfig, DEFAULT_EXACT_CAP,
};
