//! Simulation and analysis toolkit for n-th order learning dynamics on finite
//! normal-form games.
//!
//! Players accumulate scores whose n-th time derivative is driven by current
//! payoffs (or by a monotone payoff observable), and mix their actions through
//! a logit choice map. The crate provides:
//!
//! * dense payoff tensors with multilinear expected-payoff evaluation
//!   ([`game`]),
//! * strict and weak dominance checks, mixed dominators via linear
//!   programming, and iterated elimination ([`dominance`]),
//! * the score-space, relative-score, and strategy-space vector fields of the
//!   dynamics, including the exact log-derivative remainder that links the two
//!   pictures ([`dynamics`]),
//! * fixed-step and adaptive Runge-Kutta integration with dense output and
//!   event detection ([`integrator`]),
//! * trajectory analysis: Kullback-Leibler extinction rates, convergence
//!   classification against equilibrium predicates, and phase-space volume
//!   diagnostics ([`analysis`]),
//! * a small set of built-in games used throughout the test suite
//!   ([`builtins`]).

pub mod analysis;
pub mod builtins;
pub mod dominance;
pub mod dynamics;
mod error;
pub mod game;
pub mod integrator;

pub use error::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
