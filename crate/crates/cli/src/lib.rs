//! Command-line front end for the dynamics toolkit: run single trajectories,
//! sweep grids of initial conditions, eliminate dominated strategies, and
//! execute the pre-registered verification recipes.
//!
//! Everything lives in the library so the integration tests can drive the
//! same code paths the `hodyn` binary uses.

pub mod args;
pub mod output;
pub mod recipes;
pub mod run;
pub mod setup;
