//! Higher-order learning dynamics for finite games.
//!
//! The basic object is a score cascade of order n: each action's score is
//! driven through n integrators by an observed payoff signal, and play is
//! the logit choice over current scores. The module provides that field in
//! full score coordinates, in relative scores against a reference action,
//! and pushed through the choice map so the mixed profile itself is the
//! state, plus the second-order aggregate-score system.

mod fields;
mod gibbs;
mod observable;
mod remainder;

pub use fields::{
    build_field, DynamicsConfig, DynamicsKind, LdField, Md2Field, RdField, VectorField,
    ZdField, MAX_DIRECT_ORDER, X_MIN,
};
pub use gibbs::{
    gibbs, gibbs_inverse, reduced_gibbs, reduced_gibbs_inverse, reduced_gibbs_scaled, Z_MAX,
};
pub use observable::{MonotonicityClass, Observable, ScalarKind};
pub use remainder::log_derivative_remainder;
