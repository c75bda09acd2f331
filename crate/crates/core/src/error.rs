use crate::integrator::Trajectory;

/// Errors produced anywhere in the crate.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// A caller-supplied argument was out of range or inconsistent.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// A game description failed validation (shape mismatch, non-finite
    /// payoff, empty action set, ...).
    #[error("invalid game: {0}")]
    BadGame(String),

    /// A mixed profile failed validation (negative weight, bad sum, wrong
    /// arity).
    #[error("invalid mixed profile: {0}")]
    BadProfile(String),

    /// A structured text document could not be parsed.
    #[error("parse error: {0}")]
    Parse(String),

    /// A dynamics evaluation was requested outside its domain, e.g. a
    /// strategy-space field at the simplex boundary.
    #[error("dynamics domain violation: {0}")]
    Domain(String),

    /// The feasibility solver failed structurally (not mere infeasibility,
    /// which is an ordinary `None` answer).
    #[error("linear program: {0}")]
    Lp(String),

    /// Integration hit the step budget before reaching the requested time.
    /// The partial trajectory up to the last accepted step is attached.
    #[error("integration truncated after {steps} steps at t = {t}")]
    Truncated {
        steps: usize,
        t: f64,
        partial: Box<Trajectory>,
    },

    /// A state component became non-finite during integration.
    #[error("non-finite state at t = {t} (component {index})")]
    Blowup {
        t: f64,
        index: usize,
        partial: Box<Trajectory>,
    },

    /// An analysis routine could not produce a meaningful answer from the
    /// given trajectory (insufficient growth, no convergence, ...).
    #[error("analysis: {0}")]
    Analysis(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
