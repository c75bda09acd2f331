//! Transformations of the payoff signal that drive the score cascade.
//!
//! Each observable turns the table of per-action payoffs at the current
//! profile into the values the top level of the cascade integrates. The
//! class records how much of the payoff structure survives the
//! transformation: affine maps preserve mixed-strategy comparisons, while
//! merely monotone ones only preserve the ordering of pure actions.

use crate::game::MixedProfile;
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MonotonicityClass {
    /// Order-preserving on mixed profiles as well as pure actions.
    Aggregate,
    /// Order-preserving on per-action payoffs only.
    PayoffMonotonic,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ScalarKind {
    Tanh,
    CubicPlusLinear,
}

impl ScalarKind {
    fn apply(self, u: f64) -> f64 {
        match self {
            ScalarKind::Tanh => u.tanh(),
            ScalarKind::CubicPlusLinear => u * u * u + u,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Observable {
    /// Raw payoffs.
    Identity,
    /// `scale * u + offset` with `scale > 0`.
    PositiveAffine { scale: f64, offset: f64 },
    /// A strictly increasing scalar map applied to each action payoff.
    MonotoneScalar(ScalarKind),
    /// Per-action payoff relative to the profile's mean payoff, both
    /// shifted by `offset` to keep the denominator positive:
    /// `(u_a + offset) / (u_mean + offset)`.
    PayoffAdjusted { offset: f64 },
}

impl Observable {
    pub fn class(&self) -> MonotonicityClass {
        match self {
            Observable::Identity | Observable::PositiveAffine { .. } => {
                MonotonicityClass::Aggregate
            }
            Observable::MonotoneScalar(_) | Observable::PayoffAdjusted { .. } => {
                MonotonicityClass::PayoffMonotonic
            }
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            Observable::PositiveAffine { scale, offset } => {
                if !(scale.is_finite() && offset.is_finite() && *scale > 0.0) {
                    return Err(Error::InvalidArgument(
                        "affine observable needs a finite positive scale".into(),
                    ));
                }
            }
            Observable::PayoffAdjusted { offset } if !offset.is_finite() => {
                return Err(Error::InvalidArgument(
                    "payoff-adjusted observable needs a finite offset".into(),
                ));
            }
            _ => {}
        }
        Ok(())
    }

    /// Parses an observable id as used on the command line:
    /// `identity`, `affine:SCALE,OFFSET`, `tanh`, `cubic`,
    /// `payoff-adjusted:OFFSET` (offset defaults to 0).
    pub fn from_id(id: &str) -> Result<Observable> {
        let (head, arg) = match id.split_once(':') {
            Some((h, a)) => (h, Some(a)),
            None => (id, None),
        };
        let obs = match (head, arg) {
            ("identity", None) => Observable::Identity,
            ("tanh", None) => Observable::MonotoneScalar(ScalarKind::Tanh),
            ("cubic", None) => Observable::MonotoneScalar(ScalarKind::CubicPlusLinear),
            ("affine", Some(a)) => {
                let (s, o) = a.split_once(',').ok_or_else(|| {
                    Error::Parse(format!("affine observable wants SCALE,OFFSET, got {a:?}"))
                })?;
                let scale = parse_num(s)?;
                let offset = parse_num(o)?;
                Observable::PositiveAffine { scale, offset }
            }
            ("payoff-adjusted", arg) => {
                let offset = match arg {
                    Some(a) => parse_num(a)?,
                    None => 0.0,
                };
                Observable::PayoffAdjusted { offset }
            }
            _ => {
                return Err(Error::Parse(format!("unknown observable id {id:?}")));
            }
        };
        obs.validate()?;
        Ok(obs)
    }

    /// The transformed per-action values at profile `x`, given the
    /// per-action payoff table for the same profile.
    pub fn values(&self, x: &MixedProfile, table: &[Vec<f64>]) -> Result<Vec<Vec<f64>>> {
        match self {
            Observable::Identity => Ok(table.to_vec()),
            Observable::PositiveAffine { scale, offset } => Ok(table
                .iter()
                .map(|row| row.iter().map(|u| scale * u + offset).collect())
                .collect()),
            Observable::MonotoneScalar(kind) => Ok(table
                .iter()
                .map(|row| row.iter().map(|&u| kind.apply(u)).collect())
                .collect()),
            Observable::PayoffAdjusted { offset } => {
                let mut out = Vec::with_capacity(table.len());
                for (k, row) in table.iter().enumerate() {
                    let mean: f64 = row
                        .iter()
                        .zip(x.weights(k))
                        .map(|(u, w)| u * w)
                        .sum();
                    let denom = mean + offset;
                    if denom <= 0.0 {
                        return Err(Error::Domain(format!(
                            "payoff-adjusted observable hit a non-positive mean \
                             ({denom:.6}) for player {k}; raise the offset"
                        )));
                    }
                    out.push(row.iter().map(|u| (u + offset) / denom).collect());
                }
                Ok(out)
            }
        }
    }
}

fn parse_num(s: &str) -> Result<f64> {
    s.trim()
        .parse::<f64>()
        .map_err(|_| Error::Parse(format!("expected a number, got {s:?}")))
}
