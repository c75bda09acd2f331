//! Post-processing for integrated trajectories: Kullback-Leibler curves
//! against reference strategies, power-law rate fits for extinction and
//! convergence, limit classification against the game's equilibrium
//! predicates, and a finite-difference divergence estimator for checking
//! that the score fields are volume preserving.

use crate::dynamics::VectorField;
use crate::error::Error;
use crate::Result;
use crate::game::{Game, MixedProfile};
use crate::integrator::Trajectory;

/// Minimum number of samples a fit window must contain.
const MIN_FIT_SAMPLES: usize = 8;

/// Relative slack used to detect a saturated (numerically constant) tail.
const PLATEAU_RTOL: f64 = 1e-6;

/// Kullback-Leibler divergence of `x` from `q`, with the convention
/// 0·log 0 = 0. Returns `f64::INFINITY` when `x` puts zero mass on a point
/// of `q`'s support.
pub fn kl_divergence(q: &[f64], x: &[f64]) -> f64 {
    let mut d = 0.0;
    for (qa, xa) in q.iter().zip(x) {
        if *qa > 0.0 {
            if *xa <= 0.0 {
                return f64::INFINITY;
            }
            d += qa * (qa / xa).ln();
        }
    }
    d
}

/// Result of a power-law fit D(t) ≈ a·t^p over a tail window.
///
/// `exponent_estimate` is the free slope of log D against log t;
/// `coefficient_estimate` is the least-squares b in D ≈ b·t^p/p! with p
/// pinned to the order the caller asked about. `residual` is the RMS of
/// the log-log fit.
#[derive(Debug, Clone)]
pub struct RateFit {
    pub exponent_estimate: f64,
    pub coefficient_estimate: f64,
    pub window: (f64, f64),
    pub residual: f64,
    pub samples: usize,
}

/// How a trajectory's limit relates to the game's equilibria.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LimitClass {
    StrictNash,
    Nash,
    RestrictedEqOnly,
    NotStationary,
}

/// Outcome of [`classify_limit`].
#[derive(Debug, Clone)]
pub struct LimitReport {
    pub converged: bool,
    pub limit: Option<MixedProfile>,
    pub classification: LimitClass,
    /// Whether the distance to the final state was nonincreasing over the
    /// inspection window.
    pub tail_decreasing: bool,
}

/// Per-sample divergence D(t) = −log x_{k,α}(t) of the pure strategy α of
/// player k along the trajectory. Entries are `(t, D)`; D is infinite
/// where the share has underflowed to zero.
pub fn divergence_series(traj: &Trajectory, player: usize, action: usize) -> Vec<(f64, f64)> {
    traj.times
        .iter()
        .zip(&traj.profiles)
        .map(|(t, x)| {
            let share = x.weights(player)[action];
            let d = if share > 0.0 { -share.ln() } else { f64::INFINITY };
            (*t, d)
        })
        .collect()
}

/// Drops non-finite samples and a trailing numerically-constant plateau
/// (a clamped score pins the share, and fitting the flat stretch would
/// bias the exponent low).
fn usable_samples(series: &[(f64, f64)]) -> Vec<(f64, f64)> {
    let finite: Vec<(f64, f64)> = series
        .iter()
        .copied()
        .take_while(|(_, d)| d.is_finite())
        .collect();
    if finite.len() < 2 {
        return finite;
    }
    let (_, last) = finite[finite.len() - 1];
    let slack = PLATEAU_RTOL * last.abs().max(1.0);
    let mut start = finite.len() - 1;
    while start > 0 && (finite[start - 1].1 - last).abs() <= slack {
        start -= 1;
    }
    if start + 1 < finite.len() {
        finite[..=start].to_vec()
    } else {
        finite
    }
}

fn window_slice(series: &[(f64, f64)], lo: f64, hi: f64) -> Vec<(f64, f64)> {
    series
        .iter()
        .copied()
        .filter(|(t, _)| *t >= lo && *t <= hi)
        .collect()
}

/// Least-squares line through (log t, log D); returns (slope, rms residual).
fn loglog_slope(points: &[(f64, f64)]) -> (f64, f64) {
    let n = points.len() as f64;
    let (mut sx, mut sy, mut sxx, mut sxy) = (0.0, 0.0, 0.0, 0.0);
    for (t, d) in points {
        let (lx, ly) = (t.ln(), d.ln());
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    let denom = n * sxx - sx * sx;
    let slope = (n * sxy - sx * sy) / denom;
    let intercept = (sy - slope * sx) / n;
    let mut rss = 0.0;
    for (t, d) in points {
        let r = d.ln() - (intercept + slope * t.ln());
        rss += r * r;
    }
    (slope, (rss / n).sqrt())
}

fn factorial(k: usize) -> f64 {
    (1..=k).map(|r| r as f64).product()
}

/// Fits D ≈ b·t^p/p! with p fixed; returns b.
fn pinned_coefficient(points: &[(f64, f64)], p: usize) -> f64 {
    let (mut num, mut den) = (0.0, 0.0);
    for (t, d) in points {
        let tp = t.powi(p as i32);
        num += d * tp;
        den += tp * tp;
    }
    factorial(p) * num / den
}

fn fit_window(
    series: &[(f64, f64)],
    t_end: f64,
    window: Option<(f64, f64)>,
) -> Result<Vec<(f64, f64)>> {
    let usable = usable_samples(series);
    if usable.len() < MIN_FIT_SAMPLES {
        return Err(Error::Analysis(format!(
            "only {} usable samples before saturation",
            usable.len()
        )));
    }
    let (lo, hi) = window.unwrap_or((0.5 * t_end, t_end));
    let mut tail = window_slice(&usable, lo, hi);
    if tail.len() < MIN_FIT_SAMPLES {
        // The requested window is swallowed by saturation; fall back to the
        // tail of what remains usable.
        let t_last = usable[usable.len() - 1].0;
        tail = window_slice(&usable, 0.5 * t_last, t_last);
    }
    let tail: Vec<(f64, f64)> = tail
        .into_iter()
        .filter(|(t, d)| *t > 0.0 && *d > 0.0)
        .collect();
    if tail.len() < MIN_FIT_SAMPLES {
        return Err(Error::Analysis(
            "fit window too small after masking".into(),
        ));
    }
    Ok(tail)
}

/// Fits the growth rate of D(t) = −log x_{k,α}(t) for a dominated pure
/// strategy α of player k on the tail window (default `[t_end/2, t_end]`).
///
/// The free exponent comes from the log-log slope; the coefficient is the
/// least-squares b in D ≈ b·t^p/p! with p pinned to `order` (strict mode)
/// or `order − 1` (weak mode). Errs when D never exceeds 10 on the window,
/// which signals that the strategy is not actually going extinct.
pub fn extinction_rate_fit(
    traj: &Trajectory,
    player: usize,
    action: usize,
    order: usize,
    weak: bool,
) -> Result<RateFit> {
    let series = divergence_series(traj, player, action);
    let tail = fit_window(&series, traj.end_time(), None)?;
    let peak = tail.iter().map(|(_, d)| *d).fold(f64::NEG_INFINITY, f64::max);
    if peak <= 10.0 {
        return Err(Error::Analysis(format!(
            "divergence only reaches {:.3} on the fit window; no extinction",
            peak
        )));
    }
    let (slope, residual) = loglog_slope(&tail);
    let pinned = if weak { order.saturating_sub(1) } else { order };
    Ok(RateFit {
        exponent_estimate: slope,
        coefficient_estimate: pinned_coefficient(&tail, pinned),
        window: (tail[0].0, tail[tail.len() - 1].0),
        residual,
        samples: tail.len(),
    })
}

/// Fits the approach rate to a strict equilibrium vertex `q`: the series
/// s(t) = Σ_k −log(off-mass of player k) should grow like c·t^n/n!.
/// The off-equilibrium mass is accumulated from the small shares directly
/// so the series stays accurate far below the 1 − x rounding floor.
pub fn strict_convergence_fit(
    traj: &Trajectory,
    q: &MixedProfile,
    order: usize,
) -> Result<RateFit> {
    let actions = q.as_vertex().ok_or_else(|| {
        Error::Analysis("convergence target must be a pure profile".into())
    })?;
    let last = traj
        .profiles
        .last()
        .ok_or_else(|| Error::Analysis("empty trajectory".into()))?;
    let gap = last.max_norm_distance(q);
    if gap > 0.05 {
        return Err(Error::Analysis(format!(
            "trajectory ends {:.4} away from the target; not converged",
            gap
        )));
    }
    let series: Vec<(f64, f64)> = traj
        .times
        .iter()
        .zip(&traj.profiles)
        .map(|(t, x)| {
            let mut s = 0.0;
            for (k, qk) in actions.iter().enumerate() {
                let off: f64 = x
                    .weights(k)
                    .iter()
                    .enumerate()
                    .filter(|(a, _)| a != qk)
                    .map(|(_, w)| *w)
                    .sum();
                s += if off > 0.0 { -off.ln() } else { f64::INFINITY };
            }
            (*t, s)
        })
        .collect();
    let tail = fit_window(&series, traj.end_time(), None)?;
    let (slope, residual) = loglog_slope(&tail);
    Ok(RateFit {
        exponent_estimate: slope,
        coefficient_estimate: pinned_coefficient(&tail, order),
        window: (tail[0].0, tail[tail.len() - 1].0),
        residual,
        samples: tail.len(),
    })
}

/// Decides whether the trajectory has settled and, if so, what its limit
/// is. Convergence is a max-norm Cauchy criterion on the sampled strategy
/// profiles over the last 10% of the run (scores diverge at vertices, so
/// the test deliberately runs in strategy space). A converged limit is
/// then ranked against the game's equilibrium predicates.
pub fn classify_limit(traj: &Trajectory, game: &Game, tol: f64) -> LimitReport {
    let t_end = traj.end_time();
    let cut = t_end - 0.1 * t_end.max(1.0);
    let window: Vec<&MixedProfile> = traj
        .times
        .iter()
        .zip(&traj.profiles)
        .filter(|(t, _)| **t >= cut)
        .map(|(_, x)| x)
        .collect();
    let last = match window.last() {
        Some(x) => (*x).clone(),
        None => {
            return LimitReport {
                converged: false,
                limit: None,
                classification: LimitClass::NotStationary,
                tail_decreasing: false,
            }
        }
    };
    let spread = window
        .iter()
        .map(|x| x.max_norm_distance(&last))
        .fold(0.0, f64::max);
    let converged = spread <= tol;
    let mut tail_decreasing = true;
    for pair in window.windows(2) {
        let d0 = pair[0].max_norm_distance(&last);
        let d1 = pair[1].max_norm_distance(&last);
        if d1 > d0 + tol {
            tail_decreasing = false;
            break;
        }
    }
    if !converged {
        return LimitReport {
            converged: false,
            limit: None,
            classification: LimitClass::NotStationary,
            tail_decreasing,
        };
    }
    let ptol = tol.max(1e-6);
    let classification = if game.is_strict_nash(&last, ptol) {
        LimitClass::StrictNash
    } else if game.is_nash(&last, ptol) {
        LimitClass::Nash
    } else if game.is_restricted_equilibrium(&last, ptol) {
        LimitClass::RestrictedEqOnly
    } else {
        LimitClass::NotStationary
    };
    let interior = traj
        .profiles
        .iter()
        .all(|x| x.all_weights().iter().all(|w| w.iter().all(|v| *v > 0.0)));
    debug_assert!(
        !(converged && interior) || game.is_nash(&last, 1e-5),
        "converged interior limit must be a Nash equilibrium"
    );
    LimitReport {
        converged,
        limit: Some(last),
        classification,
        tail_decreasing,
    }
}

/// Central-difference estimate of the trace of the field's Jacobian at
/// `state`. A volume-preserving field reports zero up to the h² floor.
pub fn field_divergence(
    field: &dyn VectorField,
    state: &[f64],
    fd_step: f64,
) -> Result<f64> {
    let dim = field.dim();
    let mut plus = vec![0.0; dim];
    let mut minus = vec![0.0; dim];
    let mut probe = state.to_vec();
    let mut trace = 0.0;
    for i in 0..dim {
        let orig = probe[i];
        probe[i] = orig + fd_step;
        field.eval(&probe, &mut plus)?;
        probe[i] = orig - fd_step;
        field.eval(&probe, &mut minus)?;
        probe[i] = orig;
        trace += (plus[i] - minus[i]) / (2.0 * fd_step);
    }
    Ok(trace)
}

/// Checks whether the trajectory leaves the max-norm `radius` ball around
/// `center` and whether the divergence of the given pure strategy is still
/// growing at the end. Returns the verdict and the first exit time.
pub fn escape_check(
    traj: &Trajectory,
    player: usize,
    action: usize,
    center: &MixedProfile,
    radius: f64,
) -> (bool, Option<f64>) {
    let mut escape_time = None;
    for (t, x) in traj.times.iter().zip(&traj.profiles) {
        if x.max_norm_distance(center) > radius {
            escape_time = Some(*t);
            break;
        }
    }
    let series = usable_samples(&divergence_series(traj, player, action));
    let growing = if series.len() >= 2 {
        let t_end = series[series.len() - 1].0;
        let probe = series
            .iter()
            .rev()
            .find(|(t, _)| *t <= 0.9 * t_end)
            .copied();
        match probe {
            Some((_, d_probe)) => series[series.len() - 1].1 > d_probe,
            None => false,
        }
    } else {
        false
    };
    (escape_time.is_some() && growing, escape_time)
}
