//! Time integration of the dynamics fields, with event detection.
//!
//! Two steppers: classical fixed-step RK4 and an adaptive fifth-order
//! Dormand-Prince pair with a fourth-order error estimate. Both honor the
//! field's pre-step guard and post-step cleanup hooks, sample the solution
//! on a regular grid through cubic Hermite interpolation, and localize
//! event times by bisection on the interpolant.

use crate::dynamics::{VectorField, Z_MAX};
use crate::game::MixedProfile;
use crate::{Error, Result};

/// States with any coordinate beyond this magnitude end the run as a
/// blow-up.
const BLOW_LIMIT: f64 = 1e150;

/// Relative scores this far toward the clamp boundary count as saturated
/// for score-triggered extinction events.
pub const SCORE_EXTINCTION_LEVEL: f64 = -0.9 * Z_MAX;

const TIME_REFINE_TOL: f64 = 1e-10;

#[derive(Clone, Copy, Debug)]
pub enum Method {
    Fixed { dt: f64 },
    Adaptive { rtol: f64, atol: f64 },
}

impl Default for Method {
    fn default() -> Self {
        Method::Adaptive { rtol: 1e-8, atol: 1e-10 }
    }
}

#[derive(Clone, Debug)]
pub enum EventSpec {
    /// Fires when the action's share drops below `threshold`, or when the
    /// state carries a relative score for the action and that score falls
    /// to [`SCORE_EXTINCTION_LEVEL`].
    Extinction {
        player: usize,
        action: usize,
        threshold: f64,
        halt: bool,
    },
    /// Fires once the profile has stayed within `radius` of `target` (max
    /// norm) for a dwell time; the recorded time is the entry into the
    /// radius.
    Convergence {
        target: MixedProfile,
        radius: f64,
        dwell: f64,
        halt: bool,
    },
}

#[derive(Clone, Debug)]
pub enum EventKind {
    Extinction {
        player: usize,
        action: usize,
        threshold: f64,
        via_score: bool,
    },
    Convergence {
        radius: f64,
        dwell: f64,
    },
}

#[derive(Clone, Debug)]
pub struct EventRecord {
    pub time: f64,
    pub kind: EventKind,
    pub state: Vec<f64>,
}

#[derive(Clone, Debug)]
pub struct IntegrationConfig {
    pub t_end: f64,
    pub method: Method,
    /// Spacing of the recorded samples; `None` records every accepted
    /// step.
    pub sample_every: Option<f64>,
    pub events: Vec<EventSpec>,
    pub max_steps: usize,
}

impl IntegrationConfig {
    pub fn to_time(t_end: f64) -> Self {
        IntegrationConfig {
            t_end,
            method: Method::default(),
            sample_every: None,
            events: Vec::new(),
            max_steps: 2_000_000,
        }
    }

    pub fn with_method(mut self, method: Method) -> Self {
        self.method = method;
        self
    }

    pub fn sampled_every(mut self, dt: f64) -> Self {
        self.sample_every = Some(dt);
        self
    }

    pub fn with_events(mut self, events: Vec<EventSpec>) -> Self {
        self.events = events;
        self
    }
}

#[derive(Clone, Debug, Default)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<Vec<f64>>,
    pub profiles: Vec<MixedProfile>,
    pub events: Vec<EventRecord>,
    pub steps: usize,
    pub rejected: usize,
}

impl Trajectory {
    pub fn end_time(&self) -> f64 {
        *self.times.last().expect("a trajectory has samples")
    }

    pub fn end_profile(&self) -> &MixedProfile {
        self.profiles.last().expect("a trajectory has samples")
    }

    pub fn end_state(&self) -> &[f64] {
        self.states.last().expect("a trajectory has samples")
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }
}

pub fn integrate(
    field: &dyn VectorField,
    state0: Vec<f64>,
    cfg: &IntegrationConfig,
) -> Result<Trajectory> {
    if cfg.t_end < 0.0 || !cfg.t_end.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "end time {} is not a finite nonnegative number",
            cfg.t_end
        )));
    }
    if state0.len() != field.dim() {
        return Err(Error::InvalidArgument(format!(
            "state of length {} for a field of dimension {}",
            state0.len(),
            field.dim()
        )));
    }
    if let Some(dt) = cfg.sample_every {
        if dt <= 0.0 || dt.is_nan() {
            return Err(Error::InvalidArgument(
                "sample spacing must be positive".into(),
            ));
        }
    }
    match cfg.method {
        Method::Fixed { dt } if !(dt > 0.0 && dt.is_finite()) => {
            return Err(Error::InvalidArgument("step size must be positive".into()));
        }
        Method::Adaptive { rtol, atol } if !(rtol > 0.0 && atol > 0.0) => {
            return Err(Error::InvalidArgument("tolerances must be positive".into()));
        }
        _ => {}
    }
    Run::new(field, state0, cfg)?.solve()
}

struct Watcher {
    spec: EventSpec,
    /// For the dwell logic: when the profile last entered the radius, and
    /// the state at that moment.
    inside_since: Option<(f64, Vec<f64>)>,
    done: bool,
}

struct Run<'a> {
    field: &'a dyn VectorField,
    cfg: &'a IntegrationConfig,
    t: f64,
    y: Vec<f64>,
    f: Vec<f64>,
    traj: Trajectory,
    watchers: Vec<Watcher>,
    next_sample: f64,
    /// Set when a halting event truncates the run.
    halted: bool,
}

impl<'a> Run<'a> {
    fn new(
        field: &'a dyn VectorField,
        mut y: Vec<f64>,
        cfg: &'a IntegrationConfig,
    ) -> Result<Self> {
        field.guard(&y)?;
        field.clamp(&mut y);
        let mut f = vec![0.0; y.len()];
        field.eval(&y, &mut f)?;
        let watchers = cfg
            .events
            .iter()
            .map(|spec| Watcher {
                spec: spec.clone(),
                inside_since: None,
                done: false,
            })
            .collect();
        Ok(Run {
            field,
            cfg,
            t: 0.0,
            y,
            f,
            traj: Trajectory {
                times: Vec::new(),
                states: Vec::new(),
                profiles: Vec::new(),
                events: Vec::new(),
                steps: 0,
                rejected: 0,
            },
            watchers,
            next_sample: 0.0,
            halted: false,
        })
    }

    fn solve(mut self) -> Result<Trajectory> {
        self.record(0.0, self.y.clone());
        self.prime_watchers();
        if self.cfg.t_end == 0.0 || self.halted {
            return Ok(self.traj);
        }
        match self.cfg.method {
            Method::Fixed { dt } => self.run_fixed(dt)?,
            Method::Adaptive { rtol, atol } => self.run_adaptive(rtol, atol)?,
        }
        Ok(self.traj)
    }

    fn record(&mut self, t: f64, state: Vec<f64>) {
        self.traj.times.push(t);
        self.traj.profiles.push(self.field.profile(&state));
        self.traj.states.push(state);
        if let Some(dt) = self.cfg.sample_every {
            self.next_sample = t + dt;
        }
    }

    /// Events that are already in their fired region at t = 0.
    fn prime_watchers(&mut self) {
        let y0 = self.y.clone();
        for i in 0..self.watchers.len() {
            if self.watchers[i].done {
                continue;
            }
            match self.watchers[i].spec.clone() {
                EventSpec::Extinction { player, action, threshold, halt } => {
                    let (crossed, via_score) = self.extinction_value(&y0, player, action, threshold);
                    if crossed < 0.0 {
                        self.fire(
                            i,
                            0.0,
                            y0.clone(),
                            EventKind::Extinction { player, action, threshold, via_score },
                            halt,
                        );
                    }
                }
                EventSpec::Convergence { target, radius, .. } => {
                    let d = self.field.profile(&y0).max_norm_distance(&target);
                    if d < radius {
                        self.watchers[i].inside_since = Some((0.0, y0.clone()));
                    }
                }
            }
        }
    }

    /// Signed distance to the extinction set: negative once fired. The
    /// flag says whether the score criterion is the one that fired.
    fn extinction_value(
        &self,
        state: &[f64],
        player: usize,
        action: usize,
        threshold: f64,
    ) -> (f64, bool) {
        let share = self.field.profile(state).weights(player)[action] - threshold;
        if let Some(z) = self.field.action_score(state, player, action) {
            let score = z - SCORE_EXTINCTION_LEVEL;
            if score < share {
                return (score, true);
            }
        }
        (share, false)
    }

    fn fire(&mut self, watcher: usize, time: f64, state: Vec<f64>, kind: EventKind, halt: bool) {
        self.watchers[watcher].done = true;
        self.traj.events.push(EventRecord { time, kind, state });
        if halt {
            self.halted = true;
        }
    }

    fn run_fixed(&mut self, dt: f64) -> Result<()> {
        let mut k = [
            vec![0.0; self.y.len()],
            vec![0.0; self.y.len()],
            vec![0.0; self.y.len()],
            vec![0.0; self.y.len()],
        ];
        let mut tmp = vec![0.0; self.y.len()];
        while self.t < self.cfg.t_end && !self.halted {
            if self.traj.steps >= self.cfg.max_steps {
                return Err(self.truncated());
            }
            let h = dt.min(self.cfg.t_end - self.t);
            self.field.guard(&self.y)?;
            k[0].copy_from_slice(&self.f);
            for (stage, frac) in [(1, 0.5), (2, 0.5), (3, 1.0)] {
                for i in 0..self.y.len() {
                    tmp[i] = self.y[i] + h * frac * k[stage - 1][i];
                }
                let (a, b) = k.split_at_mut(stage);
                let _ = a;
                self.field.eval(&tmp, &mut b[0])?;
            }
            let mut y_pre = self.y.clone();
            for i in 0..y_pre.len() {
                y_pre[i] +=
                    h / 6.0 * (k[0][i] + 2.0 * k[1][i] + 2.0 * k[2][i] + k[3][i]);
            }
            self.check_finite(&y_pre)?;
            let mut f_pre = vec![0.0; self.y.len()];
            self.field.eval(&y_pre, &mut f_pre)?;
            let mut y_post = y_pre.clone();
            self.field.clamp(&mut y_post);
            let f_post = if y_post == y_pre {
                f_pre.clone()
            } else {
                let mut f = vec![0.0; self.y.len()];
                self.field.eval(&y_post, &mut f)?;
                f
            };
            self.accept(h, y_pre, f_pre, y_post, f_post)?;
            self.traj.steps += 1;
        }
        Ok(())
    }

    fn run_adaptive(&mut self, rtol: f64, atol: f64) -> Result<()> {
        // Dormand-Prince 5(4) coefficients; the fields are autonomous, so
        // the stage times never appear.
        const A: [&[f64]; 6] = [
            &[1.0 / 5.0],
            &[3.0 / 40.0, 9.0 / 40.0],
            &[44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0],
            &[19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0],
            &[
                9017.0 / 3168.0,
                -355.0 / 33.0,
                46732.0 / 5247.0,
                49.0 / 176.0,
                -5103.0 / 18656.0,
            ],
            &[
                35.0 / 384.0,
                0.0,
                500.0 / 1113.0,
                125.0 / 192.0,
                -2187.0 / 6784.0,
                11.0 / 84.0,
            ],
        ];
        const B4: [f64; 7] = [
            5179.0 / 57600.0,
            0.0,
            7571.0 / 16695.0,
            393.0 / 640.0,
            -92097.0 / 339200.0,
            187.0 / 2100.0,
            1.0 / 40.0,
        ];
        let dim = self.y.len();
        let mut k: Vec<Vec<f64>> = (0..7).map(|_| vec![0.0; dim]).collect();
        let mut tmp = vec![0.0; dim];
        let mut h = self.initial_step(rtol, atol);
        while self.t < self.cfg.t_end && !self.halted {
            if self.traj.steps + self.traj.rejected >= self.cfg.max_steps {
                return Err(self.truncated());
            }
            h = h.min(self.cfg.t_end - self.t);
            if h < 1e-14 * self.t.abs().max(1.0) {
                return Err(Error::Domain(format!(
                    "step size collapsed to {h:.3e} at t = {:.6}",
                    self.t
                )));
            }
            self.field.guard(&self.y)?;
            k[0].copy_from_slice(&self.f);
            for (s, row) in A.iter().enumerate() {
                for i in 0..dim {
                    let mut acc = 0.0;
                    for (j, &a) in row.iter().enumerate() {
                        acc += a * k[j][i];
                    }
                    tmp[i] = self.y[i] + h * acc;
                }
                let (_, rest) = k.split_at_mut(s + 1);
                self.field.eval(&tmp, &mut rest[0])?;
            }
            // The sixth stage value is the fifth-order solution.
            let mut y5 = vec![0.0; dim];
            for i in 0..dim {
                let mut acc = 0.0;
                for (j, &a) in A[5].iter().enumerate() {
                    acc += a * k[j][i];
                }
                y5[i] = self.y[i] + h * acc;
            }
            let mut err = 0.0;
            for i in 0..dim {
                let mut acc4 = 0.0;
                for (j, &b) in B4.iter().enumerate() {
                    acc4 += b * k[j][i];
                }
                let y4 = self.y[i] + h * acc4;
                let sc = atol + rtol * self.y[i].abs().max(y5[i].abs());
                let e = (y5[i] - y4) / sc;
                err += e * e;
            }
            err = (err / dim as f64).sqrt();
            if err <= 1.0 {
                self.check_finite(&y5)?;
                let f_pre = k[6].clone();
                let mut y_post = y5.clone();
                self.field.clamp(&mut y_post);
                let f_post = if y_post == y5 {
                    f_pre.clone()
                } else {
                    let mut f = vec![0.0; dim];
                    self.field.eval(&y_post, &mut f)?;
                    f
                };
                self.accept(h, y5, f_pre, y_post, f_post)?;
                self.traj.steps += 1;
                let grow = 0.9 * err.max(1e-10).powf(-0.2);
                h *= grow.clamp(0.2, 5.0);
            } else {
                self.traj.rejected += 1;
                h *= (0.9 * err.powf(-0.2)).clamp(0.2, 1.0);
            }
        }
        Ok(())
    }

    fn initial_step(&self, rtol: f64, atol: f64) -> f64 {
        let mut d0 = 0.0;
        let mut d1 = 0.0;
        for i in 0..self.y.len() {
            let sc = atol + rtol * self.y[i].abs();
            d0 += (self.y[i] / sc).powi(2);
            d1 += (self.f[i] / sc).powi(2);
        }
        let (d0, d1) = (d0.sqrt(), d1.sqrt());
        let h = if d0 > 1e-8 && d1 > 1e-8 { 0.01 * d0 / d1 } else { 1e-3 };
        h.clamp(1e-8, 1e-1).min(self.cfg.t_end)
    }

    fn check_finite(&mut self, y: &[f64]) -> Result<()> {
        for (i, &v) in y.iter().enumerate() {
            if !v.is_finite() || v.abs() > BLOW_LIMIT {
                return Err(Error::Blowup {
                    t: self.t,
                    index: i,
                    partial: Box::new(std::mem::take(&mut self.traj)),
                });
            }
        }
        Ok(())
    }

    fn truncated(&mut self) -> Error {
        Error::Truncated {
            steps: self.traj.steps + self.traj.rejected,
            t: self.t,
            partial: Box::new(std::mem::take(&mut self.traj)),
        }
    }

    /// Books an accepted step: dense samples, event checks, and the state
    /// hand-over. `y_pre`/`f_pre` are the unclamped solution and its
    /// derivative (the Hermite segment interpolates the honest flow),
    /// `y_post`/`f_post` the cleaned-up state the run continues from.
    fn accept(
        &mut self,
        h: f64,
        y_pre: Vec<f64>,
        f_pre: Vec<f64>,
        y_post: Vec<f64>,
        f_post: Vec<f64>,
    ) -> Result<()> {
        let t0 = self.t;
        let t1 = t0 + h;
        let seg = Segment {
            t0,
            h,
            y0: self.y.clone(),
            f0: self.f.clone(),
            y1: y_pre,
            f1: f_pre,
        };

        let mut halt_at: Option<(f64, Vec<f64>)> = None;
        for i in 0..self.watchers.len() {
            if self.watchers[i].done {
                continue;
            }
            match self.watchers[i].spec.clone() {
                EventSpec::Extinction { player, action, threshold, halt } => {
                    let (end_val, _) = self.extinction_value(&y_post, player, action, threshold);
                    if end_val >= 0.0 {
                        continue;
                    }
                    let te = seg.bisect(|state| {
                        self.extinction_value(state, player, action, threshold).0
                    });
                    let mut state = seg.at(te);
                    self.field.clamp(&mut state);
                    let (_, via_score) =
                        self.extinction_value(&state, player, action, threshold);
                    self.fire(
                        i,
                        te,
                        state.clone(),
                        EventKind::Extinction { player, action, threshold, via_score },
                        halt,
                    );
                    if halt && halt_at.as_ref().map_or(true, |(t, _)| te < *t) {
                        halt_at = Some((te, state));
                    }
                }
                EventSpec::Convergence { target, radius, dwell, halt } => {
                    let d = self.field.profile(&y_post).max_norm_distance(&target);
                    if d < radius {
                        if self.watchers[i].inside_since.is_none() {
                            let d0 = self.field.profile(&self.y).max_norm_distance(&target);
                            let (entry, entry_state) = if d0 < radius {
                                (t0, self.y.clone())
                            } else {
                                let entry = seg.bisect(|state| {
                                    self.field.profile(state).max_norm_distance(&target)
                                        - radius
                                });
                                let mut state = seg.at(entry);
                                self.field.clamp(&mut state);
                                (entry, state)
                            };
                            self.watchers[i].inside_since = Some((entry, entry_state));
                        }
                        let (entry, entry_state) =
                            self.watchers[i].inside_since.clone().unwrap();
                        if t1 - entry >= dwell {
                            self.fire(
                                i,
                                entry,
                                entry_state,
                                EventKind::Convergence { radius, dwell },
                                halt,
                            );
                            if halt && halt_at.as_ref().map_or(true, |(t, _)| t1 < *t) {
                                halt_at = Some((t1, y_post.clone()));
                            }
                        }
                    } else {
                        self.watchers[i].inside_since = None;
                    }
                }
            }
        }

        let (t_stop, y_stop, f_stop) = match halt_at {
            Some((te, state)) => {
                let mut f = vec![0.0; state.len()];
                self.field.eval(&state, &mut f)?;
                (te, state, f)
            }
            None => (t1, y_post, f_post),
        };

        if let Some(ds) = self.cfg.sample_every {
            while self.next_sample <= t_stop + 1e-12 * t_stop.abs().max(1.0) {
                let ts = self.next_sample;
                let s = if ts >= t_stop {
                    y_stop.clone()
                } else {
                    let mut s = seg.at(ts);
                    self.field.clamp(&mut s);
                    s
                };
                self.traj.times.push(ts.min(t_stop));
                self.traj.profiles.push(self.field.profile(&s));
                self.traj.states.push(s);
                self.next_sample = ts + ds;
            }
        } else {
            self.traj.times.push(t_stop);
            self.traj.profiles.push(self.field.profile(&y_stop));
            self.traj.states.push(y_stop.clone());
        }

        self.t = t_stop;
        self.y = y_stop;
        self.f = f_stop;

        // A run that ends here should end exactly on its last sample.
        if (self.halted || self.t >= self.cfg.t_end) && self.traj.times.last() != Some(&self.t) {
            self.traj.times.push(self.t);
            self.traj.profiles.push(self.field.profile(&self.y));
            self.traj.states.push(self.y.clone());
        }
        Ok(())
    }
}

/// One accepted step with endpoint derivatives; cubic Hermite in between.
struct Segment {
    t0: f64,
    h: f64,
    y0: Vec<f64>,
    f0: Vec<f64>,
    y1: Vec<f64>,
    f1: Vec<f64>,
}

impl Segment {
    fn at(&self, t: f64) -> Vec<f64> {
        let th = ((t - self.t0) / self.h).clamp(0.0, 1.0);
        let t2 = th * th;
        let t3 = t2 * th;
        let h00 = 2.0 * t3 - 3.0 * t2 + 1.0;
        let h10 = t3 - 2.0 * t2 + th;
        let h01 = -2.0 * t3 + 3.0 * t2;
        let h11 = t3 - t2;
        (0..self.y0.len())
            .map(|i| {
                h00 * self.y0[i]
                    + h10 * self.h * self.f0[i]
                    + h01 * self.y1[i]
                    + h11 * self.h * self.f1[i]
            })
            .collect()
    }

    /// First time in the step at which `value` turns negative, assuming it
    /// is nonnegative at the left end.
    fn bisect(&self, value: impl Fn(&[f64]) -> f64) -> f64 {
        let mut lo = self.t0;
        let mut hi = self.t0 + self.h;
        while hi - lo > TIME_REFINE_TOL {
            let mid = 0.5 * (lo + hi);
            if value(&self.at(mid)) < 0.0 {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        hi
    }
}
