//! The vector fields: score cascades, their relative-score reduction, and
//! the equivalent strategy-space systems.
//!
//! Every field works on a flat state laid out level by level. A level holds
//! one row per player; within a level the rows sit back to back in player
//! order. Level 0 is the base variable (scores, relative scores, or the
//! mixed profile itself), level r its r-th time derivative. The first
//! `order - 1` blocks of the derivative just shift levels down; only the
//! top block does real work.

use crate::dynamics::gibbs::{
    gibbs, gibbs_inverse, reduced_gibbs_inverse, reduced_gibbs_scaled, Z_MAX,
};
use crate::dynamics::observable::Observable;
use crate::dynamics::remainder::log_derivative_remainder;
use crate::game::{Game, MixedProfile};
use crate::{Error, Result};

/// Strategy shares this close to the boundary stop a direct
/// strategy-space integration; the remainder terms divide by the share.
pub const X_MIN: f64 = 1e-12;

/// Orders above this are refused for direct strategy-space integration;
/// use the score-space form instead, it has no such limit.
pub const MAX_DIRECT_ORDER: usize = 4;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DynamicsKind {
    /// Cumulative score per action, mapped to the simplex by logit choice.
    ScoreSpace,
    /// Scores relative to a reference action, one coordinate fewer per
    /// player; the state the long-run theory is phrased in.
    RelativeScore,
    /// The mixed profile and its derivatives integrated directly.
    StrategySpace,
}

#[derive(Clone, Debug)]
pub struct DynamicsConfig {
    pub kind: DynamicsKind,
    /// Derivative order n of the cascade.
    pub order: usize,
    /// Per-player rationality coefficients.
    pub lambdas: Vec<f64>,
    /// Reference action per player for [`DynamicsKind::RelativeScore`].
    pub base_actions: Vec<usize>,
    pub observable: Observable,
}

impl DynamicsConfig {
    pub fn new(kind: DynamicsKind, order: usize, num_players: usize) -> Self {
        DynamicsConfig {
            kind,
            order,
            lambdas: vec![1.0; num_players],
            base_actions: vec![0; num_players],
            observable: Observable::Identity,
        }
    }

    pub fn with_uniform_lambda(mut self, lambda: f64) -> Self {
        self.lambdas = vec![lambda; self.lambdas.len()];
        self
    }

    pub fn with_lambdas(mut self, lambdas: Vec<f64>) -> Self {
        self.lambdas = lambdas;
        self
    }

    pub fn with_base_actions(mut self, base: Vec<usize>) -> Self {
        self.base_actions = base;
        self
    }

    pub fn with_observable(mut self, observable: Observable) -> Self {
        self.observable = observable;
        self
    }

    pub fn validate(&self, game: &Game) -> Result<()> {
        let players = game.num_players();
        if self.order == 0 {
            return Err(Error::InvalidArgument("order must be at least 1".into()));
        }
        if self.lambdas.len() != players {
            return Err(Error::InvalidArgument(format!(
                "{} lambdas for {} players",
                self.lambdas.len(),
                players
            )));
        }
        if self.lambdas.iter().any(|l| !l.is_finite() || *l <= 0.0) {
            return Err(Error::InvalidArgument(
                "rationality coefficients must be positive and finite".into(),
            ));
        }
        if self.kind == DynamicsKind::RelativeScore {
            if self.base_actions.len() != players {
                return Err(Error::InvalidArgument(format!(
                    "{} base actions for {} players",
                    self.base_actions.len(),
                    players
                )));
            }
            for (k, (&b, &count)) in self
                .base_actions
                .iter()
                .zip(game.action_counts())
                .enumerate()
            {
                if b >= count {
                    return Err(Error::InvalidArgument(format!(
                        "base action {b} out of range for player {k} ({count} actions)"
                    )));
                }
            }
        }
        if self.kind == DynamicsKind::StrategySpace && self.order > MAX_DIRECT_ORDER {
            return Err(Error::InvalidArgument(format!(
                "direct strategy-space form supports order <= {MAX_DIRECT_ORDER}, got {}",
                self.order
            )));
        }
        self.observable.validate()
    }
}

/// A first-order system over a flat state, with the hooks the integration
/// loop needs: an admissibility check before each step and a normalization
/// pass after it.
pub trait VectorField: Send + Sync {
    fn dim(&self) -> usize;
    fn order(&self) -> usize;
    fn game(&self) -> &Game;
    /// Writes the time derivative of `state` into `out`.
    fn eval(&self, state: &[f64], out: &mut [f64]) -> Result<()>;
    /// Rejects states a step must not start from.
    fn guard(&self, _state: &[f64]) -> Result<()> {
        Ok(())
    }
    /// In-place cleanup after an accepted step.
    fn clamp(&self, _state: &mut [f64]) {}
    /// The mixed profile the state encodes.
    fn profile(&self, state: &[f64]) -> MixedProfile;
    /// The level-0 relative score backing this action, for fields whose
    /// state carries one (reference actions have none).
    fn action_score(&self, _state: &[f64], _player: usize, _action: usize) -> Option<f64> {
        None
    }
}

pub fn build_field(game: &Game, cfg: &DynamicsConfig) -> Result<Box<dyn VectorField>> {
    Ok(match cfg.kind {
        DynamicsKind::ScoreSpace => Box::new(LdField::new(game.clone(), cfg.clone())?),
        DynamicsKind::RelativeScore => Box::new(ZdField::new(game.clone(), cfg.clone())?),
        DynamicsKind::StrategySpace => Box::new(RdField::new(game.clone(), cfg.clone())?),
    })
}

/// Row geometry shared by every level of a flat state.
#[derive(Clone, Debug)]
struct Layout {
    counts: Vec<usize>,
    offsets: Vec<usize>,
    width: usize,
}

impl Layout {
    fn new(counts: Vec<usize>) -> Self {
        let mut offsets = Vec::with_capacity(counts.len());
        let mut width = 0;
        for &c in &counts {
            offsets.push(width);
            width += c;
        }
        Layout { counts, offsets, width }
    }

    fn index(&self, level: usize, player: usize, coord: usize) -> usize {
        level * self.width + self.offsets[player] + coord
    }

    fn row<'a>(&self, state: &'a [f64], level: usize, player: usize) -> &'a [f64] {
        let start = self.index(level, player, 0);
        &state[start..start + self.counts[player]]
    }

    fn rows(&self, state: &[f64], level: usize) -> Vec<Vec<f64>> {
        (0..self.counts.len())
            .map(|k| self.row(state, level, k).to_vec())
            .collect()
    }

    fn write_rows(&self, state: &mut [f64], level: usize, rows: &[Vec<f64>]) -> Result<()> {
        if rows.len() != self.counts.len() {
            return Err(Error::InvalidArgument(format!(
                "{} rows for {} players",
                rows.len(),
                self.counts.len()
            )));
        }
        for (k, row) in rows.iter().enumerate() {
            if row.len() != self.counts[k] {
                return Err(Error::InvalidArgument(format!(
                    "row of {} values for player {k} who has {}",
                    row.len(),
                    self.counts[k]
                )));
            }
            let start = self.index(level, k, 0);
            state[start..start + row.len()].copy_from_slice(row);
        }
        Ok(())
    }

    /// Copies levels 1..order of `state` onto levels 0..order-1 of `out`.
    fn shift_levels(&self, order: usize, state: &[f64], out: &mut [f64]) {
        let w = self.width;
        out[..(order - 1) * w].copy_from_slice(&state[w..order * w]);
    }
}

fn lenient_profile(mut rows: Vec<Vec<f64>>) -> MixedProfile {
    for row in &mut rows {
        let mut sum = 0.0;
        let mut ok = true;
        for v in row.iter_mut() {
            if !v.is_finite() {
                ok = false;
                break;
            }
            if *v < 0.0 {
                *v = 0.0;
            }
            sum += *v;
        }
        if !ok || sum <= 0.0 {
            let u = 1.0 / row.len() as f64;
            row.iter_mut().for_each(|v| *v = u);
        } else {
            row.iter_mut().for_each(|v| *v /= sum);
        }
    }
    MixedProfile::new(rows).expect("cleaned rows form a profile")
}

/// Score cascade on full per-action scores: levels shift down and the top
/// level accumulates the observed payoff of each action at the profile the
/// logit map currently assigns.
pub struct LdField {
    game: Game,
    cfg: DynamicsConfig,
    layout: Layout,
}

fn check_arity(game: &Game, x0: &MixedProfile) -> Result<()> {
    let counts = game.action_counts();
    if x0.num_players() != counts.len()
        || counts
            .iter()
            .enumerate()
            .any(|(k, &c)| x0.weights(k).len() != c)
    {
        return Err(Error::InvalidArgument(
            "profile arity does not match the game".into(),
        ));
    }
    Ok(())
}

impl LdField {
    pub fn new(game: Game, cfg: DynamicsConfig) -> Result<Self> {
        if cfg.kind != DynamicsKind::ScoreSpace {
            return Err(Error::InvalidArgument(
                "score-space field built from a different kind of config".into(),
            ));
        }
        cfg.validate(&game)?;
        let layout = Layout::new(game.action_counts().to_vec());
        Ok(LdField { game, cfg, layout })
    }

    pub fn config(&self) -> &DynamicsConfig {
        &self.cfg
    }

    /// State that starts at profile `x0` with every derivative level zero.
    /// Scores are `ln(x)/lambda`, so `x0` must be interior.
    pub fn rest_state(&self, x0: &MixedProfile) -> Result<Vec<f64>> {
        check_arity(&self.game, x0)?;
        let mut state = vec![0.0; self.dim()];
        for k in 0..self.game.num_players() {
            let y = gibbs_inverse(self.cfg.lambdas[k], x0.weights(k))?;
            let start = self.layout.index(0, k, 0);
            state[start..start + y.len()].copy_from_slice(&y);
        }
        Ok(state)
    }

    pub fn level(&self, state: &[f64], level: usize) -> Vec<Vec<f64>> {
        self.layout.rows(state, level)
    }

    pub fn set_level(
        &self,
        state: &mut [f64],
        level: usize,
        rows: &[Vec<f64>],
    ) -> Result<()> {
        self.layout.write_rows(state, level, rows)
    }
}

impl VectorField for LdField {
    fn dim(&self) -> usize {
        self.cfg.order * self.layout.width
    }

    fn order(&self) -> usize {
        self.cfg.order
    }

    fn game(&self) -> &Game {
        &self.game
    }

    fn eval(&self, state: &[f64], out: &mut [f64]) -> Result<()> {
        let n = self.cfg.order;
        if n > 1 {
            self.layout.shift_levels(n, state, out);
        }
        let x = self.profile(state);
        let table = self.game.action_payoff_table(&x);
        let w = self.cfg.observable.values(&x, &table)?;
        for k in 0..self.game.num_players() {
            for (a, &wa) in w[k].iter().enumerate() {
                out[self.layout.index(n - 1, k, a)] = wa;
            }
        }
        Ok(())
    }

    fn profile(&self, state: &[f64]) -> MixedProfile {
        let rows: Vec<Vec<f64>> = (0..self.game.num_players())
            .map(|k| gibbs(self.cfg.lambdas[k], self.layout.row(state, 0, k)))
            .collect();
        MixedProfile::new(rows).expect("logit weights form a profile")
    }
}

/// The same cascade in relative scores: per player, every action's score
/// difference against a fixed reference action. One coordinate fewer per
/// player, and the level-0 coordinates saturate at `Z_MAX` instead of
/// running off to infinity.
pub struct ZdField {
    game: Game,
    cfg: DynamicsConfig,
    layout: Layout,
    /// Actions in original order with the reference action removed.
    non_base: Vec<Vec<usize>>,
}

impl ZdField {
    pub fn new(game: Game, cfg: DynamicsConfig) -> Result<Self> {
        if cfg.kind != DynamicsKind::RelativeScore {
            return Err(Error::InvalidArgument(
                "relative-score field built from a different kind of config".into(),
            ));
        }
        cfg.validate(&game)?;
        let non_base: Vec<Vec<usize>> = game
            .action_counts()
            .iter()
            .enumerate()
            .map(|(k, &c)| (0..c).filter(|&a| a != cfg.base_actions[k]).collect())
            .collect();
        let layout = Layout::new(non_base.iter().map(|v| v.len()).collect());
        Ok(ZdField { game, cfg, layout, non_base })
    }

    pub fn config(&self) -> &DynamicsConfig {
        &self.cfg
    }

    pub fn base_action(&self, player: usize) -> usize {
        self.cfg.base_actions[player]
    }

    pub fn non_base_actions(&self, player: usize) -> &[usize] {
        &self.non_base[player]
    }

    /// State at profile `x0` (interior) with all derivative levels zero.
    pub fn rest_state(&self, x0: &MixedProfile) -> Result<Vec<f64>> {
        check_arity(&self.game, x0)?;
        let mut state = vec![0.0; self.dim()];
        for k in 0..self.game.num_players() {
            let w = x0.weights(k);
            let base = self.cfg.base_actions[k];
            let mut reordered = Vec::with_capacity(w.len());
            reordered.push(w[base]);
            reordered.extend(self.non_base[k].iter().map(|&a| w[a]));
            let z = reduced_gibbs_inverse(&reordered)?;
            for (i, zi) in z.iter().enumerate() {
                state[self.layout.index(0, k, i)] = zi / self.cfg.lambdas[k];
            }
        }
        Ok(state)
    }

    pub fn level(&self, state: &[f64], level: usize) -> Vec<Vec<f64>> {
        self.layout.rows(state, level)
    }

    pub fn set_level(
        &self,
        state: &mut [f64],
        level: usize,
        rows: &[Vec<f64>],
    ) -> Result<()> {
        self.layout.write_rows(state, level, rows)
    }
}

impl VectorField for ZdField {
    fn dim(&self) -> usize {
        self.cfg.order * self.layout.width
    }

    fn order(&self) -> usize {
        self.cfg.order
    }

    fn game(&self) -> &Game {
        &self.game
    }

    fn eval(&self, state: &[f64], out: &mut [f64]) -> Result<()> {
        let n = self.cfg.order;
        if n > 1 {
            self.layout.shift_levels(n, state, out);
        }
        let x = self.profile(state);
        let table = self.game.action_payoff_table(&x);
        let w = self.cfg.observable.values(&x, &table)?;
        for k in 0..self.game.num_players() {
            let base = self.cfg.base_actions[k];
            for (i, &a) in self.non_base[k].iter().enumerate() {
                out[self.layout.index(n - 1, k, i)] = w[k][a] - w[k][base];
            }
        }
        Ok(())
    }

    fn clamp(&self, state: &mut [f64]) {
        for v in &mut state[..self.layout.width] {
            *v = v.clamp(-Z_MAX, Z_MAX);
        }
    }

    fn profile(&self, state: &[f64]) -> MixedProfile {
        let mut rows = Vec::with_capacity(self.game.num_players());
        for k in 0..self.game.num_players() {
            let z = self.layout.row(state, 0, k);
            let reduced = reduced_gibbs_scaled(self.cfg.lambdas[k], z);
            let mut row = vec![0.0; self.game.action_counts()[k]];
            row[self.cfg.base_actions[k]] = reduced[0];
            for (i, &a) in self.non_base[k].iter().enumerate() {
                row[a] = reduced[i + 1];
            }
            rows.push(row);
        }
        MixedProfile::new(rows).expect("logit weights form a profile")
    }

    fn action_score(&self, state: &[f64], player: usize, action: usize) -> Option<f64> {
        let i = self.non_base[player].iter().position(|&a| a == action)?;
        Some(state[self.layout.index(0, player, i)])
    }
}

/// The cascade pushed through the logit map: the profile and its
/// derivatives evolve directly on the simplex. The top level combines the
/// observed payoff advantage with the lower-derivative remainder of
/// `d^n log x`.
pub struct RdField {
    game: Game,
    cfg: DynamicsConfig,
    layout: Layout,
}

impl RdField {
    pub fn new(game: Game, cfg: DynamicsConfig) -> Result<Self> {
        if cfg.kind != DynamicsKind::StrategySpace {
            return Err(Error::InvalidArgument(
                "strategy-space field built from a different kind of config".into(),
            ));
        }
        cfg.validate(&game)?;
        let layout = Layout::new(game.action_counts().to_vec());
        Ok(RdField { game, cfg, layout })
    }

    pub fn config(&self) -> &DynamicsConfig {
        &self.cfg
    }

    /// State at profile `x0` with all derivative levels zero. `x0` must
    /// keep every share above the boundary cutoff.
    pub fn rest_state(&self, x0: &MixedProfile) -> Result<Vec<f64>> {
        check_arity(&self.game, x0)?;
        let mut state = vec![0.0; self.dim()];
        self.layout.write_rows(&mut state, 0, x0.all_weights())?;
        self.guard(&state)?;
        Ok(state)
    }

    pub fn level(&self, state: &[f64], level: usize) -> Vec<Vec<f64>> {
        self.layout.rows(state, level)
    }

    pub fn set_level(
        &self,
        state: &mut [f64],
        level: usize,
        rows: &[Vec<f64>],
    ) -> Result<()> {
        self.layout.write_rows(state, level, rows)
    }
}

impl VectorField for RdField {
    fn dim(&self) -> usize {
        self.cfg.order * self.layout.width
    }

    fn order(&self) -> usize {
        self.cfg.order
    }

    fn game(&self) -> &Game {
        &self.game
    }

    fn guard(&self, state: &[f64]) -> Result<()> {
        for (i, &v) in state[..self.layout.width].iter().enumerate() {
            if v < X_MIN || v.is_nan() {
                return Err(Error::Domain(format!(
                    "strategy share {v:.3e} at coordinate {i} is at the simplex \
                     boundary; the direct form needs shares above {X_MIN:.0e}"
                )));
            }
        }
        Ok(())
    }

    fn eval(&self, state: &[f64], out: &mut [f64]) -> Result<()> {
        self.guard(state)?;
        let n = self.cfg.order;
        if n > 1 {
            self.layout.shift_levels(n, state, out);
        }
        let x = self.profile(state);
        let table = self.game.action_payoff_table(&x);
        let w = self.cfg.observable.values(&x, &table)?;
        let mut stack = vec![0.0; n];
        for k in 0..self.game.num_players() {
            let count = self.layout.counts[k];
            let shares = self.layout.row(state, 0, k);
            let lambda = self.cfg.lambdas[k];

            let mut rem = vec![0.0; count];
            if n > 1 {
                for a in 0..count {
                    for (r, s) in stack.iter_mut().enumerate() {
                        *s = state[self.layout.index(r, k, a)];
                    }
                    rem[a] = log_derivative_remainder(&stack[..n]);
                }
            }
            let mut w_avg = 0.0;
            let mut rem_avg = 0.0;
            for a in 0..count {
                w_avg += shares[a] * w[k][a];
                rem_avg += shares[a] * rem[a];
            }
            for a in 0..count {
                let xa = shares[a];
                let growth = lambda * xa * (w[k][a] - w_avg);
                out[self.layout.index(n - 1, k, a)] = growth - xa * (rem[a] - rem_avg);
            }
        }
        Ok(())
    }

    fn profile(&self, state: &[f64]) -> MixedProfile {
        lenient_profile(self.layout.rows(state, 0))
    }
}

/// Aggregate-score system for the second-order cascade: the profile moves
/// by replicator selection on accumulated scores while the scores
/// accumulate current payoffs. Started from zero scores it reproduces the
/// second-order strategy-space flow with unit rationality.
pub struct Md2Field {
    game: Game,
    layout: Layout,
}

impl Md2Field {
    pub fn new(game: Game) -> Self {
        let layout = Layout::new(game.action_counts().to_vec());
        Md2Field { game, layout }
    }

    /// Profile `x0` with every accumulated score zero.
    pub fn initial_state(&self, x0: &MixedProfile) -> Result<Vec<f64>> {
        check_arity(&self.game, x0)?;
        let mut state = vec![0.0; 2 * self.layout.width];
        self.layout.write_rows(&mut state, 0, x0.all_weights())?;
        Ok(state)
    }

    pub fn shares(&self, state: &[f64]) -> Vec<Vec<f64>> {
        self.layout.rows(state, 0)
    }

    pub fn scores(&self, state: &[f64]) -> Vec<Vec<f64>> {
        self.layout.rows(state, 1)
    }
}

impl VectorField for Md2Field {
    fn dim(&self) -> usize {
        2 * self.layout.width
    }

    fn order(&self) -> usize {
        2
    }

    fn game(&self) -> &Game {
        &self.game
    }

    fn eval(&self, state: &[f64], out: &mut [f64]) -> Result<()> {
        let x = self.profile(state);
        let table = self.game.action_payoff_table(&x);
        for k in 0..self.game.num_players() {
            let count = self.layout.counts[k];
            let shares = self.layout.row(state, 0, k);
            let scores = self.layout.row(state, 1, k);
            let mut score_avg = 0.0;
            for a in 0..count {
                score_avg += shares[a] * scores[a];
            }
            for a in 0..count {
                out[self.layout.index(0, k, a)] = shares[a] * (scores[a] - score_avg);
                out[self.layout.index(1, k, a)] = table[k][a];
            }
        }
        Ok(())
    }

    fn profile(&self, state: &[f64]) -> MixedProfile {
        lenient_profile(self.layout.rows(state, 0))
    }
}
