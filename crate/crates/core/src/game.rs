//! Finite normal-form games as dense payoff tensors.
//!
//! A game with players k = 1..N and action sets A_k is stored as one dense
//! rank-N tensor per player, indexed player-1-outermost. Expected payoffs are
//! multilinear in the per-player mixing weights:
//!
//! ```text
//! u_k(x) = sum over pure profiles a of u_k(a) * prod_j x_{j, a_j}
//! ```
//!
//! and the payoff to a fixed action alpha of player k against the opponents'
//! part of the profile is written `u_{k,alpha}(x)`. The identity
//! `u_k(x) = sum_alpha x_{k,alpha} u_{k,alpha}(x)` ties the two together and
//! is checked in the tests.
//!
//! Everything here is sized for desk-scale games (a handful of players, a
//! handful of actions each); evaluation enumerates pure profiles directly.

use crate::{Error, Result};

/// Tolerance on the per-player weight sum when validating a [`MixedProfile`].
pub const PROFILE_SUM_TOL: f64 = 1e-9;

/// Dense rank-N array with row-major layout (last axis fastest).
#[derive(Clone, Debug, PartialEq)]
pub struct Tensor {
    shape: Vec<usize>,
    strides: Vec<usize>,
    data: Vec<f64>,
}

impl Tensor {
    /// Builds a tensor from a flat row-major buffer.
    pub fn from_flat(shape: Vec<usize>, data: Vec<f64>) -> Result<Self> {
        let len: usize = shape.iter().product();
        if shape.is_empty() || shape.contains(&0) {
            return Err(Error::BadGame(format!("degenerate tensor shape {shape:?}")));
        }
        if data.len() != len {
            return Err(Error::BadGame(format!(
                "tensor data length {} does not match shape {shape:?}",
                data.len()
            )));
        }
        if let Some(bad) = data.iter().find(|v| !v.is_finite()) {
            return Err(Error::BadGame(format!("non-finite payoff entry {bad}")));
        }
        let strides = row_major_strides(&shape);
        Ok(Self { shape, strides, data })
    }

    /// Tensor with every entry equal to `value`.
    pub fn filled(shape: Vec<usize>, value: f64) -> Result<Self> {
        let len = shape.iter().product();
        Self::from_flat(shape, vec![value; len])
    }

    pub fn shape(&self) -> &[usize] {
        &self.shape
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    fn flat_index(&self, idx: &[usize]) -> usize {
        debug_assert_eq!(idx.len(), self.shape.len());
        idx.iter().zip(&self.strides).map(|(i, s)| i * s).sum()
    }

    /// Entry at a full multi-index.
    pub fn at(&self, idx: &[usize]) -> f64 {
        self.data[self.flat_index(idx)]
    }
}

fn row_major_strides(shape: &[usize]) -> Vec<usize> {
    let mut strides = vec![1usize; shape.len()];
    for i in (0..shape.len().saturating_sub(1)).rev() {
        strides[i] = strides[i + 1] * shape[i + 1];
    }
    strides
}

/// Calls `f` once per multi-index in row-major order (last slot fastest).
fn for_each_index(radices: &[usize], mut f: impl FnMut(&[usize])) {
    if radices.contains(&0) {
        return;
    }
    let mut idx = vec![0usize; radices.len()];
    loop {
        f(&idx);
        let mut j = radices.len();
        loop {
            if j == 0 {
                return;
            }
            j -= 1;
            idx[j] += 1;
            if idx[j] < radices[j] {
                break;
            }
            idx[j] = 0;
        }
    }
}

/// A finite N-player normal-form game.
#[derive(Clone, Debug, PartialEq)]
pub struct Game {
    payoffs: Vec<Tensor>,
    labels: Option<Vec<Vec<String>>>,
}

impl Game {
    /// Builds a game from one payoff tensor per player. All tensors must share
    /// the same shape, and the number of tensors must equal the tensor rank.
    pub fn new(payoffs: Vec<Tensor>) -> Result<Self> {
        if payoffs.is_empty() {
            return Err(Error::BadGame("no players".into()));
        }
        let shape = payoffs[0].shape().to_vec();
        if shape.len() != payoffs.len() {
            return Err(Error::BadGame(format!(
                "{} payoff tensors of rank {}; expected one rank-N tensor per player",
                payoffs.len(),
                shape.len()
            )));
        }
        for (k, t) in payoffs.iter().enumerate() {
            if t.shape() != shape {
                return Err(Error::BadGame(format!(
                    "player {} tensor shape {:?} differs from {:?}",
                    k + 1,
                    t.shape(),
                    shape
                )));
            }
        }
        Ok(Self { payoffs, labels: None })
    }

    /// Attaches per-player action labels (checked against the shape).
    pub fn with_labels(mut self, labels: Vec<Vec<String>>) -> Result<Self> {
        if labels.len() != self.num_players()
            || labels
                .iter()
                .zip(self.action_counts())
                .any(|(l, n)| l.len() != *n)
        {
            return Err(Error::BadGame("label arity does not match action counts".into()));
        }
        self.labels = Some(labels);
        Ok(self)
    }

    /// Two-player convenience constructor; both tables are indexed
    /// `[player 1 action][player 2 action]`.
    pub fn two_player(u1: Vec<Vec<f64>>, u2: Vec<Vec<f64>>) -> Result<Self> {
        let rows = u1.len();
        let cols = u1.first().map_or(0, Vec::len);
        let flatten = |table: Vec<Vec<f64>>, rows: usize, cols: usize| -> Result<Tensor> {
            if table.len() != rows || table.iter().any(|r| r.len() != cols) {
                return Err(Error::BadGame("ragged payoff table".into()));
            }
            Tensor::from_flat(vec![rows, cols], table.into_iter().flatten().collect())
        };
        Game::new(vec![flatten(u1, rows, cols)?, flatten(u2, rows, cols)?])
    }

    pub fn num_players(&self) -> usize {
        self.payoffs.len()
    }

    pub fn action_counts(&self) -> &[usize] {
        self.payoffs[0].shape()
    }

    pub fn payoff_tensor(&self, k: usize) -> &Tensor {
        &self.payoffs[k]
    }

    pub fn labels(&self) -> Option<&[Vec<String>]> {
        self.labels.as_deref()
    }

    /// Label of an action if present, otherwise its index as text.
    pub fn action_label(&self, player: usize, action: usize) -> String {
        match &self.labels {
            Some(l) => l[player][action].clone(),
            None => action.to_string(),
        }
    }

    /// Payoff to player `k` at a pure profile.
    pub fn pure_payoff(&self, k: usize, profile: &[usize]) -> f64 {
        self.payoffs[k].at(profile)
    }

    /// Expected payoff `u_k(x)`, multilinear in the mixing weights.
    pub fn expected_payoff(&self, k: usize, x: &MixedProfile) -> f64 {
        let mut total = 0.0;
        for_each_index(self.action_counts(), |a| {
            let w: f64 = a
                .iter()
                .enumerate()
                .map(|(j, &aj)| x.weights(j)[aj])
                .product();
            if w != 0.0 {
                total += w * self.payoffs[k].at(a);
            }
        });
        total
    }

    /// Payoff `u_{k,alpha}(x)` to action `alpha` of player `k` against the
    /// opponents' part of `x` (the weight player `k` places on `alpha` is
    /// irrelevant here).
    pub fn action_payoff(&self, k: usize, alpha: usize, x: &MixedProfile) -> f64 {
        let mut radices = self.action_counts().to_vec();
        radices[k] = 1;
        let stride_k = self.payoffs[k].strides[k];
        let mut total = 0.0;
        for_each_index(&radices, |a| {
            let mut w = 1.0;
            for (j, &aj) in a.iter().enumerate() {
                if j != k {
                    w *= x.weights(j)[aj];
                }
            }
            if w != 0.0 {
                let base = self.payoffs[k].flat_index(a);
                total += w * self.payoffs[k].data[base + alpha * stride_k];
            }
        });
        total
    }

    /// All action payoffs `u_{k,alpha}(x)` in one pass; `out[k][alpha]`.
    pub fn action_payoff_table(&self, x: &MixedProfile) -> Vec<Vec<f64>> {
        let counts = self.action_counts();
        let mut out: Vec<Vec<f64>> = counts.iter().map(|&n| vec![0.0; n]).collect();
        for k in 0..self.num_players() {
            let mut radices = counts.to_vec();
            radices[k] = 1;
            let stride_k = self.payoffs[k].strides[k];
            for_each_index(&radices, |a| {
                let mut w = 1.0;
                for (j, &aj) in a.iter().enumerate() {
                    if j != k {
                        w *= x.weights(j)[aj];
                    }
                }
                if w != 0.0 {
                    let base = self.payoffs[k].flat_index(a);
                    for (alpha, slot) in out[k].iter_mut().enumerate() {
                        *slot += w * self.payoffs[k].data[base + alpha * stride_k];
                    }
                }
            });
        }
        out
    }

    /// Payoff to action `alpha` of player `k` when the opponents play the pure
    /// profile `opp` (`opp[k]` is ignored).
    pub fn action_payoff_pure(&self, k: usize, alpha: usize, opp: &[usize]) -> f64 {
        let mut idx = opp.to_vec();
        idx[k] = alpha;
        self.payoffs[k].at(&idx)
    }

    /// Runs `f` over every opponent pure profile of player `k`. The slice
    /// passed to `f` is a full profile with slot `k` pinned to 0.
    pub fn for_each_opponent_profile(&self, k: usize, mut f: impl FnMut(&[usize])) {
        let mut radices = self.action_counts().to_vec();
        radices[k] = 1;
        for_each_index(&radices, |a| f(a));
    }

    /// The game induced on a subset of actions per player.
    pub fn restrict(&self, r: &Restriction) -> Result<Game> {
        r.check_against(self.action_counts())?;
        let new_shape: Vec<usize> = r.kept.iter().map(Vec::len).collect();
        let mut new_payoffs = Vec::with_capacity(self.num_players());
        for k in 0..self.num_players() {
            let mut data = Vec::with_capacity(new_shape.iter().product());
            for_each_index(&new_shape, |a| {
                let full: Vec<usize> = a
                    .iter()
                    .enumerate()
                    .map(|(j, &aj)| r.kept[j][aj])
                    .collect();
                data.push(self.payoffs[k].at(&full));
            });
            new_payoffs.push(Tensor::from_flat(new_shape.clone(), data)?);
        }
        let mut g = Game::new(new_payoffs)?;
        if let Some(labels) = &self.labels {
            let kept_labels: Vec<Vec<String>> = labels
                .iter()
                .zip(&r.kept)
                .map(|(l, keep)| keep.iter().map(|&a| l[a].clone()).collect())
                .collect();
            g = g.with_labels(kept_labels)?;
        }
        Ok(g)
    }

    /// True when no player can gain more than `tol` by a unilateral deviation.
    pub fn is_nash(&self, x: &MixedProfile, tol: f64) -> bool {
        let table = self.action_payoff_table(x);
        (0..self.num_players()).all(|k| {
            let u_k: f64 = x.weights(k)
                .iter()
                .zip(&table[k])
                .map(|(w, u)| w * u)
                .sum();
            table[k].iter().all(|&u_alpha| u_alpha <= u_k + tol)
        })
    }

    /// True when `x` is a pure profile whose action beats every alternative by
    /// more than `tol` for each player.
    pub fn is_strict_nash(&self, x: &MixedProfile, tol: f64) -> bool {
        let Some(pure) = x.as_vertex() else {
            return false;
        };
        let table = self.action_payoff_table(x);
        (0..self.num_players()).all(|k| {
            let best = table[k][pure[k]];
            table[k]
                .iter()
                .enumerate()
                .all(|(alpha, &u)| alpha == pure[k] || best - u > tol)
        })
    }

    /// True when every action inside the support of `x` earns within `tol` of
    /// the best supported action, i.e. `x` is an equilibrium of the game
    /// restricted to its own support.
    pub fn is_restricted_equilibrium(&self, x: &MixedProfile, tol: f64) -> bool {
        let table = self.action_payoff_table(x);
        (0..self.num_players()).all(|k| {
            let supported: Vec<f64> = x.weights(k)
                .iter()
                .zip(&table[k])
                .filter(|(w, _)| **w > tol)
                .map(|(_, &u)| u)
                .collect();
            let best = supported.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
            supported.iter().all(|&u| u >= best - tol)
        })
    }

    /// Pure profiles that are strict Nash equilibria (margin > `tol`).
    pub fn strict_pure_equilibria(&self, tol: f64) -> Vec<Vec<usize>> {
        let mut found = Vec::new();
        for_each_index(self.action_counts(), |a| {
            let strict = (0..self.num_players()).all(|k| {
                let here = self.payoffs[k].at(a);
                (0..self.action_counts()[k]).all(|alpha| {
                    alpha == a[k] || here - self.action_payoff_pure(k, alpha, a) > tol
                })
            });
            if strict {
                found.push(a.to_vec());
            }
        });
        found
    }

    /// Order-independent fingerprint of the shape and payoff bits (FNV-1a).
    pub fn fingerprint(&self) -> u64 {
        let mut h: u64 = 0xcbf29ce484222325;
        let mut eat = |byte: u8| {
            h ^= byte as u64;
            h = h.wrapping_mul(0x100000001b3);
        };
        for &n in self.action_counts() {
            for b in (n as u64).to_le_bytes() {
                eat(b);
            }
        }
        for t in &self.payoffs {
            for v in &t.data {
                for b in v.to_bits().to_le_bytes() {
                    eat(b);
                }
            }
        }
        h
    }
}

/// One mixing distribution per player. Weights are non-negative and sum to 1
/// within [`PROFILE_SUM_TOL`] per player.
#[derive(Clone, Debug, PartialEq)]
pub struct MixedProfile {
    weights: Vec<Vec<f64>>,
}

impl MixedProfile {
    pub fn new(weights: Vec<Vec<f64>>) -> Result<Self> {
        for (k, w) in weights.iter().enumerate() {
            if w.is_empty() {
                return Err(Error::BadProfile(format!("player {} has no actions", k + 1)));
            }
            if let Some(bad) = w.iter().find(|v| !v.is_finite() || **v < 0.0) {
                return Err(Error::BadProfile(format!(
                    "player {} weight {bad} is negative or non-finite",
                    k + 1
                )));
            }
            let sum: f64 = w.iter().sum();
            if (sum - 1.0).abs() > PROFILE_SUM_TOL {
                return Err(Error::BadProfile(format!(
                    "player {} weights sum to {sum}, expected 1",
                    k + 1
                )));
            }
        }
        Ok(Self { weights })
    }

    /// Uniform mixing for every player.
    pub fn barycenter(game: &Game) -> Self {
        let weights = game
            .action_counts()
            .iter()
            .map(|&n| vec![1.0 / n as f64; n])
            .collect();
        Self { weights }
    }

    /// The pure profile placing all weight on `actions[k]` for each player.
    pub fn vertex(game: &Game, actions: &[usize]) -> Result<Self> {
        if actions.len() != game.num_players() {
            return Err(Error::BadProfile("vertex arity mismatch".into()));
        }
        let weights = game
            .action_counts()
            .iter()
            .zip(actions)
            .map(|(&n, &a)| {
                let mut w = vec![0.0; n];
                w[a] = 1.0;
                w
            })
            .collect();
        Ok(Self { weights })
    }

    pub fn num_players(&self) -> usize {
        self.weights.len()
    }

    pub fn weights(&self, player: usize) -> &[f64] {
        &self.weights[player]
    }

    pub fn all_weights(&self) -> &[Vec<f64>] {
        &self.weights
    }

    /// If every player concentrates weight `>= 1 - 1e-9` on one action,
    /// returns those actions.
    pub fn as_vertex(&self) -> Option<Vec<usize>> {
        self.weights
            .iter()
            .map(|w| {
                let (best, &wmax) = w
                    .iter()
                    .enumerate()
                    .max_by(|a, b| a.1.total_cmp(b.1))?;
                (wmax >= 1.0 - 1e-9).then_some(best)
            })
            .collect()
    }

    /// Actions with weight above `tol`, per player.
    pub fn support(&self, tol: f64) -> Restriction {
        let kept = self
            .weights
            .iter()
            .map(|w| {
                (0..w.len())
                    .filter(|&a| w[a] > tol)
                    .collect::<Vec<_>>()
            })
            .collect();
        Restriction { kept }
    }

    /// Max-norm distance across all weight entries.
    pub fn max_norm_distance(&self, other: &MixedProfile) -> f64 {
        self.weights
            .iter()
            .zip(&other.weights)
            .flat_map(|(a, b)| a.iter().zip(b).map(|(x, y)| (x - y).abs()))
            .fold(0.0, f64::max)
    }

    /// All weights flattened in player order.
    pub fn flatten(&self) -> Vec<f64> {
        self.weights.iter().flatten().copied().collect()
    }
}

/// A per-player subset of actions (sorted, deduplicated, non-empty).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Restriction {
    kept: Vec<Vec<usize>>,
}

impl Restriction {
    pub fn new(mut kept: Vec<Vec<usize>>) -> Result<Self> {
        for keep in &mut kept {
            keep.sort_unstable();
            keep.dedup();
            if keep.is_empty() {
                return Err(Error::InvalidArgument("empty action subset".into()));
            }
        }
        Ok(Self { kept })
    }

    /// The trivial restriction keeping every action.
    pub fn full(game: &Game) -> Self {
        Self {
            kept: game.action_counts().iter().map(|&n| (0..n).collect()).collect(),
        }
    }

    pub fn kept(&self, player: usize) -> &[usize] {
        &self.kept[player]
    }

    pub fn all_kept(&self) -> &[Vec<usize>] {
        &self.kept
    }

    pub fn num_players(&self) -> usize {
        self.kept.len()
    }

    /// Total number of kept actions across players.
    pub fn size(&self) -> usize {
        self.kept.iter().map(Vec::len).sum()
    }

    pub fn keeps(&self, player: usize, action: usize) -> bool {
        self.kept[player].binary_search(&action).is_ok()
    }

    fn check_against(&self, counts: &[usize]) -> Result<()> {
        if self.kept.len() != counts.len() {
            return Err(Error::InvalidArgument("restriction arity mismatch".into()));
        }
        for (keep, &n) in self.kept.iter().zip(counts) {
            if keep.iter().any(|&a| a >= n) {
                return Err(Error::InvalidArgument(format!(
                    "restriction references action >= {n}"
                )));
            }
        }
        Ok(())
    }

    /// Removes the given actions of one player; errors if none would remain.
    pub fn without(&self, player: usize, actions: &[usize]) -> Result<Restriction> {
        let mut kept = self.kept.clone();
        kept[player].retain(|a| !actions.contains(a));
        if kept[player].is_empty() {
            return Err(Error::InvalidArgument(format!(
                "removing {actions:?} would leave player {} without actions",
                player + 1
            )));
        }
        Ok(Restriction { kept })
    }

    /// Lifts a profile on the restricted game back to full-size weights, with
    /// zeros on removed actions.
    pub fn embed(&self, counts: &[usize], x: &MixedProfile) -> Result<MixedProfile> {
        if x.num_players() != self.kept.len() || counts.len() != self.kept.len() {
            return Err(Error::BadProfile("embed arity mismatch".into()));
        }
        let mut weights: Vec<Vec<f64>> = counts.iter().map(|&n| vec![0.0; n]).collect();
        for (k, keep) in self.kept.iter().enumerate() {
            for (j, &a) in keep.iter().enumerate() {
                weights[k][a] = x.weights(k)[j];
            }
        }
        MixedProfile::new(weights)
    }

    /// Projects a full profile onto the kept actions (weights are copied, not
    /// renormalized; the caller is responsible for the support fitting).
    pub fn project(&self, x: &MixedProfile) -> Result<MixedProfile> {
        let weights = self
            .kept
            .iter()
            .enumerate()
            .map(|(k, keep)| keep.iter().map(|&a| x.weights(k)[a]).collect())
            .collect();
        MixedProfile::new(weights)
    }
}

// ── Structured text format ──────────────────────────────────────────────────

/// Parses a game from its JSON document form:
///
/// ```json
/// {
///   "players": 2,
///   "actions": [["top", "bottom"], ["left", "right"]],
///   "payoffs": [ [[1,1],[0,0]], [[1,0],[1,0.9]] ]
/// }
/// ```
///
/// `actions` may instead be a list of integers when actions are unlabeled.
/// Each `payoffs[k]` is nested with player 1 outermost.
pub fn parse_game(text: &str) -> Result<Game> {
    let doc: serde_json::Value =
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    let obj = doc
        .as_object()
        .ok_or_else(|| Error::Parse("top level is not an object".into()))?;
    let players = obj
        .get("players")
        .and_then(|v| v.as_u64())
        .ok_or_else(|| Error::Parse("missing integer field 'players'".into()))?
        as usize;
    let actions = obj
        .get("actions")
        .and_then(|v| v.as_array())
        .ok_or_else(|| Error::Parse("missing array field 'actions'".into()))?;
    if actions.len() != players {
        return Err(Error::Parse(format!(
            "'actions' lists {} players, 'players' says {players}",
            actions.len()
        )));
    }
    let mut counts = Vec::with_capacity(players);
    let mut labels: Option<Vec<Vec<String>>> = None;
    for (k, entry) in actions.iter().enumerate() {
        match entry {
            serde_json::Value::Number(n) => {
                let n = n
                    .as_u64()
                    .ok_or_else(|| Error::Parse(format!("bad action count for player {}", k + 1)))?;
                counts.push(n as usize);
            }
            serde_json::Value::Array(names) => {
                let names: Vec<String> = names
                    .iter()
                    .map(|v| {
                        v.as_str()
                            .map(str::to_owned)
                            .ok_or_else(|| Error::Parse("action labels must be strings".into()))
                    })
                    .collect::<Result<_>>()?;
                counts.push(names.len());
                labels.get_or_insert_with(Vec::new).push(names);
            }
            _ => {
                return Err(Error::Parse(
                    "'actions' entries must be counts or label lists".into(),
                ))
            }
        }
    }
    if let Some(l) = &labels {
        if l.len() != players {
            return Err(Error::Parse(
                "mixing labeled and unlabeled players is not supported".into(),
            ));
        }
    }
    let payoffs = obj
        .get("payoffs")
        .and_then(|v| v.as_array())
        .ok_or_else(|| Error::Parse("missing array field 'payoffs'".into()))?;
    if payoffs.len() != players {
        return Err(Error::Parse(format!(
            "'payoffs' lists {} tensors, expected {players}",
            payoffs.len()
        )));
    }
    let mut tensors = Vec::with_capacity(players);
    for (k, nested) in payoffs.iter().enumerate() {
        let mut data = Vec::with_capacity(counts.iter().product());
        flatten_nested(nested, &counts, 0, &mut data).map_err(|e| {
            Error::Parse(format!("payoff tensor for player {}: {e}", k + 1))
        })?;
        tensors.push(Tensor::from_flat(counts.clone(), data)?);
    }
    let mut game = Game::new(tensors)?;
    if let Some(l) = labels {
        game = game.with_labels(l)?;
    }
    Ok(game)
}

fn flatten_nested(
    v: &serde_json::Value,
    shape: &[usize],
    depth: usize,
    out: &mut Vec<f64>,
) -> std::result::Result<(), String> {
    if depth == shape.len() {
        let x = v
            .as_f64()
            .ok_or_else(|| format!("expected a number at depth {depth}"))?;
        out.push(x);
        return Ok(());
    }
    let arr = v
        .as_array()
        .ok_or_else(|| format!("expected an array at depth {depth}"))?;
    if arr.len() != shape[depth] {
        return Err(format!(
            "axis {depth} has length {}, expected {}",
            arr.len(),
            shape[depth]
        ));
    }
    for child in arr {
        flatten_nested(child, shape, depth + 1, out)?;
    }
    Ok(())
}

/// Serializes a game to the document form accepted by [`parse_game`].
/// Numbers survive the round trip bit-exactly.
pub fn write_game(game: &Game) -> String {
    use serde_json::{json, Value};

    fn nest(t: &Tensor, shape: &[usize], prefix: &mut Vec<usize>) -> Value {
        if prefix.len() == shape.len() {
            return json!(t.at(prefix));
        }
        let axis = prefix.len();
        let items: Vec<Value> = (0..shape[axis])
            .map(|i| {
                prefix.push(i);
                let v = nest(t, shape, prefix);
                prefix.pop();
                v
            })
            .collect();
        Value::Array(items)
    }

    let actions: Value = match game.labels() {
        Some(labels) => json!(labels),
        None => json!(game.action_counts()),
    };
    let payoffs: Vec<Value> = (0..game.num_players())
        .map(|k| nest(game.payoff_tensor(k), game.action_counts(), &mut Vec::new()))
        .collect();
    let doc = json!({
        "players": game.num_players(),
        "actions": actions,
        "payoffs": payoffs,
    });
    serde_json::to_string_pretty(&doc).expect("game document serialization")
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;

    fn fig1() -> Game {
        Game::two_player(
            vec![vec![1.0, 1.0], vec![0.0, 0.0]],
            vec![vec![1.0, 0.0], vec![1.0, 0.9]],
        )
        .unwrap()
    }

    fn coordination() -> Game {
        Game::two_player(
            vec![vec![1.0, 0.0], vec![0.0, 1.0]],
            vec![vec![1.0, 0.0], vec![0.0, 1.0]],
        )
        .unwrap()
    }

    fn matching_pennies() -> Game {
        Game::two_player(
            vec![vec![1.0, -1.0], vec![-1.0, 1.0]],
            vec![vec![-1.0, 1.0], vec![1.0, -1.0]],
        )
        .unwrap()
    }

    fn random_game(rng: &mut impl Rng, shape: &[usize]) -> Game {
        let len: usize = shape.iter().product();
        let payoffs = (0..shape.len())
            .map(|_| {
                Tensor::from_flat(
                    shape.to_vec(),
                    (0..len).map(|_| rng.gen_range(-2.0..2.0)).collect(),
                )
                .unwrap()
            })
            .collect();
        Game::new(payoffs).unwrap()
    }

    fn random_profile(rng: &mut impl Rng, shape: &[usize]) -> MixedProfile {
        let weights = shape
            .iter()
            .map(|&n| {
                let raw: Vec<f64> = (0..n).map(|_| rng.gen_range(0.05..1.0)).collect();
                let s: f64 = raw.iter().sum();
                raw.into_iter().map(|v| v / s).collect()
            })
            .collect();
        MixedProfile::new(weights).unwrap()
    }

    #[test]
    fn expected_payoff_on_known_profile() {
        let g = fig1();
        let x = MixedProfile::new(vec![vec![1.0, 0.0], vec![0.5, 0.5]]).unwrap();
        assert_eq!(g.expected_payoff(0, &x), 1.0);
    }

    #[test]
    fn action_payoff_gap_is_constant_in_dominance_example() {
        let g = fig1();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..50 {
            let x = random_profile(&mut rng, &[2, 2]);
            let gap = g.action_payoff(0, 0, &x) - g.action_payoff(0, 1, &x);
            assert!((gap - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn payoff_consistency_identity() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for shape in [vec![2, 2], vec![3, 2], vec![2, 3, 2], vec![4, 3, 2]] {
            let g = random_game(&mut rng, &shape);
            for _ in 0..20 {
                let x = random_profile(&mut rng, &shape);
                let table = g.action_payoff_table(&x);
                for (k, row) in table.iter().enumerate() {
                    let via_actions: f64 = x
                        .weights(k)
                        .iter()
                        .zip(row)
                        .map(|(w, u)| w * u)
                        .sum();
                    assert!(
                        (g.expected_payoff(k, &x) - via_actions).abs() < 1e-12,
                        "identity broke for shape {shape:?}, player {k}"
                    );
                    for (alpha, &tv) in row.iter().enumerate() {
                        assert!((tv - g.action_payoff(k, alpha, &x)).abs() < 1e-12);
                    }
                }
            }
        }
    }

    #[test]
    fn expected_payoff_is_multilinear() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        let shape = vec![3, 2, 2];
        let g = random_game(&mut rng, &shape);
        for _ in 0..20 {
            let a = random_profile(&mut rng, &shape);
            let b = random_profile(&mut rng, &shape);
            let t = rng.gen_range(0.0..1.0);
            for j in 0..shape.len() {
                // Blend only player j's weights.
                let mut mixed = a.all_weights().to_vec();
                mixed[j] = a
                    .weights(j)
                    .iter()
                    .zip(b.weights(j))
                    .map(|(p, q)| t * p + (1.0 - t) * q)
                    .collect();
                let mixed = MixedProfile::new(mixed).unwrap();
                let mut b_at_j = a.all_weights().to_vec();
                b_at_j[j] = b.weights(j).to_vec();
                let b_at_j = MixedProfile::new(b_at_j).unwrap();
                for k in 0..shape.len() {
                    let lhs = g.expected_payoff(k, &mixed);
                    let rhs =
                        t * g.expected_payoff(k, &a) + (1.0 - t) * g.expected_payoff(k, &b_at_j);
                    assert!((lhs - rhs).abs() < 1e-10);
                }
            }
        }
    }

    #[test]
    fn restriction_slices_tensors() {
        let g = Game::two_player(
            vec![vec![2.0, 0.0], vec![0.0, 2.0], vec![-1.0, 1.0]],
            vec![vec![2.0, 0.0], vec![0.0, 0.0], vec![0.0, 3.0]],
        )
        .unwrap();
        let r = Restriction::new(vec![vec![0, 1], vec![0, 1]]).unwrap();
        let sub = g.restrict(&r).unwrap();
        assert_eq!(sub.action_counts(), &[2, 2]);
        assert_eq!(sub.payoff_tensor(0).data(), &[2.0, 0.0, 0.0, 2.0]);
        assert_eq!(sub.payoff_tensor(1).data(), &[2.0, 0.0, 0.0, 0.0]);
    }

    #[test]
    fn nash_predicates_on_small_games() {
        let mp = matching_pennies();
        let center = MixedProfile::barycenter(&mp);
        assert!(mp.is_nash(&center, 1e-9));
        assert!(!mp.is_strict_nash(&center, 1e-6));

        let coord = coordination();
        let both_first = MixedProfile::vertex(&coord, &[0, 0]).unwrap();
        assert!(coord.is_nash(&both_first, 1e-9));
        assert!(coord.is_strict_nash(&both_first, 1e-6));
        let mixed_eq = MixedProfile::barycenter(&coord);
        assert!(coord.is_nash(&mixed_eq, 1e-9));

        let g = fig1();
        assert!(!g.is_nash(&MixedProfile::barycenter(&g), 1e-6));
        assert!(g.is_strict_nash(&MixedProfile::vertex(&g, &[0, 0]).unwrap(), 1e-6));
    }

    #[test]
    fn tied_pure_equilibrium_is_not_strict() {
        // Entrant chooses {enter, stay out}; incumbent {fight, share}. At
        // (stay out, fight) the incumbent is indifferent, so the equilibrium
        // is Nash but not strict.
        let g = Game::two_player(
            vec![vec![-1.0, 2.0], vec![0.0, 0.0]],
            vec![vec![-1.0, 1.0], vec![2.0, 2.0]],
        )
        .unwrap();
        let x = MixedProfile::vertex(&g, &[1, 0]).unwrap();
        assert!(g.is_nash(&x, 1e-9));
        assert!(!g.is_strict_nash(&x, 1e-6));
        assert_eq!(g.strict_pure_equilibria(1e-9), vec![vec![0, 1]]);
    }

    #[test]
    fn every_vertex_is_a_restricted_equilibrium() {
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        let shape = vec![3, 3];
        let g = random_game(&mut rng, &shape);
        for a in 0..3 {
            for b in 0..3 {
                let v = MixedProfile::vertex(&g, &[a, b]).unwrap();
                assert!(g.is_restricted_equilibrium(&v, 1e-9));
            }
        }
        let mp = matching_pennies();
        assert!(mp.is_restricted_equilibrium(&MixedProfile::barycenter(&mp), 1e-9));
    }

    #[test]
    fn profile_validation() {
        assert!(MixedProfile::new(vec![vec![0.5, 0.5], vec![-0.1, 1.1]]).is_err());
        assert!(MixedProfile::new(vec![vec![0.6, 0.4 + 1e-8]]).is_err());
        assert!(MixedProfile::new(vec![vec![0.6, 0.4 + 1e-10]]).is_ok());
    }

    #[test]
    fn document_round_trip_is_bit_exact() {
        let g = fig1()
            .with_labels(vec![
                vec!["top".into(), "bottom".into()],
                vec!["left".into(), "right".into()],
            ])
            .unwrap();
        let text = write_game(&g);
        let back = parse_game(&text).unwrap();
        assert_eq!(g, back);
        assert_eq!(g.fingerprint(), back.fingerprint());

        // Asymmetric shape exercises the player-1-outermost nesting.
        let doc = r#"{
            "players": 2,
            "actions": [3, 2],
            "payoffs": [
                [[2, 0], [0, 2], [-1, 1]],
                [[2, 0], [0, 0], [0, 3]]
            ]
        }"#;
        let g2 = parse_game(doc).unwrap();
        assert_eq!(g2.action_counts(), &[3, 2]);
        assert_eq!(g2.pure_payoff(0, &[2, 0]), -1.0);
        assert_eq!(g2.pure_payoff(1, &[2, 1]), 3.0);
        let back2 = parse_game(&write_game(&g2)).unwrap();
        assert_eq!(g2, back2);
    }

    #[test]
    fn malformed_documents_are_rejected() {
        assert!(parse_game("{}").is_err());
        assert!(parse_game(r#"{"players": 2, "actions": [2, 2], "payoffs": [[[1,1],[0,0]]]}"#).is_err());
        // Ragged row.
        assert!(parse_game(
            r#"{"players": 2, "actions": [2, 2], "payoffs": [[[1],[0,0]], [[1,0],[1,1]]]}"#
        )
        .is_err());
    }

    #[test]
    fn restriction_embed_and_project() {
        let g = random_game(&mut ChaCha8Rng::seed_from_u64(5), &[3, 2]);
        let r = Restriction::new(vec![vec![0, 2], vec![1]]).unwrap();
        let sub = MixedProfile::new(vec![vec![0.25, 0.75], vec![1.0]]).unwrap();
        let full = r.embed(g.action_counts(), &sub).unwrap();
        assert_eq!(full.weights(0), &[0.25, 0.0, 0.75]);
        assert_eq!(full.weights(1), &[0.0, 1.0]);
        let back = r.project(&full).unwrap();
        assert_eq!(back, sub);
    }
}
