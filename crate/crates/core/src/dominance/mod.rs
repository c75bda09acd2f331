//! Dominance relations and iterated elimination.
//!
//! Because expected payoffs are multilinear, a (pure or mixed) strategy
//! dominates another against *all* opponent behavior exactly when it does so
//! against every opponent *pure* profile. All checks below therefore
//! enumerate opponent vertices:
//!
//! * strict dominance: every vertex gap positive, the margin being the
//!   smallest gap;
//! * weak dominance: every gap non-negative with at least one strictly
//!   positive (the witness profile);
//! * mixed dominators: a feasibility program over the vertex constraints,
//!   solved by the two-phase simplex in [`lp`].
//!
//! Iterated elimination removes dominated actions in simultaneous sweeps:
//! within one sweep every player's removals are decided against the same
//! entering restriction and then applied together. The report records one
//! round entry per player per sweep, so a single sweep that prunes both
//! players of a 2x2 game shows up as two rounds. The weak-then-strict mode
//! runs exactly one weak sweep first and then iterates strict elimination;
//! both phases use pure dominators.

mod lp;

use crate::game::{Game, Restriction};
use crate::{Error, Result};
use lp::{solve_standard, LpOutcome, LP_TOL};

/// How one strategy relates to another, from the dominated side.
#[derive(Clone, Debug, PartialEq)]
pub enum Dominance {
    /// Dominated at every opponent vertex with margin `min gap > 0`.
    Strict { margin: f64 },
    /// Never better, and strictly worse at `witness` (a full pure profile
    /// whose slot for the affected player holds the dominated action).
    Weak { witness: Vec<usize> },
    /// Neither relation holds.
    None,
}

impl Dominance {
    pub fn is_strict(&self) -> bool {
        matches!(self, Dominance::Strict { .. })
    }

    pub fn is_weak(&self) -> bool {
        matches!(self, Dominance::Weak { .. })
    }

    /// The guaranteed payoff gap: the strict margin, or 0 for a weak
    /// relation.
    pub fn margin(&self) -> Option<f64> {
        match self {
            Dominance::Strict { margin } => Some(*margin),
            Dominance::Weak { .. } => Some(0.0),
            Dominance::None => None,
        }
    }
}

/// Classifies how action `by` of player `k` relates to action `dominated`,
/// comparing payoffs at every opponent pure profile with exact arithmetic.
pub fn dominates_pure(game: &Game, k: usize, dominated: usize, by: usize) -> Dominance {
    let mut weights = vec![0.0; game.action_counts()[k]];
    weights[by] = 1.0;
    dominates_mixed(game, k, dominated, &weights)
}

/// Classifies how the mixed strategy `by` of player `k` relates to the pure
/// action `dominated`. The gap at each opponent vertex is
/// `u_k(by; a) - u_k(dominated; a)`.
pub fn dominates_mixed(game: &Game, k: usize, dominated: usize, by: &[f64]) -> Dominance {
    let mut min_gap = f64::INFINITY;
    let mut witness: Option<Vec<usize>> = None;
    let mut any_negative = false;
    game.for_each_opponent_profile(k, |opp| {
        if any_negative {
            return;
        }
        let mixed: f64 = by
            .iter()
            .enumerate()
            .filter(|(_, w)| **w != 0.0)
            .map(|(beta, w)| w * game.action_payoff_pure(k, beta, opp))
            .sum();
        let gap = mixed - game.action_payoff_pure(k, dominated, opp);
        if gap < 0.0 {
            any_negative = true;
            return;
        }
        if gap > 0.0 && witness.is_none() {
            let mut at = opp.to_vec();
            at[k] = dominated;
            witness = Some(at);
        }
        min_gap = min_gap.min(gap);
    });
    if any_negative {
        return Dominance::None;
    }
    if min_gap > 0.0 {
        Dominance::Strict { margin: min_gap }
    } else if let Some(witness) = witness {
        Dominance::Weak { witness }
    } else {
        Dominance::None
    }
}

/// What kind of mixed dominator to search for.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum DominatorMode {
    /// Gap at least `margin > 0` at every opponent vertex.
    Strict { margin: f64 },
    /// All gaps non-negative and at least one strictly positive.
    Weak,
}

/// The margin used by default in mixed strict-dominance searches:
/// `1e-6 * (payoff range)` of the game.
pub fn default_strict_margin(game: &Game) -> f64 {
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for k in 0..game.num_players() {
        for &v in game.payoff_tensor(k).data() {
            lo = lo.min(v);
            hi = hi.max(v);
        }
    }
    1e-6 * (hi - lo)
}

/// Searches for a mixed strategy of player `k` that dominates the pure action
/// `dominated`. Returns the dominator's weights when one exists.
///
/// The search is a feasibility program over the opponent-vertex constraints:
/// weights on the simplex, one surplus variable per vertex. In weak mode the
/// total surplus is maximized and must come out strictly positive.
pub fn find_pure_dominator_mixed(
    game: &Game,
    k: usize,
    dominated: usize,
    mode: DominatorMode,
) -> Result<Option<Vec<f64>>> {
    let n_actions = game.action_counts()[k];
    if dominated >= n_actions {
        return Err(Error::InvalidArgument(format!(
            "action {dominated} out of range for player {}",
            k + 1
        )));
    }
    let margin = match mode {
        DominatorMode::Strict { margin } => {
            if margin <= 0.0 {
                return Err(Error::InvalidArgument(
                    "strict dominator search needs a positive margin".into(),
                ));
            }
            margin
        }
        DominatorMode::Weak => 0.0,
    };

    // Candidate support: every action except the dominated one. A dominator
    // that leans on the dominated action itself can always be renormalized
    // away from it, so nothing is lost and reports stay canonical.
    let candidates: Vec<usize> = (0..n_actions).filter(|&b| b != dominated).collect();
    let n_cand = candidates.len();
    if n_cand == 0 {
        return Ok(None);
    }

    // Gather the vertex payoff table for player k.
    let mut vertex_rows: Vec<Vec<f64>> = Vec::new();
    let mut targets: Vec<f64> = Vec::new();
    game.for_each_opponent_profile(k, |opp| {
        vertex_rows.push(
            candidates
                .iter()
                .map(|&beta| game.action_payoff_pure(k, beta, opp))
                .collect(),
        );
        targets.push(game.action_payoff_pure(k, dominated, opp));
    });

    // Variables: one weight per candidate action, then one surplus s_j per
    // vertex row.
    //   sum_beta q_beta = 1
    //   sum_beta q_beta u(beta; a_j) - s_j = target_j + margin
    let n_rows = vertex_rows.len();
    let n_vars = n_cand + n_rows;
    let mut a: Vec<Vec<f64>> = Vec::with_capacity(n_rows + 1);
    let mut b: Vec<f64> = Vec::with_capacity(n_rows + 1);
    let mut simplex_row = vec![0.0; n_vars];
    simplex_row[..n_cand].fill(1.0);
    a.push(simplex_row);
    b.push(1.0);
    for (j, row) in vertex_rows.iter().enumerate() {
        let mut constraint = vec![0.0; n_vars];
        constraint[..n_cand].copy_from_slice(row);
        constraint[n_cand + j] = -1.0;
        a.push(constraint);
        b.push(targets[j] + margin);
    }
    // Weak mode maximizes the total surplus; strict mode only needs
    // feasibility.
    let mut c = vec![0.0; n_vars];
    if matches!(mode, DominatorMode::Weak) {
        c[n_cand..].fill(1.0);
    }

    match solve_standard(&a, &b, &c)? {
        LpOutcome::Infeasible => Ok(None),
        LpOutcome::Unbounded => Err(Error::Lp(
            "dominator search came back unbounded; surplus should be bounded by payoffs".into(),
        )),
        LpOutcome::Optimal { x, value } => {
            if matches!(mode, DominatorMode::Weak) && value <= LP_TOL {
                // Feasible only with all-zero gaps, i.e. payoff-equivalent
                // mixtures; that is not weak dominance.
                return Ok(None);
            }
            let mut q = vec![0.0; n_actions];
            for (i, &beta) in candidates.iter().enumerate() {
                q[beta] = x[i].max(0.0); // clean tiny tableau negatives
            }
            let s: f64 = q.iter().sum();
            for w in q.iter_mut() {
                *w /= s;
            }
            Ok(Some(q))
        }
    }
}

/// Elimination procedure variants.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum EliminationMode {
    /// Iterated strict dominance, pure dominators only.
    StrictPure,
    /// Iterated strict dominance allowing mixed dominators with the given
    /// margin (use [`default_strict_margin`] unless you have a reason not
    /// to).
    StrictMixed { margin: f64 },
    /// One sweep of weak elimination, then iterated strict (pure) dominance.
    WeakOneRoundThenStrict,
}

/// One action removed during elimination.
#[derive(Clone, Debug)]
pub struct RemovedAction {
    /// Original action index.
    pub action: usize,
    /// Dominating mixed strategy in original index space (zeros on actions
    /// already eliminated).
    pub dominator: Vec<f64>,
    /// The relation that justified the removal. Witness profiles are in
    /// original indices.
    pub relation: Dominance,
}

/// One report entry: a single player's removals within one sweep.
#[derive(Clone, Debug)]
pub struct EliminationRound {
    pub player: usize,
    pub removed: Vec<RemovedAction>,
    /// Restriction after applying this entry (entries within one sweep apply
    /// in player order).
    pub surviving: Restriction,
}

/// Full record of an elimination run.
#[derive(Clone, Debug)]
pub struct DominanceReport {
    pub mode: EliminationMode,
    pub rounds: Vec<EliminationRound>,
    pub surviving: Restriction,
}

impl DominanceReport {
    /// True when every player is down to a single action.
    pub fn is_solvable(&self) -> bool {
        (0..self.surviving.num_players()).all(|k| self.surviving.kept(k).len() == 1)
    }

    /// The unique surviving pure profile, if the game was solvable.
    pub fn unique_survivor(&self) -> Option<Vec<usize>> {
        self.is_solvable().then(|| {
            (0..self.surviving.num_players())
                .map(|k| self.surviving.kept(k)[0])
                .collect()
        })
    }
}

/// Runs iterated elimination on `game` and reports every removal.
pub fn iterated_elimination(game: &Game, mode: EliminationMode) -> Result<DominanceReport> {
    let mut restriction = Restriction::full(game);
    let mut rounds: Vec<EliminationRound> = Vec::new();
    let mut weak_sweep_pending = matches!(mode, EliminationMode::WeakOneRoundThenStrict);

    loop {
        let sub = game.restrict(&restriction)?;
        let allow_weak = std::mem::take(&mut weak_sweep_pending);
        let mut sweep: Vec<(usize, Vec<RemovedAction>)> = Vec::new();
        for k in 0..game.num_players() {
            let kept = restriction.kept(k).to_vec();
            if kept.len() < 2 {
                continue;
            }
            let mut removals = Vec::new();
            for (pos, &orig) in kept.iter().enumerate() {
                if let Some(removal) =
                    removal_for(game, &sub, &restriction, mode, allow_weak, k, pos, orig)?
                {
                    removals.push(removal);
                }
            }
            if !removals.is_empty() {
                sweep.push((k, removals));
            }
        }
        if sweep.is_empty() {
            break;
        }
        for (player, removed) in sweep {
            let actions: Vec<usize> = removed.iter().map(|r| r.action).collect();
            restriction = restriction.without(player, &actions)?;
            rounds.push(EliminationRound {
                player,
                removed,
                surviving: restriction.clone(),
            });
        }
    }

    Ok(DominanceReport {
        mode,
        rounds,
        surviving: restriction,
    })
}

/// Decides whether the action at `pos` (original index `orig`) of player `k`
/// is dominated in the current sub-game, and if so by what.
#[allow(clippy::too_many_arguments)]
fn removal_for(
    game: &Game,
    sub: &Game,
    restriction: &Restriction,
    mode: EliminationMode,
    weak_sweep: bool,
    k: usize,
    pos: usize,
    orig: usize,
) -> Result<Option<RemovedAction>> {
    let kept = restriction.kept(k);

    // Pure dominators first (they make the clearest report entries).
    let mut best_pure: Option<(usize, Dominance)> = None;
    for (by_pos, &by_orig) in kept.iter().enumerate() {
        if by_pos == pos {
            continue;
        }
        match dominates_pure(sub, k, pos, by_pos) {
            Dominance::Strict { margin } => {
                let replace = match &best_pure {
                    Some((_, Dominance::Strict { margin: m })) => margin > *m,
                    _ => true,
                };
                if replace {
                    best_pure = Some((by_orig, Dominance::Strict { margin }));
                }
            }
            Dominance::Weak { witness } if weak_sweep && best_pure.is_none() => {
                let lifted = lift_profile(&witness, restriction, k, orig);
                best_pure = Some((by_orig, Dominance::Weak { witness: lifted }));
            }
            _ => {}
        }
    }
    if let Some((by_orig, relation)) = best_pure {
        let mut dominator = vec![0.0; game.action_counts()[k]];
        dominator[by_orig] = 1.0;
        return Ok(Some(RemovedAction {
            action: orig,
            dominator,
            relation,
        }));
    }

    // Mixed dominators only in the strict-mixed mode.
    if let EliminationMode::StrictMixed { margin } = mode {
        if margin > 0.0 {
            if let Some(q) = find_pure_dominator_mixed(
                sub,
                k,
                pos,
                DominatorMode::Strict { margin },
            )? {
                let relation = dominates_mixed(sub, k, pos, &q);
                if relation.is_strict() {
                    let mut dominator = vec![0.0; game.action_counts()[k]];
                    for (p, &o) in kept.iter().enumerate() {
                        dominator[o] = q[p];
                    }
                    return Ok(Some(RemovedAction {
                        action: orig,
                        dominator,
                        relation,
                    }));
                }
            }
        }
    }
    Ok(None)
}

/// Maps a sub-game pure profile back to original action indices, pinning
/// player `k`'s slot to the dominated original action.
fn lift_profile(sub_profile: &[usize], restriction: &Restriction, k: usize, orig: usize) -> Vec<usize> {
    let mut full: Vec<usize> = sub_profile
        .iter()
        .enumerate()
        .map(|(j, &pos)| restriction.kept(j)[pos])
        .collect();
    full[k] = orig;
    full
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builtins;
    use crate::game::MixedProfile;
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn pure_dominance_in_the_dominance_solvable_game() {
        let g = builtins::fig1_dominance();
        // bottom < top with margin 1.
        match dominates_pure(&g, 0, 1, 0) {
            Dominance::Strict { margin } => assert_eq!(margin, 1.0),
            other => panic!("expected strict, got {other:?}"),
        }
        // right < left with margin 0.1 (the 0.9 entry keeps it strict).
        match dominates_pure(&g, 1, 1, 0) {
            Dominance::Strict { margin } => assert!((margin - 0.1).abs() < 1e-12),
            other => panic!("expected strict, got {other:?}"),
        }
        // Nothing dominates top.
        assert_eq!(dominates_pure(&g, 0, 0, 1), Dominance::None);
    }

    #[test]
    fn weak_dominance_with_witness() {
        let g = builtins::entry_deterrence();
        // fight (action 0 of player 2) is weakly dominated by share: the gap
        // is strict only when player 1 enters.
        match dominates_pure(&g, 1, 0, 1) {
            Dominance::Weak { witness } => assert_eq!(witness, vec![0, 0]),
            other => panic!("expected weak, got {other:?}"),
        }
        // No relation for player 1.
        assert_eq!(dominates_pure(&g, 0, 0, 1), Dominance::None);
        assert_eq!(dominates_pure(&g, 0, 1, 0), Dominance::None);
    }

    #[test]
    fn identical_rows_are_not_weakly_dominated() {
        let g = Game::two_player(
            vec![vec![1.0, 2.0], vec![1.0, 2.0]],
            vec![vec![0.0, 0.0], vec![0.0, 0.0]],
        )
        .unwrap();
        assert_eq!(dominates_pure(&g, 0, 0, 1), Dominance::None);
        assert_eq!(dominates_pure(&g, 0, 1, 0), Dominance::None);
    }

    #[test]
    fn mixed_dominance_matches_dense_grid_scan() {
        // Vertex checks suffice by multilinearity; confirm against a grid of
        // opponent mixtures on random 2x3 games.
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        for _ in 0..30 {
            let g = crate::game::Tensor::from_flat(
                vec![3, 2],
                (0..6).map(|_| rng.gen_range(-1.0..1.0)).collect(),
            )
            .map(|t1| {
                let t2 = crate::game::Tensor::from_flat(
                    vec![3, 2],
                    (0..6).map(|_| rng.gen_range(-1.0..1.0)).collect(),
                )
                .unwrap();
                Game::new(vec![t1, t2]).unwrap()
            })
            .unwrap();
            let by: Vec<f64> = {
                let a = rng.gen_range(0.0..1.0);
                let b = rng.gen_range(0.0..1.0 - a);
                vec![a, b, 1.0 - a - b]
            };
            let dominated = rng.gen_range(0..3);
            let vertex_says = dominates_mixed(&g, 0, dominated, &by);

            // Dense scan over opponent mixtures with step 0.1.
            let mut all_ge = true;
            let mut any_gt = false;
            for i in 0..=10 {
                let p = i as f64 / 10.0;
                let x = MixedProfile::new(vec![vec![1.0, 0.0, 0.0], vec![p, 1.0 - p]]).unwrap();
                let gap: f64 = by
                    .iter()
                    .enumerate()
                    .map(|(beta, w)| w * g.action_payoff(0, beta, &x))
                    .sum::<f64>()
                    - g.action_payoff(0, dominated, &x);
                if gap < -1e-12 {
                    all_ge = false;
                }
                if gap > 1e-12 {
                    any_gt = true;
                }
            }
            match vertex_says {
                Dominance::Strict { .. } => assert!(all_ge && any_gt),
                Dominance::Weak { .. } => assert!(all_ge),
                Dominance::None => {
                    // The grid may miss the violating vertex only if it
                    // contains it; step 0.1 includes both endpoints, so a
                    // `None` must show a negative gap somewhere or be flat.
                    assert!(!all_ge || !any_gt);
                }
            }
        }
    }

    #[test]
    fn lp_finds_strictly_dominating_mixture_when_no_pure_one_exists() {
        // Action 0 earns 0 everywhere; actions 1 and 2 trade off against the
        // opponent's choice, but their 50/50 mix earns 0.25 everywhere.
        let g = Game::two_player(
            vec![
                vec![0.0, 0.0],
                vec![1.0, -0.5],
                vec![-0.5, 1.0],
            ],
            vec![vec![0.0; 2]; 3],
        )
        .unwrap();
        assert_eq!(dominates_pure(&g, 0, 0, 1), Dominance::None);
        assert_eq!(dominates_pure(&g, 0, 0, 2), Dominance::None);

        let q = find_pure_dominator_mixed(&g, 0, 0, DominatorMode::Strict { margin: 0.05 })
            .unwrap()
            .expect("a mixed dominator exists");
        // Verify the dominator by direct evaluation at both opponent
        // vertices.
        for opp in 0..2 {
            let gap: f64 = q
                .iter()
                .enumerate()
                .map(|(beta, w)| w * g.action_payoff_pure(0, beta, &[0, opp]))
                .sum::<f64>()
                - g.action_payoff_pure(0, 0, &[0, opp]);
            assert!(gap >= 0.05 - 1e-9, "gap {gap} at vertex {opp}");
        }
        assert!(dominates_mixed(&g, 0, 0, &q).is_strict());

        // Matching pennies has no dominance of any kind.
        let mp = builtins::matching_pennies();
        for k in 0..2 {
            for a in 0..2 {
                assert!(find_pure_dominator_mixed(&mp, k, a, DominatorMode::Weak)
                    .unwrap()
                    .is_none());
                assert!(find_pure_dominator_mixed(
                    &mp,
                    k,
                    a,
                    DominatorMode::Strict { margin: 1e-6 }
                )
                .unwrap()
                .is_none());
            }
        }
    }

    #[test]
    fn weak_mode_lp_accepts_weak_dominators_only() {
        let g = builtins::entry_deterrence();
        let q = find_pure_dominator_mixed(&g, 1, 0, DominatorMode::Weak)
            .unwrap()
            .expect("share weakly dominates fight");
        assert!(q[1] > 0.99);
        // share itself is not weakly dominated.
        assert!(find_pure_dominator_mixed(&g, 1, 1, DominatorMode::Weak)
            .unwrap()
            .is_none());
    }

    #[test]
    fn elimination_solves_the_dominance_example_in_two_report_rounds() {
        let g = builtins::fig1_dominance();
        let report = iterated_elimination(&g, EliminationMode::StrictPure).unwrap();
        assert_eq!(report.rounds.len(), 2);
        assert_eq!(report.unique_survivor(), Some(vec![0, 0]));
        assert_eq!(report.rounds[0].player, 0);
        assert_eq!(report.rounds[0].removed[0].action, 1);
        assert_eq!(
            report.rounds[0].removed[0].relation,
            Dominance::Strict { margin: 1.0 }
        );
        assert_eq!(report.rounds[1].player, 1);
        assert_eq!(report.rounds[1].removed[0].action, 1);

        // Matching pennies: nothing to remove.
        let report =
            iterated_elimination(&builtins::matching_pennies(), EliminationMode::StrictPure)
                .unwrap();
        assert!(report.rounds.is_empty());
        assert!(!report.is_solvable());
    }

    #[test]
    fn outside_option_keeps_the_iteratively_weak_action() {
        let g = builtins::fig2_outside_option();

        // Strict elimination only removes player 1's outside option.
        let strict = iterated_elimination(&g, EliminationMode::StrictPure).unwrap();
        assert_eq!(strict.rounds.len(), 1);
        assert_eq!(strict.rounds[0].player, 0);
        assert_eq!(strict.rounds[0].removed[0].action, 2);
        assert_eq!(strict.surviving.kept(0), &[0, 1]);
        assert_eq!(strict.surviving.kept(1), &[0, 1]);

        // One weak sweep first changes nothing for player 2: its second
        // column pays 3 against the outside option, so it is not weakly
        // dominated in the full game. It becomes weakly dominated only after
        // the outside option is gone, which the strict iteration that follows
        // cannot see.
        let weak = iterated_elimination(&g, EliminationMode::WeakOneRoundThenStrict).unwrap();
        assert_eq!(weak.surviving.kept(0), &[0, 1]);
        assert_eq!(weak.surviving.kept(1), &[0, 1]);
    }

    #[test]
    fn weak_then_strict_solves_entry_deterrence() {
        let g = builtins::entry_deterrence();
        let report = iterated_elimination(&g, EliminationMode::WeakOneRoundThenStrict).unwrap();
        assert_eq!(report.unique_survivor(), Some(vec![0, 1]));
        // First entry: the weak sweep removes fight with its witness.
        assert_eq!(report.rounds[0].player, 1);
        let removal = &report.rounds[0].removed[0];
        assert_eq!(removal.action, 0);
        assert_eq!(removal.relation, Dominance::Weak { witness: vec![0, 0] });
        // Plain strict elimination leaves the game untouched.
        let strict = iterated_elimination(&g, EliminationMode::StrictPure).unwrap();
        assert!(strict.rounds.is_empty());
    }

    #[test]
    fn strict_mixed_removes_actions_pure_elimination_cannot() {
        let g = Game::two_player(
            vec![
                vec![0.0, 0.0],
                vec![1.0, -0.5],
                vec![-0.5, 1.0],
            ],
            vec![vec![0.0; 2]; 3],
        )
        .unwrap();
        let pure = iterated_elimination(&g, EliminationMode::StrictPure).unwrap();
        assert!(pure.rounds.is_empty());
        let margin = DominatorMode::Strict {
            margin: default_strict_margin(&g),
        };
        let DominatorMode::Strict { margin } = margin else { unreachable!() };
        let mixed = iterated_elimination(&g, EliminationMode::StrictMixed { margin }).unwrap();
        assert_eq!(mixed.rounds.len(), 1);
        assert_eq!(mixed.rounds[0].removed[0].action, 0);
        let dominator = &mixed.rounds[0].removed[0].dominator;
        assert_eq!(dominator[0], 0.0);
        assert!((dominator.iter().sum::<f64>() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn strict_elimination_is_order_independent() {
        let mut rng = ChaCha8Rng::seed_from_u64(4242);
        for trial in 0..40 {
            let shape = [3usize, 3];
            let len = 9;
            let payoffs = (0..2)
                .map(|_| {
                    crate::game::Tensor::from_flat(
                        shape.to_vec(),
                        (0..len).map(|_| rng.gen_range(-1.0..1.0f64)).collect(),
                    )
                    .unwrap()
                })
                .collect();
            let g = Game::new(payoffs).unwrap();

            let simultaneous = iterated_elimination(&g, EliminationMode::StrictPure).unwrap();

            // One-at-a-time greedy removal in scan order.
            let mut restriction = Restriction::full(&g);
            'outer: loop {
                let sub = g.restrict(&restriction).unwrap();
                for k in 0..2 {
                    let kept = restriction.kept(k).to_vec();
                    if kept.len() < 2 {
                        continue;
                    }
                    for pos in 0..kept.len() {
                        for by in 0..kept.len() {
                            if by != pos && dominates_pure(&sub, k, pos, by).is_strict() {
                                restriction =
                                    restriction.without(k, &[kept[pos]]).unwrap();
                                continue 'outer;
                            }
                        }
                    }
                }
                break;
            }
            assert_eq!(
                simultaneous.surviving, restriction,
                "trial {trial}: survivor sets diverged"
            );
        }
    }

    #[test]
    fn strict_equilibria_survive_elimination() {
        let mut rng = ChaCha8Rng::seed_from_u64(777);
        let mut seen = 0;
        for _ in 0..60 {
            let payoffs = (0..2)
                .map(|_| {
                    crate::game::Tensor::from_flat(
                        vec![3, 3],
                        (0..9).map(|_| rng.gen_range(-1.0..1.0f64)).collect(),
                    )
                    .unwrap()
                })
                .collect();
            let g = Game::new(payoffs).unwrap();
            let equilibria = g.strict_pure_equilibria(1e-9);
            if equilibria.is_empty() {
                continue;
            }
            seen += 1;
            for mode in [
                EliminationMode::StrictPure,
                EliminationMode::StrictMixed {
                    margin: default_strict_margin(&g),
                },
            ] {
                let report = iterated_elimination(&g, mode).unwrap();
                for eq in &equilibria {
                    for (k, &a) in eq.iter().enumerate() {
                        assert!(
                            report.surviving.keeps(k, a),
                            "strict equilibrium {eq:?} lost action under {mode:?}"
                        );
                    }
                }
            }
        }
        assert!(seen > 10, "too few games with strict equilibria: {seen}");
    }
}
