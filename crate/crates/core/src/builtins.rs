//! Built-in games used by the command-line tool, the benchmarks, and the
//! acceptance tests.
//!
//! Each game is small enough to reason about by hand and exercises one
//! distinct behavior of the dynamics: strict dominance solvability, weak
//! dominance with an outside option, coordination with two strict equilibria,
//! entry deterrence with a weakly dominated incumbent threat, and a zero-sum
//! cycle with a unique interior equilibrium.

use crate::game::Game;

/// Identifiers of all built-in games, in listing order.
pub const BUILTIN_IDS: [&str; 5] = [
    "fig1_dominance",
    "fig2_outside_option",
    "fig3_coordination",
    "entry_deterrence",
    "matching_pennies",
];

/// Looks a built-in game up by identifier.
pub fn builtin(id: &str) -> Option<Game> {
    match id {
        "fig1_dominance" => Some(fig1_dominance()),
        "fig2_outside_option" => Some(fig2_outside_option()),
        "fig3_coordination" => Some(fig3_coordination()),
        "entry_deterrence" => Some(entry_deterrence()),
        "matching_pennies" => Some(matching_pennies()),
        _ => None,
    }
}

/// One-line description for listings.
pub fn describe(id: &str) -> &'static str {
    match id {
        "fig1_dominance" => "2x2, solvable by iterated strict dominance; survivor (top, left)",
        "fig2_outside_option" => {
            "3x2 outside-option game; one incumbent action is only iteratively weakly dominated"
        }
        "fig3_coordination" => "2x2 pure coordination; two strict equilibria and a mixed one",
        "entry_deterrence" => "2x2 entry deterrence; 'fight' weakly dominated by 'share'",
        "matching_pennies" => "2x2 zero-sum; unique interior equilibrium, no convergence",
        _ => "unknown",
    }
}

/// Dominance-solvable 2x2 game. Player 1's `bottom` is strictly dominated by
/// `top` (margin 1); player 2's `right` is strictly dominated by `left`
/// (margin 0.1). Unique survivor (top, left).
pub fn fig1_dominance() -> Game {
    Game::two_player(
        vec![vec![1.0, 1.0], vec![0.0, 0.0]],
        vec![vec![1.0, 0.0], vec![1.0, 0.9]],
    )
    .expect("static game")
    .with_labels(vec![
        vec!["top".into(), "bottom".into()],
        vec!["left".into(), "right".into()],
    ])
    .expect("static labels")
}

/// 3x2 game where player 1 has an outside option (the third row). Player 2's
/// second column pays well against that row, so it is not weakly dominated in
/// the full game; it only becomes weakly dominated after the row is removed
/// by strict elimination.
pub fn fig2_outside_option() -> Game {
    Game::two_player(
        vec![vec![2.0, 0.0], vec![0.0, 2.0], vec![-1.0, 1.0]],
        vec![vec![2.0, 0.0], vec![0.0, 0.0], vec![0.0, 3.0]],
    )
    .expect("static game")
    .with_labels(vec![
        vec!["a".into(), "b".into(), "out".into()],
        vec!["left".into(), "right".into()],
    ])
    .expect("static labels")
}

/// Pure 2x2 coordination: identity payoff tables for both players. Strict
/// equilibria at (first, first) and (second, second); mixed equilibrium at
/// the barycenter.
pub fn fig3_coordination() -> Game {
    Game::two_player(
        vec![vec![1.0, 0.0], vec![0.0, 1.0]],
        vec![vec![1.0, 0.0], vec![0.0, 1.0]],
    )
    .expect("static game")
    .with_labels(vec![
        vec!["first".into(), "second".into()],
        vec!["first".into(), "second".into()],
    ])
    .expect("static labels")
}

/// Entry deterrence. Player 1 (entrant) chooses {enter, stay_out}; player 2
/// (incumbent) chooses {fight, share}. `fight` is weakly dominated by
/// `share`: the payoff gap is strict only when the entrant enters. The strict
/// equilibrium is (enter, share); (stay_out, fight) is Nash but relies on the
/// weakly dominated threat.
pub fn entry_deterrence() -> Game {
    Game::two_player(
        vec![vec![-1.0, 2.0], vec![0.0, 0.0]],
        vec![vec![-1.0, 1.0], vec![2.0, 2.0]],
    )
    .expect("static game")
    .with_labels(vec![
        vec!["enter".into(), "stay_out".into()],
        vec!["fight".into(), "share".into()],
    ])
    .expect("static labels")
}

/// Matching pennies with payoffs +-1. Zero-sum, unique equilibrium at the
/// barycenter, no dominance relations anywhere.
pub fn matching_pennies() -> Game {
    Game::two_player(
        vec![vec![1.0, -1.0], vec![-1.0, 1.0]],
        vec![vec![-1.0, 1.0], vec![1.0, -1.0]],
    )
    .expect("static game")
    .with_labels(vec![
        vec!["heads".into(), "tails".into()],
        vec!["heads".into(), "tails".into()],
    ])
    .expect("static labels")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::MixedProfile;

    #[test]
    fn all_ids_resolve() {
        for id in BUILTIN_IDS {
            let g = builtin(id).unwrap();
            assert!(g.num_players() == 2);
            assert!(builtin(id).unwrap().fingerprint() == g.fingerprint());
        }
        assert!(builtin("nope").is_none());
    }

    #[test]
    fn known_equilibrium_structure() {
        let g = fig1_dominance();
        assert_eq!(g.strict_pure_equilibria(1e-9), vec![vec![0, 0]]);

        let g = fig3_coordination();
        assert_eq!(g.strict_pure_equilibria(1e-9), vec![vec![0, 0], vec![1, 1]]);
        assert!(g.is_nash(&MixedProfile::barycenter(&g), 1e-9));

        let g = entry_deterrence();
        assert_eq!(g.strict_pure_equilibria(1e-9), vec![vec![0, 1]]);
        // The deterrence outcome survives as a non-strict equilibrium.
        let threat = MixedProfile::vertex(&g, &[1, 0]).unwrap();
        assert!(g.is_nash(&threat, 1e-9));

        let g = matching_pennies();
        assert!(g.strict_pure_equilibria(1e-9).is_empty());
        assert!(g.is_nash(&MixedProfile::barycenter(&g), 1e-9));
    }

    #[test]
    fn outside_option_equilibria() {
        let g = fig2_outside_option();
        assert_eq!(g.strict_pure_equilibria(1e-9), vec![vec![0, 0]]);
        // (b, right) is Nash but not strict: player 2 is indifferent there.
        let x = MixedProfile::vertex(&g, &[1, 1]).unwrap();
        assert!(g.is_nash(&x, 1e-9));
        assert!(!g.is_strict_nash(&x, 1e-6));
        // Mixed equilibrium on the support {a, out} x {left, right}.
        let x = MixedProfile::new(vec![vec![0.6, 0.0, 0.4], vec![0.25, 0.75]]).unwrap();
        assert!(g.is_restricted_equilibrium(&x, 1e-9));
        assert!(!g.is_nash(&x, 1e-9)); // action b earns more outside the support
    }
}
