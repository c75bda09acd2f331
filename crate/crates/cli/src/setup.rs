//! Turning command-line arguments into games, fields, and initial states.

use std::path::Path;

use hodyn_core::builtins;
use hodyn_core::dynamics::{
    DynamicsConfig, DynamicsKind, LdField, Observable, RdField, VectorField, ZdField,
};
use hodyn_core::game::{parse_game, Game, MixedProfile};
use hodyn_core::{Error, Result};

use crate::args::{DynChoice, DynOpts, GameSource, IntOpts};
use hodyn_core::integrator::{IntegrationConfig, Method};

pub fn load_game(source: &GameSource) -> Result<(Game, String)> {
    match (&source.builtin, &source.game) {
        (Some(id), None) => {
            let game = builtins::builtin(id).ok_or_else(|| {
                Error::InvalidArgument(format!(
                    "unknown builtin {id:?}; `hodyn list-builtins` shows the ids"
                ))
            })?;
            Ok((game, id.clone()))
        }
        (None, Some(path)) => load_game_file(path),
        _ => Err(Error::InvalidArgument(
            "pass exactly one of --builtin ID or --game PATH".into(),
        )),
    }
}

pub fn load_game_file(path: &Path) -> Result<(Game, String)> {
    let text = std::fs::read_to_string(path)?;
    let game = parse_game(&text)?;
    Ok((game, path.display().to_string()))
}

pub fn parse_lambdas(s: &str, players: usize) -> Result<Vec<f64>> {
    let parts: Vec<f64> = s
        .split(',')
        .map(|p| {
            p.trim()
                .parse::<f64>()
                .map_err(|_| Error::Parse(format!("bad lambda value {p:?}")))
        })
        .collect::<Result<_>>()?;
    match parts.len() {
        1 => Ok(vec![parts[0]; players]),
        n if n == players => Ok(parts),
        n => Err(Error::InvalidArgument(format!(
            "{n} lambda values for {players} players"
        ))),
    }
}

pub fn build_config(dyn_opts: &DynOpts, game: &Game) -> Result<DynamicsConfig> {
    let kind = match dyn_opts.dynamics {
        DynChoice::Ld | DynChoice::Gd => DynamicsKind::ScoreSpace,
        DynChoice::Zd => DynamicsKind::RelativeScore,
        DynChoice::Rd => DynamicsKind::StrategySpace,
    };
    let lambdas = parse_lambdas(&dyn_opts.lambda, game.num_players())?;
    let observable = Observable::from_id(&dyn_opts.observable)?;
    let cfg = DynamicsConfig::new(kind, dyn_opts.order, game.num_players())
        .with_lambdas(lambdas)
        .with_observable(observable);
    cfg.validate(game)?;
    Ok(cfg)
}

pub fn integration_config(opts: &IntOpts) -> IntegrationConfig {
    let dt = opts.sample_dt.unwrap_or(opts.t_end / 200.0);
    IntegrationConfig::to_time(opts.t_end)
        .sampled_every(dt)
        .with_method(Method::Adaptive {
            rtol: opts.rtol,
            atol: opts.atol,
        })
}

/// One concrete field of any kind, with the state plumbing the trait hides.
pub enum AnyField {
    Ld(LdField),
    Zd(ZdField),
    Rd(RdField),
}

impl AnyField {
    pub fn build(game: Game, cfg: DynamicsConfig) -> Result<AnyField> {
        Ok(match cfg.kind {
            DynamicsKind::ScoreSpace => AnyField::Ld(LdField::new(game, cfg)?),
            DynamicsKind::RelativeScore => AnyField::Zd(ZdField::new(game, cfg)?),
            DynamicsKind::StrategySpace => AnyField::Rd(RdField::new(game, cfg)?),
        })
    }

    pub fn field(&self) -> &dyn VectorField {
        match self {
            AnyField::Ld(f) => f,
            AnyField::Zd(f) => f,
            AnyField::Rd(f) => f,
        }
    }

    pub fn rest_state(&self, x0: &MixedProfile) -> Result<Vec<f64>> {
        match self {
            AnyField::Ld(f) => f.rest_state(x0),
            AnyField::Zd(f) => f.rest_state(x0),
            AnyField::Rd(f) => f.rest_state(x0),
        }
    }

    pub fn set_level(&self, state: &mut [f64], level: usize, rows: &[Vec<f64>]) -> Result<()> {
        match self {
            AnyField::Ld(f) => f.set_level(state, level, rows),
            AnyField::Zd(f) => f.set_level(state, level, rows),
            AnyField::Rd(f) => f.set_level(state, level, rows),
        }
    }

    pub fn level(&self, state: &[f64], level: usize) -> Vec<Vec<f64>> {
        match self {
            AnyField::Ld(f) => f.level(state, level),
            AnyField::Zd(f) => f.level(state, level),
            AnyField::Rd(f) => f.level(state, level),
        }
    }

    /// Per-player labels for one level's state row, in coordinate order.
    pub fn row_labels(&self) -> Vec<Vec<String>> {
        let game = self.field().game();
        match self {
            AnyField::Ld(_) | AnyField::Rd(_) => (0..game.num_players())
                .map(|k| {
                    (0..game.action_counts()[k])
                        .map(|a| game.action_label(k, a))
                        .collect()
                })
                .collect(),
            AnyField::Zd(f) => (0..game.num_players())
                .map(|k| {
                    f.non_base_actions(k)
                        .iter()
                        .map(|&a| game.action_label(k, a))
                        .collect()
                })
                .collect(),
        }
    }
}

/// "w,w;w,w" with player rows separated by semicolons.
pub fn parse_profile(s: &str) -> Result<MixedProfile> {
    let rows = parse_rows(s)?;
    MixedProfile::new(rows)
}

pub fn parse_rows(s: &str) -> Result<Vec<Vec<f64>>> {
    s.split(';')
        .map(|row| {
            row.split(',')
                .map(|v| {
                    v.trim()
                        .parse::<f64>()
                        .map_err(|_| Error::Parse(format!("bad number {v:?} in {s:?}")))
                })
                .collect::<Result<Vec<f64>>>()
        })
        .collect()
}

pub fn parse_init(s: &str, game: &Game) -> Result<MixedProfile> {
    if s == "barycenter" {
        return Ok(MixedProfile::barycenter(game));
    }
    let body = s.strip_prefix("rest-at:").unwrap_or(s);
    parse_profile(body)
}

/// "R=v,..;v,.." selecting state level R.
pub fn parse_bias(s: &str) -> Result<(usize, Vec<Vec<f64>>)> {
    let (level, body) = s.split_once('=').ok_or_else(|| {
        Error::Parse(format!("bias level wants R=values, got {s:?}"))
    })?;
    let level: usize = level
        .trim()
        .parse()
        .map_err(|_| Error::Parse(format!("bad level index {level:?}")))?;
    Ok((level, parse_rows(body)?))
}

/// "PLAYER,ACTION" for a rate-fit request.
pub fn parse_fit(s: &str) -> Result<(usize, usize)> {
    let (k, a) = s
        .split_once(',')
        .ok_or_else(|| Error::Parse(format!("fit wants PLAYER,ACTION, got {s:?}")))?;
    let k = k.trim().parse().map_err(|_| Error::Parse(format!("bad player {k:?}")))?;
    let a = a.trim().parse().map_err(|_| Error::Parse(format!("bad action {a:?}")))?;
    Ok((k, a))
}

pub fn parse_grid(s: &str) -> Result<(usize, usize)> {
    let (n, m) = s
        .split_once(['x', 'X'])
        .ok_or_else(|| Error::Parse(format!("grid wants NxM, got {s:?}")))?;
    let n: usize = n.trim().parse().map_err(|_| Error::Parse(format!("bad grid size {n:?}")))?;
    let m: usize = m.trim().parse().map_err(|_| Error::Parse(format!("bad grid size {m:?}")))?;
    if n == 0 || m == 0 {
        return Err(Error::InvalidArgument("grid sizes must be positive".into()));
    }
    Ok((n, m))
}

pub fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![0.5 * (a + b)];
    }
    (0..n)
        .map(|i| a + (b - a) * i as f64 / (n - 1) as f64)
        .collect()
}

/// Weight `s` on the player's first action, the rest split evenly.
pub fn first_action_mix(count: usize, s: f64) -> Vec<f64> {
    if count == 1 {
        return vec![1.0];
    }
    let rest = (1.0 - s) / (count - 1) as f64;
    let mut row = vec![rest; count];
    row[0] = s;
    row
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lambda_forms() {
        assert_eq!(parse_lambdas("1", 2).unwrap(), vec![1.0, 1.0]);
        assert_eq!(parse_lambdas("0.4,2", 2).unwrap(), vec![0.4, 2.0]);
        assert!(parse_lambdas("1,2,3", 2).is_err());
        assert!(parse_lambdas("abc", 2).is_err());
    }

    #[test]
    fn init_forms() {
        let game = builtins::matching_pennies();
        let b = parse_init("barycenter", &game).unwrap();
        assert_eq!(b.weights(0), &[0.5, 0.5]);
        let p = parse_init("rest-at:0.3,0.7;0.5,0.5", &game).unwrap();
        assert_eq!(p.weights(0), &[0.3, 0.7]);
        let q = parse_init("0.3,0.7;0.5,0.5", &game).unwrap();
        assert_eq!(q, p);
        assert!(parse_init("0.3,0.9;0.5,0.5", &game).is_err());
    }

    #[test]
    fn bias_and_grid_forms() {
        let (r, rows) = parse_bias("1=0.5,-0.5;0,0").unwrap();
        assert_eq!(r, 1);
        assert_eq!(rows, vec![vec![0.5, -0.5], vec![0.0, 0.0]]);
        assert!(parse_bias("nope").is_err());
        assert_eq!(parse_grid("5x7").unwrap(), (5, 7));
        assert!(parse_grid("5").is_err());
        assert!(parse_grid("0x3").is_err());
    }

    #[test]
    fn grid_mixtures_cover_the_interior() {
        let xs = linspace(0.1, 0.9, 5);
        assert_eq!(xs.len(), 5);
        assert!((xs[0] - 0.1).abs() < 1e-12 && (xs[4] - 0.9).abs() < 1e-12);
        let row = first_action_mix(3, 0.5);
        assert!((row.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        assert_eq!(row, vec![0.5, 0.25, 0.25]);
    }
}
