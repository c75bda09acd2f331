//! Command implementations and the exit-code policy.

use std::process::ExitCode;

use hodyn_core::analysis::{classify_limit, extinction_rate_fit};
use hodyn_core::builtins;
use hodyn_core::dominance::{
    default_strict_margin, iterated_elimination, Dominance, EliminationMode,
};
use hodyn_core::game::write_game;
use hodyn_core::integrator::integrate;
use hodyn_core::{Error, Result};
use rayon::prelude::*;

use crate::args::{
    Cli, Command, DynChoice, EliminateArgs, ListBuiltinsArgs, ModeChoice, SimulateArgs,
    SweepArgs, VerifyArgs,
};
use crate::output::{
    fmt_profile, num, record_events, record_fit, record_limit, trajectory_csv, Record,
};
use crate::recipes;
use crate::setup::{
    build_config, first_action_mix, integration_config, linspace, load_game, parse_bias,
    parse_fit, parse_grid, parse_init, AnyField,
};

/// 0 success, 1 verification fail, 2 usage or parse error, 3 numerical error.
pub fn exit_class(err: &Error) -> u8 {
    match err {
        Error::InvalidArgument(_)
        | Error::BadGame(_)
        | Error::BadProfile(_)
        | Error::Parse(_)
        | Error::Io(_) => 2,
        Error::Domain(_)
        | Error::Lp(_)
        | Error::Analysis(_)
        | Error::Truncated { .. }
        | Error::Blowup { .. } => 3,
    }
}

pub fn dispatch(cli: Cli) -> ExitCode {
    let outcome = match cli.command {
        Command::Simulate(args) => cmd_simulate(&args),
        Command::Eliminate(args) => cmd_eliminate(&args),
        Command::Verify(args) => cmd_verify(&args),
        Command::Sweep(args) => cmd_sweep(&args),
        Command::ListBuiltins(args) => cmd_list_builtins(&args),
    };
    match outcome {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(exit_class(&err))
        }
    }
}

fn dynamics_name(choice: DynChoice) -> &'static str {
    match choice {
        DynChoice::Ld => "ld",
        DynChoice::Zd => "zd",
        DynChoice::Rd => "rd",
        DynChoice::Gd => "gd",
    }
}

pub fn cmd_simulate(args: &SimulateArgs) -> Result<ExitCode> {
    let (game, game_name) = load_game(&args.source)?;
    let cfg = build_config(&args.dynamics, &game)?;
    let int_cfg = integration_config(&args.integration);
    let any = AnyField::build(game.clone(), cfg.clone())?;

    let x0 = parse_init(&args.init, &game)?;
    let mut state0 = any.rest_state(&x0)?;
    for bias in &args.bias_level {
        let (level, rows) = parse_bias(bias)?;
        if level >= cfg.order {
            return Err(Error::InvalidArgument(format!(
                "bias level {level} out of range for order {}",
                cfg.order
            )));
        }
        any.set_level(&mut state0, level, &rows)?;
    }

    let traj = integrate(any.field(), state0, &int_cfg)?;

    let mut rec = Record::new();
    rec.push("command", "simulate");
    rec.push("game", &game_name);
    rec.push("dynamics", dynamics_name(args.dynamics.dynamics));
    rec.push("order", cfg.order);
    rec.push(
        "lambda",
        cfg.lambdas
            .iter()
            .map(|l| l.to_string())
            .collect::<Vec<_>>()
            .join(","),
    );
    rec.push("observable", &args.dynamics.observable);
    rec.push("t_end", num(args.integration.t_end));
    rec.push("rtol", num(args.integration.rtol));
    rec.push("atol", num(args.integration.atol));
    rec.push("sample_dt", num(int_cfg.sample_every.unwrap_or(f64::NAN)));
    rec.push("init", &args.init);
    for (i, bias) in args.bias_level.iter().enumerate() {
        rec.push(&format!("bias_{i}"), bias);
    }
    rec.push("steps", traj.steps);
    rec.push("rejected_steps", traj.rejected);
    rec.push("end_time", num(traj.end_time()));
    rec.push("end_profile", fmt_profile(traj.end_profile()));
    record_events(&mut rec, &traj);
    let report = classify_limit(&traj, &game, 1e-5);
    record_limit(&mut rec, &report);

    for (i, spec) in args.fit.iter().enumerate() {
        let (player, action) = parse_fit(spec)?;
        let fit = extinction_rate_fit(&traj, player, action, cfg.order, false)?;
        rec.push(&format!("fit_{i}_player"), player);
        rec.push(&format!("fit_{i}_action"), action);
        record_fit(&mut rec, &format!("fit_{i}"), &fit);
    }

    std::fs::create_dir_all(&args.out_dir)?;
    let csv = trajectory_csv(&traj, &any, args.levels);
    std::fs::write(args.out_dir.join("trajectory.csv"), csv)?;
    rec.write(&args.out_dir.join("summary.txt"))?;
    rec.print();
    Ok(ExitCode::SUCCESS)
}

pub fn cmd_eliminate(args: &EliminateArgs) -> Result<ExitCode> {
    let (game, game_name) = load_game(&args.source)?;
    let (mode, mode_name) = match args.mode {
        ModeChoice::Strict => (EliminationMode::StrictPure, "strict"),
        ModeChoice::StrictMixed => (
            EliminationMode::StrictMixed { margin: default_strict_margin(&game) },
            "strict-mixed",
        ),
        ModeChoice::WeakThenStrict => {
            (EliminationMode::WeakOneRoundThenStrict, "weak-then-strict")
        }
    };
    let report = iterated_elimination(&game, mode)?;

    let mut rec = Record::new();
    rec.push("command", "eliminate");
    rec.push("game", &game_name);
    rec.push("mode", mode_name);
    rec.push("rounds", report.rounds.len());
    let mut idx = 0;
    for (ri, round) in report.rounds.iter().enumerate() {
        for removal in &round.removed {
            rec.push(&format!("removal_{idx}_round"), ri + 1);
            rec.push(&format!("removal_{idx}_player"), round.player);
            rec.push(
                &format!("removal_{idx}_action"),
                game.action_label(round.player, removal.action),
            );
            let pure = removal
                .dominator
                .iter()
                .position(|&w| w == 1.0)
                .filter(|_| removal.dominator.iter().filter(|&&w| w != 0.0).count() == 1);
            let shown = match pure {
                Some(a) => game.action_label(round.player, a),
                None => {
                    let ws: Vec<String> =
                        removal.dominator.iter().map(|&w| num(w)).collect();
                    ws.join(",")
                }
            };
            rec.push(&format!("removal_{idx}_dominator"), shown);
            match &removal.relation {
                Dominance::Strict { margin } => {
                    rec.push(&format!("removal_{idx}_relation"), "strict");
                    rec.push(&format!("removal_{idx}_margin"), num(*margin));
                }
                Dominance::Weak { witness } => {
                    rec.push(&format!("removal_{idx}_relation"), "weak");
                    let labels: Vec<String> = witness
                        .iter()
                        .enumerate()
                        .map(|(k, &a)| game.action_label(k, a))
                        .collect();
                    rec.push(&format!("removal_{idx}_witness"), labels.join(","));
                }
                Dominance::None => {
                    rec.push(&format!("removal_{idx}_relation"), "none");
                }
            }
            idx += 1;
        }
    }
    rec.push("removal_count", idx);
    for k in 0..game.num_players() {
        let labels: Vec<String> = report
            .surviving
            .kept(k)
            .iter()
            .map(|&a| game.action_label(k, a))
            .collect();
        rec.push(&format!("survivors_{k}"), labels.join(","));
    }
    rec.push("solvable", report.is_solvable());
    if let Some(profile) = report.unique_survivor() {
        let labels: Vec<String> = profile
            .iter()
            .enumerate()
            .map(|(k, &a)| game.action_label(k, a))
            .collect();
        rec.push("survivor", labels.join(","));
    }
    rec.print();
    Ok(ExitCode::SUCCESS)
}

pub fn cmd_verify(args: &VerifyArgs) -> Result<ExitCode> {
    let recipe = recipes::by_id(&args.id, args.order)?;
    let mut rec = Record::new();
    rec.push("command", "verify");
    rec.push("recipe", recipe.id);
    rec.extend(&recipe.records);
    for (i, failure) in recipe.failures.iter().enumerate() {
        rec.push(&format!("fail_{i}"), failure);
    }
    rec.push("verdict", if recipe.pass() { "pass" } else { "fail" });
    rec.print();
    Ok(if recipe.pass() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

pub fn cmd_sweep(args: &SweepArgs) -> Result<ExitCode> {
    let (game, game_name) = load_game(&args.source)?;
    if game.num_players() < 2 {
        return Err(Error::InvalidArgument(
            "sweep grids need at least two players".into(),
        ));
    }
    let (n, m) = parse_grid(&args.grid)?;
    let cfg = build_config(&args.dynamics, &game)?;
    let int_cfg = integration_config(&args.integration);
    let any = AnyField::build(game.clone(), cfg.clone())?;
    std::fs::create_dir_all(&args.out_dir)?;

    let axis1 = linspace(0.1, 0.9, n);
    let axis2 = linspace(0.1, 0.9, m);
    let mut points = Vec::with_capacity(n * m);
    for (i, &s) in axis1.iter().enumerate() {
        for (j, &u) in axis2.iter().enumerate() {
            points.push((i, j, s, u));
        }
    }

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(sweep_threads())
        .build()
        .map_err(|e| Error::InvalidArgument(format!("worker pool: {e}")))?;
    let results: Vec<Result<(usize, usize, String)>> = pool.install(|| {
        points
            .par_iter()
            .map(|&(i, j, s, u)| {
                let mut rows: Vec<Vec<f64>> = game
                    .action_counts()
                    .iter()
                    .map(|&c| vec![1.0 / c as f64; c])
                    .collect();
                rows[0] = first_action_mix(game.action_counts()[0], s);
                rows[1] = first_action_mix(game.action_counts()[1], u);
                let x0 = hodyn_core::game::MixedProfile::new(rows)?;
                let traj = integrate(any.field(), any.rest_state(&x0)?, &int_cfg)?;
                let csv = trajectory_csv(&traj, &any, false);
                std::fs::write(
                    args.out_dir.join(format!("point_{i}_{j}.csv")),
                    csv,
                )?;
                let report = classify_limit(&traj, &game, 1e-5);
                let line = format!(
                    "point_{i}_{j}=s1:{s} s2:{u} end:{} converged:{} class:{}",
                    fmt_profile(traj.end_profile()),
                    report.converged,
                    crate::output::class_name(&report.classification),
                );
                Ok((i, j, line))
            })
            .collect()
    });

    let mut lines = Vec::with_capacity(points.len());
    for r in results {
        lines.push(r?);
    }
    lines.sort();

    let mut rec = Record::new();
    rec.push("command", "sweep");
    rec.push("game", &game_name);
    rec.push("dynamics", dynamics_name(args.dynamics.dynamics));
    rec.push("order", cfg.order);
    rec.push("grid", format!("{n}x{m}"));
    rec.push("t_end", num(args.integration.t_end));
    rec.push("points", points.len());
    let mut body = rec.render();
    for (_, _, line) in &lines {
        body.push_str(line);
        body.push('\n');
    }
    std::fs::write(args.out_dir.join("sweep.txt"), &body)?;
    print!("{body}");
    Ok(ExitCode::SUCCESS)
}

fn sweep_threads() -> usize {
    match std::env::var("HODYN_THREADS") {
        Ok(v) => v.trim().parse().unwrap_or(0),
        Err(_) => 0,
    }
}

pub fn cmd_list_builtins(args: &ListBuiltinsArgs) -> Result<ExitCode> {
    if let Some(dir) = &args.export {
        std::fs::create_dir_all(dir)?;
    }
    for id in builtins::BUILTIN_IDS {
        let game = builtins::builtin(id).expect("builtin id");
        let shape: Vec<String> = game
            .action_counts()
            .iter()
            .map(|c| c.to_string())
            .collect();
        println!("{id}  {}  {}", shape.join("x"), builtins::describe(id));
        if let Some(dir) = &args.export {
            std::fs::write(dir.join(format!("{id}.json")), write_game(&game))?;
        }
    }
    Ok(ExitCode::SUCCESS)
}
