//! CSV and key=value rendering. Floats print in Rust's shortest round-trip
//! form, so identical runs produce byte-identical files.

use std::fmt::Write as _;
use std::path::Path;

use hodyn_core::analysis::{LimitClass, LimitReport, RateFit};
use hodyn_core::game::MixedProfile;
use hodyn_core::integrator::{EventKind, Trajectory};
use hodyn_core::Result;

use crate::setup::AnyField;

/// Shortest round-trip form, switching to scientific notation once plain
/// decimal would pad with zeros. Extinction runs produce shares around
/// 1e-300; nobody wants those written out longhand.
pub fn num(v: f64) -> String {
    if v == 0.0 || (v.abs() >= 1e-4 && v.abs() < 1e9) {
        format!("{v}")
    } else {
        format!("{v:e}")
    }
}

/// Line-oriented key=value record builder.
#[derive(Default)]
pub struct Record {
    lines: Vec<String>,
}

impl Record {
    pub fn new() -> Record {
        Record::default()
    }

    pub fn push(&mut self, key: &str, value: impl std::fmt::Display) {
        self.lines.push(format!("{key}={value}"));
    }

    pub fn extend(&mut self, pairs: &[(String, String)]) {
        for (k, v) in pairs {
            self.lines.push(format!("{k}={v}"));
        }
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        for line in &self.lines {
            out.push_str(line);
            out.push('\n');
        }
        out
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.render())?;
        Ok(())
    }

    pub fn print(&self) {
        print!("{}", self.render());
    }
}

pub fn fmt_profile(x: &MixedProfile) -> String {
    (0..x.num_players())
        .map(|k| {
            x.weights(k)
                .iter()
                .map(|v| num(*v))
                .collect::<Vec<_>>()
                .join(",")
        })
        .collect::<Vec<_>>()
        .join(";")
}

pub fn fmt_rows(rows: &[Vec<f64>]) -> String {
    rows.iter()
        .map(|row| {
            row.iter()
                .map(|v| num(*v))
                .collect::<Vec<_>>()
                .join(",")
        })
        .collect::<Vec<_>>()
        .join(";")
}

pub fn class_name(class: &LimitClass) -> &'static str {
    match class {
        LimitClass::StrictNash => "strict-nash",
        LimitClass::Nash => "nash",
        LimitClass::RestrictedEqOnly => "restricted-equilibrium",
        LimitClass::NotStationary => "not-stationary",
    }
}

fn column_name(prefix: &str, player: usize, label: &str) -> String {
    let clean: String = label
        .chars()
        .map(|c| if c.is_alphanumeric() { c } else { '_' })
        .collect();
    format!("{prefix}_{player}_{clean}")
}

/// Renders the sampled trajectory: `t`, the profile weights in declaration
/// order, then (optionally) every state level's raw coordinates.
pub fn trajectory_csv(traj: &Trajectory, any: &AnyField, with_levels: bool) -> String {
    let game = any.field().game();
    let order = any.field().order();
    let mut header: Vec<String> = vec!["t".into()];
    for k in 0..game.num_players() {
        for a in 0..game.action_counts()[k] {
            header.push(column_name("x", k, &game.action_label(k, a)));
        }
    }
    if with_levels {
        let labels = any.row_labels();
        for level in 0..order {
            for (k, row) in labels.iter().enumerate() {
                for label in row {
                    header.push(column_name(&format!("lvl{level}"), k, label));
                }
            }
        }
    }
    let mut out = header.join(",");
    out.push('\n');
    for (i, t) in traj.times.iter().enumerate() {
        let mut line = num(*t);
        let x = &traj.profiles[i];
        for k in 0..game.num_players() {
            for v in x.weights(k) {
                let _ = write!(line, ",{}", num(*v));
            }
        }
        if with_levels {
            for level in 0..order {
                for row in any.level(&traj.states[i], level) {
                    for v in row {
                        let _ = write!(line, ",{}", num(v));
                    }
                }
            }
        }
        out.push_str(&line);
        out.push('\n');
    }
    out
}

pub fn record_events(rec: &mut Record, traj: &Trajectory) {
    rec.push("event_count", traj.events.len());
    for (i, ev) in traj.events.iter().enumerate() {
        match &ev.kind {
            EventKind::Extinction { player, action, threshold, via_score } => {
                rec.push(&format!("event_{i}_kind"), "extinction");
                rec.push(&format!("event_{i}_time"), num(ev.time));
                rec.push(&format!("event_{i}_player"), player);
                rec.push(&format!("event_{i}_action"), action);
                rec.push(&format!("event_{i}_threshold"), num(*threshold));
                rec.push(&format!("event_{i}_via_score"), via_score);
            }
            EventKind::Convergence { radius, dwell } => {
                rec.push(&format!("event_{i}_kind"), "convergence");
                rec.push(&format!("event_{i}_time"), num(ev.time));
                rec.push(&format!("event_{i}_radius"), num(*radius));
                rec.push(&format!("event_{i}_dwell"), num(*dwell));
            }
        }
    }
}

pub fn record_limit(rec: &mut Record, report: &LimitReport) {
    rec.push("converged", report.converged);
    rec.push("classification", class_name(&report.classification));
    rec.push("tail_decreasing", report.tail_decreasing);
    if let Some(limit) = &report.limit {
        rec.push("limit", fmt_profile(limit));
    }
}

pub fn record_fit(rec: &mut Record, prefix: &str, fit: &RateFit) {
    rec.push(&format!("{prefix}_exponent"), num(fit.exponent_estimate));
    rec.push(&format!("{prefix}_coefficient"), num(fit.coefficient_estimate));
    rec.push(&format!("{prefix}_window_start"), num(fit.window.0));
    rec.push(&format!("{prefix}_window_end"), num(fit.window.1));
    rec.push(&format!("{prefix}_residual"), num(fit.residual));
    rec.push(&format!("{prefix}_samples"), fit.samples);
}
