use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use uavdc::io::{self, PlanReport, SolverMetadata};
use uavdc::montecarlo::{sweep_average_time, SolverKind};
use uavdc::planner::{baseline_always_collecting, baseline_hover_only, Planner};
use uavdc::{Error, Grid, Result, Scenario};

#[derive(Parser)]
#[command(name = "uavdc", version, about = "UAV data-collection flight planner")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Minimum-time plan for a scenario.
    Plan {
        #[arg(long)]
        scenario: PathBuf,
        /// Grid points; overrides the scenario's solver section.
        #[arg(long)]
        grid: Option<usize>,
        /// Evaluate every state instead of copying dominated ones.
        #[arg(long)]
        no_prune: bool,
        #[arg(long)]
        out: PathBuf,
    },
    /// Re-plan while sweeping one sensor quantity; one CSV row per segment.
    Sweep {
        #[arg(long)]
        scenario: PathBuf,
        #[arg(long, value_enum)]
        param: Param,
        #[arg(long)]
        from: f64,
        #[arg(long)]
        to: f64,
        #[arg(long)]
        steps: usize,
        /// Sensor index to modify; all sensors when omitted.
        #[arg(long)]
        sensor: Option<usize>,
        #[arg(long)]
        grid: Option<usize>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Average flight time over random scenarios.
    Montecarlo {
        #[arg(long)]
        config: PathBuf,
        #[arg(long, value_enum, default_value = "dp")]
        solver: SolverArg,
        #[arg(long)]
        out: PathBuf,
    },
    /// Comparison plan.
    Baseline {
        #[arg(long)]
        scenario: PathBuf,
        #[arg(long, value_enum)]
        kind: BaselineKind,
        #[arg(long)]
        grid: Option<usize>,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Param {
    #[value(name = "B")]
    B,
    #[value(name = "E")]
    E,
}

#[derive(Clone, Copy, ValueEnum)]
enum SolverArg {
    Dp,
    Hover,
    Always,
}

#[derive(Clone, Copy, ValueEnum)]
enum BaselineKind {
    Hover,
    Always,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = std::env::var("UAVDC_THREADS")
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
    {
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global();
    }
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let record = json!({ "error": e.kind(), "message": e.to_string() });
            eprintln!("{record}");
            ExitCode::from(if e.is_infeasible() { 2 } else { 1 })
        }
    }
}

fn run(command: Command) -> Result<()> {
    match command {
        Command::Plan {
            scenario,
            grid,
            no_prune,
            out,
        } => {
            let (sc, mut settings) = io::parse_scenario(&scenario)?;
            if let Some(m) = grid {
                settings.grid_points = m;
            }
            let g = Grid::uniform(sc.s_start, sc.s_end, settings.grid_points)?;
            let outcome = Planner::new(&sc, &g, settings.tolerances())?.solve(!no_prune)?;
            let meta = SolverMetadata::new("dp", &settings).with_stats(&outcome.stats, !no_prune);
            write(
                &out,
                &io::to_json(&PlanReport::new(&sc, settings, &outcome.plan, meta)),
            )
        }
        Command::Sweep {
            scenario,
            param,
            from,
            to,
            steps,
            sensor,
            grid,
            out,
        } => {
            let (sc, mut settings) = io::parse_scenario(&scenario)?;
            if let Some(m) = grid {
                settings.grid_points = m;
            }
            if steps < 1 {
                return Err(Error::InvalidInput {
                    name: "steps",
                    reason: "must be >= 1".into(),
                });
            }
            if let Some(i) = sensor {
                if i >= sc.sensors.len() {
                    return Err(Error::InvalidInput {
                        name: "sensor",
                        reason: format!("index {i} out of range"),
                    });
                }
            }
            let mut rows = Vec::with_capacity(steps);
            for k in 0..steps {
                let value = if steps == 1 {
                    from
                } else {
                    from + (to - from) * k as f64 / (steps - 1) as f64
                };
                let variant = with_param(&sc, param, sensor, value)?;
                let g = Grid::uniform(variant.s_start, variant.s_end, settings.grid_points)?;
                let plan = Planner::new(&variant, &g, settings.tolerances())?
                    .solve(true)?
                    .plan;
                rows.push((value, plan));
            }
            write(&out, &io::sweep_csv(&rows))
        }
        Command::Montecarlo {
            config,
            solver,
            out,
        } => {
            let file = io::parse_montecarlo(&config)?;
            let cfg = file.to_config()?;
            let (kind, label) = match solver {
                SolverArg::Dp => (SolverKind::Dp, "dp"),
                SolverArg::Hover => (SolverKind::Hover, "hover_only"),
                SolverArg::Always => (SolverKind::Always, "always_collecting"),
            };
            let points = sweep_average_time(&cfg, file.sweep.param, &file.sweep.values, kind)?;
            write(&out, &io::curve_csv(file.sweep.param, label, &points))
        }
        Command::Baseline {
            scenario,
            kind,
            grid,
            out,
        } => {
            let (sc, mut settings) = io::parse_scenario(&scenario)?;
            if let Some(m) = grid {
                settings.grid_points = m;
            }
            let (plan, name) = match kind {
                BaselineKind::Hover => (
                    baseline_hover_only(&sc, settings.tolerances())?,
                    "hover_only",
                ),
                BaselineKind::Always => {
                    let g = Grid::uniform(sc.s_start, sc.s_end, settings.grid_points)?;
                    (
                        baseline_always_collecting(&sc, &g, settings.tolerances())?,
                        "always_collecting",
                    )
                }
            };
            let meta = SolverMetadata::new(name, &settings);
            write(
                &out,
                &io::to_json(&PlanReport::new(&sc, settings, &plan, meta)),
            )
        }
    }
}

fn with_param(sc: &Scenario, param: Param, sensor: Option<usize>, value: f64) -> Result<Scenario> {
    let mut variant = sc.clone();
    for (i, s) in variant.sensors.iter_mut().enumerate() {
        if sensor.is_none_or(|k| k == i) {
            match param {
                Param::B => s.bits = value,
                Param::E => s.energy = value,
            }
        }
    }
    variant.validate()?;
    Ok(variant)
}

fn write(path: &Path, contents: &str) -> Result<()> {
    std::fs::write(path, contents)?;
    Ok(())
}
