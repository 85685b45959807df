//! Random-scenario ensembles and average flight-time curves.
//!
//! Sensor positions are i.i.d. uniform over the route, then sorted. Bits and
//! energy are uniform on `(0, 2·mean]` and each pair is redrawn until the
//! sensor is feasible. Trial `t` uses a ChaCha generator seeded with
//! `seed ^ t`; positions come from stream 0 and sensor `n`'s candidate pairs
//! from stream `n + 1`. Every solver and every sweep value therefore sees the
//! same uniform draws for a given trial, and a rejection at one sensor does
//! not shift the draws of the next.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::channel::ChannelParams;
use crate::error::{Error, Result};
use crate::grid::Grid;
use crate::planner::{baseline_always_collecting, baseline_hover_only, Planner};
use crate::scenario::Scenario;
use crate::single_sensor::{feasibility, SensorSpec, Tolerances};

/// Draw cap per (bits, energy) pair.
pub const MAX_PAIR_ATTEMPTS: usize = 10_000;

#[derive(Debug, Clone, PartialEq)]
pub struct EnsembleConfig {
    pub mean_bits: f64,
    pub mean_energy: f64,
    pub sensor_count: usize,
    pub s_start: f64,
    pub s_end: f64,
    pub trials: usize,
    pub seed: u64,
    pub channel: ChannelParams,
    pub v_max: f64,
    pub grid_points: usize,
    pub tolerances: Tolerances,
}

impl EnsembleConfig {
    /// `N = 10` sensors over `[0, 10 km]`, reference channel, `v_max = 26`,
    /// 100 trials.
    pub fn reference(mean_bits: f64, mean_energy: f64) -> Self {
        Self {
            mean_bits,
            mean_energy,
            sensor_count: 10,
            s_start: 0.0,
            s_end: 10_000.0,
            trials: 100,
            seed: 0,
            channel: ChannelParams::reference(),
            v_max: 26.0,
            grid_points: 201,
            tolerances: Tolerances::default(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.trials < 1 {
            return Err(Error::invalid("trials", "must be >= 1"));
        }
        if !(self.mean_bits > 0.0 && self.mean_bits.is_finite()) {
            return Err(Error::invalid(
                "mean_bits",
                format!("{} must be > 0", self.mean_bits),
            ));
        }
        if !(self.mean_energy > 0.0 && self.mean_energy.is_finite()) {
            return Err(Error::invalid(
                "mean_energy",
                format!("{} must be > 0", self.mean_energy),
            ));
        }
        if !(self.s_start < self.s_end) {
            return Err(Error::invalid("route", "start must be before end"));
        }
        if !(self.v_max > 0.0) {
            return Err(Error::invalid("v_max", "must be > 0"));
        }
        if self.grid_points < 2 {
            return Err(Error::invalid("grid points", "must be >= 2"));
        }
        Ok(())
    }

    /// Configuration whose seed draws trial `trial`: `seed ^ trial`.
    pub fn for_trial(&self, trial: usize) -> Self {
        Self {
            seed: self.seed ^ trial as u64,
            ..self.clone()
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SweepParam {
    #[serde(rename = "B")]
    MeanBits,
    #[serde(rename = "E")]
    MeanEnergy,
}

impl SweepParam {
    pub fn label(&self) -> &'static str {
        match self {
            SweepParam::MeanBits => "B",
            SweepParam::MeanEnergy => "E",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SolverKind {
    Dp,
    Hover,
    Always,
}

impl SolverKind {
    pub fn run(&self, scenario: &Scenario, config: &EnsembleConfig) -> Result<f64> {
        let grid = Grid::uniform(scenario.s_start, scenario.s_end, config.grid_points)?;
        let plan = match self {
            SolverKind::Dp => {
                Planner::new(scenario, &grid, config.tolerances)?
                    .solve(true)?
                    .plan
            }
            SolverKind::Hover => baseline_hover_only(scenario, config.tolerances)?,
            SolverKind::Always => baseline_always_collecting(scenario, &grid, config.tolerances)?,
        };
        Ok(plan.total_time)
    }
}

/// One point of an average-time curve.
#[derive(Debug, Clone, PartialEq)]
pub struct CurvePoint {
    pub value: f64,
    pub mean_time: f64,
    /// Sample standard deviation over successful trials.
    pub std_time: f64,
    /// Successful trials.
    pub trials: usize,
    pub failed: usize,
    /// Mean of the accepted per-sensor bits, which rejection pulls below the
    /// nominal mean.
    pub mean_bits_accepted: f64,
    pub mean_energy_accepted: f64,
}

impl CurvePoint {
    pub fn flagged(&self) -> bool {
        self.failed > 0
    }
}

/// One random scenario, determined by `config.seed`.
pub fn sample_scenario(config: &EnsembleConfig) -> Result<Scenario> {
    config.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let span = config.s_end - config.s_start;
    let positions = loop {
        let mut p: Vec<f64> = (0..config.sensor_count)
            .map(|_| config.s_start + span * rng.gen::<f64>())
            .collect();
        p.sort_by(f64::total_cmp);
        if p.windows(2).all(|w| w[0] < w[1]) {
            break p;
        }
    };
    let mut sensors = Vec::with_capacity(config.sensor_count);
    for (n, position) in positions.into_iter().enumerate() {
        let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
        rng.set_stream(n as u64 + 1);
        let mut accepted = None;
        for _ in 0..MAX_PAIR_ATTEMPTS {
            let bits = (1.0 - rng.gen::<f64>()) * 2.0 * config.mean_bits;
            let energy = (1.0 - rng.gen::<f64>()) * 2.0 * config.mean_energy;
            let s = SensorSpec {
                position,
                bits,
                energy,
            };
            if feasibility(&s, &config.channel) {
                accepted = Some(s);
                break;
            }
        }
        sensors.push(accepted.ok_or(Error::EnsembleInfeasible {
            attempts: MAX_PAIR_ATTEMPTS,
        })?);
    }
    Scenario::new(
        config.s_start,
        config.s_end,
        config.v_max,
        sensors,
        config.channel,
    )
}

/// Outcome of one trial.
#[derive(Debug)]
pub struct TrialOutcome {
    pub trial: usize,
    pub scenario: Scenario,
    pub total_time: Result<f64>,
}

/// Samples and solves every trial; results are ordered by trial index.
pub fn run_trials(config: &EnsembleConfig, solver: SolverKind) -> Result<Vec<TrialOutcome>> {
    config.validate()?;
    (0..config.trials)
        .into_par_iter()
        .map(|trial| {
            let scenario = sample_scenario(&config.for_trial(trial))?;
            let total_time = solver.run(&scenario, config);
            Ok(TrialOutcome {
                trial,
                scenario,
                total_time,
            })
        })
        .collect()
}

/// Average flight time for each sweep value.
pub fn sweep_average_time(
    config: &EnsembleConfig,
    param: SweepParam,
    values: &[f64],
    solver: SolverKind,
) -> Result<Vec<CurvePoint>> {
    values
        .iter()
        .map(|&value| {
            let mut cfg = config.clone();
            match param {
                SweepParam::MeanBits => cfg.mean_bits = value,
                SweepParam::MeanEnergy => cfg.mean_energy = value,
            }
            let outcomes = run_trials(&cfg, solver)?;
            Ok(aggregate(value, &outcomes))
        })
        .collect()
}

fn aggregate(value: f64, outcomes: &[TrialOutcome]) -> CurvePoint {
    let times: Vec<f64> = outcomes
        .iter()
        .filter_map(|o| o.total_time.as_ref().ok().copied())
        .collect();
    let n = times.len();
    let mean = if n > 0 {
        times.iter().sum::<f64>() / n as f64
    } else {
        f64::NAN
    };
    let std = if n > 1 {
        (times.iter().map(|t| (t - mean).powi(2)).sum::<f64>() / (n - 1) as f64).sqrt()
    } else {
        0.0
    };
    let sensors: Vec<&SensorSpec> = outcomes.iter().flat_map(|o| &o.scenario.sensors).collect();
    let count = sensors.len().max(1) as f64;
    CurvePoint {
        value,
        mean_time: mean,
        std_time: std,
        trials: n,
        failed: outcomes.len() - n,
        mean_bits_accepted: sensors.iter().map(|s| s.bits).sum::<f64>() / count,
        mean_energy_accepted: sensors.iter().map(|s| s.energy).sum::<f64>() / count,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::single_sensor::feasibility_threshold;

    #[test]
    fn same_seed_same_scenario() {
        let cfg = EnsembleConfig {
            seed: 42,
            ..EnsembleConfig::reference(3e6, 1.0)
        };
        assert_eq!(
            sample_scenario(&cfg).unwrap(),
            sample_scenario(&cfg).unwrap()
        );
        let other = EnsembleConfig {
            seed: 43,
            ..cfg.clone()
        };
        assert_ne!(
            sample_scenario(&cfg).unwrap(),
            sample_scenario(&other).unwrap()
        );
    }

    #[test]
    fn accepted_pairs_are_feasible_and_sorted() {
        let cfg = EnsembleConfig {
            seed: 7,
            sensor_count: 50,
            ..EnsembleConfig::reference(5e6, 0.05)
        };
        let sc = sample_scenario(&cfg).unwrap();
        assert_eq!(sc.sensors.len(), 50);
        for w in sc.sensors.windows(2) {
            assert!(w[0].position < w[1].position);
        }
        for s in &sc.sensors {
            assert!(s.bits < feasibility_threshold(s.energy, &cfg.channel));
            assert!(s.bits > 0.0 && s.bits <= 1e7);
            assert!(s.energy > 0.0 && s.energy <= 0.1);
        }
    }

    #[test]
    fn accepted_means_match_truncated_distribution() {
        let (bbar, ebar) = (3e6, 0.02);
        let cfg = EnsembleConfig {
            seed: 11,
            sensor_count: 100_000,
            ..EnsembleConfig::reference(bbar, ebar)
        };
        let sc = sample_scenario(&cfg).unwrap();
        let n = sc.sensors.len() as f64;
        let mb = sc.sensors.iter().map(|s| s.bits).sum::<f64>() / n;
        let me = sc.sensors.iter().map(|s| s.energy).sum::<f64>() / n;

        // E ~ U(0, 2Ē], B | E ~ U(0, 2B̄] restricted to B < cE
        let c = feasibility_threshold(1.0, &cfg.channel);
        let panels = 200_000;
        let h = 2.0 * ebar / panels as f64;
        let (mut mass, mut b_mom, mut e_mom) = (0.0, 0.0, 0.0);
        for i in 0..panels {
            let e = (i as f64 + 0.5) * h;
            let top = (c * e).min(2.0 * bbar);
            let p = top / (2.0 * bbar);
            mass += p;
            b_mom += p * top / 2.0;
            e_mom += p * e;
        }
        let (ob, oe) = (b_mom / mass, e_mom / mass);
        assert!(ob < 0.9 * bbar);
        assert!(((mb - ob) / ob).abs() < 0.02, "{mb} vs {ob}");
        assert!(((me - oe) / oe).abs() < 0.02, "{me} vs {oe}");
    }

    #[test]
    fn extreme_means_are_rejected() {
        // threshold at 2 nJ is ~290 bits; 1 Gb mean is never accepted
        let cfg = EnsembleConfig {
            sensor_count: 1,
            ..EnsembleConfig::reference(1e9, 1e-9)
        };
        assert!(matches!(
            sample_scenario(&cfg),
            Err(Error::EnsembleInfeasible { .. })
        ));
    }

    #[test]
    fn invalid_config() {
        let cfg = EnsembleConfig {
            trials: 0,
            ..EnsembleConfig::reference(1e6, 1.0)
        };
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn aggregate_counts_failures() {
        let sc = sample_scenario(&EnsembleConfig::reference(1e6, 1.0)).unwrap();
        let outcomes = vec![
            TrialOutcome {
                trial: 0,
                scenario: sc.clone(),
                total_time: Ok(10.0),
            },
            TrialOutcome {
                trial: 1,
                scenario: sc.clone(),
                total_time: Ok(14.0),
            },
            TrialOutcome {
                trial: 2,
                scenario: sc,
                total_time: Err(Error::PlanInfeasible { sensor: 3 }),
            },
        ];
        let p = aggregate(1.0, &outcomes);
        assert_eq!(p.trials, 2);
        assert_eq!(p.failed, 1);
        assert!(p.flagged());
        assert_eq!(p.mean_time, 12.0);
        assert!((p.std_time - 8f64.sqrt()).abs() < 1e-12);
    }
}
