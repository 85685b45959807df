use std::ops::Add;

use rayon::prelude::*;

use crate::scenario::Scenario;
use crate::single_sensor::{
    hover_time, solve_speed_row, solve_speed_with, FlyingKernel, SensorSpec, Tolerances,
};

/// Extra flight time in seconds; `+inf` marks an infeasible action and
/// saturates under addition.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct Cost(f64);

impl Cost {
    pub const INFEASIBLE: Cost = Cost(f64::INFINITY);
    pub const ZERO: Cost = Cost(0.0);

    pub fn new(seconds: f64) -> Self {
        debug_assert!(!seconds.is_nan());
        Cost(seconds)
    }

    pub fn seconds(self) -> f64 {
        self.0
    }

    pub fn is_feasible(self) -> bool {
        self.0.is_finite()
    }
}

impl Add for Cost {
    type Output = Cost;

    fn add(self, rhs: Cost) -> Cost {
        Cost(self.0 + rhs.0)
    }
}

/// Resolved action for one `(x, y)` pair of a sensor.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum StageAction {
    Hover { duration: f64, power: f64 },
    Fly { speed: f64, water_level: f64 },
    Infeasible,
}

impl StageAction {
    pub fn cost(&self, width: f64, v_max: f64) -> Cost {
        match *self {
            StageAction::Hover { duration, .. } => Cost::new(duration),
            StageAction::Fly { speed, .. } => fly_cost(width, speed, v_max),
            StageAction::Infeasible => Cost::INFEASIBLE,
        }
    }
}

fn fly_cost(width: f64, speed: f64, v_max: f64) -> Cost {
    if speed == v_max {
        Cost::ZERO
    } else {
        Cost::new(width * (1.0 / speed - 1.0 / v_max))
    }
}

/// Resolves the action over absolute `[x, y]` for `sensor`.
pub fn resolve_action(
    sensor: &SensorSpec,
    x: f64,
    y: f64,
    scenario: &Scenario,
    tol: Tolerances,
) -> StageAction {
    let ch = &scenario.channel;
    if x == y {
        return match hover_time(sensor, x, ch, tol.hover_rel) {
            Ok(h) => StageAction::Hover {
                duration: h.duration,
                power: h.power,
            },
            Err(_) => StageAction::Infeasible,
        };
    }
    let kernel = FlyingKernel::new(x - sensor.position, y - sensor.position, sensor.energy, ch);
    match solve_speed_with(&kernel, sensor.bits, scenario.v_max, tol.speed) {
        Some(sol) => StageAction::Fly {
            speed: sol.speed,
            water_level: sol.water_level,
        },
        None => StageAction::Infeasible,
    }
}

/// Stage cost for sensor `n` over absolute `[x, y]`: hover time when
/// `x == y`, otherwise `(y-x)(1/v* - 1/v_max)`, and `+inf` when infeasible.
pub fn stage_cost(n: usize, x: f64, y: f64, scenario: &Scenario, tol: Tolerances) -> Cost {
    let action = resolve_action(&scenario.sensors[n], x, y, scenario, tol);
    action.cost(y - x, scenario.v_max)
}

/// Memoized stage costs of one sensor for every ordered pair of decision
/// points, stored as an upper triangle.
#[derive(Debug, Clone)]
pub struct StageCostTable {
    k: usize,
    costs: Vec<Cost>,
    actions: Vec<StageAction>,
}

impl StageCostTable {
    pub fn build(
        sensor: &SensorSpec,
        points: &[f64],
        scenario: &Scenario,
        tol: Tolerances,
    ) -> Self {
        let k = points.len();
        let rows: Vec<Vec<(Cost, StageAction)>> = (0..k)
            .into_par_iter()
            .map(|i| {
                let x = points[i];
                let hover = resolve_action(sensor, x, x, scenario, tol);
                let ys: Vec<f64> = points[i + 1..]
                    .iter()
                    .map(|&y| y - sensor.position)
                    .collect();
                let row = solve_speed_row(
                    x - sensor.position,
                    &ys,
                    sensor.energy,
                    sensor.bits,
                    &scenario.channel,
                    scenario.v_max,
                    tol.speed,
                );
                std::iter::once((hover.cost(0.0, scenario.v_max), hover))
                    .chain(points[i + 1..].iter().zip(row).map(|(&y, sol)| {
                        let a = match sol {
                            Some(sol) => StageAction::Fly {
                                speed: sol.speed,
                                water_level: sol.water_level,
                            },
                            None => StageAction::Infeasible,
                        };
                        (a.cost(y - x, scenario.v_max), a)
                    }))
                    .collect()
            })
            .collect();
        let (costs, actions) = rows.into_iter().flatten().unzip();
        Self { k, costs, actions }
    }

    #[inline]
    pub fn cost(&self, i: usize, j: usize) -> Cost {
        self.costs[self.offset(i) + (j - i)]
    }

    pub fn action(&self, i: usize, j: usize) -> StageAction {
        self.actions[self.offset(i) + (j - i)]
    }

    #[inline]
    fn offset(&self, i: usize) -> usize {
        // rows 0..i hold k, k-1, ..., k-i+1 entries
        i * self.k - i * i.saturating_sub(1) / 2
    }

    pub fn len(&self) -> usize {
        self.k
    }

    pub fn is_empty(&self) -> bool {
        self.k == 0
    }

    pub fn any_feasible(&self) -> bool {
        self.costs.iter().any(|c| c.is_feasible())
    }
}
