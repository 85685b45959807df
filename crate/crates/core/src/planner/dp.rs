//! Backward recursion over sensors.
//!
//! The state before sensor `n` is where the previous sensor's interval ended;
//! the action is the pair `x <= y` of decision points at or after it. With
//! `J_{N}(s) = (S_end - S_start)/v_max` for every state,
//!
//! ```text
//! J_n(s) = min_{s <= x <= y} g_n(x, y) + J_{n+1}(y)
//! ```
//!
//! and the minimum flight time is `J_0(S_start)`.
//!
//! If the minimizer for state `s` starts at `x* > s`, every state in
//! `(s, x*]` has the same minimizer (its candidate set is a subset that still
//! contains it), so the pruned sweep copies the value and action instead of
//! re-evaluating them.

use crate::error::{Error, Result};
use crate::grid::Grid;
use crate::plan::{FlightPlan, Mode, PlanSegment};
use crate::scenario::Scenario;
use crate::single_sensor::{Interval, Tolerances};

use super::cost::{Cost, StageAction, StageCostTable};

/// Cost-to-go values and minimizing actions on the decision points.
#[derive(Debug, Clone, PartialEq)]
pub struct CostToGoTable {
    pub points: Vec<f64>,
    /// `values[n][k]` for stage `n` in `0..=N`; stage `N` is terminal.
    pub values: Vec<Vec<f64>>,
    /// `actions[n][k] = Some((i, j))` for stages `0..N`.
    pub actions: Vec<Vec<Option<(usize, usize)>>>,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct DpStats {
    /// States whose minimization was carried out.
    pub states_evaluated: usize,
    /// States filled by copying a neighbour's result.
    pub states_copied: usize,
}

#[derive(Debug, Clone)]
pub struct DpOutcome {
    pub plan: FlightPlan,
    pub table: CostToGoTable,
    pub stats: DpStats,
}

/// Decision points and memoized stage costs for a scenario.
#[derive(Debug, Clone)]
pub struct Planner<'a> {
    scenario: &'a Scenario,
    points: Vec<f64>,
    tables: Vec<StageCostTable>,
}

impl<'a> Planner<'a> {
    /// Builds every stage-cost table up front. Decision points are the grid
    /// plus the sensor positions, so hovering right above a sensor is always
    /// an available action.
    pub fn new(scenario: &'a Scenario, grid: &Grid, tol: Tolerances) -> Result<Self> {
        scenario.validate()?;
        check_grid(scenario, grid)?;
        let anchors: Vec<f64> = scenario.sensors.iter().map(|s| s.position).collect();
        let points = grid.with_anchors(&anchors);
        let tables = scenario
            .sensors
            .iter()
            .map(|s| StageCostTable::build(s, &points, scenario, tol))
            .collect();
        Ok(Self {
            scenario,
            points,
            tables,
        })
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }

    pub fn stage_table(&self, n: usize) -> &StageCostTable {
        &self.tables[n]
    }

    pub fn solve(&self, prune: bool) -> Result<DpOutcome> {
        let k = self.points.len();
        let n_sensors = self.scenario.sensors.len();
        let terminal = self.scenario.cruise_time();

        let mut values = vec![vec![0.0; k]; n_sensors + 1];
        let mut actions = vec![vec![None; k]; n_sensors];
        values[n_sensors] = vec![terminal; k];
        let mut stats = DpStats::default();

        for n in (0..n_sensors).rev() {
            let (head, tail) = values.split_at_mut(n + 1);
            let next = &tail[0];
            let current = &mut head[n];
            let rows = row_minima(&self.tables[n], next);

            let mut s = 0;
            while s < k {
                let best = best_from(&rows, s);
                stats.states_evaluated += 1;
                let (value, action) = match best {
                    Some((v, i, j)) => (v.seconds(), Some((i, j))),
                    None => (f64::INFINITY, None),
                };
                current[s] = value;
                actions[n][s] = action;
                let mut last = s;
                if prune {
                    if let Some((i, _)) = action {
                        for t in s + 1..=i {
                            current[t] = value;
                            actions[n][t] = action;
                            stats.states_copied += 1;
                        }
                        last = i.max(s);
                    }
                }
                s = last + 1;
            }
        }

        let start = 0;
        if !values[0][start].is_finite() {
            let sensor = (0..n_sensors)
                .rev()
                .find(|&n| !values[n][start].is_finite())
                .unwrap_or(0);
            return Err(Error::PlanInfeasible { sensor });
        }

        let plan = self.extract(&values, &actions)?;
        Ok(DpOutcome {
            plan,
            table: CostToGoTable {
                points: self.points.clone(),
                values,
                actions,
            },
            stats,
        })
    }

    fn extract(
        &self,
        values: &[Vec<f64>],
        actions: &[Vec<Option<(usize, usize)>>],
    ) -> Result<FlightPlan> {
        let mut state = 0;
        let mut segments = Vec::with_capacity(actions.len());
        for (n, stage) in actions.iter().enumerate() {
            let (i, j) = stage[state].ok_or(Error::PlanInfeasible { sensor: n })?;
            segments.push(segment_for(
                n,
                self.points[i],
                self.points[j],
                self.tables[n].action(i, j),
            ));
            state = j;
        }
        Ok(FlightPlan {
            segments,
            total_time: values[0][0],
        })
    }
}

pub(crate) fn segment_for(n: usize, x: f64, y: f64, action: StageAction) -> PlanSegment {
    match action {
        StageAction::Hover { duration, power } => PlanSegment {
            sensor_index: n,
            mode: Mode::Hover,
            interval: Interval::hover(x),
            speed: None,
            time: duration,
            water_level: None,
            hover_power: Some(power),
            constant_power: None,
        },
        StageAction::Fly { speed, water_level } => PlanSegment {
            sensor_index: n,
            mode: Mode::Fly,
            interval: Interval { x, y },
            speed: Some(speed),
            time: (y - x) / speed,
            water_level: Some(water_level),
            hover_power: None,
            constant_power: None,
        },
        StageAction::Infeasible => unreachable!("infeasible action selected"),
    }
}

fn check_grid(scenario: &Scenario, grid: &Grid) -> Result<()> {
    let p = grid.points();
    if p[0] != scenario.s_start || p[p.len() - 1] != scenario.s_end {
        return Err(Error::invalid(
            "grid",
            format!(
                "grid [{}, {}] does not span the route [{}, {}]",
                p[0],
                p[p.len() - 1],
                scenario.s_start,
                scenario.s_end
            ),
        ));
    }
    Ok(())
}

/// For every `x` index, the best `(value, y)` over `y >= x`, ties toward the
/// smaller `y`.
fn row_minima(table: &StageCostTable, next: &[f64]) -> Vec<Option<(Cost, usize)>> {
    let k = next.len();
    (0..k)
        .map(|i| {
            let mut best: Option<(Cost, usize)> = None;
            for j in i..k {
                let c = table.cost(i, j);
                if !c.is_feasible() || !next[j].is_finite() {
                    continue;
                }
                let v = c + Cost::new(next[j]);
                if best.is_none_or(|(b, _)| v < b) {
                    best = Some((v, j));
                }
            }
            best
        })
        .collect()
}

/// Minimizer over `x >= s`, ordered by (value, y, x).
fn best_from(rows: &[Option<(Cost, usize)>], s: usize) -> Option<(Cost, usize, usize)> {
    let mut best: Option<(Cost, usize, usize)> = None;
    for (i, row) in rows.iter().enumerate().skip(s) {
        if let Some((v, j)) = *row {
            let better = match best {
                None => true,
                Some((bv, bj, _)) => v < bv || (v == bv && j < bj),
            };
            if better {
                best = Some((v, i, j));
            }
        }
    }
    best
}

/// Unpruned recursion: every state is minimized independently.
pub fn dp_solve(scenario: &Scenario, grid: &Grid, tol: Tolerances) -> Result<DpOutcome> {
    Planner::new(scenario, grid, tol)?.solve(false)
}

/// Recursion with plateau copying; identical tables to [`dp_solve`].
pub fn dp_solve_pruned(scenario: &Scenario, grid: &Grid, tol: Tolerances) -> Result<DpOutcome> {
    Planner::new(scenario, grid, tol)?.solve(true)
}
