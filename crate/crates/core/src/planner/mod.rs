//! Multi-sensor flight-time minimization and comparison baselines.

mod baseline;
mod cost;
mod dp;

pub use baseline::{baseline_always_collecting, baseline_hover_only, ConstantPowerSegment};
pub use cost::{resolve_action, stage_cost, Cost, StageAction, StageCostTable};
pub use dp::{dp_solve, dp_solve_pruned, CostToGoTable, DpOutcome, DpStats, Planner};
