//! Minimum flight-time planning for a UAV collecting data from
//! energy-constrained sensors placed along a line.
//!
//! The UAV crosses `[S_start, S_end]` at altitude `H`. Each sensor uploads its
//! bits either while the UAV hovers above a point or while it flies over a
//! dedicated interval at constant speed. Intervals are disjoint and ordered.
//! [`planner::dp_solve`] chooses the intervals, speeds and water-filling power
//! profiles that minimize total flight time.

pub mod channel;
pub mod error;
pub mod grid;
pub mod io;
pub mod montecarlo;
pub mod plan;
pub mod planner;
pub mod quad;
pub mod scenario;
pub mod search;
pub mod single_sensor;

pub use channel::ChannelParams;
pub use error::{Error, Result};
pub use grid::Grid;
pub use plan::{FlightPlan, Mode, PlanSegment};
pub use scenario::Scenario;
pub use single_sensor::{SensorSpec, Tolerances};
