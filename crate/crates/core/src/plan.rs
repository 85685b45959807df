use serde::{Deserialize, Serialize};

use crate::scenario::Scenario;
use crate::single_sensor::Interval;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Hover,
    Fly,
}

/// How one sensor's data is collected.
#[derive(Debug, Clone, PartialEq)]
pub struct PlanSegment {
    pub sensor_index: usize,
    pub mode: Mode,
    /// Absolute route coordinates.
    pub interval: Interval,
    pub speed: Option<f64>,
    /// Collection time in seconds.
    pub time: f64,
    /// Water-filling level (fly segments with optimal power).
    pub water_level: Option<f64>,
    pub hover_power: Option<f64>,
    /// Constant transmit power (always-collecting baseline).
    pub constant_power: Option<f64>,
}

impl PlanSegment {
    /// Time spent beyond crossing the interval at full speed.
    pub fn overhead(&self, v_max: f64) -> f64 {
        self.time - self.interval.width() / v_max
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FlightPlan {
    pub segments: Vec<PlanSegment>,
    pub total_time: f64,
}

impl FlightPlan {
    /// `(S_end - S_start)/v_max + Σ (t_n - (y_n - x_n)/v_max)`, recomputed
    /// from the segments.
    pub fn objective(&self, scenario: &Scenario) -> f64 {
        scenario.cruise_time()
            + self
                .segments
                .iter()
                .map(|s| s.overhead(scenario.v_max))
                .sum::<f64>()
    }

    /// `S_start <= x_1 <= y_1 <= x_2 <= ... <= y_N <= S_end`.
    pub fn is_ordered(&self, scenario: &Scenario) -> bool {
        let mut prev = scenario.s_start;
        for seg in &self.segments {
            if seg.interval.x < prev || seg.interval.y < seg.interval.x {
                return false;
            }
            prev = seg.interval.y;
        }
        prev <= scenario.s_end
    }

    pub fn hover_count(&self) -> usize {
        self.segments
            .iter()
            .filter(|s| s.mode == Mode::Hover)
            .count()
    }
}
