//! Comparison policies.
//!
//! * hover-only: cross the route at `v_max` and hover above every sensor;
//! * always-collecting: split the route into consecutive segments, one per
//!   sensor in order, each flown at a constant speed with constant transmit
//!   power `v E / (z_n - z_{n-1})`. Boundaries are chosen by a recursion over
//!   the decision points analogous to the main planner.

use std::f64::consts::LN_2;

use rayon::prelude::*;

use crate::channel::ChannelParams;
use crate::error::{Error, Result};
use crate::grid::Grid;
use crate::plan::{FlightPlan, Mode, PlanSegment};
use crate::quad;
use crate::scenario::Scenario;
use crate::search;
use crate::single_sensor::{hover_time, Interval, SensorSpec, Tolerances};

pub fn baseline_hover_only(scenario: &Scenario, tol: Tolerances) -> Result<FlightPlan> {
    scenario.validate()?;
    let mut segments = Vec::with_capacity(scenario.sensors.len());
    let mut total = scenario.cruise_time();
    for (n, sensor) in scenario.sensors.iter().enumerate() {
        let h = hover_time(sensor, sensor.position, &scenario.channel, tol.hover_rel)?;
        total += h.duration;
        segments.push(PlanSegment {
            sensor_index: n,
            mode: Mode::Hover,
            interval: Interval::hover(sensor.position),
            speed: None,
            time: h.duration,
            water_level: None,
            hover_power: Some(h.power),
            constant_power: None,
        });
    }
    Ok(FlightPlan {
        segments,
        total_time: total,
    })
}

/// Throughput of a constant-power pass over a sensor-relative segment as a
/// function of speed.
#[derive(Debug, Clone, Copy)]
pub struct ConstantPowerSegment {
    a: f64,
    b: f64,
    energy: f64,
    channel: ChannelParams,
}

impl ConstantPowerSegment {
    pub fn new(a: f64, b: f64, energy: f64, channel: ChannelParams) -> Self {
        Self {
            a,
            b,
            energy,
            channel,
        }
    }

    pub fn width(&self) -> f64 {
        self.b - self.a
    }

    pub fn power(&self, v: f64) -> f64 {
        v * self.energy / self.width()
    }

    /// `(W / 2v) ∫ₐᵇ log₂(1 + P β / (s²+H²)^(α/2)) ds` with `P = vE/(b-a)`.
    pub fn throughput(&self, v: f64) -> f64 {
        let q = self.power(v) * self.channel.beta;
        0.5 * self.channel.bandwidth / (v * LN_2) * self.log_integral(q)
    }

    /// Limit of [`Self::throughput`] as `v -> 0+` (low-SNR regime), an upper
    /// bound on the throughput at any positive speed.
    pub fn throughput_limit(&self) -> f64 {
        let ch = &self.channel;
        let inv = if ch.alpha == 2.0 {
            let h = ch.altitude;
            ((self.b / h).atan() - (self.a / h).atan()) / h
        } else {
            quad::integrate(|s| 1.0 / ch.pathloss(s), self.a, self.b, 1e-10)
        };
        0.5 * ch.bandwidth * self.energy * ch.beta / (self.width() * LN_2) * inv
    }

    // ∫ₐᵇ ln(1 + q / pathloss(s)) ds
    fn log_integral(&self, q: f64) -> f64 {
        let ch = &self.channel;
        let h = ch.altitude;
        if ch.alpha == 2.0 && q > 1e-6 * h * h {
            let c = (h * h + q).sqrt();
            let anti = |s: f64| {
                s * (q / (s * s + h * h)).ln_1p() + 2.0 * c * (s / c).atan()
                    - 2.0 * h * (s / h).atan()
            };
            anti(self.b) - anti(self.a)
        } else {
            quad::integrate(|s| (q / ch.pathloss(s)).ln_1p(), self.a, self.b, 1e-11)
        }
    }

    /// Fastest speed in `(0, v_max]` delivering `bits`, or `None`.
    pub fn solve_speed(&self, bits: f64, v_max: f64, speed_tol: f64) -> Option<f64> {
        if !(self.width() > 0.0) || !(self.throughput_limit() > bits) {
            return None;
        }
        let at_max = self.throughput(v_max);
        if at_max >= bits {
            return Some(v_max);
        }
        let start = search::Bracket {
            lo: 0.0,
            hi: v_max,
            f_lo: self.throughput_limit() - bits,
            f_hi: at_max - bits,
            at_lo: (),
            at_hi: (),
        };
        let b = search::illinois(
            start,
            |v| (self.throughput(v) - bits, ()),
            |b| b.lo > 0.0 && b.hi - b.lo <= speed_tol,
        );
        (b.lo > 0.0).then_some(b.lo)
    }
}

#[derive(Debug, Clone, Copy)]
struct SegmentChoice {
    cost: f64,
    speed: f64,
}

fn segment_choice(
    sensor: &SensorSpec,
    za: f64,
    zb: f64,
    scenario: &Scenario,
    tol: Tolerances,
) -> Option<SegmentChoice> {
    let seg = ConstantPowerSegment::new(
        za - sensor.position,
        zb - sensor.position,
        sensor.energy,
        scenario.channel,
    );
    let speed = seg.solve_speed(sensor.bits, scenario.v_max, tol.speed)?;
    let cost = if speed == scenario.v_max {
        0.0
    } else {
        (zb - za) * (1.0 / speed - 1.0 / scenario.v_max)
    };
    Some(SegmentChoice { cost, speed })
}

pub fn baseline_always_collecting(
    scenario: &Scenario,
    grid: &Grid,
    tol: Tolerances,
) -> Result<FlightPlan> {
    scenario.validate()?;
    let anchors: Vec<f64> = scenario.sensors.iter().map(|s| s.position).collect();
    let points = grid.with_anchors(&anchors);
    if points[0] != scenario.s_start || points[points.len() - 1] != scenario.s_end {
        return Err(Error::invalid("grid", "grid does not span the route"));
    }
    let k = points.len();
    let n_sensors = scenario.sensors.len();
    if n_sensors == 0 {
        return Ok(FlightPlan {
            segments: Vec::new(),
            total_time: scenario.cruise_time(),
        });
    }

    // choices[n][i][j - i - 1] for segment [points[i], points[j]], i < j
    let choices: Vec<Vec<Vec<Option<SegmentChoice>>>> = scenario
        .sensors
        .iter()
        .map(|sensor| {
            (0..k)
                .into_par_iter()
                .map(|i| {
                    (i + 1..k)
                        .map(|j| segment_choice(sensor, points[i], points[j], scenario, tol))
                        .collect()
                })
                .collect()
        })
        .collect();

    // cost_to_go[n][i]: boundary z_n at points[i]; z_N must be the route end
    let mut cost_to_go = vec![vec![f64::INFINITY; k]; n_sensors + 1];
    cost_to_go[n_sensors][k - 1] = 0.0;
    let mut next_boundary = vec![vec![usize::MAX; k]; n_sensors];
    for n in (0..n_sensors).rev() {
        for i in 0..k {
            let mut best = f64::INFINITY;
            let mut arg = usize::MAX;
            for j in i + 1..k {
                let tail = cost_to_go[n + 1][j];
                if !tail.is_finite() {
                    continue;
                }
                if let Some(c) = choices[n][i][j - i - 1] {
                    let v = c.cost + tail;
                    if v < best {
                        best = v;
                        arg = j;
                    }
                }
            }
            cost_to_go[n][i] = best;
            next_boundary[n][i] = arg;
        }
    }

    if !cost_to_go[0][0].is_finite() {
        let sensor = (0..n_sensors)
            .rev()
            .find(|&n| !cost_to_go[n][0].is_finite())
            .unwrap_or(0);
        return Err(Error::PlanInfeasible { sensor });
    }

    let mut segments = Vec::with_capacity(n_sensors);
    let mut i = 0;
    for (n, sensor) in scenario.sensors.iter().enumerate() {
        let j = next_boundary[n][i];
        let c = choices[n][i][j - i - 1].expect("selected segment is feasible");
        let (x, y) = (points[i], points[j]);
        segments.push(PlanSegment {
            sensor_index: n,
            mode: Mode::Fly,
            interval: Interval { x, y },
            speed: Some(c.speed),
            time: (y - x) / c.speed,
            water_level: None,
            hover_power: None,
            constant_power: Some(c.speed * sensor.energy / (y - x)),
        });
        i = j;
    }
    Ok(FlightPlan {
        segments,
        total_time: scenario.cruise_time() + cost_to_go[0][0],
    })
}
