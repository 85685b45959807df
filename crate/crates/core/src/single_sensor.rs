//! One sensor, one UAV pass.
//!
//! Unless noted otherwise, interval endpoints here are offsets relative to
//! the sensor position (`x - S`, `y - S`). Callers convert at the boundary.
//!
//! For a fixed interval `[x, y]` and speed `v` the sensor's optimal power is
//! a water-filling profile `p(s) = 1/γ₀ - inverse_gain(s)`, positive on the
//! whole interval as long as `v` is at least the interval's minimum speed.
//! The throughput of that profile decreases in `v`, so the fastest speed
//! meeting the data requirement is found by bisection.

use std::f64::consts::LN_2;

use crate::channel::{inverse_gain, pathloss_integral_unchecked, ChannelParams};
use crate::error::{Error, Result};
use crate::grid::Grid;
use crate::plan::{FlightPlan, Mode, PlanSegment};
use crate::scenario::Scenario;
use crate::search;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SensorSpec {
    /// Position on the route, meters.
    pub position: f64,
    /// Data to upload, bits.
    pub bits: f64,
    /// Energy budget, joules.
    pub energy: f64,
}

impl SensorSpec {
    pub fn new(position: f64, bits: f64, energy: f64) -> Result<Self> {
        let s = Self {
            position,
            bits,
            energy,
        };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        if !self.position.is_finite() {
            return Err(Error::invalid("sensor position", "must be finite"));
        }
        if !(self.bits > 0.0 && self.bits.is_finite()) {
            return Err(Error::invalid("bits", format!("{} must be > 0", self.bits)));
        }
        if !(self.energy > 0.0 && self.energy.is_finite()) {
            return Err(Error::invalid(
                "energy",
                format!("{} must be > 0", self.energy),
            ));
        }
        Ok(())
    }
}

/// `[x, y]` with `x <= y`; `x == y` is a hover point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    pub x: f64,
    pub y: f64,
}

impl Interval {
    pub fn new(x: f64, y: f64) -> Result<Self> {
        if !(x <= y) {
            return Err(Error::invalid(
                "interval",
                format!("[{x}, {y}] is reversed"),
            ));
        }
        Ok(Self { x, y })
    }

    pub fn hover(x: f64) -> Self {
        Self { x, y: x }
    }

    pub fn width(&self) -> f64 {
        self.y - self.x
    }

    pub fn is_hover(&self) -> bool {
        self.x == self.y
    }

    pub fn shifted(&self, by: f64) -> Self {
        Self {
            x: self.x + by,
            y: self.y + by,
        }
    }
}

/// Bisection tolerances.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// Absolute speed tolerance, m/s.
    pub speed: f64,
    /// Hover-time residual, relative to `max(1, B)` bits.
    pub hover_rel: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            speed: 1e-6,
            hover_rel: 1e-9,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HoverSolution {
    /// Absolute hover position.
    pub position: f64,
    /// Seconds.
    pub duration: f64,
    /// Constant transmit power `E / duration`.
    pub power: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpeedSolution {
    pub speed: f64,
    pub water_level: f64,
    /// Bits delivered at `speed`.
    pub throughput: f64,
}

/// Most bits a sensor with `energy` joules can ever deliver:
/// `W β E / (2 H^α ln 2)` (the supremum of hovering right above it).
pub fn feasibility_threshold(energy: f64, ch: &ChannelParams) -> f64 {
    pointwise_supremum(energy, 0.0, ch)
}

fn pointwise_supremum(energy: f64, offset: f64, ch: &ChannelParams) -> f64 {
    ch.bandwidth * energy / (2.0 * inverse_gain(offset, ch) * LN_2)
}

/// Whether the sensor's requirement can be met at all (strict inequality).
pub fn feasibility(sensor: &SensorSpec, ch: &ChannelParams) -> bool {
    sensor.bits < feasibility_threshold(sensor.energy, ch)
}

/// Shortest hover above absolute position `x` that delivers the sensor's
/// bits at constant power.
///
/// Solves `(T/2) W log₂(1 + βE / (T ((x-S)² + H²)^(α/2))) = B`; the left side
/// increases in `T` towards `W β E / (2 ((x-S)²+H²)^(α/2) ln 2)`.
pub fn hover_time(
    sensor: &SensorSpec,
    x: f64,
    ch: &ChannelParams,
    hover_rel_tol: f64,
) -> Result<HoverSolution> {
    let offset = x - sensor.position;
    let supremum = pointwise_supremum(sensor.energy, offset, ch);
    if !(sensor.bits < supremum) {
        return Err(Error::HoverInfeasible {
            offset,
            bits: sensor.bits,
            supremum,
        });
    }
    // snr-seconds: βE / pathloss
    let a = sensor.energy / inverse_gain(offset, ch);
    let half_w = 0.5 * ch.bandwidth / LN_2;
    let delivered = |t: f64| half_w * t * (a / t).ln_1p();
    let tol = sensor.bits.max(1.0) * hover_rel_tol;
    let duration = search::increasing_root(delivered, sensor.bits, 1.0, tol);
    Ok(HoverSolution {
        position: x,
        duration,
        power: sensor.energy / duration,
    })
}

/// Uncapped minimum speed for which water-filling power stays non-negative
/// across `[x, y]`: the left side of the positivity condition divided by
/// `β E`. Piecewise polynomial for `α = 2`.
pub(crate) fn min_speed_uncapped(x: f64, y: f64, energy: f64, ch: &ChannelParams) -> f64 {
    if ch.is_free_space() {
        free_space_numerator(x, y) / (3.0 * ch.beta * energy)
    } else {
        general_numerator(x, y, ch) / (ch.beta * energy)
    }
}

fn free_space_numerator(x: f64, y: f64) -> f64 {
    if x.abs() <= y.abs() {
        2.0 * y * y * y + x * x * x - 3.0 * y * y * x
    } else {
        3.0 * x * x * y - 2.0 * x * x * x - y * y * y
    }
}

fn general_numerator(x: f64, y: f64, ch: &ChannelParams) -> f64 {
    let far = if x.abs() > y.abs() { x } else { y };
    (y - x) * ch.pathloss(far) - pathloss_integral_unchecked(x, y, ch)
}

fn check_interval(x: f64, y: f64) -> Result<()> {
    if !(x < y) {
        return Err(Error::invalid(
            "interval",
            format!("[{x}, {y}] must have x < y"),
        ));
    }
    Ok(())
}

/// Minimum speed over `[x, y]`, capped at `v_max`.
///
/// Uses the piecewise cubic form when `α = 2` and the general
/// `(y-x)(max(x²,y²)+H²)^(α/2) - ∫ₓʸ (s²+H²)^(α/2) ds` otherwise.
pub fn min_speed(
    x: f64,
    y: f64,
    sensor: &SensorSpec,
    ch: &ChannelParams,
    v_max: f64,
) -> Result<f64> {
    check_interval(x, y)?;
    Ok(min_speed_uncapped(x, y, sensor.energy, ch).min(v_max))
}

/// [`min_speed`] always evaluated through the general integral form.
pub fn min_speed_general(
    x: f64,
    y: f64,
    sensor: &SensorSpec,
    ch: &ChannelParams,
    v_max: f64,
) -> Result<f64> {
    check_interval(x, y)?;
    Ok((general_numerator(x, y, ch) / (ch.beta * sensor.energy)).min(v_max))
}

/// Water level `1/γ₀ = vE/(y-x) + ∫ₓʸ (s²+H²)^(α/2) ds / ((y-x) β)`.
pub fn water_level(x: f64, y: f64, v: f64, sensor: &SensorSpec, ch: &ChannelParams) -> Result<f64> {
    check_interval(x, y)?;
    if !(v > 0.0) {
        return Err(Error::invalid("speed", format!("{v} must be > 0")));
    }
    Ok(FlyingKernel::new(x, y, sensor.energy, ch).water_level(v))
}

/// Per-interval constants so that the throughput at a given speed costs a
/// single logarithm.
#[derive(Debug, Clone, Copy)]
pub(crate) struct FlyingKernel {
    x: f64,
    y: f64,
    width: f64,
    energy: f64,
    channel: ChannelParams,
    /// Mean inverse gain over the interval.
    mean_inverse_gain: f64,
    /// `G(x)` and `G(y)`; see [`FlyingKernel::new`].
    g_x: f64,
    g_y: f64,
    shape: f64,
    /// `W / 2`.
    half_bandwidth: f64,
    pub min_speed: f64,
}

impl FlyingKernel {
    /// The throughput closed form
    /// `(W/2v) [s log₂(β/(γ₀(s²+H²)^(α/2))) + αs/ln2 - (αH/ln2) atan(s/H)]ₓʸ`
    /// splits into `(W/2v) [(y-x) log₂(β/γ₀) + G(y) - G(x)]` with
    /// `G(s) = -(α/2) s log₂(s²+H²) + αs/ln2 - (αH/ln2) atan(s/H)`.
    pub fn new(x: f64, y: f64, energy: f64, ch: &ChannelParams) -> Self {
        let width = y - x;
        let mut k = Self {
            x,
            y,
            width,
            energy,
            channel: *ch,
            mean_inverse_gain: pathloss_integral_unchecked(x, y, ch) / (width * ch.beta),
            g_x: 0.0,
            g_y: 0.0,
            shape: 0.0,
            half_bandwidth: 0.5 * ch.bandwidth,
            min_speed: min_speed_uncapped(x, y, energy, ch),
        };
        k.g_x = k.g(x);
        k.g_y = k.g(y);
        k.shape = k.g_y - k.g_x;
        k
    }

    fn g(&self, s: f64) -> f64 {
        let h = self.channel.altitude;
        let alpha = self.channel.alpha;
        (-0.5 * alpha * s * (s * s + h * h).ln() + alpha * s - alpha * h * (s / h).atan()) / LN_2
    }

    #[inline]
    pub fn water_level(&self, v: f64) -> f64 {
        v * self.energy / self.width + self.mean_inverse_gain
    }

    #[inline]
    pub fn throughput(&self, v: f64) -> f64 {
        let level = self.water_level(v);
        self.half_bandwidth / v * (self.width * (self.channel.beta * level).log2() + self.shape)
    }

    /// Offset of the interval point closest to the sensor, and farthest.
    fn reach(&self) -> (f64, f64) {
        let near = if self.x <= 0.0 && self.y >= 0.0 {
            0.0
        } else {
            self.x.abs().min(self.y.abs())
        };
        (near, self.x.abs().max(self.y.abs()))
    }

    /// Below the minimum speed the water level drops under the inverse gain
    /// at the far end and power is zero outside `|s| < r`. Returns the speed
    /// and throughput for active radius `r` in `(near, far]`.
    fn truncated(&self, r: f64) -> (f64, f64) {
        let (a, b) = (self.x.max(-r), self.y.min(r));
        let v = self.truncated_speed(r);
        let g_a = if a == self.x { self.g_x } else { self.g(a) };
        let g_b = if b == self.y { self.g_y } else { self.g(b) };
        let bits =
            self.half_bandwidth / v * ((b - a) * self.channel.pathloss(r).log2() + g_b - g_a);
        (v, bits)
    }

    fn truncated_speed(&self, r: f64) -> f64 {
        let (a, b) = (self.x.max(-r), self.y.min(r));
        let w = b - a;
        let ch = &self.channel;
        let surplus = if ch.is_free_space() {
            w * (r * r - (a * a + a * b + b * b) / 3.0)
        } else {
            w * ch.pathloss(r) - pathloss_integral_unchecked(a, b, ch)
        };
        surplus / (ch.beta * self.energy)
    }

    /// Supremum of the throughput as the speed tends to zero.
    fn limit_throughput(&self) -> f64 {
        let (near, _) = self.reach();
        self.half_bandwidth * self.energy * self.channel.beta / (LN_2 * self.channel.pathloss(near))
    }

    /// Active radius at which the truncated speed equals `v`, for
    /// `0 < v <= min_speed`.
    fn radius_for_speed(&self, v: f64) -> f64 {
        let (near, far) = self.reach();
        if v >= self.min_speed {
            return far;
        }
        let start = search::Bracket {
            lo: near,
            hi: far,
            f_lo: v,
            f_hi: v - self.min_speed,
            at_lo: 0.0,
            at_hi: self.min_speed,
        };
        let b = search::illinois(
            start,
            |r| {
                let s = self.truncated_speed(r);
                (v - s, s)
            },
            |b| b.at_hi - b.at_lo <= 1e-13 * v,
        );
        b.hi
    }

    /// Water-filling optimum at any speed `v > 0`, including speeds below
    /// the minimum speed where part of the interval carries no power.
    pub fn allocation(&self, v: f64) -> SpeedSolution {
        if v >= self.min_speed {
            return SpeedSolution {
                speed: v,
                water_level: self.water_level(v),
                throughput: self.throughput(v),
            };
        }
        let r = self.radius_for_speed(v);
        SpeedSolution {
            speed: v,
            water_level: self.channel.pathloss(r) / self.channel.beta,
            throughput: self.truncated(r).1,
        }
    }
}

fn check_speed_condition(kernel: &FlyingKernel, v: f64) -> Result<()> {
    if !(v > 0.0) {
        return Err(Error::invalid("speed", format!("{v} must be > 0")));
    }
    if v < kernel.min_speed * (1.0 - 1e-12) {
        return Err(Error::SpeedBelowMinimum {
            speed: v,
            min_speed: kernel.min_speed,
        });
    }
    Ok(())
}

/// Bits delivered over `[x, y]` at speed `v` with water-filling power.
pub fn max_throughput(
    x: f64,
    y: f64,
    v: f64,
    sensor: &SensorSpec,
    ch: &ChannelParams,
) -> Result<f64> {
    check_interval(x, y)?;
    let kernel = FlyingKernel::new(x, y, sensor.energy, ch);
    check_speed_condition(&kernel, v)?;
    Ok(kernel.throughput(v))
}

/// Water-filling power over a sensor-relative interval.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerProfile {
    /// Sensor-relative interval.
    pub interval: Interval,
    pub sensor_position: f64,
    pub speed: f64,
    pub water_level: f64,
    pub channel: ChannelParams,
}

impl PowerProfile {
    /// Power at sensor-relative offset `s`.
    pub fn power_at(&self, s: f64) -> f64 {
        (self.water_level - inverse_gain(s, &self.channel)).max(0.0)
    }

    pub fn absolute_interval(&self) -> Interval {
        self.interval.shifted(self.sensor_position)
    }

    /// `n >= 2` evenly spaced `(offset, power)` samples including both ends.
    pub fn tabulate(&self, n: usize) -> Vec<(f64, f64)> {
        let n = n.max(2);
        let Interval { x, y } = self.interval;
        (0..n)
            .map(|i| {
                let s = x + (y - x) * i as f64 / (n - 1) as f64;
                (s, self.power_at(s))
            })
            .collect()
    }
}

pub fn power_profile(
    x: f64,
    y: f64,
    v: f64,
    sensor: &SensorSpec,
    ch: &ChannelParams,
) -> Result<PowerProfile> {
    check_interval(x, y)?;
    let kernel = FlyingKernel::new(x, y, sensor.energy, ch);
    check_speed_condition(&kernel, v)?;
    Ok(PowerProfile {
        interval: Interval { x, y },
        sensor_position: sensor.position,
        speed: v,
        water_level: kernel.water_level(v),
        channel: *ch,
    })
}

/// Fastest speed in `(0, v_max]` meeting the data requirement over the
/// sensor-relative interval `[x, y]`, or `None` if no speed does.
///
/// Speeds below the minimum speed are allowed: the sensor then transmits only
/// over the part of the interval where the channel beats the water level.
pub fn solve_speed(
    x: f64,
    y: f64,
    sensor: &SensorSpec,
    ch: &ChannelParams,
    v_max: f64,
    speed_tol: f64,
) -> Result<Option<SpeedSolution>> {
    check_interval(x, y)?;
    let kernel = FlyingKernel::new(x, y, sensor.energy, ch);
    Ok(solve_speed_with(&kernel, sensor.bits, v_max, speed_tol))
}

/// Water-filling throughput over `[x, y]` at any speed `v > 0`.
///
/// Agrees with [`max_throughput`] for `v >= v_m`; below `v_m` power is zero
/// near the far end of the interval.
pub fn optimal_allocation(
    x: f64,
    y: f64,
    v: f64,
    sensor: &SensorSpec,
    ch: &ChannelParams,
) -> Result<SpeedSolution> {
    check_interval(x, y)?;
    if !(v > 0.0) {
        return Err(Error::invalid("speed", format!("{v} must be > 0")));
    }
    Ok(FlyingKernel::new(x, y, sensor.energy, ch).allocation(v))
}

pub(crate) fn solve_speed_with(
    kernel: &FlyingKernel,
    bits: f64,
    v_max: f64,
    speed_tol: f64,
) -> Option<SpeedSolution> {
    if kernel.min_speed <= v_max {
        let lo = kernel.min_speed.max(f64::MIN_POSITIVE);
        if kernel.throughput(lo) >= bits {
            let speed = search::last_true(lo, v_max, speed_tol, |v| kernel.throughput(v) >= bits);
            return Some(SpeedSolution {
                speed,
                water_level: kernel.water_level(speed),
                throughput: kernel.throughput(speed),
            });
        }
    }
    solve_truncated(kernel, bits, v_max, speed_tol)
}

/// [`solve_speed_with`] for `[x, y]` over increasing `ys`, all greater than
/// `x`. When a solution's active region ends strictly inside the interval on
/// the `y` side, every wider interval has the same solution and is not
/// re-solved.
pub(crate) fn solve_speed_row(
    x: f64,
    ys: &[f64],
    energy: f64,
    bits: f64,
    ch: &ChannelParams,
    v_max: f64,
    speed_tol: f64,
) -> Vec<Option<SpeedSolution>> {
    let mut out = Vec::with_capacity(ys.len());
    let mut settled: Option<SpeedSolution> = None;
    for &y in ys {
        if let Some(sol) = settled {
            out.push(Some(sol));
            continue;
        }
        let kernel = FlyingKernel::new(x, y, energy, ch);
        let sol = solve_speed_with(&kernel, bits, v_max, speed_tol);
        if let Some(sol) = sol {
            if y > 0.0 && sol.speed < kernel.min_speed {
                let r = active_radius(sol.water_level, ch);
                if r < y * (1.0 - 1e-9) {
                    settled = Some(sol);
                }
            }
        }
        out.push(sol);
    }
    out
}

/// Offset at which the inverse gain reaches `level`.
fn active_radius(level: f64, ch: &ChannelParams) -> f64 {
    let d2 = (ch.beta * level).powf(2.0 / ch.alpha);
    (d2 - ch.altitude * ch.altitude).max(0.0).sqrt()
}

/// Search over the active radius when the full-interval solution cannot
/// carry the bits at any admissible speed.
fn solve_truncated(
    kernel: &FlyingKernel,
    bits: f64,
    v_max: f64,
    speed_tol: f64,
) -> Option<SpeedSolution> {
    if !(kernel.limit_throughput() > bits) {
        return None;
    }
    let (near, far) = kernel.reach();
    let level = |r: f64| kernel.channel.pathloss(r) / kernel.channel.beta;
    let capped = kernel.min_speed > v_max;
    let hi = if capped {
        kernel.radius_for_speed(v_max)
    } else {
        far
    };
    let (v_hi, b_hi) = kernel.truncated(hi);
    if capped && b_hi >= bits {
        return Some(SpeedSolution {
            speed: v_max,
            water_level: level(hi),
            throughput: b_hi,
        });
    }
    let start = search::Bracket {
        lo: near,
        hi,
        f_lo: kernel.limit_throughput() - bits,
        f_hi: b_hi - bits,
        at_lo: (0.0, kernel.limit_throughput()),
        at_hi: (v_hi, b_hi),
    };
    let b = search::illinois(
        start,
        |r| {
            let (v, t) = kernel.truncated(r);
            (t - bits, (v, t))
        },
        |b| b.lo > near && b.at_hi.0 - b.at_lo.0 <= speed_tol,
    );
    let (speed, throughput) = b.at_lo;
    (speed > 0.0).then(|| SpeedSolution {
        speed,
        water_level: level(b.lo),
        throughput,
    })
}

/// Best single segment for a one-sensor scenario by exhaustive search over
/// the grid (plus the sensor position) for both fly intervals and hover
/// points.
///
/// Ties prefer flying, then the smaller `x`, then the smaller `y`.
pub fn single_sensor_plan(scenario: &Scenario, m: usize, tol: Tolerances) -> Result<FlightPlan> {
    scenario.validate_geometry()?;
    if scenario.sensors.len() != 1 {
        return Err(Error::invalid(
            "scenario",
            format!("expected one sensor, found {}", scenario.sensors.len()),
        ));
    }
    scenario.validate()?;
    let sensor = scenario.sensors[0];
    let ch = scenario.channel;
    let grid = Grid::uniform(scenario.s_start, scenario.s_end, m)?;
    let points = grid.with_anchors(&[sensor.position]);

    // (overhead, is_hover, x, y, detail)
    let mut best: Option<(f64, bool, f64, f64, PlanSegment)> = None;
    let mut consider = |cand: (f64, bool, f64, f64, PlanSegment)| {
        let better = match &best {
            None => true,
            Some(b) => (cand.0, cand.1, cand.2, cand.3)
                .partial_cmp(&(b.0, b.1, b.2, b.3))
                .map(|o| o.is_lt())
                .unwrap_or(false),
        };
        if better {
            best = Some(cand);
        }
    };

    for (i, &xa) in points.iter().enumerate() {
        let ys: Vec<f64> = points[i + 1..]
            .iter()
            .map(|&y| y - sensor.position)
            .collect();
        let row = solve_speed_row(
            xa - sensor.position,
            &ys,
            sensor.energy,
            sensor.bits,
            &ch,
            scenario.v_max,
            tol.speed,
        );
        for (&ya, sol) in points[i + 1..].iter().zip(row) {
            if let Some(sol) = sol {
                let width = ya - xa;
                let overhead = if sol.speed == scenario.v_max {
                    0.0
                } else {
                    width * (1.0 / sol.speed - 1.0 / scenario.v_max)
                };
                consider((
                    overhead,
                    false,
                    xa,
                    ya,
                    PlanSegment {
                        sensor_index: 0,
                        mode: Mode::Fly,
                        interval: Interval { x: xa, y: ya },
                        speed: Some(sol.speed),
                        time: width / sol.speed,
                        water_level: Some(sol.water_level),
                        hover_power: None,
                        constant_power: None,
                    },
                ));
            }
        }
        if let Ok(h) = hover_time(&sensor, xa, &ch, tol.hover_rel) {
            consider((
                h.duration,
                true,
                xa,
                xa,
                PlanSegment {
                    sensor_index: 0,
                    mode: Mode::Hover,
                    interval: Interval::hover(xa),
                    speed: None,
                    time: h.duration,
                    water_level: None,
                    hover_power: Some(h.power),
                    constant_power: None,
                },
            ));
        }
    }

    let (overhead, _, _, _, segment) = best.ok_or(Error::PlanInfeasible { sensor: 0 })?;
    Ok(FlightPlan {
        segments: vec![segment],
        total_time: scenario.cruise_time() + overhead,
    })
}
