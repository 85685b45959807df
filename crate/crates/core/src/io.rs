//! JSON scenario files, plan reports and CSV output.

use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::channel::ChannelParams;
use crate::error::{Error, Result};
use crate::montecarlo::{CurvePoint, EnsembleConfig, SweepParam};
use crate::plan::{FlightPlan, Mode, PlanSegment};
use crate::planner::{ConstantPowerSegment, DpStats};
use crate::scenario::Scenario;
use crate::single_sensor::{hover_time, optimal_allocation, Interval, SensorSpec, Tolerances};

/// Relative tolerance used when re-deriving segment times from a report.
pub const REVALIDATE_REL_TOL: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChannelSection {
    #[serde(rename = "H_m")]
    pub altitude_m: f64,
    #[serde(rename = "beta_dB")]
    pub beta_db: f64,
    #[serde(rename = "W_Hz")]
    pub bandwidth_hz: f64,
    pub alpha: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct UavSection {
    pub v_max_mps: f64,
    pub s_start_m: f64,
    pub s_end_m: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SensorEntry {
    pub position_m: f64,
    pub bits: f64,
    #[serde(rename = "energy_J")]
    pub energy_j: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SolverSettings {
    pub grid_points: usize,
    pub speed_tol_mps: f64,
    pub hover_tol_rel: f64,
}

impl Default for SolverSettings {
    fn default() -> Self {
        let tol = Tolerances::default();
        Self {
            grid_points: 201,
            speed_tol_mps: tol.speed,
            hover_tol_rel: tol.hover_rel,
        }
    }
}

impl SolverSettings {
    pub fn tolerances(&self) -> Tolerances {
        Tolerances {
            speed: self.speed_tol_mps,
            hover_rel: self.hover_tol_rel,
        }
    }
}

/// On-disk scenario.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioFile {
    pub channel: ChannelSection,
    pub uav: UavSection,
    pub sensors: Vec<SensorEntry>,
    #[serde(default)]
    pub solver: SolverSettings,
}

impl ScenarioFile {
    pub fn from_scenario(scenario: &Scenario, solver: SolverSettings) -> Self {
        let ch = &scenario.channel;
        Self {
            channel: ChannelSection {
                altitude_m: ch.altitude,
                beta_db: ch.beta_db(),
                bandwidth_hz: ch.bandwidth,
                alpha: ch.alpha,
            },
            uav: UavSection {
                v_max_mps: scenario.v_max,
                s_start_m: scenario.s_start,
                s_end_m: scenario.s_end,
            },
            sensors: scenario
                .sensors
                .iter()
                .map(|s| SensorEntry {
                    position_m: s.position,
                    bits: s.bits,
                    energy_j: s.energy,
                })
                .collect(),
            solver,
        }
    }

    /// Field checks, reported as `(key path, message)`.
    fn check_fields(&self) -> std::result::Result<(), (String, String)> {
        fn bad(path: impl Into<String>, msg: impl Into<String>) -> (String, String) {
            (path.into(), msg.into())
        }
        let c = &self.channel;
        if !(c.altitude_m > 0.0 && c.altitude_m.is_finite()) {
            return Err(bad(
                "channel.H_m",
                format!("altitude {} must be > 0", c.altitude_m),
            ));
        }
        if !c.beta_db.is_finite() {
            return Err(bad("channel.beta_dB", "must be finite"));
        }
        if !(c.bandwidth_hz > 0.0 && c.bandwidth_hz.is_finite()) {
            return Err(bad(
                "channel.W_Hz",
                format!("bandwidth {} must be > 0", c.bandwidth_hz),
            ));
        }
        if !(c.alpha >= 2.0 && c.alpha.is_finite()) {
            return Err(bad(
                "channel.alpha",
                format!("pathloss exponent {} must be >= 2", c.alpha),
            ));
        }
        let u = &self.uav;
        if !(u.v_max_mps > 0.0 && u.v_max_mps.is_finite()) {
            return Err(bad("uav.v_max_mps", format!("{} must be > 0", u.v_max_mps)));
        }
        if !u.s_start_m.is_finite() {
            return Err(bad("uav.s_start_m", "must be finite"));
        }
        if !(u.s_end_m.is_finite() && u.s_end_m > u.s_start_m) {
            return Err(bad(
                "uav.s_end_m",
                format!(
                    "route end {} must be after start {}",
                    u.s_end_m, u.s_start_m
                ),
            ));
        }
        let mut prev = f64::NEG_INFINITY;
        for (i, s) in self.sensors.iter().enumerate() {
            if !(s.position_m >= u.s_start_m && s.position_m <= u.s_end_m) {
                return Err(bad(
                    format!("sensors[{i}].position_m"),
                    format!("position {} lies outside the route", s.position_m),
                ));
            }
            if !(s.position_m > prev) {
                return Err(bad(
                    format!("sensors[{i}].position_m"),
                    format!(
                        "position {} must be strictly after the previous sensor",
                        s.position_m
                    ),
                ));
            }
            prev = s.position_m;
            if !(s.bits > 0.0 && s.bits.is_finite()) {
                return Err(bad(
                    format!("sensors[{i}].bits"),
                    format!("{} must be > 0", s.bits),
                ));
            }
            if !(s.energy_j > 0.0 && s.energy_j.is_finite()) {
                return Err(bad(
                    format!("sensors[{i}].energy_J"),
                    format!("{} must be > 0", s.energy_j),
                ));
            }
        }
        let sv = &self.solver;
        if sv.grid_points < 2 {
            return Err(bad("solver.grid_points", "must be >= 2"));
        }
        if !(sv.speed_tol_mps > 0.0) {
            return Err(bad("solver.speed_tol_mps", "must be > 0"));
        }
        if !(sv.hover_tol_rel > 0.0) {
            return Err(bad("solver.hover_tol_rel", "must be > 0"));
        }
        Ok(())
    }

    /// Validated scenario. `source` is the original text, used only to
    /// locate offending keys in error messages.
    pub fn to_scenario(&self, source: &str) -> Result<Scenario> {
        if let Err((path, message)) = self.check_fields() {
            let (line, column) = locate_key(source, &path);
            return Err(Error::Parse {
                path,
                line,
                column,
                message,
            });
        }
        let c = &self.channel;
        let channel = ChannelParams::from_db(c.altitude_m, c.beta_db, c.bandwidth_hz, c.alpha)?;
        let sensors = self
            .sensors
            .iter()
            .map(|s| SensorSpec {
                position: s.position_m,
                bits: s.bits,
                energy: s.energy_j,
            })
            .collect();
        Scenario::new(
            self.uav.s_start_m,
            self.uav.s_end_m,
            self.uav.v_max_mps,
            sensors,
            channel,
        )
    }
}

/// Deserializes JSON, reporting the failing key path and its location.
pub fn from_json_str<T: for<'de> Deserialize<'de>>(text: &str) -> Result<T> {
    let de = &mut serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        let inner = e.inner();
        let mut message = inner.to_string();
        if let Some(cut) = message.rfind(" at line ") {
            message.truncate(cut);
        }
        Error::Parse {
            path,
            line: inner.line(),
            column: inner.column(),
            message,
        }
    })
}

pub fn parse_scenario_str(text: &str) -> Result<(Scenario, SolverSettings)> {
    let file: ScenarioFile = from_json_str(text)?;
    let scenario = file.to_scenario(text)?;
    Ok((scenario, file.solver))
}

pub fn parse_scenario(path: &Path) -> Result<(Scenario, SolverSettings)> {
    parse_scenario_str(&std::fs::read_to_string(path)?)
}

pub fn serialize_scenario(scenario: &Scenario, solver: SolverSettings) -> String {
    to_json(&ScenarioFile::from_scenario(scenario, solver))
}

/// Pretty JSON with a trailing newline.
pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("plain data serializes");
    s.push('\n');
    s
}

/// Best-effort 1-based (line, column) of the key named by a path such as
/// `sensors[3].bits`. Returns (0, 0) when the key is not found.
fn locate_key(text: &str, path: &str) -> (usize, usize) {
    let mut cursor = 0;
    let mut start = 0;
    let mut skip = 0;
    for part in path.split('.') {
        let (key, index) = match part.find('[') {
            Some(b) => (
                &part[..b],
                part[b + 1..part.len() - 1].parse::<usize>().ok(),
            ),
            None => (part, None),
        };
        let needle = format!("\"{key}\"");
        for _ in 0..=skip {
            match text[cursor..].find(&needle) {
                Some(p) => {
                    start = cursor + p;
                    cursor = start + needle.len();
                }
                None => return (0, 0),
            }
        }
        skip = index.unwrap_or(0);
    }
    let before = &text[..start];
    let line = before.matches('\n').count() + 1;
    let column = start - before.rfind('\n').map_or(0, |p| p + 1) + 1;
    (line, column)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SegmentRecord {
    pub sensor: usize,
    pub mode: Mode,
    pub x_m: f64,
    pub y_m: f64,
    pub speed_mps: Option<f64>,
    pub time_s: f64,
    pub water_level: Option<f64>,
    #[serde(rename = "hover_power_W")]
    pub hover_power_w: Option<f64>,
    #[serde(
        rename = "constant_power_W",
        default,
        skip_serializing_if = "Option::is_none"
    )]
    pub constant_power_w: Option<f64>,
}

impl From<&PlanSegment> for SegmentRecord {
    fn from(s: &PlanSegment) -> Self {
        Self {
            sensor: s.sensor_index,
            mode: s.mode,
            x_m: s.interval.x,
            y_m: s.interval.y,
            speed_mps: s.speed,
            time_s: s.time,
            water_level: s.water_level,
            hover_power_w: s.hover_power,
            constant_power_w: s.constant_power,
        }
    }
}

impl From<&SegmentRecord> for PlanSegment {
    fn from(r: &SegmentRecord) -> Self {
        Self {
            sensor_index: r.sensor,
            mode: r.mode,
            interval: Interval { x: r.x_m, y: r.y_m },
            speed: r.speed_mps,
            time: r.time_s,
            water_level: r.water_level,
            hover_power: r.hover_power_w,
            constant_power: r.constant_power_w,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolverMetadata {
    /// `dp`, `hover_only` or `always_collecting`.
    pub solver: String,
    pub pruned: bool,
    pub grid_points: usize,
    pub speed_tol_mps: f64,
    pub hover_tol_rel: f64,
    pub states_evaluated: Option<usize>,
    pub states_pruned: Option<usize>,
}

impl SolverMetadata {
    pub fn new(solver: &str, settings: &SolverSettings) -> Self {
        Self {
            solver: solver.to_string(),
            pruned: false,
            grid_points: settings.grid_points,
            speed_tol_mps: settings.speed_tol_mps,
            hover_tol_rel: settings.hover_tol_rel,
            states_evaluated: None,
            states_pruned: None,
        }
    }

    pub fn with_stats(mut self, stats: &DpStats, pruned: bool) -> Self {
        self.pruned = pruned;
        self.states_evaluated = Some(stats.states_evaluated);
        self.states_pruned = Some(stats.states_copied);
        self
    }
}

/// A solved plan together with the scenario it answers.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlanReport {
    pub scenario: ScenarioFile,
    pub segments: Vec<SegmentRecord>,
    pub total_time_s: f64,
    pub solver: SolverMetadata,
}

impl PlanReport {
    pub fn new(
        scenario: &Scenario,
        settings: SolverSettings,
        plan: &FlightPlan,
        solver: SolverMetadata,
    ) -> Self {
        Self {
            scenario: ScenarioFile::from_scenario(scenario, settings),
            segments: plan.segments.iter().map(SegmentRecord::from).collect(),
            total_time_s: plan.total_time,
            solver,
        }
    }

    pub fn to_plan(&self) -> FlightPlan {
        FlightPlan {
            segments: self.segments.iter().map(PlanSegment::from).collect(),
            total_time: self.total_time_s,
        }
    }

    /// Recomputes every segment from the embedded scenario and checks that
    /// times, delivered bits and the total agree to [`REVALIDATE_REL_TOL`].
    pub fn revalidate(&self) -> Result<()> {
        let scenario = self.scenario.to_scenario("")?;
        let ch = &scenario.channel;
        let tol = self.scenario.solver.tolerances();
        let plan = self.to_plan();
        if plan.segments.len() != scenario.sensors.len() || !plan.is_ordered(&scenario) {
            return Err(Error::invalid(
                "plan",
                "segments must be one per sensor, ordered and disjoint",
            ));
        }
        let close =
            |a: f64, b: f64| (a - b).abs() <= REVALIDATE_REL_TOL * a.abs().max(b.abs()).max(1e-300);
        for (n, seg) in plan.segments.iter().enumerate() {
            let sensor = &scenario.sensors[n];
            let Interval { x, y } = seg.interval;
            let mismatch = |what: &str| {
                Error::invalid("plan", format!("segment {n}: {what} does not reproduce"))
            };
            if seg.sensor_index != n {
                return Err(mismatch("sensor index"));
            }
            match seg.mode {
                Mode::Hover => {
                    let h = hover_time(sensor, x, ch, tol.hover_rel)?;
                    if x != y || !close(h.duration, seg.time) {
                        return Err(mismatch("hover time"));
                    }
                }
                Mode::Fly => {
                    let v = seg.speed.ok_or_else(|| mismatch("speed"))?;
                    if !(v > 0.0 && v <= scenario.v_max) || !close((y - x) / v, seg.time) {
                        return Err(mismatch("flight time"));
                    }
                    let (xr, yr) = (x - sensor.position, y - sensor.position);
                    let bits = match seg.constant_power {
                        Some(_) => {
                            ConstantPowerSegment::new(xr, yr, sensor.energy, *ch).throughput(v)
                        }
                        None => optimal_allocation(xr, yr, v, sensor, ch)?.throughput,
                    };
                    if bits < sensor.bits * (1.0 - REVALIDATE_REL_TOL) {
                        return Err(mismatch("delivered bits"));
                    }
                }
            }
        }
        if !close(plan.objective(&scenario), self.total_time_s) {
            return Err(Error::invalid("plan", "total time does not reproduce"));
        }
        Ok(())
    }
}

/// `%.9g`-style formatting: 9 significant digits, trailing zeros dropped.
pub fn format_sig9(v: f64) -> String {
    if v == 0.0 {
        return "0".to_string();
    }
    if !v.is_finite() {
        return v.to_string();
    }
    let sci = format!("{v:.8e}");
    let (mant, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-5..9).contains(&exp) {
        let decimals = (8 - exp).max(0) as usize;
        trim_zeros(format!("{v:.decimals$}"))
    } else {
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{}e{sign}{:02}", trim_zeros(mant.to_string()), exp.abs())
    }
}

fn trim_zeros(s: String) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}

/// Minimal CSV writer: comma-separated, newline-terminated records.
#[derive(Debug, Default)]
pub struct CsvTable {
    out: String,
}

pub enum Cell<'a> {
    Num(f64),
    Int(usize),
    Text(&'a str),
}

impl CsvTable {
    pub fn new(header: &[&str]) -> Self {
        let mut t = Self::default();
        t.out.push_str(&header.join(","));
        t.out.push('\n');
        t
    }

    pub fn row(&mut self, cells: &[Cell]) {
        for (i, c) in cells.iter().enumerate() {
            if i > 0 {
                self.out.push(',');
            }
            match c {
                Cell::Num(v) => self.out.push_str(&format_sig9(*v)),
                Cell::Int(v) => {
                    let _ = write!(self.out, "{v}");
                }
                Cell::Text(s) => self.out.push_str(s),
            }
        }
        self.out.push('\n');
    }

    pub fn finish(self) -> String {
        self.out
    }
}

pub const SWEEP_HEADER: [&str; 6] = ["param", "x", "y", "v", "mode", "total_time"];

/// One row per segment of each plan, keyed by the swept value; hover rows
/// carry `v = 0`.
pub fn sweep_csv(rows: &[(f64, FlightPlan)]) -> String {
    let mut t = CsvTable::new(&SWEEP_HEADER);
    for (value, plan) in rows {
        for seg in &plan.segments {
            let mode = match seg.mode {
                Mode::Hover => "hover",
                Mode::Fly => "fly",
            };
            t.row(&[
                Cell::Num(*value),
                Cell::Num(seg.interval.x),
                Cell::Num(seg.interval.y),
                Cell::Num(seg.speed.unwrap_or(0.0)),
                Cell::Text(mode),
                Cell::Num(plan.total_time),
            ]);
        }
    }
    t.finish()
}

pub const CURVE_HEADER: [&str; 10] = [
    "param",
    "value",
    "mean_time",
    "std_time",
    "trials",
    "failed",
    "flagged",
    "mean_bits_accepted",
    "mean_energy_accepted",
    "solver",
];

pub fn curve_csv(param: SweepParam, solver: &str, points: &[CurvePoint]) -> String {
    let mut t = CsvTable::new(&CURVE_HEADER);
    for p in points {
        t.row(&[
            Cell::Text(param.label()),
            Cell::Num(p.value),
            Cell::Num(p.mean_time),
            Cell::Num(p.std_time),
            Cell::Int(p.trials),
            Cell::Int(p.failed),
            Cell::Int(p.flagged() as usize),
            Cell::Num(p.mean_bits_accepted),
            Cell::Num(p.mean_energy_accepted),
            Cell::Text(solver),
        ]);
    }
    t.finish()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EnsembleSection {
    pub sensor_count: usize,
    pub mean_bits: f64,
    #[serde(rename = "mean_energy_J")]
    pub mean_energy_j: f64,
    pub trials: usize,
    #[serde(default)]
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSection {
    pub param: SweepParam,
    pub values: Vec<f64>,
}

/// Monte-Carlo run description. The swept mean replaces the corresponding
/// `ensemble` value at each point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MonteCarloFile {
    pub channel: ChannelSection,
    pub uav: UavSection,
    pub ensemble: EnsembleSection,
    pub sweep: SweepSection,
    #[serde(default)]
    pub solver: SolverSettings,
}

impl MonteCarloFile {
    pub fn to_config(&self) -> Result<EnsembleConfig> {
        let c = &self.channel;
        let channel = ChannelParams::from_db(c.altitude_m, c.beta_db, c.bandwidth_hz, c.alpha)?;
        let e = &self.ensemble;
        let cfg = EnsembleConfig {
            mean_bits: e.mean_bits,
            mean_energy: e.mean_energy_j,
            sensor_count: e.sensor_count,
            s_start: self.uav.s_start_m,
            s_end: self.uav.s_end_m,
            trials: e.trials,
            seed: e.seed,
            channel,
            v_max: self.uav.v_max_mps,
            grid_points: self.solver.grid_points,
            tolerances: self.solver.tolerances(),
        };
        cfg.validate()?;
        if self.sweep.values.is_empty() {
            return Err(Error::invalid("sweep.values", "must not be empty"));
        }
        Ok(cfg)
    }
}

pub fn parse_montecarlo(path: &Path) -> Result<MonteCarloFile> {
    from_json_str(&std::fs::read_to_string(path)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    const REFERENCE: &str = r#"{
  "channel": { "H_m": 100, "beta_dB": 80, "W_Hz": 20000, "alpha": 2 },
  "uav": { "v_max_mps": 26, "s_start_m": 0, "s_end_m": 1000 },
  "sensors": [
    { "position_m": 300, "bits": 3e6, "energy_J": 1.2 },
    { "position_m": 700, "bits": 2e6, "energy_J": 0.5 }
  ]
}"#;

    #[test]
    fn parses_reference_file() {
        let (sc, solver) = parse_scenario_str(REFERENCE).unwrap();
        assert_eq!(sc.channel.beta, 1e8);
        assert_eq!(sc.sensors.len(), 2);
        assert_eq!(solver, SolverSettings::default());
    }

    #[test]
    fn round_trip() {
        let (sc, solver) = parse_scenario_str(REFERENCE).unwrap();
        let text = serialize_scenario(&sc, solver);
        let (back, s2) = parse_scenario_str(&text).unwrap();
        assert_eq!(s2, solver);
        assert_eq!(back.sensors, sc.sensors);
        assert!(((back.channel.beta - sc.channel.beta) / sc.channel.beta).abs() <= 1e-14);
        let odd = Scenario {
            channel: ChannelParams::new(87.0, 3.7e7, 1.5e4, 2.0).unwrap(),
            ..sc
        };
        let (back, _) = parse_scenario_str(&serialize_scenario(&odd, solver)).unwrap();
        assert!(((back.channel.beta - 3.7e7) / 3.7e7).abs() <= 1e-14);
    }

    #[test]
    fn type_error_names_key_and_line() {
        let text = REFERENCE.replace("\"bits\": 2e6", "\"bits\": \"lots\"");
        match parse_scenario_str(&text) {
            Err(Error::Parse { path, line, .. }) => {
                assert_eq!(path, "sensors[1].bits");
                assert_eq!(line, 6);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn missing_key_is_reported() {
        let text = REFERENCE.replace("\"alpha\": 2 ", "");
        let text = text.replace(", }", " }");
        let err = parse_scenario_str(&text).unwrap_err();
        assert!(err.to_string().contains("alpha"), "{err}");
    }

    #[test]
    fn semantic_error_locates_key() {
        let text = REFERENCE.replace("\"energy_J\": 0.5", "\"energy_J\": -0.5");
        match parse_scenario_str(&text) {
            Err(Error::Parse {
                path, line, column, ..
            }) => {
                assert_eq!(path, "sensors[1].energy_J");
                assert_eq!(line, 6);
                assert_eq!(column, 39);
            }
            other => panic!("{other:?}"),
        }
        let text = REFERENCE.replace("\"H_m\": 100", "\"H_m\": 0");
        match parse_scenario_str(&text) {
            Err(Error::Parse { path, line, .. }) => {
                assert_eq!(path, "channel.H_m");
                assert_eq!(line, 2);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn infeasible_sensor_reports_threshold() {
        let text = REFERENCE.replace(
            "\"bits\": 3e6, \"energy_J\": 1.2",
            "\"bits\": 2e8, \"energy_J\": 1",
        );
        let err = parse_scenario_str(&text).unwrap_err();
        assert!(err.is_infeasible());
        match err {
            Error::InfeasibleSensors(list) => {
                assert_eq!(list.len(), 1);
                assert_eq!(list[0].index, 0);
                assert!((list[0].threshold - 1.4427e8).abs() < 1e4);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn sig9_formatting() {
        assert_eq!(format_sig9(0.0), "0");
        assert_eq!(format_sig9(1.0), "1");
        assert_eq!(format_sig9(697.0234567891), "697.023457");
        assert_eq!(format_sig9(-0.125), "-0.125");
        assert_eq!(format_sig9(3e6), "3000000");
        assert_eq!(format_sig9(1.23456789e12), "1.23456789e+12");
        assert_eq!(format_sig9(2.5e-7), "2.5e-07");
        assert_eq!(format_sig9(123456789.4), "123456789");
    }

    #[test]
    fn csv_rows_are_terminated() {
        let mut t = CsvTable::new(&["a", "b"]);
        t.row(&[Cell::Num(1.5), Cell::Text("x")]);
        assert_eq!(t.finish(), "a,b\n1.5,x\n");
    }
}
