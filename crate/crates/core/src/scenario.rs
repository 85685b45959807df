use crate::channel::ChannelParams;
use crate::error::{Error, Result, SensorInfeasibility};
use crate::single_sensor::{feasibility_threshold, SensorSpec};

/// A UAV route from `s_start` to `s_end` over an ordered list of sensors.
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub s_start: f64,
    pub s_end: f64,
    pub v_max: f64,
    pub sensors: Vec<SensorSpec>,
    pub channel: ChannelParams,
}

impl Scenario {
    /// Validates geometry and per-sensor feasibility.
    pub fn new(
        s_start: f64,
        s_end: f64,
        v_max: f64,
        sensors: Vec<SensorSpec>,
        channel: ChannelParams,
    ) -> Result<Self> {
        let scenario = Self {
            s_start,
            s_end,
            v_max,
            sensors,
            channel,
        };
        scenario.validate()?;
        Ok(scenario)
    }

    pub fn validate(&self) -> Result<()> {
        self.validate_geometry()?;
        let offenders = self.infeasible_sensors();
        if offenders.is_empty() {
            Ok(())
        } else {
            Err(Error::InfeasibleSensors(offenders))
        }
    }

    pub fn validate_geometry(&self) -> Result<()> {
        if !(self.s_start.is_finite() && self.s_end.is_finite() && self.s_start < self.s_end) {
            return Err(Error::invalid(
                "route",
                format!("start {} must be before end {}", self.s_start, self.s_end),
            ));
        }
        if !(self.v_max > 0.0 && self.v_max.is_finite()) {
            return Err(Error::invalid(
                "v_max",
                format!("{} must be > 0", self.v_max),
            ));
        }
        let mut prev = f64::NEG_INFINITY;
        for (i, s) in self.sensors.iter().enumerate() {
            s.validate()?;
            if s.position < self.s_start || s.position > self.s_end {
                return Err(Error::invalid(
                    "sensor position",
                    format!("sensor {i} at {} lies outside the route", s.position),
                ));
            }
            if s.position <= prev {
                return Err(Error::invalid(
                    "sensor position",
                    format!("sensor {i} at {} is not after its predecessor", s.position),
                ));
            }
            prev = s.position;
        }
        Ok(())
    }

    pub fn infeasible_sensors(&self) -> Vec<SensorInfeasibility> {
        self.sensors
            .iter()
            .enumerate()
            .filter_map(|(index, s)| {
                let threshold = feasibility_threshold(s.energy, &self.channel);
                (s.bits >= threshold).then_some(SensorInfeasibility {
                    index,
                    bits: s.bits,
                    energy: s.energy,
                    threshold,
                })
            })
            .collect()
    }

    pub fn length(&self) -> f64 {
        self.s_end - self.s_start
    }

    /// Flight time with no data collection at all.
    pub fn cruise_time(&self) -> f64 {
        self.length() / self.v_max
    }
}
