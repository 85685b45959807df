use thiserror::Error;

/// A sensor whose data requirement cannot be met even when hovering directly
/// above it.
#[derive(Debug, Clone, PartialEq)]
pub struct SensorInfeasibility {
    pub index: usize,
    pub bits: f64,
    pub energy: f64,
    /// Supremum of deliverable bits, `W β E / (2 H^α ln 2)`.
    pub threshold: f64,
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid {name}: {reason}")]
    InvalidInput { name: &'static str, reason: String },

    #[error("{}", format_infeasible_sensors(.0))]
    InfeasibleSensors(Vec<SensorInfeasibility>),

    #[error(
        "hover at offset {offset} m cannot deliver {bits} bits (supremum {supremum:.6e} bits)"
    )]
    HoverInfeasible {
        offset: f64,
        bits: f64,
        supremum: f64,
    },

    #[error(
        "speed {speed} m/s is below the minimum {min_speed} m/s for the interval; shrink the interval or raise the speed"
    )]
    SpeedBelowMinimum { speed: f64, min_speed: f64 },

    #[error("no feasible plan: sensor {sensor} cannot be served from any reachable state")]
    PlanInfeasible { sensor: usize },

    #[error(
        "ensemble configuration infeasible: no feasible (bits, energy) pair after {attempts} draws"
    )]
    EnsembleInfeasible { attempts: usize },

    #[error("{path} (line {line}, column {column}): {message}")]
    Parse {
        path: String,
        line: usize,
        column: usize,
        message: String,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidInput {
            name,
            reason: reason.into(),
        }
    }

    /// True for errors that mean "the problem has no solution" as opposed to
    /// malformed input or I/O trouble.
    pub fn is_infeasible(&self) -> bool {
        matches!(
            self,
            Error::InfeasibleSensors(_)
                | Error::HoverInfeasible { .. }
                | Error::PlanInfeasible { .. }
                | Error::EnsembleInfeasible { .. }
        )
    }

    /// Short machine-readable tag.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::InvalidInput { .. } => "invalid_input",
            Error::InfeasibleSensors(_) => "infeasible_sensors",
            Error::HoverInfeasible { .. } => "hover_infeasible",
            Error::SpeedBelowMinimum { .. } => "speed_below_minimum",
            Error::PlanInfeasible { .. } => "plan_infeasible",
            Error::EnsembleInfeasible { .. } => "ensemble_infeasible",
            Error::Parse { .. } => "parse",
            Error::Io(_) => "io",
        }
    }
}

fn format_infeasible_sensors(list: &[SensorInfeasibility]) -> String {
    let parts: Vec<String> = list
        .iter()
        .map(|s| {
            format!(
                "sensor {} needs {} bits but at most {:.6e} bits are deliverable with {} J",
                s.index, s.bits, s.threshold, s.energy
            )
        })
        .collect();
    format!("infeasible sensors: {}", parts.join("; "))
}

pub type Result<T> = std::result::Result<T, Error>;
