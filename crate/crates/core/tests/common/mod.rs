#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use uavdc::montecarlo::{sample_scenario, EnsembleConfig};
use uavdc::{ChannelParams, FlightPlan, Mode, Scenario, SensorSpec};

pub const V_MAX: f64 = 26.0;

pub fn reference_channel() -> ChannelParams {
    ChannelParams::from_db(100.0, 80.0, 20e3, 2.0).unwrap()
}

/// One sensor at 0 on [-5000, 5000].
pub fn single(bits: f64, energy: f64) -> Scenario {
    Scenario::new(
        -5000.0,
        5000.0,
        V_MAX,
        vec![SensorSpec::new(0.0, bits, energy).unwrap()],
        reference_channel(),
    )
    .unwrap()
}

/// The ten-sensor layout on [0, 10000] with the given data for sensor 8.
pub fn ten_sensors(bits_8: f64) -> Scenario {
    let positions = [
        500.0, 2500.0, 4500.0, 6500.0, 7000.0, 7500.0, 8000.0, 8500.0, 9000.0, 9500.0,
    ];
    let bits = [3e6, 3e6, 3e6, 3e6, 2.5e6, 3e6, 3.5e6, bits_8, 3.5e6, 3e6];
    let sensors = positions
        .iter()
        .zip(bits)
        .map(|(&p, b)| SensorSpec::new(p, b, 1.2).unwrap())
        .collect();
    Scenario::new(0.0, 10000.0, V_MAX, sensors, reference_channel()).unwrap()
}

/// Random ordered scenario on [0, length] drawn from the ensemble sampler.
pub fn random_scenario(
    seed: u64,
    n: usize,
    length: f64,
    mean_bits: f64,
    mean_energy: f64,
) -> Scenario {
    let mut cfg = EnsembleConfig::reference(mean_bits, mean_energy);
    cfg.sensor_count = n;
    cfg.s_start = 0.0;
    cfg.s_end = length;
    cfg.seed = seed;
    sample_scenario(&cfg).unwrap()
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn uniform(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> f64 {
    rng.gen_range(lo..hi)
}

/// Upper bound on how much a plan's reported total can exceed the value the
/// same segments get in another solve when every fly speed is only known to
/// within `speed_tol` below its true optimum.
pub fn speed_slack(plan: &FlightPlan, speed_tol: f64) -> f64 {
    plan.segments
        .iter()
        .filter(|s| s.mode == Mode::Fly)
        .map(|s| {
            let v = s.speed.unwrap();
            let w = s.interval.width();
            if v > speed_tol {
                w * speed_tol / (v * (v - speed_tol))
            } else {
                f64::INFINITY
            }
        })
        .sum()
}

pub fn rel_close(a: f64, b: f64, rel: f64) -> bool {
    (a - b).abs() <= rel * a.abs().max(b.abs())
}
