//! Line-of-sight ground-to-air channel.
//!
//! A sensor at horizontal offset `s` from the UAV sees the inverse channel
//! gain `(s² + H²)^(α/2) / β`, where `H` is the flight altitude and `β` the
//! reference SNR at 1 m. Everything here is a pure function of its inputs.

use std::f64::consts::LN_2;

use crate::error::{Error, Result};
use crate::quad;

/// Relative tolerance for numeric pathloss integrals (`α != 2`).
pub const PATHLOSS_QUAD_TOL: f64 = 1e-10;

/// LOS air-ground link constants.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelParams {
    /// Altitude in meters.
    pub altitude: f64,
    /// Reference SNR at 1 m, linear.
    pub beta: f64,
    /// Bandwidth in Hz.
    pub bandwidth: f64,
    /// Pathloss exponent.
    pub alpha: f64,
}

impl ChannelParams {
    pub fn new(altitude: f64, beta: f64, bandwidth: f64, alpha: f64) -> Result<Self> {
        if !(altitude > 0.0 && altitude.is_finite()) {
            return Err(Error::invalid(
                "altitude",
                format!("{altitude} must be > 0"),
            ));
        }
        if !(beta > 0.0 && beta.is_finite()) {
            return Err(Error::invalid("beta", format!("{beta} must be > 0")));
        }
        if !(bandwidth > 0.0 && bandwidth.is_finite()) {
            return Err(Error::invalid(
                "bandwidth",
                format!("{bandwidth} must be > 0"),
            ));
        }
        if !(alpha >= 2.0 && alpha.is_finite()) {
            return Err(Error::invalid("alpha", format!("{alpha} must be >= 2")));
        }
        Ok(Self {
            altitude,
            beta,
            bandwidth,
            alpha,
        })
    }

    /// Same as [`ChannelParams::new`] with `β` given in dB.
    pub fn from_db(altitude: f64, beta_db: f64, bandwidth: f64, alpha: f64) -> Result<Self> {
        Self::new(altitude, db_to_linear(beta_db), bandwidth, alpha)
    }

    pub fn beta_db(&self) -> f64 {
        10.0 * self.beta.log10()
    }

    /// H=100 m, β=80 dB, W=20 kHz, α=2.
    pub fn reference() -> Self {
        Self {
            altitude: 100.0,
            beta: 1e8,
            bandwidth: 2e4,
            alpha: 2.0,
        }
    }

    pub(crate) fn is_free_space(&self) -> bool {
        self.alpha == 2.0
    }

    /// `(s² + H²)^(α/2)`, the pathloss at offset `s`.
    #[inline]
    pub fn pathloss(&self, s: f64) -> f64 {
        let d2 = s * s + self.altitude * self.altitude;
        if self.is_free_space() {
            d2
        } else {
            d2.powf(0.5 * self.alpha)
        }
    }
}

pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

/// Inverse channel gain `(s² + H²)^(α/2) / β` at horizontal offset `s`.
#[inline]
pub fn inverse_gain(s: f64, ch: &ChannelParams) -> f64 {
    ch.pathloss(s) / ch.beta
}

/// Instantaneous rate in bits/s for transmit power `p` at offset `s`.
pub fn instantaneous_rate(p: f64, s: f64, ch: &ChannelParams) -> Result<f64> {
    if !(p >= 0.0) {
        return Err(Error::invalid("power", format!("{p} must be >= 0")));
    }
    let snr = p / inverse_gain(s, ch);
    Ok(0.5 * ch.bandwidth * snr.ln_1p() / LN_2)
}

/// `∫ₓʸ (s² + H²)^(α/2) ds`.
///
/// Closed form for `α = 2`; adaptive quadrature otherwise.
pub fn pathloss_integral(x: f64, y: f64, ch: &ChannelParams) -> Result<f64> {
    if x > y {
        return Err(Error::invalid(
            "interval",
            format!("lower bound {x} exceeds upper bound {y}"),
        ));
    }
    Ok(pathloss_integral_unchecked(x, y, ch))
}

pub(crate) fn pathloss_integral_unchecked(x: f64, y: f64, ch: &ChannelParams) -> f64 {
    if x == y {
        return 0.0;
    }
    if ch.is_free_space() {
        let h2 = ch.altitude * ch.altitude;
        (y - x) * ((x * x + x * y + y * y) / 3.0 + h2)
    } else {
        pathloss_integral_numeric(x, y, ch)
    }
}

/// Quadrature path of [`pathloss_integral`], valid for any `α`.
pub fn pathloss_integral_numeric(x: f64, y: f64, ch: &ChannelParams) -> f64 {
    quad::integrate(|s| ch.pathloss(s), x, y, PATHLOSS_QUAD_TOL)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn riemann(f: impl Fn(f64) -> f64, a: f64, b: f64, panels: usize) -> f64 {
        let h = (b - a) / panels as f64;
        (0..panels)
            .map(|i| f(a + (i as f64 + 0.5) * h))
            .sum::<f64>()
            * h
    }

    #[test]
    fn inverse_gain_examples() {
        let ch = ChannelParams::reference();
        assert!((inverse_gain(0.0, &ch) - 1e-4).abs() < 1e-18);
        assert_eq!(inverse_gain(-37.5, &ch), inverse_gain(37.5, &ch));
        let h = ch.altitude;
        assert!((inverse_gain(h, &ch) - 2.0 * h * h / ch.beta).abs() < 1e-18);
    }

    #[test]
    fn rate_examples() {
        let ch = ChannelParams::reference();
        assert_eq!(instantaneous_rate(0.0, 123.0, &ch).unwrap(), 0.0);
        // unit SNR gives W/2
        let p = inverse_gain(250.0, &ch);
        let r = instantaneous_rate(p, 250.0, &ch).unwrap();
        assert!((r - 1e4).abs() < 1e-9);
        // 1e-3 W overhead: 1e4 * log2(11)
        let r = instantaneous_rate(1e-3, 0.0, &ch).unwrap();
        assert!((r - 1e4 * 11f64.log2()).abs() < 1e-6);
        assert!(((r - 3.459e4) / 3.459e4).abs() < 5e-4);
        assert!(instantaneous_rate(-1e-9, 0.0, &ch).is_err());
    }

    #[test]
    fn rate_monotone() {
        let ch = ChannelParams::reference();
        let r1 = instantaneous_rate(0.01, 10.0, &ch).unwrap();
        let r2 = instantaneous_rate(0.02, 10.0, &ch).unwrap();
        let r3 = instantaneous_rate(0.02, -20.0, &ch).unwrap();
        assert!(r2 > r1 && r3 < r2);
    }

    #[test]
    fn pathloss_integral_examples() {
        let ch = ChannelParams::new(1.0, 1.0, 1.0, 2.0).unwrap();
        assert_eq!(pathloss_integral(3.0, 3.0, &ch).unwrap(), 0.0);
        let v = pathloss_integral(0.0, 1.0, &ch).unwrap();
        assert!((v - riemann(|s| s * s + 1.0, 0.0, 1.0, 100_000)).abs() < 1e-9);
        assert!((v - 4.0 / 3.0).abs() < 1e-15);
        assert!(pathloss_integral(1.0, 0.0, &ch).is_err());
    }

    #[test]
    fn alpha_three_matches_riemann() {
        let ch = ChannelParams::new(100.0, 1e8, 2e4, 3.0).unwrap();
        let v = pathloss_integral(-50.0, 50.0, &ch).unwrap();
        let oracle = riemann(|s| (s * s + 1e4).powf(1.5), -50.0, 50.0, 1_000_000);
        assert!(((v - oracle) / oracle).abs() < 1e-10, "{v} vs {oracle}");
    }

    #[test]
    fn db_conversion() {
        let ch = ChannelParams::from_db(100.0, 80.0, 2e4, 2.0).unwrap();
        assert_eq!(ch.beta, 1e8);
        assert!((ch.beta_db() - 80.0).abs() < 1e-12);
    }

    #[test]
    fn invalid_params_rejected() {
        assert!(ChannelParams::new(0.0, 1.0, 1.0, 2.0).is_err());
        assert!(ChannelParams::new(1.0, -1.0, 1.0, 2.0).is_err());
        assert!(ChannelParams::new(1.0, 1.0, 0.0, 2.0).is_err());
        assert!(ChannelParams::new(1.0, 1.0, 1.0, 1.5).is_err());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]

        #[test]
        fn closed_form_matches_quadrature(
            x in -5000.0f64..5000.0,
            w in 1e-3f64..5000.0,
            h in 1.0f64..500.0,
        ) {
            let ch = ChannelParams::new(h, 1e8, 2e4, 2.0).unwrap();
            let y = x + w;
            let closed = pathloss_integral(x, y, &ch).unwrap();
            let numeric = pathloss_integral_numeric(x, y, &ch);
            prop_assert!(((closed - numeric) / closed).abs() <= 1e-9);
        }

        #[test]
        fn integral_is_additive(
            x in -3000.0f64..3000.0,
            a in 0.0f64..2000.0,
            b in 0.0f64..2000.0,
            alpha in prop::sample::select(vec![2.0, 2.5, 3.0, 4.0]),
        ) {
            let ch = ChannelParams::new(100.0, 1e8, 2e4, alpha).unwrap();
            let (y, z) = (x + a, x + a + b);
            let whole = pathloss_integral(x, z, &ch).unwrap();
            let parts = pathloss_integral(x, y, &ch).unwrap() + pathloss_integral(y, z, &ch).unwrap();
            if whole > 0.0 {
                prop_assert!(((whole - parts) / whole).abs() <= 1e-9);
            }
        }

        #[test]
        fn rate_composes_with_inverse_gain(p in 0.0f64..1.0, s in -5000.0f64..5000.0) {
            let ch = ChannelParams::reference();
            let composed = 0.5 * ch.bandwidth * (1.0 + p / inverse_gain(s, &ch)).log2();
            let r = instantaneous_rate(p, s, &ch).unwrap();
            prop_assert!((r - composed).abs() <= 1e-9 * composed.max(1.0));
        }
    }
}
