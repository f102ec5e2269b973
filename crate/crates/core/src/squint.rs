//! Beam squint of phase-shifter-only arrays.
//!
//! A phase shifter approximates a delay at one frequency only. Away from the
//! carrier the pointing direction drifts, and the gain towards the intended
//! direction falls off like a bandpass filter.

use std::f64::consts::{FRAC_PI_2, PI};

use crate::array::{beamforming_gain, ps_combiner, ArrayGeometry};
use crate::error::{Error, Result};

/// Largest steering angle the error curves are meant for; beyond it the
/// arcsine saturates and the error stops being meaningful.
pub const PLOTTED_ANGLE_LIMIT_RAD: f64 = 60.0 * PI / 180.0;

/// Half-power constant of the large-N fractional bandwidth approximation.
pub const FBW_CONSTANT: f64 = 1.772;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SteeredAngle {
    pub angle_rad: f64,
    /// The arcsine argument left [-1, 1] and was clipped.
    pub clipped: bool,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SquintReport {
    pub intended_angle_rad: f64,
    pub freq_hz: f64,
    pub actual_angle_rad: f64,
    pub error_rad: f64,
    pub clipped: bool,
    /// `|intended| > 60°`.
    pub beyond_plotted_range: bool,
}

fn clipped_asin(x: f64) -> SteeredAngle {
    if x > 1.0 {
        SteeredAngle { angle_rad: FRAC_PI_2, clipped: true }
    } else if x < -1.0 {
        SteeredAngle { angle_rad: -FRAC_PI_2, clipped: true }
    } else {
        SteeredAngle { angle_rad: x.asin(), clipped: false }
    }
}

/// Direction a phase progression `ΔΦ` (set at the carrier) points to at `freq_hz`:
/// `asin((f_c / f) ΔΦ / π)`.
pub fn intended_aoa(delta_phi_rad: f64, freq_hz: f64, carrier_hz: f64) -> Result<SteeredAngle> {
    if !(freq_hz > 0.0) || !(carrier_hz > 0.0) {
        return Err(Error::domain("frequencies must be positive"));
    }
    Ok(clipped_asin(carrier_hz / freq_hz * delta_phi_rad / PI))
}

/// Pointing error at `freq_hz` of a half-wavelength PS array steered to
/// `intended_angle_rad` at the carrier.
pub fn squint_report(intended_angle_rad: f64, freq_hz: f64, carrier_hz: f64) -> Result<SquintReport> {
    if intended_angle_rad.abs() > FRAC_PI_2 {
        return Err(Error::domain("intended angle outside [-π/2, π/2]"));
    }
    let delta_phi = PI * intended_angle_rad.sin();
    let actual = intended_aoa(delta_phi, freq_hz, carrier_hz)?;
    Ok(SquintReport {
        intended_angle_rad,
        freq_hz,
        actual_angle_rad: actual.angle_rad,
        error_rad: (actual.angle_rad - intended_angle_rad).abs(),
        clipped: actual.clipped,
        beyond_plotted_range: intended_angle_rad.abs() > PLOTTED_ANGLE_LIMIT_RAD + 1e-12,
    })
}

/// Worst-case pointing error over a band of fractional bandwidth `fbw`. The
/// lower band edge `f_c (1 - fbw/2)` dominates, giving
/// `|asin(sin θ / (1 - fbw/2)) - θ|`.
pub fn max_angular_error(intended_angle_rad: f64, fbw: f64) -> Result<f64> {
    Ok(band_edge_report(intended_angle_rad, fbw)?.error_rad)
}

/// Full report at the lower band edge, with frequencies normalized to `f_c = 1`.
pub fn band_edge_report(intended_angle_rad: f64, fbw: f64) -> Result<SquintReport> {
    if !(fbw > 0.0 && fbw < 2.0) {
        return Err(Error::domain(format!("fractional bandwidth {fbw} outside (0, 2)")));
    }
    squint_report(intended_angle_rad, 1.0 - fbw / 2.0, 1.0)
}

/// Large-N 3-dB fractional bandwidth, `1.772 / (N |sin θ|)`. Broadside has
/// no squint and returns `+inf`.
pub fn fractional_bandwidth_3db(n_elements: usize, angle_rad: f64) -> Result<f64> {
    if n_elements < 2 {
        return Err(Error::domain("fractional bandwidth needs at least two elements"));
    }
    let s = angle_rad.sin().abs();
    if s == 0.0 {
        return Ok(f64::INFINITY);
    }
    Ok(FBW_CONSTANT / (n_elements as f64 * s))
}

/// Normalized gain `G(f) / N` of an `n_elements` PS array steered to
/// `steer_angle_rad`, evaluated towards the same angle at each normalized
/// frequency `f / f_c` of the grid.
pub fn gain_vs_frequency_curve(
    n_elements: usize,
    steer_angle_rad: f64,
    normalized_freqs: &[f64],
) -> Result<Vec<f64>> {
    if normalized_freqs.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::domain("frequency grid must be strictly increasing"));
    }
    // any carrier works; the curve only depends on f / f_c
    let carrier = 1e9;
    let geometry = ArrayGeometry::linear(n_elements, carrier)?;
    let taps = ps_combiner(&geometry, steer_angle_rad)?;
    normalized_freqs
        .iter()
        .map(|r| {
            beamforming_gain(&taps, &geometry, steer_angle_rad, r * carrier)
                .map(|g| g / n_elements as f64)
        })
        .collect()
}

/// Width between the −3 dB crossings around the peak of a sampled curve,
/// located by linear interpolation. `None` when a crossing is not on the grid.
pub fn measure_3db_width(normalized_freqs: &[f64], normalized_gain: &[f64]) -> Option<f64> {
    let level = 0.5f64.sqrt();
    let (peak, _) = normalized_gain
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.total_cmp(b.1))?;
    let crossing = |i: usize, j: usize| {
        let (g0, g1) = (normalized_gain[i], normalized_gain[j]);
        let t = (g0 - level) / (g0 - g1);
        normalized_freqs[i] + t * (normalized_freqs[j] - normalized_freqs[i])
    };
    let upper = (peak..normalized_gain.len() - 1)
        .find(|&i| normalized_gain[i + 1] < level)
        .map(|i| crossing(i, i + 1))?;
    let lower = (1..=peak)
        .rev()
        .find(|&i| normalized_gain[i - 1] < level)
        .map(|i| crossing(i, i - 1))?;
    Some(upper - lower)
}
