//! Array geometry, spatial response vectors and combiner weights.
//!
//! Element `n` (zero based) of a linear array sees the phase `n * ΔΦ`, with
//! `ΔΦ = 2π f d sin(θ) / c`. Combiner weights follow the tap model
//! `w_n = α_n exp(-j(2π (f - f_c) τ_n + φ_n))`, so the beamforming gain of a
//! tap setting towards `θ` at frequency `f` is `|wᴴ a|`.
//!
//! Angles are radians throughout; degrees only appear at the CLI and CSV
//! boundary.

use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Speed of light in vacuum, m/s.
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ArrayLayout {
    Linear { n: usize },
    /// `nx * ny` elements on a rectangular grid in the x-y plane.
    Planar { nx: usize, ny: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ArrayGeometry {
    pub layout: ArrayLayout,
    /// Element pitch in carrier wavelengths.
    pub spacing_wavelengths: f64,
    pub carrier_hz: f64,
}

impl ArrayGeometry {
    pub fn linear(n: usize, carrier_hz: f64) -> Result<Self> {
        Self::new(ArrayLayout::Linear { n }, 0.5, carrier_hz)
    }

    pub fn planar(nx: usize, ny: usize, carrier_hz: f64) -> Result<Self> {
        Self::new(ArrayLayout::Planar { nx, ny }, 0.5, carrier_hz)
    }

    pub fn new(layout: ArrayLayout, spacing_wavelengths: f64, carrier_hz: f64) -> Result<Self> {
        let geometry = ArrayGeometry {
            layout,
            spacing_wavelengths,
            carrier_hz,
        };
        geometry.validate()?;
        Ok(geometry)
    }

    pub fn with_spacing(self, spacing_wavelengths: f64) -> Result<Self> {
        Self::new(self.layout, spacing_wavelengths, self.carrier_hz)
    }

    pub fn validate(&self) -> Result<()> {
        let dims_ok = match self.layout {
            ArrayLayout::Linear { n } => n >= 1,
            ArrayLayout::Planar { nx, ny } => nx >= 1 && ny >= 1,
        };
        if !dims_ok {
            return Err(Error::config("array needs at least one element per dimension"));
        }
        if !(self.spacing_wavelengths > 0.0 && self.spacing_wavelengths.is_finite()) {
            return Err(Error::config("element spacing must be positive"));
        }
        if !(self.carrier_hz > 0.0 && self.carrier_hz.is_finite()) {
            return Err(Error::config("carrier frequency must be positive"));
        }
        Ok(())
    }

    pub fn element_count(&self) -> usize {
        match self.layout {
            ArrayLayout::Linear { n } => n,
            ArrayLayout::Planar { nx, ny } => nx * ny,
        }
    }

    pub fn is_planar(&self) -> bool {
        matches!(self.layout, ArrayLayout::Planar { .. })
    }

    pub fn wavelength_m(&self) -> f64 {
        SPEED_OF_LIGHT / self.carrier_hz
    }

    pub fn spacing_m(&self) -> f64 {
        self.spacing_wavelengths * self.wavelength_m()
    }
}

/// How the spatial response depends on frequency.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ResponseModel {
    /// Element phases scale with the actual subcarrier frequency.
    #[default]
    FrequencyDependent,
    /// Element phases are evaluated at the carrier for every subcarrier.
    FrequencyFlat,
}

impl ResponseModel {
    pub fn effective_freq(self, freq_hz: f64, carrier_hz: f64) -> f64 {
        match self {
            ResponseModel::FrequencyDependent => freq_hz,
            ResponseModel::FrequencyFlat => carrier_hz,
        }
    }
}

/// Frequency reference of the delay term in the combiner phase.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DelayModel {
    /// Delay applied after down-conversion: phase `2π (f - f_c) τ`.
    #[default]
    Baseband,
    /// Delay applied at RF: phase `2π f τ`.
    Rf,
}

/// Per-element gain, delay and phase taps of a combiner.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TapConfig {
    pub gains: Vec<f64>,
    pub delays_s: Vec<f64>,
    pub phases_rad: Vec<f64>,
    #[serde(default)]
    pub delay_model: DelayModel,
}

impl TapConfig {
    pub fn new(gains: Vec<f64>, delays_s: Vec<f64>, phases_rad: Vec<f64>) -> Result<Self> {
        let taps = TapConfig {
            gains,
            delays_s,
            phases_rad,
            delay_model: DelayModel::Baseband,
        };
        taps.validate()?;
        Ok(taps)
    }

    /// Unit gains, zero delays, zero phases.
    pub fn nominal(n: usize) -> Self {
        TapConfig {
            gains: vec![1.0; n],
            delays_s: vec![0.0; n],
            phases_rad: vec![0.0; n],
            delay_model: DelayModel::Baseband,
        }
    }

    pub fn with_delay_model(mut self, model: DelayModel) -> Self {
        self.delay_model = model;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.gains.len();
        if self.delays_s.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                actual: self.delays_s.len(),
                context: "delay taps",
            });
        }
        if self.phases_rad.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                actual: self.phases_rad.len(),
                context: "phase taps",
            });
        }
        if self.gains.iter().any(|g| !(*g >= 0.0) || !g.is_finite()) {
            return Err(Error::config("tap gains must be finite and nonnegative"));
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.gains.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gains.is_empty()
    }

    pub fn gain_sum(&self) -> f64 {
        self.gains.iter().sum()
    }

    pub fn gain_energy(&self) -> f64 {
        self.gains.iter().map(|g| g * g).sum()
    }
}

/// Spatial response vector `a` for one (frequency, direction) pair.
#[derive(Debug, Clone, PartialEq)]
pub struct SpatialResponse {
    pub values: Vec<Complex64>,
}

impl SpatialResponse {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

fn check_angle(angle_rad: f64) -> Result<()> {
    if !angle_rad.is_finite() || angle_rad.abs() > FRAC_PI_2 + 1e-12 {
        return Err(Error::domain(format!(
            "angle {angle_rad} rad outside [-π/2, π/2]"
        )));
    }
    Ok(())
}

fn check_freq(freq_hz: f64) -> Result<()> {
    if !(freq_hz > 0.0 && freq_hz.is_finite()) {
        return Err(Error::domain(format!("frequency {freq_hz} Hz must be positive")));
    }
    Ok(())
}

/// Phase difference between neighbouring elements, `ΔΦ = 2π f d sin(θ) / c`.
pub fn phase_difference(geometry: &ArrayGeometry, angle_rad: f64, freq_hz: f64) -> Result<f64> {
    check_angle(angle_rad)?;
    check_freq(freq_hz)?;
    let delay = geometry.spacing_m() * angle_rad.sin() / SPEED_OF_LIGHT;
    Ok(2.0 * PI * freq_hz * delay)
}

/// Frequency-dependent spatial response. Planar arrays are evaluated in the
/// `φ = 0` plane; use [`planar_response`] for arbitrary directions.
pub fn spatial_response(
    geometry: &ArrayGeometry,
    angle_rad: f64,
    freq_hz: f64,
) -> Result<SpatialResponse> {
    match geometry.layout {
        ArrayLayout::Linear { n } => {
            let dphi = phase_difference(geometry, angle_rad, freq_hz)?;
            Ok(SpatialResponse {
                values: (0..n)
                    .map(|k| Complex64::from_polar(1.0, -(k as f64) * dphi))
                    .collect(),
            })
        }
        ArrayLayout::Planar { .. } => planar_response(geometry, angle_rad, 0.0, freq_hz),
    }
}

/// Spatial response under the chosen frequency model.
pub fn steering_vector(
    geometry: &ArrayGeometry,
    angle_rad: f64,
    freq_hz: f64,
    model: ResponseModel,
) -> Result<SpatialResponse> {
    spatial_response(
        geometry,
        angle_rad,
        model.effective_freq(freq_hz, geometry.carrier_hz),
    )
}

/// Response of a planar array towards the spherical direction `(θ, φ)`, with
/// `θ` measured from broadside (the array normal) and `φ` the azimuth in the
/// array plane. Element `(i, j)` sits at `(i d, j d)`; flattening is row major
/// with `i` outer, matching [`crate::codebook::build_planar_taps`].
pub fn planar_response(
    geometry: &ArrayGeometry,
    theta_rad: f64,
    phi_rad: f64,
    freq_hz: f64,
) -> Result<SpatialResponse> {
    check_angle(theta_rad)?;
    check_freq(freq_hz)?;
    let (nx, ny) = match geometry.layout {
        ArrayLayout::Planar { nx, ny } => (nx, ny),
        ArrayLayout::Linear { n } => (n, 1),
    };
    let u = theta_rad.sin() * phi_rad.cos();
    let v = theta_rad.sin() * phi_rad.sin();
    Ok(planar_response_uv(geometry, nx, ny, u, v, freq_hz))
}

pub(crate) fn planar_response_uv(
    geometry: &ArrayGeometry,
    nx: usize,
    ny: usize,
    u: f64,
    v: f64,
    freq_hz: f64,
) -> SpatialResponse {
    let k = 2.0 * PI * freq_hz * geometry.spacing_m() / SPEED_OF_LIGHT;
    let mut values = Vec::with_capacity(nx * ny);
    for i in 0..nx {
        for j in 0..ny {
            let phase = k * (i as f64 * u + j as f64 * v);
            values.push(Complex64::from_polar(1.0, -phase));
        }
    }
    SpatialResponse { values }
}

/// Frequency-flat phase-shifter combiner steered to `steer_angle_rad`.
pub fn ps_combiner(geometry: &ArrayGeometry, steer_angle_rad: f64) -> Result<TapConfig> {
    let dphi = phase_difference(geometry, steer_angle_rad, geometry.carrier_hz)?;
    let n = geometry.element_count();
    Ok(TapConfig {
        gains: vec![1.0; n],
        delays_s: vec![0.0; n],
        phases_rad: (0..n).map(|k| k as f64 * dphi).collect(),
        delay_model: DelayModel::Baseband,
    })
}

/// Delay-matched true-time-delay combiner for a linear array.
///
/// Delays equal the inter-element propagation delays, `τ_n = n d sin(θ) / c`.
/// In the baseband model the delay only acts on `f - f_c`, so the phase taps
/// carry the missing carrier term `2π f_c τ_n`; the resulting weights match
/// the response at every frequency.
pub fn ttd_combiner(geometry: &ArrayGeometry, steer_angle_rad: f64) -> Result<TapConfig> {
    check_angle(steer_angle_rad)?;
    let n = geometry.element_count();
    let step = geometry.spacing_m() * steer_angle_rad.sin() / SPEED_OF_LIGHT;
    let delays_s: Vec<f64> = (0..n).map(|k| k as f64 * step).collect();
    let phases_rad = delays_s
        .iter()
        .map(|tau| (2.0 * PI * geometry.carrier_hz * tau).rem_euclid(2.0 * PI))
        .collect();
    Ok(TapConfig {
        gains: vec![1.0; n],
        delays_s,
        phases_rad,
        delay_model: DelayModel::Baseband,
    })
}

/// Frequency-dependent combiner weights
/// `w_n = α_n exp(-j(2π f_ref τ_n + φ_n))`, where `f_ref` is `f - f_c` for the
/// baseband delay model and `f` for the RF model.
pub fn combiner_weights(taps: &TapConfig, freq_hz: f64, carrier_hz: f64) -> Vec<Complex64> {
    let f_ref = match taps.delay_model {
        DelayModel::Baseband => freq_hz - carrier_hz,
        DelayModel::Rf => freq_hz,
    };
    taps.gains
        .iter()
        .zip(&taps.delays_s)
        .zip(&taps.phases_rad)
        .map(|((alpha, tau), phi)| Complex64::from_polar(*alpha, -(2.0 * PI * f_ref * tau + phi)))
        .collect()
}

/// `wᴴ a`.
pub fn inner_product(weights: &[Complex64], response: &[Complex64]) -> Complex64 {
    weights
        .iter()
        .zip(response)
        .map(|(w, a)| w.conj() * a)
        .sum()
}

/// `|w(f)ᴴ a(θ, f)|` with the frequency-dependent response.
pub fn beamforming_gain(
    taps: &TapConfig,
    geometry: &ArrayGeometry,
    angle_rad: f64,
    freq_hz: f64,
) -> Result<f64> {
    beamforming_gain_with(taps, geometry, angle_rad, freq_hz, ResponseModel::FrequencyDependent)
}

pub fn beamforming_gain_with(
    taps: &TapConfig,
    geometry: &ArrayGeometry,
    angle_rad: f64,
    freq_hz: f64,
    model: ResponseModel,
) -> Result<f64> {
    if taps.len() != geometry.element_count() {
        return Err(Error::DimensionMismatch {
            expected: geometry.element_count(),
            actual: taps.len(),
            context: "taps vs array elements",
        });
    }
    let response = steering_vector(geometry, angle_rad, freq_hz, model)?;
    let weights = combiner_weights(taps, freq_hz, geometry.carrier_hz);
    Ok(inner_product(&weights, &response.values).norm())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    const FC: f64 = 60e9;

    fn ula(n: usize) -> ArrayGeometry {
        ArrayGeometry::linear(n, FC).unwrap()
    }

    #[test]
    fn geometry_rejects_degenerate_layouts() {
        assert!(ArrayGeometry::linear(0, FC).is_err());
        assert!(ArrayGeometry::planar(3, 0, FC).is_err());
        assert!(ula(4).with_spacing(0.0).is_err());
        assert!(ArrayGeometry::linear(4, -1.0).is_err());
    }

    #[test]
    fn phase_difference_closed_form() {
        let g = ula(8);
        assert_eq!(phase_difference(&g, 0.0, 61e9).unwrap(), 0.0);
        assert_relative_eq!(phase_difference(&g, FRAC_PI_2, FC).unwrap(), PI, epsilon = 1e-12);

        let theta = 45f64.to_radians();
        let got = phase_difference(&g, theta, 61e9).unwrap();
        // 2π f ΔT with ΔT = d sinθ / c
        let delta_t = 0.5 * (SPEED_OF_LIGHT / FC) * theta.sin() / SPEED_OF_LIGHT;
        assert_relative_eq!(got, 2.0 * PI * 61e9 * delta_t, epsilon = 1e-12);
        assert_relative_eq!(got, 2.2585, epsilon = 1e-4);
    }

    #[test]
    fn angles_outside_half_plane_are_rejected() {
        let g = ula(4);
        assert!(matches!(phase_difference(&g, 1.6, FC), Err(Error::Domain(_))));
        assert!(spatial_response(&g, -2.0, FC).is_err());
        assert!(phase_difference(&g, 0.1, 0.0).is_err());
    }

    #[test]
    fn spatial_response_examples() {
        let ones = spatial_response(&ula(4), 0.0, FC).unwrap();
        assert!(ones.values.iter().all(|v| (v - Complex64::new(1.0, 0.0)).norm() < 1e-15));

        let endfire = spatial_response(&ula(2), FRAC_PI_2, FC).unwrap();
        assert_relative_eq!(endfire.values[1].re, -1.0, epsilon = 1e-12);
        assert!(endfire.values[1].im.abs() < 1e-12);

        let a = spatial_response(&ula(16), 45f64.to_radians(), FC).unwrap();
        let step = Complex64::from_polar(1.0, -PI * 45f64.to_radians().sin());
        for w in a.values.windows(2) {
            assert!((w[1] / w[0] - step).norm() < 1e-12);
            assert_relative_eq!(w[1].norm(), 1.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn ps_combiner_phases() {
        let taps = ps_combiner(&ula(4), 30f64.to_radians()).unwrap();
        for (k, phi) in taps.phases_rad.iter().enumerate() {
            assert_relative_eq!(*phi, k as f64 * PI / 2.0, epsilon = 1e-12);
        }
        assert!(taps.delays_s.iter().all(|d| *d == 0.0));
        let flat = ps_combiner(&ula(4), 0.0).unwrap();
        assert!(flat.phases_rad.iter().all(|p| *p == 0.0));

        let taps = ps_combiner(&ula(16), 45f64.to_radians()).unwrap();
        assert_relative_eq!(taps.phases_rad[1], 2.2214, epsilon = 1e-4);
    }

    #[test]
    fn combiner_weights_examples() {
        let taps = TapConfig::new(vec![1.0; 3], vec![1e-9, 3e-9, -2e-9], vec![0.0; 3]).unwrap();
        for w in combiner_weights(&taps, FC, FC) {
            assert!((w - Complex64::new(1.0, 0.0)).norm() < 1e-15);
        }

        let bw = 2e9;
        let taps = TapConfig::new(vec![1.0; 2], vec![0.0, 1.0 / bw], vec![0.0; 2]).unwrap();
        let w = combiner_weights(&taps, FC + bw / 2.0, FC);
        assert!((w[1] - Complex64::new(-1.0, 0.0)).norm() < 1e-12);

        let delays = (0..8).map(|k| k as f64 * 0.5e-9).collect();
        let taps = TapConfig::new(vec![1.0; 8], delays, vec![0.0; 8]).unwrap();
        let w = combiner_weights(&taps, FC + 100e6, FC);
        let expected = Complex64::from_polar(1.0, -2.0 * PI * 1e8 * 4.0 * 0.5e-9);
        assert!((w[4] - expected).norm() < 1e-12);
        assert!((w[4] - Complex64::from_polar(1.0, -0.4 * PI)).norm() < 1e-12);
    }

    #[test]
    fn rf_and_baseband_models_differ_only_by_reference() {
        let delays: Vec<f64> = (0..4).map(|k| k as f64 * 1e-12).collect();
        let base = TapConfig::new(vec![1.0; 4], delays, vec![0.0; 4]).unwrap();
        let rf = base.clone().with_delay_model(DelayModel::Rf);
        let f = FC + 3e8;
        let wb = combiner_weights(&base, f, FC);
        let wr = combiner_weights(&rf, f, FC);
        for (k, (b, r)) in wb.iter().zip(&wr).enumerate() {
            let extra = Complex64::from_polar(1.0, -2.0 * PI * FC * k as f64 * 1e-12);
            assert!((b * extra - r).norm() < 1e-9);
        }
    }

    #[test]
    fn matched_ps_combiner_reaches_full_gain() {
        for n in [1, 4, 16] {
            let g = ula(n);
            let taps = ps_combiner(&g, 0.3).unwrap();
            assert_relative_eq!(beamforming_gain(&taps, &g, 0.3, FC).unwrap(), n as f64, epsilon = 1e-9);
        }
    }

    #[test]
    fn gain_matches_brute_force_sum() {
        // N=4, PS steered at 45 deg, evaluated at f/f_c = 1.1
        let g = ula(4);
        let theta = 45f64.to_radians();
        let taps = ps_combiner(&g, theta).unwrap();
        let got = beamforming_gain(&taps, &g, theta, 1.1 * FC).unwrap();

        let dphi = PI * theta.sin();
        let big_dphi = PI * theta.sin() * 1.1;
        let mut acc = Complex64::new(0.0, 0.0);
        for k in 0..4 {
            acc += Complex64::from_polar(1.0, k as f64 * (dphi - big_dphi));
        }
        assert_relative_eq!(got, acc.norm(), epsilon = 1e-12);
        assert!(got < 4.0);
    }

    #[test]
    fn squint_gain_at_three_db_edge() {
        let n = 16;
        let g = ula(n);
        let theta = 45f64.to_radians();
        let taps = ps_combiner(&g, theta).unwrap();
        let fbw = 1.772 / (n as f64 * theta.sin());
        let edge = beamforming_gain(&taps, &g, theta, FC * (1.0 + fbw / 2.0)).unwrap();
        assert!((edge / n as f64 - 1.0 / 2f64.sqrt()).abs() < 0.01, "{}", edge / n as f64);
    }

    #[test]
    fn ttd_combiner_is_squint_free() {
        let g = ula(32);
        let theta = -0.6;
        let taps = ttd_combiner(&g, theta).unwrap();
        for k in 0..=20 {
            let f = FC - 1e9 + k as f64 * 1e8;
            assert_relative_eq!(beamforming_gain(&taps, &g, theta, f).unwrap(), 32.0, max_relative = 1e-9);
        }
    }

    #[test]
    fn gain_rejects_mismatched_taps() {
        let taps = TapConfig::nominal(3);
        assert!(matches!(
            beamforming_gain(&taps, &ula(4), 0.0, FC),
            Err(Error::DimensionMismatch { .. })
        ));
        assert!(TapConfig::new(vec![1.0], vec![], vec![0.0]).is_err());
        assert!(TapConfig::new(vec![-1.0], vec![0.0], vec![0.0]).is_err());
    }

    #[test]
    fn planar_broadside_and_cut() {
        let g = ArrayGeometry::planar(3, 2, FC).unwrap();
        let a = planar_response(&g, 0.0, 1.0, FC).unwrap();
        assert!(a.values.iter().all(|v| (v - Complex64::new(1.0, 0.0)).norm() < 1e-12));
        // φ = 0 cut: only the x index contributes.
        let a = planar_response(&g, 0.4, 0.0, FC).unwrap();
        assert!((a.values[1] - Complex64::new(1.0, 0.0)).norm() < 1e-12);
        let step = Complex64::from_polar(1.0, -PI * 0.4f64.sin());
        assert!((a.values[2] - step).norm() < 1e-12);
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn gain_is_bounded(
                n in 1usize..24,
                steer in -1.5f64..1.5,
                angle in -1.5f64..1.5,
                ratio in 0.8f64..1.2,
                gains in proptest::collection::vec(0.0f64..3.0, 24),
            ) {
                let g = ula(n);
                let mut taps = ps_combiner(&g, steer).unwrap();
                taps.gains = gains[..n].to_vec();
                let gain = beamforming_gain(&taps, &g, angle, ratio * FC).unwrap();
                prop_assert!(gain >= 0.0);
                prop_assert!(gain <= taps.gain_sum() + 1e-9);
            }

            #[test]
            fn conjugate_symmetry(n in 1usize..32, theta in -1.5f64..1.5, ratio in 0.8f64..1.2) {
                let g = ula(n);
                let plus = ps_combiner(&g, theta).unwrap();
                let minus = ps_combiner(&g, -theta).unwrap();
                let a = beamforming_gain(&minus, &g, theta, ratio * FC).unwrap();
                let b = beamforming_gain(&plus, &g, -theta, ratio * FC).unwrap();
                prop_assert!((a - b).abs() < 1e-9);
            }

            #[test]
            fn carrier_equivalence(
                gains in proptest::collection::vec(0.0f64..2.0, 1..16),
                scale in -5e-9f64..5e-9,
            ) {
                let n = gains.len();
                let delays = (0..n).map(|k| k as f64 * scale).collect();
                let taps = TapConfig::new(gains.clone(), delays, vec![0.0; n]).unwrap();
                for (w, g) in combiner_weights(&taps, FC, FC).iter().zip(&gains) {
                    prop_assert!((w - Complex64::new(*g, 0.0)).norm() < 1e-12);
                }
            }
        }
    }
}
