//! Frequency-dependent ("rainbow") training codebooks for TTD arrays.
//!
//! With delay taps `τ_n = n Δτ` and zero phase taps, the combiner phase step
//! at baseband offset `f` is `2π f Δτ`, which matches a half-wavelength
//! array's step `π sin θ` when `sin θ = mod(2 f Δτ + 1, 2) - 1`. Every
//! subcarrier therefore points somewhere else, and a single OFDM symbol probes
//! the whole angular range. `Δτ = R / BW` makes `R` loaded subcarriers share
//! each direction.

use std::f64::consts::{FRAC_PI_2, PI};

use serde::{Deserialize, Serialize};

use crate::array::{
    combiner_weights, inner_product, planar_response_uv, steering_vector, ArrayGeometry,
    ArrayLayout, ResponseModel, TapConfig,
};
use crate::error::{Error, Result};
use crate::waveform::OfdmSpec;

/// Two loaded subcarriers belong to the same direction when their mapped
/// sines agree within this tolerance.
const GROUPING_TOLERANCE: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Subcarrier {
    pub bin: usize,
    pub baseband_freq_hz: f64,
    pub direction: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DirectionGroup {
    /// Probed angle after rotation.
    pub angle_rad: f64,
    /// Sine of the probed angle before rotation.
    pub nominal_sine: f64,
    /// Indices into [`RainbowCodebook::subcarriers`].
    pub subcarriers: Vec<usize>,
    /// Rotation pushed this direction across ±90° and it wrapped around.
    pub wrapped: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RainbowCodebook {
    pub taps: TapConfig,
    pub delta_tau_s: f64,
    pub diversity: usize,
    pub bandwidth_hz: f64,
    pub carrier_hz: f64,
    /// Loaded subcarriers in ascending frequency; this is the order of `Y[m]`.
    pub subcarriers: Vec<Subcarrier>,
    /// Directions ordered by nominal sine, ascending.
    pub directions: Vec<DirectionGroup>,
    /// Accumulated rotation, as a shift in the sine domain.
    pub rotation_sine: f64,
}

/// `sin θ_m = mod(2 f Δτ + 1, 2) - 1`, in `[-1, 1)`.
pub fn frequency_to_sine(baseband_freq_hz: f64, delta_tau_s: f64) -> f64 {
    let r = (2.0 * baseband_freq_hz * delta_tau_s + 1.0).rem_euclid(2.0);
    // rounding just below an even integer belongs to the -1 end of the range
    if 2.0 - r < 1e-9 {
        -1.0
    } else {
        r - 1.0
    }
}

/// Angle probed by baseband offset `baseband_freq_hz`.
pub fn frequency_to_angle(baseband_freq_hz: f64, delta_tau_s: f64) -> Result<f64> {
    if !(delta_tau_s > 0.0) {
        return Err(Error::domain("delay step must be positive"));
    }
    Ok(frequency_to_sine(baseband_freq_hz, delta_tau_s).asin())
}

fn wrap_sine(s: f64) -> (f64, bool) {
    let wrapped = (s + 1.0).rem_euclid(2.0) - 1.0;
    (wrapped, !(-1.0..1.0).contains(&s))
}

/// Rainbow codebook for an `n_elements` ULA over the loaded subcarriers of
/// `ofdm`, with diversity order `diversity` and an initial rotation.
pub fn build_rainbow_taps(
    n_elements: usize,
    carrier_hz: f64,
    diversity: usize,
    rotation_rad: f64,
    ofdm: &OfdmSpec,
) -> Result<RainbowCodebook> {
    if n_elements < 2 {
        return Err(Error::config("rainbow codebook needs at least two elements"));
    }
    if diversity == 0 {
        return Err(Error::config("diversity order must be at least 1"));
    }
    if !(rotation_rad.abs() <= FRAC_PI_2) {
        return Err(Error::domain("rotation outside [-π/2, π/2]"));
    }
    ofdm.validate()?;
    let m = ofdm.loaded_count();
    if m % diversity != 0 {
        return Err(Error::config(format!(
            "{m} loaded subcarriers cannot be split into groups of {diversity}"
        )));
    }

    let bandwidth_hz = ofdm.bandwidth_hz;
    let delta_tau_s = diversity as f64 / bandwidth_hz;
    let loaded = ofdm.loaded_by_frequency();
    let sines: Vec<f64> = loaded
        .iter()
        .map(|(_, f)| frequency_to_sine(*f, delta_tau_s))
        .collect();

    let mut order: Vec<usize> = (0..m).collect();
    order.sort_by(|&a, &b| sines[a].total_cmp(&sines[b]).then(a.cmp(&b)));
    let mut directions: Vec<DirectionGroup> = Vec::new();
    for idx in order {
        match directions.last_mut() {
            Some(group) if (sines[idx] - group.nominal_sine).abs() < GROUPING_TOLERANCE => {
                group.subcarriers.push(idx)
            }
            _ => directions.push(DirectionGroup {
                angle_rad: sines[idx].asin(),
                nominal_sine: sines[idx],
                subcarriers: vec![idx],
                wrapped: false,
            }),
        }
    }
    if let Some(bad) = directions.iter().find(|g| g.subcarriers.len() != diversity) {
        return Err(Error::config(format!(
            "loaded subcarriers do not realize diversity {diversity}: direction sin={:.4} has {} subcarriers",
            bad.nominal_sine,
            bad.subcarriers.len()
        )));
    }
    for group in &mut directions {
        group.subcarriers.sort_unstable();
    }

    let mut subcarriers: Vec<Subcarrier> = loaded
        .iter()
        .map(|&(bin, f)| Subcarrier { bin, baseband_freq_hz: f, direction: 0 })
        .collect();
    for (d, group) in directions.iter().enumerate() {
        for &m in &group.subcarriers {
            subcarriers[m].direction = d;
        }
    }

    let taps = TapConfig {
        gains: vec![1.0; n_elements],
        delays_s: (0..n_elements).map(|k| k as f64 * delta_tau_s).collect(),
        phases_rad: vec![0.0; n_elements],
        delay_model: Default::default(),
    };
    let book = RainbowCodebook {
        taps,
        delta_tau_s,
        diversity,
        bandwidth_hz,
        carrier_hz,
        subcarriers,
        directions,
        rotation_sine: 0.0,
    };
    Ok(rotate_codebook(&book, rotation_rad))
}

/// Rotate all probed directions with the frequency-flat phase taps
/// `φ_n = n π sin(θ_rot)`. Rotations compose: the phase progressions add, so
/// every probed sine shifts by `sin(θ_rot)`. Directions pushed past ±90°
/// wrap around and are flagged.
pub fn rotate_codebook(book: &RainbowCodebook, rotation_rad: f64) -> RainbowCodebook {
    let mut out = book.clone();
    out.rotation_sine = book.rotation_sine + rotation_rad.sin();
    let step = PI * out.rotation_sine;
    for (k, phi) in out.taps.phases_rad.iter_mut().enumerate() {
        *phi = k as f64 * step;
    }
    for group in &mut out.directions {
        let (s, wrapped) = wrap_sine(group.nominal_sine + out.rotation_sine);
        group.angle_rad = s.asin();
        group.wrapped = wrapped;
    }
    out
}

impl RainbowCodebook {
    pub fn direction_count(&self) -> usize {
        self.directions.len()
    }

    pub fn subcarrier_count(&self) -> usize {
        self.subcarriers.len()
    }

    pub fn element_count(&self) -> usize {
        self.taps.len()
    }

    /// Rotation expressed as an angle.
    pub fn rotation_rad(&self) -> f64 {
        wrap_sine(self.rotation_sine).0.asin()
    }

    pub fn probed_angles(&self) -> Vec<f64> {
        self.directions.iter().map(|g| g.angle_rad).collect()
    }

    /// Absolute frequency of loaded subcarrier `m`.
    pub fn subcarrier_freq_hz(&self, m: usize) -> f64 {
        self.carrier_hz + self.subcarriers[m].baseband_freq_hz
    }

    /// Angle subcarrier `m` points to.
    pub fn subcarrier_angle(&self, m: usize) -> f64 {
        self.directions[self.subcarriers[m].direction].angle_rad
    }

    pub fn max_delay_s(&self) -> f64 {
        self.taps.delays_s.iter().copied().fold(0.0, f64::max)
    }

    /// Same codebook with different (typically perturbed) taps.
    pub fn with_taps(&self, taps: TapConfig) -> Result<RainbowCodebook> {
        if taps.len() != self.taps.len() {
            return Err(Error::DimensionMismatch {
                expected: self.taps.len(),
                actual: taps.len(),
                context: "codebook taps",
            });
        }
        Ok(RainbowCodebook { taps, ..self.clone() })
    }
}

/// `|w[m]ᴴ a(θ)|` for every loaded subcarrier (rows) and angle (columns).
pub fn gain_map(
    book: &RainbowCodebook,
    geometry: &ArrayGeometry,
    angles_rad: &[f64],
    model: ResponseModel,
) -> Result<Vec<Vec<f64>>> {
    (0..book.subcarrier_count())
        .map(|m| {
            let f = book.subcarrier_freq_hz(m);
            let w = combiner_weights(&book.taps, f, book.carrier_hz);
            angles_rad
                .iter()
                .map(|&theta| {
                    let a = steering_vector(geometry, theta, f, model)?;
                    Ok(inner_product(&w, &a.values).norm())
                })
                .collect()
        })
        .collect()
}

/// Uniform delay steps on a planar array.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PlanarRainbowConfig {
    pub delta_tau_x_s: f64,
    pub delta_tau_y_s: f64,
    pub n_x: usize,
    pub n_y: usize,
    pub subcarrier_count: usize,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DelayRangeReport {
    pub max_delay_s: f64,
    /// `2 (N - 1) / BW` for `N = n_x n_y`.
    pub required_s: f64,
    pub sufficient: bool,
}

impl PlanarRainbowConfig {
    /// Delay steps given as multiples of `1 / BW`.
    pub fn from_bandwidth_multiples(
        n_x: usize,
        n_y: usize,
        steps_x: f64,
        steps_y: f64,
        subcarrier_count: usize,
        bandwidth_hz: f64,
    ) -> Self {
        PlanarRainbowConfig {
            delta_tau_x_s: steps_x / bandwidth_hz,
            delta_tau_y_s: steps_y / bandwidth_hz,
            n_x,
            n_y,
            subcarrier_count,
        }
    }

    pub fn max_delay_s(&self) -> f64 {
        (self.n_x.saturating_sub(1)) as f64 * self.delta_tau_x_s
            + (self.n_y.saturating_sub(1)) as f64 * self.delta_tau_y_s
    }

    pub fn delay_range_report(&self, bandwidth_hz: f64) -> DelayRangeReport {
        let n = (self.n_x * self.n_y) as f64;
        let required_s = 2.0 * (n - 1.0) / bandwidth_hz;
        let max_delay_s = self.max_delay_s();
        DelayRangeReport {
            max_delay_s,
            required_s,
            sufficient: max_delay_s >= required_s * (1.0 - 1e-12),
        }
    }

    /// `subcarrier_count` baseband offsets spread uniformly over the band,
    /// starting at the lower edge.
    pub fn subcarrier_freqs(&self, bandwidth_hz: f64) -> Vec<f64> {
        let m = self.subcarrier_count as f64;
        (0..self.subcarrier_count)
            .map(|k| (k as f64 / m - 0.5) * bandwidth_hz)
            .collect()
    }
}

/// Flattened taps with delay `i Δτ_x + j Δτ_y` on element `(i, j)` (row
/// major, `i` outer) and zero phases.
pub fn build_planar_taps(config: &PlanarRainbowConfig) -> Result<TapConfig> {
    if config.n_x == 0 || config.n_y == 0 {
        return Err(Error::config("planar array needs n_x, n_y >= 1"));
    }
    let mut delays = Vec::with_capacity(config.n_x * config.n_y);
    for i in 0..config.n_x {
        for j in 0..config.n_y {
            delays.push(i as f64 * config.delta_tau_x_s + j as f64 * config.delta_tau_y_s);
        }
    }
    let n = delays.len();
    TapConfig::new(vec![1.0; n], delays, vec![0.0; n])
}

/// Angular sampling of the visible hemisphere.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HemisphereGrid {
    /// Polar angle from broadside, sampled on `[0, 90°]`.
    pub n_theta: usize,
    /// Azimuth, sampled on `[-180°, 180°)`.
    pub n_phi: usize,
}

impl Default for HemisphereGrid {
    fn default() -> Self {
        HemisphereGrid { n_theta: 91, n_phi: 360 }
    }
}

impl HemisphereGrid {
    pub fn theta(&self, k: usize) -> f64 {
        if self.n_theta < 2 {
            0.0
        } else {
            FRAC_PI_2 * k as f64 / (self.n_theta - 1) as f64
        }
    }

    pub fn phi(&self, k: usize) -> f64 {
        -PI + 2.0 * PI * k as f64 / self.n_phi as f64
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PlanarContour {
    pub freq_hz: f64,
    pub peak_gain: f64,
    /// `(θ, φ)` of the strongest grid cell.
    pub peak_direction: (f64, f64),
    /// Cells within `level_db` of the peak.
    pub cells: Vec<(f64, f64)>,
}

/// Grid cells whose gain is within `level_db` of the pattern peak at `freq_hz`.
pub fn planar_beam_contour(
    taps: &TapConfig,
    geometry: &ArrayGeometry,
    freq_hz: f64,
    level_db: f64,
    grid: HemisphereGrid,
    model: ResponseModel,
) -> Result<PlanarContour> {
    let (nx, ny) = match geometry.layout {
        ArrayLayout::Planar { nx, ny } => (nx, ny),
        ArrayLayout::Linear { .. } => {
            return Err(Error::config("planar contour needs a planar geometry"))
        }
    };
    if taps.len() != nx * ny {
        return Err(Error::DimensionMismatch {
            expected: nx * ny,
            actual: taps.len(),
            context: "planar taps",
        });
    }
    let w = combiner_weights(taps, freq_hz, geometry.carrier_hz);
    let response_freq = model.effective_freq(freq_hz, geometry.carrier_hz);

    let mut samples = Vec::with_capacity(grid.n_theta * grid.n_phi);
    for it in 0..grid.n_theta {
        let theta = grid.theta(it);
        for ip in 0..grid.n_phi {
            let phi = grid.phi(ip);
            let a = planar_response_uv(
                geometry,
                nx,
                ny,
                theta.sin() * phi.cos(),
                theta.sin() * phi.sin(),
                response_freq,
            );
            samples.push((theta, phi, inner_product(&w, &a.values).norm()));
        }
    }
    let &(pt, pp, peak_gain) = samples
        .iter()
        .max_by(|a, b| a.2.total_cmp(&b.2))
        .ok_or(Error::EmptyInput("hemisphere grid"))?;
    let floor = peak_gain * 10f64.powf(-level_db / 20.0);
    Ok(PlanarContour {
        freq_hz,
        peak_gain,
        peak_direction: (pt, pp),
        cells: samples
            .into_iter()
            .filter(|s| s.2 >= floor)
            .map(|s| (s.0, s.1))
            .collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::waveform::Constellation;
    use approx::assert_relative_eq;

    const FC: f64 = 60e9;
    const BW: f64 = 2e9;

    fn book(n: usize, m: usize, r: usize, rot: f64) -> RainbowCodebook {
        let ofdm = OfdmSpec::uniform(4096, m, BW, 128, Constellation::Qpsk).unwrap();
        build_rainbow_taps(n, FC, r, rot, &ofdm).unwrap()
    }

    #[test]
    fn mapping_examples() {
        assert_eq!(frequency_to_angle(0.0, 1.0 / BW).unwrap(), 0.0);
        assert_relative_eq!(frequency_to_angle(-BW / 2.0, 1.0 / BW).unwrap(), -FRAC_PI_2);
        assert!(frequency_to_angle(1.0, 0.0).is_err());
    }

    #[test]
    fn sixteen_beam_codebook() {
        let b = book(16, 16, 1, 0.0);
        assert_eq!(b.direction_count(), 16);
        assert!(b.taps.phases_rad.iter().all(|p| *p == 0.0));
        let sines: Vec<f64> = b.directions.iter().map(|g| g.nominal_sine).collect();
        for (k, s) in sines.iter().enumerate() {
            assert_relative_eq!(*s, -1.0 + 2.0 * k as f64 / 16.0, epsilon = 1e-12);
        }
        assert_relative_eq!(b.max_delay_s(), 15.0 / BW);
    }

    #[test]
    fn table_codebook_has_32_directions_of_4() {
        let b = book(16, 128, 4, 0.0);
        assert_relative_eq!(b.delta_tau_s, 2e-9);
        assert_eq!(b.direction_count(), 32);
        assert!(b.directions.iter().all(|g| g.subcarriers.len() == 4));
        let mut seen = vec![0; 128];
        for g in &b.directions {
            for &m in &g.subcarriers {
                seen[m] += 1;
            }
        }
        assert!(seen.iter().all(|c| *c == 1));
        assert_relative_eq!(b.max_delay_s(), 15.0 * 4.0 / BW);
    }

    #[test]
    fn diversity_must_divide_loading() {
        let ofdm = OfdmSpec::uniform(4096, 30, BW, 128, Constellation::Qpsk).unwrap();
        assert!(build_rainbow_taps(16, FC, 4, 0.0, &ofdm).is_err());
        assert!(build_rainbow_taps(1, FC, 1, 0.0, &ofdm).is_err());
        assert!(build_rainbow_taps(16, FC, 0, 0.0, &ofdm).is_err());
    }

    #[test]
    fn rotation_round_trip() {
        let b = book(16, 16, 1, 0.0);
        assert_eq!(rotate_codebook(&b, 0.0), b);
        let r = 10f64.to_radians();
        let back = rotate_codebook(&rotate_codebook(&b, r), -r);
        for (g0, g1) in b.directions.iter().zip(&back.directions) {
            assert_relative_eq!(g0.angle_rad, g1.angle_rad, epsilon = 1e-12);
        }
        let rotated = rotate_codebook(&b, 0.5);
        assert!(rotated.directions.iter().any(|g| g.wrapped));
        assert_relative_eq!(rotated.taps.phases_rad[1], PI * 0.5f64.sin(), epsilon = 1e-12);
        assert_relative_eq!(rotated.rotation_rad(), 0.5, epsilon = 1e-12);
    }

    #[test]
    fn planar_delays() {
        let cfg = PlanarRainbowConfig::from_bandwidth_multiples(2, 2, 1.0, 1.0, 4, BW);
        let taps = build_planar_taps(&cfg).unwrap();
        let expect = [0.0, 1.0, 1.0, 2.0];
        for (d, e) in taps.delays_s.iter().zip(expect) {
            assert_relative_eq!(*d * BW, e, epsilon = 1e-12);
        }
        let single = PlanarRainbowConfig::from_bandwidth_multiples(1, 1, 1.0, 7.0, 1, BW);
        assert_eq!(build_planar_taps(&single).unwrap().delays_s, vec![0.0]);

        let fig = PlanarRainbowConfig::from_bandwidth_multiples(4, 2, 1.0, 7.0, 10, BW);
        assert_relative_eq!(fig.max_delay_s() * BW, 10.0, epsilon = 1e-12);
        let report = fig.delay_range_report(BW);
        assert_relative_eq!(report.required_s * BW, 14.0, epsilon = 1e-12);
        assert!(!report.sufficient);
    }

    #[test]
    fn broadside_contour_is_centered() {
        let g = ArrayGeometry::planar(4, 4, FC).unwrap();
        let taps = TapConfig::nominal(16);
        let c = planar_beam_contour(&taps, &g, FC, 3.0, HemisphereGrid::default(), ResponseModel::FrequencyFlat)
            .unwrap();
        assert_eq!(c.peak_direction.0, 0.0);
        assert_relative_eq!(c.peak_gain, 16.0, epsilon = 1e-9);
        assert!(c.cells.iter().all(|(t, _)| *t < 30f64.to_radians()));
        let lin = ArrayGeometry::linear(4, FC).unwrap();
        assert!(planar_beam_contour(&TapConfig::nominal(4), &lin, FC, 3.0, HemisphereGrid::default(), ResponseModel::FrequencyFlat).is_err());
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn mapping_is_periodic(f in -5e9f64..5e9, r in 1usize..8) {
                let dt = r as f64 / BW;
                let a = frequency_to_sine(f, dt);
                let b = frequency_to_sine(f + 1.0 / dt, dt);
                prop_assert!((a - b).abs() < 1e-9);
                prop_assert!((-1.0..1.0).contains(&a));
            }
        }
    }
}
