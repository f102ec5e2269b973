//! Narrowband per-subcarrier channels, link budget and the received signal
//! `Y[m] = w[m]ᴴ H[m] v s[m] + w[m]ᴴ n[m]`.

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::array::{combiner_weights, steering_vector, ArrayGeometry, ResponseModel};
use crate::codebook::RainbowCodebook;
use crate::error::{Error, Result};

/// Path loss relative to a 1 m reference distance.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "model", rename_all = "snake_case")]
pub enum PathLossModel {
    /// `(4π d / λ)²`.
    FreeSpace,
    /// `ref_loss_db + 10 exponent log10(d / 1 m)`.
    LogDistance { exponent: f64, ref_loss_db: f64 },
}

impl PathLossModel {
    pub fn loss_db(&self, distance_m: f64, wavelength_m: f64) -> f64 {
        match *self {
            PathLossModel::FreeSpace => 20.0 * (4.0 * PI * distance_m / wavelength_m).log10(),
            PathLossModel::LogDistance { exponent, ref_loss_db } => {
                ref_loss_db + 10.0 * exponent * distance_m.log10()
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LinkBudget {
    pub tx_power_w: f64,
    pub distance_m: f64,
    pub noise_psd_w_per_hz: f64,
    pub bandwidth_hz: f64,
    pub m_total: usize,
    pub carrier_hz: f64,
    pub n_tx: usize,
    pub n_rx: usize,
    pub pathloss: PathLossModel,
}

impl LinkBudget {
    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("tx power", self.tx_power_w),
            ("distance", self.distance_m),
            ("noise PSD", self.noise_psd_w_per_hz),
            ("bandwidth", self.bandwidth_hz),
            ("carrier", self.carrier_hz),
        ];
        for (name, v) in positive {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::config(format!("{name} must be positive")));
            }
        }
        if self.m_total < 2 {
            return Err(Error::config("link budget needs at least two subcarriers"));
        }
        if self.n_tx == 0 || self.n_rx == 0 {
            return Err(Error::config("array sizes must be positive"));
        }
        Ok(())
    }

    /// `ΔBW = BW / (M_tot - 1)`.
    pub fn subcarrier_spacing_hz(&self) -> f64 {
        self.bandwidth_hz / (self.m_total - 1) as f64
    }

    pub fn wavelength_m(&self) -> f64 {
        crate::array::SPEED_OF_LIGHT / self.carrier_hz
    }

    /// Transmit array gain `N_T²` (linear).
    pub fn tx_gain(&self) -> f64 {
        (self.n_tx * self.n_tx) as f64
    }

    /// Receive array gain `N_R²` (linear).
    pub fn rx_gain(&self) -> f64 {
        (self.n_rx * self.n_rx) as f64
    }

    pub fn path_gain(&self) -> f64 {
        10f64.powf(-self.pathloss.loss_db(self.distance_m, self.wavelength_m()) / 10.0)
    }

    pub fn at_distance(&self, distance_m: f64) -> LinkBudget {
        LinkBudget { distance_m, ..*self }
    }
}

/// `SNR_sc = G_T G_R PG P_T / (ΔBW N_0 M)` with `G_T = N_T²`, `G_R = N_R²`;
/// free space gives `PG = λ² / (4π d)²`.
pub fn snr_per_subcarrier(budget: &LinkBudget, loaded_count: usize) -> Result<f64> {
    budget.validate()?;
    if loaded_count == 0 || loaded_count > budget.m_total {
        return Err(Error::domain(format!(
            "loaded count {loaded_count} outside [1, {}]",
            budget.m_total
        )));
    }
    Ok(budget.tx_gain() * budget.rx_gain() * budget.path_gain() * budget.tx_power_w
        / (budget.subcarrier_spacing_hz() * budget.noise_psd_w_per_hz * loaded_count as f64))
}

/// Per-element SNR on a loaded subcarrier after transmit beamforming, i.e.
/// [`snr_per_subcarrier`] without the receive gain.
pub fn element_snr(budget: &LinkBudget, loaded_count: usize) -> Result<f64> {
    Ok(snr_per_subcarrier(budget, loaded_count)? / budget.rx_gain())
}

/// Reference loss of a log-distance model that puts the element SNR at
/// `target_snr_db` when the link spans `distance_m`.
pub fn calibrate_reference_loss(
    budget: &LinkBudget,
    loaded_count: usize,
    exponent: f64,
    distance_m: f64,
    target_snr_db: f64,
) -> Result<f64> {
    let probe = LinkBudget {
        distance_m,
        pathloss: PathLossModel::LogDistance { exponent, ref_loss_db: 0.0 },
        ..*budget
    };
    let snr_db = 10.0 * element_snr(&probe, loaded_count)?.log10();
    Ok(snr_db - target_snr_db)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ChannelModel {
    SinglePathLos,
    /// Line-of-sight path plus `extra_paths` scattered paths with random
    /// angles, complex Gaussian gains of mean power `relative_power_db`
    /// (relative to the LOS path) and delays uniform in `[0, max_excess_delay_s]`.
    Multipath {
        extra_paths: usize,
        relative_power_db: f64,
        max_excess_delay_s: f64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Path {
    pub aoa_rad: f64,
    pub aod_rad: f64,
    pub gain: Complex64,
    pub delay_s: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChannelSpec {
    pub model: ChannelModel,
    pub response: ResponseModel,
    /// Amplitude of the LOS path.
    pub los_amplitude: f64,
}

impl Default for ChannelSpec {
    fn default() -> Self {
        ChannelSpec {
            model: ChannelModel::SinglePathLos,
            response: ResponseModel::FrequencyFlat,
            los_amplitude: 1.0,
        }
    }
}

#[derive(Debug, Clone)]
pub struct ChannelRealization {
    /// `N_R × N_T` matrix per loaded subcarrier.
    pub per_subcarrier: Vec<DMatrix<Complex64>>,
    /// Baseband offsets the matrices were evaluated at.
    pub baseband_freqs_hz: Vec<f64>,
    pub aoa_rad: f64,
    pub aod_rad: f64,
    pub paths: Vec<Path>,
    pub model: ChannelModel,
    pub response: ResponseModel,
}

impl ChannelRealization {
    pub fn path_gains(&self) -> Vec<Complex64> {
        self.paths.iter().map(|p| p.gain).collect()
    }
}

fn complex_normal<R: Rng + ?Sized>(rng: &mut R, variance: f64) -> Complex64 {
    let s = (variance / 2.0).sqrt();
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re * s, im * s)
}

fn uniform_angle<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    rng.random_range(-1.0f64..1.0).asin()
}

/// Draws the propagation paths of one realization. The LOS path comes first
/// and carries `aoa_rad`, `aod_rad` and zero delay.
pub fn draw_paths(aoa_rad: f64, aod_rad: f64, spec: &ChannelSpec, seed: u64) -> Vec<Path> {
    let mut paths = vec![Path {
        aoa_rad,
        aod_rad,
        gain: Complex64::new(spec.los_amplitude, 0.0),
        delay_s: 0.0,
    }];
    if let ChannelModel::Multipath {
        extra_paths,
        relative_power_db,
        max_excess_delay_s,
    } = spec.model
    {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let power = spec.los_amplitude.powi(2) * 10f64.powf(relative_power_db / 10.0);
        for _ in 0..extra_paths {
            paths.push(Path {
                aoa_rad: uniform_angle(&mut rng),
                aod_rad: uniform_angle(&mut rng),
                gain: complex_normal(&mut rng, power),
                delay_s: rng.random_range(0.0..=max_excess_delay_s.max(0.0)),
            });
        }
    }
    paths
}

/// `H v` for one subcarrier, evaluated path by path.
pub fn effective_channel(
    rx: &ArrayGeometry,
    tx: &ArrayGeometry,
    paths: &[Path],
    baseband_freq_hz: f64,
    precoder: &[Complex64],
    response: ResponseModel,
) -> Result<Vec<Complex64>> {
    let f = rx.carrier_hz + baseband_freq_hz;
    let mut out = vec![Complex64::new(0.0, 0.0); rx.element_count()];
    for p in paths {
        let a_r = steering_vector(rx, p.aoa_rad, f, response)?;
        let a_t = steering_vector(tx, p.aod_rad, f, response)?;
        let tx_factor = crate::array::inner_product(&a_t.values, precoder);
        let c = p.gain * Complex64::from_polar(1.0, -2.0 * PI * baseband_freq_hz * p.delay_s) * tx_factor;
        for (o, a) in out.iter_mut().zip(&a_r.values) {
            *o += c * a;
        }
    }
    Ok(out)
}

/// Channel matrices `H[m] = Σ_l g_l e^{-j2π f_m τ_l} a_R(θ_l) a_T(ψ_l)ᴴ` on the
/// given baseband offsets.
pub fn realize_channel(
    rx: &ArrayGeometry,
    tx: &ArrayGeometry,
    aoa_rad: f64,
    aod_rad: f64,
    spec: &ChannelSpec,
    baseband_freqs_hz: &[f64],
    seed: u64,
) -> Result<ChannelRealization> {
    let paths = draw_paths(aoa_rad, aod_rad, spec, seed);
    let (nr, nt) = (rx.element_count(), tx.element_count());
    let mut per_subcarrier = Vec::with_capacity(baseband_freqs_hz.len());
    for &fb in baseband_freqs_hz {
        let f = rx.carrier_hz + fb;
        let mut h = DMatrix::<Complex64>::zeros(nr, nt);
        for p in &paths {
            let a_r = DVector::from_vec(steering_vector(rx, p.aoa_rad, f, spec.response)?.values);
            let a_t = DVector::from_vec(steering_vector(tx, p.aod_rad, f, spec.response)?.values);
            let c = p.gain * Complex64::from_polar(1.0, -2.0 * PI * fb * p.delay_s);
            h += (a_r * a_t.adjoint()) * c;
        }
        per_subcarrier.push(h);
    }
    Ok(ChannelRealization {
        per_subcarrier,
        baseband_freqs_hz: baseband_freqs_hz.to_vec(),
        aoa_rad,
        aod_rad,
        paths,
        model: spec.model,
        response: spec.response,
    })
}

/// Received samples on the codebook's loaded subcarriers. Noise is circular
/// complex Gaussian with variance `noise_var` per receive element, drawn
/// independently per subcarrier and element.
pub fn received_signal(
    book: &RainbowCodebook,
    channel: &ChannelRealization,
    precoder: &[Complex64],
    pilots: &[Complex64],
    noise_var: f64,
    seed: u64,
) -> Result<Vec<Complex64>> {
    let m = book.subcarrier_count();
    if channel.per_subcarrier.len() != m {
        return Err(Error::DimensionMismatch {
            expected: m,
            actual: channel.per_subcarrier.len(),
            context: "channel subcarriers",
        });
    }
    if pilots.len() != m {
        return Err(Error::DimensionMismatch {
            expected: m,
            actual: pilots.len(),
            context: "pilots",
        });
    }
    let nr = book.element_count();
    let (hr, ht) = channel.per_subcarrier[0].shape();
    if hr != nr {
        return Err(Error::DimensionMismatch {
            expected: nr,
            actual: hr,
            context: "channel rows vs combiner",
        });
    }
    if ht != precoder.len() {
        return Err(Error::DimensionMismatch {
            expected: ht,
            actual: precoder.len(),
            context: "precoder",
        });
    }
    if !(noise_var >= 0.0) {
        return Err(Error::domain("noise variance must be nonnegative"));
    }

    let v = DVector::from_column_slice(precoder);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(m);
    for (idx, h) in channel.per_subcarrier.iter().enumerate() {
        let w = combiner_weights(&book.taps, book.subcarrier_freq_hz(idx), book.carrier_hz);
        let hv = h * &v;
        let mut y = Complex64::new(0.0, 0.0);
        for (wn, x) in w.iter().zip(hv.iter()) {
            let noise = if noise_var > 0.0 {
                complex_normal(&mut rng, noise_var)
            } else {
                Complex64::new(0.0, 0.0)
            };
            y += wn.conj() * (x * pilots[idx] + noise);
        }
        out.push(y);
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DetectionReport {
    pub signal_power: f64,
    pub noise_power: f64,
    pub detectable: bool,
}

/// Undetectable exactly when the total post-combining signal power falls
/// below the total post-combining noise power.
pub fn is_detectable(signal_power: f64, noise_power: f64) -> bool {
    signal_power >= noise_power
}

/// Totals over the loaded subcarriers: noiseless `|w[m]ᴴ H[m] v s[m]|²` against
/// the expected noise `σ² Σ_n α_n²` per subcarrier.
pub fn detection_report(
    book: &RainbowCodebook,
    channel: &ChannelRealization,
    precoder: &[Complex64],
    pilots: &[Complex64],
    noise_var: f64,
) -> Result<DetectionReport> {
    let clean = received_signal(book, channel, precoder, pilots, 0.0, 0)?;
    let signal_power = clean.iter().map(|y| y.norm_sqr()).sum();
    let noise_power = book.subcarrier_count() as f64 * noise_var * book.taps.gain_energy();
    Ok(DetectionReport {
        signal_power,
        noise_power,
        detectable: is_detectable(signal_power, noise_power),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codebook::build_rainbow_taps;
    use crate::waveform::{Constellation, OfdmSpec};
    use approx::assert_relative_eq;

    const FC: f64 = 60e9;
    const BW: f64 = 2e9;

    fn budget() -> LinkBudget {
        LinkBudget {
            tx_power_w: 1.0,
            distance_m: 50.0,
            noise_psd_w_per_hz: 4e-21,
            bandwidth_hz: BW,
            m_total: 4096,
            carrier_hz: FC,
            n_tx: 128,
            n_rx: 16,
            pathloss: PathLossModel::FreeSpace,
        }
    }

    fn setup(m: usize, r: usize) -> (ArrayGeometry, ArrayGeometry, RainbowCodebook) {
        let ofdm = OfdmSpec::uniform(4096, m, BW, 128, Constellation::Qpsk).unwrap();
        let book = build_rainbow_taps(16, FC, r, 0.0, &ofdm).unwrap();
        (
            ArrayGeometry::linear(16, FC).unwrap(),
            ArrayGeometry::linear(8, FC).unwrap(),
            book,
        )
    }

    fn freqs(book: &RainbowCodebook) -> Vec<f64> {
        book.subcarriers.iter().map(|s| s.baseband_freq_hz).collect()
    }

    #[test]
    fn snr_scaling() {
        let b = budget();
        let full = snr_per_subcarrier(&b, 4096).unwrap();
        let sparse = snr_per_subcarrier(&b, 128).unwrap();
        assert_relative_eq!(10.0 * (sparse / full).log10(), 10.0 * 32f64.log10(), epsilon = 1e-9);
        assert_relative_eq!(
            snr_per_subcarrier(&b, 64).unwrap(),
            2.0 * sparse,
            max_relative = 1e-12
        );
        let far = snr_per_subcarrier(&b.at_distance(100.0), 128).unwrap();
        assert_relative_eq!(10.0 * (sparse / far).log10(), 6.0206, epsilon = 1e-4);
        assert!(snr_per_subcarrier(&b, 0).is_err());
        assert!(snr_per_subcarrier(&b, 4097).is_err());
    }

    #[test]
    fn free_space_formula() {
        let b = budget();
        let lambda = b.wavelength_m();
        let expected = 128f64.powi(2) * 16f64.powi(2) * lambda.powi(2)
            / (4.0 * PI * 50.0).powi(2)
            / (BW / 4095.0 * 4e-21 * 128.0);
        assert_relative_eq!(snr_per_subcarrier(&b, 128).unwrap(), expected, max_relative = 1e-10);
    }

    #[test]
    fn reference_loss_calibration_hits_target() {
        let b = budget();
        let ref_loss = calibrate_reference_loss(&b, 128, 3.0, 170.0, 0.0).unwrap();
        let cal = LinkBudget {
            distance_m: 170.0,
            pathloss: PathLossModel::LogDistance { exponent: 3.0, ref_loss_db: ref_loss },
            ..b
        };
        assert_relative_eq!(element_snr(&cal, 128).unwrap(), 1.0, max_relative = 1e-9);
    }

    #[test]
    fn flat_single_path_is_identical_across_subcarriers() {
        let (rx, tx, book) = setup(16, 1);
        let ch = realize_channel(&rx, &tx, 0.3, -0.2, &ChannelSpec::default(), &freqs(&book), 1).unwrap();
        assert_eq!(ch.per_subcarrier.len(), 16);
        assert_eq!(ch.per_subcarrier[0].shape(), (16, 8));
        for h in &ch.per_subcarrier[1..] {
            assert_eq!(h, &ch.per_subcarrier[0]);
        }
    }

    #[test]
    fn realizations_are_reproducible() {
        let (rx, tx, book) = setup(16, 1);
        let spec = ChannelSpec {
            model: ChannelModel::Multipath {
                extra_paths: 3,
                relative_power_db: -6.0,
                max_excess_delay_s: 5e-9,
            },
            ..Default::default()
        };
        let a = realize_channel(&rx, &tx, 0.1, 0.2, &spec, &freqs(&book), 42).unwrap();
        let b = realize_channel(&rx, &tx, 0.1, 0.2, &spec, &freqs(&book), 42).unwrap();
        assert_eq!(a.per_subcarrier, b.per_subcarrier);
        assert_eq!(a.paths.len(), 4);
        assert_ne!(a.per_subcarrier[0], a.per_subcarrier[5]);
    }

    #[test]
    fn matched_precoder_gives_full_transmit_gain() {
        let tx = ArrayGeometry::linear(8, FC).unwrap();
        let a_t = steering_vector(&tx, -0.4, FC, ResponseModel::FrequencyFlat).unwrap();
        assert_relative_eq!(crate::array::inner_product(&a_t.values, &a_t.values).norm(), 8.0, epsilon = 1e-12);
    }

    #[test]
    fn noiseless_alignment_peaks_at_probed_subcarrier() {
        let (rx, tx, book) = setup(16, 1);
        let target = 5;
        let aoa = book.directions[target].angle_rad;
        let ch = realize_channel(&rx, &tx, aoa, 0.1, &ChannelSpec::default(), &freqs(&book), 0).unwrap();
        let v = steering_vector(&tx, 0.1, FC, ResponseModel::FrequencyFlat).unwrap().values;
        let pilots = vec![Complex64::new(1.0, 0.0); 16];
        let y = received_signal(&book, &ch, &v, &pilots, 0.0, 0).unwrap();
        let best = (0..16).max_by(|&a, &b| y[a].norm().total_cmp(&y[b].norm())).unwrap();
        let m_star = book.directions[target].subcarriers[0];
        assert_eq!(best, m_star);
        assert_relative_eq!(y[m_star].norm(), 16.0 * 8.0, max_relative = 1e-9);
        for (k, v) in y.iter().enumerate() {
            if k != m_star {
                assert!(v.norm() < y[m_star].norm());
            }
        }
    }

    #[test]
    fn linear_in_pilot_and_precoder() {
        let (rx, tx, book) = setup(16, 1);
        let ch = realize_channel(&rx, &tx, 0.2, 0.1, &ChannelSpec::default(), &freqs(&book), 0).unwrap();
        let v = steering_vector(&tx, 0.1, FC, ResponseModel::FrequencyFlat).unwrap().values;
        let pilots = vec![Complex64::new(1.0, 0.0); 16];
        let y1 = received_signal(&book, &ch, &v, &pilots, 0.0, 0).unwrap();
        let v3: Vec<_> = v.iter().map(|x| x * 3.0).collect();
        let p2: Vec<_> = pilots.iter().map(|x| x * Complex64::new(0.0, 2.0)).collect();
        let y6 = received_signal(&book, &ch, &v3, &p2, 0.0, 0).unwrap();
        for (a, b) in y1.iter().zip(&y6) {
            assert!((a * Complex64::new(0.0, 6.0) - b).norm() < 1e-9);
        }
    }

    #[test]
    fn dimension_mismatches_are_reported() {
        let (rx, tx, book) = setup(16, 1);
        let ch = realize_channel(&rx, &tx, 0.2, 0.1, &ChannelSpec::default(), &freqs(&book), 0).unwrap();
        let v = vec![Complex64::new(1.0, 0.0); 8];
        let short = vec![Complex64::new(1.0, 0.0); 3];
        assert!(matches!(
            received_signal(&book, &ch, &v, &short, 0.0, 0),
            Err(Error::DimensionMismatch { .. })
        ));
        let pilots = vec![Complex64::new(1.0, 0.0); 16];
        assert!(received_signal(&book, &ch, &short, &pilots, 0.0, 0).is_err());
    }

    #[test]
    fn post_combining_noise_variance() {
        // zero channel isolates the noise term
        let (rx, tx, mut book) = setup(16, 1);
        book.taps.gains = (0..16).map(|k| 0.5 + 0.1 * k as f64).collect();
        let ch = realize_channel(
            &rx,
            &tx,
            0.0,
            0.0,
            &ChannelSpec { los_amplitude: 0.0, ..Default::default() },
            &freqs(&book),
            0,
        )
        .unwrap();
        let v = vec![Complex64::new(1.0, 0.0); 8];
        let pilots = vec![Complex64::new(1.0, 0.0); 16];
        let sigma2 = 0.7;
        let mut acc = 0.0;
        let mut count = 0usize;
        for seed in 0..6500u64 {
            for y in received_signal(&book, &ch, &v, &pilots, sigma2, seed).unwrap() {
                acc += y.norm_sqr();
                count += 1;
            }
        }
        let expected = sigma2 * book.taps.gain_energy();
        assert!(count >= 100_000);
        assert!((acc / count as f64 / expected - 1.0).abs() < 0.02);
    }

    #[test]
    fn detection_threshold_is_signal_vs_noise() {
        assert!(is_detectable(1.0, 1.0));
        assert!(!is_detectable(0.999, 1.0));
        let (rx, tx, book) = setup(16, 1);
        let ch = realize_channel(&rx, &tx, 0.2, 0.1, &ChannelSpec::default(), &freqs(&book), 0).unwrap();
        let v = steering_vector(&tx, 0.1, FC, ResponseModel::FrequencyFlat).unwrap().values;
        let pilots = vec![Complex64::new(1.0, 0.0); 16];
        // total signal over a full rainbow sweep is M N |a_Tᴴ v|²; noise is M N σ²
        let per_element = 64.0;
        let just_above = detection_report(&book, &ch, &v, &pilots, per_element * 0.99).unwrap();
        let just_below = detection_report(&book, &ch, &v, &pilots, per_element * 1.01).unwrap();
        assert_relative_eq!(just_above.signal_power, 16.0 * 16.0 * 64.0, max_relative = 1e-9);
        assert!(just_above.detectable);
        assert!(!just_below.detectable);
    }
}
