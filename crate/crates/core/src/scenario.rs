//! Scenario configuration and the end-to-end Monte Carlo trial:
//! draw truth → perturb taps → realize channel → receive → estimate.
//!
//! Trial `i` of a run with base seed `s` uses seed `s + i`; every random
//! component inside a trial draws from its own stream derived from that seed.

use std::path::PathBuf;

use num_complex::Complex64;
use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::array::{
    combiner_weights, inner_product, ps_combiner, steering_vector, ArrayGeometry, DelayModel,
    ResponseModel, TapConfig,
};
use crate::channel::{
    calibrate_reference_loss, draw_paths, effective_channel, element_snr, realize_channel,
    received_signal, ChannelModel, ChannelSpec, LinkBudget, PathLossModel,
};
use crate::codebook::{build_rainbow_taps, RainbowCodebook};
use crate::error::{Error, Result};
use crate::estimation::{build_gain_dictionary, estimate, rmse_pairs, GainDictionary, MatchingDomain};
use crate::impairments::{perturb_taps, ImpairmentSpec, RedrawPolicy};
use crate::waveform::{Constellation, OfdmSpec};

/// Thermal noise at 290 K (−174 dBm/Hz) plus a 10 dB noise figure.
pub const DEFAULT_NOISE_PSD_W_PER_HZ: f64 = 3.981_071_705_534_969e-20;

/// Distance at which the default NLOS link stops being detectable with the
/// default 16-element receiver.
pub const DEFAULT_CUTOFF_DISTANCE_M: f64 = 170.0;

/// Log-distance exponent of the default NLOS model.
pub const DEFAULT_PATHLOSS_EXPONENT: f64 = 3.0;

/// 1 m reference loss of the default NLOS model, calibrated with
/// [`calibrate_reference_loss`] so that the element SNR of the default
/// scenario (1 W, 128 × 16 arrays, 128 of 4096 subcarriers) reaches 0 dB at
/// [`DEFAULT_CUTOFF_DISTANCE_M`]. Not a measured channel model.
pub const DEFAULT_REF_LOSS_DB: f64 = 91.270_871_159_455_03;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ArraySection {
    pub n: usize,
    pub spacing_wavelengths: f64,
}

impl ArraySection {
    fn with_n(n: usize) -> Self {
        ArraySection { n, spacing_wavelengths: 0.5 }
    }
}

impl Default for ArraySection {
    fn default() -> Self {
        Self::with_n(16)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OfdmSection {
    pub m_total: usize,
    /// Loaded subcarriers, spread uniformly over the band.
    pub loaded: usize,
    pub cp_len: usize,
    pub constellation: Constellation,
}

impl Default for OfdmSection {
    fn default() -> Self {
        OfdmSection {
            m_total: 4096,
            loaded: 128,
            cp_len: 128,
            constellation: Constellation::Qpsk,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CodebookSection {
    pub diversity: usize,
    pub rotation_deg: f64,
}

impl Default for CodebookSection {
    fn default() -> Self {
        CodebookSection { diversity: 4, rotation_deg: 0.0 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ChannelSection {
    pub model: ChannelModel,
    pub response: ResponseModel,
}

impl Default for ChannelSection {
    fn default() -> Self {
        ChannelSection {
            model: ChannelModel::SinglePathLos,
            response: ResponseModel::FrequencyFlat,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct LinkSection {
    /// Per-element SNR on a loaded subcarrier after transmit beamforming.
    pub snr_db: f64,
    /// Derive the SNR from the link budget below instead of `snr_db`.
    pub from_budget: bool,
    pub tx_power_w: f64,
    pub noise_psd_w_per_hz: f64,
    pub distance_m: f64,
    pub path_loss: PathLossModel,
}

impl Default for LinkSection {
    fn default() -> Self {
        LinkSection {
            snr_db: 0.0,
            from_budget: false,
            tx_power_w: 1.0,
            noise_psd_w_per_hz: DEFAULT_NOISE_PSD_W_PER_HZ,
            distance_m: 50.0,
            path_loss: PathLossModel::LogDistance {
                exponent: DEFAULT_PATHLOSS_EXPONENT,
                ref_loss_db: DEFAULT_REF_LOSS_DB,
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ImpairmentSection {
    pub sigma_gain_db: f64,
    pub sigma_phase_deg: f64,
    pub sigma_delay_ps: f64,
    pub delay_model: DelayModel,
    pub redraw: RedrawPolicy,
}

impl Default for ImpairmentSection {
    fn default() -> Self {
        ImpairmentSection {
            sigma_gain_db: 0.0,
            sigma_phase_deg: 0.0,
            sigma_delay_ps: 0.0,
            delay_model: DelayModel::Baseband,
            redraw: RedrawPolicy::PerTrial,
        }
    }
}

impl ImpairmentSection {
    pub fn spec(&self) -> ImpairmentSpec {
        ImpairmentSpec {
            sigma_delay_s: self.sigma_delay_ps * 1e-12,
            sigma_phase_rad: self.sigma_phase_deg.to_radians(),
            sigma_gain_db: self.sigma_gain_db,
            delay_model: self.delay_model,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EstimatorSection {
    pub dictionary_size: usize,
    pub matching: MatchingDomain,
    /// Truth angles are drawn uniformly in sine over ±this limit.
    pub truth_limit_deg: f64,
}

impl Default for EstimatorSection {
    fn default() -> Self {
        EstimatorSection {
            dictionary_size: 1024,
            matching: MatchingDomain::Amplitude,
            truth_limit_deg: 60.0,
        }
    }
}

/// Knobs of the individual experiments.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentSection {
    pub squint_fbws: Vec<f64>,
    pub squint_angle_step_deg: f64,
    pub gain_curve_elements: Vec<usize>,
    pub gain_curve_angle_deg: f64,
    /// Steering angles of the 3-dB width table.
    pub fbw_angles_deg: Vec<f64>,
    pub gain_curve_span: f64,
    pub gain_curve_points: usize,
    pub map_angle_points: usize,
    pub sweep_axis: String,
    pub sweep_grid: Vec<f64>,
    pub papr_trials: usize,
    pub papr_oversampling: usize,
    pub papr_include_cp: bool,
    pub distances_m: Vec<f64>,
    pub planar_nx: usize,
    pub planar_ny: usize,
    pub planar_steps_x: f64,
    pub planar_steps_y: f64,
    pub planar_subcarriers: usize,
    pub planar_level_db: f64,
}

impl Default for ExperimentSection {
    fn default() -> Self {
        ExperimentSection {
            squint_fbws: vec![0.05, 0.1, 0.25],
            squint_angle_step_deg: 1.0,
            gain_curve_elements: vec![8, 16, 32, 64],
            gain_curve_angle_deg: 45.0,
            fbw_angles_deg: vec![30.0, 45.0, 60.0],
            gain_curve_span: 0.5,
            gain_curve_points: 2001,
            map_angle_points: 721,
            sweep_axis: "gain".into(),
            sweep_grid: vec![0.0, 0.5, 1.0, 1.5, 2.0, 2.5, 3.0, 3.5, 4.0],
            papr_trials: 10_000,
            papr_oversampling: 1,
            papr_include_cp: true,
            distances_m: vec![20.0, 50.0, 80.0, 110.0, 140.0, 170.0, 200.0, 230.0, 260.0],
            planar_nx: 4,
            planar_ny: 2,
            planar_steps_x: 1.0,
            planar_steps_y: 7.0,
            planar_subcarriers: 10,
            planar_level_db: 3.0,
        }
    }
}

/// Everything one experiment needs. Defaults are the 60 GHz / 2 GHz
/// reference parameters: `M_tot = 4096`, `N_T = 128`, `N_R = 16`, `R = 4`,
/// `M = 128` (so `D = 32`), `Q = 1024`, 0 dB SNR.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ScenarioConfig {
    pub carrier_hz: f64,
    pub bandwidth_hz: f64,
    pub trials: usize,
    pub base_seed: u64,
    pub output_dir: PathBuf,
    pub rx: ArraySection,
    pub tx: ArraySection,
    pub ofdm: OfdmSection,
    pub codebook: CodebookSection,
    pub channel: ChannelSection,
    pub link: LinkSection,
    pub impairments: ImpairmentSection,
    pub estimator: EstimatorSection,
    pub experiment: ExperimentSection,
}

impl Default for ScenarioConfig {
    fn default() -> Self {
        ScenarioConfig {
            carrier_hz: 60e9,
            bandwidth_hz: 2e9,
            trials: 500,
            base_seed: 1,
            output_dir: PathBuf::from("out"),
            rx: ArraySection::with_n(16),
            tx: ArraySection::with_n(128),
            ofdm: OfdmSection::default(),
            codebook: CodebookSection::default(),
            channel: ChannelSection::default(),
            link: LinkSection::default(),
            impairments: ImpairmentSection::default(),
            estimator: EstimatorSection::default(),
            experiment: ExperimentSection::default(),
        }
    }
}

impl ScenarioConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::config(e.to_string()))
    }

    pub fn to_toml(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| Error::config(e.to_string()))
    }

    pub fn load(path: &std::path::Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| Error::ConfigRead {
            path: path.to_path_buf(),
            source,
        })?;
        Self::from_toml(&text)
    }

    /// Apply a `dotted.key=value` override. Values are parsed as TOML
    /// literals and fall back to plain strings.
    pub fn apply_override(&mut self, assignment: &str) -> Result<()> {
        let (key, raw) = assignment
            .split_once('=')
            .ok_or_else(|| Error::config(format!("override `{assignment}` is not key=value")))?;
        let key = key.trim();
        let raw = raw.trim();
        let value: toml::Value = toml::from_str::<toml::Table>(&format!("v = {raw}"))
            .ok()
            .and_then(|mut t| t.remove("v"))
            .unwrap_or_else(|| toml::Value::String(raw.to_string()));

        let mut tree = toml::Value::try_from(&*self).map_err(|e| Error::config(e.to_string()))?;
        let parts: Vec<&str> = key.split('.').collect();
        let (leaf, parents) = parts.split_last().expect("split yields at least one part");
        let mut node = &mut tree;
        for part in parents {
            node = node
                .get_mut(*part)
                .filter(|n| n.is_table())
                .ok_or_else(|| Error::config(format!("unknown config section `{part}` in `{key}`")))?;
        }
        let table = node
            .as_table_mut()
            .ok_or_else(|| Error::config(format!("`{key}` does not name a config table")))?;
        // integer literals for float fields, e.g. `carrier_hz=60000000000`
        let value = match (table.get(*leaf), value) {
            (Some(toml::Value::Float(_)), toml::Value::Integer(i)) => toml::Value::Float(i as f64),
            (_, v) => v,
        };
        table.insert(leaf.to_string(), value);
        *self = tree
            .try_into()
            .map_err(|e: toml::de::Error| Error::config(format!("override `{assignment}`: {e}")))?;
        Ok(())
    }

    pub fn rx_geometry(&self) -> Result<ArrayGeometry> {
        ArrayGeometry::linear(self.rx.n, self.carrier_hz)?.with_spacing(self.rx.spacing_wavelengths)
    }

    pub fn tx_geometry(&self) -> Result<ArrayGeometry> {
        ArrayGeometry::linear(self.tx.n, self.carrier_hz)?.with_spacing(self.tx.spacing_wavelengths)
    }

    pub fn ofdm_spec(&self) -> Result<OfdmSpec> {
        OfdmSpec::uniform(
            self.ofdm.m_total,
            self.ofdm.loaded,
            self.bandwidth_hz,
            self.ofdm.cp_len,
            self.ofdm.constellation,
        )
    }

    pub fn link_budget(&self) -> LinkBudget {
        LinkBudget {
            tx_power_w: self.link.tx_power_w,
            distance_m: self.link.distance_m,
            noise_psd_w_per_hz: self.link.noise_psd_w_per_hz,
            bandwidth_hz: self.bandwidth_hz,
            m_total: self.ofdm.m_total,
            carrier_hz: self.carrier_hz,
            n_tx: self.tx.n,
            n_rx: self.rx.n,
            pathloss: self.link.path_loss,
        }
    }

    pub fn validate(&self) -> Result<()> {
        Scenario::new(self.clone()).map(|_| ())
    }
}

/// Reference loss for the default budget; kept next to
/// [`DEFAULT_REF_LOSS_DB`] so the constant can be re-derived.
pub fn default_reference_loss() -> Result<f64> {
    let cfg = ScenarioConfig::default();
    calibrate_reference_loss(
        &cfg.link_budget(),
        cfg.ofdm.loaded,
        DEFAULT_PATHLOSS_EXPONENT,
        DEFAULT_CUTOFF_DISTANCE_M,
        0.0,
    )
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrialRecord {
    pub trial: usize,
    pub seed: u64,
    pub truth_rad: f64,
    pub aod_rad: f64,
    pub coarse_rad: f64,
    pub refined_rad: f64,
    /// Noiseless post-combining signal power over the loaded subcarriers.
    pub signal_power: f64,
    /// Expected post-combining noise power over the loaded subcarriers.
    pub noise_power: f64,
}

impl TrialRecord {
    pub fn detectable(&self) -> bool {
        crate::channel::is_detectable(self.signal_power, self.noise_power)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PaaRecord {
    pub trial: usize,
    pub truth_rad: f64,
    pub estimate_rad: f64,
}

/// Sub-seed for one random component of a trial.
pub fn derive_seed(seed: u64, stream: u64) -> u64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng.next_u64()
}

const STREAM_ANGLES: u64 = 0;
const STREAM_TAPS: u64 = 1;
const STREAM_CHANNEL: u64 = 2;
const STREAM_PILOTS: u64 = 3;
const STREAM_NOISE: u64 = 4;

/// A validated, assembled scenario.
#[derive(Debug, Clone)]
pub struct Scenario {
    pub config: ScenarioConfig,
    pub rx: ArrayGeometry,
    pub tx: ArrayGeometry,
    pub ofdm: OfdmSpec,
    pub book: RainbowCodebook,
    pub dictionary: GainDictionary,
    pub channel: ChannelSpec,
    /// Noise variance per receive element and subcarrier.
    pub noise_var: f64,
}

impl Scenario {
    pub fn new(config: ScenarioConfig) -> Result<Self> {
        if config.trials == 0 {
            return Err(Error::config("trials must be positive"));
        }
        if !(config.estimator.truth_limit_deg > 0.0 && config.estimator.truth_limit_deg <= 90.0) {
            return Err(Error::config("truth_limit_deg must lie in (0, 90]"));
        }
        if !(config.bandwidth_hz < 2.0 * config.carrier_hz) {
            return Err(Error::config("band must stay above DC"));
        }
        config.impairments.spec().validate()?;
        let rx = config.rx_geometry()?;
        let tx = config.tx_geometry()?;
        let ofdm = config.ofdm_spec()?;
        let rotation = config.codebook.rotation_deg.to_radians();
        let book = build_rainbow_taps(rx.element_count(), config.carrier_hz, config.codebook.diversity, rotation, &ofdm)?;
        let dictionary = build_gain_dictionary(
            &book,
            &rx,
            config.estimator.dictionary_size,
            config.channel.response,
            config.estimator.matching,
        )?;
        let channel = ChannelSpec {
            model: config.channel.model,
            response: config.channel.response,
            los_amplitude: 1.0,
        };
        let mut scenario = Scenario {
            rx,
            tx,
            ofdm,
            book,
            dictionary,
            channel,
            noise_var: 0.0,
            config,
        };
        scenario.noise_var = scenario.noise_var_for(scenario.element_snr()?);
        Ok(scenario)
    }

    /// Per-element SNR (linear) on a loaded subcarrier.
    pub fn element_snr(&self) -> Result<f64> {
        if self.config.link.from_budget {
            element_snr(&self.config.link_budget(), self.ofdm.loaded_count())
        } else {
            Ok(10f64.powf(self.config.link.snr_db / 10.0))
        }
    }

    /// LOS amplitude is one and the matched precoder contributes `N_T`, so
    /// the per-element signal power is `N_T²`.
    fn noise_var_for(&self, snr: f64) -> f64 {
        let nt = self.tx.element_count() as f64;
        nt * nt / snr
    }

    /// Same scenario driven by the link budget at another distance.
    pub fn at_distance(&self, distance_m: f64) -> Result<Scenario> {
        let mut out = self.clone();
        out.config.link.from_budget = true;
        out.config.link.distance_m = distance_m;
        out.noise_var = out.noise_var_for(out.element_snr()?);
        Ok(out)
    }

    pub fn with_snr_db(&self, snr_db: f64) -> Scenario {
        let mut out = self.clone();
        out.config.link.from_budget = false;
        out.config.link.snr_db = snr_db;
        out.noise_var = out.noise_var_for(10f64.powf(snr_db / 10.0));
        out
    }

    fn draw_angles(&self, seed: u64) -> (f64, f64) {
        let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(seed, STREAM_ANGLES));
        let limit = self.config.estimator.truth_limit_deg.to_radians().sin();
        let truth = rng.random_range(-limit..=limit).asin();
        let aod = rng.random_range(-limit..=limit).asin();
        (truth, aod)
    }

    fn pilots(&self, seed: u64, count: usize) -> Vec<Complex64> {
        let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(seed, STREAM_PILOTS));
        (0..count)
            .map(|_| Constellation::Qpsk.sample(&mut rng))
            .collect()
    }

    fn precoder(&self, aod: f64) -> Result<Vec<Complex64>> {
        Ok(steering_vector(&self.tx, aod, self.config.carrier_hz, ResponseModel::FrequencyFlat)?.values)
    }

    pub fn impaired_taps(&self, spec: &ImpairmentSpec, seed: u64) -> Result<TapConfig> {
        perturb_taps(&self.book.taps, spec, derive_seed(seed, STREAM_TAPS))
    }

    /// One TTD training trial. `taps` overrides the per-trial impairment draw.
    pub fn run_trial(
        &self,
        spec: &ImpairmentSpec,
        taps: Option<&TapConfig>,
        trial: usize,
        seed: u64,
    ) -> Result<TrialRecord> {
        let (truth, aod) = self.draw_angles(seed);
        let taps = match taps {
            Some(t) => t.clone(),
            None => self.impaired_taps(spec, seed)?,
        };
        let hardware = self.book.with_taps(taps)?;
        let freqs: Vec<f64> = self.book.subcarriers.iter().map(|s| s.baseband_freq_hz).collect();
        let channel = realize_channel(
            &self.rx,
            &self.tx,
            truth,
            aod,
            &self.channel,
            &freqs,
            derive_seed(seed, STREAM_CHANNEL),
        )?;
        let v = self.precoder(aod)?;
        let pilots = self.pilots(seed, freqs.len());
        let y = received_signal(&hardware, &channel, &v, &pilots, self.noise_var, derive_seed(seed, STREAM_NOISE))?;
        let clean = received_signal(&hardware, &channel, &v, &pilots, 0.0, 0)?;
        let compensated: Vec<Complex64> = y.iter().zip(&pilots).map(|(y, s)| y * s.conj()).collect();
        // the receiver only knows the nominal codebook
        let result = estimate(&compensated, &self.book, Some(&self.dictionary))?;
        Ok(TrialRecord {
            trial,
            seed,
            truth_rad: truth,
            aod_rad: aod,
            coarse_rad: result.coarse_angle_rad,
            refined_rad: result.refined_angle_rad.unwrap_or(result.coarse_angle_rad),
            signal_power: clean.iter().map(|c| c.norm_sqr()).sum(),
            noise_power: freqs.len() as f64 * self.noise_var * hardware.taps.gain_energy(),
        })
    }

    /// `trials` trials with seeds `base_seed + i`, run in parallel and
    /// returned in trial order.
    pub fn run_trials(&self, spec: &ImpairmentSpec, base_seed: u64, trials: usize) -> Result<Vec<TrialRecord>> {
        let fixed = match self.config.impairments.redraw {
            RedrawPolicy::PerTrial => None,
            RedrawPolicy::PerSweep => Some(self.impaired_taps(spec, base_seed)?),
        };
        (0..trials)
            .into_par_iter()
            .map(|i| self.run_trial(spec, fixed.as_ref(), i, base_seed.wrapping_add(i as u64)))
            .collect()
    }

    /// Exhaustive phased-array sweep over the same draws as [`Scenario::run_trial`]:
    /// one fully loaded symbol per probed direction, each combined over the
    /// whole band with a frequency-flat PS beam. Transmit power is spread over
    /// all `M_tot` subcarriers.
    pub fn run_paa_trial(&self, trial: usize, seed: u64) -> Result<PaaRecord> {
        let (truth, aod) = self.draw_angles(seed);
        let paths = draw_paths(truth, aod, &self.channel, derive_seed(seed, STREAM_CHANNEL));
        let v = self.precoder(aod)?;
        let m_total = self.ofdm.m_total;
        let amp = (self.ofdm.loaded_count() as f64 / m_total as f64).sqrt();
        let channels: Vec<Vec<Complex64>> = (0..m_total)
            .map(|bin| {
                effective_channel(
                    &self.rx,
                    &self.tx,
                    &paths,
                    self.ofdm.baseband_freq_hz(bin),
                    &v,
                    self.channel.response,
                )
            })
            .collect::<Result<_>>()?;

        let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(seed, STREAM_NOISE));
        let mut best: Option<(usize, f64)> = None;
        for (d, group) in self.book.directions.iter().enumerate() {
            let taps = ps_combiner(&self.rx, group.angle_rad)?;
            let w = combiner_weights(&taps, self.config.carrier_hz, self.config.carrier_hz);
            // wᴴ n for unit-modulus weights is CN(0, σ² Σ α²)
            let noise_std = (self.noise_var * taps.gain_energy() / 2.0).sqrt();
            let mut energy = 0.0;
            for h in &channels {
                let re: f64 = rng.sample(StandardNormal);
                let im: f64 = rng.sample(StandardNormal);
                let y = inner_product(&w, h) * amp + Complex64::new(re, im) * noise_std;
                energy += y.norm_sqr();
            }
            if best.is_none_or(|(_, e)| energy > e) {
                best = Some((d, energy));
            }
        }
        let (d, _) = best.ok_or(Error::EmptyInput("codebook without directions"))?;
        Ok(PaaRecord {
            trial,
            truth_rad: truth,
            estimate_rad: self.book.directions[d].angle_rad,
        })
    }

    pub fn run_paa_trials(&self, base_seed: u64, trials: usize) -> Result<Vec<PaaRecord>> {
        (0..trials)
            .into_par_iter()
            .map(|i| self.run_paa_trial(i, base_seed.wrapping_add(i as u64)))
            .collect()
    }
}

/// `(coarse, refined)` RMSE in degrees.
pub fn rmse_of(records: &[TrialRecord]) -> Result<(f64, f64)> {
    Ok((
        rmse_pairs(records.iter().map(|r| (r.coarse_rad, r.truth_rad)))?,
        rmse_pairs(records.iter().map(|r| (r.refined_rad, r.truth_rad)))?,
    ))
}

pub fn paa_rmse(records: &[PaaRecord]) -> Result<f64> {
    rmse_pairs(records.iter().map(|r| (r.estimate_rad, r.truth_rad)))
}
