//! Statistical hardware errors on the combiner taps and sensitivity sweeps.
//!
//! Delays and phases get additive Gaussian errors. Gains are log-normal:
//! `10 log10(α̃ / α) ~ N(0, σ_A²)`.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::array::{DelayModel, TapConfig};
use crate::error::{Error, Result};
use crate::scenario::{Scenario, TrialRecord};

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct ImpairmentSpec {
    pub sigma_delay_s: f64,
    pub sigma_phase_rad: f64,
    pub sigma_gain_db: f64,
    #[serde(default)]
    pub delay_model: DelayModel,
}

impl ImpairmentSpec {
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("delay", self.sigma_delay_s),
            ("phase", self.sigma_phase_rad),
            ("gain", self.sigma_gain_db),
        ] {
            if !(v >= 0.0 && v.is_finite()) {
                return Err(Error::config(format!("{name} error sigma must be finite and >= 0")));
            }
        }
        Ok(())
    }

    pub fn is_ideal(&self) -> bool {
        self.sigma_delay_s == 0.0 && self.sigma_phase_rad == 0.0 && self.sigma_gain_db == 0.0
    }
}

/// Independent per-element draws around the nominal taps. The result keeps
/// the spec's delay model.
pub fn perturb_taps(taps: &TapConfig, spec: &ImpairmentSpec, seed: u64) -> Result<TapConfig> {
    spec.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = taps.clone();
    out.delay_model = spec.delay_model;
    for k in 0..out.len() {
        let zd: f64 = rng.sample(StandardNormal);
        let zp: f64 = rng.sample(StandardNormal);
        let zg: f64 = rng.sample(StandardNormal);
        if spec.sigma_delay_s > 0.0 {
            out.delays_s[k] += spec.sigma_delay_s * zd;
        }
        if spec.sigma_phase_rad > 0.0 {
            out.phases_rad[k] += spec.sigma_phase_rad * zp;
        }
        if spec.sigma_gain_db > 0.0 {
            out.gains[k] *= 10f64.powf(spec.sigma_gain_db * zg / 10.0);
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepAxis {
    Gain,
    Phase,
    Delay,
}

impl SweepAxis {
    /// Unit of the grid values for this axis.
    pub fn unit(self) -> &'static str {
        match self {
            SweepAxis::Gain => "dB",
            SweepAxis::Phase => "deg",
            SweepAxis::Delay => "ps",
        }
    }

    /// Spec with only this axis impaired, `value` in [`SweepAxis::unit`].
    pub fn spec(self, value: f64, delay_model: DelayModel) -> ImpairmentSpec {
        let mut spec = ImpairmentSpec { delay_model, ..Default::default() };
        match self {
            SweepAxis::Gain => spec.sigma_gain_db = value,
            SweepAxis::Phase => spec.sigma_phase_rad = value.to_radians(),
            SweepAxis::Delay => spec.sigma_delay_s = value * 1e-12,
        }
        spec
    }
}

impl FromStr for SweepAxis {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "gain" => Ok(SweepAxis::Gain),
            "phase" => Ok(SweepAxis::Phase),
            "delay" => Ok(SweepAxis::Delay),
            other => Err(Error::InvalidAxis(other.to_string())),
        }
    }
}

impl fmt::Display for SweepAxis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SweepAxis::Gain => "gain",
            SweepAxis::Phase => "phase",
            SweepAxis::Delay => "delay",
        })
    }
}

/// When impaired taps are redrawn.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RedrawPolicy {
    #[default]
    PerTrial,
    /// One draw per sweep point, shared by all its trials.
    PerSweep,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub grid_value: f64,
    pub coarse_rmse_deg: f64,
    pub refined_rmse_deg: f64,
    pub records: Vec<TrialRecord>,
}

/// RMSE of both estimators at every grid point, with the other two error
/// types switched off. Every grid point reuses the same trial seeds, so the
/// zero point reproduces the unimpaired scenario exactly.
pub fn sensitivity_sweep(
    scenario: &Scenario,
    axis: SweepAxis,
    grid: &[f64],
    trials: usize,
    seed: u64,
) -> Result<Vec<SweepRow>> {
    if trials == 0 {
        return Err(Error::config("sweep needs at least one trial"));
    }
    let delay_model = scenario.config.impairments.delay_model;
    grid.iter()
        .map(|&value| {
            let spec = axis.spec(value, delay_model);
            let records = scenario.run_trials(&spec, seed, trials)?;
            let (coarse, refined) = crate::scenario::rmse_of(&records)?;
            Ok(SweepRow {
                grid_value: value,
                coarse_rmse_deg: coarse,
                refined_rmse_deg: refined,
                records,
            })
        })
        .collect()
}
