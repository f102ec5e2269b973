//! Experiment drivers behind `rainbow-ttd run`. Each one writes CSV tables
//! and a matplotlib script into the configured output directory and returns
//! a one-line summary of its key metrics.

mod codebook;
mod link;
mod output;
mod papr;
mod squint;
mod sweep;

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::scenario::ScenarioConfig;

pub use codebook::codebook_from_config;
pub use link::{analytic_cutoff_m, compare_sweeping, ComparisonRow};
pub use output::{format_float, write_plot_script, CsvTable, Field};
pub use papr::REPORT_CCDF;
pub use squint::{measure_fbw, WidthCheck};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Experiment {
    SquintError,
    GainVsFreq,
    CodebookMap,
    ImpairmentSweep,
    PaprCcdf,
    DistanceRmse,
    PlanarContour,
    CompareSweeping,
}

impl Experiment {
    pub const ALL: [Experiment; 8] = [
        Experiment::SquintError,
        Experiment::GainVsFreq,
        Experiment::CodebookMap,
        Experiment::ImpairmentSweep,
        Experiment::PaprCcdf,
        Experiment::DistanceRmse,
        Experiment::PlanarContour,
        Experiment::CompareSweeping,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Experiment::SquintError => "squint-error",
            Experiment::GainVsFreq => "gain-vs-freq",
            Experiment::CodebookMap => "codebook-map",
            Experiment::ImpairmentSweep => "impairment-sweep",
            Experiment::PaprCcdf => "papr-ccdf",
            Experiment::DistanceRmse => "distance-rmse",
            Experiment::PlanarContour => "planar-contour",
            Experiment::CompareSweeping => "compare-sweeping",
        }
    }

    pub fn description(self) -> &'static str {
        match self {
            Experiment::SquintError => "worst-case PS pointing error versus AoA for several fractional bandwidths",
            Experiment::GainVsFreq => "PS array gain versus frequency and measured 3-dB fractional bandwidth",
            Experiment::CodebookMap => "rainbow codebook subcarrier-to-angle map and dense gain map",
            Experiment::ImpairmentSweep => "AoA RMSE versus gain, phase or delay error",
            Experiment::PaprCcdf => "PAPR CCDF of sparse and fully loaded OFDM symbols",
            Experiment::DistanceRmse => "AoA RMSE and TTD detectability versus distance",
            Experiment::PlanarContour => "3-dB contours of planar rainbow beams",
            Experiment::CompareSweeping => "TTD single-symbol training against exhaustive PAA sweeping",
        }
    }

    /// Shipped configuration this experiment runs with when none is given.
    pub fn default_config_text(self) -> &'static str {
        match self {
            Experiment::SquintError => include_str!("../../configs/squint-error.toml"),
            Experiment::GainVsFreq => include_str!("../../configs/gain-vs-freq.toml"),
            Experiment::CodebookMap => include_str!("../../configs/codebook-map.toml"),
            Experiment::ImpairmentSweep => include_str!("../../configs/impairment-gain.toml"),
            Experiment::PaprCcdf => include_str!("../../configs/papr-ccdf.toml"),
            Experiment::DistanceRmse => include_str!("../../configs/distance-rmse.toml"),
            Experiment::PlanarContour => include_str!("../../configs/planar-contour.toml"),
            Experiment::CompareSweeping => include_str!("../../configs/compare-sweeping.toml"),
        }
    }

    pub fn default_config(self) -> Result<ScenarioConfig> {
        ScenarioConfig::from_toml(self.default_config_text())
    }
}

impl FromStr for Experiment {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Experiment::ALL
            .into_iter()
            .find(|e| e.name() == s)
            .ok_or_else(|| Error::UnknownExperiment(s.to_string()))
    }
}

impl fmt::Display for Experiment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentOutput {
    pub experiment: Experiment,
    /// Files written, in creation order; the resolved config comes last.
    pub files: Vec<PathBuf>,
    pub summary: String,
}

/// Run `experiment` with `config`, writing into `config.output_dir`.
pub fn run_experiment(experiment: Experiment, config: &ScenarioConfig) -> Result<ExperimentOutput> {
    let mut out = match experiment {
        Experiment::SquintError => squint::squint_error(config),
        Experiment::GainVsFreq => squint::gain_vs_freq(config),
        Experiment::CodebookMap => codebook::codebook_map(config),
        Experiment::ImpairmentSweep => sweep::impairment_sweep(config),
        Experiment::PaprCcdf => papr::papr_experiment(config),
        Experiment::DistanceRmse => link::distance_experiment(config),
        Experiment::PlanarContour => codebook::planar_contour(config),
        Experiment::CompareSweeping => link::compare_experiment(config),
    }?;
    let resolved = config.output_dir.join("config.toml");
    std::fs::write(&resolved, config.to_toml()?)?;
    out.files.push(resolved);
    Ok(out)
}
