//! PAPR distributions of sparse and fully loaded OFDM symbols.

use super::output::{check, write_plot_script, CsvTable, Field};
use super::{Experiment, ExperimentOutput};
use crate::error::{Error, Result};
use crate::scenario::ScenarioConfig;
use crate::waveform::{papr_at_ccdf, papr_ccdf, Constellation, OfdmSpec, PaprOptions};

/// CCDF level at which the summary compares the curves.
pub const REPORT_CCDF: f64 = 1e-2;

pub(super) fn papr_experiment(cfg: &ScenarioConfig) -> Result<ExperimentOutput> {
    let ex = &cfg.experiment;
    if ex.papr_trials == 0 {
        return Err(Error::config("experiment.papr_trials must be positive"));
    }
    let opts = PaprOptions { include_cp: ex.papr_include_cp, oversampling: ex.papr_oversampling };
    let dir = &cfg.output_dir;
    let mut table = CsvTable::create(dir, "papr_ccdf.csv", &["papr_db", "ccdf", "constellation", "loaded_count"])?;
    let mut parts = Vec::new();
    for constellation in [Constellation::Bpsk, Constellation::Qpsk] {
        let mut at_level = Vec::new();
        for loaded in [cfg.ofdm.loaded, cfg.ofdm.m_total] {
            let spec = OfdmSpec::uniform(cfg.ofdm.m_total, loaded, cfg.bandwidth_hz, cfg.ofdm.cp_len, constellation)?;
            let curve = papr_ccdf(&spec, ex.papr_trials, cfg.base_seed, opts)?;
            check(curve.windows(2).all(|w| w[1].ccdf <= w[0].ccdf), || "CCDF is not monotone".into())?;
            for p in &curve {
                table.row(&[Field::F(p.papr_db), Field::F(p.ccdf), Field::S(constellation.name()), Field::U(loaded as u64)])?;
            }
            at_level.push(papr_at_ccdf(&curve, REPORT_CCDF).unwrap_or(f64::NAN));
        }
        parts.push(format!(
            "{} M={} {:.3} dB vs M={} {:.3} dB (gap {:.3} dB)",
            constellation.name(),
            cfg.ofdm.loaded,
            at_level[0],
            cfg.ofdm.m_total,
            at_level[1],
            at_level[1] - at_level[0]
        ));
    }
    let csv = table.finish()?;
    let plot = write_plot_script(
        dir,
        "plot_papr_ccdf.py",
        r#"rows = read("papr_ccdf.csv")
curves = defaultdict(list)
for r in rows:
    curves[(r["constellation"], int(r["loaded_count"]))].append((float(r["papr_db"]), float(r["ccdf"])))
for (c, m), pts in sorted(curves.items()):
    plt.semilogy(*zip(*pts), label=f"{c}, M = {m}")
plt.xlabel("PAPR [dB]")
plt.ylabel("CCDF")
plt.grid(True, which="both")
plt.legend()
plt.savefig(os.path.join(HERE, "papr_ccdf.png"), dpi=150)
"#,
    )?;
    Ok(ExperimentOutput {
        experiment: Experiment::PaprCcdf,
        files: vec![csv, plot],
        summary: format!("papr-ccdf: PAPR at CCDF {REPORT_CCDF}: {}", parts.join("; ")),
    })
}
