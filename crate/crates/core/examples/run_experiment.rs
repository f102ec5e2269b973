//! Run a shipped experiment configuration from code, with an override, and
//! read the summary back. Same as `rainbow-ttd run codebook-map --set rx.n=32`.
//!
//! `cargo run --example run_experiment`

use rainbow_ttd::experiments::{run_experiment, Experiment};

fn main() -> rainbow_ttd::Result<()> {
    let mut cfg = Experiment::CodebookMap.default_config()?;
    cfg.apply_override("rx.n=32")?;
    cfg.apply_override("ofdm.loaded=32")?;
    cfg.output_dir = std::env::temp_dir().join("rainbow-ttd-codebook-map");
    let out = run_experiment(Experiment::CodebookMap, &cfg)?;
    println!("{}", out.summary);
    for f in out.files {
        println!("  {}", f.display());
    }
    Ok(())
}
