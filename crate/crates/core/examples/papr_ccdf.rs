//! PAPR of the sparse training symbol against a fully loaded OFDM symbol.
//!
//! `cargo run --release --example papr_ccdf`

use rainbow_ttd::waveform::{papr, papr_at_ccdf, papr_ccdf, SymbolGenerator};
use rainbow_ttd::waveform::PaprOptions;
use rainbow_ttd::{Constellation, OfdmSpec};

fn main() -> rainbow_ttd::Result<()> {
    let sparse = OfdmSpec::uniform(4096, 128, 2e9, 128, Constellation::Qpsk)?;
    let full = OfdmSpec::fully_loaded(4096, 2e9, 128, Constellation::Qpsk)?;

    let symbol = SymbolGenerator::new(&sparse, 1)?.generate(5);
    println!("one sparse symbol: {} samples, PAPR {:.2} dB", symbol.len(), papr(&symbol)?);

    for (name, spec) in [("M = 128", &sparse), ("M = 4096", &full)] {
        let curve = papr_ccdf(spec, 2000, 1, PaprOptions::default())?;
        println!(
            "{name:>9}: PAPR exceeded with probability 1e-2 at {:.2} dB",
            papr_at_ccdf(&curve, 1e-2).unwrap_or(f64::NAN)
        );
    }
    Ok(())
}
