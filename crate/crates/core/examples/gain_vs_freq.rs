//! Gain of a phased array over frequency, and the 3-dB fractional bandwidth
//! it supports compared with `1.772 / (N |sin θ|)`.
//!
//! `cargo run --example gain_vs_freq`

use rainbow_ttd::experiments::measure_fbw;
use rainbow_ttd::squint::gain_vs_frequency_curve;

fn main() -> rainbow_ttd::Result<()> {
    let freqs: Vec<f64> = (0..=8).map(|k| 0.9 + 0.025 * k as f64).collect();
    let gains = gain_vs_frequency_curve(32, 45f64.to_radians(), &freqs)?;
    println!("N = 32 steered to 45 deg");
    for (f, g) in freqs.iter().zip(&gains) {
        println!("  f/fc = {f:.3}  {:>7.2} dB", 20.0 * g.log10());
    }

    println!("\n{:>4} {:>6} {:>10} {:>10}", "N", "angle", "measured", "formula");
    for n in [8, 16, 32, 64] {
        for angle in [30.0, 60.0] {
            let w = measure_fbw(n, angle)?;
            println!("{n:>4} {angle:>6} {:>10.5} {:>10.5}", w.measured, w.formula);
        }
    }
    Ok(())
}
