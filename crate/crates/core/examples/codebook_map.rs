//! Rainbow codebook of a 16-element TTD receiver: which angle every loaded
//! subcarrier probes, before and after a joint rotation.
//!
//! `cargo run --example codebook_map`

use rainbow_ttd::array::{beamforming_gain_with, ArrayGeometry, ResponseModel};
use rainbow_ttd::codebook::{build_rainbow_taps, rotate_codebook};
use rainbow_ttd::{Constellation, OfdmSpec};

fn main() -> rainbow_ttd::Result<()> {
    let fc = 60e9;
    let ofdm = OfdmSpec::uniform(4096, 16, 2e9, 128, Constellation::Qpsk)?;
    let book = build_rainbow_taps(16, fc, 1, 0.0, &ofdm)?;
    let geometry = ArrayGeometry::linear(16, fc)?;
    println!("delay step {:.3} ns, {} directions", book.delta_tau_s * 1e9, book.direction_count());

    for (m, sc) in book.subcarriers.iter().enumerate() {
        let angle = book.subcarrier_angle(m);
        let gain =
            beamforming_gain_with(&book.taps, &geometry, angle, book.subcarrier_freq_hz(m), ResponseModel::FrequencyFlat)?;
        println!(
            "subcarrier {m:>2}  {:>8.1} MHz -> {:>7.2} deg  gain {gain:.2}",
            sc.baseband_freq_hz / 1e6,
            angle.to_degrees()
        );
    }

    let rotated = rotate_codebook(&book, 10f64.to_radians());
    let wrapped = rotated.directions.iter().filter(|d| d.wrapped).count();
    println!("\nrotated by 10 deg: {wrapped} direction(s) wrapped across 90 deg");
    Ok(())
}
