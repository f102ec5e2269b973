//! One training symbol end to end: rainbow combining at the receiver,
//! pilot compensation, coarse and dictionary-refined AoA estimates.
//!
//! `cargo run --release --example single_symbol_aoa`

use num_complex::Complex64;
use rainbow_ttd::array::{steering_vector, ResponseModel};
use rainbow_ttd::channel::{realize_channel, received_signal, ChannelSpec};
use rainbow_ttd::estimation::estimate;
use rainbow_ttd::{Scenario, ScenarioConfig};

fn main() -> rainbow_ttd::Result<()> {
    // reference parameters: 60 GHz, 2 GHz, 128 x 16 arrays, R = 4, D = 32
    let scenario = Scenario::new(ScenarioConfig::default())?.with_snr_db(10.0);
    let truth = 23.4f64.to_radians();
    let aod = -12f64.to_radians();

    let freqs: Vec<f64> = scenario.book.subcarriers.iter().map(|s| s.baseband_freq_hz).collect();
    let channel = realize_channel(&scenario.rx, &scenario.tx, truth, aod, &ChannelSpec::default(), &freqs, 11)?;
    let precoder = steering_vector(&scenario.tx, aod, scenario.config.carrier_hz, ResponseModel::FrequencyFlat)?.values;
    let pilots = vec![Complex64::new(1.0, 0.0); freqs.len()];
    let y = received_signal(&scenario.book, &channel, &precoder, &pilots, scenario.noise_var, 12)?;

    let result = estimate(&y, &scenario.book, Some(&scenario.dictionary))?;
    println!("truth    {:>8.3} deg", truth.to_degrees());
    println!("coarse   {:>8.3} deg (direction group {})", result.coarse_angle_rad.to_degrees(), result.winning_group);
    if let Some(refined) = result.refined_angle_rad {
        println!("refined  {:>8.3} deg", refined.to_degrees());
    }

    // the same thing through the Monte Carlo driver
    let records = scenario.run_trials(&Default::default(), 1, 50)?;
    let (coarse, refined) = rainbow_ttd::scenario::rmse_of(&records)?;
    println!("\n50 random trials at 10 dB: RMSE coarse {coarse:.3} deg, refined {refined:.3} deg");
    Ok(())
}
