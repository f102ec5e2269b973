//! Independent cross-checks of the codebook rotation and of the impairment
//! sweeps' monotone degradation.

use std::f64::consts::PI;

use num_complex::Complex64;
use rainbow_ttd::codebook::{build_rainbow_taps, rotate_codebook};
use rainbow_ttd::impairments::sensitivity_sweep;
use rainbow_ttd::{Constellation, DelayModel, OfdmSpec, Scenario, ScenarioConfig, SweepAxis};

/// `|Σ_n exp(j(2π f_b τ_n + φ_n)) exp(-jπ n sinθ)|` for a half-wavelength ULA
/// with a frequency-flat response.
fn pattern(delays: &[f64], phases: &[f64], fb: f64, sine: f64) -> f64 {
    delays
        .iter()
        .zip(phases)
        .enumerate()
        .map(|(n, (tau, phi))| Complex64::from_polar(1.0, 2.0 * PI * fb * tau + phi - PI * n as f64 * sine))
        .sum::<Complex64>()
        .norm()
}

#[test]
fn rotated_rainbow_beams_follow_the_rotated_directions() {
    let ofdm = OfdmSpec::uniform(4096, 16, 2e9, 128, Constellation::Qpsk).unwrap();
    let book = build_rainbow_taps(16, 60e9, 1, 0.0, &ofdm).unwrap();
    let rotated = rotate_codebook(&book, 10f64.to_radians());
    let points = 4096;
    let sines: Vec<f64> = (0..points).map(|k| -1.0 + 2.0 * k as f64 / points as f64).collect();
    let step = 2.0 / points as f64;
    for (m, sc) in rotated.subcarriers.iter().enumerate() {
        let best = sines
            .iter()
            .copied()
            .max_by(|a, b| {
                pattern(&rotated.taps.delays_s, &rotated.taps.phases_rad, sc.baseband_freq_hz, *a)
                    .total_cmp(&pattern(&rotated.taps.delays_s, &rotated.taps.phases_rad, sc.baseband_freq_hz, *b))
            })
            .unwrap();
        let expected = rotated.subcarrier_angle(m).sin();
        // sines ±1 alias for half-wavelength spacing
        let diff = (best - expected).abs();
        let err = diff.min(2.0 - diff);
        assert!(err <= step, "subcarrier {m}: argmax sine {best}, expected {expected}");
    }
}

#[test]
fn rmse_does_not_improve_with_larger_errors() {
    let scenario = Scenario::new(ScenarioConfig::default()).unwrap();
    let cases = [
        (SweepAxis::Gain, DelayModel::Baseband, 4.0),
        (SweepAxis::Phase, DelayModel::Baseband, 50.0),
        (SweepAxis::Delay, DelayModel::Baseband, 250.0),
        (SweepAxis::Delay, DelayModel::Rf, 3.0),
    ];
    for (axis, model, max) in cases {
        let mut s = scenario.clone();
        s.config.impairments.delay_model = model;
        let rows = sensitivity_sweep(&s, axis, &[0.0, max / 2.0, max], 500, 1).unwrap();
        for w in rows.windows(2) {
            // common random numbers keep the comparison paired; allow a few
            // percent of Monte Carlo slack
            for (a, b) in [(w[0].coarse_rmse_deg, w[1].coarse_rmse_deg), (w[0].refined_rmse_deg, w[1].refined_rmse_deg)] {
                assert!(b >= 0.95 * a, "{axis} {model:?}: RMSE fell from {a} to {b}");
            }
        }
        let (first, last) = (&rows[0], &rows[2]);
        assert!(last.refined_rmse_deg > first.refined_rmse_deg, "{axis} {model:?}: no degradation");
    }
}
