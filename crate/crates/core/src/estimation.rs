//! Angle-of-arrival estimation from one rainbow training symbol.
//!
//! The coarse estimator picks the probed direction with the largest received
//! power, averaged over the `R` subcarriers of each direction. The refined
//! estimator correlates the per-direction profile against an oversampled
//! dictionary of expected combining gains.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::array::{combiner_weights, inner_product, steering_vector, ArrayGeometry, ResponseModel};
use crate::codebook::RainbowCodebook;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct EstimationResult {
    pub coarse_angle_rad: f64,
    pub refined_angle_rad: Option<f64>,
    pub per_direction_power: Vec<f64>,
    pub winning_group: usize,
    /// Pilot-compensated samples the estimate was computed from.
    pub samples: Vec<Complex64>,
}

/// How measurements are matched against dictionary rows.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MatchingDomain {
    /// Square-rooted per-direction powers against gain magnitudes.
    #[default]
    Amplitude,
    /// Per-direction powers against squared gains.
    Power,
    /// Complex samples against per-subcarrier responses, magnitude of the
    /// inner product. Requires a frequency-flat channel gain.
    Complex,
}

#[derive(Debug, Clone)]
pub struct GainDictionary {
    pub candidate_angles: Vec<f64>,
    /// `Q × D`, rows normalized to unit Euclidean norm.
    pub gain_profiles: Vec<Vec<f64>>,
    pub domain: MatchingDomain,
    /// `Q × M` expected complex responses, unit-norm rows; only for
    /// [`MatchingDomain::Complex`].
    pub subcarrier_responses: Option<Vec<Vec<Complex64>>>,
}

fn argmax_first(values: impl IntoIterator<Item = f64>) -> Option<usize> {
    let mut best: Option<(usize, f64)> = None;
    for (k, v) in values.into_iter().enumerate() {
        match best {
            Some((_, b)) if v <= b => {}
            _ => best = Some((k, v)),
        }
    }
    best.map(|(k, _)| k)
}

fn normalize(v: &mut [f64]) {
    let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    if norm > 0.0 {
        v.iter_mut().for_each(|x| *x /= norm);
    }
}

/// Per-direction power `mean_{m ∈ group} |Y[m]|²` and the strongest direction.
/// Ties go to the lowest direction index.
pub fn coarse_estimate(samples: &[Complex64], book: &RainbowCodebook) -> Result<EstimationResult> {
    let m = book.subcarrier_count();
    if samples.len() != m {
        return Err(Error::DimensionMismatch {
            expected: m,
            actual: samples.len(),
            context: "received samples vs loaded subcarriers",
        });
    }
    let per_direction_power: Vec<f64> = book
        .directions
        .iter()
        .map(|g| {
            g.subcarriers.iter().map(|&k| samples[k].norm_sqr()).sum::<f64>()
                / g.subcarriers.len() as f64
        })
        .collect();
    let winning_group = argmax_first(per_direction_power.iter().copied())
        .ok_or(Error::EmptyInput("codebook without directions"))?;
    Ok(EstimationResult {
        coarse_angle_rad: book.directions[winning_group].angle_rad,
        refined_angle_rad: None,
        per_direction_power,
        winning_group,
        samples: samples.to_vec(),
    })
}

/// Candidate angles with sines uniform on `[-1, 1)`; when `q` is a multiple
/// of the direction count every unrotated probed angle is a candidate.
pub fn candidate_angles(q: usize) -> Vec<f64> {
    (0..q)
        .map(|k| (-1.0 + 2.0 * k as f64 / q as f64).asin())
        .collect()
}

pub fn build_gain_dictionary(
    book: &RainbowCodebook,
    geometry: &ArrayGeometry,
    q: usize,
    response: ResponseModel,
    domain: MatchingDomain,
) -> Result<GainDictionary> {
    let d = book.direction_count();
    if q < d {
        return Err(Error::config(format!(
            "dictionary size {q} below direction count {d}"
        )));
    }
    if geometry.element_count() != book.element_count() {
        return Err(Error::DimensionMismatch {
            expected: book.element_count(),
            actual: geometry.element_count(),
            context: "dictionary geometry",
        });
    }
    let weights: Vec<Vec<Complex64>> = (0..book.subcarrier_count())
        .map(|m| combiner_weights(&book.taps, book.subcarrier_freq_hz(m), book.carrier_hz))
        .collect();

    let candidates = candidate_angles(q);
    let mut gain_profiles = Vec::with_capacity(q);
    let mut responses = Vec::with_capacity(if domain == MatchingDomain::Complex { q } else { 0 });
    for &theta in &candidates {
        let per_sc: Vec<Complex64> = weights
            .iter()
            .enumerate()
            .map(|(m, w)| {
                let a = steering_vector(geometry, theta, book.subcarrier_freq_hz(m), response)?;
                Ok(inner_product(w, &a.values))
            })
            .collect::<Result<_>>()?;
        let mut row: Vec<f64> = book
            .directions
            .iter()
            .map(|g| {
                let p = g.subcarriers.iter().map(|&m| per_sc[m].norm_sqr()).sum::<f64>()
                    / g.subcarriers.len() as f64;
                match domain {
                    MatchingDomain::Power => p,
                    _ => p.sqrt(),
                }
            })
            .collect();
        normalize(&mut row);
        gain_profiles.push(row);
        if domain == MatchingDomain::Complex {
            let norm = per_sc.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
            responses.push(per_sc.into_iter().map(|c| c / norm).collect());
        }
    }
    Ok(GainDictionary {
        candidate_angles: candidates,
        gain_profiles,
        domain,
        subcarrier_responses: (domain == MatchingDomain::Complex).then_some(responses),
    })
}

/// Candidate angle whose dictionary row best matches the measurement.
pub fn refined_estimate(result: &EstimationResult, dict: &GainDictionary) -> Result<f64> {
    let best = match dict.domain {
        MatchingDomain::Amplitude | MatchingDomain::Power => {
            let mut measured: Vec<f64> = result
                .per_direction_power
                .iter()
                .map(|p| if dict.domain == MatchingDomain::Power { *p } else { p.sqrt() })
                .collect();
            let d = measured.len();
            if dict.gain_profiles.first().map(Vec::len) != Some(d) {
                return Err(Error::DimensionMismatch {
                    expected: d,
                    actual: dict.gain_profiles.first().map_or(0, Vec::len),
                    context: "dictionary profile length",
                });
            }
            normalize(&mut measured);
            argmax_first(
                dict.gain_profiles
                    .iter()
                    .map(|row| row.iter().zip(&measured).map(|(a, b)| a * b).sum::<f64>()),
            )
        }
        MatchingDomain::Complex => {
            let responses = dict
                .subcarrier_responses
                .as_ref()
                .ok_or_else(|| Error::config("complex matching needs subcarrier responses"))?;
            let m = result.samples.len();
            if responses.first().map(Vec::len) != Some(m) {
                return Err(Error::DimensionMismatch {
                    expected: m,
                    actual: responses.first().map_or(0, Vec::len),
                    context: "dictionary responses",
                });
            }
            argmax_first(
                responses
                    .iter()
                    .map(|row| inner_product(row, &result.samples).norm()),
            )
        }
    };
    best.map(|k| dict.candidate_angles[k])
        .ok_or(Error::EmptyInput("empty dictionary"))
}

/// Coarse estimate followed by dictionary refinement.
pub fn estimate(
    samples: &[Complex64],
    book: &RainbowCodebook,
    dict: Option<&GainDictionary>,
) -> Result<EstimationResult> {
    let mut result = coarse_estimate(samples, book)?;
    if let Some(dict) = dict {
        result.refined_angle_rad = Some(refined_estimate(&result, dict)?);
    }
    Ok(result)
}

/// Root-mean-square angular error in degrees against a single truth.
pub fn rmse(estimates_rad: &[f64], truth_rad: f64) -> Result<f64> {
    rmse_pairs(estimates_rad.iter().map(|e| (*e, truth_rad)))
}

/// RMSE in degrees over `(estimate, truth)` pairs, both in radians.
pub fn rmse_pairs(pairs: impl IntoIterator<Item = (f64, f64)>) -> Result<f64> {
    let (sum, n) = pairs.into_iter().fold((0.0, 0usize), |(s, n), (e, t)| {
        let d = (e - t).to_degrees();
        (s + d * d, n + 1)
    });
    if n == 0 {
        return Err(Error::EmptyInput("RMSE of no estimates"));
    }
    Ok((sum / n as f64).sqrt())
}
