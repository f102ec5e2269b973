//! OFDM training symbols with sparse subcarrier loading, and PAPR statistics.
//!
//! Bin `b` of the `M_tot`-point grid carries the baseband offset
//! `k · BW / M_tot`, with `k = b` for the lower half of the bins and `k = b - M_tot`
//! for the upper half (negative frequencies wrap). The rainbow codebook uses the
//! same mapping through [`OfdmSpec::baseband_freq_hz`].

use std::sync::Arc;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use rustfft::{Fft, FftPlanner};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Constellation {
    Bpsk,
    #[default]
    Qpsk,
}

impl Constellation {
    pub fn name(self) -> &'static str {
        match self {
            Constellation::Bpsk => "bpsk",
            Constellation::Qpsk => "qpsk",
        }
    }

    /// Unit-energy random point.
    pub fn sample<R: Rng + ?Sized>(self, rng: &mut R) -> Complex64 {
        let sign = |b: bool| if b { 1.0 } else { -1.0 };
        match self {
            Constellation::Bpsk => Complex64::new(sign(rng.random()), 0.0),
            Constellation::Qpsk => {
                let s = std::f64::consts::FRAC_1_SQRT_2;
                Complex64::new(sign(rng.random()) * s, sign(rng.random()) * s)
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OfdmSpec {
    pub m_total: usize,
    /// Sorted DFT bin indices carrying pilots.
    pub loaded_indices: Vec<usize>,
    pub bandwidth_hz: f64,
    pub cp_len: usize,
    pub constellation: Constellation,
}

impl OfdmSpec {
    pub fn new(
        m_total: usize,
        mut loaded_indices: Vec<usize>,
        bandwidth_hz: f64,
        cp_len: usize,
        constellation: Constellation,
    ) -> Result<Self> {
        loaded_indices.sort_unstable();
        let spec = OfdmSpec {
            m_total,
            loaded_indices,
            bandwidth_hz,
            cp_len,
            constellation,
        };
        spec.validate()?;
        Ok(spec)
    }

    /// `loaded` subcarriers spread uniformly over the band with stride
    /// `M_tot / loaded`, starting from the lower band edge.
    pub fn uniform(
        m_total: usize,
        loaded: usize,
        bandwidth_hz: f64,
        cp_len: usize,
        constellation: Constellation,
    ) -> Result<Self> {
        if loaded == 0 || loaded > m_total {
            return Err(Error::config(format!(
                "cannot load {loaded} of {m_total} subcarriers"
            )));
        }
        let half = (m_total / 2) as i64;
        let bins = (0..loaded)
            .map(|j| {
                let k = (j * m_total / loaded) as i64 - half;
                k.rem_euclid(m_total as i64) as usize
            })
            .collect();
        Self::new(m_total, bins, bandwidth_hz, cp_len, constellation)
    }

    pub fn fully_loaded(
        m_total: usize,
        bandwidth_hz: f64,
        cp_len: usize,
        constellation: Constellation,
    ) -> Result<Self> {
        Self::new(m_total, (0..m_total).collect(), bandwidth_hz, cp_len, constellation)
    }

    pub fn validate(&self) -> Result<()> {
        if self.m_total == 0 {
            return Err(Error::config("OFDM grid needs at least one subcarrier"));
        }
        if self.loaded_indices.is_empty() {
            return Err(Error::config("no loaded subcarriers"));
        }
        if self.loaded_indices.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::config("duplicate loaded subcarrier"));
        }
        if let Some(&last) = self.loaded_indices.last() {
            if last >= self.m_total {
                return Err(Error::config(format!(
                    "loaded bin {last} outside grid of {}",
                    self.m_total
                )));
            }
        }
        if self.cp_len >= self.m_total {
            return Err(Error::config("cyclic prefix must be shorter than the symbol"));
        }
        if !(self.bandwidth_hz > 0.0 && self.bandwidth_hz.is_finite()) {
            return Err(Error::config("bandwidth must be positive"));
        }
        Ok(())
    }

    pub fn loaded_count(&self) -> usize {
        self.loaded_indices.len()
    }

    /// Spacing of the DFT grid, `BW / M_tot`.
    pub fn subcarrier_spacing_hz(&self) -> f64 {
        self.bandwidth_hz / self.m_total as f64
    }

    pub fn baseband_index(&self, bin: usize) -> i64 {
        baseband_index(bin, self.m_total)
    }

    pub fn baseband_freq_hz(&self, bin: usize) -> f64 {
        self.baseband_index(bin) as f64 * self.subcarrier_spacing_hz()
    }

    /// Loaded `(bin, baseband frequency)` pairs in ascending frequency.
    pub fn loaded_by_frequency(&self) -> Vec<(usize, f64)> {
        let mut out: Vec<(usize, f64)> = self
            .loaded_indices
            .iter()
            .map(|&b| (b, self.baseband_freq_hz(b)))
            .collect();
        out.sort_by(|a, b| a.1.total_cmp(&b.1));
        out
    }
}

/// Signed baseband index of DFT bin `bin` on an `m_total`-point grid.
pub fn baseband_index(bin: usize, m_total: usize) -> i64 {
    if bin < m_total.div_ceil(2) {
        bin as i64
    } else {
        bin as i64 - m_total as i64
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PaprOptions {
    /// Measure over the CP-included symbol rather than the DFT body.
    pub include_cp: bool,
    /// Time-domain oversampling factor (zero padding in frequency).
    pub oversampling: usize,
}

impl Default for PaprOptions {
    fn default() -> Self {
        PaprOptions { include_cp: true, oversampling: 1 }
    }
}

/// Reusable IDFT plan for one [`OfdmSpec`].
pub struct SymbolGenerator {
    spec: OfdmSpec,
    oversampling: usize,
    ifft: Arc<dyn Fft<f64>>,
}

impl SymbolGenerator {
    pub fn new(spec: &OfdmSpec, oversampling: usize) -> Result<Self> {
        spec.validate()?;
        if oversampling == 0 {
            return Err(Error::config("oversampling factor must be at least 1"));
        }
        let ifft = FftPlanner::new().plan_fft_inverse(spec.m_total * oversampling);
        Ok(SymbolGenerator {
            spec: spec.clone(),
            oversampling,
            ifft,
        })
    }

    /// Frequency-domain pilots on the loaded bins, zeros elsewhere. Loaded
    /// amplitudes are `sqrt(M_tot / M)` so the time-domain mean power is one
    /// whatever the loading.
    pub fn pilots(&self, seed: u64) -> Vec<Complex64> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let amp = (self.spec.m_total as f64 / self.spec.loaded_count() as f64).sqrt();
        let mut grid = vec![Complex64::new(0.0, 0.0); self.spec.m_total];
        for &bin in &self.spec.loaded_indices {
            grid[bin] = self.spec.constellation.sample(&mut rng) * amp;
        }
        grid
    }

    /// Time-domain symbol with cyclic prefix, length `L (M_tot + cp)` for
    /// oversampling factor `L`.
    pub fn generate(&self, seed: u64) -> Vec<Complex64> {
        let grid = self.pilots(seed);
        self.modulate(&grid)
    }

    pub fn modulate(&self, grid: &[Complex64]) -> Vec<Complex64> {
        let m = self.spec.m_total;
        let l = self.oversampling;
        let size = m * l;
        let mut buf = vec![Complex64::new(0.0, 0.0); size];
        for (bin, x) in grid.iter().enumerate() {
            let k = baseband_index(bin, m);
            buf[k.rem_euclid(size as i64) as usize] = *x;
        }
        self.ifft.process(&mut buf);
        // unitary at L = 1; oversampled symbols keep the same mean power
        let scale = 1.0 / (m as f64).sqrt();
        let cp = self.spec.cp_len * l;
        let mut out = Vec::with_capacity(size + cp);
        out.extend(buf[size - cp..].iter().map(|x| x * scale));
        out.extend(buf.iter().map(|x| x * scale));
        out
    }

    pub fn cp_samples(&self) -> usize {
        self.spec.cp_len * self.oversampling
    }
}

/// One random training symbol: CP followed by the `M_tot`-sample body.
pub fn generate_symbol(spec: &OfdmSpec, seed: u64) -> Result<Vec<Complex64>> {
    Ok(SymbolGenerator::new(spec, 1)?.generate(seed))
}

/// `10 log10(max |x|² / mean |x|²)`.
pub fn papr(symbol: &[Complex64]) -> Result<f64> {
    if symbol.is_empty() {
        return Err(Error::EmptyInput("PAPR of an empty signal"));
    }
    let (peak, total) = symbol.iter().fold((0.0f64, 0.0f64), |(p, t), x| {
        let e = x.norm_sqr();
        (p.max(e), t + e)
    });
    let mean = total / symbol.len() as f64;
    if mean == 0.0 {
        return Err(Error::domain("PAPR of an all-zero signal"));
    }
    Ok(10.0 * (peak / mean).log10())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CcdfPoint {
    pub papr_db: f64,
    /// Fraction of symbols whose PAPR exceeds `papr_db`.
    pub ccdf: f64,
}

/// PAPR of `trials` independent symbols; trial `i` uses seed `seed + i`.
pub fn papr_samples(spec: &OfdmSpec, trials: usize, seed: u64, opts: PaprOptions) -> Result<Vec<f64>> {
    let generator = SymbolGenerator::new(spec, opts.oversampling)?;
    let skip = if opts.include_cp { 0 } else { generator.cp_samples() };
    (0..trials)
        .into_par_iter()
        .map(|i| {
            let symbol = generator.generate(seed.wrapping_add(i as u64));
            papr(&symbol[skip..])
        })
        .collect()
}

pub fn empirical_ccdf(samples: &[f64]) -> Vec<CcdfPoint> {
    let mut sorted = samples.to_vec();
    sorted.sort_by(f64::total_cmp);
    let n = sorted.len() as f64;
    sorted
        .iter()
        .enumerate()
        .map(|(k, &papr_db)| CcdfPoint {
            papr_db,
            ccdf: (n - 1.0 - k as f64) / n,
        })
        .collect()
}

pub fn papr_ccdf(spec: &OfdmSpec, trials: usize, seed: u64, opts: PaprOptions) -> Result<Vec<CcdfPoint>> {
    if trials == 0 {
        return Err(Error::EmptyInput("CCDF needs at least one trial"));
    }
    Ok(empirical_ccdf(&papr_samples(spec, trials, seed, opts)?))
}

/// Smallest PAPR whose CCDF is at or below `prob`.
pub fn papr_at_ccdf(curve: &[CcdfPoint], prob: f64) -> Option<f64> {
    curve.iter().find(|p| p.ccdf <= prob).map(|p| p.papr_db)
}
