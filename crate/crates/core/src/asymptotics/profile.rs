use std::f64::consts::{LN_2, PI};
use std::io;

use num_complex::Complex64;
use serde::Serialize;

use super::kernel::g_tilde_numeric;
use super::series::{h_star, h_star_extended, Fixed};
use crate::error::{AnalysisError, ModelError};

pub const MIN_PROFILE_SAMPLES: usize = 64;

/// `H*` sampled over one period of `log2 y`.
#[derive(Debug, Clone, PartialEq)]
pub struct OscillationProfile {
    /// `(log2 y, H*(y))`, with `log2 y = i / n` for `i = 0..n`.
    pub samples: Vec<(f64, f64)>,
    pub mean: f64,
    /// Magnitude of the first Fourier harmonic of the samples (the amplitude
    /// of the `cos(2 pi log2 y)` component).
    pub amplitude: f64,
    /// Half of `max - min` over the samples.
    pub amplitude_minmax: f64,
    deviations: Vec<f64>,
}

impl OscillationProfile {
    /// Complex coefficient `c_k` such that the samples are approximately
    /// `mean + sum_k Re(c_k exp(2 pi i k log2 y))`.
    pub fn harmonic(&self, k: usize) -> Complex64 {
        harmonic(&self.deviations, k)
    }

    pub fn write_csv<W: io::Write>(&self, writer: W) -> Result<(), ModelError> {
        let mut wtr = csv::Writer::from_writer(writer);
        wtr.write_record(["log2_y", "h_star"])?;
        for (x, v) in &self.samples {
            wtr.write_record([format!("{x}"), format!("{v:.17}")])?;
        }
        wtr.flush()?;
        Ok(())
    }
}

fn harmonic(deviations: &[f64], k: usize) -> Complex64 {
    let n = deviations.len();
    let mut acc = Complex64::new(0.0, 0.0);
    for (i, d) in deviations.iter().enumerate() {
        // reduce the phase index exactly before converting to an angle
        let phase = ((i * k) % n) as f64 / n as f64;
        acc += Complex64::from_polar(*d, -2.0 * PI * phase);
    }
    acc * (2.0 / n as f64)
}

fn sample_points(n_samples: usize) -> Vec<(f64, f64)> {
    (0..n_samples)
        .map(|i| {
            let x = i as f64 / n_samples as f64;
            (x, x.exp2())
        })
        .collect()
}

/// Samples `H*` at `n_samples` evenly spaced points of `log2 y` in `[0, 1)`
/// in double precision.
pub fn oscillation_profile(n_samples: usize) -> Result<OscillationProfile, AnalysisError> {
    if n_samples < MIN_PROFILE_SAMPLES {
        return Err(AnalysisError::TooFewSamples { min: MIN_PROFILE_SAMPLES, got: n_samples });
    }
    let samples: Vec<(f64, f64)> =
        sample_points(n_samples).into_iter().map(|(x, y)| h_star(y).map(|v| (x, v))).collect::<Result<_, _>>()?;
    let mean = samples.iter().map(|s| s.1).collect::<super::CompensatedSum>().value() / n_samples as f64;
    let deviations: Vec<f64> = samples.iter().map(|s| s.1 - mean).collect();
    Ok(finish(samples, mean, deviations))
}

/// Same as [`oscillation_profile`], but every sample and the mean are carried
/// in 256-bit fixed point; only the deviations from the mean are rounded.
pub fn oscillation_profile_extended(n_samples: usize) -> Result<OscillationProfile, AnalysisError> {
    if n_samples < MIN_PROFILE_SAMPLES {
        return Err(AnalysisError::TooFewSamples { min: MIN_PROFILE_SAMPLES, got: n_samples });
    }
    let points = sample_points(n_samples);
    let exact: Vec<Fixed> = points.iter().map(|&(_, y)| h_star_extended(y)).collect::<Result<_, _>>()?;
    let mean = Fixed::mean(&exact);
    let deviations: Vec<f64> = exact.iter().map(|v| v.diff_f64(&mean)).collect();
    let samples = points.iter().zip(&exact).map(|(p, v)| (p.0, v.to_f64())).collect();
    Ok(finish(samples, mean.to_f64(), deviations))
}

fn finish(samples: Vec<(f64, f64)>, mean: f64, deviations: Vec<f64>) -> OscillationProfile {
    let max = deviations.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let min = deviations.iter().copied().fold(f64::INFINITY, f64::min);
    let amplitude = harmonic(&deviations, 1).norm();
    OscillationProfile { samples, mean, amplitude, amplitude_minmax: 0.5 * (max - min), deviations }
}

/// `(8 pi^2 / (ln 2)^2) exp(-2 pi^2 / ln 2)`: amplitude of the leading
/// log-periodic harmonic of `H*`.
pub fn alpha_closed_form() -> f64 {
    8.0 * PI * PI / (LN_2 * LN_2) * alpha_exponential()
}

/// `exp(-2 pi^2 / ln 2)`.
pub fn alpha_exponential() -> f64 {
    (-2.0 * PI * PI / LN_2).exp()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AlphaReport {
    pub alpha_closed_form: f64,
    /// First-harmonic amplitude of `H*` measured by DFT of sampled values.
    pub amplitude_dft: f64,
    /// `amplitude_dft / mean`: the relative modulation of `T_n / (n / ln 2)`.
    pub relative_amplitude: f64,
    /// `(2 / ln 2) |g~(1 / ln 2)|` with `g~` from quadrature.
    pub amplitude_fourier: f64,
}

/// Closed-form amplitude plus two independent numerical measurements of it.
pub fn compute_alpha() -> AlphaReport {
    compute_alpha_with(1024)
}

pub fn compute_alpha_with(n_samples: usize) -> AlphaReport {
    let profile = oscillation_profile(n_samples.max(MIN_PROFILE_SAMPLES)).expect("sample count checked");
    let g1 = g_tilde_numeric(1.0 / LN_2);
    AlphaReport {
        alpha_closed_form: alpha_closed_form(),
        amplitude_dft: profile.amplitude,
        relative_amplitude: profile.amplitude / profile.mean,
        amplitude_fourier: 2.0 / LN_2 * g1.norm(),
    }
}

/// `(1/ln 2) sum_{|k| <= k_max} g~(k / ln 2) exp(2 pi i k log2 y)`.
pub fn poisson_reconstruction(y: f64, k_max: i32) -> f64 {
    let t = y.log2();
    let mut acc = Complex64::new(0.0, 0.0);
    for k in -k_max..=k_max {
        let g = g_tilde_numeric(k as f64 / LN_2);
        acc += g * Complex64::from_polar(1.0, 2.0 * PI * k as f64 * t);
    }
    acc.re / LN_2
}
