//! Discrete Fourier analysis of sampled signals: spectrum computation and
//! prominent-peak detection with parabolic frequency refinement.
//!
//! Moduli are normalized by the sample count, so a unit-coefficient complex
//! exponential sitting on a bin yields modulus ~1. Real signals report the
//! non-negative half of the spectrum by default; complex signals the full
//! signed range.

use crate::model::Signal;
use num_complex::Complex64;
use rustfft::FftPlanner;
use std::f64::consts::PI;

/// One refined spectral peak. `frequency` is angular (radians per unit
/// time), `frequency_hz = frequency / 2 pi`.
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct SpectrumPeak {
    pub frequency: f64,
    pub frequency_hz: f64,
    pub amplitude: f64,
    pub bin_index: usize,
}

/// Modulus spectrum on an ascending angular-frequency axis.
#[derive(Debug, Clone)]
pub struct Spectrum {
    freqs: Vec<f64>,
    moduli: Vec<f64>,
    bin_spacing: f64,
    half_range: bool,
}

impl Spectrum {
    pub fn freqs(&self) -> &[f64] {
        &self.freqs
    }

    pub fn moduli(&self) -> &[f64] {
        &self.moduli
    }

    /// Angular frequency step between adjacent bins.
    pub fn bin_spacing(&self) -> f64 {
        self.bin_spacing
    }

    /// True when only the non-negative half is stored (real input).
    pub fn is_half_range(&self) -> bool {
        self.half_range
    }

    pub fn len(&self) -> usize {
        self.freqs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.freqs.is_empty()
    }

    pub fn max_modulus(&self) -> f64 {
        self.moduli.iter().copied().fold(0.0, f64::max)
    }

    pub fn iter(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.freqs.iter().copied().zip(self.moduli.iter().copied())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Window {
    Rectangular,
    Hann,
}

/// Modulus of the DFT of `signal`, arbitrary length, O(n log n).
///
/// Real signals yield the bins for frequencies in `[0, pi * rate]`; complex
/// signals the full signed range, sorted ascending.
pub fn spectrum(signal: &Signal) -> Spectrum {
    spectrum_with(signal, Window::Rectangular, signal.is_real())
}

/// Spectrum with an explicit window function and half/full range choice.
/// `half_range` is only meaningful for real signals, whose spectrum is
/// conjugate-symmetric.
pub fn spectrum_with(signal: &Signal, window: Window, half_range: bool) -> Spectrum {
    let n = signal.len();
    assert!(n >= 2, "spectrum needs at least 2 samples");
    let mut buf: Vec<Complex64> = signal.samples().to_vec();
    match window {
        Window::Rectangular => {}
        Window::Hann => {
            let nm1 = (n - 1) as f64;
            for (i, v) in buf.iter_mut().enumerate() {
                // scaled by 2 so an on-bin unit exponential keeps modulus ~1
                *v *= 2.0 * (0.5 - 0.5 * (2.0 * PI * i as f64 / nm1).cos());
            }
        }
    }
    FftPlanner::new().plan_fft_forward(n).process(&mut buf);
    let norm = 1.0 / n as f64;
    let bin_spacing = 2.0 * PI * signal.sample_rate() / n as f64;

    // DFT bin k holds angular frequency 2 pi k rate / n; fold k > n/2 to negatives.
    let signed_freq = |k: usize| -> f64 {
        let ks = if k <= n / 2 { k as isize } else { k as isize - n as isize };
        ks as f64 * bin_spacing
    };

    let mut idx: Vec<usize> = (0..n).collect();
    if half_range {
        idx.retain(|&k| k <= n / 2);
    }
    idx.sort_by(|&a, &b| signed_freq(a).total_cmp(&signed_freq(b)));
    let freqs: Vec<f64> = idx.iter().map(|&k| signed_freq(k)).collect();
    let moduli: Vec<f64> = idx.iter().map(|&k| buf[k].norm() * norm).collect();
    Spectrum { freqs, moduli, bin_spacing, half_range }
}

/// Local maxima of the spectrum with modulus >= `min_height`, kept greedily
/// in decreasing amplitude order subject to pairwise angular-frequency
/// separation >= `min_separation`. Surviving peaks are refined by parabolic
/// interpolation of the log-modulus over the three bins around the maximum.
pub fn find_peaks(spectrum: &Spectrum, min_height: f64, min_separation: f64) -> Vec<SpectrumPeak> {
    assert!(min_height >= 0.0 && min_separation >= 0.0);
    let m = spectrum.moduli();
    let f = spectrum.freqs();
    let n = m.len();
    let mut candidates: Vec<usize> = Vec::new();
    for i in 0..n {
        let left_ok = i == 0 || m[i] > m[i - 1];
        let right_ok = i + 1 == n || m[i] >= m[i + 1];
        if left_ok && right_ok && m[i] >= min_height {
            candidates.push(i);
        }
    }
    candidates.sort_by(|&a, &b| m[b].total_cmp(&m[a]).then(a.cmp(&b)));

    let mut kept: Vec<usize> = Vec::new();
    for &i in &candidates {
        if kept.iter().all(|&j| (f[i] - f[j]).abs() >= min_separation) {
            kept.push(i);
        }
    }

    let mut peaks: Vec<SpectrumPeak> = kept
        .into_iter()
        .map(|i| {
            let (freq, amp) = refine_parabolic(spectrum, i);
            SpectrumPeak {
                frequency: freq,
                frequency_hz: freq / (2.0 * PI),
                amplitude: amp,
                bin_index: i,
            }
        })
        .collect();
    peaks.sort_by(|a, b| b.amplitude.total_cmp(&a.amplitude));
    peaks
}

/// Quadratic interpolation of the log-modulus around bin `i`. Returns the
/// refined (frequency, amplitude); falls back to the bin values at the array
/// boundaries or when a neighbor vanishes.
fn refine_parabolic(spectrum: &Spectrum, i: usize) -> (f64, f64) {
    let m = spectrum.moduli();
    let f = spectrum.freqs();
    if i == 0 || i + 1 >= m.len() || m[i - 1] <= 0.0 || m[i] <= 0.0 || m[i + 1] <= 0.0 {
        return (f[i], m[i]);
    }
    let (l0, l1, l2) = (m[i - 1].ln(), m[i].ln(), m[i + 1].ln());
    let denom = l0 - 2.0 * l1 + l2;
    if denom >= 0.0 || !denom.is_finite() {
        return (f[i], m[i]);
    }
    let delta = 0.5 * (l0 - l2) / denom;
    let delta = delta.clamp(-0.5, 0.5);
    let freq = f[i] + delta * spectrum.bin_spacing();
    let amp = (l1 - 0.25 * delta * (l0 - l2)).exp();
    (freq, amp)
}

/// Expands a one-sided peak list from a real signal into the full signed
/// list, mirroring every positive-frequency peak to its negative twin.
/// Peaks at (numerically) zero frequency are kept single.
pub fn mirror_real_peaks(peaks: &[SpectrumPeak]) -> Vec<SpectrumPeak> {
    let mut out = Vec::with_capacity(peaks.len() * 2);
    for p in peaks {
        out.push(p.clone());
        if p.frequency.abs() > 1e-12 {
            let mut q = p.clone();
            q.frequency = -p.frequency;
            q.frequency_hz = -p.frequency_hz;
            out.push(q);
        }
    }
    out.sort_by(|a, b| b.amplitude.total_cmp(&a.amplitude).then(a.frequency.total_cmp(&b.frequency)));
    out
}
