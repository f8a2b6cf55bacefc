//! Embedding parameter selection: the peak-count rule for the dimension
//! parameter `d` and the delay `tau` as a minimizer of the column
//! orthogonality objective of the window-factorization matrix.
//!
//! The objective for distinct frequencies `nu_1..nu_a` is
//! `Gamma(x) = sum_{j<l} |1 + e^{i(nu_j-nu_l)x} + ... + e^{i(nu_j-nu_l)x d}|^2`,
//! evaluated in closed form through the geometric-sum identity.

use crate::embedding::{
    maxmin_sample, sliding_window, DistanceMatrix, EmbeddingError,
    EmbeddingParams, Metric, WindowSource,
};
use crate::persistence::{rips_persistence, FiltrationInput, PersistenceError};
use crate::spectral::SpectrumPeak;
use rayon::prelude::*;
use std::f64::consts::PI;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ParamsError {
    #[error("no spectral content detected")]
    NoSpectralContent,
    #[error("frequencies must be distinct")]
    DuplicateFrequencies,
    #[error("grid spacing {spacing} exceeds pi / (2 * max frequency gap) = {limit}")]
    GridTooCoarse { spacing: f64, limit: f64 },
    #[error("no valid delay in range")]
    NoValidDelay,
    #[error(transparent)]
    Embedding(#[from] EmbeddingError),
    #[error(transparent)]
    Persistence(#[from] PersistenceError),
}

/// How the embedding dimension is derived from the peak count `alpha`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DimensionRule {
    /// `d = alpha`, the preferred choice for quasiperiodic signals.
    PeakCount,
    /// `d = alpha - 1`, the minimum the structure theory allows.
    PeakCountMinusOne,
}

/// Number of spectral peaks, i.e. the embedding parameter `d = alpha`.
/// For real signals, pass the signed peak list (see
/// [`crate::spectral::mirror_real_peaks`]) so both members of each +/- pair
/// are counted.
pub fn choose_d(peaks: &[SpectrumPeak]) -> Result<usize, ParamsError> {
    choose_d_with_rule(peaks, DimensionRule::PeakCount)
}

pub fn choose_d_with_rule(
    peaks: &[SpectrumPeak],
    rule: DimensionRule,
) -> Result<usize, ParamsError> {
    if peaks.is_empty() {
        return Err(ParamsError::NoSpectralContent);
    }
    Ok(match rule {
        DimensionRule::PeakCount => peaks.len(),
        DimensionRule::PeakCountMinusOne => (peaks.len() - 1).max(1),
    })
}

/// `|1 + e^{i theta} + ... + e^{i theta d}|^2` via the geometric sum,
/// with the removable singularity at `theta = 0 (mod 2 pi)` set to `(d+1)^2`.
fn dirichlet_sq(theta: f64, d: usize) -> f64 {
    let s = (theta / 2.0).sin();
    if s.abs() < 1e-9 {
        ((d + 1) as f64).powi(2)
    } else {
        let r = ((d as f64 + 1.0) * theta / 2.0).sin() / s;
        r * r
    }
}

/// The delay-orthogonality objective at `x` for the given frequencies.
pub fn gamma(x: f64, frequencies: &[f64], d: usize) -> f64 {
    let mut total = 0.0;
    for (j, &nu_j) in frequencies.iter().enumerate() {
        for &nu_l in &frequencies[j + 1..] {
            total += dirichlet_sq((nu_j - nu_l) * x, d);
        }
    }
    total
}

/// Search configuration for the delay minimizer: a dense grid over
/// `[0, tau_max]` followed by golden-section refinement to `refine_tol`.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct DelaySearchConfig {
    pub tau_max: f64,
    pub grid_points: usize,
    pub refine_tol: f64,
}

impl DelaySearchConfig {
    pub fn new(tau_max: f64, grid_points: usize, refine_tol: f64) -> Self {
        assert!(tau_max > 0.0 && grid_points >= 2 && refine_tol > 0.0);
        DelaySearchConfig { tau_max, grid_points, refine_tol }
    }

    /// A grid dense enough for the fastest oscillation of the objective:
    /// spacing of about `pi / (8 (d+1) g)` for the largest frequency gap `g`.
    pub fn for_frequencies(tau_max: f64, frequencies: &[f64], d: usize) -> Self {
        let g = max_pairwise_gap(frequencies).max(f64::MIN_POSITIVE);
        let spacing = PI / (8.0 * (d as f64 + 1.0) * g);
        let grid_points = ((tau_max / spacing).ceil() as usize + 1).max(64);
        DelaySearchConfig { tau_max, grid_points, refine_tol: 1e-6 * tau_max.max(1.0) }
    }

    fn spacing(&self) -> f64 {
        self.tau_max / (self.grid_points - 1) as f64
    }

    /// The default search range from the sampled domain length:
    /// `tau_max = (3/4) * domain / d`, keeping the window inside the domain.
    pub fn default_tau_max(domain_length: f64, d: usize) -> f64 {
        0.75 * domain_length / d as f64
    }
}

fn max_pairwise_gap(frequencies: &[f64]) -> f64 {
    let mut g = 0.0f64;
    for (j, &a) in frequencies.iter().enumerate() {
        for &b in &frequencies[j + 1..] {
            g = g.max((a - b).abs());
        }
    }
    g
}

/// Minimizes `Gamma` over `(0, tau_max]`: dense grid evaluation, then
/// golden-section refinement around the best grid point. Grid points at
/// which some node pair coincides on the unit circle (within one grid step
/// of a multiple of `2 pi / gap`) are excluded, as is `x = 0`; ties break
/// toward smaller `tau`.
pub fn minimize_gamma(
    frequencies: &[f64],
    d: usize,
    config: &DelaySearchConfig,
) -> Result<(f64, f64), ParamsError> {
    for (j, &a) in frequencies.iter().enumerate() {
        if frequencies[j + 1..].contains(&a) {
            return Err(ParamsError::DuplicateFrequencies);
        }
    }
    let g_max = max_pairwise_gap(frequencies);
    let step = config.spacing();
    if g_max > 0.0 {
        let limit = PI / (2.0 * g_max);
        if step > limit {
            return Err(ParamsError::GridTooCoarse { spacing: step, limit });
        }
    }
    let periods: Vec<f64> = {
        let mut p = Vec::new();
        for (j, &a) in frequencies.iter().enumerate() {
            for &b in &frequencies[j + 1..] {
                p.push(2.0 * PI / (a - b).abs());
            }
        }
        p
    };
    let excluded = |x: f64| -> bool {
        periods.iter().any(|&per| {
            let r = x.rem_euclid(per);
            r.min(per - r) < step
        })
    };

    let mut best: Option<(f64, f64)> = None; // (x, gamma)
    for i in 1..config.grid_points {
        let x = i as f64 * step;
        if excluded(x) {
            continue;
        }
        let gx = gamma(x, frequencies, d);
        if best.map_or(true, |(_, gb)| gx < gb) {
            best = Some((x, gx));
        }
    }
    let Some((x_best, g_best)) = best else {
        return Err(ParamsError::NoValidDelay);
    };

    // Golden-section refinement in the bracket around the best grid point.
    let mut a = (x_best - step).max(0.0);
    let mut b = (x_best + step).min(config.tau_max);
    let inv_phi = (5.0f64.sqrt() - 1.0) / 2.0;
    let mut c = b - inv_phi * (b - a);
    let mut e = a + inv_phi * (b - a);
    let mut fc = gamma(c, frequencies, d);
    let mut fe = gamma(e, frequencies, d);
    while (b - a) > config.refine_tol {
        if fc <= fe {
            b = e;
            e = c;
            fe = fc;
            c = b - inv_phi * (b - a);
            fc = gamma(c, frequencies, d);
        } else {
            a = c;
            c = e;
            fc = fe;
            e = a + inv_phi * (b - a);
            fe = gamma(e, frequencies, d);
        }
    }
    let x_ref = 0.5 * (a + b);
    let g_ref = gamma(x_ref, frequencies, d);
    // Never return a delay at which two nodes coincide on the circle.
    let collides = periods.iter().any(|&per| {
        let r = x_ref.rem_euclid(per);
        r.min(per - r) * 2.0 * PI / per < 1e-9
    });
    if !collides && g_ref <= g_best {
        Ok((x_ref, g_ref))
    } else {
        Ok((x_best, g_best))
    }
}

/// One row of a persistence-vs-delay sweep table.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct SweepRow {
    pub tau: f64,
    pub dim: usize,
    pub rank: usize,
    pub persistence: f64,
}

/// For each delay: embed, landmark, compute Rips diagrams, and record the
/// `top_q` persistence values per requested dimension. Entries run in
/// parallel with per-entry seeds derived from `(seed, index)`.
#[allow(clippy::too_many_arguments)]
pub fn persistence_vs_tau_sweep(
    source: &WindowSource,
    d: usize,
    tau_values: &[f64],
    times: &[f64],
    landmarks: usize,
    seed: u64,
    top_q: usize,
    dims: &[usize],
) -> Result<Vec<SweepRow>, ParamsError> {
    assert!(!tau_values.is_empty(), "tau_values must be nonempty");
    let max_dim = dims.iter().copied().max().unwrap_or(1);
    let entries: Vec<Result<Vec<SweepRow>, ParamsError>> = tau_values
        .par_iter()
        .enumerate()
        .map(|(i, &tau)| {
            let params = EmbeddingParams::new(d, tau);
            let entry_seed = seed ^ (i as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15);
            let usable: Vec<f64> = match source {
                WindowSource::Sampled(sig) => {
                    let max_start = sig.t_end() - params.span();
                    times.iter().copied().filter(|&t| t <= max_start + 1e-9).collect()
                }
                WindowSource::Model(_) => times.to_vec(),
            };
            if usable.is_empty() {
                return Err(ParamsError::Embedding(EmbeddingError::EmptyCloud));
            }
            let cloud = sliding_window(source, params, &usable)?;
            let cloud = if landmarks < cloud.len() {
                let idx = maxmin_sample(&cloud, landmarks, entry_seed)?;
                cloud.select(&idx)
            } else {
                cloud
            };
            let dist = DistanceMatrix::from_cloud(&cloud, Metric::Euclidean);
            let dgms = rips_persistence(&FiltrationInput::new(dist, max_dim))?;
            let mut rows = Vec::new();
            for &dim in dims {
                let mut pers: Vec<f64> = dgms[dim]
                    .pairs()
                    .iter()
                    .filter(|p| p.1.is_finite())
                    .map(|p| p.1 - p.0)
                    .collect();
                pers.sort_by(|x, y| y.total_cmp(x));
                for rank in 0..top_q {
                    rows.push(SweepRow {
                        tau,
                        dim,
                        rank: rank + 1,
                        persistence: pers.get(rank).copied().unwrap_or(0.0),
                    });
                }
            }
            Ok(rows)
        })
        .collect();
    let mut out = Vec::new();
    for e in entries {
        out.extend(e?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::SpectrumPeak;
    use num_complex::Complex64;

    fn peak(frequency: f64) -> SpectrumPeak {
        SpectrumPeak { frequency, frequency_hz: frequency / (2.0 * PI), amplitude: 1.0, bin_index: 0 }
    }

    #[test]
    fn choose_d_counts_peaks() {
        let complex_peaks: Vec<_> = [1.0, 2.0f64.sqrt(), 3.0f64.sqrt()].map(peak).to_vec();
        assert_eq!(choose_d(&complex_peaks).unwrap(), 3);
        let signed: Vec<_> = [1.0, -1.0, 3.0f64.sqrt(), -(3.0f64.sqrt())].map(peak).to_vec();
        assert_eq!(choose_d(&signed).unwrap(), 4);
        assert_eq!(
            choose_d_with_rule(&signed, DimensionRule::PeakCountMinusOne).unwrap(),
            3
        );
        assert!(matches!(choose_d(&[]), Err(ParamsError::NoSpectralContent)));
    }

    #[test]
    fn gamma_at_zero_is_max() {
        let freqs = [1.0, 2.0f64.sqrt(), 3.0f64.sqrt()];
        let d = 3;
        let g0 = gamma(0.0, &freqs, d);
        let pairs = 3.0; // C(3,2)
        assert!((g0 - pairs * 16.0).abs() < 1e-9);
        for &x in &[0.1, 1.0, 7.7, 49.325] {
            assert!(gamma(x, &freqs, d) <= g0 + 1e-9);
            assert!(gamma(x, &freqs, d) >= 0.0);
        }
    }

    #[test]
    fn gamma_full_cancellation() {
        // (nu1 - nu2) x (d+1) = 2 pi m with (nu1 - nu2) x not a multiple of 2 pi
        let d = 3usize;
        // theta (d+1) = 2 pi -> theta = pi/2
        let freqs = [1.0, 0.0];
        let x = PI / 2.0;
        assert!(gamma(x, &freqs, d) < 1e-18);
    }

    #[test]
    fn gamma_translation_invariant() {
        let freqs = [1.0, 2.0f64.sqrt(), 3.0f64.sqrt()];
        let shifted: Vec<f64> = freqs.iter().map(|f| f + 11.3).collect();
        for &x in &[0.3, 2.7, 18.0] {
            let a = gamma(x, &freqs, 4);
            let b = gamma(x, &shifted, 4);
            assert!((a - b).abs() < 1e-9 * a.max(1.0));
        }
    }

    #[test]
    fn gamma_closed_form_matches_direct_sum() {
        let freqs = [0.9, 1.7, 4.3, -2.2];
        let d = 5usize;
        for &x in &[0.17, 1.23, 9.99, 31.07] {
            let mut direct = 0.0;
            for j in 0..freqs.len() {
                for l in j + 1..freqs.len() {
                    let theta = (freqs[j] - freqs[l]) * x;
                    let mut s = Complex64::new(0.0, 0.0);
                    for m in 0..=d {
                        s += Complex64::new(0.0, theta * m as f64).exp();
                    }
                    direct += s.norm_sqr();
                }
            }
            let closed = gamma(x, &freqs, d);
            assert!(
                (closed - direct).abs() < 1e-9 * direct.max(1.0),
                "x={x}: {closed} vs {direct}"
            );
        }
    }

    #[test]
    fn minimizer_three_exponentials() {
        let freqs = [1.0, 2.0f64.sqrt(), 3.0f64.sqrt()];
        let config = DelaySearchConfig::new(100.0, 20_001, 1e-7);
        let (tau, g) = minimize_gamma(&freqs, 3, &config).unwrap();
        // true global minimizer of the objective on [0, 100]
        assert!((tau - 49.345).abs() < 0.01, "tau = {tau}");
        assert!(g < 0.006);
        let (tau2, _) = minimize_gamma(&freqs, 2, &config).unwrap();
        assert!((tau2 - 65.800).abs() < 0.01, "tau = {tau2}");
    }

    #[test]
    fn minimizer_real_pair_case() {
        let r3 = 3.0f64.sqrt();
        let freqs = [1.0, -1.0, r3, -r3];
        let config = DelaySearchConfig::new(45.0 * PI / 4.0, 20_001, 1e-7);
        let (tau, _) = minimize_gamma(&freqs, 4, &config).unwrap();
        assert!((tau - 11.9577).abs() < 0.01, "tau = {tau}");
    }

    #[test]
    fn minimizer_avoids_node_collisions() {
        let freqs = [1.0, 2.0f64.sqrt()];
        let config = DelaySearchConfig::for_frequencies(40.0, &freqs, 2);
        let (tau, _) = minimize_gamma(&freqs, 2, &config).unwrap();
        let gap = 2.0f64.sqrt() - 1.0;
        let period = 2.0 * PI / gap;
        let r = tau.rem_euclid(period);
        assert!(r.min(period - r) > 1e-6, "tau = {tau} collides");
    }

    #[test]
    fn grid_invariant_enforced() {
        let freqs = [0.0, 10.0];
        let config = DelaySearchConfig::new(100.0, 10, 1e-6); // spacing 11.1 >> pi/20
        assert!(matches!(
            minimize_gamma(&freqs, 2, &config),
            Err(ParamsError::GridTooCoarse { .. })
        ));
    }

    #[test]
    fn sweep_constant_signal_has_zero_persistence() {
        let sig = crate::model::Signal::from_real(&vec![1.0; 400], 10.0, 0.0).unwrap();
        let times: Vec<f64> = (0..300).map(|i| i as f64 * 0.1).collect();
        let rows = persistence_vs_tau_sweep(
            &WindowSource::Sampled(&sig),
            2,
            &[0.5, 1.0],
            &times,
            50,
            7,
            3,
            &[1],
        )
        .unwrap();
        assert_eq!(rows.len(), 2 * 3);
        assert!(rows.iter().all(|r| r.persistence == 0.0));
    }

    #[test]
    fn sweep_good_tau_dominates_bad_tau() {
        // top-3 H1 persistence at the optimized delay dominates a poor delay
        let m = crate::testutil::three_exp_model();
        let times: Vec<f64> = (0..800).map(|i| i as f64 * 0.5).collect();
        let rows = persistence_vs_tau_sweep(
            &WindowSource::Model(&m),
            3,
            &[16.458, 49.325],
            &times,
            150,
            42,
            3,
            &[1],
        )
        .unwrap();
        let top: Vec<f64> = [16.458, 49.325]
            .iter()
            .map(|&t| {
                rows.iter()
                    .filter(|r| r.tau == t && r.rank == 1)
                    .map(|r| r.persistence)
                    .next()
                    .unwrap()
            })
            .collect();
        assert!(top[1] > top[0], "{top:?}");
    }
}
