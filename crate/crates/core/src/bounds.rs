//! The theoretical machinery behind the persistence guarantees: the
//! window-factorization Vandermonde matrix with unit-circle nodes, its
//! extremal singular values, the node-separation quantity delta, and the
//! persistence lower bounds with approximation and subsampling corrections.

use crate::persistence::multiplicity_mu;
use num_complex::Complex64;
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum BoundsError {
    #[error("tau violates structure theorem exclusion: nodes of frequencies {0} and {1} coincide")]
    NodeCollision(f64, f64),
    #[error("rank deficiency: sigma_min {0} below 1e-12 * sigma_max {1}")]
    RankDeficient(f64, f64),
    #[error("d too small for node separation: need d > {0}")]
    DTooSmall(f64),
    #[error("need at least {0} frequencies")]
    TooFewFrequencies(usize),
    #[error("level n = {0} out of range 1..={1}")]
    LevelOutOfRange(usize, usize),
    #[error("magnitudes must be sorted descending and positive")]
    BadMagnitudes,
    #[error("empty matrix")]
    EmptyMatrix,
}

/// Chord distance below which two unit-circle nodes count as colliding.
const NODE_COLLISION_TOL: f64 = 1e-9;

/// The `(d+1) x alpha` matrix with entry `(j, m) = exp(i nu_m tau j)`.
/// Errors when two nodes `exp(i nu tau)` coincide on the unit circle.
pub fn vandermonde(
    frequencies: &[f64],
    tau: f64,
    d: usize,
) -> Result<Vec<Vec<Complex64>>, BoundsError> {
    if frequencies.is_empty() {
        return Err(BoundsError::TooFewFrequencies(1));
    }
    let nodes = check_nodes(frequencies, tau)?;
    let mut rows = Vec::with_capacity(d + 1);
    for j in 0..=d {
        rows.push(
            frequencies
                .iter()
                .map(|&nu| Complex64::new(0.0, nu * tau * j as f64).exp())
                .collect(),
        );
    }
    let _ = nodes;
    Ok(rows)
}

fn check_nodes(frequencies: &[f64], tau: f64) -> Result<Vec<Complex64>, BoundsError> {
    let nodes: Vec<Complex64> = frequencies
        .iter()
        .map(|&nu| Complex64::new(0.0, nu * tau).exp())
        .collect();
    for (m, &zm) in nodes.iter().enumerate() {
        for (l, &zl) in nodes.iter().enumerate().take(m) {
            if (zm - zl).norm() < NODE_COLLISION_TOL {
                return Err(BoundsError::NodeCollision(frequencies[l], frequencies[m]));
            }
        }
    }
    Ok(nodes)
}

/// Extremal singular values of a dense complex matrix via one-sided Jacobi
/// on the columns; relative accuracy about 1e-10 at these sizes. Reports
/// rank deficiency instead of returning a vanishing sigma_min.
pub fn sigma_extremes(matrix: &[Vec<Complex64>]) -> Result<(f64, f64), BoundsError> {
    let sigmas = singular_values(matrix)?;
    let (mut s_min, mut s_max) = (f64::INFINITY, 0.0f64);
    for &s in &sigmas {
        s_min = s_min.min(s);
        s_max = s_max.max(s);
    }
    if s_min < 1e-12 * s_max {
        return Err(BoundsError::RankDeficient(s_min, s_max));
    }
    Ok((s_min, s_max))
}

/// All singular values (unordered) by one-sided Jacobi.
pub fn singular_values(matrix: &[Vec<Complex64>]) -> Result<Vec<f64>, BoundsError> {
    let rows = matrix.len();
    if rows == 0 || matrix[0].is_empty() {
        return Err(BoundsError::EmptyMatrix);
    }
    let cols = matrix[0].len();
    // column-major working copy
    let mut a: Vec<Vec<Complex64>> = (0..cols)
        .map(|c| (0..rows).map(|r| matrix[r][c]).collect())
        .collect();
    let tol = 1e-14;
    let max_sweeps = 64;
    for _ in 0..max_sweeps {
        let mut rotated = false;
        for p in 0..cols {
            for q in p + 1..cols {
                let (mut app, mut aqq) = (0.0f64, 0.0f64);
                let mut apq = Complex64::new(0.0, 0.0);
                for r in 0..rows {
                    app += a[p][r].norm_sqr();
                    aqq += a[q][r].norm_sqr();
                    apq += a[p][r].conj() * a[q][r];
                }
                let off = apq.norm();
                if off <= tol * (app * aqq).sqrt() || off == 0.0 {
                    continue;
                }
                rotated = true;
                let phase = apq / off; // e^{i phi}
                let zeta = (aqq - app) / (2.0 * off);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                for r in 0..rows {
                    let vp = a[p][r];
                    let vq = a[q][r];
                    a[p][r] = vp * c - vq * phase.conj() * s;
                    a[q][r] = vp * phase * s + vq * c;
                }
            }
        }
        if !rotated {
            break;
        }
    }
    Ok(a.iter()
        .map(|col| col.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt())
        .collect())
}

/// Node-separation quantity: the minimum over node pairs of
/// `(1/pi) arcsin(|z_l - z_m| / 2)`, in `(0, 1/2]`.
pub fn delta_omega(frequencies: &[f64], tau: f64) -> Result<f64, BoundsError> {
    if frequencies.len() < 2 {
        return Err(BoundsError::TooFewFrequencies(2));
    }
    let nodes = check_nodes(frequencies, tau)?;
    let mut delta = f64::INFINITY;
    for (m, &zm) in nodes.iter().enumerate() {
        for &zl in nodes.iter().take(m) {
            let chord = (zm - zl).norm().min(2.0);
            delta = delta.min((chord / 2.0).asin() / std::f64::consts::PI);
        }
    }
    Ok(delta)
}

/// Certified lower bound `sqrt(d + 3/2 - 1/delta)` for sigma_min, valid when
/// `d > 1/delta - 3/2`.
pub fn sigma_min_floor(d: usize, delta_omega: f64) -> Result<f64, BoundsError> {
    let need = 1.0 / delta_omega - 1.5;
    if (d as f64) <= need {
        return Err(BoundsError::DTooSmall(need));
    }
    Ok((d as f64 + 1.5 - 1.0 / delta_omega).sqrt())
}

/// Bottleneck-distance bound `2 sqrt(d+1) * tail` between the diagrams of a
/// signal and its truncated series.
pub fn approximation_bound(d: usize, tail: f64) -> f64 {
    assert!(tail >= 0.0);
    2.0 * ((d + 1) as f64).sqrt() * tail
}

/// The Hausdorff form of the approximation bound, `sqrt(d+1) * tail`.
pub fn approximation_bound_hausdorff(d: usize, tail: f64) -> f64 {
    assert!(tail >= 0.0);
    ((d + 1) as f64).sqrt() * tail
}

/// Node list and conditioning summary of the factorization matrix.
#[derive(Debug, Clone)]
pub struct VandermondeReport {
    pub nodes: Vec<Complex64>,
    pub d: usize,
    pub sigma_min: f64,
    pub sigma_max: f64,
    pub condition_number: f64,
    pub delta_omega: f64,
}

pub fn vandermonde_report(
    frequencies: &[f64],
    tau: f64,
    d: usize,
) -> Result<VandermondeReport, BoundsError> {
    let matrix = vandermonde(frequencies, tau, d)?;
    let (sigma_min, sigma_max) = sigma_extremes(&matrix)?;
    let delta = if frequencies.len() >= 2 { delta_omega(frequencies, tau)? } else { 0.5 };
    Ok(VandermondeReport {
        nodes: check_nodes(frequencies, tau)?,
        d,
        sigma_min,
        sigma_max,
        condition_number: sigma_max / sigma_min,
        delta_omega: delta,
    })
}

/// How repeated coefficient magnitudes enter the guaranteed feature counts.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CountingMode {
    /// Each run of equal magnitudes is counted once (reproduces the torus
    /// Betti numbers).
    DistinctRuns,
    /// The literal sum `mu_j(1) + ... + mu_j(n)`, which double-counts
    /// repeated magnitudes.
    Literal,
}

/// A persistence lower bound at level `n` together with the guaranteed
/// number of features per homological dimension.
#[derive(Debug, Clone, serde::Serialize)]
pub struct BoundReport {
    pub level_n: usize,
    pub magnitude: f64,
    pub sigma_min: f64,
    pub tail: f64,
    pub hausdorff: f64,
    pub bound_value: f64,
    pub guaranteed_count_per_dim: BTreeMap<usize, u64>,
}

/// `bound_value = sqrt(3) |c_n| sigma_min - 4 sqrt(d+1) tail - 4 hausdorff`,
/// with at least `guaranteed_count_per_dim[j]` features of that persistence
/// in dimension j.
pub fn lower_bound(
    magnitudes: &[f64],
    n: usize,
    sigma_min: f64,
    d: usize,
    tail: f64,
    hausdorff: f64,
    counting: CountingMode,
) -> Result<BoundReport, BoundsError> {
    let big_n = magnitudes.len();
    if n < 1 || n > big_n {
        return Err(BoundsError::LevelOutOfRange(n, big_n));
    }
    if magnitudes.iter().any(|&m| !(m > 0.0)) || magnitudes.windows(2).any(|w| w[0] < w[1]) {
        return Err(BoundsError::BadMagnitudes);
    }
    assert!(tail >= 0.0 && hausdorff >= 0.0);
    let magnitude = magnitudes[n - 1];
    let bound_value = 3.0f64.sqrt() * magnitude * sigma_min
        - 4.0 * ((d + 1) as f64).sqrt() * tail
        - 4.0 * hausdorff;
    let mut counts = BTreeMap::new();
    for j in 1..=big_n {
        let count = match counting {
            CountingMode::Literal => (1..=n).map(|m| multiplicity_mu(magnitudes, j, m)).sum(),
            CountingMode::DistinctRuns => {
                let mut sum = 0u64;
                let mut m = 1usize;
                while m <= n {
                    // run of equal magnitudes starting at m
                    let mut end = m;
                    while end < big_n && magnitudes[end] == magnitudes[m - 1] {
                        end += 1;
                    }
                    sum += multiplicity_mu(magnitudes, j, m);
                    m = end + 1;
                }
                sum
            }
        };
        counts.insert(j, count);
    }
    Ok(BoundReport {
        level_n: n,
        magnitude,
        sigma_min,
        tail,
        hausdorff,
        bound_value,
        guaranteed_count_per_dim: counts,
    })
}
