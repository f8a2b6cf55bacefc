//! Sliding-window point clouds, maxmin landmarking, distance matrices and
//! Hausdorff distances.
//!
//! A window at time `t` with parameters `(d, tau)` is the vector
//! `(f(t), f(t+tau), ..., f(t+d*tau))`. Complex windows are flattened to
//! interleaved `(re, im)` coordinates so the Euclidean norm of the flattened
//! vector equals the Hermitian norm of the complex window; real signals
//! embed directly in `d+1` coordinates.

use crate::model::{CubicSpline, ModelError, Signal, SpectralModel};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum EmbeddingError {
    #[error("window exceeds signal domain: start {start} needs {needed}, maximal feasible start time is {max_start}")]
    WindowOutOfDomain { start: f64, needed: f64, max_start: f64 },
    #[error("requested {requested} landmarks from a cloud of {available} points")]
    TooManyLandmarks { requested: usize, available: usize },
    #[error("point clouds have mismatched dimensions {0} and {1}")]
    DimensionMismatch(usize, usize),
    #[error("point cloud is empty")]
    EmptyCloud,
    #[error(transparent)]
    Model(#[from] ModelError),
}

/// Whether coordinates encode complex windows (interleaved re/im, dimension
/// `2(d+1)`) or real windows (dimension `d+1`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum AmbientKind {
    Real,
    ComplexInterleaved,
}

/// A finite set of points of equal dimension, with optional generating
/// time stamps.
#[derive(Debug, Clone, PartialEq)]
pub struct PointCloud {
    data: Vec<f64>,
    dim: usize,
    times: Option<Vec<f64>>,
    ambient: AmbientKind,
}

impl PointCloud {
    pub fn from_rows(rows: Vec<Vec<f64>>) -> Result<Self, EmbeddingError> {
        let Some(first) = rows.first() else {
            return Err(EmbeddingError::EmptyCloud);
        };
        let dim = first.len();
        let mut data = Vec::with_capacity(rows.len() * dim);
        for r in &rows {
            assert_eq!(r.len(), dim, "ragged point rows");
            data.extend_from_slice(r);
        }
        Ok(PointCloud { data, dim, times: None, ambient: AmbientKind::Real })
    }

    pub fn with_times(mut self, times: Vec<f64>) -> Self {
        assert_eq!(times.len(), self.len(), "times/points length mismatch");
        self.times = Some(times);
        self
    }

    pub fn len(&self) -> usize {
        if self.dim == 0 { 0 } else { self.data.len() / self.dim }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn ambient(&self) -> AmbientKind {
        self.ambient
    }

    pub fn times(&self) -> Option<&[f64]> {
        self.times.as_deref()
    }

    pub fn point(&self, i: usize) -> &[f64] {
        &self.data[i * self.dim..(i + 1) * self.dim]
    }

    pub fn iter_points(&self) -> impl Iterator<Item = &[f64]> {
        self.data.chunks_exact(self.dim.max(1))
    }

    /// The sub-cloud at the given indices (times carried along).
    pub fn select(&self, indices: &[usize]) -> PointCloud {
        let mut data = Vec::with_capacity(indices.len() * self.dim);
        for &i in indices {
            data.extend_from_slice(self.point(i));
        }
        let times = self
            .times
            .as_ref()
            .map(|ts| indices.iter().map(|&i| ts[i]).collect());
        PointCloud { data, dim: self.dim, times, ambient: self.ambient }
    }
}

/// Embedding parameters: the window has `d+1` samples spaced `tau` apart.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct EmbeddingParams {
    pub d: usize,
    pub tau: f64,
}

impl EmbeddingParams {
    pub fn new(d: usize, tau: f64) -> Self {
        assert!(d >= 1, "embedding dimension parameter d must be >= 1");
        assert!(tau > 0.0, "delay tau must be positive");
        EmbeddingParams { d, tau }
    }

    /// Total time span `d * tau` covered by one window.
    pub fn span(&self) -> f64 {
        self.d as f64 * self.tau
    }
}

/// Where window values come from: spline-interpolated samples or exact
/// model evaluation.
pub enum WindowSource<'a> {
    Sampled(&'a Signal),
    Model(&'a SpectralModel),
}

impl<'a> WindowSource<'a> {
    fn is_real(&self) -> bool {
        match self {
            WindowSource::Sampled(s) => s.is_real(),
            WindowSource::Model(m) => model_is_real(m),
        }
    }
}

/// True when the model's terms pair up as `(nu, c)` / `(-nu, conj c)`,
/// making its values real.
fn model_is_real(model: &SpectralModel) -> bool {
    model.terms().iter().all(|t| {
        if t.frequency == 0.0 {
            return t.coefficient.im.abs() <= 1e-12 * t.coefficient.norm();
        }
        model.terms().iter().any(|u| {
            u.frequency == -t.frequency
                && (u.coefficient - t.coefficient.conj()).norm() <= 1e-12 * t.coefficient.norm()
        })
    })
}

/// Sliding-window embedding of `source` at the given window start times.
///
/// Signal-backed windows are evaluated with a natural cubic spline; every
/// `t + j*tau` must lie inside the sampled domain. Model-backed windows are
/// evaluated exactly at any time.
pub fn sliding_window(
    source: &WindowSource,
    params: EmbeddingParams,
    times: &[f64],
) -> Result<PointCloud, EmbeddingError> {
    let real = source.is_real();
    let d = params.d;
    let dim = if real { d + 1 } else { 2 * (d + 1) };
    let mut data = Vec::with_capacity(times.len() * dim);
    let push = |data: &mut Vec<f64>, v: Complex64| {
        data.push(v.re);
        if !real {
            data.push(v.im);
        }
    };
    match source {
        WindowSource::Sampled(signal) => {
            let spline = CubicSpline::fit(signal)?;
            let (t0, t_end) = spline.domain();
            let max_start = t_end - params.span();
            for &t in times {
                if t < t0 - 1e-9 || t + params.span() > t_end + 1e-9 {
                    return Err(EmbeddingError::WindowOutOfDomain {
                        start: t,
                        needed: params.span(),
                        max_start,
                    });
                }
                for j in 0..=d {
                    let v = spline.eval((t + j as f64 * params.tau).min(t_end))?;
                    push(&mut data, v);
                }
            }
        }
        WindowSource::Model(m) => {
            for &t in times {
                for j in 0..=d {
                    push(&mut data, m.eval(t + j as f64 * params.tau));
                }
            }
        }
    }
    Ok(PointCloud {
        data,
        dim,
        times: Some(times.to_vec()),
        ambient: if real { AmbientKind::Real } else { AmbientKind::ComplexInterleaved },
    })
}

/// The sample times of `signal` at which a full window still fits.
pub fn feasible_start_times(signal: &Signal, params: EmbeddingParams) -> Vec<f64> {
    let max_start = signal.t_end() - params.span();
    (0..signal.len())
        .map(|n| signal.time(n))
        .filter(|&t| t <= max_start + 1e-9)
        .collect()
}

fn euclidean(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}

fn chebyshev(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

/// Greedy farthest-point (maxmin) landmark selection.
///
/// The first index is drawn uniformly from a generator seeded with `seed`;
/// each subsequent index maximizes the minimum distance to the points
/// already selected, ties broken by lowest index. Euclidean metric.
pub fn maxmin_sample(cloud: &PointCloud, m: usize, seed: u64) -> Result<Vec<usize>, EmbeddingError> {
    let n = cloud.len();
    if m == 0 || m > n {
        return Err(EmbeddingError::TooManyLandmarks { requested: m, available: n });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let first = rng.gen_range(0..n);
    let mut selected = Vec::with_capacity(m);
    selected.push(first);
    let mut min_dist: Vec<f64> = (0..n)
        .map(|i| euclidean(cloud.point(i), cloud.point(first)))
        .collect();
    while selected.len() < m {
        let mut best = 0usize;
        let mut best_d = f64::NEG_INFINITY;
        for (i, &dm) in min_dist.iter().enumerate() {
            if dm > best_d {
                best_d = dm;
                best = i;
            }
        }
        selected.push(best);
        for i in 0..n {
            let d = euclidean(cloud.point(i), cloud.point(best));
            if d < min_dist[i] {
                min_dist[i] = d;
            }
        }
    }
    Ok(selected)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum Metric {
    Euclidean,
    Max,
}

/// A symmetric distance matrix stored as its strict lower triangle.
#[derive(Debug, Clone, PartialEq)]
pub struct DistanceMatrix {
    n: usize,
    metric: Metric,
    lower: Vec<f64>,
}

impl DistanceMatrix {
    /// Pairwise distances of the cloud under the chosen metric.
    pub fn from_cloud(cloud: &PointCloud, metric: Metric) -> Self {
        let n = cloud.len();
        let dist = |a: &[f64], b: &[f64]| match metric {
            Metric::Euclidean => euclidean(a, b),
            Metric::Max => chebyshev(a, b),
        };
        let rows: Vec<Vec<f64>> = (1..n)
            .into_par_iter()
            .map(|i| (0..i).map(|j| dist(cloud.point(i), cloud.point(j))).collect())
            .collect();
        let mut lower = Vec::with_capacity(n * (n - 1) / 2);
        for r in rows {
            lower.extend(r);
        }
        DistanceMatrix { n, metric, lower }
    }

    /// Builds from an explicit full matrix, validating symmetry and zero
    /// diagonal exactly.
    pub fn from_full(matrix: &[Vec<f64>], metric: Metric) -> Result<Self, String> {
        let n = matrix.len();
        let mut lower = Vec::with_capacity(n * (n - 1) / 2);
        for i in 0..n {
            if matrix[i].len() != n {
                return Err("matrix is not square".into());
            }
            if matrix[i][i] != 0.0 {
                return Err("nonzero diagonal".into());
            }
            for j in 0..i {
                if matrix[i][j] != matrix[j][i] {
                    return Err("matrix is not symmetric".into());
                }
                if matrix[i][j] < 0.0 {
                    return Err("negative distance".into());
                }
                lower.push(matrix[i][j]);
            }
        }
        Ok(DistanceMatrix { n, metric, lower })
    }

    pub fn from_lower(n: usize, lower: Vec<f64>, metric: Metric) -> Result<Self, String> {
        if lower.len() != n * (n - 1) / 2 {
            return Err(format!(
                "lower triangle of {} entries does not match n = {}",
                lower.len(),
                n
            ));
        }
        if lower.iter().any(|&d| d < 0.0 || !d.is_finite()) {
            return Err("negative or non-finite distance".into());
        }
        Ok(DistanceMatrix { n, metric, lower })
    }

    /// Max-metric product: `d((i,j),(i',j')) = max(a(i,i'), b(j,j'))`.
    /// Point `(i, j)` of the product has index `i * b.len() + j`.
    pub fn product_max(a: &DistanceMatrix, b: &DistanceMatrix) -> DistanceMatrix {
        let n = a.len() * b.len();
        let nb = b.len();
        let mut lower = Vec::with_capacity(n * (n - 1) / 2);
        for p in 1..n {
            let (i1, j1) = (p / nb, p % nb);
            for q in 0..p {
                let (i2, j2) = (q / nb, q % nb);
                lower.push(f64::max(a.get(i1, i2), b.get(j1, j2)));
            }
        }
        DistanceMatrix { n, metric: Metric::Max, lower }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn metric(&self) -> Metric {
        self.metric
    }

    pub fn lower_triangle(&self) -> &[f64] {
        &self.lower
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        use std::cmp::Ordering::*;
        match i.cmp(&j) {
            Equal => 0.0,
            Greater => self.lower[i * (i - 1) / 2 + j],
            Less => self.lower[j * (j - 1) / 2 + i],
        }
    }

    /// `min_i max_j d(i, j)`: the scale past which the complex is a cone.
    pub fn enclosing_radius(&self) -> f64 {
        if self.n <= 1 {
            return 0.0;
        }
        (0..self.n)
            .map(|i| {
                (0..self.n)
                    .filter(|&j| j != i)
                    .map(|j| self.get(i, j))
                    .fold(0.0f64, f64::max)
            })
            .fold(f64::INFINITY, f64::min)
    }

    pub fn max_distance(&self) -> f64 {
        self.lower.iter().copied().fold(0.0, f64::max)
    }
}

/// Hausdorff distance between two clouds of equal dimension (Euclidean).
pub fn hausdorff_distance(a: &PointCloud, b: &PointCloud) -> Result<f64, EmbeddingError> {
    if a.is_empty() || b.is_empty() {
        return Err(EmbeddingError::EmptyCloud);
    }
    if a.dim() != b.dim() {
        return Err(EmbeddingError::DimensionMismatch(a.dim(), b.dim()));
    }
    let directed = |x: &PointCloud, y: &PointCloud| -> f64 {
        (0..x.len())
            .into_par_iter()
            .map(|i| {
                let p = x.point(i);
                (0..y.len())
                    .map(|j| euclidean(p, y.point(j)))
                    .fold(f64::INFINITY, f64::min)
            })
            .reduce(|| 0.0, f64::max)
    };
    Ok(f64::max(directed(a, b), directed(b, a)))
}
