//! Independent reference implementations used as oracles: a naive
//! full-boundary-matrix reduction, an exhaustive bottleneck matching, a
//! Gram-matrix eigenvalue route to singular values, and random metric-space
//! generators. These deliberately share no code with the library paths they
//! check.

#![allow(dead_code)]

use num_complex::Complex64;
use quasiper::embedding::{DistanceMatrix, Metric};
use quasiper::persistence::{IntervalConvention, PersistenceDiagram};
use rand::Rng;

/// Full boundary-matrix Z2 reduction over all simplices with diameter below
/// the threshold. Quadratic/cubic everything; only for tiny inputs.
pub fn naive_rips(
    dist: &DistanceMatrix,
    max_dim: usize,
    threshold: Option<f64>,
) -> Vec<PersistenceDiagram> {
    let n = dist.len();
    let threshold = threshold.unwrap_or_else(|| dist.enclosing_radius());

    // all simplices up to dimension max_dim + 1, as sorted vertex lists
    #[derive(Clone, Debug)]
    struct Simplex {
        verts: Vec<usize>, // ascending
        diam: f64,
    }
    let mut simplices: Vec<Simplex> = Vec::new();
    let mut stack: Vec<(Vec<usize>, f64)> = (0..n).map(|v| (vec![v], 0.0)).collect();
    while let Some((verts, diam)) = stack.pop() {
        if diam <= threshold {
            if verts.len() < max_dim + 2 {
                for next in (verts[verts.len() - 1] + 1)..n {
                    let mut d = diam;
                    for &w in &verts {
                        d = d.max(dist.get(w, next));
                    }
                    let mut nv = verts.clone();
                    nv.push(next);
                    stack.push((nv, d));
                }
            }
            simplices.push(Simplex { verts, diam });
        }
    }
    // filtration order: diameter, then dimension, then ascending lex order
    // (a different tie-break than the engine on purpose)
    simplices.sort_by(|a, b| {
        a.diam
            .total_cmp(&b.diam)
            .then(a.verts.len().cmp(&b.verts.len()))
            .then(a.verts.cmp(&b.verts))
    });
    let index_of: std::collections::HashMap<Vec<usize>, usize> = simplices
        .iter()
        .enumerate()
        .map(|(i, s)| (s.verts.clone(), i))
        .collect();

    // boundary columns as sorted row-index sets
    let m = simplices.len();
    let mut columns: Vec<Vec<usize>> = Vec::with_capacity(m);
    for s in &simplices {
        let mut col = Vec::new();
        if s.verts.len() > 1 {
            for omit in 0..s.verts.len() {
                let mut face = s.verts.clone();
                face.remove(omit);
                col.push(index_of[&face]);
            }
            col.sort_unstable();
        }
        columns.push(col);
    }

    // standard left-to-right reduction
    let mut low_owner: Vec<Option<usize>> = vec![None; m];
    let mut pairs: Vec<(usize, usize)> = Vec::new();
    for j in 0..m {
        loop {
            let Some(&low) = columns[j].last() else { break };
            match low_owner[low] {
                None => {
                    low_owner[low] = Some(j);
                    pairs.push((low, j));
                    break;
                }
                Some(owner) => {
                    let other = columns[owner].clone();
                    columns[j] = sym_diff(&columns[j], &other);
                }
            }
        }
    }

    let mut paired = vec![false; m];
    let mut bars: Vec<Vec<(f64, f64)>> = vec![Vec::new(); max_dim + 1];
    for &(i, j) in &pairs {
        paired[i] = true;
        paired[j] = true;
        let dim = simplices[i].verts.len() - 1;
        let (b, d) = (simplices[i].diam, simplices[j].diam);
        if dim <= max_dim && b < d {
            bars[dim].push((b, d));
        }
    }
    for (i, s) in simplices.iter().enumerate() {
        let dim = s.verts.len() - 1;
        if !paired[i] && dim <= max_dim {
            bars[dim].push((s.diam, f64::INFINITY));
        }
    }
    bars.into_iter()
        .enumerate()
        .map(|(dim, pairs)| {
            PersistenceDiagram::new(dim, IntervalConvention::HalfOpen, pairs).unwrap()
        })
        .collect()
}

fn sym_diff(a: &[usize], b: &[usize]) -> Vec<usize> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        match (a.get(i), b.get(j)) {
            (Some(&x), Some(&y)) if x == y => {
                i += 1;
                j += 1;
            }
            (Some(&x), Some(&y)) if x < y => {
                out.push(x);
                i += 1;
            }
            (Some(_), Some(&y)) => {
                out.push(y);
                j += 1;
            }
            (Some(&x), None) => {
                out.push(x);
                i += 1;
            }
            (None, Some(&y)) => {
                out.push(y);
                j += 1;
            }
            (None, None) => unreachable!(),
        }
    }
    out
}

/// Exhaustive bottleneck distance over all partial matchings of two finite
/// diagrams (no infinite deaths).
pub fn brute_bottleneck(p1: &[(f64, f64)], p2: &[(f64, f64)]) -> f64 {
    fn recurse(p1: &[(f64, f64)], p2: &[(f64, f64)], i: usize, used: &mut Vec<bool>, cur: f64, best: &mut f64) {
        if cur >= *best {
            return; // prune
        }
        if i == p1.len() {
            let mut total = cur;
            for (j, &u) in used.iter().enumerate() {
                if !u {
                    total = total.max((p2[j].1 - p2[j].0) / 2.0);
                }
            }
            *best = (*best).min(total);
            return;
        }
        let a = p1[i];
        // to the diagonal
        recurse(p1, p2, i + 1, used, cur.max((a.1 - a.0) / 2.0), best);
        // to each unused point of p2
        for j in 0..p2.len() {
            if !used[j] {
                let cost = (a.0 - p2[j].0).abs().max((a.1 - p2[j].1).abs());
                used[j] = true;
                recurse(p1, p2, i + 1, used, cur.max(cost), best);
                used[j] = false;
            }
        }
    }
    let mut best = f64::INFINITY;
    let mut used = vec![false; p2.len()];
    recurse(p1, p2, 0, &mut used, 0.0, &mut best);
    best
}

/// Singular values as square roots of the Gram-matrix eigenvalues, located
/// by sign-change bisection on the characteristic polynomial. Only for a
/// handful of columns.
pub fn gram_sigma_oracle(matrix: &[Vec<Complex64>]) -> Vec<f64> {
    let rows = matrix.len();
    let cols = matrix[0].len();
    assert!(cols <= 6, "oracle meant for small column counts");
    let mut gram = vec![vec![Complex64::new(0.0, 0.0); cols]; cols];
    for p in 0..cols {
        for q in 0..cols {
            let mut acc = Complex64::new(0.0, 0.0);
            for r in 0..rows {
                acc += matrix[r][p].conj() * matrix[r][q];
            }
            gram[p][q] = acc;
        }
    }
    let trace: f64 = (0..cols).map(|i| gram[i][i].re).sum();
    let char_poly = |lambda: f64| -> f64 {
        // det(G - lambda I) via complex LU with partial pivoting
        let mut a = gram.clone();
        for (i, row) in a.iter_mut().enumerate() {
            row[i] -= lambda;
        }
        let mut det = Complex64::new(1.0, 0.0);
        for k in 0..cols {
            let (mut pivot_row, mut pivot_mag) = (k, a[k][k].norm());
            for r in k + 1..cols {
                if a[r][k].norm() > pivot_mag {
                    pivot_mag = a[r][k].norm();
                    pivot_row = r;
                }
            }
            if pivot_mag == 0.0 {
                return 0.0;
            }
            if pivot_row != k {
                a.swap(k, pivot_row);
                det = -det;
            }
            det *= a[k][k];
            for r in k + 1..cols {
                let f = a[r][k] / a[k][k];
                for c in k..cols {
                    let sub = f * a[k][c];
                    a[r][c] -= sub;
                }
            }
        }
        det.re
    };
    // scan for sign changes over [-eps, trace + eps]
    let lo = -1e-9 * trace.max(1.0);
    let hi = trace * (1.0 + 1e-9) + 1e-12;
    let grid = 20_000;
    let mut roots = Vec::new();
    let mut prev_x = lo;
    let mut prev_v = char_poly(lo);
    for g in 1..=grid {
        let x = lo + (hi - lo) * g as f64 / grid as f64;
        let v = char_poly(x);
        if prev_v == 0.0 {
            roots.push(prev_x);
        } else if v != 0.0 && prev_v.signum() != v.signum() {
            let (mut a, mut b) = (prev_x, x);
            let mut fa = prev_v;
            for _ in 0..200 {
                let mid = 0.5 * (a + b);
                let fm = char_poly(mid);
                if fm == 0.0 {
                    a = mid;
                    b = mid;
                    break;
                }
                if fa.signum() == fm.signum() {
                    a = mid;
                    fa = fm;
                } else {
                    b = mid;
                }
            }
            roots.push(0.5 * (a + b));
        }
        prev_x = x;
        prev_v = v;
    }
    assert_eq!(
        roots.len(),
        cols,
        "oracle found {} eigenvalues for {} columns",
        roots.len(),
        cols
    );
    roots.iter().map(|&l| l.max(0.0).sqrt()).collect()
}

/// Random points in a low-dimensional cube with the Euclidean metric.
pub fn random_euclidean_metric<R: Rng>(rng: &mut R, n: usize) -> DistanceMatrix {
    let dim = rng.gen_range(2..=4);
    let rows: Vec<Vec<f64>> = (0..n)
        .map(|_| (0..dim).map(|_| rng.gen_range(-1.0..1.0)).collect())
        .collect();
    let cloud = quasiper::embedding::PointCloud::from_rows(rows).unwrap();
    DistanceMatrix::from_cloud(&cloud, Metric::Euclidean)
}

/// Shortest-path metric of a random connected graph with small integer
/// weights: integer distances, plenty of ties.
pub fn random_graph_metric<R: Rng>(rng: &mut R, n: usize) -> DistanceMatrix {
    let big = 1e18;
    let mut w = vec![vec![big; n]; n];
    for (i, row) in w.iter_mut().enumerate() {
        row[i] = 0.0;
    }
    // random spanning tree
    for v in 1..n {
        let u = rng.gen_range(0..v);
        let weight = rng.gen_range(1..=4) as f64;
        w[u][v] = weight;
        w[v][u] = weight;
    }
    // extra edges
    for _ in 0..n {
        let u = rng.gen_range(0..n);
        let v = rng.gen_range(0..n);
        if u != v {
            let weight = rng.gen_range(1..=4) as f64;
            if weight < w[u][v] {
                w[u][v] = weight;
                w[v][u] = weight;
            }
        }
    }
    // Floyd-Warshall
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                let via = w[i][k] + w[k][j];
                if via < w[i][j] {
                    w[i][j] = via;
                }
            }
        }
    }
    DistanceMatrix::from_full(&w, Metric::Euclidean).unwrap()
}

/// Random complex matrix with entries in the unit square.
pub fn random_complex_matrix<R: Rng>(rng: &mut R, rows: usize, cols: usize) -> Vec<Vec<Complex64>> {
    (0..rows)
        .map(|_| {
            (0..cols)
                .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
                .collect()
        })
        .collect()
}
