//! Analytic barcodes: the Rips barcode of a round circle, the Künneth rule
//! for products under the maximum metric, and the resulting torus diagram
//! with its binomial multiplicities.

use super::{IntervalConvention, PersistenceDiagram, PersistenceError};
use std::f64::consts::PI;

/// Rips persistence of a circle of the given radius, dimensions
/// `0..=max_dimension`, with left-open bars:
/// dimension 0 is `{(0, inf)}`, dimension `2l+1` is the singleton
/// `(2r sin(pi l/(2l+1)), 2r sin(pi (l+1)/(2l+3))]`, and positive even
/// dimensions are empty.
pub fn circle_barcode(radius: f64, max_dimension: usize) -> Vec<PersistenceDiagram> {
    assert!(radius > 0.0, "radius must be positive");
    (0..=max_dimension)
        .map(|j| {
            let pairs = if j == 0 {
                vec![(0.0, f64::INFINITY)]
            } else if j % 2 == 1 {
                let l = (j - 1) / 2;
                vec![(circle_scale(radius, l), circle_scale(radius, l + 1))]
            } else {
                Vec::new()
            };
            PersistenceDiagram::new(j, IntervalConvention::LeftOpen, pairs)
                .expect("circle bars are valid")
        })
        .collect()
}

/// `2 r sin(pi l / (2l + 1))`: the scale at which the Rips complex of the
/// circle stops being homotopy equivalent to S^{2l-1}.
fn circle_scale(radius: f64, l: usize) -> f64 {
    2.0 * radius * (PI * l as f64 / (2 * l + 1) as f64).sin()
}

/// Künneth combination in dimension `j` of factor diagram families under the
/// maximum metric: every composition `j_1 + ... + j_N = j` and every choice
/// of one pair per factor contributes `(max births, min deaths)`, with
/// degenerate pairs (birth >= death) discarded.
///
/// `factors[f]` holds factor `f`'s diagrams indexed by dimension; missing
/// dimensions are treated as empty.
pub fn kunneth_combine(
    factors: &[Vec<PersistenceDiagram>],
    j: usize,
) -> Result<PersistenceDiagram, PersistenceError> {
    let mut convention = None;
    for f in factors {
        for d in f {
            match convention {
                None => convention = Some(d.convention()),
                Some(c) if c != d.convention() => {
                    return Err(PersistenceError::ConventionMismatch)
                }
                _ => {}
            }
        }
    }
    let convention = convention.unwrap_or(IntervalConvention::LeftOpen);
    let mut pairs = Vec::new();
    if !factors.is_empty() {
        combine_rec(factors, 0, j, (0.0, f64::INFINITY), &mut pairs);
    }
    PersistenceDiagram::new(j, convention, pairs)
}

fn combine_rec(
    factors: &[Vec<PersistenceDiagram>],
    f: usize,
    remaining: usize,
    acc: (f64, f64),
    out: &mut Vec<(f64, f64)>,
) {
    if f == factors.len() {
        if remaining == 0 && acc.0 < acc.1 {
            out.push(acc);
        }
        return;
    }
    for jf in 0..=remaining {
        let Some(dgm) = factors[f].get(jf) else { continue };
        for &(b, d) in dgm.pairs() {
            let next = (acc.0.max(b), acc.1.min(d));
            if next.0 < next.1 {
                combine_rec(factors, f + 1, remaining - jf, next, out);
            }
        }
    }
}

/// Binomial multiplicity of the torus bar `(0, sqrt(3) |c_n|)` in dimension
/// `j`: with `n_1 < ... < n_l` the maximal run of indices sharing the n-th
/// magnitude, `mu_j(n) = C(n_1 - 1, j - 1) + ... + C(n_l - 1, j - 1)`.
/// Indices are 1-based; `magnitudes` must be sorted descending.
pub fn multiplicity_mu(magnitudes: &[f64], j: usize, n: usize) -> u64 {
    assert!(n >= 1 && n <= magnitudes.len(), "n out of range");
    assert!(j >= 1, "j must be >= 1");
    let target = magnitudes[n - 1];
    (1..=magnitudes.len())
        .filter(|&i| magnitudes[i - 1] == target)
        .map(|i| binomial(i as u64 - 1, j as u64 - 1))
        .sum()
}

fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u64 = 1;
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

/// The dimension-`j` Rips diagram of the torus with circle factors of the
/// given radii (sorted descending), restricted to the regime of births below
/// `sqrt(3) * min(radius)`: all bars are `(0, sqrt(3) * radius_n]` with the
/// binomial multiplicities of [`multiplicity_mu`].
pub fn torus_diagram(
    coefficient_magnitudes: &[f64],
    j: usize,
) -> Result<PersistenceDiagram, PersistenceError> {
    let mags = coefficient_magnitudes;
    let n = mags.len();
    if n == 0 || j == 0 || j > n {
        return Err(PersistenceError::BadMagnitudes);
    }
    if mags.iter().any(|&m| !(m > 0.0)) || mags.windows(2).any(|w| w[0] < w[1]) {
        return Err(PersistenceError::BadMagnitudes);
    }
    let factors: Vec<Vec<PersistenceDiagram>> =
        mags.iter().map(|&r| circle_barcode(r, j)).collect();
    let combined = kunneth_combine(&factors, j)?;
    let cutoff = 3.0f64.sqrt() * mags[n - 1];
    let pairs: Vec<(f64, f64)> = combined
        .pairs()
        .iter()
        .copied()
        .filter(|&(b, _)| b < cutoff)
        .collect();
    PersistenceDiagram::new(j, IntervalConvention::LeftOpen, pairs)
}
