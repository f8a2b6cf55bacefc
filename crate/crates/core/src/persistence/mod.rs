//! Persistent homology: the Vietoris–Rips engine over Z2, persistence
//! diagrams, bottleneck distance, persistent Betti counting, and the
//! analytic circle/torus barcodes assembled through the Künneth formula.

mod bottleneck;
mod kunneth;
mod rips;

pub use bottleneck::bottleneck_distance;
pub use kunneth::{circle_barcode, kunneth_combine, multiplicity_mu, torus_diagram};
pub use rips::rips_persistence;

use crate::embedding::DistanceMatrix;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum PersistenceError {
    #[error("not a distance matrix: {0}")]
    NotADistanceMatrix(String),
    #[error("empty input")]
    EmptyInput,
    #[error("eps > eps_prime")]
    BadBettiInterval,
    #[error("diagrams have different dimensions {0} and {1}")]
    DimensionMismatch(usize, usize),
    #[error("diagram conventions differ")]
    ConventionMismatch,
    #[error("unsorted or nonpositive magnitudes")]
    BadMagnitudes,
    #[error("pair with birth {0} >= death {1}")]
    DegeneratePair(f64, f64),
}

/// Which endpoint a bar contains. Computed Rips bars are half-open
/// `[birth, death)`; the analytic circle/torus bars are left-open
/// `(birth, death]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum IntervalConvention {
    HalfOpen,
    LeftOpen,
}

/// A multiset of (birth, death) pairs in one homological dimension.
/// Deaths may be `f64::INFINITY`; births are finite and non-negative and
/// every pair has `birth < death`.
#[derive(Debug, Clone, PartialEq)]
pub struct PersistenceDiagram {
    dimension: usize,
    convention: IntervalConvention,
    pairs: Vec<(f64, f64)>,
}

impl PersistenceDiagram {
    pub fn new(
        dimension: usize,
        convention: IntervalConvention,
        mut pairs: Vec<(f64, f64)>,
    ) -> Result<Self, PersistenceError> {
        for &(b, d) in &pairs {
            if !(b >= 0.0) || !(b < d) {
                return Err(PersistenceError::DegeneratePair(b, d));
            }
        }
        pairs.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)));
        Ok(PersistenceDiagram { dimension, convention, pairs })
    }

    pub fn empty(dimension: usize, convention: IntervalConvention) -> Self {
        PersistenceDiagram { dimension, convention, pairs: Vec::new() }
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn convention(&self) -> IntervalConvention {
        self.convention
    }

    /// Pairs sorted by (birth, death).
    pub fn pairs(&self) -> &[(f64, f64)] {
        &self.pairs
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    /// Persistence values `death - birth`, descending.
    pub fn persistences(&self) -> Vec<f64> {
        let mut p: Vec<f64> = self.pairs.iter().map(|&(b, d)| d - b).collect();
        p.sort_by(|a, b| b.total_cmp(a));
        p
    }

    /// Persistent Betti number: bars containing the interval `[eps, eps_prime]`
    /// under this diagram's endpoint convention.
    pub fn betti_count(&self, eps: f64, eps_prime: f64) -> Result<usize, PersistenceError> {
        if eps > eps_prime {
            return Err(PersistenceError::BadBettiInterval);
        }
        let contained = |&(b, d): &(f64, f64)| match self.convention {
            IntervalConvention::HalfOpen => b <= eps && eps_prime < d,
            IntervalConvention::LeftOpen => b < eps && eps_prime <= d,
        };
        Ok(self.pairs.iter().filter(|p| contained(p)).count())
    }

    /// Exact multiset equality (same dimension, convention, and pairs).
    pub fn same_multiset(&self, other: &PersistenceDiagram) -> bool {
        self.dimension == other.dimension && self.pairs == other.pairs
    }
}

/// Input to the Rips engine: a distance matrix, the top homological
/// dimension to compute, and an optional scale cutoff (defaulting to the
/// enclosing radius, which preserves all diagrams).
#[derive(Debug, Clone)]
pub struct FiltrationInput {
    pub distances: DistanceMatrix,
    pub max_dimension: usize,
    pub threshold: Option<f64>,
}

impl FiltrationInput {
    pub fn new(distances: DistanceMatrix, max_dimension: usize) -> Self {
        FiltrationInput { distances, max_dimension, threshold: None }
    }

    pub fn with_threshold(mut self, threshold: f64) -> Self {
        self.threshold = Some(threshold);
        self
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn betti_count_conventions() {
        let half = PersistenceDiagram::new(0, IntervalConvention::HalfOpen, vec![(0.0, 1.0)]).unwrap();
        assert_eq!(half.betti_count(0.0, 0.0).unwrap(), 1);
        assert_eq!(half.betti_count(1.0, 1.0).unwrap(), 0);
        let left = PersistenceDiagram::new(
            1,
            IntervalConvention::LeftOpen,
            vec![(0.0, 3.0f64.sqrt())],
        )
        .unwrap();
        let r3 = 3.0f64.sqrt();
        assert_eq!(left.betti_count(r3, r3).unwrap(), 1);
        assert_eq!(left.betti_count(0.0, 0.0).unwrap(), 0);
        assert!(left.betti_count(1.0, 0.5).is_err());
    }

    #[test]
    fn diagram_rejects_degenerate_pairs() {
        assert!(PersistenceDiagram::new(0, IntervalConvention::HalfOpen, vec![(1.0, 1.0)]).is_err());
        assert!(PersistenceDiagram::new(0, IntervalConvention::HalfOpen, vec![(-0.5, 1.0)]).is_err());
    }

    #[test]
    fn infinite_bars_counted() {
        let d = PersistenceDiagram::new(
            0,
            IntervalConvention::HalfOpen,
            vec![(0.0, f64::INFINITY), (0.0, 2.0)],
        )
        .unwrap();
        assert_eq!(d.betti_count(0.0, 100.0).unwrap(), 1);
        assert_eq!(d.betti_count(0.0, 1.0).unwrap(), 2);
    }
}
