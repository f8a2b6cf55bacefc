//! Detection and quantification of quasiperiodicity in time-series signals.
//!
//! The pipeline: estimate the prominent spectral peaks of a signal, derive
//! the embedding dimension `d` from the peak count and the delay `tau` by
//! minimizing a column-orthogonality objective, build the sliding-window
//! point cloud, subsample it with maxmin landmarks, compute Vietoris–Rips
//! persistent homology over Z2, and compare the outcome against analytic
//! torus barcodes and singular-value lower bounds on persistence.

pub mod bounds;
pub mod embedding;
pub mod io;
pub mod model;
pub mod params;
pub mod persistence;
pub mod spectral;

#[cfg(test)]
pub(crate) mod testutil;

pub use num_complex::Complex64;
