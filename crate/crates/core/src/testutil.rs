//! Shared fixtures for unit tests.

use crate::model::{FourierTerm, SpectralModel};
use num_complex::Complex64;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// The model for `2 sin t + 1.8 sin(sqrt(3) t)` with conjugate-symmetric terms.
pub(crate) fn two_sine_model() -> SpectralModel {
    let r3 = 3.0f64.sqrt();
    SpectralModel::new(
        vec![
            FourierTerm::with_lattice(vec![1, 0], 1.0, c(0.0, -1.0)),
            FourierTerm::with_lattice(vec![-1, 0], -1.0, c(0.0, 1.0)),
            FourierTerm::with_lattice(vec![0, 1], r3, c(0.0, -0.9)),
            FourierTerm::with_lattice(vec![0, -1], -r3, c(0.0, 0.9)),
        ],
        Some(vec![1.0, r3]),
    )
    .unwrap()
}

/// The model for `e^{it} + e^{i sqrt(2) t} + e^{i sqrt(3) t}`.
pub(crate) fn three_exp_model() -> SpectralModel {
    SpectralModel::new(
        vec![
            FourierTerm::with_lattice(vec![1, 0, 0], 1.0, c(1.0, 0.0)),
            FourierTerm::with_lattice(vec![0, 1, 0], 2.0f64.sqrt(), c(1.0, 0.0)),
            FourierTerm::with_lattice(vec![0, 0, 1], 3.0f64.sqrt(), c(1.0, 0.0)),
        ],
        Some(vec![1.0, 2.0f64.sqrt(), 3.0f64.sqrt()]),
    )
    .unwrap()
}
