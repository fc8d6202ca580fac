//! Shared helpers for unit tests. The pseudo-random matrices here use a
//! self-contained xorshift stream so test inputs stay independent of the
//! crate's own channel generators.

use crate::matrix::{CMatrix, C64};

pub fn sigma_x() -> CMatrix {
    CMatrix::from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]])
}

pub fn sigma_y() -> CMatrix {
    CMatrix::new(
        2,
        2,
        vec![
            C64::new(0.0, 0.0),
            C64::new(0.0, -1.0),
            C64::new(0.0, 1.0),
            C64::new(0.0, 0.0),
        ],
    )
    .unwrap()
}

pub fn sigma_z() -> CMatrix {
    CMatrix::from_real_rows(&[&[1.0, 0.0], &[0.0, -1.0]])
}

pub fn hadamard() -> CMatrix {
    let s = 1.0 / 2.0_f64.sqrt();
    CMatrix::from_real_rows(&[&[s, s], &[s, -s]])
}

/// Deterministic pseudo-random complex matrix with entries in the unit box.
pub fn test_matrix(rows: usize, cols: usize, seed: u64) -> CMatrix {
    let mut state = seed.wrapping_add(0x9E37_79B9_7F4A_7C15);
    let mut next = move || {
        state ^= state << 13;
        state ^= state >> 7;
        state ^= state << 17;
        (state >> 11) as f64 / (1u64 << 53) as f64 - 0.5
    };
    CMatrix::from_fn(rows, cols, |_, _| C64::new(next(), next()))
}

pub fn test_hermitian(n: usize, seed: u64) -> CMatrix {
    let g = test_matrix(n, n, seed);
    g.add(&g.adjoint()).scale_re(0.5)
}

/// Random density matrix (PSD, unit trace) from a Gaussian-like square root.
pub fn test_density(n: usize, seed: u64) -> CMatrix {
    let g = test_matrix(n, n, seed);
    let rho = g.mul(&g.adjoint());
    let tr = rho.trace().re;
    rho.scale_re(1.0 / tr)
}
