//! Thin deterministic wrappers over dense complex linear algebra.
//!
//! Eigendecomposition is delegated to nalgebra; this module pins down the
//! conventions the rest of the crate relies on: ascending eigenvalue order,
//! a deterministic phase for each eigenvector, and an explicit Hermiticity
//! check before factorizing. Matrices are row-major `Vec<Complex64>` slices,
//! the same layout `DensityMatrix` and materialized observables use.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Maximum |A - A†| entry for a matrix to pass as Hermitian.
pub const HERMITICITY_TOL: f64 = 1e-9;

/// Largest |A - A†| entry of a square row-major matrix.
pub fn hermiticity_deviation(dim: usize, data: &[Complex64]) -> f64 {
    let mut worst = 0.0f64;
    for r in 0..dim {
        for c in r..dim {
            let d = (data[r * dim + c] - data[c * dim + r].conj()).norm();
            worst = worst.max(d);
        }
    }
    worst
}

/// Eigendecomposition of a Hermitian matrix, deterministic across runs.
///
/// Returns eigenvalues in ascending order and matching orthonormal
/// eigenvectors. Each vector's phase is fixed by making its largest-modulus
/// component real and positive (ties broken by lowest index), so repeated
/// runs and reordered inputs produce identical output.
pub fn hermitian_eigen(dim: usize, data: &[Complex64]) -> Result<(Vec<f64>, Vec<Vec<Complex64>>)> {
    assert_eq!(data.len(), dim * dim, "matrix data length must be dim^2");
    let deviation = hermiticity_deviation(dim, data);
    if deviation > HERMITICITY_TOL {
        return Err(Error::NonHermitian { deviation });
    }

    // nalgebra is column-major; from_fn(r, c) indexes our row-major slice.
    let m = DMatrix::from_fn(dim, dim, |r, c| data[r * dim + c]);
    let eig = m.symmetric_eigen();

    let mut order: Vec<usize> = (0..dim).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));

    let mut values = Vec::with_capacity(dim);
    let mut vectors = Vec::with_capacity(dim);
    for &k in &order {
        values.push(eig.eigenvalues[k]);
        let col = eig.eigenvectors.column(k);
        let mut v: Vec<Complex64> = col.iter().copied().collect();
        // Deterministic phase: rotate the largest-|.| component to the
        // positive real axis.
        let mut pivot = 0;
        let mut best = 0.0f64;
        for (i, z) in v.iter().enumerate() {
            if z.norm() > best + 1e-15 {
                best = z.norm();
                pivot = i;
            }
        }
        if best > 0.0 {
            let phase = v[pivot] / best;
            for z in v.iter_mut() {
                *z /= phase;
            }
        }
        vectors.push(v);
    }
    Ok((values, vectors))
}

/// Eigenvalues only, ascending. Same Hermiticity gate as [`hermitian_eigen`].
pub fn hermitian_eigenvalues(dim: usize, data: &[Complex64]) -> Result<Vec<f64>> {
    Ok(hermitian_eigen(dim, data)?.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn two_by_two_with_complex_off_diagonal() {
        // [[1, i], [-i, 1]] has eigenvalues 0 and 2.
        let a = vec![c(1.0, 0.0), c(0.0, 1.0), c(0.0, -1.0), c(1.0, 0.0)];
        let (vals, vecs) = hermitian_eigen(2, &a).unwrap();
        assert_abs_diff_eq!(vals[0], 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(vals[1], 2.0, epsilon = 1e-12);
        // Residual ‖Av - λv‖ for each pair.
        for (lam, v) in vals.iter().zip(&vecs) {
            for r in 0..2 {
                let av = a[r * 2] * v[0] + a[r * 2 + 1] * v[1];
                assert_abs_diff_eq!((av - lam * v[r]).norm(), 0.0, epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn phase_is_deterministic() {
        let a = vec![c(1.0, 0.0), c(0.0, 1.0), c(0.0, -1.0), c(1.0, 0.0)];
        let (_, v1) = hermitian_eigen(2, &a).unwrap();
        let (_, v2) = hermitian_eigen(2, &a).unwrap();
        for (x, y) in v1.iter().flatten().zip(v2.iter().flatten()) {
            assert_eq!(x, y);
        }
        // Pivot (first component of maximal modulus) is real and positive.
        for v in &v1 {
            let best = v.iter().map(|z| z.norm()).fold(0.0f64, f64::max);
            let pivot = v.iter().find(|z| z.norm() > best - 1e-12).unwrap();
            assert!(pivot.im.abs() < 1e-12 && pivot.re > 0.0);
        }
    }

    #[test]
    fn rejects_non_hermitian() {
        let a = vec![c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)];
        match hermitian_eigen(2, &a) {
            Err(Error::NonHermitian { deviation }) => assert!(deviation > 0.9),
            other => panic!("expected NonHermitian, got {other:?}"),
        }
    }

    #[test]
    fn diagonal_matrix_sorted_ascending() {
        let mut a = vec![c(0.0, 0.0); 16];
        let diag = [0.3, -0.5, 0.9, -0.1];
        for (i, d) in diag.iter().enumerate() {
            a[i * 4 + i] = c(*d, 0.0);
        }
        let vals = hermitian_eigenvalues(4, &a).unwrap();
        let mut expect = diag.to_vec();
        expect.sort_by(f64::total_cmp);
        for (v, e) in vals.iter().zip(&expect) {
            assert_abs_diff_eq!(v, e, epsilon = 1e-12);
        }
    }
}
