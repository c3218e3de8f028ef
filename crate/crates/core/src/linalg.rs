//! Small dense complex matrix helpers on top of nalgebra.

use alloc::vec::Vec;

pub use nalgebra::Complex;
use nalgebra::{DMatrix, DVector};

pub type C64 = Complex<f64>;
pub type CMatrix = DMatrix<C64>;
pub type CVector = DVector<C64>;

pub fn c(re: f64, im: f64) -> C64 {
    Complex::new(re, im)
}

/// Modulus of a complex number.
pub fn cabs(z: C64) -> f64 {
    libm::hypot(z.re, z.im)
}

pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a.kronecker(b)
}

/// Max absolute deviation of `m` from its conjugate transpose.
pub fn hermitian_defect(m: &CMatrix) -> f64 {
    if !m.is_square() {
        return f64::INFINITY;
    }
    let n = m.nrows();
    let mut worst: f64 = 0.0;
    for i in 0..n {
        for j in i..n {
            worst = worst.max(cabs(m[(i, j)] - m[(j, i)].conj()));
        }
    }
    worst
}

/// Eigenpairs of a Hermitian matrix, eigenvalues in nonincreasing order.
pub fn hermitian_eigen(m: &CMatrix) -> (Vec<f64>, CMatrix) {
    let eig = m.clone().symmetric_eigen();
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[j].total_cmp(&eig.eigenvalues[i]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = CMatrix::from_fn(m.nrows(), order.len(), |r, k| eig.eigenvectors[(r, order[k])]);
    (values, vectors)
}

/// Largest singular value.
pub fn spectral_norm(m: &CMatrix) -> f64 {
    if m.is_empty() {
        return 0.0;
    }
    let gram = m.adjoint() * m;
    let (values, _) = hermitian_eigen(&gram);
    libm::sqrt(values[0].max(0.0))
}

pub fn vector_norm(v: &CVector) -> f64 {
    libm::sqrt(v.iter().map(|z| z.norm_sqr()).sum())
}

/// Real part of `<v, m v>`.
pub fn expectation(m: &CMatrix, v: &CVector) -> f64 {
    (v.adjoint() * m * v)[(0, 0)].re
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spectral_norm_of_x_plus_z() {
        let m = CMatrix::from_row_slice(2, 2, &[c(1.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(-1.0, 0.0)]);
        assert!((spectral_norm(&m) - core::f64::consts::SQRT_2).abs() < 1e-12);
        assert_eq!(hermitian_defect(&m), 0.0);
    }

    #[test]
    fn spectral_norm_non_hermitian() {
        // [[0, 3], [0, 0]] has singular values 3 and 0.
        let m = CMatrix::from_row_slice(2, 2, &[c(0.0, 0.0), c(3.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)]);
        assert!((spectral_norm(&m) - 3.0).abs() < 1e-12);
        assert!(hermitian_defect(&m) > 1.0);
    }

    #[test]
    fn eigen_sorted_descending() {
        let m = CMatrix::from_diagonal(&CVector::from_vec(alloc::vec![c(0.2, 0.0), c(0.7, 0.0), c(0.1, 0.0)]));
        let (vals, vecs) = hermitian_eigen(&m);
        assert!((vals[0] - 0.7).abs() < 1e-14 && (vals[2] - 0.1).abs() < 1e-14);
        assert!((cabs(vecs[(1, 0)]) - 1.0).abs() < 1e-12);
    }
}
