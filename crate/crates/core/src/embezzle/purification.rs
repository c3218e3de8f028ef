use alloc::format;

use crate::linalg::{expectation, hermitian_eigen, vector_norm, CMatrix, CVector};
use crate::{CoreError, Result};

const NORM_TOLERANCE: f64 = 1e-10;
const DEGENERACY_TOLERANCE: f64 = 1e-12;

/// Product vector `left (x) right` close to a purification, read off from its
/// Schmidt decomposition.
#[derive(Debug, Clone, PartialEq)]
pub struct ProductExtension {
    /// Position of the chosen Schmidt component, components sorted by weight.
    pub index: usize,
    /// Schmidt weight of the chosen component.
    pub p0: f64,
    /// `p0 * |<v, psi>|^2`, which equals `|<phi, left (x) psi>|^2`.
    pub overlap: f64,
    /// `<psi, Tr_H'(phi phi^*) psi>`.
    pub reduced_fidelity: f64,
    /// Chosen right Schmidt vector `v` on H.
    pub right: CVector,
    /// Matching left Schmidt vector on H'; zero if `p0` vanishes.
    pub left: CVector,
}

/// `phi` holds amplitudes `phi[(a, b)]` of a unit vector in `H' (x) H`;
/// `psi` is a unit vector in `H`.
///
/// The right Schmidt vector of `phi` with the largest overlap with `psi` is
/// selected. Inside a degenerate Schmidt eigenspace any orthonormal basis is a
/// valid decomposition, so the normalized projection of `psi` onto the
/// eigenspace is used; ties between eigenspaces go to the heavier one.
pub fn nearest_product_extension(phi: &CMatrix, psi: &CVector) -> Result<ProductExtension> {
    if phi.is_empty() || phi.ncols() != psi.len() {
        return Err(CoreError::DimensionMismatch(format!(
            "phi is {}x{}, psi has length {}",
            phi.nrows(),
            phi.ncols(),
            psi.len()
        )));
    }
    for norm in [phi.norm(), vector_norm(psi)] {
        if (norm - 1.0).abs() > NORM_TOLERANCE {
            return Err(CoreError::NotNormalized { deviation: norm - 1.0 });
        }
    }

    // rho_H[b, b'] = sum_a phi[a, b] conj(phi[a, b'])
    let rho = phi.transpose() * phi.conjugate();
    let (weights, vectors) = hermitian_eigen(&rho);
    let reduced_fidelity = expectation(&rho, psi);

    let mut best: Option<(usize, f64, f64, CVector)> = None;
    let mut start = 0;
    while start < weights.len() {
        let mut end = start + 1;
        while end < weights.len() && (weights[start] - weights[end]).abs() <= DEGENERACY_TOLERANCE {
            end += 1;
        }
        let block = vectors.columns(start, end - start);
        let coords = block.adjoint() * psi;
        let captured: f64 = coords.iter().map(|z| z.norm_sqr()).sum();
        if best.as_ref().is_none_or(|(_, _, w, _)| captured > *w) {
            let p0 = (weights[start..end].iter().sum::<f64>() / (end - start) as f64).max(0.0);
            let projection = block * coords;
            let scale = libm::sqrt(captured);
            let right = if scale > 0.0 { projection / nalgebra::Complex::new(scale, 0.0) } else { vectors.column(start).into_owned() };
            best = Some((start, p0, captured, right));
        }
        start = end;
    }
    let (index, p0, captured, right) = best.expect("at least one eigenspace");

    let left = if p0 > 0.0 {
        phi * right.conjugate() / nalgebra::Complex::new(libm::sqrt(p0), 0.0)
    } else {
        CVector::zeros(phi.nrows())
    };
    Ok(ProductExtension { index, p0, overlap: p0 * captured, reduced_fidelity, right, left })
}
