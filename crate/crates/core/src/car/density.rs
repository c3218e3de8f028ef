use alloc::collections::BTreeSet;
use alloc::vec::Vec;

use super::pauli::{adjoint, Letter, PauliString};
use super::site::Site;
use super::state::PairingState;
use crate::linalg::{CMatrix, C64};
use crate::{CoreError, Result};

/// Largest window [`restrict_density`] reconstructs (4^6 Pauli expectations).
pub const RESTRICT_MAX_SITES: usize = 6;

/// `trace(rho^2)` at or above `1 - PURE_TOLERANCE` counts as pure.
pub const PURE_TOLERANCE: f64 = 1e-9;

/// Density matrix of `s` restricted to `window`, rebuilt from its Pauli
/// expectations: `rho = 2^-m sum_P s(P^*) P`. The first window site is the
/// most significant qubit, as in `to_matrix`.
pub fn restrict_density(s: &PairingState, window: &[Site]) -> Result<CMatrix> {
    let m = window.len();
    if m > RESTRICT_MAX_SITES {
        return Err(CoreError::SizeCap { requested: m, cap: RESTRICT_MAX_SITES });
    }
    if window.iter().collect::<BTreeSet<_>>().len() != m {
        return Err(CoreError::InvalidParameter("window lists a site twice".into()));
    }
    let dim = 1usize << m;
    let scale = 1.0 / dim as f64;
    let mut rho = CMatrix::zeros(dim, dim);
    let mut digits: Vec<u8> = alloc::vec![0; m];
    for code in 0..(1usize << (2 * m)) {
        for (k, d) in digits.iter_mut().enumerate() {
            *d = ((code >> (2 * k)) & 3) as u8;
        }
        let (mut xmask, mut zmask) = (0usize, 0usize);
        let g: PauliString = window
            .iter()
            .enumerate()
            .filter_map(|(k, site)| {
                let bit = 1usize << (m - 1 - k);
                let (x, z) = (digits[k] & 1 == 1, digits[k] & 2 == 2);
                if x {
                    xmask |= bit;
                }
                if z {
                    zmask |= bit;
                }
                Letter::from_bits(x, z).map(|l| (*site, l))
            })
            .collect();
        let (phase, g_star) = adjoint(&g);
        if s.eval(&g_star) == 0 {
            continue;
        }
        let coeff: C64 = phase.to_complex() * scale;
        for col in 0..dim {
            let sign = if (col & zmask).count_ones() % 2 == 1 { -1.0 } else { 1.0 };
            rho[(col ^ xmask, col)] += coeff * sign;
        }
    }
    Ok(rho)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Purity {
    pub purity: f64,
    pub is_pure: bool,
}

/// `trace(rho^2)` for a Hermitian `rho`.
pub fn purity_check(rho: &CMatrix) -> Purity {
    let purity: f64 = rho.iter().map(|z| z.norm_sqr()).sum();
    Purity { purity, is_pure: purity >= 1.0 - PURE_TOLERANCE }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use crate::car::Register;
    use crate::linalg::{c, cabs, hermitian_defect, hermitian_eigen, CVector};

    fn a1(j: i64) -> Site {
        Site::new(Register::A1, j)
    }
    fn b1(j: i64) -> Site {
        Site::new(Register::B1, j)
    }

    fn assert_density(rho: &CMatrix) {
        assert!(hermitian_defect(rho) < 1e-12);
        assert!(cabs(rho.trace() - c(1.0, 0.0)) < 1e-12);
        let (vals, _) = hermitian_eigen(rho);
        assert!(vals.iter().all(|&v| v > -1e-10));
    }

    #[test]
    fn zero_state_one_site() {
        let rho = restrict_density(&PairingState::all_zero(), &[Site::new(Register::A2, 3)]).unwrap();
        let want = CMatrix::from_row_slice(2, 2, &[c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)]);
        assert_eq!(rho, want);
    }

    #[test]
    fn full_pair_is_bell_projector() {
        let rho = restrict_density(&PairingState::s_psi(), &[a1(-1), b1(-1)]).unwrap();
        let h = core::f64::consts::FRAC_1_SQRT_2;
        let bell = CVector::from_vec(alloc::vec![c(h, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(h, 0.0)]);
        let proj = &bell * bell.adjoint();
        assert!((rho - proj).norm() < 1e-12);
    }

    #[test]
    fn half_pair_is_maximally_mixed() {
        let rho = restrict_density(&PairingState::s_psi(), &[a1(-2)]).unwrap();
        assert!((rho.clone() - CMatrix::identity(2, 2) * c(0.5, 0.0)).norm() < 1e-12);
        let p = purity_check(&rho);
        assert!((p.purity - 0.5).abs() < 1e-12 && !p.is_pure);
    }

    #[test]
    fn pair_plus_zero_site_is_pure() {
        let rho = restrict_density(&PairingState::psi_initial(), &[a1(-1), a1(0), b1(-1)]).unwrap();
        assert_density(&rho);
        let p = purity_check(&rho);
        assert!((p.purity - 1.0).abs() < 1e-12 && p.is_pure);
    }

    #[test]
    fn xz_pairs_keep_positive_sign() {
        // -YY = XZ (x) XZ appears with coefficient +1/4 in the Bell projector
        let rho = restrict_density(&PairingState::s_psi(), &[a1(-1), b1(-1)]).unwrap();
        assert!(cabs(rho[(0, 3)] - c(0.5, 0.0)) < 1e-12);
        assert!(cabs(rho[(1, 2)]) < 1e-12);
    }

    #[test]
    fn size_limits() {
        let w: Vec<Site> = (0..7).map(a1).collect();
        assert!(matches!(restrict_density(&PairingState::all_zero(), &w), Err(CoreError::SizeCap { .. })));
        assert!(restrict_density(&PairingState::all_zero(), &[a1(0), a1(0)]).is_err());
    }

    proptest! {
        #[test]
        fn pure_windows_combine(i in 1i64..6, j in 1i64..6) {
            let s = PairingState::psi_target();
            let pair = |r: Register, k: i64| vec![Site::new(r, -k), s.partner(Site::new(r, -k)).unwrap()];
            let (w1, w2) = (pair(Register::A1, i), pair(Register::A2, j));
            for w in [&w1, &w2, &[w1.clone(), w2.clone()].concat()] {
                let p = purity_check(&restrict_density(&s, w).unwrap());
                prop_assert!((p.purity - 1.0).abs() < 1e-9);
            }
        }
    }
}
