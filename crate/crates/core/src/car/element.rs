use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::vec::Vec;
use core::ops::{Add, Mul, Neg, Sub};

use super::pauli::{adjoint, pauli_mul, PauliString};
use super::site::Site;
use crate::linalg::{c, cabs, spectral_norm, CMatrix, C64};
use crate::{CoreError, Result};

/// Largest window [`to_matrix`] and [`operator_norm`] will materialize.
pub const MATRIX_MAX_SITES: usize = 12;

/// Finite linear combination of generators. Zero coefficients are dropped.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct AlgebraElement {
    terms: BTreeMap<PauliString, C64>,
}

impl AlgebraElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn identity() -> Self {
        Self::term(c(1.0, 0.0), PauliString::identity())
    }

    pub fn term(coeff: C64, g: PauliString) -> Self {
        let mut e = Self::zero();
        e.add_term(coeff, g);
        e
    }

    pub fn add_term(&mut self, coeff: C64, g: PauliString) {
        let entry = self.terms.entry(g).or_insert(c(0.0, 0.0));
        *entry += coeff;
        if *entry == c(0.0, 0.0) {
            self.terms.retain(|_, v| *v != c(0.0, 0.0));
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&PauliString, &C64)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn scale(&self, k: C64) -> Self {
        let mut out = Self::zero();
        for (g, v) in &self.terms {
            out.add_term(*v * k, g.clone());
        }
        out
    }

    pub fn adjoint(&self) -> Self {
        let mut out = Self::zero();
        for (g, v) in &self.terms {
            let (phase, g) = adjoint(g);
            out.add_term(v.conj() * phase.to_complex(), g);
        }
        out
    }

    /// Max coefficient deviation between `self` and `self^*`.
    pub fn adjoint_defect(&self) -> f64 {
        let diff = self.clone() - self.adjoint();
        diff.terms.values().map(|v| cabs(*v)).fold(0.0, f64::max)
    }

    /// Union of the supports of all terms, in canonical order.
    pub fn support(&self) -> Vec<Site> {
        let set: BTreeSet<Site> = self.terms.keys().flat_map(|g| g.sites()).collect();
        set.into_iter().collect()
    }

    pub fn to_matrix(&self, window: &[Site]) -> Result<CMatrix> {
        to_matrix(self, window)
    }

    pub fn operator_norm(&self) -> Result<f64> {
        operator_norm(self)
    }
}

impl From<PauliString> for AlgebraElement {
    fn from(g: PauliString) -> Self {
        Self::term(c(1.0, 0.0), g)
    }
}

impl Add for AlgebraElement {
    type Output = AlgebraElement;

    fn add(mut self, rhs: AlgebraElement) -> AlgebraElement {
        for (g, v) in rhs.terms {
            self.add_term(v, g);
        }
        self
    }
}

impl Neg for AlgebraElement {
    type Output = AlgebraElement;

    fn neg(self) -> AlgebraElement {
        self.scale(c(-1.0, 0.0))
    }
}

impl Sub for AlgebraElement {
    type Output = AlgebraElement;

    fn sub(self, rhs: AlgebraElement) -> AlgebraElement {
        self + (-rhs)
    }
}

impl Mul for &AlgebraElement {
    type Output = AlgebraElement;

    fn mul(self, rhs: &AlgebraElement) -> AlgebraElement {
        let mut out = AlgebraElement::zero();
        for (g, u) in &self.terms {
            for (h, v) in &rhs.terms {
                let (phase, gh) = pauli_mul(g, h);
                out.add_term(*u * *v * phase.to_complex(), gh);
            }
        }
        out
    }
}

/// Dense matrix of `e` on the tensor product of the window sites, the first
/// window site being the most significant qubit.
pub fn to_matrix(e: &AlgebraElement, window: &[Site]) -> Result<CMatrix> {
    if window.len() > MATRIX_MAX_SITES {
        return Err(CoreError::SizeCap { requested: window.len(), cap: MATRIX_MAX_SITES });
    }
    let m = window.len();
    let position: BTreeMap<Site, usize> = window.iter().enumerate().map(|(k, s)| (*s, k)).collect();
    if position.len() != m {
        return Err(CoreError::InvalidParameter("window lists a site twice".into()));
    }
    let dim = 1usize << m;
    let mut out = CMatrix::zeros(dim, dim);
    for (g, coeff) in e.terms() {
        let (mut xmask, mut zmask) = (0usize, 0usize);
        for (site, letter) in g.iter() {
            let k = *position
                .get(site)
                .ok_or_else(|| CoreError::SupportEscape(format!("{site}")))?;
            let bit = 1usize << (m - 1 - k);
            if letter.x() {
                xmask |= bit;
            }
            if letter.z() {
                zmask |= bit;
            }
        }
        // X^a Z^b |k> = (-1)^(b.k) |k ^ a>
        for col in 0..dim {
            let sign = if (col & zmask).count_ones() % 2 == 1 { -1.0 } else { 1.0 };
            out[(col ^ xmask, col)] += *coeff * sign;
        }
    }
    Ok(out)
}

/// Spectral norm of the matrix of `e` on its own support.
pub fn operator_norm(e: &AlgebraElement) -> Result<f64> {
    let window = e.support();
    Ok(spectral_norm(&to_matrix(e, &window)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::car::{apply_automorphism, canonical_sigma, Site};
    use proptest::prelude::*;
    use crate::car::{Letter, Register};

    fn s(i: i64) -> Site {
        Site::new(Register::A1, i)
    }

    fn real(m: &CMatrix) -> Vec<f64> {
        m.iter().map(|z| z.re).collect()
    }

    #[test]
    fn matrices() {
        let id = to_matrix(&AlgebraElement::identity(), &[s(0)]).unwrap();
        assert_eq!(id, CMatrix::identity(2, 2));
        assert_eq!(to_matrix(&AlgebraElement::identity(), &[]).unwrap(), CMatrix::identity(1, 1));

        let x = AlgebraElement::from(PauliString::single(s(0), Letter::X));
        // column-major iteration: [[0,1],[1,0]]
        assert_eq!(real(&to_matrix(&x, &[s(0)]).unwrap()), [0.0, 1.0, 1.0, 0.0]);
        let xz = AlgebraElement::from(PauliString::single(s(0), Letter::XZ));
        let m = to_matrix(&xz, &[s(0)]).unwrap();
        assert_eq!((m[(0, 1)].re, m[(1, 0)].re), (-1.0, 1.0));

        let xi = to_matrix(&x, &[s(0), s(1)]).unwrap();
        let xm = CMatrix::from_row_slice(2, 2, &[c(0.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)]);
        assert_eq!(xi, xm.kronecker(&CMatrix::identity(2, 2)));
    }

    #[test]
    fn support_escape() {
        let x = AlgebraElement::from(PauliString::single(s(4), Letter::X));
        assert!(matches!(to_matrix(&x, &[s(0)]), Err(CoreError::SupportEscape(_))));
        let big: Vec<Site> = (0..13).map(s).collect();
        assert!(matches!(to_matrix(&x, &big), Err(CoreError::SizeCap { .. })));
    }

    #[test]
    fn norms() {
        for l in Letter::ALL {
            let g = AlgebraElement::from(PauliString::single(s(0), l).with(s(2), Letter::XZ));
            assert!((operator_norm(&g).unwrap() - 1.0).abs() < 1e-12);
        }
        let x = AlgebraElement::from(PauliString::single(s(0), Letter::X));
        let z = AlgebraElement::from(PauliString::single(s(0), Letter::Z));
        assert!((operator_norm(&(x + z)).unwrap() - core::f64::consts::SQRT_2).abs() < 1e-12);
        assert_eq!(operator_norm(&AlgebraElement::zero()).unwrap(), 0.0);
        assert!((operator_norm(&AlgebraElement::identity().scale(c(0.0, 2.0))).unwrap() - 2.0).abs() < 1e-12);
    }

    #[test]
    fn algebra_ops() {
        let x = AlgebraElement::from(PauliString::single(s(0), Letter::X));
        assert!((x.clone() - x.clone()).is_zero());
        let xz = AlgebraElement::from(PauliString::single(s(0), Letter::XZ));
        assert!(xz.adjoint_defect() > 1.0);
        assert_eq!(x.adjoint_defect(), 0.0);
        // (XZ)^* XZ = I
        assert_eq!(&xz.adjoint() * &xz, AlgebraElement::identity());
    }

    fn arb_generator() -> impl Strategy<Value = PauliString> {
        let sites: Vec<Site> = Register::ALL.iter().flat_map(|&r| (-3..3).map(move |j| Site::new(r, j))).collect();
        prop::collection::vec((0..sites.len(), 0usize..3), 0..=6)
            .prop_map(move |picks| picks.into_iter().map(|(s, l)| (sites[s], Letter::ALL[l])).collect())
    }

    proptest! {
        #[test]
        fn product_sign_law_matches_matrices(g in arb_generator(), h in arb_generator()) {
            let mut sites: Vec<Site> = g.sites().chain(h.sites()).collect();
            sites.sort();
            sites.dedup();
            prop_assume!(sites.len() <= 6);
            let (phase, gh) = pauli_mul(&g, &h);
            let m = |p: &PauliString| to_matrix(&AlgebraElement::from(p.clone()), &sites).unwrap();
            prop_assert_eq!(m(&g) * m(&h), m(&gh) * phase.to_complex());
        }

        #[test]
        fn generator_norms_survive_the_automorphism(g in arb_generator()) {
            prop_assume!(!g.is_identity());
            let moved = apply_automorphism(&canonical_sigma(), &g).unwrap();
            let norm = operator_norm(&AlgebraElement::from(g)).unwrap();
            prop_assert!((norm - 1.0).abs() < 1e-9);
            prop_assert!((operator_norm(&AlgebraElement::from(moved)).unwrap() - norm).abs() < 1e-9);
        }
    }
}
