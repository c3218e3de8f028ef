//! CHSH values on explicit state vectors and on abstract pairing states, and
//! the catalyst admissibility gate.
//!
//! "Violation by factor `f`" means a CHSH value of `2f`, so the classical
//! bound is factor 1 and the Tsirelson value `2 sqrt(2)` is factor `sqrt(2)`.

use alloc::format;

use crate::car::{eval_element, AlgebraElement, Party, PairingState, Site};
use crate::linalg::{c, expectation, hermitian_defect, hermitian_eigen, kron, CMatrix, CVector};
use crate::qstate::SchmidtVector;
use crate::{CoreError, Result};

/// Observable validation slack: eigenvalues and norms may exceed 1 by this much.
pub const OBSERVABLE_TOLERANCE: f64 = 1e-9;

/// Default CHSH deficit `epsilon_0`; recorded with the gate, not used by it.
pub const DEFAULT_EPSILON0: f64 = 1.0 / 50.0;

/// Four observables, two per party. Fields are only reachable through
/// validating constructors.
#[derive(Debug, Clone, PartialEq)]
pub struct ChshSettings<O> {
    a0: O,
    a1: O,
    b0: O,
    b1: O,
}

impl<O> ChshSettings<O> {
    pub fn a0(&self) -> &O {
        &self.a0
    }
    pub fn a1(&self) -> &O {
        &self.a1
    }
    pub fn b0(&self) -> &O {
        &self.b0
    }
    pub fn b1(&self) -> &O {
        &self.b1
    }

    /// `<A0 B0> + <A0 B1> + <A1 B0> - <A1 B1>` given a correlator.
    fn combine(&self, mut corr: impl FnMut(&O, &O) -> Result<f64>) -> Result<f64> {
        Ok(corr(&self.a0, &self.b0)? + corr(&self.a0, &self.b1)? + corr(&self.a1, &self.b0)?
            - corr(&self.a1, &self.b1)?)
    }
}

fn validate_matrix(name: &str, m: &CMatrix) -> Result<()> {
    if !m.is_square() || m.is_empty() {
        return Err(CoreError::InvalidObservable(format!("{name} is not square")));
    }
    if hermitian_defect(m) > OBSERVABLE_TOLERANCE {
        return Err(CoreError::InvalidObservable(format!("{name} is not Hermitian")));
    }
    let (vals, _) = hermitian_eigen(m);
    if vals.iter().any(|v| v.abs() > 1.0 + OBSERVABLE_TOLERANCE) {
        return Err(CoreError::InvalidObservable(format!("{name} has spectrum outside [-1, 1]")));
    }
    Ok(())
}

impl ChshSettings<CMatrix> {
    pub fn matrices(a0: CMatrix, a1: CMatrix, b0: CMatrix, b1: CMatrix) -> Result<Self> {
        for (name, m) in [("A0", &a0), ("A1", &a1), ("B0", &b0), ("B1", &b1)] {
            validate_matrix(name, m)?;
        }
        if a0.nrows() != a1.nrows() || b0.nrows() != b1.nrows() {
            return Err(CoreError::DimensionMismatch("a party's observables differ in size".into()));
        }
        Ok(Self { a0, a1, b0, b1 })
    }

    /// `cos(t) Z + sin(t) X` for each of the four angles.
    pub fn planar(a0: f64, a1: f64, b0: f64, b1: f64) -> Self {
        Self { a0: planar_qubit(a0), a1: planar_qubit(a1), b0: planar_qubit(b0), b1: planar_qubit(b1) }
    }

    /// `A0 = Z, A1 = X, B0 = (Z + X)/sqrt 2, B1 = (Z - X)/sqrt 2`.
    pub fn standard() -> Self {
        Self::planar(0.0, core::f64::consts::FRAC_PI_2, core::f64::consts::FRAC_PI_4, -core::f64::consts::FRAC_PI_4)
    }
}

fn planar_qubit(theta: f64) -> CMatrix {
    let (s, co) = (libm::sin(theta), libm::cos(theta));
    CMatrix::from_row_slice(2, 2, &[c(co, 0.0), c(s, 0.0), c(s, 0.0), c(-co, 0.0)])
}

impl ChshSettings<AlgebraElement> {
    pub fn elements(a0: AlgebraElement, a1: AlgebraElement, b0: AlgebraElement, b1: AlgebraElement) -> Result<Self> {
        for (name, e, party) in
            [("A0", &a0, Party::Alice), ("A1", &a1, Party::Alice), ("B0", &b0, Party::Bob), ("B1", &b1, Party::Bob)]
        {
            if e.adjoint_defect() > OBSERVABLE_TOLERANCE {
                return Err(CoreError::InvalidObservable(format!("{name} is not self-adjoint")));
            }
            if let Some(site) = e.support().into_iter().find(|s| s.register.party() != party) {
                return Err(CoreError::Locality(format!("{name} acts on {site}")));
            }
            if e.operator_norm()? > 1.0 + OBSERVABLE_TOLERANCE {
                return Err(CoreError::InvalidObservable(format!("{name} has norm above 1")));
            }
        }
        Ok(Self { a0, a1, b0, b1 })
    }

    /// The standard optimal settings on the pair `(alice, bob)`.
    pub fn standard_on(alice: Site, bob: Site) -> Result<Self> {
        use crate::car::{Letter, PauliString};
        let single = |s: Site, l: Letter| AlgebraElement::from(PauliString::single(s, l));
        let h = c(core::f64::consts::FRAC_1_SQRT_2, 0.0);
        let (bz, bx) = (single(bob, Letter::Z), single(bob, Letter::X));
        Self::elements(
            single(alice, Letter::Z),
            single(alice, Letter::X),
            (bz.clone() + bx.clone()).scale(h),
            (bz - bx).scale(h),
        )
    }
}

/// Dimensions of the two tensor factors of a state vector.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Bipartition {
    pub dim_a: usize,
    pub dim_b: usize,
}

pub fn chsh_value_matrix(state: &CVector, settings: &ChshSettings<CMatrix>, cut: Bipartition) -> Result<f64> {
    if cut.dim_a * cut.dim_b != state.len() {
        return Err(CoreError::DimensionMismatch(format!(
            "{} x {} cut for a vector of length {}",
            cut.dim_a,
            cut.dim_b,
            state.len()
        )));
    }
    if settings.a0.nrows() != cut.dim_a || settings.b0.nrows() != cut.dim_b {
        return Err(CoreError::DimensionMismatch("observables do not match the cut".into()));
    }
    settings.combine(|a, b| Ok(expectation(&kron(a, b), state)))
}

pub fn chsh_value_abstract(state: &PairingState, settings: &ChshSettings<AlgebraElement>) -> Result<f64> {
    settings.combine(|a, b| Ok(eval_element(state, &(a * b)).re))
}

pub fn violation_factor(chsh_value: f64) -> f64 {
    chsh_value / 2.0
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Admissibility {
    pub admissible: bool,
    pub lambda1: f64,
    pub threshold: f64,
    pub epsilon0: f64,
}

/// Catalysts with `lambda1 <= sqrt(2/3)` are the ones the no-go bound covers.
pub fn catalyst_admissible(lambda: &SchmidtVector, epsilon0: f64) -> Admissibility {
    let threshold = libm::sqrt(2.0 / 3.0);
    let lambda1 = lambda.lambda1();
    Admissibility { admissible: lambda1 <= threshold + 1e-12, lambda1, threshold, epsilon0 }
}

#[cfg(test)]
mod tests {
    use super::*;
    use core::f64::consts::PI;
    use proptest::prelude::*;
    use crate::car::{Letter, PauliString, Register};
    use core::f64::consts::{FRAC_1_SQRT_2, SQRT_2};

    fn epr() -> CVector {
        CVector::from_vec(alloc::vec![c(FRAC_1_SQRT_2, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(FRAC_1_SQRT_2, 0.0)])
    }

    const CUT: Bipartition = Bipartition { dim_a: 2, dim_b: 2 };

    #[test]
    fn matrix_examples() {
        let zero = CVector::from_vec(alloc::vec![c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)]);
        // <ZZ> + <ZX> + <XZ> - <XX> on |00> is 1 + 0 + 0 - 0
        let zx = ChshSettings::planar(0.0, core::f64::consts::FRAC_PI_2, 0.0, core::f64::consts::FRAC_PI_2);
        assert!((chsh_value_matrix(&zero, &zx, CUT).unwrap() - 1.0).abs() < 1e-12);
        let zz = ChshSettings::planar(0.0, 0.0, 0.0, 0.0);
        assert!((chsh_value_matrix(&zero, &zz, CUT).unwrap() - 2.0).abs() < 1e-12);
        let v = chsh_value_matrix(&epr(), &ChshSettings::standard(), CUT).unwrap();
        assert!((v - 2.0 * SQRT_2).abs() < 1e-12);
        let id = CMatrix::identity(2, 2);
        let ids = ChshSettings::matrices(id.clone(), id.clone(), id.clone(), id).unwrap();
        assert!((chsh_value_matrix(&epr(), &ids, CUT).unwrap() - 2.0).abs() < 1e-12);
    }

    #[test]
    fn matrix_validation() {
        let bad = CMatrix::identity(2, 2) * c(2.0, 0.0);
        let id = CMatrix::identity(2, 2);
        assert!(ChshSettings::matrices(bad, id.clone(), id.clone(), id.clone()).is_err());
        let nonherm = CMatrix::from_row_slice(2, 2, &[c(0.0, 0.0), c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)]);
        assert!(ChshSettings::matrices(nonherm, id.clone(), id.clone(), id.clone()).is_err());
        let s = ChshSettings::standard();
        let wrong = Bipartition { dim_a: 4, dim_b: 1 };
        assert!(matches!(chsh_value_matrix(&epr(), &s, wrong), Err(CoreError::DimensionMismatch(_))));
    }

    #[test]
    fn abstract_examples() {
        let (a, b) = (Site::new(Register::A1, -1), Site::new(Register::B1, -1));
        let id = AlgebraElement::identity();
        let ids = ChshSettings::elements(id.clone(), id.clone(), id.clone(), id).unwrap();
        assert_eq!(chsh_value_abstract(&PairingState::s_psi(), &ids).unwrap(), 2.0);
        let s = ChshSettings::standard_on(a, b).unwrap();
        let v = chsh_value_abstract(&PairingState::s_psi(), &s).unwrap();
        assert!((v - 2.0 * SQRT_2).abs() < 1e-12);
        assert!((violation_factor(v) - SQRT_2).abs() < 1e-12);
        let v = chsh_value_abstract(&PairingState::all_zero(), &s).unwrap();
        assert!((v - SQRT_2).abs() < 1e-12);
    }

    #[test]
    fn abstract_locality() {
        let (a, b) = (Site::new(Register::A1, -1), Site::new(Register::B1, -1));
        assert!(matches!(ChshSettings::standard_on(b, a), Err(CoreError::Locality(_))));
        let xz = AlgebraElement::from(PauliString::single(a, Letter::XZ));
        let z = AlgebraElement::from(PauliString::single(b, Letter::Z));
        assert!(ChshSettings::elements(xz, z.clone(), z.clone(), z).is_err());
    }

    #[test]
    fn violation_factors() {
        assert_eq!(violation_factor(2.0), 1.0);
        assert!((violation_factor(2.0 * SQRT_2) - SQRT_2).abs() < 1e-15);
        assert!((violation_factor(2.0 * (SQRT_2 - 0.02)) - (SQRT_2 - 0.02)).abs() < 1e-15);
    }

    #[test]
    fn admissibility_examples() {
        let epr = SchmidtVector::uniform(2).unwrap();
        let g = catalyst_admissible(&epr, DEFAULT_EPSILON0);
        assert!(g.admissible && (g.lambda1 - FRAC_1_SQRT_2).abs() < 1e-15);
        assert!((g.threshold - 0.816_496_580_927_726).abs() < 1e-12);
        assert!(!catalyst_admissible(&SchmidtVector::product(), DEFAULT_EPSILON0).admissible);
        let edge = SchmidtVector::new(alloc::vec![libm::sqrt(2.0 / 3.0), libm::sqrt(1.0 / 3.0)]).unwrap();
        assert!(catalyst_admissible(&edge, 0.02).admissible);
    }

    fn planar_element(site: Site, theta: f64) -> AlgebraElement {
        let mut e = AlgebraElement::term(c(libm::cos(theta), 0.0), PauliString::single(site, Letter::Z));
        e.add_term(c(libm::sin(theta), 0.0), PauliString::single(site, Letter::X));
        e
    }

    proptest! {
        #[test]
        fn swap_symmetry(a0 in 0.0..PI, a1 in 0.0..PI, b0 in 0.0..PI, b1 in 0.0..PI) {
            let v = chsh_value_matrix(&epr(), &ChshSettings::planar(a0, a1, b0, b1), CUT).unwrap();
            let w = chsh_value_matrix(&epr(), &ChshSettings::planar(a1, a0, b0, b1 + PI), CUT).unwrap();
            prop_assert!((v - w).abs() < 1e-12);
        }

        #[test]
        fn matrix_and_abstract_paths_agree(a0 in 0.0..PI, a1 in 0.0..PI, b0 in 0.0..PI, b1 in 0.0..PI) {
            let (a, b) = (Site::new(Register::A1, -1), Site::new(Register::B1, -1));
            let settings = ChshSettings::elements(
                planar_element(a, a0),
                planar_element(a, a1),
                planar_element(b, b0),
                planar_element(b, b1),
            )
            .unwrap();
            let abs = chsh_value_abstract(&PairingState::s_psi(), &settings).unwrap();
            let mat = chsh_value_matrix(&epr(), &ChshSettings::planar(a0, a1, b0, b1), CUT).unwrap();
            prop_assert!((abs - mat).abs() <= 1e-12, "{} vs {}", abs, mat);
        }
    }
}
