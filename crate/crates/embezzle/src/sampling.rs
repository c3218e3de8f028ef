//! Seeded random instances. Every instance is drawn from its own ChaCha8
//! stream, so results do not depend on how cases are split across threads.

use embezzle_core::linalg::{c, CMatrix, CVector};
use embezzle_core::{ProbDist, SchmidtVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Gamma, StandardNormal};

use crate::error::RunResult;

/// Stream namespaces; the low 48 bits carry the case index.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stream {
    Catalyst = 1,
    ChannelPair = 2,
    Purification = 3,
}

pub fn rng_for(seed: u64, stream: Stream, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(((stream as u64) << 48) | (index & ((1 << 48) - 1)));
    rng
}

/// Symmetric Dirichlet weights with a log-uniform concentration in
/// `[0.05, 5]`: small concentrations give peaked spectra, large ones flat.
fn dirichlet_probs(rng: &mut impl Rng, support: usize) -> RunResult<ProbDist> {
    let alpha = (rng.gen_range(0.05f64.ln()..5f64.ln())).exp();
    let gamma = Gamma::new(alpha, 1.0).expect("positive shape");
    let mut w: Vec<f64> = (0..support).map(|_| gamma.sample(rng)).collect();
    if w.iter().sum::<f64>() <= 0.0 || w.iter().any(|x| !x.is_finite()) {
        w = vec![1.0; support];
    }
    Ok(ProbDist::from_weights(w)?)
}

pub fn random_spectrum(rng: &mut impl Rng, min_support: usize, max_support: usize) -> RunResult<SchmidtVector> {
    let d = rng.gen_range(min_support..=max_support);
    let p = dirichlet_probs(rng, d)?;
    Ok(embezzle_core::qstate::schmidt_from_probs(&p))
}

/// Catalyst with support in `[2, max_support]` and `lambda_1^2 <= 2/3`, by
/// rejection.
pub fn random_admissible_catalyst(rng: &mut impl Rng, max_support: usize) -> RunResult<SchmidtVector> {
    let max_support = max_support.max(2);
    loop {
        let lambda = random_spectrum(rng, 2, max_support)?;
        let p1 = lambda.lambda1() * lambda.lambda1();
        if 3.0 * p1 <= 2.0 {
            return Ok(lambda);
        }
    }
}

fn complex_normal(rng: &mut impl Rng) -> embezzle_core::linalg::C64 {
    c(StandardNormal.sample(rng), StandardNormal.sample(rng))
}

fn unit_vector(rng: &mut impl Rng, dim: usize) -> CVector {
    let v = CVector::from_fn(dim, |_, _| complex_normal(rng));
    let norm = v.norm();
    v / c(norm, 0.0)
}

/// One instance of the purification proposition.
#[derive(Debug, Clone)]
pub struct PurificationInstance {
    /// Amplitudes `phi[(a, b)]` on `H' (x) H`.
    pub phi: CMatrix,
    pub psi: CVector,
    pub epsilon: f64,
}

/// Draws `epsilon` in `(0, 0.1)`, unit vectors `psi0` on `H'` and `psi` on
/// `H` (dimensions 2 to 4), and a perturbation `phi = psi0 (x) psi + t N`
/// normalized, halving `t` until `<psi, rho_H psi> > 1 - epsilon`.
pub fn purification_instance(rng: &mut impl Rng) -> PurificationInstance {
    let epsilon = loop {
        let e: f64 = rng.gen_range(0.0..0.1);
        if e > 0.0 {
            break e;
        }
    };
    let (da, db) = (rng.gen_range(2..=4), rng.gen_range(2..=4));
    let psi0 = unit_vector(rng, da);
    let psi = unit_vector(rng, db);
    let noise = CMatrix::from_fn(da, db, |_, _| complex_normal(rng));
    let noise = &noise / c(noise.norm(), 0.0);
    let product = CMatrix::from_fn(da, db, |a, b| psi0[a] * psi[b]);
    let mut t = rng.gen_range(0.0..1.0) * 4.0 * epsilon.sqrt();
    loop {
        let raw = &product + &noise * c(t, 0.0);
        let phi = &raw / c(raw.norm(), 0.0);
        let rho = phi.transpose() * phi.conjugate();
        if embezzle_core::linalg::expectation(&rho, &psi) > 1.0 - epsilon {
            return PurificationInstance { phi, psi, epsilon };
        }
        t /= 2.0;
    }
}
