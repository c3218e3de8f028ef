//! Schmidt coefficient vectors, sorted probability vectors, and the distance
//! measures built on them.

use alloc::vec::Vec;
use core::cmp::Ordering;

use crate::{CoreError, Result};

/// Tolerance on the normalization of constructed vectors.
pub const CONSTRUCTION_TOLERANCE: f64 = 1e-12;

/// Tolerance on the normalization of derived vectors (products, sweeps).
pub const DERIVED_TOLERANCE: f64 = 1e-10;

/// Default cap on the number of entries any materialized vector may hold.
pub const DEFAULT_MAX_ENTRIES: usize = 1 << 24;

/// Resource caps shared by the operations that build product spectra.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    pub max_entries: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Self { max_entries: DEFAULT_MAX_ENTRIES }
    }
}

impl Limits {
    pub fn check(&self, requested: usize) -> Result<()> {
        if requested > self.max_entries {
            return Err(CoreError::SizeCap { requested, cap: self.max_entries });
        }
        Ok(())
    }

    /// Checked product of lengths, reported against the cap.
    pub fn product_len(&self, lens: &[usize]) -> Result<usize> {
        let mut total: usize = 1;
        for &len in lens {
            total = total
                .checked_mul(len)
                .ok_or(CoreError::SizeCap { requested: usize::MAX, cap: self.max_entries })?;
        }
        self.check(total)?;
        Ok(total)
    }
}

pub(crate) fn descending(a: &f64, b: &f64) -> Ordering {
    b.total_cmp(a)
}

fn validate_sorted_nonneg(values: &[f64]) -> Result<()> {
    if values.is_empty() {
        return Err(CoreError::Empty);
    }
    for (index, &value) in values.iter().enumerate() {
        if !value.is_finite() || value < 0.0 {
            return Err(CoreError::InvalidEntry { index, value });
        }
    }
    for (index, pair) in values.windows(2).enumerate() {
        if pair[0] < pair[1] {
            return Err(CoreError::NotSorted { index });
        }
    }
    Ok(())
}

/// Schmidt coefficients of a bipartite pure state, largest first.
#[derive(Debug, Clone, PartialEq)]
pub struct SchmidtVector {
    coeffs: Vec<f64>,
}

impl SchmidtVector {
    /// Validates nonnegativity, ordering and `sum c^2 = 1`.
    pub fn new(coeffs: Vec<f64>) -> Result<Self> {
        validate_sorted_nonneg(&coeffs)?;
        let deviation = sum_of_squares(&coeffs) - 1.0;
        if deviation.abs() > CONSTRUCTION_TOLERANCE {
            return Err(CoreError::NotNormalized { deviation });
        }
        Ok(Self { coeffs })
    }

    /// Sorts and rescales arbitrary nonnegative amplitudes.
    pub fn from_amplitudes(mut amps: Vec<f64>) -> Result<Self> {
        amps.sort_by(descending);
        validate_sorted_nonneg(&amps)?;
        let norm = libm::sqrt(sum_of_squares(&amps));
        if norm == 0.0 {
            return Err(CoreError::NotNormalized { deviation: -1.0 });
        }
        amps.iter_mut().for_each(|c| *c /= norm);
        Ok(Self { coeffs: amps })
    }

    /// Used for derived vectors whose normalization only holds to
    /// [`DERIVED_TOLERANCE`].
    pub(crate) fn from_sorted_derived(coeffs: Vec<f64>) -> Self {
        debug_assert!(coeffs.windows(2).all(|w| w[0] >= w[1]));
        debug_assert!((sum_of_squares(&coeffs) - 1.0).abs() <= DERIVED_TOLERANCE);
        Self { coeffs }
    }

    /// `(1/sqrt(d), ..., 1/sqrt(d))`, the maximally entangled spectrum.
    pub fn uniform(dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(CoreError::Empty);
        }
        let c = 1.0 / libm::sqrt(dim as f64);
        Ok(Self { coeffs: alloc::vec![c; dim] })
    }

    /// The product state `(1)`.
    pub fn product() -> Self {
        Self { coeffs: alloc::vec![1.0] }
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Largest Schmidt coefficient.
    pub fn lambda1(&self) -> f64 {
        self.coeffs[0]
    }

    /// Drops trailing zeros, keeping at least one entry.
    pub fn trim(mut self) -> Self {
        while self.coeffs.len() > 1 && *self.coeffs.last().unwrap() == 0.0 {
            self.coeffs.pop();
        }
        self
    }

    /// Squared coefficients as a probability vector.
    pub fn probabilities(&self) -> ProbDist {
        ProbDist { probs: self.coeffs.iter().map(|c| c * c).collect() }
    }
}

/// Probability vector sorted largest first.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbDist {
    probs: Vec<f64>,
}

impl ProbDist {
    pub fn new(probs: Vec<f64>) -> Result<Self> {
        validate_sorted_nonneg(&probs)?;
        let deviation = probs.iter().sum::<f64>() - 1.0;
        if deviation.abs() > CONSTRUCTION_TOLERANCE {
            return Err(CoreError::NotNormalized { deviation });
        }
        Ok(Self { probs })
    }

    /// Sorts and rescales arbitrary nonnegative weights.
    pub fn from_weights(mut weights: Vec<f64>) -> Result<Self> {
        weights.sort_by(descending);
        validate_sorted_nonneg(&weights)?;
        let total: f64 = weights.iter().sum();
        if total == 0.0 {
            return Err(CoreError::NotNormalized { deviation: -1.0 });
        }
        weights.iter_mut().for_each(|w| *w /= total);
        Ok(Self { probs: weights })
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }
}

fn sum_of_squares(v: &[f64]) -> f64 {
    v.iter().map(|c| c * c).sum()
}

/// Elementwise square roots of `p`.
pub fn schmidt_from_probs(p: &ProbDist) -> SchmidtVector {
    SchmidtVector::from_sorted_derived(p.probs.iter().map(|&x| libm::sqrt(x)).collect())
}

/// All pairwise products `a[j] * b[k]`, sorted largest first.
pub fn tensor_sorted(a: &SchmidtVector, b: &SchmidtVector, limits: Limits) -> Result<SchmidtVector> {
    limits.product_len(&[a.len(), b.len()])?;
    let mut out = Vec::with_capacity(a.len() * b.len());
    for &x in &a.coeffs {
        out.extend(b.coeffs.iter().map(|&y| x * y));
    }
    out.sort_by(descending);
    Ok(SchmidtVector::from_sorted_derived(out))
}

/// Inner product of two sorted lists, the shorter one padded with zeros.
pub(crate) fn aligned_dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Maximal overlap between two bipartite pure states with the given Schmidt
/// coefficients, over all local unitaries: largest coefficient against
/// largest, and so on down the list.
pub fn aligned_fidelity(a: &SchmidtVector, b: &SchmidtVector) -> f64 {
    if a.coeffs == b.coeffs {
        return 1.0;
    }
    aligned_dot(&a.coeffs, &b.coeffs).clamp(0.0, 1.0)
}

/// Trace distance between pure states with overlap `fidelity`.
pub fn trace_distance_from_fidelity(fidelity: f64) -> Result<f64> {
    if !(-CONSTRUCTION_TOLERANCE..=1.0 + CONSTRUCTION_TOLERANCE).contains(&fidelity) {
        return Err(CoreError::Domain(fidelity));
    }
    let f = fidelity.clamp(0.0, 1.0);
    Ok(libm::sqrt((1.0 - f * f).max(0.0)))
}

/// Half the L1 distance; the shorter vector is padded with zeros.
pub fn variation_distance(p: &[f64], q: &[f64]) -> f64 {
    let n = p.len().max(q.len());
    let at = |v: &[f64], k: usize| v.get(k).copied().unwrap_or(0.0);
    0.5 * (0..n).map(|k| (at(p, k) - at(q, k)).abs()).sum::<f64>()
}
