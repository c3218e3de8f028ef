use alloc::collections::BinaryHeap;
use core::cmp::Ordering;

use crate::qstate::{aligned_fidelity, tensor_sorted, Limits, SchmidtVector};
use crate::{CoreError, Result};

/// Catalyst dimension above which sweeps switch to the streaming path.
pub const SPARSE_THRESHOLD: usize = 1 << 16;

/// The van Dam-Hayden catalyst `c_j = 1/sqrt(j H_n)`, `j = 1..n`, stored as
/// its coefficient rule and normalization only.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VdhCatalyst {
    n: usize,
    harmonic: f64,
}

impl VdhCatalyst {
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(CoreError::InvalidParameter("catalyst dimension must be >= 1".into()));
        }
        // smallest terms first
        let harmonic = (1..=n).rev().map(|j| 1.0 / j as f64).sum();
        Ok(Self { n, harmonic })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn harmonic(&self) -> f64 {
        self.harmonic
    }

    /// Coefficient `k` (zero based); zero past the end.
    pub fn coeff(&self, k: usize) -> f64 {
        if k >= self.n {
            return 0.0;
        }
        1.0 / libm::sqrt((k + 1) as f64 * self.harmonic)
    }

    pub fn lambda1(&self) -> f64 {
        self.coeff(0)
    }

    pub fn to_schmidt(&self, limits: Limits) -> Result<SchmidtVector> {
        limits.check(self.n)?;
        Ok(SchmidtVector::from_sorted_derived((0..self.n).map(|k| self.coeff(k)).collect()))
    }

    /// Streaming version of [`embezzlement_fidelity`]: the sorted product
    /// spectrum is produced by a k-way merge over the target's coefficients, so
    /// memory stays `O(|target|)` whatever `n` is.
    pub fn embezzlement_fidelity(&self, target: &SchmidtVector, mode: SumMode) -> SparseFidelity {
        let budget = match mode {
            SumMode::Exact => self.n,
            SumMode::LowerBound { max_terms } => max_terms.min(self.n),
        };
        let t = target.coeffs();
        let mut heap: BinaryHeap<Head> = t
            .iter()
            .enumerate()
            .filter(|(_, &ti)| ti > 0.0)
            .map(|(stream, &ti)| Head { value: self.coeff(0) * ti, stream, j: 0 })
            .collect();
        let mut sum = 0.0;
        let mut terms = 0;
        while terms < budget {
            let Some(head) = heap.pop() else { break };
            sum += self.coeff(terms) * head.value;
            terms += 1;
            let j = head.j + 1;
            if j < self.n {
                heap.push(Head { value: self.coeff(j) * t[head.stream], stream: head.stream, j });
            }
        }
        SparseFidelity { value: sum.clamp(0.0, 1.0), terms, exact: terms == self.n || heap.is_empty() }
    }
}

/// How many aligned terms the streaming path may sum.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SumMode {
    Exact,
    /// Sum only the `max_terms` largest aligned terms. All terms are
    /// nonnegative, so the result is a lower bound on the exact value.
    LowerBound { max_terms: usize },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SparseFidelity {
    pub value: f64,
    pub terms: usize,
    /// `false` when the sum was truncated and `value` is only a lower bound.
    pub exact: bool,
}

#[derive(Debug, Clone, Copy)]
struct Head {
    value: f64,
    stream: usize,
    j: usize,
}

impl Ord for Head {
    fn cmp(&self, other: &Self) -> Ordering {
        self.value.total_cmp(&other.value).then_with(|| other.stream.cmp(&self.stream))
    }
}

impl PartialOrd for Head {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl PartialEq for Head {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Head {}

pub fn vdh_catalyst(n: usize) -> Result<VdhCatalyst> {
    VdhCatalyst::new(n)
}

/// Best overlap between `catalyst (x) |00>` and `catalyst (x) target` over
/// local unitaries.
pub fn embezzlement_fidelity(catalyst: &SchmidtVector, target: &SchmidtVector, limits: Limits) -> Result<f64> {
    let product = tensor_sorted(catalyst, target, limits)?;
    Ok(aligned_fidelity(catalyst, &product))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use alloc::vec;

    #[test]
    fn catalyst_examples() {
        let l = Limits::default();
        assert_eq!(vdh_catalyst(1).unwrap().to_schmidt(l).unwrap().coeffs(), &[1.0]);
        let c2 = vdh_catalyst(2).unwrap();
        assert_eq!(c2.harmonic(), 1.5);
        assert!((c2.coeff(0) - libm::sqrt(2.0 / 3.0)).abs() < 1e-15);
        assert!((c2.coeff(1) - libm::sqrt(1.0 / 3.0)).abs() < 1e-15);
        let c4 = vdh_catalyst(4).unwrap();
        let want = [12.0 / 25.0, 6.0 / 25.0, 4.0 / 25.0, 3.0 / 25.0];
        for (k, w) in want.iter().enumerate() {
            assert!((c4.coeff(k).powi(2) - w).abs() < 1e-15);
        }
        assert_eq!(c4.coeff(4), 0.0);
        assert!(vdh_catalyst(0).is_err());
    }

    #[test]
    fn admissible_from_two_on() {
        // 1/H_n <= 2/3 for n >= 2, with equality at n = 2
        assert!(vdh_catalyst(1).unwrap().lambda1() > libm::sqrt(2.0 / 3.0));
        for n in [2usize, 3, 10, 1000] {
            assert!(vdh_catalyst(n).unwrap().lambda1() <= libm::sqrt(2.0 / 3.0) + 1e-12);
        }
    }

    #[test]
    fn fidelity_examples() {
        let l = Limits::default();
        let epr = SchmidtVector::uniform(2).unwrap();
        let c2 = vdh_catalyst(2).unwrap().to_schmidt(l).unwrap();
        assert_eq!(embezzlement_fidelity(&c2, &SchmidtVector::product(), l).unwrap(), 1.0);
        let want = libm::sqrt(2.0) / 3.0 + 1.0 / 3.0;
        assert!((embezzlement_fidelity(&c2, &epr, l).unwrap() - want).abs() < 1e-15);
        let one = SchmidtVector::product();
        assert!((embezzlement_fidelity(&one, &epr, l).unwrap() - core::f64::consts::FRAC_1_SQRT_2).abs() < 1e-15);
    }

    #[test]
    fn streaming_matches_dense() {
        let l = Limits::default();
        let targets = [
            SchmidtVector::uniform(2).unwrap(),
            SchmidtVector::from_amplitudes(vec![0.9, 0.3, 0.2, 0.1]).unwrap(),
            SchmidtVector::product(),
        ];
        for n in [1usize, 2, 3, 17, 256, 4096] {
            let cat = vdh_catalyst(n).unwrap();
            let dense_cat = cat.to_schmidt(l).unwrap();
            for t in &targets {
                let dense = embezzlement_fidelity(&dense_cat, t, l).unwrap();
                let sparse = cat.embezzlement_fidelity(t, SumMode::Exact);
                assert!(sparse.exact);
                assert!((dense - sparse.value).abs() < 1e-13, "n={n}: {dense} vs {}", sparse.value);
            }
        }
    }

    #[test]
    fn lower_bound_mode_is_a_lower_bound() {
        let cat = vdh_catalyst(10_000).unwrap();
        let epr = SchmidtVector::uniform(2).unwrap();
        let exact = cat.embezzlement_fidelity(&epr, SumMode::Exact);
        let lb = cat.embezzlement_fidelity(&epr, SumMode::LowerBound { max_terms: 100 });
        assert!(!lb.exact);
        assert_eq!(lb.terms, 100);
        assert!(lb.value <= exact.value);
    }

    proptest! {
        #[test]
        fn admissible_for_every_n_from_two(n in 2usize..5000) {
            prop_assert!(vdh_catalyst(n).unwrap().lambda1() <= libm::sqrt(2.0 / 3.0) + 1e-12);
        }
    }
}
