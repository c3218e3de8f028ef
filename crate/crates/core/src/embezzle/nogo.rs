use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::chsh::{catalyst_admissible, DEFAULT_EPSILON0};
use crate::qstate::{
    aligned_fidelity, descending, tensor_sorted, trace_distance_from_fidelity, variation_distance, Limits,
    ProbDist, SchmidtVector,
};
use crate::{CoreError, Result, BOUND_TOLERANCE, TWO_NINTHS};

/// Largest support the brute-force rearrangement oracle accepts.
pub const BRUTE_FORCE_MAX_SUPPORT: usize = 4;

/// Largest support [`lemma_scan`] enumerates.
pub const LEMMA_MAX_SUPPORT: usize = 64;

/// Best overlap between `psi (x) |11>` and `psi (x) psi` over local unitaries,
/// for a catalyst `psi` with Schmidt coefficients `lambda`.
pub fn self_embezzlement_fidelity(lambda: &SchmidtVector, limits: Limits) -> Result<f64> {
    let target = tensor_sorted(lambda, lambda, limits)?;
    // `lambda` padded with zeros to length n^2; the zip inside the alignment pads implicitly.
    Ok(aligned_fidelity(lambda, &target))
}

/// Same as [`self_embezzlement_fidelity`] but the parties may also use an
/// environment left in a state with Schmidt coefficients `gamma`; the target
/// spectrum becomes `{lambda_i lambda_j gamma_k}`.
pub fn channel_selfembezzlement_fidelity(
    lambda: &SchmidtVector,
    gamma: &SchmidtVector,
    limits: Limits,
) -> Result<f64> {
    limits.product_len(&[lambda.len(), lambda.len(), gamma.len()])?;
    let pair = tensor_sorted(lambda, lambda, limits)?;
    let target = tensor_sorted(&pair, gamma, limits)?;
    Ok(aligned_fidelity(lambda, &target))
}

/// A sorted distribution `p` placed against `p (x) p` on `|p|^2` slots.
#[derive(Debug, Clone, PartialEq)]
pub struct RearrangementInstance {
    p: ProbDist,
    padded_length: usize,
}

impl RearrangementInstance {
    pub fn new(p: ProbDist, limits: Limits) -> Result<Self> {
        let padded_length = limits.product_len(&[p.len(), p.len()])?;
        Ok(Self { p, padded_length })
    }

    pub fn p(&self) -> &ProbDist {
        &self.p
    }

    pub fn padded_length(&self) -> usize {
        self.padded_length
    }

    /// `p` followed by zeros up to the padded length.
    pub fn padded(&self) -> Vec<f64> {
        let mut v = self.p.probs().to_vec();
        v.resize(self.padded_length, 0.0);
        v
    }

    /// `p (x) p`, sorted largest first.
    pub fn sorted_square(&self) -> Vec<f64> {
        let probs = self.p.probs();
        let mut out = Vec::with_capacity(self.padded_length);
        for &x in probs {
            out.extend(probs.iter().map(|&y| x * y));
        }
        out.sort_by(descending);
        out
    }

    /// Minimum variation distance over all rearrangements, by sorted alignment.
    pub fn min_distance(&self) -> f64 {
        variation_distance(&self.padded(), &self.sorted_square())
    }
}

/// Smallest variation distance between a rearrangement of `p` and `p (x) p`.
pub fn min_rearrangement_distance(p: &ProbDist, limits: Limits) -> Result<f64> {
    Ok(RearrangementInstance::new(p.clone(), limits)?.min_distance())
}

/// Exhaustive oracle for [`min_rearrangement_distance`]: tries every placement
/// of the nonzero masses of `p` into the `|p|^2` slots of the unsorted grid
/// `p_j p_k`, leaving the other slots empty.
pub fn brute_force_rearrangement_min(p: &ProbDist) -> Result<f64> {
    let n = p.len();
    if n > BRUTE_FORCE_MAX_SUPPORT {
        return Err(CoreError::SizeCap { requested: n, cap: BRUTE_FORCE_MAX_SUPPORT });
    }
    let probs = p.probs();
    let grid: Vec<f64> = (0..n * n).map(|s| probs[s / n] * probs[s % n]).collect();
    let masses: Vec<f64> = probs.iter().copied().filter(|&x| x > 0.0).collect();
    let mut used = vec![false; grid.len()];
    let mut best = f64::INFINITY;
    place(&masses, &grid, &mut used, 0.0, &mut best);
    Ok(best)
}

fn place(masses: &[f64], grid: &[f64], used: &mut [bool], partial: f64, best: &mut f64) {
    let Some((&m, rest)) = masses.split_first() else {
        let uncovered: f64 = grid.iter().zip(used.iter()).filter(|(_, &u)| !u).map(|(q, _)| q).sum();
        let total = 0.5 * (partial + uncovered);
        if total < *best {
            *best = total;
        }
        return;
    };
    for slot in 0..grid.len() {
        if used[slot] {
            continue;
        }
        used[slot] = true;
        place(rest, grid, used, partial + (m - grid[slot]).abs(), best);
        used[slot] = false;
    }
}

/// One grid distribution visited by [`lemma_scan`].
#[derive(Debug, Clone, PartialEq)]
pub struct LemmaEntry {
    /// Grid units of each probability; `p[k] = units[k] / denominator`.
    pub units: Vec<u32>,
    pub denominator: u32,
    pub p: ProbDist,
    pub distance: f64,
    /// `p(S)` for `S = {1..m}`.
    pub mu: f64,
    /// Longest prefix with mass at most 2/3.
    pub m: usize,
    pub counterexample: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LemmaScan {
    pub entries: Vec<LemmaEntry>,
    pub counterexamples: usize,
}

/// `N` such that `grid_step = 1/N`, for steps in `(0, 1/2]`.
pub fn grid_denominator(grid_step: f64) -> Result<u32> {
    if !(grid_step > 0.0 && grid_step <= 0.5) {
        return Err(CoreError::InvalidParameter(format!("grid step {grid_step} outside (0, 1/2]")));
    }
    let n = libm::round(1.0 / grid_step);
    if (n * grid_step - 1.0).abs() > 1e-9 || n > u32::MAX as f64 {
        return Err(CoreError::InvalidParameter(format!("grid step {grid_step} is not 1/N")));
    }
    Ok(n as u32)
}

/// Nonincreasing compositions of `total` into at most `max_parts` positive
/// parts, each at most `max_first`, in lexicographically decreasing order.
pub fn grid_distributions(total: u32, max_parts: usize, max_first: u32) -> Vec<Vec<u32>> {
    fn go(remaining: u32, cap: u32, slots: usize, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if remaining == 0 {
            out.push(prefix.clone());
            return;
        }
        if slots == 0 {
            return;
        }
        let mut part = cap.min(remaining);
        while part >= 1 {
            // remaining mass must fit in the remaining slots at size <= part
            if (part as u64) * (slots as u64) < remaining as u64 {
                break;
            }
            prefix.push(part);
            go(remaining - part, part, slots - 1, prefix, out);
            prefix.pop();
            part -= 1;
        }
    }
    let mut out = Vec::new();
    go(total, max_first, max_parts, &mut Vec::new(), &mut out);
    out
}

/// Evaluates one grid point of the rearrangement lemma.
pub fn lemma_entry(units: &[u32], denominator: u32, limits: Limits) -> Result<LemmaEntry> {
    let d = denominator as f64;
    let p = ProbDist::new(units.iter().map(|&u| u as f64 / d).collect())?;
    let distance = min_rearrangement_distance(&p, limits)?;
    let mut m = 0;
    let mut prefix: u64 = 0;
    for &u in units {
        if 3 * (prefix + u as u64) > 2 * denominator as u64 {
            break;
        }
        prefix += u as u64;
        m += 1;
    }
    Ok(LemmaEntry {
        units: units.to_vec(),
        denominator,
        p,
        distance,
        mu: prefix as f64 / d,
        m,
        counterexample: distance < TWO_NINTHS - BOUND_TOLERANCE,
    })
}

/// Walks every sorted distribution on the grid of step `grid_step` with at
/// most `max_support` nonzero entries and `p_1 <= 2/3`.
pub fn lemma_scan(grid_step: f64, max_support: usize, limits: Limits) -> Result<LemmaScan> {
    if max_support == 0 || max_support > LEMMA_MAX_SUPPORT {
        return Err(CoreError::InvalidParameter(format!("max support {max_support} outside 1..=64")));
    }
    let denominator = grid_denominator(grid_step)?;
    let max_first = (2 * denominator as u64 / 3) as u32;
    let entries = grid_distributions(denominator, max_support, max_first)
        .iter()
        .map(|units| lemma_entry(units, denominator, limits))
        .collect::<Result<Vec<_>>>()?;
    let counterexamples = entries.iter().filter(|e| e.counterexample).count();
    Ok(LemmaScan { entries, counterexamples })
}

/// Conclusion data of the unitary no-go analysis for one catalyst.
#[derive(Debug, Clone, PartialEq)]
pub struct NoGoReport {
    pub catalyst: SchmidtVector,
    pub lambda1: f64,
    pub fidelity_max: f64,
    pub trace_distance_min: f64,
    pub lemma_distance: f64,
    /// `lambda1 <= sqrt(2/3)`.
    pub admissible: bool,
    /// `trace_distance_min >= 2/9 - 1e-9`.
    pub bound_satisfied: bool,
}

impl NoGoReport {
    pub fn evaluate(catalyst: &SchmidtVector, limits: Limits) -> Result<Self> {
        let fidelity_max = self_embezzlement_fidelity(catalyst, limits)?;
        let trace_distance_min = trace_distance_from_fidelity(fidelity_max)?;
        let lemma_distance = min_rearrangement_distance(&catalyst.probabilities(), limits)?;
        let gate = catalyst_admissible(catalyst, DEFAULT_EPSILON0);
        Ok(Self {
            catalyst: catalyst.clone(),
            lambda1: catalyst.lambda1(),
            fidelity_max,
            trace_distance_min,
            lemma_distance,
            admissible: gate.admissible,
            bound_satisfied: trace_distance_min >= TWO_NINTHS - BOUND_TOLERANCE,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use crate::FIDELITY_CEILING;

    const S2: f64 = core::f64::consts::FRAC_1_SQRT_2;

    fn pd(v: Vec<f64>) -> ProbDist {
        ProbDist::new(v).unwrap()
    }

    fn two_thirds() -> SchmidtVector {
        SchmidtVector::new(vec![libm::sqrt(2.0 / 3.0), libm::sqrt(1.0 / 3.0)]).unwrap()
    }

    /// Maximum of `sum_k a[k] b[sigma(k)]` over all permutations (dim <= 4 oracle).
    fn permutation_max(a: &[f64], b: &[f64]) -> f64 {
        fn perms(n: usize) -> Vec<Vec<usize>> {
            if n == 0 {
                return vec![vec![]];
            }
            let mut out = Vec::new();
            for p in perms(n - 1) {
                for i in 0..=p.len() {
                    let mut q = p.clone();
                    q.insert(i, n - 1);
                    out.push(q);
                }
            }
            out
        }
        let n = a.len().max(b.len());
        let at = |v: &[f64], k: usize| v.get(k).copied().unwrap_or(0.0);
        perms(n)
            .iter()
            .map(|s| (0..n).map(|k| at(a, k) * at(b, s[k])).sum::<f64>())
            .fold(f64::NEG_INFINITY, f64::max)
    }

    #[test]
    fn self_embezzlement_examples() {
        let l = Limits::default();
        assert_eq!(self_embezzlement_fidelity(&SchmidtVector::product(), l).unwrap(), 1.0);
        let epr = SchmidtVector::uniform(2).unwrap();
        let f = self_embezzlement_fidelity(&epr, l).unwrap();
        assert!((f - S2).abs() < 1e-15);
        let sq = tensor_sorted(&epr, &epr, l).unwrap();
        assert!((permutation_max(epr.coeffs(), sq.coeffs()) - f).abs() < 1e-15);

        let t = two_thirds();
        let want = libm::sqrt(2.0 / 3.0) * (2.0 / 3.0) + libm::sqrt(1.0 / 3.0) * (libm::sqrt(2.0) / 3.0);
        let f = self_embezzlement_fidelity(&t, l).unwrap();
        assert!((f - want).abs() < 1e-15);
        assert!((f - 0.816_496_580_927_726).abs() < 1e-12);
    }

    #[test]
    fn rearrangement_examples() {
        let l = Limits::default();
        for (p, want) in [(vec![1.0], 0.0), (vec![0.5, 0.5], 0.5), (vec![2.0 / 3.0, 1.0 / 3.0], 1.0 / 3.0)] {
            let p = pd(p);
            assert!((min_rearrangement_distance(&p, l).unwrap() - want).abs() < 1e-15);
            assert!((brute_force_rearrangement_min(&p).unwrap() - want).abs() < 1e-15);
        }
    }

    #[test]
    fn brute_force_refuses_large_support() {
        let p = pd(vec![0.2; 5]);
        assert_eq!(brute_force_rearrangement_min(&p), Err(CoreError::SizeCap { requested: 5, cap: 4 }));
    }

    #[test]
    fn instance_padding() {
        let inst = RearrangementInstance::new(pd(vec![0.5, 0.3, 0.2]), Limits::default()).unwrap();
        assert_eq!(inst.padded_length(), 9);
        assert_eq!(inst.padded().len(), 9);
        assert_eq!(inst.sorted_square()[0], 0.25);
    }

    #[test]
    fn grid_partitions_count() {
        // partitions of 12 into at most 3 parts: 19
        assert_eq!(grid_distributions(12, 3, 12).len(), 19);
        // partitions of 12: 77
        assert_eq!(grid_distributions(12, 64, 12).len(), 77);
        assert!(grid_distributions(4, 2, 4).contains(&vec![2, 2]));
    }

    #[test]
    fn lemma_scan_examples() {
        let l = Limits::default();
        let scan = lemma_scan(1.0 / 3.0, 2, l).unwrap();
        let e = scan.entries.iter().find(|e| e.units == [2, 1]).unwrap();
        assert!((e.distance - 1.0 / 3.0).abs() < 1e-15);
        assert!((e.mu - 2.0 / 3.0).abs() < 1e-15);
        assert_eq!(e.m, 1);

        let scan = lemma_scan(0.5, 2, l).unwrap();
        let e = scan.entries.iter().find(|e| e.units == [1, 1]).unwrap();
        assert_eq!((e.distance, e.mu, e.m), (0.5, 0.5, 1));
        assert_eq!(scan.counterexamples, 0);

        let scan = lemma_scan(1.0 / 12.0, 8, l).unwrap();
        assert!(!scan.entries.is_empty());
        assert_eq!(scan.counterexamples, 0);
        assert!(scan.entries.iter().all(|e| 3 * e.units[0] <= 2 * 12));
        assert!(scan.entries.iter().all(|e| e.mu > 1.0 / 3.0 && e.mu <= 2.0 / 3.0 + 1e-15));
    }

    #[test]
    fn lemma_scan_rejects_bad_grid() {
        let l = Limits::default();
        assert!(lemma_scan(0.3, 2, l).is_err());
        assert!(lemma_scan(0.0, 2, l).is_err());
        assert!(lemma_scan(0.25, 65, l).is_err());
    }

    #[test]
    fn channel_examples() {
        let l = Limits::default();
        let epr = SchmidtVector::uniform(2).unwrap();
        let t = two_thirds();
        for lam in [&epr, &t] {
            let a = channel_selfembezzlement_fidelity(lam, &SchmidtVector::product(), l).unwrap();
            let b = self_embezzlement_fidelity(lam, l).unwrap();
            assert!((a - b).abs() < 1e-15);
        }
        let f = channel_selfembezzlement_fidelity(&epr, &epr, l).unwrap();
        assert!(f <= self_embezzlement_fidelity(&epr, l).unwrap());
        assert!((f - 0.5).abs() < 1e-15);

        let f = channel_selfembezzlement_fidelity(&SchmidtVector::product(), &t, l).unwrap();
        assert!((f - t.lambda1()).abs() < 1e-15);
    }

    #[test]
    fn channel_respects_cap() {
        let l = Limits { max_entries: 7 };
        let epr = SchmidtVector::uniform(2).unwrap();
        assert!(matches!(channel_selfembezzlement_fidelity(&epr, &epr, l), Err(CoreError::SizeCap { .. })));
    }

    #[test]
    fn report_fields_consistent() {
        let l = Limits::default();
        let r = NoGoReport::evaluate(&SchmidtVector::uniform(2).unwrap(), l).unwrap();
        assert!(r.admissible && r.bound_satisfied);
        assert!((r.trace_distance_min - libm::sqrt(1.0 - r.fidelity_max.powi(2))).abs() < 1e-10);
        assert!(r.fidelity_max <= FIDELITY_CEILING);
        assert!((r.lemma_distance - 0.5).abs() < 1e-15);

        let r = NoGoReport::evaluate(&SchmidtVector::product(), l).unwrap();
        assert!(!r.admissible && !r.bound_satisfied);
    }

    fn arb_dist(min: usize, max: usize) -> impl Strategy<Value = ProbDist> {
        prop::collection::vec(0.01f64..1.0, min..=max).prop_map(|w| ProbDist::from_weights(w).unwrap())
    }

    proptest! {
        #[test]
        fn rearrangement_matches_brute_force(p in arb_dist(1, 4)) {
            let fast = min_rearrangement_distance(&p, Limits::default()).unwrap();
            let brute = brute_force_rearrangement_min(&p).unwrap();
            prop_assert!((fast - brute).abs() <= 1e-12, "{} vs {}", fast, brute);
        }

        #[test]
        fn lemma_bound_below_two_thirds(p in arb_dist(2, 24)) {
            prop_assume!(p.probs()[0] <= 2.0 / 3.0);
            let d = min_rearrangement_distance(&p, Limits::default()).unwrap();
            prop_assert!(d >= TWO_NINTHS - BOUND_TOLERANCE);
        }

        #[test]
        fn channel_dominated_by_unitary(l in arb_dist(1, 12), g in arb_dist(1, 8)) {
            let (l, g) = (crate::qstate::schmidt_from_probs(&l), crate::qstate::schmidt_from_probs(&g));
            let limits = Limits::default();
            let unitary = self_embezzlement_fidelity(&l, limits).unwrap();
            let channel = channel_selfembezzlement_fidelity(&l, &g, limits).unwrap();
            prop_assert!(channel <= unitary + 1e-12);
            if catalyst_admissible(&l, DEFAULT_EPSILON0).admissible {
                prop_assert!(channel <= FIDELITY_CEILING);
            }
        }
    }
}
