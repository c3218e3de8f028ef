use alloc::collections::BTreeSet;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use super::pauli::PauliString;
use super::site::{Register, Site, Slot};
use crate::{CoreError, Result};

/// Inclusive index interval; `None` leaves that side unbounded.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct IndexRange {
    pub lo: Option<i64>,
    pub hi: Option<i64>,
}

impl IndexRange {
    pub const ALL: IndexRange = IndexRange { lo: None, hi: None };

    /// `..=-1`
    pub const NEGATIVE: IndexRange = IndexRange { lo: None, hi: Some(-1) };

    /// `0..`
    pub const NONNEGATIVE: IndexRange = IndexRange { lo: Some(0), hi: None };

    pub fn contains(&self, j: i64) -> bool {
        self.lo.is_none_or(|lo| j >= lo) && self.hi.is_none_or(|hi| j <= hi)
    }

    pub fn overlaps(&self, other: &IndexRange) -> bool {
        let lo = match (self.lo, other.lo) {
            (Some(a), Some(b)) => Some(a.max(b)),
            (a, b) => a.or(b),
        };
        let hi = match (self.hi, other.hi) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (a, b) => a.or(b),
        };
        match (lo, hi) {
            (Some(lo), Some(hi)) => lo <= hi,
            _ => true,
        }
    }
}

/// One affine branch `j -> (mul * j + add) / div` on the indices of `slot`
/// that lie in `range` and are congruent to `residue` mod `modulus`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AffinePiece {
    pub slot: Slot,
    pub range: IndexRange,
    pub modulus: i64,
    pub residue: i64,
    pub to_slot: Slot,
    pub mul: i64,
    pub add: i64,
    pub div: i64,
}

impl AffinePiece {
    /// Identity-like piece without congruence condition.
    pub const fn affine(slot: Slot, range: IndexRange, to_slot: Slot, mul: i64, add: i64, div: i64) -> Self {
        Self { slot, range, modulus: 1, residue: 0, to_slot, mul, add, div }
    }

    pub const fn with_parity(mut self, modulus: i64, residue: i64) -> Self {
        self.modulus = modulus;
        self.residue = residue;
        self
    }

    fn matches(&self, slot: Slot, j: i64) -> bool {
        slot == self.slot && self.range.contains(j) && j.rem_euclid(self.modulus) == self.residue
    }

    fn eval(&self, j: i64) -> Result<i64> {
        let overflow = || CoreError::IndexOverflow(format!("{} * {j} + {}", self.mul, self.add));
        let num = self.mul.checked_mul(j).and_then(|v| v.checked_add(self.add)).ok_or_else(overflow)?;
        if num % self.div != 0 {
            return Err(CoreError::NotBijective(format!("inexact division of {num} by {}", self.div)));
        }
        Ok(num / self.div)
    }
}

/// Piecewise map on `(slot, index)`; the first matching piece applies.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SlotMap {
    pub pieces: Vec<AffinePiece>,
}

impl SlotMap {
    pub fn apply(&self, slot: Slot, j: i64) -> Result<(Slot, i64)> {
        let piece = self
            .pieces
            .iter()
            .find(|p| p.matches(slot, j))
            .ok_or_else(|| CoreError::NotBijective(format!("no piece covers ({slot:?}, {j})")))?;
        Ok((piece.to_slot, piece.eval(j)?))
    }
}

/// Bijection of one party's sites `Z x {1, 2}`, applied identically to
/// Alice's registers and to Bob's, given by a forward and an inverse rule.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SitePermutation {
    forward: SlotMap,
    inverse: SlotMap,
}

impl SitePermutation {
    /// The rules are only checked against each other at the sites queried.
    pub fn new(forward: SlotMap, inverse: SlotMap) -> Self {
        Self { forward, inverse }
    }

    pub fn identity() -> Self {
        let id = SlotMap {
            pieces: vec![
                AffinePiece::affine(Slot::One, IndexRange::ALL, Slot::One, 1, 0, 1),
                AffinePiece::affine(Slot::Two, IndexRange::ALL, Slot::Two, 1, 0, 1),
            ],
        };
        Self { forward: id.clone(), inverse: id }
    }

    fn lift(site: Site, map: &SlotMap) -> Result<Site> {
        let (slot, index) = map.apply(site.register.slot(), site.index)?;
        Ok(Site::new(Register::from_parts(site.register.party(), slot), index))
    }

    /// `sigma(site)`, with the inverse rule checked on the way.
    pub fn image(&self, site: Site) -> Result<Site> {
        let image = Self::lift(site, &self.forward)?;
        if Self::lift(image, &self.inverse)? != site {
            return Err(CoreError::NotBijective(format!("{site} -> {image} does not invert")));
        }
        Ok(image)
    }

    /// `sigma^-1(site)`, with the forward rule checked on the way.
    pub fn preimage(&self, site: Site) -> Result<Site> {
        let pre = Self::lift(site, &self.inverse)?;
        if Self::lift(pre, &self.forward)? != site {
            return Err(CoreError::NotBijective(format!("{pre} -> {site} does not invert")));
        }
        Ok(pre)
    }

    /// Checks inversion and injectivity on every site of `sites`.
    pub fn check_window(&self, sites: &[Site]) -> Result<()> {
        let mut seen = BTreeSet::new();
        for &s in sites {
            let img = self.image(s)?;
            if !seen.insert(img) {
                return Err(CoreError::NotBijective(format!("two sites map to {img}")));
            }
            self.preimage(s)?;
        }
        Ok(())
    }
}

/// Index map used by the canonical bijection on slot 2: `0, 1, 2, 3, 4, ...`
/// goes to `0, -1, 1, -2, 2, ...`.
#[cfg(test)]
fn zig(j: i64) -> i64 {
    if j % 2 == 1 {
        -(j + 1) / 2
    } else {
        j / 2
    }
}

/// Concrete bijection that sends the negative slot-1 sites onto the odd
/// negative slot-1 sites, the negative slot-2 sites onto the even negative
/// slot-1 sites, fixes the nonnegative slot-1 sites, and spreads the
/// nonnegative slot-2 sites over all of slot 2:
///
/// * `(-k, 1) -> (-(2k-1), 1)`, `(-k, 2) -> (-2k, 1)` for `k >= 1`
/// * `(j, 1) -> (j, 1)` and `(j, 2) -> (zig(j), 2)` for `j >= 0`
pub fn canonical_sigma() -> SitePermutation {
    use Slot::{One, Two};
    let forward = SlotMap {
        pieces: vec![
            AffinePiece::affine(One, IndexRange::NEGATIVE, One, 2, 1, 1),
            AffinePiece::affine(Two, IndexRange::NEGATIVE, One, 2, 0, 1),
            AffinePiece::affine(One, IndexRange::NONNEGATIVE, One, 1, 0, 1),
            AffinePiece::affine(Two, IndexRange::NONNEGATIVE, Two, -1, -1, 2).with_parity(2, 1),
            AffinePiece::affine(Two, IndexRange::NONNEGATIVE, Two, 1, 0, 2).with_parity(2, 0),
        ],
    };
    let inverse = SlotMap {
        pieces: vec![
            AffinePiece::affine(One, IndexRange::NEGATIVE, One, 1, -1, 2).with_parity(2, 1),
            AffinePiece::affine(One, IndexRange::NEGATIVE, Two, 1, 0, 2).with_parity(2, 0),
            AffinePiece::affine(One, IndexRange::NONNEGATIVE, One, 1, 0, 1),
            AffinePiece::affine(Two, IndexRange::NEGATIVE, Two, -2, -1, 1),
            AffinePiece::affine(Two, IndexRange::NONNEGATIVE, Two, 2, 0, 1),
        ],
    };
    SitePermutation::new(forward, inverse)
}

/// Moves the letter at each site `s` of `g` to `sigma(s)`.
pub fn apply_automorphism(sigma: &SitePermutation, g: &PauliString) -> Result<PauliString> {
    g.iter().map(|(s, l)| Ok((sigma.image(*s)?, *l))).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::car::Letter;
    use proptest::prelude::*;

    #[test]
    fn sigma_table() {
        let sigma = canonical_sigma();
        let img = |r, j| sigma.image(Site::new(r, j)).unwrap();
        assert_eq!(img(Register::A1, -1), Site::new(Register::A1, -1));
        assert_eq!(img(Register::A2, -1), Site::new(Register::A1, -2));
        assert_eq!(img(Register::B2, 3), Site::new(Register::B2, -2));
        assert_eq!(img(Register::A1, -3), Site::new(Register::A1, -5));
        assert_eq!(img(Register::B1, 7), Site::new(Register::B1, 7));
        assert_eq!(img(Register::A2, 0), Site::new(Register::A2, 0));
        assert_eq!(img(Register::A2, 4), Site::new(Register::A2, 2));
        for j in 0..50 {
            assert_eq!(img(Register::A2, j).index, zig(j));
        }
    }

    #[test]
    fn sigma_bijective_on_windows() {
        let sigma = canonical_sigma();
        let sites: Vec<Site> =
            Register::ALL.iter().flat_map(|&r| (-200..200).map(move |j| Site::new(r, j))).collect();
        sigma.check_window(&sites).unwrap();
        // images of slot 1 and slot 2 of a party on [-k, k) never collide
        let mut images = BTreeSet::new();
        for s in sites.iter().filter(|s| s.register.party() == crate::car::Party::Alice) {
            assert!(images.insert(sigma.image(*s).unwrap()));
        }
    }

    #[test]
    fn automorphism_examples() {
        let g = PauliString::single(Site::new(Register::A2, -1), Letter::X).with(Site::new(Register::B1, 4), Letter::XZ);
        assert_eq!(apply_automorphism(&SitePermutation::identity(), &g).unwrap(), g);
        let moved = apply_automorphism(&canonical_sigma(), &g).unwrap();
        assert_eq!(moved.letter(&Site::new(Register::A1, -2)), Some(Letter::X));
        assert_eq!(moved.letter(&Site::new(Register::B1, 4)), Some(Letter::XZ));
        assert_eq!(moved.weight(), g.weight());
    }

    #[test]
    fn overflow_is_an_error() {
        let sigma = canonical_sigma();
        assert!(matches!(sigma.image(Site::new(Register::A1, i64::MIN)), Err(CoreError::IndexOverflow(_))));
    }

    #[test]
    fn inconsistent_rules_detected() {
        let fwd = SlotMap {
            pieces: vec![
                AffinePiece::affine(Slot::One, IndexRange::ALL, Slot::One, 1, 1, 1),
                AffinePiece::affine(Slot::Two, IndexRange::ALL, Slot::Two, 1, 0, 1),
            ],
        };
        let bad = SitePermutation::new(fwd, SitePermutation::identity().inverse.clone());
        assert!(matches!(bad.image(Site::new(Register::A1, 0)), Err(CoreError::NotBijective(_))));
    }

    #[test]
    fn range_overlap() {
        assert!(IndexRange::NEGATIVE.overlaps(&IndexRange::ALL));
        assert!(!IndexRange::NEGATIVE.overlaps(&IndexRange::NONNEGATIVE));
        assert!(IndexRange { lo: Some(-3), hi: Some(0) }.overlaps(&IndexRange::NONNEGATIVE));
    }

    proptest! {
        #[test]
        fn sigma_round_trip(r in 0usize..4, j in -1_000_000_000i64..1_000_000_000) {
            let sigma = canonical_sigma();
            let s = Site::new(Register::ALL[r], j);
            let img = sigma.image(s).unwrap();
            prop_assert_eq!(sigma.preimage(img).unwrap(), s);
            prop_assert_eq!(img.register.party(), s.register.party());
        }
    }
}
