use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec::Vec;

use super::element::AlgebraElement;
use super::pauli::PauliString;
use super::perm::IndexRange;
use super::site::{Register, Site};
use crate::linalg::{c, C64};
use crate::{CoreError, Result};

/// Pairs `(j, left)` with `(j, right)` for every `j` in `range`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PairRule {
    pub left: Register,
    pub right: Register,
    pub range: IndexRange,
}

impl PairRule {
    fn partner(&self, site: Site) -> Option<Site> {
        if !self.range.contains(site.index) {
            return None;
        }
        if site.register == self.left {
            Some(Site::new(self.right, site.index))
        } else if site.register == self.right {
            Some(Site::new(self.left, site.index))
        } else {
            None
        }
    }

    fn covers(&self, site: Site) -> bool {
        self.partner(site).is_some()
    }
}

/// Abstract state: disjoint EPR pairs `(|00> + |11>)/sqrt(2)`, every other
/// site in `|0>`. Pairs come from index-range rules or are listed explicitly.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct PairingState {
    rules: Vec<PairRule>,
    explicit: BTreeMap<Site, Site>,
}

impl PairingState {
    /// All sites in `|0>`.
    pub fn product() -> Self {
        Self::default()
    }

    pub fn with_rule(mut self, left: Register, right: Register, range: IndexRange) -> Result<Self> {
        if left == right {
            return Err(CoreError::PairingOverlap(format!("rule pairs {left} with itself")));
        }
        for r in &self.rules {
            let shared = [r.left, r.right].iter().any(|x| *x == left || *x == right);
            if shared && r.range.overlaps(&range) {
                return Err(CoreError::PairingOverlap(format!("rule {left}-{right} overlaps {}-{}", r.left, r.right)));
            }
        }
        let rule = PairRule { left, right, range };
        if let Some(site) = self.explicit.keys().find(|s| rule.covers(**s)) {
            return Err(CoreError::PairingOverlap(format!("{site} is already paired")));
        }
        self.rules.push(rule);
        Ok(self)
    }

    pub fn with_pair(mut self, a: Site, b: Site) -> Result<Self> {
        if a == b {
            return Err(CoreError::PairingOverlap(format!("{a} paired with itself")));
        }
        for s in [a, b] {
            if self.partner(s).is_some() {
                return Err(CoreError::PairingOverlap(format!("{s} is already paired")));
            }
        }
        self.explicit.insert(a, b);
        self.explicit.insert(b, a);
        Ok(self)
    }

    /// Catalyst `psi` on `(A1, B1)` with `A2, B2` in `|0>`: EPR pairs on every
    /// negative index of `A1-B1`, `|0>` elsewhere.
    pub fn psi_initial() -> Self {
        Self::product().with_rule(Register::A1, Register::B1, IndexRange::NEGATIVE).expect("disjoint")
    }

    /// Two copies of the catalyst, on `(A1, B1)` and on `(A2, B2)`.
    pub fn psi_target() -> Self {
        Self::psi_initial().with_rule(Register::A2, Register::B2, IndexRange::NEGATIVE).expect("disjoint")
    }

    /// Infinitely many EPR pairs on the negative indices of `A1-B1`.
    pub fn s_psi() -> Self {
        Self::psi_initial()
    }

    /// All `|0>`; the state `phi (x) phi` on `(A2, B2)` and `s_00` alike.
    pub fn all_zero() -> Self {
        Self::product()
    }

    pub fn partner(&self, site: Site) -> Option<Site> {
        if let Some(p) = self.explicit.get(&site) {
            return Some(*p);
        }
        self.rules.iter().find_map(|r| r.partner(site))
    }

    /// Expectation of a generator, exactly 0 or 1.
    ///
    /// Unpaired sites contribute `<0|P|0>`: 1 for `I, Z`, 0 for `X, XZ`.
    /// Paired sites contribute `<Psi|P (x) Q|Psi>`: 1 if `P == Q`, else 0.
    pub fn eval(&self, g: &PauliString) -> u8 {
        for (site, letter) in g.iter() {
            match self.partner(*site) {
                None if letter.x() => return 0,
                None => {}
                Some(p) if g.letter(&p) != Some(*letter) => return 0,
                Some(_) => {}
            }
        }
        1
    }
}

pub fn eval_state(s: &PairingState, g: &PauliString) -> u8 {
    s.eval(g)
}

/// Linear extension of [`eval_state`].
pub fn eval_element(s: &PairingState, e: &AlgebraElement) -> C64 {
    e.terms()
        .filter(|(g, _)| s.eval(g) == 1)
        .fold(c(0.0, 0.0), |acc, (_, v)| acc + *v)
}
