use alloc::collections::btree_map::{self, BTreeMap};
use alloc::format;
use alloc::string::String;
use core::fmt;
use core::ops::{Mul, Neg};
use core::str::FromStr;

use super::site::{Register, Site};
use crate::linalg::{c, C64};
use crate::CoreError;

/// Non-identity single-site letter `X^x Z^z`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Letter {
    X,
    Z,
    XZ,
}

impl Letter {
    pub const ALL: [Letter; 3] = [Letter::X, Letter::Z, Letter::XZ];

    pub fn x(self) -> bool {
        matches!(self, Letter::X | Letter::XZ)
    }

    pub fn z(self) -> bool {
        matches!(self, Letter::Z | Letter::XZ)
    }

    /// `None` for the identity `(0, 0)`.
    pub fn from_bits(x: bool, z: bool) -> Option<Letter> {
        match (x, z) {
            (false, false) => None,
            (true, false) => Some(Letter::X),
            (false, true) => Some(Letter::Z),
            (true, true) => Some(Letter::XZ),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Letter::X => "X",
            Letter::Z => "Z",
            Letter::XZ => "XZ",
        }
    }
}

/// A power of `i`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Phase {
    One,
    I,
    MinusOne,
    MinusI,
}

impl Phase {
    fn power(self) -> u8 {
        match self {
            Phase::One => 0,
            Phase::I => 1,
            Phase::MinusOne => 2,
            Phase::MinusI => 3,
        }
    }

    fn from_power(k: u8) -> Self {
        match k % 4 {
            0 => Phase::One,
            1 => Phase::I,
            2 => Phase::MinusOne,
            _ => Phase::MinusI,
        }
    }

    /// `+1` when `odd` is false, `-1` otherwise.
    pub fn sign(odd: bool) -> Self {
        if odd {
            Phase::MinusOne
        } else {
            Phase::One
        }
    }

    pub fn to_complex(self) -> C64 {
        match self {
            Phase::One => c(1.0, 0.0),
            Phase::I => c(0.0, 1.0),
            Phase::MinusOne => c(-1.0, 0.0),
            Phase::MinusI => c(0.0, -1.0),
        }
    }

    pub fn conj(self) -> Self {
        Phase::from_power(4 - self.power())
    }
}

impl Mul for Phase {
    type Output = Phase;

    // powers of i add
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn mul(self, rhs: Phase) -> Phase {
        Phase::from_power(self.power() + rhs.power())
    }
}

impl Neg for Phase {
    type Output = Phase;

    fn neg(self) -> Phase {
        Phase::from_power(self.power() + 2)
    }
}

/// Finite-weight generator `X^a Z^b`: a map from sites to non-identity
/// letters. Identity letters are never stored.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PauliString {
    letters: BTreeMap<Site, Letter>,
}

impl PauliString {
    pub fn identity() -> Self {
        Self::default()
    }

    pub fn single(site: Site, letter: Letter) -> Self {
        let mut letters = BTreeMap::new();
        letters.insert(site, letter);
        Self { letters }
    }

    /// Builder form of [`PauliString::set`].
    pub fn with(mut self, site: Site, letter: Letter) -> Self {
        self.set(site, Some(letter));
        self
    }

    /// Sets or clears the letter at `site`.
    pub fn set(&mut self, site: Site, letter: Option<Letter>) {
        match letter {
            Some(l) => {
                self.letters.insert(site, l);
            }
            None => {
                self.letters.remove(&site);
            }
        }
    }

    pub fn letter(&self, site: &Site) -> Option<Letter> {
        self.letters.get(site).copied()
    }

    pub fn weight(&self) -> usize {
        self.letters.len()
    }

    pub fn is_identity(&self) -> bool {
        self.letters.is_empty()
    }

    /// Sites and letters in canonical (register, index) order.
    pub fn iter(&self) -> btree_map::Iter<'_, Site, Letter> {
        self.letters.iter()
    }

    pub fn sites(&self) -> impl Iterator<Item = Site> + '_ {
        self.letters.keys().copied()
    }
}

impl FromIterator<(Site, Letter)> for PauliString {
    fn from_iter<I: IntoIterator<Item = (Site, Letter)>>(iter: I) -> Self {
        Self { letters: iter.into_iter().collect() }
    }
}

/// Product `g h = phase * (g h as a generator)`. Sitewise
/// `X^a Z^b X^a' Z^b' = (-1)^(b a') X^(a^a') Z^(b^b')`, so the phase is always
/// real.
pub fn pauli_mul(g: &PauliString, h: &PauliString) -> (Phase, PauliString) {
    let mut out = g.letters.clone();
    let mut odd = false;
    for (site, &lh) in &h.letters {
        match out.get(site).copied() {
            None => {
                out.insert(*site, lh);
            }
            Some(lg) => {
                odd ^= lg.z() & lh.x();
                match Letter::from_bits(lg.x() ^ lh.x(), lg.z() ^ lh.z()) {
                    Some(l) => {
                        out.insert(*site, l);
                    }
                    None => {
                        out.remove(site);
                    }
                }
            }
        }
    }
    (Phase::sign(odd), PauliString { letters: out })
}

/// `(X^a Z^b)^* = Z^b X^a = (-1)^(a.b) X^a Z^b`.
pub fn adjoint(g: &PauliString) -> (Phase, PauliString) {
    let odd = g.letters.values().filter(|l| **l == Letter::XZ).count() % 2 == 1;
    (Phase::sign(odd), g.clone())
}

/// `A1:-1:X;B1:-1:X`; the identity is written `I`.
impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_identity() {
            return f.write_str("I");
        }
        for (k, (site, letter)) in self.letters.iter().enumerate() {
            if k > 0 {
                f.write_str(";")?;
            }
            write!(f, "{}:{}", site, letter.name())?;
        }
        Ok(())
    }
}

impl FromStr for PauliString {
    type Err = CoreError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s == "I" {
            return Ok(PauliString::identity());
        }
        if s.is_empty() {
            return Err(CoreError::Parse("empty generator".into()));
        }
        let mut letters = BTreeMap::new();
        for triple in s.split(';') {
            let parts: alloc::vec::Vec<&str> = triple.trim().split(':').collect();
            let [register, index, letter] = parts[..] else {
                return Err(CoreError::Parse(format!("`{triple}` is not register:index:letter")));
            };
            let register: Register = register.trim().parse()?;
            let index: i64 = index
                .trim()
                .parse()
                .map_err(|_| CoreError::Parse(format!("bad site index `{index}`")))?;
            let letter = match letter.trim() {
                "X" => Letter::X,
                "Z" => Letter::Z,
                "XZ" => Letter::XZ,
                other => return Err(CoreError::Parse(format!("unknown letter `{other}`"))),
            };
            let site = Site::new(register, index);
            if letters.insert(site, letter).is_some() {
                return Err(CoreError::Parse(format!("site {site} appears twice")));
            }
        }
        Ok(PauliString { letters })
    }
}

impl PauliString {
    /// Serialized form, same as `Display`.
    pub fn to_text(&self) -> String {
        format!("{self}")
    }
}
