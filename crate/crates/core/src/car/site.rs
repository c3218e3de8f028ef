use core::fmt;
use core::str::FromStr;

use crate::CoreError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Party {
    Alice,
    Bob,
}

/// Which of a party's two registers a site belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Slot {
    One,
    Two,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Register {
    A1,
    A2,
    B1,
    B2,
}

impl Register {
    pub const ALL: [Register; 4] = [Register::A1, Register::A2, Register::B1, Register::B2];

    pub fn party(self) -> Party {
        match self {
            Register::A1 | Register::A2 => Party::Alice,
            Register::B1 | Register::B2 => Party::Bob,
        }
    }

    pub fn slot(self) -> Slot {
        match self {
            Register::A1 | Register::B1 => Slot::One,
            Register::A2 | Register::B2 => Slot::Two,
        }
    }

    pub fn from_parts(party: Party, slot: Slot) -> Self {
        match (party, slot) {
            (Party::Alice, Slot::One) => Register::A1,
            (Party::Alice, Slot::Two) => Register::A2,
            (Party::Bob, Slot::One) => Register::B1,
            (Party::Bob, Slot::Two) => Register::B2,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Register::A1 => "A1",
            Register::A2 => "A2",
            Register::B1 => "B1",
            Register::B2 => "B2",
        }
    }
}

impl fmt::Display for Register {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Register {
    type Err = CoreError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Register::ALL
            .into_iter()
            .find(|r| r.name() == s)
            .ok_or_else(|| CoreError::Parse(alloc::format!("unknown register `{s}`")))
    }
}

/// A qubit position: a register and a signed index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Site {
    pub register: Register,
    pub index: i64,
}

impl Site {
    pub const fn new(register: Register, index: i64) -> Self {
        Self { register, index }
    }
}

impl fmt::Display for Site {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.register, self.index)
    }
}
