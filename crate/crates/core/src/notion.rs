use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

/// Which edges of the envied bundle may be removed (condition 1).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Removal1 {
    /// Any edge that is not a chore for the envier.
    NonChore,
    /// Only edges that are goods for the envier.
    Good,
}

/// Which edges of the envier's own bundle may be removed (condition 2).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Removal2 {
    /// Any edge that is not a good for the envier.
    NonGood,
    /// Only edges that are chores for the envier.
    Chore,
}

/// Envy-freeness and the eight EFX relaxations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Notion {
    EF,
    EFXg0,
    EFXgPlus,
    EFXc0,
    EFXcMinus,
    EFX00,
    EFX0Minus,
    EFXPlus0,
    EFXPlusMinus,
}

impl Notion {
    pub const ALL: [Notion; 9] = [
        Notion::EF,
        Notion::EFXg0,
        Notion::EFXgPlus,
        Notion::EFXc0,
        Notion::EFXcMinus,
        Notion::EFX00,
        Notion::EFX0Minus,
        Notion::EFXPlus0,
        Notion::EFXPlusMinus,
    ];

    pub fn condition1(self) -> Option<Removal1> {
        use Notion::*;
        match self {
            EFXg0 | EFX00 | EFX0Minus => Some(Removal1::NonChore),
            EFXgPlus | EFXPlus0 | EFXPlusMinus => Some(Removal1::Good),
            EF | EFXc0 | EFXcMinus => None,
        }
    }

    pub fn condition2(self) -> Option<Removal2> {
        use Notion::*;
        match self {
            EFXc0 | EFX00 | EFXPlus0 => Some(Removal2::NonGood),
            EFXcMinus | EFX0Minus | EFXPlusMinus => Some(Removal2::Chore),
            EF | EFXg0 | EFXgPlus => None,
        }
    }

    /// Whether every allocation satisfying `self` also satisfies `other`.
    pub fn implies(self, other: Notion) -> bool {
        use Notion::*;
        if self == other || self == EF {
            return true;
        }
        if other == EF {
            return false;
        }
        if self == EFX00 {
            return true;
        }
        let ok1 = match (self.condition1(), other.condition1()) {
            (_, None) => true,
            (None, Some(_)) => false,
            (Some(Removal1::NonChore), Some(_)) => true,
            (Some(Removal1::Good), Some(x)) => x == Removal1::Good,
        };
        let ok2 = match (self.condition2(), other.condition2()) {
            (_, None) => true,
            (None, Some(_)) => false,
            (Some(Removal2::NonGood), Some(_)) => true,
            (Some(Removal2::Chore), Some(x)) => x == Removal2::Chore,
        };
        ok1 && ok2
    }

    /// Flag spelling used on the command line.
    pub fn cli_name(self) -> &'static str {
        use Notion::*;
        match self {
            EF => "ef",
            EFXg0 => "efxg0",
            EFXgPlus => "efxg+",
            EFXc0 => "efxc0",
            EFXcMinus => "efxc-",
            EFX00 => "efx00",
            EFX0Minus => "efx0-",
            EFXPlus0 => "efx+0",
            EFXPlusMinus => "efx+-",
        }
    }
}

impl fmt::Display for Notion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.cli_name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unknown notion `{0}` (expected one of ef, efxg0, efxg+, efxc0, efxc-, efx00, efx0-, efx+0, efx+-)")]
pub struct UnknownNotion(pub String);

impl FromStr for Notion {
    type Err = UnknownNotion;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        use Notion::*;
        let n = match s.to_ascii_lowercase().as_str() {
            "ef" => EF,
            "efxg0" | "efx0" | "efxgoods0" => EFXg0,
            "efxg+" | "efxgplus" | "efx+" => EFXgPlus,
            "efxc0" => EFXc0,
            "efxc-" | "efxcminus" | "efx-" => EFXcMinus,
            "efx00" => EFX00,
            "efx0-" | "efx0minus" => EFX0Minus,
            "efx+0" | "efxplus0" => EFXPlus0,
            "efx+-" | "efxplusminus" => EFXPlusMinus,
            _ => return Err(UnknownNotion(s.to_string())),
        };
        Ok(n)
    }
}
