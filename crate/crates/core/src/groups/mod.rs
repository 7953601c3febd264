//! Group tags and seeded samplers for the compact groups and their discrete
//! or structured subgroups.

pub mod clifford;
pub mod haar;
pub mod matchgate;
pub mod symplectic;

use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize, PartialOrd, Ord)]
pub enum GroupTag {
    /// Unitary group U(2ⁿ)
    U,
    /// Orthogonal group O(2ⁿ)
    O,
    /// Unitary symplectic group USp(2ⁿ, J)
    Sp,
    /// Clifford group
    Cl,
    /// Matchgate group (O(2n) on Majorana modes)
    M,
}

impl fmt::Display for GroupTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            GroupTag::U => "U",
            GroupTag::O => "O",
            GroupTag::Sp => "Sp",
            GroupTag::Cl => "Cl",
            GroupTag::M => "M",
        };
        f.write_str(s)
    }
}

impl FromStr for GroupTag {
    type Err = crate::Error;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "u" | "unitary" => Ok(GroupTag::U),
            "o" | "orthogonal" => Ok(GroupTag::O),
            "sp" | "symplectic" => Ok(GroupTag::Sp),
            "cl" | "clifford" => Ok(GroupTag::Cl),
            "m" | "matchgate" => Ok(GroupTag::M),
            _ => Err(crate::Error::Parse(format!("unknown group {s}"))),
        }
    }
}
