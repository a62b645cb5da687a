use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// A cut value that may be unbounded.
///
/// `Infinite` stands for "no feasible cut seen yet" (a fresh candidate) or
/// "no cut satisfies the constraints" (an oracle answer). It compares greater
/// than every finite value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CutValue {
    Finite(u64),
    Infinite,
}

impl CutValue {
    pub fn finite(self) -> Option<u64> {
        match self {
            CutValue::Finite(v) => Some(v),
            CutValue::Infinite => None,
        }
    }

    pub fn is_finite(self) -> bool {
        matches!(self, CutValue::Finite(_))
    }
}

impl From<u64> for CutValue {
    fn from(v: u64) -> Self {
        CutValue::Finite(v)
    }
}

impl fmt::Display for CutValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CutValue::Finite(v) => write!(f, "{v}"),
            CutValue::Infinite => f.write_str("inf"),
        }
    }
}

// JSON: finite values are plain integers, infinity is the string "inf".
impl Serialize for CutValue {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            CutValue::Finite(v) => s.serialize_u64(*v),
            CutValue::Infinite => s.serialize_str("inf"),
        }
    }
}

impl<'de> Deserialize<'de> for CutValue {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Num(u64),
            Str(String),
        }
        match Raw::deserialize(d)? {
            Raw::Num(v) => Ok(CutValue::Finite(v)),
            Raw::Str(s) if s == "inf" => Ok(CutValue::Infinite),
            Raw::Str(s) => Err(serde::de::Error::custom(format!("bad cut value {s:?}"))),
        }
    }
}
