use serde::{Serialize, Serializer};
use std::fmt;

/// A nonnegative quantity that may be infinite.
///
/// Thorin mass, diversity order and `h(0+)` can all be `+∞`; this type keeps
/// that case explicit so callers have to branch on it.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd)]
pub enum Extended {
    Finite(f64),
    Infinite,
}

impl Extended {
    pub fn is_finite(self) -> bool {
        matches!(self, Extended::Finite(_))
    }

    pub fn finite(self) -> Option<f64> {
        match self {
            Extended::Finite(v) => Some(v),
            Extended::Infinite => None,
        }
    }

    /// Lossy conversion for printing and plotting.
    pub fn to_f64(self) -> f64 {
        match self {
            Extended::Finite(v) => v,
            Extended::Infinite => f64::INFINITY,
        }
    }

    pub fn add(self, other: Extended) -> Extended {
        match (self, other) {
            (Extended::Finite(a), Extended::Finite(b)) => Extended::Finite(a + b),
            _ => Extended::Infinite,
        }
    }

    pub fn min(self, other: Extended) -> Extended {
        match (self, other) {
            (Extended::Finite(a), Extended::Finite(b)) => Extended::Finite(a.min(b)),
            (Extended::Finite(a), Extended::Infinite) | (Extended::Infinite, Extended::Finite(a)) => {
                Extended::Finite(a)
            }
            _ => Extended::Infinite,
        }
    }
}

impl From<f64> for Extended {
    fn from(v: f64) -> Self {
        if v.is_infinite() && v > 0.0 {
            Extended::Infinite
        } else {
            Extended::Finite(v)
        }
    }
}

impl fmt::Display for Extended {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Extended::Finite(v) => write!(f, "{v}"),
            Extended::Infinite => write!(f, "inf"),
        }
    }
}

/// Serialized as a number, or the string `"inf"`.
impl Serialize for Extended {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Extended::Finite(v) => s.serialize_f64(*v),
            Extended::Infinite => s.serialize_str("inf"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arithmetic_on_sentinel() {
        let d = Extended::Finite(2.0);
        assert_eq!(d.add(Extended::Finite(0.5)), Extended::Finite(2.5));
        assert_eq!(d.add(Extended::Infinite), Extended::Infinite);
        assert_eq!(d.min(Extended::Infinite), d);
        assert_eq!(Extended::Infinite.min(Extended::Infinite), Extended::Infinite);
        assert_eq!(Extended::from(f64::INFINITY), Extended::Infinite);
        assert_eq!(serde_json::to_string(&Extended::Infinite).unwrap(), "\"inf\"");
    }
}
