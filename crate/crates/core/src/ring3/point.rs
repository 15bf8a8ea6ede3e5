use std::fmt;
use std::str::FromStr;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::RingError;
use crate::exactlin::Rational;

/// Point of the projective plane with rational coordinates, stored with its
/// first nonzero coordinate equal to 1.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ProjPoint {
    coords: [Rational; 3],
}

impl ProjPoint {
    /// Returns `None` for the all-zero triple.
    pub fn new(coords: [Rational; 3]) -> Option<Self> {
        let lead = coords.iter().find(|c| !c.is_zero())?.clone();
        Some(ProjPoint {
            coords: coords.map(|c| c / &lead),
        })
    }

    pub fn from_ints(a: i64, b: i64, c: i64) -> Option<Self> {
        Self::new([a, b, c].map(|v| Rational::from_integer(v.into())))
    }

    pub fn coords(&self) -> &[Rational; 3] {
        &self.coords
    }

    /// The point `(0:0:1)`.
    pub fn origin() -> Self {
        ProjPoint {
            coords: [Rational::zero(), Rational::zero(), Rational::one()],
        }
    }
}

impl fmt::Display for ProjPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}:{}:{})", self.coords[0], self.coords[1], self.coords[2])
    }
}

impl FromStr for ProjPoint {
    type Err = RingError;

    /// Parses `(a:b:c)` with rational entries such as `-1/2`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = |msg: &str| RingError::Syntax {
            pos: 0,
            msg: format!("{msg} in point '{s}'"),
        };
        let inner = s
            .trim()
            .strip_prefix('(')
            .and_then(|t| t.strip_suffix(')'))
            .ok_or_else(|| bad("expected parentheses"))?;
        let parts: Vec<&str> = inner.split(':').map(str::trim).collect();
        if parts.len() != 3 {
            return Err(bad("expected three coordinates"));
        }
        let mut coords = [Rational::zero(), Rational::zero(), Rational::zero()];
        for (slot, text) in coords.iter_mut().zip(parts) {
            *slot = text.parse().map_err(|_| bad("invalid rational"))?;
        }
        ProjPoint::new(coords).ok_or_else(|| bad("all coordinates zero"))
    }
}

impl Serialize for ProjPoint {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for ProjPoint {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let text = String::deserialize(d)?;
        text.parse().map_err(serde::de::Error::custom)
    }
}
