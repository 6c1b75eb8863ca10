use std::fmt;
use std::ops::{Add, Mul, Neg};

use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// A real number or ±∞. Never NaN.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Default)]
pub struct ExtReal(f64);

impl ExtReal {
    pub const ZERO: ExtReal = ExtReal(0.0);
    pub const INFINITY: ExtReal = ExtReal(f64::INFINITY);
    pub const NEG_INFINITY: ExtReal = ExtReal(f64::NEG_INFINITY);

    /// Returns `None` for NaN.
    pub fn new(value: f64) -> Option<Self> {
        (!value.is_nan()).then_some(ExtReal(value))
    }

    /// Panics on NaN; for values known to be well defined.
    pub fn from_f64(value: f64) -> Self {
        Self::new(value).expect("ExtReal cannot hold NaN")
    }

    pub fn value(self) -> f64 {
        self.0
    }

    pub fn is_finite(self) -> bool {
        self.0.is_finite()
    }

    pub fn is_pos_infinite(self) -> bool {
        self.0 == f64::INFINITY
    }

    pub fn is_neg_infinite(self) -> bool {
        self.0 == f64::NEG_INFINITY
    }

    /// `self - rhs` with `∞ - ∞ = -∞`, the convention used on the lower side
    /// of a robust bound.
    pub fn sub_lower(self, rhs: ExtReal) -> ExtReal {
        let v = self.0 - rhs.0;
        ExtReal(if v.is_nan() { f64::NEG_INFINITY } else { v })
    }

    /// `self + rhs` with `-∞ + ∞ = +∞`: an infinite budget makes an upper
    /// bound vacuous.
    pub fn add_upper(self, rhs: ExtReal) -> ExtReal {
        let v = self.0 + rhs.0;
        ExtReal(if v.is_nan() { f64::INFINITY } else { v })
    }

    pub fn min(self, other: ExtReal) -> ExtReal {
        if other < self {
            other
        } else {
            self
        }
    }

    pub fn max(self, other: ExtReal) -> ExtReal {
        if other > self {
            other
        } else {
            self
        }
    }
}

impl From<f64> for ExtReal {
    fn from(v: f64) -> Self {
        ExtReal::from_f64(v)
    }
}

impl Neg for ExtReal {
    type Output = ExtReal;
    fn neg(self) -> ExtReal {
        ExtReal(-self.0)
    }
}

/// Plain addition; `∞ + (-∞)` panics.
impl Add for ExtReal {
    type Output = ExtReal;
    fn add(self, rhs: ExtReal) -> ExtReal {
        ExtReal::from_f64(self.0 + rhs.0)
    }
}

/// Scaling by a finite nonzero factor.
impl Mul<f64> for ExtReal {
    type Output = ExtReal;
    fn mul(self, k: f64) -> ExtReal {
        ExtReal::from_f64(self.0 * k)
    }
}

impl fmt::Display for ExtReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0 == f64::INFINITY {
            f.write_str("inf")
        } else if self.0 == f64::NEG_INFINITY {
            f.write_str("-inf")
        } else {
            write!(f, "{}", self.0)
        }
    }
}

// JSON has no infinities: finite values are numbers, infinite ones the strings "inf"/"-inf".
impl Serialize for ExtReal {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        if self.0.is_finite() {
            s.serialize_f64(self.0)
        } else {
            s.serialize_str(if self.0 > 0.0 { "inf" } else { "-inf" })
        }
    }
}

impl<'de> Deserialize<'de> for ExtReal {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Wire {
            Num(f64),
            Str(String),
        }
        match Wire::deserialize(d)? {
            Wire::Num(v) => Ok(ExtReal(v)),
            Wire::Str(s) => match s.as_str() {
                "inf" | "+inf" | "Infinity" => Ok(ExtReal::INFINITY),
                "-inf" | "-Infinity" => Ok(ExtReal::NEG_INFINITY),
                other => Err(serde::de::Error::custom(format!("not an extended real: {other:?}"))),
            },
        }
    }
}
