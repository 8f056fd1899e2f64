use std::fmt;

use serde::{Serialize, Serializer};

/// A nonnegative real or `+∞`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ExtendedReal {
    Finite(f64),
    Infinity,
}

impl ExtendedReal {
    pub const ZERO: ExtendedReal = ExtendedReal::Finite(0.0);

    /// Wraps a quantity that is nonnegative in exact arithmetic; rounding
    /// residue below zero is clipped.
    pub fn finite(x: f64) -> Self {
        if x.is_infinite() && x > 0.0 {
            ExtendedReal::Infinity
        } else {
            ExtendedReal::Finite(if x < 0.0 { 0.0 } else { x })
        }
    }

    pub fn is_infinite(self) -> bool {
        matches!(self, ExtendedReal::Infinity)
    }

    pub fn is_finite(self) -> bool {
        !self.is_infinite()
    }

    /// Value as `f64`, with `+∞` mapped to `f64::INFINITY`.
    pub fn value(self) -> f64 {
        match self {
            ExtendedReal::Finite(x) => x,
            ExtendedReal::Infinity => f64::INFINITY,
        }
    }

    /// `self − other`, aware of infinities.
    pub fn minus(self, other: ExtendedReal) -> Difference {
        match (self, other) {
            (ExtendedReal::Finite(a), ExtendedReal::Finite(b)) => Difference::Finite(a - b),
            (ExtendedReal::Infinity, ExtendedReal::Finite(_)) => Difference::PosInfinity,
            (ExtendedReal::Finite(_), ExtendedReal::Infinity) => Difference::NegInfinity,
            (ExtendedReal::Infinity, ExtendedReal::Infinity) => Difference::NotComparable,
        }
    }
}

impl fmt::Display for ExtendedReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtendedReal::Finite(x) => write!(f, "{x}"),
            ExtendedReal::Infinity => f.write_str("inf"),
        }
    }
}

impl Serialize for ExtendedReal {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            ExtendedReal::Finite(x) => s.serialize_f64(*x),
            ExtendedReal::Infinity => s.serialize_str("inf"),
        }
    }
}

/// Difference of two [`ExtendedReal`] values.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Difference {
    Finite(f64),
    PosInfinity,
    NegInfinity,
    /// `∞ − ∞`.
    NotComparable,
}

impl Difference {
    /// True when the difference is known to be at least `bound`.
    pub fn at_least(self, bound: f64) -> bool {
        match self {
            Difference::Finite(x) => x >= bound,
            Difference::PosInfinity => true,
            Difference::NegInfinity | Difference::NotComparable => false,
        }
    }

    /// True when the difference is finite and `|d| ≤ tol`.
    pub fn within(self, tol: f64) -> bool {
        matches!(self, Difference::Finite(x) if x.abs() <= tol)
    }
}

impl fmt::Display for Difference {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Difference::Finite(x) => write!(f, "{x}"),
            Difference::PosInfinity => f.write_str("inf"),
            Difference::NegInfinity => f.write_str("-inf"),
            Difference::NotComparable => f.write_str("not-comparable"),
        }
    }
}

impl Serialize for Difference {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Difference::Finite(x) => s.serialize_f64(*x),
            other => s.serialize_str(&other.to_string()),
        }
    }
}
