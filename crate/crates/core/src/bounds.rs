//! Arbitrary-precision evaluation of the size bounds, with a cutoff for
//! values too large to materialize.

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, ToPrimitive, Zero};
use serde::{Serialize, Serializer};

/// Results with more bits than this are reported as astronomical.
pub const DEFAULT_CAP_BITS: u64 = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BoundValue {
    Exact(BigUint),
    /// Larger than `2^cap`; any measured quantity satisfies it.
    Astronomical,
}

impl BoundValue {
    pub fn from_u64(v: u64) -> BoundValue {
        BoundValue::Exact(BigUint::from(v))
    }

    /// `|v|` for a signed value.
    pub fn from_int(v: &BigInt) -> BoundValue {
        BoundValue::Exact(v.magnitude().clone())
    }

    pub fn is_astronomical(&self) -> bool {
        matches!(self, BoundValue::Astronomical)
    }

    pub fn exact(&self) -> Option<&BigUint> {
        match self {
            BoundValue::Exact(v) => Some(v),
            BoundValue::Astronomical => None,
        }
    }

    fn is_zero(&self) -> bool {
        self.exact().is_some_and(Zero::is_zero)
    }

    fn capped(v: BigUint, cap: u64) -> BoundValue {
        if v.bits() > cap {
            BoundValue::Astronomical
        } else {
            BoundValue::Exact(v)
        }
    }

    pub fn add(&self, other: &BoundValue, cap: u64) -> BoundValue {
        match (self, other) {
            (BoundValue::Exact(a), BoundValue::Exact(b)) => Self::capped(a + b, cap),
            _ => BoundValue::Astronomical,
        }
    }

    pub fn mul(&self, other: &BoundValue, cap: u64) -> BoundValue {
        if self.is_zero() || other.is_zero() {
            return BoundValue::from_u64(0);
        }
        match (self, other) {
            (BoundValue::Exact(a), BoundValue::Exact(b)) => Self::capped(a * b, cap),
            _ => BoundValue::Astronomical,
        }
    }

    pub fn pow(&self, exp: &BoundValue, cap: u64) -> BoundValue {
        if exp.is_zero() {
            return BoundValue::from_u64(1);
        }
        match (self, exp) {
            (BoundValue::Exact(b), _) if b.is_zero() || b.is_one() => self.clone(),
            (BoundValue::Exact(b), BoundValue::Exact(e)) => {
                let bits = e
                    .to_u64()
                    .and_then(|e| e.checked_mul(b.bits() - 1))
                    .unwrap_or(u64::MAX);
                if bits > cap {
                    return BoundValue::Astronomical;
                }
                let e = e.to_u32().expect("exponent below cap");
                Self::capped(b.pow(e), cap)
            }
            _ => BoundValue::Astronomical,
        }
    }

    /// `measured ≤ self`, or `measured < self` when `strict`.
    pub fn admits(&self, measured: &BigUint, strict: bool) -> bool {
        match self {
            BoundValue::Astronomical => true,
            BoundValue::Exact(b) if strict => measured < b,
            BoundValue::Exact(b) => measured <= b,
        }
    }
}

impl fmt::Display for BoundValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BoundValue::Exact(v) if v.bits() <= 128 => write!(f, "{v}"),
            BoundValue::Exact(v) => write!(f, "~2^{}", v.bits() - 1),
            BoundValue::Astronomical => f.write_str("astronomical"),
        }
    }
}

impl Serialize for BoundValue {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// One measured quantity against its bound.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BoundCheck {
    pub name: String,
    #[serde(serialize_with = "crate::util::ser_display")]
    pub measured: BigUint,
    pub bound: BoundValue,
    pub strict: bool,
    pub pass: bool,
}

impl BoundCheck {
    pub fn new(name: impl Into<String>, measured: BigUint, bound: BoundValue, strict: bool) -> Self {
        let pass = bound.admits(&measured, strict);
        BoundCheck {
            name: name.into(),
            measured,
            bound,
            strict,
            pass,
        }
    }
}

impl fmt::Display for BoundCheck {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rel = if self.strict { "<" } else { "<=" };
        let verdict = if self.pass { "PASS" } else { "FAIL" };
        write!(
            f,
            "{}: {} {rel} {}: {verdict}",
            self.name, self.measured, self.bound
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(x: u64) -> BoundValue {
        BoundValue::from_u64(x)
    }

    #[test]
    fn exact_arithmetic() {
        let cap = DEFAULT_CAP_BITS;
        assert_eq!(v(3).pow(&v(4), cap), v(81));
        assert_eq!(v(0).pow(&v(0), cap), v(1));
        assert_eq!(v(1).pow(&BoundValue::Astronomical, cap), v(1));
        assert_eq!(v(6).mul(&v(7), cap).add(&v(1), cap), v(43));
    }

    #[test]
    fn cap_short_circuits() {
        assert!(v(2).pow(&v(2000), 1000).is_astronomical());
        assert_eq!(v(2).pow(&v(999), 1000).exact().map(|e| e.bits()), Some(1000));
        let huge = v(2).pow(&BoundValue::Astronomical, 1000);
        assert!(huge.is_astronomical());
        assert_eq!(huge.mul(&v(0), 1000), v(0));
    }

    #[test]
    fn admits_respects_strictness() {
        let four = BigUint::from(4u32);
        assert!(v(4).admits(&four, false));
        assert!(!v(4).admits(&four, true));
        assert!(BoundValue::Astronomical.admits(&four, true));
        let check = BoundCheck::new("T", four, v(4), false);
        assert_eq!(check.to_string(), "T: 4 <= 4: PASS");
    }
}
