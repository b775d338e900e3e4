//! Extended scalar domains: `ExtNat` (ℕ ∪ {∞}) for the coordinates of the
//! concrete models and `ExtValue` (ℚ≥0 ∪ {∞}) for the values of functionals.

use std::fmt;
use std::iter::Sum;
use std::ops::Add;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::de::{self, Deserializer, Visitor};
use serde::{Deserialize, Serialize, Serializer};

use crate::error::Error;

/// Exact rational scalar used throughout the crate.
pub type Rational = BigRational;

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Parses `"p"`, `"p/q"` or `"-p/q"` into an exact rational.
pub fn parse_rational(s: &str) -> Result<Rational, Error> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational literal: {s:?}"));
    match s.split_once('/') {
        Some((n, d)) => {
            let n = BigInt::from_str(n.trim()).map_err(|_| bad())?;
            let d = BigInt::from_str(d.trim()).map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(Rational::new(n, d))
        }
        None => Ok(Rational::from_integer(BigInt::from_str(s).map_err(|_| bad())?)),
    }
}

/// A natural number or ∞. Variant order makes every finite value below ∞.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ExtNat {
    Fin(u64),
    Inf,
}

impl ExtNat {
    pub const ZERO: ExtNat = ExtNat::Fin(0);

    pub fn is_finite(self) -> bool {
        matches!(self, ExtNat::Fin(_))
    }

    pub fn is_zero(self) -> bool {
        self == ExtNat::ZERO
    }

    pub fn finite(self) -> Option<u64> {
        match self {
            ExtNat::Fin(n) => Some(n),
            ExtNat::Inf => None,
        }
    }

    /// `n · self` for a natural multiplier; `0 · ∞ = 0` here is the monoid
    /// identity `0x = 0`, not a product of extended reals.
    pub fn times(self, n: u64) -> ExtNat {
        match self {
            _ if n == 0 => ExtNat::ZERO,
            ExtNat::Fin(a) => ExtNat::Fin(a.checked_mul(n).expect("ExtNat overflow")),
            ExtNat::Inf => ExtNat::Inf,
        }
    }

    /// Truncation `min(self, n)`.
    pub fn truncate(self, n: u64) -> ExtNat {
        self.min(ExtNat::Fin(n))
    }
}

impl Add for ExtNat {
    type Output = ExtNat;
    fn add(self, rhs: ExtNat) -> ExtNat {
        match (self, rhs) {
            (ExtNat::Fin(a), ExtNat::Fin(b)) => {
                ExtNat::Fin(a.checked_add(b).expect("ExtNat overflow"))
            }
            _ => ExtNat::Inf,
        }
    }
}

impl fmt::Display for ExtNat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtNat::Fin(n) => write!(f, "{n}"),
            ExtNat::Inf => f.write_str("inf"),
        }
    }
}

impl Serialize for ExtNat {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            ExtNat::Fin(n) => s.serialize_u64(*n),
            ExtNat::Inf => s.serialize_str("inf"),
        }
    }
}

impl<'de> Deserialize<'de> for ExtNat {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        struct V;
        impl Visitor<'_> for V {
            type Value = ExtNat;
            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("a nonnegative integer or \"inf\"")
            }
            fn visit_u64<E: de::Error>(self, v: u64) -> Result<ExtNat, E> {
                Ok(ExtNat::Fin(v))
            }
            fn visit_i64<E: de::Error>(self, v: i64) -> Result<ExtNat, E> {
                u64::try_from(v)
                    .map(ExtNat::Fin)
                    .map_err(|_| E::custom("negative coordinate"))
            }
            fn visit_str<E: de::Error>(self, v: &str) -> Result<ExtNat, E> {
                if v == "inf" {
                    Ok(ExtNat::Inf)
                } else {
                    v.parse().map(ExtNat::Fin).map_err(E::custom)
                }
            }
        }
        d.deserialize_any(V)
    }
}

/// An element of [0, ∞] with exact rational finite part.
///
/// Addition absorbs ∞. Scalar multiplication is only offered for strictly
/// positive rationals, so `t · ∞ = ∞` never needs a `0 · ∞` convention.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ExtValue {
    Fin(Rational),
    Inf,
}

impl ExtValue {
    pub fn zero() -> ExtValue {
        ExtValue::Fin(Rational::zero())
    }

    pub fn from_int(n: i64) -> ExtValue {
        ExtValue::Fin(int(n))
    }

    /// Checked constructor; negative rationals are rejected.
    pub fn finite(q: Rational) -> Result<ExtValue, Error> {
        if q.is_negative() {
            return Err(Error::Parse(format!("negative value {q} in [0, inf]")));
        }
        Ok(ExtValue::Fin(q))
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, ExtValue::Fin(_))
    }

    pub fn is_inf(&self) -> bool {
        matches!(self, ExtValue::Inf)
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, ExtValue::Fin(q) if q.is_zero())
    }

    pub fn as_finite(&self) -> Option<&Rational> {
        match self {
            ExtValue::Fin(q) => Some(q),
            ExtValue::Inf => None,
        }
    }

    /// `t · self` for `t > 0`; `None` for `t ≤ 0`.
    pub fn scale(&self, t: &Rational) -> Option<ExtValue> {
        if !t.is_positive() {
            return None;
        }
        Some(match self {
            ExtValue::Fin(q) => ExtValue::Fin(q * t),
            ExtValue::Inf => ExtValue::Inf,
        })
    }

    /// Truncated difference used by refinement bookkeeping:
    /// `∞ − finite = ∞`, `∞ − ∞ = 0`, finite differences clamp at 0.
    pub fn monus(&self, rhs: &ExtValue) -> ExtValue {
        match (self, rhs) {
            (ExtValue::Inf, ExtValue::Fin(_)) => ExtValue::Inf,
            (ExtValue::Inf, ExtValue::Inf) | (ExtValue::Fin(_), ExtValue::Inf) => ExtValue::zero(),
            (ExtValue::Fin(a), ExtValue::Fin(b)) => {
                if a > b {
                    ExtValue::Fin(a - b)
                } else {
                    ExtValue::zero()
                }
            }
        }
    }
}

impl Default for ExtValue {
    fn default() -> ExtValue {
        ExtValue::zero()
    }
}

impl Add for ExtValue {
    type Output = ExtValue;
    fn add(self, rhs: ExtValue) -> ExtValue {
        match (self, rhs) {
            (ExtValue::Fin(a), ExtValue::Fin(b)) => ExtValue::Fin(a + b),
            _ => ExtValue::Inf,
        }
    }
}

impl<'a> Add<&'a ExtValue> for &'a ExtValue {
    type Output = ExtValue;
    fn add(self, rhs: &ExtValue) -> ExtValue {
        match (self, rhs) {
            (ExtValue::Fin(a), ExtValue::Fin(b)) => ExtValue::Fin(a + b),
            _ => ExtValue::Inf,
        }
    }
}

impl Sum for ExtValue {
    fn sum<I: Iterator<Item = ExtValue>>(iter: I) -> ExtValue {
        iter.fold(ExtValue::zero(), |a, b| a + b)
    }
}

impl From<Rational> for ExtValue {
    fn from(q: Rational) -> Self {
        ExtValue::Fin(q)
    }
}

impl fmt::Display for ExtValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtValue::Fin(q) => write!(f, "{q}"),
            ExtValue::Inf => f.write_str("inf"),
        }
    }
}

impl FromStr for ExtValue {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self, Error> {
        if s.trim() == "inf" {
            Ok(ExtValue::Inf)
        } else {
            ExtValue::finite(parse_rational(s)?)
        }
    }
}

impl Serialize for ExtValue {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for ExtValue {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        struct V;
        impl Visitor<'_> for V {
            type Value = ExtValue;
            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("a rational string \"p/q\", an integer, or \"inf\"")
            }
            fn visit_u64<E: de::Error>(self, v: u64) -> Result<ExtValue, E> {
                Ok(ExtValue::Fin(Rational::from_integer(BigInt::from(v))))
            }
            fn visit_i64<E: de::Error>(self, v: i64) -> Result<ExtValue, E> {
                ExtValue::finite(int(v)).map_err(E::custom)
            }
            fn visit_str<E: de::Error>(self, v: &str) -> Result<ExtValue, E> {
                v.parse().map_err(E::custom)
            }
        }
        d.deserialize_any(V)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn ext() -> impl Strategy<Value = ExtValue> {
        prop_oneof![
            1 => Just(ExtValue::Inf),
            4 => (0i64..20, 1i64..6).prop_map(|(n, d)| ExtValue::Fin(rat(n, d))),
        ]
    }

    #[test]
    fn parse_and_display() {
        assert_eq!("3/2".parse::<ExtValue>().unwrap(), ExtValue::Fin(rat(3, 2)));
        assert_eq!("inf".parse::<ExtValue>().unwrap(), ExtValue::Inf);
        assert_eq!(ExtValue::Fin(rat(4, 2)).to_string(), "2");
        assert!("-1".parse::<ExtValue>().is_err());
        assert!("1/0".parse::<ExtValue>().is_err());
    }

    #[test]
    fn infinity_is_top_and_absorbing() {
        assert!(ExtValue::Fin(int(1_000_000)) < ExtValue::Inf);
        assert_eq!(ExtValue::from_int(3) + ExtValue::Inf, ExtValue::Inf);
        assert_eq!(ExtNat::Fin(2) + ExtNat::Inf, ExtNat::Inf);
        assert!(ExtNat::Fin(u64::MAX) < ExtNat::Inf);
    }

    #[test]
    fn scaling_needs_positive_scalar() {
        assert_eq!(ExtValue::Inf.scale(&rat(1, 3)), Some(ExtValue::Inf));
        assert_eq!(ExtValue::from_int(3).scale(&rat(1, 3)), Some(ExtValue::from_int(1)));
        assert_eq!(ExtValue::Inf.scale(&int(0)), None);
    }

    #[test]
    fn serde_roundtrip_strings() {
        let v: Vec<ExtValue> = serde_json::from_str(r#"["1/2", "inf", 3]"#).unwrap();
        assert_eq!(serde_json::to_string(&v).unwrap(), r#"["1/2","inf","3"]"#);
        let n: Vec<ExtNat> = serde_json::from_str(r#"[0, "inf", 7]"#).unwrap();
        assert_eq!(n, vec![ExtNat::ZERO, ExtNat::Inf, ExtNat::Fin(7)]);
    }

    proptest! {
        #[test]
        fn addition_is_a_commutative_monoid(a in ext(), b in ext(), c in ext()) {
            prop_assert_eq!(&a + &b, &b + &a);
            prop_assert_eq!((&a + &b) + c.clone(), a.clone() + (&b + &c));
            prop_assert_eq!(&a + &ExtValue::zero(), a.clone());
            prop_assert!(a <= &a + &b);
        }

        #[test]
        fn scaling_distributes(a in ext(), b in ext(), n in 1i64..5, d in 1i64..5) {
            let t = rat(n, d);
            prop_assert_eq!((&a + &b).scale(&t), Some(a.scale(&t).unwrap() + b.scale(&t).unwrap()));
        }
    }
}
