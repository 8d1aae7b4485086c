//! Exact nonnegative integers too large to store in binary.
//!
//! A [`Magnitude`] is either an ordinary integer of at most [`INT_LIMIT`] bits
//! or `coef * 2^exp + offset`, where `coef` is odd, `exp` is itself a
//! magnitude larger than `INT_LIMIT`, and `|offset|` is below
//! `2^(INT_LIMIT-1)`. Under those bounds the representation is unique, so comparisons are
//! exact and structural.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest bit length kept as a plain integer.
pub const INT_LIMIT: u64 = 1 << 20;

/// Largest coefficient bit length in scaled form.
const COEF_LIMIT: u64 = 4096;

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Magnitude {
    Int(#[serde(with = "biguint_text")] BigUint),
    Scaled {
        #[serde(with = "biguint_text")]
        coef: BigUint,
        exp: Box<Magnitude>,
        #[serde(with = "bigint_text")]
        offset: BigInt,
    },
}

mod biguint_text {
    use num_bigint::BigUint;
    use serde::{de::Error, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &BigUint, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&v.to_str_radix(10))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigUint, D::Error> {
        let text = String::deserialize(d)?;
        text.parse().map_err(D::Error::custom)
    }
}

mod bigint_text {
    use num_bigint::BigInt;
    use serde::{de::Error, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &BigInt, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&v.to_str_radix(10))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigInt, D::Error> {
        let text = String::deserialize(d)?;
        text.parse().map_err(D::Error::custom)
    }
}

fn too_big(what: &str) -> Error {
    Error::NotRepresentable(what.to_string())
}

impl From<u64> for Magnitude {
    fn from(v: u64) -> Self {
        Magnitude::Int(BigUint::from(v))
    }
}

impl Magnitude {
    pub fn zero() -> Self {
        Magnitude::Int(BigUint::zero())
    }

    pub fn one() -> Self {
        Magnitude::Int(BigUint::one())
    }

    pub fn int(v: BigUint) -> Result<Self> {
        if v.bits() > INT_LIMIT {
            return Err(too_big("integer longer than the plain limit"));
        }
        Ok(Magnitude::Int(v))
    }

    pub fn as_int(&self) -> Option<&BigUint> {
        match self {
            Magnitude::Int(v) => Some(v),
            Magnitude::Scaled { .. } => None,
        }
    }

    pub fn to_u64(&self) -> Option<u64> {
        self.as_int().and_then(|v| v.to_u64())
    }

    pub fn is_int(&self) -> bool {
        matches!(self, Magnitude::Int(_))
    }

    /// Nesting depth: 0 for plain integers.
    pub fn depth(&self) -> usize {
        match self {
            Magnitude::Int(_) => 0,
            Magnitude::Scaled { exp, .. } => 1 + exp.depth(),
        }
    }

    fn limit() -> Magnitude {
        Magnitude::from(INT_LIMIT)
    }

    /// Builds `coef * 2^exp + offset`, normalizing to the canonical form.
    pub fn scaled(coef: BigUint, exp: Magnitude, offset: BigInt) -> Result<Self> {
        if coef.is_zero() {
            return Err(too_big("zero coefficient"));
        }
        let (coef, exp) = {
            let tz = coef.trailing_zeros().unwrap_or(0);
            (coef >> tz, exp.add_int(&BigInt::from(tz))?)
        };
        if let Some(e) = exp.to_u64().filter(|e| e + coef.bits() <= INT_LIMIT) {
            let total = BigInt::from(coef << e) + offset;
            let v = total
                .to_biguint()
                .ok_or_else(|| too_big("negative value"))?;
            return Magnitude::int(v);
        }
        if exp <= Magnitude::limit() {
            return Err(too_big("value between the plain and scaled ranges"));
        }
        if coef.bits() > COEF_LIMIT {
            return Err(too_big("coefficient too long"));
        }
        if offset.bits() >= INT_LIMIT {
            return Err(too_big("offset too long"));
        }
        Ok(Magnitude::Scaled {
            coef,
            exp: Box::new(exp),
            offset,
        })
    }

    /// `2^e`.
    pub fn pow2(e: &Magnitude) -> Result<Self> {
        Magnitude::scaled(BigUint::one(), e.clone(), BigInt::zero())
    }

    pub fn add_int(&self, k: &BigInt) -> Result<Self> {
        match self {
            Magnitude::Int(v) => {
                let total = BigInt::from(v.clone()) + k;
                let v = total
                    .to_biguint()
                    .ok_or_else(|| too_big("negative value"))?;
                if v.bits() > INT_LIMIT {
                    let tz = v.trailing_zeros().unwrap_or(0);
                    // only powers of two times small odd parts can be rescaled
                    return Magnitude::scaled(v >> tz, Magnitude::from(tz), BigInt::zero());
                }
                Ok(Magnitude::Int(v))
            }
            Magnitude::Scaled { coef, exp, offset } => {
                Magnitude::scaled(coef.clone(), (**exp).clone(), offset + k)
            }
        }
    }

    pub fn add_u64(&self, k: u64) -> Result<Self> {
        self.add_int(&BigInt::from(k))
    }

    pub fn sub_u64(&self, k: u64) -> Result<Self> {
        self.add_int(&-BigInt::from(k))
    }

    pub fn add(&self, other: &Magnitude) -> Result<Self> {
        match (self, other) {
            (Magnitude::Int(b), m) | (m, Magnitude::Int(b)) => m.add_int(&BigInt::from(b.clone())),
            (
                Magnitude::Scaled {
                    coef: ca,
                    exp: ea,
                    offset: oa,
                },
                Magnitude::Scaled {
                    coef: cb,
                    exp: eb,
                    offset: ob,
                },
            ) => {
                let d = ea
                    .diff_small(eb)
                    .ok_or_else(|| too_big("sum of unrelated scales"))?;
                let (coef, exp) = if d >= 0 {
                    ((ca << d as u64) + cb, (**eb).clone())
                } else {
                    (ca + (cb << (-d) as u64), (**ea).clone())
                };
                Magnitude::scaled(coef, exp, oa + ob)
            }
        }
    }

    pub fn mul(&self, other: &Magnitude) -> Result<Self> {
        match (self, other) {
            (Magnitude::Int(a), Magnitude::Int(b)) => {
                if a.bits() + b.bits() > INT_LIMIT + 1 {
                    let tz_a = a.trailing_zeros().unwrap_or(0);
                    let tz_b = b.trailing_zeros().unwrap_or(0);
                    return Magnitude::scaled(
                        (a >> tz_a) * (b >> tz_b),
                        Magnitude::from(tz_a + tz_b),
                        BigInt::zero(),
                    );
                }
                Magnitude::int(a * b)
            }
            (Magnitude::Int(c), Magnitude::Scaled { coef, exp, offset })
            | (Magnitude::Scaled { coef, exp, offset }, Magnitude::Int(c)) => {
                if c.is_zero() {
                    return Ok(Magnitude::zero());
                }
                Magnitude::scaled(coef * c, (**exp).clone(), offset * BigInt::from(c.clone()))
            }
            (
                Magnitude::Scaled {
                    coef: ca,
                    exp: ea,
                    offset: oa,
                },
                Magnitude::Scaled {
                    coef: cb,
                    exp: eb,
                    offset: ob,
                },
            ) => {
                if !oa.is_zero() || !ob.is_zero() {
                    return Err(too_big("product of offset scales"));
                }
                Magnitude::scaled(ca * cb, ea.add(eb)?, BigInt::zero())
            }
        }
    }

    pub fn mul_u64(&self, k: u64) -> Result<Self> {
        self.mul(&Magnitude::from(k))
    }

    /// `self * 2^k`.
    pub fn shl(&self, k: &Magnitude) -> Result<Self> {
        self.mul(&Magnitude::pow2(k)?)
    }

    /// `floor(self / 2^k)` for a plain shift `k`.
    pub fn shr(&self, k: u64) -> Result<Self> {
        match self {
            Magnitude::Int(v) => Ok(Magnitude::Int(v >> k)),
            Magnitude::Scaled { coef, exp, offset } => {
                let e = exp.sub_u64(k)?;
                let (q, _) = offset.div_mod_floor(&(BigInt::one() << k));
                Magnitude::scaled(coef.clone(), e, q)
            }
        }
    }

    /// `floor(log2 self)`; errors on zero.
    pub fn floor_log2(&self) -> Result<Self> {
        match self {
            Magnitude::Int(v) => {
                if v.is_zero() {
                    return Err(Error::OutOfRange("log of zero".into()));
                }
                Ok(Magnitude::from(v.bits() - 1))
            }
            Magnitude::Scaled { coef, exp, offset } => {
                let b = coef.bits() - 1;
                if coef.is_one() && offset.is_negative() {
                    exp.sub_u64(1)
                } else {
                    exp.add_u64(b)
                }
            }
        }
    }

    /// `ceil(log2 self)`; errors on zero.
    pub fn ceil_log2(&self) -> Result<Self> {
        match self {
            Magnitude::Int(v) => {
                if v.is_zero() {
                    return Err(Error::OutOfRange("log of zero".into()));
                }
                let f = v.bits() - 1;
                let exact = v.trailing_zeros() == Some(f);
                Ok(Magnitude::from(if exact { f } else { f + 1 }))
            }
            Magnitude::Scaled { coef, exp, offset } => {
                if coef.is_one() && !offset.is_positive() {
                    exp.add_u64(0)
                } else {
                    exp.add_u64(coef.bits())
                }
            }
        }
    }

    /// `self - other` when it fits in an `i64`, else `None`.
    pub fn diff_small(&self, other: &Magnitude) -> Option<i64> {
        match (self, other) {
            (Magnitude::Int(a), Magnitude::Int(b)) => {
                (BigInt::from(a.clone()) - BigInt::from(b.clone())).to_i64()
            }
            (
                Magnitude::Scaled {
                    coef: ca,
                    exp: ea,
                    offset: oa,
                },
                Magnitude::Scaled {
                    coef: cb,
                    exp: eb,
                    offset: ob,
                },
            ) if ca == cb && ea == eb => (oa - ob).to_i64(),
            _ => None,
        }
    }

    /// Sign of `coef_a * 2^(ea - eb) - coef_b` style comparisons when the
    /// exponents differ by `d`, together with offsets.
    fn cmp_scaled(
        ca: &BigUint,
        ea: &Magnitude,
        oa: &BigInt,
        cb: &BigUint,
        eb: &Magnitude,
        ob: &BigInt,
    ) -> Ordering {
        match ea.diff_small(eb) {
            Some(d) if d.unsigned_abs() <= 2 * COEF_LIMIT => {
                let (lhs, rhs) = if d >= 0 {
                    (ca << d as u64, cb.clone())
                } else {
                    (ca.clone(), cb << (-d) as u64)
                };
                // the smaller exponent exceeds INT_LIMIT, so offsets cannot
                // bridge a nonzero coefficient gap
                lhs.cmp(&rhs).then_with(|| oa.cmp(ob))
            }
            _ => {
                // exponents far apart: the larger one wins unless the
                // coefficients compensate, which COEF_LIMIT rules out
                let la = ea.add_u64(ca.bits()).expect("bounded");
                let lb = eb.add_u64(cb.bits()).expect("bounded");
                la.cmp(&lb)
            }
        }
    }
}

impl Ord for Magnitude {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Magnitude::Int(a), Magnitude::Int(b)) => a.cmp(b),
            (Magnitude::Int(_), Magnitude::Scaled { .. }) => Ordering::Less,
            (Magnitude::Scaled { .. }, Magnitude::Int(_)) => Ordering::Greater,
            (
                Magnitude::Scaled {
                    coef: ca,
                    exp: ea,
                    offset: oa,
                },
                Magnitude::Scaled {
                    coef: cb,
                    exp: eb,
                    offset: ob,
                },
            ) => Magnitude::cmp_scaled(ca, ea, oa, cb, eb, ob),
        }
    }
}

impl PartialOrd for Magnitude {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Magnitude {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Magnitude::Int(v) if v.bits() <= 256 => write!(f, "{v}"),
            Magnitude::Int(v) => write!(f, "<{}-bit integer>", v.bits()),
            Magnitude::Scaled { coef, exp, offset } => {
                if !coef.is_one() {
                    write!(f, "{coef}*")?;
                }
                write!(f, "2^({exp})")?;
                match offset.sign() {
                    Sign::Minus => write!(f, "-{}", offset.magnitude()),
                    Sign::Plus => write!(f, "+{offset}"),
                    Sign::NoSign => Ok(()),
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn big_exp(extra: u64) -> Magnitude {
        Magnitude::from(INT_LIMIT + 1 + extra)
    }

    #[test]
    fn small_values_stay_plain() {
        let m = Magnitude::pow2(&Magnitude::from(100)).unwrap();
        assert_eq!(m, Magnitude::Int(BigUint::one() << 100u32));
        assert_eq!(m.floor_log2().unwrap(), Magnitude::from(100));
        assert_eq!(
            m.sub_u64(1).unwrap().ceil_log2().unwrap(),
            Magnitude::from(100)
        );
    }

    #[test]
    fn scaled_ordering() {
        let e = big_exp(5);
        let a = Magnitude::pow2(&e).unwrap();
        let a_minus = a.sub_u64(1).unwrap();
        let b = Magnitude::pow2(&e.add_u64(1).unwrap()).unwrap();
        let three = a.mul_u64(3).unwrap();
        assert!(a_minus < a);
        assert!(a < three);
        assert!(b < three);
        assert!(Magnitude::from(u64::MAX) < a_minus);
        assert_eq!(a.add(&a).unwrap(), b);
        assert_eq!(a.mul_u64(2).unwrap(), b);
    }

    #[test]
    fn logs_of_scaled() {
        let e = big_exp(7);
        let a = Magnitude::pow2(&e).unwrap();
        assert_eq!(a.floor_log2().unwrap(), e);
        assert_eq!(a.ceil_log2().unwrap(), e);
        let below = a.sub_u64(1).unwrap();
        assert_eq!(below.floor_log2().unwrap(), e.sub_u64(1).unwrap());
        assert_eq!(below.ceil_log2().unwrap(), e);
        let above = a.add_u64(1).unwrap();
        assert_eq!(above.floor_log2().unwrap(), e);
        assert_eq!(above.ceil_log2().unwrap(), e.add_u64(1).unwrap());
        let five = a.mul_u64(5).unwrap();
        assert_eq!(five.floor_log2().unwrap(), e.add_u64(2).unwrap());
    }

    #[test]
    fn towers_compare() {
        let x = big_exp(0);
        let y = Magnitude::pow2(&x).unwrap();
        let z = Magnitude::pow2(&y).unwrap();
        let z2 = Magnitude::pow2(&y.add_u64(1).unwrap()).unwrap();
        assert_eq!(z.depth(), 2);
        assert!(y < z);
        assert!(z < z2);
        let square = z.mul(&z).unwrap();
        assert_eq!(square, Magnitude::pow2(&y.mul_u64(2).unwrap()).unwrap());
        assert!(z2 < square);
        assert!(z.sub_u64(1).unwrap() < z);
        assert!(z.shr(3).unwrap() < z);
        assert_eq!(z.shr(1).unwrap().mul_u64(2).unwrap(), z);
    }

    #[test]
    fn json_round_trip() {
        let y = Magnitude::pow2(&big_exp(3))
            .unwrap()
            .mul_u64(7)
            .unwrap()
            .sub_u64(9)
            .unwrap();
        let text = serde_json::to_string(&y).unwrap();
        let back: Magnitude = serde_json::from_str(&text).unwrap();
        assert_eq!(back, y);
        let small = Magnitude::from(42);
        assert_eq!(serde_json::to_string(&small).unwrap(), "\"42\"");
    }

    #[test]
    fn unrepresentable_is_an_error() {
        let a = Magnitude::pow2(&big_exp(0)).unwrap();
        let b = Magnitude::pow2(&a).unwrap();
        assert!(a.add(&b).is_err());
        assert!(a.sub_u64(1).unwrap().mul(&a).is_err());
        assert_eq!(a.add(&b).unwrap_err().reason(), "not_representable");
    }

    proptest! {
        // scaled arithmetic mirrors plain arithmetic under a uniform shift
        #[test]
        fn order_matches_shifted_integers(
            ca in 1u64..1000, cb in 1u64..1000,
            da in 0u64..12, db in 0u64..12,
            oa in -1000i64..1000, ob in -1000i64..1000,
        ) {
            let base = INT_LIMIT + 1;
            let a = Magnitude::scaled(BigUint::from(ca), Magnitude::from(base + da), BigInt::from(oa)).unwrap();
            let b = Magnitude::scaled(BigUint::from(cb), Magnitude::from(base + db), BigInt::from(ob)).unwrap();
            // compare (c 2^d) scaled by 2^base plus tiny offsets
            let va = BigUint::from(ca) << da;
            let vb = BigUint::from(cb) << db;
            let expected = va.cmp(&vb).then(oa.cmp(&ob));
            prop_assert_eq!(a.cmp(&b), expected);
        }

        #[test]
        fn plain_ops_exact(a in 0u64..1 << 40, b in 0u64..1 << 20) {
            let ma = Magnitude::from(a);
            let mb = Magnitude::from(b);
            prop_assert_eq!(ma.add(&mb).unwrap(), Magnitude::from(a + b));
            prop_assert_eq!(ma.mul(&mb).unwrap().as_int().unwrap().clone(), BigUint::from(a) * b);
            prop_assert_eq!(ma.cmp(&mb), a.cmp(&b));
            if a > 0 {
                prop_assert_eq!(ma.floor_log2().unwrap(), Magnitude::from(63 - a.leading_zeros() as u64));
            }
        }
    }
}
