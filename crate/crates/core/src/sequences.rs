//! Integer sequences `(s_n)_{n >= 1}` given by named presets or tables.
//!
//! Every preset is nondecreasing. Besides exact evaluation at machine-sized
//! indices, presets can be bounded at [`Magnitude`] indices and inverted:
//! "least index beyond `lower` whose value exceeds `v`".

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::magnitude::Magnitude;
use crate::words::{frac_text, Frac};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Sequence {
    /// `floor(coef * n^degree) + offset`.
    Polynomial {
        #[serde(with = "frac_text", default = "one")]
        coef: Frac,
        degree: u32,
        #[serde(default)]
        offset: i64,
    },
    /// `floor(coef * floor(log2(n+1))) + offset`.
    Log {
        #[serde(with = "frac_text", default = "one")]
        coef: Frac,
        #[serde(default)]
        offset: i64,
    },
    /// `floor(coef * floor(log2(floor(log2(n+1)) + 1))) + offset`.
    IteratedLog {
        #[serde(with = "frac_text", default = "one")]
        coef: Frac,
        #[serde(default)]
        offset: i64,
    },
    /// `values[n-1]`.
    Table { values: Vec<u64> },
}

fn one() -> Frac {
    Frac::from_integer(1)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Bound {
    Lower,
    Upper,
}

/// Result of an inverse query.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Crossing {
    pub index: Magnitude,
    /// False when only a power-of-two witness was found.
    pub minimal: bool,
}

fn floor_log2_u64(n: u64) -> u64 {
    63 - n.leading_zeros() as u64
}

fn clamp(v: BigInt) -> BigUint {
    v.to_biguint().unwrap_or_default()
}

fn scale_floor(coef: Frac, x: &BigUint) -> BigUint {
    x * coef.numer() / coef.denom()
}

impl Sequence {
    pub fn polynomial(coef: Frac, degree: u32) -> Self {
        Sequence::Polynomial {
            coef,
            degree,
            offset: 0,
        }
    }

    pub fn log(coef: Frac, offset: i64) -> Self {
        Sequence::Log { coef, offset }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            Sequence::Polynomial { coef, .. } | Sequence::Log { coef, .. } | Sequence::IteratedLog { coef, .. } => {
                if coef.is_zero() {
                    return Err(Error::Precondition("sequence coefficient must be positive".into()));
                }
            }
            Sequence::Table { values } => {
                if values.windows(2).any(|w| w[0] > w[1]) {
                    return Err(Error::Precondition("table sequence must be nondecreasing".into()));
                }
            }
        }
        Ok(())
    }

    /// Exact `s_n` for `n >= 1`.
    pub fn eval(&self, n: u64) -> Result<BigUint> {
        if n == 0 {
            return Err(Error::OutOfRange("sequences are indexed from 1".into()));
        }
        Ok(match self {
            Sequence::Polynomial { coef, degree, offset } => {
                let base = scale_floor(*coef, &BigUint::from(n).pow(*degree));
                clamp(BigInt::from(base) + offset)
            }
            Sequence::Log { coef, offset } => {
                let l = floor_log2_u64(n + 1);
                clamp(BigInt::from(scale_floor(*coef, &BigUint::from(l))) + offset)
            }
            Sequence::IteratedLog { coef, offset } => {
                let l = floor_log2_u64(floor_log2_u64(n + 1) + 1);
                clamp(BigInt::from(scale_floor(*coef, &BigUint::from(l))) + offset)
            }
            Sequence::Table { values } => BigUint::from(
                *values
                    .get(n as usize - 1)
                    .ok_or_else(|| Error::OutOfRange(format!("table has no entry {n}")))?,
            ),
        })
    }

    /// A bound on `s_n` in the requested direction, exact whenever the
    /// arithmetic allows it.
    pub fn eval_bound(&self, n: &Magnitude, dir: Bound) -> Result<Magnitude> {
        if let Some(small) = n.to_u64() {
            return Magnitude::int(self.eval(small)?);
        }
        let (coef, offset, inner) = match self {
            Sequence::Polynomial { coef, degree, offset } => {
                let power = |base: &Magnitude| -> Result<Magnitude> {
                    (0..*degree).try_fold(Magnitude::one(), |acc, _| acc.mul(base))
                };
                let acc = match power(n) {
                    Ok(acc) => acc,
                    // monotone: round the index to a power of two in the bound's direction
                    Err(Error::NotRepresentable(_)) => {
                        let e = match dir {
                            Bound::Lower => n.floor_log2()?,
                            Bound::Upper => n.ceil_log2()?,
                        };
                        power(&Magnitude::pow2(&e)?)?
                    }
                    Err(e) => return Err(e),
                };
                (*coef, *offset, acc)
            }
            Sequence::Log { coef, offset } => (*coef, *offset, n.add_u64(1)?.floor_log2()?),
            Sequence::IteratedLog { coef, offset } => {
                let l = n.add_u64(1)?.floor_log2()?.add_u64(1)?.floor_log2()?;
                (*coef, *offset, l)
            }
            Sequence::Table { .. } => {
                return Err(Error::OutOfRange("table sequences need a small index".into()));
            }
        };
        let scaled = scale_bound(&inner, coef, dir)?;
        scaled.add_int(&BigInt::from(offset))
    }

    /// Least index `P > lower` with `s_P > v`.
    pub fn least_index_above(&self, v: &Magnitude, lower: &Magnitude) -> Result<Crossing> {
        let floor_index = lower.add_u64(1)?;
        let clamp_lower = |c: Crossing| {
            if c.index < floor_index {
                Crossing {
                    index: floor_index.clone(),
                    minimal: true,
                }
            } else {
                c
            }
        };
        match self {
            Sequence::Table { values } => {
                let v = v.as_int().ok_or_else(|| Error::Horizon("table too short".into()))?;
                let start = floor_index
                    .to_u64()
                    .ok_or_else(|| Error::Horizon("table too short".into()))?;
                (start..=values.len() as u64)
                    .find(|&n| BigUint::from(values[n as usize - 1]) > *v)
                    .map(|n| Crossing {
                        index: Magnitude::from(n),
                        minimal: true,
                    })
                    .ok_or_else(|| Error::Horizon(format!("table never exceeds {v}")))
            }
            Sequence::Polynomial { coef, degree, offset } => {
                let Some(r) = required(v, *offset)? else {
                    return Ok(clamp_lower(Crossing {
                        index: Magnitude::one(),
                        minimal: true,
                    }));
                };
                // need coef * n^d >= r
                if *degree == 0 {
                    return if scale_bound(&Magnitude::one(), *coef, Bound::Lower)? >= r {
                        Ok(clamp_lower(Crossing {
                            index: Magnitude::one(),
                            minimal: true,
                        }))
                    } else {
                        Err(Error::Horizon("constant sequence never exceeds the target".into()))
                    };
                }
                if let Some(r) = r.as_int() {
                    let target = ceil_div(&(r * coef.denom()), &BigUint::from(*coef.numer()));
                    let mut root = target.nth_root(*degree);
                    if root.pow(*degree) < target {
                        root += 1u32;
                    }
                    let root = root.max(BigUint::one());
                    return Ok(clamp_lower(Crossing {
                        index: Magnitude::int(root)?,
                        minimal: true,
                    }));
                }
                // n = 2^t with t * d >= ceil_log2(r * q)
                let bits = r.mul_u64(*coef.denom())?.ceil_log2()?;
                let t = ceil_div_magnitude(&bits, *degree as u64)?;
                Ok(clamp_lower(Crossing {
                    index: Magnitude::pow2(&t)?,
                    minimal: false,
                }))
            }
            Sequence::Log { coef, offset } | Sequence::IteratedLog { coef, offset } => {
                let Some(r) = required(v, *offset)? else {
                    return Ok(clamp_lower(Crossing {
                        index: Magnitude::one(),
                        minimal: true,
                    }));
                };
                // need floor(log2(n+1)) (or its iterate) >= ceil(r q / p)
                let l0 = if coef.numer().is_one() {
                    r.mul_u64(*coef.denom())?
                } else {
                    let r = r.as_int().ok_or_else(|| {
                        Error::NotRepresentable("log preset with non-unit numerator at a huge target".into())
                    })?;
                    Magnitude::int(ceil_div(&(r * coef.denom()), &BigUint::from(*coef.numer())))?
                };
                let l0 = if matches!(self, Sequence::IteratedLog { .. }) {
                    Magnitude::pow2(&l0)?.sub_u64(1)?
                } else {
                    l0
                };
                Ok(clamp_lower(Crossing {
                    index: Magnitude::pow2(&l0)?.sub_u64(1)?.max(Magnitude::one()),
                    minimal: true,
                }))
            }
        }
    }
}

/// `v - offset + 1` when positive.
fn required(v: &Magnitude, offset: i64) -> Result<Option<Magnitude>> {
    let shift = BigInt::one() - offset;
    if let Some(v) = v.as_int() {
        let r = BigInt::from(v.clone()) + shift;
        return Ok((r.is_positive()).then(|| Magnitude::Int(r.to_biguint().expect("positive"))));
    }
    v.add_int(&shift).map(Some)
}

fn ceil_div(a: &BigUint, b: &BigUint) -> BigUint {
    (a + b - 1u32) / b
}

fn ceil_div_magnitude(m: &Magnitude, d: u64) -> Result<Magnitude> {
    if let Some(v) = m.as_int() {
        return Magnitude::int(ceil_div(v, &BigUint::from(d)));
    }
    if d.is_power_of_two() {
        let k = d.trailing_zeros() as u64;
        return m.add_u64(d - 1)?.shr(k);
    }
    Err(Error::NotRepresentable("root of a huge target with a non-power-of-two degree".into()))
}

/// `floor(coef * x)` exactly when possible, else bounded by shifting.
fn scale_bound(x: &Magnitude, coef: Frac, dir: Bound) -> Result<Magnitude> {
    if let Some(v) = x.as_int() {
        return Magnitude::int(scale_floor(coef, v));
    }
    let p = x.mul_u64(*coef.numer())?;
    let q = *coef.denom();
    if q == 1 {
        return Ok(p);
    }
    let shift = match dir {
        Bound::Lower => 64 - (q - 1).leading_zeros() as u64,
        Bound::Upper => floor_log2_u64(q),
    };
    p.shr(shift)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::magnitude::INT_LIMIT;

    fn a_log() -> Sequence {
        Sequence::log(Frac::from_integer(1), 1)
    }

    #[test]
    fn evaluations() {
        let sq = Sequence::polynomial(Frac::from_integer(1), 2);
        assert_eq!(sq.eval(7).unwrap(), BigUint::from(49u32));
        let half = Sequence::polynomial(Frac::new(1, 2), 1);
        assert_eq!(half.eval(7).unwrap(), BigUint::from(3u32));
        // floor(log2(n+1)) + 1
        let expected = [2u32, 2, 3, 3, 3, 3, 4, 4];
        for (i, e) in expected.iter().enumerate() {
            assert_eq!(a_log().eval(i as u64 + 1).unwrap(), BigUint::from(*e));
        }
        let it = Sequence::IteratedLog {
            coef: Frac::from_integer(1),
            offset: 0,
        };
        // n = 255: log2(256) = 8, log2(9) = 3
        assert_eq!(it.eval(255).unwrap(), BigUint::from(3u32));
        let t = Sequence::Table { values: vec![1, 5, 9] };
        assert_eq!(t.eval(2).unwrap(), BigUint::from(5u32));
        assert!(t.eval(4).is_err());
        assert!(t.eval(0).is_err());
    }

    #[test]
    fn json_forms() {
        let s: Sequence = serde_json::from_str(r#"{"kind":"polynomial","coef":"3/2","degree":2}"#).unwrap();
        assert_eq!(s.eval(2).unwrap(), BigUint::from(6u32));
        let s: Sequence = serde_json::from_str(r#"{"kind":"log","offset":1}"#).unwrap();
        assert_eq!(s, a_log());
        let s: Sequence = serde_json::from_str(r#"{"kind":"table","values":[3,2]}"#).unwrap();
        assert!(s.validate().is_err());
    }

    #[test]
    fn inverse_matches_scan() {
        let seqs = [
            a_log(),
            Sequence::polynomial(Frac::from_integer(1), 2),
            Sequence::polynomial(Frac::new(3, 7), 3),
            Sequence::IteratedLog {
                coef: Frac::from_integer(2),
                offset: 0,
            },
            Sequence::Table {
                values: (1..200).map(|i| i / 3).collect(),
            },
        ];
        for s in &seqs {
            for v in 0..40u64 {
                for lower in [0u64, 5, 17] {
                    let brute = (lower + 1..100_000).find(|&n| s.eval(n).unwrap() > BigUint::from(v));
                    let got = s.least_index_above(&Magnitude::from(v), &Magnitude::from(lower));
                    match brute {
                        Some(n) => {
                            let c = got.unwrap();
                            assert!(c.minimal);
                            assert_eq!(c.index, Magnitude::from(n), "{s:?} v={v} lower={lower}");
                        }
                        None => assert!(got.is_err() || got.unwrap().index > Magnitude::from(100_000)),
                    }
                }
            }
        }
    }

    #[test]
    fn huge_targets() {
        let x = Magnitude::from(INT_LIMIT * 4);
        // a_P > X needs floor(log2(P+1)) >= X, so P = 2^X - 1
        let c = a_log().least_index_above(&x, &Magnitude::from(10)).unwrap();
        assert!(c.minimal);
        assert_eq!(c.index, Magnitude::pow2(&x).unwrap().sub_u64(1).unwrap());
        let at = a_log().eval_bound(&c.index, Bound::Lower).unwrap();
        assert!(at > x);
        let before = a_log().eval_bound(&c.index.sub_u64(1).unwrap(), Bound::Upper).unwrap();
        assert!(before <= x);
        // squares at a power of two
        let sq = Sequence::polynomial(Frac::from_integer(1), 2);
        let n = Magnitude::pow2(&x).unwrap();
        let b = sq.eval_bound(&n, Bound::Upper).unwrap();
        assert_eq!(b, Magnitude::pow2(&x.mul_u64(2).unwrap()).unwrap());
        let big = Magnitude::pow2(&x).unwrap();
        let c = sq.least_index_above(&big, &Magnitude::zero()).unwrap();
        assert!(!c.minimal);
        assert!(sq.eval_bound(&c.index, Bound::Lower).unwrap() > big);
    }
}
