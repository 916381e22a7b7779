use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use serde_json::{json, Value};
use thiserror::Error;

use super::{normalize, Cyclotomic};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CycloJsonError {
    #[error("malformed cyclotomic encoding: {0}")]
    Malformed(String),
}

fn bad(msg: impl Into<String>) -> CycloJsonError {
    CycloJsonError::Malformed(msg.into())
}

/// Integers that fit 64 bits become JSON numbers, larger ones strings.
pub fn int_to_json(n: &BigInt) -> Value {
    match n.to_i64() {
        Some(v) => json!(v),
        None => Value::String(n.to_string()),
    }
}

pub fn int_from_json(v: &Value) -> Result<BigInt, CycloJsonError> {
    match v {
        Value::Number(x) => {
            if let Some(i) = x.as_i64() {
                Ok(i.into())
            } else if let Some(u) = x.as_u64() {
                Ok(u.into())
            } else {
                Err(bad(format!("non-integer number {x}")))
            }
        }
        Value::String(s) => s.trim().parse().map_err(|_| bad(format!("bad integer {s:?}"))),
        _ => Err(bad(format!("expected integer, got {v}"))),
    }
}

pub fn rational_to_json(q: &BigRational) -> Value {
    if q.is_integer() {
        int_to_json(q.numer())
    } else {
        Value::String(format!("{}/{}", q.numer(), q.denom()))
    }
}

pub fn rational_from_json(v: &Value) -> Result<BigRational, CycloJsonError> {
    if let Value::String(s) = v {
        if let Some((a, b)) = s.split_once('/') {
            let a: BigInt = a.trim().parse().map_err(|_| bad(format!("bad rational {s:?}")))?;
            let b: BigInt = b.trim().parse().map_err(|_| bad(format!("bad rational {s:?}")))?;
            if b.is_zero() {
                return Err(bad("zero denominator"));
            }
            return Ok(BigRational::new(a, b));
        }
    }
    int_from_json(v).map(BigRational::from_integer)
}

impl Cyclotomic {
    pub fn to_json(&self) -> Value {
        if let Some(q) = self.to_rational() {
            return rational_to_json(&q);
        }
        let c: Vec<Value> = self
            .terms
            .iter()
            .map(|(e, q)| json!([e, int_to_json(q.numer()), int_to_json(q.denom())]))
            .collect();
        json!({"n": self.conductor, "c": c})
    }

    pub fn from_json(v: &Value) -> Result<Self, CycloJsonError> {
        let Value::Object(map) = v else {
            return rational_from_json(v).map(Cyclotomic::from_rational);
        };
        let n = map
            .get("n")
            .and_then(Value::as_u64)
            .filter(|&n| n > 0 && n <= u32::MAX as u64)
            .ok_or_else(|| bad("missing or invalid conductor"))? as u32;
        let terms = map
            .get("c")
            .and_then(Value::as_array)
            .ok_or_else(|| bad("missing coefficient list"))?;
        let mut raw = Vec::with_capacity(terms.len());
        let mut last: Option<u64> = None;
        for t in terms {
            let parts = t.as_array().filter(|a| a.len() == 3 || a.len() == 2);
            let parts = parts.ok_or_else(|| bad(format!("bad term {t}")))?;
            let e = parts[0].as_u64().ok_or_else(|| bad(format!("bad exponent in {t}")))?;
            if e >= n as u64 {
                return Err(bad(format!("exponent {e} out of range for conductor {n}")));
            }
            if last.is_some_and(|l| l >= e) {
                return Err(bad("exponents must be strictly increasing"));
            }
            last = Some(e);
            let q = if parts.len() == 3 {
                let num = int_from_json(&parts[1])?;
                let den = int_from_json(&parts[2])?;
                if den.is_zero() {
                    return Err(bad("zero denominator"));
                }
                BigRational::new(num, den)
            } else {
                rational_from_json(&parts[1])?
            };
            raw.push((e as i64, q));
        }
        normalize(n, raw).map_err(|e| bad(e.to_string()))
    }
}

impl Serialize for Cyclotomic {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.to_json().serialize(s)
    }
}

impl<'de> Deserialize<'de> for Cyclotomic {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let v = Value::deserialize(d)?;
        Cyclotomic::from_json(&v).map_err(D::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn roundtrip() {
        let x = &Cyclotomic::root_of_unity(7) + &Cyclotomic::from_integer(3);
        let v = x.to_json();
        assert_eq!(Cyclotomic::from_json(&v).unwrap(), x);
        let half = Cyclotomic::from_rational(BigRational::new(1.into(), 2.into()));
        assert_eq!(half.to_json(), json!("1/2"));
        assert_eq!(Cyclotomic::from_json(&json!("1/2")).unwrap(), half);
        assert_eq!(Cyclotomic::from_json(&json!(-4)).unwrap(), Cyclotomic::from_integer(-4));
    }

    #[test]
    fn non_basis_input_is_normalized() {
        // ζ_6 written directly normalizes to -ζ_3^2
        let v = json!({"n": 6, "c": [[1, 1, 1]]});
        let x = Cyclotomic::from_json(&v).unwrap();
        assert_eq!(x, -Cyclotomic::root_of_unity_power(3, 2));
    }

    #[test]
    fn big_integers_as_strings() {
        let big: BigInt = "808017424794512875886459904961710757005754368000000000".parse().unwrap();
        let v = int_to_json(&big);
        assert!(v.is_string());
        assert_eq!(int_from_json(&v).unwrap(), big);
    }
}
