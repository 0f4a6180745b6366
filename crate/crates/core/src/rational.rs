//! Exact rationals and their `"p/q"` text encoding.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub type Rat = BigRational;

pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// Representative of `q mod 1` in `[0, 1)`.
pub fn frac(q: &Rat) -> Rat {
    q - q.floor()
}

pub fn is_integer(q: &Rat) -> bool {
    q.denom().is_one()
}

/// Nearest integer, ties towards +infinity.
pub fn round_half_up(q: &Rat) -> BigInt {
    (q + Rat::new(BigInt::one(), BigInt::from(2))).floor().to_integer()
}

pub fn format(q: &Rat) -> String {
    q.to_string()
}

/// Parses `"p/q"` or `"p"`. The fraction must already be in lowest terms with `q > 0`.
pub fn parse(s: &str) -> Result<Rat> {
    let s = s.trim();
    let bad = || Error::Parse(format!("malformed rational {s:?}"));
    match s.split_once('/') {
        None => {
            let n: BigInt = s.parse().map_err(|_| bad())?;
            Ok(Rat::from_integer(n))
        }
        Some((p, q)) => {
            let p: BigInt = p.parse().map_err(|_| bad())?;
            let q: BigInt = q.parse().map_err(|_| bad())?;
            if !q.is_positive() {
                return Err(Error::Parse(format!("denominator must be positive in {s:?}")));
            }
            if !p.gcd(&q).is_one() && !(p.is_zero() && q.is_one()) {
                return Err(Error::Parse(format!("{s:?} is not in lowest terms")));
            }
            Ok(Rat::new(p, q))
        }
    }
}

/// `serde(with = ...)` adaptors that encode rationals as strings.
pub mod serde_rat {
    use super::*;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(q: &Rat, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&format(q))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Rat, D::Error> {
        let s = String::deserialize(d)?;
        parse(&s).map_err(serde::de::Error::custom)
    }

    pub mod option {
        use super::*;

        pub fn serialize<S: Serializer>(q: &Option<Rat>, s: S) -> std::result::Result<S::Ok, S::Error> {
            match q {
                Some(q) => s.serialize_some(&format(q)),
                None => s.serialize_none(),
            }
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Option<Rat>, D::Error> {
            let s = Option::<String>::deserialize(d)?;
            s.map(|s| parse(&s).map_err(serde::de::Error::custom)).transpose()
        }
    }

    pub mod vec {
        use super::*;
        use serde::ser::SerializeSeq;

        pub fn serialize<S: Serializer>(v: &[Rat], s: S) -> std::result::Result<S::Ok, S::Error> {
            let mut seq = s.serialize_seq(Some(v.len()))?;
            for q in v {
                seq.serialize_element(&format(q))?;
            }
            seq.end()
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Vec<Rat>, D::Error> {
            let v = Vec::<String>::deserialize(d)?;
            v.iter().map(|s| parse(s).map_err(serde::de::Error::custom)).collect()
        }
    }

    pub mod matrix {
        use super::*;

        pub fn serialize<S: Serializer>(m: &[Vec<Rat>], s: S) -> std::result::Result<S::Ok, S::Error> {
            let strs: Vec<Vec<String>> = m.iter().map(|r| r.iter().map(format).collect()).collect();
            serde::Serialize::serialize(&strs, s)
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Vec<Vec<Rat>>, D::Error> {
            let v = Vec::<Vec<String>>::deserialize(d)?;
            v.iter()
                .map(|r| r.iter().map(|s| parse(s).map_err(serde::de::Error::custom)).collect())
                .collect()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_format() {
        assert_eq!(parse("-4/9").unwrap(), rat(-4, 9));
        assert_eq!(parse("0").unwrap(), int(0));
        assert_eq!(parse("2").unwrap(), int(2));
        assert_eq!(format(&rat(8, 9)), "8/9");
        assert_eq!(format(&rat(4, 2)), "2");
        assert!(parse("2/4").is_err());
        assert!(parse("1/-3").is_err());
        assert!(parse("1/0").is_err());
        assert!(parse("x").is_err());
    }

    #[test]
    fn frac_is_in_unit_interval() {
        assert_eq!(frac(&rat(-1, 9)), rat(8, 9));
        assert_eq!(frac(&int(-3)), int(0));
        assert_eq!(round_half_up(&rat(-1, 2)), BigInt::from(0));
        assert_eq!(round_half_up(&rat(-2, 3)), BigInt::from(-1));
    }
}
