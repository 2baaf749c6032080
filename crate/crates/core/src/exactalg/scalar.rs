use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::AlgError;

/// Exact rational scalar. `BigRational` keeps values in lowest terms with a
/// positive denominator.
pub type Scalar = BigRational;

pub fn int(v: i64) -> Scalar {
    Scalar::from_integer(BigInt::from(v))
}

pub fn frac(p: i64, q: i64) -> Scalar {
    Scalar::new(BigInt::from(p), BigInt::from(q))
}

pub fn zero() -> Scalar {
    Scalar::zero()
}

pub fn one() -> Scalar {
    Scalar::one()
}

/// `"p/q"`, with `/q` omitted when the denominator is 1.
pub fn format(x: &Scalar) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

pub fn parse(s: &str) -> Result<Scalar, AlgError> {
    let bad = || AlgError::ParseScalar(s.to_string());
    let t = s.trim();
    match t.split_once('/') {
        None => t.parse::<BigInt>().map(Scalar::from_integer).map_err(|_| bad()),
        Some((p, q)) => {
            let p: BigInt = p.trim().parse().map_err(|_| bad())?;
            let q: BigInt = q.trim().parse().map_err(|_| bad())?;
            if q.is_zero() {
                return Err(bad());
            }
            Ok(Scalar::new(p, q))
        }
    }
}

/// Sign `(-1)^k` as a scalar.
pub fn sign(odd: bool) -> Scalar {
    if odd {
        -one()
    } else {
        one()
    }
}

/// Returns the value as an integer if it is one.
pub fn as_integer(x: &Scalar) -> Option<BigInt> {
    x.is_integer().then(|| x.to_integer())
}

pub fn as_i64(x: &Scalar) -> Option<i64> {
    use num_traits::ToPrimitive;
    as_integer(x).and_then(|v| v.to_i64())
}

pub fn is_nonneg_integer(x: &Scalar) -> bool {
    x.is_integer() && !x.is_negative()
}

/// Serde adapter storing a scalar as its `"p/q"` string.
pub mod serde_str {
    use super::{format, parse, Scalar};
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(x: &Scalar, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format(x))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Scalar, D::Error> {
        let raw = String::deserialize(d)?;
        parse(&raw).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn format_omits_unit_denominator() {
        assert_eq!(format(&int(3)), "3");
        assert_eq!(format(&frac(6, -4)), "-3/2");
    }

    #[test]
    fn parse_round_trips_lowest_terms() {
        assert_eq!(parse("4/6").unwrap(), frac(2, 3));
        assert_eq!(parse("-7").unwrap(), int(-7));
        assert!(parse("1/0").is_err());
        assert!(parse("x").is_err());
    }
}
