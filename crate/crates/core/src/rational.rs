//! Rational helpers shared by every module.
//!
//! Rationals cross the serialization boundary as strings of the form
//! `"num/den"` (or `"num"` for integers); JSON integers are accepted on input.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{schema, Result};

pub type Q = BigRational;

pub fn qi(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn q(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

pub fn qbig(n: BigInt) -> Q {
    Q::from_integer(n)
}

/// Parses `"a"`, `"-a"`, `"a/b"`. Decimal points are rejected.
pub fn parse_q(s: &str) -> Result<Q> {
    let t = s.trim();
    let parse_int = |x: &str| -> Result<BigInt> {
        let x = x.trim();
        if x.is_empty() || x.contains('.') {
            return schema(format!("invalid rational literal '{s}'"));
        }
        x.parse::<BigInt>()
            .or_else(|_| schema(format!("invalid rational literal '{s}'")))
    };
    match t.split_once('/') {
        None => Ok(qbig(parse_int(t)?)),
        Some((n, d)) => {
            let d = parse_int(d)?;
            if d.is_zero() {
                return schema(format!("zero denominator in '{s}'"));
            }
            Ok(Q::new(parse_int(n)?, d))
        }
    }
}

pub fn fmt_q(x: &Q) -> String {
    x.to_string()
}

/// p-adic valuation of a nonzero integer.
pub fn vp_int(n: &BigInt, p: u64) -> u64 {
    debug_assert!(!n.is_zero());
    let pb = BigInt::from(p);
    let mut m = n.abs();
    let mut k = 0;
    loop {
        let (qt, r) = m.div_rem(&pb);
        if !r.is_zero() {
            return k;
        }
        m = qt;
        k += 1;
    }
}

/// p-adic valuation of a nonzero rational, `None` for zero.
pub fn vp_q(x: &Q, p: u64) -> Option<i64> {
    if x.is_zero() {
        return None;
    }
    Some(vp_int(x.numer(), p) as i64 - vp_int(x.denom(), p) as i64)
}

pub fn is_p_integral(x: &Q, p: u64) -> bool {
    vp_int(x.denom(), p) == 0
}

pub fn pow_q(base: u64, e: i64) -> Q {
    let b = qbig(BigInt::from(base));
    if e >= 0 {
        num_traits::pow(b, e as usize)
    } else {
        Q::one() / num_traits::pow(b, (-e) as usize)
    }
}

pub fn pow_big(base: u64, e: u32) -> BigInt {
    num_traits::pow(BigInt::from(base), e as usize)
}

pub fn floor(x: &Q) -> BigInt {
    x.floor().to_integer()
}

pub fn ceil(x: &Q) -> BigInt {
    x.ceil().to_integer()
}

pub fn to_i64(x: &BigInt) -> Option<i64> {
    x.to_i64()
}

/// Exponent k with `den = p^k * m`, gcd(m, p) = 1; also returns m.
pub fn split_denominator(x: &Q, p: u64) -> (u64, BigInt) {
    let k = vp_int(x.denom(), p);
    (k, x.denom() / pow_big(p, k as u32))
}

/// Residue of a p-integral rational modulo `modulus` (assumed a power of p).
pub fn residue_mod(x: &Q, modulus: &BigInt) -> BigInt {
    let inv = mod_inverse(x.denom(), modulus).expect("denominator must be a unit");
    (x.numer() * inv).mod_floor(modulus)
}

pub fn mod_inverse(a: &BigInt, m: &BigInt) -> Option<BigInt> {
    let e = a.mod_floor(m).extended_gcd(m);
    if e.gcd.is_one() {
        Some(e.x.mod_floor(m))
    } else {
        None
    }
}

/// Rational reconstruction of `a` modulo `m` with numerator and denominator
/// bounded by `sqrt(m/2)`.
pub fn rational_reconstruction(a: &BigInt, m: &BigInt) -> Option<Q> {
    let bound = (m / BigInt::from(2)).sqrt();
    let (mut r0, mut r1) = (m.clone(), a.mod_floor(m));
    let (mut t0, mut t1) = (BigInt::zero(), BigInt::one());
    while r1 > bound {
        let qt = &r0 / &r1;
        let r2 = &r0 - &qt * &r1;
        let t2 = &t0 - &qt * &t1;
        r0 = std::mem::replace(&mut r1, r2);
        t0 = std::mem::replace(&mut t1, t2);
    }
    if t1.is_zero() || t1.abs() > bound {
        return None;
    }
    let cand = Q::new(r1, t1);
    if (cand.numer() - a * cand.denom()).mod_floor(m).is_zero() {
        Some(cand)
    } else {
        None
    }
}

/// Serde adapter for a single rational.
pub mod serde_q {
    use super::*;
    use serde::de::{self, Visitor};
    use serde::{Deserializer, Serializer};

    pub fn serialize<S: Serializer>(x: &Q, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&fmt_q(x))
    }

    struct QVisitor;

    impl<'de> Visitor<'de> for QVisitor {
        type Value = Q;
        fn expecting(&self, f: &mut std::fmt::Formatter) -> std::fmt::Result {
            f.write_str("a rational as \"num/den\" or an integer")
        }
        fn visit_str<E: de::Error>(self, v: &str) -> std::result::Result<Q, E> {
            parse_q(v).map_err(|e| E::custom(e.to_string()))
        }
        fn visit_i64<E: de::Error>(self, v: i64) -> std::result::Result<Q, E> {
            Ok(qi(v))
        }
        fn visit_u64<E: de::Error>(self, v: u64) -> std::result::Result<Q, E> {
            Ok(qbig(BigInt::from(v)))
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Q, D::Error> {
        d.deserialize_any(QVisitor)
    }

    /// Wrapper usable inside containers.
    #[derive(Clone, Debug, PartialEq, Eq)]
    pub struct Wrap(pub Q);

    impl serde::Serialize for Wrap {
        fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
            serialize(&self.0, s)
        }
    }

    impl<'de> serde::Deserialize<'de> for Wrap {
        fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
            deserialize(d).map(Wrap)
        }
    }
}

/// Serde adapter for big integers: JSON numbers when they fit in i64,
/// decimal strings otherwise.
pub mod serde_int {
    use num_bigint::BigInt;
    use num_traits::ToPrimitive;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(x: &BigInt, s: S) -> Result<S::Ok, S::Error> {
        match x.to_i64() {
            Some(v) => s.serialize_i64(v),
            None => s.serialize_str(&x.to_string()),
        }
    }

    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Repr {
        Int(i64),
        Str(String),
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigInt, D::Error> {
        match Repr::deserialize(d)? {
            Repr::Int(v) => Ok(BigInt::from(v)),
            Repr::Str(s) => s
                .trim()
                .parse::<BigInt>()
                .map_err(|_| serde::de::Error::custom(format!("invalid integer '{s}'"))),
        }
    }
}

/// Serde adapter for `Vec<Q>`.
pub mod serde_qvec {
    use super::serde_q::Wrap;
    use super::Q;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(v: &[Q], s: S) -> Result<S::Ok, S::Error> {
        v.iter().cloned().map(Wrap).collect::<Vec<_>>().serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Q>, D::Error> {
        Ok(Vec::<Wrap>::deserialize(d)?.into_iter().map(|w| w.0).collect())
    }
}

/// Serde adapter for `Vec<Vec<Q>>` (matrices, point lists).
pub mod serde_qmat {
    use super::serde_q::Wrap;
    use super::Q;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(v: &[Vec<Q>], s: S) -> Result<S::Ok, S::Error> {
        v.iter()
            .map(|r| r.iter().cloned().map(Wrap).collect::<Vec<_>>())
            .collect::<Vec<_>>()
            .serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Vec<Q>>, D::Error> {
        Ok(Vec::<Vec<Wrap>>::deserialize(d)?
            .into_iter()
            .map(|r| r.into_iter().map(|w| w.0).collect())
            .collect())
    }
}

/// Serde adapter for `Vec<(Q, Q)>`, encoded as two-element arrays.
pub mod serde_qpairs {
    use super::serde_q::Wrap;
    use super::Q;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(v: &[(Q, Q)], s: S) -> Result<S::Ok, S::Error> {
        v.iter()
            .map(|(a, b)| (Wrap(a.clone()), Wrap(b.clone())))
            .collect::<Vec<_>>()
            .serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<(Q, Q)>, D::Error> {
        Ok(Vec::<(Wrap, Wrap)>::deserialize(d)?
            .into_iter()
            .map(|(a, b)| (a.0, b.0))
            .collect())
    }
}
