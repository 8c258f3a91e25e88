//! Primes, exact p-adic scalars, valuations, and the polynomial Newton
//! polygon of a coefficient-valuation profile.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_traits::Zero;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{domain, schema, Error, Result};
use crate::rational::{fmt_q, parse_q, qi, vp_q, Q};

/// A verified rational prime.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Prime(u64);

impl Prime {
    pub fn new(p: u64) -> Result<Prime> {
        if p < 2 {
            return schema(format!("{p} is not prime"));
        }
        let mut d = 2;
        while d * d <= p {
            if p.is_multiple_of(d) {
                return schema(format!("{p} is not prime"));
            }
            d += 1;
        }
        Ok(Prime(p))
    }

    pub fn get(self) -> u64 {
        self.0
    }

    pub fn is_odd(self) -> bool {
        self.0 != 2
    }
}

impl fmt::Display for Prime {
    fn fmt(&self, f: &mut fmt::Formatter) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl Serialize for Prime {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_u64(self.0)
    }
}

impl<'de> Deserialize<'de> for Prime {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let p = u64::deserialize(d)?;
        Prime::new(p).map_err(serde::de::Error::custom)
    }
}

/// A valuation: a rational or `+infinity` (the valuation of zero).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Valuation {
    Finite(Q),
    Infinite,
}

impl Valuation {
    pub fn finite(&self) -> Option<&Q> {
        match self {
            Valuation::Finite(v) => Some(v),
            Valuation::Infinite => None,
        }
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, Valuation::Infinite)
    }

    pub fn min(self, other: Valuation) -> Valuation {
        if self <= other {
            self
        } else {
            other
        }
    }
}

impl PartialOrd for Valuation {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Valuation {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Valuation::Infinite, Valuation::Infinite) => Ordering::Equal,
            (Valuation::Infinite, _) => Ordering::Greater,
            (_, Valuation::Infinite) => Ordering::Less,
            (Valuation::Finite(a), Valuation::Finite(b)) => a.cmp(b),
        }
    }
}

impl Add for Valuation {
    type Output = Valuation;
    fn add(self, rhs: Valuation) -> Valuation {
        match (self, rhs) {
            (Valuation::Finite(a), Valuation::Finite(b)) => Valuation::Finite(a + b),
            _ => Valuation::Infinite,
        }
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter) -> fmt::Result {
        match self {
            Valuation::Finite(v) => write!(f, "{v}"),
            Valuation::Infinite => f.write_str("inf"),
        }
    }
}

impl Serialize for Valuation {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Valuation::Finite(v) => s.serialize_str(&fmt_q(v)),
            Valuation::Infinite => s.serialize_str("inf"),
        }
    }
}

impl<'de> Deserialize<'de> for Valuation {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let w = serde_json_free::StrOrInt::deserialize(d)?;
        match w {
            serde_json_free::StrOrInt::Str(s) if s == "inf" => Ok(Valuation::Infinite),
            serde_json_free::StrOrInt::Str(s) => parse_q(&s)
                .map(Valuation::Finite)
                .map_err(serde::de::Error::custom),
            serde_json_free::StrOrInt::Int(i) => Ok(Valuation::Finite(qi(i))),
        }
    }
}

mod serde_json_free {
    use serde::Deserialize;

    #[derive(Deserialize)]
    #[serde(untagged)]
    pub enum StrOrInt {
        Str(String),
        Int(i64),
    }
}

/// An exact rational regarded as an element of Q_p.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PadicScalar {
    #[serde(with = "crate::rational::serde_q")]
    pub value: Q,
    pub prime: Prime,
}

impl PadicScalar {
    pub fn new(value: Q, prime: Prime) -> Self {
        PadicScalar { value, prime }
    }

    pub fn valuation(&self) -> Valuation {
        valuation(&self.value, self.prime)
    }

    pub fn is_unit(&self) -> bool {
        self.valuation() == Valuation::Finite(Q::zero())
    }

    pub fn checked_div(&self, rhs: &PadicScalar) -> Result<PadicScalar> {
        if rhs.value.is_zero() {
            return domain("division by zero");
        }
        Ok(self.clone() / rhs.clone())
    }
}

fn same_prime(a: Prime, b: Prime) -> Prime {
    assert_eq!(a, b, "p-adic scalars over different primes");
    a
}

macro_rules! scalar_op {
    ($tr:ident, $m:ident, $op:tt) => {
        impl $tr for PadicScalar {
            type Output = PadicScalar;
            fn $m(self, rhs: PadicScalar) -> PadicScalar {
                let p = same_prime(self.prime, rhs.prime);
                PadicScalar::new(self.value $op rhs.value, p)
            }
        }
    };
}

scalar_op!(Add, add, +);
scalar_op!(Sub, sub, -);
scalar_op!(Mul, mul, *);
scalar_op!(Div, div, /);

impl Neg for PadicScalar {
    type Output = PadicScalar;
    fn neg(self) -> PadicScalar {
        PadicScalar::new(-self.value, self.prime)
    }
}

/// v_p of a rational.
pub fn valuation(x: &Q, p: Prime) -> Valuation {
    match vp_q(x, p.get()) {
        Some(v) => Valuation::Finite(qi(v)),
        None => Valuation::Infinite,
    }
}

fn digit_sum(mut i: u64, p: u64) -> u64 {
    let mut s = 0;
    while i > 0 {
        s += i % p;
        i /= p;
    }
    s
}

/// v_p(i!) via Legendre's digit-sum formula.
pub fn factorial_valuation(i: u64, p: Prime) -> u64 {
    (i - digit_sum(i, p.get())) / (p.get() - 1)
}

/// Smallest n with v_p(n!) + i >= 0: zero for i >= 0, otherwise found by
/// scanning n upward and accumulating v_p(n).
pub fn nu(i: i64, p: Prime) -> u64 {
    if i >= 0 {
        return 0;
    }
    let target = i.unsigned_abs();
    let pv = p.get();
    let (mut n, mut acc) = (0u64, 0u64);
    while acc < target {
        n += 1;
        let mut m = n;
        while m % pv == 0 {
            acc += 1;
            m /= pv;
        }
    }
    n
}

/// Valuations of polynomial coefficients a_i. Missing indices are zero
/// coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolyValuationProfile {
    pub degree: usize,
    pub coefficients: Vec<(usize, Valuation)>,
}

impl PolyValuationProfile {
    pub fn from_coefficients(coeffs: &[Q], p: Prime) -> Result<Self> {
        let degree = coeffs
            .iter()
            .rposition(|c| !c.is_zero())
            .ok_or_else(|| Error::Domain("zero polynomial".into()))?;
        Ok(PolyValuationProfile {
            degree,
            coefficients: coeffs[..=degree]
                .iter()
                .enumerate()
                .map(|(i, c)| (i, valuation(c, p)))
                .collect(),
        })
    }
}

/// A side of a Newton polygon.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Slope {
    #[serde(with = "crate::rational::serde_q")]
    pub slope: Q,
    pub length: usize,
}

/// Lower convex hull of the points (i, v(a_i)), left to right. A root of
/// valuation `-slope` occurs with multiplicity `length` over Q_p-bar.
/// A zero constant term contributes the root 0, which is omitted.
pub fn poly_newton_polygon(profile: &PolyValuationProfile) -> Result<Vec<Slope>> {
    let mut pts: Vec<(usize, Q)> = Vec::new();
    for (i, v) in &profile.coefficients {
        if *i > profile.degree {
            return schema(format!("coefficient index {i} exceeds degree"));
        }
        if let Valuation::Finite(v) = v {
            pts.push((*i, v.clone()));
        }
    }
    pts.sort_by_key(|a| a.0);
    pts.dedup_by(|a, b| a.0 == b.0);
    match pts.last() {
        Some((i, _)) if *i == profile.degree => {}
        _ => return schema("leading coefficient must be nonzero"),
    }
    let mut hull: Vec<(usize, Q)> = Vec::new();
    for pt in pts {
        while hull.len() >= 2 {
            let (x1, y1) = &hull[hull.len() - 2];
            let (x2, y2) = &hull[hull.len() - 1];
            let s12 = (y2 - y1) / qi((x2 - x1) as i64);
            let s13 = (&pt.1 - y1) / qi((pt.0 - x1) as i64);
            if s13 <= s12 {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(pt);
    }
    Ok(hull
        .windows(2)
        .map(|w| Slope {
            slope: (&w[1].1 - &w[0].1) / qi((w[1].0 - w[0].0) as i64),
            length: w[1].0 - w[0].0,
        })
        .collect())
}
