//! Distinguished elements of the tilt R and of A_inf = W(R).
//!
//! A monomial is ε^a (p♭)^c [u] with u a Teichmüller representative from a
//! finite field; an expression is a finite integer combination of monomials
//! times powers of p. Sums are formal: Witt carries are not modeled.
//!
//! The compatible systems are fixed once and for all through an embedding of
//! Q-bar into C: ε = (e^{2πi/p^n})_n and p♭ = (p^{1/p^n})_n with positive real
//! roots.

pub mod cyclotomic;
pub mod finite_field;
mod theta;
mod vflat;

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{schema, Error, Result};
use crate::newton_polygon::{hull_points, LeftRay, Polygon, RightRay};
use crate::padic_core::Prime;
use crate::rational::{is_p_integral, pow_q, q, qbig, qi, vp_int, vp_q, Q};

pub use finite_field::{FiniteField, FqElement};
pub use theta::{theta, GradedThetaValue, ThetaPiece};
pub use vflat::{vflat_sum, VflatReport, VflatStatus};

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TiltMonomial {
    /// Exponent of ε; lies in Z_(p)[1/p].
    pub a: Q,
    /// Exponent of p♭; nonnegative with p-power denominator.
    pub c: Q,
    pub u: FqElement,
}

impl TiltMonomial {
    pub fn new(a: Q, c: Q, u: FqElement, p: Prime) -> Result<Self> {
        let m = TiltMonomial { a, c, u };
        m.validate(p)?;
        Ok(m)
    }

    pub fn one() -> Self {
        TiltMonomial {
            a: Q::zero(),
            c: Q::zero(),
            u: FqElement::one(),
        }
    }

    pub fn epsilon(a: Q) -> Self {
        TiltMonomial { a, ..Self::one() }
    }

    pub fn pflat(c: Q) -> Self {
        TiltMonomial { c, ..Self::one() }
    }

    pub fn validate(&self, p: Prime) -> Result<()> {
        let pv = p.get();
        let (_, free) = crate::rational::split_denominator(&self.c, pv);
        if self.c.is_negative() || !free.is_one() {
            return schema(format!("exponent of p-flat must be >= 0 with p-power denominator, got {}", self.c));
        }
        let _ = self.u.validate(pv)?;
        Ok(())
    }

    /// Largest k with p^k dividing a denominator of the exponents.
    pub fn depth(&self, p: Prime) -> u64 {
        vp_int(self.a.denom(), p.get()).max(vp_int(self.c.denom(), p.get()))
    }

    pub fn mul(&self, o: &TiltMonomial, p: Prime) -> Result<TiltMonomial> {
        Ok(TiltMonomial {
            a: &self.a + &o.a,
            c: &self.c + &o.c,
            u: self.u.mul(&o.u, p.get())?,
        })
    }
}

/// v♭ of a monomial: ε and Teichmüller units contribute nothing.
pub fn vflat_monomial(m: &TiltMonomial) -> Q {
    m.c.clone()
}

/// One term `coeff * monomial * p^p_power` in serialized form.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TiltTerm {
    #[serde(with = "crate::rational::serde_int")]
    pub coeff: BigInt,
    #[serde(with = "crate::rational::serde_q", default = "Q::zero")]
    pub a: Q,
    #[serde(with = "crate::rational::serde_q", default = "Q::zero")]
    pub c: Q,
    #[serde(default = "FqElement::one")]
    pub u: FqElement,
    #[serde(default)]
    pub p_power: i64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
struct TiltExprRepr {
    p: Prime,
    terms: Vec<TiltTerm>,
}

/// A finite formal sum, kept sorted by (p-power, monomial) with merged
/// coefficients and no zero terms.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "TiltExprRepr", into = "TiltExprRepr")]
pub struct TiltExpr {
    p: Prime,
    terms: BTreeMap<(i64, TiltMonomial), BigInt>,
}

impl TryFrom<TiltExprRepr> for TiltExpr {
    type Error = Error;
    fn try_from(r: TiltExprRepr) -> Result<Self> {
        let mut e = TiltExpr::zero(r.p);
        for t in r.terms {
            let m = TiltMonomial::new(t.a, t.c, t.u, r.p)?;
            e.add_term(t.coeff, m, t.p_power);
        }
        Ok(e)
    }
}

impl From<TiltExpr> for TiltExprRepr {
    fn from(e: TiltExpr) -> Self {
        TiltExprRepr {
            p: e.p,
            terms: e
                .terms
                .into_iter()
                .map(|((i, m), n)| TiltTerm {
                    coeff: n,
                    a: m.a,
                    c: m.c,
                    u: m.u,
                    p_power: i,
                })
                .collect(),
        }
    }
}

impl std::fmt::Display for TiltExpr {
    fn fmt(&self, f: &mut std::fmt::Formatter) -> std::fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let mut first = true;
        for ((i, m), n) in &self.terms {
            let sign = if n.is_negative() { "-" } else { "+" };
            if first {
                if n.is_negative() {
                    f.write_str("-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let mut parts: Vec<String> = Vec::new();
            let mag = n.abs();
            if !mag.is_one() {
                parts.push(mag.to_string());
            }
            if !m.a.is_zero() {
                parts.push(format!("eps^({})", m.a));
            }
            if !m.c.is_zero() {
                parts.push(format!("pflat^({})", m.c));
            }
            if m.u != FqElement::one() {
                parts.push(format!("[u{:?}]", m.u.poly));
            }
            if *i != 0 {
                parts.push(format!("p^{i}"));
            }
            if parts.is_empty() {
                parts.push("1".into());
            }
            f.write_str(&parts.join("*"))?;
        }
        Ok(())
    }
}

impl TiltExpr {
    pub fn zero(p: Prime) -> Self {
        TiltExpr {
            p,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(p: Prime) -> Self {
        Self::monomial(p, BigInt::one(), TiltMonomial::one(), 0)
    }

    pub fn monomial(p: Prime, coeff: BigInt, m: TiltMonomial, p_power: i64) -> Self {
        let mut e = Self::zero(p);
        e.add_term(coeff, m, p_power);
        e
    }

    pub fn prime(&self) -> Prime {
        self.p
    }

    fn add_term(&mut self, coeff: BigInt, m: TiltMonomial, i: i64) {
        if coeff.is_zero() {
            return;
        }
        let key = (i, m);
        let entry = self.terms.entry(key.clone()).or_insert_with(BigInt::zero);
        *entry += coeff;
        if entry.is_zero() {
            self.terms.remove(&key);
        }
    }

    /// Terms as (coefficient, monomial, p-power), in canonical order.
    pub fn terms(&self) -> impl Iterator<Item = (&BigInt, &TiltMonomial, i64)> {
        self.terms.iter().map(|((i, m), n)| (n, m, *i))
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// True when every p-power is nonnegative.
    pub fn in_a_inf(&self) -> bool {
        self.terms.keys().all(|(i, _)| *i >= 0)
    }

    fn check_prime(&self, o: &TiltExpr) -> Result<()> {
        if self.p != o.p {
            return schema("tilt expressions over different primes");
        }
        Ok(())
    }

    pub fn add(&self, o: &TiltExpr) -> Result<TiltExpr> {
        self.check_prime(o)?;
        let mut r = self.clone();
        for ((i, m), n) in &o.terms {
            r.add_term(n.clone(), m.clone(), *i);
        }
        Ok(r)
    }

    pub fn neg(&self) -> TiltExpr {
        self.scale(&-BigInt::one())
    }

    pub fn sub(&self, o: &TiltExpr) -> Result<TiltExpr> {
        self.add(&o.neg())
    }

    pub fn scale(&self, k: &BigInt) -> TiltExpr {
        let mut r = TiltExpr::zero(self.p);
        for ((i, m), n) in &self.terms {
            r.add_term(n * k, m.clone(), *i);
        }
        r
    }

    /// Formal product; exponents add and Teichmüller parts multiply.
    pub fn multiply(&self, o: &TiltExpr) -> Result<TiltExpr> {
        self.check_prime(o)?;
        let mut r = TiltExpr::zero(self.p);
        for ((i, m), n) in &self.terms {
            for ((j, m2), n2) in &o.terms {
                r.add_term(n * n2, m.mul(m2, self.p)?, i + j);
            }
        }
        Ok(r)
    }

    pub fn pow(&self, k: u32) -> Result<TiltExpr> {
        let mut r = TiltExpr::one(self.p);
        for _ in 0..k {
            r = r.multiply(self)?;
        }
        Ok(r)
    }

    /// The part with p-power `i`.
    pub fn part(&self, i: i64) -> TiltExpr {
        TiltExpr {
            p: self.p,
            terms: self
                .terms
                .iter()
                .filter(|((j, _), _)| *j == i)
                .map(|(k, v)| (k.clone(), v.clone()))
                .collect(),
        }
    }

    /// Image in R = A_inf/p: the p-power-0 part with coefficients reduced mod p.
    pub fn reduction_mod_p(&self) -> Result<TiltExpr> {
        if !self.in_a_inf() {
            return Err(Error::Domain("expression has negative powers of p".into()));
        }
        let pb = BigInt::from(self.p.get());
        let mut r = TiltExpr::zero(self.p);
        for ((i, m), n) in &self.terms {
            if *i == 0 {
                let red = num_integer::Integer::mod_floor(n, &pb);
                r.add_term(red, m.clone(), 0);
            }
        }
        Ok(r)
    }

    /// Newton polygon of the formal sum: each term n·[ξ]p^i contributes the
    /// point (i + v_p(n), v♭(ξ)). The result is the true polygon when no hull
    /// vertex is attained by two terms; `ties` reports when one is.
    pub fn formal_polygon(&self) -> Result<FormalPolygon> {
        let pv = self.p.get();
        let mut best: BTreeMap<Q, (Q, usize)> = BTreeMap::new();
        for ((i, m), n) in &self.terms {
            let x = qi(*i + vp_int(n, pv) as i64);
            let y = vflat_monomial(m);
            match best.get_mut(&x) {
                Some((by, count)) if *by == y => *count += 1,
                Some((by, count)) if y < *by => {
                    *by = y;
                    *count = 1;
                }
                Some(_) => {}
                None => {
                    best.insert(x, (y, 1));
                }
            }
        }
        if best.is_empty() {
            return Err(Error::Domain("zero expression has no Newton polygon".into()));
        }
        let pts: Vec<(Q, Q)> = best.iter().map(|(x, (y, _))| (x.clone(), y.clone())).collect();
        let polygon = hull_points(&pts, LeftRay::Vertical, RightRay::Horizontal)?;
        let ties = polygon
            .vertices
            .iter()
            .any(|(x, _)| best.get(x).is_some_and(|(_, c)| *c > 1));
        Ok(FormalPolygon { polygon, ties })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FormalPolygon {
    pub polygon: Polygon,
    pub ties: bool,
}

/// φ^n: exponents scale by p^n and Teichmüller parts by the residue Frobenius.
pub fn frobenius(x: &TiltExpr, n: i64) -> TiltExpr {
    let p = x.p;
    let k = pow_q(p.get(), n);
    let mut r = TiltExpr::zero(p);
    for ((i, m), c) in &x.terms {
        let m2 = TiltMonomial {
            a: &m.a * &k,
            c: &m.c * &k,
            u: m.u.frobenius(n, p.get()),
        };
        r.add_term(c.clone(), m2, *i);
    }
    r
}

/// An element of G_K through chi = χ_cycl(g), c = c(g) and the residue
/// Frobenius power.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GaloisElement {
    #[serde(with = "crate::rational::serde_q")]
    pub chi: Q,
    #[serde(with = "crate::rational::serde_q")]
    pub c: Q,
    #[serde(default)]
    pub frob: i64,
}

impl GaloisElement {
    pub fn new(chi: Q, c: Q, frob: i64, p: Prime) -> Result<Self> {
        let g = GaloisElement { chi, c, frob };
        g.validate(p)?;
        Ok(g)
    }

    pub fn identity() -> Self {
        GaloisElement {
            chi: Q::one(),
            c: Q::zero(),
            frob: 0,
        }
    }

    pub fn validate(&self, p: Prime) -> Result<()> {
        if vp_q(&self.chi, p.get()) != Some(0) {
            return schema(format!("chi = {} is not a p-adic unit", self.chi));
        }
        if !is_p_integral(&self.c, p.get()) {
            return schema(format!("c = {} is not p-integral", self.c));
        }
        Ok(())
    }

    /// The product g·h, with c(gh) = c(g) + χ(g) c(h).
    pub fn compose(&self, h: &GaloisElement) -> GaloisElement {
        GaloisElement {
            chi: &self.chi * &h.chi,
            c: &self.c + &self.chi * &h.c,
            frob: self.frob + h.frob,
        }
    }
}

/// g(ε^a (p♭)^c [u]) = ε^{χa + c(g)c} (p♭)^c [Frob^frob u].
pub fn galois_act(g: &GaloisElement, x: &TiltExpr) -> TiltExpr {
    let p = x.p;
    let mut r = TiltExpr::zero(p);
    for ((i, m), n) in &x.terms {
        let m2 = TiltMonomial {
            a: &g.chi * &m.a + &g.c * &m.c,
            c: m.c.clone(),
            u: m.u.frobenius(g.frob, p.get()),
        };
        r.add_term(n.clone(), m2, *i);
    }
    r
}

/// ω = Σ_{j=0}^{p-1} [ε^{j/p}].
pub fn omega(p: Prime) -> TiltExpr {
    let pv = p.get() as i64;
    let mut r = TiltExpr::zero(p);
    for j in 0..pv {
        r.add_term(BigInt::one(), TiltMonomial::epsilon(q(j, pv)), 0);
    }
    r
}

/// [ε^a] - 1.
pub fn epsilon_power_minus_one(p: Prime, a: Q) -> TiltExpr {
    let mut r = TiltExpr::monomial(p, BigInt::one(), TiltMonomial::epsilon(a), 0);
    r.add_term(-BigInt::one(), TiltMonomial::one(), 0);
    r
}

pub fn epsilon_minus_one(p: Prime) -> TiltExpr {
    epsilon_power_minus_one(p, Q::one())
}

/// [p♭] - p.
pub fn pflat_minus_p(p: Prime) -> TiltExpr {
    let mut r = TiltExpr::monomial(p, BigInt::one(), TiltMonomial::pflat(Q::one()), 0);
    r.add_term(-BigInt::one(), TiltMonomial::one(), 1);
    r
}

/// [θ(φ^n(x)) = 0 for n = 0..=n_max].
pub fn ker_theta_orbit_probe(x: &TiltExpr, n: u32, n_max: u32) -> Result<Vec<bool>> {
    (0..=n_max)
        .map(|k| Ok(theta(&frobenius(x, k as i64), n)?.is_zero()))
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Check {
    Pass,
    Fail,
    Inconclusive,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneratorReport {
    pub theta_vanishes: Check,
    pub vflat_mod_p_is_one: Check,
    pub vflat: VflatReport,
}

impl GeneratorReport {
    pub fn passes(&self) -> bool {
        self.theta_vanishes == Check::Pass && self.vflat_mod_p_is_one == Check::Pass
    }
}

/// Tests whether x generates ker θ in A_inf: θ(x) = 0 and v♭(x mod p) = 1.
pub fn generator_condition_check(x: &TiltExpr, n: u32, depth: u32) -> Result<GeneratorReport> {
    if !x.in_a_inf() {
        return Err(Error::Domain("expression is not in A_inf".into()));
    }
    let th = theta(x, n)?;
    let vf = vflat_sum(&x.reduction_mod_p()?, depth)?;
    let vcheck = match (&vf.status, &vf.value) {
        (VflatStatus::Stabilized, Some(v)) => {
            if *v == crate::padic_core::Valuation::Finite(Q::one()) {
                Check::Pass
            } else {
                Check::Fail
            }
        }
        _ => Check::Inconclusive,
    };
    Ok(GeneratorReport {
        theta_vanishes: if th.is_zero() { Check::Pass } else { Check::Fail },
        vflat_mod_p_is_one: vcheck,
        vflat: vf,
    })
}

pub(crate) fn int_q(n: &BigInt) -> Q {
    qbig(n.clone())
}
