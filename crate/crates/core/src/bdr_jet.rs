//! Jets: the free commutative Q-algebra on u = [ε] - 1 and w = 1 - [p♭]/p
//! modulo monomials of total degree ≥ m.
//!
//! Equalities proved here hold in B_dR^+/Fil^m through the evaluation map,
//! but the algebra forgets the relation between u and w, so a failed identity
//! is not a refutation.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{schema, Error, Result};
use crate::padic_core::Prime;
use crate::rational::{fmt_q, is_p_integral, parse_q, pow_q, qi, Q};
use crate::tilt::GaloisElement;

/// Exponents (i, j) of u^i w^j.
pub type Monomial = (u32, u32);

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JetElement {
    pub p: Prime,
    pub order: u32,
    coeffs: BTreeMap<Monomial, Q>,
}

impl JetElement {
    pub fn zero(p: Prime, order: u32) -> Result<Self> {
        if order == 0 {
            return schema("jet order must be at least 1");
        }
        Ok(JetElement {
            p,
            order,
            coeffs: BTreeMap::new(),
        })
    }

    fn empty(&self) -> Self {
        JetElement {
            p: self.p,
            order: self.order,
            coeffs: BTreeMap::new(),
        }
    }

    pub fn constant(p: Prime, order: u32, c: Q) -> Result<Self> {
        let mut r = Self::zero(p, order)?;
        r.insert((0, 0), c);
        Ok(r)
    }

    pub fn one(p: Prime, order: u32) -> Result<Self> {
        Self::constant(p, order, Q::one())
    }

    pub fn u(p: Prime, order: u32) -> Result<Self> {
        let mut r = Self::zero(p, order)?;
        r.insert((1, 0), Q::one());
        Ok(r)
    }

    pub fn w(p: Prime, order: u32) -> Result<Self> {
        let mut r = Self::zero(p, order)?;
        r.insert((0, 1), Q::one());
        Ok(r)
    }

    pub fn from_terms(p: Prime, order: u32, terms: impl IntoIterator<Item = (Monomial, Q)>) -> Result<Self> {
        let mut r = Self::zero(p, order)?;
        for (m, c) in terms {
            r.insert(m, c);
        }
        Ok(r)
    }

    fn insert(&mut self, m: Monomial, c: Q) {
        if m.0 + m.1 >= self.order || c.is_zero() {
            return;
        }
        let e = self.coeffs.entry(m).or_insert_with(Q::zero);
        *e += c;
        if e.is_zero() {
            self.coeffs.remove(&m);
        }
    }

    pub fn coeff(&self, m: Monomial) -> Q {
        self.coeffs.get(&m).cloned().unwrap_or_else(Q::zero)
    }

    pub fn constant_term(&self) -> Q {
        self.coeff((0, 0))
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Q)> {
        self.coeffs.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// True when only powers of u occur.
    pub fn is_u_only(&self) -> bool {
        self.coeffs.keys().all(|(_, j)| *j == 0)
    }

    fn check(&self, o: &JetElement) -> Result<()> {
        if self.p != o.p || self.order != o.order {
            return schema("jets with different prime or order");
        }
        Ok(())
    }

    pub fn add(&self, o: &JetElement) -> Result<JetElement> {
        self.check(o)?;
        let mut r = self.clone();
        for (m, c) in &o.coeffs {
            r.insert(*m, c.clone());
        }
        Ok(r)
    }

    pub fn sub(&self, o: &JetElement) -> Result<JetElement> {
        self.add(&o.scale(&-Q::one()))
    }

    pub fn scale(&self, s: &Q) -> JetElement {
        let mut r = self.empty();
        for (m, c) in &self.coeffs {
            r.insert(*m, c * s);
        }
        r
    }

    pub fn mul(&self, o: &JetElement) -> Result<JetElement> {
        self.check(o)?;
        let mut r = self.empty();
        for ((i, j), c) in &self.coeffs {
            for ((k, l), d) in &o.coeffs {
                r.insert((i + k, j + l), c * d);
            }
        }
        Ok(r)
    }

    pub fn pow(&self, n: u32) -> JetElement {
        let mut r = self.empty();
        r.insert((0, 0), Q::one());
        for _ in 0..n {
            r = r.mul(self).expect("same context");
        }
        r
    }

    fn without_constant(&self, what: &str) -> Result<()> {
        if !self.constant_term().is_zero() {
            return Err(Error::Domain(format!("{what} needs a jet with zero constant term")));
        }
        Ok(())
    }

    /// Σ_k a_k x^k for a coefficient sequence; x must lie in the augmentation ideal.
    fn series(&self, coeff: impl Fn(u32) -> Q) -> JetElement {
        let mut r = self.empty();
        let mut power = self.pow(0);
        for k in 0..self.order {
            let a = coeff(k);
            if !a.is_zero() {
                r = r.add(&power.scale(&a)).expect("same context");
            }
            power = power.mul(self).expect("same context");
        }
        r
    }

    /// Substitutes u ↦ su, w ↦ sw. The inputs may have constant terms; only
    /// the stored monomials are substituted.
    pub fn substitute(&self, su: &JetElement, sw: &JetElement) -> Result<JetElement> {
        self.check(su)?;
        self.check(sw)?;
        let top = self.order as usize;
        let mut up = vec![su.pow(0)];
        let mut wp = vec![sw.pow(0)];
        for k in 1..top {
            up.push(up[k - 1].mul(su)?);
            wp.push(wp[k - 1].mul(sw)?);
        }
        let mut r = self.empty();
        for ((i, j), c) in &self.coeffs {
            let t = up[*i as usize].mul(&wp[*j as usize])?.scale(c);
            r = r.add(&t)?;
        }
        Ok(r)
    }
}

/// Σ_{1≤i<m} (-1)^{i-1} x^i / i.
pub fn log1p(x: &JetElement) -> Result<JetElement> {
    x.without_constant("log1p")?;
    Ok(x.series(|k| {
        if k == 0 {
            Q::zero()
        } else {
            let s = if k % 2 == 1 { 1 } else { -1 };
            Q::new(BigInt::from(s), BigInt::from(k))
        }
    }))
}

/// Σ_{i<m} x^i / i!.
pub fn exp(x: &JetElement) -> Result<JetElement> {
    x.without_constant("exp")?;
    let mut fact = vec![BigInt::one()];
    for k in 1..x.order {
        let f = &fact[k as usize - 1] * BigInt::from(k);
        fact.push(f);
    }
    Ok(x.series(|k| Q::new(BigInt::one(), fact[k as usize].clone())))
}

/// Generalized binomial coefficients C(r, i) for i < n.
pub fn binomial_coefficients(r: &Q, n: u32) -> Vec<Q> {
    let mut out = Vec::with_capacity(n as usize);
    let mut c = Q::one();
    for i in 0..n {
        out.push(c.clone());
        c = c * (r - qi(i as i64)) / qi(i as i64 + 1);
    }
    out
}

/// (1 + x)^r = Σ_{i<m} C(r, i) x^i for r ∈ Z_(p).
pub fn binomial_pow(x: &JetElement, r: &Q) -> Result<JetElement> {
    x.without_constant("binomial_pow")?;
    let pv = x.p.get();
    if !is_p_integral(r, pv) {
        return schema(format!("exponent {r} has p in the denominator"));
    }
    let cs = binomial_coefficients(r, x.order);
    if let Some(bad) = cs.iter().find(|c| !is_p_integral(c, pv)) {
        return Err(Error::Internal(format!("binomial coefficient {bad} is not p-integral")));
    }
    Ok(x.series(|k| cs[k as usize].clone()))
}

/// t = log[ε] = log1p(u).
pub fn t_jet(p: Prime, order: u32) -> Result<JetElement> {
    log1p(&JetElement::u(p, order)?)
}

/// log[p♭] = log1p(-w), using log p = 0.
pub fn log_pflat_jet(p: Prime, order: u32) -> Result<JetElement> {
    log1p(&JetElement::w(p, order)?.scale(&-Q::one()))
}

/// Images of (u, w) under g.
pub fn galois_rules(g: &GaloisElement, p: Prime, order: u32) -> Result<(JetElement, JetElement)> {
    g.validate(p)?;
    let u = JetElement::u(p, order)?;
    let one = JetElement::one(p, order)?;
    let gu = binomial_pow(&u, &g.chi)?.sub(&one)?;
    let one_minus_w = one.sub(&JetElement::w(p, order)?)?;
    let gw = one.sub(&binomial_pow(&u, &g.c)?.mul(&one_minus_w)?)?;
    Ok((gu, gw))
}

pub fn galois_act_jet(g: &GaloisElement, x: &JetElement) -> Result<JetElement> {
    let (gu, gw) = galois_rules(g, x.p, x.order)?;
    x.substitute(&gu, &gw)
}

/// Images of (u, w) under φ; φ(w) has constant term 1 - p^{p-1}.
pub fn frobenius_rules(p: Prime, order: u32) -> Result<(JetElement, JetElement)> {
    let pv = p.get();
    let u = JetElement::u(p, order)?;
    let one = JetElement::one(p, order)?;
    let fu = binomial_pow(&u, &qi(pv as i64))?.sub(&one)?;
    let one_minus_w = one.sub(&JetElement::w(p, order)?)?;
    let fw = one.sub(&one_minus_w.pow(pv as u32).scale(&pow_q(pv, pv as i64 - 1)))?;
    Ok((fu, fw))
}

pub fn frobenius_jet(x: &JetElement) -> Result<JetElement> {
    let (fu, fw) = frobenius_rules(x.p, x.order)?;
    x.substitute(&fu, &fw)
}

/// Checks g(log[p♭]) = log[p♭] + c(g) t in the jet algebra of order m.
pub fn verify_cocycle(g: &GaloisElement, p: Prime, m: u32) -> Result<bool> {
    if m < 2 {
        return schema("verify_cocycle needs order at least 2");
    }
    let y = log_pflat_jet(p, m)?;
    let t = t_jet(p, m)?;
    let lhs = galois_act_jet(g, &y)?;
    let rhs = y.add(&t.scale(&g.c))?;
    Ok(lhs == rhs)
}

/// The class of t^m in gr^m is the class of u^m: checked at order m + 1.
pub fn gr_generator_check(p: Prime, m: u32) -> Result<bool> {
    if m == 0 {
        return Ok(true);
    }
    let t = t_jet(p, m + 1)?;
    let tm = t.pow(m);
    let um = JetElement::u(p, m + 1)?.pow(m);
    Ok(!tm.coeff((m, 0)).is_zero() && tm.sub(&um)?.is_zero())
}

pub fn format_monomial(m: Monomial) -> String {
    let part = |v: &str, e: u32| match e {
        0 => None,
        1 => Some(v.to_string()),
        _ => Some(format!("{v}^{e}")),
    };
    let parts: Vec<String> = [part("u", m.0), part("w", m.1)].into_iter().flatten().collect();
    if parts.is_empty() {
        "1".into()
    } else {
        parts.join(" ")
    }
}

pub fn parse_monomial(s: &str) -> Result<Monomial> {
    let mut m = (0u32, 0u32);
    for tok in s.split_whitespace() {
        let (v, e) = match tok.split_once('^') {
            Some((v, e)) => (v, e.parse::<u32>().or_else(|_| schema(format!("bad exponent in '{s}'")))?),
            None => (tok, 1),
        };
        match v {
            "u" => m.0 += e,
            "w" => m.1 += e,
            "1" if e == 1 => {}
            _ => return schema(format!("unknown jet monomial '{s}'")),
        }
    }
    Ok(m)
}

impl std::fmt::Display for JetElement {
    fn fmt(&self, f: &mut std::fmt::Formatter) -> std::fmt::Result {
        if self.coeffs.is_empty() {
            return f.write_str("0");
        }
        let mut first = true;
        for (m, c) in &self.coeffs {
            let neg = c.is_negative();
            if first {
                if neg {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if neg { " - " } else { " + " })?;
            }
            first = false;
            let a = c.abs();
            let mono = format_monomial(*m);
            match (a.is_one(), mono.as_str()) {
                (_, "1") => write!(f, "{a}")?,
                (true, _) => f.write_str(&mono)?,
                _ => write!(f, "{a} {mono}")?,
            }
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct JetTerm {
    monomial: String,
    value: String,
}

#[derive(Serialize, Deserialize)]
struct JetRepr {
    p: Prime,
    order: u32,
    coeffs: Vec<JetTerm>,
}

impl Serialize for JetElement {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        JetRepr {
            p: self.p,
            order: self.order,
            coeffs: self
                .coeffs
                .iter()
                .map(|(m, c)| JetTerm {
                    monomial: format_monomial(*m),
                    value: fmt_q(c),
                })
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for JetElement {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let r = JetRepr::deserialize(d)?;
        let terms = r
            .coeffs
            .iter()
            .map(|t| Ok((parse_monomial(&t.monomial)?, parse_q(&t.value)?)))
            .collect::<Result<Vec<_>>>()
            .map_err(D::Error::custom)?;
        JetElement::from_terms(r.p, r.order, terms).map_err(D::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    fn p(n: u64) -> Prime {
        Prime::new(n).unwrap()
    }

    #[test]
    fn log_series() {
        let u = JetElement::u(p(3), 4).unwrap();
        let l = log1p(&u).unwrap();
        assert_eq!(l.coeff((1, 0)), qi(1));
        assert_eq!(l.coeff((2, 0)), q(-1, 2));
        assert_eq!(l.coeff((3, 0)), q(1, 3));
        assert_eq!(log1p(&JetElement::u(p(3), 2).unwrap()).unwrap(), JetElement::u(p(3), 2).unwrap());
        assert!(log1p(&JetElement::one(p(3), 3).unwrap()).is_err());
    }

    #[test]
    fn half_power() {
        let u = JetElement::u(p(3), 3).unwrap();
        let b = binomial_pow(&u, &q(1, 2)).unwrap();
        assert_eq!(b.constant_term(), qi(1));
        assert_eq!(b.coeff((1, 0)), q(1, 2));
        assert_eq!(b.coeff((2, 0)), q(-1, 8));
        assert!(binomial_pow(&u, &q(1, 3)).is_err());
    }

    #[test]
    fn frobenius_and_galois_on_t() {
        for pv in [2, 3, 5] {
            let pr = p(pv);
            let t = t_jet(pr, 6).unwrap();
            assert_eq!(frobenius_jet(&t).unwrap(), t.scale(&qi(pv as i64)));
            let g = GaloisElement::new(qi(1 + pv as i64), qi(2), 0, pr).unwrap();
            assert_eq!(galois_act_jet(&g, &t).unwrap(), t.scale(&g.chi));
            let fw = frobenius_jet(&JetElement::w(pr, 3).unwrap()).unwrap();
            assert_eq!(fw.constant_term(), qi(1) - pow_q(pv, pv as i64 - 1));
        }
    }

    #[test]
    fn cocycle_and_gr() {
        let pr = p(3);
        let g = GaloisElement::new(qi(4), qi(1), 0, pr).unwrap();
        assert!(verify_cocycle(&g, pr, 6).unwrap());
        assert!(gr_generator_check(p(2), 3).unwrap());
        assert!(gr_generator_check(pr, 0).unwrap());
        assert!(gr_generator_check(pr, 1).unwrap());
    }

    #[test]
    fn monomial_text() {
        for m in [(0, 0), (1, 0), (2, 1), (0, 3)] {
            assert_eq!(parse_monomial(&format_monomial(m)).unwrap(), m);
        }
        assert_eq!(format_monomial((2, 1)), "u^2 w");
        assert!(parse_monomial("v").is_err());
    }

    #[test]
    fn json_round_trip() {
        let x = log_pflat_jet(p(5), 4).unwrap();
        let s = serde_json::to_string(&x).unwrap();
        assert_eq!(serde_json::from_str::<JetElement>(&s).unwrap(), x);
    }
}
