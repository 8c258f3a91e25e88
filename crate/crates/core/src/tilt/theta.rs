//! θ: A_inf[1/p] → C_p evaluated on formal sums at a finite level.
//!
//! With M = p^N (p-1), every value is Σ_g p^g · z_g where g runs over
//! fractional parts of p♭-exponents and z_g ∈ Q(ζ_M). The generator
//! x = ζ_M gives ζ_{p^N} = x^{p-1} and the Teichmüller roots ζ_{p-1} = x^{p^N}.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::cyclotomic::CyclotomicField;
use super::{int_q, TiltExpr};
use crate::error::{Error, Result};
use crate::padic_core::Prime;
use crate::poly::{pow_mod, QPoly};
use crate::rational::{floor, pow_big, q, qbig, residue_mod, vp_int, Q};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ThetaPiece {
    #[serde(with = "crate::rational::serde_q")]
    pub grade: Q,
    /// Coefficients of powers of ζ_M, reduced modulo Φ_M.
    #[serde(with = "crate::rational::serde_qvec")]
    pub coeffs: Vec<Q>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GradedThetaValue {
    pub p: Prime,
    pub n: u32,
    pub conductor: u64,
    pub pieces: Vec<ThetaPiece>,
}

impl GradedThetaValue {
    pub fn is_zero(&self) -> bool {
        self.pieces.is_empty()
    }

    /// The rational number this value equals, when it is one.
    pub fn as_rational(&self) -> Option<Q> {
        match self.pieces.as_slice() {
            [] => Some(Q::zero()),
            [piece] if piece.grade.is_zero() && piece.coeffs.len() == 1 => Some(piece.coeffs[0].clone()),
            _ => None,
        }
    }

    /// Image under σ_χ: ζ_{p^N} ↦ ζ_{p^N}^χ fixing the Teichmüller roots.
    /// Only defined when every piece has grade 0, i.e. on values of
    /// expressions with integral p♭-exponents.
    pub fn conjugate(&self, chi: &Q) -> Result<GradedThetaValue> {
        if self.pieces.iter().any(|pc| !pc.grade.is_zero()) {
            return Err(Error::Domain("conjugation needs integral p-flat exponents".into()));
        }
        let pv = self.p.get();
        let pn = pow_big(pv, self.n);
        let field = CyclotomicField::new(self.conductor);
        let k = crt_exponent(&residue_mod(chi, &pn), &pn, pv - 1);
        let pieces = self
            .pieces
            .iter()
            .map(|pc| ThetaPiece {
                grade: pc.grade.clone(),
                coeffs: field.automorphism(&QPoly::new(pc.coeffs.clone()), k).0,
            })
            .collect();
        Ok(GradedThetaValue { pieces, ..self.clone() })
    }
}

fn crt_exponent(r: &BigInt, pn: &BigInt, m: u64) -> u64 {
    let modulus = pn * BigInt::from(m);
    let mut k = r.clone();
    while !(&k - BigInt::one()).mod_floor(&BigInt::from(m)).is_zero() {
        k += pn;
    }
    k.mod_floor(&modulus).to_u64().expect("conductor fits in u64")
}

fn primitive_root(p: u64) -> u64 {
    if p == 2 {
        return 1;
    }
    let m = p - 1;
    let mut factors = Vec::new();
    let mut t = m;
    let mut d = 2;
    while d * d <= t {
        if t.is_multiple_of(d) {
            factors.push(d);
            while t.is_multiple_of(d) {
                t /= d;
            }
        }
        d += 1;
    }
    if t > 1 {
        factors.push(t);
    }
    (2..p)
        .find(|&g| factors.iter().all(|&f| pow_mod(g, m / f, p) != 1))
        .expect("primitive roots exist")
}

fn discrete_log(u: u64, p: u64) -> u64 {
    let g = primitive_root(p);
    let mut acc = 1 % p;
    for k in 0..p - 1 {
        if acc == u % p {
            return k;
        }
        acc = acc * g % p;
    }
    unreachable!("u is a unit mod p")
}

/// θ of a formal sum at level N: ε^a ↦ ζ_{p^N}^{a p^N}, (p♭)^c ↦ p^c with the
/// positive real root, [u] ↦ Teichmüller lift (u in the prime field).
pub fn theta(x: &TiltExpr, n: u32) -> Result<GradedThetaValue> {
    let p = x.prime();
    let pv = p.get();
    let pn = pow_big(pv, n);
    let pn_u = pn.to_u64().ok_or_else(|| Error::Domain("level too large".into()))?;
    let m = pn_u * (pv - 1);
    let field = CyclotomicField::new(m);
    let pn_q = qbig(pn.clone());
    let mut raw: BTreeMap<Q, Vec<(u64, Q)>> = BTreeMap::new();
    for (coeff, mono, i) in x.terms() {
        let ap = &mono.a * &pn_q;
        if vp_int(ap.denom(), pv) > 0 {
            return Err(Error::Domain(format!(
                "exponent of epsilon {} needs level above {n}",
                mono.a
            )));
        }
        let cp = &mono.c * &pn_q;
        if !cp.is_integer() {
            return Err(Error::Domain(format!(
                "exponent of p-flat {} needs level above {n}",
                mono.c
            )));
        }
        let u = mono.u.prime_value().ok_or_else(|| {
            Error::Domain("theta of Teichmuller parts outside F_p is not modeled".into())
        })?;
        let k = residue_mod(&ap, &pn).to_u64().expect("residue fits");
        let ku = discrete_log(u, pv);
        let exp = (k * (pv - 1) + ku * pn_u) % m;
        let fl = floor(&mono.c);
        let grade = &mono.c - qbig(fl.clone());
        let scale_exp = fl + BigInt::from(i);
        let scale = pow_signed(pv, &scale_exp);
        raw.entry(grade).or_default().push((exp, int_q(coeff) * scale));
    }
    let fold = pv == 2 && n >= 3;
    let half = q(1, 2);
    let sqrt2 = if fold {
        let s = m / 8;
        field.from_terms([(s, &Q::one()), (m - s, &Q::one())])
    } else {
        QPoly::new(vec![])
    };
    let mut pieces: BTreeMap<Q, QPoly> = BTreeMap::new();
    for (grade, terms) in raw {
        let mut z = field.from_terms(terms.iter().map(|(e, c)| (*e, c)));
        let mut g = grade;
        if fold && g >= half {
            z = field.mul(&z, &sqrt2);
            g -= &half;
        }
        let slot = pieces.entry(g).or_insert_with(|| QPoly::new(vec![]));
        *slot = slot.add(&z);
    }
    Ok(GradedThetaValue {
        p,
        n,
        conductor: m,
        pieces: pieces
            .into_iter()
            .filter(|(_, z)| !z.is_zero())
            .map(|(grade, z)| ThetaPiece { grade, coeffs: z.0 })
            .collect(),
    })
}

fn pow_signed(p: u64, e: &BigInt) -> Q {
    let e = e.to_i64().expect("exponent fits");
    crate::rational::pow_q(p, e)
}
