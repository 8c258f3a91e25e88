//! Characters of G_{Q_p} as triples μ_λ · χ_cycl^a · ω_cycl^b, and Sen
//! operators of matrix-specified representations.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{schema, Error, Result};
use crate::linalg::{char_poly, identity, is_zero_matrix, mat_mul, poly_at_matrix, Mat, QField};
use crate::padic_core::Prime;
use crate::poly::QPoly;
use crate::rational::{is_p_integral, pow_big, pow_q, qbig, qi, rational_reconstruction, residue_mod, vp_q, Q};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CharacterTriple {
    pub p: Prime,
    #[serde(with = "crate::rational::serde_q")]
    pub lambda: Q,
    #[serde(with = "crate::rational::serde_q")]
    pub a: Q,
    pub b: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CharacterFlags {
    pub unramified: bool,
    pub cp_admissible: bool,
    pub hodge_tate: bool,
    #[serde(with = "opt_q")]
    pub hodge_tate_weight: Option<Q>,
    pub de_rham: bool,
    pub crystalline: bool,
}

mod opt_q {
    use super::Q;
    use crate::rational::serde_q::Wrap;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(v: &Option<Q>, s: S) -> Result<S::Ok, S::Error> {
        v.clone().map(Wrap).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Q>, D::Error> {
        Ok(Option::<Wrap>::deserialize(d)?.map(|w| w.0))
    }
}

impl CharacterTriple {
    pub fn new(p: Prime, lambda: Q, a: Q, b: i64) -> Result<Self> {
        let c = CharacterTriple { p, lambda, a, b };
        c.validate()
    }

    /// Checks the invariants and reduces b modulo p - 1.
    pub fn validate(&self) -> Result<Self> {
        let pv = self.p.get();
        if pv == 2 {
            return schema("character triples need p > 2");
        }
        if vp_q(&self.lambda, pv) != Some(0) {
            return schema(format!("lambda = {} is not a p-adic unit", self.lambda));
        }
        if !is_p_integral(&self.a, pv) {
            return schema(format!("a = {} has p in the denominator", self.a));
        }
        Ok(CharacterTriple {
            b: self.b.rem_euclid(pv as i64 - 1),
            ..self.clone()
        })
    }

    pub fn trivial(p: Prime) -> Result<Self> {
        Self::new(p, Q::one(), Q::zero(), 0)
    }

    pub fn cyclotomic(p: Prime) -> Result<Self> {
        Self::new(p, Q::one(), Q::one(), 0)
    }

    pub fn teichmuller(p: Prime) -> Result<Self> {
        Self::new(p, Q::one(), Q::zero(), 1)
    }

    pub fn classify(&self) -> CharacterFlags {
        let integral = self.a.is_integer();
        let crystalline = integral && self.b == 0;
        CharacterFlags {
            unramified: self.a.is_zero() && self.b == 0,
            cp_admissible: self.a.is_zero(),
            hodge_tate: integral,
            hodge_tate_weight: integral.then(|| self.a.clone()),
            de_rham: integral,
            crystalline,
        }
    }

    pub fn multiply(&self, o: &CharacterTriple) -> Result<CharacterTriple> {
        if self.p != o.p {
            return schema("characters over different primes");
        }
        CharacterTriple::new(self.p, &self.lambda * &o.lambda, &self.a + &o.a, self.b + o.b)
    }

    pub fn inverse(&self) -> CharacterTriple {
        CharacterTriple::new(self.p, Q::one() / &self.lambda, -&self.a, -self.b)
            .expect("inverse of a valid triple is valid")
    }
}

pub const DEFAULT_PRECISION: u32 = 20;

/// Action of γ_r on a representation, as a matrix.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SenInput {
    pub p: Prime,
    pub r: u32,
    #[serde(with = "crate::rational::serde_qmat")]
    pub matrix: Mat<Q>,
}

/// log(A)/p^r, correct modulo p^precision in each entry.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SenOperator {
    pub p: Prime,
    #[serde(with = "crate::rational::serde_qmat")]
    pub matrix: Mat<Q>,
    pub precision: u32,
}

fn min_valuation(m: &Mat<Q>, p: u64) -> Option<i64> {
    m.iter().flatten().filter_map(|x| vp_q(x, p)).min()
}

fn check_square(m: &Mat<Q>) -> Result<usize> {
    let d = m.len();
    if d == 0 || m.iter().any(|r| r.len() != d) {
        return schema("matrix must be square and nonempty");
    }
    Ok(d)
}

/// Smallest integer margin guaranteeing convergence of log and exp.
pub fn log_margin(p: Prime) -> i64 {
    1 / (p.get() as i64 - 1) + 1
}

fn floor_log(p: u64, i: u64) -> i64 {
    let mut k = 0;
    let mut t = i;
    while t >= p {
        t /= p;
        k += 1;
    }
    k
}

/// Σ (-1)^{i-1} X^i / i, summed until the omitted terms have valuation at
/// least `target`.
fn log_series(x: &Mat<Q>, p: u64, mu: i64, target: i64) -> Mat<Q> {
    let f = QField;
    let d = x.len();
    let mut acc = vec![vec![Q::zero(); d]; d];
    let mut power = identity(&f, d);
    let mut i: u64 = 1;
    loop {
        power = mat_mul(&f, &power, x);
        if is_zero_matrix(&power) {
            break;
        }
        let s = if i % 2 == 1 { qi(1) } else { qi(-1) } / qbig(BigInt::from(i));
        for (ar, pr) in acc.iter_mut().zip(&power) {
            for (a, v) in ar.iter_mut().zip(pr) {
                *a += v * &s;
            }
        }
        i += 1;
        if (i as i64) * mu - floor_log(p, i) >= target {
            break;
        }
    }
    acc
}

pub fn sen_operator(input: &SenInput, precision: u32) -> Result<SenOperator> {
    let pv = input.p.get();
    let d = check_square(&input.matrix)?;
    let f = QField;
    let x: Mat<Q> = input
        .matrix
        .iter()
        .zip(identity(&f, d))
        .map(|(r, i)| r.iter().zip(i).map(|(a, b)| a - b).collect())
        .collect();
    let mu = min_valuation(&x, pv).unwrap_or(i64::MAX / 4);
    let need = log_margin(input.p);
    if mu < need {
        return Err(Error::Domain(format!(
            "A - I has valuation {mu}, the logarithm needs at least {need}"
        )));
    }
    let target = precision as i64 + input.r as i64;
    let log = log_series(&x, pv, mu, target);
    let scale = pow_q(pv, -(input.r as i64));
    Ok(SenOperator {
        p: input.p,
        matrix: log.iter().map(|r| r.iter().map(|v| v * &scale).collect()).collect(),
        precision,
    })
}

/// exp(M) = Σ M^i / i!, summed until omitted terms have valuation at least
/// `precision`. Requires v_p(M) ≥ the log margin.
pub fn exp_matrix(m: &Mat<Q>, p: Prime, precision: u32) -> Result<Mat<Q>> {
    let pv = p.get();
    let d = check_square(m)?;
    let mu = min_valuation(m, pv).unwrap_or(i64::MAX / 4);
    if mu < log_margin(p) {
        return Err(Error::Domain("exponential does not converge".into()));
    }
    let f = QField;
    let mut acc = identity(&f, d);
    let mut power = identity(&f, d);
    let mut fact = BigInt::one();
    let mut i: u64 = 1;
    loop {
        power = mat_mul(&f, &power, m);
        if is_zero_matrix(&power) {
            break;
        }
        fact *= BigInt::from(i);
        let s = Q::new(BigInt::one(), fact.clone());
        for (ar, pr) in acc.iter_mut().zip(&power) {
            for (a, v) in ar.iter_mut().zip(pr) {
                *a += v * &s;
            }
        }
        i += 1;
        // v(M^i / i!) ≥ i μ - (i - 1)/(p - 1)
        let bound = i as i64 * mu - (i as i64 - 1) / (pv as i64 - 1);
        if bound >= precision as i64 {
            break;
        }
    }
    Ok(acc)
}

impl SenOperator {
    pub fn dim(&self) -> usize {
        self.matrix.len()
    }

    pub fn is_trivial(&self) -> bool {
        is_trivial_via_sen(self)
    }

    /// Entrywise agreement modulo p^min(precision).
    pub fn agrees_with(&self, o: &SenOperator) -> bool {
        let prec = self.precision.min(o.precision) as i64;
        self.dim() == o.dim()
            && self.matrix.iter().flatten().zip(o.matrix.iter().flatten()).all(|(a, b)| {
                vp_q(&(a - b), self.p.get()).is_none_or(|v| v >= prec)
            })
    }

    /// The simplest rationals congruent to the entries modulo p^precision.
    pub fn reconstructed(&self) -> Option<Mat<Q>> {
        let pv = self.p.get();
        let prec = self.precision as i64;
        self.matrix
            .iter()
            .map(|r| r.iter().map(|x| reconstruct(x, pv, prec)).collect())
            .collect()
    }
}

fn reconstruct(x: &Q, p: u64, prec: i64) -> Option<Q> {
    let v = match vp_q(x, p) {
        None => return Some(Q::zero()),
        Some(v) if v >= prec => return Some(Q::zero()),
        Some(v) => v,
    };
    let unit = x * pow_q(p, -v);
    let m = pow_big(p, (prec - v) as u32);
    let y = rational_reconstruction(&residue_mod(&unit, &m), &m)?;
    Some(y * pow_q(p, v))
}

pub fn is_trivial_via_sen(op: &SenOperator) -> bool {
    let prec = op.precision as i64;
    op.matrix
        .iter()
        .flatten()
        .all(|x| vp_q(x, op.p.get()).is_none_or(|v| v >= prec))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum HodgeTateStatus {
    HodgeTate,
    NotHodgeTate,
    Indeterminate,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HodgeTateVerdict {
    pub status: HodgeTateStatus,
    /// Generalized Hodge-Tate weights with multiplicity, when all are rational.
    #[serde(with = "crate::rational::serde_qvec")]
    pub weights: Vec<Q>,
    pub diagonalizable: Option<bool>,
}

/// Hodge-Tate iff the (reconstructed) operator is semisimple with integer
/// eigenvalues.
pub fn hodge_tate_via_sen(op: &SenOperator) -> HodgeTateVerdict {
    let indeterminate = HodgeTateVerdict {
        status: HodgeTateStatus::Indeterminate,
        weights: vec![],
        diagonalizable: None,
    };
    let Some(m) = op.reconstructed() else {
        return indeterminate;
    };
    let cp = char_poly(&m);
    let roots = cp.rational_roots();
    let total: usize = roots.iter().map(|(_, k)| k).sum();
    if total < op.dim() {
        return indeterminate;
    }
    let mut weights = Vec::new();
    let mut minpoly = QPoly::one();
    for (r, k) in &roots {
        weights.extend(std::iter::repeat_n(r.clone(), *k));
        minpoly = minpoly.mul(&QPoly::x_minus(r));
    }
    let diagonalizable = is_zero_matrix(&poly_at_matrix(&minpoly, &m));
    let integral = weights.iter().all(|w| w.is_integer());
    HodgeTateVerdict {
        status: if diagonalizable && integral {
            HodgeTateStatus::HodgeTate
        } else {
            HodgeTateStatus::NotHodgeTate
        },
        weights,
        diagonalizable: Some(diagonalizable),
    }
}
