//! Filtered φ-modules over a totally ramified K/Q_p, with K_0 = Q_p so that
//! φ is linear: Hodge and Newton numbers, duals, tensor products and the
//! weak admissibility test.
//!
//! Φ acts on column vectors. A filtration is a list of steps (m_i, V_i) with
//! m_1 < m_2 < … and K^d = V_1 ⊋ V_2 ⊋ … ⊋ V_k ⊋ 0, meaning
//! Fil^m = V_i for m_{i-1} < m ≤ m_i and Fil^m = 0 for m > m_k.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{schema, Error, Result};
use crate::factor::{factor_over_q, qp_irreducibility, QpIrreducibility};
use crate::linalg::{
    char_poly, determinant, identity, inverse, kronecker, mat_mul, mat_vec, nullspace, poly_at_matrix, rank,
    transpose, Field, Mat, QField,
};
use crate::padic_core::{poly_newton_polygon, PolyValuationProfile, Prime};
use crate::poly::QPoly;
use crate::rational::{pow_q, qi, vp_q, Q};
use crate::representations::CharacterTriple;

/// K = Q[x]/(E) with E monic: Eisenstein at p, or of degree 1 for K = Q_p.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KField {
    pub p: Prime,
    modulus: QPoly,
}

impl KField {
    pub fn new(p: Prime, eisenstein: &[Q]) -> Result<Self> {
        let e = QPoly::new(eisenstein.to_vec());
        let n = match e.degree() {
            Some(n) if n >= 1 => n,
            _ => return schema("Eisenstein polynomial must have degree at least 1"),
        };
        if !e.lead().is_one() || e.0.iter().any(|c| !c.is_integer()) {
            return schema("Eisenstein polynomial must be monic with integer coefficients");
        }
        if n == 1 {
            return Ok(Self::qp(p));
        }
        {
            let pv = p.get();
            let lower_ok = e.0[..n].iter().all(|c| vp_q(c, pv).is_none_or(|v| v >= 1));
            if !lower_ok || vp_q(&e.0[0], pv) != Some(1) {
                return schema(format!("polynomial is not Eisenstein at {pv}"));
            }
        }
        Ok(KField { p, modulus: e })
    }

    pub fn qp(p: Prime) -> Self {
        KField {
            p,
            modulus: QPoly::new(vec![-qi(p.get() as i64), qi(1)]),
        }
    }

    pub fn degree(&self) -> usize {
        self.modulus.degree().unwrap_or(1)
    }

    pub fn eisenstein(&self) -> &[Q] {
        &self.modulus.0
    }

    pub fn is_qp(&self) -> bool {
        self.degree() == 1
    }

    /// v_p extended to K with v(π) = 1/e, π the class of x.
    pub fn valuation(&self, a: &QPoly) -> Option<Q> {
        let e = self.degree() as i64;
        a.0.iter()
            .enumerate()
            .filter_map(|(i, c)| vp_q(c, self.p.get()).map(|v| qi(v) + Q::new(BigInt::from(i), BigInt::from(e))))
            .min()
    }

    fn constant(&self, c: Q) -> QPoly {
        QPoly::new(vec![c])
    }
}

impl Field for KField {
    type E = QPoly;
    fn zero(&self) -> QPoly {
        QPoly::new(vec![])
    }
    fn one(&self) -> QPoly {
        QPoly::one()
    }
    fn add(&self, a: &QPoly, b: &QPoly) -> QPoly {
        a.add(b)
    }
    fn sub(&self, a: &QPoly, b: &QPoly) -> QPoly {
        a.sub(b)
    }
    fn mul(&self, a: &QPoly, b: &QPoly) -> QPoly {
        if self.is_qp() {
            return self.constant(a.coeff(0) * b.coeff(0));
        }
        a.mul(b).rem(&self.modulus)
    }
    fn inv(&self, a: &QPoly) -> QPoly {
        if self.is_qp() {
            return self.constant(Q::one() / a.coeff(0));
        }
        // Extended Euclid: s a + t E = 1.
        let (mut r0, mut r1) = (self.modulus.clone(), a.clone());
        let (mut s0, mut s1) = (QPoly::new(vec![]), QPoly::one());
        while !r1.is_zero() {
            let (qt, r2) = r0.div_rem(&r1);
            let s2 = s0.sub(&qt.mul(&s1));
            r0 = std::mem::replace(&mut r1, r2);
            s0 = std::mem::replace(&mut s1, s2);
        }
        let c = r0.coeff(0);
        s0.scale(&(Q::one() / c)).rem(&self.modulus)
    }
    fn is_zero(&self, a: &QPoly) -> bool {
        a.is_zero()
    }
    fn from_q(&self, q: &Q) -> QPoly {
        self.constant(q.clone())
    }
}

/// An element of K on the wire: a rational when it lies in Q, otherwise the
/// coefficient list in powers of π.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KElem(pub QPoly);

impl Serialize for KElem {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use crate::rational::serde_q::Wrap;
        if self.0 .0.len() <= 1 {
            Wrap(self.0.coeff(0)).serialize(s)
        } else {
            self.0 .0.iter().cloned().map(Wrap).collect::<Vec<_>>().serialize(s)
        }
    }
}

impl<'de> Deserialize<'de> for KElem {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use crate::rational::serde_q::Wrap;
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            List(Vec<Wrap>),
            One(Wrap),
        }
        Ok(KElem(match Repr::deserialize(d)? {
            Repr::List(v) => QPoly::new(v.into_iter().map(|w| w.0).collect()),
            Repr::One(w) => QPoly::new(vec![w.0]),
        }))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FiltrationStep {
    pub jump: i64,
    pub basis: Vec<Vec<KElem>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FilteredPhiModule {
    pub base: KField,
    pub frobenius: Mat<Q>,
    steps: Vec<(i64, Mat<QPoly>)>,
}

#[derive(Serialize, Deserialize)]
struct ModuleRepr {
    p: Prime,
    #[serde(default, skip_serializing_if = "Option::is_none", with = "opt_qvec")]
    eisenstein: Option<Vec<Q>>,
    dim: usize,
    #[serde(with = "crate::rational::serde_qmat")]
    frobenius: Mat<Q>,
    filtration: Vec<FiltrationStep>,
}

mod opt_qvec {
    use super::Q;
    use crate::rational::serde_q::Wrap;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(v: &Option<Vec<Q>>, s: S) -> Result<S::Ok, S::Error> {
        v.as_ref()
            .map(|v| v.iter().cloned().map(Wrap).collect::<Vec<_>>())
            .serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Vec<Q>>, D::Error> {
        Ok(Option::<Vec<Wrap>>::deserialize(d)?.map(|v| v.into_iter().map(|w| w.0).collect()))
    }
}

impl Serialize for FilteredPhiModule {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        ModuleRepr {
            p: self.base.p,
            eisenstein: (!self.base.is_qp()).then(|| self.base.eisenstein().to_vec()),
            dim: self.dim(),
            frobenius: self.frobenius.clone(),
            filtration: self
                .steps
                .iter()
                .map(|(m, b)| FiltrationStep {
                    jump: *m,
                    basis: b.iter().map(|v| v.iter().cloned().map(KElem).collect()).collect(),
                })
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for FilteredPhiModule {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let r = ModuleRepr::deserialize(d)?;
        let base = match &r.eisenstein {
            Some(e) => KField::new(r.p, e),
            None => Ok(KField::qp(r.p)),
        }
        .map_err(D::Error::custom)?;
        if r.frobenius.len() != r.dim {
            return Err(D::Error::custom("frobenius size does not match dim"));
        }
        let steps = r
            .filtration
            .into_iter()
            .map(|s| (s.jump, s.basis.into_iter().map(|v| v.into_iter().map(|k| k.0).collect()).collect()))
            .collect();
        FilteredPhiModule::new(base, r.frobenius, steps).map_err(D::Error::custom)
    }
}

impl FilteredPhiModule {
    /// Builds and validates a module. Filtration vectors are reduced modulo E.
    pub fn new(base: KField, frobenius: Mat<Q>, steps: Vec<(i64, Mat<QPoly>)>) -> Result<Self> {
        let d = frobenius.len();
        if d == 0 || frobenius.iter().any(|r| r.len() != d) {
            return schema("frobenius must be a nonempty square matrix");
        }
        if determinant(&QField, &frobenius).is_zero() {
            return schema("frobenius must be invertible");
        }
        if steps.is_empty() {
            return schema("filtration needs at least one step");
        }
        let mut reduced = Vec::with_capacity(steps.len());
        let mut prev: Option<(i64, Mat<QPoly>, usize)> = None;
        for (m, basis) in steps {
            if basis.iter().any(|v| v.len() != d) {
                return schema(format!("filtration vector at jump {m} has wrong length"));
            }
            let basis: Mat<QPoly> = basis
                .into_iter()
                .map(|v| v.into_iter().map(|x| if base.is_qp() { x } else { x.rem(&base.modulus) }).collect())
                .collect();
            let dim = rank(&base, &basis);
            if dim != basis.len() || dim == 0 {
                return schema(format!("filtration basis at jump {m} must be nonempty and independent"));
            }
            match &prev {
                None if dim != d => return schema("the first filtration step must be the whole space"),
                Some((pm, pb, pd)) => {
                    if m <= *pm {
                        return schema("filtration jumps must increase strictly");
                    }
                    if dim >= *pd {
                        return schema("filtration spaces must decrease strictly");
                    }
                    let joined: Mat<QPoly> = pb.iter().chain(&basis).cloned().collect();
                    if rank(&base, &joined) != *pd {
                        return schema("filtration spaces must be nested");
                    }
                }
                _ => {}
            }
            prev = Some((m, basis.clone(), dim));
            reduced.push((m, basis));
        }
        Ok(FilteredPhiModule {
            base,
            frobenius,
            steps: reduced,
        })
    }

    /// D = K·e with φ(e) = λe and Fil^m = D exactly for m ≤ r.
    pub fn dim1(p: Prime, lambda: Q, r: i64) -> Result<Self> {
        let base = KField::qp(p);
        Self::new(base, vec![vec![lambda]], vec![(r, vec![vec![QPoly::one()]])])
    }

    /// The normal form Φ = [[0, p^r a], [p^s, p^r b]] with Fil^m = D for
    /// m ≤ r, Fil^m = K e_1 for r < m ≤ s, zero after.
    pub fn dim2_normal_form(p: Prime, r: i64, s: i64, a: Q, b: Q) -> Result<Self> {
        if r >= s {
            return schema("normal form needs r < s");
        }
        let pv = p.get();
        let phi = vec![
            vec![Q::zero(), pow_q(pv, r) * a],
            vec![pow_q(pv, s), pow_q(pv, r) * b],
        ];
        let k = KField::qp(p);
        let e = |i: usize| -> Vec<QPoly> { (0..2).map(|j| if i == j { k.one() } else { k.zero() }).collect() };
        Self::new(k.clone(), phi, vec![(r, vec![e(0), e(1)]), (s, vec![e(0)])])
    }

    pub fn p(&self) -> Prime {
        self.base.p
    }

    pub fn dim(&self) -> usize {
        self.frobenius.len()
    }

    pub fn steps(&self) -> &[(i64, Mat<QPoly>)] {
        &self.steps
    }

    fn step_dims(&self) -> Vec<usize> {
        self.steps.iter().map(|(_, b)| b.len()).collect()
    }

    /// Basis of Fil^m.
    pub fn fil(&self, m: i64) -> Mat<QPoly> {
        self.steps
            .iter()
            .find(|(j, _)| m <= *j)
            .map(|(_, b)| b.clone())
            .unwrap_or_default()
    }

    /// t_H = Σ m · dim gr^m.
    pub fn hodge_number(&self) -> i64 {
        let dims = self.step_dims();
        self.steps
            .iter()
            .enumerate()
            .map(|(i, (m, _))| m * (dims[i] - dims.get(i + 1).copied().unwrap_or(0)) as i64)
            .sum()
    }

    /// t_N = v_p(det Φ).
    pub fn newton_number(&self) -> Q {
        let det = determinant(&QField, &self.frobenius);
        qi(vp_q(&det, self.p().get()).expect("frobenius is invertible"))
    }

    /// Hodge-Tate weights: -m with multiplicity dim gr^m.
    pub fn hodge_tate_weights(&self) -> Vec<i64> {
        let dims = self.step_dims();
        let mut w: Vec<i64> = self
            .steps
            .iter()
            .enumerate()
            .flat_map(|(i, (m, _))| {
                let k = dims[i] - dims.get(i + 1).copied().unwrap_or(0);
                std::iter::repeat_n(-m, k)
            })
            .collect();
        w.sort();
        w
    }

    /// Φ* = (Φ^{-1})^T, Fil^m D* = (Fil^{1-m} D)^⊥.
    pub fn dual(&self) -> FilteredPhiModule {
        let k = &self.base;
        let d = self.dim();
        let phi = transpose(&inverse(&QField, &self.frobenius).expect("invertible"));
        let n = self.steps.len();
        let mut steps = Vec::with_capacity(n);
        for i in (0..n).rev() {
            let next: Mat<QPoly> = self.steps.get(i + 1).map(|s| s.1.clone()).unwrap_or_default();
            let ann = if next.is_empty() {
                identity(k, d)
            } else {
                nullspace(k, &next, d)
            };
            steps.push((-self.steps[i].0, ann));
        }
        FilteredPhiModule::new(k.clone(), phi, steps).expect("dual of a valid module is valid")
    }

    /// Kronecker Frobenius and Fil^m = Σ_{a+b=m} Fil^a ⊗ Fil^b.
    pub fn tensor(&self, o: &FilteredPhiModule) -> Result<FilteredPhiModule> {
        if self.base != o.base {
            return schema("tensor product needs a common base field");
        }
        let k = &self.base;
        let phi = kronecker(&self.frobenius, &o.frobenius);
        let mut cands: Vec<i64> = self
            .steps
            .iter()
            .flat_map(|(a, _)| o.steps.iter().map(move |(b, _)| a + b))
            .collect();
        cands.sort();
        cands.dedup();
        let spaces: Vec<Mat<QPoly>> = cands
            .iter()
            .map(|m| {
                let mut gens: Mat<QPoly> = Vec::new();
                for (a, va) in &self.steps {
                    for v in va {
                        for w in o.fil(m - a) {
                            gens.push(kron_vec(k, v, &w));
                        }
                    }
                }
                row_basis(k, &gens)
            })
            .collect();
        let mut steps = Vec::new();
        for (i, m) in cands.iter().enumerate() {
            let next = spaces.get(i + 1).map_or(0, |s| s.len());
            if spaces[i].len() > next {
                steps.push((*m, spaces[i].clone()));
            }
        }
        FilteredPhiModule::new(k.clone(), phi, steps)
    }

    pub fn direct_sum(&self, o: &FilteredPhiModule) -> Result<FilteredPhiModule> {
        if self.base != o.base {
            return schema("direct sum needs a common base field");
        }
        let k = &self.base;
        let (d1, d2) = (self.dim(), o.dim());
        let mut phi = vec![vec![Q::zero(); d1 + d2]; d1 + d2];
        for i in 0..d1 {
            for j in 0..d1 {
                phi[i][j] = self.frobenius[i][j].clone();
            }
        }
        for i in 0..d2 {
            for j in 0..d2 {
                phi[d1 + i][d1 + j] = o.frobenius[i][j].clone();
            }
        }
        let mut jumps: Vec<i64> = self.steps.iter().chain(&o.steps).map(|s| s.0).collect();
        jumps.sort();
        jumps.dedup();
        let steps = jumps
            .iter()
            .map(|&m| {
                let mut b: Mat<QPoly> = self
                    .fil(m)
                    .into_iter()
                    .map(|v| v.into_iter().chain(std::iter::repeat_n(k.zero(), d2)).collect())
                    .collect();
                b.extend(
                    o.fil(m)
                        .into_iter()
                        .map(|v| std::iter::repeat_n(k.zero(), d1).chain(v).collect()),
                );
                (m, b)
            })
            .collect();
        FilteredPhiModule::new(k.clone(), phi, steps)
    }

    /// The same module in the basis given by the columns of `s`:
    /// Φ' = S^{-1} Φ S, filtration vectors v' = S^{-1} v.
    pub fn change_basis(&self, s: &Mat<Q>) -> Result<FilteredPhiModule> {
        let sinv = inverse(&QField, s).ok_or_else(|| Error::Domain("change of basis is singular".into()))?;
        let f = QField;
        let phi = mat_mul(&f, &mat_mul(&f, &sinv, &self.frobenius), s);
        let k = &self.base;
        let sk: Mat<QPoly> = sinv.iter().map(|r| r.iter().map(|x| k.from_q(x)).collect()).collect();
        let steps = self
            .steps
            .iter()
            .map(|(m, b)| (*m, b.iter().map(|v| mat_vec(k, &sk, v)).collect()))
            .collect();
        FilteredPhiModule::new(k.clone(), phi, steps)
    }

    /// t_H of the subobject spanned (over Q) by the rows of `w`, with the
    /// induced filtration (K ⊗ W) ∩ Fil^m.
    pub fn sub_hodge_number(&self, w: &Mat<Q>) -> i64 {
        let k = &self.base;
        let wk: Mat<QPoly> = w.iter().map(|r| r.iter().map(|x| k.from_q(x)).collect()).collect();
        let dw = rank(k, &wk);
        let inter: Vec<usize> = self
            .steps
            .iter()
            .map(|(_, v)| {
                let joined: Mat<QPoly> = wk.iter().chain(v).cloned().collect();
                dw + v.len() - rank(k, &joined)
            })
            .collect();
        self.steps
            .iter()
            .enumerate()
            .map(|(i, (m, _))| m * (inter[i] - inter.get(i + 1).copied().unwrap_or(0)) as i64)
            .sum()
    }

    /// t_N of a Φ-stable Q-subspace given by the rows of `w`.
    pub fn sub_newton_number(&self, w: &Mat<Q>) -> Result<Q> {
        let f = QField;
        let b = transpose(w);
        let fb = mat_mul(&f, &self.frobenius, &b);
        let gram = mat_mul(&f, w, &b);
        let gi = inverse(&f, &gram).ok_or_else(|| Error::Internal("subspace basis is dependent".into()))?;
        let c = mat_mul(&f, &gi, &mat_mul(&f, w, &fb));
        if mat_mul(&f, &b, &c) != fb {
            return Err(Error::Domain("subspace is not stable under frobenius".into()));
        }
        let det = determinant(&f, &c);
        Ok(qi(vp_q(&det, self.p().get()).expect("restriction is invertible")))
    }
}

fn kron_vec(k: &KField, v: &[QPoly], w: &[QPoly]) -> Vec<QPoly> {
    v.iter().flat_map(|a| w.iter().map(move |b| k.mul(a, b))).collect()
}

fn row_basis(k: &KField, gens: &Mat<QPoly>) -> Mat<QPoly> {
    if gens.is_empty() {
        return vec![];
    }
    crate::linalg::rref(k, gens).0
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AdmissibilityStatus {
    Admissible,
    NotAdmissible,
    Undecided,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Numbers,
    Dimension1,
    SingleJump,
    StableLine,
    NormalForm,
    SubobjectScan,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Witness {
    /// t_H(D) ≠ t_N(D).
    Global,
    /// A Φ-stable Q-subspace with t_H > t_N.
    Subspace {
        #[serde(with = "crate::rational::serde_qmat")]
        basis: Mat<Q>,
        t_h: i64,
        #[serde(with = "crate::rational::serde_q")]
        t_n: Q,
    },
    /// A Φ-stable Q_p-subspace cut out by a Newton slope of the
    /// characteristic polynomial: its dimension and t_N = dim · valuation.
    NewtonSlope {
        #[serde(with = "crate::rational::serde_q")]
        valuation: Q,
        dimension: usize,
        t_h: i64,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AdmissibilityVerdict {
    pub status: AdmissibilityStatus,
    pub method: Method,
    pub witness: Option<Witness>,
    pub t_h: i64,
    #[serde(with = "crate::rational::serde_q")]
    pub t_n: Q,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
}

/// Root valuations of a polynomial over Q_p-bar, smallest first, with
/// multiplicities.
fn root_valuations(f: &QPoly, p: Prime) -> Vec<(Q, usize)> {
    let prof = PolyValuationProfile::from_coefficients(&f.0, p).expect("nonzero polynomial");
    let mut v: Vec<(Q, usize)> = poly_newton_polygon(&prof)
        .expect("valid profile")
        .into_iter()
        .map(|s| (-s.slope, s.length))
        .collect();
    v.sort();
    v
}

pub fn is_admissible(dm: &FilteredPhiModule) -> AdmissibilityVerdict {
    let t_h = dm.hodge_number();
    let t_n = dm.newton_number();
    let verdict = |status, method, witness, reason: Option<String>| AdmissibilityVerdict {
        status,
        method,
        witness,
        t_h,
        t_n: t_n.clone(),
        reason,
    };
    use AdmissibilityStatus::*;
    if qi(t_h) != t_n {
        return verdict(NotAdmissible, Method::Numbers, Some(Witness::Global), None);
    }
    let d = dm.dim();
    if d == 1 {
        return verdict(Admissible, Method::Dimension1, None, None);
    }
    let p = dm.p();
    if dm.steps.len() == 1 {
        // Fil is a single jump r: t_H(D') = r dim D', so only the smallest
        // root valuation matters; its slope factor is a stable subobject.
        let r = dm.steps[0].0;
        let vals = root_valuations(&char_poly(&dm.frobenius), p);
        let (v0, len) = vals[0].clone();
        return if v0 < qi(r) {
            verdict(
                NotAdmissible,
                Method::SingleJump,
                Some(Witness::NewtonSlope {
                    valuation: v0,
                    dimension: len,
                    t_h: r * len as i64,
                }),
                None,
            )
        } else {
            verdict(Admissible, Method::SingleJump, None, None)
        };
    }
    if d == 2 && dm.base.is_qp() {
        return dim2_closed_form(dm, verdict);
    }
    scan(dm, verdict)
}

fn dim2_closed_form(
    dm: &FilteredPhiModule,
    verdict: impl Fn(AdmissibilityStatus, Method, Option<Witness>, Option<String>) -> AdmissibilityVerdict,
) -> AdmissibilityVerdict {
    use AdmissibilityStatus::*;
    let p = dm.p();
    let pv = p.get();
    let (r, s) = (dm.steps[0].0, dm.steps[1].0);
    let l: Vec<Q> = dm.steps[1].1[0].iter().map(|x| x.coeff(0)).collect();
    let f = QField;
    let fl = mat_vec(&f, &dm.frobenius, &l);
    let cross = &l[0] * &fl[1] - &l[1] * &fl[0];
    if cross.is_zero() {
        let i = if l[0].is_zero() { 1 } else { 0 };
        let alpha = &fl[i] / &l[i];
        let det = determinant(&f, &dm.frobenius);
        let beta = &det / &alpha;
        let va = qi(vp_q(&alpha, pv).expect("nonzero eigenvalue"));
        let vb = qi(vp_q(&beta, pv).expect("nonzero eigenvalue"));
        if va == qi(s) && vb == qi(r) {
            if alpha == beta {
                return verdict(
                    Undecided,
                    Method::StableLine,
                    None,
                    Some("admissible numbers with a repeated eigenvalue contradict r < s".into()),
                );
            }
            return verdict(Admissible, Method::StableLine, None, None);
        }
        if va < qi(s) {
            return verdict(
                NotAdmissible,
                Method::StableLine,
                Some(Witness::Subspace {
                    basis: vec![l],
                    t_h: s,
                    t_n: va,
                }),
                None,
            );
        }
        // v(β) < r: the β-eigenline is rational and violates the bound.
        let shifted = crate::linalg::mat_sub(&dm.frobenius, &crate::linalg::mat_scale(&identity(&f, 2), &beta));
        let line = nullspace(&f, &shifted, 2);
        return verdict(
            NotAdmissible,
            Method::StableLine,
            Some(Witness::Subspace {
                basis: line,
                t_h: r,
                t_n: vb,
            }),
            None,
        );
    }
    // e_1 = ℓ, e_2 = Φℓ / p^s, Φ e_2 = x e_1 + y e_2.
    let ps = pow_q(pv, s);
    let e2: Vec<Q> = fl.iter().map(|c| c / &ps).collect();
    let fe2 = mat_vec(&f, &dm.frobenius, &e2);
    let basis = transpose(&vec![l.clone(), e2.clone()]);
    let inv = inverse(&f, &basis).expect("ℓ and Φℓ are independent");
    let xy = mat_vec(&f, &inv, &fe2);
    let pr = pow_q(pv, r);
    let a = &xy[0] / &pr;
    let b = &xy[1] / &pr;
    let va = vp_q(&a, pv);
    if va != Some(0) {
        return verdict(
            Undecided,
            Method::NormalForm,
            None,
            Some(format!("normal form coefficient a = {a} is not a unit despite t_H = t_N")),
        );
    }
    match vp_q(&b, pv) {
        Some(vb) if vb < 0 => {
            let vals = root_valuations(&char_poly(&dm.frobenius), p);
            verdict(
                NotAdmissible,
                Method::NormalForm,
                Some(Witness::NewtonSlope {
                    valuation: vals[0].0.clone(),
                    dimension: 1,
                    t_h: r,
                }),
                None,
            )
        }
        _ => verdict(Admissible, Method::NormalForm, None, None),
    }
}

/// Enumerates the Φ-stable subspaces as sums of primary components. Complete
/// when the characteristic polynomial is squarefree and every rational factor
/// is certified irreducible over Q_p.
fn scan(
    dm: &FilteredPhiModule,
    verdict: impl Fn(AdmissibilityStatus, Method, Option<Witness>, Option<String>) -> AdmissibilityVerdict,
) -> AdmissibilityVerdict {
    use AdmissibilityStatus::*;
    let p = dm.p();
    let cp = char_poly(&dm.frobenius);
    if !cp.is_squarefree() {
        return verdict(
            Undecided,
            Method::SubobjectScan,
            None,
            Some("characteristic polynomial is not squarefree".into()),
        );
    }
    let factors: Vec<QPoly> = factor_over_q(&cp).into_iter().map(|(f, _)| f).collect();
    for f in &factors {
        if qp_irreducibility(f, p) != QpIrreducibility::Irreducible {
            return verdict(
                Undecided,
                Method::SubobjectScan,
                None,
                Some(format!("cannot certify the factor {:?} irreducible over Q_p", f.0)),
            );
        }
    }
    let d = dm.dim();
    let comps: Vec<Mat<Q>> = factors
        .iter()
        .map(|f| nullspace(&QField, &poly_at_matrix(f, &dm.frobenius), d))
        .collect();
    let k = comps.len();
    for mask in 1u64..(1u64 << k) - 1 {
        let w: Mat<Q> = (0..k)
            .filter(|i| mask >> i & 1 == 1)
            .flat_map(|i| comps[i].iter().cloned())
            .collect();
        let th = dm.sub_hodge_number(&w);
        let tn = match dm.sub_newton_number(&w) {
            Ok(t) => t,
            Err(e) => return verdict(Undecided, Method::SubobjectScan, None, Some(e.to_string())),
        };
        if qi(th) > tn {
            return verdict(
                NotAdmissible,
                Method::SubobjectScan,
                Some(Witness::Subspace { basis: w, t_h: th, t_n: tn }),
                None,
            );
        }
    }
    verdict(Admissible, Method::SubobjectScan, None, None)
}

/// The crystalline character attached to an admissible D = K_0 e, φ(e) = λe,
/// jump r: χ_cycl^{-r} μ_α^{-1} with α = p^{-r} λ.
pub fn dim1_correspondence(p: Prime, lambda: &Q, r: i64) -> Result<CharacterTriple> {
    if p.get() == 2 {
        return schema("character triples need p > 2");
    }
    let v = vp_q(lambda, p.get()).ok_or_else(|| Error::Domain("lambda must be nonzero".into()))?;
    if v != r {
        return Err(Error::Domain(format!(
            "module is not admissible: v_p(lambda) = {v} but the jump is {r}"
        )));
    }
    let alpha = lambda * pow_q(p.get(), -r);
    CharacterTriple::new(p, Q::one() / alpha, qi(-r), 0)
}
