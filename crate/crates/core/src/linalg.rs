//! Exact dense linear algebra over an abstract field, instantiated for Q and
//! for totally ramified number fields Q[x]/(E).

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::poly::QPoly;
use crate::rational::{qbig, Q};

/// Field operations supplied by a context value.
pub trait Field {
    type E: Clone + PartialEq + std::fmt::Debug;
    fn zero(&self) -> Self::E;
    fn one(&self) -> Self::E;
    fn add(&self, a: &Self::E, b: &Self::E) -> Self::E;
    fn sub(&self, a: &Self::E, b: &Self::E) -> Self::E;
    fn mul(&self, a: &Self::E, b: &Self::E) -> Self::E;
    fn inv(&self, a: &Self::E) -> Self::E;
    fn is_zero(&self, a: &Self::E) -> bool;
    fn from_q(&self, q: &Q) -> Self::E;
}

/// The rational field.
#[derive(Clone, Copy, Debug, Default)]
pub struct QField;

impl Field for QField {
    type E = Q;
    fn zero(&self) -> Q {
        Q::zero()
    }
    fn one(&self) -> Q {
        Q::one()
    }
    fn add(&self, a: &Q, b: &Q) -> Q {
        a + b
    }
    fn sub(&self, a: &Q, b: &Q) -> Q {
        a - b
    }
    fn mul(&self, a: &Q, b: &Q) -> Q {
        a * b
    }
    fn inv(&self, a: &Q) -> Q {
        Q::one() / a
    }
    fn is_zero(&self, a: &Q) -> bool {
        a.is_zero()
    }
    fn from_q(&self, q: &Q) -> Q {
        q.clone()
    }
}

pub type Mat<E> = Vec<Vec<E>>;

/// Reduced row echelon form; returns the nonzero rows and pivot columns.
pub fn rref<F: Field>(f: &F, m: &Mat<F::E>) -> (Mat<F::E>, Vec<usize>) {
    let mut a = m.clone();
    let rows = a.len();
    let cols = a.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(piv) = (r..rows).find(|&i| !f.is_zero(&a[i][c])) else {
            continue;
        };
        a.swap(r, piv);
        let inv = f.inv(&a[r][c]);
        for x in a[r].iter_mut() {
            *x = f.mul(x, &inv);
        }
        for i in 0..rows {
            if i != r && !f.is_zero(&a[i][c]) {
                let factor = a[i][c].clone();
                for j in 0..cols {
                    let t = f.mul(&factor, &a[r][j]);
                    a[i][j] = f.sub(&a[i][j], &t);
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    a.truncate(r);
    (a, pivots)
}

pub fn rank<F: Field>(f: &F, m: &Mat<F::E>) -> usize {
    if m.is_empty() {
        return 0;
    }
    rref(f, m).1.len()
}

/// Basis (as rows) of the solution space of `m x = 0`, where `m` has `cols` columns.
pub fn nullspace<F: Field>(f: &F, m: &Mat<F::E>, cols: usize) -> Mat<F::E> {
    let (r, pivots) = if m.is_empty() {
        (vec![], vec![])
    } else {
        rref(f, m)
    };
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&fc| {
            let mut v = vec![f.zero(); cols];
            v[fc] = f.one();
            for (row, &pc) in r.iter().zip(&pivots) {
                v[pc] = f.sub(&f.zero(), &row[fc]);
            }
            v
        })
        .collect()
}

pub fn transpose<E: Clone>(m: &Mat<E>) -> Mat<E> {
    if m.is_empty() {
        return vec![];
    }
    (0..m[0].len())
        .map(|j| m.iter().map(|r| r[j].clone()).collect())
        .collect()
}

pub fn mat_mul<F: Field>(f: &F, a: &Mat<F::E>, b: &Mat<F::E>) -> Mat<F::E> {
    let n = b.first().map_or(0, |r| r.len());
    a.iter()
        .map(|row| {
            (0..n)
                .map(|j| {
                    row.iter()
                        .zip(b.iter())
                        .fold(f.zero(), |acc, (x, br)| f.add(&acc, &f.mul(x, &br[j])))
                })
                .collect()
        })
        .collect()
}

pub fn mat_vec<F: Field>(f: &F, a: &Mat<F::E>, v: &[F::E]) -> Vec<F::E> {
    a.iter()
        .map(|row| {
            row.iter()
                .zip(v)
                .fold(f.zero(), |acc, (x, y)| f.add(&acc, &f.mul(x, y)))
        })
        .collect()
}

pub fn identity<F: Field>(f: &F, n: usize) -> Mat<F::E> {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { f.one() } else { f.zero() }).collect())
        .collect()
}

pub fn inverse<F: Field>(f: &F, a: &Mat<F::E>) -> Option<Mat<F::E>> {
    let n = a.len();
    let aug: Mat<F::E> = a
        .iter()
        .zip(identity(f, n))
        .map(|(r, i)| r.iter().cloned().chain(i).collect())
        .collect();
    let (r, piv) = rref(f, &aug);
    if piv.len() < n || piv[n - 1] != n - 1 {
        return None;
    }
    Some(r.into_iter().map(|row| row[n..].to_vec()).collect())
}

pub fn determinant<F: Field>(f: &F, a: &Mat<F::E>) -> F::E {
    let n = a.len();
    let mut m = a.clone();
    let mut det = f.one();
    for c in 0..n {
        let Some(piv) = (c..n).find(|&i| !f.is_zero(&m[i][c])) else {
            return f.zero();
        };
        if piv != c {
            m.swap(piv, c);
            det = f.sub(&f.zero(), &det);
        }
        det = f.mul(&det, &m[c][c]);
        let inv = f.inv(&m[c][c]);
        for i in c + 1..n {
            if f.is_zero(&m[i][c]) {
                continue;
            }
            let factor = f.mul(&m[i][c], &inv);
            for j in c..n {
                let t = f.mul(&factor, &m[c][j]);
                m[i][j] = f.sub(&m[i][j], &t);
            }
        }
    }
    det
}

/// Characteristic polynomial det(xI - A) by the Faddeev-LeVerrier recursion.
pub fn char_poly(a: &Mat<Q>) -> QPoly {
    let n = a.len();
    let f = QField;
    let mut coeffs = vec![Q::zero(); n + 1];
    coeffs[n] = Q::one();
    let mut m = identity(&f, n);
    for k in 1..=n {
        let am = mat_mul(&f, a, &m);
        let tr: Q = (0..n).map(|i| am[i][i].clone()).sum();
        let ck = -tr / qbig(BigInt::from(k));
        coeffs[n - k] = ck.clone();
        m = am;
        for (i, row) in m.iter_mut().enumerate() {
            row[i] += &ck;
        }
    }
    QPoly::new(coeffs)
}

/// Evaluates a polynomial at a square matrix.
pub fn poly_at_matrix(p: &QPoly, a: &Mat<Q>) -> Mat<Q> {
    let f = QField;
    let n = a.len();
    let mut acc: Mat<Q> = vec![vec![Q::zero(); n]; n];
    for c in p.0.iter().rev() {
        acc = mat_mul(&f, &acc, a);
        for (i, row) in acc.iter_mut().enumerate() {
            row[i] += c;
        }
    }
    acc
}

pub fn is_zero_matrix(a: &Mat<Q>) -> bool {
    a.iter().all(|r| r.iter().all(|x| x.is_zero()))
}

pub fn mat_sub(a: &Mat<Q>, b: &Mat<Q>) -> Mat<Q> {
    a.iter()
        .zip(b)
        .map(|(r, s)| r.iter().zip(s).map(|(x, y)| x - y).collect())
        .collect()
}

pub fn mat_scale(a: &Mat<Q>, s: &Q) -> Mat<Q> {
    a.iter().map(|r| r.iter().map(|x| x * s).collect()).collect()
}

pub fn kronecker(a: &Mat<Q>, b: &Mat<Q>) -> Mat<Q> {
    let (n, m) = (a.len(), b.len());
    (0..n * m)
        .map(|i| {
            (0..n * m)
                .map(|j| &a[i / m][j / m] * &b[i % m][j % m])
                .collect()
        })
        .collect()
}
