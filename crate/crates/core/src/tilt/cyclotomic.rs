//! Exact arithmetic in Q(zeta_M), elements as polynomials in zeta_M reduced
//! modulo the M-th cyclotomic polynomial.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::poly::QPoly;
use crate::rational::Q;

pub fn cyclotomic_polynomial(n: u64) -> QPoly {
    let mut memo: BTreeMap<u64, QPoly> = BTreeMap::new();
    cyclo_rec(n, &mut memo)
}

fn cyclo_rec(n: u64, memo: &mut BTreeMap<u64, QPoly>) -> QPoly {
    if let Some(p) = memo.get(&n) {
        return p.clone();
    }
    let mut c = vec![Q::zero(); n as usize + 1];
    c[0] = -Q::one();
    c[n as usize] = Q::one();
    let mut f = QPoly::new(c);
    for d in 1..n {
        if n.is_multiple_of(d) {
            let g = cyclo_rec(d, memo);
            f = f.div_rem(&g).0;
        }
    }
    memo.insert(n, f.clone());
    f
}

#[derive(Clone, Debug)]
pub struct CyclotomicField {
    pub m: u64,
    phi: QPoly,
}

impl CyclotomicField {
    pub fn new(m: u64) -> Self {
        CyclotomicField {
            m,
            phi: cyclotomic_polynomial(m),
        }
    }

    pub fn degree(&self) -> usize {
        self.phi.degree().unwrap_or(0)
    }

    /// Reduces a sum of terms coefficient * zeta^exponent.
    pub fn from_terms<'a>(&self, terms: impl IntoIterator<Item = (u64, &'a Q)>) -> QPoly {
        let mut c = vec![Q::zero(); self.m as usize];
        for (e, q) in terms {
            c[(e % self.m) as usize] += q;
        }
        QPoly::new(c).rem(&self.phi)
    }

    pub fn reduce(&self, a: &QPoly) -> QPoly {
        a.rem(&self.phi)
    }

    pub fn mul(&self, a: &QPoly, b: &QPoly) -> QPoly {
        a.mul(b).rem(&self.phi)
    }

    /// zeta^(exponent) as an element.
    pub fn zeta_power(&self, e: u64) -> QPoly {
        let one = Q::one();
        self.from_terms([(e, &one)])
    }

    /// The automorphism zeta -> zeta^k, k prime to M.
    pub fn automorphism(&self, a: &QPoly, k: u64) -> QPoly {
        let k = k % self.m;
        self.from_terms(
            a.0.iter()
                .enumerate()
                .map(|(i, c)| ((i as u64 * k) % self.m, c)),
        )
    }
}
