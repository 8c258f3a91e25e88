//! F_{p^f} presented by the lexicographically smallest monic irreducible
//! polynomial of degree f.

use serde::{Deserialize, Serialize};

use crate::error::{schema, Result};
use crate::poly::{conway_free_modulus, FpPoly};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteField {
    pub p: u64,
    pub f: usize,
    modulus: FpPoly,
}

impl FiniteField {
    pub fn new(p: u64, f: usize) -> Self {
        FiniteField {
            p,
            f,
            modulus: conway_free_modulus(p, f),
        }
    }

    pub fn reduce(&self, c: &[u64]) -> Vec<u64> {
        FpPoly::new(self.p, c.to_vec()).rem(&self.modulus).c
    }

    pub fn mul(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        FpPoly::new(self.p, a.to_vec())
            .mul(&FpPoly::new(self.p, b.to_vec()))
            .rem(&self.modulus)
            .c
    }

    pub fn add(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        FpPoly::new(self.p, a.to_vec()).add(&FpPoly::new(self.p, b.to_vec())).c
    }

    pub fn scale(&self, a: &[u64], s: u64) -> Vec<u64> {
        FpPoly::new(self.p, a.iter().map(|x| x * (s % self.p)).collect()).c
    }

    pub fn pow(&self, a: &[u64], e: u128) -> Vec<u64> {
        FpPoly::new(self.p, a.to_vec()).pow_mod(e, &self.modulus).c
    }

    /// x -> x^(p^n), for any integer n (the Frobenius has order f).
    pub fn frobenius(&self, a: &[u64], n: i64) -> Vec<u64> {
        let k = n.rem_euclid(self.f as i64) as u32;
        let mut r = a.to_vec();
        for _ in 0..k {
            r = self.pow(&r, self.p as u128);
        }
        r
    }
}

/// An element of F_{p^f}. Elements of the prime field are normalized to f = 1,
/// which lets them combine with elements of any F_{p^f}.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct FqElement {
    pub f: usize,
    pub poly: Vec<u64>,
}

impl FqElement {
    pub fn one() -> Self {
        FqElement { f: 1, poly: vec![1] }
    }

    pub fn constant(p: u64, c: u64) -> Self {
        FqElement { f: 1, poly: FpPoly::new(p, vec![c]).c }
    }

    pub fn new(p: u64, f: usize, poly: &[u64]) -> Result<Self> {
        if f == 0 {
            return schema("finite field degree must be positive");
        }
        let reduced = FiniteField::new(p, f).reduce(poly);
        if reduced.is_empty() {
            return schema("Teichmuller part must be nonzero");
        }
        Ok(Self::normalize(f, reduced))
    }

    fn normalize(f: usize, poly: Vec<u64>) -> Self {
        if poly.len() <= 1 {
            FqElement { f: 1, poly }
        } else {
            FqElement { f, poly }
        }
    }

    pub fn is_prime_field(&self) -> bool {
        self.f == 1
    }

    /// Value in F_p when the element lies in the prime field.
    pub fn prime_value(&self) -> Option<u64> {
        if self.is_prime_field() {
            Some(self.poly.first().copied().unwrap_or(0))
        } else {
            None
        }
    }

    pub fn validate(&self, p: u64) -> Result<Self> {
        Self::new(p, self.f, &self.poly)
    }

    pub fn common_degree(a: &FqElement, b: &FqElement) -> Result<usize> {
        match (a.f, b.f) {
            (1, g) | (g, 1) => Ok(g),
            (f, g) if f == g => Ok(f),
            (f, g) => schema(format!(
                "Teichmuller parts in F_p^{f} and F_p^{g} cannot be multiplied"
            )),
        }
    }

    pub fn mul(&self, o: &FqElement, p: u64) -> Result<FqElement> {
        let f = Self::common_degree(self, o)?;
        let field = FiniteField::new(p, f);
        Ok(Self::normalize(f, field.mul(&self.poly, &o.poly)))
    }

    pub fn frobenius(&self, n: i64, p: u64) -> FqElement {
        if self.is_prime_field() {
            return self.clone();
        }
        let field = FiniteField::new(p, self.f);
        Self::normalize(self.f, field.frobenius(&self.poly, n))
    }
}
