//! Dense univariate polynomials over Q and over F_p. Coefficients are stored
//! low degree first.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::rational::{qbig, Q};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QPoly(pub Vec<Q>);

impl QPoly {
    pub fn new(mut c: Vec<Q>) -> Self {
        while c.last().is_some_and(|x| x.is_zero()) {
            c.pop();
        }
        QPoly(c)
    }

    pub fn one() -> Self {
        QPoly(vec![Q::one()])
    }

    pub fn x_minus(a: &Q) -> Self {
        QPoly(vec![-a.clone(), Q::one()])
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    pub fn coeff(&self, i: usize) -> Q {
        self.0.get(i).cloned().unwrap_or_else(Q::zero)
    }

    pub fn lead(&self) -> Q {
        self.0.last().cloned().unwrap_or_else(Q::zero)
    }

    pub fn add(&self, o: &QPoly) -> QPoly {
        let n = self.0.len().max(o.0.len());
        QPoly::new((0..n).map(|i| self.coeff(i) + o.coeff(i)).collect())
    }

    pub fn sub(&self, o: &QPoly) -> QPoly {
        let n = self.0.len().max(o.0.len());
        QPoly::new((0..n).map(|i| self.coeff(i) - o.coeff(i)).collect())
    }

    pub fn scale(&self, s: &Q) -> QPoly {
        QPoly::new(self.0.iter().map(|c| c * s).collect())
    }

    pub fn mul(&self, o: &QPoly) -> QPoly {
        if self.is_zero() || o.is_zero() {
            return QPoly(vec![]);
        }
        let mut r = vec![Q::zero(); self.0.len() + o.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.0.iter().enumerate() {
                r[i + j] += a * b;
            }
        }
        QPoly::new(r)
    }

    /// Quotient and remainder; `d` must be nonzero.
    pub fn div_rem(&self, d: &QPoly) -> (QPoly, QPoly) {
        let dd = d.degree().expect("division by zero polynomial");
        let lead_inv = Q::one() / d.lead();
        let mut r = self.0.clone();
        if r.len() <= dd {
            return (QPoly(vec![]), self.clone());
        }
        let mut qt = vec![Q::zero(); r.len() - dd];
        for k in (0..qt.len()).rev() {
            let c = &r[k + dd] * &lead_inv;
            if c.is_zero() {
                continue;
            }
            for (j, dc) in d.0.iter().enumerate() {
                r[k + j] -= &c * dc;
            }
            qt[k] = c;
        }
        r.truncate(dd);
        (QPoly::new(qt), QPoly::new(r))
    }

    pub fn rem(&self, d: &QPoly) -> QPoly {
        self.div_rem(d).1
    }

    pub fn monic(&self) -> QPoly {
        let l = self.lead();
        self.scale(&(Q::one() / l))
    }

    pub fn gcd(&self, o: &QPoly) -> QPoly {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        if a.is_zero() {
            a
        } else {
            a.monic()
        }
    }

    pub fn derivative(&self) -> QPoly {
        QPoly::new(
            self.0
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * qbig(BigInt::from(i)))
                .collect(),
        )
    }

    pub fn eval(&self, x: &Q) -> Q {
        self.0
            .iter()
            .rev()
            .fold(Q::zero(), |acc, c| acc * x + c)
    }

    pub fn is_squarefree(&self) -> bool {
        self.gcd(&self.derivative()).degree() == Some(0)
    }

    /// Scales to a primitive integer polynomial with positive leading term.
    pub fn primitive_integer(&self) -> Vec<BigInt> {
        let l = self
            .0
            .iter()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let ints: Vec<BigInt> = self.0.iter().map(|c| (c * qbig(l.clone())).to_integer()).collect();
        let g = ints.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
        let sign = if self.lead().is_negative() { -BigInt::one() } else { BigInt::one() };
        ints.into_iter().map(|c| c / &g * &sign).collect()
    }

    /// Rational roots with multiplicity, by the rational root theorem.
    pub fn rational_roots(&self) -> Vec<(Q, usize)> {
        let mut out = Vec::new();
        let mut f = self.clone();
        if f.is_zero() {
            return out;
        }
        let mut zero_mult = 0;
        while f.coeff(0).is_zero() && f.degree() > Some(0) {
            f = QPoly::new(f.0[1..].to_vec());
            zero_mult += 1;
        }
        if zero_mult > 0 {
            out.push((Q::zero(), zero_mult));
        }
        for (c, _) in crate::factor::factor_over_q(&f) {
            if c.degree() == Some(1) {
                let root = -c.coeff(0) / c.coeff(1);
                let mut m = 0;
                while f.eval(&root).is_zero() {
                    f = f.div_rem(&QPoly::x_minus(&root)).0;
                    m += 1;
                }
                out.push((root, m));
            }
        }
        out.sort_by(|a, b| a.0.cmp(&b.0));
        out
    }
}

/// Polynomials over F_p with `u64` coefficients, low degree first.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FpPoly {
    pub p: u64,
    pub c: Vec<u64>,
}

pub fn inv_mod(a: u64, p: u64) -> u64 {
    pow_mod(a % p, p - 2, p)
}

pub fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = ((r as u128 * b as u128) % m as u128) as u64;
        }
        b = ((b as u128 * b as u128) % m as u128) as u64;
        e >>= 1;
    }
    r
}

impl FpPoly {
    pub fn new(p: u64, mut c: Vec<u64>) -> Self {
        for x in c.iter_mut() {
            *x %= p;
        }
        while c.last() == Some(&0) {
            c.pop();
        }
        FpPoly { p, c }
    }

    pub fn from_ints(p: u64, c: &[BigInt]) -> Self {
        let pb = BigInt::from(p);
        let v = c
            .iter()
            .map(|x| {
                let r = x.mod_floor(&pb);
                u64::try_from(r).expect("residue fits")
            })
            .collect();
        FpPoly::new(p, v)
    }

    pub fn degree(&self) -> Option<usize> {
        self.c.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    fn coeff(&self, i: usize) -> u64 {
        self.c.get(i).copied().unwrap_or(0)
    }

    pub fn add(&self, o: &FpPoly) -> FpPoly {
        let n = self.c.len().max(o.c.len());
        FpPoly::new(self.p, (0..n).map(|i| self.coeff(i) + o.coeff(i)).collect())
    }

    pub fn sub(&self, o: &FpPoly) -> FpPoly {
        let n = self.c.len().max(o.c.len());
        FpPoly::new(
            self.p,
            (0..n).map(|i| self.coeff(i) + self.p - o.coeff(i)).collect(),
        )
    }

    pub fn mul(&self, o: &FpPoly) -> FpPoly {
        if self.is_zero() || o.is_zero() {
            return FpPoly::new(self.p, vec![]);
        }
        let p = self.p;
        let mut r = vec![0u64; self.c.len() + o.c.len() - 1];
        for (i, a) in self.c.iter().enumerate() {
            for (j, b) in o.c.iter().enumerate() {
                r[i + j] = (r[i + j] + a * b) % p;
            }
        }
        FpPoly::new(p, r)
    }

    pub fn rem(&self, d: &FpPoly) -> FpPoly {
        self.div_rem(d).1
    }

    pub fn div_rem(&self, d: &FpPoly) -> (FpPoly, FpPoly) {
        let p = self.p;
        let dd = d.degree().expect("division by zero polynomial");
        let li = inv_mod(d.c[dd], p);
        let mut r = self.c.clone();
        if r.len() <= dd {
            return (FpPoly::new(p, vec![]), self.clone());
        }
        let mut qt = vec![0u64; r.len() - dd];
        for k in (0..qt.len()).rev() {
            let c = r[k + dd] * li % p;
            if c == 0 {
                continue;
            }
            for (j, dc) in d.c.iter().enumerate() {
                r[k + j] = (r[k + j] + p * p - c * dc % p) % p;
            }
            qt[k] = c;
        }
        r.truncate(dd);
        (FpPoly::new(p, qt), FpPoly::new(p, r))
    }

    pub fn monic(&self) -> FpPoly {
        let li = inv_mod(*self.c.last().expect("nonzero"), self.p);
        FpPoly::new(self.p, self.c.iter().map(|x| x * li).collect())
    }

    pub fn gcd(&self, o: &FpPoly) -> FpPoly {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        if a.is_zero() {
            a
        } else {
            a.monic()
        }
    }

    pub fn derivative(&self) -> FpPoly {
        FpPoly::new(
            self.p,
            self.c
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, x)| (i as u64 % self.p) * x)
                .collect(),
        )
    }

    pub fn is_squarefree(&self) -> bool {
        self.gcd(&self.derivative()).degree() == Some(0)
    }

    /// `self^e mod m`.
    pub fn pow_mod(&self, mut e: u128, m: &FpPoly) -> FpPoly {
        let mut r = FpPoly::new(self.p, vec![1]).rem(m);
        let mut b = self.rem(m);
        while e > 0 {
            if e & 1 == 1 {
                r = r.mul(&b).rem(m);
            }
            b = b.mul(&b).rem(m);
            e >>= 1;
        }
        r
    }

    /// Irreducibility over F_p: `x^(p^n) = x mod f` and `gcd(x^(p^(n/q)) - x, f) = 1`
    /// for every prime q dividing n.
    pub fn is_irreducible(&self) -> bool {
        let n = match self.degree() {
            None | Some(0) => return false,
            Some(1) => return true,
            Some(n) => n,
        };
        let p = self.p;
        let f = self.monic();
        let x = FpPoly::new(p, vec![0, 1]);
        let frob_iter = |k: usize| {
            let mut y = x.clone();
            for _ in 0..k {
                y = y.pow_mod(p as u128, &f);
            }
            y
        };
        if frob_iter(n).sub(&x).rem(&f).degree().is_some() {
            return false;
        }
        let mut m = n;
        let mut q = 2;
        while m > 1 {
            if m % q == 0 {
                while m % q == 0 {
                    m /= q;
                }
                let g = frob_iter(n / q).sub(&x).gcd(&f);
                if g.degree() != Some(0) {
                    return false;
                }
            }
            q += 1;
        }
        true
    }
}

/// Lexicographically smallest monic irreducible polynomial of degree f over F_p,
/// comparing coefficient vectors from the constant term upward.
pub fn conway_free_modulus(p: u64, f: usize) -> FpPoly {
    assert!(f >= 1);
    let total = p.pow(f as u32);
    for idx in 0..total {
        let mut c = Vec::with_capacity(f + 1);
        let mut t = idx;
        for _ in 0..f {
            c.push(t % p);
            t /= p;
        }
        c.push(1);
        let cand = FpPoly::new(p, c);
        if cand.is_irreducible() {
            return cand;
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}

/// Binomial coefficient C(n, k) mod p via Lucas' theorem.
pub fn binom_mod_p(mut n: u64, mut k: u64, p: u64) -> u64 {
    let mut r = 1u64;
    while k > 0 || n > 0 {
        let (ni, ki) = (n % p, k % p);
        if ki > ni {
            return 0;
        }
        r = r * small_binom_mod(ni, ki, p) % p;
        n /= p;
        k /= p;
    }
    r
}

fn small_binom_mod(n: u64, k: u64, p: u64) -> u64 {
    let mut num = 1u64;
    let mut den = 1u64;
    for i in 0..k {
        num = num * ((n - i) % p) % p;
        den = den * ((i + 1) % p) % p;
    }
    num * inv_mod(den, p) % p
}
