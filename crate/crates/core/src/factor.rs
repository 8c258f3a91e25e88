//! Factorization over Q (backed by the `algebraics` crate) and the
//! Q_p-irreducibility certificate used by the admissibility scan.

use algebraics::polynomial::Polynomial;
use num_bigint::BigInt;

use crate::padic_core::{poly_newton_polygon, PolyValuationProfile, Prime};
use crate::poly::{FpPoly, QPoly};
use crate::rational::{pow_q, qbig, Q};

/// Monic irreducible factors over Q with multiplicities, constants dropped.
pub fn factor_over_q(f: &QPoly) -> Vec<(QPoly, usize)> {
    match f.degree() {
        None | Some(0) => return vec![],
        Some(1) => return vec![(f.monic(), 1)],
        _ => {}
    }
    let ints = f.primitive_integer();
    let poly: Polynomial<BigInt> = ints.into();
    let fac = poly.factor();
    let mut out: Vec<(QPoly, usize)> = fac
        .polynomial_factors
        .iter()
        .map(|pf| {
            let c: Vec<Q> = pf.polynomial.iter().map(|x| qbig(x.clone())).collect();
            (QPoly::new(c).monic(), pf.power)
        })
        .collect();
    out.sort_by(|a, b| {
        a.0.degree()
            .cmp(&b.0.degree())
            .then_with(|| a.0 .0.cmp(&b.0 .0))
    });
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum QpIrreducibility {
    Irreducible,
    Reducible,
    Unknown,
}

/// Decides, when a cheap certificate exists, whether a monic Q-irreducible
/// polynomial stays irreducible over Q_p.
///
/// Several Newton slopes split the polynomial. A single slope h/d in lowest
/// terms with d equal to the degree forces total ramification. A single
/// integral slope k is handled by rescaling the roots to units and testing the
/// reduction mod p; a squarefree reducible reduction lifts by Hensel.
pub fn qp_irreducibility(f: &QPoly, p: Prime) -> QpIrreducibility {
    let n = match f.degree() {
        Some(n) if n >= 1 => n,
        _ => return QpIrreducibility::Unknown,
    };
    if n == 1 {
        return QpIrreducibility::Irreducible;
    }
    let f = f.monic();
    let prof = match PolyValuationProfile::from_coefficients(&f.0, p) {
        Ok(pr) => pr,
        Err(_) => return QpIrreducibility::Unknown,
    };
    let sides = match poly_newton_polygon(&prof) {
        Ok(s) => s,
        Err(_) => return QpIrreducibility::Unknown,
    };
    if sides.len() != 1 {
        return QpIrreducibility::Reducible;
    }
    let slope = &sides[0].slope;
    let den = slope.denom().clone();
    if den == BigInt::from(n) {
        return QpIrreducibility::Irreducible;
    }
    if den != BigInt::from(1) {
        return QpIrreducibility::Unknown;
    }
    // Roots have valuation k = -slope; g(y) = p^{-nk} f(p^k y) has unit roots.
    let k: i64 = (-slope.numer()).try_into().expect("small slope");
    let g: Vec<Q> = (0..=n)
        .map(|i| f.coeff(i) * pow_q(p.get(), k * (i as i64 - n as i64)))
        .collect();
    let ints: Vec<BigInt> = g
        .iter()
        .map(|c| {
            debug_assert!(crate::rational::is_p_integral(c, p.get()));
            let m = BigInt::from(p.get());
            crate::rational::residue_mod(c, &m)
        })
        .collect();
    let gbar = FpPoly::from_ints(p.get(), &ints);
    if gbar.is_irreducible() {
        QpIrreducibility::Irreducible
    } else if gbar.is_squarefree() {
        QpIrreducibility::Reducible
    } else {
        QpIrreducibility::Unknown
    }
}
