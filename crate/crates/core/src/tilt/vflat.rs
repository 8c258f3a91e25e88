//! v♭ of a finite sum in R, read off from the tilt components.
//!
//! Terms are grouped by their p♭-exponent c. Inside a group the sum is
//! y = Σ c_j ε^{a_j} with c_j ∈ F_q; its depth-n component modulo p lives in
//! F_q[π]/(π^e) with π = ζ_{p^L} - 1, L = n + k and e = φ(p^L), where p^k is
//! the largest denominator among the a_j. Expanding ζ^{e_j} = (1 + π)^{e_j}
//! gives the π-adic order, hence v_p(y_n) and v♭(y) = p^n v_p(y_n) whenever
//! v_p(y_n) < 1.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::finite_field::{FiniteField, FqElement};
use super::TiltExpr;
use crate::error::{Error, Result};
use crate::padic_core::Valuation;
use crate::poly::binom_mod_p;
use crate::rational::{pow_big, q, qbig, residue_mod, vp_int, Q};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum VflatStatus {
    /// Consecutive depths agree (or the group is a single monomial).
    Stabilized,
    /// A value was found but not yet confirmed at the next depth.
    Unstabilized,
    /// No depth up to the limit had v_p below 1.
    Capped,
    /// Two groups attain the minimum and could cancel.
    Tie,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VflatReport {
    pub value: Option<Valuation>,
    pub status: VflatStatus,
    /// Overall value seen at each depth 0..=depth, when every group had one.
    pub per_depth: Vec<Option<Valuation>>,
}

struct Group {
    /// (ε-exponent, coefficient in F_q)
    terms: Vec<(Q, FqElement)>,
    f: usize,
}

fn group_terms(x: &TiltExpr) -> Result<BTreeMap<Q, Group>> {
    let p = x.prime().get();
    let pb = BigInt::from(p);
    let mut groups: BTreeMap<Q, BTreeMap<Q, (usize, Vec<u64>)>> = BTreeMap::new();
    for (n, m, i) in x.terms() {
        if i != 0 {
            return Err(Error::Domain("v-flat is defined on R: every p-power must be 0".into()));
        }
        let r = n.mod_floor(&pb).to_u64().expect("residue fits");
        if r == 0 {
            continue;
        }
        let slot = groups
            .entry(m.c.clone())
            .or_default()
            .entry(m.a.clone())
            .or_insert((1, vec![]));
        let f = FqElement::common_degree(&FqElement { f: slot.0, poly: vec![1] }, &m.u)?;
        let field = FiniteField::new(p, f);
        slot.1 = field.add(&slot.1, &field.scale(&m.u.poly, r));
        slot.0 = f;
    }
    let mut out = BTreeMap::new();
    for (c, by_a) in groups {
        let mut f = 1;
        let mut terms = Vec::new();
        for (a, (fa, poly)) in by_a {
            let field = FiniteField::new(p, fa);
            let red = field.reduce(&poly);
            if red.is_empty() {
                continue;
            }
            if fa > 1 {
                if f > 1 && f != fa {
                    return Err(Error::Schema("mixed residue field degrees".into()));
                }
                f = fa;
            }
            terms.push((a, FqElement { f: if red.len() <= 1 { 1 } else { fa }, poly: red }));
        }
        if !terms.is_empty() {
            out.insert(c, Group { terms, f });
        }
    }
    Ok(out)
}

/// p^n · v_p of the depth-n component of the group, if it is below p^n.
fn group_value_at(g: &Group, p: u64, n: u32) -> Option<Q> {
    let k = g
        .terms
        .iter()
        .map(|(a, _)| vp_int(a.denom(), p))
        .max()
        .unwrap_or(0) as u32;
    let l = n + k;
    if l == 0 {
        let field = FiniteField::new(p, g.f);
        let s = g.terms.iter().fold(vec![], |acc, (_, u)| field.add(&acc, &u.poly));
        return if field.reduce(&s).is_empty() { None } else { Some(Q::zero()) };
    }
    let modulus = pow_big(p, l);
    let scale = qbig(pow_big(p, k));
    let field = FiniteField::new(p, g.f);
    let coeffs: Vec<(u64, Vec<u64>)> = g
        .terms
        .iter()
        .map(|(a, u)| {
            let e = residue_mod(&(a * &scale), &modulus).to_u64().expect("exponent fits");
            (e, u.frobenius(-(n as i64), p).poly)
        })
        .collect();
    let e = (p - 1) * p.pow(l - 1);
    for i in 0..e {
        let mut b = vec![];
        for (ej, cj) in &coeffs {
            let bin = binom_mod_p(*ej, i, p);
            if bin != 0 {
                b = field.add(&b, &field.scale(cj, bin));
            }
        }
        if !field.reduce(&b).is_empty() {
            return Some(q(i as i64, e as i64) * qbig(pow_big(p, n)));
        }
    }
    None
}

/// v♭ of an element of R given as a formal sum with all p-powers 0.
/// Coefficients are read modulo p.
pub fn vflat_sum(x: &TiltExpr, depth: u32) -> Result<VflatReport> {
    let p = x.prime().get();
    let groups = group_terms(x)?;
    if groups.is_empty() {
        return Ok(VflatReport {
            value: Some(Valuation::Infinite),
            status: VflatStatus::Stabilized,
            per_depth: vec![Some(Valuation::Infinite); depth as usize + 1],
        });
    }
    let mut per_group: Vec<(Q, Vec<Option<Q>>)> = Vec::new();
    for (c, g) in &groups {
        let vals = (0..=depth).map(|n| group_value_at(g, p, n)).collect();
        per_group.push((c.clone(), vals));
    }
    let per_depth = (0..=depth as usize)
        .map(|n| {
            per_group
                .iter()
                .map(|(c, v)| v[n].as_ref().map(|x| x + c))
                .collect::<Option<Vec<Q>>>()
                .and_then(|vs| vs.into_iter().min())
                .map(Valuation::Finite)
        })
        .collect();
    let mut best: Option<Q> = None;
    let mut all_stable = true;
    let mut any_missing = false;
    let mut totals = Vec::new();
    for ((c, vals), g) in per_group.iter().zip(groups.values()) {
        let single = g.terms.len() == 1;
        let stable = single
            || vals
                .windows(2)
                .any(|w| w[0].is_some() && w[0] == w[1]);
        let last = if single {
            Some(Q::zero())
        } else {
            vals.iter().rev().find_map(|v| v.clone())
        };
        match last {
            Some(v) => totals.push(v + c),
            None => any_missing = true,
        }
        all_stable &= stable;
    }
    for t in &totals {
        best = Some(match best {
            Some(b) if b <= *t => b,
            _ => t.clone(),
        });
    }
    let ties = best
        .as_ref()
        .is_some_and(|b| totals.iter().filter(|t| *t == b).count() > 1);
    let status = if any_missing {
        VflatStatus::Capped
    } else if ties {
        VflatStatus::Tie
    } else if all_stable {
        VflatStatus::Stabilized
    } else {
        VflatStatus::Unstabilized
    };
    let value = if any_missing || ties {
        None
    } else {
        best.map(Valuation::Finite)
    };
    Ok(VflatReport {
        value,
        status,
        per_depth,
    })
}
