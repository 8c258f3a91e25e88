#![allow(dead_code)]

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use period_lab::newton_polygon::{LeftRay, Polygon, RightRay};

pub type Q = BigRational;

pub fn qi(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn q(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

pub fn powq(p: u64, e: i64) -> Q {
    let b = Q::from_integer(BigInt::from(p));
    let mut r = Q::one();
    for _ in 0..e.unsigned_abs() {
        r *= &b;
    }
    if e < 0 {
        r.recip()
    } else {
        r
    }
}

/// v_p of a nonzero rational by repeated division.
pub fn vp(x: &Q, p: u64) -> i64 {
    assert!(!x.is_zero());
    let pb = BigInt::from(p);
    let count = |mut n: BigInt| {
        let mut k = 0;
        while (&n % &pb).is_zero() {
            n /= &pb;
            k += 1;
        }
        k
    };
    count(x.numer().abs()) - count(x.denom().clone())
}

/// v_p(i!) by dividing every factor 1..=i.
pub fn factorial_valuation_brute(i: u64, p: u64) -> u64 {
    (1..=i)
        .map(|mut k| {
            let mut c = 0;
            while k % p == 0 {
                k /= p;
                c += 1;
            }
            c
        })
        .sum()
}

/// Smallest n with v_p(n!) >= -i, by bisection on Legendre's floor sum.
pub fn nu_brute(i: i64, p: u64) -> u64 {
    if i >= 0 {
        return 0;
    }
    let legendre = |n: u64| {
        let mut s = 0;
        let mut pk = p;
        while pk <= n {
            s += n / pk;
            pk = pk.saturating_mul(p);
        }
        s
    };
    let target = i.unsigned_abs();
    let (mut lo, mut hi) = (0u64, target * p + p);
    while lo < hi {
        let mid = (lo + hi) / 2;
        if legendre(mid) >= target {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    lo
}

/// psi_r as the integral of its derivative p^{min(floor t, r)}.
pub fn psi_r_integral(r: u32, u: &Q, p: u64) -> Q {
    let mut acc = Q::zero();
    let mut k = 0i64;
    loop {
        let lo = qi(k);
        if *u <= lo {
            return acc;
        }
        let rate = powq(p, k.min(r as i64));
        if k as u32 >= r {
            return acc + rate * (u - lo);
        }
        let hi = qi(k + 1);
        let top = if *u < hi { u.clone() } else { hi };
        acc += rate * (top - lo);
        k += 1;
    }
}

fn support_domain(p: &Polygon) -> (Option<Q>, Q) {
    let lo = match &p.left_ray {
        LeftRay::Vertical => None,
        LeftRay::Slope(s) => Some(s.clone()),
    };
    let hi = match &p.right_ray {
        RightRay::Horizontal => Q::zero(),
        RightRay::Slope(s) => s.clone(),
    };
    (lo, hi)
}

/// Minkowski sum of two polygons from all pairwise vertex sums: a sum is a
/// vertex when it is the unique minimizer of y - σx for some σ in the common
/// slope domain. Returns None if the domain is empty.
pub fn minkowski_brute(a: &Polygon, b: &Polygon) -> Option<(Vec<(Q, Q)>, Option<Q>, Q)> {
    let (alo, ahi) = support_domain(a);
    let (blo, bhi) = support_domain(b);
    let lo = match (alo, blo) {
        (Some(x), Some(y)) => Some(if x > y { x } else { y }),
        (x, None) => x,
        (None, y) => y,
    };
    let hi = if ahi < bhi { ahi } else { bhi };
    if lo.as_ref().is_some_and(|l| *l >= hi) {
        return None;
    }
    let mut cands: Vec<(Q, Q)> = Vec::new();
    for (x1, y1) in &a.vertices {
        for (x2, y2) in &b.vertices {
            cands.push((x1 + x2, y1 + y2));
        }
    }
    let inside = |s: &Q| lo.as_ref().is_none_or(|l| s > l) && *s < hi;
    let mut crit: Vec<Q> = Vec::new();
    for i in 0..cands.len() {
        for j in 0..cands.len() {
            if cands[i].0 < cands[j].0 {
                let s = (&cands[j].1 - &cands[i].1) / (&cands[j].0 - &cands[i].0);
                if inside(&s) {
                    crit.push(s);
                }
            }
        }
    }
    crit.sort();
    crit.dedup();
    let mut samples: Vec<Q> = Vec::new();
    let first = crit.first().cloned().unwrap_or_else(|| hi.clone() - qi(1));
    samples.push(match &lo {
        Some(l) if *l >= first => (l + &hi) / qi(2),
        Some(l) => (l + &first) / qi(2),
        None => &first - qi(1),
    });
    for w in crit.windows(2) {
        samples.push((&w[0] + &w[1]) / qi(2));
    }
    if let Some(last) = crit.last() {
        samples.push((last + &hi) / qi(2));
    }
    let mut verts: Vec<(Q, Q)> = Vec::new();
    for s in samples.into_iter().filter(|s| inside(s)) {
        let val = |z: &(Q, Q)| &z.1 - &s * &z.0;
        let best = cands.iter().map(val).min().unwrap();
        let mut arg: Vec<&(Q, Q)> = cands.iter().filter(|z| val(z) == best).collect();
        arg.sort();
        arg.dedup();
        if arg.len() == 1 && !verts.contains(arg[0]) {
            verts.push(arg[0].clone());
        }
    }
    verts.sort();
    Some((verts, lo, hi))
}

/// Rank over Q by Gaussian elimination.
pub fn rank(rows: &[Vec<Q>]) -> usize {
    let mut m: Vec<Vec<Q>> = rows.to_vec();
    let cols = m.first().map_or(0, |r| r.len());
    let mut r = 0;
    for c in 0..cols {
        let Some(piv) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, piv);
        for i in 0..m.len() {
            if i != r && !m[i][c].is_zero() {
                let f = &m[i][c] / &m[r][c];
                for k in 0..cols {
                    let t = &f * &m[r][k];
                    m[i][k] -= t;
                }
            }
        }
        r += 1;
    }
    r
}

/// dim(U ∩ W) for row spans.
pub fn intersection_dim(u: &[Vec<Q>], w: &[Vec<Q>]) -> usize {
    let mut all = u.to_vec();
    all.extend(w.iter().cloned());
    rank(u) + rank(w) - rank(&all)
}

pub fn mat_vec(m: &[Vec<Q>], v: &[Q]) -> Vec<Q> {
    m.iter().map(|r| r.iter().zip(v).map(|(a, b)| a * b).sum()).collect()
}

pub fn mat_mul(a: &[Vec<Q>], b: &[Vec<Q>]) -> Vec<Vec<Q>> {
    let n = b.first().map_or(0, |r| r.len());
    a.iter()
        .map(|r| (0..n).map(|j| r.iter().zip(b).map(|(x, row)| x * &row[j]).sum()).collect())
        .collect()
}

/// Inverse by Gauss-Jordan; None when singular.
pub fn inverse(m: &[Vec<Q>]) -> Option<Vec<Vec<Q>>> {
    let n = m.len();
    let mut a: Vec<Vec<Q>> = m
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut r = r.clone();
            r.extend((0..n).map(|j| if i == j { Q::one() } else { Q::zero() }));
            r
        })
        .collect();
    for c in 0..n {
        let piv = (c..n).find(|&i| !a[i][c].is_zero())?;
        a.swap(c, piv);
        let inv = a[c][c].recip();
        for k in 0..2 * n {
            a[c][k] = &a[c][k] * &inv;
        }
        for i in 0..n {
            if i != c && !a[i][c].is_zero() {
                let f = a[i][c].clone();
                for k in 0..2 * n {
                    let t = &f * &a[c][k];
                    a[i][k] -= t;
                }
            }
        }
    }
    Some(a.into_iter().map(|r| r[n..].to_vec()).collect())
}

pub fn transpose(m: &[Vec<Q>]) -> Vec<Vec<Q>> {
    let cols = m.first().map_or(0, |r| r.len());
    (0..cols).map(|j| m.iter().map(|r| r[j].clone()).collect()).collect()
}

/// A Φ-stable block of a module built from a known basis: the columns of the
/// change-of-basis matrix with these indices, and v_p of det Φ on them.
pub struct Block {
    pub columns: Vec<usize>,
    pub det_valuation: i64,
}

/// Brute-force weak admissibility over all sums of the given blocks.
/// `fil` lists (jump, row basis) with decreasing spaces.
pub fn admissible_brute(fil: &[(i64, Vec<Vec<Q>>)], blocks: &[Block], basis_cols: &[Vec<Q>]) -> bool {
    let t_h = |w: &[Vec<Q>]| -> i64 {
        let mut total = 0;
        for (k, (jump, space)) in fil.iter().enumerate() {
            let next = fil.get(k + 1).map(|(_, s)| intersection_dim(s, w)).unwrap_or(0);
            total += jump * (intersection_dim(space, w) - next) as i64;
        }
        total
    };
    let k = blocks.len();
    for mask in 1u32..(1 << k) {
        let chosen: Vec<&Block> = (0..k).filter(|i| mask >> i & 1 == 1).map(|i| &blocks[i]).collect();
        let w: Vec<Vec<Q>> = chosen.iter().flat_map(|b| b.columns.iter().map(|&c| basis_cols[c].clone())).collect();
        let tn: i64 = chosen.iter().map(|b| b.det_valuation).sum();
        let th = t_h(&w);
        if mask == (1 << k) - 1 {
            if th != tn {
                return false;
            }
        } else if th > tn {
            return false;
        }
    }
    true
}
