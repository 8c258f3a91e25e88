//! Lower convex polygons with rays at infinity, their Minkowski sums, and the
//! windowed polygons of `[ε] - 1` and `t`.
//!
//! A polygon is the region above a convex piecewise-linear chain. Segments
//! descend to the right; the left ray is vertical or has a slope steeper than
//! every segment, the right ray is horizontal or has a slope shallower than
//! every segment.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{domain, schema, Result};
use crate::padic_core::{Prime, Valuation};
use crate::rational::{floor, pow_q, qbig, qi, Q};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LeftRay {
    Vertical,
    Slope(#[serde(with = "crate::rational::serde_q")] Q),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RightRay {
    Horizontal,
    Slope(#[serde(with = "crate::rational::serde_q")] Q),
}

impl LeftRay {
    fn bound(&self) -> Option<Q> {
        match self {
            LeftRay::Vertical => None,
            LeftRay::Slope(s) => Some(s.clone()),
        }
    }

    fn from_bound(b: Option<Q>) -> Self {
        b.map_or(LeftRay::Vertical, LeftRay::Slope)
    }
}

impl RightRay {
    fn bound(&self) -> Q {
        match self {
            RightRay::Horizontal => Q::zero(),
            RightRay::Slope(s) => s.clone(),
        }
    }

    fn from_bound(b: Q) -> Self {
        if b.is_zero() {
            RightRay::Horizontal
        } else {
            RightRay::Slope(b)
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Polygon {
    #[serde(with = "crate::rational::serde_qpairs")]
    pub vertices: Vec<(Q, Q)>,
    pub left_ray: LeftRay,
    pub right_ray: RightRay,
}

fn slope(a: &(Q, Q), b: &(Q, Q)) -> Q {
    (&b.1 - &a.1) / (&b.0 - &a.0)
}

impl Polygon {
    pub fn new(vertices: Vec<(Q, Q)>, left_ray: LeftRay, right_ray: RightRay) -> Result<Self> {
        let right_ray = RightRay::from_bound(right_ray.bound());
        let p = Polygon {
            vertices,
            left_ray,
            right_ray,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if self.vertices.is_empty() {
            return schema("a polygon needs at least one vertex");
        }
        for w in self.vertices.windows(2) {
            if w[1].0 <= w[0].0 {
                return schema("polygon vertices must have strictly increasing x");
            }
        }
        let mut s: Vec<Q> = self.segment_slopes();
        if let Some(l) = self.left_ray.bound() {
            s.insert(0, l);
        }
        s.push(self.right_ray.bound());
        if s.windows(2).any(|w| w[1] <= w[0]) {
            return schema("polygon slopes (rays included) must be strictly increasing");
        }
        Ok(())
    }

    /// The single-vertex polygon at the origin, neutral for Minkowski sums.
    pub fn unit() -> Self {
        Polygon {
            vertices: vec![(Q::zero(), Q::zero())],
            left_ray: LeftRay::Vertical,
            right_ray: RightRay::Horizontal,
        }
    }

    pub fn segment_slopes(&self) -> Vec<Q> {
        self.vertices.windows(2).map(|w| slope(&w[0], &w[1])).collect()
    }

    pub fn leftmost(&self) -> &(Q, Q) {
        &self.vertices[0]
    }

    /// Ordinate of the lower boundary at x, if x lies within the vertex range.
    pub fn ordinate(&self, x: &Q) -> Option<Q> {
        let first = &self.vertices[0].0;
        let last = &self.vertices[self.vertices.len() - 1].0;
        if x < first || x > last {
            return None;
        }
        let i = self.vertices.partition_point(|(vx, _)| vx <= x) - 1;
        let (vx, vy) = &self.vertices[i];
        match self.vertices.get(i + 1) {
            Some(n) => Some(vy + slope(&self.vertices[i], n) * (x - vx)),
            None => Some(vy.clone()),
        }
    }

    /// Vertices with x in [lo, hi].
    pub fn vertices_in(&self, lo: &Q, hi: &Q) -> Vec<(Q, Q)> {
        self.vertices
            .iter()
            .filter(|(x, _)| x >= lo && x <= hi)
            .cloned()
            .collect()
    }

    /// The vertices active for support slopes in the open interval (lo, hi).
    fn active(&self, lo: &Option<Q>, hi: &Q) -> Vec<(Q, Q)> {
        let s = self.segment_slopes();
        let n = self.vertices.len();
        (0..n)
            .filter(|&i| {
                let below_hi = i == 0 || s[i - 1] < *hi;
                let above_lo = i + 1 == n || lo.as_ref().is_none_or(|l| s[i] > *l);
                below_hi && above_lo
            })
            .map(|i| self.vertices[i].clone())
            .collect()
    }
}

/// Terms (x, v) of a series; the points are (x, v) for finite v.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeriesProfile {
    #[serde(with = "profile_terms")]
    pub terms: Vec<(Q, Valuation)>,
}

mod profile_terms {
    use super::*;
    use crate::rational::serde_q::Wrap;
    use serde::{Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &[(Q, Valuation)], s: S) -> std::result::Result<S::Ok, S::Error> {
        v.iter()
            .map(|(x, y)| (Wrap(x.clone()), y.clone()))
            .collect::<Vec<_>>()
            .serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Vec<(Q, Valuation)>, D::Error> {
        Ok(Vec::<(Wrap, Valuation)>::deserialize(d)?
            .into_iter()
            .map(|(x, y)| (x.0, y))
            .collect())
    }
}

/// Lower hull of points together with the given rays.
pub fn hull_points(points: &[(Q, Q)], left_ray: LeftRay, right_ray: RightRay) -> Result<Polygon> {
    if points.is_empty() {
        return domain("hull of an empty point set");
    }
    let lo = left_ray.bound();
    let hi = right_ray.bound();
    if lo.as_ref().is_some_and(|l| *l >= hi) {
        return domain("ray directions leave no room for a polygon");
    }
    let mut pts = points.to_vec();
    pts.sort();
    pts.dedup_by(|a, b| a.0 == b.0);
    let mut chain: Vec<(Q, Q)> = Vec::new();
    for pt in pts {
        while chain.len() >= 2 {
            let n = chain.len();
            if slope(&chain[n - 2], &pt) <= slope(&chain[n - 2], &chain[n - 1]) {
                chain.pop();
            } else {
                break;
            }
        }
        chain.push(pt);
    }
    let raw = Polygon {
        vertices: chain,
        left_ray: left_ray.clone(),
        right_ray: right_ray.clone(),
    };
    let vertices = raw.active(&lo, &hi);
    Polygon::new(vertices, left_ray, right_ray)
}

/// Newton polygon of a series profile, with the vertical and horizontal rays.
pub fn hull(profile: &SeriesProfile) -> Result<Polygon> {
    let pts: Vec<(Q, Q)> = profile
        .terms
        .iter()
        .filter_map(|(x, v)| v.finite().map(|v| (x.clone(), v.clone())))
        .collect();
    if pts.is_empty() {
        return domain("profile has no term of finite valuation");
    }
    hull_points(&pts, LeftRay::Vertical, RightRay::Horizontal)
}

/// Minkowski sum by merging the slope sequences active on the common slope range.
pub fn minkowski_sum(p: &Polygon, q: &Polygon) -> Result<Polygon> {
    let lo = match (p.left_ray.bound(), q.left_ray.bound()) {
        (None, b) | (b, None) => b,
        (Some(a), Some(b)) => Some(a.max(b)),
    };
    let hi = p.right_ray.bound().min(q.right_ray.bound());
    if lo.as_ref().is_some_and(|l| *l >= hi) {
        return domain("Minkowski sum of polygons with incompatible rays");
    }
    let ap = p.active(&lo, &hi);
    let aq = q.active(&lo, &hi);
    let edges = |v: &[(Q, Q)]| -> Vec<(Q, Q)> {
        v.windows(2)
            .map(|w| (slope(&w[0], &w[1]), &w[1].0 - &w[0].0))
            .collect()
    };
    let mut all: Vec<(Q, Q)> = edges(&ap);
    all.extend(edges(&aq));
    all.sort_by(|a, b| a.0.cmp(&b.0));
    let mut merged: Vec<(Q, Q)> = Vec::new();
    for (s, dx) in all {
        match merged.last_mut() {
            Some((ls, ldx)) if *ls == s => *ldx += dx,
            _ => merged.push((s, dx)),
        }
    }
    let mut cur = (&ap[0].0 + &aq[0].0, &ap[0].1 + &aq[0].1);
    let mut verts = vec![cur.clone()];
    for (s, dx) in merged {
        cur = (&cur.0 + &dx, &cur.1 + s * &dx);
        verts.push(cur.clone());
    }
    Polygon::new(verts, LeftRay::from_bound(lo), RightRay::from_bound(hi))
}

/// The plane map (i, v) -> (i, p^n v) induced by Frobenius.
pub fn frobenius_transform(poly: &Polygon, n: i64, p: Prime) -> Polygon {
    let k = pow_q(p.get(), n);
    Polygon {
        vertices: poly
            .vertices
            .iter()
            .map(|(x, y)| (x.clone(), y * &k))
            .collect(),
        left_ray: match &poly.left_ray {
            LeftRay::Vertical => LeftRay::Vertical,
            LeftRay::Slope(s) => LeftRay::Slope(s * &k),
        },
        right_ray: match &poly.right_ray {
            RightRay::Horizontal => RightRay::Horizontal,
            RightRay::Slope(s) => RightRay::Slope(s * &k),
        },
    }
}

/// The plane map (i, v) -> (i + shift, scale * v).
pub fn affine_transform(poly: &Polygon, shift: &Q, scale: &Q) -> Polygon {
    assert!(scale.is_positive());
    Polygon {
        vertices: poly
            .vertices
            .iter()
            .map(|(x, y)| (x + shift, y * scale))
            .collect(),
        left_ray: match &poly.left_ray {
            LeftRay::Vertical => LeftRay::Vertical,
            LeftRay::Slope(s) => LeftRay::Slope(s * scale),
        },
        right_ray: match &poly.right_ray {
            RightRay::Horizontal => RightRay::Horizontal,
            RightRay::Slope(s) => RightRay::Slope(s * scale),
        },
    }
}

/// Polygon of omega: vertices (0, 1), (1, 0).
pub fn omega_polygon() -> Polygon {
    Polygon {
        vertices: vec![(qi(0), qi(1)), (qi(1), qi(0))],
        left_ray: LeftRay::Vertical,
        right_ray: RightRay::Horizontal,
    }
}

fn sum_all(polys: impl IntoIterator<Item = Polygon>) -> Result<Polygon> {
    polys
        .into_iter()
        .try_fold(Polygon::unit(), |acc, p| minkowski_sum(&acc, &p))
}

/// Factors n = 0..count-1 of the product of phi^{-n}(omega), followed by the
/// exact contribution of the remaining factors: a vertical shift by
/// sum_{n >= count} p^{-n} = p^{1-count}/(p-1) and the next slope -p^{-count}
/// as the right ray.
fn epsilon_part(p: Prime, count: i64) -> Result<Polygon> {
    let pv = p.get();
    let tail = Polygon {
        vertices: vec![(qi(0), pow_q(pv, 1 - count) / qi(pv as i64 - 1))],
        left_ray: LeftRay::Vertical,
        right_ray: RightRay::Slope(-pow_q(pv, -count)),
    };
    let factors = (0..count).map(|n| frobenius_transform(&omega_polygon(), -n, p));
    minkowski_sum(&sum_all(factors)?, &tail)
}

/// Polygon of [ε] - 1 on 0 <= x <= x_window. The segment starting at x = n
/// has length 1 and slope -p^{-n}; the right ray continues with the first
/// slope beyond the window.
pub fn epsilon_minus_one_polygon(p: Prime, x_window: &Q) -> Result<Polygon> {
    if *x_window < Q::one() {
        return domain("the window must contain [0, 1]");
    }
    let count: i64 = floor(x_window).try_into().map_err(|_| crate::Error::Domain("window too large".into()))?;
    epsilon_part(p, count)
}

/// Polygon of t = log[ε] on left <= x <= right, as the Minkowski sum of the
/// factors phi^n(omega)/p (n >= 1), each with vertices (-1, p^n), (0, 0), and
/// the factors of [ε] - 1. Rays continue with the first slopes beyond the window.
pub fn t_polygon(p: Prime, left: &Q, right: &Q) -> Result<Polygon> {
    if left > right {
        return domain("empty window");
    }
    let pv = p.get();
    let to_i64 = |b: BigInt| -> Result<i64> {
        b.try_into().map_err(|_| crate::Error::Domain("window too large".into()))
    };
    let l = to_i64(floor(&-left))?.max(0);
    let n = to_i64(floor(right))?.max(0);
    let left_factors = (1..=l).map(|k| Polygon {
        vertices: vec![(qi(-1), pow_q(pv, k)), (qi(0), qi(0))],
        left_ray: LeftRay::Vertical,
        right_ray: RightRay::Horizontal,
    });
    let left_tail = Polygon {
        vertices: vec![(qi(0), qi(0))],
        left_ray: LeftRay::Slope(-pow_q(pv, l + 1)),
        right_ray: RightRay::Horizontal,
    };
    let lp = minkowski_sum(&sum_all(left_factors)?, &left_tail)?;
    minkowski_sum(&lp, &epsilon_part(p, n)?)
}

/// A plain-text sketch of the vertex chain on a `width` x `height` grid.
pub fn ascii_sketch(poly: &Polygon, width: usize, height: usize) -> String {
    let (w, h) = (width.max(2), height.max(2));
    let xs: Vec<&Q> = poly.vertices.iter().map(|v| &v.0).collect();
    let ys: Vec<&Q> = poly.vertices.iter().map(|v| &v.1).collect();
    let (x0, x1) = (xs[0].clone(), xs[xs.len() - 1].clone());
    let y0 = ys.iter().map(|y| (*y).clone()).min().unwrap();
    let y1 = ys.iter().map(|y| (*y).clone()).max().unwrap();
    let cell = |v: &Q, lo: &Q, hi: &Q, n: usize| -> usize {
        if hi == lo {
            return 0;
        }
        let t = (v - lo) / (hi - lo) * qbig(BigInt::from(n - 1));
        let r: i64 = t.round().to_integer().try_into().unwrap_or(0);
        r.clamp(0, n as i64 - 1) as usize
    };
    let mut grid = vec![vec![' '; w]; h];
    for col in 0..w {
        let x = &x0 + (&x1 - &x0) * Q::new(BigInt::from(col), BigInt::from(w - 1));
        if let Some(y) = poly.ordinate(&x) {
            let row = cell(&y, &y0, &y1, h);
            grid[h - 1 - row][col] = '.';
        }
    }
    for (x, y) in &poly.vertices {
        let (c, r) = (cell(x, &x0, &x1, w), cell(y, &y0, &y1, h));
        grid[h - 1 - r][c] = '*';
    }
    let mut out = String::new();
    for row in grid {
        out.push_str(row.iter().collect::<String>().trim_end());
        out.push('\n');
    }
    for (x, y) in &poly.vertices {
        out.push_str(&format!("vertex ({x}, {y})\n"));
    }
    out.push_str(&format!("left ray: {}\n", match &poly.left_ray {
        LeftRay::Vertical => "vertical".to_string(),
        LeftRay::Slope(s) => format!("slope {s}"),
    }));
    out.push_str(&format!("right ray: {}\n", match &poly.right_ray {
        RightRay::Horizontal => "horizontal".to_string(),
        RightRay::Slope(s) => format!("slope {s}"),
    }));
    out
}
