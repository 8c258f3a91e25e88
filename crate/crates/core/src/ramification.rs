//! Herbrand calculus for totally ramified Galois extensions.
//!
//! Lower ramification groups are given by their orders g_0 >= g_1 >= ...,
//! with Card G_t taken equal to g_i on [i, i+1).

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{domain, schema, Error, Result};
use crate::padic_core::Prime;
use crate::rational::{ceil, pow_q, qbig, qi, Q};

/// A continuous, strictly increasing piecewise-linear map of [0, inf) fixing 0.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PLFunction {
    /// Starts with (0, 0); x strictly increasing.
    #[serde(with = "crate::rational::serde_qpairs")]
    pub breakpoints: Vec<(Q, Q)>,
    #[serde(with = "crate::rational::serde_q")]
    pub final_slope: Q,
}

impl PLFunction {
    pub fn identity() -> Self {
        PLFunction {
            breakpoints: vec![(Q::zero(), Q::zero())],
            final_slope: Q::one(),
        }
    }

    /// Builds and normalizes, dropping breakpoints where the slope does not change.
    pub fn new(breakpoints: Vec<(Q, Q)>, final_slope: Q) -> Result<Self> {
        let f = PLFunction {
            breakpoints,
            final_slope,
        };
        f.validate()?;
        Ok(f.normalized())
    }

    pub fn validate(&self) -> Result<()> {
        match self.breakpoints.first() {
            Some((x, y)) if x.is_zero() && y.is_zero() => {}
            _ => return schema("PL function must start at (0, 0)"),
        }
        for w in self.breakpoints.windows(2) {
            if w[1].0 <= w[0].0 || w[1].1 <= w[0].1 {
                return schema("PL function must be strictly increasing");
            }
        }
        if !self.final_slope.is_positive() {
            return schema("final slope must be positive");
        }
        Ok(())
    }

    fn normalized(mut self) -> Self {
        let mut out: Vec<(Q, Q)> = vec![self.breakpoints[0].clone()];
        let n = self.breakpoints.len();
        for k in 1..n {
            let (x, y) = &self.breakpoints[k];
            let prev = out.last().unwrap();
            let s_in = (y - &prev.1) / (x - &prev.0);
            let s_out = if k + 1 < n {
                let (x2, y2) = &self.breakpoints[k + 1];
                (y2 - y) / (x2 - x)
            } else {
                self.final_slope.clone()
            };
            if s_in != s_out {
                out.push((x.clone(), y.clone()));
            }
        }
        self.breakpoints = out;
        self
    }

    /// Slopes of the successive pieces, ending with the final slope.
    pub fn slopes(&self) -> Vec<Q> {
        let mut s: Vec<Q> = self
            .breakpoints
            .windows(2)
            .map(|w| (&w[1].1 - &w[0].1) / (&w[1].0 - &w[0].0))
            .collect();
        s.push(self.final_slope.clone());
        s
    }

    pub fn is_concave(&self) -> bool {
        self.slopes().windows(2).all(|w| w[1] <= w[0])
    }

    pub fn is_convex(&self) -> bool {
        self.slopes().windows(2).all(|w| w[1] >= w[0])
    }

    pub fn eval(&self, x: &Q) -> Q {
        assert!(!x.is_negative(), "PL functions are defined on [0, inf)");
        let idx = self.breakpoints.partition_point(|(bx, _)| bx <= x) - 1;
        let (bx, by) = &self.breakpoints[idx];
        let slope = match self.breakpoints.get(idx + 1) {
            Some((nx, ny)) => (ny - by) / (nx - bx),
            None => self.final_slope.clone(),
        };
        by + slope * (x - bx)
    }

    /// The exact inverse bijection.
    pub fn inverse(&self) -> PLFunction {
        PLFunction {
            breakpoints: self
                .breakpoints
                .iter()
                .map(|(x, y)| (y.clone(), x.clone()))
                .collect(),
            final_slope: Q::one() / &self.final_slope,
        }
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &PLFunction) -> PLFunction {
        let inv = inner.inverse();
        let mut xs: Vec<Q> = inner.breakpoints.iter().map(|(x, _)| x.clone()).collect();
        xs.extend(self.breakpoints.iter().map(|(y, _)| inv.eval(y)));
        xs.sort();
        xs.dedup();
        let bps = xs
            .into_iter()
            .map(|x| {
                let y = self.eval(&inner.eval(&x));
                (x, y)
            })
            .collect();
        PLFunction {
            breakpoints: bps,
            final_slope: &self.final_slope * &inner.final_slope,
        }
        .normalized()
    }
}

/// Orders of the lower ramification groups of a totally ramified Galois step.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RamificationData {
    pub e: u64,
    /// g_0, g_1, ..., g_k; g_i = 1 beyond the list.
    pub orders: Vec<u64>,
}

impl RamificationData {
    pub fn new(e: u64, orders: Vec<u64>) -> Result<Self> {
        let d = RamificationData { e, orders };
        d.validate()?;
        Ok(d)
    }

    pub fn validate(&self) -> Result<()> {
        if self.e == 0 {
            return schema("ramification index must be positive");
        }
        match self.orders.first() {
            Some(&g0) if g0 == self.e => {}
            Some(_) => return schema("g_0 must equal e for a totally ramified step"),
            None => return schema("orders must contain at least g_0"),
        }
        for (i, w) in self.orders.windows(2).enumerate() {
            if w[1] == 0 || w[1] > w[0] {
                return schema(format!("orders must be nonincreasing and positive at index {}", i + 1));
            }
            if w[0] % w[1] != 0 {
                return schema(format!("g_{} does not divide g_{}", i + 1, i));
            }
        }
        Ok(())
    }
}

/// phi(u) = (1/e) * integral_0^u Card G_t dt.
pub fn herbrand_phi(data: &RamificationData) -> Result<PLFunction> {
    data.validate()?;
    let e = qbig(BigInt::from(data.e));
    let mut bps = vec![(Q::zero(), Q::zero())];
    let mut y = Q::zero();
    for (i, g) in data.orders.iter().enumerate() {
        y += qbig(BigInt::from(*g)) / &e;
        bps.push((qi(i as i64 + 1), y.clone()));
    }
    PLFunction::new(bps, Q::one() / e)
}

pub fn herbrand_psi(phi: &PLFunction) -> PLFunction {
    phi.inverse()
}

/// phi_{L2/F} = phi_{L1/F} ∘ phi_{L2/L1}.
pub fn compose_towers(phi_upper: &PLFunction, phi_lower: &PLFunction) -> PLFunction {
    phi_upper.compose(phi_lower)
}

/// v_F of the different, (1/e) * sum (g_i - 1), cross-checked against the
/// asymptote of phi(t) - t/e.
pub fn different_valuation(data: &RamificationData) -> Result<Q> {
    let e = qbig(BigInt::from(data.e));
    let sum: Q = data
        .orders
        .iter()
        .map(|g| qbig(BigInt::from(*g)) - Q::one())
        .sum::<Q>()
        / &e;
    let phi = herbrand_phi(data)?;
    let (x, y) = phi.breakpoints.last().unwrap();
    let asymptote = y - x / &e;
    if asymptote != sum {
        return Err(Error::Internal(format!(
            "different {sum} disagrees with phi asymptote {asymptote}"
        )));
    }
    Ok(sum)
}

fn geometric(p: u64, k: i64) -> Q {
    (0..k).map(|j| pow_q(p, j)).sum()
}

/// The upper-to-lower reindexing of the level-r layer of the cyclotomic Z_p-extension.
pub fn psi_r(r: u32, u: &Q, p: Prime) -> Q {
    assert!(!u.is_negative(), "psi_r is defined on [0, inf)");
    let pv = p.get();
    if *u < Q::one() {
        return u.clone();
    }
    let k = crate::rational::floor(u).min(BigInt::from(r));
    let k: i64 = k.try_into().expect("small level");
    pow_q(pv, k) * (u - qi(k)) + geometric(pv, k)
}

/// psi_r as a PL function: breakpoints (k, 1 + p + ... + p^{k-1}), final slope p^r.
pub fn psi_r_function(r: u32, p: Prime) -> PLFunction {
    let bps = (0..=r as i64)
        .map(|k| (qi(k), geometric(p.get(), k)))
        .collect();
    PLFunction::new(bps, pow_q(p.get(), r as i64)).expect("psi_r is increasing")
}

/// Constants of psi_{F_r/F}(u) = e_F psi_r((u - a)/e_F) + b.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ZpExtensionProfile {
    pub e_f: u64,
    #[serde(with = "crate::rational::serde_q")]
    pub a: Q,
    #[serde(with = "crate::rational::serde_q")]
    pub b: Q,
}

impl ZpExtensionProfile {
    pub fn validate(&self) -> Result<()> {
        if self.e_f == 0 {
            return schema("e_F must be positive");
        }
        Ok(())
    }

    pub fn a_is_integer(&self) -> bool {
        self.a.is_integer()
    }
}

/// rho(u) = ceil((u - a)/e_F): Gal(F_inf/F)^u is generated by gamma_rho(u).
pub fn zp_jump(profile: &ZpExtensionProfile, u: &Q) -> Result<u64> {
    profile.validate()?;
    let t = (u - &profile.a) / qbig(BigInt::from(profile.e_f));
    if !t.is_positive() {
        return domain(format!("u = {u} lies below the validity threshold a = {}", profile.a));
    }
    Ok(ceil(&t).try_into().expect("jump fits in u64"))
}

/// Exact v_p of the different of F_s/F_r.
pub fn trace_decay_bound(profile: &ZpExtensionProfile, p: Prime, r: u32, s: u32) -> Result<Q> {
    profile.validate()?;
    if r > s {
        return domain("trace decay requires r <= s");
    }
    let pv = p.get();
    let ef = qbig(BigInt::from(profile.e_f));
    let pm1 = qi(pv as i64 - 1);
    let level = |k: u32| -> Q {
        let pk = pow_q(pv, k as i64);
        qi(k as i64) - &profile.b / (&pk * &ef) + (&pk - Q::one()) / (&pk * &pm1)
    };
    Ok(level(s) - level(r))
}

/// Exhibited constants for the trace estimate and the Hilbert 90 bound.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceDecayReport {
    pub window: u32,
    /// sup of (s - r) - v_p(D_{F_s/F_r}) over 0 <= r <= s <= window.
    #[serde(with = "crate::rational::serde_q")]
    pub defect_sup: Q,
    pub attained_at: (u32, u32),
    /// |b/e_F + 1/(p-1)|, which bounds the defect for every r, s.
    #[serde(with = "crate::rational::serde_q")]
    pub uniform_bound: Q,
    pub c: u64,
    #[serde(with = "crate::rational::serde_q")]
    pub c1: Q,
    #[serde(with = "crate::rational::serde_q")]
    pub c2: Q,
    pub a_is_integer: bool,
}

pub fn trace_decay_report(profile: &ZpExtensionProfile, p: Prime, window: u32) -> Result<TraceDecayReport> {
    let mut best: Option<(Q, (u32, u32))> = None;
    for s in 0..=window {
        for r in 0..=s {
            let d = qi((s - r) as i64) - trace_decay_bound(profile, p, r, s)?;
            if best.as_ref().is_none_or(|(b, _)| d > *b) {
                best = Some((d, (r, s)));
            }
        }
    }
    let (sup, at) = best.expect("window contains r = s = 0");
    let ef = qbig(BigInt::from(profile.e_f));
    let uniform_bound = (&profile.b / ef + Q::one() / qi(p.get() as i64 - 1)).abs();
    let c: u64 = ceil(&sup.clone().max(Q::zero()))
        .try_into()
        .expect("small constant");
    let c1 = qi(c as i64) + Q::one();
    Ok(TraceDecayReport {
        window,
        defect_sup: sup,
        attained_at: at,
        uniform_bound,
        c,
        c2: hilbert90_constant(&c1)?,
        c1,
        a_is_integer: profile.a_is_integer(),
    })
}

/// c_2 = c_1 + 1.
pub fn hilbert90_constant(c1: &Q) -> Result<Q> {
    if c1.is_negative() {
        return domain("c_1 must be nonnegative");
    }
    Ok(c1 + Q::one())
}
