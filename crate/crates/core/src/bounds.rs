//! How large `n` must be for `Res_n[f]` to certify points at distance
//! `epsilon` from the amoeba, lattice-point bounds `d(Delta)`, and the
//! elementary inequalities the convergence estimates rest on.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly::NewtonPolytope;

/// Largest `n` the upward scans will try.
pub const SCAN_CAP: u64 = 1_000_000_000;

/// Dilates with at most this many bounding-box points are counted exactly.
pub const ENUMERATION_LIMIT: f64 = 1e7;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundInputs {
    pub epsilon: f64,
    pub r: u32,
    /// Largest coordinate width of the Newton polytope.
    pub c: u64,
    /// Upper bound on `#(Z^r ∩ m Delta) / m^r` over all `m`.
    pub d: f64,
}

impl BoundInputs {
    pub fn new(epsilon: f64, r: u32, c: u64, d: f64) -> Result<Self> {
        if !(epsilon > 0.0) || !epsilon.is_finite() {
            return Err(Error::InvalidArgument(format!("epsilon must be positive, got {epsilon}")));
        }
        if r == 0 {
            return Err(Error::InvalidArgument("r must be positive".into()));
        }
        if c == 0 {
            return Err(Error::InvalidArgument("c must be positive".into()));
        }
        if !(d > 0.0) || !d.is_finite() {
            return Err(Error::InvalidArgument(format!("d must be positive, got {d}")));
        }
        Ok(Self { epsilon, r, c, d })
    }

    /// Inputs derived from a Newton polytope, with `d` from [`density_bound`].
    pub fn from_polytope(epsilon: f64, p: &NewtonPolytope) -> Result<Self> {
        let c = p.max_width();
        if c == 0 {
            return Err(Error::Monomial);
        }
        Self::new(epsilon, p.dim() as u32, c as u64, density_bound(p))
    }
}

/// `#(Z^r ∩ m P) / m^r`, counted exactly when the dilate's bounding box is
/// small enough, otherwise bounded by the box count when `fallback` is set.
pub fn lattice_count_bound(p: &NewtonPolytope, m: u64, fallback: bool) -> Result<f64> {
    if m == 0 {
        return Err(Error::InvalidArgument("m must be positive".into()));
    }
    let m_i = m as i64;
    let scale = (m as f64).powi(p.dim() as i32);
    match p.lattice_points_dilated(m_i, ENUMERATION_LIMIT) {
        Ok(points) => Ok(points.len() as f64 / scale),
        Err(Error::EnumerationOverflow { .. }) if fallback => Ok(p.box_count(m_i) / scale),
        Err(e) => Err(e),
    }
}

/// A value of `d(Delta)` valid for every dilate.
///
/// In dimension at most two the count at `m = 1` dominates all later ratios
/// (Ehrhart coefficients of lattice polygons are non-negative); in higher
/// dimensions the bounding box `prod (w_i + 1)` is used.
pub fn density_bound(p: &NewtonPolytope) -> f64 {
    if p.dim() <= 2 {
        if let Ok(d) = lattice_count_bound(p, 1, false) {
            return d;
        }
    }
    p.box_count(1)
}

/// Smallest `n >= 1` with `holds(n)`, where `holds(n)` is `g(n) >= 0` for a
/// convex `g`. Past `n = 1` the satisfying set is an up-ray, so galloping
/// followed by bisection finds the same `n` as a linear scan.
fn scan(holds: impl Fn(f64) -> bool) -> Result<u64> {
    if holds(1.0) {
        return Ok(1);
    }
    let mut lo = 1u64;
    let mut hi = 2u64;
    while !holds(hi as f64) {
        if hi >= SCAN_CAP {
            return Err(Error::BoundCapExceeded { cap: SCAN_CAP });
        }
        lo = hi;
        hi = (hi * 2).min(SCAN_CAP);
    }
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if holds(mid as f64) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(hi)
}

/// Smallest `n` with `n eps >= (r-1) log n + log((r+3) 2^(r+1) c)`.
pub fn lopsided_bound_n(inp: &BoundInputs) -> Result<u64> {
    let r = inp.r as f64;
    let k = r - 1.0;
    let constant = ((r + 3.0) * 2f64.powf(r + 1.0) * inp.c as f64).ln();
    scan(|n| n * inp.epsilon >= k * n.ln() + constant)
}

/// Smallest `n` with `n eps >= (r^2-1) log n + log(16/3 c d)`.
pub fn superlopsided_bound_n(inp: &BoundInputs) -> Result<u64> {
    let r = inp.r as f64;
    let k = r * r - 1.0;
    let constant = (16.0 / 3.0 * inp.c as f64 * inp.d).ln();
    scan(|n| n * inp.epsilon >= k * n.ln() + constant)
}

/// Smallest `n` with `n log(1/gamma) >= (D0+D1) log n + log(8/3 c0 c1)`.
pub fn onevar_bound_n(gamma: f64, c0: u64, d0: u32, c1: u64, d1: u32) -> Result<u64> {
    if !(gamma > 0.0 && gamma < 1.0) {
        return Err(Error::InvalidArgument(format!("gamma must lie in (0,1), got {gamma}")));
    }
    let rate = -gamma.ln();
    let k = (d0 + d1) as f64;
    let constant = (8.0 / 3.0 * c0 as f64 * c1 as f64).ln();
    scan(|n| n * rate >= k * n.ln() + constant)
}

/// Elementary inequalities behind the convergence estimates, evaluated
/// numerically.
pub mod inequalities {
    /// Hypothesis shared by the one-variable estimates.
    pub fn onevar_hypothesis(n: u64, gamma: f64, c0: f64, d0: u32, c1: f64, d1: u32) -> bool {
        let n = n as f64;
        n * -gamma.ln() >= (d0 + d1) as f64 * n.ln() + (8.0 / 3.0 * c0 * c1).ln()
    }

    /// `(c1 n^D1 ((1+gamma^n)^(c0 n^D0) - 1), (1+gamma^n)^(c0 n^D0))`.
    pub fn onevar_conclusions(n: u64, gamma: f64, c0: f64, d0: u32, c1: f64, d1: u32) -> (f64, f64) {
        let nf = n as f64;
        let m0 = c0 * nf.powi(d0 as i32);
        let m1 = c1 * nf.powi(d1 as i32);
        let log_power = m0 * gamma.powf(nf).ln_1p();
        (m1 * log_power.exp_m1(), log_power.exp())
    }

    pub fn lopsided_hypothesis(r: u32, n: u64, gamma: f64, c: f64) -> bool {
        let (rf, nf) = (r as f64, n as f64);
        nf * -gamma.ln() >= (rf - 1.0) * nf.ln() + ((rf + 3.0) * 2f64.powf(rf + 1.0) * c).ln()
    }

    /// `(e^((r+2) c n^(r-1) gamma^n) - 1) / (2 - e^(c n^(r-1) gamma^n))`.
    pub fn lopsided_ratio(r: u32, n: u64, gamma: f64, c: f64) -> f64 {
        let nf = n as f64;
        let t = c * nf.powi(r as i32 - 1) * gamma.powf(nf);
        ((r as f64 + 2.0) * t).exp_m1() / (2.0 - t.exp())
    }

    /// Upper bound on `sum_{w0>=1} C(w0+s-1, s-1) sum_{w>=w0} x^w/w!`:
    /// a truncation plus a geometric bound on everything dropped.
    pub fn exp_derivative_sum_upper(x: f64, s: u32) -> f64 {
        assert!(x > 0.0 && x.is_finite() && s >= 1);
        let mut total = 0.0;
        let mut binom = 1.0; // C(w0+s-1, s-1) at w0 = 0
        let mut lead = 1.0; // x^w0 / w0!
        let mut w0 = 0u32;
        loop {
            w0 += 1;
            binom *= (w0 + s - 1) as f64 / w0 as f64;
            lead *= x / w0 as f64;
            let inner = exp_tail(x, w0, lead);
            let term = binom * inner;
            total += term;
            // every later outer term shrinks by at least a factor q
            let q = (w0 + s) as f64 / (w0 + 1) as f64 * x / (w0 + 1) as f64 / (1.0 - x / (w0 + 2) as f64);
            if q < 0.5 && term <= 1e-18 * total {
                return total + term * q / (1.0 - q);
            }
        }
    }

    /// Upper bound on `sum_{w>=w0} x^w/w!` given `lead = x^w0/w0!`.
    fn exp_tail(x: f64, w0: u32, lead: f64) -> f64 {
        let mut sum = lead;
        let mut t = lead;
        let mut w = w0;
        loop {
            w += 1;
            t *= x / w as f64;
            sum += t;
            let q = x / (w + 1) as f64;
            if q < 0.5 && t <= 1e-18 * sum {
                return sum + t * q / (1.0 - q);
            }
        }
    }

    pub fn exp_derivative_rhs(x: f64, s: u32) -> f64 {
        ((s as f64 + 1.0) * x).exp_m1()
    }
}
