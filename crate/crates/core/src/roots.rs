//! Roots of univariate complex polynomials by Aberth-Ehrlich iteration.

use num_complex::Complex64;

use crate::error::{Error, Result};

const MAX_ITERATIONS: usize = 500;

/// All roots, with multiplicity, of `sum coeffs[i] z^i`. Leading zero
/// coefficients are dropped and zero roots from trailing zeros are returned
/// exactly.
pub fn polynomial_roots(coeffs: &[Complex64]) -> Result<Vec<Complex64>> {
    let hi = coeffs.iter().rposition(|c| *c != Complex64::new(0.0, 0.0)).ok_or(Error::ZeroPolynomial)?;
    let lo = coeffs.iter().position(|c| *c != Complex64::new(0.0, 0.0)).unwrap();
    let mut roots = vec![Complex64::new(0.0, 0.0); lo];
    let p: Vec<Complex64> = coeffs[lo..=hi].iter().map(|c| c / coeffs[hi]).collect();
    let deg = p.len() - 1;
    match deg {
        0 => {}
        1 => roots.push(-p[0]),
        _ => roots.extend(aberth(&p, deg)?),
    }
    Ok(roots)
}

/// Horner evaluation of `p` and `p'` at `z`.
fn eval_with_derivative(p: &[Complex64], z: Complex64) -> (Complex64, Complex64) {
    let mut v = Complex64::new(0.0, 0.0);
    let mut d = Complex64::new(0.0, 0.0);
    for c in p.iter().rev() {
        d = d * z + v;
        v = v * z + c;
    }
    (v, d)
}

fn reversed_eval_ratio(p: &[Complex64], z: Complex64) -> Complex64 {
    // p'(z)/p(z) for large |z| via the reversed polynomial in w = 1/z
    let deg = p.len() - 1;
    let w = z.inv();
    let rev: Vec<Complex64> = p.iter().rev().copied().collect();
    let (q, dq) = eval_with_derivative(&rev, w);
    // p(z) = z^deg q(w); p'/p = deg/z - w^2 q'(w)/q(w)
    (deg as f64) * w - w * w * dq / q
}

/// Newton correction `p(z)/p'(z)`, evaluated through the reversed
/// polynomial outside the unit disc to avoid overflow.
fn newton_ratio(p: &[Complex64], z: Complex64) -> Option<Complex64> {
    let ratio = if z.norm() <= 1.0 {
        let (v, d) = eval_with_derivative(p, z);
        if v == Complex64::new(0.0, 0.0) {
            return Some(v);
        }
        v / d
    } else {
        reversed_eval_ratio(p, z).inv()
    };
    ratio.is_finite().then_some(ratio)
}

fn aberth(p: &[Complex64], deg: usize) -> Result<Vec<Complex64>> {
    // Initial radii from the Cauchy-type bound on root moduli
    let scale = (0..deg)
        .map(|i| p[i].norm().powf(1.0 / (deg - i) as f64))
        .fold(0.0f64, f64::max)
        .max(1e-300);
    let mut z: Vec<Complex64> = (0..deg)
        .map(|k| {
            let theta = 2.0 * std::f64::consts::PI * (k as f64 + 0.25) / deg as f64 + 0.4;
            Complex64::from_polar(scale, theta)
        })
        .collect();
    let mut converged = vec![false; deg];
    for _ in 0..MAX_ITERATIONS {
        for i in 0..deg {
            if converged[i] {
                continue;
            }
            let ratio = match newton_ratio(p, z[i]) {
                Some(r) => r,
                None => continue,
            };
            if ratio == Complex64::new(0.0, 0.0) {
                converged[i] = true;
                continue;
            }
            let repulsion: Complex64 = (0..deg).filter(|&j| j != i).map(|j| (z[i] - z[j]).inv()).sum();
            let step = ratio / (Complex64::new(1.0, 0.0) - ratio * repulsion);
            if !step.is_finite() {
                continue;
            }
            z[i] -= step;
            if step.norm() <= 4.0 * f64::EPSILON * z[i].norm().max(f64::MIN_POSITIVE) {
                converged[i] = true;
            }
        }
        if converged.iter().all(|&c| c) {
            return Ok(polish(p, z));
        }
    }
    // Clusters of multiple roots converge slowly; accept if residuals are small
    let tol = 1e-6;
    let ok = z.iter().all(|&w| {
        let (v, _) = eval_with_derivative(p, w);
        let bound: f64 = p.iter().enumerate().map(|(k, c)| c.norm() * w.norm().powi(k as i32)).sum();
        v.norm() <= tol * bound.max(1.0)
    });
    if ok {
        Ok(z)
    } else {
        Err(Error::RootFinding { degree: deg })
    }
}

fn polish(p: &[Complex64], mut z: Vec<Complex64>) -> Vec<Complex64> {
    for w in z.iter_mut() {
        for _ in 0..2 {
            let (v, d) = eval_with_derivative(p, *w);
            if d == Complex64::new(0.0, 0.0) {
                break;
            }
            let step = v / d;
            if !step.is_finite() || step.norm() > 1e-6 * w.norm().max(1e-300) {
                break;
            }
            *w -= step;
        }
    }
    z
}
