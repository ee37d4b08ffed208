//! Tropical polynomials over `(max, +)`: tropicalization of valued
//! coefficients, tropical lopsidedness and hypersurface membership.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{default_tie_tol, spine_membership};
use crate::poly::ExponentVector;

pub use crate::geometry::TropicalPolynomial;

/// Polynomial over a valued field, given only by the valuations of its
/// coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct ValuedPolynomial {
    r: usize,
    terms: BTreeMap<ExponentVector, f64>,
}

#[derive(Serialize, Deserialize)]
struct ValuedTermJson {
    exp: Vec<i64>,
    val: f64,
}

#[derive(Serialize, Deserialize)]
struct ValuedJson {
    r: usize,
    terms: Vec<ValuedTermJson>,
}

impl ValuedPolynomial {
    pub fn new<I: IntoIterator<Item = (ExponentVector, f64)>>(r: usize, terms: I) -> Result<Self> {
        if r == 0 {
            return Err(Error::InvalidArgument("number of variables must be positive".into()));
        }
        let mut map = BTreeMap::new();
        for (e, v) in terms {
            if e.len() != r {
                return Err(Error::DimensionMismatch { expected: r, found: e.len() });
            }
            if !v.is_finite() {
                return Err(Error::InvalidArgument(format!("valuation {v} is not finite")));
            }
            if map.insert(e.clone(), v).is_some() {
                return Err(Error::InvalidArgument(format!("duplicate exponent {e:?}")));
            }
        }
        if map.is_empty() {
            return Err(Error::EmptyList);
        }
        Ok(Self { r, terms: map })
    }

    pub fn nvars(&self) -> usize {
        self.r
    }

    pub fn terms(&self) -> impl Iterator<Item = (&ExponentVector, f64)> {
        self.terms.iter().map(|(e, &v)| (e, v))
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let json: ValuedJson = serde_json::from_str(text)?;
        Self::new(json.r, json.terms.into_iter().map(|t| (ExponentVector::new(t.exp), t.val)))
    }

    pub fn to_json(&self) -> String {
        let json = ValuedJson {
            r: self.r,
            terms: self.terms.iter().map(|(e, &v)| ValuedTermJson { exp: e.to_vec(), val: v }).collect(),
        };
        serde_json::to_string(&json).expect("valued polynomial serializes")
    }
}

/// `f_tau(x) = max_k (v(b_k) + k . x)`.
pub fn tropicalize(vp: &ValuedPolynomial) -> TropicalPolynomial {
    TropicalPolynomial::new(vp.r, vp.terms.iter().map(|(e, &v)| (e.clone(), v))).expect("valued polynomial is valid")
}

/// Whether `x` lies on the tropical hypersurface of `t`.
pub fn tropical_membership(t: &TropicalPolynomial, x: &[f64], tie_tol: Option<f64>) -> bool {
    spine_membership(t, x, tie_tol)
}

/// Term weights `coeff_k + k . x`.
pub fn tropical_magnitude_list(t: &TropicalPolynomial, x: &[f64]) -> Vec<(ExponentVector, f64)> {
    t.weights(x)
}

/// A weight list is tropically lopsided when its maximum is attained once.
pub fn is_tropically_lopsided(weights: &[(ExponentVector, f64)], tie_tol: Option<f64>) -> Result<bool> {
    if weights.is_empty() {
        return Err(Error::EmptyList);
    }
    let max = weights.iter().map(|w| w.1).fold(f64::NEG_INFINITY, f64::max);
    let tol = tie_tol.unwrap_or_else(|| default_tie_tol(max));
    Ok(weights.iter().filter(|w| w.1 >= max - tol).count() == 1)
}

/// Points of the tropical hypersurface of a univariate tropical polynomial,
/// in increasing order.
pub fn breakpoints_1d(t: &TropicalPolynomial) -> Result<Vec<f64>> {
    if t.nvars() != 1 {
        return Err(Error::DimensionMismatch { expected: 1, found: t.nvars() });
    }
    let terms: Vec<(i64, f64)> = t.terms().map(|(e, c)| (e[0], c)).collect();
    let mut out: Vec<f64> = Vec::new();
    for (i, &(ki, ci)) in terms.iter().enumerate() {
        for &(kj, cj) in &terms[i + 1..] {
            let x = (ci - cj) / (kj - ki) as f64;
            let value = ci + ki as f64 * x;
            if (t.evaluate(&[x]) - value).abs() <= default_tie_tol(value) && !out.iter().any(|&y| (y - x).abs() <= 1e-12 * (1.0 + x.abs())) {
                out.push(x);
            }
        }
    }
    out.sort_by(f64::total_cmp);
    Ok(out)
}
