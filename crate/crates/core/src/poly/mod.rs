//! Sparse multivariate Laurent polynomials with arbitrary-precision complex
//! coefficients.
//!
//! Terms are kept in a `BTreeMap` keyed by exponent vector, so iteration is
//! always in lexicographic exponent order and serialization is canonical.
//! Zero coefficients are never stored.

mod coeff;
mod json;
mod magnitude;
mod polytope;

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::Deref;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

pub use coeff::{Coefficient, DEFAULT_PRECISION_BITS, MIN_PRECISION_BITS};
pub use json::{PolynomialJson, TermJson};
pub use magnitude::{MagnitudeEvaluator, MagnitudeList};
pub use polytope::{newton_polytope, NewtonPolytope};

use crate::error::{Error, Result};

/// Integer exponent vector of a Laurent monomial. Ordered lexicographically.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ExponentVector(Vec<i64>);

impl ExponentVector {
    pub fn new(entries: Vec<i64>) -> Self {
        Self(entries)
    }

    pub fn zeros(r: usize) -> Self {
        Self(vec![0; r])
    }

    pub fn into_inner(self) -> Vec<i64> {
        self.0
    }

    pub fn dot(&self, x: &[f64]) -> f64 {
        self.0.iter().zip(x).map(|(&j, &xi)| j as f64 * xi).sum()
    }

    /// `sum_i |j_i x_i|`, used to bound rounding in `dot`.
    pub fn abs_dot(&self, x: &[f64]) -> f64 {
        self.0.iter().zip(x).map(|(&j, &xi)| (j as f64 * xi).abs()).sum()
    }

    pub fn scaled(&self, factor: i64) -> Self {
        Self(self.0.iter().map(|&j| j * factor).collect())
    }

    pub fn add(&self, other: &Self) -> Self {
        Self(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn neg(&self) -> Self {
        Self(self.0.iter().map(|&a| -a).collect())
    }
}

impl Deref for ExponentVector {
    type Target = [i64];

    fn deref(&self) -> &[i64] {
        &self.0
    }
}

impl From<Vec<i64>> for ExponentVector {
    fn from(v: Vec<i64>) -> Self {
        Self(v)
    }
}

impl From<&[i64]> for ExponentVector {
    fn from(v: &[i64]) -> Self {
        Self(v.to_vec())
    }
}

impl fmt::Debug for ExponentVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

/// A Laurent polynomial in `r` variables over arbitrary-precision complex
/// numbers.
#[derive(Clone, PartialEq)]
pub struct LaurentPolynomial {
    nvars: usize,
    precision: u32,
    terms: BTreeMap<ExponentVector, Coefficient>,
}

impl LaurentPolynomial {
    pub fn zero(nvars: usize, precision: u32) -> Self {
        Self { nvars, precision, terms: BTreeMap::new() }
    }

    pub fn one(nvars: usize, precision: u32) -> Self {
        Self::monomial(ExponentVector::zeros(nvars), Coefficient::one(precision))
    }

    pub fn monomial(exp: ExponentVector, coeff: Coefficient) -> Self {
        let precision = coeff.precision();
        let mut p = Self::zero(exp.len(), precision);
        if !coeff.is_zero() {
            p.terms.insert(exp, coeff);
        }
        p
    }

    /// Builds a polynomial from `(exponent, coefficient)` pairs. Duplicate
    /// exponents are summed and zero results pruned.
    pub fn from_terms<I>(nvars: usize, precision: u32, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (ExponentVector, Coefficient)>,
    {
        if nvars == 0 {
            return Err(Error::InvalidArgument("number of variables must be positive".into()));
        }
        if precision < MIN_PRECISION_BITS {
            return Err(Error::InvalidArgument(format!(
                "precision {precision} is below the minimum of {MIN_PRECISION_BITS} bits"
            )));
        }
        let mut acc: BTreeMap<ExponentVector, Coefficient> = BTreeMap::new();
        for (exp, c) in terms {
            if exp.len() != nvars {
                return Err(Error::DimensionMismatch { expected: nvars, found: exp.len() });
            }
            let c = Coefficient::from_floats(
                rug::Float::with_val(precision, c.re()),
                rug::Float::with_val(precision, c.im()),
            );
            match acc.get_mut(&exp) {
                Some(existing) => *existing = existing.add(&c),
                None => {
                    acc.insert(exp, c);
                }
            }
        }
        acc.retain(|_, c| !c.is_zero());
        Ok(Self { nvars, precision, terms: acc })
    }

    /// Shorthand for real or complex f64 coefficients, mainly for tests and
    /// examples.
    pub fn from_f64_terms(nvars: usize, precision: u32, terms: &[(&[i64], f64, f64)]) -> Result<Self> {
        Self::from_terms(
            nvars,
            precision,
            terms
                .iter()
                .map(|(e, re, im)| (ExponentVector::from(*e), Coefficient::from_f64(*re, *im, precision))),
        )
    }

    /// Monic univariate polynomial with the given roots.
    pub fn from_roots(roots: &[Complex64], precision: u32) -> Self {
        let mut p = Self::one(1, precision);
        for root in roots {
            let factor = Self::from_terms(
                1,
                precision,
                [
                    (ExponentVector::new(vec![0]), Coefficient::from_f64(-root.re, -root.im, precision)),
                    (ExponentVector::new(vec![1]), Coefficient::one(precision)),
                ],
            )
            .expect("valid factor");
            p = p.multiply(&factor).expect("same dimension");
        }
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn precision(&self) -> u32 {
        self.precision
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_monomial(&self) -> bool {
        self.terms.len() == 1
    }

    pub fn terms(&self) -> impl Iterator<Item = (&ExponentVector, &Coefficient)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, exp: &[i64]) -> Option<&Coefficient> {
        self.terms.get(&ExponentVector::from(exp))
    }

    pub fn exponents(&self) -> impl Iterator<Item = &ExponentVector> {
        self.terms.keys()
    }

    /// Same polynomial re-rounded to a different working precision.
    pub fn with_precision(&self, precision: u32) -> Self {
        Self::from_terms(self.nvars, precision, self.terms.iter().map(|(e, c)| (e.clone(), c.clone())))
            .expect("valid polynomial")
    }

    pub(crate) fn require_nonzero(&self) -> Result<()> {
        if self.is_zero() {
            Err(Error::ZeroPolynomial)
        } else {
            Ok(())
        }
    }

    fn check_same_dim(&self, other: &Self) -> Result<()> {
        if self.nvars != other.nvars {
            return Err(Error::DimensionMismatch { expected: self.nvars, found: other.nvars });
        }
        Ok(())
    }

    /// Exact sparse convolution at the larger of the two working precisions.
    pub fn multiply(&self, other: &Self) -> Result<Self> {
        self.check_same_dim(other)?;
        let precision = self.precision.max(other.precision);
        let mut acc: HashMap<ExponentVector, Coefficient> = HashMap::new();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                acc.entry(ea.add(eb))
                    .or_insert_with(|| Coefficient::zero(precision))
                    .add_product(ca, cb);
            }
        }
        let mut terms: BTreeMap<_, _> = acc.into_iter().collect();
        terms.retain(|_, c| !c.is_zero());
        Ok(Self { nvars: self.nvars, precision, terms })
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same_dim(other)?;
        let precision = self.precision.max(other.precision);
        Self::from_terms(
            self.nvars,
            precision,
            self.terms.iter().chain(other.terms.iter()).map(|(e, c)| (e.clone(), c.clone())),
        )
    }

    /// `f(phi_1 z_1, ..., phi_r z_r)` for unit complex phases.
    pub fn rotate(&self, phases: &[Coefficient]) -> Result<Self> {
        if phases.len() != self.nvars {
            return Err(Error::DimensionMismatch { expected: self.nvars, found: phases.len() });
        }
        let tol = 2f64.powi(-(self.precision.min(1000) as i32 - 8));
        for (index, phi) in phases.iter().enumerate() {
            let modulus = phi.abs().to_f64();
            if (modulus - 1.0).abs() > tol.max(f64::EPSILON * 4.0) {
                return Err(Error::NonUnitPhase { index, modulus });
            }
        }
        let terms = self.terms.iter().map(|(e, c)| {
            let factor = e
                .iter()
                .zip(phases)
                .filter(|(&j, _)| j != 0)
                .fold(Coefficient::one(self.precision), |acc, (&j, phi)| acc.mul(&phi.powi(j)));
            (e.clone(), c.mul(&factor))
        });
        Self::from_terms(self.nvars, self.precision, terms)
    }

    /// The list `f{a}` of term log-magnitudes at `a`.
    pub fn magnitude_list(&self, a: &[f64]) -> Result<MagnitudeList> {
        MagnitudeEvaluator::new(self)?.at(a)
    }

    /// Evaluates at a point of `(C^*)^r` at working precision.
    pub fn evaluate(&self, z: &[Coefficient]) -> Result<Coefficient> {
        if z.len() != self.nvars {
            return Err(Error::DimensionMismatch { expected: self.nvars, found: z.len() });
        }
        let mut sum = Coefficient::zero(self.precision);
        for (e, c) in &self.terms {
            let mono = e
                .iter()
                .zip(z)
                .fold(Coefficient::one(self.precision), |acc, (&j, zi)| acc.mul(&zi.powi(j)));
            sum.add_product(c, &mono);
        }
        Ok(sum)
    }

    pub fn evaluate_c64(&self, z: &[Complex64]) -> Result<Complex64> {
        let z: Vec<_> = z.iter().map(|w| Coefficient::from_f64(w.re, w.im, self.precision)).collect();
        Ok(self.evaluate(&z)?.to_complex64())
    }

    /// Minimum and maximum exponent of variable `i` over the support.
    pub fn degree_range(&self, i: usize) -> Option<(i64, i64)> {
        let mut it = self.terms.keys().map(|e| e[i]);
        let first = it.next()?;
        Some(it.fold((first, first), |(lo, hi), x| (lo.min(x), hi.max(x))))
    }

    /// Univariate coefficient list `c_0, c_1, ...` of `z^{-mindeg} f` as f64
    /// complex numbers, together with `mindeg`. Only for `r = 1`.
    pub fn univariate_coefficients(&self) -> Result<(i64, Vec<Complex64>)> {
        if self.nvars != 1 {
            return Err(Error::DimensionMismatch { expected: 1, found: self.nvars });
        }
        let (lo, hi) = self.degree_range(0).ok_or(Error::ZeroPolynomial)?;
        let mut coeffs = vec![Complex64::new(0.0, 0.0); (hi - lo + 1) as usize];
        for (e, c) in &self.terms {
            coeffs[(e[0] - lo) as usize] = c.to_complex64();
        }
        Ok((lo, coeffs))
    }
}

impl fmt::Debug for LaurentPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.terms.iter().map(|(e, c)| format!("{c:?}*z^{e:?}")).collect();
        write!(f, "{}", parts.join(" + "))
    }
}
