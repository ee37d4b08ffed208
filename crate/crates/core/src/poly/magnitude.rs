use super::{ExponentVector, LaurentPolynomial};
use crate::error::{Error, Result};

/// Relative size of the log-domain rounding allowance carried with every
/// magnitude list. Log magnitudes are f64, so comparisons closer than this
/// are treated as ties.
pub(crate) const LOG_ROUNDING_REL: f64 = 1e-12;

/// The list `f{a}`: one `(exponent, log|m_j(a)|)` entry per term, in
/// canonical exponent order.
#[derive(Debug, Clone, PartialEq)]
pub struct MagnitudeList {
    entries: Vec<(ExponentVector, f64)>,
    rounding: f64,
}

impl MagnitudeList {
    /// Wraps precomputed log magnitudes.
    pub fn from_log_magnitudes(entries: Vec<(ExponentVector, f64)>) -> Self {
        let scale = entries.iter().map(|(_, l)| l.abs()).fold(0.0, f64::max);
        Self { entries, rounding: LOG_ROUNDING_REL * (1.0 + scale) }
    }

    /// Builds a list from positive reals; entry `i` gets exponent `[i]`.
    pub fn from_magnitudes(values: &[f64]) -> Self {
        Self::from_log_magnitudes(
            values
                .iter()
                .enumerate()
                .map(|(i, v)| (ExponentVector::new(vec![i as i64]), v.ln()))
                .collect(),
        )
    }

    pub fn entries(&self) -> &[(ExponentVector, f64)] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Absolute bound on the log-domain rounding error of the entries.
    pub fn rounding_bound(&self) -> f64 {
        self.rounding
    }

    pub fn log_magnitudes(&self) -> impl Iterator<Item = f64> + '_ {
        self.entries.iter().map(|(_, l)| *l)
    }
}

/// Caches `log|b_j|` for each term so `f{a}` can be produced cheaply at many
/// points.
#[derive(Debug, Clone)]
pub struct MagnitudeEvaluator {
    nvars: usize,
    terms: Vec<(ExponentVector, f64)>,
}

impl MagnitudeEvaluator {
    pub fn new(f: &LaurentPolynomial) -> Result<Self> {
        f.require_nonzero()?;
        Ok(Self {
            nvars: f.nvars(),
            terms: f.terms().map(|(e, c)| (e.clone(), c.ln_abs())).collect(),
        })
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn log_coefficients(&self) -> &[(ExponentVector, f64)] {
        &self.terms
    }

    pub fn at(&self, a: &[f64]) -> Result<MagnitudeList> {
        if a.len() != self.nvars {
            return Err(Error::DimensionMismatch { expected: self.nvars, found: a.len() });
        }
        let mut scale = 0.0f64;
        let entries = self
            .terms
            .iter()
            .map(|(e, lc)| {
                scale = scale.max(lc.abs() + e.abs_dot(a));
                (e.clone(), lc + e.dot(a))
            })
            .collect();
        Ok(MagnitudeList { entries, rounding: LOG_ROUNDING_REL * (1.0 + scale) })
    }
}
