//! The polynomial interchange format:
//! `{"r": 2, "terms": [{"exp": [1, 0], "re": "1", "im": "0"}, ...]}`.

use serde::{Deserialize, Serialize};

use super::{Coefficient, ExponentVector, LaurentPolynomial};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TermJson {
    pub exp: Vec<i64>,
    pub re: String,
    pub im: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PolynomialJson {
    pub r: usize,
    pub terms: Vec<TermJson>,
}

impl PolynomialJson {
    pub fn from_polynomial(f: &LaurentPolynomial) -> Self {
        let terms = f
            .terms()
            .map(|(e, c)| {
                let (re, im) = c.component_strings();
                TermJson { exp: e.to_vec(), re, im }
            })
            .collect();
        Self { r: f.nvars(), terms }
    }

    pub fn to_polynomial(&self, precision: u32) -> Result<LaurentPolynomial> {
        let terms = self
            .terms
            .iter()
            .map(|t| Ok((ExponentVector::new(t.exp.clone()), Coefficient::parse(&t.re, &t.im, precision)?)))
            .collect::<Result<Vec<_>>>()?;
        LaurentPolynomial::from_terms(self.r, precision, terms)
    }
}

impl LaurentPolynomial {
    /// Parses the JSON interchange format at the given precision.
    pub fn parse_json(text: &str, precision: u32) -> Result<Self> {
        let raw: PolynomialJson =
            serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        raw.to_polynomial(precision)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&PolynomialJson::from_polynomial(self)).expect("serializable")
    }

    pub fn to_json_pretty(&self) -> String {
        serde_json::to_string_pretty(&PolynomialJson::from_polynomial(self)).expect("serializable")
    }
}
