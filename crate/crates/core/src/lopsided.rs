//! Lopsidedness and superlopsidedness of magnitude lists, and the induced
//! outer approximations `LA_f` and `SA_f` of an amoeba.
//!
//! A list of positive numbers is lopsided when one entry exceeds the sum of
//! the others, and `d'`-superlopsided when one entry exceeds `d'` times each
//! other entry. Both tests work on log magnitudes. Ties (gaps within the
//! slack plus the list's rounding bound) never count as lopsided, so a
//! positive verdict always certifies that the point lies outside the amoeba.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly::{ExponentVector, LaurentPolynomial, MagnitudeList};

/// Margin reported for single-entry lists, which are trivially lopsided.
pub const SINGLE_TERM_MARGIN: f64 = f64::MAX;

/// Default log-domain slack `2^{-(precision/2)}`.
pub fn default_slack(precision_bits: u32) -> f64 {
    2f64.powi(-((precision_bits / 2) as i32))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LopsidedVerdict {
    pub lopsided: bool,
    pub dominant_exponent: Option<ExponentVector>,
    /// Log-domain gap by which the dominant entry wins; non-positive when
    /// the list is not lopsided.
    pub margin: f64,
}

impl LopsidedVerdict {
    fn from_gap(gap: f64, threshold: f64, dominant: &ExponentVector) -> Self {
        if gap > threshold {
            Self { lopsided: true, dominant_exponent: Some(dominant.clone()), margin: gap }
        } else {
            Self { lopsided: false, dominant_exponent: None, margin: gap.min(0.0) }
        }
    }
}

/// Numerically stable `log(sum exp(x_i))`; `-inf` for an empty input.
pub fn log_sum_exp<I: IntoIterator<Item = f64>>(values: I) -> f64 {
    let values: Vec<f64> = values.into_iter().collect();
    let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if max == f64::NEG_INFINITY {
        return max;
    }
    max + values.iter().map(|v| (v - max).exp()).sum::<f64>().ln()
}

fn argmax(list: &MagnitudeList) -> usize {
    let mut best = 0;
    for (i, (_, l)) in list.entries().iter().enumerate() {
        if *l > list.entries()[best].1 {
            best = i;
        }
    }
    best
}

/// Whether one entry exceeds the sum of the others by more than `slack`
/// (log domain).
pub fn is_lopsided(list: &MagnitudeList, slack: f64) -> Result<LopsidedVerdict> {
    if list.is_empty() {
        return Err(Error::EmptyList);
    }
    let entries = list.entries();
    let top = argmax(list);
    if entries.len() == 1 {
        return Ok(LopsidedVerdict {
            lopsided: true,
            dominant_exponent: Some(entries[0].0.clone()),
            margin: SINGLE_TERM_MARGIN,
        });
    }
    let rest = log_sum_exp(entries.iter().enumerate().filter(|&(i, _)| i != top).map(|(_, (_, l))| *l));
    let gap = entries[top].1 - rest;
    Ok(LopsidedVerdict::from_gap(gap, slack + list.rounding_bound(), &entries[top].0))
}

/// Whether one entry exceeds `d_prime` times every other entry by more than
/// `slack` (log domain).
pub fn is_superlopsided(list: &MagnitudeList, d_prime: f64, slack: f64) -> Result<LopsidedVerdict> {
    if list.is_empty() {
        return Err(Error::EmptyList);
    }
    if !(d_prime >= 1.0) {
        return Err(Error::InvalidArgument(format!("d' must be at least 1, got {d_prime}")));
    }
    let entries = list.entries();
    let top = argmax(list);
    if entries.len() == 1 {
        return Ok(LopsidedVerdict {
            lopsided: true,
            dominant_exponent: Some(entries[0].0.clone()),
            margin: SINGLE_TERM_MARGIN,
        });
    }
    let second = entries
        .iter()
        .enumerate()
        .filter(|&(i, _)| i != top)
        .map(|(_, (_, l))| *l)
        .fold(f64::NEG_INFINITY, f64::max);
    let gap = entries[top].1 - second - d_prime.ln();
    Ok(LopsidedVerdict::from_gap(gap, slack + list.rounding_bound(), &entries[top].0))
}

/// The default `d'` for a list of `len` entries: one less than the length,
/// and never below 2.
pub fn default_d_prime(len: usize) -> f64 {
    len.saturating_sub(1).max(2) as f64
}

#[derive(Debug, Clone, PartialEq)]
pub enum LaMembership {
    InsideLA,
    OutsideLA(LopsidedVerdict),
}

#[derive(Debug, Clone, PartialEq)]
pub enum SaMembership {
    InsideSA,
    OutsideSA(LopsidedVerdict),
}

/// Membership of `a` in `LA_f`. `OutsideLA` certifies `a` is not in the
/// amoeba; `InsideLA` only means no certificate was found.
pub fn la_membership(f: &LaurentPolynomial, a: &[f64], slack: f64) -> Result<LaMembership> {
    let verdict = is_lopsided(&f.magnitude_list(a)?, slack)?;
    Ok(if verdict.lopsided { LaMembership::OutsideLA(verdict) } else { LaMembership::InsideLA })
}

/// Membership of `a` in `SA_f` with `d' = max(2, #terms - 1)`.
pub fn sa_membership(f: &LaurentPolynomial, a: &[f64], slack: f64) -> Result<SaMembership> {
    let list = f.magnitude_list(a)?;
    let verdict = is_superlopsided(&list, default_d_prime(list.len()), slack)?;
    Ok(if verdict.lopsided { SaMembership::OutsideSA(verdict) } else { SaMembership::InsideSA })
}
