//! Cyclic resultants `Res_n[f]` and `Res_{n_1,...,n_r}[f]` as expanded
//! products of rotated copies of `f`.
//!
//! The product is taken one variable at a time: rotating variable `i` by all
//! `n_i`-th roots of unity and multiplying leaves only exponents divisible by
//! `n_i` in that variable. Roots of unity are rounded, so each stage ends
//! with a health check that removes the numerically vanishing coefficients at
//! non-divisible exponents and fails if any of them is not small compared
//! with the product of absolute values.

use rayon::prelude::*;
use rug::Float;
use serde::{Deserialize, Serialize};

use crate::bounds::density_bound;
use crate::error::{Error, Result};
use crate::poly::{newton_polytope, Coefficient, ExponentVector, LaurentPolynomial};

pub const DEFAULT_TERM_CAP: f64 = 1e7;

/// Bits of headroom between the working precision and the noise threshold.
const NOISE_HEADROOM_BITS: u32 = 24;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResultantOptions {
    /// Refuse products whose predicted term count exceeds this.
    pub term_cap: f64,
}

impl Default for ResultantOptions {
    fn default() -> Self {
        Self { term_cap: DEFAULT_TERM_CAP }
    }
}

/// Outcome of the divisibility health check.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultantHealth {
    /// Coefficients removed at non-divisible exponents.
    pub removed_terms: usize,
    /// Largest `log2(|c| / scale)` among removed coefficients, where `scale`
    /// is the matching coefficient of the product of absolute values.
    pub max_removed_log2_ratio: f64,
    /// Removal threshold in the same units.
    pub threshold_log2: f64,
}

/// `Res_n[f]`.
pub fn cyclic_resultant(f: &LaurentPolynomial, n: u64) -> Result<LaurentPolynomial> {
    cyclic_resultant_with_health(f, n, &ResultantOptions::default()).map(|(p, _)| p)
}

pub fn cyclic_resultant_with_health(
    f: &LaurentPolynomial,
    n: u64,
    opts: &ResultantOptions,
) -> Result<(LaurentPolynomial, ResultantHealth)> {
    f.require_nonzero()?;
    if n == 0 {
        return Err(Error::InvalidArgument("n must be positive".into()));
    }
    let r = f.nvars() as i32;
    let predicted = density_bound(&newton_polytope(f)?) * (n as f64).powi(r * r - r);
    if predicted > opts.term_cap {
        return Err(Error::BudgetExceeded { n, predicted, cap: opts.term_cap });
    }
    staged_product(f, &vec![n; f.nvars()], opts)
}

/// Predicted number of terms of `Res_n[f]`: `d(Delta) n^(r^2 - r)`.
pub fn predicted_terms(f: &LaurentPolynomial, n: u64) -> Result<f64> {
    let r = f.nvars() as i32;
    Ok(density_bound(&newton_polytope(f)?) * (n as f64).powi(r * r - r))
}

/// `Res_{n_1,...,n_r}[f]`.
pub fn general_cyclic_resultant(f: &LaurentPolynomial, ns: &[u64]) -> Result<LaurentPolynomial> {
    general_cyclic_resultant_with_health(f, ns, &ResultantOptions::default()).map(|(p, _)| p)
}

pub fn general_cyclic_resultant_with_health(
    f: &LaurentPolynomial,
    ns: &[u64],
    opts: &ResultantOptions,
) -> Result<(LaurentPolynomial, ResultantHealth)> {
    f.require_nonzero()?;
    if ns.len() != f.nvars() {
        return Err(Error::DimensionMismatch { expected: f.nvars(), found: ns.len() });
    }
    if ns.contains(&0) {
        return Err(Error::InvalidArgument("every n_i must be positive".into()));
    }
    staged_product(f, ns, opts)
}

/// Bounding-box term estimate after the stages for variables `< done`.
fn stage_box(widths: &[i64], ns: &[u64], done: usize) -> f64 {
    let total: f64 = ns[..done].iter().map(|&n| n as f64).product();
    widths
        .iter()
        .enumerate()
        .map(|(i, &w)| {
            let span = w as f64 * total;
            if i < done {
                span / ns[i] as f64 + 1.0
            } else {
                span + 1.0
            }
        })
        .product()
}

fn staged_product(
    f: &LaurentPolynomial,
    ns: &[u64],
    opts: &ResultantOptions,
) -> Result<(LaurentPolynomial, ResultantHealth)> {
    let widths = newton_polytope(f)?.widths().to_vec();
    for done in 1..=ns.len() {
        let predicted = stage_box(&widths, ns, done);
        if predicted > opts.term_cap {
            let n = ns.iter().copied().max().unwrap_or(1);
            return Err(Error::BudgetExceeded { n, predicted, cap: opts.term_cap });
        }
    }
    let prec = f.precision();
    let threshold_log2 = -((prec - NOISE_HEADROOM_BITS.min(prec / 2)) as f64);
    let mut health =
        ResultantHealth { removed_terms: 0, max_removed_log2_ratio: f64::NEG_INFINITY, threshold_log2 };
    let mut g = f.clone();
    let mut scale = absolute(f);
    for (var, &n) in ns.iter().enumerate() {
        if n == 1 {
            continue;
        }
        let table: Vec<Coefficient> = (0..n).map(|k| Coefficient::root_of_unity(k, n, prec)).collect();
        let copies: Vec<LaurentPolynomial> =
            (0..n).into_par_iter().map(|k| rotate_variable(&g, var, k, &table)).collect::<Result<_>>()?;
        let product = product_tree(&copies)?;
        scale = power(&scale, n)?;
        g = filter_stage(product, &scale, var, n as i64, &mut health)?;
    }
    Ok((g, health))
}

/// `g` with `z_var` replaced by `omega^k z_var`, `omega = exp(2 pi i / n)`.
fn rotate_variable(g: &LaurentPolynomial, var: usize, k: u64, table: &[Coefficient]) -> Result<LaurentPolynomial> {
    let n = table.len() as i64;
    let terms = g.terms().map(|(e, c)| {
        let idx = (e[var] * k as i64).rem_euclid(n) as usize;
        let c = if idx == 0 { c.clone() } else { c.mul(&table[idx]) };
        (e.clone(), c)
    });
    LaurentPolynomial::from_terms(g.nvars(), g.precision(), terms)
}

fn product_tree(factors: &[LaurentPolynomial]) -> Result<LaurentPolynomial> {
    match factors.len() {
        0 => unreachable!("empty product"),
        1 => Ok(factors[0].clone()),
        len => {
            let (left, right) = factors.split_at(len / 2);
            let (a, b) = rayon::join(|| product_tree(left), || product_tree(right));
            a?.multiply(&b?)
        }
    }
}

/// Polynomial of coefficient absolute values, at low precision.
fn absolute(f: &LaurentPolynomial) -> LaurentPolynomial {
    let prec = crate::poly::MIN_PRECISION_BITS;
    LaurentPolynomial::from_terms(
        f.nvars(),
        prec,
        f.terms().map(|(e, c)| (e.clone(), Coefficient::from_floats(Float::with_val(prec, c.abs()), Float::new(prec)))),
    )
    .expect("valid polynomial")
}

fn power(p: &LaurentPolynomial, mut k: u64) -> Result<LaurentPolynomial> {
    let mut base = p.clone();
    let mut acc: Option<LaurentPolynomial> = None;
    while k > 0 {
        if k & 1 == 1 {
            acc = Some(match acc {
                None => base.clone(),
                Some(a) => a.multiply(&base)?,
            });
        }
        k >>= 1;
        if k > 0 {
            base = base.multiply(&base)?;
        }
    }
    Ok(acc.expect("positive exponent"))
}

fn filter_stage(
    product: LaurentPolynomial,
    scale: &LaurentPolynomial,
    var: usize,
    n: i64,
    health: &mut ResultantHealth,
) -> Result<LaurentPolynomial> {
    let mut kept: Vec<(ExponentVector, Coefficient)> = Vec::with_capacity(product.len() / n as usize + 1);
    for (e, c) in product.terms() {
        if e[var].rem_euclid(n) == 0 {
            kept.push((e.clone(), c.clone()));
            continue;
        }
        let s = scale.coefficient(e).map(|s| s.ln_abs()).unwrap_or(f64::NEG_INFINITY);
        let log2_ratio = (c.ln_abs() - s) / std::f64::consts::LN_2;
        if !(log2_ratio <= health.threshold_log2) {
            return Err(Error::PrecisionExhausted { exponent: e.to_vec(), log2_ratio: log2_ratio - health.threshold_log2 });
        }
        health.removed_terms += 1;
        health.max_removed_log2_ratio = health.max_removed_log2_ratio.max(log2_ratio);
    }
    LaurentPolynomial::from_terms(product.nvars(), product.precision(), kept)
}
