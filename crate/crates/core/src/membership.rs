//! Certified non-membership in hypersurface amoebas, the component index of
//! complement points, and root-finding oracles for one and two variables.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::bounds::{lopsided_bound_n, superlopsided_bound_n, BoundInputs};
use crate::error::{Error, Result};
use crate::lopsided::{default_d_prime, default_slack, is_lopsided, is_superlopsided, log_sum_exp, LopsidedVerdict};
use crate::poly::{newton_polytope, ExponentVector, LaurentPolynomial, MagnitudeList};
use crate::resultant::{cyclic_resultant_with_health, ResultantOptions};
use crate::roots::polynomial_roots;

/// Roots with `| |z| / e^a - 1 |` below this abort the index computation.
pub const ROOT_CIRCLE_TOL: f64 = 1e-6;

/// Slice coefficients below this fraction of the largest term count as
/// cancelled.
const CANCELLATION_TOL: f64 = 1e-12;

/// Number of independent fibre points the component index must agree on.
pub const INDEX_TRIALS: usize = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Lopsided,
    Superlopsided,
}

impl std::str::FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "lopsided" | "lop" => Ok(Mode::Lopsided),
            "superlopsided" | "super" => Ok(Mode::Superlopsided),
            other => Err(Error::InvalidArgument(format!("unknown mode {other:?}"))),
        }
    }
}

/// Independently checkable proof that `point` lies outside the amoeba.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub point: Vec<f64>,
    pub n: u64,
    pub mode: Mode,
    /// Exponent of the dominant term of `Res_n[f]`.
    pub dominant_exp: ExponentVector,
    pub margin: f64,
    pub epsilon: f64,
}

impl Certificate {
    /// Recomputes `Res_n[f]` and checks that it reproduces the verdict.
    pub fn verify(&self, f: &LaurentPolynomial, slack: f64) -> Result<bool> {
        let res = cyclic_resultant_with_health(f, self.n, &ResultantOptions::default())?.0;
        let verdict = test_list(&res.magnitude_list(&self.point)?, self.mode, slack)?;
        Ok(verdict.lopsided
            && verdict.dominant_exponent.as_ref() == Some(&self.dominant_exp)
            && verdict.margin >= self.margin)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("certificate serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }
}

/// Report of a failed certification attempt.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NotCertified {
    pub point: Vec<f64>,
    pub mode: Mode,
    pub epsilon: f64,
    /// Largest `n` tried.
    pub last_n: u64,
    /// The `n` guaranteed to suffice at distance `epsilon`.
    pub bound_n: u64,
    /// When set, failure at `bound_n` shows the point is within `epsilon`
    /// of the amoeba.
    pub reached_bound: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub enum CertifyOutcome {
    Certified(Certificate),
    NotCertified(NotCertified),
}

impl CertifyOutcome {
    pub fn certificate(&self) -> Option<&Certificate> {
        match self {
            CertifyOutcome::Certified(c) => Some(c),
            CertifyOutcome::NotCertified(_) => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CertifyOptions {
    pub mode: Mode,
    /// Test only this `n` instead of the automatic schedule.
    pub n_override: Option<u64>,
    /// Log-domain slack; defaults to `2^{-(precision/2)}`.
    pub slack: Option<f64>,
    pub resultant: ResultantOptions,
}

impl Default for CertifyOptions {
    fn default() -> Self {
        Self { mode: Mode::Superlopsided, n_override: None, slack: None, resultant: ResultantOptions::default() }
    }
}

impl CertifyOptions {
    pub fn with_mode(mode: Mode) -> Self {
        Self { mode, ..Self::default() }
    }
}

fn test_list(list: &MagnitudeList, mode: Mode, slack: f64) -> Result<LopsidedVerdict> {
    match mode {
        Mode::Lopsided => is_lopsided(list, slack),
        Mode::Superlopsided => is_superlopsided(list, default_d_prime(list.len()), slack),
    }
}

/// The `n` from the convergence bound for `f` at distance `epsilon`.
pub fn sufficient_n(f: &LaurentPolynomial, epsilon: f64, mode: Mode) -> Result<u64> {
    let inputs = BoundInputs::from_polytope(epsilon, &newton_polytope(f)?)?;
    match mode {
        Mode::Lopsided => lopsided_bound_n(&inputs),
        Mode::Superlopsided => superlopsided_bound_n(&inputs),
    }
}

/// The automatic schedule `1, 2, 4, ...` below `bound`, then `bound`.
pub fn doubling_schedule(bound: u64) -> Vec<u64> {
    let mut out: Vec<u64> = std::iter::successors(Some(1u64), |n| n.checked_mul(2)).take_while(|&n| n < bound).collect();
    out.push(bound);
    out
}

/// Tries to prove `a` is outside `A_f` by lopsidedness of `Res_n[f]{a}`.
pub fn certify_outside(f: &LaurentPolynomial, a: &[f64], epsilon: f64, opts: &CertifyOptions) -> Result<CertifyOutcome> {
    f.require_nonzero()?;
    if f.is_monomial() {
        return Err(Error::Monomial);
    }
    if a.len() != f.nvars() {
        return Err(Error::DimensionMismatch { expected: f.nvars(), found: a.len() });
    }
    let slack = opts.slack.unwrap_or_else(|| default_slack(f.precision()));
    let bound = sufficient_n(f, epsilon, opts.mode)?;
    let schedule = match opts.n_override {
        Some(0) => return Err(Error::InvalidArgument("n must be positive".into())),
        Some(n) => vec![n],
        None => doubling_schedule(bound),
    };
    let mut last_n = 0;
    for &n in &schedule {
        let res = match cyclic_resultant_with_health(f, n, &opts.resultant) {
            Ok((res, _)) => res,
            Err(Error::BudgetExceeded { predicted, cap, .. }) if opts.n_override.is_none() => {
                return Err(Error::BudgetExceeded { n: bound, predicted, cap });
            }
            Err(e) => return Err(e),
        };
        last_n = n;
        let verdict = test_list(&res.magnitude_list(a)?, opts.mode, slack)?;
        if verdict.lopsided {
            return Ok(CertifyOutcome::Certified(Certificate {
                point: a.to_vec(),
                n,
                mode: opts.mode,
                dominant_exp: verdict.dominant_exponent.expect("lopsided verdict names its term"),
                margin: verdict.margin,
                epsilon,
            }));
        }
    }
    Ok(CertifyOutcome::NotCertified(NotCertified {
        point: a.to_vec(),
        mode: opts.mode,
        epsilon,
        last_n,
        bound_n: bound,
        reached_bound: last_n >= bound,
    }))
}

/// `log(sum of non-dominant magnitudes / dominant magnitude)` for a list.
pub fn non_dominant_log_ratio(list: &MagnitudeList) -> Result<f64> {
    if list.is_empty() {
        return Err(Error::EmptyList);
    }
    let logs: Vec<f64> = list.log_magnitudes().collect();
    let top = logs.iter().enumerate().fold(0, |best, (i, &l)| if l > logs[best] { i } else { best });
    let rest = log_sum_exp(logs.iter().enumerate().filter(|&(i, _)| i != top).map(|(_, &l)| l));
    Ok(rest - logs[top])
}

/// Coefficients (lowest power first) of the slice of `f` in variable `var`
/// through the fibre point with log-moduli `a` and arguments `theta`,
/// rescaled so the unit circle corresponds to `|z_var| = e^{a_var}`.
/// Terms are normalized so the largest contributes modulus one. Also
/// returns the lowest power.
fn scaled_slice(f: &LaurentPolynomial, var: usize, a: &[f64], theta: &[f64]) -> (i64, Vec<Complex64>) {
    let (lo, hi) = f.degree_range(var).expect("nonzero polynomial");
    let logs: Vec<(i64, f64, f64)> = f
        .terms()
        .map(|(e, c)| {
            let log_mag = c.ln_abs() + e.dot(a);
            let phase = c.arg() + e.iter().zip(theta).enumerate().filter(|&(j, _)| j != var).map(|(_, (&k, t))| k as f64 * t).sum::<f64>();
            (e[var], log_mag, phase)
        })
        .collect();
    let top = logs.iter().map(|t| t.1).fold(f64::NEG_INFINITY, f64::max);
    let mut coeffs = vec![Complex64::new(0.0, 0.0); (hi - lo + 1) as usize];
    for (m, log_mag, phase) in logs {
        coeffs[(m - lo) as usize] += Complex64::from_polar((log_mag - top).exp(), phase);
    }
    for c in coeffs.iter_mut() {
        if c.norm() <= CANCELLATION_TOL {
            *c = Complex64::new(0.0, 0.0);
        }
    }
    (lo, coeffs)
}

/// Component index of the complement component containing `a`.
///
/// For each variable the slice through a random point of the fibre over `a`
/// is solved and its roots inside `|z| < e^{a_i}` are counted; the count
/// plus the lowest power is the `i`-th index. Three random fibre points must
/// agree.
pub fn component_index(f: &LaurentPolynomial, a: &[f64], seed: u64) -> Result<ExponentVector> {
    f.require_nonzero()?;
    let r = f.nvars();
    if a.len() != r {
        return Err(Error::DimensionMismatch { expected: r, found: a.len() });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut result: Option<Vec<i64>> = None;
    for _ in 0..INDEX_TRIALS {
        let theta: Vec<f64> = (0..r).map(|_| rng.gen_range(0.0..std::f64::consts::TAU)).collect();
        let mut index = Vec::with_capacity(r);
        for var in 0..r {
            let (lo, coeffs) = scaled_slice(f, var, a, &theta);
            if coeffs.iter().all(|c| c.norm() == 0.0) {
                return Err(Error::ZeroSlice { variable: var });
            }
            let roots = polynomial_roots(&coeffs)?;
            let mut inside = 0i64;
            for w in roots {
                let ratio = w.norm();
                if (ratio - 1.0).abs() < ROOT_CIRCLE_TOL {
                    return Err(Error::TooCloseToAmoeba { ratio });
                }
                if ratio < 1.0 {
                    inside += 1;
                }
            }
            index.push(inside + lo);
        }
        match &result {
            None => result = Some(index),
            Some(prev) if *prev != index => {
                return Err(Error::InconsistentIndex { first: prev.clone(), second: index });
            }
            Some(_) => {}
        }
    }
    Ok(ExponentVector::new(result.expect("at least one trial")))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OracleVerdict {
    pub inside: bool,
    /// Smallest `| log|root| - a |` found (infinite when there are no roots).
    pub distance: f64,
}

/// Membership of `a` in the amoeba of a univariate `f`, by root finding.
pub fn oracle_membership_r1(f: &LaurentPolynomial, a: f64, tol: f64) -> Result<OracleVerdict> {
    if f.nvars() != 1 {
        return Err(Error::DimensionMismatch { expected: 1, found: f.nvars() });
    }
    let (_, coeffs) = f.univariate_coefficients()?;
    let distance = polynomial_roots(&coeffs)?
        .iter()
        .map(|z| (z.norm().ln() - a).abs())
        .fold(f64::INFINITY, f64::min);
    Ok(OracleVerdict { inside: distance <= tol, distance })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Oracle2Verdict {
    pub inside: bool,
    /// Smallest `| log|z_2| - a_2 |` over all sampled slices.
    pub distance: f64,
    /// Sampled phases whose slice was degenerate.
    pub skipped: usize,
}

/// Membership of `a` in the amoeba of a bivariate `f`, by sweeping the
/// phase of `z_1` and solving for `z_2`. `In` answers are reliable; `Out`
/// answers are limited by the sampling.
pub fn oracle_membership_r2(f: &LaurentPolynomial, a: &[f64], phase_samples: usize, tol: f64) -> Result<Oracle2Verdict> {
    if f.nvars() != 2 {
        return Err(Error::DimensionMismatch { expected: 2, found: f.nvars() });
    }
    if a.len() != 2 {
        return Err(Error::DimensionMismatch { expected: 2, found: a.len() });
    }
    f.require_nonzero()?;
    let mut distance = f64::INFINITY;
    let mut skipped = 0;
    for s in 0..phase_samples.max(1) {
        let theta = std::f64::consts::TAU * s as f64 / phase_samples.max(1) as f64;
        let (_, coeffs) = scaled_slice(f, 1, a, &[theta, 0.0]);
        if coeffs.iter().filter(|c| c.norm() > 0.0).count() < 2 {
            skipped += 1;
            continue;
        }
        for w in polynomial_roots(&coeffs)? {
            if w.norm() > 0.0 {
                distance = distance.min(w.norm().ln().abs());
            }
        }
    }
    Ok(Oracle2Verdict { inside: distance <= tol, distance, skipped })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(nvars: usize, terms: &[(&[i64], f64)]) -> LaurentPolynomial {
        let t: Vec<(&[i64], f64, f64)> = terms.iter().map(|(e, c)| (*e, *c, 0.0)).collect();
        LaurentPolynomial::from_f64_terms(nvars, 256, &t).unwrap()
    }

    fn one_plus_z() -> LaurentPolynomial {
        p(1, &[(&[0], 1.0), (&[1], 1.0)])
    }

    fn line() -> LaurentPolynomial {
        p(2, &[(&[0, 0], 1.0), (&[1, 0], 1.0), (&[0, 1], 1.0)])
    }

    fn trinomial() -> LaurentPolynomial {
        p(2, &[(&[0, 0], 1.0), (&[1, 1], 1.0), (&[0, 2], 1.0)])
    }

    fn quadratic() -> LaurentPolynomial {
        // (z - 2)(z - 5)
        p(1, &[(&[0], 10.0), (&[1], -7.0), (&[2], 1.0)])
    }

    #[test]
    fn certify_examples() {
        for mode in [Mode::Lopsided, Mode::Superlopsided] {
            let opts = CertifyOptions::with_mode(mode);
            let out = certify_outside(&one_plus_z(), &[1.0], 0.5, &opts).unwrap();
            let cert = out.certificate().expect("certified");
            assert!(cert.verify(&one_plus_z(), default_slack(256)).unwrap());

            match certify_outside(&one_plus_z(), &[0.0], 0.5, &opts).unwrap() {
                CertifyOutcome::NotCertified(nc) => {
                    assert!(nc.reached_bound);
                    assert_eq!(nc.last_n, nc.bound_n);
                }
                other => panic!("{other:?}"),
            }
        }
        let out = certify_outside(&trinomial(), &[2f64.ln(), 3f64.ln()], 0.1, &CertifyOptions::with_mode(Mode::Lopsided))
            .unwrap();
        let cert = out.certificate().unwrap();
        assert_eq!(cert.n, 1);
        assert_eq!(cert.dominant_exp, ExponentVector::new(vec![0, 2]));
    }

    #[test]
    fn certify_rejects_monomials_and_bad_input() {
        let mono = p(2, &[(&[1, 0], 1.0)]);
        assert!(matches!(certify_outside(&mono, &[0.0, 0.0], 0.5, &CertifyOptions::default()), Err(Error::Monomial)));
        assert!(matches!(
            certify_outside(&line(), &[0.0], 0.5, &CertifyOptions::default()),
            Err(Error::DimensionMismatch { .. })
        ));
        assert!(certify_outside(&line(), &[0.0, 0.0], 0.0, &CertifyOptions::default()).is_err());
    }

    #[test]
    fn budget_reports_sufficient_n() {
        let opts = CertifyOptions { resultant: ResultantOptions { term_cap: 20.0 }, ..CertifyOptions::default() };
        let bound = sufficient_n(&line(), 0.05, Mode::Superlopsided).unwrap();
        match certify_outside(&line(), &[-0.3, -0.3], 0.05, &opts) {
            Err(Error::BudgetExceeded { n, .. }) => assert_eq!(n, bound),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn certificate_json_round_trip() {
        let out = certify_outside(&one_plus_z(), &[1.0], 0.5, &CertifyOptions::default()).unwrap();
        let cert = out.certificate().unwrap().clone();
        let json = cert.to_json();
        assert!(json.starts_with(r#"{"point":[1.0],"n":"#));
        assert!(json.contains(r#""mode":"superlopsided""#) && json.contains(r#""dominant_exp":[1]"#));
        assert_eq!(Certificate::from_json(&json).unwrap(), cert);
        let mut forged = cert.clone();
        forged.margin *= 2.0;
        assert!(!forged.verify(&one_plus_z(), default_slack(256)).unwrap());
    }

    #[test]
    fn component_index_examples() {
        assert_eq!(component_index(&quadratic(), &[3f64.ln()], 1).unwrap(), ExponentVector::new(vec![1]));
        assert_eq!(component_index(&quadratic(), &[0.0], 1).unwrap(), ExponentVector::new(vec![0]));
        assert_eq!(component_index(&quadratic(), &[6f64.ln()], 1).unwrap(), ExponentVector::new(vec![2]));
        assert!(matches!(component_index(&quadratic(), &[2f64.ln()], 1), Err(Error::TooCloseToAmoeba { .. })));
        assert_eq!(component_index(&line(), &[-3.0, -3.0], 9).unwrap(), ExponentVector::new(vec![0, 0]));
        assert_eq!(component_index(&line(), &[3.0, 0.0], 9).unwrap(), ExponentVector::new(vec![1, 0]));
        assert_eq!(component_index(&line(), &[0.0, 3.0], 9).unwrap(), ExponentVector::new(vec![0, 1]));
        let laurent = p(1, &[(&[-1], 1.0), (&[0], -3.0)]);
        // root at 1/3; index counts from the lowest power -1
        assert_eq!(component_index(&laurent, &[0.0], 2).unwrap(), ExponentVector::new(vec![0]));
        assert_eq!(component_index(&laurent, &[-3.0], 2).unwrap(), ExponentVector::new(vec![-1]));
    }

    #[test]
    fn oracle_r1_examples() {
        assert!(oracle_membership_r1(&one_plus_z(), 0.0, 1e-9).unwrap().inside);
        let v = oracle_membership_r1(&quadratic(), 3f64.ln(), 1e-9).unwrap();
        assert!(!v.inside);
        assert!((v.distance - 1.5f64.ln()).abs() < 1e-12);
        let e2 = p(1, &[(&[0], -(2f64.exp())), (&[1], 1.0)]);
        assert!(oracle_membership_r1(&e2, 2.0, 1e-9).unwrap().inside);
    }

    #[test]
    fn oracle_r2_examples() {
        // nearest sample to 2 pi / 3 gives |z_2| = 2 cos(21 pi / 64), log 0.029
        let v = oracle_membership_r2(&line(), &[0.0, 0.0], 64, 0.05).unwrap();
        assert!(v.inside);
        assert_eq!(v.skipped, 1);
        assert!(!oracle_membership_r2(&line(), &[2.0, 0.0], 64, 0.02).unwrap().inside);
        assert!(!oracle_membership_r2(&trinomial(), &[2f64.ln(), 3f64.ln()], 128, 0.02).unwrap().inside);
    }

    #[test]
    fn schedule() {
        assert_eq!(doubling_schedule(1), vec![1]);
        assert_eq!(doubling_schedule(4), vec![1, 2, 4]);
        assert_eq!(doubling_schedule(11), vec![1, 2, 4, 8, 11]);
    }
}
