//! Non-membership in amoebas of higher-codimension varieties through the
//! witness polynomial `f_a = sum_i f_i(z) conj(f_i)(e^{2a} / z)`, which lies
//! in the ideal and equals `sum_i |f_i(z)|^2` on the fibre over `a`.

use crate::error::{Error, Result};
use crate::lopsided::SINGLE_TERM_MARGIN;
use crate::membership::{certify_outside, sufficient_n, Certificate, CertifyOptions, CertifyOutcome, NotCertified};
use crate::poly::{Coefficient, LaurentPolynomial};

pub const DEFAULT_N_MAX: u64 = 64;

/// `f_a` for the ideal generated by `gens` at the point `a`.
pub fn witness_polynomial(gens: &[LaurentPolynomial], a: &[f64]) -> Result<LaurentPolynomial> {
    let first = gens.first().ok_or(Error::EmptyList)?;
    let r = first.nvars();
    if a.len() != r {
        return Err(Error::DimensionMismatch { expected: r, found: a.len() });
    }
    let prec = gens.iter().map(|g| g.precision()).max().unwrap_or(first.precision());
    let mut total = LaurentPolynomial::zero(r, prec);
    for g in gens {
        if g.nvars() != r {
            return Err(Error::DimensionMismatch { expected: r, found: g.nvars() });
        }
        g.require_nonzero()?;
        let reflected = LaurentPolynomial::from_terms(
            r,
            prec,
            g.terms().map(|(j, b)| {
                let shift = Coefficient::exp_real(2.0 * j.dot(a), prec);
                (j.neg(), b.conj().mul(&shift))
            }),
        )?;
        total = total.add(&g.multiply(&reflected)?)?;
    }
    Ok(total)
}

/// Tries to prove `a` is outside the amoeba of the ideal generated by
/// `gens` by certifying `a` outside the amoeba of `f_a`, using
/// `n = 1, 2, 4, ...` up to `min(sufficient n, n_max)`, then the sufficient `n`
/// itself when it is within `n_max`.
///
/// A `NotCertified` with `reached_bound` only says `a` is within `epsilon`
/// of the amoeba of `f_a`.
pub fn certify_outside_ideal(
    gens: &[LaurentPolynomial],
    a: &[f64],
    epsilon: f64,
    n_max: u64,
    opts: &CertifyOptions,
) -> Result<CertifyOutcome> {
    if n_max == 0 {
        return Err(Error::InvalidArgument("n_max must be positive".into()));
    }
    let fa = witness_polynomial(gens, a)?;
    if fa.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if fa.is_monomial() {
        let (exp, _) = fa.terms().next().expect("one term");
        return Ok(CertifyOutcome::Certified(Certificate {
            point: a.to_vec(),
            n: 1,
            mode: opts.mode,
            dominant_exp: exp.clone(),
            margin: SINGLE_TERM_MARGIN,
            epsilon,
        }));
    }
    let bound = sufficient_n(&fa, epsilon, opts.mode)?;
    let limit = bound.min(n_max);
    let mut schedule: Vec<u64> =
        std::iter::successors(Some(1u64), |n| n.checked_mul(2)).take_while(|&n| n <= limit).collect();
    if bound <= n_max && schedule.last() != Some(&bound) {
        schedule.push(bound);
    }
    let mut last_n = 0;
    for n in schedule {
        let attempt = CertifyOptions { n_override: Some(n), ..opts.clone() };
        last_n = n;
        if let CertifyOutcome::Certified(c) = certify_outside(&fa, a, epsilon, &attempt)? {
            return Ok(CertifyOutcome::Certified(c));
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

#[cfg(test)]
mod tests {
    use super::*;
    use crate::membership::Mode;
    use crate::poly::ExponentVector;
    use num_complex::Complex64;

    fn p(nvars: usize, terms: &[(&[i64], f64)]) -> LaurentPolynomial {
        let t: Vec<(&[i64], f64, f64)> = terms.iter().map(|(e, c)| (*e, *c, 0.0)).collect();
        LaurentPolynomial::from_f64_terms(nvars, 256, &t).unwrap()
    }

    fn close(f: &LaurentPolynomial, exp: &[i64], value: f64) -> bool {
        (f.coefficient(exp).unwrap().to_complex64() - Complex64::new(value, 0.0)).norm() < 1e-60
    }

    #[test]
    fn witness_examples() {
        let g = p(1, &[(&[0], -1.0), (&[1], 1.0)]);
        let fa = witness_polynomial(std::slice::from_ref(&g), &[0.0]).unwrap();
        assert_eq!(fa.len(), 3);
        assert!(close(&fa, &[0], 2.0) && close(&fa, &[1], -1.0) && close(&fa, &[-1], -1.0));

        let fa = witness_polynomial(std::slice::from_ref(&g), &[2f64.ln()]).unwrap();
        assert!(close(&fa, &[1], -1.0) && close(&fa, &[0], 5.0) && close(&fa, &[-1], -4.0));
        for k in 0..16 {
            let z = Complex64::from_polar(2.0, k as f64 * 0.4);
            let lhs = fa.evaluate_c64(&[z]).unwrap();
            let rhs = (z - 1.0).norm_sqr();
            assert!((lhs - rhs).norm() < 1e-12 * rhs);
        }

        let unit = witness_polynomial(&[p(2, &[(&[0, 0], 1.0)])], &[0.3, -2.0]).unwrap();
        assert!(unit.is_monomial() && close(&unit, &[0, 0], 1.0));
    }

    #[test]
    fn witness_errors() {
        assert!(matches!(witness_polynomial(&[], &[0.0]), Err(Error::EmptyList)));
        let a = p(1, &[(&[1], 1.0)]);
        let b = p(2, &[(&[1, 0], 1.0)]);
        assert!(matches!(witness_polynomial(&[a.clone(), b], &[0.0]), Err(Error::DimensionMismatch { .. })));
        assert!(matches!(witness_polynomial(&[a], &[0.0, 1.0]), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn certify_examples() {
        let opts = CertifyOptions::default();
        let empty_variety = [p(1, &[(&[0], -1.0), (&[1], 1.0)]), p(1, &[(&[0], -2.0), (&[1], 1.0)])];
        let out = certify_outside_ideal(&empty_variety, &[0.0], 0.5, DEFAULT_N_MAX, &opts).unwrap();
        assert!(out.certificate().is_some());

        let point = [p(1, &[(&[0], -2.0), (&[1], 1.0)])];
        match certify_outside_ideal(&point, &[2f64.ln()], 0.5, DEFAULT_N_MAX, &opts).unwrap() {
            CertifyOutcome::NotCertified(nc) => assert!(nc.reached_bound),
            other => panic!("{other:?}"),
        }

        let lines = [
            p(2, &[(&[0, 0], 1.0), (&[1, 0], 1.0), (&[0, 1], 1.0)]),
            p(2, &[(&[0, 0], 3.0), (&[1, 0], 1.0), (&[0, 1], -1.0)]),
        ];
        let out = certify_outside_ideal(&lines, &[2f64.ln(), 0.0], 2.0, 8, &CertifyOptions::with_mode(Mode::Lopsided)).unwrap();
        assert!(out.certificate().is_none());

        let unit = certify_outside_ideal(&[p(1, &[(&[0], 1.0)])], &[0.7], 0.1, 4, &opts).unwrap();
        assert_eq!(unit.certificate().unwrap().dominant_exp, ExponentVector::new(vec![0]));
    }
}
