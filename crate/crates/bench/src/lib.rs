//! Inputs shared by the benchmarks.

use amoeba_core::poly::LaurentPolynomial;

/// `1 + z_1 + z_2`.
pub fn line() -> LaurentPolynomial {
    LaurentPolynomial::from_f64_terms(2, 256, &[(&[0, 0], 1.0, 0.0), (&[1, 0], 1.0, 0.0), (&[0, 1], 1.0, 0.0)])
        .expect("valid polynomial")
}

/// `1 + z_1 z_2 + z_2^2`.
pub fn trinomial() -> LaurentPolynomial {
    LaurentPolynomial::from_f64_terms(2, 256, &[(&[0, 0], 1.0, 0.0), (&[1, 1], 1.0, 0.0), (&[0, 2], 1.0, 0.0)])
        .expect("valid polynomial")
}

/// A dense univariate polynomial of the given degree with unit-size coefficients.
pub fn dense_univariate(degree: i64) -> LaurentPolynomial {
    let exps: Vec<[i64; 1]> = (0..=degree).map(|k| [k]).collect();
    let terms: Vec<(&[i64], f64, f64)> =
        exps.iter().map(|e| (e.as_slice(), 1.0 + 0.1 * e[0] as f64, 0.3 * ((e[0] % 3) as f64 - 1.0))).collect();
    LaurentPolynomial::from_f64_terms(1, 256, &terms).expect("valid polynomial")
}
