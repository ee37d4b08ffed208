use amoeba_core::membership::{
    certify_outside, component_index, non_dominant_log_ratio, oracle_membership_r1, oracle_membership_r2, sufficient_n,
    CertifyOptions, CertifyOutcome, Mode,
};
use amoeba_core::poly::LaurentPolynomial;
use amoeba_core::resultant::cyclic_resultant;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_poly(rng: &mut ChaCha8Rng, r: usize) -> LaurentPolynomial {
    loop {
        let count = rng.gen_range(2..=6);
        let terms: Vec<(Vec<i64>, f64, f64)> = (0..count)
            .map(|_| {
                let e = (0..r).map(|_| rng.gen_range(0..=4)).collect();
                (e, rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0))
            })
            .collect();
        let t: Vec<(&[i64], f64, f64)> = terms.iter().map(|(e, re, im)| (e.as_slice(), *re, *im)).collect();
        let f = LaurentPolynomial::from_f64_terms(r, 256, &t).unwrap();
        if f.len() >= 2 {
            return f;
        }
    }
}

fn random_monic(rng: &mut ChaCha8Rng, max_degree: usize) -> LaurentPolynomial {
    let degree = rng.gen_range(1..=max_degree);
    let roots: Vec<Complex64> = (0..degree)
        .map(|_| Complex64::from_polar(rng.gen_range(-2.0f64..2.0).exp(), rng.gen_range(0.0..std::f64::consts::TAU)))
        .collect();
    LaurentPolynomial::from_roots(&roots, 256)
}

fn line() -> LaurentPolynomial {
    LaurentPolynomial::from_f64_terms(2, 256, &[(&[0, 0], 1.0, 0.0), (&[1, 0], 1.0, 0.0), (&[0, 1], 1.0, 0.0)]).unwrap()
}

#[test]
fn certificates_are_never_inside_the_amoeba() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut trials = 0;
    let mut certified = 0;
    for i in 0..300 {
        let f = random_poly(&mut rng, 1);
        let a = rng.gen_range(-2.0..2.0);
        let mode = if i % 2 == 0 { Mode::Lopsided } else { Mode::Superlopsided };
        let out = certify_outside(&f, &[a], 0.25, &CertifyOptions::with_mode(mode)).unwrap();
        trials += 1;
        if out.certificate().is_some() {
            certified += 1;
            let oracle = oracle_membership_r1(&f, a, 0.0).unwrap();
            assert!(oracle.distance > 0.0 && !oracle.inside, "r=1 trial {i}: certified at oracle distance {}", oracle.distance);
        }
    }
    for i in 0..250 {
        let f = random_poly(&mut rng, 2);
        let a = [rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0)];
        let mode = if i % 2 == 0 { Mode::Lopsided } else { Mode::Superlopsided };
        let opts = CertifyOptions { n_override: Some(rng.gen_range(1..=2)), ..CertifyOptions::with_mode(mode) };
        let out = certify_outside(&f, &a, 0.25, &opts).unwrap();
        trials += 1;
        if out.certificate().is_some() {
            certified += 1;
            let oracle = oracle_membership_r2(&f, &a, 128, 1e-9).unwrap();
            assert!(!oracle.inside, "r=2 trial {i}: certified but oracle distance {}", oracle.distance);
        }
    }
    assert!(trials >= 500);
    assert!(certified > 100, "only {certified} certificates in {trials} trials");
}

#[test]
fn sufficient_n_always_certifies_in_one_variable() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let mut checked = 0;
    while checked < 60 {
        let f = random_monic(&mut rng, 8);
        let a = rng.gen_range(-3.0..3.0);
        let eps = if checked % 2 == 0 { 0.5 } else { 0.25 };
        if oracle_membership_r1(&f, a, 0.0).unwrap().distance < eps {
            continue;
        }
        checked += 1;
        for mode in [Mode::Lopsided, Mode::Superlopsided] {
            let n = sufficient_n(&f, eps, mode).unwrap();
            let opts = CertifyOptions { n_override: Some(n), ..CertifyOptions::with_mode(mode) };
            let out = certify_outside(&f, &[a], eps, &opts).unwrap();
            assert!(matches!(out, CertifyOutcome::Certified(_)), "{mode:?} failed at the sufficient n = {n}, a = {a}");
        }
    }
}

#[test]
fn non_dominant_share_decays() {
    let f = line();
    for a in [[-1.5, -1.5], [2.0, -1.0], [-1.0, 2.5], [2.0, 0.5]] {
        let ratios: Vec<f64> = [1u64, 2, 4, 8]
            .iter()
            .map(|&n| non_dominant_log_ratio(&cyclic_resultant(&f, n).unwrap().magnitude_list(&a).unwrap()).unwrap())
            .collect();
        for w in ratios.windows(2) {
            assert!(w[1] < w[0], "{a:?}: {ratios:?}");
        }
        assert!(ratios[3] < -4.0, "{a:?}: {ratios:?}");
    }
}

#[test]
fn dominant_exponent_matches_component_index_in_two_variables() {
    let f = line();
    for (a, k) in [([-1.5, -1.5], [0, 0]), ([2.0, -1.0], [1, 0]), ([-1.0, 2.5], [0, 1])] {
        assert_eq!(component_index(&f, &a, 5).unwrap().to_vec(), k);
        let cert = certify_outside(&f, &a, 0.5, &CertifyOptions::with_mode(Mode::Lopsided)).unwrap();
        let cert = cert.certificate().expect("outside point certifies").clone();
        let nr = (cert.n * cert.n) as i64;
        assert_eq!(cert.dominant_exp.to_vec(), vec![k[0] * nr, k[1] * nr]);
        assert!(cert.verify(&f, 0.0).unwrap());
    }
}
