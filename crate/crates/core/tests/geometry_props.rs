use amoeba_core::geometry::{
    approximate_spine, enumerate_components, spine_membership, HalfspaceSystem, TropicalPolynomial,
};
use amoeba_core::lopsided::{default_d_prime, default_slack, is_superlopsided};
use amoeba_core::membership::{certify_outside, oracle_membership_r2, CertifyOptions, Mode};
use amoeba_core::poly::LaurentPolynomial;
use amoeba_core::resultant::cyclic_resultant;
use amoeba_core::tropical::tropical_membership;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn poly(terms: &[(&[i64], f64)]) -> LaurentPolynomial {
    let t: Vec<(&[i64], f64, f64)> = terms.iter().map(|(e, c)| (*e, *c, 0.0)).collect();
    LaurentPolynomial::from_f64_terms(2, 256, &t).unwrap()
}

fn line() -> LaurentPolynomial {
    poly(&[(&[0, 0], 1.0), (&[1, 0], 1.0), (&[0, 1], 1.0)])
}

fn origin_component(f: &LaurentPolynomial, n: u64) -> HalfspaceSystem {
    enumerate_components(f, n).unwrap().into_iter().find(|s| s.k.to_vec() == [0, 0]).unwrap()
}

fn grid(lo: f64, hi: f64, steps: usize) -> impl Iterator<Item = [f64; 2]> {
    let h = (hi - lo) / (steps - 1) as f64;
    (0..steps).flat_map(move |i| (0..steps).map(move |j| [lo + h * i as f64, lo + h * j as f64]))
}

#[test]
fn witnesses_are_certified_outside() {
    let examples = [
        line(),
        poly(&[(&[0, 0], 1.0), (&[1, 1], 1.0), (&[0, 2], 1.0)]),
        poly(&[(&[0, 0], 1.0), (&[1, 0], -3.0), (&[0, 1], 2.0), (&[1, 1], 0.5)]),
        poly(&[(&[0, 0], 2.0), (&[2, 0], 1.0), (&[0, 2], 1.0), (&[1, 1], 5.0)]),
    ];
    for f in &examples {
        for n in [1u64, 2] {
            for s in enumerate_components(f, n).unwrap() {
                let Some(w) = &s.witness else { continue };
                let opts = CertifyOptions { n_override: Some(n), ..CertifyOptions::with_mode(Mode::Superlopsided) };
                let cert = certify_outside(f, w, 0.5, &opts).unwrap();
                let cert = cert.certificate().unwrap_or_else(|| panic!("witness {w:?} of {:?} at n={n} not certified", s.k));
                let nr = (n * n) as i64;
                assert_eq!(cert.dominant_exp.to_vec(), vec![s.k[0] * nr, s.k[1] * nr]);
                assert!(!oracle_membership_r2(f, w, 128, 1e-9).unwrap().inside, "witness {w:?} is in the amoeba");
            }
        }
    }
}

#[test]
fn origin_component_stays_within_the_convergence_bound() {
    // the true component is {e^x1 + e^x2 < 1}; log(16/3 c d) with c = 1, d = 3
    let f = line();
    for n in [1u64, 2, 4] {
        let p = origin_component(&f, n);
        let bound = (3.0 * (n as f64).ln() + 16f64.ln()) / n as f64;
        let deficit = grid(-8.0, 0.0, 161)
            .filter(|x| x[0].exp() + x[1].exp() < 1.0)
            .map(|x| (-p.depth(&x)).max(0.0))
            .fold(0.0, f64::max);
        assert!(deficit < bound, "n={n}: {deficit} >= {bound}");
        // and the polyhedron never leaves the true component
        for x in grid(-8.0, 0.0, 161).filter(|x| p.contains(x)) {
            assert!(x[0].exp() + x[1].exp() < 1.0, "n={n}: {x:?}");
        }
    }
}

#[test]
fn origin_component_grows_with_n() {
    let f = line();
    let ps: Vec<HalfspaceSystem> = [1u64, 2, 4].iter().map(|&n| origin_component(&f, n)).collect();
    let mut escaped = Vec::new();
    let mut tested = 0;
    for (small, big) in ps.iter().zip(&ps[1..]) {
        // boundary points of the smaller polyhedron, sampled along rays from its witness
        let w = small.witness.clone().unwrap();
        for s in 0..256 {
            let t = std::f64::consts::TAU * (s as f64 + 0.5) / 256.0;
            let dir = [t.cos(), t.sin()];
            let (mut lo, mut hi) = (0.0, 1.0);
            while small.contains(&[w[0] + hi * dir[0], w[1] + hi * dir[1]]) && hi < 64.0 {
                hi *= 2.0;
            }
            if hi >= 64.0 {
                continue;
            }
            for _ in 0..60 {
                let mid = 0.5 * (lo + hi);
                if small.contains(&[w[0] + mid * dir[0], w[1] + mid * dir[1]]) {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            let x = [w[0] + lo * dir[0], w[1] + lo * dir[1]];
            tested += 1;
            if big.depth(&x) < -1e-9 {
                escaped.push((small.n, x, big.depth(&x)));
            }
        }
    }
    assert!(tested > 200);
    assert!(escaped.is_empty(), "{} boundary points leave the next polyhedron, e.g. {:?}", escaped.len(), &escaped[..escaped.len().min(3)]);
}

#[test]
fn spine_points_fail_superlopsidedness() {
    let f = line();
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for n in [1u64, 2, 4] {
        let spine = approximate_spine(&f, n).unwrap();
        let res = cyclic_resultant(&f, n).unwrap();
        let slack = default_slack(256);
        let mut hits = 0;
        let terms: Vec<(Vec<i64>, f64)> = spine.terms().map(|(e, c)| (e.to_vec(), c)).collect();
        while hits < 200 {
            // a point where two spine terms tie: pick a pair and solve along a random line
            let i = rng.gen_range(0..terms.len());
            let j = rng.gen_range(0..terms.len());
            if i == j {
                continue;
            }
            let (ei, ci) = &terms[i];
            let (ej, cj) = &terms[j];
            let dk = [(ei[0] - ej[0]) as f64, (ei[1] - ej[1]) as f64];
            let base = [rng.gen_range(-4.0..4.0), rng.gen_range(-4.0..4.0)];
            let t_dir = [-dk[1], dk[0]];
            // (ci - cj) + dk . (base + s dk) = 0
            let s = -((ci - cj) + dk[0] * base[0] + dk[1] * base[1]) / (dk[0] * dk[0] + dk[1] * dk[1]);
            let shift = rng.gen_range(-3.0..3.0);
            let x = [base[0] + s * dk[0] + shift * t_dir[0], base[1] + s * dk[1] + shift * t_dir[1]];
            if !spine_membership(&spine, &x, None) {
                continue;
            }
            hits += 1;
            let list = res.magnitude_list(&x).unwrap();
            let v = is_superlopsided(&list, default_d_prime(list.len()), slack).unwrap();
            assert!(!v.lopsided, "n={n}: spine point {x:?} is superlopsided for Res_n");
        }
    }
}

#[test]
fn spine_vertex_moves_toward_the_origin() {
    let f = line();
    let mut prev = f64::INFINITY;
    for n in [1u64, 2, 4, 8] {
        let spine = approximate_spine(&f, n).unwrap();
        // the vertex of max{c0, c1 + x1, c2 + x2} is (c0 - c1, c0 - c2)
        let c = |e: [i64; 2]| spine.coefficient(&e).unwrap();
        let v = [c([0, 0]) - c([1, 0]), c([0, 0]) - c([0, 1])];
        let dist = v[0].hypot(v[1]);
        assert!(dist <= prev + 1e-12, "n={n}: {dist} > {prev}");
        assert!(spine_membership(&spine, &v, None));
        prev = dist;
    }
    assert!(prev < 0.05);
}

#[test]
fn spine_and_tropical_membership_agree() {
    let spine = approximate_spine(&line(), 4).unwrap();
    let back = TropicalPolynomial::from_json(&spine.to_json()).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(22);
    for _ in 0..10_000 {
        let x = [rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0)];
        assert_eq!(spine_membership(&spine, &x, None), tropical_membership(&back, &x, None));
    }
}
