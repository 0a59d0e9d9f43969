//! Dual-route verification: the Schur-polynomial measure against the RSK
//! word-enumeration oracle (exact rationals), and the blockwise divergence
//! against the dense-matrix oracle.

use num_bigint::BigInt;
use num_rational::BigRational;
use schurweyl::approx::{
    dense_oracle_relative_entropy, relative_entropy, uniform_state,
};
use schurweyl::minimax::{sigma_j_tilde, TildeOptions};
use schurweyl::schur::{
    rsk_oracle_measure_exact, schur_weyl_measure_exact, schur_poly_log2_with, SchurRoute,
    Spectrum,
};
use schurweyl::young::enumerate_diagrams;

fn rational(pairs: &[(i64, i64)]) -> Spectrum {
    Spectrum::from_rationals(
        pairs
            .iter()
            .map(|&(a, b)| BigRational::new(BigInt::from(a), BigInt::from(b)))
            .collect(),
    )
    .unwrap()
}

#[test]
fn rsk_oracle_equals_measure_for_all_small_instances() {
    // d = 2 up to n = 12 and d = 3 up to n = 8 keep d^n <= 6561
    let p2 = rational(&[(3, 4), (1, 4)]);
    let p2b = rational(&[(3, 5), (2, 5)]);
    for n in 1..=12u64 {
        for p in [&p2, &p2b] {
            let oracle = rsk_oracle_measure_exact(p, n).unwrap();
            let direct = schur_weyl_measure_exact(p, n).unwrap();
            assert_eq!(oracle, direct, "d=2 n={n}");
        }
    }
    let p3 = rational(&[(1, 2), (3, 10), (1, 5)]);
    let p3u = rational(&[(1, 3), (1, 3), (1, 3)]);
    for n in 1..=8u64 {
        for p in [&p3, &p3u] {
            let oracle = rsk_oracle_measure_exact(p, n).unwrap();
            let direct = schur_weyl_measure_exact(p, n).unwrap();
            assert_eq!(oracle, direct, "d=3 n={n}");
        }
    }
}

#[test]
fn rational_measure_normalizes_exactly() {
    use num_traits::One;
    let p2 = rational(&[(3, 4), (1, 4)]);
    let p3 = rational(&[(1, 2), (3, 10), (1, 5)]);
    for (p, nmax) in [(&p2, 14u64), (&p3, 8)] {
        for n in 1..=nmax {
            let total: BigRational = schur_weyl_measure_exact(p, n)
                .unwrap()
                .into_iter()
                .map(|(_, w)| w)
                .sum();
            assert!(total.is_one(), "n={n}: {total}");
        }
    }
}

#[test]
fn dense_oracle_agrees_on_every_capped_instance() {
    // d^n <= 243: d=2 n<=7, d=3 n<=5, d=4 n<=3
    let spectra2 = [
        Spectrum::new(vec![0.75, 0.25]).unwrap(),
        Spectrum::new(vec![0.6, 0.4]).unwrap(),
        Spectrum::new(vec![0.9, 0.1]).unwrap(),
    ];
    for n in 1..=7u64 {
        for p in &spectra2 {
            let sigma = uniform_state(n, 2).unwrap();
            let block = relative_entropy(p, &sigma).unwrap();
            let dense = dense_oracle_relative_entropy(p, &sigma).unwrap();
            assert!((block - dense).abs() < 1e-8, "d=2 n={n}: {block} {dense}");
        }
    }
    let spectra3 = [
        Spectrum::new(vec![0.5, 0.3, 0.2]).unwrap(),
        Spectrum::new(vec![1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0]).unwrap(),
    ];
    for n in 1..=5u64 {
        for p in &spectra3 {
            let sigma = uniform_state(n, 3).unwrap();
            let block = relative_entropy(p, &sigma).unwrap();
            let dense = dense_oracle_relative_entropy(p, &sigma).unwrap();
            assert!((block - dense).abs() < 1e-8, "d=3 n={n}: {block} {dense}");
        }
    }
    let p4 = Spectrum::new(vec![0.4, 0.3, 0.2, 0.1]).unwrap();
    for n in 1..=3u64 {
        let sigma = uniform_state(n, 4).unwrap();
        let block = relative_entropy(&p4, &sigma).unwrap();
        let dense = dense_oracle_relative_entropy(&p4, &sigma).unwrap();
        assert!((block - dense).abs() < 1e-8, "d=4 n={n}: {block} {dense}");
    }
}

#[test]
fn dense_oracle_agrees_on_mixture_states_too() {
    // same check against a non-uniform full-support block state
    let p = Spectrum::new(vec![0.75, 0.25]).unwrap();
    for n in [2u64, 4] {
        let tilde = sigma_j_tilde(n, 2, &TildeOptions::default()).unwrap();
        let block = relative_entropy(&p, &tilde).unwrap();
        let dense = dense_oracle_relative_entropy(&p, &tilde).unwrap();
        assert!((block - dense).abs() < 1e-8, "n={n}: {block} {dense}");
    }
}

#[test]
fn gt_and_bialternant_agree_at_scale() {
    // sample diagrams near the typical shape at n = 200, d = 3
    let p = Spectrum::new(vec![0.5, 0.3, 0.2]).unwrap();
    let n = 200u64;
    for lam in enumerate_diagrams(n, 3)
        .unwrap()
        .into_iter()
        .filter(|lam| {
            let r = lam.rows();
            r[0] >= 80 && r[0] <= 120 && r[1] >= 45 && r[1] <= 75 && r[2] >= 25
        })
        .step_by(17)
    {
        let gt = schur_poly_log2_with(&lam, &p, SchurRoute::GelfandTsetlin).unwrap();
        let bi = schur_poly_log2_with(&lam, &p, SchurRoute::Bialternant).unwrap();
        assert!((gt - bi).abs() < 1e-8 * gt.abs().max(1.0), "{lam}: {gt} {bi}");
    }
}
