//! Property tests for the measure and coding invariants.

use proptest::prelude::*;
use schurweyl::codec::{build_prefix_code, shannon_lengths};
use schurweyl::schur::{schur_weyl_measure, Spectrum};

fn arb_spectrum(d: usize) -> impl Strategy<Value = Spectrum> {
    proptest::collection::vec(0.05f64..1.0, d).prop_map(|raw| {
        let total: f64 = raw.iter().sum();
        Spectrum::new(raw.into_iter().map(|x| x / total).collect()).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn measure_normalizes(d in 2usize..=4, n in 1u64..=8, seed_p in proptest::collection::vec(0.05f64..1.0, 4)) {
        let raw = &seed_p[..d];
        let total: f64 = raw.iter().sum();
        let p = Spectrum::new(raw.iter().map(|x| x / total).collect()).unwrap();
        let m = schur_weyl_measure(&p, n).unwrap();
        prop_assert!((m.total() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn measure_is_symmetric_in_the_spectrum(n in 1u64..=7, p in arb_spectrum(3)) {
        let mut permuted = p.probs().to_vec();
        permuted.rotate_left(1);
        let q = Spectrum::new(permuted).unwrap();
        let ma = schur_weyl_measure(&p, n).unwrap();
        let mb = schur_weyl_measure(&q, n).unwrap();
        for (lam, w) in ma.iter() {
            prop_assert!((w - mb.weight(lam)).abs() < 1e-11);
        }
    }

    #[test]
    fn ceiling_lengths_satisfy_kraft_and_the_per_entry_bound(
        raw in proptest::collection::vec(0.01f64..1.0, 1..24)
    ) {
        let total: f64 = raw.iter().sum();
        let eigs: Vec<f64> = raw.iter().map(|x| x / total).collect();
        let lengths = shannon_lengths(&eigs).unwrap();
        let kraft: f64 = lengths.iter().map(|&l| (-(l as f64)).exp2()).sum();
        prop_assert!(kraft <= 1.0 + 1e-12);
        for (&p, &l) in eigs.iter().zip(&lengths) {
            let two_ml = (-(l as f64)).exp2();
            prop_assert!(p >= two_ml - 1e-12);
            prop_assert!(two_ml > p / 2.0 - 1e-12);
        }
    }

    #[test]
    fn canonical_assignment_is_prefix_free_and_decodable(
        raw in proptest::collection::vec(0.01f64..1.0, 2..16),
        stream in proptest::collection::vec(0usize..1000, 0..64)
    ) {
        let total: f64 = raw.iter().sum();
        let eigs: Vec<f64> = raw.iter().map(|x| x / total).collect();
        let lengths = shannon_lengths(&eigs).unwrap();
        let words = build_prefix_code(&lengths).unwrap();
        let mut sorted = words.clone();
        sorted.sort();
        for pair in sorted.windows(2) {
            prop_assert!(!pair[1].starts_with(pair[0].as_str()), "{pair:?}");
        }
        // concatenated streams decode uniquely by greedy prefix matching
        let symbols: Vec<usize> = stream.iter().map(|s| s % words.len()).collect();
        let bits: String = symbols.iter().map(|&s| words[s].as_str()).collect();
        let mut decoded = Vec::new();
        let mut rest = bits.as_str();
        'outer: while !rest.is_empty() {
            for (i, w) in words.iter().enumerate() {
                if rest.starts_with(w.as_str()) {
                    decoded.push(i);
                    rest = &rest[w.len()..];
                    continue 'outer;
                }
            }
            prop_assert!(false, "undecodable prefix stream");
        }
        prop_assert_eq!(decoded, symbols);
    }
}
