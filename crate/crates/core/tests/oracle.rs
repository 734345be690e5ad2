//! Exhaustive-search oracles for the decoder on small codes.

use mld_core::bnb::{min_distance, ml_decode, BnbParams, Mode, Search};
use mld_core::builtin;
use mld_core::channel::transmit_with;
use mld_core::code::weight;
use mld_core::{ConstraintSet, LinearCode};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn brute_force(words: &[Vec<u8>], llr: &[f64], f: &ConstraintSet) -> f64 {
    words
        .iter()
        .filter(|c| f.admits(c))
        .map(|c| c.iter().zip(llr).filter(|(&b, _)| b == 1).map(|(_, l)| *l).sum::<f64>())
        .fold(f64::INFINITY, f64::min)
}

fn small_codes() -> Vec<LinearCode> {
    let mut v = vec![builtin::hamming_7_4(), builtin::hamming_15_11()];
    v.extend((0..3).map(|s| builtin::random_code(16, 8, s)));
    v
}

#[test]
fn ml_decode_matches_brute_force() {
    let params = BnbParams::default();
    for code in small_codes() {
        let words = code.enumerate_codewords();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for frame in 0..150 {
            let variance = [0.5, 1.0, 2.0][frame % 3];
            let info: Vec<u8> = (0..code.k()).map(|_| rng.random_range(0..2)).collect();
            let c = code.encode(&info).unwrap();
            let llr = transmit_with(&c, variance, &mut rng);
            let out = ml_decode(&code, &llr, &params, None).unwrap();
            let expect = brute_force(&words, &llr, &ConstraintSet::new());
            assert!(out.optimality_certified);
            assert!(code.is_codeword(&out.codeword).unwrap());
            assert_eq!(out.objective, expect, "{} frame {frame}", code.name());
        }
    }
}

#[test]
fn fresh_lp_variant_agrees() {
    let params = BnbParams { fresh_lp_per_node: true, inherit_parent_bound: false, ..BnbParams::default() };
    let code = builtin::random_code(16, 8, 7);
    let words = code.enumerate_codewords();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..100 {
        let llr = transmit_with(&[0; 16], 1.5, &mut rng);
        let out = ml_decode(&code, &llr, &params, None).unwrap();
        assert_eq!(out.objective, brute_force(&words, &llr, &ConstraintSet::new()));
    }
}

#[test]
fn bounds_stay_sound_during_search() {
    let code = builtin::random_code(16, 8, 1);
    let words = code.enumerate_codewords();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let params = BnbParams { best_bound_period: 3, best_bound_margin: 0.0, ..BnbParams::default() };
    for _ in 0..60 {
        let llr = transmit_with(&[0; 16], 2.0, &mut rng);
        let mut search = Search::new(&code, &llr, &params, Mode::MlDecode, ConstraintSet::new(), None).unwrap();
        let mut last_tau = f64::INFINITY;
        while !search.is_finished() {
            search.step().unwrap();
            assert!(search.tau() <= last_tau);
            last_tau = search.tau();
            for node in search.nodes() {
                let truth = brute_force(&words, &llr, &node.fixings);
                assert!(node.bound <= truth + 1e-7, "bound {} > {}", node.bound, truth);
                if let Some(parent) = node.parent {
                    let slot = search.nodes()[parent].child_bounds[node.child_bit as usize];
                    assert!(slot <= truth + 1e-7, "child slot {slot} > {truth}");
                }
            }
        }
        assert!(search.open_nodes().is_empty() || search.root_bound() >= search.tau());
    }
}

#[test]
fn min_distance_matches_enumeration() {
    for code in small_codes() {
        let expect = code.enumerate_codewords().iter().map(|c| weight(c)).filter(|&w| w > 0).min().unwrap();
        let r = min_distance(&code, &BnbParams::min_distance_defaults(), false).unwrap();
        assert_eq!(r.dmin, expect, "{}", code.name());
        assert_eq!(weight(&r.witness), r.dmin);
        assert!(code.is_codeword(&r.witness).unwrap());
    }
}

#[test]
fn decoding_is_deterministic() {
    let code = builtin::random_code(16, 8, 2);
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let llr = transmit_with(&[0; 16], 2.0, &mut rng);
    let a = ml_decode(&code, &llr, &BnbParams::default(), None).unwrap();
    let b = ml_decode(&code, &llr, &BnbParams::default(), None).unwrap();
    assert_eq!((a.codeword, a.objective, a.nodes_processed), (b.codeword, b.objective, b.nodes_processed));
}
