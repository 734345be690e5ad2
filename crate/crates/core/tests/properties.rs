//! Properties of the bounding heuristics and of the simulation driver.

use mld_core::bnb::{ml_decode, BnbParams};
use mld_core::builtin;
use mld_core::channel::{objective_bits, transmit_with};
use mld_core::cuts::{zs_decode, ZsParams};
use mld_core::lp::LpProblem;
use mld_core::sim::{simulate, SimConfig};
use mld_core::sp_osd::{osd_reencode, sp_decode, SpConfig};
use mld_core::{ConstraintSet, LinearCode};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn code_for(ix: usize) -> LinearCode {
    match ix {
        0 => builtin::hamming_7_4(),
        1 => builtin::hamming_15_11(),
        s => builtin::random_code(16, 8, s as u64),
    }
}

fn noisy_llr(code: &LinearCode, seed: u64, variance: f64) -> (Vec<u8>, Vec<f64>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let info: Vec<u8> = (0..code.k()).map(|_| rng.random_range(0..2u8)).collect();
    let c = code.encode(&info).unwrap();
    let llr = transmit_with(&c, variance, &mut rng).into_inner();
    (c, llr)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(150))]

    #[test]
    fn sum_product_commutes_with_codeword_flips(seed in any::<u64>(), ix in 0usize..4, variance in 0.3f64..2.0) {
        let code = code_for(ix);
        let (_, llr) = noisy_llr(&code, seed, variance);
        let (flip, _) = noisy_llr(&code, seed ^ 0xabcd, 1.0);
        let flipped: Vec<f64> = llr.iter().zip(&flip).map(|(&l, &b)| if b == 1 { -l } else { l }).collect();
        let cfg = SpConfig::default();
        let a = sp_decode(&code, &llr, &cfg);
        let b = sp_decode(&code, &flipped, &cfg);
        prop_assert_eq!(a.iterations, b.iterations);
        for i in 0..code.n() {
            let expect = if flip[i] == 1 { -a.posterior[i] } else { a.posterior[i] };
            prop_assert!((b.posterior[i] - expect).abs() <= 1e-9 * (1.0 + expect.abs()));
        }
    }

    #[test]
    fn higher_order_reencoding_never_worse(seed in any::<u64>(), ix in 0usize..4, variance in 0.3f64..2.0) {
        let code = code_for(ix);
        let (_, llr) = noisy_llr(&code, seed, variance);
        let post = sp_decode(&code, &llr, &SpConfig::default()).posterior;
        let none = ConstraintSet::new();
        let mut previous = f64::INFINITY;
        for order in 0..=2 {
            let c = osd_reencode(&code, &llr, &post, order, &none, None).unwrap();
            prop_assert!(code.is_codeword(&c.codeword).unwrap());
            prop_assert!((objective_bits(&llr, &c.codeword) - c.objective).abs() < 1e-12);
            prop_assert!(c.objective <= previous);
            previous = c.objective;
        }
    }

    #[test]
    fn bounds_sandwich_the_constrained_optimum(seed in any::<u64>(), ix in 0usize..4, variance in 0.3f64..2.0) {
        let code = code_for(ix);
        let words = code.enumerate_codewords();
        let (_, llr) = noisy_llr(&code, seed, variance);
        let mut rng = ChaCha8Rng::seed_from_u64(seed.rotate_left(7));
        let mut f = ConstraintSet::new();
        for i in 0..code.n() {
            if rng.random_bool(0.15) {
                f.insert(i, rng.random_range(0..2u8), code.n()).unwrap();
            }
        }
        let ml = words.iter().filter(|w| f.admits(w)).map(|w| objective_bits(&llr, w)).fold(f64::INFINITY, f64::min);
        let params = ZsParams::default();
        let mut lp = LpProblem::new(&llr, params.purge_threshold);
        let lower = zs_decode(&code, &f, &params, None, false, &mut lp).unwrap().value;
        let post = sp_decode(&code, &mld_core::sp_osd::constrained_llr(&llr, &f), &SpConfig::default()).posterior;
        let upper = osd_reencode(&code, &llr, &post, 2, &f, None);
        prop_assert!(lower <= ml + 1e-7);
        match upper {
            Some(c) => {
                prop_assert!(f.admits(&c.codeword));
                prop_assert!(code.is_codeword(&c.codeword).unwrap());
                prop_assert!(ml <= c.objective + 1e-12);
            }
            None => prop_assert!(ml.is_infinite() || !code.is_valid(&f) || f.len() > code.k()),
        }
    }

    #[test]
    fn excluded_word_is_never_returned(seed in any::<u64>(), ix in 0usize..4) {
        let code = code_for(ix);
        let (_, llr) = noisy_llr(&code, seed, 1.0);
        let post = sp_decode(&code, &llr, &SpConfig::default()).posterior;
        let none = ConstraintSet::new();
        let best = osd_reencode(&code, &llr, &post, 2, &none, None).unwrap();
        if let Some(other) = osd_reencode(&code, &llr, &post, 2, &none, Some(&best.codeword)) {
            prop_assert_ne!(&other.codeword, &best.codeword);
            prop_assert!(other.objective >= best.objective);
        }
    }
}

#[test]
fn all_zero_shortcut_agrees_with_full_decoding() {
    let params = BnbParams::default();
    for code in [builtin::hamming_15_11(), builtin::random_code(16, 8, 3)] {
        let zero = vec![0u8; code.n()];
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        let mut errors = 0;
        for _ in 0..200 {
            let llr = transmit_with(&zero, 1.2, &mut rng);
            let full = ml_decode(&code, &llr, &params, None).unwrap();
            let quick = ml_decode(&code, &llr, &params, Some(0.0)).unwrap();
            let full_error = full.codeword != zero;
            assert_eq!(quick.early_stopped || quick.codeword != zero, full_error);
            errors += usize::from(full_error);
        }
        assert!(errors > 5, "the channel should cause some ML errors, got {errors}");
    }
}

#[test]
fn simulation_is_independent_of_worker_count() {
    let code = builtin::hamming_15_11();
    let base = SimConfig { snr_db: vec![1.0, 2.0], target_errors: 15, max_frames: 500, seed: 4, ..SimConfig::default() };
    let one = simulate(&code, &base).unwrap();
    for workers in [2, 4] {
        let many = simulate(&code, &SimConfig { workers, ..base.clone() }).unwrap();
        for (a, b) in one.iter().zip(&many) {
            assert_eq!((a.frames, a.errors, a.fer, a.n_avg, a.lp_avg), (b.frames, b.errors, b.fer, b.n_avg, b.lp_avg));
        }
    }
    let random_info = simulate(&code, &SimConfig { all_zero: false, ..base.clone() }).unwrap();
    let again = simulate(&code, &SimConfig { all_zero: false, workers: 3, ..base }).unwrap();
    assert_eq!(random_info.iter().map(|r| r.errors).collect::<Vec<_>>(), again.iter().map(|r| r.errors).collect::<Vec<_>>());
}
