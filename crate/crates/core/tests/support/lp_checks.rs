//! LP and separation checks shared by the property tests and the acceptance run.

use mld_core::cuts::{is_integral, zs_decode, ZsParams};
use mld_core::lp::{CutInequality, LpProblem, LpStatus};
use mld_core::{ConstraintSet, LinearCode};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{certificate, naive_lp};

/// Largest violation over all odd subsets of `check`, by enumeration.
pub fn exhaustive_max_violation(check: &[usize], p: &[f64]) -> f64 {
    let d = check.len();
    let mut best = f64::NEG_INFINITY;
    for mask in 0u32..(1 << d) {
        if mask.count_ones() % 2 == 0 {
            continue;
        }
        let mut lhs = 0.0;
        for (t, &i) in check.iter().enumerate() {
            lhs += if mask >> t & 1 == 1 { p[i] } else { -p[i] };
        }
        best = best.max(lhs - (mask.count_ones() as f64 - 1.0));
    }
    best
}

/// Separation on the check `0..p.len()`: the returned subset is odd, its
/// reported violation is exact, and no odd subset is more violated.
pub fn check_separation(p: &[f64]) -> Result<(), String> {
    let check: Vec<usize> = (0..p.len()).collect();
    let (odd, viol) = mld_core::cuts::most_violated_subset(&check, p).ok_or("no subset returned")?;
    if odd.len() % 2 != 1 {
        return Err(format!("even subset {odd:?}"));
    }
    let cut = CutInequality::new(check.clone(), odd);
    if (cut.violation(p) - viol).abs() > 1e-12 {
        return Err(format!("reported violation {viol} but cut has {}", cut.violation(p)));
    }
    let best = exhaustive_max_violation(&check, p);
    if viol < best - 1e-12 {
        return Err(format!("violation {viol} below exhaustive maximum {best} at {p:?}"));
    }
    Ok(())
}

pub fn random_point(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    (0..n)
        .map(|_| match rng.random_range(0..6) {
            0 => 0.0,
            1 => 1.0,
            2 => 0.5,
            _ => rng.random::<f64>(),
        })
        .collect()
}

pub fn random_cut(rng: &mut ChaCha8Rng, n: usize) -> CutInequality {
    let size = rng.random_range(1..=n.min(6));
    let mut check: Vec<usize> = (0..n).collect();
    for i in 0..size {
        let j = rng.random_range(i..n);
        check.swap(i, j);
    }
    check.truncate(size);
    let mut odd: Vec<usize> = check.iter().copied().filter(|_| rng.random_bool(0.5)).collect();
    if odd.len().is_multiple_of(2) {
        match check.iter().copied().find(|i| !odd.contains(i)) {
            Some(i) => odd.push(i),
            None => {
                odd.pop();
            }
        }
    }
    CutInequality::new(check, odd)
}

pub fn rows_of(cuts: &[CutInequality]) -> (Vec<Vec<(usize, f64)>>, Vec<f64>) {
    (cuts.iter().map(|c| c.coefficients().collect()).collect(), cuts.iter().map(|c| c.rhs()).collect())
}

pub fn bounds_of(n: usize, f: &ConstraintSet) -> (Vec<f64>, Vec<f64>) {
    let mut lo = vec![0.0; n];
    let mut hi = vec![1.0; n];
    for (i, v) in f.iter() {
        lo[i] = f64::from(v);
        hi[i] = f64::from(v);
    }
    (lo, hi)
}

/// Builds a random LP from `seed`, re-optimizes it warm after each batch of
/// cuts and compares every solve with the tableau reference and with the
/// dual certificate. Returns the number of solves compared.
pub fn check_simplex_instance(seed: u64) -> Result<usize, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.random_range(3..=12);
    let cost: Vec<f64> = (0..n).map(|_| rng.random_range(-2.0..2.0)).collect();
    let mut f = ConstraintSet::new();
    for i in 0..n {
        if rng.random_bool(0.15) {
            f.insert(i, rng.random_range(0..2u8), n).unwrap();
        }
    }
    let mut lp = LpProblem::new(&cost, usize::MAX);
    lp.set_fixings(&f);
    let (lo, hi) = bounds_of(n, &f);
    let batches = rng.random_range(1..=4);
    for _ in 0..batches {
        let new: Vec<CutInequality> = (0..rng.random_range(1..=6)).map(|_| random_cut(&mut rng, n)).collect();
        lp.add_cuts(&new);
        let sol = lp.solve(None).map_err(|e| e.to_string())?;
        let (rows, rhs) = rows_of(lp.cuts());
        match naive_lp::solve(&cost, &rows, &rhs, &lo, &hi) {
            None => {
                if sol.status != LpStatus::Infeasible {
                    return Err(format!("seed {seed}: reference infeasible, simplex {:?}", sol.status));
                }
            }
            Some((value, _)) => {
                if sol.status != LpStatus::Optimal || (sol.value - value).abs() > 1e-7 {
                    return Err(format!("seed {seed}: simplex {:?} {} vs reference {value}", sol.status, sol.value));
                }
                for (row, &b) in rows.iter().zip(&rhs) {
                    let lhs: f64 = row.iter().map(|&(i, a)| a * sol.point[i]).sum();
                    if lhs > b + 1e-7 {
                        return Err(format!("seed {seed}: row violated by {}", lhs - b));
                    }
                }
                if (0..n).any(|i| sol.point[i] < lo[i] - 1e-9 || sol.point[i] > hi[i] + 1e-9) {
                    return Err(format!("seed {seed}: point outside its bounds"));
                }
                let certified = certificate::dual_bound(&cost, &rows, &rhs, &lo, &hi, &sol.duals);
                if (certified - value).abs() > 1e-7 {
                    return Err(format!("seed {seed}: dual bound {certified} vs optimum {value}"));
                }
                let mut probe = lp.clone();
                probe.cold_start();
                let bounded = probe.solve(Some(value - 0.25)).map_err(|e| e.to_string())?;
                if bounded.value > value + 1e-7
                    || (bounded.status == LpStatus::BoundExceeded && bounded.value < value - 0.25 - 1e-9)
                {
                    return Err(format!("seed {seed}: early termination reported {}", bounded.value));
                }
            }
        }
    }
    Ok(batches)
}

/// Every cut found at `p` (original and redundant, no cutoff) is violated by
/// `p` and satisfied by every codeword in `words`. Returns the number of cuts.
pub fn check_cut_validity(code: &LinearCode, words: &[Vec<u8>], p: &[f64]) -> Result<usize, String> {
    let none = mld_core::cuts::Cutoff::none();
    let mut cuts = mld_core::cuts::original_cuts(code, p, none);
    cuts.extend(mld_core::cuts::redundant_cut_round(code, p, none));
    for cut in &cuts {
        if cut.violation(p) <= 0.0 {
            return Err(format!("cut {cut:?} not violated at {p:?}"));
        }
        if let Some(w) = words.iter().find(|w| !cut.holds_for_bits(w)) {
            return Err(format!("cut {cut:?} excludes codeword {w:?}"));
        }
    }
    Ok(cuts.len())
}

/// The adaptive LP bound under fixings `f` never exceeds the constrained ML
/// objective `ml`, and equals it when the relaxation is integral.
pub fn check_zs_bound(code: &LinearCode, llr: &[f64], f: &ConstraintSet, ml: f64) -> Result<(), String> {
    let params = ZsParams::default();
    let mut lp = LpProblem::new(llr, params.purge_threshold);
    let r = zs_decode(code, f, &params, None, false, &mut lp).map_err(|e| e.to_string())?;
    if ml.is_finite() && r.value > ml + 1e-7 {
        return Err(format!("zs bound {} above ML {ml}", r.value));
    }
    if ml.is_finite() && r.status == LpStatus::Optimal && r.integral
        && ((r.value - ml).abs() > 1e-7 || !is_integral(&r.point, 0.0)) {
            return Err(format!("integral relaxation {} differs from ML {ml}", r.value));
        }
    let mut lp = LpProblem::new(llr, params.purge_threshold);
    let bounded = zs_decode(code, f, &params, Some(ml - 0.1), false, &mut lp).map_err(|e| e.to_string())?;
    if ml.is_finite() && bounded.value > ml + 1e-7 {
        return Err(format!("bounded zs value {} above ML {ml}", bounded.value));
    }
    Ok(())
}
