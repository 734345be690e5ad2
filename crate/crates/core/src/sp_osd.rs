//! Upper bounds: flooding sum-product decoding followed by order-`i`
//! re-encoding of the most reliable basis.

use serde::{Deserialize, Serialize};

use crate::channel::objective_bits;
use crate::code::{ConstraintSet, LinearCode};
use crate::cuts::{zs_decode, ZsParams, ZsResult};
use crate::error::{DecodeError, LpError};
use crate::gf2::{bit_of, pack_bits, BitMatrix};
use crate::lp::LpProblem;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpConfig {
    pub max_iterations: usize,
    /// Saturation magnitude of every message.
    pub llr_clamp: f64,
    pub reencode_order: usize,
}

impl Default for SpConfig {
    fn default() -> Self {
        SpConfig { max_iterations: 50, llr_clamp: 50.0, reencode_order: 2 }
    }
}

impl SpConfig {
    pub fn validate(&self, k: usize) -> Result<(), DecodeError> {
        if self.max_iterations < 1 {
            return Err(DecodeError::InvalidParams("sum-product needs at least one iteration".into()));
        }
        if !(self.llr_clamp > 0.0) {
            return Err(DecodeError::InvalidParams("LLR clamp must be positive".into()));
        }
        if self.reencode_order > k {
            return Err(DecodeError::InvalidParams(format!(
                "re-encoding order {} exceeds dimension {k}",
                self.reencode_order
            )));
        }
        Ok(())
    }
}

/// A codeword and its objective under the channel LLRs.
#[derive(Clone, Debug, PartialEq)]
pub struct Candidate {
    pub codeword: Vec<u8>,
    pub objective: f64,
}

#[derive(Clone, Debug)]
pub struct SpOutput {
    /// Posterior LLRs; positions with an infinite input stay infinite.
    pub posterior: Vec<f64>,
    pub hard_decision: Vec<u8>,
    pub iterations: usize,
    pub converged: bool,
}

/// Flooding-schedule sum-product decoding.
///
/// Entries of `llr` may be `+inf`/`-inf` to pin a position to 0/1.
pub fn sp_decode(code: &LinearCode, llr: &[f64], cfg: &SpConfig) -> SpOutput {
    let n = code.n();
    assert_eq!(llr.len(), n, "sp_decode: length mismatch");
    let clamp = cfg.llr_clamp;
    let sat = |x: f64| x.clamp(-clamp, clamp);

    let checks = code.neighborhoods();
    let mut var_edges: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut edge_var = Vec::new();
    let mut check_start = Vec::with_capacity(checks.len() + 1);
    for nj in checks {
        check_start.push(edge_var.len());
        for &i in nj {
            var_edges[i].push(edge_var.len());
            edge_var.push(i);
        }
    }
    check_start.push(edge_var.len());

    let mut v2c: Vec<f64> = edge_var.iter().map(|&i| sat(llr[i])).collect();
    let mut c2v = vec![0.0; edge_var.len()];
    let mut posterior = llr.to_vec();
    let mut hard = vec![0u8; n];
    let mut prefix = Vec::new();

    let mut iterations = 0;
    let mut converged = false;
    while iterations < cfg.max_iterations {
        iterations += 1;
        for j in 0..checks.len() {
            let (a, b) = (check_start[j], check_start[j + 1]);
            prefix.clear();
            let mut acc = 1.0;
            for &v in &v2c[a..b] {
                prefix.push(acc);
                acc *= (0.5 * v).tanh();
            }
            let mut suffix = 1.0;
            for e in (a..b).rev() {
                let prod = prefix[e - a] * suffix;
                c2v[e] = sat(2.0 * prod.signum() * prod.abs().atanh());
                suffix *= (0.5 * v2c[e]).tanh();
            }
        }
        for i in 0..n {
            if llr[i].is_infinite() {
                posterior[i] = llr[i];
                for &e in &var_edges[i] {
                    v2c[e] = sat(llr[i]);
                }
            } else {
                let total = llr[i] + var_edges[i].iter().map(|&e| c2v[e]).sum::<f64>();
                posterior[i] = total;
                for &e in &var_edges[i] {
                    v2c[e] = sat(total - c2v[e]);
                }
            }
            hard[i] = u8::from(posterior[i] < 0.0);
        }
        if code.is_codeword(&hard).expect("length checked") {
            converged = true;
            break;
        }
    }
    SpOutput { posterior, hard_decision: hard, iterations, converged }
}

/// Order-`order` re-encoding.
///
/// Positions in `fixed` come first in the reliability order, then the rest by
/// `|posterior|` descending. Every pattern of at most `order` flips on the
/// unconstrained part of the most reliable basis is re-encoded and scored with
/// the channel `llr`. Returns `None` when no admissible candidate remains
/// (inconsistent fixings, or `exclude` was the only one).
pub fn osd_reencode(
    code: &LinearCode,
    llr: &[f64],
    posterior: &[f64],
    order: usize,
    fixed: &ConstraintSet,
    exclude: Option<&[u8]>,
) -> Option<Candidate> {
    let n = code.n();
    assert_eq!(llr.len(), n);
    assert_eq!(posterior.len(), n);

    let mut col_order: Vec<usize> = fixed.iter().map(|(p, _)| p).collect();
    let mut free: Vec<usize> = (0..n).filter(|&i| !fixed.is_constrained(i)).collect();
    free.sort_by(|&a, &b| posterior[b].abs().total_cmp(&posterior[a].abs()).then(a.cmp(&b)));
    col_order.extend(free);

    let rref = code.generator().rref(&col_order);
    let g: &BitMatrix = &rref.matrix;
    let words = g.row_words(0).len();

    let mut base = vec![0u64; words];
    let mut flip_rows = Vec::new();
    for (r, &p) in rref.pivots.iter().enumerate() {
        let bit = match fixed.value(p) {
            Some(v) => v == 1,
            None => {
                flip_rows.push(r);
                posterior[p] < 0.0
            }
        };
        if bit {
            for (a, w) in base.iter_mut().zip(g.row_words(r)) {
                *a ^= *w;
            }
        }
    }
    if fixed.iter().any(|(p, v)| bit_of(&base, p) != (v == 1)) {
        return None;
    }
    let exclude = exclude.map(pack_bits);

    let score = |c: &[u64]| -> f64 {
        let mut s = 0.0;
        for (i, &l) in llr.iter().enumerate() {
            if bit_of(c, i) {
                s += l;
            }
        }
        s
    };

    let mut best: Option<(Vec<u64>, f64)> = None;
    let mut consider = |c: &[u64]| {
        if exclude.as_deref() == Some(c) {
            return;
        }
        let v = score(c);
        if best.as_ref().is_none_or(|(_, b)| v < *b) {
            best = Some((c.to_vec(), v));
        }
    };

    // Patterns by weight, then lexicographically by row index.
    let order = order.min(flip_rows.len());
    let mut cur = base.clone();
    consider(&cur);
    let mut idx: Vec<usize> = Vec::with_capacity(order);
    for w in 1..=order {
        idx.clear();
        idx.extend(0..w);
        loop {
            cur.copy_from_slice(&base);
            for &t in &idx {
                for (a, x) in cur.iter_mut().zip(g.row_words(flip_rows[t])) {
                    *a ^= *x;
                }
            }
            consider(&cur);
            // Advance to the next w-combination of flip_rows.
            let m = flip_rows.len();
            let mut t = w;
            while t > 0 && idx[t - 1] == m - w + t - 1 {
                t -= 1;
            }
            if t == 0 {
                break;
            }
            idx[t - 1] += 1;
            for s in t..w {
                idx[s] = idx[s - 1] + 1;
            }
        }
    }

    best.map(|(c, _)| {
        let codeword: Vec<u8> = (0..n).map(|i| u8::from(bit_of(&c, i))).collect();
        let objective = objective_bits(llr, &codeword);
        Candidate { codeword, objective }
    })
}

/// LLRs with `+inf` on 0-fixed and `-inf` on 1-fixed positions.
pub fn constrained_llr(llr: &[f64], fixed: &ConstraintSet) -> Vec<f64> {
    let mut out = llr.to_vec();
    for (p, v) in fixed.iter() {
        out[p] = if v == 0 { f64::INFINITY } else { f64::NEG_INFINITY };
    }
    out
}

/// Heuristic upper bound and LP lower bound for the subproblem fixed by `fixed`.
#[derive(Clone, Debug)]
pub struct LubdOutput {
    pub candidate: Option<Candidate>,
    pub relaxation: ZsResult,
    pub sp_iterations: usize,
}

/// Runs sum-product with re-encoding on the constrained LLRs and adaptive LP
/// decoding with the same fixings.
#[allow(clippy::too_many_arguments)]
pub fn lubd(
    code: &LinearCode,
    llr: &[f64],
    fixed: &ConstraintSet,
    sp: &SpConfig,
    zs: &ZsParams,
    bound: Option<f64>,
    best_bound_node: bool,
    exclude: Option<&[u8]>,
    lp: &mut LpProblem,
) -> Result<LubdOutput, LpError> {
    let constrained = constrained_llr(llr, fixed);
    let out = sp_decode(code, &constrained, sp);
    let candidate = osd_reencode(code, llr, &out.posterior, sp.reencode_order, fixed, exclude);
    let relaxation = zs_decode(code, fixed, zs, bound, best_bound_node, lp)?;
    Ok(LubdOutput { candidate, relaxation, sp_iterations: out.iterations })
}
