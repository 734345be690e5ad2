//! Separation of parity inequalities and the adaptive cutting-plane LP
//! decoder that supplies lower bounds to the search.

use serde::{Deserialize, Serialize};

use crate::code::{ConstraintSet, LinearCode};
use crate::error::{DecodeError, LpError};
use crate::lp::{CutInequality, LpProblem, LpStatus};

/// Violations at or below this are treated as satisfied.
const MIN_VIOLATION: f64 = 1e-6;

/// How far a point must lie beyond a cut's hyperplane for the cut to be kept.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub enum CutoffMetric {
    /// Distance in the l1 norm, which equals the violation since every
    /// coefficient is +-1.
    #[default]
    L1,
    /// Euclidean distance, the violation divided by `sqrt(|N(j)|)`.
    Euclidean,
}

impl CutoffMetric {
    pub fn distance(self, violation: f64, support: usize) -> f64 {
        match self {
            CutoffMetric::L1 => violation,
            CutoffMetric::Euclidean => violation / (support as f64).sqrt(),
        }
    }
}

/// A cutoff threshold together with the metric it is measured in.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Cutoff {
    pub gamma: f64,
    pub metric: CutoffMetric,
}

impl Cutoff {
    pub fn l1(gamma: f64) -> Self {
        Cutoff { gamma, metric: CutoffMetric::L1 }
    }

    pub fn euclidean(gamma: f64) -> Self {
        Cutoff { gamma, metric: CutoffMetric::Euclidean }
    }

    /// Accepts every violated inequality.
    pub fn none() -> Self {
        Cutoff::l1(0.0)
    }

    fn admits(self, violation: f64, support: usize) -> bool {
        violation > MIN_VIOLATION && self.metric.distance(violation, support) >= self.gamma
    }
}

/// Tuning of the cutting-plane loop.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ZsParams {
    /// Purge inactive cuts once the LP holds more than this many (`T`).
    pub purge_threshold: usize,
    /// Redundant-check rounds per call on ordinary nodes (`R`).
    pub max_redundant_rounds: usize,
    /// Redundant-check rounds per call on best-bound nodes (`R^bb`).
    pub max_redundant_rounds_best_bound: usize,
    /// Minimum distance from the point to a cut's hyperplane (`gamma`).
    pub cutoff: f64,
    pub cutoff_metric: CutoffMetric,
    pub integrality_tol: f64,
}

impl Default for ZsParams {
    fn default() -> Self {
        ZsParams {
            purge_threshold: 100,
            max_redundant_rounds: 5,
            max_redundant_rounds_best_bound: 100,
            cutoff: 0.2,
            cutoff_metric: CutoffMetric::L1,
            integrality_tol: 1e-5,
        }
    }
}

impl ZsParams {
    pub fn cut_filter(&self) -> Cutoff {
        Cutoff { gamma: self.cutoff, metric: self.cutoff_metric }
    }

    pub fn validate(&self) -> Result<(), DecodeError> {
        let bad = |m: &str| Err(DecodeError::InvalidParams(m.to_string()));
        if self.purge_threshold < 1 {
            return bad("purge threshold T must be >= 1");
        }
        if self.max_redundant_rounds_best_bound < self.max_redundant_rounds {
            return bad("R^bb must be >= R");
        }
        if !(self.cutoff >= 0.0) {
            return bad("cutoff gamma must be >= 0");
        }
        if !(self.integrality_tol > 0.0 && self.integrality_tol < 0.5) {
            return bad("integrality tolerance must lie in (0, 0.5)");
        }
        Ok(())
    }
}

/// Outcome of one cutting-plane decode.
#[derive(Clone, Debug)]
pub struct ZsResult {
    pub point: Vec<f64>,
    /// Lower bound on the best objective among codewords consistent with the
    /// fixings (`+inf` when infeasible).
    pub value: f64,
    pub integral: bool,
    pub status: LpStatus,
    pub lp_solves: usize,
    pub redundant_rounds: usize,
    /// Dual multipliers of the final LP solve, aligned with the LP's cuts at return.
    pub duals: Vec<f64>,
}

pub fn is_integral(p: &[f64], tol: f64) -> bool {
    p.iter().all(|&x| x.abs() <= tol || (x - 1.0).abs() <= tol)
}

pub fn round_point(p: &[f64]) -> Vec<u8> {
    p.iter().map(|&x| u8::from(x > 0.5)).collect()
}

/// Most violated parity inequality of the check with neighborhood `check` at `p`.
///
/// Returned only if `p` lies at least `cutoff.gamma` beyond its hyperplane.
pub fn find_cut(check: &[usize], p: &[f64], cutoff: Cutoff) -> Option<CutInequality> {
    let (odd, violation) = most_violated_subset(check, p)?;
    cutoff.admits(violation, check.len()).then(|| CutInequality::new(check.to_vec(), odd))
}

/// The odd subset of `check` with the largest violation, and that violation.
pub fn most_violated_subset(check: &[usize], p: &[f64]) -> Option<(Vec<usize>, f64)> {
    if check.is_empty() {
        return None;
    }
    let mut in_v: Vec<bool> = check.iter().map(|&i| p[i] > 0.5).collect();
    if in_v.iter().filter(|&&b| b).count() % 2 == 0 {
        // Toggle the coordinate closest to 1/2 (smallest index on ties); it
        // costs the least violation.
        let t = (0..check.len())
            .min_by(|&a, &b| {
                let da = (p[check[a]] - 0.5).abs();
                let db = (p[check[b]] - 0.5).abs();
                da.total_cmp(&db).then(a.cmp(&b))
            })
            .expect("nonempty");
        in_v[t] = !in_v[t];
    }
    let mut odd = Vec::new();
    let mut lhs = 0.0;
    for (t, &i) in check.iter().enumerate() {
        if in_v[t] {
            odd.push(i);
            lhs += p[i];
        } else {
            lhs -= p[i];
        }
    }
    let violation = lhs - (odd.len() as f64 - 1.0);
    Some((odd, violation))
}

/// Runs [`find_cut`] on every row of `code`'s parity-check matrix.
pub fn original_cuts(code: &LinearCode, p: &[f64], cutoff: Cutoff) -> Vec<CutInequality> {
    code.neighborhoods().iter().filter_map(|nj| find_cut(nj, p, cutoff)).collect()
}

/// Cuts from redundant checks: `H` is brought to reduced row echelon form with
/// the most fractional columns of `p` eliminated first, and every resulting row
/// is searched. Integral points yield no cuts.
pub fn redundant_cut_round(code: &LinearCode, p: &[f64], cutoff: Cutoff) -> Vec<CutInequality> {
    if is_integral(p, 0.0) {
        return Vec::new();
    }
    let mut order: Vec<usize> = (0..code.n()).collect();
    order.sort_by(|&a, &b| (p[a] - 0.5).abs().total_cmp(&(p[b] - 0.5).abs()).then(a.cmp(&b)));
    let rref = code.parity_check().rref(&order);
    (0..rref.rank())
        .filter_map(|r| find_cut(&rref.matrix.row_support(r), p, cutoff))
        .collect()
}

/// Adaptive LP decoding with the given fixings on a persistent LP.
///
/// The loop solves the LP, stops on an integral codeword, otherwise adds
/// violated inequalities from the rows of `H`; when none pass the cutoff it
/// spends one redundant-check round, at most `R` (or `R^bb` when
/// `best_bound_node`) per call. `bound` enables early termination once the LP
/// value provably reaches it.
pub fn zs_decode(
    code: &LinearCode,
    f: &ConstraintSet,
    params: &ZsParams,
    bound: Option<f64>,
    best_bound_node: bool,
    lp: &mut LpProblem,
) -> Result<ZsResult, LpError> {
    lp.set_fixings(f);
    let max_rounds = if best_bound_node { params.max_redundant_rounds_best_bound } else { params.max_redundant_rounds };
    let mut rounds = 0;
    let mut solves = 0;
    loop {
        let sol = lp.solve(bound)?;
        solves += 1;
        let duals = sol.duals.clone();
        let done = |integral, status, value: f64, point: Vec<f64>, rounds| ZsResult {
            point,
            value,
            integral,
            status,
            lp_solves: solves,
            redundant_rounds: rounds,
            duals,
        };
        match sol.status {
            LpStatus::Infeasible => return Ok(done(false, LpStatus::Infeasible, f64::INFINITY, sol.point, rounds)),
            LpStatus::BoundExceeded => return Ok(done(false, LpStatus::BoundExceeded, sol.value, sol.point, rounds)),
            LpStatus::Optimal => {}
        }

        let cuts = if is_integral(&sol.point, params.integrality_tol) {
            let c = round_point(&sol.point);
            if code.is_codeword(&c).expect("length matches") {
                let mut point = sol.point;
                for (x, &b) in point.iter_mut().zip(&c) {
                    *x = f64::from(b);
                }
                return Ok(done(true, LpStatus::Optimal, sol.value, point, rounds));
            }
            // An integral non-codeword violates some check by exactly 1; add
            // those cuts regardless of the cutoff.
            original_cuts(code, &sol.point, Cutoff::none())
        } else {
            let mut cuts = original_cuts(code, &sol.point, params.cut_filter());
            if cuts.is_empty() {
                if rounds >= max_rounds {
                    return Ok(done(false, LpStatus::Optimal, sol.value, sol.point, rounds));
                }
                rounds += 1;
                cuts = redundant_cut_round(code, &sol.point, params.cut_filter());
                if cuts.is_empty() {
                    return Ok(done(false, LpStatus::Optimal, sol.value, sol.point, rounds));
                }
            }
            cuts
        };
        lp.purge_inactive(&sol);
        lp.add_cuts(&cuts);
    }
}
