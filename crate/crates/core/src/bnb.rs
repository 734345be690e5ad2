//! Branch-and-bound maximum-likelihood decoding and minimum-distance search.

use serde::{Deserialize, Serialize};
use web_time::{Duration, Instant};

use crate::channel::objective_bits;
use crate::code::{weight, ConstraintSet, LinearCode};
use crate::cuts::{round_point, ZsParams};
use crate::error::{CodeError, DecodeError};
use crate::lp::{LpProblem, LpStatus};
use crate::sp_osd::{lubd, SpConfig};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Mode {
    MlDecode,
    /// Minimum-weight nonzero codeword; objective values are integers.
    MinDistance,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BnbParams {
    /// Best-bound selection is considered every `M` iterations.
    pub best_bound_period: usize,
    /// ...and only if the previous node's bound is below `tau - delta`.
    pub best_bound_margin: f64,
    pub sp: SpConfig,
    pub zs: ZsParams,
    /// Slack in the integer pruning threshold `tau - 1 + epsilon` of minimum-distance mode.
    pub epsilon: f64,
    /// Children start with the parent's bound instead of `-inf`.
    pub inherit_parent_bound: bool,
    /// Build a new LP for every node instead of re-optimizing one shared LP.
    pub fresh_lp_per_node: bool,
}

impl Default for BnbParams {
    fn default() -> Self {
        BnbParams {
            best_bound_period: 30,
            best_bound_margin: 2.0,
            sp: SpConfig::default(),
            zs: ZsParams::default(),
            epsilon: 1e-5,
            inherit_parent_bound: true,
            fresh_lp_per_node: false,
        }
    }
}

impl BnbParams {
    /// Defaults tuned for minimum-distance computation.
    pub fn min_distance_defaults() -> Self {
        BnbParams {
            best_bound_period: 120,
            zs: ZsParams {
                max_redundant_rounds: 1,
                max_redundant_rounds_best_bound: 1,
                cutoff: 0.3,
                ..ZsParams::default()
            },
            ..BnbParams::default()
        }
    }

    pub fn validate(&self, code: &LinearCode) -> Result<(), DecodeError> {
        if self.best_bound_period < 1 {
            return Err(DecodeError::InvalidParams("M must be >= 1".into()));
        }
        if !(self.best_bound_margin >= 0.0) {
            return Err(DecodeError::InvalidParams("delta must be >= 0".into()));
        }
        if !(self.epsilon > 0.0 && self.epsilon < 1.0) {
            return Err(DecodeError::InvalidParams("epsilon must lie in (0, 1)".into()));
        }
        self.sp.validate(code.k())?;
        self.zs.validate()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DecodeOutcome {
    pub codeword: Vec<u8>,
    pub objective: f64,
    pub nodes_processed: usize,
    pub lp_solves: usize,
    pub wall_time: Duration,
    pub optimality_certified: bool,
    pub early_stopped: bool,
}

/// A node of the search tree.
#[derive(Clone, Debug)]
pub struct Node {
    pub fixings: ConstraintSet,
    pub parent: Option<usize>,
    pub child_bit: u8,
    pub bound: f64,
    pub child_bounds: [f64; 2],
    pub depth: usize,
}

/// Chooses an entry of the open list, given the selection keys in insertion
/// order. Returns the index into the list and whether the best-bound rule fired.
pub fn select_node(
    keys: &[f64],
    iteration: usize,
    previous_bound: f64,
    tau: f64,
    period: usize,
    margin: f64,
) -> (usize, bool) {
    assert!(!keys.is_empty(), "select_node on an empty list");
    let last = keys.len() - 1;
    if iteration.is_multiple_of(period) && previous_bound < tau - margin {
        let mut best = last;
        for i in (0..last).rev() {
            if keys[i] < keys[best] {
                best = i;
            }
        }
        (best, true)
    } else {
        (last, false)
    }
}

/// Unconstrained position with `p_i` closest to 1/2, smallest index on ties.
pub fn branch_position(fixed: &ConstraintSet, p: &[f64]) -> Option<usize> {
    let mut best: Option<(usize, f64)> = None;
    for (i, &x) in p.iter().enumerate() {
        if fixed.is_constrained(i) {
            continue;
        }
        let d = (x - 0.5).abs();
        if best.is_none_or(|(_, bd)| d < bd) {
            best = Some((i, d));
        }
    }
    best.map(|(i, _)| i)
}

/// State of one branch-and-bound run; advance it with [`Search::step`].
pub struct Search<'a> {
    code: &'a LinearCode,
    llr: Vec<f64>,
    params: BnbParams,
    mode: Mode,
    early_stop: Option<f64>,
    exclude: Option<Vec<u8>>,
    nodes: Vec<Node>,
    open: Vec<usize>,
    lp: LpProblem,
    tau: f64,
    incumbent: Option<Vec<u8>>,
    iterations: usize,
    lp_solves: usize,
    previous_bound: f64,
    early_stopped: bool,
    started: Instant,
}

impl<'a> Search<'a> {
    pub fn new(
        code: &'a LinearCode,
        llr: &[f64],
        params: &BnbParams,
        mode: Mode,
        root: ConstraintSet,
        early_stop: Option<f64>,
    ) -> Result<Self, DecodeError> {
        if llr.len() != code.n() {
            return Err(CodeError::LengthMismatch { expected: code.n(), found: llr.len() }.into());
        }
        if let Some((index, &value)) = llr.iter().enumerate().find(|(_, v)| !v.is_finite()) {
            return Err(DecodeError::NonFiniteLlr { index, value });
        }
        params.validate(code)?;
        if let Some((p, _)) = root.iter().find(|&(p, _)| p >= code.n()) {
            return Err(CodeError::PositionOutOfRange { position: p, n: code.n() }.into());
        }
        let exclude = (mode == Mode::MinDistance).then(|| vec![0u8; code.n()]);
        let depth = root.len();
        Ok(Search {
            code,
            llr: llr.to_vec(),
            lp: LpProblem::new(llr, params.zs.purge_threshold),
            params: params.clone(),
            mode,
            early_stop,
            exclude,
            nodes: vec![Node {
                fixings: root,
                parent: None,
                child_bit: 0,
                bound: f64::NEG_INFINITY,
                child_bounds: [f64::NEG_INFINITY; 2],
                depth,
            }],
            open: vec![0],
            tau: f64::INFINITY,
            incumbent: None,
            iterations: 0,
            lp_solves: 0,
            previous_bound: f64::NEG_INFINITY,
            early_stopped: false,
            started: Instant::now(),
        })
    }

    /// Pruning threshold: `tau`, or `tau - 1 + epsilon` in minimum-distance mode.
    pub fn threshold(&self) -> f64 {
        match self.mode {
            Mode::MlDecode => self.tau,
            Mode::MinDistance => self.tau - 1.0 + self.params.epsilon,
        }
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }

    pub fn root_bound(&self) -> f64 {
        self.nodes[0].bound
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn open_nodes(&self) -> &[usize] {
        &self.open
    }

    pub fn iterations(&self) -> usize {
        self.iterations
    }

    pub fn is_finished(&self) -> bool {
        self.early_stopped || self.open.is_empty() || self.root_bound() >= self.threshold()
    }

    fn key(&self, idx: usize) -> f64 {
        let node = &self.nodes[idx];
        match node.parent {
            Some(p) if self.params.inherit_parent_bound => node.bound.max(self.nodes[p].bound),
            _ => node.bound,
        }
    }

    fn offer(&mut self, c: Vec<u8>, objective: f64) {
        if objective < self.tau {
            self.tau = objective;
            self.incumbent = Some(c);
            if let Some(t) = self.early_stop {
                if self.tau < t {
                    self.early_stopped = true;
                }
            }
        }
    }

    /// One pass of the main loop. Does nothing once the search is finished.
    pub fn step(&mut self) -> Result<(), DecodeError> {
        if self.is_finished() {
            return Ok(());
        }
        self.iterations += 1;
        let keys: Vec<f64> = self.open.iter().map(|&i| self.key(i)).collect();
        let (pos, best_bound) = select_node(
            &keys,
            self.iterations,
            self.previous_bound,
            self.tau,
            self.params.best_bound_period,
            self.params.best_bound_margin,
        );
        let idx = self.open.remove(pos);
        let key = keys[pos];
        self.nodes[idx].bound = key;

        let fixed = self.nodes[idx].fixings.clone();
        if !self.code.is_valid(&fixed) {
            self.nodes[idx].bound = f64::INFINITY;
        } else if key < self.threshold() {
            self.process(idx, &fixed, best_bound)?;
        }
        self.previous_bound = self.nodes[idx].bound;
        self.propagate(idx);
        Ok(())
    }

    fn process(&mut self, idx: usize, fixed: &ConstraintSet, best_bound: bool) -> Result<(), DecodeError> {
        let bound = self.threshold();
        let bound = bound.is_finite().then_some(bound);
        let mut fresh;
        let lp = if self.params.fresh_lp_per_node {
            fresh = LpProblem::new(&self.llr, self.params.zs.purge_threshold);
            &mut fresh
        } else {
            &mut self.lp
        };
        let out = lubd(
            self.code,
            &self.llr,
            fixed,
            &self.params.sp,
            &self.params.zs,
            bound,
            best_bound,
            self.exclude.as_deref(),
            lp,
        )?;
        self.lp_solves += out.relaxation.lp_solves;
        if let Some(c) = out.candidate {
            self.offer(c.codeword, c.objective);
            if self.early_stopped {
                return Ok(());
            }
        }

        let p = &out.relaxation;
        let node = &mut self.nodes[idx];
        node.bound = node.bound.max(p.value);
        if p.status == LpStatus::Infeasible {
            return Ok(());
        }

        let rounded = p.integral.then(|| round_point(&p.point));
        let accepted = match (&rounded, self.mode) {
            (Some(c), Mode::MinDistance) => weight(c) > 0,
            (Some(_), Mode::MlDecode) => true,
            (None, _) => false,
        };
        if accepted {
            let c = rounded.expect("accepted implies integral");
            let obj = objective_bits(&self.llr, &c);
            self.offer(c, obj);
        } else if p.status == LpStatus::Optimal && p.value < self.threshold() {
            let Some(branch) = branch_position(fixed, &p.point) else {
                // Every position is fixed and only the excluded word remains.
                self.nodes[idx].bound = f64::INFINITY;
                return Ok(());
            };
            let inherited = if self.params.inherit_parent_bound { self.nodes[idx].bound } else { f64::NEG_INFINITY };
            for bit in [0u8, 1] {
                let child = Node {
                    fixings: fixed.with(branch, bit),
                    parent: Some(idx),
                    child_bit: bit,
                    bound: inherited,
                    child_bounds: [f64::NEG_INFINITY; 2],
                    depth: self.nodes[idx].depth + 1,
                };
                self.nodes.push(child);
                self.open.push(self.nodes.len() - 1);
            }
        }
        Ok(())
    }

    fn propagate(&mut self, mut idx: usize) {
        while let Some(parent) = self.nodes[idx].parent {
            let (bit, b) = (self.nodes[idx].child_bit as usize, self.nodes[idx].bound);
            let pn = &mut self.nodes[parent];
            pn.child_bounds[bit] = pn.child_bounds[bit].max(b);
            let candidate = pn.child_bounds[0].min(pn.child_bounds[1]);
            if candidate > pn.bound {
                pn.bound = candidate;
                idx = parent;
            } else {
                break;
            }
        }
    }

    /// Runs to completion and returns the incumbent.
    pub fn run(mut self) -> Result<DecodeOutcome, DecodeError> {
        while !self.is_finished() {
            self.step()?;
        }
        Ok(self.finish())
    }

    pub fn finish(self) -> DecodeOutcome {
        let wall_time = self.started.elapsed();
        let (codeword, objective) = match self.incumbent {
            Some(c) => (c, self.tau),
            None => (Vec::new(), f64::INFINITY),
        };
        DecodeOutcome {
            codeword,
            objective,
            nodes_processed: self.iterations,
            lp_solves: self.lp_solves,
            wall_time,
            optimality_certified: !self.early_stopped,
            early_stopped: self.early_stopped,
        }
    }
}

/// Maximum-likelihood decoding: minimizes `sum_i llr_i c_i` over the code.
///
/// With `early_stop = Some(t)` the search ends as soon as a codeword with
/// objective below `t` is found; the result is then not certified.
pub fn ml_decode(
    code: &LinearCode,
    llr: &[f64],
    params: &BnbParams,
    early_stop: Option<f64>,
) -> Result<DecodeOutcome, DecodeError> {
    Search::new(code, llr, params, Mode::MlDecode, ConstraintSet::new(), early_stop)?.run()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MinDistanceResult {
    pub dmin: usize,
    pub witness: Vec<u8>,
    pub nodes_processed: usize,
    pub lp_solves: usize,
    pub wall_time: Duration,
}

/// Minimum distance by decoding the all-ones LLR vector with the zero word
/// excluded. `fix_first_bit` restricts the search to codewords with `c_0 = 1`,
/// which is exact for codes whose automorphism group is transitive.
pub fn min_distance(
    code: &LinearCode,
    params: &BnbParams,
    fix_first_bit: bool,
) -> Result<MinDistanceResult, DecodeError> {
    let root = if fix_first_bit { ConstraintSet::new().with(0, 1) } else { ConstraintSet::new() };
    let ones = vec![1.0; code.n()];
    let out = Search::new(code, &ones, params, Mode::MinDistance, root, None)?.run()?;
    if out.codeword.is_empty() {
        return Err(DecodeError::InvalidParams("no nonzero codeword satisfies the root fixings".into()));
    }
    Ok(MinDistanceResult {
        dmin: weight(&out.codeword),
        witness: out.codeword,
        nodes_processed: out.nodes_processed,
        lp_solves: out.lp_solves,
        wall_time: out.wall_time,
    })
}
