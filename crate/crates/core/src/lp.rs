//! Bounded-variable dual simplex for the decoding LPs
//!
//! ```text
//! minimize  c x   subject to   A x <= b,   lo <= x <= hi
//! ```
//!
//! where `lo`/`hi` are the unit box (collapsed to a point for fixed
//! positions) and the rows of `A` are parity inequalities. Every row gets a
//! slack `s >= 0`. The basis inverse is kept dense and updated with
//! product-form pivots, with a fresh factorization every
//! [`REFACTOR_INTERVAL`] pivots.
//!
//! The solver keeps its basis between calls. Appending rows (the new slacks
//! enter the basis) and changing variable bounds both preserve dual
//! feasibility, so re-optimization is a warm-started dual simplex. Because
//! the iterates are dual feasible, the objective of the current basic
//! solution is a valid lower bound on the LP optimum at every iteration;
//! this is what makes early termination against an upper bound sound.

use crate::code::ConstraintSet;
use crate::error::LpError;

pub const PRIMAL_TOL: f64 = 1e-9;
pub const DUAL_TOL: f64 = 1e-9;
pub const PIVOT_TOL: f64 = 1e-10;
/// A cut counts as active when its slack is at most this.
pub const ACTIVE_TOL: f64 = 1e-7;
const REFACTOR_INTERVAL: usize = 100;

/// The parity inequality `sum_{V} x_i - sum_{N(j) \ V} x_i <= |V| - 1` for an odd `V ⊆ N(j)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CutInequality {
    check: Vec<usize>,
    odd: Vec<usize>,
}

impl CutInequality {
    /// `check` is the neighborhood `N(j)`, `odd` the subset `V`. Both are sorted
    /// internally. Panics unless `V` is a nonempty odd subset of `N(j)`.
    pub fn new(mut check: Vec<usize>, mut odd: Vec<usize>) -> Self {
        check.sort_unstable();
        odd.sort_unstable();
        assert!(odd.len() % 2 == 1, "V must have odd size");
        assert!(odd.iter().all(|i| check.binary_search(i).is_ok()), "V must be a subset of N(j)");
        CutInequality { check, odd }
    }

    pub fn neighborhood(&self) -> &[usize] {
        &self.check
    }

    pub fn odd_subset(&self) -> &[usize] {
        &self.odd
    }

    pub fn rhs(&self) -> f64 {
        (self.odd.len() - 1) as f64
    }

    /// `(position, coefficient)` pairs, coefficient `+1` on `V` and `-1` elsewhere in `N(j)`.
    pub fn coefficients(&self) -> impl Iterator<Item = (usize, f64)> + '_ {
        self.check
            .iter()
            .map(move |&i| (i, if self.odd.binary_search(&i).is_ok() { 1.0 } else { -1.0 }))
    }

    pub fn lhs(&self, x: &[f64]) -> f64 {
        self.coefficients().map(|(i, a)| a * x[i]).sum()
    }

    /// `lhs(x) - rhs`; positive when `x` violates the inequality.
    pub fn violation(&self, x: &[f64]) -> f64 {
        self.lhs(x) - self.rhs()
    }

    pub fn holds_for_bits(&self, c: &[u8]) -> bool {
        let lhs: i64 = self.coefficients().map(|(i, a)| a as i64 * i64::from(c[i])).sum();
        lhs < self.odd.len() as i64
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    /// The dual bound reached the caller's threshold before optimality.
    BoundExceeded,
}

#[derive(Clone, Debug)]
pub struct LpSolution {
    /// Structural values. For `BoundExceeded` this is the last (primal
    /// infeasible) basic solution; for `Infeasible` it is meaningless.
    pub point: Vec<f64>,
    /// Optimum, or a certified lower bound when `BoundExceeded`.
    pub value: f64,
    pub status: LpStatus,
    /// Indices of cuts tight at `point`.
    pub active_cuts: Vec<usize>,
    /// Multipliers of the cut rows (all `<= 0`); empty when infeasible. Any
    /// such vector certifies the lower bound `y . rhs + sum_j min(d_j lo_j, d_j hi_j)`
    /// with `d = cost - y A`.
    pub duals: Vec<f64>,
    pub iterations: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum VarState {
    Basic,
    Lower,
    Upper,
}

/// Snapshot of a simplex basis for later warm starts.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BasisToken {
    basis: Vec<usize>,
    state: Vec<VarState>,
}

/// An LP over the unit box with fixings and accumulated cuts, plus the
/// simplex basis used to re-optimize it.
#[derive(Clone, Debug)]
pub struct LpProblem {
    n: usize,
    cost: Vec<f64>,
    lo: Vec<f64>,
    hi: Vec<f64>,
    cuts: Vec<CutInequality>,
    rows: Vec<Vec<(usize, f64)>>,
    rhs: Vec<f64>,
    cols: Vec<Vec<(usize, f64)>>,
    purge_threshold: usize,

    basis: Vec<usize>,
    state: Vec<VarState>,
    binv: Vec<f64>,
    since_refactor: usize,

    xb: Vec<f64>,
    y: Vec<f64>,
    d: Vec<f64>,
    alpha: Vec<f64>,
    col: Vec<f64>,
}

impl LpProblem {
    /// Box-only problem `min cost . x` over `[0,1]^n`.
    pub fn new(cost: &[f64], purge_threshold: usize) -> Self {
        let n = cost.len();
        let mut p = LpProblem {
            n,
            cost: cost.to_vec(),
            lo: vec![0.0; n],
            hi: vec![1.0; n],
            cuts: Vec::new(),
            rows: Vec::new(),
            rhs: Vec::new(),
            cols: vec![Vec::new(); n],
            purge_threshold,
            basis: Vec::new(),
            state: Vec::new(),
            binv: Vec::new(),
            since_refactor: 0,
            xb: Vec::new(),
            y: Vec::new(),
            d: Vec::new(),
            alpha: Vec::new(),
            col: Vec::new(),
        };
        p.cold_start();
        p
    }

    pub fn num_vars(&self) -> usize {
        self.n
    }

    pub fn num_cuts(&self) -> usize {
        self.cuts.len()
    }

    pub fn cuts(&self) -> &[CutInequality] {
        &self.cuts
    }

    pub fn objective(&self) -> &[f64] {
        &self.cost
    }

    pub fn purge_threshold(&self) -> usize {
        self.purge_threshold
    }

    fn m(&self) -> usize {
        self.rows.len()
    }

    /// Resets every structural bound to `[0,1]` and pins the positions in `f`.
    pub fn set_fixings(&mut self, f: &ConstraintSet) {
        self.lo.fill(0.0);
        self.hi.fill(1.0);
        for (i, v) in f.iter() {
            self.lo[i] = f64::from(v);
            self.hi[i] = f64::from(v);
        }
    }

    /// Appends cuts; the current basis stays dual feasible.
    pub fn add_cuts(&mut self, new_cuts: &[CutInequality]) {
        if new_cuts.is_empty() {
            return;
        }
        let m_old = self.m();
        let m_new = m_old + new_cuts.len();
        let n = self.n;

        // Coefficient of each new row on the current basic variables.
        let mut binv = vec![0.0; m_new * m_new];
        for r in 0..m_old {
            binv[r * m_new..r * m_new + m_old].copy_from_slice(&self.binv[r * m_old..(r + 1) * m_old]);
        }
        let mut pos_of_struct = vec![usize::MAX; n];
        for (p, &v) in self.basis.iter().enumerate() {
            if v < n {
                pos_of_struct[v] = p;
            }
        }

        for (t, cut) in new_cuts.iter().enumerate() {
            let r = m_old + t;
            let row: Vec<(usize, f64)> = cut.coefficients().collect();
            // New binv row: -a_B^T B^{-1}, then 1 on the diagonal.
            for &(i, a) in &row {
                let p = pos_of_struct[i];
                if p != usize::MAX {
                    for c in 0..m_old {
                        binv[r * m_new + c] -= a * self.binv[p * m_old + c];
                    }
                }
            }
            binv[r * m_new + r] = 1.0;
            for &(i, a) in &row {
                self.cols[i].push((r, a));
            }
            self.rhs.push(cut.rhs());
            self.rows.push(row);
            self.cuts.push(cut.clone());
        }

        for r in m_old..m_new {
            self.basis.push(n + r);
            self.state.push(VarState::Basic);
        }
        self.binv = binv;
    }

    /// Drops inactive cuts when there are more than `T` of them.
    /// Returns the number of cuts removed.
    pub fn purge_inactive(&mut self, solution: &LpSolution) -> usize {
        if self.cuts.len() <= self.purge_threshold {
            return 0;
        }
        let mut keep = vec![false; self.m()];
        for &r in &solution.active_cuts {
            keep[r] = true;
        }
        // A cut whose slack is nonbasic is tight by construction.
        for (r, k) in keep.iter_mut().enumerate() {
            if self.state[self.n + r] != VarState::Basic {
                *k = true;
            }
        }
        let removed = keep.iter().filter(|&&k| !k).count();
        if removed == 0 {
            return 0;
        }
        self.retain_rows(&keep);
        removed
    }

    fn retain_rows(&mut self, keep: &[bool]) {
        let n = self.n;
        let mut new_index = vec![usize::MAX; keep.len()];
        let mut next = 0;
        for (r, &k) in keep.iter().enumerate() {
            if k {
                new_index[r] = next;
                next += 1;
            }
        }
        let remap = |v: usize| if v < n { v } else { n + new_index[v - n] };

        let mut cuts = Vec::with_capacity(next);
        let mut rows = Vec::with_capacity(next);
        let mut rhs = Vec::with_capacity(next);
        for (r, &k) in keep.iter().enumerate() {
            if k {
                cuts.push(self.cuts[r].clone());
                rows.push(std::mem::take(&mut self.rows[r]));
                rhs.push(self.rhs[r]);
            }
        }
        self.cuts = cuts;
        self.rows = rows;
        self.rhs = rhs;
        self.rebuild_cols();

        let mut state: Vec<VarState> = self.state[..n].to_vec();
        for (r, &k) in keep.iter().enumerate() {
            if k {
                state.push(self.state[n + r]);
            }
        }
        let mut basis = Vec::with_capacity(next);
        for &v in &self.basis {
            if v >= n && !keep[v - n] {
                continue;
            }
            basis.push(remap(v));
        }
        self.state = state;
        if basis.len() == next {
            self.basis = basis;
            if self.refactor().is_ok() {
                return;
            }
        }
        self.cold_start();
    }

    fn rebuild_cols(&mut self) {
        for c in &mut self.cols {
            c.clear();
        }
        for (r, row) in self.rows.iter().enumerate() {
            for &(i, a) in row {
                self.cols[i].push((r, a));
            }
        }
    }

    /// Discards the basis: all slacks basic, structurals at their cheaper bound.
    pub fn cold_start(&mut self) {
        let (n, m) = (self.n, self.m());
        self.state = (0..n)
            .map(|j| if self.cost[j] >= 0.0 { VarState::Lower } else { VarState::Upper })
            .chain(std::iter::repeat_n(VarState::Basic, m))
            .collect();
        self.basis = (n..n + m).collect();
        self.binv = vec![0.0; m * m];
        for r in 0..m {
            self.binv[r * m + r] = 1.0;
        }
        self.since_refactor = 0;
    }

    pub fn basis_token(&self) -> BasisToken {
        BasisToken { basis: self.basis.clone(), state: self.state.clone() }
    }

    /// Restores a snapshot taken with the same set of rows. Returns false (and
    /// leaves the basis untouched) if the token does not fit.
    pub fn restore(&mut self, token: &BasisToken) -> bool {
        if token.basis.len() != self.m() || token.state.len() != self.n + self.m() {
            return false;
        }
        let saved = (std::mem::take(&mut self.basis), std::mem::take(&mut self.state), std::mem::take(&mut self.binv));
        self.basis = token.basis.clone();
        self.state = token.state.clone();
        if self.refactor().is_ok() {
            true
        } else {
            (self.basis, self.state, self.binv) = saved;
            false
        }
    }

    /// Recomputes the dense basis inverse.
    ///
    /// Only the block of tight rows against basic structurals is inverted; rows
    /// whose slack is basic follow by substitution.
    fn refactor(&mut self) -> Result<(), LpError> {
        let (n, m) = (self.n, self.m());
        let structural: Vec<(usize, usize)> =
            self.basis.iter().enumerate().filter(|&(_, &v)| v < n).map(|(p, &v)| (p, v)).collect();
        let mut slack_basic = vec![false; m];
        for &v in &self.basis {
            if v >= n {
                slack_basic[v - n] = true;
            }
        }
        let tight: Vec<usize> = (0..m).filter(|&r| !slack_basic[r]).collect();
        let s = structural.len();
        if tight.len() != s {
            return Err(LpError::Numerical("basis has the wrong shape".into()));
        }
        let mut tight_index = vec![usize::MAX; m];
        for (i, &r) in tight.iter().enumerate() {
            tight_index[r] = i;
        }

        // Gauss-Jordan on the s x s block A[tight, structural].
        let mut a = vec![0.0; s * s];
        for (t, &(_, v)) in structural.iter().enumerate() {
            for &(r, coef) in &self.cols[v] {
                if tight_index[r] != usize::MAX {
                    a[tight_index[r] * s + t] = coef;
                }
            }
        }
        let mut k = vec![0.0; s * s];
        for i in 0..s {
            k[i * s + i] = 1.0;
        }
        for c in 0..s {
            let (piv, best) = (c..s)
                .map(|r| (r, a[r * s + c].abs()))
                .fold((c, -1.0), |acc, x| if x.1 > acc.1 { x } else { acc });
            if best < 1e-11 {
                return Err(LpError::Numerical("singular basis".into()));
            }
            if piv != c {
                for j in 0..s {
                    a.swap(piv * s + j, c * s + j);
                    k.swap(piv * s + j, c * s + j);
                }
            }
            let d = 1.0 / a[c * s + c];
            for j in 0..s {
                a[c * s + j] *= d;
                k[c * s + j] *= d;
            }
            for r in 0..s {
                if r != c {
                    let f = a[r * s + c];
                    if f != 0.0 {
                        for j in 0..s {
                            a[r * s + j] -= f * a[c * s + j];
                            k[r * s + j] -= f * k[c * s + j];
                        }
                    }
                }
            }
        }
        // k = A11^{-1}: rows by structural order t, columns by tight-row order.

        let mut binv = vec![0.0; m * m];
        let mut t_of_var = vec![usize::MAX; n];
        for (t, &(p, v)) in structural.iter().enumerate() {
            t_of_var[v] = t;
            for (i, &r) in tight.iter().enumerate() {
                binv[p * m + r] = k[t * s + i];
            }
        }
        for (p, &v) in self.basis.iter().enumerate() {
            if v < n {
                continue;
            }
            let r = v - n;
            binv[p * m + r] = 1.0;
            for &(j, coef) in &self.rows[r] {
                let t = t_of_var[j];
                if t == usize::MAX {
                    continue;
                }
                for (i, &rr) in tight.iter().enumerate() {
                    binv[p * m + rr] -= coef * k[t * s + i];
                }
            }
        }
        self.binv = binv;
        self.since_refactor = 0;
        Ok(())
    }

    #[inline]
    fn bounds(&self, v: usize) -> (f64, f64) {
        if v < self.n {
            (self.lo[v], self.hi[v])
        } else {
            (0.0, f64::INFINITY)
        }
    }

    #[inline]
    fn nonbasic_value(&self, v: usize) -> f64 {
        match self.state[v] {
            VarState::Lower => self.bounds(v).0,
            VarState::Upper => self.bounds(v).1,
            VarState::Basic => unreachable!(),
        }
    }

    fn compute_xb(&mut self) {
        let m = self.m();
        let mut r_vec = self.rhs.clone();
        for (r, row) in self.rows.iter().enumerate() {
            let mut s = 0.0;
            for &(i, a) in row {
                if self.state[i] != VarState::Basic {
                    s += a * self.nonbasic_value(i);
                }
            }
            r_vec[r] -= s;
        }
        // Nonbasic slacks sit at zero.
        self.xb.clear();
        self.xb.resize(m, 0.0);
        for p in 0..m {
            let row = &self.binv[p * m..(p + 1) * m];
            self.xb[p] = row.iter().zip(&r_vec).map(|(a, b)| a * b).sum();
        }
    }

    fn compute_duals(&mut self) {
        let (n, m) = (self.n, self.m());
        self.y.clear();
        self.y.resize(m, 0.0);
        for (p, &v) in self.basis.iter().enumerate() {
            let c = if v < n { self.cost[v] } else { 0.0 };
            if c != 0.0 {
                let row = &self.binv[p * m..(p + 1) * m];
                for (yr, b) in self.y.iter_mut().zip(row) {
                    *yr += c * b;
                }
            }
        }
        self.d.clear();
        self.d.extend_from_slice(&self.cost);
        for (r, row) in self.rows.iter().enumerate() {
            let yr = self.y[r];
            if yr != 0.0 {
                for &(i, a) in row {
                    self.d[i] -= yr * a;
                }
            }
        }
        for r in 0..m {
            self.d.push(-self.y[r]);
        }
    }

    fn structural_values(&self) -> Vec<f64> {
        let mut x: Vec<f64> = (0..self.n)
            .map(|j| if self.state[j] == VarState::Basic { 0.0 } else { self.nonbasic_value(j) })
            .collect();
        for (p, &v) in self.basis.iter().enumerate() {
            if v < self.n {
                x[v] = self.xb[p];
            }
        }
        x
    }

    fn current_objective(&self) -> f64 {
        let mut obj = 0.0;
        for j in 0..self.n {
            if self.state[j] != VarState::Basic {
                obj += self.cost[j] * self.nonbasic_value(j);
            }
        }
        for (p, &v) in self.basis.iter().enumerate() {
            if v < self.n {
                obj += self.cost[v] * self.xb[p];
            }
        }
        obj
    }

    /// Places nonbasic boxed structurals on the bound their reduced cost
    /// prefers. Returns false if a slack is dual infeasible.
    fn restore_dual_feasibility(&mut self) -> bool {
        self.compute_duals();
        for j in 0..self.n {
            match self.state[j] {
                VarState::Lower if self.d[j] < -DUAL_TOL && self.lo[j] < self.hi[j] => self.state[j] = VarState::Upper,
                VarState::Upper if self.d[j] > DUAL_TOL && self.lo[j] < self.hi[j] => self.state[j] = VarState::Lower,
                _ => {}
            }
        }
        (0..self.m()).all(|r| self.state[self.n + r] == VarState::Basic || self.d[self.n + r] >= -1e-7)
    }

    /// Re-optimizes from the current basis. With `bound = Some(t)`, stops as
    /// soon as the objective is certified to be at least `t`.
    pub fn solve(&mut self, bound: Option<f64>) -> Result<LpSolution, LpError> {
        match self.solve_inner(bound) {
            Ok(s) => Ok(s),
            Err(_) => {
                self.cold_start();
                self.solve_inner(bound)
            }
        }
    }

    /// Same as [`solve`](Self::solve) but from a fresh slack basis.
    pub fn solve_cold(&mut self, bound: Option<f64>) -> Result<LpSolution, LpError> {
        self.cold_start();
        self.solve_inner(bound)
    }

    fn solve_inner(&mut self, bound: Option<f64>) -> Result<LpSolution, LpError> {
        if !self.restore_dual_feasibility() {
            self.cold_start();
            self.restore_dual_feasibility();
        }
        self.compute_xb();
        let (n, m) = (self.n, self.m());
        let max_iter = 50 * (n + m) + 1000;
        let degenerate_limit = 10 * (n + m);
        let mut degenerate = 0usize;
        let mut bland = false;
        let mut last_obj = f64::NEG_INFINITY;
        let mut retried_infeasible = false;
        // Whether xb and d were updated incrementally since the last full recomputation.
        let mut drifted = false;

        for iter in 0..max_iter {
            if self.since_refactor >= REFACTOR_INTERVAL {
                self.refactor()?;
                self.compute_duals();
                self.compute_xb();
                drifted = false;
            }
            let obj = self.current_objective();
            if let Some(t) = bound {
                if obj >= t {
                    if drifted {
                        self.compute_duals();
                        self.compute_xb();
                        drifted = false;
                        continue;
                    }
                    return Ok(self.finish(LpStatus::BoundExceeded, obj, iter));
                }
            }
            if obj <= last_obj + 1e-12 {
                degenerate += 1;
                if degenerate > degenerate_limit {
                    bland = true;
                }
            } else {
                degenerate = 0;
            }
            last_obj = last_obj.max(obj);

            // Leaving row: largest bound violation (smallest variable index under Bland).
            let mut leave: Option<(usize, f64, bool)> = None;
            for p in 0..m {
                let v = self.basis[p];
                let (lo, hi) = self.bounds(v);
                let x = self.xb[p];
                let (viol, to_lower) = if x < lo - PRIMAL_TOL {
                    (lo - x, true)
                } else if x > hi + PRIMAL_TOL {
                    (x - hi, false)
                } else {
                    continue;
                };
                let better = match leave {
                    None => true,
                    Some((q, best, _)) => {
                        if bland {
                            v < self.basis[q]
                        } else {
                            viol > best
                        }
                    }
                };
                if better {
                    leave = Some((p, viol, to_lower));
                }
            }
            let Some((p, _, to_lower)) = leave else {
                if drifted {
                    self.compute_duals();
                    self.compute_xb();
                    drifted = false;
                    continue;
                }
                return Ok(self.finish(LpStatus::Optimal, obj, iter));
            };

            // alpha_j = (row p of B^{-1}) . A_j
            self.alpha.clear();
            self.alpha.resize(n + m, 0.0);
            for r in 0..m {
                let rho = self.binv[p * m + r];
                if rho != 0.0 {
                    for &(i, a) in &self.rows[r] {
                        self.alpha[i] += rho * a;
                    }
                    self.alpha[n + r] = rho;
                }
            }

            let eligible = |j: usize, s: &Self| -> Option<f64> {
                let a = s.alpha[j];
                if a.abs() <= PIVOT_TOL {
                    return None;
                }
                let (lo, hi) = s.bounds(j);
                if lo == hi {
                    return None;
                }
                let ok = match (s.state[j], to_lower) {
                    (VarState::Lower, true) => a < 0.0,
                    (VarState::Upper, true) => a > 0.0,
                    (VarState::Lower, false) => a > 0.0,
                    (VarState::Upper, false) => a < 0.0,
                    (VarState::Basic, _) => return None,
                };
                if !ok {
                    return None;
                }
                let dj = match s.state[j] {
                    VarState::Lower => s.d[j].max(0.0),
                    _ => (-s.d[j]).max(0.0),
                };
                Some(dj)
            };

            // Harris two-pass ratio test.
            let mut bound_ratio = f64::INFINITY;
            for j in 0..n + m {
                if let Some(dj) = eligible(j, self) {
                    bound_ratio = bound_ratio.min((dj + DUAL_TOL) / self.alpha[j].abs());
                }
            }
            if !bound_ratio.is_finite() {
                if !retried_infeasible && (self.since_refactor > 0 || drifted) {
                    retried_infeasible = true;
                    self.refactor()?;
                    self.compute_duals();
                    self.compute_xb();
                    drifted = false;
                    continue;
                }
                return Ok(self.finish(LpStatus::Infeasible, f64::INFINITY, iter));
            }
            let mut enter: Option<(usize, f64, f64)> = None;
            for j in 0..n + m {
                if let Some(dj) = eligible(j, self) {
                    let a = self.alpha[j].abs();
                    let ratio = dj / a;
                    if ratio > bound_ratio {
                        continue;
                    }
                    let better = match enter {
                        None => true,
                        Some((_, best_a, best_ratio)) => {
                            if bland {
                                ratio < best_ratio - 1e-12
                            } else {
                                a > best_a
                            }
                        }
                    };
                    if better {
                        enter = Some((j, a, ratio));
                    }
                }
            }
            let (q, _, _) = enter.expect("finite ratio implies a candidate");

            // Column B^{-1} A_q.
            self.col.clear();
            self.col.resize(m, 0.0);
            if q < n {
                for &(r, a) in &self.cols[q] {
                    for i in 0..m {
                        self.col[i] += a * self.binv[i * m + r];
                    }
                }
            } else {
                let r = q - n;
                for i in 0..m {
                    self.col[i] = self.binv[i * m + r];
                }
            }
            let piv = self.col[p];
            if (piv - self.alpha[q]).abs() > 1e-7 * (1.0 + piv.abs()) || piv.abs() <= PIVOT_TOL {
                if self.since_refactor > 0 {
                    self.refactor()?;
                    self.compute_duals();
                    self.compute_xb();
                    drifted = false;
                    continue;
                }
                return Err(LpError::Numerical(format!("unstable pivot {piv:e} vs {:e}", self.alpha[q])));
            }

            let leaving = self.basis[p];

            // Dual step.
            let theta_d = self.d[q] / self.alpha[q];
            for j in 0..n + m {
                if self.state[j] != VarState::Basic && self.alpha[j] != 0.0 {
                    self.d[j] -= theta_d * self.alpha[j];
                }
            }
            self.d[q] = 0.0;
            self.d[leaving] = -theta_d;

            // Primal step: the leaving variable lands on the violated bound.
            let (lo, hi) = self.bounds(leaving);
            let target = if to_lower { lo } else { hi };
            let theta_p = (self.xb[p] - target) / piv;
            let entering_value = self.nonbasic_value(q) + theta_p;
            for i in 0..m {
                self.xb[i] -= theta_p * self.col[i];
            }
            self.xb[p] = entering_value;

            // Product-form update of B^{-1}.
            let inv = 1.0 / piv;
            for k in 0..m {
                self.binv[p * m + k] *= inv;
            }
            let (head, rest) = self.binv.split_at_mut(p * m);
            let (prow, tail) = rest.split_at_mut(m);
            for (i, row) in head.chunks_exact_mut(m).chain(tail.chunks_exact_mut(m)).enumerate() {
                let f = self.col[if i < p { i } else { i + 1 }];
                if f != 0.0 {
                    for (x, v) in row.iter_mut().zip(prow.iter()) {
                        *x -= f * v;
                    }
                }
            }
            self.state[leaving] = if to_lower { VarState::Lower } else { VarState::Upper };
            self.basis[p] = q;
            self.state[q] = VarState::Basic;
            self.since_refactor += 1;
            drifted = true;
        }
        Err(LpError::IterationLimit(max_iter))
    }

    fn finish(&self, status: LpStatus, value: f64, iterations: usize) -> LpSolution {
        let mut point = self.structural_values();
        if status == LpStatus::Optimal {
            for (j, x) in point.iter_mut().enumerate() {
                *x = x.clamp(self.lo[j], self.hi[j]);
            }
        }
        let active_cuts = if status == LpStatus::Optimal {
            (0..self.m())
                .filter(|&r| {
                    let lhs: f64 = self.rows[r].iter().map(|&(i, a)| a * point[i]).sum();
                    self.rhs[r] - lhs <= ACTIVE_TOL
                })
                .collect()
        } else {
            Vec::new()
        };
        let duals = if status == LpStatus::Infeasible { Vec::new() } else { self.y.clone() };
        LpSolution { point, value, status, active_cuts, iterations, duals }
    }
}
