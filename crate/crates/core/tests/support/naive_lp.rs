//! Textbook two-phase tableau simplex with Bland's rule, used as an
//! independent reference for the decoder's LP solver.

/// Minimizes `cost . x` subject to `rows x <= rhs` and `lo <= x <= hi`.
/// Returns `None` when infeasible.
pub fn solve(cost: &[f64], rows: &[Vec<(usize, f64)>], rhs: &[f64], lo: &[f64], hi: &[f64]) -> Option<(f64, Vec<f64>)> {
    let n = cost.len();
    // Shift to y = x - lo in [0, u]; upper bounds become explicit rows.
    let mut a: Vec<Vec<f64>> = Vec::new();
    let mut b: Vec<f64> = Vec::new();
    for (row, &r) in rows.iter().zip(rhs) {
        let mut dense = vec![0.0; n];
        let mut shift = 0.0;
        for &(i, c) in row {
            dense[i] += c;
            shift += c * lo[i];
        }
        a.push(dense);
        b.push(r - shift);
    }
    for i in 0..n {
        let mut dense = vec![0.0; n];
        dense[i] = 1.0;
        a.push(dense);
        b.push(hi[i] - lo[i]);
    }
    let m = a.len();
    // Columns: y (n), slacks (m), artificials (one per negative rhs row).
    let neg: Vec<usize> = (0..m).filter(|&r| b[r] < 0.0).collect();
    let cols = n + m + neg.len();
    let mut t = vec![vec![0.0; cols + 1]; m];
    let mut basis = vec![0usize; m];
    for r in 0..m {
        let sign = if b[r] < 0.0 { -1.0 } else { 1.0 };
        for j in 0..n {
            t[r][j] = sign * a[r][j];
        }
        t[r][n + r] = sign;
        t[r][cols] = sign * b[r];
        basis[r] = n + r;
    }
    for (k, &r) in neg.iter().enumerate() {
        t[r][n + m + k] = 1.0;
        basis[r] = n + m + k;
    }

    // Dantzig pricing on an explicit objective row; Bland's rule after a long
    // run of degenerate pivots.
    let run = |t: &mut Vec<Vec<f64>>, basis: &mut Vec<usize>, obj: &[f64], allowed: usize| -> bool {
        let m = t.len();
        let mut z = vec![0.0; cols + 1];
        z[..cols].copy_from_slice(obj);
        for r in 0..m {
            let cb = obj[basis[r]];
            if cb != 0.0 {
                for j in 0..=cols {
                    z[j] -= cb * t[r][j];
                }
            }
        }
        let mut degenerate = 0;
        for _ in 0..1_000_000 {
            let bland = degenerate > 50;
            let mut enter: Option<usize> = None;
            for j in 0..allowed {
                if z[j] < -1e-9 && enter.is_none_or(|e| !bland && z[j] < z[e]) {
                    enter = Some(j);
                }
            }
            let Some(q) = enter else { return true };
            let mut leave: Option<(usize, f64)> = None;
            for r in 0..m {
                if t[r][q] > 1e-9 {
                    let ratio = t[r][cols].max(0.0) / t[r][q];
                    let better = match leave {
                        None => true,
                        Some((lr, best)) => ratio < best - 1e-12 || (ratio <= best + 1e-12 && basis[r] < basis[lr]),
                    };
                    if better {
                        leave = Some((r, ratio));
                    }
                }
            }
            let Some((p, ratio)) = leave else { return false };
            degenerate = if ratio <= 1e-12 { degenerate + 1 } else { 0 };
            let piv = t[p][q];
            for v in t[p].iter_mut() {
                *v /= piv;
            }
            let prow = t[p].clone();
            for (r, row) in t.iter_mut().enumerate() {
                if r != p {
                    let f = row[q];
                    if f != 0.0 {
                        for j in 0..=cols {
                            row[j] -= f * prow[j];
                        }
                    }
                }
            }
            let f = z[q];
            for j in 0..=cols {
                z[j] -= f * prow[j];
            }
            basis[p] = q;
        }
        let negs = (0..m).filter(|&r| t[r][cols] < -1e-9).count(); let zmin = z[..allowed].iter().cloned().fold(f64::INFINITY, f64::min);
        panic!("naive simplex did not terminate: m {m} cols {cols} allowed {allowed} negrhs {negs} zmin {zmin} deg {degenerate}");
    };

    if !neg.is_empty() {
        let mut phase1 = vec![0.0; cols];
        for k in 0..neg.len() {
            phase1[n + m + k] = 1.0;
        }
        run(&mut t, &mut basis, &phase1, cols);
        let infeas: f64 = (0..m).filter(|&r| basis[r] >= n + m).map(|r| t[r][cols]).sum();
        if infeas > 1e-9 {
            return None;
        }
        // Drive zero-level artificials out of the basis where possible.
        for r in 0..m {
            if basis[r] >= n + m {
                if let Some(q) = (0..n + m).find(|&j| t[r][j].abs() > 1e-9 && !basis.contains(&j)) {
                    let piv = t[r][q];
                    for v in t[r].iter_mut() {
                        *v /= piv;
                    }
                    for rr in 0..m {
                        if rr != r {
                            let f = t[rr][q];
                            if f != 0.0 {
                                for j in 0..=cols {
                                    t[rr][j] -= f * t[r][j];
                                }
                            }
                        }
                    }
                    basis[r] = q;
                }
            }
        }
    }
    let mut phase2 = vec![0.0; cols];
    phase2[..n].copy_from_slice(cost);
    assert!(run(&mut t, &mut basis, &phase2, n + m), "bounded LP cannot be unbounded");
    let mut y = vec![0.0; n];
    for r in 0..m {
        if basis[r] < n {
            y[basis[r]] = t[r][cols];
        }
    }
    let x: Vec<f64> = y.iter().zip(lo).map(|(v, l)| v + l).collect();
    let value = cost.iter().zip(&x).map(|(c, v)| c * v).sum();
    Some((value, x))
}
