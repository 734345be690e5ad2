//! Weak-duality lower bound for `min c.x` over `A x <= b`, `lo <= x <= hi`.

/// `y . rhs + sum_j min(d_j lo_j, d_j hi_j)` with `d = cost - y A`, valid for any `y <= 0`.
pub fn dual_bound(cost: &[f64], rows: &[Vec<(usize, f64)>], rhs: &[f64], lo: &[f64], hi: &[f64], y: &[f64]) -> f64 {
    assert_eq!(y.len(), rows.len());
    assert!(y.iter().all(|&v| v <= 1e-12), "multipliers must be nonpositive");
    let mut d = cost.to_vec();
    let mut value = 0.0;
    for ((row, &b), &yr) in rows.iter().zip(rhs).zip(y) {
        let yr = yr.min(0.0);
        value += yr * b;
        for &(i, a) in row {
            d[i] -= yr * a;
        }
    }
    for j in 0..cost.len() {
        value += (d[j] * lo[j]).min(d[j] * hi[j]);
    }
    value
}
