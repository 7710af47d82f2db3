//! Gauss-Legendre rules and orthonormal shifted Legendre polynomials.

use std::f64::consts::PI;

/// Values `l_0(u), ..., l_{r-1}(u)` of the Legendre polynomials orthonormal
/// on `[0, 1]`: `l_k(u) = sqrt(2k + 1) P_k(2u - 1)`.
pub fn shifted_legendre(u: f64, out: &mut [f64]) {
    let t = 2.0 * u - 1.0;
    let (mut p_prev, mut p) = (0.0, 1.0);
    for (k, slot) in out.iter_mut().enumerate() {
        if k > 0 {
            let kf = k as f64;
            let next = ((2.0 * kf - 1.0) * t * p - (kf - 1.0) * p_prev) / kf;
            p_prev = p;
            p = next;
        }
        *slot = (2.0 * k as f64 + 1.0).sqrt() * p;
    }
}

/// Nodes and weights of the `order`-point Gauss-Legendre rule on `[0, 1]`.
///
/// Exact for polynomials of degree `< 2 * order`.
pub fn gauss_legendre(order: usize) -> Vec<(f64, f64)> {
    assert!(order >= 1);
    let n = order;
    let mut rule = Vec::with_capacity(n);
    for i in 0..n {
        // Tricomi initial guess, then Newton on P_n.
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 1.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        rule.push(((1.0 - x) / 2.0, w / 2.0));
    }
    rule.sort_by(|a, b| a.0.total_cmp(&b.0));
    rule
}

/// Composite Gauss-Legendre rule on `[a, b]` with `panels` equal panels.
pub fn composite_rule(a: f64, b: f64, panels: usize, order: usize) -> Vec<(f64, f64)> {
    let base = gauss_legendre(order);
    let h = (b - a) / panels as f64;
    let mut out = Vec::with_capacity(panels * order);
    for p in 0..panels {
        let left = a + p as f64 * h;
        out.extend(base.iter().map(|&(x, w)| (left + h * x, h * w)));
    }
    out
}
