//! Gauss–Legendre rules.

use alloc::vec::Vec;

use crate::math::{abs, cos, PI};
use crate::{error::invalid, Result};

/// Nodes and weights of the `order`-point Gauss–Legendre rule on `[lo, hi]`.
///
/// Nodes are the roots of P_order found by Newton's method from the
/// Chebyshev-like initial guesses; the weights come from P'_order.
pub fn gauss_legendre(order: usize, lo: f64, hi: f64) -> Result<(Vec<f64>, Vec<f64>)> {
    if order < 1 {
        return Err(invalid("quadrature order", "must be at least 1"));
    }
    let n = order;
    let mut nodes = Vec::with_capacity(n);
    let mut weights = Vec::with_capacity(n);
    let half = 0.5 * (hi - lo);
    let mid = 0.5 * (hi + lo);
    for i in 0..n {
        let mut x = cos(PI * (i as f64 + 0.75) / (n as f64 + 0.5));
        let mut dp = 1.0;
        for _ in 0..100 {
            let (p, d) = legendre_and_derivative(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if abs(dx) <= 1e-16 {
                break;
            }
        }
        let (_, d) = legendre_and_derivative(n, x);
        if d != 0.0 {
            dp = d;
        }
        nodes.push(mid - half * x);
        weights.push(2.0 * half / ((1.0 - x * x) * dp * dp));
    }
    Ok((nodes, weights))
}

fn legendre_and_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Integrates `f` over `[lo, hi]` with the `order`-point rule.
pub fn integrate<F: FnMut(f64) -> f64>(mut f: F, lo: f64, hi: f64, order: usize) -> Result<f64> {
    let (x, w) = gauss_legendre(order, lo, hi)?;
    let mut s = crate::math::CompensatedSum::new();
    for (xi, wi) in x.iter().zip(&w) {
        s.add(wi * f(*xi));
    }
    Ok(s.value())
}
