//! Gauss-Legendre quadrature on arbitrary intervals.

use alloc::vec::Vec;
// float intrinsics for no_std builds; test builds unify num-traits/std and shadow it
#[allow(unused_imports)]
use num_traits::Float;

use crate::{Error, Result};

/// A Gauss-Legendre rule of fixed order on `[-1, 1]`.
///
/// Nodes are the roots of the Legendre polynomial `P_n`, found by Newton
/// iteration from the Chebyshev initial guess; exact for polynomials of
/// degree `2n - 1`.
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussLegendre {
    pub fn new(order: usize) -> Result<Self> {
        if order < 2 {
            return Err(Error::Parameter("quadrature order must be >= 2"));
        }
        let n = order;
        let mut nodes = Vec::with_capacity(n);
        let mut weights = Vec::with_capacity(n);
        for i in 0..n {
            let mut x = (core::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-15 {
                    break;
                }
            }
            nodes.push(x);
            weights.push(2.0 / ((1.0 - x * x) * dp * dp));
        }
        nodes.reverse();
        weights.reverse();
        Ok(Self { nodes, weights })
    }

    pub fn order(&self) -> usize {
        self.nodes.len()
    }

    /// Nodes and weights mapped to `[center - half_width, center + half_width]`.
    pub fn mapped(&self, center: f64, half_width: f64) -> (Vec<f64>, Vec<f64>) {
        let xs = self.nodes.iter().map(|&t| center + half_width * t).collect();
        let ws = self.weights.iter().map(|&w| half_width * w).collect();
        (xs, ws)
    }

    /// Integrate `f` over `[center - half_width, center + half_width]`.
    pub fn integrate(&self, center: f64, half_width: f64, mut f: impl FnMut(f64) -> f64) -> f64 {
        let mut sum = 0.0;
        for (&t, &w) in self.nodes.iter().zip(&self.weights) {
            sum += w * f(center + half_width * t);
        }
        sum * half_width
    }
}

/// Value and derivative of the Legendre polynomial `P_n` at `x`.
fn legendre(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let k = k as f64;
        let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}
