//! Composite Gauss-Legendre rules.

use std::num::NonZeroUsize;

use gauss_quad::GaussLegendre;
use num_complex::Complex64;

/// Nodes and weights of a composite rule on `[a, b]`.
#[derive(Clone, Debug)]
pub struct Rule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl Rule {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.nodes.iter().copied().zip(self.weights.iter().copied())
    }
}

/// `panels` equal panels of an `order`-point Gauss-Legendre rule.
pub fn composite(a: f64, b: f64, panels: usize, order: usize) -> Rule {
    let gl = GaussLegendre::new(NonZeroUsize::new(order.max(1)).unwrap());
    let panels = panels.max(1);
    let h = (b - a) / panels as f64;
    let mut nodes = Vec::with_capacity(panels * order);
    let mut weights = Vec::with_capacity(panels * order);
    for p in 0..panels {
        let lo = a + h * p as f64;
        for (x, w) in gl.iter() {
            nodes.push(lo + 0.5 * h * (x + 1.0));
            weights.push(0.5 * h * w);
        }
    }
    Rule { nodes, weights }
}

/// Periodic trapezoid rule with `n` points on `[a, a + period)`.
pub fn periodic(a: f64, period: f64, n: usize) -> Rule {
    let h = period / n as f64;
    Rule {
        nodes: (0..n).map(|i| a + h * i as f64).collect(),
        weights: vec![h; n],
    }
}

/// Integrate `f` on `[a, b]`, doubling the panel count until two
/// successive values agree to `rel_tol`. Returns `(value, error_estimate)`.
pub fn adaptive_1d<F>(a: f64, b: f64, rel_tol: f64, f: F) -> (Complex64, f64)
where
    F: Fn(f64) -> Complex64,
{
    let order = 16;
    let eval = |panels: usize| -> Complex64 {
        composite(a, b, panels, order)
            .iter()
            .map(|(x, w)| f(x) * w)
            .sum()
    };
    let mut panels = 2;
    let mut prev = eval(panels);
    loop {
        panels *= 2;
        let cur = eval(panels);
        let err = (cur - prev).norm();
        if err <= rel_tol * cur.norm().max(1e-300) || panels >= 1024 {
            return (cur, err);
        }
        prev = cur;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_exactness() {
        let r = composite(-1.0, 2.0, 3, 5);
        let v: f64 = r.iter().map(|(x, w)| x.powi(9) * w).sum();
        assert!((v - (2f64.powi(10) - 1.0) / 10.0).abs() < 1e-11);
    }

    #[test]
    fn adaptive_gaussian() {
        let (v, err) = adaptive_1d(-10.0, 10.0, 1e-12, |x| Complex64::new((-x * x).exp(), 0.0));
        assert!((v.re - std::f64::consts::PI.sqrt()).abs() < 1e-12);
        assert!(err < 1e-10);
    }
}
