//! Gauss-Legendre rules and their composite form on a finite interval.

use std::f64::consts::PI;

use crate::error::{Error, Result};

/// An `n`-point Gauss-Legendre rule on `[-1, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussLegendre {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

/// Legendre polynomial `P_n(x)` and its derivative, by the three-term recurrence.
fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p_prev = 1.0;
    let mut p = x;
    for j in 2..=n {
        let j = j as f64;
        let next = ((2.0 * j - 1.0) * x * p - (j - 1.0) * p_prev) / j;
        p_prev = p;
        p = next;
    }
    let n = n as f64;
    let dp = n * (x * p - p_prev) / (x * x - 1.0);
    (p, dp)
}

impl GaussLegendre {
    pub fn new(order: usize) -> Result<Self> {
        if order < 1 {
            return Err(Error::InvalidQuadrature(format!("order must be >= 1, got {order}")));
        }
        if order == 1 {
            return Ok(Self {
                nodes: vec![0.0],
                weights: vec![2.0],
            });
        }
        let mut nodes = vec![0.0; order];
        let mut weights = vec![0.0; order];
        let n = order as f64;
        // Roots are symmetric; find the upper half by Newton from the
        // Tricomi-type initial guess and mirror them.
        for i in 0..order.div_ceil(2) {
            let mut x = (PI * (i as f64 + 0.75) / (n + 0.5)).cos();
            let mut dp = 1.0;
            for _ in 0..100 {
                let (p, d) = legendre_with_derivative(order, x);
                dp = d;
                let step = p / d;
                x -= step;
                if step.abs() <= 4.0 * f64::EPSILON {
                    break;
                }
            }
            let (_, d) = legendre_with_derivative(order, x);
            dp = if d.is_finite() { d } else { dp };
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[order - 1 - i] = x;
            weights[i] = w;
            weights[order - 1 - i] = w;
        }
        if order % 2 == 1 {
            nodes[order / 2] = 0.0;
        }
        Ok(Self { nodes, weights })
    }

    pub fn order(&self) -> usize {
        self.nodes.len()
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn integrate(&self, f: impl Fn(f64) -> f64, a: f64, b: f64) -> f64 {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (b + a);
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * f(mid + half * x))
            .sum::<f64>()
            * half
    }
}

/// Nodes and weights of a Gauss-Legendre rule repeated over equal panels of
/// `[lower, upper]`, stored in increasing node order.
#[derive(Debug, Clone, PartialEq)]
pub struct CompositeRule {
    lower: f64,
    upper: f64,
    points: Vec<f64>,
    weights: Vec<f64>,
}

impl CompositeRule {
    pub fn new(lower: f64, upper: f64, panels: usize, order: usize) -> Result<Self> {
        if !(lower.is_finite() && upper.is_finite() && lower < upper) {
            return Err(Error::InvalidQuadrature(format!("empty interval [{lower}, {upper}]")));
        }
        if panels < 1 {
            return Err(Error::InvalidQuadrature("need at least one panel".into()));
        }
        let base = GaussLegendre::new(order)?;
        let width = (upper - lower) / panels as f64;
        let half = 0.5 * width;
        let mut points = Vec::with_capacity(panels * order);
        let mut weights = Vec::with_capacity(panels * order);
        for p in 0..panels {
            let mid = lower + (p as f64 + 0.5) * width;
            for (&x, &w) in base.nodes.iter().zip(&base.weights) {
                points.push(mid + half * x);
                weights.push(half * w);
            }
        }
        Ok(Self {
            lower,
            upper,
            points,
            weights,
        })
    }

    pub fn bounds(&self) -> (f64, f64) {
        (self.lower, self.upper)
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn integrate(&self, f: impl Fn(f64) -> f64) -> f64 {
        self.points
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * f(x))
            .sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn five_point_rule_matches_tabulated_values() {
        let rule = GaussLegendre::new(5).unwrap();
        let expected_nodes = [-0.906_179_845_938_664, -0.538_469_310_105_683, 0.0, 0.538_469_310_105_683, 0.906_179_845_938_664];
        let expected_weights = [0.236_926_885_056_189, 0.478_628_670_499_366, 0.568_888_888_888_889, 0.478_628_670_499_366, 0.236_926_885_056_189];
        for i in 0..5 {
            assert!((rule.nodes()[i] - expected_nodes[i]).abs() < 1e-14);
            assert!((rule.weights()[i] - expected_weights[i]).abs() < 1e-14);
        }
    }

    #[test]
    fn weights_sum_to_interval_length() {
        for order in [1, 2, 3, 8, 16, 33, 64, 128] {
            let rule = GaussLegendre::new(order).unwrap();
            let total: f64 = rule.weights().iter().sum();
            assert!((total - 2.0).abs() < 1e-13, "order {order}: {total}");
            assert!(rule.nodes().windows(2).all(|w| w[0] < w[1]));
        }
    }

    #[test]
    fn exact_for_polynomials_up_to_degree_2n_minus_1() {
        for order in [2usize, 4, 7, 16] {
            let rule = GaussLegendre::new(order).unwrap();
            for degree in 0..(2 * order) {
                let got = rule.integrate(|x| x.powi(degree as i32), -1.0, 1.0);
                let exact = if degree % 2 == 1 { 0.0 } else { 2.0 / (degree as f64 + 1.0) };
                assert!((got - exact).abs() < 1e-13, "order {order} degree {degree}");
            }
        }
    }

    #[test]
    fn zero_order_is_rejected() {
        assert!(GaussLegendre::new(0).is_err());
        assert!(CompositeRule::new(1.0, 1.0, 4, 4).is_err());
        assert!(CompositeRule::new(0.0, 1.0, 0, 4).is_err());
    }

    #[test]
    fn composite_rule_on_oscillatory_gaussian() {
        // int exp(-x^2) cos(5x) over the real line = sqrt(pi) exp(-25/4)
        let rule = CompositeRule::new(-8.0, 8.0, 32, 16).unwrap();
        let got = rule.integrate(|x| (-x * x).exp() * (5.0 * x).cos());
        let exact = PI.sqrt() * (-6.25f64).exp();
        assert!((got - exact).abs() < 1e-14);
        assert_eq!(rule.len(), 512);
        assert!(rule.points().windows(2).all(|w| w[0] < w[1]));
        assert!(rule.points()[0] > -8.0 && *rule.points().last().unwrap() < 8.0);
    }

    #[test]
    fn composite_rule_of_sine() {
        let rule = CompositeRule::new(0.0, PI, 4, 8).unwrap();
        assert!((rule.integrate(f64::sin) - 2.0).abs() < 1e-14);
    }
}
