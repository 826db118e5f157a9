use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

/// Nodes and weights of a one-dimensional quadrature rule.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuadratureRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl QuadratureRule {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn integrate(&self, f: impl Fn(f64) -> f64) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * f(x))
            .sum()
    }

    pub fn iter(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.nodes.iter().copied().zip(self.weights.iter().copied())
    }

    /// Maps a rule on `[-1, 1]` affinely onto `[a, b]`.
    pub fn mapped(&self, a: f64, b: f64) -> QuadratureRule {
        let half = (b - a) / 2.0;
        let mid = (a + b) / 2.0;
        QuadratureRule {
            nodes: self.nodes.iter().map(|&x| mid + half * x).collect(),
            weights: self.weights.iter().map(|&w| half * w).collect(),
        }
    }
}

/// `n`-point Gauss-Legendre rule on `[-1, 1]`, exact to degree `2n - 1`.
/// Nodes are ascending.
pub fn gauss_legendre(n: usize) -> QuadratureRule {
    assert!(n >= 1, "rule needs at least one node");
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let nf = n as f64;
    for i in 0..n.div_ceil(2) {
        let mut z = (PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p1, mut p2) = (1.0, 0.0);
            for k in 1..=n {
                let kf = k as f64;
                let p3 = p2;
                p2 = p1;
                p1 = ((2.0 * kf - 1.0) * z * p2 - (kf - 1.0) * p3) / kf;
            }
            dp = nf * (z * p1 - p2) / (z * z - 1.0);
            let dz = p1 / dp;
            z -= dz;
            if dz.abs() <= 1e-16 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - z * z) * dp * dp);
        nodes[i] = -z;
        nodes[n - 1 - i] = z;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
    QuadratureRule { nodes, weights }
}

/// Uniform `n`-point trapezoid rule on the period `[0, length)`.
pub fn trapezoid(n: usize, length: f64) -> QuadratureRule {
    assert!(n >= 1);
    let h = length / n as f64;
    QuadratureRule {
        nodes: (0..n).map(|k| k as f64 * h).collect(),
        weights: vec![h; n],
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_rules() {
        let r = gauss_legendre(1);
        assert_eq!(r.nodes, vec![0.0]);
        assert!((r.weights[0] - 2.0).abs() < 1e-15);
        let r = gauss_legendre(2);
        let s = 1.0 / 3f64.sqrt();
        assert!((r.nodes[0] + s).abs() < 1e-15 && (r.nodes[1] - s).abs() < 1e-15);
        assert!((r.weights[0] - 1.0).abs() < 1e-15);
        assert!((r.integrate(|x| x * x) - 2.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn moments_exact_to_degree() {
        for n in [3, 10, 17, 40] {
            let r = gauss_legendre(n);
            for k in 0..(2 * n) {
                let exact = if k % 2 == 1 {
                    0.0
                } else {
                    2.0 / (k as f64 + 1.0)
                };
                let got = r.integrate(|x| x.powi(k as i32));
                assert!((got - exact).abs() < 1e-13, "n={n} k={k}: {got} vs {exact}");
            }
            assert!(r.weights.iter().all(|&w| w > 0.0));
            assert!(r.nodes.windows(2).all(|p| p[0] < p[1]));
        }
    }

    #[test]
    fn trapezoid_integrates_fourier_modes() {
        let r = trapezoid(9, 2.0 * PI);
        for k in 1..9 {
            let s: f64 = r.integrate(|t| (k as f64 * t).cos());
            assert!(s.abs() < 1e-13);
        }
    }
}
