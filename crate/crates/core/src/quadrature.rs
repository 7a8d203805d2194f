//! Gauss–Legendre rules.

use std::f64::consts::PI;

/// Nodes and weights of the `n`-point Gauss–Legendre rule on `[-1, 1]`,
/// nodes in ascending order.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1, "quadrature order must be positive");
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        // Tricomi initial guess, refined by Newton on P_n.
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre(n, x);
        if d != 0.0 {
            dp = d;
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
    (nodes, weights)
}

/// `P_n(x)` and `P_n'(x)` by the three-term recurrence.
fn legendre(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let k = k as f64;
        let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// A rule mapped onto `[0, 1]`; weights sum to one.
#[derive(Debug, Clone)]
pub struct UnitRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl UnitRule {
    pub fn new(n: usize) -> Self {
        let (x, w) = gauss_legendre(n);
        Self {
            nodes: x.iter().map(|x| 0.5 * (x + 1.0)).collect(),
            weights: w.iter().map(|w| 0.5 * w).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weights_sum_to_two() {
        for n in [1, 2, 4, 7, 16, 64] {
            let (_, w) = gauss_legendre(n);
            let s: f64 = w.iter().sum();
            assert!((s - 2.0).abs() < 1e-13, "n={n} sum={s}");
        }
    }

    #[test]
    fn integrates_polynomials_exactly() {
        // n points integrate degree 2n-1 exactly.
        for n in [4, 16, 64] {
            let (x, w) = gauss_legendre(n);
            for deg in [0, 1, 2, 2 * n - 2, 2 * n - 1] {
                let q: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(deg as i32)).sum();
                let exact = if deg % 2 == 1 { 0.0 } else { 2.0 / (deg as f64 + 1.0) };
                assert!((q - exact).abs() < 1e-12, "n={n} deg={deg} q={q}");
            }
        }
    }

    #[test]
    fn four_point_nodes_match_table() {
        let (x, w) = gauss_legendre(4);
        assert!((x[3] - 0.861_136_311_594_052_6).abs() < 1e-15);
        assert!((x[2] - 0.339_981_043_584_856_3).abs() < 1e-15);
        assert!((w[3] - 0.347_854_845_137_453_9).abs() < 1e-15);
        assert!((w[2] - 0.652_145_154_862_546_1).abs() < 1e-15);
    }

    #[test]
    fn unit_rule_integrates_on_unit_interval() {
        let r = UnitRule::new(8);
        let q: f64 = r.nodes.iter().zip(&r.weights).map(|(s, w)| w * s * s).sum();
        assert!((q - 1.0 / 3.0).abs() < 1e-15);
    }
}
