//! Gauss–Legendre rules and composite panel integration.

use num_complex::Complex64;

/// Gauss–Legendre nodes and weights on `[-1, 1]`.
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussLegendre {
    /// Builds an `n`-point rule by Newton iteration on the Legendre polynomial.
    pub fn new(n: usize) -> Self {
        assert!(n >= 1, "Gauss-Legendre rule needs at least one node");
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let m = n.div_ceil(2);
        for i in 0..m {
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre_with_derivative(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre_with_derivative(n, x);
            dp = if d != 0.0 { d } else { dp };
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        Self { nodes, weights }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Nodes and weights mapped to `[a, b]`.
    pub fn mapped(&self, a: f64, b: f64) -> impl Iterator<Item = (f64, f64)> + '_ {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(move |(&x, &w)| (mid + half * x, half * w))
    }

    pub fn integrate(&self, a: f64, b: f64, f: impl Fn(f64) -> f64) -> f64 {
        self.mapped(a, b).map(|(x, w)| w * f(x)).sum()
    }

    pub fn integrate_complex(&self, a: f64, b: f64, f: impl Fn(f64) -> Complex64) -> Complex64 {
        self.mapped(a, b).map(|(x, w)| f(x) * w).sum()
    }
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
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

/// Composite rule over `[a, b]` with panels no longer than `max_panel`.
pub fn composite_complex(
    rule: &GaussLegendre,
    a: f64,
    b: f64,
    max_panel: f64,
    f: impl Fn(f64) -> Complex64,
) -> Complex64 {
    if b <= a {
        return Complex64::new(0.0, 0.0);
    }
    let panels = ((b - a) / max_panel).ceil().max(1.0) as usize;
    let h = (b - a) / panels as f64;
    let mut acc = Complex64::new(0.0, 0.0);
    for p in 0..panels {
        let lo = a + p as f64 * h;
        acc += rule.integrate_complex(lo, lo + h, &f);
    }
    acc
}

pub fn composite(
    rule: &GaussLegendre,
    a: f64,
    b: f64,
    max_panel: f64,
    f: impl Fn(f64) -> f64,
) -> f64 {
    composite_complex(rule, a, b, max_panel, |x| Complex64::new(f(x), 0.0)).re
}

/// Gauss–Jacobi rule for `∫_{-1}^{1} (1+t)^β g(t) dt`, built by Golub–Welsch.
#[derive(Debug, Clone)]
pub struct GaussJacobi {
    pub beta: f64,
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussJacobi {
    pub fn new(n: usize, beta: f64) -> Self {
        assert!(
            n >= 1 && beta > -1.0,
            "Gauss-Jacobi rule needs n ≥ 1 and β > -1"
        );
        let b = beta;
        let mut jac = nalgebra::DMatrix::<f64>::zeros(n, n);
        for j in 0..n {
            let s = 2.0 * j as f64 + b;
            jac[(j, j)] = if j == 0 {
                b / (b + 2.0)
            } else {
                b * b / (s * (s + 2.0))
            };
            if j + 1 < n {
                let k = j as f64 + 1.0;
                let s = 2.0 * k + b;
                let off =
                    (4.0 * k * k * (k + b) * (k + b) / (s * s * (s + 1.0) * (s - 1.0))).sqrt();
                jac[(j, j + 1)] = off;
                jac[(j + 1, j)] = off;
            }
        }
        let mu0 = 2f64.powf(b + 1.0) / (b + 1.0);
        let eig = jac.symmetric_eigen();
        let mut pairs: Vec<(f64, f64)> = (0..n)
            .map(|i| (eig.eigenvalues[i], mu0 * eig.eigenvectors[(0, i)].powi(2)))
            .collect();
        pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
        let (nodes, weights) = pairs.into_iter().unzip();
        Self {
            beta,
            nodes,
            weights,
        }
    }

    /// Nodes and weights for `∫_a^b (x − a)^β g(x) dx`.
    pub fn mapped(&self, a: f64, b: f64) -> impl Iterator<Item = (f64, f64)> + '_ {
        let h = 0.5 * (b - a);
        let scale = h.powf(self.beta + 1.0);
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(move |(&t, &w)| (a + h * (1.0 + t), scale * w))
    }
}

/// Neumaier-compensated summation.
#[derive(Debug, Default, Clone, Copy)]
pub struct CompensatedSum {
    sum: f64,
    carry: f64,
}

impl CompensatedSum {
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.carry += (self.sum - t) + x;
        } else {
            self.carry += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.carry
    }
}
