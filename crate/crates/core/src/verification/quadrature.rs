//! Composite Gauss-Legendre quadrature on radial intervals and per-mode H¹
//! norms.

use crate::error::{Error, Result};

/// Gauss-Legendre rule with `points` nodes, applied on `segments` equal
/// sub-intervals of each integration interval.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureRule {
    points: usize,
    segments: usize,
    /// Nodes and weights on [-1, 1].
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

pub const MIN_POINTS: usize = 8;

impl QuadratureRule {
    /// Builds the rule and checks that it integrates `x^k`, `k < 2·points`,
    /// exactly on [0, 1].
    pub fn gauss_legendre(points: usize, segments: usize) -> Result<Self> {
        if points < MIN_POINTS {
            return Err(Error::InvalidQuadrature(format!(
                "need at least {MIN_POINTS} points per segment, got {points}"
            )));
        }
        if segments == 0 {
            return Err(Error::InvalidQuadrature("need at least one segment".into()));
        }
        let (nodes, weights) = legendre_nodes_weights(points);
        let rule = Self {
            points,
            segments,
            nodes,
            weights,
        };
        rule.self_test()?;
        Ok(rule)
    }

    pub fn points(&self) -> usize {
        self.points
    }

    pub fn segments(&self) -> usize {
        self.segments
    }

    fn self_test(&self) -> Result<()> {
        for k in 0..2 * self.points as i32 {
            let exact = 1.0 / (k as f64 + 1.0);
            let approx = self.integrate_single(0.0, 1.0, |x| x.powi(k));
            if (approx - exact).abs() > 1e-13 * exact.max(1.0) * (k as f64 + 1.0) {
                return Err(Error::InvalidQuadrature(format!(
                    "{}-point rule fails on x^{k}: {approx} vs {exact}",
                    self.points
                )));
            }
        }
        Ok(())
    }

    fn integrate_single<F: Fn(f64) -> f64>(&self, lo: f64, hi: f64, f: F) -> f64 {
        let half = 0.5 * (hi - lo);
        let mid = 0.5 * (hi + lo);
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(x, w)| w * f(mid + half * x))
            .sum::<f64>()
            * half
    }

    /// `∫_lo^hi f`.
    pub fn integrate<F: Fn(f64) -> f64>(&self, lo: f64, hi: f64, f: F) -> f64 {
        let step = (hi - lo) / self.segments as f64;
        (0..self.segments)
            .map(|k| {
                let a = lo + step * k as f64;
                let b = if k + 1 == self.segments { hi } else { a + step };
                self.integrate_single(a, b, &f)
            })
            .sum()
    }
}

impl Default for QuadratureRule {
    fn default() -> Self {
        Self::gauss_legendre(16, 4).expect("default rule")
    }
}

/// Nodes (ascending) and weights of the `n`-point rule on [-1, 1], by Newton
/// iteration on `P_n` from the Chebyshev-like initial guesses.
fn legendre_nodes_weights(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let nf = n as f64;
    for i in 0..n.div_ceil(2) {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
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
        dp = if d != 0.0 { d } else { dp };
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

/// `(P_n(x), P_n'(x))` by the three-term recurrence.
fn legendre(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Squared H¹ norm over the annulus `lo < r < hi` of `u(r)·{cos,sin}(nθ)`:
/// `w_n ∫ (u'² + (n²/r²) u² + u²) r dr` with `w_n = 2π` for `n = 0`, `π`
/// otherwise. `f` returns `(u, u')`.
pub fn h1_norm_squared_mode<F>(lo: f64, hi: f64, n: u32, f: F, rule: &QuadratureRule) -> Result<f64>
where
    F: Fn(f64) -> (f64, f64),
{
    if !(hi > lo) || lo < 0.0 {
        return Err(Error::EmptyInterval { lo, hi });
    }
    let n2 = (n as f64) * (n as f64);
    let angular = if n == 0 {
        2.0 * std::f64::consts::PI
    } else {
        std::f64::consts::PI
    };
    let integral = rule.integrate(lo, hi, |r| {
        let (u, du) = f(r);
        let tangential = if n == 0 { 0.0 } else { n2 / (r * r) * u * u };
        (du * du + tangential + u * u) * r
    });
    Ok(angular * integral)
}

/// H¹ norm of one Fourier mode over an annulus (or disk when `lo = 0`).
pub fn h1_norm_mode<F>(lo: f64, hi: f64, n: u32, f: F, rule: &QuadratureRule) -> Result<f64>
where
    F: Fn(f64) -> (f64, f64),
{
    h1_norm_squared_mode(lo, hi, n, f, rule).map(f64::sqrt)
}
