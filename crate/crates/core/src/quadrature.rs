//! One-dimensional quadrature.
//!
//! [`tanh_sinh`] is the workhorse: the double-exponential change of variables
//! clusters nodes at both endpoints, so integrable endpoint singularities
//! (`ln`, `1/√`) converge quickly, and endpoints themselves are never
//! evaluated. [`integrate`] adds bisection on top for integrands with an
//! unexpected interior kink, and [`integrate_breaks`] splits at known
//! breakpoints first. [`gauss_legendre`] serves smooth cells in tensor
//! product rules.

use std::f64::consts::FRAC_PI_2;
use std::sync::OnceLock;

use crate::error::{Error, Result};
use crate::functionals::QuadratureConfig;

const MAX_LEVEL: u32 = 8;
const T_MAX: f64 = 4.5;

/// Node offsets `(t, distance-to-endpoint factor, weight)` for a fixed level.
fn de_node(t: f64) -> (f64, f64) {
    let u = FRAC_PI_2 * t.sinh();
    // 1 - tanh(u) without cancellation
    let comp = 2.0 / (1.0 + (2.0 * u).exp());
    let cu = u.cosh();
    let w = FRAC_PI_2 * t.cosh() / (cu * cu);
    (comp, w)
}

/// Tanh-sinh quadrature of `f` over `[a, b]`, refined level by level until
/// two successive estimates agree to `max(abs_tol, rel_tol |I|)`.
pub fn tanh_sinh<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    abs_tol: f64,
    rel_tol: f64,
) -> Result<f64> {
    if a == b {
        return Ok(0.0);
    }
    if a > b {
        return tanh_sinh(f, b, a, abs_tol, rel_tol).map(|v| -v);
    }
    let hw = 0.5 * (b - a);
    let c = 0.5 * (a + b);
    let eval_pair = |t: f64| -> f64 {
        let (comp, w) = de_node(t);
        let d = hw * comp;
        if d == 0.0 || w == 0.0 {
            return 0.0;
        }
        let mut s = 0.0;
        let xl = a + d;
        let xr = b - d;
        if xl > a && xl < b {
            s += f(xl);
        }
        if xr > a && xr < b {
            s += f(xr);
        }
        w * s
    };
    // level 0: step 1
    let mut h = 1.0;
    let mut sum = FRAC_PI_2 * f(c);
    let mut k = 1.0;
    while k * h <= T_MAX {
        sum += eval_pair(k * h);
        k += 1.0;
    }
    let mut estimate = hw * h * sum;
    for _ in 1..=MAX_LEVEL {
        h *= 0.5;
        let mut t = h;
        while t <= T_MAX {
            sum += eval_pair(t);
            t += 2.0 * h;
        }
        let next = hw * h * sum;
        let diff = (next - estimate).abs();
        estimate = next;
        if !estimate.is_finite() {
            return Err(Error::Quadrature(format!(
                "non-finite estimate on [{a}, {b}]"
            )));
        }
        if diff <= abs_tol.max(rel_tol * estimate.abs()) {
            return Ok(estimate);
        }
    }
    Err(Error::Quadrature(format!(
        "tanh-sinh did not converge on [{a}, {b}]"
    )))
}

/// Tanh-sinh with bisection when a piece fails to converge, bounded by
/// `cfg.max_subdivisions` pieces.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, cfg: &QuadratureConfig) -> Result<f64> {
    let mut budget = cfg.max_subdivisions;
    integrate_rec(&f, a, b, cfg.abs_tol, cfg.rel_tol, &mut budget)
}

fn integrate_rec<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    abs_tol: f64,
    rel_tol: f64,
    budget: &mut usize,
) -> Result<f64> {
    match tanh_sinh(f, a, b, abs_tol, rel_tol) {
        Ok(v) => Ok(v),
        Err(e) => {
            if *budget < 2 {
                return Err(e);
            }
            *budget -= 2;
            let m = 0.5 * (a + b);
            let left = integrate_rec(f, a, m, 0.5 * abs_tol, rel_tol, budget)?;
            let right = integrate_rec(f, m, b, 0.5 * abs_tol, rel_tol, budget)?;
            Ok(left + right)
        }
    }
}

/// Integrates over `[a, b]` split at every breakpoint strictly inside it.
pub fn integrate_breaks<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    breaks: &[f64],
    cfg: &QuadratureConfig,
) -> Result<f64> {
    let pts = split_points(a, b, breaks);
    let pieces = (pts.len() - 1).max(1) as f64;
    let piece_cfg = QuadratureConfig {
        abs_tol: cfg.abs_tol / pieces,
        ..*cfg
    };
    let mut total = 0.0;
    for w in pts.windows(2) {
        total += integrate(&f, w[0], w[1], &piece_cfg)?;
    }
    Ok(total)
}

/// `a`, the sorted breakpoints strictly inside `(a, b)`, then `b`.
pub fn split_points(a: f64, b: f64, breaks: &[f64]) -> Vec<f64> {
    let mut pts = vec![a];
    let mut inner: Vec<f64> = breaks.iter().copied().filter(|&x| x > a && x < b).collect();
    inner.sort_by(|x, y| x.partial_cmp(y).unwrap());
    inner.dedup();
    pts.extend(inner);
    pts.push(b);
    pts
}

/// Gauss–Legendre nodes and weights on `[-1, 1]`.
pub struct GaussRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussRule {
    pub fn new(n: usize) -> Self {
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        for i in 0..n.div_ceil(2) {
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (mut p0, mut p1) = (1.0, x);
                for k in 2..=n {
                    let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                    p0 = p1;
                    p1 = p2;
                }
                let pn = if n == 1 { x } else { p1 };
                let pm = if n == 1 { 1.0 } else { p0 };
                dp = n as f64 * (x * pn - pm) / (x * x - 1.0);
                let dx = pn / dp;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        GaussRule { nodes, weights }
    }

    /// Nodes and weights mapped to `[a, b]`.
    pub fn on(&self, a: f64, b: f64) -> impl Iterator<Item = (f64, f64)> + '_ {
        let hw = 0.5 * (b - a);
        let c = 0.5 * (a + b);
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(move |(&x, &w)| (c + hw * x, hw * w))
    }

    pub fn integrate<F: Fn(f64) -> f64>(&self, f: F, a: f64, b: f64) -> f64 {
        self.on(a, b).map(|(x, w)| w * f(x)).sum()
    }
}

/// Shared 16-point rule.
pub fn gauss_legendre() -> &'static GaussRule {
    static RULE: OnceLock<GaussRule> = OnceLock::new();
    RULE.get_or_init(|| GaussRule::new(16))
}

/// Tanh-sinh nodes and weights on `[a, b]` at a fixed step, for product rules.
pub fn tanh_sinh_nodes(a: f64, b: f64, step: f64) -> Vec<(f64, f64)> {
    let hw = 0.5 * (b - a);
    let c = 0.5 * (a + b);
    let mut out = vec![(c, hw * step * FRAC_PI_2)];
    let mut k = 1.0;
    while k * step <= T_MAX {
        let (comp, w) = de_node(k * step);
        let d = hw * comp;
        if d > 0.0 && w > 0.0 {
            out.push((a + d, hw * step * w));
            out.push((b - d, hw * step * w));
        }
        k += 1.0;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn smooth_integrand() {
        let v = tanh_sinh(|x: f64| x.exp(), 0.0, 1.0, 1e-14, 1e-14).unwrap();
        assert!((v - (std::f64::consts::E - 1.0)).abs() < 1e-14);
    }

    #[test]
    fn log_endpoint_singularity() {
        // ∫_0^1 ln x dx = -1
        let v = tanh_sinh(|x: f64| x.ln(), 0.0, 1.0, 1e-13, 1e-13).unwrap();
        assert!((v + 1.0).abs() < 1e-13);
        // ∫_0^1 x^{-1/2} dx = 2
        let v = tanh_sinh(|x: f64| 1.0 / x.sqrt(), 0.0, 1.0, 1e-12, 1e-12).unwrap();
        assert!((v - 2.0).abs() < 1e-11);
    }

    #[test]
    fn reversed_interval() {
        let v = tanh_sinh(|x: f64| x, 1.0, 0.0, 1e-14, 1e-14).unwrap();
        assert!((v + 0.5).abs() < 1e-14);
    }

    #[test]
    fn interior_kink_is_handled_by_breaks() {
        let cfg = QuadratureConfig::default();
        let v = integrate_breaks(|x: f64| (x - 0.3).abs(), 0.0, 1.0, &[0.3], &cfg).unwrap();
        assert!((v - (0.045 + 0.245)).abs() < 1e-12);
    }

    #[test]
    fn gauss_rule_exact_for_polynomials() {
        let rule = GaussRule::new(8);
        let v = rule.integrate(|x| x.powi(15) + x.powi(14), -1.0, 1.0);
        assert!((v - 2.0 / 15.0).abs() < 1e-14);
        let s: f64 = gauss_legendre().weights.iter().sum();
        assert!((s - 2.0).abs() < 1e-14);
    }

    #[test]
    fn fixed_tanh_sinh_nodes() {
        let v: f64 = tanh_sinh_nodes(0.0, 2.0, 0.125)
            .into_iter()
            .map(|(x, w)| w * x.sqrt())
            .sum();
        assert!((v - 2.0 * 2f64.sqrt() * 2.0 / 3.0).abs() < 1e-12);
    }
}
