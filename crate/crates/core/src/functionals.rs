//! The hook integral `θ`, the functional `ρ`, the cell sums `θ̂`, `ρ̂`, the
//! half-Sobolev norm, the `H`-term, and the closed-form lemmas with their
//! numerical counterparts.
//!
//! Lattice profiles are handled in closed form: `θ` by the four-corner
//! combination of `φ_2` over pairs of linear pieces, `ρ` by antiderivatives
//! of `ln(1 + 2cs)` and `s ln(1 + 2cs)`. Smooth shapes go through
//! quadrature. Integrals against `Ω_c''` use `t = c/2 + sin ψ`, which turns
//! the `1/√(1 - z²)` edge behaviour into a bounded weight.

use std::f64::consts::{FRAC_PI_4, PI};

use serde::Serialize;

use crate::diagrams::{Partition, PiecewiseLinear, Profile};
use crate::error::{Error, Result};
use crate::exact::neg_log_measure_scaled;
use crate::quadrature::{integrate_breaks, split_points, tanh_sinh_nodes};
use crate::shape::{phi0, phi1, phi2, sign, ShapeParam};

/// Tolerances for every adaptive integral.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QuadratureConfig {
    pub abs_tol: f64,
    pub rel_tol: f64,
    /// Bisection budget per adaptive integral.
    pub max_subdivisions: usize,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        QuadratureConfig {
            abs_tol: 1e-9,
            rel_tol: 1e-9,
            max_subdivisions: 256,
        }
    }
}

impl QuadratureConfig {
    pub fn new(abs_tol: f64, rel_tol: f64, max_subdivisions: usize) -> Result<Self> {
        if !(abs_tol > 0.0 && rel_tol > 0.0) {
            return Err(Error::Config("tolerances must be positive".into()));
        }
        Ok(QuadratureConfig {
            abs_tol,
            rel_tol,
            max_subdivisions,
        })
    }

    /// The same budget with both tolerances multiplied by `factor`.
    pub fn scaled(&self, factor: f64) -> Self {
        QuadratureConfig {
            abs_tol: self.abs_tol * factor,
            rel_tol: self.rel_tol * factor,
            ..*self
        }
    }
}

/// Step of the fixed tanh-sinh product rule used for the difference
/// quotient.
const PRODUCT_STEP: f64 = 1.0 / 16.0;

/// Everything computed for one diagram at one `(n, N)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FunctionalReport {
    pub n: usize,
    pub big_n: usize,
    pub c: f64,
    pub theta: f64,
    pub rho: f64,
    pub theta_hat: f64,
    pub rho_hat: f64,
    /// `‖f‖²` (not halved) for `f = L - Ω_c`; absent when the profile
    /// violates the hypotheses of the norm identity.
    pub sobolev_sq: Option<f64>,
    /// `2 ∫_{|s - c/2| > 1} H_c'(s) f(s) ds`, under the same condition.
    pub h_term: Option<f64>,
    /// `-ln P_N^n(λ) / √n` from the exact measure.
    pub lhs: f64,
    /// `√n (θ - ρ) + θ̂ - ρ̂ - lhs`.
    pub residual: f64,
}

/// A boundary curve: a piecewise-linear function or a limit shape.
#[derive(Debug, Clone, PartialEq)]
pub enum Curve {
    Piecewise(PiecewiseLinear),
    Shape(ShapeParam),
}

impl From<PiecewiseLinear> for Curve {
    fn from(p: PiecewiseLinear) -> Self {
        Curve::Piecewise(p)
    }
}

impl From<&Profile> for Curve {
    fn from(p: &Profile) -> Self {
        Curve::Piecewise(p.to_piecewise())
    }
}

impl From<ShapeParam> for Curve {
    fn from(c: ShapeParam) -> Self {
        Curve::Shape(c)
    }
}

impl Curve {
    pub fn evaluate(&self, s: f64) -> f64 {
        match self {
            Curve::Piecewise(p) => p.evaluate(s),
            Curve::Shape(c) => c.omega_c(s),
        }
    }

    pub fn derivative(&self, s: f64) -> f64 {
        match self {
            Curve::Piecewise(p) => p.derivative(s),
            Curve::Shape(c) => c.omega_c_prime(s),
        }
    }

    /// Where the curve differs from `|s|`.
    pub fn support(&self) -> (f64, f64) {
        match self {
            Curve::Piecewise(p) => p.support(),
            Curve::Shape(c) => c.support(),
        }
    }

    pub fn breakpoints(&self) -> Vec<f64> {
        match self {
            Curve::Piecewise(p) => {
                let mut v = p.xs.clone();
                v.push(0.0);
                v
            }
            Curve::Shape(c) => c.breakpoints(),
        }
    }

    /// The distributional second derivative.
    fn second_derivative(&self) -> SecondDerivative {
        match self {
            Curve::Piecewise(p) => {
                let slopes: Vec<f64> = p.segments().map(|(_, _, s)| s).collect();
                let mut atoms = Vec::with_capacity(p.xs.len());
                let mut left = -1.0;
                for (k, &x) in p.xs.iter().enumerate() {
                    let right = slopes.get(k).copied().unwrap_or(1.0);
                    if right != left {
                        atoms.push((x, right - left));
                    }
                    left = right;
                }
                SecondDerivative { atoms, bulk: None }
            }
            Curve::Shape(c) => {
                let mass = edge_mass(*c);
                let atoms = if mass > 0.0 {
                    vec![(-0.5 / c.c(), mass)]
                } else {
                    Vec::new()
                };
                SecondDerivative {
                    atoms,
                    bulk: Some(*c),
                }
            }
        }
    }
}

/// Jump of `Ω_c'` at `s = -1/(2c)`: 2 for `c > 1`, 1 at `c = 1`, else 0.
fn edge_mass(c: ShapeParam) -> f64 {
    let c = c.c();
    if c > 1.0 {
        2.0
    } else if c == 1.0 {
        1.0
    } else {
        0.0
    }
}

/// Atoms plus an optional absolutely continuous part `Ω_c''` on the bulk.
struct SecondDerivative {
    atoms: Vec<(f64, f64)>,
    bulk: Option<ShapeParam>,
}

/// The density of `Ω_c'' dt` in the variable `ψ`, `t = c/2 + sin ψ`:
/// `2(1 + c sin ψ) / (π (1 + c² + 2c sin ψ))`.
fn bulk_weight(c: f64, psi: f64) -> f64 {
    // 1 + sin ψ without cancellation near ψ = -π/2
    let h = (0.5 * psi + FRAC_PI_4).sin();
    let one_plus = 2.0 * h * h;
    let num = (1.0 - c) + c * one_plus;
    let den = (1.0 - c) * (1.0 - c) + 2.0 * c * one_plus;
    if den == 0.0 {
        return 1.0 / PI;
    }
    2.0 * num / (PI * den)
}

/// `∫ g(t) Ω_c''(t) dt` over the part of the bulk inside `[lo, hi]`.
fn bulk_integral(
    c: ShapeParam,
    g: impl Fn(f64) -> f64,
    lo: f64,
    hi: f64,
    breaks: &[f64],
    quad: &QuadratureConfig,
) -> Result<f64> {
    let half = 0.5 * c.c();
    let to_psi = |t: f64| (t - half).clamp(-1.0, 1.0).asin();
    let (plo, phi) = (to_psi(lo), to_psi(hi));
    if plo >= phi {
        return Ok(0.0);
    }
    let pb: Vec<f64> = breaks
        .iter()
        .filter(|&&b| (b - half).abs() < 1.0)
        .map(|&b| to_psi(b))
        .collect();
    let cc = c.c();
    integrate_breaks(
        |p| g(half + p.sin()) * bulk_weight(cc, p),
        plo,
        phi,
        &pb,
        quad,
    )
}

fn bulk_integral_full(
    c: ShapeParam,
    g: impl Fn(f64) -> f64,
    breaks: &[f64],
    quad: &QuadratureConfig,
) -> Result<f64> {
    let half = 0.5 * c.c();
    bulk_integral(c, g, half - 1.0, half + 1.0, breaks, quad)
}

/// `∫ φ_2(x - t) Ω_c''(t) dt` over the bulk.
fn bulk_phi2(c: ShapeParam, x: f64, quad: &QuadratureConfig) -> Result<f64> {
    bulk_integral_full(c, |t| phi2(x - t), &[x], quad)
}

/// `∬ φ_2(s - t) μ(ds) ν(dt)`.
fn phi2_pairing(
    mu: &SecondDerivative,
    nu: &SecondDerivative,
    quad: &QuadratureConfig,
) -> Result<f64> {
    let mut total = 0.0;
    for &(x, m) in &mu.atoms {
        for &(y, w) in &nu.atoms {
            total += m * w * phi2(x - y);
        }
    }
    let inner = quad.scaled(0.01);
    if let Some(cn) = nu.bulk {
        for &(x, m) in &mu.atoms {
            total += m * bulk_phi2(cn, x, &inner)?;
        }
    }
    if let Some(cm) = mu.bulk {
        for &(y, w) in &nu.atoms {
            total += w * bulk_phi2(cm, y, &inner)?;
        }
        if let Some(cn) = nu.bulk {
            let value = bulk_integral_full(
                cm,
                |s| bulk_phi2(cn, s, &inner).unwrap_or(f64::NAN),
                &nu_breaks(cn),
                quad,
            )?;
            total += value;
        }
    }
    Ok(total)
}

fn nu_breaks(c: ShapeParam) -> Vec<f64> {
    let h = 0.5 * c.c();
    vec![h - 1.0, h + 1.0]
}

/// `1 + 2 ∬_{t<s} ln(2(s-t)) (1 - L'(s)) (1 + L'(t)) ds dt` for a
/// piecewise-linear `L`, exactly.
pub fn theta_piecewise(l: &PiecewiseLinear) -> f64 {
    let segs: Vec<(f64, f64, f64)> = l.segments().collect();
    let mut sum = 0.0;
    for (i, &(t0, t1, st)) in segs.iter().enumerate() {
        let up = 1.0 + st;
        if up == 0.0 {
            continue;
        }
        // t < s inside one piece: ∬ ln(2(s - t)) = -φ_2(h)
        sum += up * (1.0 - st) * -phi2(t1 - t0);
        for &(s0, s1, ss) in &segs[i + 1..] {
            let down = 1.0 - ss;
            if down == 0.0 {
                continue;
            }
            let rect = phi2(s1 - t0) - phi2(s1 - t1) - phi2(s0 - t0) + phi2(s0 - t1);
            sum += up * down * -rect;
        }
    }
    1.0 + 2.0 * sum
}

pub fn theta_profile(p: &Profile) -> f64 {
    theta_piecewise(&p.to_piecewise())
}

/// `θ(Ω_c)` by nested quadrature. The inner integral over `t` is
/// integrated by parts once, so only `φ_1(s - t)` meets the log diagonal.
pub fn theta_shape(c: ShapeParam, quad: &QuadratureConfig) -> Result<f64> {
    let (l, _) = c.support();
    let half = 0.5 * c.c();
    let mass = edge_mass(c);
    let inner_quad = quad.scaled(0.01);
    let inner = |s: f64| -> f64 {
        let bulk = bulk_integral(c, |t| phi1(s - t), l, s, &[], &inner_quad);
        match bulk {
            Ok(v) => -mass * phi1(s - l) - v,
            Err(_) => f64::NAN,
        }
    };
    // 1 - Ω_c' vanishes on the affine piece, so only the bulk contributes
    let outer = integrate_breaks(
        |s| (1.0 - c.omega_c_prime(s)) * inner(s),
        half - 1.0,
        half + 1.0,
        &[],
        quad,
    )?;
    Ok(1.0 + 2.0 * outer)
}

pub fn theta(curve: &Curve, quad: &QuadratureConfig) -> Result<f64> {
    match curve {
        Curve::Piecewise(p) => Ok(theta_piecewise(p)),
        Curve::Shape(c) => theta_shape(*c, quad),
    }
}

fn xlogx(w: f64) -> f64 {
    if w == 0.0 {
        0.0
    } else {
        w * w.ln()
    }
}

/// `∫_{x0}^{x1} ln(1 + 2cs) (p + q s) ds`.
fn log_linear_integral(c: f64, x0: f64, x1: f64, p: f64, q: f64) -> f64 {
    if 2.0 * c * x0.abs().max(x1.abs()) < 0.05 {
        return crate::quadrature::gauss_legendre().integrate(
            |s| (2.0 * c * s).ln_1p() * (p + q * s),
            x0,
            x1,
        );
    }
    let w1 = |w: f64| xlogx(w) - w;
    let w2 = |w: f64| 0.5 * w * xlogx(w) - 0.25 * w * w;
    let (a, b) = (1.0 + 2.0 * c * x0, 1.0 + 2.0 * c * x1);
    let int_ln = (w1(b) - w1(a)) / (2.0 * c);
    let int_s_ln = ((w2(b) - w1(b)) - (w2(a) - w1(a))) / (4.0 * c * c);
    p * int_ln + q * int_s_ln
}

fn check_rho_support(left: f64, c: f64) -> Result<()> {
    if c > 0.0 && left < -0.5 / c - 1e-12 {
        return Err(Error::Domain(format!(
            "curve leaves |s| at {left}, left of the pole -1/(2c) = {}",
            -0.5 / c
        )));
    }
    Ok(())
}

/// `2 ∫ ln(1 + 2cs) (L(s) - |s|) ds` in closed form per linear piece.
pub fn rho_piecewise(l: &PiecewiseLinear, c: f64) -> Result<f64> {
    if c == 0.0 {
        return Ok(0.0);
    }
    let mut total = 0.0;
    for (k, (x0, x1, slope)) in l.segments().enumerate() {
        let y0 = l.ys[k];
        let pieces = if x0 < 0.0 && x1 > 0.0 {
            vec![(x0, 0.0), (0.0, x1)]
        } else {
            vec![(x0, x1)]
        };
        for (a, b) in pieces {
            // L - |s| = (y0 - slope x0 + slope s) - σ s on this piece
            let sigma = if a + b >= 0.0 { 1.0 } else { -1.0 };
            let p = y0 - slope * x0;
            let q = slope - sigma;
            if p == 0.0 && q == 0.0 {
                continue;
            }
            check_rho_support(a, c)?;
            total += log_linear_integral(c, a, b, p, q);
        }
    }
    Ok(2.0 * total)
}

pub fn rho_profile(p: &Profile, c: f64) -> Result<f64> {
    rho_piecewise(&p.to_piecewise(), c)
}

/// `2 ∫ ln(1 + 2cs) (L(s) - |s|) ds` by adaptive quadrature; the
/// reference route for any curve.
pub fn rho_quadrature(curve: &Curve, c: f64, quad: &QuadratureConfig) -> Result<f64> {
    if c == 0.0 {
        return Ok(0.0);
    }
    let (lo, hi) = curve.support();
    check_rho_support(lo, c)?;
    let lo = lo.max(-0.5 / c);
    let v = integrate_breaks(
        |s| (2.0 * c * s).ln_1p() * (curve.evaluate(s) - s.abs()),
        lo,
        hi,
        &curve.breakpoints(),
        quad,
    )?;
    Ok(2.0 * v)
}

pub fn rho(curve: &Curve, c: f64, quad: &QuadratureConfig) -> Result<f64> {
    match curve {
        Curve::Piecewise(p) => rho_piecewise(p, c),
        Curve::Shape(_) => rho_quadrature(curve, c, quad),
    }
}

/// `Σ_{k≥1} x^{-2k} / (k(k+1)(2k+1))`, summed until the next term drops
/// below `tol` times the running sum. Accepts `|x| = 1`.
pub fn m_series(x: f64, tol: f64) -> Result<f64> {
    if !(x.abs() >= 1.0) {
        return Err(Error::Domain(format!("m(x) needs |x| ≥ 1, got {x}")));
    }
    let r = 1.0 / (x * x);
    let mut power = 1.0;
    let mut sum = 0.0;
    for k in 1..=50_000_000u64 {
        power *= r;
        let kf = k as f64;
        let term = power / (kf * (kf + 1.0) * (2.0 * kf + 1.0));
        sum += term;
        if term < tol * sum {
            return Ok(sum);
        }
    }
    Err(Error::Limit(format!(
        "m({x}) did not reach tolerance {tol}"
    )))
}

/// `3 - (x+1)² ln(1 + 1/x) - (x-1)² ln(1 - 1/x)`, the summed series.
/// Loses relative accuracy for large `|x|`; see [`m_value`].
pub fn m_closed(x: f64) -> Result<f64> {
    let x = x.abs();
    if !(x >= 1.0) {
        return Err(Error::Domain(format!("m(x) needs |x| ≥ 1, got {x}")));
    }
    if x == 1.0 {
        return Ok(3.0 - 4.0 * std::f64::consts::LN_2);
    }
    let inv = 1.0 / x;
    Ok(3.0 - (x + 1.0).powi(2) * inv.ln_1p() - (x - 1.0).powi(2) * (-inv).ln_1p())
}

/// `m(x)` to full double precision: the closed form below 2, the series
/// above.
pub fn m_value(x: f64) -> Result<f64> {
    if x.abs() < 2.0 {
        m_closed(x)
    } else {
        m_series(x, f64::EPSILON / 8.0)
    }
}

/// `(1/√n) Σ m(h_{i,j})`.
pub fn theta_hat(lambda: &Partition) -> Result<f64> {
    if lambda.is_empty() {
        return Err(Error::Domain("θ̂ of the empty diagram".into()));
    }
    let mut sum = 0.0;
    for h in lambda.hooks() {
        sum += m_value(h as f64)?;
    }
    Ok(sum / (lambda.n() as f64).sqrt())
}

/// `(1/(2√n)) Σ m(N + c_{i,j})`.
pub fn rho_hat(lambda: &Partition, big_n: usize) -> Result<f64> {
    if lambda.is_empty() {
        return Err(Error::Domain("ρ̂ of the empty diagram".into()));
    }
    if lambda.height() > big_n {
        return Err(Error::Domain(format!(
            "diagram has {} rows, more than N = {big_n}",
            lambda.height()
        )));
    }
    let mut sum = 0.0;
    for c in lambda.contents() {
        sum += m_value((big_n as i64 + c) as f64)?;
    }
    Ok(sum / (2.0 * (lambda.n() as f64).sqrt()))
}

/// `f = factor · (L - Ω_c)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Deviation {
    curve: Curve,
    shape: ShapeParam,
    factor: f64,
}

impl Deviation {
    pub fn new(curve: impl Into<Curve>, shape: ShapeParam) -> Self {
        Deviation {
            curve: curve.into(),
            shape,
            factor: 1.0,
        }
    }

    pub fn scaled(mut self, factor: f64) -> Self {
        self.factor *= factor;
        self
    }

    pub fn curve(&self) -> &Curve {
        &self.curve
    }

    pub fn shape(&self) -> ShapeParam {
        self.shape
    }

    pub fn evaluate(&self, s: f64) -> f64 {
        self.factor * (self.curve.evaluate(s) - self.shape.omega_c(s))
    }

    pub fn derivative(&self, s: f64) -> f64 {
        self.factor * (self.curve.derivative(s) - self.shape.omega_c_prime(s))
    }

    /// An interval outside which `f` vanishes.
    pub fn window(&self) -> (f64, f64) {
        let (a0, b0) = self.curve.support();
        let (a1, b1) = self.shape.support();
        (a0.min(a1), b0.max(b1))
    }

    pub fn breakpoints(&self) -> Vec<f64> {
        let mut v = self.curve.breakpoints();
        v.extend(self.shape.breakpoints());
        v
    }
}

/// How to evaluate the half-Sobolev norm.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum SobolevRoute {
    /// `-2 ∬ ln|2(s-t)| f'(s) f'(t)`, integrated by parts onto `f''`.
    LogKernel,
    /// `∬ ((f(s) - f(t)) / (s - t))²` directly.
    DifferenceQuotient,
}

/// `‖f‖²_{1/2} = ∬ ((f(s) - f(t)) / (s - t))² ds dt`.
pub fn sobolev_half_sq(f: &Deviation, route: SobolevRoute, quad: &QuadratureConfig) -> Result<f64> {
    if f.factor == 0.0 {
        return Ok(0.0);
    }
    match route {
        SobolevRoute::LogKernel => sobolev_log_kernel(f, quad),
        SobolevRoute::DifferenceQuotient => sobolev_difference_quotient(f, quad),
    }
}

fn sobolev_log_kernel(f: &Deviation, quad: &QuadratureConfig) -> Result<f64> {
    // ½‖f‖² = ∬ φ_0(s-t) f'(s) f'(t) = -∬ φ_2(s-t) f''(s) f''(t)
    let mu = f.curve.second_derivative();
    let nu = Curve::Shape(f.shape).second_derivative();
    let ll = phi2_pairing(&mu, &mu, quad)?;
    let ln = phi2_pairing(&mu, &nu, quad)?;
    let nn = phi2_pairing(&nu, &nu, quad)?;
    Ok(-2.0 * f.factor * f.factor * (ll - 2.0 * ln + nn))
}

fn sobolev_difference_quotient(f: &Deviation, quad: &QuadratureConfig) -> Result<f64> {
    let (a, b) = f.window();
    let pts = split_points(a, b, &f.breakpoints());
    let cells: Vec<(Vec<(f64, f64)>, Vec<f64>)> = pts
        .windows(2)
        .map(|w| {
            let nodes = tanh_sinh_nodes(w[0], w[1], PRODUCT_STEP);
            let values = nodes.iter().map(|&(x, _)| f.evaluate(x)).collect();
            (nodes, values)
        })
        .collect();
    let mut square = 0.0;
    for (i, (ni, vi)) in cells.iter().enumerate() {
        for (j, (nj, vj)) in cells.iter().enumerate().take(i + 1) {
            let mut cell = 0.0;
            for (&(x, wx), &fx) in ni.iter().zip(vi) {
                let mut row = 0.0;
                for (&(y, wy), &fy) in nj.iter().zip(vj) {
                    let q = if x == y {
                        f.derivative(x)
                    } else {
                        (fx - fy) / (x - y)
                    };
                    row += wy * q * q;
                }
                cell += wx * row;
            }
            square += if i == j { cell } else { 2.0 * cell };
        }
    }
    let tail = integrate_breaks(
        |s| {
            let v = f.evaluate(s);
            v * v * (1.0 / (s - a) + 1.0 / (b - s))
        },
        a,
        b,
        &f.breakpoints(),
        quad,
    )?;
    Ok(square + 2.0 * tail)
}

/// `2 ∫_{|s-c/2|>1} H_c'(s) f(s) ds`.
pub fn h_term(f: &Deviation, quad: &QuadratureConfig) -> Result<f64> {
    h_term_shifted(f, 0.0, quad)
}

/// [`h_term`] with `H_c'` replaced by `H_c' + shift` on its domain; a
/// deliberate fault for checking that the identity test can fail.
pub fn h_term_shifted(f: &Deviation, shift: f64, quad: &QuadratureConfig) -> Result<f64> {
    let c = f.shape;
    if c.c() <= 0.0 {
        return Err(Error::Domain("the H-term needs c > 0".into()));
    }
    if f.factor == 0.0 {
        return Ok(0.0);
    }
    let (a, b) = f.window();
    let half = 0.5 * c.c();
    let pole = -0.5 / c.c();
    let integrand = |s: f64| match c.h_prime(s) {
        Ok(v) => (v + shift) * f.evaluate(s),
        Err(_) => f64::NAN,
    };
    let breaks = f.breakpoints();
    let mut total = 0.0;
    let (l0, l1) = (a.max(pole), b.min(half - 1.0));
    if l0 < l1 {
        total += integrate_breaks(integrand, l0, l1, &breaks, quad)?;
    }
    let (r0, r1) = (a.max(half + 1.0), b);
    if r0 < r1 {
        total += integrate_breaks(integrand, r0, r1, &breaks, quad)?;
    }
    Ok(2.0 * total)
}

/// Checks the hypotheses of the norm identity for `L` at parameter `c`:
/// `L ≥ |X|`, `|L'| ≤ 1`, `L = |X|` left of `-1/(2c)` and far right,
/// `L(X) < X + 1/c` right of `-1/(2c)`, and area 1/2.
pub fn check_hypotheses(curve: &Curve, c: ShapeParam) -> Result<()> {
    let tol = 1e-12;
    let cc = c.c();
    if cc <= 0.0 {
        return Err(Error::Hypothesis("c must be positive".into()));
    }
    let pole = -0.5 / cc;
    match curve {
        Curve::Shape(s) => {
            if s != &c {
                return Err(Error::Hypothesis(
                    "among limit shapes only Ω_c itself is admitted at parameter c".into(),
                ));
            }
            Ok(())
        }
        Curve::Piecewise(p) => {
            for (&x, &y) in p.xs.iter().zip(&p.ys) {
                if y < x.abs() - tol {
                    return Err(Error::Hypothesis(format!("L({x}) = {y} < |{x}|")));
                }
                if x > pole + tol && y >= x + 1.0 / cc - tol {
                    return Err(Error::Hypothesis(format!("L({x}) = {y} reaches X + 1/c")));
                }
            }
            let first = (p.xs[0], p.ys[0]);
            let last = (*p.xs.last().unwrap(), *p.ys.last().unwrap());
            if (first.1 - first.0.abs()).abs() > tol || (last.1 - last.0.abs()).abs() > tol {
                return Err(Error::Hypothesis("L must meet |X| at both ends".into()));
            }
            if first.0 < pole - tol {
                return Err(Error::Hypothesis(format!(
                    "L differs from |X| at {} < -1/(2c) = {pole}",
                    first.0
                )));
            }
            if let Some((_, _, s)) = p.segments().find(|&(_, _, s)| s.abs() > 1.0 + tol) {
                return Err(Error::Hypothesis(format!(
                    "slope {s} exceeds 1 in absolute value"
                )));
            }
            let area: f64 =
                p.xs.windows(2)
                    .zip(p.ys.windows(2))
                    .map(|(x, y)| {
                        let (x0, x1) = (x[0], x[1]);
                        let trap = 0.5 * (y[0] + y[1]) * (x1 - x0);
                        let abs_part = if x0 >= 0.0 || x1 <= 0.0 {
                            0.5 * (x0.abs() + x1.abs()) * (x1 - x0)
                        } else {
                            0.5 * (x0 * x0 + x1 * x1)
                        };
                        trap - abs_part
                    })
                    .sum();
            if (area - 0.5).abs() > 1e-9 {
                return Err(Error::Hypothesis(format!("area {area} is not 1/2")));
            }
            Ok(())
        }
    }
}

/// Both sides of `θ(L) - ρ(L) = ½‖f‖² + 2∫_{|s-c/2|>1} H_c'(s) f(s) ds`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NormIdentity {
    pub c: f64,
    pub theta: f64,
    pub rho: f64,
    /// `θ - ρ`.
    pub lhs: f64,
    /// `‖f‖²` by the log-kernel route.
    pub sobolev_sq: f64,
    /// `‖f‖²` by the difference-quotient route.
    pub sobolev_sq_quotient: f64,
    pub h_term: f64,
    /// `½ sobolev_sq + h_term`.
    pub rhs: f64,
}

pub fn prop41_identity(
    curve: &Curve,
    c: ShapeParam,
    quad: &QuadratureConfig,
) -> Result<NormIdentity> {
    prop41_identity_perturbed(curve, c, 0.0, quad)
}

/// [`prop41_identity`] with the `H`-term computed through
/// [`h_term_shifted`].
pub fn prop41_identity_perturbed(
    curve: &Curve,
    c: ShapeParam,
    h_shift: f64,
    quad: &QuadratureConfig,
) -> Result<NormIdentity> {
    check_hypotheses(curve, c)?;
    let theta = theta(curve, quad)?;
    let rho = rho(curve, c.c(), quad)?;
    let f = Deviation::new(curve.clone(), c);
    let (sobolev_sq, sobolev_sq_quotient) = if matches!(curve, Curve::Shape(_)) {
        (0.0, 0.0)
    } else {
        (
            sobolev_half_sq(&f, SobolevRoute::LogKernel, quad)?,
            sobolev_half_sq(&f, SobolevRoute::DifferenceQuotient, quad)?,
        )
    };
    let h = if matches!(curve, Curve::Shape(_)) {
        0.0
    } else {
        h_term_shifted(&f, h_shift, quad)?
    };
    Ok(NormIdentity {
        c: c.c(),
        theta,
        rho,
        lhs: theta - rho,
        sobolev_sq,
        sobolev_sq_quotient,
        h_term: h,
        rhs: 0.5 * sobolev_sq + h,
    })
}

/// All terms of `-ln P_N^n(λ)/√n = √n(θ - ρ) + θ̂ - ρ̂ - ε_n` for one
/// diagram, with `c = √n / N`.
pub fn prop31_decompose(
    lambda: &Partition,
    big_n: usize,
    quad: &QuadratureConfig,
) -> Result<FunctionalReport> {
    let n = lambda.n();
    let c = ShapeParam::from_dims(n, big_n)?;
    let profile = lambda.profile()?;
    let pw = profile.to_piecewise();
    let theta = theta_piecewise(&pw);
    let rho = rho_piecewise(&pw, c.c())?;
    let theta_hat = theta_hat(lambda)?;
    let rho_hat = rho_hat(lambda, big_n)?;
    let lhs = neg_log_measure_scaled(lambda, big_n, 50)?.to_f64();
    let root = (n as f64).sqrt();
    let residual = root * (theta - rho) + theta_hat - rho_hat - lhs;
    let curve = Curve::Piecewise(pw);
    let (sobolev_sq, h) = if check_hypotheses(&curve, c).is_ok() {
        let f = Deviation::new(curve, c);
        (
            Some(sobolev_half_sq(&f, SobolevRoute::LogKernel, quad)?),
            Some(h_term(&f, quad)?),
        )
    } else {
        (None, None)
    };
    Ok(FunctionalReport {
        n,
        big_n,
        c: c.c(),
        theta,
        rho,
        theta_hat,
        rho_hat,
        sobolev_sq,
        h_term: h,
        lhs,
        residual,
    })
}

/// `(a, b)` with `a = min{c/2 - 1, -1/(2c)} - 1/2` and `b = c/2 + 3/2`.
pub fn default_window(c: ShapeParam) -> (f64, f64) {
    let cc = c.c();
    ((0.5 * cc - 1.0).min(-0.5 / cc) - 0.5, 0.5 * cc + 1.5)
}

fn check_window(c: ShapeParam, a: f64, b: f64) -> Result<()> {
    let cc = c.c();
    if cc <= 0.0 {
        return Err(Error::Domain("the lemmas need c > 0".into()));
    }
    if !(a < (0.5 * cc - 1.0).min(-0.5 / cc) && b > 0.5 * cc + 1.0) {
        return Err(Error::Domain(format!(
            "window [{a}, {b}] must contain the shape and the pole strictly"
        )));
    }
    Ok(())
}

/// `-c²/8 + [c > 1](1/2 - 5/(8c²) + c²/8 - (1 + 1/(2c²)) ln c)`.
pub fn a_closed(c: f64) -> f64 {
    let mut v = -c * c / 8.0;
    if c > 1.0 {
        let c2 = c * c;
        v += 0.5 - 5.0 / (8.0 * c2) + c2 / 8.0 - (1.0 + 0.5 / c2) * c.ln();
    }
    v
}

/// `(quadrature, closed form)` for `A(c) = ∫ ln(1 + 2cs)(|s| - Ω_c(s)) ds`.
pub fn lemma_a(c: ShapeParam, quad: &QuadratureConfig) -> Result<(f64, f64)> {
    let (a, b) = default_window(c);
    check_window(c, a, b)?;
    let cc = c.c();
    // the integrand vanishes left of the support, where the log is undefined
    let lo = a.max(c.support().0);
    let q = integrate_breaks(
        |s| (2.0 * cc * s).ln_1p() * (s.abs() - c.omega_c(s)),
        lo,
        b,
        &c.breakpoints(),
        quad,
    )?;
    Ok((q, a_closed(cc)))
}

/// `I_c(s) = ∫_a^b φ_0(s - t) Ω_c'(t) dt` by quadrature.
pub fn i_quadrature(c: ShapeParam, s: f64, a: f64, b: f64, quad: &QuadratureConfig) -> Result<f64> {
    let mut breaks = c.breakpoints();
    breaks.push(s);
    integrate_breaks(|t| phi0(s - t) * c.omega_c_prime(t), a, b, &breaks, quad)
}

/// `φ_1(a - s) + φ_1(b - s) + G_c(s) - H_c(s)`.
pub fn i_closed(c: ShapeParam, s: f64, a: f64, b: f64) -> Result<f64> {
    Ok(phi1(a - s) + phi1(b - s) + c.g(s)? - c.h(s)?)
}

pub fn lemma_i(
    c: ShapeParam,
    s: f64,
    a: f64,
    b: f64,
    quad: &QuadratureConfig,
) -> Result<(f64, f64)> {
    check_window(c, a, b)?;
    if !(s > a && s < b) {
        return Err(Error::Domain(format!("s = {s} outside ({a}, {b})")));
    }
    Ok((i_quadrature(c, s, a, b, quad)?, i_closed(c, s, a, b)?))
}

/// Right side of the `φ_2 * Ω̃_c''` convolution identity.
pub fn f3_closed(c: ShapeParam, x: f64) -> Result<f64> {
    let cc = c.c();
    let c2 = cc * cc;
    let mut v = c.sign_one_minus_c() / c2 * phi2(0.5 * (1.0 + c2 + 2.0 * cc * x))
        - c.beta() * x
        - c.j_tilde(x)?
        + (-3.0 + 4.0 * c2 + 3.0 * c2 * c2) / (16.0 * c2);
    if cc > 1.0 {
        let d = x + c.alpha();
        v -= d * d * cc.ln();
    }
    Ok(v)
}

/// `(∫_{-1}^{1} φ_2(x - z) Ω̃_c''(z) dz, closed form)`.
pub fn lemma_f3(c: ShapeParam, x: f64, quad: &QuadratureConfig) -> Result<(f64, f64)> {
    if c.c() <= 0.0 {
        return Err(Error::Domain("the lemmas need c > 0".into()));
    }
    let q = bulk_phi2(c, x + 0.5 * c.c(), quad)?;
    Ok((q, f3_closed(c, x)?))
}

/// Right side of the `∫ I_c Ω_c'` identity; its two integrals are
/// evaluated by quadrature.
pub fn int_i_omega_rhs(c: ShapeParam, a: f64, b: f64, quad: &QuadratureConfig) -> Result<f64> {
    let cc = c.c();
    let breaks = c.breakpoints();
    let g_int = integrate_breaks(
        |s| c.g(s).map_or(f64::NAN, |g| g * c.omega_c_prime(s)),
        a,
        b,
        &breaks,
        quad,
    )?;
    let h_int = integrate_breaks(
        |s| c.h(s).map_or(f64::NAN, |h| h * c.omega_c_prime(s)),
        a,
        b,
        &breaks,
        quad,
    )?;
    let mut v = 1.0 - cc * cc / 4.0 - 2.0 * phi2(b - a) + 2.0 * g_int - 2.0 * h_int;
    if cc > 1.0 {
        let c2 = cc * cc;
        v += 1.0 - 5.0 / (4.0 * c2) + c2 / 4.0 - (2.0 + 1.0 / c2) * cc.ln();
    }
    Ok(v)
}

/// `(∫_a^b I_c(s) Ω_c'(s) ds with I_c by nested quadrature, right side)`.
pub fn lemma_int_i_omega(
    c: ShapeParam,
    a: f64,
    b: f64,
    quad: &QuadratureConfig,
) -> Result<(f64, f64)> {
    check_window(c, a, b)?;
    let inner = quad.scaled(0.01);
    let lhs = integrate_breaks(
        |s| i_quadrature(c, s, a, b, &inner).map_or(f64::NAN, |v| v * c.omega_c_prime(s)),
        a,
        b,
        &c.breakpoints(),
        quad,
    )?;
    Ok((lhs, int_i_omega_rhs(c, a, b, quad)?))
}

/// `α_c = ¼ ∫_{-1}^{1} (sign z - Ω̃_c'(z))² dz`.
pub fn alpha_constant(c: ShapeParam, quad: &QuadratureConfig) -> Result<f64> {
    let v = integrate_breaks(
        |z| {
            let d = sign(z) - c.omega_c_prime_shifted(z);
            d * d
        },
        -1.0,
        1.0,
        &[0.0],
        quad,
    )?;
    Ok(0.25 * v)
}

/// `α_0 = 2/π - 4/π²`.
pub fn alpha_zero() -> f64 {
    2.0 / PI - 4.0 / (PI * PI)
}

/// `β = 2π/√6`.
pub fn beta_constant() -> f64 {
    2.0 * PI / 6f64.sqrt()
}
