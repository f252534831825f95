//! The limit shapes `Ω` and `Ω_c` and the special functions built on them.
//!
//! Everything inside the bulk `|s - c/2| < 1` is written in the shifted
//! coordinate `z = s - c/2`, where `1 + 2cs = 1 + c² + 2cz` and the bulk is
//! `|z| < 1`. Inverse trigonometric terms are evaluated through `atan2` with
//! the square roots factored out by hand, which keeps full relative
//! accuracy at the edges of the bulk and for small `c`.

use std::f64::consts::{FRAC_2_PI, PI};

use crate::error::{Error, Result};

/// `sign(x)` with `sign(0) = 0`.
pub fn sign(x: f64) -> f64 {
    if x > 0.0 {
        1.0
    } else if x < 0.0 {
        -1.0
    } else {
        0.0
    }
}

/// `arccosh(y)` for `y ≥ 1`, given `q = y² - 1` computed by the caller
/// without cancellation.
fn acosh_with(y: f64, q: f64) -> f64 {
    let q = q.max(0.0);
    (q / (y + 1.0) + q.sqrt()).ln_1p()
}

/// `arccosh|z|` for `|z| ≥ 1`.
pub fn acosh_abs(z: f64) -> f64 {
    let y = z.abs();
    acosh_with(y, (y - 1.0) * (y + 1.0))
}

/// The Vershik–Kerov–Logan–Shepp curve.
pub fn omega(x: f64) -> f64 {
    if x.abs() >= 1.0 {
        x.abs()
    } else {
        FRAC_2_PI * ((1.0 - x * x).sqrt() + x * x.asin())
    }
}

/// `Ω'(x) = (2/π) arcsin x` on `[-1, 1]`.
pub fn omega_prime(x: f64) -> f64 {
    if x.abs() >= 1.0 {
        sign(x)
    } else {
        FRAC_2_PI * x.asin()
    }
}

/// `φ_0(x) = -ln|2x|`, `φ_1(x) = x - x ln|2x|`,
/// `φ_2(x) = 3x²/4 - x² ln(2|x|)/2`; `φ_1(0) = φ_2(0) = 0`.
pub fn phi(k: u8, x: f64) -> Result<f64> {
    match k {
        0 if x == 0.0 => Err(Error::Domain("φ_0 is singular at 0".into())),
        0 => Ok(phi0(x)),
        1 => Ok(phi1(x)),
        2 => Ok(phi2(x)),
        _ => Err(Error::Domain(format!("φ_{k} is not defined here"))),
    }
}

#[inline]
pub fn phi0(x: f64) -> f64 {
    -(2.0 * x.abs()).ln()
}

#[inline]
pub fn phi1(x: f64) -> f64 {
    if x == 0.0 {
        0.0
    } else {
        x - x * (2.0 * x.abs()).ln()
    }
}

#[inline]
pub fn phi2(x: f64) -> f64 {
    if x == 0.0 {
        0.0
    } else {
        let x2 = x * x;
        0.75 * x2 - 0.5 * x2 * (2.0 * x.abs()).ln()
    }
}

/// The deformation parameter `c = lim √n / N`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct ShapeParam(f64);

impl ShapeParam {
    pub fn new(c: f64) -> Result<Self> {
        if c.is_finite() && c >= 0.0 {
            Ok(ShapeParam(c))
        } else {
            Err(Error::Domain(format!(
                "c must be finite and nonnegative, got {c}"
            )))
        }
    }

    /// The realised `c_n = √n / N`.
    pub fn from_dims(n: usize, big_n: usize) -> Result<Self> {
        if big_n == 0 {
            return Err(Error::Domain("N must be positive".into()));
        }
        Self::new((n as f64).sqrt() / big_n as f64)
    }

    pub fn c(&self) -> f64 {
        self.0
    }

    /// `(1 + c²) / (2c)`, the distance from the bulk centre to the pole
    /// `s = -1/(2c)`.
    pub fn alpha(&self) -> f64 {
        let c = self.0;
        (1.0 + c * c) / (2.0 * c)
    }

    /// `(1 - c²) / (2c)`.
    pub fn beta(&self) -> f64 {
        let c = self.0;
        (1.0 - c * c) / (2.0 * c)
    }

    /// `sign(1 - c)`, zero exactly at `c = 1`.
    pub fn sign_one_minus_c(&self) -> f64 {
        sign(1.0 - self.0)
    }

    fn require_positive(&self, what: &str) -> Result<()> {
        if self.0 > 0.0 {
            Ok(())
        } else {
            Err(Error::Domain(format!("{what} is only defined for c > 0")))
        }
    }

    /// `z = s - c/2`.
    pub fn shift(&self, s: f64) -> f64 {
        s - 0.5 * self.0
    }

    pub fn unshift(&self, z: f64) -> f64 {
        z + 0.5 * self.0
    }

    /// Where `Ω_c` separates from `|s|`: left end and right end.
    pub fn support(&self) -> (f64, f64) {
        let c = self.0;
        let left = if c <= 1.0 { 0.5 * c - 1.0 } else { -0.5 / c };
        (left, 0.5 * c + 1.0)
    }

    /// Points where `Ω_c`, `|s|` or their derivatives are not smooth.
    pub fn breakpoints(&self) -> Vec<f64> {
        let c = self.0;
        let mut b = vec![0.5 * c - 1.0, 0.5 * c + 1.0, 0.0];
        if c > 0.0 {
            b.push(-0.5 / c);
        }
        b
    }

    /// `Ω_c(s)`.
    pub fn omega_c(&self, s: f64) -> f64 {
        let c = self.0;
        if c == 0.0 {
            return omega(s);
        }
        let z = self.shift(s);
        if z.abs() < 1.0 {
            let r = (1.0 - z * z).sqrt();
            FRAC_2_PI * (s * (z + c).atan2(r) + (c * r).atan2(1.0 + c * z) / (2.0 * c) + 0.5 * r)
        } else if c > 1.0 && z <= -1.0 && 2.0 * s >= -1.0 / c {
            s + 1.0 / c
        } else {
            s.abs()
        }
    }

    /// `Ω_c'(s)`; one-sided conventions at the kinks follow the outer branch.
    pub fn omega_c_prime(&self, s: f64) -> f64 {
        let c = self.0;
        if c == 0.0 {
            return omega_prime(s);
        }
        let z = self.shift(s);
        if z.abs() < 1.0 {
            FRAC_2_PI * (z + c).atan2((1.0 - z * z).sqrt())
        } else if c > 1.0 && z <= -1.0 && 2.0 * s > -1.0 / c {
            1.0
        } else {
            sign(s)
        }
    }

    /// `Ω̃_c'(z) = Ω_c'(z + c/2)`.
    pub fn omega_c_prime_shifted(&self, z: f64) -> f64 {
        self.omega_c_prime(self.unshift(z))
    }

    /// `Ω̃_c''(z) = 2(1 + cz) / (π (1 + c² + 2cz) √(1 - z²))` in the bulk,
    /// zero outside. The point masses of `Ω_c''` at kinks are not included.
    pub fn omega_c_second(&self, z: f64) -> Result<f64> {
        let c = self.0;
        if z.abs() > 1.0 {
            return Ok(0.0);
        }
        if z.abs() == 1.0 {
            return Err(Error::Domain(
                "Ω̃_c'' is not integrable pointwise at |z| = 1".into(),
            ));
        }
        Ok(2.0 * (1.0 + c * z) / (PI * (1.0 + c * c + 2.0 * c * z) * (1.0 - z * z).sqrt()))
    }

    /// `arccosh |(1 + αz) / (z + α)|`, evaluated through
    /// `R² - 1 = (α² - 1)(z² - 1) / (z + α)²`.
    fn acosh_ratio(&self, z: f64) -> f64 {
        let c = self.0;
        let a = self.alpha();
        let den = (z + a).abs();
        let ratio = (1.0 + a * z).abs() / den;
        // √(α² - 1) = |1 - c²| / (2c)
        let root = (1.0 - c * c).abs() / (2.0 * c)
            * ((z.abs() - 1.0) * (z.abs() + 1.0)).max(0.0).sqrt()
            / den;
        acosh_with(ratio, root * root)
    }

    /// `(z + α)^k arccosh|R|`, continued by its limit 0 at `z = -α`.
    fn weighted_acosh_ratio(&self, z: f64, k: i32) -> f64 {
        let d = z + self.alpha();
        if d == 0.0 {
            0.0
        } else {
            d.powi(k) * self.acosh_ratio(z)
        }
    }

    /// `H̃_c(z)`: zero for `|z| ≤ 1`.
    pub fn h_tilde(&self, z: f64) -> Result<f64> {
        self.require_positive("H̃_c")?;
        if z.abs() <= 1.0 {
            return Ok(0.0);
        }
        let first = (z - self.beta()) * acosh_abs(z);
        let second = self.sign_one_minus_c() * self.weighted_acosh_ratio(z, 1);
        let third = sign(z) * ((z.abs() - 1.0) * (z.abs() + 1.0)).sqrt();
        Ok(first + second - third)
    }

    /// `H̃_c'(z) = arccosh|z| + sign(1-c) arccosh|(1 + αz)/(z + α)|` for
    /// `|z| > 1`, `z ≠ -α`; zero inside the bulk.
    pub fn h_tilde_prime(&self, z: f64) -> Result<f64> {
        self.require_positive("H̃_c'")?;
        if z.abs() <= 1.0 {
            return Ok(0.0);
        }
        if z + self.alpha() == 0.0 && self.sign_one_minus_c() != 0.0 {
            return Err(Error::Domain(
                "H̃_c' has a logarithmic pole at z = -(1+c²)/(2c)".into(),
            ));
        }
        Ok(acosh_abs(z) + self.sign_one_minus_c() * self.acosh_ratio(z))
    }

    /// `H̃_c''(z) = sign(z)(z + 1/c) / ((α + z) √(z² - 1))` for `|z| > 1`.
    pub fn h_tilde_second(&self, z: f64) -> Result<f64> {
        self.require_positive("H̃_c''")?;
        if z.abs() <= 1.0 {
            return Err(Error::Domain("H̃_c'' is only defined for |z| > 1".into()));
        }
        let c = self.0;
        let root = ((z.abs() - 1.0) * (z.abs() + 1.0)).sqrt();
        Ok(sign(z) * (z + 1.0 / c) / ((self.alpha() + z) * root))
    }

    /// `H_c(s) = H̃_c(s - c/2)`.
    pub fn h(&self, s: f64) -> Result<f64> {
        self.h_tilde(self.shift(s))
    }

    pub fn h_prime(&self, s: f64) -> Result<f64> {
        self.h_tilde_prime(self.shift(s))
    }

    /// `G_c(s) = φ_1((1 + 2cs)/2) / c - (1 - c²)/(2c)`.
    pub fn g(&self, s: f64) -> Result<f64> {
        self.require_positive("G_c")?;
        let c = self.0;
        Ok(phi1(0.5 * (1.0 + 2.0 * c * s)) / c - self.beta())
    }

    /// `G_c'(s) = -ln|1 + 2cs|`.
    pub fn g_prime(&self, s: f64) -> Result<f64> {
        self.require_positive("G_c'")?;
        Ok(-(1.0 + 2.0 * self.0 * s).abs().ln())
    }

    /// `G̃_c(z) = G_c(z + c/2)`.
    pub fn g_tilde(&self, z: f64) -> Result<f64> {
        self.g(self.unshift(z))
    }

    /// `J̃_c(z)`, an antiderivative of `H̃_c` vanishing on `|z| ≤ 1`.
    pub fn j_tilde(&self, z: f64) -> Result<f64> {
        self.require_positive("J̃_c")?;
        if z.abs() <= 1.0 {
            return Ok(0.0);
        }
        let c = self.0;
        let shifted = z + (c * c - 1.0) / (2.0 * c);
        let root = ((z.abs() - 1.0) * (z.abs() + 1.0)).sqrt();
        let first = 0.5 * (1.0 - 1.0 / (2.0 * c * c) + shifted * shifted) * acosh_abs(z);
        let second = sign(z) * (1.0 - c * c - 3.0 * c * z) / (4.0 * c) * root;
        let third = self.sign_one_minus_c() * 0.5 * self.weighted_acosh_ratio(z, 2);
        Ok(first + second + third)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::functionals::QuadratureConfig;
    use crate::quadrature::{integrate, integrate_breaks};

    fn sp(c: f64) -> ShapeParam {
        ShapeParam::new(c).unwrap()
    }

    /// Central difference with step 1e-5.
    fn fd(f: impl Fn(f64) -> f64, x: f64) -> f64 {
        let h = 1e-5;
        (f(x + h) - f(x - h)) / (2.0 * h)
    }

    /// Deterministic pseudo-random points in (lo, hi).
    fn points(lo: f64, hi: f64, count: usize, salt: u64) -> Vec<f64> {
        let mut state = 0x9E37_79B9_7F4A_7C15u64 ^ salt;
        (0..count)
            .map(|_| {
                state ^= state << 13;
                state ^= state >> 7;
                state ^= state << 17;
                lo + (hi - lo) * ((state >> 11) as f64 / (1u64 << 53) as f64)
            })
            .collect()
    }

    #[test]
    fn omega_values() {
        assert!((omega(0.0) - 2.0 / PI).abs() < 1e-16);
        assert_eq!(omega(1.0), 1.0);
        assert_eq!(omega(-1.0), 1.0);
        assert_eq!(omega(2.0), 2.0);
    }

    #[test]
    fn omega_c_reduces_to_omega_at_zero() {
        let s0 = sp(0.0);
        for s in points(-1.5, 1.5, 20, 1) {
            assert!((s0.omega_c(s) - omega(s)).abs() < 1e-15);
        }
        // and continuously as c → 0
        let tiny = sp(1e-9);
        for s in points(-0.99, 0.99, 20, 2) {
            assert!((tiny.omega_c(s) - omega(s)).abs() < 1e-8);
        }
    }

    #[test]
    fn omega_c_branches() {
        for c in [0.3, 0.5, 1.0, 2.0, 2.5] {
            let p = sp(c);
            let s = c / 2.0 + 1.0;
            assert!((p.omega_c(s) - s).abs() < 1e-15);
        }
        let p = sp(2.0);
        assert!((p.omega_c(-0.2) - 0.3).abs() < 1e-15);
        assert!((p.omega_c(-0.25) - 0.25).abs() < 1e-15);
        assert_eq!(p.omega_c(-0.3), 0.3);
    }

    #[test]
    fn branch_continuity() {
        for c in [0.5, 1.0, 2.5] {
            let p = sp(c);
            for edge in [0.5 * c - 1.0, 0.5 * c + 1.0] {
                let eps = 1e-12;
                let l = p.omega_c(edge - eps);
                let r = p.omega_c(edge + eps);
                assert!((l - r).abs() < 1e-10, "c={c} edge={edge}: {l} vs {r}");
            }
        }
    }

    #[test]
    fn omega_c_prime_edges() {
        for c in [0.0, 0.4, 1.0, 3.0] {
            let p = sp(c);
            assert!((p.omega_c_prime(c / 2.0 + 1.0 - 1e-14) - 1.0).abs() < 1e-6);
            if c < 1.0 {
                assert!((p.omega_c_prime(c / 2.0 - 1.0 + 1e-14) + 1.0).abs() < 1e-6);
            }
        }
        assert_eq!(sp(0.0).omega_c_prime(0.0), 0.0);
        // Ω_1 leaves |s| with slope 0 and Ω_c for c > 1 with slope 1
        assert!(sp(1.0).omega_c_prime(-0.5 + 1e-12).abs() < 1e-5);
        assert!((sp(2.0).omega_c_prime(0.0 - 1e-9) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn tangency_pattern() {
        // c < 1: slopes match |s| at both ends; c > 1: left end is a kink
        let p = sp(0.5);
        let (l, r) = p.support();
        assert!((p.omega_c_prime(l + 1e-12) + 1.0).abs() < 1e-5);
        assert!((p.omega_c_prime(r - 1e-12) - 1.0).abs() < 1e-5);
        let p = sp(2.0);
        let (l, _) = p.support();
        assert_eq!(p.omega_c_prime(l + 1e-9), 1.0);
        assert_eq!(p.omega_c_prime(l - 1e-9), -1.0);
    }

    #[test]
    fn omega_c_prime_matches_finite_differences() {
        for c in [0.0, 0.5, 1.0, 2.0] {
            let p = sp(c);
            for s in points(c / 2.0 - 0.95, c / 2.0 + 0.95, 20, 3) {
                let want = fd(|x| p.omega_c(x), s);
                assert!((p.omega_c_prime(s) - want).abs() < 1e-6, "c={c} s={s}");
            }
        }
    }

    #[test]
    fn omega_c_second_values() {
        assert!((sp(0.0).omega_c_second(0.0).unwrap() - 2.0 / PI).abs() < 1e-16);
        assert_eq!(sp(0.5).omega_c_second(1.5).unwrap(), 0.0);
        assert!(sp(0.5).omega_c_second(1.0).is_err());
        for c in [0.5, 2.0] {
            let p = sp(c);
            for z in [-0.5, 0.5] {
                let want = fd(|x| p.omega_c_prime_shifted(x), z);
                assert!((p.omega_c_second(z).unwrap() - want).abs() < 1e-6);
            }
            for z in points(-0.95, 0.95, 20, 4) {
                let want = fd(|x| p.omega_c_prime_shifted(x), z);
                assert!((p.omega_c_second(z).unwrap() - want).abs() < 1e-6);
            }
        }
    }

    #[test]
    fn omega_c_area_and_bounds() {
        let cfg = QuadratureConfig::default();
        for c in [0.0, 0.5, 1.0, 2.5] {
            let p = sp(c);
            let (l, r) = p.support();
            let area =
                integrate_breaks(|s| p.omega_c(s) - s.abs(), l, r, &p.breakpoints(), &cfg).unwrap();
            assert!((area - 0.5).abs() < 1e-8, "c={c}: area {area}");
            for s in points(l - 1.0, r + 1.0, 200, 5) {
                assert!(p.omega_c(s) >= s.abs() - 1e-15);
                assert!(p.omega_c_prime(s).abs() <= 1.0);
            }
        }
    }

    #[test]
    fn phi_values() {
        assert_eq!(phi(0, 0.5).unwrap(), 0.0);
        assert!((phi(1, 0.5).unwrap() - 0.5).abs() < 1e-16);
        assert!(phi(0, 0.0).is_err());
        assert_eq!(phi(1, 0.0).unwrap(), 0.0);
        assert_eq!(phi(2, 0.0).unwrap(), 0.0);
        let cfg = QuadratureConfig {
            abs_tol: 1e-13,
            rel_tol: 1e-13,
            ..Default::default()
        };
        for x in [0.3, 1.0, 2.0] {
            let num = integrate(phi1, 0.0, x, &cfg).unwrap();
            assert!((phi2(x) - num).abs() < 1e-9);
            let num = integrate(phi0, 0.0, x, &cfg).unwrap();
            assert!((phi1(x) - num).abs() < 1e-9);
        }
    }

    #[test]
    fn phi_derivatives() {
        for x in points(-2.0, 2.0, 20, 6) {
            assert!((fd(phi1, x) - phi0(x)).abs() < 1e-6);
            assert!((fd(phi2, x) - phi1(x)).abs() < 1e-6);
        }
    }

    #[test]
    fn h_tilde_values() {
        for c in [0.5, 1.0, 2.0] {
            let p = sp(c);
            for z in [-1.0, -0.3, 0.0, 0.99, 1.0] {
                assert_eq!(p.h_tilde(z).unwrap(), 0.0);
            }
            assert!(p.h_tilde(1.0 + 1e-12).unwrap().abs() < 1e-5);
            assert!(p.h_tilde(-1.0 - 1e-12).unwrap().abs() < 1e-5);
        }
        assert!(sp(0.0).h_tilde(2.0).is_err());
        let p = sp(0.5);
        let want = fd(|z| p.h_tilde(z).unwrap(), 1.5);
        assert!((p.h_tilde_prime(1.5).unwrap() - want).abs() < 1e-6);
    }

    #[test]
    fn h_tilde_prime_limits_and_signs() {
        for c in [0.5, 1.0, 2.0] {
            let p = sp(c);
            assert!(p.h_tilde_prime(1.0 + 1e-12).unwrap().abs() < 1e-5);
            assert!(p.h_tilde_prime(-1.0 - 1e-12).unwrap().abs() < 1e-5);
            for z in points(1.0, 6.0, 20, 7) {
                assert!(p.h_tilde_prime(z).unwrap() >= 0.0);
            }
        }
        let p = sp(0.5);
        let a = p.alpha();
        for z in points(-a, -1.0, 20, 8) {
            assert!(p.h_tilde_prime(z).unwrap() >= 0.0);
        }
        let p = sp(2.0);
        let a = p.alpha();
        for z in points(-a, -1.0, 20, 9) {
            assert!(p.h_tilde_prime(z).unwrap() <= 0.0);
        }
        assert!(sp(0.5).h_tilde_prime(-sp(0.5).alpha()).is_err());
    }

    #[test]
    fn h_tilde_second_signs() {
        for c in [1.0, 1.5, 3.0] {
            let p = sp(c);
            assert!(p.h_tilde_second(1.5).unwrap() > 0.0);
            let a = p.alpha();
            let left = if a > 1.0 {
                points(-a, -1.0, 10, 10)
            } else {
                Vec::new()
            };
            for z in left.into_iter().chain(points(1.0, 5.0, 10, 11)) {
                assert!(p.h_tilde_second(z).unwrap() > 0.0);
            }
        }
        for c in [0.2, 0.7] {
            let p = sp(c);
            let a = p.alpha();
            for z in points(-a, -1.0, 10, 12)
                .into_iter()
                .chain(points(1.0, 5.0, 10, 13))
            {
                assert_eq!(sign(p.h_tilde_second(z).unwrap()), sign(z));
            }
        }
        let p = sp(0.7);
        let want = fd(|z| p.h_tilde_prime(z).unwrap(), 2.0);
        assert!((p.h_tilde_second(2.0).unwrap() - want).abs() < 1e-6);
        assert!(p.h_tilde_second(0.5).is_err());
    }

    #[test]
    fn derivative_pairs_for_h_and_j() {
        for c in [0.3, 0.5, 1.0, 2.0, 4.0] {
            let p = sp(c);
            let a = p.alpha();
            // the left piece (-α, -1) is empty at c = 1
            let left = if a > 1.1 {
                points(-a + 0.05, -1.05, 10, 14)
            } else {
                Vec::new()
            };
            let right = points(1.05, 4.0, 10, 15);
            for z in left.into_iter().chain(right) {
                let dh = fd(|x| p.h_tilde(x).unwrap(), z);
                assert!(
                    (p.h_tilde_prime(z).unwrap() - dh).abs() < 1e-6,
                    "H' c={c} z={z}"
                );
                let dj = fd(|x| p.j_tilde(x).unwrap(), z);
                assert!((p.h_tilde(z).unwrap() - dj).abs() < 1e-6, "J' c={c} z={z}");
                let dhp = fd(|x| p.h_tilde_prime(x).unwrap(), z);
                assert!(
                    (p.h_tilde_second(z).unwrap() - dhp).abs() < 1e-6,
                    "H'' c={c} z={z}"
                );
            }
        }
    }

    #[test]
    fn j_tilde_values() {
        for c in [0.5, 2.0] {
            let p = sp(c);
            assert_eq!(p.j_tilde(0.3).unwrap(), 0.0);
            let want = fd(|z| p.j_tilde(z).unwrap(), 1.7);
            assert!((p.h_tilde(1.7).unwrap() - want).abs() < 1e-6);
            assert!(p.j_tilde(1.0 + 1e-6).unwrap().abs() < 1e-8);
            assert!(p.j_tilde(-1.0 - 1e-6).unwrap().abs() < 1e-8);
        }
    }

    #[test]
    fn g_values() {
        for c in [0.3, 1.0, 2.0] {
            let p = sp(c);
            assert!((p.g(0.0).unwrap() - c / 2.0).abs() < 1e-15);
            for s in points(-0.5 / c + 0.01, 3.0, 20, 16) {
                let want = fd(|x| p.g(x).unwrap(), s);
                assert!((p.g_prime(s).unwrap() - want).abs() < 1e-6);
            }
        }
        assert!((sp(1.0).g(0.0).unwrap() - 0.5).abs() < 1e-15);
        assert!(sp(0.0).g(0.0).is_err());
    }
}
