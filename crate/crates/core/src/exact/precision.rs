//! Binary fixed-point reals for logarithms of huge exact rationals.

use num_bigint::{BigInt, BigUint, Sign};
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// A real `mantissa / 2^frac_bits` carrying `digits` significant decimal
/// digits of intent plus guard bits.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HighPrecision {
    mantissa: BigInt,
    frac_bits: u32,
    digits: u32,
}

const GUARD_BITS: u32 = 64;

fn bits_for(digits: u32) -> u32 {
    (digits as f64 * std::f64::consts::LOG2_10).ceil() as u32 + GUARD_BITS
}

/// `2 atanh(y)` for fixed-point `y` with `|y| < 1/2`.
fn two_atanh(y: &BigInt, bits: u32) -> BigInt {
    let y2 = (y * y) >> bits;
    let mut power = y.clone();
    let mut sum = y.clone();
    let mut k = 1u64;
    loop {
        power = (&power * &y2) >> bits;
        if power.is_zero() {
            break;
        }
        sum += &power / BigInt::from(2 * k + 1);
        k += 1;
    }
    sum << 1
}

fn ln2_fixed(bits: u32) -> BigInt {
    let one = BigInt::one() << bits;
    two_atanh(&(one / 3), bits)
}

fn ln_uint_fixed(x: &BigUint, bits: u32) -> BigInt {
    let e = x.bits() - 1;
    // m = x / 2^e in [1, 2), as fixed point
    let m: BigInt = if e as u32 >= bits {
        BigInt::from(x >> (e - bits as u64))
    } else {
        BigInt::from(x << (bits as u64 - e))
    };
    let one = BigInt::one() << bits;
    let y = ((&m - &one) << bits) / (&m + &one);
    two_atanh(&y, bits) + ln2_fixed(bits) * BigInt::from(e)
}

impl HighPrecision {
    pub fn digits(&self) -> u32 {
        self.digits
    }

    pub fn zero(digits: u32) -> Self {
        HighPrecision {
            mantissa: BigInt::zero(),
            frac_bits: bits_for(digits),
            digits,
        }
    }

    /// `ln(num / den)` for positive integers.
    pub fn ln_ratio(num: &BigInt, den: &BigInt, digits: u32) -> Result<Self> {
        if !num.is_positive() || !den.is_positive() {
            return Err(Error::Domain("logarithm of a non-positive rational".into()));
        }
        let bits = bits_for(digits);
        let a = ln_uint_fixed(num.magnitude(), bits);
        let b = ln_uint_fixed(den.magnitude(), bits);
        Ok(HighPrecision {
            mantissa: a - b,
            frac_bits: bits,
            digits,
        })
    }

    pub fn sqrt_uint(n: u64, digits: u32) -> Self {
        let bits = bits_for(digits);
        let scaled = BigUint::from(n) << (2 * bits as u64);
        HighPrecision {
            mantissa: BigInt::from(scaled.sqrt()),
            frac_bits: bits,
            digits,
        }
    }

    pub fn from_f64(x: f64, digits: u32) -> Self {
        let bits = bits_for(digits);
        let scaled = x * 2f64.powi(60);
        let m = BigInt::from(scaled as i128);
        let mantissa = if bits >= 60 {
            m << (bits - 60)
        } else {
            m >> (60 - bits)
        };
        HighPrecision {
            mantissa,
            frac_bits: bits,
            digits,
        }
    }

    fn align(&self, other: &Self) -> (BigInt, BigInt, u32) {
        use std::cmp::Ordering::*;
        match self.frac_bits.cmp(&other.frac_bits) {
            Equal => (
                self.mantissa.clone(),
                other.mantissa.clone(),
                self.frac_bits,
            ),
            Less => (
                self.mantissa.clone() << (other.frac_bits - self.frac_bits),
                other.mantissa.clone(),
                other.frac_bits,
            ),
            Greater => (
                self.mantissa.clone(),
                other.mantissa.clone() << (self.frac_bits - other.frac_bits),
                self.frac_bits,
            ),
        }
    }

    pub fn neg(&self) -> Self {
        HighPrecision {
            mantissa: -self.mantissa.clone(),
            ..self.clone()
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        let (a, b, bits) = self.align(other);
        HighPrecision {
            mantissa: a - b,
            frac_bits: bits,
            digits: self.digits.min(other.digits),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let (a, b, bits) = self.align(other);
        HighPrecision {
            mantissa: (a * b) >> bits,
            frac_bits: bits,
            digits: self.digits.min(other.digits),
        }
    }

    pub fn div(&self, other: &Self) -> Self {
        let (a, b, bits) = self.align(other);
        HighPrecision {
            mantissa: (a << bits) / b,
            frac_bits: bits,
            digits: self.digits.min(other.digits),
        }
    }

    /// `e^x` by reduction modulo `ln 2` and a Taylor series.
    pub fn exp(&self) -> Self {
        let bits = self.frac_bits;
        let one = BigInt::one() << bits;
        let ln2 = ln2_fixed(bits);
        // k = round(x / ln 2)
        let half = &ln2 >> 1;
        let shifted = if self.mantissa.is_negative() {
            &self.mantissa - &half
        } else {
            &self.mantissa + &half
        };
        let k: BigInt = shifted / &ln2;
        let r = &self.mantissa - &k * &ln2;
        let mut term = one.clone();
        let mut sum = one;
        let mut i = 1u64;
        loop {
            term = ((&term * &r) >> bits) / BigInt::from(i);
            if term.is_zero() {
                break;
            }
            sum += &term;
            i += 1;
        }
        let k = k.to_i64().expect("exponent out of range");
        let mantissa = if k >= 0 {
            sum << k as u64
        } else {
            sum >> (-k) as u64
        };
        HighPrecision {
            mantissa,
            frac_bits: bits,
            digits: self.digits,
        }
    }

    pub fn to_f64(&self) -> f64 {
        let m = &self.mantissa;
        let shift = (m.bits() as i64 - 64).max(0);
        let top = (m >> shift as u64).to_f64().unwrap_or(0.0);
        top * 2f64.powi((shift - self.frac_bits as i64) as i32)
    }

    /// `|self - num/den| / (num/den)`, returned in double precision.
    pub fn relative_error_to(&self, num: &BigInt, den: &BigInt) -> f64 {
        let target = (num << self.frac_bits) / den;
        let diff = (&self.mantissa - &target).abs();
        if target.is_zero() {
            return f64::INFINITY;
        }
        let d = HighPrecision {
            mantissa: diff,
            frac_bits: 0,
            digits: self.digits,
        };
        let t = HighPrecision {
            mantissa: target.abs(),
            frac_bits: 0,
            digits: self.digits,
        };
        let ld = if d.mantissa.is_zero() {
            return 0.0;
        } else {
            super::ln_biguint(d.mantissa.magnitude())
        };
        (ld - super::ln_biguint(t.mantissa.magnitude())).exp()
    }

    /// Decimal rendering truncated to the stored number of digits after the
    /// point.
    pub fn to_decimal_string(&self) -> String {
        let ten = BigInt::from(10u32).pow(self.digits);
        let scaled: BigInt = (&self.mantissa.abs() * &ten) >> self.frac_bits;
        let s = scaled.to_string();
        let d = self.digits as usize;
        let s = if s.len() <= d {
            format!("{}{}", "0".repeat(d + 1 - s.len()), s)
        } else {
            s
        };
        let (int, frac) = s.split_at(s.len() - d);
        let sign = if self.mantissa.sign() == Sign::Minus {
            "-"
        } else {
            ""
        };
        format!("{sign}{int}.{frac}")
    }
}
