//! Exact dimensions `dim V_λ`, `dim W_λ`, `dim E_λ`, the exact Plancherel and
//! Schur–Weyl measures, enumeration of `Y_N^n` and the partition count.
//!
//! Dimensions are products of small integers divided by the product of hook
//! lengths. They are evaluated through prime exponent vectors: every factor
//! is split with a smallest-prime-factor table, exponents are accumulated,
//! and only the final product is materialised. The quotient is therefore
//! exact and no intermediate exceeds the size of the answer.

mod precision;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::diagrams::Partition;
use crate::error::{Error, Result};

pub use precision::HighPrecision;

/// `dim V_λ`, `dim W_λ` (for a given `N`) and `dim E_λ = dim V_λ · dim W_λ`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExactDims {
    pub dim_sym: BigUint,
    pub dim_gl: BigUint,
    pub dim_iso: BigUint,
}

impl ExactDims {
    pub fn new(lambda: &Partition, big_n: usize) -> Self {
        let dim_sym = dim_sym(lambda);
        let dim_gl = dim_gl(lambda, big_n);
        let dim_iso = &dim_sym * &dim_gl;
        ExactDims {
            dim_sym,
            dim_gl,
            dim_iso,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum MeasureKind {
    Plancherel,
    SchurWeyl,
}

/// An exact probability of one diagram.
#[derive(Debug, Clone, PartialEq)]
pub struct ExactMeasure {
    pub value: BigRational,
    pub kind: MeasureKind,
    pub n: usize,
    /// `N` for the Schur–Weyl measure.
    pub big_n: Option<usize>,
}

impl ExactMeasure {
    pub fn to_f64(&self) -> f64 {
        ratio_to_f64(&self.value)
    }
}

/// Prime exponent bookkeeping for products and quotients of small integers.
struct Factorizer {
    spf: Vec<u32>,
    exps: Vec<i64>,
}

impl Factorizer {
    fn new(limit: usize) -> Self {
        let limit = limit.max(2);
        let mut spf = vec![0u32; limit + 1];
        for i in 2..=limit {
            if spf[i] == 0 {
                let mut k = i;
                while k <= limit {
                    if spf[k] == 0 {
                        spf[k] = i as u32;
                    }
                    k += i;
                }
            }
        }
        Factorizer {
            spf,
            exps: vec![0; limit + 1],
        }
    }

    fn add(&mut self, mut k: usize, sign: i64) {
        while k > 1 {
            let p = self.spf[k] as usize;
            self.exps[p] += sign;
            k /= p;
        }
    }

    fn add_factorial(&mut self, n: usize) {
        // Legendre: v_p(n!) = Σ floor(n / p^i)
        for p in 2..=n {
            if self.spf[p] as usize == p {
                let mut q = n / p;
                while q > 0 {
                    self.exps[p] += q as i64;
                    q /= p;
                }
            }
        }
    }

    /// The product; panics if some exponent is negative (quotient not integral).
    fn product(&self) -> BigUint {
        let mut factors: Vec<BigUint> = Vec::new();
        for (p, &e) in self.exps.iter().enumerate() {
            assert!(e >= 0, "non-integral quotient at prime {p}");
            if e > 0 {
                factors.push(BigUint::from(p).pow(e as u32));
            }
        }
        product_tree(factors)
    }
}

fn product_tree(mut v: Vec<BigUint>) -> BigUint {
    if v.is_empty() {
        return BigUint::one();
    }
    while v.len() > 1 {
        let mut next = Vec::with_capacity(v.len().div_ceil(2));
        let mut it = v.into_iter();
        while let Some(a) = it.next() {
            match it.next() {
                Some(b) => next.push(a * b),
                None => next.push(a),
            }
        }
        v = next;
    }
    v.pop().unwrap()
}

/// Hook formula `n! / Π h_{i,j}`.
pub fn dim_sym(lambda: &Partition) -> BigUint {
    let n = lambda.n();
    let mut f = Factorizer::new(n);
    f.add_factorial(n);
    for h in lambda.hooks() {
        f.add(h, -1);
    }
    f.product()
}

/// `Π (N + c_{i,j}) / Π h_{i,j}`; zero when `λ` has more than `N` rows.
pub fn dim_gl(lambda: &Partition, big_n: usize) -> BigUint {
    if lambda.height() > big_n {
        return BigUint::zero();
    }
    let limit = (big_n + lambda.width()).max(lambda.n());
    let mut f = Factorizer::new(limit);
    for c in lambda.contents() {
        f.add((big_n as i64 + c) as usize, 1);
    }
    for h in lambda.hooks() {
        f.add(h, -1);
    }
    f.product()
}

pub fn dim_iso(lambda: &Partition, big_n: usize) -> BigUint {
    let gl = dim_gl(lambda, big_n);
    if gl.is_zero() {
        return gl;
    }
    dim_sym(lambda) * gl
}

pub fn factorial(n: usize) -> BigUint {
    let mut f = Factorizer::new(n);
    f.add_factorial(n);
    f.product()
}

/// `Pl^n(λ) = (dim V_λ)² / n!`.
pub fn plancherel(lambda: &Partition) -> ExactMeasure {
    let d = BigInt::from(dim_sym(lambda));
    let value = BigRational::new(&d * &d, BigInt::from(factorial(lambda.n())));
    ExactMeasure {
        value,
        kind: MeasureKind::Plancherel,
        n: lambda.n(),
        big_n: None,
    }
}

/// `P_N^n(λ) = dim E_λ / N^n`.
pub fn schur_weyl_measure(lambda: &Partition, big_n: usize) -> ExactMeasure {
    let num = BigInt::from(dim_iso(lambda, big_n));
    let den = BigInt::from(BigUint::from(big_n).pow(lambda.n() as u32));
    ExactMeasure {
        value: BigRational::new(num, den),
        kind: MeasureKind::SchurWeyl,
        n: lambda.n(),
        big_n: Some(big_n),
    }
}

/// The same measure written as `Pl^n(λ) Π (1 + c_{i,j}/N)`.
pub fn schur_weyl_via_plancherel(lambda: &Partition, big_n: usize) -> BigRational {
    let mut v = plancherel(lambda).value;
    let bn = BigInt::from(big_n);
    for c in lambda.contents() {
        v *= BigRational::new(&bn + BigInt::from(c), bn.clone());
    }
    v
}

/// `-ln P_N^n(λ) / √n` evaluated from the exact rational to `digits`
/// decimal digits.
pub fn neg_log_measure_scaled(
    lambda: &Partition,
    big_n: usize,
    digits: u32,
) -> Result<HighPrecision> {
    let m = schur_weyl_measure(lambda, big_n);
    if m.value.is_zero() {
        return Err(Error::ZeroMeasure);
    }
    let ln = HighPrecision::ln_ratio(m.value.numer(), m.value.denom(), digits)?;
    let root = HighPrecision::sqrt_uint(lambda.n() as u64, digits);
    Ok(ln.neg().div(&root))
}

/// All partitions of `n` with at most `N` parts, lexicographically
/// decreasing.
pub fn enumerate_diagrams(n: usize, big_n: usize) -> DiagramIter {
    DiagramIter::new(n, big_n)
}

/// Iterative generator behind [`enumerate_diagrams`].
#[derive(Debug, Clone)]
pub struct DiagramIter {
    current: Option<Vec<usize>>,
    max_parts: usize,
}

impl DiagramIter {
    fn new(n: usize, max_parts: usize) -> Self {
        let current = if n == 0 {
            Some(Vec::new())
        } else if max_parts == 0 {
            None
        } else {
            Some(vec![n])
        };
        DiagramIter { current, max_parts }
    }

    fn successor(&self, cur: &[usize]) -> Option<Vec<usize>> {
        // find the rightmost part that can drop by one with the rest refilled
        // greedily under the part-count bound
        let mut tail = 0usize;
        for k in (0..cur.len()).rev() {
            let v = cur[k];
            tail += v;
            if v < 2 {
                continue;
            }
            let cap = v - 1;
            let rem = tail - cap;
            let slots = self.max_parts - k - 1;
            if rem <= slots * cap {
                let mut next = cur[..k].to_vec();
                next.push(cap);
                let mut r = rem;
                while r > 0 {
                    let take = r.min(cap);
                    next.push(take);
                    r -= take;
                }
                return Some(next);
            }
        }
        None
    }
}

impl Iterator for DiagramIter {
    type Item = Partition;

    fn next(&mut self) -> Option<Partition> {
        let cur = self.current.take()?;
        self.current = self.successor(&cur);
        Some(Partition::from_sorted_unchecked(cur))
    }
}

/// `p(0), …, p(n_max)` by the pentagonal number recurrence.
pub fn partition_counts(n_max: usize) -> Vec<BigUint> {
    let mut table: Vec<BigUint> = Vec::with_capacity(n_max + 1);
    table.push(BigUint::one());
    for i in 1..=n_max {
        let mut pos = BigUint::zero();
        let mut neg = BigUint::zero();
        let mut k = 1usize;
        loop {
            let g1 = k * (3 * k - 1) / 2;
            if g1 > i {
                break;
            }
            let acc = if k % 2 == 1 { &mut pos } else { &mut neg };
            *acc += &table[i - g1];
            let g2 = k * (3 * k + 1) / 2;
            if g2 <= i {
                *acc += &table[i - g2];
            }
            k += 1;
        }
        table.push(pos - neg);
    }
    table
}

pub fn partition_count(n: usize) -> BigUint {
    partition_counts(n).pop().unwrap()
}

/// CSV of every diagram in `Y_N^n` with its exact Schur–Weyl measure.
pub fn enumeration_csv(n: usize, big_n: usize) -> (String, BigUint) {
    let mut out = String::from("partition,dim_sym,dim_gl,dim_iso,measure_num,measure_den\n");
    let mut total = BigUint::zero();
    for lambda in enumerate_diagrams(n, big_n) {
        let d = ExactDims::new(&lambda, big_n);
        let m = schur_weyl_measure(&lambda, big_n);
        total += &d.dim_iso;
        out.push_str(&format!(
            "\"{}\",{},{},{},{},{}\n",
            lambda,
            d.dim_sym,
            d.dim_gl,
            d.dim_iso,
            m.value.numer(),
            m.value.denom()
        ));
    }
    (out, total)
}

/// Natural log of a positive big integer in double precision.
pub fn ln_biguint(x: &BigUint) -> f64 {
    let bits = x.bits();
    if bits <= 1000 {
        return num_traits::ToPrimitive::to_f64(x).unwrap().ln();
    }
    let shift = bits - 64;
    let top: BigUint = x >> shift;
    num_traits::ToPrimitive::to_f64(&top).unwrap().ln() + shift as f64 * std::f64::consts::LN_2
}

pub fn ratio_to_f64(r: &BigRational) -> f64 {
    if r.is_zero() {
        return 0.0;
    }
    let num = r.numer().magnitude();
    let den = r.denom().magnitude();
    let sign = if r.numer().sign() == num_bigint::Sign::Minus {
        -1.0
    } else {
        1.0
    };
    sign * (ln_biguint(num) - ln_biguint(den)).exp()
}
