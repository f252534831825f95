//! Exact samplers for the Schur–Weyl and Plancherel measures.
//!
//! A uniform word in `[1, N]^n` pushed through RSK row insertion has shape
//! distributed as `P_N^n`; a uniform permutation gives `Pl^n`. Only the
//! insertion tableau is kept, and only its shape is returned.
//!
//! Trial `k` of a run with seed `s` draws from `ChaCha8Rng` seeded with `s`
//! on stream `k`, so the output does not depend on how trials are scheduled.

use std::collections::HashMap;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use statrs::distribution::{ChiSquared, ContinuousCDF};

use crate::diagrams::Partition;
use crate::error::{Error, Result};

/// A word with letters in `[1, N]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Word {
    letters: Vec<u32>,
    big_n: u32,
}

impl Word {
    pub fn new(letters: Vec<u32>, big_n: u32) -> Result<Self> {
        if let Some(&bad) = letters.iter().find(|&&x| x == 0 || x > big_n) {
            return Err(Error::Domain(format!("letter {bad} outside [1, {big_n}]")));
        }
        Ok(Word { letters, big_n })
    }

    pub fn letters(&self) -> &[u32] {
        &self.letters
    }

    pub fn big_n(&self) -> u32 {
        self.big_n
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }
}

/// The insertion tableau.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct InsertionState {
    rows: Vec<Vec<u32>>,
}

impl InsertionState {
    pub fn new() -> Self {
        Self::default()
    }

    /// Row insertion: `x` bumps the leftmost entry strictly greater than it.
    pub fn insert(&mut self, mut x: u32) {
        for row in self.rows.iter_mut() {
            let idx = row.partition_point(|&y| y <= x);
            if idx == row.len() {
                row.push(x);
                return;
            }
            std::mem::swap(&mut row[idx], &mut x);
        }
        self.rows.push(vec![x]);
    }

    pub fn rows(&self) -> &[Vec<u32>] {
        &self.rows
    }

    pub fn shape(&self) -> Partition {
        Partition::from_sorted_unchecked(self.rows.iter().map(Vec::len).collect())
    }

    /// Rows weakly increasing, columns strictly increasing, shape a partition.
    pub fn is_valid(&self) -> bool {
        self.rows.iter().all(|r| r.windows(2).all(|w| w[0] <= w[1]))
            && self
                .rows
                .windows(2)
                .all(|p| p[1].len() <= p[0].len() && p[1].iter().zip(&p[0]).all(|(lo, hi)| hi < lo))
    }
}

fn insert_all(letters: impl IntoIterator<Item = u32>) -> Partition {
    let mut state = InsertionState::new();
    for x in letters {
        state.insert(x);
        debug_assert!(state.is_valid());
    }
    state.shape()
}

pub fn rsk_shape(word: &Word) -> Partition {
    insert_all(word.letters.iter().copied())
}

/// Robinson–Schensted shape of a permutation given in one-line notation.
pub fn rs_shape(perm: &[u32]) -> Partition {
    insert_all(perm.iter().copied())
}

/// The generator for trial `k` of a run seeded with `seed`.
pub fn trial_rng(seed: u64, k: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(k);
    rng
}

fn check_sizes(n: usize, big_n: usize) -> Result<()> {
    if n == 0 || big_n == 0 {
        return Err(Error::Domain("n and N must be positive".into()));
    }
    if big_n > u32::MAX as usize {
        return Err(Error::Domain("N does not fit the letter type".into()));
    }
    Ok(())
}

/// One shape from `P_N^n`.
pub fn sample_schur_weyl_one(n: usize, big_n: usize, rng: &mut impl Rng) -> Partition {
    let top = big_n as u32;
    insert_all((0..n).map(|_| rng.random_range(1..=top)))
}

/// One shape from `Pl^n`.
pub fn sample_plancherel_one(n: usize, rng: &mut impl Rng) -> Partition {
    let mut perm: Vec<u32> = (1..=n as u32).collect();
    perm.shuffle(rng);
    rs_shape(&perm)
}

/// `count` independent shapes from `P_N^n`, in trial order.
pub fn sample_schur_weyl(
    n: usize,
    big_n: usize,
    seed: u64,
    count: usize,
) -> Result<Vec<Partition>> {
    check_sizes(n, big_n)?;
    Ok((0..count as u64)
        .into_par_iter()
        .map(|k| sample_schur_weyl_one(n, big_n, &mut trial_rng(seed, k)))
        .collect())
}

/// `count` independent shapes from `Pl^n`, in trial order.
pub fn sample_plancherel(n: usize, seed: u64, count: usize) -> Result<Vec<Partition>> {
    check_sizes(n, 1)?;
    if n > u32::MAX as usize {
        return Err(Error::Domain("n does not fit the letter type".into()));
    }
    Ok((0..count as u64)
        .into_par_iter()
        .map(|k| sample_plancherel_one(n, &mut trial_rng(seed, k)))
        .collect())
}

/// Text dump: a header line, then one partition per line.
pub fn sample_dump(n: usize, big_n: Option<usize>, seed: u64, samples: &[Partition]) -> String {
    let big = big_n.map_or_else(|| "inf".to_string(), |v| v.to_string());
    let mut out = format!("# n={n} N={big} seed={seed} count={}\n", samples.len());
    for s in samples {
        out.push_str(&s.to_string());
        out.push('\n');
    }
    out
}

/// Inverse of [`sample_dump`]; returns the header fields and the shapes.
pub fn parse_sample_dump(text: &str) -> Result<(String, Vec<Partition>)> {
    let mut lines = text.lines();
    let header = lines
        .next()
        .filter(|h| h.starts_with("# "))
        .ok_or_else(|| Error::Config("sample dump lacks a header".into()))?;
    let shapes = lines
        .filter(|l| !l.is_empty())
        .map(str::parse)
        .collect::<Result<Vec<Partition>>>()?;
    Ok((header[2..].to_string(), shapes))
}

/// Pearson goodness of fit of observed shapes against an exact law.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ChiSquare {
    pub statistic: f64,
    pub dof: usize,
    pub p_value: f64,
}

/// Pearson's test of `samples` against `law`, pooling nothing. Shapes of
/// probability zero must not occur.
pub fn chi_square_gof(samples: &[Partition], law: &[(Partition, f64)]) -> Result<ChiSquare> {
    let mut counts: HashMap<&Partition, usize> = HashMap::new();
    for s in samples {
        *counts.entry(s).or_default() += 1;
    }
    let total = samples.len() as f64;
    let mut statistic = 0.0;
    let mut cells = 0usize;
    let mut seen = 0usize;
    for (lam, p) in law {
        let o = counts.get(lam).copied().unwrap_or(0);
        seen += o;
        if *p == 0.0 {
            if o > 0 {
                return Err(Error::Domain(format!(
                    "sampled {lam}, which has probability 0"
                )));
            }
            continue;
        }
        let e = total * p;
        let d = o as f64 - e;
        statistic += d * d / e;
        cells += 1;
    }
    if seen != samples.len() {
        return Err(Error::Domain(
            "sampled a shape outside the support of the law".into(),
        ));
    }
    if cells < 2 {
        return Err(Error::Domain("the law needs at least two outcomes".into()));
    }
    let dof = cells - 1;
    let dist = ChiSquared::new(dof as f64).map_err(|e| Error::Domain(e.to_string()))?;
    Ok(ChiSquare {
        statistic,
        dof,
        p_value: dist.sf(statistic),
    })
}
