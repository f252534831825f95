//! Young diagrams, their cells, hooks and contents, and the rotated boundary
//! profile `L_λ` of the diagram scaled to area 1/2.
//!
//! A diagram is drawn in French convention: row `i` sits on top of row
//! `i - 1`, column `j` grows to the right. In the rotated coordinate
//! `u = x - y` the boundary of `λ` is a zig-zag with slopes `±1` on the
//! integer grid; scaling by `1/(2√n)` gives `L_λ(X)`. Profiles are stored on
//! the integer grid so that areas and corners stay exact.

use std::fmt;
use std::str::FromStr;

use num_rational::Ratio;

use crate::error::{Error, Result};

/// A partition `λ_1 ≥ λ_2 ≥ … ≥ λ_r > 0` with its conjugate cached.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Partition {
    rows: Vec<usize>,
    conjugate: Vec<usize>,
    n: usize,
}

/// A cell `(i, j)`, 1-based row and column.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Cell {
    pub i: usize,
    pub j: usize,
}

impl Cell {
    pub fn new(i: usize, j: usize) -> Self {
        Cell { i, j }
    }

    /// `c_{i,j} = j - i`.
    pub fn content(&self) -> i64 {
        self.j as i64 - self.i as i64
    }
}

impl Partition {
    /// Builds a partition from row lengths. Trailing zeros are dropped;
    /// any increase between consecutive rows is rejected.
    pub fn new(mut rows: Vec<usize>) -> Result<Self> {
        while rows.last() == Some(&0) {
            rows.pop();
        }
        if let Some(w) = rows.windows(2).find(|w| w[0] < w[1]) {
            return Err(Error::InvalidPartition(format!(
                "rows must be nonincreasing, found {} < {}",
                w[0], w[1]
            )));
        }
        if rows.contains(&0) {
            return Err(Error::InvalidPartition(
                "zero row before a positive row".into(),
            ));
        }
        Ok(Self::from_sorted_unchecked(rows))
    }

    pub(crate) fn from_sorted_unchecked(rows: Vec<usize>) -> Self {
        let n = rows.iter().sum();
        let width = rows.first().copied().unwrap_or(0);
        let mut conjugate = vec![0usize; width];
        for &r in &rows {
            for c in conjugate.iter_mut().take(r) {
                *c += 1;
            }
        }
        Partition { rows, conjugate, n }
    }

    pub fn empty() -> Self {
        Self::from_sorted_unchecked(Vec::new())
    }

    /// The one-row diagram `(n)`.
    pub fn row(n: usize) -> Self {
        Self::from_sorted_unchecked(if n == 0 { vec![] } else { vec![n] })
    }

    /// The one-column diagram `(1^n)`.
    pub fn column(n: usize) -> Self {
        Self::from_sorted_unchecked(vec![1; n])
    }

    pub fn rows(&self) -> &[usize] {
        &self.rows
    }

    /// Column lengths `λ'_j`.
    pub fn conjugate_rows(&self) -> &[usize] {
        &self.conjugate
    }

    pub fn conjugate(&self) -> Partition {
        Self::from_sorted_unchecked(self.conjugate.clone())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of nonzero rows, `h_λ`.
    pub fn height(&self) -> usize {
        self.rows.len()
    }

    pub fn width(&self) -> usize {
        self.conjugate.len()
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn contains(&self, cell: Cell) -> bool {
        cell.i >= 1 && cell.j >= 1 && cell.i <= self.rows.len() && cell.j <= self.rows[cell.i - 1]
    }

    /// All cells, row-major.
    pub fn cells(&self) -> Vec<Cell> {
        self.cell_iter().collect()
    }

    pub fn cell_iter(&self) -> impl Iterator<Item = Cell> + '_ {
        self.rows
            .iter()
            .enumerate()
            .flat_map(|(i, &len)| (1..=len).map(move |j| Cell::new(i + 1, j)))
    }

    fn check(&self, cell: Cell) -> Result<()> {
        if self.contains(cell) {
            Ok(())
        } else {
            Err(Error::CellNotInDiagram {
                i: cell.i,
                j: cell.j,
            })
        }
    }

    /// Hook length `arm + leg + 1`.
    pub fn hook_length(&self, cell: Cell) -> Result<usize> {
        self.check(cell)?;
        Ok(self.hook_unchecked(cell))
    }

    #[inline]
    pub(crate) fn hook_unchecked(&self, cell: Cell) -> usize {
        let arm = self.rows[cell.i - 1] - cell.j;
        let leg = self.conjugate[cell.j - 1] - cell.i;
        arm + leg + 1
    }

    /// Shifted content `N + j - i`.
    pub fn shifted_content(&self, big_n: usize, cell: Cell) -> Result<i64> {
        self.check(cell)?;
        Ok(big_n as i64 + cell.content())
    }

    /// Iterator over all hook lengths, row-major.
    pub fn hooks(&self) -> impl Iterator<Item = usize> + '_ {
        self.cell_iter().map(|c| self.hook_unchecked(c))
    }

    /// Iterator over all contents `j - i`, row-major.
    pub fn contents(&self) -> impl Iterator<Item = i64> + '_ {
        self.cell_iter().map(|c| c.content())
    }

    pub fn profile(&self) -> Result<Profile> {
        Profile::from_partition(self)
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for r in &self.rows {
            if !first {
                f.write_str(",")?;
            }
            write!(f, "{r}")?;
            first = false;
        }
        Ok(())
    }
}

impl FromStr for Partition {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() {
            return Ok(Partition::empty());
        }
        let rows = s
            .split(',')
            .map(|p| {
                p.trim()
                    .parse::<usize>()
                    .map_err(|e| Error::InvalidPartition(format!("{p:?}: {e}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Partition::new(rows)
    }
}

/// The boundary `L_λ` of the rotated diagram scaled to area 1/2.
///
/// Stored on the integer grid `u = 2√n X`: `slopes[k]` is the slope on
/// `[left + k, left + k + 1]` and `heights[k]` the value of the unscaled
/// boundary `ω_λ(u) = 2√n L_λ(u / 2√n)` at `u = left + k`.
#[derive(Debug, Clone, PartialEq)]
pub struct Profile {
    n: usize,
    left: i64,
    slopes: Vec<i8>,
    heights: Vec<i64>,
    scale: f64,
}

impl Profile {
    pub fn from_partition(lambda: &Partition) -> Result<Self> {
        if lambda.is_empty() {
            return Err(Error::EmptyProfile);
        }
        let rows = lambda.rows();
        let r = rows.len();
        let mut slopes = Vec::with_capacity(r + rows[0]);
        // walk from the top-left corner (0, r) to (λ_1, 0)
        let mut prev = 0usize;
        for i in (0..r).rev() {
            slopes.extend(std::iter::repeat_n(1i8, rows[i] - prev));
            slopes.push(-1);
            prev = rows[i];
        }
        Ok(Self::from_slopes(lambda.n(), -(r as i64), slopes))
    }

    fn from_slopes(n: usize, left: i64, slopes: Vec<i8>) -> Self {
        let mut heights = Vec::with_capacity(slopes.len() + 1);
        let mut h = -left;
        heights.push(h);
        for &s in &slopes {
            h += s as i64;
            heights.push(h);
        }
        Profile {
            n,
            left,
            slopes,
            heights,
            scale: 2.0 * (n as f64).sqrt(),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Grid step `1/(2√n)` in the `X` coordinate.
    pub fn grid_step(&self) -> f64 {
        1.0 / self.scale
    }

    pub fn slopes(&self) -> &[i8] {
        &self.slopes
    }

    /// Support `[left, right]` in grid units.
    pub fn support_grid(&self) -> (i64, i64) {
        (self.left, self.left + self.slopes.len() as i64)
    }

    /// Support in the `X` coordinate.
    pub fn support(&self) -> (f64, f64) {
        let (l, r) = self.support_grid();
        (l as f64 / self.scale, r as f64 / self.scale)
    }

    /// `(u, ω(u))` at every grid point of the support, exact.
    pub fn grid_points(&self) -> impl Iterator<Item = (i64, i64)> + '_ {
        self.heights
            .iter()
            .enumerate()
            .map(move |(k, &h)| (self.left + k as i64, h))
    }

    /// Exact corner points on the integer grid: the support ends and every
    /// point where the slope changes.
    pub fn corner_grid(&self) -> Vec<(i64, i64)> {
        let mut out = vec![(self.left, self.heights[0])];
        for k in 1..self.slopes.len() {
            if self.slopes[k] != self.slopes[k - 1] {
                out.push((self.left + k as i64, self.heights[k]));
            }
        }
        let last = self.slopes.len();
        out.push((self.left + last as i64, self.heights[last]));
        out
    }

    /// Corner points `(X, L(X))`.
    pub fn corners(&self) -> Vec<(f64, f64)> {
        self.corner_grid()
            .into_iter()
            .map(|(u, h)| (u as f64 / self.scale, h as f64 / self.scale))
            .collect()
    }

    /// Piecewise-linear evaluation of `L_λ(X)`; `|X|` outside the support.
    pub fn evaluate(&self, x: f64) -> f64 {
        let u = x * self.scale;
        let (l, r) = self.support_grid();
        if !(u > l as f64 && u < r as f64) {
            return x.abs();
        }
        let off = u - l as f64;
        let k = (off.floor() as usize).min(self.slopes.len() - 1);
        let frac = off - k as f64;
        (self.heights[k] as f64 + self.slopes[k] as f64 * frac) / self.scale
    }

    /// `∫ (L(X) - |X|) dX` computed exactly on the grid.
    pub fn area_exact(&self) -> Ratio<i64> {
        // twice the area in grid units, by the trapezoid rule which is exact
        let mut twice = 0i64;
        for k in 0..self.slopes.len() {
            let u0 = self.left + k as i64;
            let (h0, h1) = (self.heights[k], self.heights[k + 1]);
            twice += h0 + h1 - twice_abs_integral(u0);
        }
        Ratio::new(twice, 2 * 4 * self.n as i64)
    }

    /// Recovers the diagram from the slope sequence.
    pub fn to_partition(&self) -> Partition {
        let mut rows = Vec::new();
        let mut ups = 0usize;
        for &s in &self.slopes {
            if s > 0 {
                ups += 1;
            } else {
                rows.push(ups);
            }
        }
        rows.reverse();
        Partition::from_sorted_unchecked(rows)
    }

    /// The same profile as a general piecewise-linear function, using the
    /// maximal constant-slope segments.
    pub fn to_piecewise(&self) -> PiecewiseLinear {
        let corners = self.corners();
        let (xs, ys) = corners.into_iter().unzip();
        PiecewiseLinear { xs, ys }
    }

    /// CSV with columns `X,L` at the corner points.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("X,L\n");
        for (x, y) in self.corners() {
            out.push_str(&format!("{x:.17e},{y:.17e}\n"));
        }
        out
    }
}

/// `2 ∫_{u}^{u+1} |t| dt` for integer `u`.
fn twice_abs_integral(u: i64) -> i64 {
    if u >= 0 {
        2 * u + 1
    } else {
        -2 * u - 1
    }
}

/// A continuous piecewise-linear function through `(xs[k], ys[k])`, equal to
/// `|x|` outside `[xs[0], xs[last]]`.
#[derive(Debug, Clone, PartialEq)]
pub struct PiecewiseLinear {
    pub xs: Vec<f64>,
    pub ys: Vec<f64>,
}

impl PiecewiseLinear {
    pub fn new(xs: Vec<f64>, ys: Vec<f64>) -> Result<Self> {
        if xs.len() != ys.len() || xs.len() < 2 {
            return Err(Error::Domain("need at least two matching knots".into()));
        }
        if xs.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::Domain("knots must be strictly increasing".into()));
        }
        if xs[0] > 0.0 || *xs.last().unwrap() < 0.0 {
            return Err(Error::Domain("knots must straddle 0".into()));
        }
        Ok(PiecewiseLinear { xs, ys })
    }

    /// Linear interpolant of `g` on a uniform grid of `segments` pieces.
    pub fn interpolate(g: impl Fn(f64) -> f64, lo: f64, hi: f64, segments: usize) -> Result<Self> {
        let xs: Vec<f64> = (0..=segments)
            .map(|k| lo + (hi - lo) * k as f64 / segments as f64)
            .collect();
        let ys = xs.iter().map(|&x| g(x)).collect();
        Self::new(xs, ys)
    }

    pub fn segments(&self) -> impl Iterator<Item = (f64, f64, f64)> + '_ {
        self.xs.windows(2).zip(self.ys.windows(2)).map(|(x, y)| {
            let slope = (y[1] - y[0]) / (x[1] - x[0]);
            (x[0], x[1], slope)
        })
    }

    pub fn evaluate(&self, x: f64) -> f64 {
        let last = self.xs.len() - 1;
        if x <= self.xs[0] || x >= self.xs[last] {
            return x.abs();
        }
        let k = self.xs.partition_point(|&v| v <= x) - 1;
        let t = (x - self.xs[k]) / (self.xs[k + 1] - self.xs[k]);
        self.ys[k] + t * (self.ys[k + 1] - self.ys[k])
    }

    /// Derivative on the open segments; `sign(x)` outside the knots.
    pub fn derivative(&self, x: f64) -> f64 {
        let last = self.xs.len() - 1;
        if x < self.xs[0] || x > self.xs[last] {
            return x.signum();
        }
        let k = (self.xs.partition_point(|&v| v <= x).max(1) - 1).min(last - 1);
        (self.ys[k + 1] - self.ys[k]) / (self.xs[k + 1] - self.xs[k])
    }

    pub fn support(&self) -> (f64, f64) {
        (self.xs[0], *self.xs.last().unwrap())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(s: &str) -> Partition {
        s.parse().unwrap()
    }

    #[test]
    fn cells_row_major() {
        assert_eq!(p("1").cells(), vec![Cell::new(1, 1)]);
        assert_eq!(
            p("2,1").cells(),
            vec![Cell::new(1, 1), Cell::new(1, 2), Cell::new(2, 1)]
        );
        assert!(p("3").cells().iter().all(|c| c.i == 1));
        assert_eq!(p("3").cells().len(), 3);
    }

    /// Counts the hook by walking it cell by cell.
    fn hook_by_walking(lambda: &Partition, c: Cell) -> usize {
        let mut count = 1;
        let mut j = c.j + 1;
        while lambda.contains(Cell::new(c.i, j)) {
            count += 1;
            j += 1;
        }
        let mut i = c.i + 1;
        while lambda.contains(Cell::new(i, c.j)) {
            count += 1;
            i += 1;
        }
        count
    }

    #[test]
    fn hook_of_illustrated_cell() {
        let lambda = p("9,7,6,4,3,2");
        let c = Cell::new(2, 3);
        assert_eq!(hook_by_walking(&lambda, c), 8);
        assert_eq!(lambda.hook_length(c).unwrap(), 8);
        assert_eq!(p("1").hook_length(Cell::new(1, 1)).unwrap(), 1);
        for j in 1..=7 {
            assert_eq!(
                Partition::row(7).hook_length(Cell::new(1, j)).unwrap(),
                7 - j + 1
            );
        }
    }

    #[test]
    fn hook_outside_is_error() {
        let lambda = p("2,1");
        assert_eq!(
            lambda.hook_length(Cell::new(2, 2)),
            Err(Error::CellNotInDiagram { i: 2, j: 2 })
        );
        assert!(lambda.shifted_content(3, Cell::new(3, 1)).is_err());
    }

    #[test]
    fn shifted_contents() {
        assert_eq!(p("4,2").shifted_content(5, Cell::new(1, 1)).unwrap(), 5);
        assert_eq!(p("2,1").shifted_content(2, Cell::new(2, 1)).unwrap(), 1);
        assert_eq!(p("3").shifted_content(2, Cell::new(1, 3)).unwrap(), 4);
    }

    #[test]
    fn parse_and_display() {
        assert_eq!(p("9,7,6,4,3,2").to_string(), "9,7,6,4,3,2");
        assert_eq!(p("3,1,0,0").rows(), &[3, 1]);
        assert!("1,2".parse::<Partition>().is_err());
        assert!("a".parse::<Partition>().is_err());
        assert!(p("").is_empty());
    }

    #[test]
    fn single_cell_profile() {
        let prof = p("1").profile().unwrap();
        assert!((prof.evaluate(0.0) - 1.0).abs() < 1e-15);
        assert!((prof.evaluate(0.25) - 0.75).abs() < 1e-15);
        assert!((prof.evaluate(-0.25) - 0.75).abs() < 1e-15);
        assert_eq!(prof.evaluate(1e6), 1e6);
        assert_eq!(prof.evaluate(-3.0), 3.0);
        assert_eq!(prof.area_exact(), Ratio::new(1, 2));
        assert_eq!(prof.support(), (-0.5, 0.5));
    }

    /// Rotates and scales the cells of λ directly and returns the top of the
    /// union along the vertical line at X.
    fn brute_force_top(lambda: &Partition, x: f64) -> f64 {
        let n = lambda.n() as f64;
        let s = 1.0 / (2.0 * n.sqrt());
        let mut top = x.abs();
        for c in lambda.cells() {
            // unit square [j-1, j] x [i-1, i] in (x, y); in X: X = (x - y)s, Y = (x + y)s
            let (cx, cy) = (c.j as f64 - 0.5, c.i as f64 - 0.5);
            let center_x = (cx - cy) * s;
            let center_y = (cx + cy) * s;
            let d = (x - center_x).abs();
            if d <= s {
                top = top.max(center_y + (s - d));
            }
        }
        top
    }

    #[test]
    fn profile_matches_direct_rotation() {
        for lam in ["2,1", "9,7,6,4,3,2", "5", "1,1,1", "4,4,1"] {
            let lambda = p(lam);
            let prof = lambda.profile().unwrap();
            for k in -400..=400 {
                let x = k as f64 * 0.0031;
                let got = prof.evaluate(x);
                let want = brute_force_top(&lambda, x);
                assert!((got - want).abs() < 1e-12, "{lam} at {x}: {got} vs {want}");
            }
        }
        let prof = p("2,1").profile().unwrap();
        // (2,1): the diagonal leaves the diagram at (1, 1), so ω(0) = 2
        assert!((prof.evaluate(0.0) - 2.0 / (2.0 * 3f64.sqrt())).abs() < 1e-15);
    }

    #[test]
    fn empty_profile_rejected() {
        assert_eq!(Partition::empty().profile(), Err(Error::EmptyProfile));
    }

    #[test]
    fn csv_lists_corners() {
        let csv = p("2,1").profile().unwrap().to_csv();
        let lines: Vec<_> = csv.lines().collect();
        assert_eq!(lines[0], "X,L");
        // (2,1) has support ends plus three interior corners
        assert_eq!(lines.len(), 1 + 5);
    }

    #[test]
    fn piecewise_linear_matches_profile() {
        let prof = p("6,3,3,1").profile().unwrap();
        let pl = prof.to_piecewise();
        for k in -100..100 {
            let x = k as f64 * 0.013 + 0.001;
            assert!((pl.evaluate(x) - prof.evaluate(x)).abs() < 1e-14);
        }
    }

    fn arb_partition() -> impl Strategy<Value = Partition> {
        proptest::collection::vec(1usize..12, 1..10).prop_map(|mut v| {
            v.sort_unstable_by(|a, b| b.cmp(a));
            Partition::new(v).unwrap()
        })
    }

    proptest! {
        #[test]
        fn hooks_decrease_along_rows_and_columns(lambda in arb_partition()) {
            for c in lambda.cells() {
                let h = lambda.hook_unchecked(c);
                prop_assert!(h >= 1);
                if lambda.contains(Cell::new(c.i, c.j + 1)) {
                    prop_assert!(lambda.hook_unchecked(Cell::new(c.i, c.j + 1)) < h);
                }
                if lambda.contains(Cell::new(c.i + 1, c.j)) {
                    prop_assert!(lambda.hook_unchecked(Cell::new(c.i + 1, c.j)) < h);
                }
            }
        }

        #[test]
        fn last_cell_content_dominates_first_hook(lambda in arb_partition(), extra in 0usize..5) {
            let big_n = lambda.height() + extra;
            for (idx, &len) in lambda.rows().iter().enumerate() {
                let i = idx + 1;
                let sc = lambda.shifted_content(big_n, Cell::new(i, len)).unwrap();
                let h = lambda.hook_length(Cell::new(i, 1)).unwrap() as i64;
                prop_assert!(sc >= h);
            }
        }

        #[test]
        fn profile_invariants(lambda in arb_partition(), xs in proptest::collection::vec(-50.0f64..50.0, 1000)) {
            let prof = lambda.profile().unwrap();
            prop_assert_eq!(prof.area_exact(), Ratio::new(1, 2));
            prop_assert!(prof.slopes().iter().all(|&s| s == 1 || s == -1));
            let (lo, hi) = prof.support();
            for x in xs {
                let v = prof.evaluate(x);
                prop_assert!(v >= x.abs() - 1e-12);
                if x <= lo || x >= hi {
                    prop_assert_eq!(v, x.abs());
                }
            }
            // rows ≤ N with c = √n/N puts the left end at or right of -1/(2c)
            let big_n = lambda.height();
            let c = (lambda.n() as f64).sqrt() / big_n as f64;
            prop_assert!(lo >= -1.0 / (2.0 * c) - 1e-12);
            prop_assert_eq!(prof.to_partition(), lambda);
        }
    }
}
