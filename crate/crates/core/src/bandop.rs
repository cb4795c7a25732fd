//! Banded truncations of the multiplication operator, the trace quantities
//! built from them, an exhaustive lattice-path oracle for the same quantities,
//! and the explicit gap and variance bounds.

use alloc::vec;
use alloc::vec::Vec;

use crate::math::{abs, floor, powi, CompensatedSum};
use crate::recurrence::{check_index, RecurrenceScheme};
use crate::{Error, Result};

/// Square matrix stored by columns, keeping rows `k - lower ..= k + upper` of
/// column `k`. Entry `(m, k)` is row `m`, column `k`.
#[derive(Debug, Clone, PartialEq)]
pub struct BandMatrix {
    dim: usize,
    lower: usize,
    upper: usize,
    data: Vec<f64>,
}

impl BandMatrix {
    /// Zero matrix. `lower` counts rows above the diagonal in a column (rows
    /// `m < k`), `upper` rows below it.
    pub fn zeros(dim: usize, lower: usize, upper: usize) -> Self {
        let lower = lower.min(dim.saturating_sub(1));
        let upper = upper.min(dim.saturating_sub(1));
        Self { dim, lower, upper, data: vec![0.0; dim * (lower + upper + 1)] }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim, 0, 0);
        for k in 0..dim {
            m.set(k, k, 1.0);
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn lower(&self) -> usize {
        self.lower
    }

    pub fn upper(&self) -> usize {
        self.upper
    }

    fn slot(&self, m: usize, k: usize) -> Option<usize> {
        if m >= self.dim || k >= self.dim || m + self.lower < k || m > k + self.upper {
            None
        } else {
            Some(k * (self.lower + self.upper + 1) + (m + self.lower - k))
        }
    }

    pub fn get(&self, m: usize, k: usize) -> f64 {
        self.slot(m, k).map_or(0.0, |i| self.data[i])
    }

    /// Panics if `(m, k)` lies outside the stored band.
    pub fn set(&mut self, m: usize, k: usize, v: f64) {
        let i = self.slot(m, k).expect("entry outside the stored band");
        self.data[i] = v;
    }

    /// Rows of column `k` that are stored.
    pub fn column_rows(&self, k: usize) -> core::ops::Range<usize> {
        k.saturating_sub(self.lower)..(k + self.upper + 1).min(self.dim)
    }

    /// Matrix product `self * rhs`.
    pub fn mul(&self, rhs: &BandMatrix) -> BandMatrix {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch");
        let mut out = BandMatrix::zeros(self.dim, self.lower + rhs.lower, self.upper + rhs.upper);
        for k in 0..self.dim {
            for j in rhs.column_rows(k) {
                let r = rhs.get(j, k);
                if r == 0.0 {
                    continue;
                }
                for m in self.column_rows(j) {
                    let i = out.slot(m, k).expect("product band");
                    out.data[i] += self.get(m, j) * r;
                }
            }
        }
        out
    }

    /// `self^p` by repeated multiplication (left to right).
    pub fn pow(&self, p: usize) -> BandMatrix {
        let mut acc = BandMatrix::identity(self.dim);
        for _ in 0..p {
            acc = acc.mul(self);
        }
        acc
    }

    /// Leading `n x n` block.
    pub fn leading_block(&self, n: usize) -> BandMatrix {
        let n = n.min(self.dim);
        let mut out = BandMatrix::zeros(n, self.lower, self.upper);
        for k in 0..n {
            for m in out.column_rows(k) {
                out.set(m, k, self.get(m, k));
            }
        }
        out
    }

    /// Compensated sum of the first `n` diagonal entries.
    pub fn partial_trace(&self, n: usize) -> f64 {
        let mut s = CompensatedSum::new();
        for k in 0..n.min(self.dim) {
            s.add(self.get(k, k));
        }
        s.value()
    }

    /// Row-major dense copy.
    pub fn to_dense(&self) -> Vec<f64> {
        let mut out = vec![0.0; self.dim * self.dim];
        for k in 0..self.dim {
            for m in self.column_rows(k) {
                out[m * self.dim + k] = self.get(m, k);
            }
        }
        out
    }
}

/// Truncation of the multiplication operator to degrees `< N + ext`.
#[derive(Debug, Clone, PartialEq)]
pub struct BandedOperator {
    n: usize,
    ext: usize,
    lower: usize,
    upper: usize,
    matrix: BandMatrix,
}

impl BandedOperator {
    /// Projection rank `N`.
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn ext(&self) -> usize {
        self.ext
    }

    /// Scheme bandwidth `R`.
    pub fn lower_band(&self) -> usize {
        self.lower
    }

    /// Scheme bandwidth `q`.
    pub fn upper_band(&self) -> usize {
        self.upper
    }

    pub fn matrix(&self) -> &BandMatrix {
        &self.matrix
    }

    /// The `N x N` principal block.
    pub fn principal_block(&self) -> BandMatrix {
        self.matrix.leading_block(self.n)
    }

    /// Longest path length whose traces this truncation represents exactly.
    pub fn exact_path_length(&self) -> usize {
        self.ext / self.upper.max(1)
    }

    fn require(&self, len: usize) {
        assert!(len <= self.exact_path_length(), "truncation too short for path length {len}");
    }

    /// `(1/N) Tr(pi M^ell pi)`. Panics if `ext < q * ell`.
    pub fn mean_moment(&self, ell: usize) -> f64 {
        self.require(ell);
        self.matrix.pow(ell).partial_trace(self.n) / self.n as f64
    }

    /// `(1/N) Tr((pi M pi)^ell)`.
    pub fn zero_moment_trace(&self, ell: usize) -> f64 {
        self.principal_block().pow(ell).partial_trace(self.n) / self.n as f64
    }

    /// `(1/N^2)(Tr(pi M^2l pi) - Tr(pi M^l pi M^l pi))`. Panics if
    /// `ext < 2 q ell`.
    pub fn variance_moment(&self, ell: usize) -> f64 {
        self.require(2 * ell);
        let b = self.matrix.pow(ell);
        let a = b.mul(&b);
        let n = self.n;
        let mut s = CompensatedSum::new();
        for k in 0..n {
            s.add(a.get(k, k));
        }
        for k in 0..n {
            for m in b.column_rows(k) {
                if m < n {
                    s.add(-(b.get(k, m) * b.get(m, k)));
                }
            }
        }
        s.value() / (n as f64 * n as f64)
    }
}

/// Materialises the scheme on degrees `0 .. N + q * ell_max`.
pub fn build_truncation<S: RecurrenceScheme + ?Sized>(scheme: &S, n: usize, ell_max: usize) -> Result<BandedOperator> {
    if n == 0 {
        return Err(crate::error::invalid("N", "must be at least 1"));
    }
    let lower = scheme.lower_band();
    let upper = scheme.upper_band();
    let ext = upper * ell_max;
    let dim = n + ext;
    check_index(scheme, dim - 1)?;
    let mut matrix = BandMatrix::zeros(dim, lower, upper);
    for k in 0..dim {
        for m in matrix.column_rows(k) {
            let v = scheme.entry(m, k, n);
            if !v.is_finite() {
                return Err(Error::NonFiniteEntry { m, k, n });
            }
            matrix.set(m, k, v);
        }
    }
    Ok(BandedOperator { n, ext, lower, upper, matrix })
}

/// `E[∫ x^ell dμ̂^N] = (1/N) Tr(pi_N M^ell pi_N)`.
pub fn mean_moment<S: RecurrenceScheme + ?Sized>(scheme: &S, n: usize, ell: usize) -> Result<f64> {
    Ok(build_truncation(scheme, n, ell)?.mean_moment(ell))
}

/// `∫ x^ell dν_N = (1/N) Tr((pi_N M pi_N)^ell)`.
pub fn zero_moment_trace<S: RecurrenceScheme + ?Sized>(scheme: &S, n: usize, ell: usize) -> Result<f64> {
    Ok(build_truncation(scheme, n, 0)?.zero_moment_trace(ell))
}

/// `Var[∫ x^ell dμ̂^N]`. The truncation covers paths of length `2 ell`.
pub fn variance_moment<S: RecurrenceScheme + ?Sized>(scheme: &S, n: usize, ell: usize) -> Result<f64> {
    Ok(build_truncation(scheme, n, 2 * ell)?.variance_moment(ell))
}

/// Constraint applied to the enumerated closed paths.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PathConstraint {
    /// All paths of length `ell`.
    None,
    /// Paths of length `ell` that never visit an ordinate `>= N`.
    AvoidAboveN,
    /// Paths of length `2 ell` whose ordinate at step `ell` is `>= N`.
    MidpointAtOrAboveN,
}

/// Lattice-path query: closed paths from `(0, k)` for every `k < N`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LatticePathQuery {
    pub n: usize,
    pub ell: usize,
    pub constraint: PathConstraint,
}

/// Limits of the exhaustive oracle.
pub const ORACLE_MAX_ELL: usize = 8;
pub const ORACLE_MAX_N: usize = 64;

/// Sum of weighted closed paths, normalised by `N` (by `N^2` for the midpoint
/// constraint). Steps go from ordinate `k` to `m in [k - R, k + q]`, `m >= 0`,
/// with weight `entry(m, k, N)`.
pub fn lattice_sum<S: RecurrenceScheme + ?Sized>(scheme: &S, query: LatticePathQuery) -> Result<f64> {
    lattice_sum_from(scheme, query, 0..query.n)
}

/// As [`lattice_sum`] but only for starting ordinates in `starts`.
pub fn lattice_sum_from<S: RecurrenceScheme + ?Sized>(
    scheme: &S,
    query: LatticePathQuery,
    starts: core::ops::Range<usize>,
) -> Result<f64> {
    let LatticePathQuery { n, ell, constraint } = query;
    if ell > ORACLE_MAX_ELL {
        return Err(Error::ScaleLimit { what: "path length ell", value: ell, limit: ORACLE_MAX_ELL });
    }
    if n > ORACLE_MAX_N {
        return Err(Error::ScaleLimit { what: "N", value: n, limit: ORACLE_MAX_N });
    }
    if n == 0 {
        return Err(crate::error::invalid("N", "must be at least 1"));
    }
    let len = if constraint == PathConstraint::MidpointAtOrAboveN { 2 * ell } else { ell };
    let q = scheme.upper_band();
    check_index(scheme, n - 1 + q * len)?;
    let walker = Walker { scheme, n, len, mid: ell, constraint, lower: scheme.lower_band(), upper: q };
    let mut total = CompensatedSum::new();
    for k in starts.start..starts.end.min(n) {
        let mut acc = CompensatedSum::new();
        walker.descend(k, k, 0, 1.0, &mut acc);
        total.add(acc.value());
    }
    let norm = if constraint == PathConstraint::MidpointAtOrAboveN { (n * n) as f64 } else { n as f64 };
    Ok(total.value() / norm)
}

struct Walker<'a, S: ?Sized> {
    scheme: &'a S,
    n: usize,
    len: usize,
    mid: usize,
    constraint: PathConstraint,
    lower: usize,
    upper: usize,
}

impl<S: RecurrenceScheme + ?Sized> Walker<'_, S> {
    fn descend(&self, start: usize, at: usize, step: usize, weight: f64, acc: &mut CompensatedSum) {
        // Only bites at ell = 0, where the start itself is the midpoint.
        if self.constraint == PathConstraint::MidpointAtOrAboveN && step == self.mid && at < self.n {
            return;
        }
        if step == self.len {
            if at == start {
                acc.add(weight);
            }
            return;
        }
        let remaining = self.len - step - 1;
        for next in at.saturating_sub(self.lower)..=at + self.upper {
            // The rest of the path must be able to return to `start`.
            if next > start + self.lower * remaining || start > next + self.upper * remaining {
                continue;
            }
            match self.constraint {
                PathConstraint::None => {}
                PathConstraint::AvoidAboveN => {
                    if next >= self.n {
                        continue;
                    }
                }
                PathConstraint::MidpointAtOrAboveN => {
                    let taken = step + 1;
                    if taken <= self.mid && next + self.upper * (self.mid - taken) < self.n {
                        continue;
                    }
                }
            }
            let w = self.scheme.entry(next, at, self.n);
            if w == 0.0 {
                continue;
            }
            self.descend(start, next, step + 1, weight * w, acc);
        }
    }
}

fn window_radius(n: usize, eps: f64) -> usize {
    floor(eps * n as f64 + 1e-9) as usize
}

fn window_max_radius<S: RecurrenceScheme + ?Sized>(scheme: &S, n: usize, radius: usize) -> Result<f64> {
    let lo = n.saturating_sub(radius);
    let hi = n + radius;
    check_index(scheme, hi)?;
    let mut best = 0.0f64;
    for k in lo..=hi {
        let m_lo = k.saturating_sub(scheme.lower_band()).max(lo);
        let m_hi = (k + scheme.upper_band()).min(hi);
        for m in m_lo..=m_hi {
            let v = abs(scheme.entry(m, k, n));
            if !v.is_finite() {
                return Err(Error::NonFiniteEntry { m, k, n });
            }
            best = best.max(v);
        }
    }
    Ok(best)
}

/// Largest `|entry(m, k, N)|` with `|k/N - 1| <= eps` and `|m/N - 1| <= eps`.
pub fn window_max<S: RecurrenceScheme + ?Sized>(scheme: &S, n: usize, eps: f64) -> Result<f64> {
    if !(eps > 0.0) {
        return Err(crate::error::invalid("eps", "must be positive"));
    }
    window_max_radius(scheme, n, window_radius(n, eps))
}

/// `(2 q ell)^ell / N * (window max)^ell`, window radius `q ell`.
pub fn gap_bound<S: RecurrenceScheme + ?Sized>(scheme: &S, n: usize, ell: usize) -> Result<f64> {
    if ell == 0 {
        return Err(crate::error::invalid("ell", "bounds need ell >= 1"));
    }
    let q = scheme.upper_band();
    let w = window_max_radius(scheme, n, q * ell)?;
    Ok(powi((2 * q * ell) as f64, ell) / n as f64 * powi(w, ell))
}

/// `(4 q ell)^(2 ell) / N^2 * (window max)^(2 ell)`, window radius `2 q ell`.
pub fn variance_bound<S: RecurrenceScheme + ?Sized>(scheme: &S, n: usize, ell: usize) -> Result<f64> {
    if ell == 0 {
        return Err(crate::error::invalid("ell", "bounds need ell >= 1"));
    }
    let q = scheme.upper_band();
    let w = window_max_radius(scheme, n, 2 * q * ell)?;
    Ok(powi((4 * q * ell) as f64, 2 * ell) / (n as f64 * n as f64) * powi(w, 2 * ell))
}

/// One row of a trace table.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TraceRow {
    pub n: usize,
    pub ell: usize,
    pub mean: f64,
    pub zero_side: f64,
    pub gap: f64,
    pub gap_bound: f64,
    pub variance: f64,
    pub variance_bound: f64,
}

/// All trace quantities for `(N, ell)` from one truncation. Bounds are NaN at
/// `ell = 0`, where they are undefined.
pub fn trace_row<S: RecurrenceScheme + ?Sized>(scheme: &S, n: usize, ell: usize) -> Result<TraceRow> {
    let op = build_truncation(scheme, n, 2 * ell)?;
    let mean = op.mean_moment(ell);
    let zero_side = op.zero_moment_trace(ell);
    let variance = op.variance_moment(ell);
    let (gb, vb) = if ell == 0 {
        (f64::NAN, f64::NAN)
    } else {
        (gap_bound(scheme, n, ell)?, variance_bound(scheme, n, ell)?)
    };
    Ok(TraceRow {
        n,
        ell,
        mean,
        zero_side,
        gap: abs(mean - zero_side),
        gap_bound: gb,
        variance,
        variance_bound: vb,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::recurrence::{classical_scheme, ClassicalEnsemble};

    fn gue() -> crate::recurrence::ClassicalScheme {
        classical_scheme(ClassicalEnsemble::Gue).unwrap()
    }

    #[test]
    fn truncation_examples() {
        let op = build_truncation(&gue(), 3, 2).unwrap();
        assert_eq!(op.matrix().dim(), 5);
        let off: Vec<f64> = (0..4).map(|k| op.matrix().get(k, k + 1)).collect();
        let want = [1.0f64 / 3.0, 2.0 / 3.0, 1.0, 4.0 / 3.0].map(libm::sqrt);
        assert_eq!(off, want);
        let c = classical_scheme(ClassicalEnsemble::Charlier { alpha: 1.0 }).unwrap();
        let op = build_truncation(&c, 2, 1).unwrap();
        assert_eq!((op.matrix().get(0, 0), op.matrix().get(1, 1)), (1.0, 1.5));
        assert_eq!(op.matrix().get(0, 1), libm::sqrt(0.5));
        let one = build_truncation(&c, 1, 0).unwrap();
        assert_eq!(one.matrix().to_dense(), [1.0]);
    }

    #[test]
    fn trace_examples() {
        let g = gue();
        assert!((mean_moment(&g, 5, 2).unwrap() - 1.0).abs() < 1e-15);
        assert!((zero_moment_trace(&g, 5, 2).unwrap() - 0.8).abs() < 1e-15);
        assert_eq!(zero_moment_trace(&g, 5, 1).unwrap(), 0.0);
        assert_eq!(mean_moment(&g, 7, 0).unwrap(), 1.0);
        assert_eq!(variance_moment(&g, 7, 0).unwrap(), 0.0);
        assert!((variance_moment(&g, 9, 1).unwrap() - 1.0 / 81.0).abs() < 1e-17);
        let w = classical_scheme(ClassicalEnsemble::Wishart { alpha: 0.0 }).unwrap();
        assert!((mean_moment(&w, 4, 1).unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn lattice_examples() {
        let g = gue();
        let q = |ell, constraint| LatticePathQuery { n: 5, ell, constraint };
        assert!((lattice_sum(&g, q(2, PathConstraint::None)).unwrap() - 1.0).abs() < 1e-15);
        assert!((lattice_sum(&g, q(2, PathConstraint::AvoidAboveN)).unwrap() - 0.8).abs() < 1e-15);
        assert!((lattice_sum(&g, q(1, PathConstraint::MidpointAtOrAboveN)).unwrap() - 0.04).abs() < 1e-16);
        assert!(lattice_sum(&g, LatticePathQuery { n: 65, ell: 1, constraint: PathConstraint::None }).is_err());
        assert!(lattice_sum(&g, LatticePathQuery { n: 5, ell: 9, constraint: PathConstraint::None }).is_err());
    }

    #[test]
    fn window_examples() {
        let g = gue();
        assert!((window_max(&g, 100, 0.1).unwrap() - libm::sqrt(1.1)).abs() < 1e-15);
        let c = classical_scheme(ClassicalEnsemble::Charlier { alpha: 1.0 }).unwrap();
        assert!((window_max(&c, 100, 0.1).unwrap() - 2.1).abs() < 1e-15);
    }

    #[test]
    fn gap_bound_example() {
        let g = gue();
        let b = gap_bound(&g, 100, 2).unwrap();
        assert!((b - 0.16 * 1.02).abs() < 1e-12, "{b}");
        let gap = mean_moment(&g, 100, 2).unwrap() - zero_moment_trace(&g, 100, 2).unwrap();
        assert!((gap - 0.01).abs() < 1e-15 && gap <= b);
        assert!(variance_bound(&g, 30, 1).unwrap() >= variance_moment(&g, 30, 1).unwrap());
    }

    #[test]
    fn band_product_matches_dense() {
        let mut a = BandMatrix::zeros(6, 2, 1);
        let mut b = BandMatrix::zeros(6, 1, 1);
        for k in 0..6 {
            for m in a.column_rows(k) {
                a.set(m, k, (m * 7 + k * 3) as f64 - 5.0);
            }
            for m in b.column_rows(k) {
                b.set(m, k, (m + 2 * k) as f64 * 0.5 - 1.0);
            }
        }
        let (da, db, dc) = (a.to_dense(), b.to_dense(), a.mul(&b).to_dense());
        for i in 0..6 {
            for j in 0..6 {
                let s: f64 = (0..6).map(|t| da[i * 6 + t] * db[t * 6 + j]).sum();
                assert_eq!(dc[i * 6 + j], s);
            }
        }
    }
}
