//! Multiple Hermite and multiple Laguerre schemes.
//!
//! Polynomials are indexed along a path of multi-indices `n^(0), n^(1), ...`
//! with `n^(k+1) = n^(k) + e_{i_k}`. The operator entries come from the
//! nearest-neighbour recurrence
//! `x P_n = P_{n+e_i} + same_i(n) P_n + sum_d down_d(n) P_{n-e_d}`
//! after rewriting each `P_{n^(k) - e_d}` in the path basis via
//! `P_{m+e_i} - P_{m+e_j} = (same_j(m) - same_i(m)) P_m`.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::invalid;
use crate::math::abs;
use crate::recurrence::RecurrenceScheme;
use crate::{Error, Result};

/// A path-like sequence of multi-indices, stored up to `n_max`.
#[derive(Debug, Clone, PartialEq)]
pub struct MultiIndexPath {
    ratios: Vec<f64>,
    /// `steps[k] = i_k`.
    steps: Vec<usize>,
    /// `counts[k * r + d] = n^(k)_d`.
    counts: Vec<usize>,
    refresh: usize,
}

fn validate_ratios(q: &[f64]) -> Result<()> {
    if q.is_empty() {
        return Err(invalid("ratios", "empty"));
    }
    if q.iter().any(|&x| !(x > 0.0) || !(x <= 1.0)) {
        return Err(invalid("ratios", "every ratio must lie in (0, 1]"));
    }
    let s: f64 = q.iter().sum();
    if abs(s - 1.0) > 1e-12 {
        return Err(invalid("ratios", format!("sum to {s}, not 1")));
    }
    Ok(())
}

impl MultiIndexPath {
    fn from_steps(ratios: Vec<f64>, steps: Vec<usize>) -> Result<Self> {
        let r = ratios.len();
        let mut counts = vec![0usize; (steps.len() + 1) * r];
        for (k, &d) in steps.iter().enumerate() {
            let (prev, next) = counts.split_at_mut((k + 1) * r);
            next[..r].copy_from_slice(&prev[k * r..]);
            next[d] += 1;
        }
        let mut path = Self { ratios, steps, counts, refresh: 0 };
        path.refresh = path.measure_refresh();
        let bound = libm::ceil(1.0 / path.ratios.iter().copied().fold(f64::INFINITY, f64::min)) as usize;
        if path.refresh > bound.max(1) {
            return Err(invalid(
                "path",
                format!("refresh bound R = {} exceeds ceil(1/min q) = {bound}", path.refresh),
            ));
        }
        Ok(path)
    }

    /// Smallest `R` with `n^(N+R) >= n^(N) + 1` coordinatewise for every `N`
    /// whose window fits in the stored path.
    fn measure_refresh(&self) -> usize {
        let r = self.r();
        let len = self.steps.len();
        let mut worst = 0;
        for start in 0..len {
            let base = &self.counts[start * r..(start + 1) * r];
            let mut hit = None;
            for end in start + 1..=len {
                let cur = &self.counts[end * r..(end + 1) * r];
                if cur.iter().zip(base).all(|(c, b)| c > b) {
                    hit = Some(end - start);
                    break;
                }
            }
            match hit {
                Some(w) => worst = worst.max(w),
                None => break,
            }
        }
        worst.max(1)
    }

    /// Round-robin path cycling through the coordinates in the given order.
    pub fn round_robin(order: &[usize], n_max: usize) -> Result<Self> {
        let r = order.len();
        let mut seen = vec![false; r];
        for &d in order {
            if d >= r || seen[d] {
                return Err(invalid("round-robin order", "must be a permutation"));
            }
            seen[d] = true;
        }
        let steps = (0..n_max).map(|k| order[k % r]).collect();
        Self::from_steps(vec![1.0 / r as f64; r], steps)
    }

    pub fn r(&self) -> usize {
        self.ratios.len()
    }

    pub fn ratios(&self) -> &[f64] {
        &self.ratios
    }

    /// Refresh bound `R`.
    pub fn refresh(&self) -> usize {
        self.refresh
    }

    /// Largest `N` for which `n^(N)` is stored.
    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// `n^(k)`.
    pub fn index(&self, k: usize) -> Result<&[usize]> {
        let r = self.r();
        if k > self.steps.len() {
            return Err(Error::IndexBeyondScheme { index: k, limit: self.steps.len() });
        }
        Ok(&self.counts[k * r..(k + 1) * r])
    }

    /// `i_k`, the coordinate incremented from `n^(k)` to `n^(k+1)`.
    pub fn step(&self, k: usize) -> Result<usize> {
        self.steps
            .get(k)
            .copied()
            .ok_or(Error::IndexBeyondScheme { index: k, limit: self.steps.len().saturating_sub(1) })
    }
}

/// Greedy-by-deficit path: step `N -> N+1` increments the coordinate `d`
/// maximising `q_d (N+1) - n_d` (lowest index on ties).
pub fn path_from_ratios(q: &[f64], n_max: usize) -> Result<MultiIndexPath> {
    validate_ratios(q)?;
    let r = q.len();
    let mut n = vec![0usize; r];
    let mut steps = Vec::with_capacity(n_max);
    for k in 0..n_max {
        let target = (k + 1) as f64;
        let mut best = 0;
        let mut best_def = f64::NEG_INFINITY;
        for d in 0..r {
            let def = q[d] * target - n[d] as f64;
            if def > best_def + 1e-12 {
                best_def = def;
                best = d;
            }
        }
        n[best] += 1;
        steps.push(best);
    }
    MultiIndexPath::from_steps(q.to_vec(), steps)
}

/// Nearest-neighbour coefficients at one multi-index.
#[derive(Debug, Clone, PartialEq)]
pub struct NNCoefficients {
    /// `same_d(n)`: coefficient of `P_n` in `x P_n = P_{n+e_d} + ...`.
    pub same: Vec<f64>,
    /// `down_d(n)`: coefficient of `P_{n - e_d}`.
    pub down: Vec<f64>,
}

/// Supplier of nearest-neighbour coefficients.
pub trait NearestNeighbor {
    fn r(&self) -> usize;
    fn coefficients(&self, n: &[usize], big_n: usize) -> NNCoefficients;
    fn kind(&self) -> &'static str;
    fn params(&self) -> Vec<(&'static str, f64)>;
}

fn distinct(a: &[f64]) -> bool {
    a.iter().enumerate().all(|(i, x)| a[..i].iter().all(|y| y != x))
}

/// Multiple Hermite weights `exp(-N x^2 / 2 + N a_j x)`.
#[derive(Debug, Clone, PartialEq)]
pub struct HermiteNN {
    a: Vec<f64>,
}

impl HermiteNN {
    pub fn new(a: &[f64]) -> Result<Self> {
        if a.is_empty() || !distinct(a) || a.iter().any(|x| !x.is_finite()) {
            return Err(invalid("multiple Hermite a", "need finite, pairwise distinct values"));
        }
        Ok(Self { a: a.to_vec() })
    }

    pub fn a(&self) -> &[f64] {
        &self.a
    }
}

impl NearestNeighbor for HermiteNN {
    fn r(&self) -> usize {
        self.a.len()
    }

    fn coefficients(&self, n: &[usize], big_n: usize) -> NNCoefficients {
        let down = n.iter().map(|&nd| if nd == 0 { 0.0 } else { nd as f64 / big_n as f64 }).collect();
        NNCoefficients { same: self.a.clone(), down }
    }

    fn kind(&self) -> &'static str {
        "multiple-hermite"
    }

    fn params(&self) -> Vec<(&'static str, f64)> {
        self.a.iter().map(|&x| ("a", x)).collect()
    }
}

/// `same_d = a_d`, `down_d = n_d / N`.
pub fn nn_coeffs_hermite(n: &[usize], big_n: usize, a: &[f64]) -> Result<NNCoefficients> {
    let h = HermiteNN::new(a)?;
    if n.len() != a.len() {
        return Err(invalid("multi-index", "length differs from a"));
    }
    Ok(h.coefficients(n, big_n))
}

/// Multiple Laguerre weights `x^(N alpha) exp(-N a_j x)` on `(0, inf)`.
#[derive(Debug, Clone, PartialEq)]
pub struct LaguerreNN {
    alpha: f64,
    a: Vec<f64>,
}

impl LaguerreNN {
    pub fn new(alpha: f64, a: &[f64]) -> Result<Self> {
        if a.is_empty() || !distinct(a) || a.iter().any(|&x| !(x > 0.0) || !x.is_finite()) {
            return Err(invalid("multiple Laguerre a", "need positive, pairwise distinct values"));
        }
        if !(alpha >= 0.0) || !alpha.is_finite() {
            return Err(invalid("multiple Laguerre alpha", "need alpha >= 0"));
        }
        Ok(Self { alpha, a: a.to_vec() })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn a(&self) -> &[f64] {
        &self.a
    }
}

impl NearestNeighbor for LaguerreNN {
    fn r(&self) -> usize {
        self.a.len()
    }

    fn coefficients(&self, n: &[usize], big_n: usize) -> NNCoefficients {
        let nf = big_n as f64;
        let size: usize = n.iter().sum();
        let total = size as f64 + nf * self.alpha;
        let spread: f64 = n.iter().zip(&self.a).map(|(&nj, aj)| nj as f64 / (nf * aj)).sum();
        let same = self.a.iter().map(|ad| (total + 1.0) / (nf * ad) + spread).collect();
        let down = n
            .iter()
            .zip(&self.a)
            .map(|(&nd, ad)| if nd == 0 { 0.0 } else { nd as f64 * total / (nf * nf * ad * ad) })
            .collect();
        NNCoefficients { same, down }
    }

    fn kind(&self) -> &'static str {
        "multiple-laguerre"
    }

    fn params(&self) -> Vec<(&'static str, f64)> {
        let mut p = vec![("alpha", self.alpha)];
        p.extend(self.a.iter().map(|&x| ("a", x)));
        p
    }
}

/// `same_d = (|n| + N alpha + 1)/(N a_d) + sum_j n_j/(N a_j)`,
/// `down_d = n_d (|n| + N alpha) / (N^2 a_d^2)`.
pub fn nn_coeffs_laguerre(n: &[usize], big_n: usize, alpha: f64, a: &[f64]) -> Result<NNCoefficients> {
    let l = LaguerreNN::new(alpha, a)?;
    if n.len() != a.len() {
        return Err(invalid("multi-index", "length differs from a"));
    }
    Ok(l.coefficients(n, big_n))
}

/// Nonzero window of column `k`: pairs `(m, entry(m, k))` for
/// `m = max(0, k - R) ..= k + 1`, ascending in `m`.
pub fn banded_entries<C: NearestNeighbor + ?Sized>(
    path: &MultiIndexPath,
    coeffs: &C,
    k: usize,
    big_n: usize,
) -> Result<Vec<(usize, f64)>> {
    let r = path.r();
    if coeffs.r() != r {
        return Err(invalid("coefficients", "dimension differs from the path"));
    }
    let big_r = path.refresh();
    let ik = path.step(k)?;
    let nk = path.index(k)?;
    let here = coeffs.coefficients(nk, big_n);
    let lo = k.saturating_sub(big_r);
    let mut out: Vec<(usize, f64)> = (lo..=k + 1).map(|m| (m, 0.0)).collect();
    let slot = |m: usize| m - lo;
    out[slot(k + 1)].1 = 1.0;
    out[slot(k)].1 = here.same[ik];
    if k == 0 {
        return Ok(out);
    }
    let mut shifted = vec![0usize; r];
    for d in 0..r {
        let b = here.down[d];
        if b == 0.0 || nk[d] == 0 {
            continue;
        }
        // T_l = P_{n^(l) - e_d}. If i_{l-1} = d then T_l = P_{l-1}; otherwise
        // T_l = P_{l-1} + c T_{l-1} with c = same_d(m) - same_{i_{l-1}}(m),
        // m = n^(l-1) - e_d.
        let mut coef = b;
        let mut l = k;
        loop {
            out[slot(l - 1)].1 += coef;
            let step = path.step(l - 1)?;
            if step == d || l - 1 <= lo {
                break;
            }
            shifted.copy_from_slice(path.index(l - 1)?);
            shifted[d] -= 1;
            let cs = coeffs.coefficients(&shifted, big_n);
            coef *= cs.same[d] - cs.same[step];
            if coef == 0.0 {
                break;
            }
            l -= 1;
        }
    }
    Ok(out)
}

/// Recurrence scheme for a multiple orthogonal polynomial family along a path.
/// Upper band is 1 (monic), lower band is the path's refresh bound.
pub struct MopScheme {
    path: MultiIndexPath,
    coeffs: alloc::boxed::Box<dyn NearestNeighbor + Send + Sync>,
}

impl core::fmt::Debug for MopScheme {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.debug_struct("MopScheme")
            .field("kind", &self.coeffs.kind())
            .field("params", &self.coeffs.params())
            .field("refresh", &self.path.refresh())
            .finish()
    }
}

/// Which family to build.
#[derive(Debug, Clone, PartialEq)]
pub enum MopKind {
    Hermite { a: Vec<f64> },
    Laguerre { alpha: f64, a: Vec<f64> },
}

/// Builds the scheme; the path must have the same number of coordinates.
pub fn mop_scheme(kind: &MopKind, path: MultiIndexPath) -> Result<MopScheme> {
    let coeffs: alloc::boxed::Box<dyn NearestNeighbor + Send + Sync> = match kind {
        MopKind::Hermite { a } => alloc::boxed::Box::new(HermiteNN::new(a)?),
        MopKind::Laguerre { alpha, a } => alloc::boxed::Box::new(LaguerreNN::new(*alpha, a)?),
    };
    if coeffs.r() != path.r() {
        return Err(invalid("path", "number of coordinates differs from the weights"));
    }
    Ok(MopScheme { path, coeffs })
}

impl MopScheme {
    pub fn path(&self) -> &MultiIndexPath {
        &self.path
    }

    /// Column `k` of the operator (see [`banded_entries`]).
    pub fn column(&self, k: usize, big_n: usize) -> Result<Vec<(usize, f64)>> {
        banded_entries(&self.path, self.coeffs.as_ref(), k, big_n)
    }
}

impl RecurrenceScheme for MopScheme {
    fn name(&self) -> String {
        String::from(self.coeffs.kind())
    }

    fn params(&self) -> Vec<(&'static str, f64)> {
        let mut p = self.coeffs.params();
        p.extend(self.path.ratios().iter().map(|&x| ("q", x)));
        p
    }

    fn lower_band(&self) -> usize {
        self.path.refresh()
    }

    fn upper_band(&self) -> usize {
        1
    }

    fn entry(&self, m: usize, k: usize, n: usize) -> f64 {
        if m > k + 1 || m + self.path.refresh() < k {
            return 0.0;
        }
        match self.column(k, n) {
            Ok(col) => col.iter().find(|(row, _)| *row == m).map_or(0.0, |e| e.1),
            Err(_) => f64::NAN,
        }
    }

    fn index_limit(&self) -> Option<usize> {
        Some(self.path.len().saturating_sub(1))
    }
}
