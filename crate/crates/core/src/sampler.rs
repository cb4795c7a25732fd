//! Monte-Carlo sampling of the unitary-invariant matrix models and their
//! empirical moments.
//!
//! Stream rule: sample `k` of a batch with seed `s` draws from
//! `ChaCha20Rng::seed_from_u64(s ^ k)`. Gaussians come from Box–Muller with
//! both outputs used, so each sample consumes a fixed number of words.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;
use rand_chacha::ChaCha20Rng;
use rand_core::{RngCore, SeedableRng};

use crate::eigen::hermitian_eigenvalues;
use crate::error::invalid;
use crate::math::{abs, cos, ln, pairwise_sum, sin, sqrt, PI};
use crate::measures::MomentSequence;
use crate::mop::path_from_ratios;
use crate::zeros::SpectralMeasure;
use crate::Result;

/// Which matrix model to sample.
#[derive(Debug, Clone, PartialEq)]
pub enum ModelKind {
    Gue,
    Wishart { alpha: f64 },
    /// GUE plus a deterministic diagonal.
    GueSource,
    /// `A^(1/2) W A^(1/2)` with `W` Wishart and `A` a positive diagonal.
    WishartCov { alpha: f64 },
}

/// A matrix model at size `N`. For the source kinds the diagonal carries
/// `locations[d]` with multiplicity `n_d` read off the greedy multi-index
/// path of `ratios` at step `N`.
#[derive(Debug, Clone, PartialEq)]
pub struct MatrixModelSpec {
    kind: ModelKind,
    n: usize,
    extra_columns: usize,
    diagonal: Vec<f64>,
}

fn columns(alpha: f64, n: usize) -> Result<usize> {
    if !(alpha >= 0.0) || !alpha.is_finite() {
        return Err(invalid("alpha", "must be finite and >= 0"));
    }
    let m = alpha * n as f64;
    let r = crate::math::floor(m + 0.5);
    if abs(m - r) > 1e-9 * (1.0 + m) {
        return Err(invalid("alpha", format!("N*alpha = {m} is not an integer")));
    }
    Ok(r as usize)
}

fn source_diagonal(n: usize, ratios: &[f64], locations: &[f64]) -> Result<Vec<f64>> {
    if ratios.len() != locations.len() {
        return Err(invalid("source", "ratios and locations differ in length"));
    }
    if locations.iter().any(|x| !x.is_finite()) {
        return Err(invalid("source", "locations must be finite"));
    }
    let path = path_from_ratios(ratios, n)?;
    let counts = path.index(n)?;
    let mut diag = Vec::with_capacity(n);
    for (d, &c) in counts.iter().enumerate() {
        diag.extend(core::iter::repeat(locations[d]).take(c));
    }
    Ok(diag)
}

impl MatrixModelSpec {
    pub fn gue(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(invalid("N", "must be >= 1"));
        }
        Ok(Self { kind: ModelKind::Gue, n, extra_columns: 0, diagonal: Vec::new() })
    }

    /// `(1/N) G G^†` with `G` of shape `N x N(1 + alpha)`; `N alpha` must be
    /// an integer.
    pub fn wishart(n: usize, alpha: f64) -> Result<Self> {
        if n == 0 {
            return Err(invalid("N", "must be >= 1"));
        }
        let extra = columns(alpha, n)?;
        Ok(Self { kind: ModelKind::Wishart { alpha }, n, extra_columns: extra, diagonal: Vec::new() })
    }

    pub fn gue_source(n: usize, ratios: &[f64], locations: &[f64]) -> Result<Self> {
        let mut s = Self::gue(n)?;
        s.kind = ModelKind::GueSource;
        s.diagonal = source_diagonal(n, ratios, locations)?;
        Ok(s)
    }

    pub fn wishart_cov(n: usize, alpha: f64, ratios: &[f64], locations: &[f64]) -> Result<Self> {
        if locations.iter().any(|x| !(*x > 0.0)) {
            return Err(invalid("source", "covariance diagonal must be positive"));
        }
        let mut s = Self::wishart(n, alpha)?;
        s.kind = ModelKind::WishartCov { alpha };
        s.diagonal = source_diagonal(n, ratios, locations)?;
        Ok(s)
    }

    pub fn kind(&self) -> &ModelKind {
        &self.kind
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// The deterministic diagonal (empty for the plain kinds).
    pub fn diagonal(&self) -> &[f64] {
        &self.diagonal
    }
}

struct Gaussian {
    rng: ChaCha20Rng,
    spare: Option<f64>,
}

impl Gaussian {
    fn new(seed: u64) -> Self {
        Self { rng: ChaCha20Rng::seed_from_u64(seed), spare: None }
    }

    /// Uniform on (0, 1], 53 bits.
    fn uniform(&mut self) -> f64 {
        ((self.rng.next_u64() >> 11) + 1) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    fn standard(&mut self) -> f64 {
        if let Some(x) = self.spare.take() {
            return x;
        }
        let r = sqrt(-2.0 * ln(self.uniform()));
        let t = 2.0 * PI * self.uniform();
        self.spare = Some(r * sin(t));
        r * cos(t)
    }

    /// Complex Gaussian with `E|z|^2 = 1`.
    fn complex(&mut self) -> Complex64 {
        let s = core::f64::consts::FRAC_1_SQRT_2;
        Complex64::new(s * self.standard(), s * self.standard())
    }
}

/// One spectrum of the model, ascending.
pub fn sample_spectrum(spec: &MatrixModelSpec, seed: u64) -> Result<SpectralMeasure> {
    Ok(SpectralMeasure::from_real(&sample_eigenvalues(spec, seed)?))
}

fn sample_eigenvalues(spec: &MatrixModelSpec, seed: u64) -> Result<Vec<f64>> {
    let n = spec.n;
    let nf = n as f64;
    let mut g = Gaussian::new(seed);
    let mut a = vec![Complex64::new(0.0, 0.0); n * n];
    match spec.kind {
        ModelKind::Gue | ModelKind::GueSource => {
            let sd = sqrt(1.0 / nf);
            let so = sqrt(1.0 / (2.0 * nf));
            for i in 0..n {
                a[i * n + i] = Complex64::new(sd * g.standard(), 0.0);
                for j in 0..i {
                    a[i * n + j] = Complex64::new(so * g.standard(), so * g.standard());
                }
            }
            for (i, d) in spec.diagonal.iter().enumerate() {
                a[i * n + i].re += d;
            }
        }
        ModelKind::Wishart { .. } | ModelKind::WishartCov { .. } => {
            let m = n + spec.extra_columns;
            let cols: Vec<Complex64> = (0..n * m).map(|_| g.complex()).collect();
            for i in 0..n {
                for j in 0..=i {
                    let (ri, rj) = (&cols[i * m..(i + 1) * m], &cols[j * m..(j + 1) * m]);
                    let mut s = Complex64::new(0.0, 0.0);
                    for (x, y) in ri.iter().zip(rj) {
                        s += x * y.conj();
                    }
                    a[i * n + j] = s / nf;
                }
            }
            if !spec.diagonal.is_empty() {
                let root: Vec<f64> = spec.diagonal.iter().map(|x| sqrt(*x)).collect();
                for i in 0..n {
                    for j in 0..=i {
                        a[i * n + j] *= root[i] * root[j];
                    }
                }
            }
        }
    }
    hermitian_eigenvalues(n, a)
}

/// Empirical moments `(1/N) sum_i x_i^l`, `l = 0..=order`, of one sample with
/// stream `seed ^ counter`.
pub fn sample_moments(spec: &MatrixModelSpec, order: usize, seed: u64, counter: u64) -> Result<Vec<f64>> {
    let x = sample_eigenvalues(spec, seed ^ counter)?;
    let mut pw = vec![1.0; x.len()];
    let mut out = Vec::with_capacity(order + 1);
    for l in 0..=order {
        if l > 0 {
            for (p, v) in pw.iter_mut().zip(&x) {
                *p *= v;
            }
        }
        out.push(pairwise_sum(&pw) / x.len() as f64);
    }
    Ok(out)
}

/// Monte-Carlo statistics per moment order.
#[derive(Debug, Clone, PartialEq)]
pub struct McMoments {
    pub mean: MomentSequence,
    /// Unbiased sample variance of the per-sample moments.
    pub variance: Vec<f64>,
    /// Standard error of the mean, `sqrt(variance / samples)`.
    pub standard_error: Vec<f64>,
    pub samples: usize,
}

/// Reduces per-sample moment vectors (in counter order) with pairwise sums.
/// The result depends only on the input order, not on how it was produced.
pub fn aggregate(per_sample: &[Vec<f64>]) -> Result<McMoments> {
    let s = per_sample.len();
    if s < 2 {
        return Err(invalid("samples", "need at least 2"));
    }
    let width = per_sample[0].len();
    let mut mean = Vec::with_capacity(width);
    let mut variance = Vec::with_capacity(width);
    let mut column = vec![0.0; s];
    for l in 0..width {
        for (c, v) in column.iter_mut().zip(per_sample) {
            *c = v[l];
        }
        let mu = pairwise_sum(&column) / s as f64;
        for c in column.iter_mut() {
            *c = (*c - mu) * (*c - mu);
        }
        mean.push(mu);
        variance.push(pairwise_sum(&column) / (s - 1) as f64);
    }
    let standard_error = variance.iter().map(|v| sqrt(v / s as f64)).collect();
    Ok(McMoments { mean: MomentSequence::new(mean)?, variance, standard_error, samples: s })
}

/// Sequential Monte-Carlo moments up to `order` over `samples` draws.
pub fn mc_moments(spec: &MatrixModelSpec, order: usize, samples: usize, seed: u64) -> Result<McMoments> {
    if samples < 2 {
        return Err(invalid("samples", "need at least 2"));
    }
    let per: Result<Vec<Vec<f64>>> = (0..samples as u64).map(|k| sample_moments(spec, order, seed, k)).collect();
    aggregate(&per?)
}
