//! Zeros of the average characteristic polynomial: the spectrum of the
//! `N x N` principal block of a banded truncation.

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::bandop::{BandMatrix, BandedOperator};
use crate::eigen::{hessenberg_qr_eigenvalues, symmetric_tridiagonal_eigenvalues, Dense};
use crate::math::{abs, ln, pairwise_sum};
use crate::measures::MomentSequence;
use crate::roots::aberth;
use crate::{Error, Result};

/// Uniform probability measure on a list of complex points, sorted by real
/// part and then imaginary part.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralMeasure {
    points: Vec<Complex64>,
}

impl SpectralMeasure {
    pub fn new(mut points: Vec<Complex64>) -> Self {
        points.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
        Self { points }
    }

    pub fn from_real(values: &[f64]) -> Self {
        Self::new(values.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    pub fn points(&self) -> &[Complex64] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Largest `|Im z|` over the points.
    pub fn max_imag(&self) -> f64 {
        self.points.iter().map(|z| abs(z.im)).fold(0.0, f64::max)
    }
}

/// Moments of a spectral measure: real parts, with the imaginary residual of
/// each `(1/N) sum z_i^l` kept alongside.
#[derive(Debug, Clone, PartialEq)]
pub struct ZeroMoments {
    pub moments: MomentSequence,
    pub imag_residual: Vec<f64>,
}

/// `m_l = (1/N) sum Re(z_i^l)` for `l = 0..=order`.
pub fn zero_moments(sm: &SpectralMeasure, order: usize) -> Result<ZeroMoments> {
    let n = sm.len();
    if n == 0 {
        return Err(crate::error::invalid("spectral measure", "no points"));
    }
    let mut powers: Vec<Complex64> = vec![Complex64::new(1.0, 0.0); n];
    let mut re = vec![0.0; n];
    let mut im = vec![0.0; n];
    let mut values = Vec::with_capacity(order + 1);
    let mut resid = Vec::with_capacity(order + 1);
    for ell in 0..=order {
        if ell > 0 {
            for (p, z) in powers.iter_mut().zip(&sm.points) {
                *p *= z;
            }
        }
        for i in 0..n {
            re[i] = powers[i].re;
            im[i] = powers[i].im;
        }
        values.push(pairwise_sum(&re) / n as f64);
        resid.push(pairwise_sum(&im) / n as f64);
    }
    Ok(ZeroMoments { moments: MomentSequence::new(values)?, imag_residual: resid })
}

/// `(max |Im z_i| <= tol, max |Im z_i|)`.
pub fn reality_check(sm: &SpectralMeasure, tol: f64) -> (bool, f64) {
    let m = sm.max_imag();
    (m <= tol, m)
}

fn is_symmetric_tridiagonal(block: &BandMatrix) -> bool {
    let n = block.dim();
    for k in 0..n {
        for m in block.column_rows(k) {
            let v = block.get(m, k);
            if m + 1 < k || m > k + 1 {
                if v != 0.0 {
                    return false;
                }
            } else if m != k && v != block.get(k, m) {
                return false;
            }
        }
    }
    true
}

/// Upper bandwidth of a Hessenberg matrix: the largest `k - m` with a nonzero
/// entry in row `m`, column `k`.
fn upper_bandwidth(h: &Dense) -> usize {
    let n = h.dim;
    let mut bw = 0;
    for m in 0..n {
        for k in (m + 1..n).rev() {
            if h.at(m, k) != 0.0 {
                bw = bw.max(k - m);
                break;
            }
        }
    }
    bw
}

/// Determinant `det(z I - H_k)` of the leading blocks of an upper Hessenberg
/// `H`, carried with a power-of-two scale.
struct Charpoly<'a> {
    h: &'a Dense,
    bw: usize,
}

/// `(p, p', e)` with the true values equal to `p * 2^e`, `p' * 2^e`.
type Scaled = (Complex64, Complex64, i32);

impl Charpoly<'_> {
    fn eval(&self, z: Complex64) -> Scaled {
        let n = self.h.dim;
        let mut d = vec![Complex64::new(0.0, 0.0); n + 1];
        let mut dd = vec![Complex64::new(0.0, 0.0); n + 1];
        d[0] = Complex64::new(1.0, 0.0);
        let mut exp2: i32 = 0;
        for k in 0..n {
            let diag = z - self.h.at(k, k);
            let mut v = diag * d[k];
            let mut dv = d[k] + diag * dd[k];
            let mut prod = 1.0;
            let lo = k.saturating_sub(self.bw);
            let mut m = k;
            while m > lo {
                m -= 1;
                prod *= self.h.at(m + 1, m);
                let c = self.h.at(m, k) * prod;
                if c != 0.0 {
                    v -= d[m] * c;
                    dv -= dd[m] * c;
                }
            }
            d[k + 1] = v;
            dd[k + 1] = dv;
            let mag = v.norm().max(dv.norm());
            if mag > 1e150 || (mag < 1e-150 && mag > 0.0) {
                let e = libm::ilogb(mag);
                let f = libm::ldexp(1.0, -e);
                let from = (k + 1).saturating_sub(self.bw + 1);
                for j in from..=k + 1 {
                    d[j] *= f;
                    dd[j] *= f;
                }
                exp2 += e;
            }
        }
        (d[n], dd[n], exp2)
    }
}

fn dense_block(op: &BandedOperator) -> Dense {
    let block = op.principal_block();
    Dense::new(block.dim(), block.to_dense())
}

/// Evaluates `det(z I - B)` for the principal block `B` as a mantissa and a
/// power-of-two exponent.
pub fn charpoly_scaled(op: &BandedOperator, z: Complex64) -> (Complex64, i32) {
    let h = dense_block(op);
    let mut hh = h.clone();
    if !hh.is_upper_hessenberg() {
        hh.reduce_to_hessenberg();
    }
    let bw = upper_bandwidth(&hh);
    let (p, _, e) = Charpoly { h: &hh, bw }.eval(z);
    (p, e)
}

/// `det(z I - B)` for the principal block `B`; `Overflow` carries `ln|det|`
/// when the value is not representable.
pub fn charpoly_eval(op: &BandedOperator, z: Complex64) -> Result<Complex64> {
    let (p, e) = charpoly_scaled(op, z);
    let v = p * libm::ldexp(1.0, e);
    if v.re.is_finite() && v.im.is_finite() && (e >= -1000 || p.norm() == 0.0) {
        Ok(v)
    } else {
        Err(Error::Overflow { log_abs: ln(p.norm()) + e as f64 * core::f64::consts::LN_2 })
    }
}

/// Spectrum of the principal block.
///
/// Symmetric tridiagonal blocks go to implicit QL. Anything else is balanced,
/// reduced to Hessenberg form if needed, solved by Francis QR (at most
/// `100 N` iterations) and polished by Aberth iterations on the Hessenberg
/// determinant recurrence. Roots whose imaginary part is tiny are certified
/// real by a sign change of the characteristic polynomial on disjoint
/// brackets and then stored as real.
pub fn spectrum(op: &BandedOperator) -> Result<SpectralMeasure> {
    let block = op.principal_block();
    let n = block.dim();
    if is_symmetric_tridiagonal(&block) {
        let diag: Vec<f64> = (0..n).map(|k| block.get(k, k)).collect();
        let off: Vec<f64> = (0..n.saturating_sub(1)).map(|k| block.get(k, k + 1)).collect();
        return Ok(SpectralMeasure::from_real(&symmetric_tridiagonal_eigenvalues(&diag, &off)?));
    }
    general_spectrum(Dense::new(n, block.to_dense()))
}

/// Eigenvalues of a general real matrix through the balanced QR + Aberth route.
pub fn general_spectrum(mut h: Dense) -> Result<SpectralMeasure> {
    let n = h.dim;
    h.balance();
    if !h.is_upper_hessenberg() {
        h.reduce_to_hessenberg();
    }
    let seeds = hessenberg_qr_eigenvalues(&h, 100 * n.max(1))?;
    let bw = upper_bandwidth(&h);
    let cp = Charpoly { h: &h, bw };
    let scale = seeds.iter().map(|z| z.norm()).fold(0.0, f64::max).max(f64::MIN_POSITIVE);
    let newton = |z: Complex64| {
        let (p, d, _) = cp.eval(z);
        if p.norm_sqr() == 0.0 {
            None
        } else {
            Some(p / d)
        }
    };
    let out = aberth(seeds, newton, scale, 1e-14, 200);
    let mut roots = out.roots;
    if !out.converged {
        for (i, z) in roots.iter().enumerate() {
            let (p, d, _) = cp.eval(*z);
            let step = (p / d).norm();
            if p.norm_sqr() != 0.0 && !(step <= 1e-9 * (z.norm() + scale)) {
                return Err(Error::EigenNonConvergence { dim: n, stage: "Aberth polishing", index: i });
            }
        }
    }
    certify_real(&cp, &mut roots, scale);
    Ok(SpectralMeasure::new(roots))
}

fn certify_real(cp: &Charpoly<'_>, roots: &mut [Complex64], scale: f64) {
    let mut cand: Vec<usize> = (0..roots.len()).filter(|&i| abs(roots[i].im) <= 1e-6 * scale).collect();
    if cand.is_empty() {
        return;
    }
    cand.sort_by(|&a, &b| roots[a].re.total_cmp(&roots[b].re));
    let xs: Vec<f64> = cand.iter().map(|&i| roots[i].re).collect();
    let sign_at = |x: f64| {
        let (p, _, _) = cp.eval(Complex64::new(x, 0.0));
        p.re
    };
    for (j, &i) in cand.iter().enumerate() {
        let left = if j > 0 { xs[j] - xs[j - 1] } else { f64::INFINITY };
        let right = if j + 1 < xs.len() { xs[j + 1] - xs[j] } else { f64::INFINITY };
        let gap = left.min(right);
        let delta = (0.25 * gap).min(1e-6 * scale).max(1e3 * abs(roots[i].im));
        if !(delta < 0.5 * gap) || delta == 0.0 {
            continue;
        }
        let (a, b) = (sign_at(xs[j] - delta), sign_at(xs[j] + delta));
        if a * b < 0.0 {
            roots[i] = Complex64::new(xs[j], 0.0);
        }
    }
}
