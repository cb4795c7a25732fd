//! Dense eigenvalue kernels: implicit QL for symmetric tridiagonal matrices,
//! balancing + Hessenberg reduction + Francis double-shift QR for general
//! real matrices, and Householder tridiagonalisation of Hermitian matrices.

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::math::{abs, sqrt};
use crate::{Error, Result};

fn hypot(a: f64, b: f64) -> f64 {
    libm::hypot(a, b)
}

fn sign(a: f64, b: f64) -> f64 {
    if b >= 0.0 {
        abs(a)
    } else {
        -abs(a)
    }
}

/// Eigenvalues of the symmetric tridiagonal matrix with diagonal `diag` and
/// off-diagonal `off` (`off[i]` couples `i` and `i + 1`), ascending.
pub fn symmetric_tridiagonal_eigenvalues(diag: &[f64], off: &[f64]) -> Result<Vec<f64>> {
    let n = diag.len();
    assert!(off.len() + 1 >= n, "off-diagonal too short");
    let mut d = diag.to_vec();
    let mut e = vec![0.0; n];
    e[..n.saturating_sub(1)].copy_from_slice(&off[..n.saturating_sub(1)]);
    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = abs(d[m]) + abs(d[m + 1]);
                if abs(e[m]) <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > 60 {
                return Err(Error::EigenNonConvergence { dim: n, stage: "tridiagonal QL", index: l });
            }
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = hypot(g, 1.0);
            g = d[m] - d[l] + e[l] / (g + sign(r, g));
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut i = m;
            let mut underflow = false;
            while i > l {
                i -= 1;
                let f = s * e[i];
                let b = c * e[i];
                r = hypot(f, g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    underflow = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
            }
            if underflow {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    d.sort_by(f64::total_cmp);
    Ok(d)
}

/// Row-major square matrix helper.
#[derive(Debug, Clone, PartialEq)]
pub struct Dense {
    pub dim: usize,
    pub data: Vec<f64>,
}

impl Dense {
    pub fn new(dim: usize, data: Vec<f64>) -> Self {
        assert_eq!(data.len(), dim * dim);
        Self { dim, data }
    }

    #[inline]
    pub fn at(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.dim + j]
    }

    #[inline]
    fn at_mut(&mut self, i: usize, j: usize) -> &mut f64 {
        &mut self.data[i * self.dim + j]
    }

    pub fn is_upper_hessenberg(&self) -> bool {
        (0..self.dim).all(|i| (0..i.saturating_sub(1)).all(|j| self.at(i, j) == 0.0))
    }

    /// Parlett–Reinsch balancing by powers of two. Similarity only, so the
    /// spectrum and any Hessenberg structure are preserved exactly.
    pub fn balance(&mut self) {
        let n = self.dim;
        let radix = 2.0f64;
        let sqrdx = radix * radix;
        let mut done = false;
        while !done {
            done = true;
            for i in 0..n {
                let mut r = 0.0;
                let mut c = 0.0;
                for j in 0..n {
                    if j != i {
                        c += abs(self.at(j, i));
                        r += abs(self.at(i, j));
                    }
                }
                if c != 0.0 && r != 0.0 {
                    let mut g = r / radix;
                    let mut f = 1.0;
                    let s = c + r;
                    while c < g {
                        f *= radix;
                        c *= sqrdx;
                    }
                    g = r * radix;
                    while c > g {
                        f /= radix;
                        c /= sqrdx;
                    }
                    if (c + r) / f < 0.95 * s {
                        done = false;
                        let g = 1.0 / f;
                        for j in 0..n {
                            *self.at_mut(i, j) *= g;
                        }
                        for j in 0..n {
                            *self.at_mut(j, i) *= f;
                        }
                    }
                }
            }
        }
    }

    /// Orthogonal (Householder) reduction to upper Hessenberg form.
    pub fn reduce_to_hessenberg(&mut self) {
        let n = self.dim;
        if n < 3 {
            return;
        }
        let mut v = vec![0.0; n];
        for k in 0..n - 2 {
            let mut alpha = 0.0;
            for i in k + 1..n {
                alpha += self.at(i, k) * self.at(i, k);
            }
            let alpha = sqrt(alpha);
            if alpha == 0.0 {
                continue;
            }
            let x0 = self.at(k + 1, k);
            let alpha = if x0 > 0.0 { -alpha } else { alpha };
            for i in 0..n {
                v[i] = 0.0;
            }
            v[k + 1] = x0 - alpha;
            for i in k + 2..n {
                v[i] = self.at(i, k);
            }
            let vnorm2: f64 = v[k + 1..].iter().map(|x| x * x).sum();
            if vnorm2 == 0.0 {
                continue;
            }
            // A <- H A with H = I - 2 v v^T / |v|^2
            for j in 0..n {
                let mut s = 0.0;
                for i in k + 1..n {
                    s += v[i] * self.at(i, j);
                }
                let f = 2.0 * s / vnorm2;
                for i in k + 1..n {
                    *self.at_mut(i, j) -= f * v[i];
                }
            }
            // A <- A H
            for i in 0..n {
                let mut s = 0.0;
                for j in k + 1..n {
                    s += self.at(i, j) * v[j];
                }
                let f = 2.0 * s / vnorm2;
                for j in k + 1..n {
                    *self.at_mut(i, j) -= f * v[j];
                }
            }
            for i in k + 2..n {
                *self.at_mut(i, k) = 0.0;
            }
        }
    }
}

/// Eigenvalues of an upper Hessenberg matrix by the Francis double-shift QR
/// iteration. `max_iter` caps the total number of iterations.
pub fn hessenberg_qr_eigenvalues(h: &Dense, max_iter: usize) -> Result<Vec<Complex64>> {
    let n = h.dim;
    let mut a = h.clone();
    let mut wr = vec![0.0; n];
    let mut wi = vec![0.0; n];
    let mut anorm = 0.0;
    for i in 0..n {
        for j in i.saturating_sub(1)..n {
            anorm += abs(a.at(i, j));
        }
    }
    let mut nn = n as isize - 1;
    let mut t = 0.0;
    let mut total = 0usize;
    let (mut p, mut q, mut r): (f64, f64, f64);
    while nn >= 0 {
        let mut its = 0;
        loop {
            let nnu = nn as usize;
            let mut l = nnu;
            while l >= 1 {
                let s = abs(a.at(l - 1, l - 1)) + abs(a.at(l, l));
                let s = if s == 0.0 { anorm } else { s };
                if abs(a.at(l, l - 1)) <= f64::EPSILON * s {
                    *a.at_mut(l, l - 1) = 0.0;
                    break;
                }
                l -= 1;
            }
            let x = a.at(nnu, nnu);
            if l == nnu {
                wr[nnu] = x + t;
                wi[nnu] = 0.0;
                nn -= 1;
                break;
            }
            let y = a.at(nnu - 1, nnu - 1);
            let w = a.at(nnu, nnu - 1) * a.at(nnu - 1, nnu);
            if l + 1 == nnu {
                let pp = 0.5 * (y - x);
                let qq = pp * pp + w;
                let z = sqrt(abs(qq));
                let xx = x + t;
                if qq >= 0.0 {
                    let z = pp + sign(z, pp);
                    wr[nnu - 1] = xx + z;
                    wr[nnu] = if z != 0.0 { xx - w / z } else { xx + z };
                    wi[nnu - 1] = 0.0;
                    wi[nnu] = 0.0;
                } else {
                    wr[nnu - 1] = xx + pp;
                    wr[nnu] = xx + pp;
                    wi[nnu - 1] = -z;
                    wi[nnu] = z;
                }
                nn -= 2;
                break;
            }
            total += 1;
            if total > max_iter {
                return Err(Error::EigenNonConvergence { dim: n, stage: "Hessenberg QR", index: nnu });
            }
            let (mut x, mut y, mut w) = (x, y, w);
            if its == 10 || its == 20 {
                t += x;
                for i in 0..=nnu {
                    *a.at_mut(i, i) -= x;
                }
                let s = abs(a.at(nnu, nnu - 1)) + abs(a.at(nnu - 1, nnu - 2));
                x = 0.75 * s;
                y = x;
                w = -0.4375 * s * s;
            }
            its += 1;
            let mut m = nnu - 2;
            loop {
                let z = a.at(m, m);
                let rr = x - z;
                let ss = y - z;
                p = (rr * ss - w) / a.at(m + 1, m) + a.at(m, m + 1);
                q = a.at(m + 1, m + 1) - z - rr - ss;
                r = a.at(m + 2, m + 1);
                let s = abs(p) + abs(q) + abs(r);
                p /= s;
                q /= s;
                r /= s;
                if m == l {
                    break;
                }
                let u = abs(a.at(m, m - 1)) * (abs(q) + abs(r));
                let v = abs(p) * (abs(a.at(m - 1, m - 1)) + abs(z) + abs(a.at(m + 1, m + 1)));
                if u <= f64::EPSILON * v {
                    break;
                }
                m -= 1;
            }
            for i in m + 2..=nnu {
                *a.at_mut(i, i - 2) = 0.0;
                if i != m + 2 {
                    *a.at_mut(i, i - 3) = 0.0;
                }
            }
            let mut k = m;
            while k + 1 <= nnu {
                if k != m {
                    p = a.at(k, k - 1);
                    q = a.at(k + 1, k - 1);
                    r = 0.0;
                    if k + 1 != nnu {
                        r = a.at(k + 2, k - 1);
                    }
                    x = abs(p) + abs(q) + abs(r);
                    if x != 0.0 {
                        p /= x;
                        q /= x;
                        r /= x;
                    }
                }
                let s = sign(sqrt(p * p + q * q + r * r), p);
                if s != 0.0 {
                    if k == m {
                        if l != m {
                            *a.at_mut(k, k - 1) = -a.at(k, k - 1);
                        }
                    } else {
                        *a.at_mut(k, k - 1) = -s * x;
                    }
                    p += s;
                    x = p / s;
                    y = q / s;
                    let z = r / s;
                    q /= p;
                    r /= p;
                    for j in k..=nnu {
                        let mut pp = a.at(k, j) + q * a.at(k + 1, j);
                        if k + 1 != nnu {
                            pp += r * a.at(k + 2, j);
                            *a.at_mut(k + 2, j) -= pp * z;
                        }
                        *a.at_mut(k + 1, j) -= pp * y;
                        *a.at_mut(k, j) -= pp * x;
                    }
                    let mmin = if nnu < k + 3 { nnu } else { k + 3 };
                    for i in l..=mmin {
                        let mut pp = x * a.at(i, k) + y * a.at(i, k + 1);
                        if k + 1 != nnu {
                            pp += z * a.at(i, k + 2);
                            *a.at_mut(i, k + 2) -= pp * r;
                        }
                        *a.at_mut(i, k + 1) -= pp * q;
                        *a.at_mut(i, k) -= pp;
                    }
                }
                k += 1;
            }
        }
    }
    Ok(wr.iter().zip(&wi).map(|(&re, &im)| Complex64::new(re, im)).collect())
}

/// Eigenvalues of a Hermitian matrix given row-major (only the lower triangle
/// is read), ascending. Householder reflections bring it to Hermitian
/// tridiagonal form; a diagonal unitary similarity makes the off-diagonal
/// real, and implicit QL finishes.
pub fn hermitian_eigenvalues(dim: usize, mut a: Vec<Complex64>) -> Result<Vec<f64>> {
    assert_eq!(a.len(), dim * dim);
    let n = dim;
    // Mirror the lower triangle so the working matrix is exactly Hermitian.
    for i in 0..n {
        a[i * n + i] = Complex64::new(a[i * n + i].re, 0.0);
        for j in 0..i {
            a[j * n + i] = a[i * n + j].conj();
        }
    }
    let mut diag = vec![0.0; n];
    let mut off = vec![0.0; n.saturating_sub(1)];
    let mut v = vec![Complex64::new(0.0, 0.0); n];
    let mut p = vec![Complex64::new(0.0, 0.0); n];
    for k in 0..n.saturating_sub(1) {
        let mut xnorm2 = 0.0;
        for i in k + 1..n {
            xnorm2 += a[i * n + k].norm_sqr();
        }
        let xnorm = sqrt(xnorm2);
        let x0 = a[(k + 1) * n + k];
        if xnorm == 0.0 || k + 2 == n {
            off[k] = x0.norm();
            continue;
        }
        let phase = if x0.norm() == 0.0 { Complex64::new(1.0, 0.0) } else { x0 / x0.norm() };
        let alpha = -phase * xnorm;
        for i in 0..n {
            v[i] = Complex64::new(0.0, 0.0);
        }
        v[k + 1] = x0 - alpha;
        for i in k + 2..n {
            v[i] = a[i * n + k];
        }
        let vn2: f64 = v[k + 1..].iter().map(|z| z.norm_sqr()).sum();
        if vn2 == 0.0 {
            off[k] = x0.norm();
            continue;
        }
        let vn = sqrt(vn2);
        for z in v[k + 1..].iter_mut() {
            *z /= vn;
        }
        // p = A v on the trailing block, beta = v^H p (real).
        for i in k + 1..n {
            let mut s = Complex64::new(0.0, 0.0);
            for j in k + 1..n {
                s += a[i * n + j] * v[j];
            }
            p[i] = s;
        }
        let mut beta = 0.0;
        for i in k + 1..n {
            beta += (v[i].conj() * p[i]).re;
        }
        for i in k + 1..n {
            p[i] -= v[i] * beta;
        }
        // A <- A - 2 v w^H - 2 w v^H on the trailing block.
        for i in k + 1..n {
            for j in k + 1..=i {
                let upd = v[i] * p[j].conj() + p[i] * v[j].conj();
                a[i * n + j] -= upd * 2.0;
            }
        }
        for i in k + 1..n {
            for j in i + 1..n {
                a[i * n + j] = a[j * n + i].conj();
            }
        }
        off[k] = alpha.norm();
        a[(k + 1) * n + k] = alpha;
        for i in k + 2..n {
            a[i * n + k] = Complex64::new(0.0, 0.0);
        }
    }
    for i in 0..n {
        diag[i] = a[i * n + i].re;
    }
    symmetric_tridiagonal_eigenvalues(&diag, &off)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tridiagonal_two_by_two() {
        let ev = symmetric_tridiagonal_eigenvalues(&[0.0, 0.0], &[libm::sqrt(0.5)]).unwrap();
        assert!((ev[0] + libm::sqrt(0.5)).abs() < 1e-15 && (ev[1] - libm::sqrt(0.5)).abs() < 1e-15);
    }

    #[test]
    fn tridiagonal_laplacian() {
        let n = 40;
        let ev = symmetric_tridiagonal_eigenvalues(&vec![2.0; n], &vec![-1.0; n - 1]).unwrap();
        for (j, e) in ev.iter().enumerate() {
            let want = 2.0 - 2.0 * libm::cos(core::f64::consts::PI * (j + 1) as f64 / (n + 1) as f64);
            assert!((e - want).abs() < 1e-13);
        }
    }

    #[test]
    fn qr_on_companion_matrix() {
        // x^3 - 6x^2 + 11x - 6 = (x-1)(x-2)(x-3)
        let h = Dense::new(3, vec![6.0, -11.0, 6.0, 1.0, 0.0, 0.0, 0.0, 1.0, 0.0]);
        let mut ev = hessenberg_qr_eigenvalues(&h, 300).unwrap();
        ev.sort_by(|a, b| a.re.total_cmp(&b.re));
        for (e, want) in ev.iter().zip([1.0, 2.0, 3.0]) {
            assert!((e.re - want).abs() < 1e-12 && e.im.abs() < 1e-12);
        }
    }

    #[test]
    fn qr_finds_complex_pair() {
        let h = Dense::new(2, vec![0.0, -1.0, 1.0, 0.0]);
        let ev = hessenberg_qr_eigenvalues(&h, 100).unwrap();
        assert!(ev.iter().all(|z| (z.im.abs() - 1.0).abs() < 1e-15 && z.re.abs() < 1e-15));
    }

    #[test]
    fn hessenberg_reduction_preserves_trace() {
        let mut d = Dense::new(4, (0..16).map(|i| ((i * 37) % 11) as f64 - 5.0).collect());
        let tr: f64 = (0..4).map(|i| d.at(i, i)).sum();
        d.reduce_to_hessenberg();
        assert!(d.is_upper_hessenberg());
        let tr2: f64 = (0..4).map(|i| d.at(i, i)).sum();
        assert!((tr - tr2).abs() < 1e-12);
    }

    #[test]
    fn hermitian_diagonal_phase() {
        // [[1, i], [-i, 1]] has eigenvalues 0 and 2.
        let a = vec![
            Complex64::new(1.0, 0.0),
            Complex64::new(0.0, 1.0),
            Complex64::new(0.0, -1.0),
            Complex64::new(1.0, 0.0),
        ];
        let ev = hermitian_eigenvalues(2, a).unwrap();
        assert!(ev[0].abs() < 1e-15 && (ev[1] - 2.0).abs() < 1e-15);
    }
}
