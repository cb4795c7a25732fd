//! Truncated formal power series and the R/S-transform pipelines.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::invalid;
use crate::measures::MomentSequence;
use crate::{Error, Result};

/// `sum_i coeffs[i] x^(offset + i)`, truncated after `coeffs.len()` terms.
#[derive(Debug, Clone, PartialEq)]
pub struct FormalSeries {
    pub coeffs: Vec<f64>,
    pub offset: i32,
}

impl FormalSeries {
    pub fn new(coeffs: Vec<f64>, offset: i32) -> Self {
        Self { coeffs, offset }
    }

    /// Truncation order: index of the last stored power relative to `offset`.
    pub fn order(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }
}

/// Product of power series, truncated to `len` terms.
pub fn mul(a: &[f64], b: &[f64], len: usize) -> Vec<f64> {
    let mut out = vec![0.0; len];
    for (i, &x) in a.iter().enumerate().take(len) {
        if x == 0.0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate().take(len - i) {
            out[i + j] += x * y;
        }
    }
    out
}

/// `1 / a` as a power series; needs `a[0] != 0`.
pub fn reciprocal(a: &[f64], len: usize) -> Result<Vec<f64>> {
    if a.is_empty() || a[0] == 0.0 {
        return Err(Error::ZeroLeadingCoefficient);
    }
    let mut out = vec![0.0; len];
    out[0] = 1.0 / a[0];
    for k in 1..len {
        let mut s = 0.0;
        for j in 1..=k.min(a.len() - 1) {
            s += a[j] * out[k - j];
        }
        out[k] = -s / a[0];
    }
    Ok(out)
}

/// `f(g(x))` for `g(0) = 0`, truncated to `len` terms.
pub fn compose(f: &[f64], g: &[f64], len: usize) -> Vec<f64> {
    debug_assert!(g.first().map_or(true, |c| *c == 0.0));
    let mut out = vec![0.0; len];
    let mut power = vec![0.0; len];
    power[0] = 1.0;
    for (k, &c) in f.iter().enumerate() {
        if k >= len {
            break;
        }
        if c != 0.0 {
            for i in 0..len {
                out[i] += c * power[i];
            }
        }
        power = mul(&power, g, len);
    }
    out
}

/// Compositional inverse of `f = f1 x + f2 x^2 + ...` (`f[0] = 0`,
/// `f[1] != 0`), to the same number of terms.
pub fn reversion(f: &[f64]) -> Result<Vec<f64>> {
    let len = f.len();
    if len < 2 || f[1] == 0.0 {
        return Err(Error::ZeroLeadingCoefficient);
    }
    if f[0] != 0.0 {
        return Err(invalid("series", "reversion needs a vanishing constant term"));
    }
    let mut g = vec![0.0; len];
    g[1] = 1.0 / f[1];
    for k in 2..len {
        let e = compose(f, &g, k + 1);
        g[k] -= e[k] / f[1];
    }
    Ok(g)
}

/// Compositional inverse of a series with offset 1 and nonzero leading term.
pub fn series_compose_inverse(f: &FormalSeries) -> Result<FormalSeries> {
    if f.offset != 1 {
        return Err(invalid("series", "composition inverse needs offset 1 (no constant term)"));
    }
    let mut full = vec![0.0];
    full.extend_from_slice(&f.coeffs);
    let g = reversion(&full)?;
    Ok(FormalSeries::new(g[1..].to_vec(), 1))
}

/// Cauchy transform in the variable `u = 1/z`: `sum_k m_k u^(k+1)`.
pub fn cauchy_series(mu: &MomentSequence) -> FormalSeries {
    FormalSeries::new(mu.values().to_vec(), 1)
}

fn check_order(mu: &MomentSequence, order: usize) -> Result<()> {
    if mu.order() < order {
        return Err(invalid("moment sequence", "shorter than the truncation order"));
    }
    Ok(())
}

/// Inverse of the Cauchy transform: `K(w) = 1/w + R(w)`, offset -1,
/// `order + 1` coefficients (powers `w^-1 .. w^(order-1)`).
pub fn k_transform(mu: &MomentSequence, order: usize) -> Result<FormalSeries> {
    check_order(mu, order)?;
    let mut g = vec![0.0; order + 2];
    g[1..].copy_from_slice(&mu.values()[..=order]);
    let h = reversion(&g)?;
    let c = reciprocal(&h[1..], order + 1)?;
    Ok(FormalSeries::new(c, -1))
}

/// R-transform `R(w) = sum_j kappa_(j+1) w^j`, `order` coefficients.
pub fn r_transform(mu: &MomentSequence, order: usize) -> Result<FormalSeries> {
    let k = k_transform(mu, order)?;
    Ok(FormalSeries::new(k.coeffs[1..].to_vec(), 0))
}

/// Moments `m_0..m_order` from an R-transform with at least `order` terms.
pub fn moments_from_r(r: &[f64], order: usize) -> Result<MomentSequence> {
    let mut c = vec![0.0; order + 1];
    c[0] = 1.0;
    for (j, v) in r.iter().take(order).enumerate() {
        c[j + 1] = *v;
    }
    let inv = reciprocal(&c, order + 1)?;
    let mut h = vec![0.0; order + 2];
    h[1..].copy_from_slice(&inv);
    let g = reversion(&h)?;
    MomentSequence::new(g[1..].to_vec())
}

/// Moments of `mu ⊞ nu` to order `order` (R-transforms add).
pub fn free_add(mu: &MomentSequence, nu: &MomentSequence, order: usize) -> Result<MomentSequence> {
    if order < 1 {
        return Err(invalid("truncation order", "free_add needs L >= 1"));
    }
    let a = r_transform(mu, order)?;
    let b = r_transform(nu, order)?;
    let sum: Vec<f64> = a.coeffs.iter().zip(&b.coeffs).map(|(x, y)| x + y).collect();
    moments_from_r(&sum, order)
}

/// S-transform `S(z) = (1+z)/z * chi(z)` with `chi` the inverse of
/// `psi(z) = sum_(k>=1) m_k z^k`; `order` coefficients.
pub fn s_transform(mu: &MomentSequence, order: usize) -> Result<FormalSeries> {
    check_order(mu, order)?;
    let m1 = mu.values().get(1).copied().unwrap_or(0.0);
    if !(m1 > 0.0) {
        return Err(invalid("measure", "S-transform needs m1 > 0 (measure different from delta_0)"));
    }
    let mut psi = vec![0.0; order + 1];
    psi[1..].copy_from_slice(&mu.values()[1..=order]);
    let chi = reversion(&psi)?;
    let s = mul(&[1.0, 1.0], &chi[1..], order);
    Ok(FormalSeries::new(s, 0))
}

/// Moments `m_0..m_order` from an S-transform with `order` coefficients.
pub fn moments_from_s(s: &[f64], order: usize) -> Result<MomentSequence> {
    let geometric: Vec<f64> = (0..order).map(|j| if j % 2 == 0 { 1.0 } else { -1.0 }).collect();
    let t = mul(s, &geometric, order);
    let mut chi = vec![0.0; order + 1];
    chi[1..].copy_from_slice(&t);
    let psi = reversion(&chi)?;
    let mut m = psi;
    m[0] = 1.0;
    MomentSequence::new(m)
}

/// Moments of `mu ⊠ nu` to order `order` (S-transforms multiply).
pub fn free_mul(mu: &MomentSequence, nu: &MomentSequence, order: usize) -> Result<MomentSequence> {
    if order < 1 {
        return Err(invalid("truncation order", "free_mul needs L >= 1"));
    }
    let a = s_transform(mu, order)?;
    let b = s_transform(nu, order)?;
    moments_from_s(&mul(&a.coeffs, &b.coeffs, order), order)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measures::{mp_moment, semicircle_moment, AtomicMeasure};

    fn close(a: &[f64], b: &[f64], tol: f64) -> bool {
        a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).abs() <= tol * (1.0 + y.abs()))
    }

    #[test]
    fn inverse_of_identity() {
        let id = FormalSeries::new(vec![1.0, 0.0, 0.0, 0.0], 1);
        assert_eq!(series_compose_inverse(&id).unwrap(), id);
        assert!(series_compose_inverse(&FormalSeries::new(vec![0.0, 1.0], 1)).is_err());
    }

    #[test]
    fn r_transform_of_point_mass_is_constant() {
        let a = 1.5;
        let delta = AtomicMeasure::new(vec![(a, 1.0)]).unwrap().moments(8);
        let r = r_transform(&delta, 8).unwrap();
        assert!(close(&r.coeffs, &[a, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0], 1e-14));
        let k = k_transform(&delta, 4).unwrap();
        assert_eq!(k.offset, -1);
        assert!(close(&k.coeffs[..2], &[1.0, a], 1e-14));
    }

    #[test]
    fn semicircle_r_transform() {
        let sc = MomentSequence::from_fn(4, semicircle_moment).unwrap();
        let r = r_transform(&sc, 4).unwrap();
        assert!(close(&r.coeffs, &[0.0, 1.0, 0.0, 0.0], 1e-14));
    }

    #[test]
    fn free_add_examples() {
        let sc = MomentSequence::from_fn(8, semicircle_moment).unwrap();
        let nu = AtomicMeasure::from_parts(&[1.0, -1.0], &[0.5, 0.5]).unwrap().moments(8);
        let m = free_add(&sc, &nu, 8).unwrap();
        assert!((m.values()[2] - 2.0).abs() < 1e-12 && (m.values()[4] - 7.0).abs() < 1e-12);
        let da = AtomicMeasure::new(vec![(0.5, 1.0)]).unwrap().moments(6);
        let db = AtomicMeasure::new(vec![(-2.0, 1.0)]).unwrap().moments(6);
        let want = AtomicMeasure::new(vec![(-1.5, 1.0)]).unwrap().moments(6);
        assert!(close(free_add(&da, &db, 6).unwrap().values(), want.values(), 1e-12));
        assert!(free_add(&da, &db, 0).is_err());
    }

    #[test]
    fn free_mul_examples() {
        let mp = MomentSequence::from_fn(6, |l| mp_moment(1.0, l)).unwrap();
        let one = AtomicMeasure::new(vec![(1.0, 1.0)]).unwrap().moments(6);
        let out = free_mul(&mp, &one, 6).unwrap();
        assert!(close(&out.values()[..4], &[1.0, 1.0, 2.0, 5.0], 1e-12));
        let dil = free_mul(&mp, &AtomicMeasure::new(vec![(3.0, 1.0)]).unwrap().moments(6), 6).unwrap();
        let want: Vec<f64> = (0..=6).map(|l| mp.values()[l] * 3f64.powi(l as i32)).collect();
        assert!(close(dil.values(), &want, 1e-12));
        let zero = AtomicMeasure::new(vec![(0.0, 1.0)]).unwrap().moments(6);
        assert!(free_mul(&mp, &zero, 6).is_err());
    }
}
