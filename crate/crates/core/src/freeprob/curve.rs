//! Algebraic curves `P(z, w) = 0` whose physical branch `w = G(z) ~ 1/z` is a
//! Cauchy–Stieltjes transform, with branch continuation, Stieltjes inversion
//! and contour-integral moments.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt::Debug;
use core::ops::Neg;

use num_complex::Complex64;
use num_rational::Rational64;
use num_traits::Num;

use crate::error::invalid;
use crate::math::{abs, cos, sin, sqrt, PI};
use crate::measures::MomentSequence;
use crate::roots::{horner, poly_roots};
use crate::{Error, Result};

/// Coefficient field for curves: exact rationals or floats.
pub trait CurveScalar: Clone + Debug + PartialEq + Num + Neg<Output = Self> {
    fn to_f64(&self) -> f64;
}

impl CurveScalar for f64 {
    fn to_f64(&self) -> f64 {
        *self
    }
}

impl CurveScalar for Rational64 {
    fn to_f64(&self) -> f64 {
        *self.numer() as f64 / *self.denom() as f64
    }
}

/// Dense bivariate polynomial, `coeffs[i][j]` multiplies `z^i w^j`.
#[derive(Debug, Clone, PartialEq)]
pub struct BiPoly<T> {
    coeffs: Vec<Vec<T>>,
}

impl<T: CurveScalar> BiPoly<T> {
    pub fn constant(c: T) -> Self {
        Self { coeffs: vec![vec![c]] }
    }

    /// `c00 + c10 z + c01 w + c11 z w`.
    pub fn bilinear(c00: T, c10: T, c01: T, c11: T) -> Self {
        Self { coeffs: vec![vec![c00, c01], vec![c10, c11]] }
    }

    pub fn coeffs(&self) -> &[Vec<T>] {
        &self.coeffs
    }

    pub fn deg_z(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn deg_w(&self) -> usize {
        self.coeffs[0].len() - 1
    }

    fn zeros(dz: usize, dw: usize) -> Self {
        Self { coeffs: vec![vec![T::zero(); dw + 1]; dz + 1] }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zeros(self.deg_z() + other.deg_z(), self.deg_w() + other.deg_w());
        for (i, row) in self.coeffs.iter().enumerate() {
            for (j, a) in row.iter().enumerate() {
                if a.is_zero() {
                    continue;
                }
                for (k, orow) in other.coeffs.iter().enumerate() {
                    for (l, b) in orow.iter().enumerate() {
                        let t = out.coeffs[i + k][j + l].clone() + a.clone() * b.clone();
                        out.coeffs[i + k][j + l] = t;
                    }
                }
            }
        }
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = Self::zeros(self.deg_z().max(other.deg_z()), self.deg_w().max(other.deg_w()));
        for src in [self, other] {
            for (i, row) in src.coeffs.iter().enumerate() {
                for (j, a) in row.iter().enumerate() {
                    out.coeffs[i][j] = out.coeffs[i][j].clone() + a.clone();
                }
            }
        }
        out.trim()
    }

    pub fn scale(&self, c: &T) -> Self {
        Self { coeffs: self.coeffs.iter().map(|r| r.iter().map(|a| a.clone() * c.clone()).collect()).collect() }
    }

    fn trim(mut self) -> Self {
        while self.coeffs.len() > 1 && self.coeffs.last().unwrap().iter().all(|c| c.is_zero()) {
            self.coeffs.pop();
        }
        while self.coeffs[0].len() > 1 && self.coeffs.iter().all(|r| r.last().unwrap().is_zero()) {
            for r in self.coeffs.iter_mut() {
                r.pop();
            }
        }
        self
    }

    pub fn to_f64(&self) -> BiPoly<f64> {
        BiPoly { coeffs: self.coeffs.iter().map(|r| r.iter().map(|c| c.to_f64()).collect()).collect() }
    }
}

/// Which index the factors of the second product carry.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum FactorIndexing {
    /// Factors indexed by the product variable `j` (the consistent reading).
    #[default]
    ProductIndex,
    /// Factors indexed by the outer sum variable `i`, i.e. `L_i^(r-1)`.
    SumIndex,
}

/// Curve with its physical branch data.
#[derive(Debug, Clone, PartialEq)]
pub struct AlgebraicCurve<T> {
    poly: BiPoly<T>,
    numeric: BiPoly<f64>,
    support_bound: f64,
}

impl<T: CurveScalar> AlgebraicCurve<T> {
    /// Wraps a polynomial; `support_bound` must bound `|x|` on the support of
    /// the measure whose Cauchy transform is the physical branch.
    pub fn new(poly: BiPoly<T>, support_bound: f64) -> Result<Self> {
        let numeric = poly.to_f64();
        if numeric.deg_w() == 0 {
            return Err(invalid("curve", "P does not depend on w"));
        }
        Ok(Self { poly, numeric, support_bound })
    }

    pub fn poly(&self) -> &BiPoly<T> {
        &self.poly
    }

    pub fn numeric(&self) -> &BiPoly<f64> {
        &self.numeric
    }

    pub fn support_bound(&self) -> f64 {
        self.support_bound
    }

    /// Coefficients of `P(z, .)` as a polynomial in `w`.
    pub fn w_coefficients(&self, z: Complex64) -> Vec<Complex64> {
        let c = &self.numeric.coeffs;
        let dw = self.numeric.deg_w();
        (0..=dw)
            .map(|j| {
                let mut acc = Complex64::new(0.0, 0.0);
                for row in c.iter().rev() {
                    acc = acc * z + row[j];
                }
                acc
            })
            .collect()
    }

    /// `P(z, w)`.
    pub fn eval(&self, z: Complex64, w: Complex64) -> Complex64 {
        horner(&self.w_coefficients(z), w).0
    }
}

fn check_weights(q: &[f64], n: usize) -> Result<()> {
    if q.len() != n || n == 0 {
        return Err(invalid("curve weights", "q and a must have the same nonzero length"));
    }
    if q.iter().any(|x| !(*x > 0.0)) || abs(q.iter().sum::<f64>() - 1.0) > 1e-12 {
        return Err(invalid("curve weights", "q must be positive and sum to 1"));
    }
    Ok(())
}

fn distinct<T: PartialEq>(a: &[T]) -> bool {
    a.iter().enumerate().all(|(i, x)| a[..i].iter().all(|y| y != x))
}

/// `w prod_i L_i - sum_i q_i prod_(j != i) L_j` (or `L_i^(r-1)`).
fn assemble<T: CurveScalar>(q: &[T], factors: &[BiPoly<T>], indexing: FactorIndexing) -> BiPoly<T> {
    let r = factors.len();
    let w = BiPoly::bilinear(T::zero(), T::zero(), T::one(), T::zero());
    let mut all = BiPoly::constant(T::one());
    for f in factors {
        all = all.mul(f);
    }
    let mut p = w.mul(&all);
    for i in 0..r {
        let mut prod = BiPoly::constant(T::one());
        for j in 0..r {
            if j != i {
                let f = match indexing {
                    FactorIndexing::ProductIndex => &factors[j],
                    FactorIndexing::SumIndex => &factors[i],
                };
                prod = prod.mul(f);
            }
        }
        p = p.add(&prod.scale(&-q[i].clone()));
    }
    p
}

/// Curve of `semicircle ⊞ sum_i q_i delta_(a_i)`:
/// `w prod_i (z - w - a_i) - sum_i q_i prod_(j != i)(z - w - a_j)`.
pub fn curve_hermite<T: CurveScalar>(q: &[T], a: &[T], indexing: FactorIndexing) -> Result<AlgebraicCurve<T>> {
    let qf: Vec<f64> = q.iter().map(|x| x.to_f64()).collect();
    check_weights(&qf, a.len())?;
    if !distinct(a) {
        return Err(invalid("curve locations", "a must be pairwise distinct"));
    }
    let factors: Vec<BiPoly<T>> =
        a.iter().map(|ai| BiPoly::bilinear(-ai.clone(), T::one(), -T::one(), T::zero())).collect();
    let bound = a.iter().map(|x| abs(x.to_f64())).fold(0.0, f64::max) + 2.0;
    AlgebraicCurve::new(assemble(q, &factors, indexing), bound)
}

/// Curve of `rho_alpha ⊠ sum_i q_i delta_(1/a_i)`, where `rho_alpha` has
/// S-transform `1/(1 + alpha z)` (unit-mean Marchenko–Pastur of ratio alpha):
/// `w prod_i (z - (1 - alpha + alpha z w)/a_i) - sum_i q_i prod_(j != i)(...)`.
pub fn curve_laguerre<T: CurveScalar>(
    q: &[T],
    a: &[T],
    alpha: &T,
    indexing: FactorIndexing,
) -> Result<AlgebraicCurve<T>> {
    let qf: Vec<f64> = q.iter().map(|x| x.to_f64()).collect();
    check_weights(&qf, a.len())?;
    if a.iter().any(|x| !(x.to_f64() > 0.0)) || !distinct(a) {
        return Err(invalid("curve locations", "a must be positive and pairwise distinct"));
    }
    if !(alpha.to_f64() >= 0.0) {
        return Err(invalid("curve alpha", "alpha must be >= 0"));
    }
    let factors: Vec<BiPoly<T>> = a
        .iter()
        .map(|ai| {
            let inv = T::one() / ai.clone();
            BiPoly::bilinear(
                -(T::one() - alpha.clone()) * inv.clone(),
                T::one(),
                T::zero(),
                -alpha.clone() * inv,
            )
        })
        .collect();
    let af = alpha.to_f64();
    let inv_max = a.iter().map(|x| 1.0 / x.to_f64()).fold(0.0, f64::max);
    let bound = (1.0 + sqrt(af)) * (1.0 + sqrt(af)) * inv_max;
    AlgebraicCurve::new(assemble(q, &factors, indexing), bound)
}

/// Curve of the multiple Laguerre ensemble limit `MP(1 + alpha) ⊠
/// sum_i q_i delta_(1/a_i)`: [`curve_laguerre`] at ratio `1/(1+alpha)` and
/// locations `a_i/(1+alpha)`.
pub fn curve_laguerre_ensemble<T: CurveScalar>(q: &[T], a: &[T], alpha: &T) -> Result<AlgebraicCurve<T>> {
    let s = T::one() + alpha.clone();
    let a2: Vec<T> = a.iter().map(|x| x.clone() / s.clone()).collect();
    curve_laguerre(q, &a2, &(T::one() / s), FactorIndexing::ProductIndex)
}

fn nearest(roots: &[Complex64], target: Complex64) -> (usize, f64, f64) {
    let mut best = (0, f64::INFINITY, f64::INFINITY);
    for (i, r) in roots.iter().enumerate() {
        let d = (r - target).norm();
        if d < best.1 {
            best = (i, d, best.1);
        } else if d < best.2 {
            best.2 = d;
        }
    }
    best
}

/// Physical branch `G(z)` by homotopy continuation.
///
/// The path runs vertically from `z0 = Re z + i s Y` (same half-plane as `z`,
/// `Y` a few support radii out) where `G(z0) ≈ 1/z0`, shrinking the distance
/// to `z` geometrically. A step is accepted when the root nearest the
/// previous value is at most a quarter of the distance to the next root;
/// otherwise the step is halved.
pub fn solve_g<T: CurveScalar>(curve: &AlgebraicCurve<T>, z: Complex64) -> Result<Complex64> {
    let s = if z.im < 0.0 { -1.0 } else { 1.0 };
    let y0 = 4.0 * (curve.support_bound + 1.0 + z.norm());
    let fail = || Error::ContinuationFailed { re: z.re, im: z.im };
    let point = |dist: f64| Complex64::new(z.re, z.im + s * dist);
    let mut dist = y0 - abs(z.im);
    let z0 = point(dist);
    let mut roots = poly_roots(&curve.w_coefficients(z0), None)?;
    let (idx, d1, d2) = nearest(&roots, z0.inv());
    if roots.is_empty() || d1 > 0.25 * d2 {
        return Err(fail());
    }
    let mut w = roots[idx];
    let mut h = 0.5;
    let landing = 1e-9 * (1.0 + z.norm());
    while dist > 0.0 {
        let next = if dist <= landing { 0.0 } else { dist * (1.0 - h) };
        let zn = point(next);
        let trial = poly_roots(&curve.w_coefficients(zn), Some(&roots)).or_else(|_| poly_roots(&curve.w_coefficients(zn), None));
        let ok = match trial {
            Ok(r) if !r.is_empty() => {
                let (i, d1, d2) = nearest(&r, w);
                if d1 <= 0.25 * d2 {
                    w = r[i];
                    roots = r;
                    true
                } else {
                    false
                }
            }
            _ => false,
        };
        if ok {
            dist = next;
            h = (h * 1.5).min(0.5);
        } else {
            h *= 0.5;
            if h < 1e-12 {
                return Err(fail());
            }
        }
    }
    // Newton polish at the target.
    let c = curve.w_coefficients(z);
    for _ in 0..3 {
        let (p, d) = horner(&c, w);
        if d.norm_sqr() == 0.0 {
            break;
        }
        let step = p / d;
        w -= step;
        if step.norm() <= 1e-16 * w.norm() {
            break;
        }
    }
    Ok(w)
}

/// `-Im G(x + i epsilon) / pi`.
pub fn stieltjes_density<T: CurveScalar>(curve: &AlgebraicCurve<T>, x: f64, epsilon: f64) -> Result<f64> {
    if !(epsilon > 0.0) {
        return Err(invalid("epsilon", "must be positive"));
    }
    Ok(-solve_g(curve, Complex64::new(x, epsilon))?.im / PI)
}

/// Richardson combination `2 f(epsilon/2) - f(epsilon)` of the smoothed
/// density, removing the first-order smoothing error.
pub fn stieltjes_density_extrapolated<T: CurveScalar>(curve: &AlgebraicCurve<T>, x: f64, epsilon: f64) -> Result<f64> {
    let a = stieltjes_density(curve, x, epsilon)?;
    let b = stieltjes_density(curve, x, 0.5 * epsilon)?;
    Ok(2.0 * b - a)
}

/// Number of trapezoid nodes on the upper half circle.
const CONTOUR_NODES: usize = 256;

fn contour_moments<T: CurveScalar>(curve: &AlgebraicCurve<T>, radius: f64, order: usize) -> Result<Vec<f64>> {
    let m = CONTOUR_NODES;
    let mut sums = vec![crate::math::CompensatedSum::new(); order + 1];
    for j in 0..m {
        let theta = PI * (j as f64 + 0.5) / m as f64;
        let z = Complex64::new(radius * cos(theta), radius * sin(theta));
        let g = solve_g(curve, z)?;
        let mut zp = z * g;
        for s in sums.iter_mut() {
            s.add(zp.re);
            zp *= z;
        }
    }
    Ok(sums.iter().map(|s| s.value() / m as f64).collect())
}

/// Moments of the branch measure by trapezoid integration of
/// `z^l G(z) / (2 pi i)` on circles outside the support. The radius starts at
/// `1.25 * bound + 0.5` and doubles until two radii agree to 1e-9.
pub fn curve_moments<T: CurveScalar>(curve: &AlgebraicCurve<T>, order: usize) -> Result<MomentSequence> {
    let mut radius = 1.25 * curve.support_bound + 0.5;
    let mut prev = contour_moments(curve, radius, order)?;
    let mut worst = 0;
    for _ in 0..4 {
        radius *= 2.0;
        let next = contour_moments(curve, radius, order)?;
        match prev.iter().zip(&next).position(|(a, b)| abs(a - b) > 1e-9 * abs(*a).max(1.0)) {
            None => return MomentSequence::new(prev),
            Some(l) => worst = l,
        }
        prev = next;
    }
    Err(Error::ContourNoAgreement { order: worst })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> Rational64 {
        Rational64::new(n, d)
    }

    #[test]
    fn semicircle_curve_coefficients() {
        let c = curve_hermite(&[r(1, 1)], &[r(0, 1)], FactorIndexing::ProductIndex).unwrap();
        // w (z - w) - 1 = -w^2 + z w - 1
        let p = c.poly().coeffs();
        assert_eq!(p[0], [r(-1, 1), r(0, 1), r(-1, 1)]);
        assert_eq!(p[1], [r(0, 1), r(1, 1), r(0, 1)]);
    }

    #[test]
    fn semicircle_branch_values() {
        let c = curve_hermite(&[1.0], &[0.0], FactorIndexing::ProductIndex).unwrap();
        let g = solve_g(&c, Complex64::new(3.0, 0.0)).unwrap();
        assert!((g - Complex64::new((3.0 - sqrt(5.0)) / 2.0, 0.0)).norm() < 1e-14);
        let big = Complex64::new(1e6, 0.0);
        assert!((solve_g(&c, big).unwrap() - big.inv()).norm() < 1e-5);
        let d = stieltjes_density(&c, 0.0, 1e-9).unwrap();
        assert!((d - 1.0 / PI).abs() < 1e-8);
    }

    #[test]
    fn mp_curve_is_the_standard_quadratic() {
        for alpha in [r(1, 1), r(1, 3), r(5, 2)] {
            let c = curve_laguerre(&[r(1, 1)], &[r(1, 1)], &alpha, FactorIndexing::ProductIndex).unwrap();
            // -(alpha z w^2 - (z - 1 + alpha) w + 1)
            let p = c.poly().coeffs();
            assert_eq!(p[0][0], r(-1, 1));
            assert_eq!(p[0][1], alpha - r(1, 1));
            assert_eq!(p[1][1], r(1, 1));
            assert_eq!(p[1][2], -alpha);
        }
    }

    #[test]
    fn contour_moments_of_semicircle() {
        let c = curve_hermite(&[1.0], &[0.0], FactorIndexing::ProductIndex).unwrap();
        let m = curve_moments(&c, 6).unwrap();
        for (got, want) in m.values().iter().zip([1.0, 0.0, 1.0, 0.0, 2.0, 0.0, 5.0]) {
            assert!((got - want).abs() < 1e-10, "{got} vs {want}");
        }
    }
}
