//! Closed-form limit laws: semicircle, free Poisson (Marchenko–Pastur),
//! arcsine/equilibrium measures of intervals, mixtures of arcsine laws and
//! finite atomic measures.

use alloc::boxed::Box;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::error::invalid;
use crate::math::{abs, binomial, powi, sqrt, CompensatedSum, PI};
use crate::quadrature::gauss_legendre;
use crate::Result;

/// Moments m_0..m_L of a probability measure; `m_0 = 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct MomentSequence {
    values: Vec<f64>,
}

impl MomentSequence {
    /// Validates `values[0] == 1` (to 1e-12) and finiteness.
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(invalid("moment sequence", "empty"));
        }
        if abs(values[0] - 1.0) > 1e-12 {
            return Err(invalid("moment sequence", format_args!("m0 = {} != 1", values[0])));
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(invalid("moment sequence", format_args!("m{i} is not finite")));
        }
        Ok(Self { values })
    }

    /// Builds the sequence `m_l = f(l)` for `l = 0..=order`.
    pub fn from_fn(order: usize, f: impl FnMut(usize) -> f64) -> Result<Self> {
        Self::new((0..=order).map(f).collect())
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Highest moment index L.
    pub fn order(&self) -> usize {
        self.values.len() - 1
    }

    pub fn get(&self, ell: usize) -> Option<f64> {
        self.values.get(ell).copied()
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.values
    }

    /// The first `order + 1` moments.
    pub fn truncated(&self, order: usize) -> Self {
        Self { values: self.values[..=order.min(self.order())].to_vec() }
    }
}

/// Equilibrium (arcsine) measure of `[alpha, beta]`, density
/// `1 / (pi sqrt((beta - x)(x - alpha)))`. A point mass when the ends coincide.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ArcsineLaw {
    alpha: f64,
    beta: f64,
}

impl ArcsineLaw {
    /// Endpoints may be given in either order.
    pub fn new(alpha: f64, beta: f64) -> Result<Self> {
        if !alpha.is_finite() || !beta.is_finite() {
            return Err(invalid("arcsine endpoints", "must be finite"));
        }
        Ok(Self { alpha: alpha.min(beta), beta: alpha.max(beta) })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }
}

/// Standard semicircle law on `[-2, 2]`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct SemicircleLaw;

/// Free Poisson law of rate `alpha`: an atom `max(1 - alpha, 0)` at 0 plus the
/// density `sqrt((x+ - x)(x - x-)) / (2 pi x)` on `[(1-sqrt a)^2, (1+sqrt a)^2]`.
/// Its mean is `alpha`, and the rate-1 law has Catalan moments.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MarchenkoPasturLaw {
    alpha: f64,
}

impl MarchenkoPasturLaw {
    pub fn new(alpha: f64) -> Result<Self> {
        if !(alpha >= 0.0) || !alpha.is_finite() {
            return Err(invalid("Marchenko-Pastur rate", format_args!("{alpha} (need >= 0)")));
        }
        Ok(Self { alpha })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    /// Support edges `((1 - sqrt a)^2, (1 + sqrt a)^2)` of the continuous part.
    pub fn edges(&self) -> (f64, f64) {
        let s = sqrt(self.alpha);
        ((1.0 - s) * (1.0 - s), (1.0 + s) * (1.0 + s))
    }
}

type Profile = Box<dyn Fn(f64) -> f64 + Send + Sync>;

/// Mixture `∫_0^1 w_[b(s) - 2a(s), b(s) + 2a(s)] ds` of arcsine laws.
pub struct KvaMixture {
    a: Profile,
    b: Profile,
    order: usize,
}

impl core::fmt::Debug for KvaMixture {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.debug_struct("KvaMixture").field("order", &self.order).finish_non_exhaustive()
    }
}

/// Default Gauss–Legendre order for mixtures.
pub const DEFAULT_KVA_ORDER: usize = 200;

impl KvaMixture {
    /// `a` must be nonnegative on `[0, 1]`.
    pub fn new(
        a: impl Fn(f64) -> f64 + Send + Sync + 'static,
        b: impl Fn(f64) -> f64 + Send + Sync + 'static,
    ) -> Self {
        Self { a: Box::new(a), b: Box::new(b), order: DEFAULT_KVA_ORDER }
    }

    pub fn with_order(mut self, order: usize) -> Self {
        self.order = order;
        self
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn a(&self, s: f64) -> f64 {
        (self.a)(s)
    }

    pub fn b(&self, s: f64) -> f64 {
        (self.b)(s)
    }

    /// Arcsine component at mixture parameter `s`.
    pub fn component(&self, s: f64) -> Result<ArcsineLaw> {
        let (a, b) = (self.a(s), self.b(s));
        ArcsineLaw::new(b - 2.0 * a, b + 2.0 * a)
    }
}

/// Finite probability measure `sum_j w_j delta_{x_j}`.
#[derive(Debug, Clone, PartialEq)]
pub struct AtomicMeasure {
    atoms: Vec<(f64, f64)>,
}

impl AtomicMeasure {
    /// Weights must be positive and sum to 1 (to 1e-12); locations distinct.
    pub fn new(atoms: Vec<(f64, f64)>) -> Result<Self> {
        if atoms.is_empty() {
            return Err(invalid("atomic measure", "no atoms"));
        }
        let mut total = CompensatedSum::new();
        for (i, &(x, w)) in atoms.iter().enumerate() {
            if !x.is_finite() || !(w > 0.0) || !w.is_finite() {
                return Err(invalid("atomic measure", format_args!("bad atom ({x}, {w})")));
            }
            if atoms[..i].iter().any(|&(y, _)| y == x) {
                return Err(invalid("atomic measure", format_args!("repeated location {x}")));
            }
            total.add(w);
        }
        if abs(total.value() - 1.0) > 1e-12 {
            return Err(invalid("atomic measure", format_args!("weights sum to {}", total.value())));
        }
        Ok(Self { atoms })
    }

    /// `sum_j q_j delta_{a_j}`.
    pub fn from_parts(locations: &[f64], weights: &[f64]) -> Result<Self> {
        if locations.len() != weights.len() {
            return Err(invalid("atomic measure", "locations and weights differ in length"));
        }
        Self::new(locations.iter().copied().zip(weights.iter().copied()).collect())
    }

    pub fn atoms(&self) -> &[(f64, f64)] {
        &self.atoms
    }

    pub fn moment(&self, ell: usize) -> f64 {
        let mut s = CompensatedSum::new();
        for &(x, w) in &self.atoms {
            s.add(w * powi(x, ell));
        }
        s.value()
    }

    pub fn moments(&self, order: usize) -> MomentSequence {
        MomentSequence { values: (0..=order).map(|l| self.moment(l)).collect() }
    }
}

/// `sum_j C(l, 2j) C(2j, j) c^(l-2j) (rho/2)^(2j)` with centre `c` and
/// half-width `rho`.
pub fn arcsine_moment(law: &ArcsineLaw, ell: usize) -> f64 {
    let c = 0.5 * (law.alpha + law.beta);
    let half = 0.25 * (law.beta - law.alpha);
    let mut s = CompensatedSum::new();
    for j in 0..=ell / 2 {
        let term = binomial(ell as u64, 2 * j as u64)
            * binomial(2 * j as u64, j as u64)
            * powi(c, ell - 2 * j)
            * powi(half, 2 * j);
        s.add(term);
    }
    s.value()
}

/// Catalan number `C_p` for `ell = 2p`, zero for odd `ell`.
pub fn semicircle_moment(ell: usize) -> f64 {
    if ell % 2 == 1 {
        return 0.0;
    }
    let p = (ell / 2) as u64;
    binomial(2 * p, p) / (p + 1) as f64
}

/// Moments of the free Poisson law of rate `alpha`: the Narayana polynomial
/// `sum_k N(l, k) alpha^k`, including the atom at 0.
pub fn mp_moment(alpha: f64, ell: usize) -> f64 {
    if ell == 0 {
        return 1.0;
    }
    let n = ell as u64;
    let mut s = CompensatedSum::new();
    for k in 1..=n {
        let narayana = binomial(n, k) * binomial(n, k - 1) / n as f64;
        s.add(narayana * powi(alpha, k as usize));
    }
    s.value()
}

/// Gauss–Legendre integral over `s in [0, 1]` of the arcsine moments.
pub fn kva_moment(mix: &KvaMixture, ell: usize) -> Result<f64> {
    let (nodes, weights) = gauss_legendre(mix.order, 0.0, 1.0)?;
    let mut s = CompensatedSum::new();
    for (x, w) in nodes.iter().zip(&weights) {
        s.add(w * arcsine_moment(&mix.component(*x)?, ell));
    }
    Ok(s.value())
}

/// Common interface used by the density/moment emitters.
pub trait LimitLaw {
    /// `∫ x^ell dμ`.
    fn moment(&self, ell: usize) -> Result<f64>;
    /// Density of the continuous part at `x`. `epsilon` is only used by laws
    /// without a closed-form density (mixtures), which are evaluated through
    /// `-Im G(x + i epsilon) / pi`.
    fn density(&self, x: f64, epsilon: f64) -> Result<f64>;
    /// Point masses `(location, mass)`, reported separately from the density.
    fn atoms(&self) -> Vec<(f64, f64)>;
    /// An interval containing the support.
    fn support(&self) -> (f64, f64);
}

impl LimitLaw for SemicircleLaw {
    fn moment(&self, ell: usize) -> Result<f64> {
        Ok(semicircle_moment(ell))
    }

    fn density(&self, x: f64, _epsilon: f64) -> Result<f64> {
        Ok(if abs(x) < 2.0 { sqrt(4.0 - x * x) / (2.0 * PI) } else { 0.0 })
    }

    fn atoms(&self) -> Vec<(f64, f64)> {
        Vec::new()
    }

    fn support(&self) -> (f64, f64) {
        (-2.0, 2.0)
    }
}

impl LimitLaw for ArcsineLaw {
    fn moment(&self, ell: usize) -> Result<f64> {
        Ok(arcsine_moment(self, ell))
    }

    fn density(&self, x: f64, _epsilon: f64) -> Result<f64> {
        Ok(if x > self.alpha && x < self.beta {
            1.0 / (PI * sqrt((self.beta - x) * (x - self.alpha)))
        } else {
            0.0
        })
    }

    fn atoms(&self) -> Vec<(f64, f64)> {
        if self.alpha == self.beta {
            alloc::vec![(self.alpha, 1.0)]
        } else {
            Vec::new()
        }
    }

    fn support(&self) -> (f64, f64) {
        (self.alpha, self.beta)
    }
}

impl LimitLaw for MarchenkoPasturLaw {
    fn moment(&self, ell: usize) -> Result<f64> {
        Ok(mp_moment(self.alpha, ell))
    }

    fn density(&self, x: f64, _epsilon: f64) -> Result<f64> {
        let (lo, hi) = self.edges();
        Ok(if self.alpha > 0.0 && x > lo && x < hi && x > 0.0 {
            sqrt((hi - x) * (x - lo)) / (2.0 * PI * x)
        } else {
            0.0
        })
    }

    fn atoms(&self) -> Vec<(f64, f64)> {
        if self.alpha < 1.0 {
            alloc::vec![(0.0, 1.0 - self.alpha)]
        } else {
            Vec::new()
        }
    }

    fn support(&self) -> (f64, f64) {
        let (lo, hi) = self.edges();
        (if self.alpha < 1.0 { 0.0 } else { lo }, hi)
    }
}

impl LimitLaw for KvaMixture {
    fn moment(&self, ell: usize) -> Result<f64> {
        kva_moment(self, ell)
    }

    fn density(&self, x: f64, epsilon: f64) -> Result<f64> {
        if !(epsilon > 0.0) {
            return Err(invalid("epsilon", "mixture densities need epsilon > 0"));
        }
        let z = Complex64::new(x, epsilon);
        let (nodes, weights) = gauss_legendre(self.order, 0.0, 1.0)?;
        let mut s = CompensatedSum::new();
        for (t, w) in nodes.iter().zip(&weights) {
            let law = self.component(*t)?;
            let g = (z - law.alpha).sqrt() * (z - law.beta).sqrt();
            s.add(w * (-(g.inv()).im / PI));
        }
        Ok(s.value())
    }

    fn atoms(&self) -> Vec<(f64, f64)> {
        Vec::new()
    }

    fn support(&self) -> (f64, f64) {
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for i in 0..=256 {
            let s = i as f64 / 256.0;
            let (a, b) = (self.a(s), self.b(s));
            lo = lo.min(b - 2.0 * a);
            hi = hi.max(b + 2.0 * a);
        }
        (lo, hi)
    }
}

impl LimitLaw for AtomicMeasure {
    fn moment(&self, ell: usize) -> Result<f64> {
        Ok(AtomicMeasure::moment(self, ell))
    }

    fn density(&self, _x: f64, _epsilon: f64) -> Result<f64> {
        Ok(0.0)
    }

    fn atoms(&self) -> Vec<(f64, f64)> {
        self.atoms.clone()
    }

    fn support(&self) -> (f64, f64) {
        let lo = self.atoms.iter().map(|a| a.0).fold(f64::INFINITY, f64::min);
        let hi = self.atoms.iter().map(|a| a.0).fold(f64::NEG_INFINITY, f64::max);
        (lo, hi)
    }
}

/// Density of the continuous part of `law` at `x`.
pub fn density_eval<L: LimitLaw + ?Sized>(law: &L, x: f64, epsilon: f64) -> Result<f64> {
    law.density(x, epsilon)
}

/// The first `order + 1` moments of `law`.
pub fn moments_of<L: LimitLaw + ?Sized>(law: &L, order: usize) -> Result<MomentSequence> {
    let mut v = Vec::with_capacity(order + 1);
    for l in 0..=order {
        v.push(law.moment(l)?);
    }
    MomentSequence::new(v)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arcsine_examples() {
        assert_eq!(arcsine_moment(&ArcsineLaw::new(3.0, 3.0).unwrap(), 5), 243.0);
        let sym = ArcsineLaw::new(-2.0, 2.0).unwrap();
        assert_eq!(arcsine_moment(&sym, 2), 2.0);
        assert_eq!(arcsine_moment(&sym, 1), 0.0);
        assert_eq!(arcsine_moment(&sym, 4), 6.0);
    }

    #[test]
    fn semicircle_catalan() {
        let got: Vec<f64> = (0..=8).map(semicircle_moment).collect();
        assert_eq!(got, [1.0, 0.0, 1.0, 0.0, 2.0, 0.0, 5.0, 0.0, 14.0]);
    }

    #[test]
    fn mp_examples() {
        assert_eq!(mp_moment(1.0, 2), 2.0);
        assert_eq!(mp_moment(0.0, 3), 0.0);
        assert_eq!(mp_moment(1.0, 3), 5.0);
        assert_eq!(mp_moment(2.5, 1), 2.5);
    }

    #[test]
    fn kva_examples() {
        let gue = KvaMixture::new(sqrt, |_| 0.0);
        assert!((kva_moment(&gue, 2).unwrap() - 1.0).abs() < 1e-13);
        assert!((kva_moment(&gue, 4).unwrap() - 2.0).abs() < 1e-13);
        let point = KvaMixture::new(|_| 0.0, |_| 1.75);
        assert!((kva_moment(&point, 1).unwrap() - 1.75).abs() < 1e-14);
        assert!(kva_moment(&point.with_order(0), 1).is_err());
    }

    #[test]
    fn density_examples() {
        assert!((density_eval(&SemicircleLaw, 0.0, 1e-9).unwrap() - 1.0 / PI).abs() < 1e-15);
        let arc = ArcsineLaw::new(-2.0, 2.0).unwrap();
        assert!((density_eval(&arc, 0.0, 1e-9).unwrap() - 0.5 / PI).abs() < 1e-15);
        let mp = MarchenkoPasturLaw::new(1.0).unwrap();
        assert_eq!(density_eval(&mp, 4.5, 1e-9).unwrap(), 0.0);
        assert!((density_eval(&mp, 1.0, 1e-9).unwrap() - sqrt(3.0) / (2.0 * PI)).abs() < 1e-15);
    }

    #[test]
    fn mp_atom_only_below_rate_one() {
        assert_eq!(MarchenkoPasturLaw::new(0.25).unwrap().atoms(), [(0.0, 0.75)]);
        assert!(MarchenkoPasturLaw::new(2.0).unwrap().atoms().is_empty());
        assert!(MarchenkoPasturLaw::new(-1.0).is_err());
    }

    #[test]
    fn moment_sequence_validation() {
        assert!(MomentSequence::new(alloc::vec![]).is_err());
        assert!(MomentSequence::new(alloc::vec![0.5, 1.0]).is_err());
        assert!(MomentSequence::new(alloc::vec![1.0, f64::NAN]).is_err());
        assert_eq!(MomentSequence::new(alloc::vec![1.0, 2.0]).unwrap().order(), 1);
    }

    #[test]
    fn atomic_measure_validation() {
        assert!(AtomicMeasure::new(alloc::vec![(1.0, 0.5), (1.0, 0.5)]).is_err());
        assert!(AtomicMeasure::new(alloc::vec![(1.0, 0.5), (2.0, 0.4)]).is_err());
        let nu = AtomicMeasure::from_parts(&[1.0, -1.0], &[0.5, 0.5]).unwrap();
        assert_eq!(nu.moments(3).values(), [1.0, 0.0, 1.0, 0.0]);
    }
}
