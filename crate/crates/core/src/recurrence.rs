//! The scheme interface consumed by every operator computation, and the
//! classical orthonormal three-term recurrence tables.
//!
//! Entry convention: `entry(m, k, N)` is the coefficient of `P_m` in the
//! expansion of `x P_k` (column = input degree). Classical schemes use the
//! symmetric orthonormal normalisation, so `entry(k+1, k) = entry(k, k+1) =
//! a_{k+1}` and `entry(k, k) = b_k`.

use alloc::string::String;
use alloc::vec::Vec;

use crate::error::invalid;
use crate::math::sqrt;
use crate::measures::KvaMixture;
use crate::{Error, Result};

/// Supplier of operator matrix entries with declared bandwidths.
///
/// Entries vanish outside `k - lower_band() <= m <= k + upper_band()`.
pub trait RecurrenceScheme {
    fn name(&self) -> String;
    fn params(&self) -> Vec<(&'static str, f64)>;
    /// Number of nonzero bands below the input degree (`R`).
    fn lower_band(&self) -> usize;
    /// Number of nonzero bands above the input degree (`q`).
    fn upper_band(&self) -> usize;
    fn entry(&self, m: usize, k: usize, n: usize) -> f64;
    /// Largest input degree `k` the scheme can evaluate, if bounded.
    fn index_limit(&self) -> Option<usize> {
        None
    }
}

impl<S: RecurrenceScheme + ?Sized> RecurrenceScheme for &S {
    fn name(&self) -> String {
        (**self).name()
    }
    fn params(&self) -> Vec<(&'static str, f64)> {
        (**self).params()
    }
    fn lower_band(&self) -> usize {
        (**self).lower_band()
    }
    fn upper_band(&self) -> usize {
        (**self).upper_band()
    }
    fn entry(&self, m: usize, k: usize, n: usize) -> f64 {
        (**self).entry(m, k, n)
    }
    fn index_limit(&self) -> Option<usize> {
        (**self).index_limit()
    }
}

/// Checks that degrees up to `max_k` are available.
pub(crate) fn check_index<S: RecurrenceScheme + ?Sized>(scheme: &S, max_k: usize) -> Result<()> {
    match scheme.index_limit() {
        Some(limit) if max_k > limit => Err(Error::IndexBeyondScheme { index: max_k, limit }),
        _ => Ok(()),
    }
}

/// The five classical ensembles with their parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ClassicalEnsemble {
    Gue,
    Wishart { alpha: f64 },
    Jacobi { alpha: f64, beta: f64 },
    Charlier { alpha: f64 },
    Meixner { alpha: f64, beta: f64 },
}

impl ClassicalEnsemble {
    pub fn validate(&self) -> Result<()> {
        let ok = |c: bool, detail: &str| if c { Ok(()) } else { Err(invalid("ensemble parameter", detail)) };
        match *self {
            ClassicalEnsemble::Gue => Ok(()),
            ClassicalEnsemble::Wishart { alpha } => ok(alpha > -1.0 && alpha.is_finite(), "Wishart needs alpha > -1"),
            ClassicalEnsemble::Jacobi { alpha, beta } => ok(
                alpha > 0.0 && beta > 0.0 && alpha.is_finite() && beta.is_finite(),
                "Jacobi needs alpha, beta > 0",
            ),
            ClassicalEnsemble::Charlier { alpha } => ok(alpha > 0.0 && alpha.is_finite(), "Charlier needs alpha > 0"),
            ClassicalEnsemble::Meixner { alpha, beta } => ok(
                alpha > 0.0 && alpha < 1.0 && beta > 0.0 && beta.is_finite(),
                "Meixner needs 0 < alpha < 1 and beta > 0",
            ),
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            ClassicalEnsemble::Gue => "gue",
            ClassicalEnsemble::Wishart { .. } => "wishart",
            ClassicalEnsemble::Jacobi { .. } => "jacobi",
            ClassicalEnsemble::Charlier { .. } => "charlier",
            ClassicalEnsemble::Meixner { .. } => "meixner",
        }
    }
}

/// Tridiagonal scheme for one of the classical ensembles.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClassicalScheme {
    id: ClassicalEnsemble,
}

/// Validates the parameters and returns the scheme.
pub fn classical_scheme(id: ClassicalEnsemble) -> Result<ClassicalScheme> {
    id.validate()?;
    Ok(ClassicalScheme { id })
}

impl ClassicalScheme {
    pub fn id(&self) -> ClassicalEnsemble {
        self.id
    }

    /// `a_{k,N}^2`; zero at `k = 0`.
    pub fn a_squared(&self, k: usize, n: usize) -> f64 {
        if k == 0 {
            return 0.0;
        }
        let nf = n as f64;
        let s = k as f64 / nf;
        match self.id {
            ClassicalEnsemble::Gue => s,
            ClassicalEnsemble::Wishart { alpha } => s * (s + alpha),
            ClassicalEnsemble::Jacobi { alpha, beta } => {
                let t = 2.0 * s + alpha + beta;
                4.0 * s * (s + alpha) * (s + beta) * (s + alpha + beta) / (t * t * (t * t - 1.0 / (nf * nf)))
            }
            ClassicalEnsemble::Charlier { alpha } => alpha * s,
            ClassicalEnsemble::Meixner { alpha, beta } => {
                let c = 1.0 - alpha;
                s * (s + beta - 1.0 / nf) / (c * c)
            }
        }
    }

    /// `b_{k,N}`.
    pub fn b(&self, k: usize, n: usize) -> f64 {
        let nf = n as f64;
        let s = k as f64 / nf;
        match self.id {
            ClassicalEnsemble::Gue => 0.0,
            ClassicalEnsemble::Wishart { alpha } => (2.0 * k as f64 + 1.0) / nf + alpha,
            ClassicalEnsemble::Jacobi { alpha, beta } => {
                let num = beta * beta - alpha * alpha;
                if num == 0.0 {
                    return 0.0;
                }
                num / ((2.0 * s + alpha + beta) * (2.0 * (k as f64 + 1.0) / nf + alpha + beta))
            }
            ClassicalEnsemble::Charlier { alpha } => alpha + s,
            ClassicalEnsemble::Meixner { alpha, beta } => (s + alpha * (s + beta)) / (1.0 - alpha),
        }
    }

    /// `a_{k,N} >= 0`.
    pub fn a(&self, k: usize, n: usize) -> f64 {
        sqrt(self.a_squared(k, n))
    }
}

impl RecurrenceScheme for ClassicalScheme {
    fn name(&self) -> String {
        String::from(self.id.label())
    }

    fn params(&self) -> Vec<(&'static str, f64)> {
        match self.id {
            ClassicalEnsemble::Gue => Vec::new(),
            ClassicalEnsemble::Wishart { alpha } | ClassicalEnsemble::Charlier { alpha } => alloc::vec![("alpha", alpha)],
            ClassicalEnsemble::Jacobi { alpha, beta } | ClassicalEnsemble::Meixner { alpha, beta } => {
                alloc::vec![("alpha", alpha), ("beta", beta)]
            }
        }
    }

    fn lower_band(&self) -> usize {
        1
    }

    fn upper_band(&self) -> usize {
        1
    }

    fn entry(&self, m: usize, k: usize, n: usize) -> f64 {
        if m == k {
            self.b(k, n)
        } else if m == k + 1 {
            self.a(k + 1, n)
        } else if m + 1 == k {
            self.a(k, n)
        } else {
            0.0
        }
    }
}

/// `(a_{k,N}, b_{k,N}) = (entry(k-1, k), entry(k, k))`, with `a_0 = 0`.
pub fn coeff<S: RecurrenceScheme + ?Sized>(scheme: &S, k: usize, n: usize) -> Result<(f64, f64)> {
    if scheme.lower_band() != 1 || scheme.upper_band() != 1 {
        return Err(Error::NotTridiagonal);
    }
    let a = if k == 0 { 0.0 } else { scheme.entry(k - 1, k, n) };
    Ok((a, scheme.entry(k, k, n)))
}

/// Limits `s = k/N` of the table coefficients, packaged as a mixture.
pub fn kva_functions(id: ClassicalEnsemble) -> KvaMixture {
    match id {
        ClassicalEnsemble::Gue => KvaMixture::new(sqrt, |_| 0.0),
        ClassicalEnsemble::Wishart { alpha } => {
            KvaMixture::new(move |s| sqrt(s * (s + alpha)), move |s| 2.0 * s + alpha)
        }
        ClassicalEnsemble::Jacobi { alpha, beta } => KvaMixture::new(
            move |s| {
                let t = 2.0 * s + alpha + beta;
                sqrt(4.0 * s * (s + alpha) * (s + beta) * (s + alpha + beta)) / (t * t)
            },
            move |s| {
                let t = 2.0 * s + alpha + beta;
                (beta * beta - alpha * alpha) / (t * t)
            },
        ),
        ClassicalEnsemble::Charlier { alpha } => KvaMixture::new(move |s| sqrt(alpha * s), move |s| alpha + s),
        ClassicalEnsemble::Meixner { alpha, beta } => KvaMixture::new(
            move |s| sqrt(s * (s + beta)) / (1.0 - alpha),
            move |s| (s + alpha * (s + beta)) / (1.0 - alpha),
        ),
    }
}
