//! Independent oracles shared by the integration tests.
#![allow(dead_code)]

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Relative closeness with a tiny absolute floor.
pub fn close(x: f64, y: f64, tol: f64) -> bool {
    (x - y).abs() <= tol * x.abs().max(y.abs()) + 1e-15
}

/// Double-exponential (tanh-sinh) quadrature on `[a, b]`. The integrand gets
/// `(x, x - a, b - x)` with the endpoint distances computed without
/// cancellation, so endpoint singularities are resolved.
pub fn tanh_sinh<F: FnMut(f64, f64, f64) -> f64>(mut f: F, a: f64, b: f64, tol: f64) -> f64 {
    let half = 0.5 * (b - a);
    let pi2 = std::f64::consts::FRAC_PI_2;
    let mut eval = |t: f64| -> f64 {
        let u = pi2 * t.sinh();
        let to_hi = half * 2.0 / (1.0 + (2.0 * u).exp());
        let to_lo = half * 2.0 / (1.0 + (-2.0 * u).exp());
        if to_hi <= 0.0 || to_lo <= 0.0 {
            return 0.0;
        }
        let w = half * pi2 * t.cosh() / (u.cosh() * u.cosh());
        let x = if u < 0.0 { a + to_lo } else { b - to_hi };
        w * f(x, to_lo, to_hi)
    };
    let t_max = 4.0;
    let mut h = 0.5;
    let mut sum = eval(0.0);
    let mut k = 1;
    while k as f64 * h <= t_max {
        sum += eval(k as f64 * h) + eval(-(k as f64) * h);
        k += 1;
    }
    let mut estimate = sum * h;
    for _ in 0..12 {
        h *= 0.5;
        let mut k = 1;
        while k as f64 * h <= t_max {
            sum += eval(k as f64 * h) + eval(-(k as f64) * h);
            k += 2;
        }
        let next = sum * h;
        if (next - estimate).abs() <= tol * next.abs().max(1e-300) {
            return next;
        }
        estimate = next;
    }
    estimate
}

pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn to_f64(x: &BigRational) -> f64 {
    x.to_f64().unwrap()
}

/// Normalised moments `E[X^k]`, `k <= kmax`, of `X ~ Normal(a, 1/N)`; the
/// Hermite weight `exp(-N x^2/2 + N a x)` up to its mass.
pub fn gaussian_moments(a: &BigRational, big_n: i64, kmax: usize) -> Vec<BigRational> {
    // E[Z^(2i)] = (2i - 1)!!
    let mut out = Vec::with_capacity(kmax + 1);
    for k in 0..=kmax {
        let mut s = BigRational::zero();
        let mut binom = BigInt::one();
        for i in 0..=k {
            if i > 0 {
                binom = binom * BigInt::from(k - i + 1) / BigInt::from(i);
            }
            if i % 2 == 1 {
                continue;
            }
            let mut dfact = BigInt::one();
            let mut j = 1;
            while j < i {
                dfact *= BigInt::from(j);
                j += 2;
            }
            let scale = BigRational::new(dfact, BigInt::from(big_n).pow((i / 2) as u32));
            s += BigRational::from_integer(binom.clone()) * a.pow((k - i) as i32) * scale;
        }
        out.push(s);
    }
    out
}

/// Normalised moments of the Laguerre weight `x^(N alpha) exp(-N a x)` on
/// `(0, inf)` with integer `N alpha`: `prod_(i=1..k) (N alpha + i) / (N a)`.
pub fn gamma_moments(n_alpha: i64, a: &BigRational, big_n: i64, kmax: usize) -> Vec<BigRational> {
    let rate = a * BigRational::from_integer(BigInt::from(big_n));
    let mut out = vec![BigRational::one()];
    for k in 1..=kmax {
        let next = &out[k - 1] * BigRational::from_integer(BigInt::from(n_alpha + k as i64)) / &rate;
        out.push(next);
    }
    out
}

/// Solves `A x = b` exactly (Gaussian elimination with nonzero pivots).
pub fn solve(mut a: Vec<Vec<BigRational>>, mut b: Vec<BigRational>) -> Vec<BigRational> {
    let n = b.len();
    for c in 0..n {
        let p = (c..n).find(|&r| !a[r][c].is_zero()).expect("singular orthogonality system");
        a.swap(c, p);
        b.swap(c, p);
        for r in 0..n {
            if r != c && !a[r][c].is_zero() {
                let f = &a[r][c] / &a[c][c];
                for j in c..n {
                    let t = &f * &a[c][j];
                    a[r][j] -= t;
                }
                let t = &f * &b[c];
                b[r] -= t;
            }
        }
    }
    (0..n).map(|i| &b[i] / &a[i][i]).collect()
}

/// Monic type II multiple orthogonal polynomial for multi-index `n`, from
/// the moments of each weight: `int P x^j dw_d = 0` for `j < n_d`.
/// Coefficients in ascending powers, length `|n| + 1`.
pub fn monic_mop(moments: &[Vec<BigRational>], n: &[usize]) -> Vec<BigRational> {
    let deg: usize = n.iter().sum();
    let mut rows = Vec::with_capacity(deg);
    let mut rhs = Vec::with_capacity(deg);
    for (d, &nd) in n.iter().enumerate() {
        for j in 0..nd {
            rows.push((0..deg).map(|i| moments[d][i + j].clone()).collect::<Vec<_>>());
            rhs.push(-moments[d][deg + j].clone());
        }
    }
    let mut c = if deg == 0 { Vec::new() } else { solve(rows, rhs) };
    c.push(BigRational::one());
    c
}

/// Coefficients of `x P_k` in the basis `P_0..P_(k+1)` of monic polynomials
/// with `deg P_m = m`.
pub fn expand_x_times(polys: &[Vec<BigRational>], k: usize) -> Vec<BigRational> {
    let mut rem = vec![BigRational::zero(); k + 2];
    for (i, c) in polys[k].iter().enumerate() {
        rem[i + 1] = c.clone();
    }
    let mut out = vec![BigRational::zero(); k + 2];
    for m in (0..=k + 1).rev() {
        let c = rem[m].clone();
        if !c.is_zero() {
            for (i, p) in polys[m].iter().enumerate() {
                rem[i] -= &c * p;
            }
        }
        out[m] = c;
    }
    assert!(rem.iter().all(|x| x.is_zero()));
    out
}

pub fn max_abs(v: &[BigRational]) -> f64 {
    v.iter().map(|x| to_f64(&x.abs())).fold(0.0, f64::max)
}

use dppzeros_core::mop::{mop_scheme, path_from_ratios, MopKind};
use dppzeros_core::recurrence::{classical_scheme, ClassicalEnsemble, RecurrenceScheme};

pub type Scheme = Box<dyn RecurrenceScheme + Send + Sync>;

/// The eight schemes exercised by the trace/path checks, with paths long
/// enough for `N <= n_max`.
pub fn test_schemes(n_max: usize) -> Vec<(&'static str, Scheme)> {
    let c = |id| -> Scheme { Box::new(classical_scheme(id).unwrap()) };
    let path = || path_from_ratios(&[0.5, 0.5], n_max + 40).unwrap();
    vec![
        ("gue", c(ClassicalEnsemble::Gue)),
        ("wishart(0)", c(ClassicalEnsemble::Wishart { alpha: 0.0 })),
        ("wishart(1)", c(ClassicalEnsemble::Wishart { alpha: 1.0 })),
        ("jacobi(1,1)", c(ClassicalEnsemble::Jacobi { alpha: 1.0, beta: 1.0 })),
        ("charlier(1)", c(ClassicalEnsemble::Charlier { alpha: 1.0 })),
        ("meixner(1/2,1)", c(ClassicalEnsemble::Meixner { alpha: 0.5, beta: 1.0 })),
        ("hermite r=2", Box::new(mop_scheme(&MopKind::Hermite { a: vec![1.0, -1.0] }, path()).unwrap())),
        ("laguerre r=2", Box::new(mop_scheme(&MopKind::Laguerre { alpha: 1.0, a: vec![1.0, 2.0] }, path()).unwrap())),
    ]
}
