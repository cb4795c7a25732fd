//! Simultaneous polynomial root refinement (Aberth–Ehrlich) and roots of
//! small dense polynomials.

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::math::{cos, exp, ln, sin, PI};
use crate::{Error, Result};

/// Outcome of an Aberth run.
#[derive(Debug, Clone)]
pub struct AberthOutcome {
    pub roots: Vec<Complex64>,
    pub sweeps: usize,
    pub converged: bool,
}

/// Refines `roots` in place. `newton` returns `p(z) / p'(z)` (or `None` when
/// `p(z)` is exactly zero). Gauss–Seidel sweeps; a root is frozen once its
/// correction falls below `rel_tol * (|z| + scale)`.
pub fn aberth<F>(mut roots: Vec<Complex64>, mut newton: F, scale: f64, rel_tol: f64, max_sweeps: usize) -> AberthOutcome
where
    F: FnMut(Complex64) -> Option<Complex64>,
{
    let n = roots.len();
    let mut frozen = vec![false; n];
    let mut sweeps = 0;
    while sweeps < max_sweeps && frozen.iter().any(|f| !f) {
        sweeps += 1;
        for i in 0..n {
            if frozen[i] {
                continue;
            }
            let zi = roots[i];
            let ratio = match newton(zi) {
                Some(r) => r,
                None => {
                    frozen[i] = true;
                    continue;
                }
            };
            let mut s = Complex64::new(0.0, 0.0);
            for (j, zj) in roots.iter().enumerate() {
                if j != i {
                    let d = zi - zj;
                    if d.norm_sqr() > 0.0 {
                        s += d.inv();
                    }
                }
            }
            let denom = Complex64::new(1.0, 0.0) - ratio * s;
            let step = if denom.norm_sqr() > 0.0 { ratio / denom } else { ratio };
            if !step.re.is_finite() || !step.im.is_finite() {
                continue;
            }
            roots[i] = zi - step;
            if step.norm() <= rel_tol * (zi.norm() + scale) {
                frozen[i] = true;
            }
        }
    }
    AberthOutcome { roots, sweeps, converged: frozen.iter().all(|f| *f) }
}

/// Evaluates `sum c_j w^j` and its derivative by Horner's rule.
pub fn horner(coeffs: &[Complex64], w: Complex64) -> (Complex64, Complex64) {
    let mut p = Complex64::new(0.0, 0.0);
    let mut d = Complex64::new(0.0, 0.0);
    for c in coeffs.iter().rev() {
        d = d * w + p;
        p = p * w + c;
    }
    (p, d)
}

/// All roots of `sum coeffs[j] w^j`. Leading coefficients that vanish are
/// dropped (those roots are at infinity). `seeds`, if given with the right
/// length, are used as starting points.
pub fn poly_roots(coeffs: &[Complex64], seeds: Option<&[Complex64]>) -> Result<Vec<Complex64>> {
    let scale = coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max);
    let mut deg = coeffs.len().saturating_sub(1);
    while deg > 0 && coeffs[deg].norm() <= 1e-14 * scale {
        deg -= 1;
    }
    if deg == 0 {
        return Ok(Vec::new());
    }
    let c = &coeffs[..=deg];
    if deg == 1 {
        return Ok(vec![-c[0] / c[1]]);
    }
    let lead = c[deg].norm();
    let radius = 1.0 + c[..deg].iter().map(|x| x.norm() / lead).fold(0.0, f64::max);
    let start: Vec<Complex64> = match seeds {
        Some(s) if s.len() == deg => s.to_vec(),
        _ => newton_polygon_start(c),
    };
    let out = aberth(
        start,
        |w| {
            let (p, d) = horner(c, w);
            if p.norm_sqr() == 0.0 {
                None
            } else {
                Some(p / d)
            }
        },
        radius.min(1.0),
        4.0 * f64::EPSILON,
        500,
    );
    if !out.converged {
        // Clustered roots of large modulus cannot reach a tiny Newton step in
        // the monomial basis. Accept roots that are exact for a polynomial
        // whose coefficients differ by a small multiple of the unit roundoff.
        let ok = out.roots.iter().all(|w| {
            let (p, _) = horner(c, *w);
            let mut mag = 0.0;
            let mut wp = 1.0;
            for cj in c {
                mag += cj.norm() * wp;
                wp *= w.norm();
            }
            p.norm() <= 1e3 * f64::EPSILON * mag
        });
        if !ok {
            return Err(Error::EigenNonConvergence { dim: deg, stage: "polynomial roots", index: 0 });
        }
    }
    Ok(out.roots)
}

/// Starting points on circles whose radii come from the upper convex hull of
/// `(j, ln |c_j|)`, so that roots of very different magnitudes each get
/// seeds at the right scale.
fn newton_polygon_start(c: &[Complex64]) -> Vec<Complex64> {
    let deg = c.len() - 1;
    let logs: Vec<f64> = c.iter().map(|x| if x.norm() > 0.0 { ln(x.norm()) } else { f64::NEG_INFINITY }).collect();
    let mut hull: Vec<usize> = Vec::with_capacity(deg + 1);
    for j in 0..=deg {
        if logs[j] == f64::NEG_INFINITY {
            continue;
        }
        while hull.len() >= 2 {
            let (a, b) = (hull[hull.len() - 2], hull[hull.len() - 1]);
            // Drop b if it lies on or below the segment a..j.
            let cross = (logs[b] - logs[a]) * (j - a) as f64 - (logs[j] - logs[a]) * (b - a) as f64;
            if cross <= 0.0 {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(j);
    }
    let mut out = Vec::with_capacity(deg);
    for w in hull.windows(2) {
        let (i, k) = (w[0], w[1]);
        let r = exp((logs[i] - logs[k]) / (k - i) as f64);
        for t in 0..k - i {
            let theta = 2.0 * PI * (t as f64 + 0.25 * i as f64 / deg as f64) / (k - i) as f64 + 0.4;
            out.push(Complex64::new(cos(theta), sin(theta)) * r);
        }
    }
    // Zero coefficients at the bottom of the polynomial mean roots at 0.
    while out.len() < deg {
        out.push(Complex64::new(1e-300, 0.0));
    }
    out
}
