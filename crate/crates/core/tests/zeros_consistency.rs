//! Spectra of the truncated operators against the trace side and against
//! their characteristic polynomials.

mod support;

use dppzeros_core::bandop::{build_truncation, window_max, zero_moment_trace};
use dppzeros_core::mop::{mop_scheme, path_from_ratios, MopKind};
use dppzeros_core::recurrence::{classical_scheme, coeff, ClassicalEnsemble};
use dppzeros_core::zeros::{charpoly_scaled, reality_check, spectrum, zero_moments};
use dppzeros_core::Complex64;
use support::test_schemes;

#[test]
fn spectral_moments_equal_traces() {
    for (name, s) in test_schemes(200) {
        for n in [1, 5, 20, 50, 120, 200] {
            let op = build_truncation(s.as_ref(), n, 6).unwrap();
            let sm = spectrum(&op).unwrap();
            let zm = zero_moments(&sm, 6).unwrap();
            for ell in 0..=6 {
                let t = zero_moment_trace(s.as_ref(), n, ell).unwrap();
                let z = zm.moments.values()[ell];
                // Odd moments of symmetric spectra cancel, so measure the error
                // against the mean absolute power.
                let scale: f64 = sm.points().iter().map(|p| p.norm().powi(ell as i32)).sum::<f64>() / n as f64;
                assert!((t - z).abs() <= 1e-9 * scale.max(t.abs()), "{name} N={n} l={ell}: trace {t} vs zeros {z}");
            }
        }
    }
}

#[test]
fn tridiagonal_zeros_are_real_and_simple() {
    for (name, s) in test_schemes(200).into_iter().take(6) {
        let sm = spectrum(&build_truncation(s.as_ref(), 200, 1).unwrap()).unwrap();
        let xs: Vec<f64> = sm.points().iter().map(|z| z.re).collect();
        assert!(sm.points().iter().all(|z| z.im == 0.0));
        for w in xs.windows(2) {
            assert!(w[1] - w[0] > 1e-12, "{name}: {} {}", w[0], w[1]);
        }
    }
}

#[test]
fn characteristic_polynomial_vanishes_at_zeros() {
    for (name, s) in test_schemes(60) {
        let op = build_truncation(s.as_ref(), 40, 1).unwrap();
        let pts = spectrum(&op).unwrap().points().to_vec();
        for (i, z) in pts.iter().enumerate() {
            let (p, e) = charpoly_scaled(&op, *z);
            let log_p = p.norm().ln() + e as f64 * std::f64::consts::LN_2;
            // |p'(z_i)| = prod_(j != i) |z_i - z_j| for a monic polynomial.
            let log_dp: f64 = pts.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, w)| (z - w).norm().ln()).sum();
            let slack = (1e-8f64 * (1.0 + z.norm())).ln();
            assert!(p.norm() == 0.0 || log_p <= log_dp + slack, "{name} zero {i}: ln|p| {log_p} vs ln|p'| {log_dp}");
        }
    }
}

#[test]
fn monic_recurrence_vanishes_at_zeros() {
    for id in [ClassicalEnsemble::Gue, ClassicalEnsemble::Wishart { alpha: 0.5 }] {
        let s = classical_scheme(id).unwrap();
        let n = 30;
        let pts = spectrum(&build_truncation(&s, n, 1).unwrap()).unwrap();
        for z in pts.points() {
            let x = z.re;
            let (mut prev, mut cur) = (0.0f64, 1.0f64);
            let mut scale = 1.0f64;
            for k in 0..n {
                let (a, b) = coeff(&s, k, n).unwrap();
                let next = (x - b) * cur - a * a * prev;
                scale = scale.max(next.abs()).max(((x - b) * cur).abs());
                prev = cur;
                cur = next;
            }
            assert!(cur.abs() <= 1e-9 * scale, "{id:?} at {x}: {cur} (scale {scale})");
        }
    }
}

#[test]
fn multiple_orthogonal_zeros_are_real() {
    let kinds = [MopKind::Hermite { a: vec![1.0, -1.0] }, MopKind::Laguerre { alpha: 1.0, a: vec![1.0, 2.0] }];
    for kind in kinds {
        let s = mop_scheme(&kind, path_from_ratios(&[0.5, 0.5], 240).unwrap()).unwrap();
        for n in [10, 50, 100, 200] {
            let sm = spectrum(&build_truncation(&s, n, 1).unwrap()).unwrap();
            let (ok, worst) = reality_check(&sm, 1e-8);
            assert!(ok, "{kind:?} N={n}: max |Im| = {worst}");
        }
    }
}

#[test]
fn mop_window_stays_bounded() {
    let kinds = [MopKind::Hermite { a: vec![1.0, -1.0] }, MopKind::Laguerre { alpha: 1.0, a: vec![1.0, 2.0] }];
    for kind in kinds {
        let s = mop_scheme(&kind, path_from_ratios(&[0.5, 0.5], 500).unwrap()).unwrap();
        let w: Vec<f64> = [50, 100, 200, 400].iter().map(|&n| window_max(&s, n, 0.1).unwrap()).collect();
        let first = w[0];
        assert!(w.iter().all(|x| *x <= 1.1 * first), "{kind:?}: {w:?}");
    }
}

#[test]
fn charpoly_of_gue_block_at_origin() {
    let g = classical_scheme(ClassicalEnsemble::Gue).unwrap();
    let op = build_truncation(&g, 2, 1).unwrap();
    let (p, e) = charpoly_scaled(&op, Complex64::new(0.0, 0.0));
    assert!((p.re * 2f64.powi(e) + 0.5).abs() < 1e-15);
}
