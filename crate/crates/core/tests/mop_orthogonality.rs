//! Exact rational construction of multiple orthogonal polynomials from their
//! orthogonality conditions, compared with the nearest-neighbour recurrence.

mod support;

use dppzeros_core::mop::{banded_entries, path_from_ratios, HermiteNN, LaguerreNN, MultiIndexPath, NearestNeighbor};
use num_rational::BigRational;
use support::*;

/// Oracle polynomials `P_0..P_(k_max+1)` along `path`.
fn oracle_polys(path: &MultiIndexPath, moments: &[Vec<BigRational>], k_max: usize) -> Vec<Vec<BigRational>> {
    (0..=k_max + 1).map(|k| monic_mop(moments, path.index(k).unwrap())).collect()
}

fn compare_rows<C: NearestNeighbor>(path: &MultiIndexPath, nn: &C, big_n: usize, polys: &[Vec<BigRational>], k_max: usize) {
    for k in 0..=k_max {
        let exact = expand_x_times(polys, k);
        let scale = max_abs(&exact);
        let got = banded_entries(path, nn, k, big_n).unwrap();
        let lo = got[0].0;
        for (m, e) in exact.iter().enumerate() {
            let want = to_f64(e);
            let have = got.iter().find(|(row, _)| *row == m).map_or(0.0, |x| x.1);
            if m < lo {
                assert_eq!(want, 0.0, "N={big_n} k={k} m={m} outside the window");
            }
            assert!(
                (have - want).abs() <= 1e-8 * want.abs().max(have.abs()) + 1e-13 * scale,
                "N={big_n} k={k} m={m}: recurrence {have} vs oracle {want}"
            );
        }
    }
}

#[test]
fn multiple_hermite_rows_match_orthogonality() {
    for (q, a) in [([0.5, 0.5], [rat(1, 1), rat(-1, 1)]), ([1.0 / 3.0, 2.0 / 3.0], [rat(1, 2), rat(-3, 2)])] {
        let af: Vec<f64> = a.iter().map(to_f64).collect();
        let nn = HermiteNN::new(&af).unwrap();
        let k_max = 8;
        let path = path_from_ratios(&q, k_max + 1).unwrap();
        for big_n in 1..=8i64 {
            let moments: Vec<_> = a.iter().map(|ad| gaussian_moments(ad, big_n, 2 * k_max + 4)).collect();
            let polys = oracle_polys(&path, &moments, k_max);
            compare_rows(&path, &nn, big_n as usize, &polys, k_max);
        }
    }
}

#[test]
fn multiple_laguerre_rows_match_orthogonality() {
    let a = [rat(1, 1), rat(2, 1)];
    let nn = LaguerreNN::new(1.0, &[1.0, 2.0]).unwrap();
    let k_max = 7;
    let path = path_from_ratios(&[0.5, 0.5], k_max + 1).unwrap();
    for big_n in 1..=6i64 {
        let moments: Vec<_> = a.iter().map(|ad| gamma_moments(big_n, ad, big_n, 2 * k_max + 4)).collect();
        let polys = oracle_polys(&path, &moments, k_max);
        compare_rows(&path, &nn, big_n as usize, &polys, k_max);
    }
}

#[test]
fn neighbour_difference_relation() {
    // P_(n+e_i) - P_(n+e_j) = (same_j - same_i) P_n, with same_d = a_d.
    let a = [rat(1, 1), rat(-1, 1)];
    for big_n in 1..=8i64 {
        let moments: Vec<_> = a.iter().map(|ad| gaussian_moments(ad, big_n, 24)).collect();
        for n0 in 0..=4usize {
            for n1 in 0..=4usize {
                let p = monic_mop(&moments, &[n0, n1]);
                let p0 = monic_mop(&moments, &[n0 + 1, n1]);
                let p1 = monic_mop(&moments, &[n0, n1 + 1]);
                let factor = &a[1] - &a[0];
                for i in 0..p0.len() {
                    let lhs = to_f64(&(&p0[i] - &p1[i]));
                    let rhs = if i < p.len() { to_f64(&(&factor * &p[i])) } else { 0.0 };
                    assert!(close(lhs, rhs, 1e-8), "N={big_n} n=({n0},{n1}) coefficient {i}");
                }
            }
        }
    }
}
