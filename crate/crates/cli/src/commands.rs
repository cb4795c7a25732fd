//! One function per command. Each returns a single artifact; work across `N`
//! values and Monte-Carlo samples runs on a rayon pool, and results are
//! collected in input order so the output does not depend on the thread count.

use rayon::prelude::*;
use serde_json::{json, Value};

use dppzeros_core::bandop::{build_truncation, trace_row, TraceRow};
use dppzeros_core::freeprob::{
    curve_hermite, curve_laguerre, curve_laguerre_ensemble, curve_moments, free_add, free_mul, stieltjes_density,
    stieltjes_density_extrapolated, AlgebraicCurve, FactorIndexing,
};
use dppzeros_core::measures::{kva_moment, mp_moment, semicircle_moment, AtomicMeasure, LimitLaw, MomentSequence};
use dppzeros_core::mop::{mop_scheme, path_from_ratios, MopKind};
use dppzeros_core::recurrence::{classical_scheme, kva_functions, ClassicalEnsemble, RecurrenceScheme};
use dppzeros_core::sampler::{aggregate, sample_moments, MatrixModelSpec};
use dppzeros_core::zeros::{spectrum, zero_moments};

use crate::config::*;
use crate::error::CliError;
use crate::output::{num, nums, Artifact, Table};

pub type Scheme = Box<dyn RecurrenceScheme + Send + Sync>;

/// Thread pool sized by `DPPZEROS_THREADS` (rayon's default when unset).
pub fn thread_pool() -> Result<rayon::ThreadPool, CliError> {
    let mut b = rayon::ThreadPoolBuilder::new();
    if let Ok(v) = std::env::var("DPPZEROS_THREADS") {
        let n: usize = v
            .trim()
            .parse()
            .ok()
            .filter(|n| *n >= 1)
            .ok_or_else(|| CliError::validation(format!("DPPZEROS_THREADS: expected a positive integer, got {v:?}")))?;
        b = b.num_threads(n);
    }
    b.build().map_err(|e| CliError::io(format!("thread pool: {e}")))
}

fn param(p: &Option<Params>, key: &str, get: fn(&Params) -> Option<f64>) -> Result<f64, CliError> {
    p.as_ref()
        .and_then(get)
        .ok_or_else(|| CliError::validation(format!("scheme.params.{key}: missing")))
}

pub fn classical_id(spec: &SchemeSpec) -> Result<ClassicalEnsemble, CliError> {
    let e = spec.ensemble.ok_or_else(|| CliError::validation("scheme.ensemble: missing"))?;
    let p = &spec.params;
    let alpha = || param(p, "alpha", |p| p.alpha);
    let beta = || param(p, "beta", |p| p.beta);
    let id = match e {
        Ensemble::Gue => ClassicalEnsemble::Gue,
        Ensemble::Wishart => ClassicalEnsemble::Wishart { alpha: alpha()? },
        Ensemble::Jacobi => ClassicalEnsemble::Jacobi { alpha: alpha()?, beta: beta()? },
        Ensemble::Charlier => ClassicalEnsemble::Charlier { alpha: alpha()? },
        Ensemble::Meixner => ClassicalEnsemble::Meixner { alpha: alpha()?, beta: beta()? },
    };
    let used: &[&str] = match e {
        Ensemble::Gue => &[],
        Ensemble::Wishart | Ensemble::Charlier => &["alpha"],
        Ensemble::Jacobi | Ensemble::Meixner => &["alpha", "beta"],
    };
    if let Some(p) = p {
        for (key, present) in [("alpha", p.alpha.is_some()), ("beta", p.beta.is_some())] {
            if present && !used.contains(&key) {
                return Err(CliError::validation(format!("scheme.params.{key}: not a parameter of this ensemble")));
            }
        }
    }
    id.validate()?;
    Ok(id)
}

/// Builds the scheme; multiple-orthogonal paths are generated far enough past
/// `max_n` to cover the truncation and the bound windows up to order `ell`.
pub fn build_scheme(spec: &SchemeSpec, max_n: usize, ell: usize) -> Result<Scheme, CliError> {
    spec.validate()?;
    if spec.ensemble.is_some() {
        return Ok(Box::new(classical_scheme(classical_id(spec)?)?));
    }
    let a = spec.a.clone().unwrap_or_default();
    let q = spec.q.clone().unwrap_or_default();
    let kind = match spec.kind {
        Some(MopFamily::MultipleHermite) => MopKind::Hermite { a },
        Some(MopFamily::MultipleLaguerre) => MopKind::Laguerre { alpha: spec.alpha.unwrap_or(f64::NAN), a },
        None => unreachable!("validated"),
    };
    let len = max_n + 4 * (ell + 1) * (q.len() + 1) + 64;
    let path = path_from_ratios(&q, len)?;
    Ok(Box::new(mop_scheme(&kind, path)?))
}

fn collect<T: Send>(rows: Vec<Result<T, CliError>>) -> Result<Vec<T>, CliError> {
    rows.into_iter().collect()
}

fn trace_rows(pool: &rayon::ThreadPool, c: &SweepConfig) -> Result<Vec<Vec<TraceRow>>, CliError> {
    let scheme = build_scheme(&c.scheme, *c.n.last().unwrap(), c.moments)?;
    let per_n = pool.install(|| {
        c.n.par_iter()
            .map(|&n| -> Result<Vec<TraceRow>, CliError> {
                (0..=c.moments).map(|l| trace_row(scheme.as_ref(), n, l).map_err(CliError::from)).collect()
            })
            .collect::<Vec<_>>()
    });
    collect(per_n)
}

pub fn traces(pool: &rayon::ThreadPool, c: &SweepConfig) -> Result<Artifact, CliError> {
    let rows = trace_rows(pool, c)?;
    let mut t = Table::new(&["N", "ell", "mean", "zero_side", "gap", "gap_bound", "variance", "variance_bound"]);
    for r in rows.iter().flatten() {
        t.push(vec![
            r.n.into(),
            r.ell.into(),
            r.mean.into(),
            r.zero_side.into(),
            r.gap.into(),
            r.gap_bound.into(),
            r.variance.into(),
            r.variance_bound.into(),
        ]);
    }
    Ok(Artifact::Csv(t))
}

/// Least-squares slope of `ln y` against `ln N` over the points with `y > 0`;
/// NaN when fewer than two remain.
pub fn log_log_slope(n: &[usize], y: &[f64]) -> f64 {
    let pts: Vec<(f64, f64)> =
        n.iter().zip(y).filter(|(_, v)| **v > 0.0 && v.is_finite()).map(|(n, v)| ((*n as f64).ln(), v.ln())).collect();
    if pts.len() < 2 {
        return f64::NAN;
    }
    let k = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / k;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / k;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    if sxx == 0.0 {
        f64::NAN
    } else {
        sxy / sxx
    }
}

pub fn gap_sweep(pool: &rayon::ThreadPool, c: &SweepConfig) -> Result<Artifact, CliError> {
    let rows = trace_rows(pool, c)?;
    let mut t = Table::new(&["N", "ell", "mean", "zero_side", "gap", "gap_bound", "slope"]);
    for l in 0..=c.moments {
        let gaps: Vec<f64> = rows.iter().map(|r| r[l].gap).collect();
        let slope = log_log_slope(&c.n, &gaps);
        for r in rows.iter().map(|r| &r[l]) {
            t.push(vec![r.n.into(), l.into(), r.mean.into(), r.zero_side.into(), r.gap.into(), r.gap_bound.into(), slope.into()]);
        }
    }
    Ok(Artifact::Csv(t))
}

pub fn variance_sweep(pool: &rayon::ThreadPool, c: &SweepConfig) -> Result<Artifact, CliError> {
    let rows = trace_rows(pool, c)?;
    let mut t = Table::new(&["N", "ell", "variance", "variance_bound", "slope"]);
    for l in 0..=c.moments {
        let var: Vec<f64> = rows.iter().map(|r| r[l].variance).collect();
        let slope = log_log_slope(&c.n, &var);
        for r in rows.iter().map(|r| &r[l]) {
            t.push(vec![r.n.into(), l.into(), r.variance.into(), r.variance_bound.into(), slope.into()]);
        }
    }
    Ok(Artifact::Csv(t))
}

struct ZeroResult {
    n: usize,
    points: Vec<(f64, f64)>,
    moments: Vec<f64>,
    imag_residual: Vec<f64>,
    max_imag: f64,
}

pub fn zeros(pool: &rayon::ThreadPool, c: &ZerosConfig) -> Result<Artifact, CliError> {
    let scheme = build_scheme(&c.scheme, *c.n.last().unwrap(), 1)?;
    let results = pool.install(|| {
        c.n.par_iter()
            .map(|&n| -> Result<ZeroResult, CliError> {
                let sm = spectrum(&build_truncation(scheme.as_ref(), n, 0)?)?;
                let zm = zero_moments(&sm, c.moments)?;
                Ok(ZeroResult {
                    n,
                    points: sm.points().iter().map(|z| (z.re, z.im)).collect(),
                    moments: zm.moments.into_vec(),
                    imag_residual: zm.imag_residual,
                    max_imag: sm.max_imag(),
                })
            })
            .collect::<Vec<_>>()
    });
    let results = collect(results)?;
    match c.format {
        Format::Csv => {
            let mut t = Table::new(&["N", "index", "re", "im"]);
            for r in &results {
                for (i, (re, im)) in r.points.iter().enumerate() {
                    t.push(vec![r.n.into(), i.into(), (*re).into(), (*im).into()]);
                }
            }
            Ok(Artifact::Csv(t))
        }
        Format::Json => {
            let items: Vec<Value> = results
                .iter()
                .map(|r| {
                    json!({
                        "N": r.n,
                        "moments": nums(&r.moments),
                        "imag_residual": nums(&r.imag_residual),
                        "max_imag": num(r.max_imag),
                    })
                })
                .collect();
            Ok(Artifact::Json(json!({ "results": items })))
        }
    }
}

pub fn kva(pool: &rayon::ThreadPool, c: &KvaConfig) -> Result<Artifact, CliError> {
    let id = classical_id(&c.scheme)?;
    let mix = kva_functions(id);
    if let Some(grid) = &c.density {
        let mut t = Table::new(&["x", "density"]);
        for &x in grid {
            t.push(vec![x.into(), mix.density(x, c.eps)?.into()]);
        }
        return Ok(Artifact::Csv(t));
    }
    let limit: Vec<f64> = (0..=c.moments).map(|l| kva_moment(&mix, l)).collect::<Result<_, _>>()?;
    if c.n.is_empty() {
        let mut t = Table::new(&["ell", "limit_moment"]);
        for (l, m) in limit.iter().enumerate() {
            t.push(vec![l.into(), (*m).into()]);
        }
        return Ok(Artifact::Csv(t));
    }
    let scheme = classical_scheme(id)?;
    let per_n = pool.install(|| {
        c.n.par_iter()
            .map(|&n| -> Result<Vec<f64>, CliError> {
                let sm = spectrum(&build_truncation(&scheme, n, 0)?)?;
                Ok(zero_moments(&sm, c.moments)?.moments.into_vec())
            })
            .collect::<Vec<_>>()
    });
    let per_n = collect(per_n)?;
    let mut t = Table::new(&["N", "ell", "zero_moment", "limit_moment", "abs_diff"]);
    for (n, zm) in c.n.iter().zip(&per_n) {
        for l in 0..=c.moments {
            t.push(vec![(*n).into(), l.into(), zm[l].into(), limit[l].into(), (zm[l] - limit[l]).abs().into()]);
        }
    }
    Ok(Artifact::Csv(t))
}

pub fn free_conv(c: &FreeConvConfig) -> Result<Artifact, CliError> {
    let l = c.moments;
    let atoms = AtomicMeasure::from_parts(&c.atoms, &c.weights)?.moments(l);
    let out = match c.op {
        ConvOp::Add => {
            if c.alpha.is_some() {
                return Err(CliError::validation("alpha: not used by op = add"));
            }
            free_add(&MomentSequence::from_fn(l, semicircle_moment)?, &atoms, l)?
        }
        ConvOp::Mul => {
            let alpha = c.alpha.unwrap_or(1.0);
            free_mul(&MomentSequence::from_fn(l, |k| mp_moment(alpha, k))?, &atoms, l)?
        }
    };
    let mut t = Table::new(&["ell", "moment"]);
    for (k, m) in out.values().iter().enumerate() {
        t.push(vec![k.into(), (*m).into()]);
    }
    Ok(Artifact::Csv(t))
}

fn build_curve(c: &CurveConfig) -> Result<AlgebraicCurve<f64>, CliError> {
    let indexing = match c.indexing {
        Indexing::Product => FactorIndexing::ProductIndex,
        Indexing::Sum => FactorIndexing::SumIndex,
    };
    let alpha = c.alpha.unwrap_or(f64::NAN);
    Ok(match c.kind {
        CurveKind::Hermite => {
            if c.alpha.is_some() {
                return Err(CliError::validation("alpha: not used by hermite curves"));
            }
            curve_hermite(&c.q, &c.a, indexing)?
        }
        CurveKind::Laguerre => curve_laguerre(&c.q, &c.a, &alpha, indexing)?,
        CurveKind::LaguerreEnsemble => {
            if c.indexing != Indexing::Product {
                return Err(CliError::validation("indexing: laguerre-ensemble curves only support product"));
            }
            curve_laguerre_ensemble(&c.q, &c.a, &alpha)?
        }
    })
}

pub fn curve(c: &CurveConfig) -> Result<Artifact, CliError> {
    let curve = build_curve(c)?;
    if c.density.is_some() && c.moments.is_some() {
        return Err(CliError::validation("density/moments: choose one output"));
    }
    if let Some(grid) = &c.density {
        let mut t = Table::new(&["x", "density"]);
        for &x in grid {
            let d = if c.extrapolate {
                stieltjes_density_extrapolated(&curve, x, c.eps)?
            } else {
                stieltjes_density(&curve, x, c.eps)?
            };
            t.push(vec![x.into(), d.into()]);
        }
        return Ok(Artifact::Csv(t));
    }
    if let Some(l) = c.moments {
        let m = curve_moments(&curve, l)?;
        let mut t = Table::new(&["ell", "moment"]);
        for (k, v) in m.values().iter().enumerate() {
            t.push(vec![k.into(), (*v).into()]);
        }
        return Ok(Artifact::Csv(t));
    }
    let coeffs: Vec<Value> = curve.poly().coeffs().iter().map(|row| nums(row)).collect();
    Ok(Artifact::Json(json!({
        "variables": "coefficients[i][j] multiplies z^i w^j",
        "deg_z": curve.poly().deg_z(),
        "deg_w": curve.poly().deg_w(),
        "support_bound": num(curve.support_bound()),
        "coefficients": coeffs,
    })))
}

fn model_spec(c: &SampleConfig) -> Result<MatrixModelSpec, CliError> {
    let alpha = || c.alpha.ok_or_else(|| CliError::validation("alpha: required for wishart models"));
    let no_source = || -> Result<(), CliError> {
        if !c.ratios.is_empty() || !c.atoms.is_empty() {
            return Err(CliError::validation("ratios/atoms: only used by source models"));
        }
        Ok(())
    };
    let spec = match c.model {
        ModelName::Gue => {
            no_source()?;
            if c.alpha.is_some() {
                return Err(CliError::validation("alpha: not used by gue"));
            }
            MatrixModelSpec::gue(c.n)?
        }
        ModelName::Wishart => {
            no_source()?;
            MatrixModelSpec::wishart(c.n, alpha()?)?
        }
        ModelName::GueSource => {
            if c.alpha.is_some() {
                return Err(CliError::validation("alpha: not used by gue-source"));
            }
            MatrixModelSpec::gue_source(c.n, &c.ratios, &c.atoms)?
        }
        ModelName::WishartCov => MatrixModelSpec::wishart_cov(c.n, alpha()?, &c.ratios, &c.atoms)?,
    };
    Ok(spec)
}

pub fn sample(pool: &rayon::ThreadPool, c: &SampleConfig) -> Result<Artifact, CliError> {
    let spec = model_spec(c)?;
    let per = pool.install(|| {
        (0..c.samples as u64)
            .into_par_iter()
            .map(|k| sample_moments(&spec, c.moments, c.seed, k).map_err(CliError::from))
            .collect::<Vec<_>>()
    });
    let stats = aggregate(&collect(per)?)?;
    Ok(Artifact::Json(json!({
        "samples": stats.samples,
        "mean": nums(stats.mean.values()),
        "var": nums(&stats.variance),
        "se": nums(&stats.standard_error),
    })))
}

/// Runs a validated config and returns its artifact.
pub fn execute(config: &ExperimentConfig) -> Result<Artifact, CliError> {
    config.validate()?;
    let pool = thread_pool()?;
    match config {
        ExperimentConfig::Traces(c) => traces(&pool, c),
        ExperimentConfig::GapSweep(c) => gap_sweep(&pool, c),
        ExperimentConfig::VarianceSweep(c) => variance_sweep(&pool, c),
        ExperimentConfig::Zeros(c) | ExperimentConfig::MopZeros(c) => zeros(&pool, c),
        ExperimentConfig::Kva(c) => kva(&pool, c),
        ExperimentConfig::FreeConv(c) => free_conv(c),
        ExperimentConfig::Curve(c) => curve(c),
        ExperimentConfig::Sample(c) => sample(&pool, c),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::output::Cell;

    fn gue() -> SchemeSpec {
        SchemeSpec { ensemble: Some(Ensemble::Gue), ..Default::default() }
    }

    #[test]
    fn slope_of_power_law() {
        let n = [10, 20, 40, 80];
        let y: Vec<f64> = n.iter().map(|n| 3.0 * (*n as f64).powf(-1.5)).collect();
        assert!((log_log_slope(&n, &y) + 1.5).abs() < 1e-12);
        assert!(log_log_slope(&n, &[0.0; 4]).is_nan());
    }

    #[test]
    fn gue_gap_slope_is_minus_one() {
        let c = SweepConfig { scheme: gue(), n: vec![10, 20, 40, 80], moments: 2, output: None };
        let pool = thread_pool().unwrap();
        let Artifact::Csv(t) = gap_sweep(&pool, &c).unwrap() else { panic!() };
        for row in &t.rows {
            let (Cell::Int(n), Cell::Int(l), Cell::Float(gap), Cell::Float(slope)) = (&row[0], &row[1], &row[4], &row[6])
            else {
                panic!()
            };
            match l {
                0 => assert_eq!(*gap, 0.0),
                2 => {
                    assert!((gap - 1.0 / *n as f64).abs() < 1e-12);
                    assert!((slope + 1.0).abs() < 0.01);
                }
                _ => {}
            }
        }
    }

    #[test]
    fn meixner_gap_within_bound() {
        let spec = SchemeSpec {
            ensemble: Some(Ensemble::Meixner),
            params: Some(Params { alpha: Some(0.5), beta: Some(1.0) }),
            ..Default::default()
        };
        let c = SweepConfig { scheme: spec, n: vec![5, 10, 20, 40], moments: 4, output: None };
        let Artifact::Csv(t) = gap_sweep(&thread_pool().unwrap(), &c).unwrap() else { panic!() };
        for row in t.rows.iter().filter(|r| r[1] != Cell::Int(0)) {
            let (Cell::Float(gap), Cell::Float(bound)) = (&row[4], &row[5]) else { panic!() };
            assert!(gap <= bound, "{row:?}");
        }
    }

    #[test]
    fn missing_params_are_named() {
        let spec = SchemeSpec { ensemble: Some(Ensemble::Jacobi), ..Default::default() };
        let e = classical_id(&spec).unwrap_err();
        assert!(e.message.contains("scheme.params.alpha"));
        let spec = SchemeSpec {
            ensemble: Some(Ensemble::Wishart),
            params: Some(Params { alpha: Some(1.0), beta: Some(2.0) }),
            ..Default::default()
        };
        assert!(classical_id(&spec).unwrap_err().message.contains("beta"));
    }
}
