//! Free additive and multiplicative convolution: truncated transform series
//! and algebraic curves for the limiting Cauchy transforms.

pub mod curve;
pub mod series;

pub use curve::{
    curve_hermite, curve_laguerre, curve_laguerre_ensemble, curve_moments, solve_g, stieltjes_density,
    stieltjes_density_extrapolated, AlgebraicCurve, BiPoly, CurveScalar, FactorIndexing,
};
pub use series::{free_add, free_mul, r_transform, s_transform, series_compose_inverse, FormalSeries};
