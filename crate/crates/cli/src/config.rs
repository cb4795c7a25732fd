//! Experiment configuration. Every command can be driven from flags or from a
//! JSON file; both routes produce the same `ExperimentConfig`, whose canonical
//! serialisation is hashed into the artifact header.

use serde::{Deserialize, Serialize};

use crate::error::CliError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "command", rename_all = "kebab-case")]
pub enum ExperimentConfig {
    Traces(SweepConfig),
    Zeros(ZerosConfig),
    GapSweep(SweepConfig),
    VarianceSweep(SweepConfig),
    Kva(KvaConfig),
    MopZeros(ZerosConfig),
    FreeConv(FreeConvConfig),
    Curve(CurveConfig),
    Sample(SampleConfig),
}

impl ExperimentConfig {
    pub fn name(&self) -> &'static str {
        match self {
            ExperimentConfig::Traces(_) => "traces",
            ExperimentConfig::Zeros(_) => "zeros",
            ExperimentConfig::GapSweep(_) => "gap-sweep",
            ExperimentConfig::VarianceSweep(_) => "variance-sweep",
            ExperimentConfig::Kva(_) => "kva",
            ExperimentConfig::MopZeros(_) => "mop-zeros",
            ExperimentConfig::FreeConv(_) => "free-conv",
            ExperimentConfig::Curve(_) => "curve",
            ExperimentConfig::Sample(_) => "sample",
        }
    }

    pub fn output(&self) -> Option<&str> {
        match self {
            ExperimentConfig::Traces(c) | ExperimentConfig::GapSweep(c) | ExperimentConfig::VarianceSweep(c) => {
                c.output.as_deref()
            }
            ExperimentConfig::Zeros(c) | ExperimentConfig::MopZeros(c) => c.output.as_deref(),
            ExperimentConfig::Kva(c) => c.output.as_deref(),
            ExperimentConfig::FreeConv(c) => c.output.as_deref(),
            ExperimentConfig::Curve(c) => c.output.as_deref(),
            ExperimentConfig::Sample(c) => c.output.as_deref(),
        }
    }

    /// Parses a JSON config. Unknown keys and type errors are validation
    /// errors; serde's message names the key.
    pub fn from_json(text: &str) -> Result<Self, CliError> {
        let cfg: Self = serde_json::from_str(text).map_err(|e| CliError::validation(format!("config: {e}")))?;
        cfg.validate()?;
        Ok(cfg)
    }

    /// Canonical form: compact JSON in declaration order.
    pub fn canonical(&self) -> String {
        serde_json::to_string(self).expect("config serialises")
    }

    pub fn validate(&self) -> Result<(), CliError> {
        match self {
            ExperimentConfig::Traces(c) | ExperimentConfig::GapSweep(c) | ExperimentConfig::VarianceSweep(c) => {
                c.scheme.validate()?;
                check_n_list(&c.n)
            }
            ExperimentConfig::Zeros(c) | ExperimentConfig::MopZeros(c) => {
                c.scheme.validate()?;
                if matches!(self, ExperimentConfig::MopZeros(_)) && c.scheme.kind.is_none() {
                    return Err(CliError::validation("scheme.kind: mop-zeros needs a multiple-hermite or multiple-laguerre scheme"));
                }
                check_n_list(&c.n)
            }
            ExperimentConfig::Kva(c) => {
                c.scheme.validate()?;
                if c.scheme.ensemble.is_none() {
                    return Err(CliError::validation("scheme.ensemble: kva needs a classical ensemble"));
                }
                if !c.n.is_empty() {
                    check_n_list(&c.n)?;
                }
                Ok(())
            }
            ExperimentConfig::FreeConv(c) => {
                if c.atoms.is_empty() || c.atoms.len() != c.weights.len() {
                    return Err(CliError::validation("atoms/weights: need equal, nonzero lengths"));
                }
                Ok(())
            }
            ExperimentConfig::Curve(c) => {
                if c.q.is_empty() || c.q.len() != c.a.len() {
                    return Err(CliError::validation("q/a: need equal, nonzero lengths"));
                }
                if c.kind != CurveKind::Hermite && c.alpha.is_none() {
                    return Err(CliError::validation("alpha: required for laguerre curves"));
                }
                Ok(())
            }
            ExperimentConfig::Sample(c) => {
                if c.samples < 2 {
                    return Err(CliError::validation("samples: need at least 2"));
                }
                Ok(())
            }
        }
    }
}

fn check_n_list(n: &[usize]) -> Result<(), CliError> {
    if n.is_empty() {
        return Err(CliError::validation("n: list is empty"));
    }
    if n.contains(&0) {
        return Err(CliError::validation("n: entries must be >= 1"));
    }
    if n.windows(2).any(|w| w[0] >= w[1]) {
        return Err(CliError::validation("n: list must be strictly ascending"));
    }
    Ok(())
}

/// Either a classical ensemble `{"ensemble": .., "params": {..}}` or a
/// multiple-orthogonal family `{"kind": .., "a": [..], "q": [..], "alpha": ..}`.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SchemeSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ensemble: Option<Ensemble>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub params: Option<Params>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kind: Option<MopFamily>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub a: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub q: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<f64>,
}

impl SchemeSpec {
    pub fn validate(&self) -> Result<(), CliError> {
        match (&self.ensemble, &self.kind) {
            (Some(_), Some(_)) => Err(CliError::validation("scheme: give either `ensemble` or `kind`, not both")),
            (None, None) => Err(CliError::validation("scheme: missing `ensemble` or `kind`")),
            (Some(_), None) => {
                for (key, present) in [("a", self.a.is_some()), ("q", self.q.is_some()), ("alpha", self.alpha.is_some())] {
                    if present {
                        return Err(CliError::validation(format!(
                            "scheme.{key}: not used by classical ensembles (put parameters under `params`)"
                        )));
                    }
                }
                Ok(())
            }
            (None, Some(kind)) => {
                if self.params.is_some() {
                    return Err(CliError::validation("scheme.params: not used by multiple-orthogonal families"));
                }
                let a = self.a.as_ref().ok_or_else(|| CliError::validation("scheme.a: missing"))?;
                let q = self.q.as_ref().ok_or_else(|| CliError::validation("scheme.q: missing"))?;
                if a.len() != q.len() {
                    return Err(CliError::validation("scheme.a/scheme.q: lengths differ"));
                }
                if *kind == MopFamily::MultipleLaguerre && self.alpha.is_none() {
                    return Err(CliError::validation("scheme.alpha: missing for multiple-laguerre"));
                }
                if *kind == MopFamily::MultipleHermite && self.alpha.is_some() {
                    return Err(CliError::validation("scheme.alpha: not used by multiple-hermite"));
                }
                Ok(())
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Ensemble {
    Gue,
    Wishart,
    Jacobi,
    Charlier,
    Meixner,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum MopFamily {
    MultipleHermite,
    MultipleLaguerre,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Params {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub beta: Option<f64>,
}

/// traces, gap-sweep and variance-sweep.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    pub scheme: SchemeSpec,
    pub n: Vec<usize>,
    pub moments: usize,
    #[serde(default)]
    pub output: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

/// zeros and mop-zeros. CSV lists the zeros; JSON is the summary.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ZerosConfig {
    pub scheme: SchemeSpec,
    pub n: Vec<usize>,
    pub moments: usize,
    #[serde(default)]
    pub format: Format,
    #[serde(default)]
    pub output: Option<String>,
}

/// Limit-law moments against zero moments at each `N`, or the limiting
/// density on a grid when `density` is given.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KvaConfig {
    pub scheme: SchemeSpec,
    #[serde(default)]
    pub n: Vec<usize>,
    pub moments: usize,
    #[serde(default)]
    pub density: Option<Vec<f64>>,
    #[serde(default = "default_eps")]
    pub eps: f64,
    #[serde(default)]
    pub output: Option<String>,
}

fn default_eps() -> f64 {
    1e-6
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum ConvOp {
    /// Semicircle ⊞ atoms.
    Add,
    /// Marchenko–Pastur(alpha) ⊠ atoms.
    Mul,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FreeConvConfig {
    pub op: ConvOp,
    #[serde(default)]
    pub alpha: Option<f64>,
    pub atoms: Vec<f64>,
    pub weights: Vec<f64>,
    pub moments: usize,
    #[serde(default)]
    pub output: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum CurveKind {
    Hermite,
    /// Unit-mean `rho_alpha` against `sum q_i delta_(1/a_i)`.
    Laguerre,
    /// Zero law of the multiple Laguerre ensemble: MP(1+alpha) against
    /// `sum q_i delta_(1/a_i)`.
    LaguerreEnsemble,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Indexing {
    #[default]
    Product,
    Sum,
}

/// Curve coefficients (JSON), or a density grid / moment table (CSV).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CurveConfig {
    pub kind: CurveKind,
    pub q: Vec<f64>,
    pub a: Vec<f64>,
    #[serde(default)]
    pub alpha: Option<f64>,
    #[serde(default)]
    pub indexing: Indexing,
    #[serde(default)]
    pub density: Option<Vec<f64>>,
    #[serde(default = "default_eps")]
    pub eps: f64,
    /// Richardson step `2 f(eps/2) - f(eps)` on the density.
    #[serde(default)]
    pub extrapolate: bool,
    #[serde(default)]
    pub moments: Option<usize>,
    #[serde(default)]
    pub output: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum ModelName {
    Gue,
    Wishart,
    GueSource,
    WishartCov,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SampleConfig {
    pub model: ModelName,
    pub n: usize,
    #[serde(default)]
    pub alpha: Option<f64>,
    #[serde(default)]
    pub ratios: Vec<f64>,
    #[serde(default)]
    pub atoms: Vec<f64>,
    pub samples: usize,
    pub seed: u64,
    pub moments: usize,
    #[serde(default)]
    pub output: Option<String>,
}
