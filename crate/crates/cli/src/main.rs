use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use dppzeros::config::*;
use dppzeros::{CliError, ExperimentConfig};

#[derive(Parser)]
#[command(name = "dppzeros", version, about = "Moments, zeros and limit laws of recurrence-driven point processes")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum SchemeName {
    Gue,
    Wishart,
    Jacobi,
    Charlier,
    Meixner,
    MultipleHermite,
    MultipleLaguerre,
}

#[derive(Args)]
struct SchemeArgs {
    #[arg(long)]
    scheme: SchemeName,
    /// First ensemble parameter (also the multiple Laguerre exponent).
    #[arg(long, allow_hyphen_values = true)]
    alpha: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    beta: Option<f64>,
    /// Multiple-orthogonal weight parameters, comma separated.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    a: Option<Vec<f64>>,
    /// Multiple-orthogonal ratios, comma separated.
    #[arg(long, value_delimiter = ',')]
    q: Option<Vec<f64>>,
}

impl SchemeArgs {
    fn spec(&self) -> SchemeSpec {
        let classical = |e| {
            let params = (self.alpha.is_some() || self.beta.is_some())
                .then_some(Params { alpha: self.alpha, beta: self.beta });
            SchemeSpec { ensemble: Some(e), params, a: self.a.clone(), q: self.q.clone(), ..Default::default() }
        };
        let mop = |k| SchemeSpec {
            kind: Some(k),
            a: self.a.clone(),
            q: self.q.clone(),
            alpha: self.alpha,
            params: self.beta.map(|b| Params { alpha: None, beta: Some(b) }),
            ..Default::default()
        };
        match self.scheme {
            SchemeName::Gue => classical(Ensemble::Gue),
            SchemeName::Wishart => classical(Ensemble::Wishart),
            SchemeName::Jacobi => classical(Ensemble::Jacobi),
            SchemeName::Charlier => classical(Ensemble::Charlier),
            SchemeName::Meixner => classical(Ensemble::Meixner),
            SchemeName::MultipleHermite => mop(MopFamily::MultipleHermite),
            SchemeName::MultipleLaguerre => mop(MopFamily::MultipleLaguerre),
        }
    }
}

#[derive(Args)]
struct SweepArgs {
    #[command(flatten)]
    scheme: SchemeArgs,
    /// Matrix sizes, comma separated and ascending.
    #[arg(long, value_delimiter = ',', required = true)]
    n: Vec<usize>,
    /// Largest moment order L.
    #[arg(long)]
    moments: usize,
    #[arg(long)]
    output: Option<String>,
}

impl SweepArgs {
    fn config(self) -> SweepConfig {
        SweepConfig { scheme: self.scheme.spec(), n: self.n, moments: self.moments, output: self.output }
    }
}

#[derive(Args)]
struct ZerosArgs {
    #[command(flatten)]
    sweep: SweepArgs,
    /// `csv` lists the zeros, `json` writes the moment summary.
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
}

impl ZerosArgs {
    fn config(self) -> ZerosConfig {
        let format = self.format;
        let s = self.sweep.config();
        ZerosConfig { scheme: s.scheme, n: s.n, moments: s.moments, format, output: s.output }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Trace table: mean, zero-side, gap, variance and bounds per (N, ell).
    Traces(SweepArgs),
    /// Zeros of the average characteristic polynomial.
    Zeros(ZerosArgs),
    /// |gap| against its bound, with the log-log slope in N.
    GapSweep(SweepArgs),
    /// Variance against its bound, with the log-log slope in N.
    VarianceSweep(SweepArgs),
    /// Limit-law moments (against zero moments when --n is given) or density.
    Kva {
        #[command(flatten)]
        scheme: SchemeArgs,
        #[arg(long, value_delimiter = ',')]
        n: Vec<usize>,
        #[arg(long, default_value_t = 6)]
        moments: usize,
        /// Evaluate the density at these points instead.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        density: Option<Vec<f64>>,
        #[arg(long, default_value_t = 1e-6)]
        eps: f64,
        #[arg(long)]
        output: Option<String>,
    },
    /// Zeros of multiple orthogonal polynomials along a ratio path.
    MopZeros(ZerosArgs),
    /// Free convolution moments: semicircle ⊞ atoms or MP(alpha) ⊠ atoms.
    FreeConv {
        #[arg(long, value_enum)]
        op: ConvOp,
        #[arg(long)]
        alpha: Option<f64>,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
        atoms: Vec<f64>,
        #[arg(long, value_delimiter = ',', required = true)]
        weights: Vec<f64>,
        #[arg(long)]
        moments: usize,
        #[arg(long)]
        output: Option<String>,
    },
    /// Algebraic curve of the limiting Cauchy transform.
    Curve {
        #[arg(long, value_enum)]
        kind: CurveKind,
        #[arg(long, value_delimiter = ',', required = true)]
        q: Vec<f64>,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
        a: Vec<f64>,
        #[arg(long)]
        alpha: Option<f64>,
        #[arg(long, value_enum, default_value_t = Indexing::Product)]
        indexing: Indexing,
        /// Density at these points (CSV).
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        density: Option<Vec<f64>>,
        #[arg(long, default_value_t = 1e-6)]
        eps: f64,
        #[arg(long)]
        extrapolate: bool,
        /// Contour moments up to this order (CSV).
        #[arg(long)]
        moments: Option<usize>,
        #[arg(long)]
        output: Option<String>,
    },
    /// Monte-Carlo moments of a matrix model.
    Sample {
        #[arg(long, value_enum)]
        model: ModelName,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        alpha: Option<f64>,
        #[arg(long, value_delimiter = ',')]
        ratios: Vec<f64>,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        atoms: Vec<f64>,
        #[arg(long)]
        samples: usize,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        moments: usize,
        #[arg(long)]
        output: Option<String>,
    },
    /// Run a JSON config file.
    Run { config: String },
}

fn config_of(command: Command) -> Result<ExperimentConfig, CliError> {
    let cfg = match command {
        Command::Traces(a) => ExperimentConfig::Traces(a.config()),
        Command::Zeros(a) => ExperimentConfig::Zeros(a.config()),
        Command::GapSweep(a) => ExperimentConfig::GapSweep(a.config()),
        Command::VarianceSweep(a) => ExperimentConfig::VarianceSweep(a.config()),
        Command::MopZeros(a) => ExperimentConfig::MopZeros(a.config()),
        Command::Kva { scheme, n, moments, density, eps, output } => {
            ExperimentConfig::Kva(KvaConfig { scheme: scheme.spec(), n, moments, density, eps, output })
        }
        Command::FreeConv { op, alpha, atoms, weights, moments, output } => {
            ExperimentConfig::FreeConv(FreeConvConfig { op, alpha, atoms, weights, moments, output })
        }
        Command::Curve { kind, q, a, alpha, indexing, density, eps, extrapolate, moments, output } => {
            ExperimentConfig::Curve(CurveConfig { kind, q, a, alpha, indexing, density, eps, extrapolate, moments, output })
        }
        Command::Sample { model, n, alpha, ratios, atoms, samples, seed, moments, output } => {
            ExperimentConfig::Sample(SampleConfig { model, n, alpha, ratios, atoms, samples, seed, moments, output })
        }
        Command::Run { config } => {
            let text = std::fs::read_to_string(&config).map_err(|e| CliError::io(format!("{config}: {e}")))?;
            return ExperimentConfig::from_json(&text);
        }
    };
    cfg.validate()?;
    Ok(cfg)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match config_of(cli.command).and_then(|cfg| dppzeros::run(&cfg)) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("dppzeros: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
