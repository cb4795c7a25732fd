//! Command-line orchestration for `dppzeros-core`: configs, sweeps and
//! artifact writing.

pub mod commands;
pub mod config;
pub mod error;
pub mod output;

pub use config::ExperimentConfig;
pub use error::CliError;

/// Executes `config` and writes its artifact to the configured output
/// (stdout when none).
pub fn run(config: &ExperimentConfig) -> Result<(), CliError> {
    let artifact = commands::execute(config)?;
    let text = artifact.render(&output::header(config));
    output::write(&text, config.output())
}
