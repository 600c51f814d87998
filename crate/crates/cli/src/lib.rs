//! Command-line front end: expression parser, JSON documents, subcommand
//! dispatch and reports.

pub mod commands;
pub mod document;
pub mod parser;
pub mod report;

use std::path::PathBuf;

use clap::{Parser, ValueEnum};

pub use commands::run;
pub use document::Document;
pub use parser::{parse_expression, Value};
pub use report::Report;

/// Failures that prevent a verdict. All map to exit code 2.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error(transparent)]
    Engine(#[from] intlocus::Error),
}

impl CliError {
    pub const EXIT_CODE: i32 = 2;
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Command {
    CheckIntegrable,
    CheckDecomposable,
    Rank,
    Cone,
    Membership,
    ClassifyLocus,
    PencilTheta,
    CommonTheta,
    WebCurvature,
    RescaleTheta,
    FirstIntegral,
    AxisIdentity,
    GvVerify,
    ClassifyTransverse,
    VeronesePoly,
    VeroneseCheck,
    MinimalDegree,
    GeneralPosition,
    Schouten,
    PoissonCheck,
    PencilPoisson,
    ScalingDefect,
    BivToForm,
}

impl Command {
    pub fn name(self) -> String {
        self.to_possible_value().expect("no skipped variants").get_name().to_string()
    }
}

/// Exact integrability, transverse-structure and Poisson checks on rational
/// forms. Exit codes: 0 holds/success, 1 property fails, 2 input error.
#[derive(Clone, Debug, Parser)]
#[command(name = "intlocus", version)]
pub struct Cli {
    #[arg(value_enum)]
    pub command: Command,
    /// JSON document with variables and named definitions.
    #[arg(long, short = 'i')]
    pub input: Option<PathBuf>,
    /// Emit the report as JSON.
    #[arg(long)]
    pub json: bool,
    /// Seed for randomized cross-checks and sample generation.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Apply the check to every applicable definition.
    #[arg(long)]
    pub all: bool,
    /// Named one-form (or form for the commands taking any degree).
    #[arg(long)]
    pub form: Option<String>,
    /// Comma-separated names of forms.
    #[arg(long, value_delimiter = ',')]
    pub forms: Vec<String>,
    /// Named space of one-forms.
    #[arg(long)]
    pub space: Option<String>,
    /// Named family `ω₀, …, ω_k` for the Veronese commands.
    #[arg(long)]
    pub family: Option<String>,
    /// Named Godbillon–Vey sequence.
    #[arg(long)]
    pub sequence: Option<String>,
    /// Named bivector.
    #[arg(long)]
    pub bivector: Option<String>,
    /// Second named bivector.
    #[arg(long)]
    pub other: Option<String>,
    /// Named group in the `poisson` table.
    #[arg(long)]
    pub group: Option<String>,
    /// Named function.
    #[arg(long)]
    pub func: Option<String>,
    /// Comma-separated names of functions.
    #[arg(long, value_delimiter = ',')]
    pub funcs: Vec<String>,
    /// Named one-form θ.
    #[arg(long)]
    pub theta: Option<String>,
    /// Named vector or inline list such as `1,0,1/2`.
    #[arg(long)]
    pub vector: Option<String>,
    /// Sample parameters such as `0,1,-1,1/2`.
    #[arg(long)]
    pub samples: Option<String>,
    /// Projective points such as `1:0:0;0:1:0;0:0:1;1:1:1`.
    #[arg(long)]
    pub points: Option<String>,
    /// Degree of a curve.
    #[arg(long)]
    pub degree: Option<u32>,
    /// Dimension of the linear span.
    #[arg(long)]
    pub span: Option<u32>,
    /// Dimension of the variety.
    #[arg(long)]
    pub dim: Option<u32>,
    /// Number of random samples for seeded cross-checks.
    #[arg(long, default_value_t = 16)]
    pub trials: usize,
}

/// Runs a command and renders its output; returns the text and exit code.
pub fn execute(cli: &Cli) -> (String, i32) {
    match run(cli) {
        Ok(report) => {
            let text = if cli.json {
                format!("{}\n", serde_json::to_string_pretty(&report.to_json()).expect("serializable"))
            } else {
                report.to_text()
            };
            (text, report.exit_code())
        }
        Err(e) => {
            let text = if cli.json {
                let body = serde_json::json!({
                    "command": cli.command.name(),
                    "error": e.to_string(),
                    "exit_code": CliError::EXIT_CODE,
                });
                format!("{}\n", serde_json::to_string_pretty(&body).expect("serializable"))
            } else {
                format!("error: {e}\n")
            };
            (text, CliError::EXIT_CODE)
        }
    }
}
