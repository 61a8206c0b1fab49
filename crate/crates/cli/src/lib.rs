//! Command-line laboratory around `acidlab-core`: classification,
//! certificate search, simulation, verification, and parameter-plane scans.
//!
//! Exit-code contract: 0 ok, 2 invalid input, 3 simulation fault,
//! 4 verification failure.

pub mod cli;
pub mod commands;
pub mod config;
pub mod output;
pub mod pool;
pub mod svg;

/// Errors carrying the process exit code.
#[derive(thiserror::Error, Debug)]
pub enum AppError {
    /// Bad parameters, config, or ranges (exit 2).
    #[error("invalid input: {0}")]
    Invalid(String),
    /// The integrator aborted, e.g. on a bound violation (exit 3).
    #[error("simulation fault: {0}")]
    Simulation(String),
    /// An enabled verification check failed (exit 4).
    #[error("verification failed: {0}")]
    Verification(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl AppError {
    pub fn code(&self) -> i32 {
        match self {
            AppError::Invalid(_) | AppError::Io(_) => 2,
            AppError::Simulation(_) => 3,
            AppError::Verification(_) => 4,
        }
    }

    pub fn invalid(msg: impl Into<String>) -> Self {
        AppError::Invalid(msg.into())
    }
}

pub fn run(args: cli::Cli) -> Result<(), AppError> {
    match args.command {
        cli::Command::Classify(a) => commands::classify::run(&a),
        cli::Command::Thresholds(a) => commands::thresholds::run(&a),
        cli::Command::Simulate(a) => commands::simulate::run(&a).map(|_| ()),
        cli::Command::Scan(a) => commands::scan::run(&a).map(|_| ()),
        cli::Command::Verify(a) => commands::verify::run(&a).map(|_| ()),
    }
}
