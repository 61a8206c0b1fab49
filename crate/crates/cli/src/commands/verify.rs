//! `verify`: run a simulation and gate the exit code on the checks.

use crate::cli::VerifyArgs;
use crate::commands::checks::CheckStatus;
use crate::commands::simulate::{execute, merge_config, RunOutcome};
use crate::output::emit_json;
use crate::AppError;
use serde_json::json;

pub fn run(args: &VerifyArgs) -> Result<RunOutcome, AppError> {
    let mut cfg = merge_config(&args.run)?;
    if !cfg.verify_lyapunov && !cfg.verify_sandwich {
        cfg.verify_lyapunov = true;
        cfg.verify_sandwich = true;
    }
    let outcome = execute(cfg)?;

    let mut failed: Vec<&str> = Vec::new();
    let checks = outcome
        .checks
        .iter()
        .map(|(name, status, detail)| {
            if *status == CheckStatus::Fail {
                failed.push(name);
            }
            (name.to_string(), detail.clone())
        })
        .collect::<serde_json::Map<_, _>>();
    let report = json!({
        "target": outcome.target.kind.to_string(),
        "t_end": outcome.config.t_end,
        "checks": checks,
        "passed": failed.is_empty(),
    });
    emit_json(&report, None)?;
    if failed.is_empty() {
        Ok(outcome)
    } else {
        Err(AppError::Verification(format!("check(s) failed: {}", failed.join(", "))))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cli::SimulateArgs;

    #[test]
    fn short_run_passes_both_checks() {
        let args = VerifyArgs {
            run: SimulateArgs {
                t_end: Some(3.0),
                sample_every: Some(0.25),
                n_cells: Some(32),
                ..Default::default()
            },
        };
        let outcome = run(&args).unwrap();
        assert_eq!(outcome.checks.len(), 2);
        for (name, status, detail) in &outcome.checks {
            assert_eq!(
                *status,
                CheckStatus::Pass,
                "{name} did not pass: {detail}"
            );
        }
    }
}
