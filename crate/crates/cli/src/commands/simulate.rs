//! `simulate`: run the solver, write artifacts, optionally run checks.

use crate::cli::SimulateArgs;
use crate::commands::checks::{self, CheckStatus};
use crate::commands::classify;
use crate::config::{load_json, RunConfig, TargetSelector};
use crate::output::{emit_json, write_aux_csv, write_snapshot_csv, write_trajectory_csv};
use crate::svg::{line_plot, Series};
use crate::AppError;
use acidlab_core::model::{
    heterogeneous_state, homogeneous_tumor_state, ModelParams, SteadyState, SteadyStateKind,
};
use acidlab_core::pde::{simulate, Grid1D, SimConfig, SimulateError, Trajectory};
use acidlab_core::regimes::classify_global;
use acidlab_core::util::linear_fit;
use serde_json::{json, Value};
use std::path::Path;
use std::time::Instant;

/// Everything a run produces, reused by `verify`.
pub struct RunOutcome {
    pub config: RunConfig,
    pub params: ModelParams,
    pub grid: Grid1D,
    pub target: SteadyState,
    pub trajectory: Trajectory,
    pub dt_est: f64,
    /// (check name, enabled status, detail JSON) for each verification run.
    pub checks: Vec<(&'static str, CheckStatus, Value)>,
    pub summary: Value,
}

/// Folds CLI flags into the (possibly file-loaded) run configuration.
pub fn merge_config(args: &SimulateArgs) -> Result<RunConfig, AppError> {
    let mut cfg: RunConfig = load_json(args.config.as_deref())?;
    classify::apply_param_flags(&mut cfg.params, &args.params);
    if let Some(n) = args.n_cells {
        cfg.grid.n_cells = n;
    }
    if let Some(l) = args.length {
        cfg.grid.length = l;
    }
    if let Some(t) = args.t_end {
        cfg.t_end = t;
    }
    if let Some(s) = args.sample_every {
        cfg.sample_every = s;
    }
    if let Some(s) = args.snapshot_every {
        cfg.snapshot_every = Some(s);
    }
    if let Some(s) = args.seed {
        cfg.init.seed = s;
    }
    if let Some(a) = args.amplitude {
        cfg.init.amplitude = a;
    }
    if let Some(t) = &args.target {
        cfg.target = match t.as_str() {
            "auto" => TargetSelector::Auto,
            "heterogeneous" => TargetSelector::Heterogeneous,
            "homogeneous_tumor" => TargetSelector::HomogeneousTumor,
            "healthy" => TargetSelector::Healthy,
            other => {
                return Err(AppError::invalid(format!(
                    "unknown target '{other}'; expected auto, heterogeneous, homogeneous_tumor or healthy"
                )))
            }
        };
    }
    if let Some(d) = &args.out_dir {
        cfg.output_dir = Some(d.display().to_string());
    }
    cfg.svg |= args.svg;
    cfg.verify_lyapunov |= args.verify_lyapunov;
    cfg.verify_sandwich |= args.verify_sandwich;

    if !(cfg.t_end > 0.0) {
        return Err(AppError::invalid("t_end must be positive"));
    }
    if !(cfg.sample_every > 0.0) {
        return Err(AppError::invalid("sample_every must be positive"));
    }
    if let Some(s) = cfg.snapshot_every {
        if !(s > 0.0) {
            return Err(AppError::invalid("snapshot_every must be positive"));
        }
    }
    Ok(cfg)
}

fn resolve_target(p: &ModelParams, sel: TargetSelector) -> Result<SteadyState, AppError> {
    let kind = match sel {
        TargetSelector::Heterogeneous => SteadyStateKind::Heterogeneous,
        TargetSelector::HomogeneousTumor => SteadyStateKind::HomogeneousTumor,
        TargetSelector::Healthy => SteadyStateKind::Healthy,
        TargetSelector::Auto => classify_global(p).predicted_attractor.ok_or_else(|| {
            AppError::invalid(
                "classification predicts no attractor at this point; pass --target explicitly",
            )
        })?,
    };
    match kind {
        SteadyStateKind::Trivial => Ok(SteadyState::trivial()),
        SteadyStateKind::Healthy => Ok(SteadyState::healthy()),
        SteadyStateKind::HomogeneousTumor => Ok(homogeneous_tumor_state(p)),
        SteadyStateKind::Heterogeneous => {
            heterogeneous_state(p).map_err(|e| AppError::invalid(e.to_string()))
        }
    }
}

/// Slope of ln(max component deviation) over the trailing half of the samples.
///
/// Samples within 1000x of the final value are dropped first: a fully
/// converged run flatlines at the discrete fixed point's rounding-level
/// offset, which would otherwise flatten the fit.
fn decay_rate(traj: &Trajectory) -> Option<(f64, f64)> {
    let last = traj.samples.last()?;
    let floor = 1e3 * last.linf_u.max(last.linf_v).max(last.linf_w).max(1e-300);
    let collect = |floor: f64| -> Vec<(f64, f64)> {
        traj.samples
            .iter()
            .filter_map(|s| {
                let m = s.linf_u.max(s.linf_v).max(s.linf_w);
                (m > floor).then(|| (s.t, m.ln()))
            })
            .collect()
    };
    let mut pts = collect(floor);
    if pts.len() < 4 {
        // short run that never plateaued; fit whatever is there
        pts = collect(0.0);
    }
    let tail = &pts[pts.len() / 2..];
    let (ts, ys): (Vec<f64>, Vec<f64>) = tail.iter().copied().unzip();
    linear_fit(&ts, &ys).map(|(_, slope, r2)| (slope, r2))
}

/// Runs the full pipeline for a merged configuration.
pub fn execute(cfg: RunConfig) -> Result<RunOutcome, AppError> {
    let p = cfg.params.build()?;
    let cls = classify_global(&p);
    let target = resolve_target(&p, cfg.target)?;
    let grid = Grid1D::new(cfg.grid.length, cfg.grid.n_cells)
        .map_err(|e| AppError::invalid(e.to_string()))?;
    let init = cfg.init.build();

    let wants_snapshots = cfg.verify_lyapunov || cfg.verify_sandwich;
    let snapshot_every = cfg.snapshot_every.or(wants_snapshots.then_some(cfg.sample_every));
    let sim_cfg = SimConfig { t_end: cfg.t_end, sample_every: cfg.sample_every, snapshot_every };

    let started = Instant::now();
    let traj = simulate(&p, &init, &grid, &sim_cfg, &target).map_err(|e| match e {
        SimulateError::Init(e) => AppError::invalid(e.to_string()),
        SimulateError::Bound(e) => AppError::Simulation(e.to_string()),
    })?;
    let wall_seconds = started.elapsed().as_secs_f64();
    let dt_est = cfg.t_end / traj.steps.max(1) as f64;

    if target.kind == SteadyStateKind::Healthy && cls.requires_v0_le_one {
        let max_v0 = traj.snapshots[0].v.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        if max_v0 > 1.0 {
            eprintln!(
                "warning: healthy-state convergence is only guaranteed for initial acid \
                 producers <= 1, but max v(.,0) = {max_v0}"
            );
        }
    }

    let mut checks_out: Vec<(&'static str, CheckStatus, Value)> = Vec::new();
    if cfg.verify_lyapunov {
        let (st, detail) = checks::lyapunov_check(&p, &target, &traj, &grid, dt_est);
        checks_out.push(("lyapunov", st, detail));
    }
    if cfg.verify_sandwich {
        let (st, detail) =
            checks::sandwich_check(&p, &target, &traj, &grid, dt_est, cfg.t_end, cfg.sample_every);
        checks_out.push(("sandwich", st, detail));
    }

    let rate = decay_rate(&traj);
    let last = traj.samples.last().expect("at least one sample");
    let mut summary = json!({
        "params": {
            "D": p.diffusion, "d1": p.d1, "d2": p.d2, "r": p.r, "c": p.c,
            "a1": p.a1, "a2": p.a2,
        },
        "case_tag": cls.case_tag.to_string(),
        "target": {
            "kind": target.kind.to_string(),
            "values": [target.u_star, target.v_star, target.w_star],
        },
        "grid": { "length": grid.length, "n_cells": grid.n_cells, "h": grid.h },
        "t_end": cfg.t_end,
        "steps": traj.steps,
        "dt_mean": dt_est,
        "wall_seconds": wall_seconds,
        "final": {
            "t": last.t,
            "linf_u": last.linf_u, "linf_v": last.linf_v, "linf_w": last.linf_w,
            "l2_u": last.l2_u, "l2_v": last.l2_v, "l2_w": last.l2_w,
            "dirichlet_w": last.dirichlet_w,
        },
        "decay_rate": rate.map(|(s, _)| s),
        "decay_r_squared": rate.map(|(_, r2)| r2),
    });
    let checks_json: serde_json::Map<String, Value> = checks_out
        .iter()
        .map(|(name, _, detail)| (name.to_string(), detail.clone()))
        .collect();
    if !checks_json.is_empty() {
        summary["checks"] = Value::Object(checks_json);
    }

    if let Some(dir) = &cfg.output_dir {
        write_artifacts(Path::new(dir), &cfg, &p, &grid, &target, &traj, &summary)?;
    }

    Ok(RunOutcome {
        config: cfg,
        params: p,
        grid,
        target,
        trajectory: traj,
        dt_est,
        checks: checks_out,
        summary,
    })
}

fn write_artifacts(
    dir: &Path,
    cfg: &RunConfig,
    p: &ModelParams,
    grid: &Grid1D,
    target: &SteadyState,
    traj: &Trajectory,
    summary: &Value,
) -> Result<(), AppError> {
    std::fs::create_dir_all(dir)?;
    write_trajectory_csv(&dir.join("trajectory.csv"), &traj.samples)?;
    let last_snap = traj.snapshots.last().expect("at least one snapshot");
    write_snapshot_csv(&dir.join("snapshot.csv"), last_snap, grid)?;
    if cfg.verify_sandwich {
        if let Some(aux) =
            checks::sandwich_aux_trajectory(p, target, traj, cfg.t_end, cfg.sample_every)
        {
            write_aux_csv(&dir.join("aux.csv"), &aux)?;
        }
    }
    emit_json(summary, Some(&dir.join("summary.json")))?;
    if cfg.svg {
        let series = [
            Series {
                name: "|u - u*|_inf",
                color: "#c02f1d",
                points: traj.samples.iter().map(|s| (s.t, s.linf_u)).collect(),
            },
            Series {
                name: "|v - v*|_inf",
                color: "#1d6fc0",
                points: traj.samples.iter().map(|s| (s.t, s.linf_v)).collect(),
            },
            Series {
                name: "|w - w*|_inf",
                color: "#1d9a4f",
                points: traj.samples.iter().map(|s| (s.t, s.linf_w)).collect(),
            },
        ];
        let svg = line_plot("deviation norms", "t", "log10 norm", &series, true);
        std::fs::write(dir.join("norms.svg"), svg)?;
    }
    Ok(())
}

pub fn run(args: &SimulateArgs) -> Result<RunOutcome, AppError> {
    let cfg = merge_config(args)?;
    let print_summary = cfg.output_dir.is_none();
    let outcome = execute(cfg)?;
    if print_summary {
        emit_json(&outcome.summary, None)?;
    }
    Ok(outcome)
}
