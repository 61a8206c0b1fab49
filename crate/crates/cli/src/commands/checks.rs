//! Shared verification checks over a finished trajectory.

use acidlab_core::auxode::{
    aux_init_c, aux_init_h, aux_init_r, build_envelope, simulate_aux, AuxTrajectory,
};
use acidlab_core::lyapunov::{
    check_decay, eval_functionals, find_certificate, DecayCheckConfig, RegimeTag,
};
use acidlab_core::model::{ModelParams, SteadyState, SteadyStateKind};
use acidlab_core::pde::{Grid1D, Trajectory};
use serde_json::{json, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CheckStatus {
    Pass,
    Fail,
    Skipped,
}

impl CheckStatus {
    pub fn as_str(&self) -> &'static str {
        match self {
            CheckStatus::Pass => "pass",
            CheckStatus::Fail => "fail",
            CheckStatus::Skipped => "skipped",
        }
    }
}

pub fn regime_of(kind: SteadyStateKind) -> Option<RegimeTag> {
    match kind {
        SteadyStateKind::Heterogeneous => Some(RegimeTag::Heterogeneous),
        SteadyStateKind::HomogeneousTumor => Some(RegimeTag::HomogeneousTumor),
        SteadyStateKind::Healthy => Some(RegimeTag::Healthy),
        SteadyStateKind::Trivial => None,
    }
}

/// Certificate search + energy decay along the trajectory snapshots.
pub fn lyapunov_check(
    p: &ModelParams,
    target: &SteadyState,
    traj: &Trajectory,
    grid: &Grid1D,
    dt_est: f64,
) -> (CheckStatus, Value) {
    let Some(regime) = regime_of(target.kind) else {
        return (CheckStatus::Skipped, json!({"status": "skipped", "reason": "trivial target"}));
    };
    let cert = match find_certificate(regime, p) {
        Ok(c) => c,
        Err(e) => {
            return (
                CheckStatus::Skipped,
                json!({"status": "skipped", "reason": e.to_string()}),
            );
        }
    };
    let samples = match eval_functionals(&traj.snapshots, grid.h, &cert, target, p) {
        Ok(s) => s,
        Err(e) => {
            return (CheckStatus::Fail, json!({"status": "fail", "reason": e.to_string()}));
        }
    };
    let cfg = DecayCheckConfig { dx: grid.h, dt: dt_est, ..Default::default() };
    let report = check_decay(&samples, &cert, &cfg);
    let e0 = samples.first().map(|s| s.e).unwrap_or(0.0);
    let e_end = samples.last().map(|s| s.e).unwrap_or(0.0);
    let status = if report.pass { CheckStatus::Pass } else { CheckStatus::Fail };
    let value = json!({
        "status": status.as_str(),
        "certificate": {
            "regime": regime.to_string(),
            "beta": cert.beta,
            "eta": cert.eta,
            "epsilon": cert.epsilon,
            "minors": [cert.minors.0, cert.minors.1, cert.minors.2],
        },
        "fraction_ok": report.fraction_ok,
        "n_checked": report.n_checked,
        "fitted_rate": report.fitted_rate,
        "r_squared": report.r_squared,
        "energy_initial": e0,
        "energy_final": e_end,
        "energy_ratio": if e0 > 0.0 { Some(e_end / e0) } else { None },
        "violation_samples": report.violations.iter().take(10).collect::<Vec<_>>(),
    });
    (status, value)
}

/// Upper/lower-solution sandwich of the snapshots, with the envelope built
/// from the measured acid deviation.
pub fn sandwich_check(
    p: &ModelParams,
    target: &SteadyState,
    traj: &Trajectory,
    grid: &Grid1D,
    dt_est: f64,
    t_end: f64,
    sample_every: f64,
) -> (CheckStatus, Value) {
    let Some(regime) = regime_of(target.kind) else {
        return (CheckStatus::Skipped, json!({"status": "skipped", "reason": "trivial target"}));
    };
    let times: Vec<f64> = traj.samples.iter().map(|s| s.t).collect();
    let devs: Vec<f64> = traj.samples.iter().map(|s| s.linf_w).collect();
    let env = match build_envelope(&times, &devs, 1e-8) {
        Ok(e) => e,
        Err(e) => return (CheckStatus::Fail, json!({"status": "fail", "reason": e.to_string()})),
    };
    let first = &traj.snapshots[0];
    let init = match regime {
        RegimeTag::Heterogeneous => aux_init_h(&first.u, &first.v, target),
        RegimeTag::HomogeneousTumor => aux_init_c(&first.u, &first.v, target),
        RegimeTag::Healthy => aux_init_r(&first.u, &first.v),
    };
    let aux = match simulate_aux(regime, p, &env, &init, target, t_end, sample_every) {
        Ok(a) => a,
        Err(e) => return (CheckStatus::Fail, json!({"status": "fail", "reason": e.to_string()})),
    };
    let report =
        acidlab_core::auxode::verify_sandwich(&traj.snapshots, &aux, target, grid.h, dt_est);
    let final_gap = match &aux {
        AuxTrajectory::H(s) => s.last().map(|(_, a)| a.u_bar - a.u_under),
        AuxTrajectory::C(s) => s.last().map(|(_, a)| a.v_bar - a.v_under),
        AuxTrajectory::R(s) => s.last().map(|(_, a)| 1.0 - a.u_under),
    };
    let status = if report.ok() { CheckStatus::Pass } else { CheckStatus::Fail };
    let value = json!({
        "status": status.as_str(),
        "regime": regime.to_string(),
        "tol": report.tol,
        "n_checked": report.n_checked,
        "violations": report.violations.len(),
        "steady_violations": report.steady_violations.len(),
        "first_violations": report.violations.iter().take(10).map(|v| json!({
            "t": v.t, "cell": v.cell, "what": v.what, "value": v.value, "bound": v.bound,
        })).collect::<Vec<_>>(),
        "final_gap": final_gap,
    });
    (status, value)
}

/// Returns the sandwich aux trajectory alone (for CSV export).
pub fn sandwich_aux_trajectory(
    p: &ModelParams,
    target: &SteadyState,
    traj: &Trajectory,
    t_end: f64,
    sample_every: f64,
) -> Option<AuxTrajectory> {
    let regime = regime_of(target.kind)?;
    let times: Vec<f64> = traj.samples.iter().map(|s| s.t).collect();
    let devs: Vec<f64> = traj.samples.iter().map(|s| s.linf_w).collect();
    let env = build_envelope(&times, &devs, 1e-8).ok()?;
    let first = &traj.snapshots[0];
    let init = match regime {
        RegimeTag::Heterogeneous => aux_init_h(&first.u, &first.v, target),
        RegimeTag::HomogeneousTumor => aux_init_c(&first.u, &first.v, target),
        RegimeTag::Healthy => aux_init_r(&first.u, &first.v),
    };
    simulate_aux(regime, p, &env, &init, target, t_end, sample_every).ok()
}
