//! `scan`: sweep the (d1, d2/r) plane and map the classification outcome.

use crate::cli::ScanArgs;
use crate::commands::checks::regime_of;
use crate::config::{load_json, ScanAction, ScanConfig};
use crate::output::fmt_f64;
use crate::pool::run_indexed;
use crate::svg::heatmap;
use crate::AppError;
use acidlab_core::lyapunov::find_certificate;
use acidlab_core::model::{
    heterogeneous_state, homogeneous_tumor_state, ModelParams, SteadyState, SteadyStateKind,
};
use acidlab_core::pde::{simulate, Grid1D, InitialData, SimConfig};
use acidlab_core::regimes::{classify_global, CaseTag};
use std::io::Write;
use std::path::Path;

/// One row of the scan table, in row-major (d1-outer) order.
pub struct ScanCell {
    pub d1: f64,
    pub d2_over_r: f64,
    pub case_tag: CaseTag,
    pub predicted_attractor: Option<SteadyStateKind>,
    /// `Some` only for the certificate action.
    pub certificate_found: Option<bool>,
    /// `Some` only for the simulate action: the steady state the field
    /// actually landed near, or "none"/"error".
    pub attained: Option<String>,
}

pub fn merge_config(args: &ScanArgs) -> Result<ScanConfig, AppError> {
    let mut cfg: ScanConfig = load_json(args.config.as_deref())?;
    if let Some(x) = args.a1 {
        cfg.a1 = x;
    }
    if let Some(x) = args.a2 {
        cfg.a2 = x;
    }
    if let Some(x) = args.r {
        cfg.r = x;
    }
    if let Some(x) = args.c {
        cfg.c = x;
    }
    if let Some(x) = args.diffusion {
        cfg.diffusion = x;
    }
    if let Some(x) = args.d1_min {
        cfg.d1.min = x;
    }
    if let Some(x) = args.d1_max {
        cfg.d1.max = x;
    }
    if let Some(x) = args.d1_count {
        cfg.d1.count = x;
    }
    if let Some(x) = args.d2_min {
        cfg.d2_over_r.min = x;
    }
    if let Some(x) = args.d2_max {
        cfg.d2_over_r.max = x;
    }
    if let Some(x) = args.d2_count {
        cfg.d2_over_r.count = x;
    }
    if let Some(a) = &args.action {
        cfg.action = match a.as_str() {
            "classify" => ScanAction::Classify,
            "certificate" => ScanAction::Certificate,
            "simulate" => ScanAction::Simulate,
            other => {
                return Err(AppError::invalid(format!(
                    "unknown action '{other}'; expected classify, certificate or simulate"
                )))
            }
        };
    }
    if let Some(t) = args.t_end {
        cfg.t_end = t;
    }
    if let Some(d) = &args.out_dir {
        cfg.output_dir = Some(d.display().to_string());
    }
    for (v, name) in [(cfg.a1, "a1"), (cfg.a2, "a2"), (cfg.r, "r"), (cfg.c, "c"), (cfg.diffusion, "D")]
    {
        if !(v > 0.0) || !v.is_finite() {
            return Err(AppError::invalid(format!("{name} must be strictly positive")));
        }
    }
    cfg.d1.validate("d1")?;
    cfg.d2_over_r.validate("d2_over_r")?;
    if !(cfg.t_end > 0.0) {
        return Err(AppError::invalid("t_end must be positive"));
    }
    Ok(cfg)
}

/// Distance from the final field to a spatially uniform steady state.
fn distance_to(u: &[f64], v: &[f64], w: &[f64], s: &SteadyState) -> f64 {
    let mut d: f64 = 0.0;
    for i in 0..u.len() {
        d = d
            .max((u[i] - s.u_star).abs())
            .max((v[i] - s.v_star).abs())
            .max((w[i] - s.w_star).abs());
    }
    d
}

fn attained_state(p: &ModelParams, t_end: f64) -> String {
    let grid = Grid1D::new(1.0, 32).expect("valid grid");
    let init = InitialData::CosineSeries { u: 0.5, v: 0.5, w: 0.5, amplitude: 0.05, seed: 1 };
    let cfg = SimConfig { t_end, sample_every: t_end, snapshot_every: None };
    // Norm target is irrelevant for the attained-state decision.
    let traj = match simulate(p, &init, &grid, &cfg, &SteadyState::trivial()) {
        Ok(t) => t,
        Err(_) => return "error".into(),
    };
    let f = &traj.final_field;
    let mut candidates = vec![SteadyState::trivial(), SteadyState::healthy(), homogeneous_tumor_state(p)];
    if let Ok(s) = heterogeneous_state(p) {
        candidates.push(s);
    }
    let best = candidates
        .into_iter()
        .map(|s| (distance_to(&f.u, &f.v, &f.w, &s), s))
        .min_by(|a, b| a.0.total_cmp(&b.0))
        .expect("nonempty candidates");
    if best.0 > 0.05 {
        "none".into()
    } else {
        best.1.kind.to_string()
    }
}

/// Runs the scan; rows come back row-major with d1 as the outer index.
pub fn run_scan(cfg: &ScanConfig) -> Vec<ScanCell> {
    let d1s = cfg.d1.values();
    let rhos = cfg.d2_over_r.values();
    let nd2 = rhos.len();
    let n = d1s.len() * nd2;
    run_indexed(n, |idx| {
        let d1 = d1s[idx / nd2];
        let rho = rhos[idx % nd2];
        let p = ModelParams::new(cfg.diffusion, d1, rho * cfg.r, cfg.r, cfg.c, cfg.a1, cfg.a2)
            .expect("validated positive scan parameters");
        let cls = classify_global(&p);
        let certificate_found = match cfg.action {
            ScanAction::Certificate => Some(
                cls.predicted_attractor
                    .and_then(regime_of)
                    .map(|regime| find_certificate(regime, &p).is_ok())
                    .unwrap_or(false),
            ),
            _ => None,
        };
        let attained = match cfg.action {
            ScanAction::Simulate => Some(attained_state(&p, cfg.t_end)),
            _ => None,
        };
        ScanCell {
            d1,
            d2_over_r: rho,
            case_tag: cls.case_tag,
            predicted_attractor: cls.predicted_attractor,
            certificate_found,
            attained,
        }
    })
}

fn csv_text(cells: &[ScanCell]) -> String {
    let mut out = String::from("d1,d2_over_r,case_tag,predicted_attractor,certificate_found,attained\n");
    for c in cells {
        out.push_str(&format!(
            "{},{},{},{},{},{}\n",
            fmt_f64(c.d1),
            fmt_f64(c.d2_over_r),
            c.case_tag,
            c.predicted_attractor.map(|k| k.to_string()).unwrap_or_default(),
            c.certificate_found.map(|b| b.to_string()).unwrap_or_default(),
            c.attained.clone().unwrap_or_default(),
        ));
    }
    out
}

fn tag_color(tag: CaseTag) -> &'static str {
    match tag {
        CaseTag::T11i => "#1b5e20",
        CaseTag::T11ii => "#4caf50",
        CaseTag::T12i => "#0d47a1",
        CaseTag::T12ii => "#1e88e5",
        CaseTag::T12iii => "#64b5f6",
        CaseTag::T12iv => "#b3d9f7",
        CaseTag::T13i => "#e65100",
        CaseTag::T13ii => "#ffb74d",
        CaseTag::UnknownGap => "#9e9e9e",
        CaseTag::NoTheorem => "#4a148c",
    }
}

fn svg_text(cfg: &ScanConfig, cells: &[ScanCell]) -> String {
    let nd2 = cfg.d2_over_r.count;
    let nd1 = cfg.d1.count;
    // rows indexed by d2/r (y axis), columns by d1 (x axis)
    let rows: Vec<Vec<&str>> = (0..nd2)
        .map(|j| (0..nd1).map(|i| tag_color(cells[i * nd2 + j].case_tag)).collect())
        .collect();
    let mut seen: Vec<CaseTag> = Vec::new();
    for c in cells {
        if !seen.contains(&c.case_tag) {
            seen.push(c.case_tag);
        }
    }
    let legend: Vec<(&str, String)> =
        seen.iter().map(|&t| (tag_color(t), t.to_string())).collect();
    heatmap("global stability cases", "d1", "d2/r", &rows, &legend)
}

pub fn run(args: &ScanArgs) -> Result<Vec<ScanCell>, AppError> {
    let cfg = merge_config(args)?;
    let cells = run_scan(&cfg);
    let csv = csv_text(&cells);
    match &cfg.output_dir {
        Some(dir) => {
            let dir = Path::new(dir);
            std::fs::create_dir_all(dir)?;
            std::fs::write(dir.join("scan.csv"), &csv)?;
            std::fs::write(dir.join("scan.svg"), svg_text(&cfg, &cells))?;
        }
        None => {
            std::io::stdout().write_all(csv.as_bytes())?;
        }
    }
    Ok(cells)
}
