//! `classify`: thresholds, linear verdicts and the global theorem case.

use crate::cli::{ClassifyArgs, ParamFlags};
use crate::config::ParamsConfig;
use crate::output::emit_json;
use crate::AppError;
use acidlab_core::model::{
    heterogeneous_state, homogeneous_tumor_state, linear_stability, ModelParams, SteadyState,
};
use acidlab_core::regimes::{classify_global, d1h_alternate, thresholds};
use serde_json::{json, Value};

pub fn apply_param_flags(cfg: &mut ParamsConfig, f: &ParamFlags) {
    if let Some(x) = f.a1 {
        cfg.a1 = x;
    }
    if let Some(x) = f.a2 {
        cfg.a2 = x;
    }
    if let Some(x) = f.d1 {
        cfg.d1 = x;
    }
    if let Some(x) = f.d2 {
        cfg.d2 = x;
    }
    if let Some(x) = f.r {
        cfg.r = x;
    }
    if let Some(x) = f.c {
        cfg.c = x;
    }
    if let Some(x) = f.diffusion {
        cfg.diffusion = x;
    }
}

fn state_json(p: &ModelParams, s: &SteadyState) -> Value {
    let v = linear_stability(p, s);
    json!({
        "kind": s.kind.to_string(),
        "values": [s.u_star, s.v_star, s.w_star],
        "exists_positive": v.exists_positive,
        "linear": v.linear.to_string(),
    })
}

/// Full classification report for one parameter point.
pub fn classify_report(p: &ModelParams) -> Value {
    let th = thresholds(p.a1, p.a2, p.d1);
    let cls = classify_global(p);
    let mut states = vec![
        state_json(p, &SteadyState::trivial()),
        state_json(p, &SteadyState::healthy()),
        state_json(p, &homogeneous_tumor_state(p)),
    ];
    match heterogeneous_state(p) {
        Ok(s) => states.push(state_json(p, &s)),
        Err(e) => states.push(json!({
            "kind": "heterogeneous",
            "values": Value::Null,
            "exists_positive": false,
            "error": e.to_string(),
        })),
    }
    json!({
        "params": {
            "D": p.diffusion, "d1": p.d1, "d2": p.d2, "r": p.r, "c": p.c,
            "a1": p.a1, "a2": p.a2,
        },
        "d2_over_r": p.d2_over_r(),
        "thresholds": {
            "d1h": th.d1h, "d2h": th.d2h,
            "d1c": th.d1c, "d2c": th.d2c,
            "d1r": th.d1r, "d2r": th.d2r,
            "d1h_alternate": d1h_alternate(p.a1, p.a2).ok(),
        },
        "states": states,
        "classification": {
            "case_tag": cls.case_tag.to_string(),
            "predicted_attractor": cls.predicted_attractor.map(|k| k.to_string()),
            "requires_v0_le_one": cls.requires_v0_le_one,
            "notes": cls.notes,
        },
    })
}

pub fn run(args: &ClassifyArgs) -> Result<(), AppError> {
    let mut cfg = ParamsConfig::default();
    apply_param_flags(&mut cfg, &args.params);
    let p = cfg.build()?;
    emit_json(&classify_report(&p), args.out.as_deref())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn symmetric_point_is_t11i() {
        let p = ModelParams::new(1.0, 0.5, 0.5, 1.0, 1.0, 0.5, 0.5).unwrap();
        let rep = classify_report(&p);
        assert_eq!(rep["classification"]["case_tag"], "T11_i");
        assert_eq!(rep["classification"]["predicted_attractor"], "heterogeneous");
        let het = &rep["states"][3];
        assert_eq!(het["values"][0], 0.5);
        assert_eq!(het["linear"], "stable");
    }

    #[test]
    fn healthy_stable_when_a1_above_one() {
        let p = ModelParams::new(1.0, 0.5, 1.0, 1.0, 1.0, 2.0, 0.5).unwrap();
        let rep = classify_report(&p);
        assert_eq!(rep["states"][1]["kind"], "healthy");
        assert_eq!(rep["states"][1]["linear"], "stable");
    }

    #[test]
    fn boundary_point_reports_no_theorem() {
        // d2/r exactly a2 + d1 - 1 = 0.5
        let p = ModelParams::new(1.0, 0.5, 0.5, 1.0, 1.0, 0.5, 1.0).unwrap();
        let rep = classify_report(&p);
        assert_eq!(rep["classification"]["case_tag"], "no_theorem");
        assert!(rep["classification"]["notes"].as_str().unwrap().contains("boundary"));
    }
}
