//! `thresholds`: the six threshold values at one (a1, a2, d1).

use crate::cli::ThresholdsArgs;
use crate::output::emit_json;
use crate::AppError;
use acidlab_core::regimes::{d1h_alternate, thresholds};
use serde_json::json;

pub fn run(args: &ThresholdsArgs) -> Result<(), AppError> {
    for (v, name) in [(args.a1, "a1"), (args.a2, "a2"), (args.d1, "d1")] {
        if !(v > 0.0) || !v.is_finite() {
            return Err(AppError::invalid(format!("{name} must be strictly positive")));
        }
    }
    let th = thresholds(args.a1, args.a2, args.d1);
    let report = json!({
        "a1": args.a1,
        "a2": args.a2,
        "d1": args.d1,
        "thresholds": {
            "d1h": th.d1h, "d2h": th.d2h,
            "d1c": th.d1c, "d2c": th.d2c,
            "d1r": th.d1r, "d2r": th.d2r,
        },
        "d1h_alternate": d1h_alternate(args.a1, args.a2).ok(),
    });
    emit_json(&report, args.out.as_deref())
}
