//! Global-stability thresholds and theorem-case classification.
//!
//! Six threshold values partition the (d1, d2/r) plane into regions where one
//! of the global-convergence theorems applies, two explicitly unknown gaps,
//! and a remainder not covered by any theorem.

use crate::model::{ModelParams, SteadyStateKind};
use crate::util::{band_cmp, Band};
use alloc::string::String;
use core::fmt;
use libm::sqrt;

/// Threshold values on the d1 axis (`d1h`, `d1c`, `d1r`) and on the d2/r axis
/// (`d2h`, `d2c`, `d2r`). `None` means the defining radicand is negative and
/// the threshold is undefined at this parameter point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Thresholds {
    pub d1h: Option<f64>,
    pub d2h: Option<f64>,
    pub d1c: Option<f64>,
    pub d2c: Option<f64>,
    pub d1r: Option<f64>,
    pub d2r: Option<f64>,
}

/// Evaluates all six thresholds at (a1, a2, d1). The d2-type thresholds
/// depend on d1; the d1-type thresholds do not.
pub fn thresholds(a1: f64, a2: f64, d1: f64) -> Thresholds {
    let s_a1 = if a1 <= 1.0 { Some(sqrt(1.0 - a1)) } else { None };
    let s_a1a2 = if a1 * a2 <= 1.0 { Some(sqrt(1.0 - a1 * a2)) } else { None };
    let s_a2 = if a2 <= 1.0 { Some(sqrt(1.0 - a2)) } else { None };

    let d1h = match (s_a1, s_a1a2) {
        (Some(sa), Some(sab)) if 1.0 - sa > 0.0 => {
            let q = (1.0 + sab) / (1.0 - sa);
            Some(q * q - a2)
        }
        _ => None,
    };
    let d2h = s_a1a2.map(|sab| {
        let t = a1 * (a2 + d1) / (1.0 + sab) + 1.0 + sab;
        0.25 * t * t - 1.0
    });
    let d1c = s_a1.and_then(|sa| {
        let den = 1.0 - sa;
        if den > 0.0 {
            Some(a1 * a2 / (den * den) - a2)
        } else {
            None
        }
    });
    let d2c = s_a1.and_then(|sa| {
        let den = 1.0 - sa;
        if den > 0.0 {
            let t = den + a1 * a2 / (den * (a2 + d1));
            Some(4.0 / (t * t) - 1.0)
        } else {
            None
        }
    });
    let d1r = s_a2.map(|sb| {
        let t = 1.0 + sb;
        t * t - a2
    });
    let d2r = s_a2.map(|sb| {
        let t = (a2 + d1) / (1.0 + sb) + 1.0 + sb;
        0.25 * a1 * t * t - a1
    });

    Thresholds { d1h, d2h, d1c, d2c, d1r, d2r }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ThresholdError {
    /// A radicand in the threshold formula is negative.
    UndefinedThreshold,
}

impl fmt::Display for ThresholdError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("threshold undefined: negative radicand")
    }
}

#[cfg(feature = "std")]
impl std::error::Error for ThresholdError {}

/// Alternate closed form of `d1h`, ((1+sqrt(1-a1a2))(1+sqrt(1-a1))/a1)^2 - a2.
///
/// Algebraically equal to [`Thresholds::d1h`] via
/// (1-sqrt(1-a1))(1+sqrt(1-a1)) = a1; exposed as a cross-check oracle.
pub fn d1h_alternate(a1: f64, a2: f64) -> Result<f64, ThresholdError> {
    if a1 > 1.0 || a1 * a2 > 1.0 {
        return Err(ThresholdError::UndefinedThreshold);
    }
    let q = (1.0 + sqrt(1.0 - a1 * a2)) * (1.0 + sqrt(1.0 - a1)) / a1;
    Ok(q * q - a2)
}

/// Theorem case predicting the global attractor, or an explicit gap.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CaseTag {
    T11i,
    T11ii,
    T12i,
    T12ii,
    T12iii,
    T12iv,
    T13i,
    T13ii,
    UnknownGap,
    NoTheorem,
}

impl fmt::Display for CaseTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            CaseTag::T11i => "T11_i",
            CaseTag::T11ii => "T11_ii",
            CaseTag::T12i => "T12_i",
            CaseTag::T12ii => "T12_ii",
            CaseTag::T12iii => "T12_iii",
            CaseTag::T12iv => "T12_iv",
            CaseTag::T13i => "T13_i",
            CaseTag::T13ii => "T13_ii",
            CaseTag::UnknownGap => "unknown_gap",
            CaseTag::NoTheorem => "no_theorem",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GlobalClassification {
    pub case_tag: CaseTag,
    pub predicted_attractor: Option<SteadyStateKind>,
    /// Healthy-state cases additionally require v0 <= 1; carried as a flag
    /// since initial data are not known here.
    pub requires_v0_le_one: bool,
    pub notes: Option<String>,
}

/// Band-aware comparisons that remember whether any comparison landed in the
/// equality band.
struct Cmp {
    saw_band: bool,
}

impl Cmp {
    fn new() -> Self {
        Cmp { saw_band: false }
    }
    fn cmp(&mut self, x: f64, y: f64) -> Band {
        let b = band_cmp(x, y);
        if b == Band::Boundary {
            self.saw_band = true;
        }
        b
    }
    fn lt(&mut self, x: f64, y: f64) -> bool {
        self.cmp(x, y) == Band::Below
    }
    fn gt(&mut self, x: f64, y: f64) -> bool {
        self.cmp(x, y) == Band::Above
    }
    fn le(&mut self, x: f64, y: f64) -> bool {
        self.cmp(x, y) != Band::Above
    }
    fn ge(&mut self, x: f64, y: f64) -> bool {
        self.cmp(x, y) != Band::Below
    }
}

/// Classifies a parameter point by the theorem case (if any) that predicts
/// its global attractor.
pub fn classify_global(p: &ModelParams) -> GlobalClassification {
    let th = thresholds(p.a1, p.a2, p.d1);
    let rho = p.d2_over_r();
    let excess = p.d1 + p.a2 - 1.0;
    let a1a2 = p.a1 * p.a2;
    let mut c = Cmp::new();

    let a1_lt_1 = c.lt(p.a1, 1.0);
    let a1_gt_1 = c.gt(p.a1, 1.0);

    let mut matches: [Option<CaseTag>; 8] = [None; 8];
    let mut n = 0;
    let push = |tag: CaseTag, m: &mut [Option<CaseTag>; 8], n: &mut usize| {
        m[*n] = Some(tag);
        *n += 1;
    };

    if a1_lt_1 && c.lt(a1a2, 1.0) {
        if let Some(d1h) = th.d1h {
            if c.le(p.d1, d1h) && c.gt(rho, excess) {
                push(CaseTag::T11i, &mut matches, &mut n);
            }
            if let Some(d2h) = th.d2h {
                if c.gt(p.d1, d1h) && c.gt(rho, d2h) {
                    push(CaseTag::T11ii, &mut matches, &mut n);
                }
            }
        }
    }

    if a1_lt_1 {
        let m = a1a2.max(1.0);
        if let Some(d1c) = th.d1c {
            if c.le(p.d1, d1c) && c.lt(rho, (p.d1 + p.a2) / m - 1.0) {
                push(CaseTag::T12i, &mut matches, &mut n);
            }
            if let (Some(d1h), true) = (th.d1h, c.lt(a1a2, 1.0)) {
                if c.gt(p.d1, d1c) && c.le(p.d1, d1h) && c.lt(rho, excess) {
                    push(CaseTag::T12ii, &mut matches, &mut n);
                }
                if let Some(d2c) = th.d2c {
                    if c.gt(p.d1, d1h) && c.lt(rho, d2c) {
                        push(CaseTag::T12iii, &mut matches, &mut n);
                    }
                }
            }
            if let (Some(d2c), true) = (th.d2c, c.ge(a1a2, 1.0)) {
                if c.gt(p.d1, d1c) && c.lt(rho, d2c) {
                    push(CaseTag::T12iv, &mut matches, &mut n);
                }
            }
        }
    }

    if a1_gt_1 && c.lt(p.a2, 1.0) {
        if let Some(d1r) = th.d1r {
            if c.le(p.d1, d1r) && c.gt(rho, p.a1 * excess) {
                push(CaseTag::T13i, &mut matches, &mut n);
            }
            if let Some(d2r) = th.d2r {
                if c.gt(p.d1, d1r) && c.gt(rho, d2r) {
                    push(CaseTag::T13ii, &mut matches, &mut n);
                }
            }
        }
    }

    // The theorem cases are disjoint; the tie-break order below should never
    // be exercised.
    debug_assert!(n <= 1, "overlapping theorem cases at one parameter point");
    if let Some(tag) = matches.iter().flatten().next() {
        let (attractor, v0_flag) = match tag {
            CaseTag::T11i | CaseTag::T11ii => (SteadyStateKind::Heterogeneous, false),
            CaseTag::T12i | CaseTag::T12ii | CaseTag::T12iii | CaseTag::T12iv => {
                (SteadyStateKind::HomogeneousTumor, false)
            }
            _ => (SteadyStateKind::Healthy, true),
        };
        return GlobalClassification {
            case_tag: *tag,
            predicted_attractor: Some(attractor),
            requires_v0_le_one: v0_flag,
            notes: None,
        };
    }

    // Explicitly unknown gaps named by the theorems' discussion.
    if a1_lt_1 {
        if let (Some(d1h), true) = (th.d1h, c.lt(a1a2, 1.0)) {
            if let Some(d2h) = th.d2h {
                if c.gt(p.d1, d1h) && c.gt(rho, excess) && c.le(rho, d2h) {
                    return GlobalClassification {
                        case_tag: CaseTag::UnknownGap,
                        predicted_attractor: None,
                        requires_v0_le_one: false,
                        notes: Some(String::from(
                            "heterogeneous state locally stable; global stability open for \
                             d1 > d1h, d1+a2-1 < d2/r <= d2h",
                        )),
                    };
                }
            }
        }
        if let (Some(d1h), true) = (th.d1h, c.le(a1a2, 1.0)) {
            if let Some(d2c) = th.d2c {
                if c.gt(p.d1, d1h) && c.ge(rho, d2c) && c.lt(rho, excess) {
                    return GlobalClassification {
                        case_tag: CaseTag::UnknownGap,
                        predicted_attractor: None,
                        requires_v0_le_one: false,
                        notes: Some(String::from(
                            "homogeneous tumor state locally stable; global stability open for \
                             d1 > d1h, d2c <= d2/r < d1+a2-1",
                        )),
                    };
                }
            }
        }
    }

    let notes = if a1_gt_1 && c.lt(rho, excess) {
        Some(String::from(
            "bistability: both the healthy state and the homogeneous tumor state are locally \
             stable; no global prediction",
        ))
    } else if c.saw_band {
        Some(String::from("parameter point lies on a case boundary within tolerance"))
    } else {
        None
    };
    GlobalClassification {
        case_tag: CaseTag::NoTheorem,
        predicted_attractor: None,
        requires_v0_le_one: false,
        notes,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(a1: f64, a2: f64, d1: f64, d2_over_r: f64) -> ModelParams {
        ModelParams::new(1.0, d1, d2_over_r, 1.0, 1.0, a1, a2).unwrap()
    }

    #[test]
    fn threshold_values_half_half() {
        let th = thresholds(0.5, 0.5, 0.5);
        // d1c = 0.25/(1-sqrt(0.5))^2 - 0.5
        let expect_d1c = 0.25 / (1.0 - 0.5f64.sqrt()).powi(2) - 0.5;
        assert!((th.d1c.unwrap() - expect_d1c).abs() < 1e-12);
        assert!((th.d1c.unwrap() - 2.41421).abs() < 1e-4);
        // d1h = ((1+sqrt(0.75))/(1-sqrt(0.5)))^2 - 0.5
        let expect_d1h = ((1.0 + 0.75f64.sqrt()) / (1.0 - 0.5f64.sqrt())).powi(2) - 0.5;
        assert!((th.d1h.unwrap() - expect_d1h).abs() < 1e-10);
        assert!((th.d1h.unwrap() - 40.09).abs() < 0.01);
    }

    #[test]
    fn d1r_at_a2_one() {
        let th = thresholds(0.5, 1.0, 0.5);
        assert!((th.d1r.unwrap() - 0.0).abs() < 1e-14);
    }

    #[test]
    fn undefined_thresholds_flagged() {
        let th = thresholds(1.5, 1.0, 0.5);
        assert!(th.d1h.is_none());
        assert!(th.d1c.is_none());
        assert!(th.d2c.is_none());
        let th = thresholds(0.5, 3.0, 0.5); // a1a2 = 1.5 > 1
        assert!(th.d1h.is_none());
        assert!(th.d2h.is_none());
        assert!(th.d1r.is_none());
        assert!(th.d2r.is_none());
    }

    #[test]
    fn alternate_d1h_matches() {
        let th = thresholds(0.5, 0.5, 0.5);
        let alt = d1h_alternate(0.5, 0.5).unwrap();
        let d1h = th.d1h.unwrap();
        assert!((alt - d1h).abs() <= 1e-10 * (1.0 + d1h.abs()));
    }

    #[test]
    fn alternate_d1h_coincides_with_d1c_at_a1a2_one() {
        // a1a2 = 1: d1h form degenerates to d1c
        let alt = d1h_alternate(0.5, 2.0).unwrap();
        assert!((alt - 9.65685).abs() < 1e-4);
        let th = thresholds(0.5, 2.0, 0.5);
        assert!((alt - th.d1c.unwrap()).abs() <= 1e-10 * (1.0 + alt.abs()));
    }

    #[test]
    fn alternate_d1h_limit_a1_to_one() {
        let alt = d1h_alternate(1.0, 0.5).unwrap();
        let d1r = thresholds(1.0, 0.5, 0.5).d1r.unwrap();
        assert!((alt - d1r).abs() < 1e-9);
        assert!((alt - 2.41421).abs() < 1e-4);
    }

    #[test]
    fn classify_examples() {
        let g = classify_global(&params(0.5, 0.5, 0.5, 0.5));
        assert_eq!(g.case_tag, CaseTag::T11i);
        assert_eq!(g.predicted_attractor, Some(SteadyStateKind::Heterogeneous));

        let g = classify_global(&params(0.5, 1.5, 0.5, 0.5));
        assert_eq!(g.case_tag, CaseTag::T12i);
        assert_eq!(g.predicted_attractor, Some(SteadyStateKind::HomogeneousTumor));

        let g = classify_global(&params(2.0, 0.5, 0.5, 1.0));
        assert_eq!(g.case_tag, CaseTag::T13i);
        assert_eq!(g.predicted_attractor, Some(SteadyStateKind::Healthy));
        assert!(g.requires_v0_le_one);
    }

    #[test]
    fn classify_boundary_point() {
        // d2/r exactly at a2 + d1 - 1 -> no theorem, boundary note
        let g = classify_global(&params(0.5, 1.0, 0.5, 0.5));
        assert_eq!(g.case_tag, CaseTag::NoTheorem);
        assert!(g.notes.unwrap().contains("boundary"));
    }

    #[test]
    fn classify_bistability_note() {
        let g = classify_global(&params(2.0, 0.5, 1.0, 0.2));
        assert_eq!(g.case_tag, CaseTag::NoTheorem);
        assert!(g.notes.unwrap().contains("bistability"));
    }

    #[test]
    fn classify_gap_band() {
        // a1 = a2 = 0.99: d1h is small, gap between d1+a2-1 and d2h opens up
        let th = thresholds(0.99, 0.99, 5.0);
        let d1h = th.d1h.unwrap();
        assert!(d1h < 5.0);
        let d2h = th.d2h.unwrap();
        let excess = 5.0 + 0.99 - 1.0;
        assert!(d2h > excess);
        let mid = 0.5 * (excess + d2h);
        let g = classify_global(&params(0.99, 0.99, 5.0, mid));
        assert_eq!(g.case_tag, CaseTag::UnknownGap);
    }
}
