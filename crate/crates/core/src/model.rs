//! Model parameters, steady states and linear stability.
//!
//! The system admits four spatially homogeneous steady states: the trivial
//! state (0,0,0), the healthy state (1,0,0), the homogeneous tumor state
//! (0, v~, v~) with v~ = (1 + d2/r)^-1, and a heterogeneous coexistence
//! state (u*, v*, w*) with v* = w* = v_h and u* = 1 - (a2 + d1) v_h.

use crate::util::{band_cmp, compensated_sum, Band};
use core::fmt;

/// The seven positive dimensionless parameters of the model.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelParams {
    /// Tumor diffusion rate.
    pub diffusion: f64,
    /// Acid-induced death rate of healthy cells.
    pub d1: f64,
    /// Acid-induced death rate of tumor cells.
    pub d2: f64,
    /// Tumor growth rate.
    pub r: f64,
    /// Acid production/decay rate.
    pub c: f64,
    /// Competition coefficient acting on tumor cells.
    pub a1: f64,
    /// Competition coefficient acting on healthy cells.
    pub a2: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ParamError {
    /// A parameter was zero, negative, or not finite.
    NotPositive(&'static str),
}

impl fmt::Display for ParamError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParamError::NotPositive(name) => {
                write!(f, "parameter `{name}` must be strictly positive and finite")
            }
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for ParamError {}

impl ModelParams {
    pub fn new(
        diffusion: f64,
        d1: f64,
        d2: f64,
        r: f64,
        c: f64,
        a1: f64,
        a2: f64,
    ) -> Result<Self, ParamError> {
        let fields = [
            (diffusion, "D"),
            (d1, "d1"),
            (d2, "d2"),
            (r, "r"),
            (c, "c"),
            (a1, "a1"),
            (a2, "a2"),
        ];
        for (value, name) in fields {
            if !(value > 0.0) || !value.is_finite() {
                return Err(ParamError::NotPositive(name));
            }
        }
        let p = ModelParams { diffusion, d1, d2, r, c, a1, a2 };
        if !p.d2_over_r().is_finite() || !(p.d2_over_r() > 0.0) {
            return Err(ParamError::NotPositive("d2/r"));
        }
        Ok(p)
    }

    /// The acid-sensitivity ratio d2/r that appears in every threshold.
    pub fn d2_over_r(&self) -> f64 {
        self.d2 / self.r
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SteadyStateKind {
    Trivial,
    Healthy,
    HomogeneousTumor,
    Heterogeneous,
}

impl fmt::Display for SteadyStateKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            SteadyStateKind::Trivial => "trivial",
            SteadyStateKind::Healthy => "healthy",
            SteadyStateKind::HomogeneousTumor => "homogeneous_tumor",
            SteadyStateKind::Heterogeneous => "heterogeneous",
        };
        f.write_str(s)
    }
}

/// A tagged steady state with its component values.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SteadyState {
    pub kind: SteadyStateKind,
    pub u_star: f64,
    pub v_star: f64,
    pub w_star: f64,
}

impl SteadyState {
    pub fn trivial() -> Self {
        SteadyState { kind: SteadyStateKind::Trivial, u_star: 0.0, v_star: 0.0, w_star: 0.0 }
    }

    pub fn healthy() -> Self {
        SteadyState { kind: SteadyStateKind::Healthy, u_star: 1.0, v_star: 0.0, w_star: 0.0 }
    }

    /// Whether all three components are strictly positive.
    pub fn is_positive(&self) -> bool {
        self.u_star > 0.0 && self.v_star > 0.0 && self.w_star > 0.0
    }
}

/// Linear stability of one steady state at one parameter point.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LinearStability {
    Stable,
    Unstable,
    /// The discriminating inequality holds with equality within tolerance.
    Boundary,
}

impl fmt::Display for LinearStability {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            LinearStability::Stable => "stable",
            LinearStability::Unstable => "unstable",
            LinearStability::Boundary => "boundary",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StabilityVerdict {
    pub state_kind: SteadyStateKind,
    /// For the heterogeneous state: all components strictly positive.
    /// The other three states always exist.
    pub exists_positive: bool,
    pub linear: LinearStability,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SteadyStateError {
    /// The denominator of v_h vanishes within tolerance.
    DegenerateDenominator { value: f64 },
}

impl fmt::Display for SteadyStateError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SteadyStateError::DegenerateDenominator { value } => {
                write!(f, "heterogeneous-state denominator vanishes (value {value:e})")
            }
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for SteadyStateError {}

/// v_h = (1 - a1) / (1 - a1 a2 + d2/r - a1 d1), the tumor density of the
/// coexistence state. The denominator is summed with compensation since the
/// four terms can nearly cancel.
fn v_h(p: &ModelParams) -> Result<f64, SteadyStateError> {
    let terms = [1.0, -p.a1 * p.a2, p.d2_over_r(), -p.a1 * p.d1];
    let den = compensated_sum(&terms);
    let scale: f64 = terms.iter().map(|t| libm::fabs(*t)).sum();
    if libm::fabs(den) <= 1e-12 * scale.max(1.0) {
        return Err(SteadyStateError::DegenerateDenominator { value: den });
    }
    Ok((1.0 - p.a1) / den)
}

/// Heterogeneous coexistence state (u*, v*, w*) = (1 - (a2+d1) v_h, v_h, v_h).
///
/// Components may be non-positive; check [`SteadyState::is_positive`].
pub fn heterogeneous_state(p: &ModelParams) -> Result<SteadyState, SteadyStateError> {
    let vh = v_h(p)?;
    Ok(SteadyState {
        kind: SteadyStateKind::Heterogeneous,
        u_star: 1.0 - (p.a2 + p.d1) * vh,
        v_star: vh,
        w_star: vh,
    })
}

/// Homogeneous tumor state (0, v~, v~) with v~ = (1 + d2/r)^-1.
pub fn homogeneous_tumor_state(p: &ModelParams) -> SteadyState {
    let v = 1.0 / (1.0 + p.d2_over_r());
    SteadyState { kind: SteadyStateKind::HomogeneousTumor, u_star: 0.0, v_star: v, w_star: v }
}

/// Linear stability of a steady state produced by this module for `p`.
///
/// Trivial: always unstable. Healthy: stable iff a1 > 1. Homogeneous tumor:
/// stable iff d2/r < a2 + d1 - 1. Heterogeneous: exists with positive
/// components iff (a1 < 1 and d2/r > a2 + d1 - 1) — then stable — or
/// (a1 > 1 and d2/r < a2 + d1 - 1) — then unstable.
pub fn linear_stability(p: &ModelParams, s: &SteadyState) -> StabilityVerdict {
    let rho = p.d2_over_r();
    let excess = p.a2 + p.d1 - 1.0;
    match s.kind {
        SteadyStateKind::Trivial => StabilityVerdict {
            state_kind: s.kind,
            exists_positive: false,
            linear: LinearStability::Unstable,
        },
        SteadyStateKind::Healthy => {
            let linear = match band_cmp(p.a1, 1.0) {
                Band::Above => LinearStability::Stable,
                Band::Below => LinearStability::Unstable,
                Band::Boundary => LinearStability::Boundary,
            };
            StabilityVerdict { state_kind: s.kind, exists_positive: true, linear }
        }
        SteadyStateKind::HomogeneousTumor => {
            let linear = match band_cmp(rho, excess) {
                Band::Below => LinearStability::Stable,
                Band::Above => LinearStability::Unstable,
                Band::Boundary => LinearStability::Boundary,
            };
            StabilityVerdict { state_kind: s.kind, exists_positive: true, linear }
        }
        SteadyStateKind::Heterogeneous => {
            let a1_cmp = band_cmp(p.a1, 1.0);
            let rho_cmp = band_cmp(rho, excess);
            let (exists, linear) = match (a1_cmp, rho_cmp) {
                (Band::Below, Band::Above) => (true, LinearStability::Stable),
                (Band::Above, Band::Below) => (true, LinearStability::Unstable),
                (Band::Boundary, _) | (_, Band::Boundary) => {
                    (s.is_positive(), LinearStability::Boundary)
                }
                _ => (false, LinearStability::Unstable),
            };
            StabilityVerdict { state_kind: s.kind, exists_positive: exists, linear }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(a1: f64, a2: f64, d1: f64, d2_over_r: f64) -> ModelParams {
        ModelParams::new(1.0, d1, d2_over_r, 1.0, 1.0, a1, a2).unwrap()
    }

    #[test]
    fn rejects_nonpositive_params() {
        assert!(ModelParams::new(1.0, 0.0, 1.0, 1.0, 1.0, 1.0, 1.0).is_err());
        assert!(ModelParams::new(-1.0, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0).is_err());
        assert!(ModelParams::new(1.0, 1.0, f64::NAN, 1.0, 1.0, 1.0, 1.0).is_err());
    }

    #[test]
    fn heterogeneous_symmetric_point() {
        // denominator 1 - 0.25 + 0.5 - 0.25 = 1, v_h = 0.5
        let p = params(0.5, 0.5, 0.5, 0.5);
        let s = heterogeneous_state(&p).unwrap();
        assert!((s.u_star - 0.5).abs() < 1e-15);
        assert!((s.v_star - 0.5).abs() < 1e-15);
        assert!((s.w_star - 0.5).abs() < 1e-15);
        assert!(s.is_positive());
    }

    #[test]
    fn heterogeneous_a1_equals_one() {
        let p = params(1.0, 0.3, 0.2, 0.7);
        let s = heterogeneous_state(&p).unwrap();
        assert_eq!(s.v_star, 0.0);
        assert_eq!(s.u_star, 1.0);
    }

    #[test]
    fn heterogeneous_degenerate_denominator() {
        // 1 - 2 + 2 - 1 = 0
        let p = params(2.0, 1.0, 0.5, 2.0);
        assert!(matches!(
            heterogeneous_state(&p),
            Err(SteadyStateError::DegenerateDenominator { .. })
        ));
    }

    #[test]
    fn homogeneous_tumor_values() {
        assert!((homogeneous_tumor_state(&params(0.5, 0.5, 0.5, 1.0)).v_star - 0.5).abs() < 1e-15);
        assert!(
            (homogeneous_tumor_state(&params(0.5, 0.5, 0.5, 0.5)).v_star - 2.0 / 3.0).abs()
                < 1e-15
        );
        let tiny = homogeneous_tumor_state(&params(0.5, 0.5, 0.5, 1e-12));
        assert!((tiny.v_star - 1.0).abs() < 1e-11);
    }

    #[test]
    fn linear_stability_table() {
        // healthy stable iff a1 > 1
        let p = params(2.0, 0.5, 0.5, 0.5);
        let v = linear_stability(&p, &SteadyState::healthy());
        assert_eq!(v.linear, LinearStability::Stable);
        let p = params(0.5, 0.5, 0.5, 0.5);
        let v = linear_stability(&p, &SteadyState::healthy());
        assert_eq!(v.linear, LinearStability::Unstable);

        // homogeneous tumor: unstable since 0.5 > a2 + d1 - 1 = 0
        let s = homogeneous_tumor_state(&p);
        let v = linear_stability(&p, &s);
        assert_eq!(v.linear, LinearStability::Unstable);

        // heterogeneous stable case
        let s = heterogeneous_state(&p).unwrap();
        let v = linear_stability(&p, &s);
        assert!(v.exists_positive);
        assert_eq!(v.linear, LinearStability::Stable);

        // trivial always unstable
        let v = linear_stability(&p, &SteadyState::trivial());
        assert_eq!(v.linear, LinearStability::Unstable);
    }

    #[test]
    fn boundary_band_reported() {
        // d2/r exactly at a2 + d1 - 1
        let p = params(0.5, 1.0, 0.5, 0.5);
        let s = homogeneous_tumor_state(&p);
        let v = linear_stability(&p, &s);
        assert_eq!(v.linear, LinearStability::Boundary);
    }

    #[test]
    fn algebraic_consistency() {
        let p = params(0.3, 0.7, 0.4, 0.6);
        let s = heterogeneous_state(&p).unwrap();
        assert!((s.u_star + (p.a2 + p.d1) * s.v_star - 1.0).abs() < 1e-12);
        let t = homogeneous_tumor_state(&p);
        assert!((t.v_star * (1.0 + p.d2_over_r()) - 1.0).abs() < 1e-14);
    }
}
