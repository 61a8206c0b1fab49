//! Comparison (upper/lower solution) ODE systems.
//!
//! Once the acid component is known to stay within a shrinking band
//! target +- sigma(t), the first two equations admit spatially uniform upper
//! and lower solutions driven by sigma. This module builds the decay
//! envelope from measured deviations, integrates the per-regime auxiliary
//! systems, verifies the sandwich property against PDE snapshots, and tracks
//! the log-ratio quantity whose decay closes the convergence argument.

use crate::lyapunov::RegimeTag;
use crate::model::{ModelParams, SteadyState};
use crate::pde::FieldSnapshot;
use alloc::vec::Vec;
use core::fmt;
use libm::{fabs, log};

/// Nonincreasing upper bound for the acid deviation, sampled in time.
#[derive(Debug, Clone, PartialEq)]
pub struct Envelope {
    pub times: Vec<f64>,
    pub values: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EmptySeries;

impl fmt::Display for EmptySeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("deviation series is empty")
    }
}

#[cfg(feature = "std")]
impl std::error::Error for EmptySeries {}

/// Reverse running maximum of the deviation series, floored at `floor`.
///
/// The result dominates the series pointwise and is nonincreasing.
pub fn build_envelope(times: &[f64], deviations: &[f64], floor: f64) -> Result<Envelope, EmptySeries> {
    if times.is_empty() || times.len() != deviations.len() {
        return Err(EmptySeries);
    }
    let mut values = deviations.to_vec();
    let mut running = floor;
    for v in values.iter_mut().rev() {
        running = running.max(*v);
        *v = running;
    }
    Ok(Envelope { times: times.to_vec(), values })
}

impl Envelope {
    /// Step-function lookup: the sample at or before `t` (the larger value,
    /// since the envelope is nonincreasing). Clamps outside the range.
    pub fn value_at(&self, t: f64) -> f64 {
        let idx = self.times.partition_point(|&s| s <= t);
        self.values[idx.saturating_sub(1)]
    }
}

/// Upper/lower pair for (u, v): the 4-ODE system of the heterogeneous
/// regime.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AuxStateH {
    pub u_bar: f64,
    pub u_under: f64,
    pub v_bar: f64,
    pub v_under: f64,
}

/// Homogeneous-tumor regime: u only needs an upper bound (it dies out), and
/// the v_bar equation decouples.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AuxStateC {
    pub u_bar: f64,
    pub v_bar: f64,
    pub v_under: f64,
}

/// Healthy regime: u only needs a lower bound, v an upper one.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AuxStateR {
    pub u_under: f64,
    pub v_bar: f64,
}

/// Initial aux state per regime, built from the extrema of the initial data.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum AuxInit {
    H(AuxStateH),
    C(AuxStateC),
    R(AuxStateR),
}

fn extrema(xs: &[f64]) -> (f64, f64) {
    xs.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &x| (lo.min(x), hi.max(x)))
}

/// u_bar(0) = max{max u0, u*} and so on (heterogeneous regime).
pub fn aux_init_h(u0: &[f64], v0: &[f64], target: &SteadyState) -> AuxInit {
    let (umin, umax) = extrema(u0);
    let (vmin, vmax) = extrema(v0);
    AuxInit::H(AuxStateH {
        u_bar: umax.max(target.u_star),
        u_under: umin.min(target.u_star),
        v_bar: vmax.max(target.v_star),
        v_under: vmin.min(target.v_star),
    })
}

/// u_bar(0) = max u0; v pair clamped around the tumor level.
pub fn aux_init_c(u0: &[f64], v0: &[f64], target: &SteadyState) -> AuxInit {
    let (_, umax) = extrema(u0);
    let (vmin, vmax) = extrema(v0);
    AuxInit::C(AuxStateC {
        u_bar: umax,
        v_bar: vmax.max(target.v_star),
        v_under: vmin.min(target.v_star),
    })
}

/// u_under(0) = min u0, v_bar(0) = max v0 (healthy regime).
pub fn aux_init_r(u0: &[f64], v0: &[f64]) -> AuxInit {
    let (umin, _) = extrema(u0);
    let (_, vmax) = extrema(v0);
    AuxInit::R(AuxStateR { u_under: umin, v_bar: vmax })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum AuxError {
    /// The t=0 state breaks the required ordering (e.g. u_under <= u* <= u_bar).
    OrderingViolation { what: &'static str, value: f64 },
    /// `init` variant does not match `regime`.
    RegimeMismatch,
}

impl fmt::Display for AuxError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AuxError::OrderingViolation { what, value } => {
                write!(f, "aux initial ordering violated: {what} (value {value})")
            }
            AuxError::RegimeMismatch => f.write_str("aux init does not match the regime"),
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for AuxError {}

/// Sampled aux trajectory; the variant matches the regime integrated.
#[derive(Debug, Clone, PartialEq)]
pub enum AuxTrajectory {
    H(Vec<(f64, AuxStateH)>),
    C(Vec<(f64, AuxStateC)>),
    R(Vec<(f64, AuxStateR)>),
}

fn rk4<const N: usize>(
    y: &mut [f64; N],
    t: f64,
    dt: f64,
    deriv: &impl Fn(f64, &[f64; N]) -> [f64; N],
) {
    let k1 = deriv(t, y);
    let mut y2 = *y;
    for i in 0..N {
        y2[i] = y[i] + 0.5 * dt * k1[i];
    }
    let k2 = deriv(t + 0.5 * dt, &y2);
    for i in 0..N {
        y2[i] = y[i] + 0.5 * dt * k2[i];
    }
    let k3 = deriv(t + 0.5 * dt, &y2);
    for i in 0..N {
        y2[i] = y[i] + dt * k3[i];
    }
    let k4 = deriv(t + dt, &y2);
    for i in 0..N {
        y[i] += dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    }
}

fn integrate<const N: usize>(
    mut y: [f64; N],
    t_end: f64,
    sample_every: f64,
    max_rate: f64,
    deriv: impl Fn(f64, &[f64; N]) -> [f64; N],
) -> Vec<(f64, [f64; N])> {
    let dt = 1e-3 / max_rate.max(1.0);
    let mut out = Vec::new();
    out.push((0.0, y));
    let mut t = 0.0;
    let mut next_sample = sample_every;
    while t < t_end - 1e-12 * t_end.max(1.0) {
        let step = dt.min(t_end - t).min(next_sample - t);
        rk4(&mut y, t, step, &deriv);
        t += step;
        if t >= next_sample - 1e-12 {
            out.push((t, y));
            next_sample += sample_every;
        }
    }
    if out.last().map(|s| s.0) != Some(t) {
        out.push((t, y));
    }
    out
}

/// Integrates the regime's auxiliary system with RK4 under the envelope.
///
/// `target` supplies the acid center (w* for h, tumor level for c; the
/// healthy regime bounds w by the envelope directly).
pub fn simulate_aux(
    regime: RegimeTag,
    p: &ModelParams,
    env: &Envelope,
    init: &AuxInit,
    target: &SteadyState,
    t_end: f64,
    sample_every: f64,
) -> Result<AuxTrajectory, AuxError> {
    let rho = p.d2_over_r();
    let sigma0 = env.value_at(0.0);
    match (regime, init) {
        (RegimeTag::Heterogeneous, AuxInit::H(s0)) => {
            let ws = target.w_star;
            if !(s0.u_under > 0.0 && s0.u_under <= target.u_star + 1e-14) {
                return Err(AuxError::OrderingViolation { what: "0 < u_under <= u*", value: s0.u_under });
            }
            if !(s0.u_bar >= target.u_star && s0.u_bar <= 1.0) {
                return Err(AuxError::OrderingViolation { what: "u* <= u_bar <= 1", value: s0.u_bar });
            }
            if !(s0.v_under > 0.0 && s0.v_under <= target.v_star + 1e-14) {
                return Err(AuxError::OrderingViolation { what: "0 < v_under <= v*", value: s0.v_under });
            }
            if !(s0.v_bar >= target.v_star) {
                return Err(AuxError::OrderingViolation { what: "v* <= v_bar", value: s0.v_bar });
            }
            let rate = (1.0 + p.a2 * s0.v_bar.max(1.0) + p.d1 * (ws + sigma0))
                .max(p.r * (1.0 + p.a1 + rho * (ws + sigma0)));
            let deriv = |t: f64, y: &[f64; 4]| {
                let s = env.value_at(t);
                let [ub, uu, vb, vu] = *y;
                [
                    ub * (1.0 - ub - p.a2 * vu - p.d1 * (ws - s)),
                    uu * (1.0 - uu - p.a2 * vb - p.d1 * (ws + s)),
                    p.r * vb * (1.0 - p.a1 * uu - vb - rho * (ws - s)),
                    p.r * vu * (1.0 - p.a1 * ub - vu - rho * (ws + s)),
                ]
            };
            let raw = integrate(
                [s0.u_bar, s0.u_under, s0.v_bar, s0.v_under],
                t_end,
                sample_every,
                rate,
                deriv,
            );
            Ok(AuxTrajectory::H(
                raw.into_iter()
                    .map(|(t, y)| {
                        (t, AuxStateH { u_bar: y[0], u_under: y[1], v_bar: y[2], v_under: y[3] })
                    })
                    .collect(),
            ))
        }
        (RegimeTag::HomogeneousTumor, AuxInit::C(s0)) => {
            let wt = target.v_star; // acid equilibrates to the tumor level
            if !(s0.u_bar > 0.0 && s0.u_bar <= 1.0) {
                return Err(AuxError::OrderingViolation { what: "0 < u_bar <= 1", value: s0.u_bar });
            }
            if !(s0.v_under > 0.0 && s0.v_under <= target.v_star + 1e-14) {
                return Err(AuxError::OrderingViolation { what: "0 < v_under <= tumor level", value: s0.v_under });
            }
            if !(s0.v_bar >= target.v_star) {
                return Err(AuxError::OrderingViolation { what: "tumor level <= v_bar", value: s0.v_bar });
            }
            let rate = (1.0 + p.a2 * s0.v_bar.max(1.0) + p.d1 * (wt + sigma0))
                .max(p.r * (1.0 + p.a1 + rho * (wt + sigma0)));
            let deriv = |t: f64, y: &[f64; 3]| {
                let g = env.value_at(t);
                let [ub, vb, vu] = *y;
                [
                    ub * (1.0 - ub - p.a2 * vu - p.d1 * (wt - g)),
                    p.r * vb * (1.0 - vb - rho * (wt - g)),
                    p.r * vu * (1.0 - p.a1 * ub - vu - rho * (wt + g)),
                ]
            };
            let raw = integrate([s0.u_bar, s0.v_bar, s0.v_under], t_end, sample_every, rate, deriv);
            Ok(AuxTrajectory::C(
                raw.into_iter()
                    .map(|(t, y)| (t, AuxStateC { u_bar: y[0], v_bar: y[1], v_under: y[2] }))
                    .collect(),
            ))
        }
        (RegimeTag::Healthy, AuxInit::R(s0)) => {
            if !(s0.u_under > 0.0 && s0.u_under < 1.0) {
                return Err(AuxError::OrderingViolation { what: "0 < u_under < 1", value: s0.u_under });
            }
            if !(s0.v_bar > 0.0) {
                return Err(AuxError::OrderingViolation { what: "v_bar > 0", value: s0.v_bar });
            }
            let rate = (1.0 + p.a2 * s0.v_bar.max(1.0) + p.d1 * sigma0)
                .max(p.r * (1.0 + p.a1 + s0.v_bar.max(1.0)));
            let deriv = |t: f64, y: &[f64; 2]| {
                let th = env.value_at(t);
                let [uu, vb] = *y;
                [
                    uu * (1.0 - uu - p.a2 * vb - p.d1 * th),
                    p.r * vb * (1.0 - p.a1 * uu - vb),
                ]
            };
            let raw = integrate([s0.u_under, s0.v_bar], t_end, sample_every, rate, deriv);
            Ok(AuxTrajectory::R(
                raw.into_iter().map(|(t, y)| (t, AuxStateR { u_under: y[0], v_bar: y[1] })).collect(),
            ))
        }
        _ => Err(AuxError::RegimeMismatch),
    }
}

/// One out-of-band field value found by [`verify_sandwich`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SandwichViolation {
    pub t: f64,
    pub cell: usize,
    pub what: &'static str,
    pub value: f64,
    pub bound: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SandwichReport {
    pub n_checked: usize,
    pub tol: f64,
    /// Field cells outside the aux bounds, ordered by time then cell.
    pub violations: Vec<SandwichViolation>,
    /// Aux samples breaking the steady-state sandwich (tolerance 1e-9).
    pub steady_violations: Vec<(f64, &'static str, f64)>,
}

impl SandwichReport {
    pub fn ok(&self) -> bool {
        self.violations.is_empty() && self.steady_violations.is_empty()
    }
}

fn interp<S: Copy>(samples: &[(f64, S)], t: f64, lerp: impl Fn(&S, &S, f64) -> S) -> S {
    let idx = samples.partition_point(|s| s.0 <= t);
    if idx == 0 {
        return samples[0].1;
    }
    if idx >= samples.len() {
        return samples[samples.len() - 1].1;
    }
    let (t0, a) = samples[idx - 1];
    let (t1, b) = samples[idx];
    let frac = if t1 > t0 { (t - t0) / (t1 - t0) } else { 0.0 };
    lerp(&a, &b, frac)
}

fn lerp1(a: f64, b: f64, s: f64) -> f64 {
    a + (b - a) * s
}

/// Checks every snapshot cell against the (linearly interpolated) aux
/// bounds, and every aux sample against the steady-state sandwich.
/// Violations are data, not errors. tol = 1e-6 + 10 (h^2 + dt).
pub fn verify_sandwich(
    snapshots: &[FieldSnapshot],
    aux: &AuxTrajectory,
    target: &SteadyState,
    h: f64,
    dt: f64,
) -> SandwichReport {
    let tol = 1e-6 + 10.0 * (h * h + dt);
    let mut violations = Vec::new();
    let mut steady_violations = Vec::new();
    let mut n_checked = 0usize;

    let mut check = |t: f64, cell: usize, what: &'static str, value: f64, bound: f64, upper: bool| {
        n_checked += 1;
        let bad = if upper { value > bound + tol } else { value < bound - tol };
        if bad {
            violations.push(SandwichViolation { t, cell, what, value, bound });
        }
    };

    match aux {
        AuxTrajectory::H(samples) => {
            for snap in snapshots {
                let s = interp(samples, snap.t, |a, b, x| AuxStateH {
                    u_bar: lerp1(a.u_bar, b.u_bar, x),
                    u_under: lerp1(a.u_under, b.u_under, x),
                    v_bar: lerp1(a.v_bar, b.v_bar, x),
                    v_under: lerp1(a.v_under, b.v_under, x),
                });
                for i in 0..snap.u.len() {
                    check(snap.t, i, "u <= u_bar", snap.u[i], s.u_bar, true);
                    check(snap.t, i, "u >= u_under", snap.u[i], s.u_under, false);
                    check(snap.t, i, "v <= v_bar", snap.v[i], s.v_bar, true);
                    check(snap.t, i, "v >= v_under", snap.v[i], s.v_under, false);
                }
            }
            for (t, s) in samples {
                if s.u_under > target.u_star + 1e-9 {
                    steady_violations.push((*t, "u_under <= u*", s.u_under));
                }
                if s.u_bar < target.u_star - 1e-9 {
                    steady_violations.push((*t, "u* <= u_bar", s.u_bar));
                }
                if s.v_under > target.v_star + 1e-9 {
                    steady_violations.push((*t, "v_under <= v*", s.v_under));
                }
                if s.v_bar < target.v_star - 1e-9 {
                    steady_violations.push((*t, "v* <= v_bar", s.v_bar));
                }
            }
        }
        AuxTrajectory::C(samples) => {
            for snap in snapshots {
                let s = interp(samples, snap.t, |a, b, x| AuxStateC {
                    u_bar: lerp1(a.u_bar, b.u_bar, x),
                    v_bar: lerp1(a.v_bar, b.v_bar, x),
                    v_under: lerp1(a.v_under, b.v_under, x),
                });
                for i in 0..snap.u.len() {
                    check(snap.t, i, "u <= u_bar", snap.u[i], s.u_bar, true);
                    check(snap.t, i, "u >= 0", snap.u[i], 0.0, false);
                    check(snap.t, i, "v <= v_bar", snap.v[i], s.v_bar, true);
                    check(snap.t, i, "v >= v_under", snap.v[i], s.v_under, false);
                }
            }
            for (t, s) in samples {
                if s.v_under > target.v_star + 1e-9 {
                    steady_violations.push((*t, "v_under <= tumor level", s.v_under));
                }
                if s.v_bar < target.v_star - 1e-9 {
                    steady_violations.push((*t, "tumor level <= v_bar", s.v_bar));
                }
            }
        }
        AuxTrajectory::R(samples) => {
            for snap in snapshots {
                let s = interp(samples, snap.t, |a, b, x| AuxStateR {
                    u_under: lerp1(a.u_under, b.u_under, x),
                    v_bar: lerp1(a.v_bar, b.v_bar, x),
                });
                for i in 0..snap.u.len() {
                    check(snap.t, i, "u >= u_under", snap.u[i], s.u_under, false);
                    check(snap.t, i, "u < 1", snap.u[i], 1.0, true);
                    check(snap.t, i, "v <= v_bar", snap.v[i], s.v_bar, true);
                    check(snap.t, i, "v > 0", snap.v[i], 0.0, false);
                }
            }
        }
    }
    SandwichReport { n_checked, tol, violations, steady_violations }
}

/// Constants and current value of the log-ratio quantity
/// ln(u_bar/u_under) + A0 ln(v_bar/v_under).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogRatioDiag {
    pub value: f64,
    /// (1 + a2) / ((1 + a1) r)
    pub coeff0: f64,
    /// (1 - a1 a2) / (1 + a2)
    pub coeff1: f64,
    /// 2 d1 + 2 d2 coeff0
    pub coeff2: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NonpositiveComponent(pub f64);

impl fmt::Display for NonpositiveComponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "log-ratio needs strictly positive components, got {}", self.0)
    }
}

#[cfg(feature = "std")]
impl std::error::Error for NonpositiveComponent {}

pub fn log_ratio(aux: &AuxStateH, p: &ModelParams) -> Result<LogRatioDiag, NonpositiveComponent> {
    for x in [aux.u_bar, aux.u_under, aux.v_bar, aux.v_under] {
        if !(x > 0.0) {
            return Err(NonpositiveComponent(x));
        }
    }
    let coeff0 = (1.0 + p.a2) / ((1.0 + p.a1) * p.r);
    let coeff1 = (1.0 - p.a1 * p.a2) / (1.0 + p.a2);
    let coeff2 = 2.0 * p.d1 + 2.0 * p.d2 * coeff0;
    let value = log(aux.u_bar / aux.u_under) + coeff0 * log(aux.v_bar / aux.v_under);
    Ok(LogRatioDiag { value, coeff0, coeff1, coeff2 })
}

/// Geometry of the two competitive nullcline lines of the tumor regime's
/// limiting planar system, at a given perturbation size epsilon.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NullclineReport {
    /// Intersection of the two lines; `None` when parallel.
    pub intersection: Option<(f64, f64)>,
    pub parallel: bool,
    /// Where the first line meets the u-axis: (1 - d1 vt + eps/2, 0).
    pub semi_trivial_u: (f64, f64),
    /// Where the second line meets the v-axis: (0, vt - eps/2).
    pub semi_trivial_v: (f64, f64),
    /// Whether the second line stays above the first across u in [0, 1].
    pub nu_above_mu: bool,
    /// A positive interior equilibrium exists (intersection in the open
    /// first quadrant).
    pub positive_interior: bool,
}

/// Lines (in the (u, v) plane, vt the tumor acid level):
///   mu: 1 - u - a2 v - d1 vt + eps/2 = 0
///   nu: 1 - a1 u - v - (d2/r) vt - eps/2 = 0
pub fn nullclines_c(p: &ModelParams, epsilon: f64, target: &SteadyState) -> NullclineReport {
    let rho = p.d2_over_r();
    let vt = target.v_star;
    let b1 = 1.0 - p.d1 * vt + 0.5 * epsilon; // u + a2 v = b1
    let b2 = 1.0 - rho * vt - 0.5 * epsilon; // a1 u + v = b2
    let det = 1.0 - p.a1 * p.a2;
    let parallel = fabs(det) <= 1e-12 * (1.0 + p.a1 * p.a2);
    let intersection = (!parallel).then(|| ((b1 - p.a2 * b2) / det, (b2 - p.a1 * b1) / det));
    // compare v-values of the lines at the ends of [0, 1]
    let mu_v = |u: f64| (b1 - u) / p.a2;
    let nu_v = |u: f64| b2 - p.a1 * u;
    let nu_above_mu = nu_v(0.0) > mu_v(0.0) && nu_v(1.0) > mu_v(1.0);
    let positive_interior = intersection.map(|(u, v)| u > 0.0 && v > 0.0).unwrap_or(false);
    NullclineReport {
        intersection,
        parallel,
        semi_trivial_u: (b1, 0.0),
        semi_trivial_v: (0.0, b2),
        nu_above_mu,
        positive_interior,
    }
}
