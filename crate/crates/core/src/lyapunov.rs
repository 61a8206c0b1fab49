//! Lyapunov certificates and energy functionals.
//!
//! For each of the three nontrivial steady states there is a coupling matrix
//! P(beta, eta) whose positive definiteness forces d/dt E <= -eps F along
//! solutions. Feasible beta are exactly the overlap of two open intervals
//! given by concave quadratics Phi and Psi; for a fixed beta the feasible eta
//! form a window around the vertex of a concave quadratic obtained from
//! det P. This module builds the quadratics, searches for a certificate
//! (beta, eta, eps), and evaluates E and F along discrete trajectories.

use crate::model::{ModelParams, SteadyState};
use crate::pde::FieldSnapshot;
use crate::util::linear_fit;
use alloc::vec::Vec;
use core::fmt;
use libm::{acos, cos, log, sqrt};

/// Which steady state the certificate targets.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RegimeTag {
    /// Heterogeneous coexistence state.
    Heterogeneous,
    /// Homogeneous tumor state.
    HomogeneousTumor,
    /// Healthy state.
    Healthy,
}

impl fmt::Display for RegimeTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            RegimeTag::Heterogeneous => "heterogeneous",
            RegimeTag::HomogeneousTumor => "homogeneous_tumor",
            RegimeTag::Healthy => "healthy",
        };
        f.write_str(s)
    }
}

/// Coefficients of a quadratic A b^2 + B b + C.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quadratic {
    pub a: f64,
    pub b: f64,
    pub c: f64,
}

impl Quadratic {
    pub fn eval(&self, x: f64) -> f64 {
        (self.a * x + self.b) * x + self.c
    }
}

/// The regime's Phi/Psi quadratics with their positive-solution intervals.
///
/// `s1` is the open interval where Phi > 0 and `s2` where Psi > 0, both with
/// endpoints from the closed-form roots (L^2, R^2). `None` means a radicand
/// was negative and the interval is empty.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadraticPair {
    pub regime: RegimeTag,
    pub phi: Quadratic,
    pub psi: Quadratic,
    pub s1: Option<(f64, f64)>,
    pub s2: Option<(f64, f64)>,
    /// The delta weight of the homogeneous-tumor regime; 1 for the others.
    pub delta_scale: f64,
}

fn interval_from_roots(lo_root: f64, hi_root: f64) -> Option<(f64, f64)> {
    let (lo, hi) = (lo_root * lo_root, hi_root * hi_root);
    if lo < hi {
        Some((lo, hi))
    } else {
        None
    }
}

/// Builds Phi and Psi for `regime` at `p`, together with the closed-form
/// root intervals.
pub fn build_quadratics(regime: RegimeTag, p: &ModelParams) -> QuadraticPair {
    let a1 = p.a1;
    let a2 = p.a2;
    let d1 = p.d1;
    let rho = p.d2_over_r();
    let ad = a2 + d1;
    let aa = a1 * a1;

    match regime {
        RegimeTag::Heterogeneous => {
            let phi = Quadratic { a: -aa, b: 2.0 * (2.0 * (1.0 + rho) - a1 * ad), c: -ad * ad };
            let psi = Quadratic { a: -aa, b: 2.0 * (2.0 - a1 * a2), c: -a2 * a2 };
            let rad1 = 1.0 + rho - a1 * ad;
            let s1 = (rad1 >= 0.0).then(|| {
                let x = sqrt(1.0 + rho);
                let y = sqrt(rad1);
                interval_from_roots((x - y) / a1, (x + y) / a1)
            }).flatten();
            let rad2 = 1.0 - a1 * a2;
            let s2 = (rad2 >= 0.0)
                .then(|| {
                    let y = sqrt(rad2);
                    interval_from_roots((1.0 - y) / a1, (1.0 + y) / a1)
                })
                .flatten();
            QuadraticPair { regime, phi, psi, s1, s2, delta_scale: 1.0 }
        }
        RegimeTag::HomogeneousTumor => {
            let delta = ad / (1.0 + rho);
            let phi = Quadratic { a: -aa, b: 2.0 * (2.0 - a1) * ad, c: -ad * ad };
            let psi = Quadratic { a: -aa, b: 2.0 * (2.0 * delta - a1 * a2), c: -a2 * a2 };
            let rad1 = 1.0 - a1;
            let s1 = (rad1 >= 0.0)
                .then(|| {
                    let y = sqrt(rad1);
                    let s = sqrt(ad);
                    interval_from_roots((1.0 - y) * s / a1, (1.0 + y) * s / a1)
                })
                .flatten();
            let rad2 = delta - a1 * a2;
            let s2 = (rad2 >= 0.0)
                .then(|| {
                    let x = sqrt(delta);
                    let y = sqrt(rad2);
                    interval_from_roots((x - y) / a1, (x + y) / a1)
                })
                .flatten();
            QuadraticPair { regime, phi, psi, s1, s2, delta_scale: delta }
        }
        RegimeTag::Healthy => {
            let phi =
                Quadratic { a: -aa, b: 2.0 * (2.0 * (a1 + rho) - a1 * ad), c: -ad * ad };
            let psi = Quadratic { a: -aa, b: 2.0 * (2.0 * a1 - a1 * a2), c: -a2 * a2 };
            let rad1 = a1 + rho - a1 * ad;
            let s1 = (rad1 >= 0.0)
                .then(|| {
                    let x = sqrt(a1 + rho);
                    let y = sqrt(rad1);
                    interval_from_roots((x - y) / a1, (x + y) / a1)
                })
                .flatten();
            let rad2 = 1.0 - a2;
            let s2 = (rad2 >= 0.0)
                .then(|| {
                    let y = sqrt(rad2);
                    let sa = sqrt(a1);
                    interval_from_roots((1.0 - y) / sa, (1.0 + y) / sa)
                })
                .flatten();
            QuadraticPair { regime, phi, psi, s1, s2, delta_scale: 1.0 }
        }
    }
}

/// Intersection of the pair's two intervals; `None` when empty.
pub fn beta_interval(q: &QuadraticPair) -> Option<(f64, f64)> {
    let (l1, r1) = q.s1?;
    let (l2, r2) = q.s2?;
    let lo = l1.max(l2);
    let hi = r1.min(r2);
    (lo < hi).then_some((lo, hi))
}

/// Why no certificate could be produced.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NoCertificateReason {
    /// S1 and S2 do not overlap (or one is empty).
    EmptyBetaInterval,
    /// No eta > 0 makes det P positive at the chosen beta.
    EmptyEtaWindow,
    /// Homogeneous-tumor regime requires delta = (a2+d1)/(1+d2/r) > 1.
    DeltaNotAboveOne,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CertificateError {
    NoCertificate { regime: RegimeTag, reason: NoCertificateReason },
}

impl fmt::Display for CertificateError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let CertificateError::NoCertificate { regime, reason } = self;
        let why = match reason {
            NoCertificateReason::EmptyBetaInterval => "empty beta interval",
            NoCertificateReason::EmptyEtaWindow => "empty eta window",
            NoCertificateReason::DeltaNotAboveOne => "delta = (a2+d1)/(1+d2/r) not above 1",
        };
        write!(f, "no certificate for regime {regime}: {why}")
    }
}

#[cfg(feature = "std")]
impl std::error::Error for CertificateError {}

/// A concrete (beta, eta, eps) witnessing positive definiteness of P.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LyapunovCertificate {
    pub regime: RegimeTag,
    pub beta: f64,
    pub eta: f64,
    /// Decay constant: min of the estimated smallest eigenvalue of P and
    /// eta/c.
    pub epsilon: f64,
    pub matrix: [[f64; 3]; 3],
    /// The three leading principal minors of P.
    pub minors: (f64, f64, f64),
}

/// Coefficients of det P as a quadratic in eta:
/// 4 det P = -p eta^2 + 2 q eta + s.
fn eta_quadratic(regime: RegimeTag, p: &ModelParams, beta: f64) -> (f64, f64, f64) {
    let rho = p.d2_over_r();
    let alpha = 0.5 * (p.a2 + p.a1 * beta);
    match regime {
        RegimeTag::Heterogeneous => {
            let q = 2.0 * (beta - alpha * alpha) + (rho * beta - alpha * p.d1);
            let s = 2.0 * alpha * p.d1 * rho * beta - (rho * beta) * (rho * beta)
                - p.d1 * p.d1 * beta;
            (1.0, q, s)
        }
        RegimeTag::HomogeneousTumor => {
            let delta = (p.a2 + p.d1) / (1.0 + rho);
            let q = 2.0 * (delta * beta - alpha * alpha) + (rho * delta * beta - alpha * p.d1);
            let s = 2.0 * alpha * p.d1 * rho * beta - delta * (rho * beta) * (rho * beta)
                - p.d1 * p.d1 * beta;
            (delta, q, s)
        }
        RegimeTag::Healthy => {
            let q = 2.0 * (p.a1 * beta - alpha * alpha) + (rho * beta - alpha * p.d1);
            let s = 2.0 * alpha * p.d1 * rho * beta - (rho * beta) * (rho * beta)
                - p.a1 * p.d1 * p.d1 * beta;
            (1.0, q, s)
        }
    }
}

/// Open window of eta for which det P > 0 at the given beta, together with
/// the det-maximizing vertex. `None` when the window is empty.
pub fn eta_window(regime: RegimeTag, p: &ModelParams, beta: f64) -> Option<((f64, f64), f64)> {
    let (pc, q, s) = eta_quadratic(regime, p, beta);
    let disc = q * q + pc * s;
    if disc <= 0.0 || q <= 0.0 {
        return None;
    }
    let root = sqrt(disc);
    let lo = ((q - root) / pc).max(0.0);
    let hi = (q + root) / pc;
    (lo < hi).then_some(((lo, hi), q / pc))
}

fn assemble_matrix(regime: RegimeTag, p: &ModelParams, beta: f64, eta: f64) -> [[f64; 3]; 3] {
    let rho = p.d2_over_r();
    let alpha = 0.5 * (p.a2 + p.a1 * beta);
    let off_vw = 0.5 * (rho * beta - eta);
    let (m11, m22) = match regime {
        RegimeTag::Heterogeneous => (1.0, beta),
        RegimeTag::HomogeneousTumor => ((p.a2 + p.d1) / (1.0 + rho), beta),
        RegimeTag::Healthy => (1.0, p.a1 * beta),
    };
    [
        [m11, alpha, 0.5 * p.d1],
        [alpha, m22, off_vw],
        [0.5 * p.d1, off_vw, eta],
    ]
}

fn det3(m: &[[f64; 3]; 3]) -> f64 {
    m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
        - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
}

/// Smallest eigenvalue of a symmetric 3x3 matrix via the characteristic
/// cubic (trigonometric form).
fn min_eigenvalue_sym3(m: &[[f64; 3]; 3]) -> f64 {
    let p1 = m[0][1] * m[0][1] + m[0][2] * m[0][2] + m[1][2] * m[1][2];
    if p1 == 0.0 {
        return m[0][0].min(m[1][1]).min(m[2][2]);
    }
    let q = (m[0][0] + m[1][1] + m[2][2]) / 3.0;
    let p2 = (m[0][0] - q) * (m[0][0] - q)
        + (m[1][1] - q) * (m[1][1] - q)
        + (m[2][2] - q) * (m[2][2] - q)
        + 2.0 * p1;
    let p = sqrt(p2 / 6.0);
    let mut b = *m;
    for i in 0..3 {
        b[i][i] -= q;
        for j in 0..3 {
            b[i][j] /= p;
        }
    }
    let r = (det3(&b) / 2.0).clamp(-1.0, 1.0);
    let phi = acos(r) / 3.0;
    // smallest eigenvalue uses the phase shifted by 2*pi/3
    q + 2.0 * p * cos(phi + 2.0 * core::f64::consts::FRAC_PI_3)
}

/// Fixed probe set: the 26 directions with components in {-1, 0, 1}.
fn probe_min_rayleigh(m: &[[f64; 3]; 3]) -> f64 {
    let mut min = f64::INFINITY;
    for i in -1i32..=1 {
        for j in -1i32..=1 {
            for k in -1i32..=1 {
                if i == 0 && j == 0 && k == 0 {
                    continue;
                }
                let x = [i as f64, j as f64, k as f64];
                let norm2 = (x[0] * x[0] + x[1] * x[1] + x[2] * x[2]) as f64;
                let mut quad = 0.0;
                for a in 0..3 {
                    for b in 0..3 {
                        quad += x[a] * m[a][b] * x[b];
                    }
                }
                min = min.min(quad / norm2);
            }
        }
    }
    min
}

/// Builds a certificate at a caller-chosen beta (test hook; `find_certificate`
/// chooses beta from the overlap interval).
pub fn certificate_with_beta(
    regime: RegimeTag,
    p: &ModelParams,
    beta: f64,
) -> Result<LyapunovCertificate, CertificateError> {
    let ((_, _), eta) = eta_window(regime, p, beta).ok_or(CertificateError::NoCertificate {
        regime,
        reason: NoCertificateReason::EmptyEtaWindow,
    })?;
    let matrix = assemble_matrix(regime, p, beta, eta);
    let m1 = matrix[0][0];
    let m2 = matrix[0][0] * matrix[1][1] - matrix[0][1] * matrix[0][1];
    let m3 = det3(&matrix);
    let eps1 = probe_min_rayleigh(&matrix).min(min_eigenvalue_sym3(&matrix));
    let epsilon = eps1.min(eta / p.c);
    Ok(LyapunovCertificate { regime, beta, eta, epsilon, matrix, minors: (m1, m2, m3) })
}

/// Searches for a positive-definiteness certificate for `regime` at `p`.
///
/// beta is the midpoint of the S1 ∩ S2 overlap (geometric mean when the
/// interval spans more than four orders of magnitude); eta is the vertex of
/// the concave det-quadratic.
pub fn find_certificate(
    regime: RegimeTag,
    p: &ModelParams,
) -> Result<LyapunovCertificate, CertificateError> {
    if regime == RegimeTag::HomogeneousTumor {
        let delta = (p.a2 + p.d1) / (1.0 + p.d2_over_r());
        if delta <= 1.0 {
            return Err(CertificateError::NoCertificate {
                regime,
                reason: NoCertificateReason::DeltaNotAboveOne,
            });
        }
    }
    let q = build_quadratics(regime, p);
    let (lo, hi) = beta_interval(&q).ok_or(CertificateError::NoCertificate {
        regime,
        reason: NoCertificateReason::EmptyBetaInterval,
    })?;
    let beta = if lo > 0.0 && hi / lo > 1e4 { sqrt(lo * hi) } else { 0.5 * (lo + hi) };
    certificate_with_beta(regime, p, beta)
}

/// One evaluation of the energy pair (E, F) along a trajectory.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FunctionalSample {
    pub t: f64,
    pub e: f64,
    pub f: f64,
    /// Centered difference of E in t (one-sided at the ends).
    pub de_dt_discrete: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FunctionalError {
    /// A logarithm argument was <= 0.
    NonpositiveDensity { t: f64, cell: usize, value: f64 },
}

impl fmt::Display for FunctionalError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let FunctionalError::NonpositiveDensity { t, cell, value } = self;
        write!(f, "nonpositive density {value:e} at t = {t}, cell {cell}")
    }
}

#[cfg(feature = "std")]
impl std::error::Error for FunctionalError {}

/// x - x* - x* ln(x / x*), the entropy-type integrand.
fn entropy_term(x: f64, x_star: f64) -> f64 {
    x - x_star - x_star * log(x / x_star)
}

fn dirichlet_energy(w: &[f64], h: f64) -> f64 {
    let mut sum = 0.0;
    for i in 0..w.len().saturating_sub(1) {
        let d = (w[i + 1] - w[i]) / h;
        sum += d * d * h;
    }
    sum
}

/// Evaluates E and F at each snapshot using the certificate's (beta, eta)
/// and the model's r and c.
pub fn eval_functionals(
    snapshots: &[FieldSnapshot],
    h: f64,
    cert: &LyapunovCertificate,
    target: &SteadyState,
    p: &ModelParams,
) -> Result<Vec<FunctionalSample>, FunctionalError> {
    let mut out = Vec::with_capacity(snapshots.len());
    for snap in snapshots {
        let mut a_term = 0.0;
        let mut b_term = 0.0;
        let mut c_term = 0.0;
        let mut f_sq = 0.0;
        for i in 0..snap.u.len() {
            let (u, v, w) = (snap.u[i], snap.v[i], snap.w[i]);
            let (au, bv) = match cert.regime {
                RegimeTag::Heterogeneous => {
                    if u <= 0.0 {
                        return Err(FunctionalError::NonpositiveDensity {
                            t: snap.t,
                            cell: i,
                            value: u,
                        });
                    }
                    if v <= 0.0 {
                        return Err(FunctionalError::NonpositiveDensity {
                            t: snap.t,
                            cell: i,
                            value: v,
                        });
                    }
                    (entropy_term(u, target.u_star), entropy_term(v, target.v_star))
                }
                RegimeTag::HomogeneousTumor => {
                    if v <= 0.0 {
                        return Err(FunctionalError::NonpositiveDensity {
                            t: snap.t,
                            cell: i,
                            value: v,
                        });
                    }
                    (u, entropy_term(v, target.v_star))
                }
                RegimeTag::Healthy => {
                    if u <= 0.0 {
                        return Err(FunctionalError::NonpositiveDensity {
                            t: snap.t,
                            cell: i,
                            value: u,
                        });
                    }
                    (entropy_term(u, 1.0), v)
                }
            };
            a_term += h * au;
            b_term += h * bv;
            let dw = w - target.w_star;
            c_term += 0.5 * h * dw * dw;
            let du = u - target.u_star;
            let dv = v - target.v_star;
            f_sq += h * (du * du + dv * dv + dw * dw);
        }
        let e = a_term + cert.beta / p.r * b_term + cert.eta / p.c * c_term;
        let f = f_sq + dirichlet_energy(&snap.w, h);
        out.push(FunctionalSample { t: snap.t, e, f, de_dt_discrete: 0.0 });
    }
    // centered differences in t
    let n = out.len();
    for i in 0..n {
        let (jm, jp) = (i.saturating_sub(1), (i + 1).min(n - 1));
        if jp > jm {
            out[i].de_dt_discrete = (out[jp].e - out[jm].e) / (out[jp].t - out[jm].t);
        }
    }
    Ok(out)
}

/// Thresholds and discretization data for [`check_decay`].
#[derive(Debug, Clone, Copy)]
pub struct DecayCheckConfig {
    /// Grid spacing of the run the samples came from.
    pub dx: f64,
    /// Time-step of the run.
    pub dt: f64,
    /// Ignore samples before this time.
    pub t_min: f64,
    /// Required fraction of samples satisfying the decay inequality.
    pub min_fraction: f64,
    /// Required upper bound on the fitted exponential rate of E.
    pub max_rate: f64,
}

impl Default for DecayCheckConfig {
    fn default() -> Self {
        DecayCheckConfig { dx: 0.0, dt: 0.0, t_min: 1.0, min_fraction: 0.99, max_rate: -0.01 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DecayReport {
    /// Fraction of checked samples with dE/dt <= -eps F + tol.
    pub fraction_ok: f64,
    pub n_checked: usize,
    /// Least-squares slope of ln E over the trailing half of the samples.
    pub fitted_rate: Option<f64>,
    pub r_squared: Option<f64>,
    pub pass: bool,
    /// Indices of samples violating the decay inequality.
    pub violations: Vec<usize>,
}

/// Checks the decay inequality dE/dt <= -eps F within a discretization
/// budget of 10 (dt^2 + dx^2)(1 + F), and fits the exponential rate of E.
pub fn check_decay(
    samples: &[FunctionalSample],
    cert: &LyapunovCertificate,
    cfg: &DecayCheckConfig,
) -> DecayReport {
    let mut n_checked = 0usize;
    let mut n_ok = 0usize;
    let mut violations = Vec::new();
    for (i, s) in samples.iter().enumerate() {
        if s.t < cfg.t_min || i == 0 || i + 1 == samples.len() {
            continue;
        }
        n_checked += 1;
        let tol = 10.0 * (cfg.dt * cfg.dt + cfg.dx * cfg.dx) * (1.0 + s.f);
        if s.de_dt_discrete <= -cert.epsilon * s.f + tol {
            n_ok += 1;
        } else {
            violations.push(i);
        }
    }
    let fraction_ok = if n_checked == 0 { 0.0 } else { n_ok as f64 / n_checked as f64 };

    // exponential rate over the trailing half, where E is meaningfully positive
    let half = &samples[samples.len() / 2..];
    let mut ts = Vec::new();
    let mut logs = Vec::new();
    for s in half {
        if s.e > 1e-300 {
            ts.push(s.t);
            logs.push(log(s.e));
        }
    }
    let fit = linear_fit(&ts, &logs);
    let (fitted_rate, r_squared) = match fit {
        Some((_, slope, r2)) => (Some(slope), Some(r2)),
        None => (None, None),
    };
    let pass = fraction_ok >= cfg.min_fraction
        && fitted_rate.map(|r| r <= cfg.max_rate).unwrap_or(false);
    DecayReport { fraction_ok, n_checked, fitted_rate, r_squared, pass, violations }
}

/// Discriminant of the eta-quadratic, 4 (q^2 + p s); equals Phi(beta) Psi(beta).
/// Exposed for the factorization property test.
pub fn eta_discriminant(regime: RegimeTag, p: &ModelParams, beta: f64) -> f64 {
    let (pc, q, s) = eta_quadratic(regime, p, beta);
    4.0 * (q * q + pc * s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model;

    fn params(a1: f64, a2: f64, d1: f64, d2_over_r: f64) -> ModelParams {
        ModelParams::new(1.0, d1, d2_over_r, 1.0, 1.0, a1, a2).unwrap()
    }

    /// Brute-force positive-solution interval of a concave quadratic.
    fn scan_interval(q: &Quadratic, max: f64, n: usize) -> Option<(f64, f64)> {
        let mut lo = None;
        let mut hi = None;
        for i in 0..=n {
            let x = max * i as f64 / n as f64;
            if q.eval(x) > 0.0 {
                if lo.is_none() {
                    lo = Some(x);
                }
                hi = Some(x);
            }
        }
        Some((lo?, hi?))
    }

    #[test]
    fn quadratic_intervals_half_half() {
        let p = params(0.5, 0.5, 0.5, 0.5);
        let q = build_quadratics(RegimeTag::Heterogeneous, &p);
        let (l1, r1) = q.s1.unwrap();
        let (l2, r2) = q.s2.unwrap();
        assert!((l1 - 0.2020).abs() < 1e-3);
        assert!((r1 - 19.798).abs() < 1e-2);
        assert!((l2 - 0.0718).abs() < 1e-3);
        assert!((r2 - 13.928).abs() < 1e-2);
        // brute-force cross-check
        let (sl, sr) = scan_interval(&q.phi, 25.0, 2_000_000).unwrap();
        assert!((sl - l1).abs() < 5e-5);
        assert!((sr - r1).abs() < 5e-5);
        let (sl, sr) = scan_interval(&q.psi, 25.0, 2_000_000).unwrap();
        assert!((sl - l2).abs() < 5e-5);
        assert!((sr - r2).abs() < 5e-5);
    }

    #[test]
    fn empty_intersection_case() {
        let p = params(0.99, 0.99, 5.0, 5.0);
        let q = build_quadratics(RegimeTag::Heterogeneous, &p);
        let (l1, _) = q.s1.unwrap();
        let (_, r2) = q.s2.unwrap();
        assert!((l1.sqrt() - 2.2072).abs() < 1e-3);
        assert!((r2.sqrt() - 1.1526).abs() < 1e-3);
        assert!(beta_interval(&q).is_none());
        assert!(matches!(
            find_certificate(RegimeTag::Heterogeneous, &p),
            Err(CertificateError::NoCertificate {
                reason: NoCertificateReason::EmptyBetaInterval,
                ..
            })
        ));
    }

    #[test]
    fn psi_c_reduces_to_psi_h_at_delta_one() {
        // a2 + d1 = 1 + d2/r makes delta = 1
        let p = params(0.4, 0.8, 0.7, 0.5);
        assert!(((p.a2 + p.d1) / (1.0 + p.d2_over_r()) - 1.0).abs() < 1e-14);
        let qc = build_quadratics(RegimeTag::HomogeneousTumor, &p);
        let qh = build_quadratics(RegimeTag::Heterogeneous, &p);
        assert!((qc.psi.a - qh.psi.a).abs() < 1e-14);
        assert!((qc.psi.b - qh.psi.b).abs() < 1e-14);
        assert!((qc.psi.c - qh.psi.c).abs() < 1e-14);
    }

    #[test]
    fn beta_interval_intersection() {
        let p = params(0.5, 0.5, 0.5, 0.5);
        let q = build_quadratics(RegimeTag::Heterogeneous, &p);
        let (lo, hi) = beta_interval(&q).unwrap();
        assert!((lo - 0.2020).abs() < 1e-3);
        assert!((hi - 13.928).abs() < 1e-2);
    }

    #[test]
    fn eta_window_forced_beta() {
        let p = params(0.5, 0.5, 0.5, 0.5);
        let ((lo, hi), vertex) = eta_window(RegimeTag::Heterogeneous, &p, 1.0).unwrap();
        assert!((vertex - 1.75).abs() < 1e-12);
        assert!((lo - 0.0730).abs() < 1e-4);
        assert!((hi - 3.4271).abs() < 1e-4);
        let cert = certificate_with_beta(RegimeTag::Heterogeneous, &p, 1.0).unwrap();
        assert!(cert.minors.0 > 0.0 && cert.minors.1 > 0.0 && cert.minors.2 > 0.0);
        // brute-force: det positive across the window, negative outside
        for eta in [lo + 1e-3, vertex, hi - 1e-3] {
            let m = assemble_matrix(RegimeTag::Heterogeneous, &p, 1.0, eta);
            assert!(det3(&m) > 0.0);
        }
        for eta in [lo - 1e-2, hi + 1e-2] {
            let m = assemble_matrix(RegimeTag::Heterogeneous, &p, 1.0, eta);
            assert!(det3(&m) < 0.0);
        }
    }

    #[test]
    fn second_minor_is_quarter_psi() {
        for (regime, p) in [
            (RegimeTag::Heterogeneous, params(0.5, 0.5, 0.5, 0.5)),
            (RegimeTag::HomogeneousTumor, params(0.5, 1.5, 0.5, 0.5)),
            (RegimeTag::Healthy, params(2.0, 0.5, 0.5, 1.0)),
        ] {
            let cert = find_certificate(regime, &p).unwrap();
            let q = build_quadratics(regime, &p);
            assert!(
                (cert.minors.1 - 0.25 * q.psi.eval(cert.beta)).abs()
                    < 1e-12 * (1.0 + cert.minors.1.abs())
            );
        }
    }

    #[test]
    fn delta_not_above_one_rejected() {
        // a2 + d1 < 1 + d2/r
        let p = params(0.5, 0.3, 0.3, 0.5);
        assert!(matches!(
            find_certificate(RegimeTag::HomogeneousTumor, &p),
            Err(CertificateError::NoCertificate {
                reason: NoCertificateReason::DeltaNotAboveOne,
                ..
            })
        ));
    }

    #[test]
    fn functionals_at_target_vanish() {
        let p = params(0.5, 0.5, 0.5, 0.5);
        let target = model::heterogeneous_state(&p).unwrap();
        let cert = find_certificate(RegimeTag::Heterogeneous, &p).unwrap();
        let snap = FieldSnapshot {
            t: 0.0,
            u: alloc::vec![0.5; 8],
            v: alloc::vec![0.5; 8],
            w: alloc::vec![0.5; 8],
        };
        let s = eval_functionals(&[snap], 0.125, &cert, &target, &p).unwrap();
        assert!(s[0].e.abs() < 1e-15);
        assert!(s[0].f.abs() < 1e-15);
    }

    #[test]
    fn functional_single_cell_value() {
        let p = params(0.5, 0.5, 0.5, 0.5);
        let target = model::heterogeneous_state(&p).unwrap();
        let mut cert = find_certificate(RegimeTag::Heterogeneous, &p).unwrap();
        let snap = FieldSnapshot {
            t: 0.0,
            u: alloc::vec![0.6],
            v: alloc::vec![0.5],
            w: alloc::vec![0.5],
        };
        let s = eval_functionals(&[snap.clone()], 1.0, &cert, &target, &p).unwrap();
        let expect = 0.1 - 0.5 * (1.2f64).ln();
        assert!((s[0].e - expect).abs() < 1e-12);
        assert!((expect - 0.0088392).abs() < 1e-7);
        // doubling eta doubles the C-term contribution exactly
        let snap_w = FieldSnapshot {
            t: 0.0,
            u: alloc::vec![0.5],
            v: alloc::vec![0.5],
            w: alloc::vec![0.7],
        };
        let e1 = eval_functionals(&[snap_w.clone()], 1.0, &cert, &target, &p).unwrap()[0].e;
        cert.eta *= 2.0;
        let e2 = eval_functionals(&[snap_w], 1.0, &cert, &target, &p).unwrap()[0].e;
        assert!((e2 - 2.0 * e1).abs() < 1e-15);
    }

    #[test]
    fn nonpositive_density_rejected() {
        let p = params(0.5, 0.5, 0.5, 0.5);
        let target = model::heterogeneous_state(&p).unwrap();
        let cert = find_certificate(RegimeTag::Heterogeneous, &p).unwrap();
        let snap = FieldSnapshot {
            t: 0.0,
            u: alloc::vec![0.0],
            v: alloc::vec![0.5],
            w: alloc::vec![0.5],
        };
        assert!(matches!(
            eval_functionals(&[snap], 1.0, &cert, &target, &p),
            Err(FunctionalError::NonpositiveDensity { .. })
        ));
    }

    #[test]
    fn decay_check_synthetic() {
        let p = params(0.5, 0.5, 0.5, 0.5);
        let mut cert = find_certificate(RegimeTag::Heterogeneous, &p).unwrap();
        cert.epsilon = 0.5;
        // E(t) = F(t) = e^{-t}: dE/dt = -E <= -0.5 F always
        let mut samples = Vec::new();
        for k in 0..200 {
            let t = k as f64 * 0.1;
            let e = (-t).exp();
            samples.push(FunctionalSample { t, e, f: e, de_dt_discrete: 0.0 });
        }
        let n = samples.len();
        for i in 1..n - 1 {
            samples[i].de_dt_discrete =
                (samples[i + 1].e - samples[i - 1].e) / (samples[i + 1].t - samples[i - 1].t);
        }
        let cfg = DecayCheckConfig { dx: 0.01, dt: 1e-4, ..Default::default() };
        let rep = check_decay(&samples, &cert, &cfg);
        assert_eq!(rep.fraction_ok, 1.0);
        assert!((rep.fitted_rate.unwrap() + 1.0).abs() < 1e-3);
        assert!(rep.pass);

        // increasing E fails everywhere
        for (k, s) in samples.iter_mut().enumerate() {
            s.e = 1.0 + k as f64;
            s.f = 1.0;
            s.de_dt_discrete = 10.0;
        }
        let rep = check_decay(&samples, &cert, &cfg);
        assert_eq!(rep.fraction_ok, 0.0);
        assert!(!rep.pass);
    }

    #[test]
    fn certificate_rayleigh_positive() {
        use rand_core::{RngCore, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let unit = |r: &mut rand_chacha::ChaCha8Rng| {
            loop {
                let mut x = [0.0f64; 3];
                for xi in &mut x {
                    *xi = (r.next_u64() >> 11) as f64 / (1u64 << 53) as f64 * 2.0 - 1.0;
                }
                let n = (x[0] * x[0] + x[1] * x[1] + x[2] * x[2]).sqrt();
                if n > 1e-3 {
                    return [x[0] / n, x[1] / n, x[2] / n];
                }
            }
        };
        let p = params(0.5, 0.5, 0.5, 0.5);
        let cert = find_certificate(RegimeTag::Heterogeneous, &p).unwrap();
        for _ in 0..10_000 {
            let x = unit(&mut rng);
            let mut quad = 0.0;
            for a in 0..3 {
                for b in 0..3 {
                    quad += x[a] * cert.matrix[a][b] * x[b];
                }
            }
            assert!(quad > 0.0);
            assert!(quad >= cert.epsilon.min(cert.eta / p.c) - 1e-12);
        }
    }
}
