//! Randomized invariants over parameter space.

use acidlab_core::auxode::build_envelope;
use acidlab_core::lyapunov::{
    beta_interval, build_quadratics, eta_discriminant, find_certificate, RegimeTag,
};
use acidlab_core::model::{
    heterogeneous_state, homogeneous_tumor_state, linear_stability, LinearStability, ModelParams,
    SteadyState, SteadyStateKind,
};
use acidlab_core::regimes::{classify_global, thresholds, CaseTag};
use proptest::prelude::*;

fn params(a1: f64, a2: f64, d1: f64, rho: f64) -> ModelParams {
    // r = c = 1, so d2 doubles as rho
    ModelParams::new(1.0, d1, rho, 1.0, 1.0, a1, a2).unwrap()
}

const REGIMES: [RegimeTag; 3] =
    [RegimeTag::Heterogeneous, RegimeTag::HomogeneousTumor, RegimeTag::Healthy];

proptest! {
    /// The discriminant of the eta-quadratic factors as Phi(beta) Psi(beta).
    #[test]
    fn discriminant_factorizes(
        a1 in 0.05f64..2.5,
        a2 in 0.05f64..2.5,
        d1 in 0.01f64..5.0,
        rho in 0.01f64..5.0,
        beta in 0.05f64..20.0,
    ) {
        let p = params(a1, a2, d1, rho);
        for regime in REGIMES {
            let q = build_quadratics(regime, &p);
            let product = q.phi.eval(beta) * q.psi.eval(beta);
            let disc = eta_discriminant(regime, &p, beta);
            let scale = 1.0 + product.abs().max(disc.abs());
            prop_assert!(
                (disc - product).abs() <= 1e-8 * scale,
                "{regime}: disc {disc} vs product {product}"
            );
        }
    }

    /// Closed-form interval endpoints are roots; the quadratic is positive
    /// strictly inside the interval.
    #[test]
    fn interval_endpoints_are_roots(
        a1 in 0.05f64..2.5,
        a2 in 0.05f64..2.5,
        d1 in 0.01f64..5.0,
        rho in 0.01f64..5.0,
    ) {
        let p = params(a1, a2, d1, rho);
        for regime in REGIMES {
            let q = build_quadratics(regime, &p);
            for (quad, interval) in [(&q.phi, q.s1), (&q.psi, q.s2)] {
                if let Some((lo, hi)) = interval {
                    let scale = |x: f64| {
                        1.0 + quad.a.abs() * x * x + quad.b.abs() * x + quad.c.abs()
                    };
                    prop_assert!(quad.eval(lo).abs() <= 1e-9 * scale(lo));
                    prop_assert!(quad.eval(hi).abs() <= 1e-9 * scale(hi));
                    let mid = 0.5 * (lo + hi);
                    prop_assert!(quad.eval(mid) > 0.0);
                }
            }
        }
    }

    /// Any certificate that comes back is genuinely positive definite: the
    /// minors are positive, beta lies in the overlap interval, and random
    /// Rayleigh quotients respect epsilon.
    #[test]
    fn certificates_are_sound(
        a1 in 0.05f64..2.5,
        a2 in 0.05f64..2.5,
        d1 in 0.01f64..5.0,
        rho in 0.01f64..5.0,
        x in prop::array::uniform3(-1.0f64..1.0),
    ) {
        let p = params(a1, a2, d1, rho);
        for regime in REGIMES {
            let Ok(cert) = find_certificate(regime, &p) else { continue };
            prop_assert!(cert.minors.0 > 0.0 && cert.minors.1 > 0.0 && cert.minors.2 > 0.0);
            prop_assert!(cert.epsilon > 0.0);
            let (lo, hi) = beta_interval(&build_quadratics(regime, &p)).unwrap();
            prop_assert!(cert.beta > lo && cert.beta < hi);
            let norm2 = x[0] * x[0] + x[1] * x[1] + x[2] * x[2];
            if norm2 > 1e-6 {
                let mut quad = 0.0;
                for i in 0..3 {
                    for j in 0..3 {
                        quad += x[i] * cert.matrix[i][j] * x[j];
                    }
                }
                let rayleigh = quad / norm2;
                prop_assert!(
                    rayleigh >= cert.epsilon - 1e-9 * (1.0 + rayleigh.abs()),
                    "{regime}: rayleigh {rayleigh} below epsilon {}", cert.epsilon
                );
            }
        }
    }

    /// Positive heterogeneous state exists exactly under the stated
    /// parameter conditions (away from the boundary).
    #[test]
    fn heterogeneous_positivity(
        a1 in 0.05f64..0.95,
        a2 in 0.05f64..2.5,
        d1 in 0.01f64..5.0,
        rho in 0.01f64..5.0,
    ) {
        prop_assume!((rho - (a2 + d1 - 1.0)).abs() > 1e-6);
        let p = params(a1, a2, d1, rho);
        let s = heterogeneous_state(&p).unwrap();
        if rho > a2 + d1 - 1.0 {
            prop_assert!(s.is_positive(), "expected positive state, got {s:?}");
        } else {
            prop_assert!(!s.is_positive());
        }
    }

    /// The two u-side thresholds of the coexistence/tumor boundary coincide
    /// when a1 a2 = 1.
    #[test]
    fn d1h_equals_d1c_on_unit_product(a1 in 0.2f64..0.95) {
        let a2 = 1.0 / a1;
        let th = thresholds(a1, a2, 1.0);
        let (d1h, d1c) = (th.d1h.unwrap(), th.d1c.unwrap());
        // tolerance absorbs sqrt(1 - a1 a2) evaluating to ~1e-8 instead of 0
        // when a2 = 1/a1 rounds
        prop_assert!((d1h - d1c).abs() <= 1e-5 * (1.0 + d1h.abs()));
    }

    /// d2h grows with d1 (stronger acid kill on u needs a larger rho to
    /// certify coexistence).
    #[test]
    fn d2h_monotone_in_d1(
        a1 in 0.05f64..0.95,
        a2 in 0.05f64..2.5,
        d1 in 0.01f64..5.0,
        bump in 0.01f64..1.0,
    ) {
        prop_assume!(a1 * a2 < 1.0);
        let lo = thresholds(a1, a2, d1).d2h.unwrap();
        let hi = thresholds(a1, a2, d1 + bump).d2h.unwrap();
        prop_assert!(hi >= lo - 1e-12);
    }

    /// Whatever the classifier predicts as the global attractor is at least
    /// linearly stable (theorem cases imply the linear table's conditions).
    #[test]
    fn predicted_attractor_is_linearly_stable(
        a1 in 0.05f64..2.5,
        a2 in 0.05f64..2.5,
        d1 in 0.01f64..5.0,
        rho in 0.01f64..5.0,
    ) {
        let p = params(a1, a2, d1, rho);
        let cls = classify_global(&p);
        if let Some(kind) = cls.predicted_attractor {
            let state = match kind {
                SteadyStateKind::Heterogeneous => {
                    let Ok(s) = heterogeneous_state(&p) else { return Ok(()) };
                    s
                }
                SteadyStateKind::HomogeneousTumor => homogeneous_tumor_state(&p),
                SteadyStateKind::Healthy => SteadyState::healthy(),
                SteadyStateKind::Trivial => SteadyState::trivial(),
            };
            let verdict = linear_stability(&p, &state);
            prop_assert!(
                verdict.linear != LinearStability::Unstable,
                "case {:?} predicts {kind:?} but it is linearly unstable at {p:?}",
                cls.case_tag
            );
        }
        // gap tags never predict an attractor
        if cls.case_tag == CaseTag::UnknownGap || cls.case_tag == CaseTag::NoTheorem {
            prop_assert!(cls.predicted_attractor.is_none());
        }
    }

    /// The envelope dominates its input series and never increases.
    #[test]
    fn envelope_dominates(devs in prop::collection::vec(0.0f64..10.0, 1..50)) {
        let times: Vec<f64> = (0..devs.len()).map(|k| k as f64).collect();
        let env = build_envelope(&times, &devs, 1e-8).unwrap();
        for (i, &d) in devs.iter().enumerate() {
            prop_assert!(env.values[i] >= d);
            prop_assert!(env.values[i] >= 1e-8);
        }
        for w in env.values.windows(2) {
            prop_assert!(w[1] <= w[0]);
        }
    }
}
