//! Closed forms of the exploration phases against direct numerical
//! integration of the rate equations.

use modcert_core::ode_lower::{
    empty_urns_at, lower_certificate, optimize_eps, phase1_of, phase3_of, schedule_of, t0_of, t2_of, urn_fraction,
    CherryCurves, DEFAULT_BRACKET, DEFAULT_TOL, TWO_THIRDS,
};
use modcert_core::rng::rng_from_seed;
use rand::Rng;

mod common;

use common::{closed_form_gaps, rk4};

const TOL: f64 = 1e-6;

fn random_eps(count: usize, seed: u64) -> Vec<f64> {
    let mut rng = rng_from_seed(seed);
    (0..count).map(|_| rng.gen_range(0.001..0.8)).collect()
}

#[test]
fn closed_forms_match_integration_for_random_eps() {
    for eps in random_eps(20, 0x5eed).into_iter().chain([0.037562]) {
        for (name, gap) in closed_form_gaps(eps) {
            assert!(gap < TOL, "eps {eps}: {name} off by {gap}");
        }
    }
    let eps = 0.037562;
    let [x] = rk4([0.0], t0_of(eps).unwrap(), |t, y| [(3.0 - 3.0 * y[0]) / (3.0 - 2.0 * t)]);
    assert!((x - eps).abs() < 1e-8);
}

#[test]
fn urn_occupancy_matches_integration() {
    for (a, b) in [(1.0, 0.5), (0.5, 0.3), (2.0, 1.7), (0.1, 0.0)] {
        let [empty] = rk4([a], 2.0 * b, |t, y| [-2.0 * y[0] / (2.0 * a - t)]);
        assert!((empty - empty_urns_at(a, 2.0 * b)).abs() < TOL);
        assert!((a - empty - urn_fraction(a, b).unwrap()).abs() < TOL);
    }
    assert_eq!(urn_fraction(1.0, 0.5).unwrap(), 0.75);
    assert_eq!(urn_fraction(3.0, 3.0).unwrap(), 3.0);
    assert_eq!(urn_fraction(3.0, 0.0).unwrap(), 0.0);
    assert!(urn_fraction(1.0, 1.5).is_err());
}

#[test]
fn cherry_curves_have_the_expected_shape() {
    for eps in random_eps(20, 7) {
        let c = CherryCurves::new(eps).unwrap();
        let t1 = c.end_time();
        assert!(c.h(t1).abs() < 1e-12, "eps {eps}: h(t1) = {}", c.h(t1));
        assert!(t1 < c.exhaustion_time());
        let mut prev = (c.x0(0.0), c.x2(0.0), c.a(0.0));
        for i in 1..=1000 {
            let t = t1 * i as f64 / 1000.0;
            assert!(c.h(t) >= -1e-12, "eps {eps}: h({t}) = {}", c.h(t));
            let cur = (c.x0(t), c.x2(t), c.a(t));
            assert!(cur.0 <= prev.0 && cur.1 >= prev.1 - 1e-15 && cur.2 >= prev.2 - 1e-15);
            prev = cur;
        }
    }
}

#[test]
fn chain_roots_are_ordered_and_satisfy_vieta() {
    for eps in random_eps(50, 11).into_iter().chain([0.001, 0.5, 0.87]) {
        let ph = phase1_of(eps).unwrap();
        let ch = t2_of(eps).unwrap();
        assert!(ch.t2 < ch.t_plus, "eps {eps}");
        let vieta = (ch.p * ch.p - 9.0 * ph.x0 * ph.x0) / 4.0;
        assert!((ch.t2 * ch.t_plus - vieta).abs() < 1e-10, "eps {eps}");
        assert!((ch.z0 - (2.0 * ch.t2 - 2.0 * ph.x1)).abs() < 1e-12);
        assert!((ch.z0 + ch.z1 - ch.t2).abs() < 1e-12);
    }
}

#[test]
fn star_phase_conserves_vertices_and_half_edges() {
    for eps in random_eps(50, 13) {
        let ph = phase1_of(eps).unwrap();
        let st = phase3_of(eps).unwrap();
        let [w0, w1, w2, w3] = st.w;
        assert!((w0 + w1 + w2 + w3 - ph.x0).abs() < 1e-12);
        assert!((3.0 * w0 + 2.0 * w1 + w2 - (3.0 * ph.x0 - st.t3)).abs() < 1e-12);
    }
    assert!(phase3_of(0.0).is_err());
}

#[test]
fn schedule_limits_and_optimum() {
    let tiny = schedule_of(1e-6).unwrap();
    assert!((tiny.qr - TWO_THIRDS).abs() < 1e-3, "qr {}", tiny.qr);
    let t1_edge = CherryCurves::new(0.875 - 1e-12).unwrap().end_time();
    assert!((t1_edge - 0.375).abs() < 1e-6);
    assert!(phase1_of(0.875).is_err());
    assert_eq!(t0_of(0.875).unwrap(), 1.125);
    assert_eq!(t0_of(0.0).unwrap(), 0.0);

    let star = optimize_eps(DEFAULT_BRACKET.0, DEFAULT_BRACKET.1, DEFAULT_TOL).unwrap();
    assert!((star - 0.037562).abs() < 1e-5);
    let local = optimize_eps(0.03, 0.05, DEFAULT_TOL).unwrap();
    assert!((local - star).abs() < 1e-5);
    for (dl, dh) in [(0.01, 0.0), (0.0, -0.01), (0.01, -0.01)] {
        let moved = optimize_eps(DEFAULT_BRACKET.0 + dl, DEFAULT_BRACKET.1 + dh, DEFAULT_TOL).unwrap();
        assert!((moved - star).abs() < 1e-5, "bracket shift ({dl}, {dh}) gives {moved}");
    }
    assert_eq!(optimize_eps(0.2, 0.2, DEFAULT_TOL).unwrap(), 0.2);

    let cert = lower_certificate().unwrap();
    assert!((cert.bound - (TWO_THIRDS + (cert.qr_star - TWO_THIRDS) * cert.v3_star)).abs() < 1e-12);
    assert!(cert.bound >= TWO_THIRDS);
}
