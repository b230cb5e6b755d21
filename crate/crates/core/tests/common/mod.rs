//! Numerical integration of the exploration rate equations.

#![allow(dead_code)]

use modcert_core::ode_lower::{phase1_of, phase3_of, t0_of, t2_of};

pub const STEP: f64 = 1e-5;

/// Classic fourth-order Runge-Kutta from `t = 0` to `t_end` with steps no
/// longer than [`STEP`].
pub fn rk4<const K: usize>(y0: [f64; K], t_end: f64, f: impl Fn(f64, &[f64; K]) -> [f64; K]) -> [f64; K] {
    let steps = (t_end / STEP).ceil().max(1.0) as usize;
    let h = t_end / steps as f64;
    let mut y = y0;
    let add = |y: &[f64; K], k: &[f64; K], s: f64| -> [f64; K] { std::array::from_fn(|i| y[i] + s * k[i]) };
    for i in 0..steps {
        let t = i as f64 * h;
        let k1 = f(t, &y);
        let k2 = f(t + h / 2.0, &add(&y, &k1, h / 2.0));
        let k3 = f(t + h / 2.0, &add(&y, &k2, h / 2.0));
        let k4 = f(t + h, &add(&y, &k3, h));
        y = std::array::from_fn(|j| y[j] + h / 6.0 * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j]));
    }
    y
}

/// Absolute gaps between every closed-form phase quantity at `eps` and its
/// integrated counterpart.
pub fn closed_form_gaps(eps: f64) -> Vec<(&'static str, f64)> {
    let mut gaps = Vec::new();
    let t0 = t0_of(eps).unwrap();
    let [x] = rk4([0.0], t0, |t, y| [(3.0 - 3.0 * y[0]) / (3.0 - 2.0 * t)]);
    gaps.push(("explored", (x - eps).abs()));

    let ph = phase1_of(eps).unwrap();
    let y = rk4([1.0 - eps, 0.0, 0.0, 0.0, 3.0 * eps - 2.0 * t0], ph.t1, |t, y| {
        let d = 3.0 - 2.0 * t0 - 2.0 * t;
        let (x0, x1, h) = (y[0], y[1], y[4]);
        let dx2 = 2.0 * x1 / d;
        let da = h / d;
        [-3.0 * x0 / d, (3.0 * x0 - 2.0 * x1) / d, dx2, da, -1.0 + dx2 - da]
    });
    for (name, (a, b)) in ["x0", "x1", "x2", "a", "h"].into_iter().zip(y.iter().zip([ph.x0, ph.x1, ph.x2, ph.a, ph.h]))
    {
        gaps.push((name, (a - b).abs()));
    }

    let ch = t2_of(eps).unwrap();
    let rate = |t: f64, y: &[f64; 1]| [(3.0 * ph.x0 - y[0]) / (ch.q_den - 2.0 * t)];
    let gap = |t: f64| rk4([0.0], t, rate)[0] - (2.0 * t - 2.0 * ph.x1);
    let (mut lo, mut hi) = (0.0, ch.t2 + 1e-3);
    for _ in 0..40 {
        let mid = 0.5 * (lo + hi);
        if gap(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    gaps.push(("t2", (0.5 * (lo + hi) - ch.t2).abs()));
    let [z0] = rk4([0.0], ch.t2, rate);
    gaps.push(("z0", (z0 - ch.z0).abs()));

    let st = phase3_of(eps).unwrap();
    let total = 3.0 * ph.x0;
    let w = rk4([ph.x0, 0.0, 0.0, 0.0], st.t3, |t, w| {
        let d = total - t;
        [-3.0 * w[0] / d, (3.0 * w[0] - 2.0 * w[1]) / d, (2.0 * w[1] - w[2]) / d, w[2] / d]
    });
    for (name, (a, b)) in ["w0", "w1", "w2", "w3"].into_iter().zip(w.iter().zip(st.w)) {
        gaps.push((name, (a - b).abs()));
    }
    gaps
}
