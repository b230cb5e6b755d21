//! Closed-form fluid limits of the cherry/chain exploration of a random cubic
//! graph, and the lower-bound certificate assembled from them.
//!
//! All quantities are fractions of `n`. Time in each phase is measured from
//! the start of that phase, in units of matched half-edges divided by `n`.
//!
//! * Exploration: grow a component edge by edge until `eps * n` vertices are
//!   reached, which takes `t0(eps)`.
//! * Cherries: test every open half-edge of the component; vertices hit twice
//!   join it. Runs until no half-edges remain to test, at time `t1(eps)`.
//! * Chains: match the open half-edges of vertices hit once; pairs of such
//!   vertices joined to each other form chains of length three and join.
//! * Stars: count fresh vertices with at least two edges back to the vertices
//!   hit once and still outside; they and their neighbours join.

use serde::Serialize;

use crate::error::{Error, Result};

pub const TWO_THIRDS: f64 = 2.0 / 3.0;
pub const EPS_LIMIT: f64 = 7.0 / 8.0;
pub const DEFAULT_BRACKET: (f64, f64) = (1e-4, 0.8745);
pub const DEFAULT_TOL: f64 = 1e-7;
/// Cherry closure may at most quadruple the component; the guard compares
/// this growth against the `n/3` size limit.
pub const CHERRY_GROWTH_FACTOR: f64 = 4.0;
pub const PRINTED_CHERRY_BUDGET: f64 = 0.179136;

fn check_eps(eps: f64, open_low: bool) -> Result<()> {
    let low_ok = if open_low { eps > 0.0 } else { eps >= 0.0 };
    if !eps.is_finite() || !low_ok || eps >= EPS_LIMIT {
        return Err(Error::Domain(format!("eps = {eps} outside the admissible range")));
    }
    Ok(())
}

/// Fraction of edges explored when the first component reaches `eps * n`
/// vertices.
pub fn t0_of(eps: f64) -> Result<f64> {
    if !eps.is_finite() || !(0.0..1.0).contains(&eps) {
        return Err(Error::Domain(format!("eps = {eps} outside [0, 1)")));
    }
    Ok(1.5 * (1.0 - (1.0 - eps).powf(2.0 / 3.0)))
}

/// Explored-vertex fraction after `t` explored edges, `1 - (1 - 2t/3)^{3/2}`.
pub fn explored_vertices_at(t: f64) -> f64 {
    1.0 - (1.0 - 2.0 * t / 3.0).max(0.0).powf(1.5)
}

/// Trajectories of the cherry phase as functions of phase time.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CherryCurves {
    pub eps: f64,
    pub t0: f64,
}

impl CherryCurves {
    pub fn new(eps: f64) -> Result<Self> {
        check_eps(eps, false)?;
        Ok(CherryCurves { eps, t0: t0_of(eps)? })
    }

    /// Remaining unmatched half-edges divided by `n` at the start of the phase.
    pub fn span(&self) -> f64 {
        3.0 - 2.0 * self.t0
    }

    fn u(&self, t: f64) -> f64 {
        (1.0 - 2.0 * t / self.span()).max(0.0)
    }

    /// Untouched vertices.
    pub fn x0(&self, t: f64) -> f64 {
        (1.0 - self.eps) * self.u(t).powf(1.5)
    }

    /// Vertices hit exactly once.
    pub fn x1(&self, t: f64) -> f64 {
        let u = self.u(t);
        3.0 * (1.0 - self.eps) * (u - u.powf(1.5))
    }

    /// Vertices hit twice, which joined the component.
    pub fn x2(&self, t: f64) -> f64 {
        let u = self.u(t);
        6.0 * (1.0 - self.eps) * t / self.span() + 2.0 * (1.0 - self.eps) * (u.powf(1.5) - 1.0)
    }

    /// New edges inside the component.
    pub fn a(&self, t: f64) -> f64 {
        let (e, t0, u) = (self.eps, self.t0, self.u(t));
        (2.0 * e - 0.5 - t0) - (3.0 * e - 1.5 - t0) * u - (1.0 - e) * u.powf(1.5)
    }

    /// Half-edges still to be tested.
    pub fn h(&self, t: f64) -> f64 {
        let (e, t0, u) = (self.eps, self.t0, self.u(t));
        (6.0 * e - 3.0 - 2.0 * t0) * u + 3.0 * (1.0 - e) * u.powf(1.5)
    }

    /// Smaller root of `h`, where the phase ends.
    pub fn end_time(&self) -> f64 {
        let s = (1.0 - self.eps).cbrt();
        1.5 * (4.0 * s - 3.0 * s * s - 1.0)
    }

    /// Larger root of `h`, where the unmatched half-edges run out.
    pub fn exhaustion_time(&self) -> f64 {
        self.span() / 2.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CherryPhase {
    pub t1: f64,
    pub x0: f64,
    pub x1: f64,
    pub x2: f64,
    pub a: f64,
    pub h: f64,
}

pub fn phase1_of(eps: f64) -> Result<CherryPhase> {
    let c = CherryCurves::new(eps)?;
    let t1 = c.end_time();
    Ok(CherryPhase { t1, x0: c.x0(t1), x1: c.x1(t1), x2: c.x2(t1), a: c.a(t1), h: c.h(t1) })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ChainPhase {
    pub t2: f64,
    pub z0: f64,
    pub z1: f64,
    /// `3 x0(t1) + 2 x1(t1)`.
    pub p: f64,
    /// Unmatched half-edges divided by `n` at the start of the chain phase.
    pub q_den: f64,
    /// Larger root of the stopping quadratic.
    pub t_plus: f64,
}

/// Edges to untouched vertices after `t` steps of the chain phase.
pub fn chain_z0_at(x0_t1: f64, q_den: f64, t: f64) -> f64 {
    3.0 * x0_t1 * (1.0 - (1.0 - 2.0 * t / q_den).max(0.0).sqrt())
}

pub fn t2_of(eps: f64) -> Result<ChainPhase> {
    check_eps(eps, true)?;
    let t0 = t0_of(eps)?;
    let ph = phase1_of(eps)?;
    let p = 3.0 * ph.x0 + 2.0 * ph.x1;
    let q_den = 3.0 - 2.0 * t0 - 2.0 * ph.t1;
    let x0sq = ph.x0 * ph.x0;
    let disc = 81.0 * x0sq * x0sq - 36.0 * x0sq * p * q_den + 36.0 * x0sq * q_den * q_den;
    if disc < 0.0 {
        return Err(Error::Internal(format!("negative discriminant {disc} at eps = {eps}")));
    }
    let root = disc.sqrt();
    let t2 = p / 2.0 - (9.0 * x0sq + root) / (4.0 * q_den);
    let t_plus = p / 2.0 - (9.0 * x0sq - root) / (4.0 * q_den);
    let z0 = chain_z0_at(ph.x0, q_den, t2);
    Ok(ChainPhase { t2, z0, z1: t2 - z0, p, q_den, t_plus })
}

/// Fresh-vertex degree profile after `t` attached half-edges, started from
/// `x0_t1` untouched vertices.
pub fn star_w_at(x0_t1: f64, t: f64) -> [f64; 4] {
    let x = x0_t1;
    let d = 27.0 * x * x;
    let r = 3.0 * x - t;
    [r * r * r / d, 3.0 * t * r * r / d, 3.0 * t * t * r / d, t * t * t / d]
}

/// Occupied two-slot urns after `2b` balls go into `a` urns with probability
/// proportional to free space: `b(2a - b)/a`.
pub fn urn_fraction(a: f64, b: f64) -> Result<f64> {
    if !(a > 0.0) || !(0.0..=a).contains(&b) {
        return Err(Error::Domain(format!("urn parameters a = {a}, b = {b} need 0 <= b <= a, a > 0")));
    }
    Ok(b * (2.0 * a - b) / a)
}

/// Empty urns after `t` balls: `a(1 - t/2a)^2`.
pub fn empty_urns_at(a: f64, t: f64) -> f64 {
    let r = 1.0 - t / (2.0 * a);
    a * r * r
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct StarPhase {
    pub t3: f64,
    pub w: [f64; 4],
    /// Vertices hit once that joined through chains.
    pub chain_joined: f64,
    /// Vertices hit once that were still outside when the phase started.
    pub remaining: f64,
}

pub fn phase3_of(eps: f64) -> Result<StarPhase> {
    let ph = phase1_of(eps)?;
    if !(ph.x1 > 0.0) {
        return Err(Error::Domain(format!("no vertices hit once at eps = {eps}")));
    }
    let ch = t2_of(eps)?;
    let chain_joined = urn_fraction(ph.x1, ch.z1)?;
    let remaining = ph.x1 - chain_joined;
    let t3 = 2.0 * remaining;
    Ok(StarPhase { t3, w: star_w_at(ph.x0, t3), chain_joined, remaining })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PhaseSchedule {
    pub eps: f64,
    pub t0: f64,
    pub t1: f64,
    pub t2: f64,
    pub t3: f64,
    pub x0_t1: f64,
    pub x1_t1: f64,
    pub x2_t1: f64,
    pub a_t1: f64,
    pub z0_t2: f64,
    pub z1_t2: f64,
    pub w0_t3: f64,
    pub w1_t3: f64,
    pub w2_t3: f64,
    pub w3_t3: f64,
    pub chain_joined: f64,
    pub star_joined: f64,
    pub v3: f64,
    pub e3: f64,
    pub qr: f64,
}

impl PhaseSchedule {
    /// `2/3 + (qr - 2/3) v3`, the modularity guaranteed by the component and a
    /// tree-like remainder.
    pub fn bound(&self) -> f64 {
        TWO_THIRDS + (self.qr - TWO_THIRDS) * self.v3
    }

    fn fractions(&self) -> [f64; 19] {
        [
            self.t0,
            self.t1,
            self.t2,
            self.t3,
            self.x0_t1,
            self.x1_t1,
            self.x2_t1,
            self.a_t1,
            self.z0_t2,
            self.z1_t2,
            self.w0_t3,
            self.w1_t3,
            self.w2_t3,
            self.w3_t3,
            self.chain_joined,
            self.star_joined,
            self.v3,
            self.e3,
            self.eps,
        ]
    }
}

pub fn schedule_of(eps: f64) -> Result<PhaseSchedule> {
    check_eps(eps, true)?;
    let t0 = t0_of(eps)?;
    let p1 = phase1_of(eps)?;
    let p2 = t2_of(eps)?;
    let p3 = phase3_of(eps)?;
    let [w0, w1, w2, w3] = p3.w;
    let balls = w2 + 1.5 * w3;
    let star_joined = if p3.remaining > 0.0 { urn_fraction(p3.remaining, balls.min(p3.remaining))? } else { 0.0 };
    let v3 = eps + p1.x2 + p3.chain_joined + w2 + w3 + star_joined;
    let e3 = t0 + p1.a + 2.0 * p1.x2 + p3.chain_joined + p2.z1 + 2.0 * w2 + 3.0 * w3 + star_joined;
    let qr = 2.0 * e3 / (3.0 * v3) - v3;
    let s = PhaseSchedule {
        eps,
        t0,
        t1: p1.t1,
        t2: p2.t2,
        t3: p3.t3,
        x0_t1: p1.x0,
        x1_t1: p1.x1,
        x2_t1: p1.x2,
        a_t1: p1.a,
        z0_t2: p2.z0,
        z1_t2: p2.z1,
        w0_t3: w0,
        w1_t3: w1,
        w2_t3: w2,
        w3_t3: w3,
        chain_joined: p3.chain_joined,
        star_joined,
        v3,
        e3,
        qr,
    };
    if let Some(bad) = s.fractions().iter().find(|f| !(0.0..=3.0).contains(*f)) {
        return Err(Error::Internal(format!("fraction {bad} outside [0, 3] at eps = {eps}")));
    }
    Ok(s)
}

fn objective(eps: f64) -> Result<f64> {
    let s = schedule_of(eps)?;
    let v = s.bound();
    if !v.is_finite() {
        return Err(Error::Domain(format!("objective not finite at eps = {eps}")));
    }
    Ok(v)
}

/// Maximize the certified bound `2/3 + (qr - 2/3) v3` over `[lo, hi]`: a grid
/// of step `1e-3` locates the best cell, golden-section search refines it.
pub fn optimize_eps(lo: f64, hi: f64, tol: f64) -> Result<f64> {
    if !(lo <= hi) {
        return Err(Error::Domain(format!("empty bracket [{lo}, {hi}]")));
    }
    if lo == hi {
        return Ok(lo);
    }
    let step = 1e-3;
    let cells = ((hi - lo) / step).ceil() as usize;
    let mut best = (lo, objective(lo)?);
    for i in 1..=cells {
        let x = (lo + i as f64 * step).min(hi);
        let v = objective(x)?;
        if v > best.1 {
            best = (x, v);
        }
    }
    let mut a = (best.0 - step).max(lo);
    let mut b = (best.0 + step).min(hi);
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let (mut fc, mut fd) = (objective(c)?, objective(d)?);
    while b - a > tol {
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = objective(c)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = objective(d)?;
        }
    }
    Ok((a + b) / 2.0)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LowerGuards {
    pub eps_below_limit: bool,
    /// `4 * v3`, the largest fraction of vertices cherry closure can reach.
    pub cherry_budget: f64,
    pub cherry_budget_below_third: bool,
    /// `|cherry_budget - 0.179136| <= 1e-4`.
    pub cherry_budget_matches_printed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LowerBoundCertificate {
    pub eps_star: f64,
    pub qr_star: f64,
    pub v3_star: f64,
    pub bound: f64,
    pub valid: bool,
    pub guards: LowerGuards,
    pub schedule: PhaseSchedule,
}

pub fn lower_certificate_in(lo: f64, hi: f64, tol: f64) -> Result<LowerBoundCertificate> {
    let eps_star = optimize_eps(lo, hi, tol)?;
    let schedule = schedule_of(eps_star)?;
    let cherry_budget = CHERRY_GROWTH_FACTOR * schedule.v3;
    let guards = LowerGuards {
        eps_below_limit: eps_star < EPS_LIMIT,
        cherry_budget,
        cherry_budget_below_third: cherry_budget < 1.0 / 3.0,
        cherry_budget_matches_printed: (cherry_budget - PRINTED_CHERRY_BUDGET).abs() <= 1e-4,
    };
    let bound = schedule.bound();
    Ok(LowerBoundCertificate {
        eps_star,
        qr_star: schedule.qr,
        v3_star: schedule.v3,
        bound,
        valid: guards.eps_below_limit && guards.cherry_budget_below_third && bound >= TWO_THIRDS,
        guards,
        schedule,
    })
}

pub fn lower_certificate() -> Result<LowerBoundCertificate> {
    lower_certificate_in(DEFAULT_BRACKET.0, DEFAULT_BRACKET.1, DEFAULT_TOL)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TraceRow {
    pub t: f64,
    pub x0: f64,
    pub x1: f64,
    pub x2: f64,
    pub a: f64,
    pub h: f64,
}

/// Cherry-phase curves sampled every `step` from 0 to the end of the phase.
pub fn cherry_trace(eps: f64, step: f64) -> Result<Vec<TraceRow>> {
    if !(step > 0.0) {
        return Err(Error::Domain(format!("trace step {step} must be positive")));
    }
    let c = CherryCurves::new(eps)?;
    let end = c.end_time();
    let count = (end / step).floor() as usize;
    let mut rows: Vec<TraceRow> = (0..=count)
        .map(|i| i as f64 * step)
        .chain(std::iter::once(end))
        .map(|t| TraceRow { t, x0: c.x0(t), x1: c.x1(t), x2: c.x2(t), a: c.a(t), h: c.h(t) })
        .collect();
    rows.dedup_by(|b, a| (a.t - b.t).abs() < 1e-15);
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    const EPS_STAR: f64 = 0.037562;

    #[test]
    fn t0_examples() {
        assert_eq!(t0_of(0.0).unwrap(), 0.0);
        assert!((t0_of(EPS_LIMIT).unwrap() - 9.0 / 8.0).abs() < 1e-14);
        assert!(t0_of(1.0).is_err());
        assert!((explored_vertices_at(t0_of(0.3).unwrap()) - 0.3).abs() < 1e-14);
    }

    #[test]
    fn cherry_phase_examples() {
        let p = phase1_of(0.0).unwrap();
        assert_eq!(p.t1, 0.0);
        assert!((p.x0 - 1.0).abs() < 1e-15 && p.x1.abs() < 1e-15 && p.x2.abs() < 1e-15 && p.a.abs() < 1e-15);
        let c = CherryCurves { eps: EPS_LIMIT, t0: t0_of(EPS_LIMIT).unwrap() };
        assert!((c.end_time() - 3.0 / 8.0).abs() < 1e-14);
        assert!(phase1_of(EPS_LIMIT).is_err());
        for eps in [0.01, EPS_STAR, 0.3, 0.7] {
            let p = phase1_of(eps).unwrap();
            assert!(p.h.abs() < 1e-12);
            let c = CherryCurves::new(eps).unwrap();
            assert!(c.end_time() < c.exhaustion_time());
        }
    }

    #[test]
    fn chain_phase_identities() {
        for eps in [0.005, EPS_STAR, 0.2, 0.5, 0.85] {
            let p1 = phase1_of(eps).unwrap();
            let p2 = t2_of(eps).unwrap();
            assert!((p2.z0 - (2.0 * p2.t2 - 2.0 * p1.x1)).abs() < 1e-12, "eps {eps}");
            let vieta = (p2.p * p2.p - 9.0 * p1.x0 * p1.x0) / 4.0;
            assert!((p2.t2 * p2.t_plus - vieta).abs() < 1e-10);
            assert!(p2.t2 > 0.0 && p2.t2 < p2.t_plus);
            assert!((p2.z0 + p2.z1 - p2.t2).abs() < 1e-15);
        }
        assert!(t2_of(0.0).is_err());
    }

    #[test]
    fn star_phase_identities() {
        for eps in [0.01, EPS_STAR, 0.4] {
            let p1 = phase1_of(eps).unwrap();
            let p3 = phase3_of(eps).unwrap();
            let [w0, w1, w2, w3] = p3.w;
            assert!((w0 + w1 + w2 + w3 - p1.x0).abs() < 1e-12);
            assert!((3.0 * w0 + 2.0 * w1 + w2 - (3.0 * p1.x0 - p3.t3)).abs() < 1e-12);
        }
        assert!(phase3_of(0.0).is_err());
    }

    #[test]
    fn schedule_at_the_optimum() {
        let s = schedule_of(EPS_STAR).unwrap();
        assert!((s.v3 - 0.044783).abs() < 1e-5, "{}", s.v3);
        assert!((s.qr - 0.674701).abs() < 1e-5, "{}", s.qr);
        assert!((s.t0 - 0.0378012).abs() < 1e-6);
        assert!((s.t1 - 0.0373188).abs() < 1e-6);
        assert!((s.t2 - 0.0713579).abs() < 1e-6);
        assert!((s.e3 - 0.0483314).abs() < 1e-6);
        let tiny = schedule_of(1e-6).unwrap();
        assert!((tiny.qr - TWO_THIRDS).abs() < 1e-5);
    }

    #[test]
    fn urns() {
        assert_eq!(urn_fraction(2.0, 0.0).unwrap(), 0.0);
        assert_eq!(urn_fraction(2.0, 2.0).unwrap(), 2.0);
        assert_eq!(urn_fraction(1.0, 0.5).unwrap(), 0.75);
        assert!(urn_fraction(1.0, 1.5).is_err());
        assert!((empty_urns_at(1.0, 1.0) - 0.25).abs() < 1e-15);
    }

    #[test]
    fn optimizer_and_certificate() {
        assert_eq!(optimize_eps(0.2, 0.2, 1e-7).unwrap(), 0.2);
        let a = optimize_eps(0.03, 0.05, 1e-7).unwrap();
        assert!((a - EPS_STAR).abs() < 1e-5, "{a}");
        let c = lower_certificate().unwrap();
        assert!((c.eps_star - EPS_STAR).abs() < 1e-5);
        assert!((c.bound - 0.667026).abs() < 1e-5);
        assert!((c.bound - TWO_THIRDS - (c.qr_star - TWO_THIRDS) * c.v3_star).abs() < 1e-12);
        assert!(c.valid && c.guards.cherry_budget_below_third && c.guards.cherry_budget_matches_printed);
    }

    #[test]
    fn trace_ends_at_phase_end() {
        let rows = cherry_trace(EPS_STAR, 0.01).unwrap();
        let last = rows.last().unwrap();
        assert!(last.h.abs() < 1e-12);
        assert_eq!(rows[0].t, 0.0);
    }
}
