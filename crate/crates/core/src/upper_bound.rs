//! First-moment certificate that a random cubic graph has no vertex set of
//! high relative modularity.
//!
//! A set `B` with `eps * n` vertices, `beta * n` of which send one edge out,
//! is counted in expectation; `f(beta, eps)` is the exponential growth rate of
//! that count. The densest admissible cut sets `beta` to `beta_star(eps)`, and
//! the certificate checks that `g(eps) = f(beta_star(eps), eps)` stays negative
//! on `[eps0, 1/2]`, where sets below `eps0 * n` vertices are excluded by a
//! separate union bound over spanning trees.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::parallel::{self, Execution};

pub const TARGET: f64 = 0.789998;
pub const PRINTED_DENSITY_SLACK: f64 = 0.123331;
pub const PRINTED_EXTRA_EDGE_RATE: f64 = 0.184997;
/// Growth constant of unlabelled trees with maximum degree three.
pub const TREE_GROWTH_C: f64 = 2.483253;
pub const DEFAULT_GRID_STEP: f64 = 1e-4;
pub const SMALL_SET_MIN: usize = 11;
pub const REFERENCE_NS: [u64; 4] = [1_000, 10_000, 100_000, 1_000_000];

const LN3: f64 = 1.098_612_288_668_109_8;

fn xlnx(x: f64) -> f64 {
    if x == 0.0 {
        0.0
    } else {
        x * x.ln()
    }
}

/// Constants derived from a target modularity.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Constants {
    pub target: f64,
    /// `target - 2/3`.
    pub density_slack: f64,
    /// `3 target / 2 - 1`, edges beyond a spanning tree per vertex.
    pub extra_edge_rate: f64,
    pub tree_growth_c: f64,
}

impl Constants {
    pub fn from_target(target: f64) -> Self {
        Constants {
            target,
            density_slack: target - 2.0 / 3.0,
            extra_edge_rate: 1.5 * target - 1.0,
            tree_growth_c: TREE_GROWTH_C,
        }
    }

    /// `C^{1 / extra_edge_rate}`.
    pub fn k(&self) -> f64 {
        self.tree_growth_c.powf(1.0 / self.extra_edge_rate)
    }

    /// Largest admissible cut fraction, `(1 - 3(slack + eps)) eps` clamped at 0.
    pub fn beta_star(&self, eps: f64) -> f64 {
        ((1.0 - 3.0 * (self.density_slack + eps)) * eps).max(0.0)
    }

    fn beta_star_slope(&self, eps: f64) -> f64 {
        if (1.0 - 3.0 * (self.density_slack + eps)) * eps > 0.0 {
            1.0 - 3.0 * self.density_slack - 6.0 * eps
        } else {
            0.0
        }
    }

    pub fn g(&self, eps: f64) -> f64 {
        f_unchecked(self.beta_star(eps), eps)
    }

    /// Derivative of `g` by the chain rule.
    pub fn g_prime(&self, eps: f64) -> f64 {
        let beta = self.beta_star(eps);
        let slope = self.beta_star_slope(eps);
        let de = df_deps_unchecked(beta, eps);
        if slope == 0.0 || beta == 0.0 {
            de
        } else {
            df_dbeta_unchecked(beta, eps) * slope + de
        }
    }

    /// Root of `2 K eps = 3 - 2 eps`.
    pub fn eps0(&self) -> f64 {
        let k = self.k();
        let (mut lo, mut hi) = (0.0f64, 1.5f64);
        while hi - lo > 1e-15 {
            let mid = 0.5 * (lo + hi);
            if 2.0 * k * mid - (3.0 - 2.0 * mid) < 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    }

    /// Union bound on sets of `s` vertices with enough extra edges:
    /// `2K (K(s+1)/(3n-2s-1))^{r s - 1}`.
    pub fn small_set_term(&self, n: u64, s: u64) -> f64 {
        let k = self.k();
        let r = self.extra_edge_rate;
        let base = k * (s as f64 + 1.0) / (3.0 * n as f64 - 2.0 * s as f64 - 1.0);
        2.0 * k * (base.ln() * (r * s as f64 - 1.0)).exp()
    }

    /// The two interval sums: `s` from 11 to `log n`, and the geometric bound
    /// for `s` from `log n` to `eps0 * n`. The first range always contains
    /// `s = 11`, also when `log n < 11`.
    pub fn small_set_tail(&self, n: u64) -> (f64, f64) {
        let ln_n = (n as f64).ln();
        let top = (ln_n.floor() as u64).max(SMALL_SET_MIN as u64);
        let low: f64 = (SMALL_SET_MIN as u64..=top).map(|s| self.small_set_term(n, s)).sum();
        let r = self.extra_edge_rate;
        let high = 2.0 * self.k() / ((1.0 - 2f64.powf(-r)) * 2f64.powf(r * ln_n));
        (low, high)
    }
}

impl Default for Constants {
    fn default() -> Self {
        Constants::from_target(TARGET)
    }
}

fn check_simplex(beta: f64, eps: f64, interior: bool) -> Result<()> {
    let beta_ok = if interior { beta > 0.0 } else { beta >= 0.0 };
    if !(eps > 0.0 && eps <= 0.5) || !beta_ok || !(beta < eps.min(1.0 - eps)) {
        return Err(Error::Domain(format!("(beta, eps) = ({beta}, {eps}) outside the admissible simplex")));
    }
    Ok(())
}

fn f_unchecked(beta: f64, eps: f64) -> f64 {
    let b = beta;
    2.0 * b * LN3 + 0.5 * xlnx(3.0 * eps - b) + 0.5 * xlnx(3.0 - 3.0 * eps - b)
        - xlnx(b)
        - xlnx(eps - b)
        - xlnx(1.0 - eps - b)
        - 1.5 * LN3
}

fn df_dbeta_unchecked(beta: f64, eps: f64) -> f64 {
    2.0 * LN3 - 0.5 * (3.0 * eps - beta).ln() - 0.5 * (3.0 - 3.0 * eps - beta).ln() - beta.ln()
        + (eps - beta).ln()
        + (1.0 - eps - beta).ln()
}

fn df_deps_unchecked(beta: f64, eps: f64) -> f64 {
    1.5 * (3.0 * eps - beta).ln() - 1.5 * (3.0 - 3.0 * eps - beta).ln() - (eps - beta).ln() + (1.0 - eps - beta).ln()
}

/// Exponential growth rate of the expected number of cuts.
pub fn f_exponent(beta: f64, eps: f64) -> Result<f64> {
    check_simplex(beta, eps, false)?;
    Ok(f_unchecked(beta, eps))
}

pub fn df_dbeta(beta: f64, eps: f64) -> Result<f64> {
    check_simplex(beta, eps, true)?;
    Ok(df_dbeta_unchecked(beta, eps))
}

pub fn df_deps(beta: f64, eps: f64) -> Result<f64> {
    check_simplex(beta, eps, true)?;
    Ok(df_deps_unchecked(beta, eps))
}

/// Polynomial form of `df_dbeta >= 0`:
/// `81 (eps-beta)^2 (1-eps-beta)^2 >= (3eps-beta)(3-3eps-beta) beta^2`.
pub fn inequality_slack(beta: f64, eps: f64) -> f64 {
    let l = 81.0 * (eps - beta).powi(2) * (1.0 - eps - beta).powi(2);
    let r = (3.0 * eps - beta) * (3.0 - 3.0 * eps - beta) * beta * beta;
    l - r
}

pub fn inequality_holds(beta: f64, eps: f64) -> bool {
    inequality_slack(beta, eps) >= 0.0
}

pub fn beta_star(eps: f64) -> f64 {
    Constants::default().beta_star(eps)
}

pub fn g_of(eps: f64) -> f64 {
    Constants::default().g(eps)
}

pub fn eps0() -> f64 {
    Constants::default().eps0()
}

pub fn small_set_tail(n: u64) -> (f64, f64) {
    Constants::default().small_set_tail(n)
}

/// Zeros of `g'` on `(lo, hi)`: sign changes between consecutive grid points,
/// each refined by bisection. Grid values that are exactly zero are skipped.
pub fn gprime_sign_changes(consts: &Constants, lo: f64, hi: f64, step: f64) -> Vec<f64> {
    let count = ((hi - lo) / step).floor() as usize;
    let grid: Vec<f64> = (0..=count).map(|i| lo + i as f64 * step).filter(|&x| x < hi).collect();
    let vals: Vec<f64> = grid.iter().map(|&e| consts.g_prime(e)).collect();
    let mut roots = Vec::new();
    for i in 0..grid.len().saturating_sub(1) {
        if vals[i] * vals[i + 1] < 0.0 {
            let (mut a, mut b) = (grid[i], grid[i + 1]);
            let sa = vals[i].signum();
            for _ in 0..200 {
                let mid = 0.5 * (a + b);
                if consts.g_prime(mid).signum() == sa {
                    a = mid;
                } else {
                    b = mid;
                }
                if b - a < 1e-14 {
                    break;
                }
            }
            roots.push(0.5 * (a + b));
        }
    }
    roots
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConstantChecks {
    pub density_slack_matches_printed: bool,
    pub extra_edge_rate_matches_printed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct UpperBoundCertificate {
    pub target: f64,
    pub density_slack: f64,
    pub extra_edge_rate: f64,
    pub tree_growth_c: f64,
    pub eps0: f64,
    pub grid_step: f64,
    /// Largest sampled value of `g` on the grid over `[eps0, 1/2]`.
    pub max_g: f64,
    /// Largest padded upper bound of `g` over any grid cell.
    pub max_g_padded: f64,
    /// Location of the largest padded cell bound.
    pub argmax_padded: f64,
    pub g_at_interior_peak: f64,
    pub gprime_sign_changes: Vec<f64>,
    pub small_set_sums: (f64, f64),
    pub small_set_reference_n: u64,
    pub small_set_decreasing: bool,
    pub derivative_condition_holds: bool,
    pub constant_checks: ConstantChecks,
    pub valid: bool,
    pub reason: Option<String>,
}

/// Evaluate `g` and `g'` on a grid over `[eps0, 1/2]` and bound `g` on each
/// cell `[e_i, e_{i+1}]` by
/// `max(g_i, g_{i+1}) + (max(|g'_i|, |g'_{i+1}|) + |g'_{i+1} - g'_i|) * h / 2`.
pub fn certify_upper_with(consts: &Constants, grid_step: f64, exec: Execution) -> Result<UpperBoundCertificate> {
    if !(grid_step > 0.0) {
        return Err(Error::Domain(format!("grid step {grid_step} must be positive")));
    }
    let e0 = consts.eps0();
    let hi = 0.5;
    let cells = ((hi - e0) / grid_step).ceil().max(1.0) as usize;
    let h = (hi - e0) / cells as f64;
    let points = parallel::map_range(exec, cells + 1, |i| {
        let e = if i == cells { hi } else { e0 + i as f64 * h };
        (e, consts.g(e), consts.g_prime(e))
    });
    let mut max_g = f64::NEG_INFINITY;
    let mut max_pad = f64::NEG_INFINITY;
    let mut arg_pad = e0;
    for w in points.windows(2) {
        let (a, ga, da) = w[0];
        let (_, gb, db) = w[1];
        max_g = max_g.max(ga).max(gb);
        let lip = da.abs().max(db.abs()) + (db - da).abs();
        let bound = ga.max(gb) + lip * h / 2.0;
        if bound > max_pad || !bound.is_finite() {
            max_pad = bound;
            arg_pad = a;
        }
    }
    let roots = gprime_sign_changes(consts, 1e-6, hi, grid_step);
    let peak = roots.iter().copied().fold(f64::NEG_INFINITY, |m, r| m.max(consts.g(r)));
    let derivative_ok = parallel::map_range(exec, 500, |i| {
        let e = (i + 1) as f64 * 1e-3;
        inequality_holds(consts.beta_star(e), e)
    })
    .into_iter()
    .all(|b| b);
    let reference_n = *REFERENCE_NS.last().expect("nonempty");
    let sums: Vec<(f64, f64)> = REFERENCE_NS.iter().map(|&n| consts.small_set_tail(n)).collect();
    let decreasing = sums.windows(2).all(|w| w[1].0 < w[0].0 && w[1].1 < w[0].1);
    let checks = ConstantChecks {
        density_slack_matches_printed: (consts.density_slack - PRINTED_DENSITY_SLACK).abs() <= 1e-6,
        extra_edge_rate_matches_printed: (consts.extra_edge_rate - PRINTED_EXTRA_EDGE_RATE).abs() <= 1e-6,
    };
    let mut reasons = Vec::new();
    if !max_pad.is_finite() {
        reasons.push(format!("padding not finite near eps = {arg_pad}"));
    } else if max_pad >= 0.0 {
        if max_g >= 0.0 {
            reasons.push(format!("g reaches {max_g} >= 0 on the grid"));
        } else {
            reasons.push(format!("grid too coarse: padded bound {max_pad} >= 0 near eps = {arg_pad}"));
        }
    }
    if !decreasing {
        reasons.push("small-set sums do not decrease in n".into());
    }
    if !derivative_ok {
        reasons.push("derivative condition fails on the check grid".into());
    }
    Ok(UpperBoundCertificate {
        target: consts.target,
        density_slack: consts.density_slack,
        extra_edge_rate: consts.extra_edge_rate,
        tree_growth_c: consts.tree_growth_c,
        eps0: e0,
        grid_step: h,
        max_g,
        max_g_padded: max_pad,
        argmax_padded: arg_pad,
        g_at_interior_peak: peak,
        gprime_sign_changes: roots,
        small_set_sums: *sums.last().expect("nonempty"),
        small_set_reference_n: reference_n,
        small_set_decreasing: decreasing,
        derivative_condition_holds: derivative_ok,
        constant_checks: checks,
        valid: reasons.is_empty(),
        reason: if reasons.is_empty() { None } else { Some(reasons.join("; ")) },
    })
}

pub fn certify_upper(grid_step: f64) -> Result<UpperBoundCertificate> {
    certify_upper_with(&Constants::default(), grid_step, Execution::default())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GRow {
    pub eps: f64,
    pub g: f64,
    pub g_prime: f64,
}

/// `(eps, g, g')` on a uniform grid over `[lo, hi]`.
pub fn g_grid(consts: &Constants, lo: f64, hi: f64, step: f64) -> Vec<GRow> {
    let count = ((hi - lo) / step).round() as usize;
    (0..=count)
        .map(|i| lo + i as f64 * step)
        .map(|eps| GRow { eps, g: consts.g(eps), g_prime: consts.g_prime(eps) })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn f_examples() {
        assert!((f_exponent(0.0, 0.5).unwrap() + 0.5 * 2f64.ln()).abs() < 1e-14);
        for eps in [0.05, 0.2, 0.45] {
            let lim = f_exponent(0.0, eps).unwrap();
            assert!((f_exponent(1e-9, eps).unwrap() - lim).abs() < 1e-6);
        }
        let g = g_of(0.026271);
        assert!((-1.0e-5..=-0.8e-5).contains(&g), "{g}");
        assert!(f_exponent(0.3, 0.2).is_err());
        assert!(f_exponent(0.1, 0.6).is_err());
        assert!(df_dbeta(0.0, 0.2).is_err());
    }

    #[test]
    fn beta_star_examples() {
        assert!(beta_star(0.210002).abs() < 1e-6);
        assert!((beta_star(0.1) - 0.0330007).abs() < 1e-6);
        let printed = Constants { density_slack: PRINTED_DENSITY_SLACK, ..Constants::default() };
        assert!((printed.beta_star(0.1) - 0.0330007).abs() < 1e-12);
        assert_eq!(beta_star(0.0), 0.0);
        assert_eq!(beta_star(0.4), 0.0);
    }

    #[test]
    fn inequality_examples() {
        assert_eq!(inequality_slack(0.0, 0.0), 0.0);
        assert!(inequality_holds(0.0, 0.0));
        for i in 1..=500 {
            let e = i as f64 * 1e-3;
            assert!(inequality_holds(beta_star(e), e), "eps {e}");
        }
    }

    #[test]
    fn g_shape() {
        assert!(g_of(0.5) < 0.0);
        assert!(g_of(1e-6).abs() < 1e-4);
        let c = Constants::default();
        let roots = gprime_sign_changes(&c, 1e-6, 0.5, 1e-4);
        assert_eq!(roots.len(), 2, "{roots:?}");
        assert!((roots[0] - 0.005221).abs() < 1e-4);
        assert!((roots[1] - 0.026271).abs() < 1e-4);
    }

    #[test]
    fn eps0_examples() {
        let c = Constants::default();
        let e = c.eps0();
        assert!((2.0 * c.k() * e - (3.0 - 2.0 * e)).abs() < 1e-10);
        assert!(e > 0.005 && e < 0.02);
        let bigger = Constants { tree_growth_c: 2.6, ..c };
        assert!(bigger.eps0() < e);
    }

    #[test]
    fn small_set_term_matches_product() {
        let c = Constants::default();
        let (n, s) = (1_000_000u64, 11u64);
        let k = c.k();
        let base = k * (s as f64 + 1.0) / (3.0 * n as f64 - 2.0 * s as f64 - 1.0);
        let direct = 2.0 * k * base.powf(c.extra_edge_rate * s as f64 - 1.0);
        let t = c.small_set_term(n, s);
        assert!(((t - direct) / direct).abs() < 1e-10);
        let mut prev = (f64::INFINITY, f64::INFINITY);
        for n in REFERENCE_NS {
            let cur = c.small_set_tail(n);
            assert!(cur.0 < prev.0 && cur.1 < prev.1);
            prev = cur;
        }
    }

    #[test]
    fn constants_consistent() {
        let c = Constants::default();
        assert!((c.density_slack - PRINTED_DENSITY_SLACK).abs() < 1e-6);
        assert!((c.extra_edge_rate - PRINTED_EXTRA_EDGE_RATE).abs() < 1e-6);
    }
}
