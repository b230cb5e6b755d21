//! Configuration graphs with a limiting degree distribution: the giant
//! component criterion, the subcritical modularity constant, and the dense set
//! built inside the 2-core of the giant in the supercritical regime.

use std::collections::{BTreeMap, VecDeque};
use std::fmt;
use std::str::FromStr;

use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{connected_components, sample_configuration, two_core_within, DegreeSequence, MultiGraph, Subgraph};
use crate::modularity::{modularity, split_components};
use crate::parallel::{self, Execution};
use crate::partition::VertexPartition;
use crate::pool::IndexedPool;
use crate::rng::{derive_seed, rng_from_seed};

pub const CRITICAL_TOL: f64 = 1e-12;
pub const DEFAULT_EPS_PRIMES: [f64; 3] = [0.003, 0.01, 0.02];
pub const DEFAULT_ELLS: [usize; 3] = [6, 8, 10];
pub const DEFAULT_T_MAX: usize = 400;
const PROB_SUM_TOL: f64 = 1e-9;
const EXACT_MULTINOMIAL_MAX_T: usize = 30;

/// Limiting degree distribution `p_i`, `i >= 1`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DegreeProfile {
    probs: BTreeMap<usize, f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Regime {
    Subcritical,
    Critical,
    Supercritical,
}

impl fmt::Display for Regime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Regime::Subcritical => "sub",
            Regime::Critical => "critical",
            Regime::Supercritical => "super",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Criterion {
    /// `sum i(i-2) p_i`.
    pub q: f64,
    /// `sum i p_i`, the mean degree.
    pub m: f64,
    pub regime: Regime,
}

impl DegreeProfile {
    pub fn new(probs: BTreeMap<usize, f64>) -> Result<Self> {
        if probs.contains_key(&0) {
            return Err(Error::Profile("degree 0 is not allowed".into()));
        }
        if let Some((d, p)) = probs.iter().find(|(_, &p)| !(p >= 0.0) || !p.is_finite()) {
            return Err(Error::Profile(format!("probability {p} for degree {d} is not a nonnegative number")));
        }
        let total: f64 = probs.values().sum();
        if (total - 1.0).abs() > PROB_SUM_TOL {
            return Err(Error::Profile(format!("probabilities sum to {total}, not 1")));
        }
        let probs: BTreeMap<usize, f64> = probs.into_iter().filter(|&(_, p)| p > 0.0).collect();
        Ok(DegreeProfile { probs })
    }

    pub fn probs(&self) -> &BTreeMap<usize, f64> {
        &self.probs
    }

    pub fn max_degree(&self) -> usize {
        self.probs.keys().next_back().copied().unwrap_or(0)
    }

    pub fn mean_degree(&self) -> f64 {
        self.probs.iter().map(|(&i, &p)| i as f64 * p).sum()
    }

    pub fn criterion(&self) -> Criterion {
        let q: f64 = self.probs.iter().map(|(&i, &p)| (i as f64) * (i as f64 - 2.0) * p).sum();
        let regime = if q.abs() < CRITICAL_TOL {
            Regime::Critical
        } else if q < 0.0 {
            Regime::Subcritical
        } else {
            Regime::Supercritical
        };
        Criterion { q, m: self.mean_degree(), regime }
    }

    /// Integer counts for `n` vertices by largest-remainder rounding. If the
    /// degree sum comes out odd, one vertex moves from an odd-degree class to
    /// the nearest even-degree class of the profile (ties: smaller degrees
    /// first); a profile without even degrees is rejected.
    pub fn to_sequence(&self, n: usize) -> Result<DegreeSequence> {
        if n == 0 {
            return Err(Error::Profile("n must be positive".into()));
        }
        let mut counts: BTreeMap<usize, usize> = BTreeMap::new();
        let mut rema: Vec<(f64, usize)> = Vec::new();
        let mut assigned = 0;
        for (&d, &p) in &self.probs {
            let exact = p * n as f64;
            let base = exact.floor() as usize;
            counts.insert(d, base);
            assigned += base;
            rema.push((exact - base as f64, d));
        }
        rema.sort_by(|a, b| b.0.total_cmp(&a.0).then(a.1.cmp(&b.1)));
        for &(_, d) in rema.iter().cycle().take(n.saturating_sub(assigned)) {
            *counts.get_mut(&d).expect("degree present") += 1;
        }
        let half_edges: usize = counts.iter().map(|(&d, &c)| d * c).sum();
        if half_edges % 2 == 1 {
            let mut best: Option<(usize, usize, usize)> = None;
            for (&odd, &c) in counts.iter().filter(|(&d, &c)| d % 2 == 1 && c > 0) {
                let _ = c;
                for &even in self.probs.keys().filter(|&&d| d % 2 == 0) {
                    let cand = (odd.abs_diff(even), odd, even);
                    if best.is_none_or(|b| cand < b) {
                        best = Some(cand);
                    }
                }
            }
            let (_, odd, even) = best.ok_or_else(|| {
                Error::Profile(format!("odd degree sum at n = {n} and no even degree to rebalance into"))
            })?;
            *counts.get_mut(&odd).expect("present") -= 1;
            *counts.entry(even).or_insert(0) += 1;
        }
        DegreeSequence::new(counts)
    }
}

impl FromStr for DegreeProfile {
    type Err = Error;

    fn from_str(spec: &str) -> Result<Self> {
        let mut probs = BTreeMap::new();
        for token in spec.split(',').map(str::trim).filter(|t| !t.is_empty()) {
            let (d, p) = token
                .split_once(':')
                .ok_or_else(|| Error::Parse(format!("expected degree:probability, got {token:?}")))?;
            let d: i64 = d.trim().parse().map_err(|_| Error::Parse(format!("bad degree in {token:?}")))?;
            if d <= 0 {
                return Err(Error::NonPositiveDegree(d));
            }
            let p: f64 = p.trim().parse().map_err(|_| Error::Parse(format!("bad probability in {token:?}")))?;
            *probs.entry(d as usize).or_insert(0.0) += p;
        }
        if probs.is_empty() {
            return Err(Error::Parse("empty profile".into()));
        }
        DegreeProfile::new(probs)
    }
}

pub fn criterion(profile: &DegreeProfile) -> Criterion {
    profile.criterion()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SeriesResult {
    pub c: f64,
    pub tail_bound: f64,
    pub t_max: usize,
    /// Decay rate `min_{i != 2} i p_i / (24 M)` used by the tail bound.
    pub decay_rate: f64,
}

fn ln_factorials(up_to: usize) -> Vec<f64> {
    let mut out = vec![0.0; up_to + 1];
    for k in 1..=up_to {
        out[k] = out[k - 1] + (k as f64).ln();
    }
    out
}

fn exact_multinomial(parts: &[usize]) -> u128 {
    let mut total = 0u128;
    let mut acc = 1u128;
    for &k in parts {
        for j in 1..=k as u128 {
            total += 1;
            acc = acc * total / j;
        }
    }
    acc
}

/// Sum over tree sequences with `t` vertices of
/// `multinomial(t; t_1..t_D) * prod (i p_i / M)^{t_i}`.
fn tree_sequence_mass(t: usize, degrees: &[usize], ln_w: &[f64], ln_fact: &[f64]) -> f64 {
    // degrees[0] == 1; the others are > 1 and carry t_i with sum (i-1) t_i = t - 2
    let others = &degrees[1..];
    let mut parts = vec![0usize; degrees.len()];
    let mut total = 0.0;
    fn rec(
        idx: usize,
        budget: usize,
        t: usize,
        others: &[usize],
        parts: &mut Vec<usize>,
        ln_w: &[f64],
        ln_fact: &[f64],
        total: &mut f64,
    ) {
        if idx == others.len() {
            if budget != 0 {
                return;
            }
            let rest: usize = parts[1..].iter().sum();
            if rest > t {
                return;
            }
            let t1 = t - rest;
            let extra: usize = others.iter().zip(&parts[1..]).map(|(&i, &k)| (i - 2) * k).sum();
            if t1 != 2 + extra {
                return;
            }
            parts[0] = t1;
            let mut ln_weight = 0.0;
            for (k, &lw) in parts.iter().zip(ln_w) {
                if *k > 0 {
                    ln_weight += *k as f64 * lw;
                }
            }
            let term = if t <= EXACT_MULTINOMIAL_MAX_T {
                exact_multinomial(parts) as f64 * ln_weight.exp()
            } else {
                let ln_multi = ln_fact[t] - parts.iter().map(|&k| ln_fact[k]).sum::<f64>();
                (ln_multi + ln_weight).exp()
            };
            *total += term;
            return;
        }
        let step = others[idx] - 1;
        let mut k = 0;
        while k * step <= budget {
            parts[idx + 1] = k;
            rec(idx + 1, budget - k * step, t, others, parts, ln_w, ln_fact, total);
            k += 1;
        }
        parts[idx + 1] = 0;
    }
    if t < 2 {
        return 0.0;
    }
    rec(0, t - 2, t, others, &mut parts, ln_w, ln_fact, &mut total);
    total
}

/// `c = 4 * sum_{t=2}^{t_max} ((t-1)/t) * sum over tree sequences`, the limit
/// of `n (1 - q*)` for subcritical profiles, with a geometric bound on the
/// omitted terms.
pub fn subcritical_constant_with(profile: &DegreeProfile, t_max: usize, exec: Execution) -> Result<SeriesResult> {
    let crit = profile.criterion();
    if crit.regime != Regime::Subcritical {
        return Err(Error::Regime(format!("profile is not subcritical (Q = {})", crit.q)));
    }
    if t_max < 2 {
        return Err(Error::Domain(format!("t_max = {t_max} must be at least 2")));
    }
    let m = crit.m;
    let mut degrees: Vec<usize> = profile.probs.keys().copied().collect();
    if degrees[0] != 1 {
        return Err(Error::Regime("a subcritical profile needs degree-1 vertices".into()));
    }
    degrees.dedup();
    let ln_w: Vec<f64> = degrees.iter().map(|&i| (i as f64 * profile.probs[&i] / m).ln()).collect();
    let ln_fact = ln_factorials(t_max);
    let terms = parallel::map_range(exec, t_max - 1, |k| {
        let t = k + 2;
        (t as f64 - 1.0) / t as f64 * tree_sequence_mass(t, &degrees, &ln_w, &ln_fact)
    });
    let c = 4.0 * terms.iter().sum::<f64>();
    let kappa = profile
        .probs
        .iter()
        .filter(|(&i, _)| i != 2)
        .map(|(&i, &p)| i as f64 * p / (24.0 * m))
        .fold(f64::INFINITY, f64::min);
    let delta = profile.max_degree() as f64;
    let tail_bound = 4.0 * delta * (-kappa * (t_max as f64 + 1.0)).exp() / (1.0 - (-kappa).exp());
    Ok(SeriesResult { c, tail_bound, t_max, decay_rate: kappa })
}

pub fn subcritical_constant(profile: &DegreeProfile, t_max: usize) -> Result<SeriesResult> {
    subcritical_constant_with(profile, t_max, Execution::default())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EmpiricalResult {
    pub c_hat: f64,
    pub per_trial: Vec<f64>,
    pub seeds: Vec<u64>,
    pub n: usize,
}

/// `M n (1 - q)` for the component partition of one sample, with `M = 2m/n`
/// the sample's mean degree. Equals `sum vol^2 / 2m` exactly.
pub fn component_deficit(g: &MultiGraph) -> f64 {
    let comps = connected_components(g);
    let sq: u128 = comps
        .blocks()
        .iter()
        .map(|b| {
            let v: u128 = b.iter().map(|&x| g.degree(x) as u128).sum();
            v * v
        })
        .sum();
    sq as f64 / (2.0 * g.m() as f64)
}

/// Monte Carlo estimate of the subcritical constant.
pub fn subcritical_empirical_with(
    profile: &DegreeProfile,
    n: usize,
    trials: usize,
    seed: u64,
    exec: Execution,
) -> Result<EmpiricalResult> {
    let crit = profile.criterion();
    if crit.regime != Regime::Subcritical {
        return Err(Error::Regime(format!("profile is not subcritical (Q = {})", crit.q)));
    }
    let seq = profile.to_sequence(n)?;
    let seeds: Vec<u64> = (0..trials as u64).map(|i| derive_seed(seed, i)).collect();
    let per_trial = parallel::map(exec, &seeds, |&s| component_deficit(&sample_configuration(&seq, s)));
    let c_hat = per_trial.iter().sum::<f64>() / trials.max(1) as f64;
    Ok(EmpiricalResult { c_hat, per_trial, seeds, n })
}

pub fn subcritical_empirical(profile: &DegreeProfile, n: usize, trials: usize, seed: u64) -> Result<EmpiricalResult> {
    subcritical_empirical_with(profile, n, trials, seed, Execution::default())
}

/// Seed set grown inside a 2-core, in exploration order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeedSet {
    pub vertices: Vec<usize>,
    /// Edge indices traversed while growing the set.
    pub explored_edges: Vec<bool>,
}

/// Grow `ceil(eps_prime * n)` vertices inside `core`, where `n` is the host
/// order: start at the owner of a uniform half-edge, then repeatedly follow a
/// uniform unexplored edge leaving the set.
pub fn build_s_set(core: &Subgraph, eps_prime: f64, seed: u64) -> Result<SeedSet> {
    let g = &core.graph;
    let n = g.n();
    let target = ((eps_prime * n as f64).ceil() as usize).max(1);
    for v in core.vertices() {
        if g.degree(v) < 2 {
            return Err(Error::MinDegree { vertex: v, degree: g.degree(v) });
        }
    }
    if core.order() < target {
        return Err(Error::EpsPrimeTooLarge(format!("core has {} vertices, need {target}", core.order())));
    }
    let mut rng = rng_from_seed(seed);
    let total_half: usize = g.degrees().iter().sum();
    let mut pick = rng.gen_range(0..total_half);
    let mut start = 0;
    for v in core.vertices() {
        if pick < g.degree(v) {
            start = v;
            break;
        }
        pick -= g.degree(v);
    }
    let mut in_s = vec![false; n];
    let mut explored = vec![false; g.m()];
    // open slots are encoded as 2 * edge + side, side 0 for the min endpoint
    let mut open = IndexedPool::empty(2 * g.m());
    let mut vertices = Vec::with_capacity(target);
    let add =
        |v: usize, in_s: &mut Vec<bool>, open: &mut IndexedPool, explored: &Vec<bool>, vertices: &mut Vec<usize>| {
            in_s[v] = true;
            vertices.push(v);
            for &(w, e) in g.adjacency(v) {
                if explored[e] {
                    continue;
                }
                let (a, _) = g.edges()[e];
                if a == v && w == v {
                    open.insert(2 * e);
                    open.insert(2 * e + 1);
                } else {
                    open.insert(2 * e + usize::from(a != v));
                }
            }
        };
    add(start, &mut in_s, &mut open, &explored, &mut vertices);
    while vertices.len() < target {
        let slot = open
            .take(&mut rng)
            .ok_or_else(|| Error::EpsPrimeTooLarge("core component exhausted before reaching eps' n".into()))?;
        let e = slot / 2;
        explored[e] = true;
        open.remove(2 * e);
        open.remove(2 * e + 1);
        let (a, b) = g.edges()[e];
        let other = if slot % 2 == 0 { b } else { a };
        if !in_s[other] {
            add(other, &mut in_s, &mut open, &explored, &mut vertices);
        }
    }
    Ok(SeedSet { vertices, explored_edges: explored })
}

/// Multi-source BFS distances from `sources` inside `mask`, capped at `radius`.
fn ball(g: &MultiGraph, mask: &[bool], sources: &[usize], radius: usize) -> Vec<bool> {
    let mut dist = vec![usize::MAX; g.n()];
    let mut queue = VecDeque::new();
    for &s in sources {
        dist[s] = 0;
        queue.push_back(s);
    }
    while let Some(u) = queue.pop_front() {
        if dist[u] == radius {
            continue;
        }
        for w in g.neighbors(u) {
            if mask[w] && dist[w] == usize::MAX {
                dist[w] = dist[u] + 1;
                queue.push_back(w);
            }
        }
    }
    dist.iter().map(|&d| d != usize::MAX).collect()
}

/// Depth-first search for an S-chain from `u`: a path of at most `ell` edges
/// whose interior lies in `ball` and outside `in_s`, ending in `in_s`.
/// Returns the interior vertices of the first chain found.
fn find_chain(g: &MultiGraph, u: usize, ell: usize, in_s: &[bool], ball: &[bool]) -> Option<Vec<usize>> {
    let mut path: Vec<usize> = Vec::new();
    let mut on_path = std::collections::HashSet::new();
    fn dfs(
        g: &MultiGraph,
        cur: usize,
        via: usize,
        depth: usize,
        ell: usize,
        in_s: &[bool],
        ball: &[bool],
        path: &mut Vec<usize>,
        on_path: &mut std::collections::HashSet<usize>,
    ) -> bool {
        for &(w, e) in g.adjacency(cur) {
            if e == via {
                continue;
            }
            if in_s[w] {
                if !path.is_empty() {
                    return true;
                }
                continue;
            }
            if depth + 1 >= ell || !ball[w] || on_path.contains(&w) {
                continue;
            }
            path.push(w);
            on_path.insert(w);
            if dfs(g, w, e, depth + 1, ell, in_s, ball, path, on_path) {
                return true;
            }
            path.pop();
            on_path.remove(&w);
        }
        false
    }
    if dfs(g, u, usize::MAX, 0, ell, in_s, ball, &mut path, &mut on_path) {
        Some(path)
    } else {
        None
    }
}

/// Absorb S-chains of length at most `ell` found around the seed set.
///
/// Seed vertices with an unexplored incident edge are visited in exploration
/// order; from each, chains through the `ell/2`-ball of the seed set are
/// absorbed one at a time until none remains. Returns the final vertex set as
/// a mask over the host ids.
pub fn absorb_chains(core: &Subgraph, seed_set: &SeedSet, ell: usize) -> Result<Vec<bool>> {
    if ell < 2 || ell % 2 == 1 {
        return Err(Error::Domain(format!("ell = {ell} must be even and at least 2")));
    }
    let g = &core.graph;
    let mut in_s = vec![false; g.n()];
    for &v in &seed_set.vertices {
        in_s[v] = true;
    }
    let reach = ball(g, &core.retained, &seed_set.vertices, ell / 2);
    let row: Vec<usize> = seed_set
        .vertices
        .iter()
        .copied()
        .filter(|&v| g.adjacency(v).iter().any(|&(_, e)| !seed_set.explored_edges[e]))
        .collect();
    for u in row {
        while let Some(interior) = find_chain(g, u, ell, &in_s, &reach) {
            for v in interior {
                in_s[v] = true;
            }
        }
    }
    Ok(in_s)
}

/// Extend `aprime` by every host vertex outside the core whose tree hangs off
/// a vertex of `aprime`.
pub fn pull_back_trees(host: &MultiGraph, core_mask: &[bool], aprime: &[bool]) -> Vec<bool> {
    let mut out = aprime.to_vec();
    let mut queue: VecDeque<usize> = (0..host.n()).filter(|&v| aprime[v]).collect();
    while let Some(u) = queue.pop_front() {
        for w in host.neighbors(u) {
            if !out[w] && !core_mask[w] {
                out[w] = true;
                queue.push_back(w);
            }
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SupercriticalRun {
    pub eps_prime: f64,
    pub ell: usize,
    pub seed: u64,
    pub n: usize,
    pub giant_order: usize,
    pub core_order: usize,
    pub s_order: usize,
    pub aprime_order: usize,
    pub aprime_cap: f64,
    pub amax_order: usize,
    pub amax_edges: usize,
    pub density_margin: f64,
    pub complement_components: usize,
    pub components: usize,
    pub blocks: usize,
    pub q_achieved: f64,
    pub baseline: f64,
    /// Modularity of the component partition on the same sample, with large
    /// components cut into subtrees.
    pub component_q: f64,
    pub mean_degree: f64,
}

fn count_components(g: &MultiGraph, mask: &[bool]) -> usize {
    let mut seen = vec![false; g.n()];
    let mut count = 0;
    for s in 0..g.n() {
        if !mask[s] || seen[s] {
            continue;
        }
        count += 1;
        seen[s] = true;
        let mut stack = vec![s];
        while let Some(u) = stack.pop() {
            for w in g.neighbors(u) {
                if mask[w] && !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
    }
    count
}

/// Internal edges of the vertex set `mask`.
fn edges_inside(g: &MultiGraph, mask: &[bool]) -> usize {
    g.edges().iter().filter(|&&(u, v)| mask[u] && mask[v]).count()
}

/// Full pipeline on an already sampled graph.
pub fn supercritical_on_graph(
    g: &MultiGraph,
    eps_prime: f64,
    ell: usize,
    seed: u64,
) -> Result<(SupercriticalRun, VertexPartition)> {
    let n = g.n();
    let comps = connected_components(g);
    let giant = comps
        .blocks()
        .iter()
        .max_by(|a, b| a.len().cmp(&b.len()).then(b[0].cmp(&a[0])))
        .ok_or_else(|| Error::Domain("empty graph".into()))?;
    let target = (eps_prime * n as f64).ceil() as usize;
    if giant.len() < target {
        return Err(Error::EpsPrimeTooLarge(format!("giant component has {} vertices, need {target}", giant.len())));
    }
    let mut giant_mask = vec![false; n];
    for &v in giant {
        giant_mask[v] = true;
    }
    let core = two_core_within(g, &giant_mask);
    let seed_set = build_s_set(&core, eps_prime, seed)?;
    let aprime = absorb_chains(&core, &seed_set, ell)?;
    let aprime_order = aprime.iter().filter(|&&b| b).count();
    let amax = pull_back_trees(g, &core.retained, &aprime);
    let amax_order = amax.iter().filter(|&&b| b).count();
    let amax_edges = edges_inside(g, &amax);

    let rest: Vec<bool> = amax.iter().map(|&b| !b).collect();
    let delta = g.max_degree();
    let mut blocks = vec![(0..n).filter(|&v| amax[v]).collect::<Vec<_>>()];
    let rest_blocks = split_components(g, &rest, delta, n)?;
    let rest_in_giant: Vec<bool> = (0..n).map(|v| rest[v] && giant_mask[v]).collect();
    let complement_components = count_components(g, &rest_in_giant);
    blocks.extend(rest_blocks);
    let partition = VertexPartition::new(n, blocks)?;
    let q_achieved = modularity(g, &partition)?;
    let component_q = modularity(g, &VertexPartition::new(n, split_components(g, &vec![true; n], delta, n)?)?)?;
    let mean_degree = 2.0 * g.m() as f64 / n as f64;
    let mu = comps.len() as f64 / n as f64;
    let a = amax_order as f64;
    let d = delta as f64;
    let half = (ell / 2) as u32;
    let aprime_cap = if delta > 1 {
        (d.powi(half as i32 + 1) - 1.0) / (d - 1.0) * target as f64
    } else {
        (half as f64 + 1.0) * target as f64
    };
    let run = SupercriticalRun {
        eps_prime,
        ell,
        seed,
        n,
        giant_order: giant.len(),
        core_order: core.order(),
        s_order: seed_set.vertices.len(),
        aprime_order,
        aprime_cap,
        amax_order,
        amax_edges,
        density_margin: (amax_edges as f64 - a) * n as f64 / (a * a),
        complement_components,
        components: comps.len(),
        blocks: partition.len(),
        q_achieved,
        baseline: 2.0 * (1.0 - mu) / mean_degree,
        component_q,
        mean_degree,
    };
    Ok((run, partition))
}

/// Sample a graph from `profile` at order `n` and run the dense-set
/// construction on it.
pub fn supercritical_pipeline(
    profile: &DegreeProfile,
    n: usize,
    eps_prime: f64,
    ell: usize,
    seed: u64,
) -> Result<SupercriticalRun> {
    let crit = profile.criterion();
    if crit.regime != Regime::Supercritical {
        return Err(Error::Regime(format!("profile is not supercritical (Q = {})", crit.q)));
    }
    let seq = profile.to_sequence(n)?;
    let g = sample_configuration(&seq, seed);
    let (run, _) = supercritical_on_graph(&g, eps_prime, ell, derive_seed(seed, u64::MAX))?;
    Ok(SupercriticalRun { seed, ..run })
}

/// Run the pipeline for every `(eps_prime, ell)` pair on one shared sample.
pub fn supercritical_grid(
    profile: &DegreeProfile,
    n: usize,
    eps_primes: &[f64],
    ells: &[usize],
    seed: u64,
    exec: Execution,
) -> Result<Vec<Result<SupercriticalRun>>> {
    let crit = profile.criterion();
    if crit.regime != Regime::Supercritical {
        return Err(Error::Regime(format!("profile is not supercritical (Q = {})", crit.q)));
    }
    let seq = profile.to_sequence(n)?;
    let g = sample_configuration(&seq, seed);
    let pairs: Vec<(f64, usize)> = eps_primes.iter().flat_map(|&e| ells.iter().map(move |&l| (e, l))).collect();
    Ok(parallel::map(exec, &pairs, |&(e, l)| {
        supercritical_on_graph(&g, e, l, derive_seed(seed, u64::MAX)).map(|(r, _)| SupercriticalRun { seed, ..r })
    }))
}
