//! Lazy exploration of a random 3-regular configuration graph following the
//! three-phase growth of a dense component, with trajectory snapshots that can
//! be compared against the closed forms in [`crate::ode_lower`].

use rand::seq::SliceRandom;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::MultiGraph;
use crate::io::{Cell, Table};
use crate::modularity::{ceil_sqrt, floor_sqrt, modularity, relative_modularity, split_components};
use crate::ode_lower::{
    chain_z0_at, explored_vertices_at, phase1_of, star_w_at, t0_of, t2_of, urn_fraction, CherryCurves,
};
use crate::parallel::{self, Execution};
use crate::partition::VertexPartition;
use crate::pool::IndexedPool;
use crate::rng::rng_from_seed;

pub const DEGREE: usize = 3;
pub const MAX_EPS: f64 = 0.9;
const UNMATCHED: usize = usize::MAX;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Phase {
    Seed,
    Cherry,
    Chain,
    Star,
}

impl Phase {
    pub fn index(self) -> usize {
        self as usize
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Status {
    Untouched,
    Seed,
    Cherry,
    HitOnce,
    Chain,
    Star,
    StarLeaf,
    Closed,
}

/// Raw counters of the exploration.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct Counters {
    pub explored: usize,
    pub x0: usize,
    pub x1: usize,
    pub x23: usize,
    pub a: usize,
    pub h: usize,
    pub z0: usize,
    pub z1: usize,
    pub w: [usize; 4],
    /// Vertices hit once that joined through a chain.
    pub chain_joined: usize,
}

/// One snapshot, with all counters divided by `n`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TrajectoryRecord {
    pub step: usize,
    pub phase: Phase,
    /// Edges revealed since the current phase started.
    pub phase_step: usize,
    pub explored: f64,
    pub x0: f64,
    pub x1: f64,
    pub x23: f64,
    pub a: f64,
    pub h: f64,
    pub z0: f64,
    pub z1: f64,
    pub w: [f64; 4],
    pub chain_joined: f64,
}

impl TrajectoryRecord {
    fn phase_time(&self, n: usize) -> f64 {
        self.phase_step as f64 / n as f64
    }
}

/// State of the lazy exploration. Half-edge `h` belongs to vertex `h / 3`.
#[derive(Debug, Clone)]
pub struct ExplorationState {
    n: usize,
    eps: f64,
    rng: ChaCha8Rng,
    partner: Vec<usize>,
    unmatched: IndexedPool,
    status: Vec<Status>,
    star_degree: Vec<u8>,
    counters: Counters,
    phase: Phase,
    step: usize,
    phase_step: usize,
    snapshot_every: usize,
    trajectory: Vec<TrajectoryRecord>,
    /// Unmatched half-edges of the component during the first two phases.
    open: IndexedPool,
    restarts: usize,
    terminal: [Counters; 4],
    phase_steps: [usize; 4],
}

impl ExplorationState {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn eps(&self) -> f64 {
        self.eps
    }

    pub fn counters(&self) -> Counters {
        self.counters
    }

    pub fn trajectory(&self) -> &[TrajectoryRecord] {
        &self.trajectory
    }

    /// Counters at the end of each completed phase.
    pub fn terminal(&self, phase: Phase) -> Counters {
        self.terminal[phase.index()]
    }

    /// Edges revealed during each completed phase.
    pub fn phase_steps(&self, phase: Phase) -> usize {
        self.phase_steps[phase.index()]
    }

    /// Times the seed phase jumped to a fresh vertex, the first start included.
    pub fn restarts(&self) -> usize {
        self.restarts
    }

    fn owner(h: usize) -> usize {
        h / DEGREE
    }

    fn half_edges(v: usize) -> std::ops::Range<usize> {
        DEGREE * v..DEGREE * v + DEGREE
    }

    fn reveal(&mut self, h: usize) -> usize {
        self.unmatched.remove(h);
        let p = self.unmatched.take(&mut self.rng).expect("an even number of half-edges");
        self.partner[h] = p;
        self.partner[p] = h;
        self.step += 1;
        self.phase_step += 1;
        p
    }

    fn snapshot(&mut self, force: bool) {
        if !force && !self.step.is_multiple_of(self.snapshot_every) {
            return;
        }
        let nf = self.n as f64;
        let c = &self.counters;
        let f = |x: usize| x as f64 / nf;
        self.trajectory.push(TrajectoryRecord {
            step: self.step,
            phase: self.phase,
            phase_step: self.phase_step,
            explored: f(c.explored),
            x0: f(c.x0),
            x1: f(c.x1),
            x23: f(c.x23),
            a: f(c.a),
            h: f(c.h),
            z0: f(c.z0),
            z1: f(c.z1),
            w: c.w.map(f),
            chain_joined: f(c.chain_joined),
        });
    }

    fn finish_phase(&mut self, next: Option<Phase>) {
        self.snapshot(true);
        self.terminal[self.phase.index()] = self.counters;
        self.phase_steps[self.phase.index()] = self.phase_step;
        if let Some(p) = next {
            self.phase = p;
            self.phase_step = 0;
        }
    }

    fn add_seed_vertex(&mut self, v: usize, fresh: &mut IndexedPool) {
        fresh.remove(v);
        self.status[v] = Status::Seed;
        self.counters.explored += 1;
        self.counters.x0 -= 1;
        for h in Self::half_edges(v) {
            if self.partner[h] == UNMATCHED {
                self.open.insert(h);
            }
        }
    }

    /// Vertices of the current component.
    pub fn component_mask(&self) -> Vec<bool> {
        self.status
            .iter()
            .map(|s| {
                matches!(
                    s,
                    Status::Seed | Status::Cherry | Status::Chain | Status::Star | Status::StarLeaf | Status::Closed
                )
            })
            .collect()
    }
}

/// Seed phase: grow a component from a uniform vertex by revealing uniform
/// open half-edges until it has `ceil(eps n)` vertices, jumping to a uniform
/// unexplored vertex whenever the component closes.
pub fn run_phase0(n: usize, eps: f64, seed: u64) -> Result<ExplorationState> {
    if n == 0 {
        return Err(Error::Domain("n must be positive".into()));
    }
    if n % 2 == 1 {
        return Err(Error::OddDegreeSum((DEGREE * n) as u64));
    }
    if !(eps > 0.0 && eps < MAX_EPS) {
        return Err(Error::Domain(format!("eps = {eps} outside (0, {MAX_EPS})")));
    }
    let target = ((eps * n as f64).ceil() as usize).min(n);
    let mut state = ExplorationState {
        n,
        eps,
        rng: rng_from_seed(seed),
        partner: vec![UNMATCHED; DEGREE * n],
        unmatched: IndexedPool::full(DEGREE * n),
        status: vec![Status::Untouched; n],
        star_degree: vec![0; n],
        counters: Counters { x0: n, ..Counters::default() },
        phase: Phase::Seed,
        step: 0,
        phase_step: 0,
        snapshot_every: n.div_ceil(1000).max(1),
        trajectory: Vec::new(),
        open: IndexedPool::empty(DEGREE * n),
        restarts: 0,
        terminal: [Counters::default(); 4],
        phase_steps: [0; 4],
    };
    let mut fresh = IndexedPool::full(n);
    state.snapshot(true);
    while state.counters.explored < target {
        let Some(h) = state.open.take(&mut state.rng) else {
            let v = fresh.sample(&mut state.rng).ok_or_else(|| Error::Internal("no unexplored vertex left".into()))?;
            state.restarts += 1;
            state.add_seed_vertex(v, &mut fresh);
            continue;
        };
        let p = state.reveal(h);
        state.open.remove(p);
        let w = ExplorationState::owner(p);
        if state.status[w] == Status::Untouched {
            state.add_seed_vertex(w, &mut fresh);
        }
        state.snapshot(false);
    }
    state.counters.h = state.open.len();
    state.finish_phase(Some(Phase::Cherry));
    Ok(state)
}

/// Cherry phase: test every open half-edge of the component. A hit on a
/// vertex already hit once turns it into the centre of a cherry, which joins
/// the component and contributes its last half-edge to the queue.
pub fn run_phase1(state: &mut ExplorationState) -> Result<()> {
    if state.phase != Phase::Cherry {
        return Err(Error::Internal(format!("cherry phase cannot start in {:?}", state.phase)));
    }
    state.counters.h = state.open.len();
    while let Some(h) = state.open.take(&mut state.rng) {
        let p = state.reveal(h);
        if state.open.remove(p) {
            state.counters.a += 1;
        } else {
            let w = ExplorationState::owner(p);
            match state.status[w] {
                Status::Untouched => {
                    state.status[w] = Status::HitOnce;
                    state.counters.x0 -= 1;
                    state.counters.x1 += 1;
                }
                Status::HitOnce => {
                    state.status[w] = Status::Cherry;
                    state.counters.x1 -= 1;
                    state.counters.x23 += 1;
                    for g in ExplorationState::half_edges(w) {
                        if state.partner[g] == UNMATCHED {
                            state.open.insert(g);
                        }
                    }
                }
                other => {
                    return Err(Error::Internal(format!("component half-edge {p} of a {other:?} vertex not queued")))
                }
            }
        }
        state.counters.h = state.open.len();
        state.snapshot(false);
    }
    state.finish_phase(Some(Phase::Chain));
    Ok(())
}

/// Chain phase: reveal both open half-edges of every vertex hit once. An edge
/// between two distinct such vertices closes a path of length three through
/// the component and both join.
pub fn run_phase2(state: &mut ExplorationState) -> Result<()> {
    if state.phase != Phase::Chain {
        return Err(Error::Internal(format!("chain phase cannot start in {:?}", state.phase)));
    }
    for v in 0..state.n {
        if state.status[v] == Status::HitOnce {
            for h in ExplorationState::half_edges(v) {
                if state.partner[h] == UNMATCHED {
                    state.open.insert(h);
                }
            }
        }
    }
    let mut joined = vec![false; state.n];
    while let Some(h) = state.open.take(&mut state.rng) {
        let p = state.reveal(h);
        if state.open.remove(p) {
            state.counters.z1 += 1;
            let (u, w) = (ExplorationState::owner(h), ExplorationState::owner(p));
            if u != w {
                for v in [u, w] {
                    if !joined[v] {
                        joined[v] = true;
                        state.counters.chain_joined += 1;
                    }
                }
            }
        } else {
            state.counters.z0 += 1;
        }
        state.snapshot(false);
    }
    for v in 0..state.n {
        if joined[v] {
            state.status[v] = Status::Chain;
        }
    }
    state.counters.w = [state.counters.x0, 0, 0, 0];
    state.finish_phase(Some(Phase::Star));
    Ok(())
}

/// Star phase: the edges from vertices hit once that stayed outside to
/// untouched vertices are replayed in random order; a fresh vertex receiving
/// two or more of them joins together with its neighbours hit once.
pub fn run_phase3(state: &mut ExplorationState) -> Result<()> {
    if state.phase != Phase::Star {
        return Err(Error::Internal(format!("star phase cannot start in {:?}", state.phase)));
    }
    let mut targets = Vec::new();
    for v in 0..state.n {
        if state.status[v] != Status::HitOnce {
            continue;
        }
        for h in ExplorationState::half_edges(v) {
            let p = state.partner[h];
            if p != UNMATCHED && state.status[ExplorationState::owner(p)] == Status::Untouched {
                targets.push((v, ExplorationState::owner(p)));
            }
        }
    }
    targets.shuffle(&mut state.rng);
    for &(_, w) in &targets {
        let d = state.star_degree[w] as usize;
        state.star_degree[w] += 1;
        state.counters.w[d] -= 1;
        state.counters.w[d + 1] += 1;
        state.step += 1;
        state.phase_step += 1;
        state.snapshot(false);
    }
    for v in 0..state.n {
        if state.star_degree[v] >= 2 {
            state.status[v] = Status::Star;
        }
    }
    for &(v, w) in &targets {
        if state.star_degree[w] >= 2 {
            state.status[v] = Status::StarLeaf;
        }
    }
    state.finish_phase(None);
    Ok(())
}

/// Order and revealed internal edges of the component after the star phase.
pub fn measured_component(state: &ExplorationState) -> (usize, usize) {
    let mask = state.component_mask();
    let order = mask.iter().filter(|&&b| b).count();
    let edges = (0..state.partner.len())
        .filter(|&h| {
            let p = state.partner[h];
            p != UNMATCHED && h <= p && mask[ExplorationState::owner(h)] && mask[ExplorationState::owner(p)]
        })
        .count();
    (order, edges)
}

/// Match every remaining half-edge uniformly and return the full graph.
pub fn complete_matching(state: &mut ExplorationState) -> MultiGraph {
    while let Some(h) = state.unmatched.sample(&mut state.rng) {
        state.unmatched.remove(h);
        let p = state.unmatched.take(&mut state.rng).expect("an even number of half-edges");
        state.partner[h] = p;
        state.partner[p] = h;
    }
    let edges = (0..state.partner.len())
        .filter(|&h| h < state.partner[h])
        .map(|h| (ExplorationState::owner(h), ExplorationState::owner(state.partner[h])))
        .collect();
    MultiGraph::from_edges(state.n, edges).expect("owners are in range")
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClosureReport {
    pub size_before: usize,
    pub size_after: usize,
    pub absorbed: usize,
    /// The size guard `|C| <= n/3 - 1` stopped the loop with candidates left.
    pub guard_hit: bool,
    /// Vertices hit once that stayed outside the closed component.
    pub left_outside: usize,
    /// `e(C, V \ C)` before the first and after every absorption.
    pub boundary: Vec<usize>,
}

/// Greedily absorb outside vertices with at least two edges into `mask`
/// while the component has at most `n/3 - 1` vertices.
pub fn close_cherries(g: &MultiGraph, mask: &mut [bool]) -> ClosureReport {
    let n = g.n();
    let mut into = vec![0usize; n];
    let mut boundary = 0usize;
    for &(u, v) in g.edges() {
        if mask[u] != mask[v] {
            boundary += 1;
            into[if mask[u] { v } else { u }] += 1;
        }
    }
    let size_before = mask.iter().filter(|&&b| b).count();
    let mut size = size_before;
    let limit = n as f64 / 3.0 - 1.0;
    let mut queue: std::collections::VecDeque<usize> = (0..n).filter(|&v| !mask[v] && into[v] >= 2).collect();
    let mut trace = vec![boundary];
    let mut guard_hit = false;
    while let Some(v) = queue.pop_front() {
        if mask[v] {
            continue;
        }
        if size as f64 > limit {
            guard_hit = true;
            break;
        }
        mask[v] = true;
        size += 1;
        let inside = into[v];
        let outside = g.degree(v) - inside;
        boundary = boundary + outside - inside;
        for &(w, _) in g.adjacency(v) {
            if !mask[w] {
                into[w] += 1;
                if into[w] == 2 {
                    queue.push_back(w);
                }
            }
        }
        trace.push(boundary);
    }
    ClosureReport {
        size_before,
        size_after: size,
        absorbed: size - size_before,
        guard_hit,
        left_outside: 0,
        boundary: trace,
    }
}

/// `{component} ∪ remainder cut into subtrees`, scored.
pub fn assemble_and_score(g: &MultiGraph, component: &[bool]) -> Result<(VertexPartition, f64)> {
    let n = g.n();
    let rest: Vec<bool> = component.iter().map(|&b| !b).collect();
    let mut blocks = Vec::new();
    let comp: Vec<usize> = (0..n).filter(|&v| component[v]).collect();
    if !comp.is_empty() {
        blocks.push(comp);
    }
    blocks.extend(split_components(g, &rest, DEGREE, n)?);
    let partition = VertexPartition::new(n, blocks)?;
    let q = modularity(g, &partition)?;
    Ok((partition, q))
}

/// Throw `2 b` balls into `a` two-slot urns, each ball landing in a uniform
/// free slot, and count the urns holding at least one ball.
pub fn simulate_urns(a: usize, b: usize, seed: u64) -> Result<usize> {
    if b > a {
        return Err(Error::Domain(format!("{} balls exceed {} slots", 2 * b, 2 * a)));
    }
    let mut rng = rng_from_seed(seed);
    let mut slots = IndexedPool::full(2 * a);
    let mut filled = vec![false; a];
    let mut count = 0;
    for _ in 0..2 * b {
        let s = slots.take(&mut rng).expect("enough slots");
        if !filled[s / 2] {
            filled[s / 2] = true;
            count += 1;
        }
    }
    Ok(count)
}

/// Fractions measured at the end of one phase.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PhaseFractions {
    pub t: f64,
    pub explored: f64,
    pub x0: f64,
    pub x1: f64,
    pub x23: f64,
    pub a: f64,
    pub h: f64,
    pub z0: f64,
    pub z1: f64,
    pub w: [f64; 4],
    pub chain_joined: f64,
}

impl PhaseFractions {
    fn of(c: &Counters, steps: usize, n: usize) -> Self {
        let f = |x: usize| x as f64 / n as f64;
        PhaseFractions {
            t: f(steps),
            explored: f(c.explored),
            x0: f(c.x0),
            x1: f(c.x1),
            x23: f(c.x23),
            a: f(c.a),
            h: f(c.h),
            z0: f(c.z0),
            z1: f(c.z1),
            w: c.w.map(f),
            chain_joined: f(c.chain_joined),
        }
    }
}

/// Summary of one complete run.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PhaseRun {
    pub n: usize,
    pub eps: f64,
    pub seed: u64,
    pub restarts: usize,
    pub phases: [PhaseFractions; 4],
    pub v3: f64,
    pub e3: f64,
    pub qr_c3: f64,
    pub closed_order: f64,
    pub qr_closed: f64,
    pub closure: ClosureReport,
    pub q: f64,
    pub blocks: usize,
    /// Blocks other than the component whose order is outside
    /// `[floor(sqrt n), 3 ceil(sqrt n)]`.
    pub off_window_blocks: usize,
    /// Largest gap between a snapshot and the closed-form trajectory.
    pub ode_deviation: f64,
    #[serde(skip)]
    pub trajectory: Vec<TrajectoryRecord>,
}

/// Run all phases, close cherries, complete the graph and score the partition.
pub fn simulate(n: usize, eps: f64, seed: u64, keep_trajectory: bool) -> Result<PhaseRun> {
    let (run, _, _) = simulate_full(n, eps, seed, keep_trajectory)?;
    Ok(run)
}

/// As [`simulate`], also returning the revealed graph and final partition.
pub fn simulate_full(
    n: usize,
    eps: f64,
    seed: u64,
    keep_trajectory: bool,
) -> Result<(PhaseRun, MultiGraph, VertexPartition)> {
    let mut state = run_phase0(n, eps, seed)?;
    run_phase1(&mut state)?;
    run_phase2(&mut state)?;
    run_phase3(&mut state)?;
    let (v3, e3) = measured_component(&state);
    let mut mask = state.component_mask();
    let g = complete_matching(&mut state);
    let c3: Vec<usize> = (0..n).filter(|&v| mask[v]).collect();
    let qr_c3 = relative_modularity(&g, &c3)?;
    let mut closure = close_cherries(&g, &mut mask);
    closure.left_outside = (0..n).filter(|&v| state.status[v] == Status::HitOnce && !mask[v]).count();
    for v in 0..n {
        if mask[v] && !c3.binary_search(&v).is_ok() {
            state.status[v] = Status::Closed;
        }
    }
    let closed: Vec<usize> = (0..n).filter(|&v| mask[v]).collect();
    let qr_closed = relative_modularity(&g, &closed)?;
    let (partition, q) = assemble_and_score(&g, &mask)?;
    let (lo, hi) = (floor_sqrt(n), DEGREE * ceil_sqrt(n));
    let off_window_blocks = partition
        .blocks()
        .iter()
        .filter(|b| !(b.len() == closed.len() && mask[b[0]]))
        .filter(|b| b.len() < lo || b.len() > hi)
        .count();
    let phases = [Phase::Seed, Phase::Cherry, Phase::Chain, Phase::Star]
        .map(|p| PhaseFractions::of(&state.terminal(p), state.phase_steps(p), n));
    let ode_deviation = ode_deviation(state.trajectory(), n, eps)?;
    let nf = n as f64;
    let run = PhaseRun {
        n,
        eps,
        seed,
        restarts: state.restarts,
        phases,
        v3: v3 as f64 / nf,
        e3: e3 as f64 / nf,
        qr_c3,
        closed_order: closed.len() as f64 / nf,
        qr_closed,
        closure,
        q,
        blocks: partition.len(),
        off_window_blocks,
        ode_deviation,
        trajectory: if keep_trajectory { state.trajectory.clone() } else { Vec::new() },
    };
    Ok((run, g, partition))
}

/// Independent runs under the given seeds.
pub fn simulate_trials(n: usize, eps: f64, seeds: &[u64], exec: Execution) -> Result<Vec<PhaseRun>> {
    parallel::map(exec, seeds, |&s| simulate(n, eps, s, false)).into_iter().collect()
}

/// Closed-form predictions for the counters of a snapshot, in the order
/// `explored, x0, x1, x23, a, h, z0, z1, w0..w3, chain_joined`. Counters that a
/// phase does not drive are `None`.
pub fn predicted(record: &TrajectoryRecord, n: usize, eps: f64) -> Result<[Option<f64>; 13]> {
    let t = record.phase_time(n);
    let mut out = [None; 13];
    match record.phase {
        Phase::Seed => {
            out[0] = Some(explored_vertices_at(t));
        }
        Phase::Cherry => {
            let c = CherryCurves::new(eps)?;
            let t = t.min(c.end_time());
            out[1] = Some(c.x0(t));
            out[2] = Some(c.x1(t));
            out[3] = Some(c.x2(t));
            out[4] = Some(c.a(t));
            out[5] = Some(c.h(t));
        }
        Phase::Chain => {
            let ph = phase1_of(eps)?;
            let ch = t2_of(eps)?;
            let t = t.min(ch.t2);
            let z0 = chain_z0_at(ph.x0, ch.q_den, t);
            out[6] = Some(z0);
            out[7] = Some(t - z0);
            out[12] = Some(urn_fraction(ph.x1, (t - z0).min(ph.x1))?);
        }
        Phase::Star => {
            let ph = phase1_of(eps)?;
            let w = star_w_at(ph.x0, t.min(3.0 * ph.x0));
            for (i, v) in w.into_iter().enumerate() {
                out[8 + i] = Some(v);
            }
        }
    }
    Ok(out)
}

/// Measured counters of a snapshot, in the order used by [`predicted`].
pub fn measured(record: &TrajectoryRecord) -> [f64; 13] {
    let r = record;
    [r.explored, r.x0, r.x1, r.x23, r.a, r.h, r.z0, r.z1, r.w[0], r.w[1], r.w[2], r.w[3], r.chain_joined]
}

pub const COUNTER_NAMES: [&str; 13] =
    ["explored", "X0", "X1", "X23", "A", "H", "Z0", "Z1", "W0", "W1", "W2", "W3", "chain_joined"];

/// Measured columns of the trajectory table, after `step`.
pub const TRAJECTORY_COLUMNS: [&str; 11] = ["X0", "X1", "X23", "A", "H", "Z0", "Z1", "W0", "W1", "W2", "W3"];

/// Trajectory as a table with columns `step, X0, X1, X23, A, H, Z0, Z1,
/// W0..W3`, followed by `ode_<name>` predictions when `eps` is given. A
/// prediction cell is empty while its counter is not driven by the phase.
pub fn trajectory_table(trajectory: &[TrajectoryRecord], n: usize, eps: Option<f64>) -> Result<Table> {
    let mut header = vec!["step".to_string()];
    header.extend(TRAJECTORY_COLUMNS.iter().map(|c| c.to_string()));
    if eps.is_some() {
        header.extend(TRAJECTORY_COLUMNS.iter().map(|c| format!("ode_{c}")));
    }
    let mut table = Table::new(header);
    for r in trajectory {
        let got = measured(r);
        let mut row: Vec<Cell> = vec![Cell::from(r.step)];
        row.extend(got[1..12].iter().map(|&x| Cell::from(x)));
        if let Some(eps) = eps {
            let pred = predicted(r, n, eps)?;
            row.extend(pred[1..12].iter().map(|&x| Cell::from(x)));
        }
        table.push(row)?;
    }
    Ok(table)
}

/// Largest absolute gap between measured and predicted counters over all
/// snapshots.
pub fn ode_deviation(trajectory: &[TrajectoryRecord], n: usize, eps: f64) -> Result<f64> {
    t0_of(eps)?;
    let mut worst: f64 = 0.0;
    for r in trajectory {
        let got = measured(r);
        for (m, p) in got.iter().zip(predicted(r, n, eps)?) {
            if let Some(p) = p {
                worst = worst.max((m - p).abs());
            }
        }
    }
    Ok(worst)
}
