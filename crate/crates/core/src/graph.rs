//! Degree sequences, configuration-model sampling and structural reductions.

use std::collections::{BTreeMap, VecDeque};
use std::fmt;
use std::str::FromStr;

use rand::Rng;

use crate::error::{Error, Result};
use crate::partition::VertexPartition;
use crate::pool::IndexedPool;
use crate::rng::rng_from_seed;

pub const DEFAULT_REJECTION_BUDGET: usize = 1000;

/// Exact degree histogram: degree -> number of vertices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DegreeSequence {
    counts: BTreeMap<usize, usize>,
}

impl DegreeSequence {
    pub fn new(counts: BTreeMap<usize, usize>) -> Result<Self> {
        if counts.contains_key(&0) {
            return Err(Error::NonPositiveDegree(0));
        }
        let counts: BTreeMap<usize, usize> = counts.into_iter().filter(|&(_, c)| c > 0).collect();
        let d: u64 = counts.iter().map(|(&k, &c)| (k * c) as u64).sum();
        if d % 2 == 1 {
            return Err(Error::OddDegreeSum(d));
        }
        Ok(DegreeSequence { counts })
    }

    /// `d`-regular sequence on `n` vertices.
    pub fn regular(d: usize, n: usize) -> Result<Self> {
        Self::new(BTreeMap::from([(d, n)]))
    }

    /// Histogram of an explicit per-vertex degree list.
    pub fn from_degrees(degrees: &[usize]) -> Result<Self> {
        let mut counts = BTreeMap::new();
        for &d in degrees {
            *counts.entry(d).or_insert(0) += 1;
        }
        Self::new(counts)
    }

    pub fn counts(&self) -> &BTreeMap<usize, usize> {
        &self.counts
    }

    pub fn n(&self) -> usize {
        self.counts.values().sum()
    }

    pub fn max_degree(&self) -> usize {
        self.counts.keys().next_back().copied().unwrap_or(0)
    }

    /// Total number of half-edges, D = sum of degrees.
    pub fn half_edges(&self) -> usize {
        self.counts.iter().map(|(&k, &c)| k * c).sum()
    }

    /// Degree of every vertex id: descending degree, ties by id.
    pub fn vertex_degrees(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.n());
        for (&k, &c) in self.counts.iter().rev() {
            out.extend(std::iter::repeat_n(k, c));
        }
        out
    }
}

impl FromStr for DegreeSequence {
    type Err = Error;

    fn from_str(spec: &str) -> Result<Self> {
        let mut counts = BTreeMap::new();
        for token in spec.split(',').map(str::trim).filter(|t| !t.is_empty()) {
            let (deg, count) =
                token.split_once(':').ok_or_else(|| Error::Parse(format!("expected degree:count, got {token:?}")))?;
            let deg: i64 = deg.trim().parse().map_err(|_| Error::Parse(format!("bad degree in {token:?}")))?;
            if deg <= 0 {
                return Err(Error::NonPositiveDegree(deg));
            }
            let count: usize = count.trim().parse().map_err(|_| Error::Parse(format!("bad count in {token:?}")))?;
            *counts.entry(deg as usize).or_insert(0) += count;
        }
        if counts.is_empty() {
            return Err(Error::Parse("empty degree sequence".into()));
        }
        DegreeSequence::new(counts)
    }
}

impl fmt::Display for DegreeSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.counts.iter().map(|(k, c)| format!("{k}:{c}")).collect();
        f.write_str(&parts.join(","))
    }
}

/// Undirected multigraph on vertices `0..n`. Loops and parallel edges are allowed.
///
/// Every edge appears twice in the adjacency lists (a loop appears twice in
/// its vertex's list), so `adjacency(v).len() == degree(v)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultiGraph {
    n: usize,
    edges: Vec<(usize, usize)>,
    degree: Vec<usize>,
    adj: Vec<Vec<(usize, usize)>>,
}

impl MultiGraph {
    pub fn from_edges(n: usize, edges: Vec<(usize, usize)>) -> Result<Self> {
        let mut degree = vec![0usize; n];
        let mut adj = vec![Vec::new(); n];
        for (i, &(u, v)) in edges.iter().enumerate() {
            for w in [u, v] {
                if w >= n {
                    return Err(Error::VertexOutOfRange { vertex: w, n });
                }
            }
            degree[u] += 1;
            degree[v] += 1;
            adj[u].push((v, i));
            adj[v].push((u, i));
        }
        let edges = edges.into_iter().map(|(u, v)| (u.min(v), u.max(v))).collect();
        Ok(MultiGraph { n, edges, degree, adj })
    }

    pub fn empty(n: usize) -> Self {
        MultiGraph { n, edges: Vec::new(), degree: vec![0; n], adj: vec![Vec::new(); n] }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    /// Edges as `(min, max)` pairs, in insertion order.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn degree(&self, v: usize) -> usize {
        self.degree[v]
    }

    pub fn degrees(&self) -> &[usize] {
        &self.degree
    }

    pub fn max_degree(&self) -> usize {
        self.degree.iter().copied().max().unwrap_or(0)
    }

    /// `(neighbour, edge index)` pairs incident to `v`.
    pub fn adjacency(&self, v: usize) -> &[(usize, usize)] {
        &self.adj[v]
    }

    pub fn neighbors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.adj[v].iter().map(|&(w, _)| w)
    }

    pub fn loop_count(&self) -> usize {
        self.edges.iter().filter(|(u, v)| u == v).count()
    }

    pub fn is_simple(&self) -> bool {
        if self.loop_count() > 0 {
            return false;
        }
        let mut sorted = self.edges.clone();
        sorted.sort_unstable();
        sorted.windows(2).all(|w| w[0] != w[1])
    }

    /// Sorted edge multiset; equal for graphs with the same edges in any order.
    pub fn canonical_edges(&self) -> Vec<(usize, usize)> {
        let mut e = self.edges.clone();
        e.sort_unstable();
        e
    }

    /// Subgraph induced by `mask`, keeping vertex ids.
    pub fn induced(&self, mask: &[bool]) -> Subgraph {
        let edges = self.edges.iter().copied().filter(|&(u, v)| mask[u] && mask[v]).collect();
        Subgraph {
            graph: MultiGraph::from_edges(self.n, edges).expect("ids already in range"),
            retained: mask.to_vec(),
        }
    }

    /// Number of triangles counted over vertex triples with multiplicity of
    /// parallel edges; loops are ignored.
    pub fn triangle_count(&self) -> u64 {
        let mut mult: std::collections::HashMap<(usize, usize), u64> = Default::default();
        for &(u, v) in &self.edges {
            if u != v {
                *mult.entry((u, v)).or_insert(0) += 1;
            }
        }
        let mut nbrs: Vec<Vec<usize>> = vec![Vec::new(); self.n];
        for &(u, v) in mult.keys() {
            nbrs[u].push(v);
        }
        let mut total = 0;
        for (&(u, v), &muv) in &mult {
            for &w in &nbrs[v] {
                if let Some(&muw) = mult.get(&(u, w)) {
                    total += muv * mult[&(v, w)] * muw;
                }
            }
        }
        total
    }
}

/// A graph on the host's vertex ids together with the mask of ids that belong
/// to it. Ids outside the mask have no incident edges.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Subgraph {
    pub graph: MultiGraph,
    pub retained: Vec<bool>,
}

impl Subgraph {
    pub fn full(g: &MultiGraph) -> Self {
        Subgraph { graph: g.clone(), retained: vec![true; g.n()] }
    }

    pub fn order(&self) -> usize {
        self.retained.iter().filter(|&&r| r).count()
    }

    pub fn is_empty(&self) -> bool {
        self.order() == 0
    }

    pub fn vertices(&self) -> impl Iterator<Item = usize> + '_ {
        self.retained.iter().enumerate().filter(|(_, &r)| r).map(|(v, _)| v)
    }

    pub fn contains(&self, v: usize) -> bool {
        self.retained[v]
    }

    /// Components of the retained vertices, lowest id first.
    pub fn components(&self) -> Vec<Vec<usize>> {
        components_within(&self.graph, &self.retained)
    }
}

fn fill_matching<R: Rng + ?Sized>(owner: &[usize], rng: &mut R) -> Vec<(usize, usize)> {
    let d = owner.len();
    let mut pool = IndexedPool::full(d);
    let mut edges = Vec::with_capacity(d / 2);
    for h in 0..d {
        if !pool.remove(h) {
            continue;
        }
        let mate = pool.take(rng).expect("even number of half-edges");
        edges.push((owner[h], owner[mate]));
    }
    edges
}

/// Owner vertex of every half-edge, grouped by vertex.
pub fn half_edge_owners(degrees: &[usize]) -> Vec<usize> {
    let mut owner = Vec::with_capacity(degrees.iter().sum());
    for (v, &d) in degrees.iter().enumerate() {
        owner.extend(std::iter::repeat_n(v, d));
    }
    owner
}

/// Uniform configuration multigraph drawn from `rng`.
pub fn sample_configuration_with<R: Rng + ?Sized>(seq: &DegreeSequence, rng: &mut R) -> MultiGraph {
    let degrees = seq.vertex_degrees();
    let owner = half_edge_owners(&degrees);
    let edges = fill_matching(&owner, rng);
    MultiGraph::from_edges(degrees.len(), edges).expect("owners are in range")
}

/// Uniform configuration multigraph. Deterministic in `seed`.
pub fn sample_configuration(seq: &DegreeSequence, seed: u64) -> MultiGraph {
    sample_configuration_with(seq, &mut rng_from_seed(seed))
}

/// Uniform simple graph by rejection from the configuration model.
pub fn sample_simple(seq: &DegreeSequence, seed: u64, max_retries: usize) -> Result<MultiGraph> {
    let mut rng = rng_from_seed(seed);
    for _ in 0..max_retries.max(1) {
        let g = sample_configuration_with(seq, &mut rng);
        if g.is_simple() {
            return Ok(g);
        }
    }
    Err(Error::RejectionBudgetExceeded(max_retries.max(1)))
}

fn components_within(g: &MultiGraph, mask: &[bool]) -> Vec<Vec<usize>> {
    let mut seen = vec![false; g.n()];
    let mut out = Vec::new();
    let mut queue = VecDeque::new();
    for s in 0..g.n() {
        if seen[s] || !mask[s] {
            continue;
        }
        seen[s] = true;
        queue.push_back(s);
        let mut comp = Vec::new();
        while let Some(u) = queue.pop_front() {
            comp.push(u);
            for w in g.neighbors(u) {
                if !seen[w] && mask[w] {
                    seen[w] = true;
                    queue.push_back(w);
                }
            }
        }
        comp.sort_unstable();
        out.push(comp);
    }
    out
}

/// Connected components as a partition, blocks ordered by lowest vertex id.
pub fn connected_components(g: &MultiGraph) -> VertexPartition {
    let blocks = components_within(g, &vec![true; g.n()]);
    VertexPartition::from_blocks_unchecked(g.n(), blocks)
}

/// Maximal subgraph of minimum degree at least 2, found by repeatedly deleting
/// vertices of degree 0 or 1.
pub fn two_core(g: &MultiGraph) -> Subgraph {
    two_core_within(g, &vec![true; g.n()])
}

/// 2-core of the subgraph induced by `mask`.
pub fn two_core_within(g: &MultiGraph, mask: &[bool]) -> Subgraph {
    let n = g.n();
    let mut alive = mask.to_vec();
    let mut deg: Vec<usize> =
        (0..n).map(|v| if alive[v] { g.adjacency(v).iter().filter(|&&(w, _)| alive[w]).count() } else { 0 }).collect();
    let mut stack: Vec<usize> = (0..n).filter(|&v| alive[v] && deg[v] < 2).collect();
    while let Some(v) = stack.pop() {
        if !alive[v] {
            continue;
        }
        alive[v] = false;
        for &(w, _) in g.adjacency(v) {
            if w != v && alive[w] {
                deg[w] -= 1;
                if deg[w] == 1 {
                    stack.push(w);
                }
            }
        }
    }
    g.induced(&alive)
}

/// Replace every maximal path of degree-2 vertices by a single edge between its
/// end vertices. Components that consist only of degree-2 vertices (cycles,
/// including a single vertex with a loop) disappear.
///
/// The retained vertices of the result are exactly the input vertices of
/// degree at least 3, with unchanged degrees.
pub fn smooth_degree_two(core: &Subgraph) -> Result<Subgraph> {
    let g = &core.graph;
    for v in core.vertices() {
        if g.degree(v) < 2 {
            return Err(Error::MinDegree { vertex: v, degree: g.degree(v) });
        }
    }
    let branch: Vec<bool> = (0..g.n()).map(|v| core.retained[v] && g.degree(v) >= 3).collect();
    let mut used = vec![false; g.m()];
    let mut edges = Vec::new();
    for u in (0..g.n()).filter(|&u| branch[u]) {
        for &(first, e0) in g.adjacency(u) {
            if used[e0] {
                continue;
            }
            used[e0] = true;
            let (mut prev_edge, mut cur) = (e0, first);
            while !branch[cur] {
                let &(next, e) = g
                    .adjacency(cur)
                    .iter()
                    .find(|&&(_, e)| e != prev_edge)
                    .ok_or_else(|| Error::Internal("degree-2 vertex without exit".into()))?;
                used[e] = true;
                prev_edge = e;
                cur = next;
            }
            edges.push((u, cur));
        }
    }
    let graph = MultiGraph::from_edges(g.n(), edges)?;
    Ok(Subgraph { graph, retained: branch })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cycle(n: usize) -> MultiGraph {
        MultiGraph::from_edges(n, (0..n).map(|i| (i, (i + 1) % n)).collect()).unwrap()
    }

    #[test]
    fn parse_examples() {
        let s: DegreeSequence = "3:12".parse().unwrap();
        assert_eq!((s.n(), s.half_edges(), s.max_degree()), (12, 36, 3));
        assert_eq!("3:5".parse::<DegreeSequence>(), Err(Error::OddDegreeSum(15)));
        let s: DegreeSequence = "1:4,2:2".parse().unwrap();
        assert_eq!((s.n(), s.half_edges(), s.max_degree()), (6, 8, 2));
        assert_eq!(s.vertex_degrees(), vec![2, 2, 1, 1, 1, 1]);
        assert_eq!("0:3".parse::<DegreeSequence>(), Err(Error::NonPositiveDegree(0)));
        assert_eq!("-1:2".parse::<DegreeSequence>(), Err(Error::NonPositiveDegree(-1)));
        assert!(matches!("3".parse::<DegreeSequence>(), Err(Error::Parse(_))));
        assert!(matches!("3:x".parse::<DegreeSequence>(), Err(Error::Parse(_))));
    }

    #[test]
    fn forced_samples() {
        let g = sample_configuration(&"1:2".parse().unwrap(), 5);
        assert_eq!(g.edges(), &[(0, 1)]);
        let g = sample_configuration(&"2:1".parse().unwrap(), 5);
        assert_eq!(g.edges(), &[(0, 0)]);
        assert_eq!(g.degree(0), 2);
        let k4 = sample_simple(&"3:4".parse().unwrap(), 9, DEFAULT_REJECTION_BUDGET).unwrap();
        assert_eq!(k4.canonical_edges(), vec![(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]);
        let tri = sample_simple(&"2:3".parse().unwrap(), 3, DEFAULT_REJECTION_BUDGET).unwrap();
        assert_eq!(tri.canonical_edges(), vec![(0, 1), (0, 2), (1, 2)]);
        let e = sample_simple(&"1:2".parse().unwrap(), 0, 1).unwrap();
        assert_eq!(e.m(), 1);
    }

    #[test]
    fn rejection_budget_reported() {
        let seq: DegreeSequence = "4:1".parse().unwrap();
        assert_eq!(sample_simple(&seq, 1, 7), Err(Error::RejectionBudgetExceeded(7)));
    }

    #[test]
    fn components_examples() {
        let g = MultiGraph::from_edges(6, vec![(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3)]).unwrap();
        let p = connected_components(&g);
        assert_eq!(p.blocks(), &[vec![0, 1, 2], vec![3, 4, 5]]);
        let p = connected_components(&MultiGraph::empty(5));
        assert_eq!(p.len(), 5);
    }

    #[test]
    fn two_core_examples() {
        let tree = MultiGraph::from_edges(5, vec![(0, 1), (1, 2), (1, 3), (3, 4)]).unwrap();
        assert!(two_core(&tree).is_empty());
        let c5 = cycle(5);
        assert_eq!(two_core(&c5).graph, c5);
        let mut e: Vec<(usize, usize)> = (0..4).map(|i| (i, (i + 1) % 4)).collect();
        e.extend([(0, 4), (4, 5), (5, 6)]);
        let lolly = MultiGraph::from_edges(7, e).unwrap();
        let core = two_core(&lolly);
        assert_eq!(core.vertices().collect::<Vec<_>>(), vec![0, 1, 2, 3]);
        assert_eq!(core.graph.m(), 4);
    }

    #[test]
    fn smoothing_examples() {
        // u=0, w=1 joined by three subdivided paths a-b each.
        let mut e = Vec::new();
        let mut next = 2;
        for _ in 0..3 {
            e.extend([(0, next), (next, next + 1), (next + 1, 1)]);
            next += 2;
        }
        let theta = MultiGraph::from_edges(next, e).unwrap();
        let s = smooth_degree_two(&Subgraph::full(&theta)).unwrap();
        assert_eq!(s.vertices().collect::<Vec<_>>(), vec![0, 1]);
        assert_eq!(s.graph.canonical_edges(), vec![(0, 1); 3]);

        let s = smooth_degree_two(&Subgraph::full(&cycle(6))).unwrap();
        assert!(s.is_empty());
        assert_eq!(s.graph.m(), 0);

        let p = MultiGraph::from_edges(1, vec![(0, 0)]).unwrap();
        assert!(smooth_degree_two(&Subgraph::full(&p)).unwrap().is_empty());

        let bad = MultiGraph::from_edges(2, vec![(0, 1)]).unwrap();
        assert!(matches!(smooth_degree_two(&Subgraph::full(&bad)), Err(Error::MinDegree { .. })));
    }

    #[test]
    fn smoothing_keeps_loops_at_branch_vertices() {
        // vertex 0 of degree 4 with a subdivided loop through 1 and an edge pair to 2
        let g = MultiGraph::from_edges(3, vec![(0, 1), (1, 0), (0, 2), (0, 2), (2, 2)]).unwrap();
        let s = smooth_degree_two(&Subgraph::full(&g)).unwrap();
        assert_eq!(s.vertices().collect::<Vec<_>>(), vec![0, 2]);
        assert_eq!(s.graph.canonical_edges(), vec![(0, 0), (0, 2), (0, 2), (2, 2)]);
    }

    #[test]
    fn triangles_of_k4() {
        let k4 = MultiGraph::from_edges(4, vec![(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]).unwrap();
        assert_eq!(k4.triangle_count(), 4);
    }
}
