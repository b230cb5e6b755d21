//! Modularity of vertex partitions on multigraphs.
//!
//! Loops count once towards `e(A)` and twice towards `vol(A)`, which keeps
//! `sum vol = 2m` on multigraphs. Modularity is evaluated from integer block
//! statistics as `(4m * sum e - sum vol^2) / (4m^2)`, so two partitions with the
//! same statistics compare exactly.

use std::collections::{HashMap, VecDeque};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::MultiGraph;
use crate::partition::VertexPartition;

pub const DEFAULT_BRUTE_FORCE_LIMIT: usize = 10;

/// `floor(sqrt(n))` computed exactly.
pub fn floor_sqrt(n: usize) -> usize {
    let mut r = (n as f64).sqrt() as usize;
    while r * r > n {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= n {
        r += 1;
    }
    r
}

pub fn ceil_sqrt(n: usize) -> usize {
    let r = floor_sqrt(n);
    if r * r == n {
        r
    } else {
        r + 1
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct BlockStats {
    pub size: usize,
    pub e_within: u64,
    pub volume: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BlockReport {
    pub size: usize,
    pub e_within: u64,
    pub volume: u64,
    pub qr: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ModularityReport {
    pub q: f64,
    pub blocks: Vec<BlockReport>,
}

/// Internal edge count and volume of `block`.
pub fn block_stats(g: &MultiGraph, block: &[usize]) -> Result<(u64, u64)> {
    let mut inside = vec![false; g.n()];
    for &v in block {
        if v >= g.n() {
            return Err(Error::VertexOutOfRange { vertex: v, n: g.n() });
        }
        inside[v] = true;
    }
    let e = g.edges().iter().filter(|&&(u, v)| inside[u] && inside[v]).count() as u64;
    let vol = block.iter().map(|&v| g.degree(v) as u64).sum();
    Ok((e, vol))
}

fn partition_stats(g: &MultiGraph, partition: &VertexPartition) -> Result<Vec<BlockStats>> {
    if partition.n() != g.n() {
        return Err(Error::InvalidPartition(format!(
            "partition covers {} vertices, graph has {}",
            partition.n(),
            g.n()
        )));
    }
    let labels = partition.labels();
    let mut stats: Vec<BlockStats> = partition
        .blocks()
        .iter()
        .map(|b| BlockStats { size: b.len(), e_within: 0, volume: b.iter().map(|&v| g.degree(v) as u64).sum() })
        .collect();
    for &(u, v) in g.edges() {
        if labels[u] == labels[v] {
            stats[labels[u]].e_within += 1;
        }
    }
    Ok(stats)
}

/// Numerator of modularity over the common denominator `4m^2`.
fn score_numerator(m: u64, stats: impl Iterator<Item = (u64, u64)>) -> i128 {
    let (mut e_sum, mut vol_sq) = (0i128, 0i128);
    for (e, vol) in stats {
        e_sum += e as i128;
        vol_sq += (vol as i128) * (vol as i128);
    }
    4 * m as i128 * e_sum - vol_sq
}

fn q_from_numerator(m: u64, num: i128) -> f64 {
    if m == 0 {
        0.0
    } else {
        num as f64 / (4.0 * (m as f64) * (m as f64))
    }
}

/// Modularity `q(P)`. Edgeless graphs score 0 for every partition.
pub fn modularity(g: &MultiGraph, partition: &VertexPartition) -> Result<f64> {
    let stats = partition_stats(g, partition)?;
    let m = g.m() as u64;
    Ok(q_from_numerator(m, score_numerator(m, stats.iter().map(|s| (s.e_within, s.volume)))))
}

fn qr_of(n: usize, m: u64, size: usize, e: u64, vol: u64) -> f64 {
    let (m, vol) = (m as f64, vol as f64);
    (n as f64 / size as f64) * (e as f64 / m - vol * vol / (4.0 * m * m))
}

/// Relative modularity `(n/|A|)(e(A)/m - vol(A)^2/4m^2)`.
pub fn relative_modularity(g: &MultiGraph, block: &[usize]) -> Result<f64> {
    if block.is_empty() {
        return Err(Error::EmptyBlock);
    }
    if g.m() == 0 {
        return Err(Error::Domain("relative modularity needs at least one edge".into()));
    }
    let (e, vol) = block_stats(g, block)?;
    Ok(qr_of(g.n(), g.m() as u64, block.len(), e, vol))
}

/// Modularity together with per-block statistics.
pub fn modularity_report(g: &MultiGraph, partition: &VertexPartition) -> Result<ModularityReport> {
    let stats = partition_stats(g, partition)?;
    let m = g.m() as u64;
    let q = q_from_numerator(m, score_numerator(m, stats.iter().map(|s| (s.e_within, s.volume))));
    let blocks = stats
        .iter()
        .map(|s| BlockReport {
            size: s.size,
            e_within: s.e_within,
            volume: s.volume,
            qr: if m == 0 { 0.0 } else { qr_of(g.n(), m, s.size, s.e_within, s.volume) },
        })
        .collect();
    Ok(ModularityReport { q, blocks })
}

/// Exact optimum over all set partitions, enumerated as restricted growth
/// strings. Ties go to fewer blocks, then to the lexicographically first
/// growth string.
pub fn brute_force_qstar(g: &MultiGraph, n_limit: usize) -> Result<(f64, VertexPartition)> {
    let n = g.n();
    if n > n_limit {
        return Err(Error::TooLarge { n, limit: n_limit });
    }
    if n == 0 {
        return Ok((0.0, VertexPartition::whole(0)));
    }
    let m = g.m() as u64;
    let mut rgs = vec![0usize; n];
    let mut prefix_max = vec![0usize; n];
    let mut best: Option<(i128, usize, Vec<usize>)> = None;
    let mut e = vec![0u64; n];
    let mut vol = vec![0u64; n];
    loop {
        let blocks = prefix_max[n - 1] + 1;
        e[..blocks].iter_mut().for_each(|x| *x = 0);
        vol[..blocks].iter_mut().for_each(|x| *x = 0);
        for (v, &b) in rgs.iter().enumerate() {
            vol[b] += g.degree(v) as u64;
        }
        for &(u, v) in g.edges() {
            if rgs[u] == rgs[v] {
                e[rgs[u]] += 1;
            }
        }
        let num = score_numerator(m, e[..blocks].iter().copied().zip(vol[..blocks].iter().copied()));
        let better = match &best {
            None => true,
            Some((bn, bk, _)) => num > *bn || (num == *bn && blocks < *bk),
        };
        if better {
            best = Some((num, blocks, rgs.clone()));
        }
        // next restricted growth string
        let mut i = n - 1;
        loop {
            if i == 0 {
                let (num, _, labels) = best.expect("at least one partition");
                return Ok((q_from_numerator(m, num), VertexPartition::from_labels(&labels)));
            }
            if rgs[i] <= prefix_max[i - 1] {
                rgs[i] += 1;
                prefix_max[i] = prefix_max[i - 1].max(rgs[i]);
                for j in i + 1..n {
                    rgs[j] = 0;
                    prefix_max[j] = prefix_max[i];
                }
                break;
            }
            i -= 1;
        }
    }
}

/// Split a tree into subtrees of order between `floor(sqrt(size_ref_n))` and
/// `max_degree * ceil(sqrt(size_ref_n))`.
///
/// `vertices` are host ids and `tree_edges` host-id pairs forming a spanning
/// tree on them. While a piece is too large it is cut at the edge maximizing
/// the smaller side, ties broken by position in `tree_edges`.
pub fn split_tree(
    vertices: &[usize],
    tree_edges: &[(usize, usize)],
    max_degree: usize,
    size_ref_n: usize,
) -> Result<Vec<Vec<usize>>> {
    let k = vertices.len();
    if k == 0 {
        return Ok(Vec::new());
    }
    if tree_edges.len() + 1 != k {
        return Err(Error::NotATree(format!("{} vertices but {} edges", k, tree_edges.len())));
    }
    let min_size = floor_sqrt(size_ref_n);
    if k < min_size {
        return Err(Error::TreeTooSmall { order: k, min: min_size });
    }
    let cap = max_degree.max(1) * ceil_sqrt(size_ref_n);
    let local: HashMap<usize, usize> = vertices.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let mut adj: Vec<Vec<(usize, usize)>> = vec![Vec::new(); k];
    for (idx, &(u, v)) in tree_edges.iter().enumerate() {
        let lu = *local.get(&u).ok_or_else(|| Error::NotATree(format!("edge endpoint {u} not in vertex set")))?;
        let lv = *local.get(&v).ok_or_else(|| Error::NotATree(format!("edge endpoint {v} not in vertex set")))?;
        if lu == lv {
            return Err(Error::NotATree(format!("loop at {u}")));
        }
        adj[lu].push((lv, idx));
        adj[lv].push((lu, idx));
    }

    let mut cut = vec![false; tree_edges.len()];
    let mut visited_in = vec![usize::MAX; k];
    let mut parent_edge = vec![usize::MAX; k];
    let mut size = vec![0usize; k];
    let mut out = Vec::new();
    let mut roots = vec![0usize];
    let mut total_seen = 0;
    let mut stamp = 0;
    while let Some(root) = roots.pop() {
        stamp += 1;
        let mut order = vec![root];
        visited_in[root] = stamp;
        parent_edge[root] = usize::MAX;
        let mut i = 0;
        while i < order.len() {
            let u = order[i];
            i += 1;
            for &(w, e) in &adj[u] {
                if cut[e] || e == parent_edge[u] {
                    continue;
                }
                if visited_in[w] == stamp {
                    return Err(Error::NotATree("cycle detected".into()));
                }
                visited_in[w] = stamp;
                parent_edge[w] = e;
                order.push(w);
            }
        }
        let piece = order.len();
        if piece <= cap {
            total_seen += piece;
            let mut block: Vec<usize> = order.iter().map(|&l| vertices[l]).collect();
            block.sort_unstable();
            out.push(block);
            continue;
        }
        for &u in order.iter().rev() {
            size[u] = 1 + adj[u]
                .iter()
                .filter(|&&(w, e)| !cut[e] && e != parent_edge[u] && parent_edge[w] == e)
                .map(|&(w, _)| size[w])
                .sum::<usize>();
        }
        let mut best: Option<(usize, usize, usize)> = None;
        for &u in &order[1..] {
            let s = size[u].min(piece - size[u]);
            let e = parent_edge[u];
            let better = match best {
                None => true,
                Some((bs, be, _)) => s > bs || (s == bs && e < be),
            };
            if better {
                best = Some((s, e, u));
            }
        }
        let (_, e, child) = best.expect("piece has an edge");
        cut[e] = true;
        roots.push(child);
        roots.push(root);
    }
    if total_seen != k {
        return Err(Error::NotATree("graph is disconnected".into()));
    }
    out.sort_unstable_by_key(|b| b[0]);
    Ok(out)
}

/// Partition a tree into subtrees with orders in the window
/// `[floor(sqrt(size_ref_n)), max_degree * ceil(sqrt(size_ref_n))]`.
pub fn tree_partition(tree: &MultiGraph, size_ref_n: usize) -> Result<VertexPartition> {
    let vertices: Vec<usize> = (0..tree.n()).collect();
    let blocks = split_tree(&vertices, tree.edges(), tree.max_degree(), size_ref_n)?;
    Ok(VertexPartition::from_blocks_unchecked(tree.n(), blocks))
}

/// BFS spanning tree of the component of `root`, restricted to `mask`.
pub fn bfs_spanning_tree(g: &MultiGraph, root: usize, mask: &[bool]) -> (Vec<usize>, Vec<(usize, usize)>) {
    let mut seen = HashMap::new();
    let mut queue = VecDeque::from([root]);
    seen.insert(root, ());
    let mut vertices = Vec::new();
    let mut edges = Vec::new();
    while let Some(u) = queue.pop_front() {
        vertices.push(u);
        for w in g.neighbors(u) {
            if mask[w] && !seen.contains_key(&w) {
                seen.insert(w, ());
                edges.push((u, w));
                queue.push_back(w);
            }
        }
    }
    (vertices, edges)
}

/// Blocks for the vertices of `mask`: one per connected component of the
/// induced subgraph, except that components with more than
/// `max_degree * ceil(sqrt(size_ref_n))` vertices are cut along a BFS spanning
/// tree rooted at their smallest vertex.
pub fn split_components(
    g: &MultiGraph,
    mask: &[bool],
    max_degree: usize,
    size_ref_n: usize,
) -> Result<Vec<Vec<usize>>> {
    let cap = max_degree.max(1) * ceil_sqrt(size_ref_n);
    let mut seen = vec![false; g.n()];
    let mut out = Vec::new();
    for s in 0..g.n() {
        if !mask[s] || seen[s] {
            continue;
        }
        let (comp, tree) = bfs_spanning_tree(g, s, mask);
        for &v in &comp {
            seen[v] = true;
        }
        if comp.len() > cap {
            out.extend(split_tree(&comp, &tree, max_degree, size_ref_n)?);
        } else {
            let mut c = comp;
            c.sort_unstable();
            out.push(c);
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BaselineReport {
    pub partition: VertexPartition,
    pub q: f64,
    pub guarantee: f64,
    pub components: usize,
}

/// Component partition with oversized components cut into subtrees, scored,
/// together with the guaranteed lower bound
/// `2(n-|CC|)/(dn) - D^3 ceil(sqrt n)/(n d^2) - 2(2/d)/sqrt(n)` where `d` is the
/// average and `D` the maximum degree.
pub fn component_baseline(g: &MultiGraph) -> Result<BaselineReport> {
    let n = g.n();
    if let Some(v) = (0..n).find(|&v| g.degree(v) == 0) {
        return Err(Error::IsolatedVertex(v));
    }
    let max_deg = g.max_degree();
    let blocks = split_components(g, &vec![true; n], max_deg, n)?;
    let components = crate::graph::connected_components(g).len();
    let partition = VertexPartition::from_blocks_unchecked(n, blocks);
    let q = modularity(g, &partition)?;
    let nf = n as f64;
    let d = 2.0 * g.m() as f64 / nf;
    let delta = max_deg as f64;
    let guarantee = 2.0 * (nf - components as f64) / (d * nf)
        - delta.powi(3) * ceil_sqrt(n) as f64 / (nf * d * d)
        - 2.0 * (2.0 / d) / nf.sqrt();
    if q + 1e-12 < guarantee {
        return Err(Error::Internal(format!("baseline {q} below guarantee {guarantee}")));
    }
    Ok(BaselineReport { partition, q, guarantee, components })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two_triangles() -> MultiGraph {
        MultiGraph::from_edges(6, vec![(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3)]).unwrap()
    }

    fn path(n: usize) -> MultiGraph {
        MultiGraph::from_edges(n, (1..n).map(|i| (i - 1, i)).collect()).unwrap()
    }

    #[test]
    fn sqrt_helpers() {
        for n in 0..2000 {
            let f = floor_sqrt(n);
            assert!(f * f <= n && (f + 1) * (f + 1) > n);
            let c = ceil_sqrt(n);
            assert!(c * c >= n && (c == 0 || (c - 1) * (c - 1) < n));
        }
    }

    #[test]
    fn block_stats_examples() {
        let tri = MultiGraph::from_edges(3, vec![(0, 1), (1, 2), (2, 0)]).unwrap();
        assert_eq!(block_stats(&tri, &[0, 1, 2]).unwrap(), (3, 6));
        let k2 = path(2);
        assert_eq!(block_stats(&k2, &[0]).unwrap(), (0, 1));
        let lp = MultiGraph::from_edges(1, vec![(0, 0)]).unwrap();
        assert_eq!(block_stats(&lp, &[0]).unwrap(), (1, 2));
        assert!(matches!(block_stats(&k2, &[3]), Err(Error::VertexOutOfRange { .. })));
    }

    #[test]
    fn modularity_examples() {
        let g = two_triangles();
        assert_eq!(modularity(&g, &VertexPartition::whole(6)).unwrap(), 0.0);
        let p = VertexPartition::new(6, vec![vec![0, 1, 2], vec![3, 4, 5]]).unwrap();
        assert!((modularity(&g, &p).unwrap() - 0.5).abs() < 1e-15);
        assert_eq!(modularity(&MultiGraph::empty(4), &VertexPartition::singletons(4)).unwrap(), 0.0);
        assert!((relative_modularity(&g, &[0, 1, 2]).unwrap() - 0.5).abs() < 1e-15);
        assert!(relative_modularity(&g, &(0..6).collect::<Vec<_>>()).unwrap().abs() < 1e-15);
        assert_eq!(relative_modularity(&path(2), &[0, 1]).unwrap(), 0.0);
        assert_eq!(relative_modularity(&g, &[]), Err(Error::EmptyBlock));
        assert!(modularity(&g, &VertexPartition::whole(5)).is_err());
    }

    #[test]
    fn report_matches_weighted_average() {
        let g = two_triangles();
        let p = VertexPartition::new(6, vec![vec![0, 1], vec![2, 3], vec![4, 5]]).unwrap();
        let r = modularity_report(&g, &p).unwrap();
        let avg: f64 = r.blocks.iter().map(|b| b.size as f64 / 6.0 * b.qr).sum();
        assert!((r.q - avg).abs() < 1e-12);
    }

    #[test]
    fn brute_force_examples() {
        let (q, p) = brute_force_qstar(&path(2), 10).unwrap();
        assert_eq!(q, 0.0);
        assert_eq!(p.len(), 1);
        let tri = MultiGraph::from_edges(3, vec![(0, 1), (1, 2), (2, 0)]).unwrap();
        let (q, p) = brute_force_qstar(&tri, 10).unwrap();
        assert_eq!((q, p.len()), (0.0, 1));
        let (q, p) = brute_force_qstar(&path(4), 10).unwrap();
        assert!((q - 1.0 / 6.0).abs() < 1e-15);
        assert_eq!(p.blocks(), &[vec![0, 1], vec![2, 3]]);
        let (q, _) = brute_force_qstar(&two_triangles(), 10).unwrap();
        assert!((q - 0.5).abs() < 1e-15);
        assert_eq!(brute_force_qstar(&path(11), 10), Err(Error::TooLarge { n: 11, limit: 10 }));
        let (q, p) = brute_force_qstar(&MultiGraph::empty(3), 10).unwrap();
        assert_eq!((q, p.len()), (0.0, 1));
    }

    #[test]
    fn tree_partition_path16() {
        let p = tree_partition(&path(16), 16).unwrap();
        for b in p.blocks() {
            assert!((4..=8).contains(&b.len()), "{b:?}");
            assert!(b.windows(2).all(|w| w[1] == w[0] + 1));
        }
        assert_eq!(p.blocks().iter().map(Vec::len).sum::<usize>(), 16);
    }

    #[test]
    fn tree_partition_small_and_errors() {
        assert_eq!(tree_partition(&path(5), 16).unwrap().len(), 1);
        assert!(matches!(tree_partition(&path(3), 16), Err(Error::TreeTooSmall { .. })));
        let c = MultiGraph::from_edges(4, vec![(0, 1), (1, 2), (2, 0), (2, 3)]).unwrap();
        assert!(matches!(tree_partition(&c, 4), Err(Error::NotATree(_))));
        let forest = MultiGraph::from_edges(4, vec![(0, 1), (0, 1), (2, 3)]).unwrap();
        assert!(matches!(tree_partition(&forest, 4), Err(Error::NotATree(_))));
    }

    #[test]
    fn baseline_examples() {
        let r = component_baseline(&two_triangles()).unwrap();
        assert_eq!(r.partition.blocks(), &[vec![0, 1, 2], vec![3, 4, 5]]);
        assert!((r.q - 0.5).abs() < 1e-15);

        let n = 100;
        let matching = MultiGraph::from_edges(n, (0..n / 2).map(|i| (2 * i, 2 * i + 1)).collect()).unwrap();
        let r = component_baseline(&matching).unwrap();
        assert_eq!(r.partition.len(), 50);
        assert!((r.q - 0.98).abs() < 1e-12);

        let iso = MultiGraph::from_edges(3, vec![(0, 1)]).unwrap();
        assert_eq!(component_baseline(&iso).unwrap_err(), Error::IsolatedVertex(2));
    }
}
