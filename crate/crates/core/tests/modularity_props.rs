use modcert_core::modularity::{
    block_stats, brute_force_qstar, ceil_sqrt, component_baseline, floor_sqrt, modularity, relative_modularity,
    tree_partition, DEFAULT_BRUTE_FORCE_LIMIT,
};
use modcert_core::rng::rng_from_seed;
use modcert_core::{MultiGraph, VertexPartition};
use proptest::prelude::*;
use rand::Rng;

fn graph_with_labels(max_n: usize) -> impl Strategy<Value = (MultiGraph, Vec<usize>)> {
    (2usize..=max_n).prop_flat_map(|n| {
        (prop::collection::vec((0..n, 0..n), 1..=3 * n), prop::collection::vec(0..n, n))
            .prop_map(move |(edges, labels)| (MultiGraph::from_edges(n, edges).unwrap(), labels))
    })
}

fn cross_edges(g: &MultiGraph, a: &[usize], b: &[usize]) -> u64 {
    let mut side = vec![0u8; g.n()];
    a.iter().for_each(|&v| side[v] = 1);
    b.iter().for_each(|&v| side[v] = 2);
    g.edges().iter().filter(|&&(u, v)| side[u] * side[v] == 2).count() as u64
}

/// Tree on `n` vertices with maximum degree 3: each new vertex attaches to a
/// uniform earlier vertex that still has room.
fn random_cubic_tree(n: usize, seed: u64) -> MultiGraph {
    let mut rng = rng_from_seed(seed);
    let mut degree = vec![0usize; n];
    let mut open = vec![0usize];
    let mut edges = Vec::with_capacity(n - 1);
    for v in 1..n {
        let i = rng.gen_range(0..open.len());
        let parent = open[i];
        edges.push((parent, v));
        degree[parent] += 1;
        degree[v] += 1;
        if degree[parent] == 3 {
            open.swap_remove(i);
        }
        open.push(v);
    }
    MultiGraph::from_edges(n, edges).unwrap()
}

fn block_is_connected(g: &MultiGraph, block: &[usize]) -> bool {
    let mut inside = vec![false; g.n()];
    block.iter().for_each(|&v| inside[v] = true);
    let mut seen = vec![false; g.n()];
    let mut stack = vec![block[0]];
    seen[block[0]] = true;
    let mut reached = 1;
    while let Some(u) = stack.pop() {
        for w in g.neighbors(u) {
            if inside[w] && !seen[w] {
                seen[w] = true;
                reached += 1;
                stack.push(w);
            }
        }
    }
    reached == block.len()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn modularity_is_weighted_relative_modularity((g, labels) in graph_with_labels(30)) {
        let p = VertexPartition::from_labels(&labels);
        let q = modularity(&g, &p).unwrap();
        let n = g.n() as f64;
        let avg: f64 = p
            .blocks()
            .iter()
            .map(|b| b.len() as f64 / n * relative_modularity(&g, b).unwrap())
            .sum();
        prop_assert!((q - avg).abs() < 1e-12, "q {} vs weighted {}", q, avg);
        prop_assert!((-0.5..=1.0).contains(&q));
    }

    #[test]
    fn merging_blocks_changes_q_by_the_pair_term((g, labels) in graph_with_labels(30), pick in any::<(usize, usize)>()) {
        let p = VertexPartition::from_labels(&labels);
        prop_assume!(p.len() >= 2);
        let i = pick.0 % p.len();
        let j = (i + 1 + pick.1 % (p.len() - 1)) % p.len();
        let merged = p.merge(i, j);
        let m = g.m() as f64;
        let (bi, bj) = (&p.blocks()[i], &p.blocks()[j]);
        let (_, vi) = block_stats(&g, bi).unwrap();
        let (_, vj) = block_stats(&g, bj).unwrap();
        let expected = cross_edges(&g, bi, bj) as f64 / m - (vi * vj) as f64 / (2.0 * m * m);
        let delta = modularity(&g, &merged).unwrap() - modularity(&g, &p).unwrap();
        prop_assert!((delta - expected).abs() < 1e-12, "delta {} expected {}", delta, expected);
    }

    #[test]
    fn exhaustive_optimum_dominates((g, labels) in graph_with_labels(7)) {
        let (qstar, best) = brute_force_qstar(&g, DEFAULT_BRUTE_FORCE_LIMIT).unwrap();
        prop_assert!(qstar >= -1e-15);
        prop_assert!((modularity(&g, &best).unwrap() - qstar).abs() < 1e-12);
        for p in [VertexPartition::from_labels(&labels), VertexPartition::whole(g.n()), VertexPartition::singletons(g.n())] {
            prop_assert!(qstar + 1e-12 >= modularity(&g, &p).unwrap());
        }
    }

    #[test]
    fn tree_blocks_fit_the_window(seed in any::<u64>()) {
        let n = 200;
        let tree = random_cubic_tree(n, seed);
        let p = tree_partition(&tree, n).unwrap();
        let (lo, hi) = (floor_sqrt(n), tree.max_degree() * ceil_sqrt(n));
        prop_assert_eq!((lo, 3 * ceil_sqrt(n)), (14, 45));
        let mut covered = vec![false; n];
        for b in p.blocks() {
            prop_assert!(b.len() >= lo && b.len() <= hi, "block of order {}", b.len());
            prop_assert!(block_is_connected(&tree, b));
            b.iter().for_each(|&v| covered[v] = true);
        }
        prop_assert!(covered.iter().all(|&c| c));
    }
}

#[test]
fn long_cycle_path_splits_into_window() {
    let n = 10_000;
    let path = MultiGraph::from_edges(n, (0..n - 1).map(|i| (i, i + 1)).collect()).unwrap();
    let p = tree_partition(&path, n).unwrap();
    for b in p.blocks() {
        assert!((100..=200).contains(&b.len()), "block of order {}", b.len());
        assert!(block_is_connected(&path, b));
    }
    assert_eq!(p.blocks().iter().map(Vec::len).sum::<usize>(), n);
}

#[test]
fn baseline_on_a_cycle() {
    let n = 10_000;
    let cycle = MultiGraph::from_edges(n, (0..n).map(|i| (i, (i + 1) % n)).collect()).unwrap();
    let report = component_baseline(&cycle).unwrap();
    assert_eq!(report.components, 1);
    assert!(report.q >= report.guarantee, "{} < {}", report.q, report.guarantee);
    assert!(report.q > 0.97, "q {}", report.q);
    for b in report.partition.blocks() {
        assert!((100..=200).contains(&b.len()));
    }
}

#[test]
fn two_triangles_score_one_half() {
    let g = MultiGraph::from_edges(6, vec![(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)]).unwrap();
    let p = VertexPartition::new(6, vec![vec![0, 1, 2], vec![3, 4, 5]]).unwrap();
    assert!((modularity(&g, &p).unwrap() - 0.5).abs() < 1e-15);
    let (qstar, best) = brute_force_qstar(&g, DEFAULT_BRUTE_FORCE_LIMIT).unwrap();
    assert!((qstar - 0.5).abs() < 1e-15);
    assert_eq!(best.canonical(), p);
}
