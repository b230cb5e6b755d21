//! Vertex partitions.

use serde::Serialize;

use crate::error::{Error, Result};

/// Disjoint nonempty blocks covering `0..n`. Vertices inside a block are kept
/// sorted; block order is whatever the producer chose.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VertexPartition {
    n: usize,
    blocks: Vec<Vec<usize>>,
}

impl VertexPartition {
    pub fn new(n: usize, blocks: Vec<Vec<usize>>) -> Result<Self> {
        let mut seen = vec![false; n];
        let mut covered = 0;
        for b in &blocks {
            if b.is_empty() {
                return Err(Error::EmptyBlock);
            }
            for &v in b {
                if v >= n {
                    return Err(Error::VertexOutOfRange { vertex: v, n });
                }
                if seen[v] {
                    return Err(Error::InvalidPartition(format!("vertex {v} in two blocks")));
                }
                seen[v] = true;
                covered += 1;
            }
        }
        if covered != n {
            let missing = seen.iter().position(|&s| !s).unwrap_or(0);
            return Err(Error::InvalidPartition(format!("vertex {missing} not covered")));
        }
        Ok(Self::from_blocks_unchecked(n, blocks))
    }

    pub(crate) fn from_blocks_unchecked(n: usize, mut blocks: Vec<Vec<usize>>) -> Self {
        for b in &mut blocks {
            b.sort_unstable();
        }
        VertexPartition { n, blocks }
    }

    /// Partition from a block label per vertex. Blocks are numbered by first
    /// appearance.
    pub fn from_labels(labels: &[usize]) -> Self {
        let mut remap = std::collections::HashMap::new();
        let mut blocks: Vec<Vec<usize>> = Vec::new();
        for (v, &l) in labels.iter().enumerate() {
            let idx = *remap.entry(l).or_insert_with(|| {
                blocks.push(Vec::new());
                blocks.len() - 1
            });
            blocks[idx].push(v);
        }
        VertexPartition { n: labels.len(), blocks }
    }

    pub fn whole(n: usize) -> Self {
        if n == 0 {
            return VertexPartition { n, blocks: Vec::new() };
        }
        VertexPartition { n, blocks: vec![(0..n).collect()] }
    }

    pub fn singletons(n: usize) -> Self {
        VertexPartition { n, blocks: (0..n).map(|v| vec![v]).collect() }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn into_blocks(self) -> Vec<Vec<usize>> {
        self.blocks
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    /// Block index of every vertex.
    pub fn labels(&self) -> Vec<usize> {
        let mut out = vec![0; self.n];
        for (i, b) in self.blocks.iter().enumerate() {
            for &v in b {
                out[v] = i;
            }
        }
        out
    }

    /// Same partition with blocks ordered by their smallest vertex.
    pub fn canonical(&self) -> Self {
        let mut blocks = self.blocks.clone();
        blocks.sort_unstable_by_key(|b| b[0]);
        VertexPartition { n: self.n, blocks }
    }

    /// Union of blocks `i` and `j` (`i != j`); the merged block takes index `min(i, j)`.
    pub fn merge(&self, i: usize, j: usize) -> Self {
        let (lo, hi) = (i.min(j), i.max(j));
        let mut blocks = self.blocks.clone();
        let taken = blocks.remove(hi);
        blocks[lo].extend(taken);
        blocks[lo].sort_unstable();
        VertexPartition { n: self.n, blocks }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validation() {
        assert!(VertexPartition::new(3, vec![vec![0, 2], vec![1]]).is_ok());
        assert_eq!(VertexPartition::new(3, vec![vec![0, 2], vec![]]), Err(Error::EmptyBlock));
        assert!(matches!(VertexPartition::new(3, vec![vec![0, 1], vec![1, 2]]), Err(Error::InvalidPartition(_))));
        assert!(matches!(VertexPartition::new(3, vec![vec![0, 1]]), Err(Error::InvalidPartition(_))));
        assert!(matches!(VertexPartition::new(2, vec![vec![0, 1, 5]]), Err(Error::VertexOutOfRange { .. })));
    }

    #[test]
    fn labels_round_trip() {
        let p = VertexPartition::from_labels(&[4, 4, 1, 4, 1, 9]);
        assert_eq!(p.blocks(), &[vec![0, 1, 3], vec![2, 4], vec![5]]);
        assert_eq!(VertexPartition::from_labels(&p.labels()), p);
        assert_eq!(p.merge(2, 0).blocks(), &[vec![0, 1, 3, 5], vec![2, 4]]);
    }
}
