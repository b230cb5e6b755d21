//! An unordered pool of ids with O(1) uniform draw and O(1) removal by value.

use rand::Rng;

#[derive(Debug, Clone)]
pub struct IndexedPool {
    items: Vec<usize>,
    pos: Vec<usize>,
}

const ABSENT: usize = usize::MAX;

impl IndexedPool {
    /// Pool holding every id in `0..len`.
    pub fn full(len: usize) -> Self {
        IndexedPool { items: (0..len).collect(), pos: (0..len).collect() }
    }

    /// Empty pool able to hold ids in `0..capacity`.
    pub fn empty(capacity: usize) -> Self {
        IndexedPool { items: Vec::new(), pos: vec![ABSENT; capacity] }
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn contains(&self, id: usize) -> bool {
        self.pos[id] != ABSENT
    }

    pub fn insert(&mut self, id: usize) {
        if self.pos[id] == ABSENT {
            self.pos[id] = self.items.len();
            self.items.push(id);
        }
    }

    pub fn remove(&mut self, id: usize) -> bool {
        let p = self.pos[id];
        if p == ABSENT {
            return false;
        }
        let last = self.items.pop().expect("pool non-empty");
        if last != id {
            self.items[p] = last;
            self.pos[last] = p;
        }
        self.pos[id] = ABSENT;
        true
    }

    /// Uniform draw without removal.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Option<usize> {
        if self.items.is_empty() {
            None
        } else {
            Some(self.items[rng.gen_range(0..self.items.len())])
        }
    }

    /// Uniform draw with removal.
    pub fn take<R: Rng + ?Sized>(&mut self, rng: &mut R) -> Option<usize> {
        let id = self.sample(rng)?;
        self.remove(id);
        Some(id)
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.items.iter().copied()
    }
}
