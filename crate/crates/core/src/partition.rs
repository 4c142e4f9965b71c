//! Equivalence relations on `0..n` stored as disjoint blocks.
//!
//! A block is identified by its smallest member, so block ids are stable
//! under refinement of other blocks and independent of construction order.

use std::collections::HashMap;
use std::hash::Hash;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PartitionError {
    #[error("element {0} is out of range")]
    OutOfRange(usize),
    #[error("element {0} occurs in more than one block")]
    Overlapping(usize),
    #[error("element {0} is not covered by any block")]
    Uncovered(usize),
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Partition {
    /// Canonical block id (smallest member) of every element.
    block_of: Vec<usize>,
    /// Blocks ordered by smallest member, members ascending.
    blocks: Vec<Vec<usize>>,
}

impl Partition {
    /// Groups `0..keys.len()` by equality of `keys`.
    pub fn from_keys<K: Hash + Eq>(keys: &[K]) -> Self {
        let mut first: HashMap<&K, usize> = HashMap::with_capacity(keys.len());
        let block_of: Vec<usize> = keys.iter().enumerate().map(|(i, k)| *first.entry(k).or_insert(i)).collect();
        Self::from_block_of(block_of)
    }

    fn from_block_of(block_of: Vec<usize>) -> Self {
        let mut slot = vec![usize::MAX; block_of.len()];
        let mut blocks: Vec<Vec<usize>> = Vec::new();
        for (x, &b) in block_of.iter().enumerate() {
            if slot[b] == usize::MAX {
                slot[b] = blocks.len();
                blocks.push(Vec::new());
            }
            blocks[slot[b]].push(x);
        }
        Partition { block_of, blocks }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_block_of((0..n).collect())
    }

    /// One block containing everything (no blocks when `n == 0`).
    pub fn single_block(n: usize) -> Self {
        Self::from_block_of(vec![0; n])
    }

    /// Strict construction: blocks must be nonempty, disjoint and cover `0..n`.
    pub fn from_blocks(
        n: usize,
        blocks: impl IntoIterator<Item = impl IntoIterator<Item = usize>>,
    ) -> Result<Self, PartitionError> {
        let mut block_of = vec![usize::MAX; n];
        for block in blocks {
            let members: Vec<usize> = block.into_iter().collect();
            let Some(&min) = members.iter().min() else { continue };
            for &x in &members {
                if x >= n {
                    return Err(PartitionError::OutOfRange(x));
                }
                if block_of[x] != usize::MAX {
                    return Err(PartitionError::Overlapping(x));
                }
                block_of[x] = min;
            }
        }
        if let Some(x) = block_of.iter().position(|&b| b == usize::MAX) {
            return Err(PartitionError::Uncovered(x));
        }
        Ok(Self::from_block_of(block_of))
    }

    /// Size of the carrier.
    pub fn len(&self) -> usize {
        self.block_of.len()
    }

    pub fn is_empty(&self) -> bool {
        self.block_of.is_empty()
    }

    pub fn num_blocks(&self) -> usize {
        self.blocks.len()
    }

    /// Canonical block id of `x`: the smallest member of its block.
    pub fn block_of(&self, x: usize) -> usize {
        self.block_of[x]
    }

    pub fn same_block(&self, x: usize, y: usize) -> bool {
        self.block_of[x] == self.block_of[y]
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    /// Members of the block with canonical id `id`.
    pub fn block(&self, id: usize) -> &[usize] {
        let pos = self.blocks.partition_point(|b| b[0] < id);
        &self.blocks[pos]
    }

    /// True iff every block of `self` lies inside a block of `coarser`.
    pub fn refines(&self, coarser: &Partition) -> bool {
        self.len() == coarser.len() && self.blocks.iter().all(|b| b.iter().all(|&x| coarser.same_block(x, b[0])))
    }

    /// Finest partition coarser than both: transitive closure of the union.
    pub fn join(&self, other: &Partition) -> Partition {
        assert_eq!(self.len(), other.len(), "join of partitions over different carriers");
        let mut parent: Vec<usize> = (0..self.len()).collect();
        fn find(parent: &mut [usize], mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        for p in [self, other] {
            for b in &p.blocks {
                for &x in &b[1..] {
                    let (rx, rb) = (find(&mut parent, x), find(&mut parent, b[0]));
                    if rx != rb {
                        parent[rx.max(rb)] = rx.min(rb);
                    }
                }
            }
        }
        let roots: Vec<usize> = (0..self.len()).map(|x| find(&mut parent, x)).collect();
        Partition::from_keys(&roots)
    }

    /// Splits every block by the key of its members; ids stay canonical.
    pub fn refine_by<K: Hash + Eq>(&self, keys: &[K]) -> Partition {
        let pairs: Vec<(usize, &K)> = (0..self.len()).map(|x| (self.block_of[x], &keys[x])).collect();
        Partition::from_keys(&pairs)
    }

    /// Restriction to a permuted carrier: element `i` of the result is
    /// element `perm[i]` of `self`.
    pub fn permuted(&self, perm: &[usize]) -> Partition {
        let keys: Vec<usize> = perm.iter().map(|&x| self.block_of[x]).collect();
        Partition::from_keys(&keys)
    }
}

impl std::fmt::Debug for Partition {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_set().entries(self.blocks.iter()).finish()
    }
}

/// All set partitions of `0..n` via restricted growth strings
/// (`Bell(n)` of them).
pub fn all_partitions(n: usize) -> AllPartitions {
    AllPartitions { rgs: vec![0; n], max: vec![0; n], done: false }
}

pub struct AllPartitions {
    rgs: Vec<usize>,
    /// `max[i]` = largest value among `rgs[..i]`.
    max: Vec<usize>,
    done: bool,
}

impl Iterator for AllPartitions {
    type Item = Partition;

    fn next(&mut self) -> Option<Partition> {
        if self.done {
            return None;
        }
        let current = Partition::from_keys(&self.rgs);
        let n = self.rgs.len();
        // Advance: find the rightmost position that may still grow.
        let mut i = n;
        loop {
            if i <= 1 {
                self.done = true;
                break;
            }
            i -= 1;
            if self.rgs[i] <= self.max[i] {
                self.rgs[i] += 1;
                for j in i + 1..n {
                    self.rgs[j] = 0;
                    self.max[j] = self.max[j - 1].max(self.rgs[j - 1]);
                }
                break;
            }
        }
        Some(current)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn canonical_block_ids() {
        let p = Partition::from_keys(&['b', 'a', 'b', 'c', 'a']);
        assert_eq!(p.blocks(), &[vec![0, 2], vec![1, 4], vec![3]]);
        assert_eq!((0..5).map(|x| p.block_of(x)).collect::<Vec<_>>(), vec![0, 1, 0, 3, 1]);
        assert_eq!(p.block(1), &[1, 4]);
    }

    #[test]
    fn from_blocks_checks_shape() {
        let p = Partition::from_blocks(3, [vec![2, 0], vec![1]]).unwrap();
        assert_eq!(p.blocks(), &[vec![0, 2], vec![1]]);
        assert_eq!(Partition::from_blocks(3, [vec![0, 1], vec![1, 2]]), Err(PartitionError::Overlapping(1)));
        assert_eq!(Partition::from_blocks(3, [vec![0, 1]]), Err(PartitionError::Uncovered(2)));
        assert_eq!(Partition::from_blocks(2, [vec![0, 5]]), Err(PartitionError::OutOfRange(5)));
    }

    #[test]
    fn bell_numbers() {
        let bell = [1, 1, 2, 5, 15, 52, 203, 877];
        for (n, &b) in bell.iter().enumerate() {
            let all: Vec<Partition> = all_partitions(n).collect();
            assert_eq!(all.len(), b, "Bell({n})");
            let distinct: std::collections::HashSet<_> = all.iter().collect();
            assert_eq!(distinct.len(), b);
        }
    }

    #[test]
    fn join_and_refines() {
        let a = Partition::from_blocks(4, [vec![0, 1], vec![2], vec![3]]).unwrap();
        let b = Partition::from_blocks(4, [vec![0], vec![1, 2], vec![3]]).unwrap();
        let j = a.join(&b);
        assert_eq!(j.blocks(), &[vec![0, 1, 2], vec![3]]);
        assert!(a.refines(&j) && b.refines(&j));
        assert!(!j.refines(&a));
        assert!(Partition::identity(4).refines(&a));
        assert!(a.refines(&Partition::single_block(4)));
    }

    proptest! {
        #[test]
        fn from_keys_is_well_formed(keys in prop::collection::vec(0u8..4, 0..12)) {
            let p = Partition::from_keys(&keys);
            let mut seen = vec![false; keys.len()];
            for b in p.blocks() {
                prop_assert!(!b.is_empty());
                prop_assert!(b.windows(2).all(|w| w[0] < w[1]));
                for &x in b {
                    prop_assert!(!seen[x]);
                    seen[x] = true;
                    prop_assert_eq!(p.block_of(x), b[0]);
                    prop_assert_eq!(keys[x], keys[b[0]]);
                }
            }
            prop_assert!(seen.into_iter().all(|s| s));
            prop_assert!(p.blocks().windows(2).all(|w| w[0][0] < w[1][0]));
        }

        #[test]
        fn refine_by_refines(keys in prop::collection::vec(0u8..3, 1..10), more in prop::collection::vec(0u8..3, 10)) {
            let p = Partition::from_keys(&keys);
            let q = p.refine_by(&more[..keys.len()]);
            prop_assert!(q.refines(&p));
        }
    }
}
