use crate::error::{Error, Result};

/// An equivalence relation on `{0..n-1}` stored as a block label per index.
///
/// Labels are canonical: block 0 contains index 0, block 1 contains the
/// smallest index not in block 0, and so on. Two partitions are therefore
/// equal iff their label vectors are equal.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Partition {
    block_of: Vec<usize>,
    num_blocks: usize,
}

impl Partition {
    /// Canonicalises an arbitrary labelling: indices with equal labels share
    /// a block.
    pub fn from_labels<T: PartialEq>(labels: &[T]) -> Self {
        let mut block_of = vec![usize::MAX; labels.len()];
        let mut next = 0;
        for i in 0..labels.len() {
            if block_of[i] != usize::MAX {
                continue;
            }
            for j in i..labels.len() {
                if block_of[j] == usize::MAX && labels[j] == labels[i] {
                    block_of[j] = next;
                }
            }
            next += 1;
        }
        Partition {
            block_of,
            num_blocks: next,
        }
    }

    /// Builds a partition of `{0..n-1}` from explicit 0-based blocks, which
    /// must be nonempty, disjoint and cover every index.
    pub fn from_blocks(n: usize, blocks: &[Vec<usize>]) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidPartition("n must be at least 1".into()));
        }
        let mut labels = vec![usize::MAX; n];
        for (b, block) in blocks.iter().enumerate() {
            if block.is_empty() {
                return Err(Error::InvalidPartition(format!("block {} is empty", b + 1)));
            }
            for &i in block {
                if i >= n {
                    return Err(Error::InvalidPartition(format!(
                        "index {} is outside 1..={n}",
                        i + 1
                    )));
                }
                if labels[i] != usize::MAX {
                    return Err(Error::InvalidPartition(format!(
                        "index {} appears in more than one block",
                        i + 1
                    )));
                }
                labels[i] = b;
            }
        }
        if let Some(i) = labels.iter().position(|&l| l == usize::MAX) {
            return Err(Error::InvalidPartition(format!(
                "index {} is not in any block",
                i + 1
            )));
        }
        Ok(Partition::from_labels(&labels))
    }

    /// Same as [`Partition::from_blocks`] with 1-based indices.
    pub fn from_one_based_blocks(n: usize, blocks: &[Vec<usize>]) -> Result<Self> {
        let mut zero = Vec::with_capacity(blocks.len());
        for block in blocks {
            let mut b = Vec::with_capacity(block.len());
            for &i in block {
                if i == 0 {
                    return Err(Error::InvalidPartition(format!(
                        "index 0 is outside 1..={n}"
                    )));
                }
                b.push(i - 1);
            }
            zero.push(b);
        }
        Partition::from_blocks(n, &zero)
    }

    /// Every index in its own block; block-wise operations then reduce to
    /// their index-wise versions.
    pub fn singletons(n: usize) -> Self {
        Partition {
            block_of: (0..n).collect(),
            num_blocks: n,
        }
    }

    pub fn single_block(n: usize) -> Self {
        Partition {
            block_of: vec![0; n],
            num_blocks: usize::from(n > 0),
        }
    }

    pub fn n(&self) -> usize {
        self.block_of.len()
    }

    pub fn num_blocks(&self) -> usize {
        self.num_blocks
    }

    #[inline]
    pub fn block_of(&self, i: usize) -> usize {
        self.block_of[i]
    }

    pub fn labels(&self) -> &[usize] {
        &self.block_of
    }

    #[inline]
    pub fn same_block(&self, i: usize, j: usize) -> bool {
        self.block_of[i] == self.block_of[j]
    }

    /// Blocks as sorted 0-based index lists, in block order.
    pub fn blocks(&self) -> Vec<Vec<usize>> {
        let mut blocks = vec![Vec::new(); self.num_blocks];
        for (i, &b) in self.block_of.iter().enumerate() {
            blocks[b].push(i);
        }
        blocks
    }

    /// Smallest index of each block.
    pub fn representatives(&self) -> Vec<usize> {
        self.blocks().iter().map(|b| b[0]).collect()
    }

    /// True when every block of `finer` lies inside a block of `self`.
    pub fn is_refined_by(&self, finer: &Partition) -> bool {
        self.n() == finer.n()
            && (0..self.n()).all(|i| {
                (0..self.n()).all(|j| !finer.same_block(i, j) || self.same_block(i, j))
            })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn blocks_are_numbered_by_smallest_member() {
        let p = Partition::from_one_based_blocks(4, &[vec![3], vec![4, 1], vec![2]]).unwrap();
        assert_eq!(p.labels(), &[0, 1, 2, 0]);
        assert_eq!(p.blocks(), vec![vec![0, 3], vec![1], vec![2]]);
        assert_eq!(p.representatives(), vec![0, 1, 2]);
        assert_eq!(Partition::from_labels(&['b', 'a', 'b']).labels(), &[0, 1, 0]);
    }

    #[test]
    fn invalid_blocks_are_rejected() {
        assert!(Partition::from_one_based_blocks(3, &[vec![1, 2]]).is_err());
        assert!(Partition::from_one_based_blocks(3, &[vec![1, 2], vec![2, 3]]).is_err());
        assert!(Partition::from_one_based_blocks(3, &[vec![1, 2, 3], vec![]]).is_err());
        assert!(Partition::from_one_based_blocks(2, &[vec![1, 3]]).is_err());
        assert!(Partition::from_one_based_blocks(2, &[vec![0, 1]]).is_err());
    }

    #[test]
    fn refinement() {
        let coarse = Partition::from_one_based_blocks(4, &[vec![1, 2, 3], vec![4]]).unwrap();
        let fine = Partition::from_one_based_blocks(4, &[vec![1, 2], vec![3], vec![4]]).unwrap();
        assert!(coarse.is_refined_by(&fine));
        assert!(!fine.is_refined_by(&coarse));
        assert!(Partition::single_block(4).is_refined_by(&Partition::singletons(4)));
    }
}
