//! Fixed-capacity block bitsets for ground-element sets.

/// A set over `0..nbits`, stored as 64-bit blocks.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BlockSet {
    nbits: usize,
    blocks: Vec<u64>,
}

impl BlockSet {
    pub fn empty(nbits: usize) -> Self {
        BlockSet { nbits, blocks: vec![0; nbits.div_ceil(64)] }
    }

    pub fn from_indices(nbits: usize, indices: &[u32]) -> Self {
        let mut s = Self::empty(nbits);
        for &i in indices {
            s.insert(i as usize);
        }
        s
    }

    pub fn capacity(&self) -> usize {
        self.nbits
    }

    pub fn insert(&mut self, i: usize) {
        debug_assert!(i < self.nbits);
        self.blocks[i / 64] |= 1u64 << (i % 64);
    }

    pub fn contains(&self, i: usize) -> bool {
        debug_assert!(i < self.nbits);
        self.blocks[i / 64] >> (i % 64) & 1 == 1
    }

    pub fn union_with(&mut self, other: &BlockSet) {
        debug_assert_eq!(self.nbits, other.nbits);
        for (a, b) in self.blocks.iter_mut().zip(&other.blocks) {
            *a |= b;
        }
    }

    pub fn is_subset_of(&self, other: &BlockSet) -> bool {
        debug_assert_eq!(self.nbits, other.nbits);
        self.blocks.iter().zip(&other.blocks).all(|(a, b)| a & !b == 0)
    }

    pub fn intersects(&self, other: &BlockSet) -> bool {
        self.blocks.iter().zip(&other.blocks).any(|(a, b)| a & b != 0)
    }

    pub fn count(&self) -> usize {
        self.blocks.iter().map(|b| b.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.iter().all(|&b| b == 0)
    }

    /// Elements of `self` not in `other`.
    pub fn minus(&self, other: &BlockSet) -> BlockSet {
        debug_assert_eq!(self.nbits, other.nbits);
        BlockSet {
            nbits: self.nbits,
            blocks: self.blocks.iter().zip(&other.blocks).map(|(a, b)| a & !b).collect(),
        }
    }

    pub fn iter_ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.blocks.iter().enumerate().flat_map(|(w, &b)| {
            let mut bits = b;
            std::iter::from_fn(move || {
                if bits == 0 {
                    None
                } else {
                    let t = bits.trailing_zeros() as usize;
                    bits &= bits - 1;
                    Some(w * 64 + t)
                }
            })
        })
    }

    pub fn to_indices(&self) -> Vec<u32> {
        self.iter_ones().map(|i| i as u32).collect()
    }
}
