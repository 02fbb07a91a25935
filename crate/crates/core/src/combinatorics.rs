//! Set partitions in canonical order, subsets and permutations.
//!
//! Ground sets are `{1..n}` and permutations are stored as 1-based image
//! sequences, matching the way composition formulas index their slots.

use std::collections::BTreeSet;
use std::fmt;

use crate::{Error, Result};

/// A partition of `{1..n}` whose blocks are increasing and ordered by their minima.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SetPartition {
    n: usize,
    blocks: Vec<Vec<usize>>,
}

impl SetPartition {
    /// Reorders arbitrary blocks into canonical form, rejecting overlaps and gaps.
    pub fn canonicalize<B, I>(n: usize, blocks: B) -> Result<Self>
    where
        B: IntoIterator<Item = I>,
        I: IntoIterator<Item = usize>,
    {
        if n == 0 {
            return Err(Error::InvalidPartition("ground set must be nonempty".into()));
        }
        let mut seen = vec![false; n + 1];
        let mut out = Vec::new();
        for block in blocks {
            let mut b: Vec<usize> = block.into_iter().collect();
            if b.is_empty() {
                return Err(Error::InvalidPartition("empty block".into()));
            }
            b.sort_unstable();
            for &x in &b {
                if x == 0 || x > n {
                    return Err(Error::InvalidPartition(format!("element {x} outside 1..={n}")));
                }
                if seen[x] {
                    return Err(Error::InvalidPartition(format!("element {x} appears twice")));
                }
                seen[x] = true;
            }
            out.push(b);
        }
        if let Some(missing) = (1..=n).find(|&x| !seen[x]) {
            return Err(Error::InvalidPartition(format!("element {missing} is not covered")));
        }
        out.sort_by_key(|b| b[0]);
        Ok(SetPartition { n, blocks: out })
    }

    /// The partition `Π_J`: the block `J` together with the singletons outside it.
    pub fn from_subset(subset: &[usize], n: usize) -> Result<Self> {
        if subset.is_empty() {
            return Err(Error::InvalidPartition("subset must be nonempty".into()));
        }
        let set: BTreeSet<usize> = subset.iter().copied().collect();
        if set.len() != subset.len() {
            return Err(Error::InvalidPartition("subset has repeated elements".into()));
        }
        let mut blocks: Vec<Vec<usize>> = vec![set.iter().copied().collect()];
        blocks.extend((1..=n).filter(|x| !set.contains(x)).map(|x| vec![x]));
        Self::canonicalize(n, blocks)
    }

    pub fn singletons(n: usize) -> Self {
        SetPartition { n, blocks: (1..=n).map(|x| vec![x]).collect() }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    /// Number of blocks.
    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    pub fn block_sizes(&self) -> Vec<usize> {
        self.blocks.iter().map(Vec::len).collect()
    }

    /// `σ_Π`: the concatenation of the blocks, read as a sequence of images.
    pub fn permutation(&self) -> Permutation {
        Permutation { images: self.blocks.concat() }
    }
}

impl fmt::Display for SetPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (k, b) in self.blocks.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{{")?;
            for (l, x) in b.iter().enumerate() {
                if l > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{x}")?;
            }
            write!(f, "}}")?;
        }
        write!(f, "}}")
    }
}

/// Every partition of `{1..n}`, in lexicographic order of restricted growth strings.
pub fn enumerate_set_partitions(n: usize) -> Result<Vec<SetPartition>> {
    if n == 0 {
        return Err(Error::InvalidArgument("set partitions need n >= 1".into()));
    }
    let mut out = Vec::new();
    let mut rgs = vec![0usize; n];
    fn rec(pos: usize, max: usize, rgs: &mut Vec<usize>, out: &mut Vec<SetPartition>) {
        let n = rgs.len();
        if pos == n {
            let mut blocks = vec![Vec::new(); max + 1];
            for (i, &b) in rgs.iter().enumerate() {
                blocks[b].push(i + 1);
            }
            out.push(SetPartition { n, blocks });
            return;
        }
        for v in 0..=max + 1 {
            rgs[pos] = v;
            rec(pos + 1, max.max(v), rgs, out);
        }
    }
    rec(1, 0, &mut rgs, &mut out);
    Ok(out)
}

/// Nonempty subsets of `{1..n}` as increasing vectors, ordered by bitmask.
pub fn nonempty_subsets(n: usize) -> Vec<Vec<usize>> {
    (1u64..(1u64 << n)).map(|mask| (1..=n).filter(|&x| mask & (1 << (x - 1)) != 0).collect()).collect()
}

/// A bijection of `{1..n}`, stored as the image sequence `σ(1), …, σ(n)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Permutation { images: (1..=n).collect() }
    }

    pub fn from_images(images: Vec<usize>) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n + 1];
        for &x in &images {
            if x == 0 || x > n || seen[x] {
                return Err(Error::InvalidPermutation(format!("{images:?} is not a bijection of 1..={n}")));
            }
            seen[x] = true;
        }
        Ok(Permutation { images })
    }

    /// The transposition exchanging `a` and `b`.
    pub fn transposition(n: usize, a: usize, b: usize) -> Result<Self> {
        if a == 0 || b == 0 || a > n || b > n {
            return Err(Error::InvalidPermutation(format!("transposition ({a} {b}) outside 1..={n}")));
        }
        let mut images: Vec<usize> = (1..=n).collect();
        images.swap(a - 1, b - 1);
        Ok(Permutation { images })
    }

    pub fn len(&self) -> usize {
        self.images.len()
    }

    pub fn is_empty(&self) -> bool {
        self.images.is_empty()
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    /// `σ(i)` for `1 <= i <= n`.
    pub fn apply(&self, i: usize) -> usize {
        self.images[i - 1]
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.images.len()];
        for (i, &x) in self.images.iter().enumerate() {
            inv[x - 1] = i + 1;
        }
        Permutation { images: inv }
    }

    /// `self ∘ other`, i.e. `i ↦ self(other(i))`.
    pub fn compose(&self, other: &Permutation) -> Permutation {
        assert_eq!(self.len(), other.len(), "composing permutations of different sizes");
        Permutation { images: other.images.iter().map(|&i| self.images[i - 1]).collect() }
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &x)| x == i + 1)
    }

    /// All of `S_n` in lexicographic order of image sequences.
    pub fn all(n: usize) -> Vec<Permutation> {
        let mut cur: Vec<usize> = (1..=n).collect();
        let mut out = vec![Permutation { images: cur.clone() }];
        while let Some(i) = (1..n).rev().find(|&i| cur[i - 1] < cur[i]) {
            let j = (i..n).rev().find(|&j| cur[j] > cur[i - 1]).unwrap();
            cur.swap(i - 1, j);
            cur[i..].reverse();
            out.push(Permutation { images: cur.clone() });
        }
        out
    }

    /// Expands `σ` blockwise: argument `k` of the permuted operation is fed by a
    /// block of `sizes[k-1]` consecutive inputs.
    ///
    /// The result `τ` satisfies `act(f, σ) ∘ (blocks) = act(f ∘ (permuted blocks), τ)`
    /// in the endomorphism operad.
    pub fn block_expand(&self, sizes: &[usize]) -> Permutation {
        assert_eq!(sizes.len(), self.len());
        let mut offset_x = Vec::with_capacity(sizes.len());
        let mut acc = 0;
        for &s in sizes {
            offset_x.push(acc);
            acc += s;
        }
        let mut images = Vec::with_capacity(acc);
        for &target in &self.images {
            let off = offset_x[target - 1];
            images.extend((1..=sizes[target - 1]).map(|t| off + t));
        }
        Permutation { images }
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (k, x) in self.images.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, ")")
    }
}
