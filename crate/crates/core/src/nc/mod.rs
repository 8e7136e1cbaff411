//! Noncrossing partitions, their permutation and pairing encodings, and the
//! exact moment formulas built on them.

mod moments;
mod pairing;
mod permutation;

pub use moments::{
    free_cumulants, moment_enum, moment_from_cumulants, profile_counts, BlockProfile, ProfileTable,
};
pub use pairing::{join_block_count, PairPartition};
pub use permutation::Permutation;

use num_bigint::BigUint;

use crate::{Error, Result};

/// Largest ground-set size accepted by the enumeration-based operations.
pub const P_MAX: usize = 12;

/// A noncrossing partition of `{1, …, p}`.
///
/// Blocks hold sorted 1-based indices and are ordered by their minimum.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct NoncrossingPartition {
    p: usize,
    blocks: Vec<Vec<usize>>,
}

impl NoncrossingPartition {
    /// Validates and canonicalizes `blocks` as a noncrossing partition of `{1, …, p}`.
    pub fn new(p: usize, mut blocks: Vec<Vec<usize>>) -> Result<Self> {
        if p == 0 {
            return Err(Error::domain("ground set must be nonempty"));
        }
        let mut seen = vec![false; p];
        for block in &mut blocks {
            if block.is_empty() {
                return Err(Error::domain("empty block"));
            }
            block.sort_unstable();
            for &i in block.iter() {
                if i == 0 || i > p {
                    return Err(Error::domain(format!("index {i} outside 1..={p}")));
                }
                if std::mem::replace(&mut seen[i - 1], true) {
                    return Err(Error::domain(format!("index {i} appears twice")));
                }
            }
        }
        if let Some(i) = seen.iter().position(|s| !s) {
            return Err(Error::domain(format!("index {} not covered", i + 1)));
        }
        blocks.sort_unstable_by_key(|b| b[0]);
        let partition = NoncrossingPartition { p, blocks };
        if partition.has_crossing() {
            return Err(Error::domain("blocks cross"));
        }
        Ok(partition)
    }

    /// The one-block partition `{{1, …, p}}`.
    pub fn full(p: usize) -> Result<Self> {
        Self::new(p, vec![(1..=p).collect()])
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    /// `#π`.
    pub fn block_count(&self) -> usize {
        self.blocks.len()
    }

    /// Number of blocks of even cardinality.
    pub fn even_blocks(&self) -> usize {
        self.blocks.iter().filter(|b| b.len() % 2 == 0).count()
    }

    pub fn profile(&self) -> BlockProfile {
        BlockProfile {
            p: self.p,
            b: self.block_count(),
            e: self.even_blocks(),
        }
    }

    /// Block index of every element, 0-based.
    fn labels(&self) -> Vec<usize> {
        let mut label = vec![0; self.p];
        for (k, block) in self.blocks.iter().enumerate() {
            for &i in block {
                label[i - 1] = k;
            }
        }
        label
    }

    // a < b < c < d with a ~ c, b ~ d and a ≁ b. For each pair of blocks it
    // is enough to look for an element of one strictly between two
    // consecutive elements of the other while the other block also has an
    // element outside that gap.
    fn has_crossing(&self) -> bool {
        let label = self.labels();
        for block in &self.blocks {
            for w in block.windows(2) {
                let (lo, hi) = (w[0], w[1]);
                let own = label[lo - 1];
                for x in lo + 1..hi {
                    let other = label[x - 1];
                    if other == own {
                        continue;
                    }
                    let outside = self.blocks[other].iter().any(|&y| y < lo || y > hi);
                    if outside {
                        return true;
                    }
                }
            }
        }
        false
    }

    /// The geodesic permutation of the partition for the full cycle
    /// `γ(i) = i − 1`: each block becomes a cycle run in decreasing order,
    /// so the one-block partition maps to `γ` itself.
    pub fn to_permutation(&self) -> Permutation {
        let mut images = vec![0; self.p];
        for block in &self.blocks {
            let k = block.len();
            for j in 0..k {
                let prev = block[(j + k - 1) % k];
                images[block[j] - 1] = prev - 1;
            }
        }
        Permutation::from_zero_based(images).expect("blocks partition the ground set")
    }
}

impl std::fmt::Display for NoncrossingPartition {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{{")?;
        for (k, block) in self.blocks.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{{")?;
            for (j, i) in block.iter().enumerate() {
                if j > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{i}")?;
            }
            write!(f, "}}")?;
        }
        write!(f, "}}")
    }
}

/// Number of blocks of even size.
pub fn even_blocks(pi: &NoncrossingPartition) -> usize {
    pi.even_blocks()
}

/// `#(πγ)` for `γ(i) = i − 1` cyclically.
pub fn cycle_count_pi_gamma(pi: &NoncrossingPartition) -> usize {
    let gamma = Permutation::full_cycle_down(pi.p);
    pi.to_permutation().compose(&gamma).cycle_count()
}

pub fn catalan(p: usize) -> BigUint {
    // C_p = binom(2p, p) / (p + 1)
    let mut c = BigUint::from(1u8);
    for k in 0..p {
        c = c * BigUint::from(2 * (2 * k + 1)) / BigUint::from(k + 2);
    }
    c
}

/// Every noncrossing partition of `{1, …, p}` exactly once.
///
/// Built by recursion on the block containing 1: its other elements split the
/// rest of the ground set into contiguous gaps, each filled independently by
/// a smaller noncrossing partition. The output order is deterministic.
pub fn enumerate_nc(p: usize) -> Result<Vec<NoncrossingPartition>> {
    if p == 0 || p > P_MAX {
        return Err(Error::domain(format!("p = {p} outside 1..={P_MAX}")));
    }
    let tables = nc_tables(p);
    Ok(tables[p]
        .iter()
        .map(|blocks| NoncrossingPartition {
            p,
            blocks: blocks
                .iter()
                .map(|b| b.iter().map(|&i| i as usize + 1).collect())
                .collect(),
        })
        .collect())
}

type RawPartition = Vec<Vec<u8>>;

// tables[len] lists the noncrossing partitions of {0, …, len − 1}.
fn nc_tables(p: usize) -> Vec<Vec<RawPartition>> {
    let mut tables: Vec<Vec<RawPartition>> = vec![vec![Vec::new()]];
    for len in 1..=p {
        let mut out = Vec::new();
        let mut legs = vec![0u8];
        let mut gaps = Vec::new();
        first_block_layouts(len, 1, &mut legs, &mut gaps, &mut |legs, gaps| {
            fill_gaps(&tables, legs, gaps, &mut out);
        });
        tables.push(out);
    }
    tables
}

type LayoutSink<'a> = dyn FnMut(&[u8], &[(usize, usize)]) + 'a;

// Chooses the remaining legs of the block containing 0; `next` is the first
// position after the last chosen leg. Gaps are (start, len) pairs.
fn first_block_layouts(
    len: usize,
    next: usize,
    legs: &mut Vec<u8>,
    gaps: &mut Vec<(usize, usize)>,
    emit: &mut LayoutSink<'_>,
) {
    // close the block: everything after the last leg is one gap
    gaps.push((next, len - next));
    emit(legs, gaps);
    gaps.pop();

    for leg in next..len {
        legs.push(leg as u8);
        gaps.push((next, leg - next));
        first_block_layouts(len, leg + 1, legs, gaps, emit);
        gaps.pop();
        legs.pop();
    }
}

fn fill_gaps(
    tables: &[Vec<RawPartition>],
    legs: &[u8],
    gaps: &[(usize, usize)],
    out: &mut Vec<RawPartition>,
) {
    let mut current: RawPartition = vec![legs.to_vec()];
    fill_from(tables, gaps, 0, &mut current, out);
}

fn fill_from(
    tables: &[Vec<RawPartition>],
    gaps: &[(usize, usize)],
    k: usize,
    current: &mut RawPartition,
    out: &mut Vec<RawPartition>,
) {
    if k == gaps.len() {
        let mut blocks = current.clone();
        blocks.sort_unstable_by_key(|b| b[0]);
        out.push(blocks);
        return;
    }
    let (start, len) = gaps[k];
    for sub in &tables[len] {
        let before = current.len();
        current.extend(
            sub.iter()
                .map(|b| b.iter().map(|&i| i + start as u8).collect::<Vec<_>>()),
        );
        fill_from(tables, gaps, k + 1, current, out);
        current.truncate(before);
    }
}
