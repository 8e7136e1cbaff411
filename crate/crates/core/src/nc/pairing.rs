use super::NoncrossingPartition;
use crate::{Error, Result};

/// A perfect matching of `{1, …, p2}`, stored as a 0-based partner table.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PairPartition {
    partner: Vec<usize>,
}

impl PairPartition {
    /// Builds a pairing from 1-based unordered pairs.
    pub fn from_pairs(p2: usize, pairs: &[(usize, usize)]) -> Result<Self> {
        if p2 == 0 || p2 % 2 == 1 {
            return Err(Error::domain(format!(
                "pairing needs a positive even size, got {p2}"
            )));
        }
        let mut partner = vec![usize::MAX; p2];
        for &(a, b) in pairs {
            if a == b || a == 0 || b == 0 || a > p2 || b > p2 {
                return Err(Error::domain(format!("invalid pair ({a}, {b})")));
            }
            for (x, y) in [(a, b), (b, a)] {
                if partner[x - 1] != usize::MAX {
                    return Err(Error::domain(format!("{x} is paired twice")));
                }
                partner[x - 1] = y - 1;
            }
        }
        if let Some(i) = partner.iter().position(|&x| x == usize::MAX) {
            return Err(Error::domain(format!("{} is unpaired", i + 1)));
        }
        Ok(PairPartition { partner })
    }

    /// `ρ₁₂ = (1 2)(3 4)⋯(2p−1 2p)`, the fattened identity.
    pub fn rho12(p: usize) -> Self {
        PairPartition {
            partner: (0..2 * p).map(|i| i ^ 1).collect(),
        }
    }

    /// The fattening of `γ⁻¹`: pairs `i` with `i + (−1)^{i+1}·3` modulo `2p`
    /// (1-based), i.e. `2i` with `2i − 3`.
    pub fn rho14(p: usize) -> Self {
        let p2 = 2 * p;
        let partner = (0..p2)
            .map(|i0| {
                let i = i0 + 1;
                let j = if i % 2 == 1 { i + 3 } else { i + p2 - 3 };
                (j - 1) % p2
            })
            .collect();
        PairPartition { partner }
    }

    /// The fat pairing of `π` on `{1, …, 2p}`: a block `i₁ < ⋯ < i_k`
    /// contributes `{2i₁−1, 2i_k}` and `{2i_j, 2i_{j+1}−1}`.
    pub fn fat(pi: &NoncrossingPartition) -> Self {
        let mut pairs = Vec::with_capacity(pi.p());
        for block in pi.blocks() {
            let k = block.len();
            pairs.push((2 * block[0] - 1, 2 * block[k - 1]));
            for w in block.windows(2) {
                pairs.push((2 * w[0], 2 * w[1] - 1));
            }
        }
        PairPartition::from_pairs(2 * pi.p(), &pairs).expect("fat map yields a perfect matching")
    }

    pub fn size(&self) -> usize {
        self.partner.len()
    }

    /// 1-based pairs `(a, b)` with `a < b`, sorted.
    pub fn pairs(&self) -> Vec<(usize, usize)> {
        self.partner
            .iter()
            .enumerate()
            .filter(|&(i, &j)| i < j)
            .map(|(i, &j)| (i + 1, j + 1))
            .collect()
    }

    pub fn is_noncrossing(&self) -> bool {
        let pairs = self.pairs();
        pairs.iter().all(|&(a, b)| {
            pairs
                .iter()
                .all(|&(c, d)| !(a < c && c < b && b < d) && !(c < a && a < d && d < b))
        })
    }

    /// Merges `2i − 1` and `2i` into `i` and returns the resulting partition
    /// of `{1, …, p2/2}`.
    pub fn collapse(&self) -> Result<NoncrossingPartition> {
        let p = self.size() / 2;
        let mut uf = UnionFind::new(p);
        for (i, &j) in self.partner.iter().enumerate() {
            uf.union(i / 2, j / 2);
        }
        NoncrossingPartition::new(
            p,
            uf.classes()
                .into_iter()
                .map(|c| c.into_iter().map(|i| i + 1).collect())
                .collect(),
        )
    }
}

/// Number of blocks of `ρ ∨ σ`: connected components of the graph whose
/// edges are the pairs of both pairings.
pub fn join_block_count(rho: &PairPartition, sigma: &PairPartition) -> Result<usize> {
    if rho.size() != sigma.size() {
        return Err(Error::domain(format!(
            "ground sets differ: {} vs {}",
            rho.size(),
            sigma.size()
        )));
    }
    let mut uf = UnionFind::new(rho.size());
    for (i, (&a, &b)) in rho.partner.iter().zip(&sigma.partner).enumerate() {
        uf.union(i, a);
        uf.union(i, b);
    }
    Ok(uf.count())
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra.max(rb)] = ra.min(rb);
        }
    }

    fn count(&mut self) -> usize {
        (0..self.parent.len())
            .filter(|&i| self.find(i) == i)
            .count()
    }

    fn classes(&mut self) -> Vec<Vec<usize>> {
        let n = self.parent.len();
        let mut by_root: Vec<Vec<usize>> = vec![Vec::new(); n];
        for i in 0..n {
            let r = self.find(i);
            by_root[r].push(i);
        }
        by_root.into_iter().filter(|c| !c.is_empty()).collect()
    }
}
