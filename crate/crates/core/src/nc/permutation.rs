use crate::{Error, Result};

/// A permutation of `{1, …, p}`, stored 0-based.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    pub fn from_zero_based(images: Vec<usize>) -> Result<Self> {
        let mut hit = vec![false; images.len()];
        for &i in &images {
            if i >= images.len() || std::mem::replace(&mut hit[i], true) {
                return Err(Error::domain("images are not a bijection"));
            }
        }
        Ok(Permutation { images })
    }

    /// `images[i - 1]` is the image of `i`.
    pub fn from_one_based(images: &[usize]) -> Result<Self> {
        if images.contains(&0) {
            return Err(Error::domain("images must be 1-based"));
        }
        Self::from_zero_based(images.iter().map(|&i| i - 1).collect())
    }

    pub fn identity(p: usize) -> Self {
        Permutation {
            images: (0..p).collect(),
        }
    }

    /// The full cycle `γ(i) = i − 1`, with `γ(1) = p`.
    pub fn full_cycle_down(p: usize) -> Self {
        Permutation {
            images: (0..p).map(|i| (i + p - 1) % p).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.images.len()
    }

    pub fn is_empty(&self) -> bool {
        self.images.is_empty()
    }

    /// Image of the 1-based point `i`.
    pub fn apply(&self, i: usize) -> usize {
        self.images[i - 1] + 1
    }

    /// `(self ∘ other)(i) = self(other(i))`.
    pub fn compose(&self, other: &Permutation) -> Permutation {
        assert_eq!(
            self.len(),
            other.len(),
            "composing permutations of different sizes"
        );
        Permutation {
            images: other.images.iter().map(|&i| self.images[i]).collect(),
        }
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0; self.len()];
        for (i, &j) in self.images.iter().enumerate() {
            inv[j] = i;
        }
        Permutation { images: inv }
    }

    /// `#σ`.
    pub fn cycle_count(&self) -> usize {
        let mut seen = vec![false; self.len()];
        let mut cycles = 0;
        for start in 0..self.len() {
            if seen[start] {
                continue;
            }
            cycles += 1;
            let mut i = start;
            while !seen[i] {
                seen[i] = true;
                i = self.images[i];
            }
        }
        cycles
    }

    /// `|σ|`, the minimal number of transpositions, equal to `p − #σ`.
    pub fn length(&self) -> usize {
        self.len() - self.cycle_count()
    }

    /// Whether `|σ| + |σ⁻¹γ| = p − 1` for `γ = full_cycle_down(p)`.
    pub fn is_geodesic(&self) -> bool {
        let p = self.len();
        let gamma = Permutation::full_cycle_down(p);
        self.length() + self.inverse().compose(&gamma).length() + 1 == p
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cycles_and_length() {
        let sigma = Permutation::from_one_based(&[2, 1, 3]).unwrap();
        assert_eq!(sigma.cycle_count(), 2);
        assert_eq!(sigma.length(), 1);
        assert_eq!(Permutation::identity(4).cycle_count(), 4);
        assert_eq!(Permutation::full_cycle_down(5).cycle_count(), 1);
        assert_eq!(Permutation::full_cycle_down(5).apply(1), 5);
        assert_eq!(Permutation::full_cycle_down(5).apply(3), 2);
    }

    #[test]
    fn compose_and_inverse() {
        let gamma = Permutation::full_cycle_down(4);
        assert_eq!(gamma.compose(&gamma.inverse()), Permutation::identity(4));
        let sq = gamma.compose(&gamma);
        assert_eq!(sq.cycle_count(), 2);
    }

    #[test]
    fn rejects_non_bijections() {
        assert!(Permutation::from_one_based(&[1, 1]).is_err());
        assert!(Permutation::from_one_based(&[0, 1]).is_err());
        assert!(Permutation::from_one_based(&[3, 1]).is_err());
    }

    #[test]
    fn crossing_permutation_is_not_geodesic() {
        // (1 3)(2 4) corresponds to the crossing partition {{1,3},{2,4}}
        let sigma = Permutation::from_one_based(&[3, 4, 1, 2]).unwrap();
        assert!(!sigma.is_geodesic());
        assert!(Permutation::full_cycle_down(4).is_geodesic());
        assert!(Permutation::identity(4).is_geodesic());
    }
}
