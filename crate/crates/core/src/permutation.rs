//! Permutations of `{0, …, k−1}` in one-line notation.
//!
//! `π.image(a)` is where `a` goes. Composition is right-to-left:
//! `(π ∘ σ)(a) = π(σ(a))`.

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::partitions::Partition;

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct Permutation {
    images: Vec<usize>,
}

impl TryFrom<Vec<usize>> for Permutation {
    type Error = Error;
    fn try_from(v: Vec<usize>) -> Result<Self> {
        Permutation::new(v)
    }
}

impl From<Permutation> for Vec<usize> {
    fn from(p: Permutation) -> Self {
        p.images
    }
}

impl Permutation {
    /// Validates that `images` is a bijection of `0..images.len()`.
    pub fn new(images: Vec<usize>) -> Result<Self> {
        let k = images.len();
        let mut seen = vec![false; k];
        for &i in &images {
            if i >= k || seen[i] {
                return Err(Error::domain(format!("not a permutation: {images:?}")));
            }
            seen[i] = true;
        }
        Ok(Permutation { images })
    }

    pub fn identity(k: usize) -> Self {
        Permutation { images: (0..k).collect() }
    }

    /// The adjacent transposition swapping `i` and `i+1`.
    pub fn adjacent(k: usize, i: usize) -> Self {
        assert!(i + 1 < k, "adjacent transposition out of range");
        let mut images: Vec<usize> = (0..k).collect();
        images.swap(i, i + 1);
        Permutation { images }
    }

    /// The cycle `0 → 1 → … → k−1 → 0`.
    pub fn long_cycle(k: usize) -> Self {
        Permutation { images: (0..k).map(|a| (a + 1) % k).collect() }
    }

    /// A fixed permutation with the given cycle type: consecutive blocks
    /// each cycled forward.
    pub fn with_cycle_type(mu: &Partition) -> Self {
        let mut images = Vec::with_capacity(mu.weight());
        let mut start = 0;
        for &len in mu.parts() {
            for a in 0..len {
                images.push(start + (a + 1) % len);
            }
            start += len;
        }
        Permutation { images }
    }

    pub fn random<R: Rng + ?Sized>(k: usize, rng: &mut R) -> Self {
        let mut images: Vec<usize> = (0..k).collect();
        images.shuffle(rng);
        Permutation { images }
    }

    pub fn len(&self) -> usize {
        self.images.len()
    }

    pub fn is_empty(&self) -> bool {
        self.images.is_empty()
    }

    pub fn image(&self, a: usize) -> usize {
        self.images[a]
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(a, &b)| a == b)
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Permutation) -> Permutation {
        assert_eq!(self.len(), other.len(), "composing permutations of different degree");
        Permutation { images: other.images.iter().map(|&b| self.images[b]).collect() }
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0; self.len()];
        for (a, &b) in self.images.iter().enumerate() {
            inv[b] = a;
        }
        Permutation { images: inv }
    }

    pub fn cycle_type(&self) -> Partition {
        let k = self.len();
        let mut seen = vec![false; k];
        let mut lens = Vec::new();
        for s in 0..k {
            if seen[s] {
                continue;
            }
            let mut len = 0;
            let mut c = s;
            while !seen[c] {
                seen[c] = true;
                c = self.images[c];
                len += 1;
            }
            lens.push(len);
        }
        lens.sort_unstable_by(|a, b| b.cmp(a));
        Partition::new(lens).expect("cycle lengths are positive")
    }

    pub fn cycle_count(&self) -> usize {
        self.cycle_type().rows()
    }
}

/// All `k!` permutations of degree `k` (Heap's order is not promised; the
/// output is sorted lexicographically by one-line notation).
pub fn all_permutations(k: usize) -> Vec<Permutation> {
    let mut out = Vec::new();
    let mut current: Vec<usize> = Vec::with_capacity(k);
    let mut used = vec![false; k];
    fn go(k: usize, current: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Permutation>) {
        if current.len() == k {
            out.push(Permutation { images: current.clone() });
            return;
        }
        for v in 0..k {
            if !used[v] {
                used[v] = true;
                current.push(v);
                go(k, current, used, out);
                current.pop();
                used[v] = false;
            }
        }
    }
    go(k, &mut current, &mut used, &mut out);
    out
}
