//! Integer partitions (Young diagrams) and the representation-theoretic
//! numbers attached to them: hook lengths, irrep dimensions of the symmetric
//! and unitary groups, and the Plancherel measure.
//!
//! Dimensions are arbitrary-precision integers and the Plancherel measure is
//! an exact rational; conversion to floating point happens only through the
//! explicit helpers at the bottom of this module.

use std::fmt;

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Default upper bound on the number of partitions a single enumeration may
/// produce.
pub const DEFAULT_PARTITION_CAP: usize = 1_000_000;

/// A partition of `weight()` into weakly decreasing positive parts.
///
/// Serialized as a bare JSON array of integers, e.g. `[2,1]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Partition {
    parts: Vec<usize>,
}

impl Partition {
    /// Builds a partition from weakly decreasing positive parts.
    pub fn new(parts: Vec<usize>) -> Result<Self> {
        if parts.contains(&0) {
            return Err(Error::domain(format!(
                "partition parts must be positive, got {parts:?}"
            )));
        }
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::domain(format!(
                "partition parts must be weakly decreasing, got {parts:?}"
            )));
        }
        Ok(Partition { parts })
    }

    /// Like [`Partition::new`] but accepts trailing zeros (a zero-padded
    /// Young diagram) and strips them.
    pub fn from_padded(mut parts: Vec<usize>) -> Result<Self> {
        while parts.last() == Some(&0) {
            parts.pop();
        }
        Self::new(parts)
    }

    pub fn empty() -> Self {
        Partition { parts: Vec::new() }
    }

    /// The one-row partition `(k)`.
    pub fn row(k: usize) -> Self {
        if k == 0 {
            Self::empty()
        } else {
            Partition { parts: vec![k] }
        }
    }

    /// The one-column partition `(1^k)`.
    pub fn column(k: usize) -> Self {
        Partition { parts: vec![1; k] }
    }

    pub(crate) fn from_sorted_unchecked(parts: Vec<usize>) -> Self {
        debug_assert!(parts.windows(2).all(|w| w[0] >= w[1]));
        debug_assert!(parts.iter().all(|&p| p > 0));
        Partition { parts }
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    /// Number of cells.
    pub fn weight(&self) -> usize {
        self.parts.iter().sum()
    }

    /// Number of nonzero rows.
    pub fn rows(&self) -> usize {
        self.parts.len()
    }

    /// Row `i` with zero padding past the last row.
    pub fn part(&self, i: usize) -> usize {
        self.parts.get(i).copied().unwrap_or(0)
    }

    /// The transposed diagram.
    pub fn conjugate(&self) -> Partition {
        let cols = self.part(0);
        let parts = (0..cols)
            .map(|j| self.parts.iter().take_while(|&&p| p > j).count())
            .collect();
        Partition { parts }
    }

    /// Multiplicities `m_i` of each part size `i = 1..=max part`, indexed
    /// from 1 (index 0 is unused and always zero).
    pub fn multiplicities(&self) -> Vec<usize> {
        let mut m = vec![0; self.part(0) + 1];
        for &p in &self.parts {
            m[p] += 1;
        }
        m
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, p) in self.parts.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, ")")
    }
}

impl Serialize for Partition {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.parts.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Partition {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let parts = Vec::<usize>::deserialize(d)?;
        Partition::new(parts).map_err(serde::de::Error::custom)
    }
}

/// All partitions of `k` with at most `max_rows` parts, in lexicographically
/// decreasing order, subject to [`DEFAULT_PARTITION_CAP`].
pub fn enumerate_partitions(k: usize, max_rows: usize) -> Result<Vec<Partition>> {
    enumerate_partitions_capped(k, max_rows, DEFAULT_PARTITION_CAP)
}

/// As [`enumerate_partitions`] with an explicit cap on the output size.
pub fn enumerate_partitions_capped(
    k: usize,
    max_rows: usize,
    cap: usize,
) -> Result<Vec<Partition>> {
    if max_rows == 0 {
        return Err(Error::domain("max_rows must be at least 1"));
    }
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(max_rows.min(k));
    fill(k, k, max_rows, cap, &mut current, &mut out)?;
    Ok(out)
}

fn fill(
    remaining: usize,
    bound: usize,
    rows_left: usize,
    cap: usize,
    current: &mut Vec<usize>,
    out: &mut Vec<Partition>,
) -> Result<()> {
    if remaining == 0 {
        if out.len() == cap {
            return Err(Error::capacity("partition enumeration", cap as u128 + 1, cap as u128));
        }
        out.push(Partition::from_sorted_unchecked(current.clone()));
        return Ok(());
    }
    if rows_left == 0 {
        return Ok(());
    }
    // the remaining rows can hold at most rows_left * first cells
    let top = remaining.min(bound);
    for first in (1..=top).rev() {
        if first * rows_left < remaining {
            break;
        }
        current.push(first);
        fill(remaining - first, first, rows_left - 1, cap, current, out)?;
        current.pop();
    }
    Ok(())
}

/// One hook length per cell, listed row by row.
pub fn hook_lengths(lambda: &Partition) -> Vec<usize> {
    let conj = lambda.conjugate();
    let mut hooks = Vec::with_capacity(lambda.weight());
    for (i, &row) in lambda.parts().iter().enumerate() {
        for j in 0..row {
            let arm = row - j - 1;
            let leg = conj.part(j) - i - 1;
            hooks.push(arm + leg + 1);
        }
    }
    hooks
}

pub fn factorial(n: usize) -> BigUint {
    (1..=n).fold(BigUint::one(), |acc, i| acc * BigUint::from(i))
}

/// `dim V_λ`, the dimension of the symmetric-group irrep, via the hook
/// length formula.
pub fn dim_symmetric_irrep(lambda: &Partition) -> BigUint {
    let hooks = hook_lengths(lambda)
        .into_iter()
        .fold(BigUint::one(), |acc, h| acc * BigUint::from(h));
    factorial(lambda.weight()) / hooks
}

/// `dim U_λ^(d)` by the Weyl dimension formula
/// `∏_{i<j≤d} (λ_i − λ_j + j − i)/(j − i)`.
pub fn dim_unitary_irrep(lambda: &Partition, d: usize) -> Result<BigUint> {
    if lambda.rows() > d {
        return Err(Error::domain(format!(
            "partition {lambda} has {} rows, more than the local dimension {d}",
            lambda.rows()
        )));
    }
    let mut num = BigUint::one();
    let mut den = BigUint::one();
    for i in 0..d {
        for j in (i + 1)..d {
            num *= BigUint::from(lambda.part(i) - lambda.part(j) + j - i);
            den *= BigUint::from(j - i);
        }
    }
    Ok(num / den)
}

/// Both irrep dimensions attached to `λ` at local dimension `d`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DimensionPair {
    pub dim_sym: BigUint,
    pub dim_unitary: BigUint,
}

pub fn dimension_pair(lambda: &Partition, d: usize) -> Result<DimensionPair> {
    Ok(DimensionPair {
        dim_sym: dim_symmetric_irrep(lambda),
        dim_unitary: dim_unitary_irrep(lambda, d)?,
    })
}

/// Plancherel measure `(dim V_λ)² / k!`, exact.
pub fn plancherel(lambda: &Partition) -> BigRational {
    let dim = dim_symmetric_irrep(lambda);
    BigRational::new((&dim * &dim).into(), factorial(lambda.weight()).into())
}

/// Base-2 logarithm of a positive big integer, accurate to double precision
/// for any size.
pub fn log2_biguint(x: &BigUint) -> f64 {
    assert!(!x.is_zero(), "log2 of zero");
    let bits = x.bits();
    if bits <= 64 {
        return (x.to_u64().expect("fits in 64 bits") as f64).log2();
    }
    let shift = bits - 64;
    let top = (x >> shift).to_u64().expect("fits in 64 bits");
    (top as f64).log2() + shift as f64
}

/// Nearest double to a big integer (may be `inf` beyond `f64::MAX`).
pub fn biguint_to_f64(x: &BigUint) -> f64 {
    x.to_f64().unwrap_or(f64::INFINITY)
}

pub fn bigrational_to_f64(x: &BigRational) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(parts: &[usize]) -> Partition {
        Partition::new(parts.to_vec()).unwrap()
    }

    // Independent oracle: every composition of k filtered to weakly
    // decreasing sequences.
    fn partitions_by_filtering(k: usize, max_rows: usize) -> Vec<Vec<usize>> {
        fn compositions(k: usize) -> Vec<Vec<usize>> {
            if k == 0 {
                return vec![vec![]];
            }
            let mut out = Vec::new();
            for first in 1..=k {
                for mut rest in compositions(k - first) {
                    rest.insert(0, first);
                    out.push(rest);
                }
            }
            out
        }
        let mut v: Vec<_> = compositions(k)
            .into_iter()
            .filter(|c| c.windows(2).all(|w| w[0] >= w[1]) && c.len() <= max_rows)
            .collect();
        v.sort();
        v.reverse();
        v
    }

    #[test]
    fn enumeration_examples() {
        assert_eq!(enumerate_partitions(3, 2).unwrap(), vec![p(&[3]), p(&[2, 1])]);
        assert_eq!(enumerate_partitions(0, 5).unwrap(), vec![Partition::empty()]);
        assert_eq!(
            enumerate_partitions(4, 4).unwrap(),
            vec![p(&[4]), p(&[3, 1]), p(&[2, 2]), p(&[2, 1, 1]), p(&[1, 1, 1, 1])]
        );
    }

    #[test]
    fn enumeration_matches_composition_filter() {
        for k in 0..=12 {
            for rows in 1..=k.max(1) {
                let got: Vec<Vec<usize>> = enumerate_partitions(k, rows)
                    .unwrap()
                    .into_iter()
                    .map(|l| l.parts().to_vec())
                    .collect();
                assert_eq!(got, partitions_by_filtering(k, rows), "k={k} rows={rows}");
            }
        }
    }

    #[test]
    fn partition_counts() {
        // p(k) for k = 0..=30
        let known: [usize; 31] = [
            1, 1, 2, 3, 5, 7, 11, 15, 22, 30, 42, 56, 77, 101, 135, 176, 231, 297, 385, 490, 627,
            792, 1002, 1255, 1575, 1958, 2436, 3010, 3718, 4565, 5604,
        ];
        for (k, &count) in known.iter().enumerate() {
            assert_eq!(enumerate_partitions(k, k.max(1)).unwrap().len(), count, "p({k})");
        }
    }

    #[test]
    fn enumeration_cap() {
        let err = enumerate_partitions_capped(10, 10, 41).unwrap_err();
        assert!(matches!(err, Error::Capacity { cap: 41, .. }));
        assert_eq!(enumerate_partitions_capped(10, 10, 42).unwrap().len(), 42);
        assert!(enumerate_partitions(3, 0).is_err());
    }

    #[test]
    fn hook_examples() {
        let mut h = hook_lengths(&p(&[2, 1]));
        h.sort();
        assert_eq!(h, vec![1, 1, 3]);
        assert_eq!(hook_lengths(&p(&[5])), vec![5, 4, 3, 2, 1]);
        assert_eq!(hook_lengths(&p(&[1, 1])), vec![2, 1]);
    }

    #[test]
    fn hook_product_divides_factorial() {
        for k in 1..=10 {
            for l in enumerate_partitions(k, k).unwrap() {
                let prod = hook_lengths(&l)
                    .into_iter()
                    .fold(BigUint::one(), |a, h| a * BigUint::from(h));
                assert!((factorial(k) % prod).is_zero());
            }
        }
    }

    #[test]
    fn dimension_examples() {
        assert_eq!(dim_symmetric_irrep(&p(&[2, 1])), BigUint::from(2u32));
        assert_eq!(dim_symmetric_irrep(&p(&[7])), BigUint::one());
        assert_eq!(dim_symmetric_irrep(&p(&[1, 1, 1])), BigUint::one());
        assert_eq!(dim_unitary_irrep(&p(&[2]), 2).unwrap(), BigUint::from(3u32));
        assert_eq!(dim_unitary_irrep(&p(&[1, 1]), 2).unwrap(), BigUint::one());
        assert_eq!(dim_unitary_irrep(&p(&[2, 1]), 2).unwrap(), BigUint::from(2u32));
        assert!(dim_unitary_irrep(&p(&[1, 1, 1]), 2).is_err());
    }

    #[test]
    fn plancherel_examples() {
        let r = |a: i64, b: i64| BigRational::new(a.into(), b.into());
        assert_eq!(plancherel(&p(&[2, 1])), r(4, 6));
        assert_eq!(plancherel(&p(&[4])), r(1, 24));
        let total: BigRational = enumerate_partitions(3, 3).unwrap().iter().map(plancherel).sum();
        assert_eq!(total, BigRational::one());
    }

    #[test]
    fn conjugate_and_multiplicities() {
        assert_eq!(p(&[3, 1]).conjugate(), p(&[2, 1, 1]));
        assert_eq!(p(&[2, 2, 1]).multiplicities(), vec![0, 1, 2]);
        assert_eq!(Partition::from_padded(vec![2, 1, 0, 0]).unwrap(), p(&[2, 1]));
        assert!(Partition::new(vec![1, 2]).is_err());
        assert!(Partition::new(vec![2, 0]).is_err());
    }

    #[test]
    fn serde_roundtrip() {
        let l = p(&[3, 1, 1]);
        let s = serde_json::to_string(&l).unwrap();
        assert_eq!(s, "[3,1,1]");
        assert_eq!(serde_json::from_str::<Partition>(&s).unwrap(), l);
        assert!(serde_json::from_str::<Partition>("[1,2]").is_err());
    }

    #[test]
    fn log2_of_large_integers() {
        assert_eq!(log2_biguint(&BigUint::from(1024u32)), 10.0);
        let big = BigUint::one() << 300usize;
        assert!((log2_biguint(&big) - 300.0).abs() < 1e-12);
        let f = factorial(100);
        let expected: f64 = (1..=100).map(|i| (i as f64).log2()).sum();
        assert!((log2_biguint(&f) - expected).abs() < 1e-9);
    }

    // Brute-force tableau counts: fill cells in row-major order subject to
    // row and column constraints. `strict_rows` selects standard tableaux.
    fn count_tableaux(lambda: &Partition, alphabet: usize, standard: bool) -> usize {
        let cells: Vec<(usize, usize)> = lambda
            .parts()
            .iter()
            .enumerate()
            .flat_map(|(i, &r)| (0..r).map(move |j| (i, j)))
            .collect();
        let mut grid = vec![vec![0usize; lambda.part(0)]; lambda.rows()];
        let mut used = vec![false; alphabet + 1];
        fn go(
            idx: usize,
            cells: &[(usize, usize)],
            grid: &mut Vec<Vec<usize>>,
            used: &mut Vec<bool>,
            alphabet: usize,
            standard: bool,
        ) -> usize {
            if idx == cells.len() {
                return 1;
            }
            let (i, j) = cells[idx];
            let mut total = 0;
            for v in 1..=alphabet {
                if standard && used[v] {
                    continue;
                }
                if j > 0 && (v < grid[i][j - 1] || (standard && v == grid[i][j - 1])) {
                    continue;
                }
                if i > 0 && v <= grid[i - 1][j] {
                    continue;
                }
                grid[i][j] = v;
                used[v] = true;
                total += go(idx + 1, cells, grid, used, alphabet, standard);
                used[v] = false;
            }
            total
        }
        go(0, &cells, &mut grid, &mut used, alphabet, standard)
    }

    #[test]
    fn dim_sym_counts_standard_tableaux() {
        for k in 1..=8 {
            for l in enumerate_partitions(k, k).unwrap() {
                assert_eq!(
                    dim_symmetric_irrep(&l),
                    BigUint::from(count_tableaux(&l, k, true)),
                    "λ={l}"
                );
            }
        }
    }

    #[test]
    fn dim_unitary_counts_semistandard_tableaux() {
        for d in 1..=3 {
            for k in 1..=6 {
                for l in enumerate_partitions(k, d).unwrap() {
                    assert_eq!(
                        dim_unitary_irrep(&l, d).unwrap(),
                        BigUint::from(count_tableaux(&l, d, false)),
                        "λ={l} d={d}"
                    );
                }
            }
        }
    }

    #[test]
    fn schur_weyl_completeness() {
        for d in 2..=4usize {
            for k in 0..=10 {
                let total = enumerate_partitions(k, d)
                    .unwrap()
                    .iter()
                    .map(|l| dim_symmetric_irrep(l) * dim_unitary_irrep(l, d).unwrap())
                    .fold(BigUint::zero(), |a, b| a + b);
                assert_eq!(total, BigUint::from(d).pow(k as u32), "d={d} k={k}");
            }
        }
    }

    #[test]
    fn plancherel_normalised_up_to_twelve() {
        for k in 0..=12 {
            let total: BigRational =
                enumerate_partitions(k, k.max(1)).unwrap().iter().map(plancherel).sum();
            assert_eq!(total, BigRational::one(), "k={k}");
        }
    }
}
