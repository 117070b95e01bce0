//! Standard Young tableaux and Young's orthogonal form.

use std::collections::HashMap;

use nalgebra::DMatrix;

use crate::partitions::Partition;
use crate::permutation::Permutation;

/// A standard tableau stored as the row of each entry `0..k`.
pub type RowWord = Vec<usize>;

/// All standard Young tableaux of shape `λ`, ordered lexicographically by
/// row word.
pub fn standard_tableaux(lambda: &Partition) -> Vec<RowWord> {
    let k = lambda.weight();
    let mut out = Vec::new();
    let mut filled = vec![0usize; lambda.rows()];
    let mut word = Vec::with_capacity(k);
    fn go(
        lambda: &Partition,
        filled: &mut [usize],
        word: &mut RowWord,
        out: &mut Vec<RowWord>,
    ) {
        if word.len() == lambda.weight() {
            out.push(word.clone());
            return;
        }
        for r in 0..filled.len() {
            let fits = filled[r] < lambda.part(r) && (r == 0 || filled[r - 1] > filled[r]);
            if fits {
                filled[r] += 1;
                word.push(r);
                go(lambda, filled, word, out);
                word.pop();
                filled[r] -= 1;
            }
        }
    }
    go(lambda, &mut filled, &mut word, &mut out);
    out
}

/// Content `col − row` of every entry of a tableau.
fn contents(word: &RowWord) -> Vec<isize> {
    let mut len = vec![0isize; word.len() + 1];
    word.iter()
        .map(|&r| {
            let c = len[r] - r as isize;
            len[r] += 1;
            c
        })
        .collect()
}

/// The irrep `V_λ` of `S_k` as real orthogonal matrices in the standard
/// tableau basis.
#[derive(Clone, Debug)]
pub struct YoungOrthogonalForm {
    lambda: Partition,
    tableaux: Vec<RowWord>,
    generators: Vec<DMatrix<f64>>,
}

impl YoungOrthogonalForm {
    pub fn new(lambda: &Partition) -> Self {
        let k = lambda.weight();
        let tableaux = standard_tableaux(lambda);
        let index: HashMap<&RowWord, usize> =
            tableaux.iter().enumerate().map(|(i, t)| (t, i)).collect();
        let dim = tableaux.len();
        let mut generators = Vec::with_capacity(k.saturating_sub(1));
        for i in 0..k.saturating_sub(1) {
            let mut g = DMatrix::<f64>::zeros(dim, dim);
            for (col, t) in tableaux.iter().enumerate() {
                let c = contents(t);
                let r = (c[i + 1] - c[i]) as f64;
                g[(col, col)] = 1.0 / r;
                if t[i] != t[i + 1] && r.abs() > 1.0 {
                    let mut swapped = t.clone();
                    swapped.swap(i, i + 1);
                    // swapping entries in different rows and columns keeps
                    // the tableau standard
                    let row = index[&swapped];
                    g[(row, col)] = (1.0 - 1.0 / (r * r)).sqrt();
                }
            }
            generators.push(g);
        }
        YoungOrthogonalForm { lambda: lambda.clone(), tableaux, generators }
    }

    pub fn lambda(&self) -> &Partition {
        &self.lambda
    }

    pub fn dim(&self) -> usize {
        self.tableaux.len()
    }

    pub fn tableaux(&self) -> &[RowWord] {
        &self.tableaux
    }

    /// `ρ(s_i)` for the adjacent transposition of `i` and `i+1`.
    pub fn generator(&self, i: usize) -> &DMatrix<f64> {
        &self.generators[i]
    }

    /// `ρ(π)`, a homomorphism: `ρ(π∘σ) = ρ(π)ρ(σ)`.
    pub fn matrix(&self, pi: &Permutation) -> DMatrix<f64> {
        assert_eq!(pi.len(), self.lambda.weight(), "permutation degree differs from |λ|");
        // bubble-sort the one-line form; each swap at j right-multiplies
        // by s_j, so π = s_{j_m} ∘ … ∘ s_{j_1}
        let mut line = pi.images().to_vec();
        let mut swaps = Vec::new();
        let k = line.len();
        for pass in 0..k {
            for j in 0..k.saturating_sub(1 + pass) {
                if line[j] > line[j + 1] {
                    line.swap(j, j + 1);
                    swaps.push(j);
                }
            }
        }
        let mut m = DMatrix::<f64>::identity(self.dim(), self.dim());
        for &j in swaps.iter().rev() {
            m *= &self.generators[j];
        }
        m
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::partitions::{dim_symmetric_irrep, enumerate_partitions};
    use crate::permutation::all_permutations;
    use crate::symmetric::CharacterMemo;
    use num_traits::ToPrimitive;

    #[test]
    fn tableau_counts_match_hook_formula() {
        for k in 1..=7 {
            for l in enumerate_partitions(k, k).unwrap() {
                assert_eq!(
                    standard_tableaux(&l).len(),
                    dim_symmetric_irrep(&l).to_usize().unwrap()
                );
            }
        }
    }

    #[test]
    fn orthogonal_homomorphism_with_correct_character() {
        for k in 1..=5 {
            let perms = all_permutations(k);
            let mut memo = CharacterMemo::new();
            for l in enumerate_partitions(k, k).unwrap() {
                let yof = YoungOrthogonalForm::new(&l);
                let n = yof.dim();
                for p in &perms {
                    let m = yof.matrix(p);
                    assert!((m.transpose() * &m - DMatrix::identity(n, n)).abs().max() < 1e-12);
                    let chi = memo.character(&l, &p.cycle_type()).unwrap() as f64;
                    assert!((m.trace() - chi).abs() < 1e-12, "λ={l} π={:?}", p.images());
                }
                for a in perms.iter().step_by(7) {
                    for b in perms.iter().step_by(5) {
                        let lhs = yof.matrix(&a.compose(b));
                        let rhs = yof.matrix(a) * yof.matrix(b);
                        assert!((lhs - rhs).abs().max() < 1e-12);
                    }
                }
            }
        }
    }
}
