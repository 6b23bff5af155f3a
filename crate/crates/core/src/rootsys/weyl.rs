use std::collections::HashMap;

use super::RootDatum;
use crate::error::{LefError, Result};
use crate::exact::Weight;

pub const DEFAULT_WEYL_BOUND: usize = 1_000_000;

/// Element of the Weyl group acting on fundamental-weight coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeylElement {
    /// `w = s_{word[0]} s_{word[1]} ...`
    pub reduced_word: Vec<usize>,
    /// Column convention: `w(λ) = matrix · λ`.
    pub matrix: Vec<Vec<i64>>,
    pub length: usize,
}

impl WeylElement {
    pub fn identity(rank: usize) -> Self {
        WeylElement {
            reduced_word: vec![],
            matrix: (0..rank).map(|i| (0..rank).map(|j| i64::from(i == j)).collect()).collect(),
            length: 0,
        }
    }

    pub fn apply(&self, lam: &[i64]) -> Weight {
        self.matrix.iter().map(|row| row.iter().zip(lam).map(|(a, b)| a * b).sum()).collect()
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &WeylElement) -> Vec<Vec<i64>> {
        let n = self.matrix.len();
        (0..n).map(|i| (0..n).map(|j| (0..n).map(|k| self.matrix[i][k] * other.matrix[k][j]).sum()).collect()).collect()
    }

    /// Inverse, computed from the reversed word.
    pub fn inverse(&self, datum: &RootDatum) -> WeylElement {
        let word: Vec<usize> = self.reduced_word.iter().rev().copied().collect();
        from_word(datum, &word)
    }
}

/// Matrix of the simple reflection `s_i`: `λ ↦ λ - λ_i α_i`.
pub fn simple_reflection_matrix(datum: &RootDatum, i: usize) -> Vec<Vec<i64>> {
    let n = datum.rank();
    let alpha = datum.simple_root(i);
    (0..n).map(|r| (0..n).map(|c| i64::from(r == c) - if c == i { alpha[r] } else { 0 }).collect()).collect()
}

/// Element given by a word (not required to be reduced; `length` is recomputed).
pub fn from_word(datum: &RootDatum, word: &[usize]) -> WeylElement {
    let mut w = WeylElement::identity(datum.rank());
    for &i in word.iter().rev() {
        let s = WeylElement { reduced_word: vec![i], matrix: simple_reflection_matrix(datum, i), length: 1 };
        w.matrix = s.compose(&w);
    }
    w.reduced_word = word.to_vec();
    w.length = inversion_count(datum, &w);
    w
}

/// Number of positive roots sent to negative roots.
pub fn inversion_count(datum: &RootDatum, w: &WeylElement) -> usize {
    datum.positive_roots().iter().filter(|r| datum.root_sign(&w.apply(r)) == Some(false)).count()
}

impl RootDatum {
    /// All Weyl group elements, breadth first, so words are reduced and
    /// ordered by length.
    pub fn weyl_group(&self) -> Result<Vec<WeylElement>> {
        self.weyl_group_bounded(DEFAULT_WEYL_BOUND)
    }

    pub fn weyl_group_bounded(&self, bound: usize) -> Result<Vec<WeylElement>> {
        if let Some(order) = self.weyl_order() {
            if order > bound as u128 {
                return Err(LefError::WeylBoundExceeded(bound));
            }
        }
        let n = self.rank();
        let rho = self.rho();
        let reflections: Vec<Vec<Vec<i64>>> = (0..n).map(|i| simple_reflection_matrix(self, i)).collect();
        let mut seen: HashMap<Weight, usize> = HashMap::new();
        let mut out = vec![WeylElement::identity(n)];
        seen.insert(rho.clone(), 0);
        let mut k = 0;
        while k < out.len() {
            let cur = out[k].clone();
            let img = cur.apply(&rho);
            for (i, s) in reflections.iter().enumerate() {
                // s_i w(ρ) distinguishes elements since ρ is regular
                let next_img = self.reflect(i, &img);
                if seen.contains_key(&next_img) {
                    continue;
                }
                if out.len() >= bound {
                    return Err(LefError::WeylBoundExceeded(bound));
                }
                let matrix = (0..n)
                    .map(|r| (0..n).map(|c| (0..n).map(|t| s[r][t] * cur.matrix[t][c]).sum()).collect())
                    .collect();
                let mut word = vec![i];
                word.extend(&cur.reduced_word);
                seen.insert(next_img, out.len());
                out.push(WeylElement { length: word.len(), reduced_word: word, matrix });
            }
            k += 1;
        }
        Ok(out)
    }

    /// `|W|` from the classification, for the irreducible labelled types.
    pub fn weyl_order(&self) -> Option<u128> {
        let ty: super::CartanType = self.label().parse().ok()?;
        let fact = |k: u128| (1..=k).product::<u128>();
        let n = ty.rank as u128;
        Some(match ty.series {
            super::Series::A => fact(n + 1),
            super::Series::B | super::Series::C => (1u128 << n) * fact(n),
            super::Series::D => (1u128 << (n - 1)) * fact(n),
            super::Series::E => match ty.rank {
                6 => 51_840,
                7 => 2_903_040,
                _ => 696_729_600,
            },
            super::Series::F => 1152,
            super::Series::G => 12,
        })
    }

    /// Minimal-length representatives of `W_S \ W`: the `w` with
    /// `w^{-1} α_i > 0` for every `i` in the Levi subset `S`.
    pub fn minimal_coset_representatives(&self, levi: &[usize]) -> Result<Vec<WeylElement>> {
        let rho = self.rho();
        Ok(self
            .weyl_group()?
            .into_iter()
            .filter(|w| {
                let img = w.apply(&rho);
                levi.iter().all(|&i| img[i] > 0)
            })
            .collect())
    }
}
