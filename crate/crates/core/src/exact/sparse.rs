use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::Zero;

use super::{ExactMatrix, ExactScalar};

/// Sparse vector: `(index, value)` pairs sorted by index, no zeros.
pub type SparseVec = Vec<(usize, ExactScalar)>;

/// Column-major sparse matrix. Column `c` is the image of basis vector `c`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparseMatrix {
    rows: usize,
    columns: Vec<SparseVec>,
}

pub(crate) fn sparse_from_map(map: BTreeMap<usize, ExactScalar>) -> SparseVec {
    map.into_iter().filter(|(_, v)| !v.is_zero()).collect()
}

/// `acc += c * v`.
pub(crate) fn axpy(acc: &mut BTreeMap<usize, ExactScalar>, c: &ExactScalar, v: &[(usize, ExactScalar)]) {
    if c.is_zero() {
        return;
    }
    for (i, x) in v {
        let e = acc.entry(*i).or_insert_with(BigRational::zero);
        *e += c * x;
    }
}

impl SparseMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        SparseMatrix { rows, columns: vec![Vec::new(); cols] }
    }

    pub fn from_columns(rows: usize, columns: Vec<SparseVec>) -> Self {
        debug_assert!(columns.iter().flatten().all(|(r, v)| *r < rows && !v.is_zero()));
        SparseMatrix { rows, columns }
    }

    pub fn from_dense(m: &ExactMatrix) -> Self {
        let columns = (0..m.cols())
            .map(|c| (0..m.rows()).filter(|&r| !m.get(r, c).is_zero()).map(|r| (r, m.get(r, c).clone())).collect())
            .collect();
        SparseMatrix { rows: m.rows(), columns }
    }

    pub fn to_dense(&self) -> ExactMatrix {
        let mut m = ExactMatrix::zeros(self.rows, self.columns.len());
        for (c, col) in self.columns.iter().enumerate() {
            for (r, v) in col {
                m.set(*r, c, v.clone());
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.columns.len()
    }

    pub fn column(&self, c: usize) -> &[(usize, ExactScalar)] {
        &self.columns[c]
    }

    pub fn get(&self, r: usize, c: usize) -> ExactScalar {
        self.columns[c]
            .binary_search_by_key(&r, |e| e.0)
            .map(|k| self.columns[c][k].1.clone())
            .unwrap_or_else(|_| BigRational::zero())
    }

    pub fn is_zero(&self) -> bool {
        self.columns.iter().all(Vec::is_empty)
    }

    pub fn nnz(&self) -> usize {
        self.columns.iter().map(Vec::len).sum()
    }

    /// Image of a sparse vector.
    pub fn apply(&self, v: &[(usize, ExactScalar)]) -> SparseVec {
        let mut acc = BTreeMap::new();
        for (c, x) in v {
            axpy(&mut acc, x, &self.columns[*c]);
        }
        sparse_from_map(acc)
    }

    pub fn mul(&self, other: &SparseMatrix) -> SparseMatrix {
        assert_eq!(self.cols(), other.rows, "dimension mismatch in product");
        SparseMatrix { rows: self.rows, columns: other.columns.iter().map(|col| self.apply(col)).collect() }
    }

    pub fn linear_combination(&self, a: &ExactScalar, other: &SparseMatrix, b: &ExactScalar) -> SparseMatrix {
        assert_eq!((self.rows, self.cols()), (other.rows, other.cols()));
        let columns = self
            .columns
            .iter()
            .zip(&other.columns)
            .map(|(x, y)| {
                let mut acc = BTreeMap::new();
                axpy(&mut acc, a, x);
                axpy(&mut acc, b, y);
                sparse_from_map(acc)
            })
            .collect();
        SparseMatrix { rows: self.rows, columns }
    }

    pub fn add(&self, other: &SparseMatrix) -> SparseMatrix {
        let one = super::int(1);
        self.linear_combination(&one, other, &one)
    }

    pub fn sub(&self, other: &SparseMatrix) -> SparseMatrix {
        self.linear_combination(&super::int(1), other, &super::int(-1))
    }

    pub fn scale(&self, c: &ExactScalar) -> SparseMatrix {
        if c.is_zero() {
            return SparseMatrix::zeros(self.rows, self.cols());
        }
        SparseMatrix {
            rows: self.rows,
            columns: self.columns.iter().map(|col| col.iter().map(|(r, v)| (*r, v * c)).collect()).collect(),
        }
    }

    /// `self * other - other * self`.
    pub fn commutator(&self, other: &SparseMatrix) -> SparseMatrix {
        self.mul(other).sub(&other.mul(self))
    }

    pub fn trace(&self) -> ExactScalar {
        self.columns.iter().enumerate().map(|(c, _)| self.get(c, c)).fold(BigRational::zero(), |a, b| a + b)
    }

    /// Trace of `self * other` without forming the product.
    pub fn trace_of_product(&self, other: &SparseMatrix) -> ExactScalar {
        let mut acc = BigRational::zero();
        for (c, col) in other.columns.iter().enumerate() {
            for (k, v) in col {
                // (self * other)_{cc} = Σ_k self_{ck} other_{kc}
                let s = self.get(c, *k);
                if !s.is_zero() {
                    acc += s * v;
                }
            }
        }
        acc
    }

    pub fn identity(n: usize) -> Self {
        SparseMatrix { rows: n, columns: (0..n).map(|i| vec![(i, super::int(1))]).collect() }
    }

    pub fn diagonal(entries: &[ExactScalar]) -> Self {
        SparseMatrix {
            rows: entries.len(),
            columns: entries
                .iter()
                .enumerate()
                .map(|(i, v)| if v.is_zero() { vec![] } else { vec![(i, v.clone())] })
                .collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::int;

    #[test]
    fn dense_round_trip_and_products() {
        let a = ExactMatrix::from_i64_rows(&[vec![0, 1, 0], vec![0, 0, 2], vec![3, 0, 0]]);
        let b = ExactMatrix::from_i64_rows(&[vec![1, 0, 0], vec![4, 0, 1], vec![0, 5, 0]]);
        let (sa, sb) = (SparseMatrix::from_dense(&a), SparseMatrix::from_dense(&b));
        assert_eq!(sa.to_dense(), a);
        assert_eq!(sa.mul(&sb).to_dense(), a.mul(&b));
        assert_eq!(sa.commutator(&sb).to_dense(), a.commutator(&b));
        assert_eq!(sa.trace_of_product(&sb), a.mul(&b).trace());
        assert_eq!(sa.get(2, 0), int(3));
        assert_eq!(sa.sub(&sa).nnz(), 0);
    }
}
