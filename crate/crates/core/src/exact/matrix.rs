use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::ExactScalar;

/// Dense row-major matrix of exact rationals.
#[derive(Clone, PartialEq, Eq)]
pub struct ExactMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<ExactScalar>,
}

impl fmt::Debug for ExactMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ExactMatrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            let row: Vec<String> = self.row(r).iter().map(super::scalar_to_string).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

impl ExactMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        ExactMatrix { rows, cols, entries: vec![BigRational::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, BigRational::one());
        }
        m
    }

    pub fn scalar(n: usize, c: &ExactScalar) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, c.clone());
        }
        m
    }

    /// Builds a matrix from rows; all rows must have the same length.
    pub fn from_rows(rows: Vec<Vec<ExactScalar>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        ExactMatrix { rows: r, cols: c, entries: rows.into_iter().flatten().collect() }
    }

    pub fn from_i64_rows(rows: &[Vec<i64>]) -> Self {
        Self::from_rows(rows.iter().map(|row| row.iter().map(|&x| super::int(x)).collect()).collect())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &ExactScalar {
        &self.entries[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: ExactScalar) {
        self.entries[r * self.cols + c] = v;
    }

    pub fn add_to(&mut self, r: usize, c: usize, v: &ExactScalar) {
        let e = &mut self.entries[r * self.cols + c];
        *e += v;
    }

    pub fn row(&self, r: usize) -> &[ExactScalar] {
        &self.entries[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<ExactScalar> {
        (0..self.rows).map(|r| self.get(r, c).clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<ExactScalar>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Zero::is_zero)
    }

    pub fn nonzero_count(&self) -> usize {
        self.entries.iter().filter(|x| !x.is_zero()).count()
    }

    /// Fraction of nonzero entries (1.0 for an empty matrix).
    pub fn density(&self) -> f64 {
        if self.entries.is_empty() {
            return 1.0;
        }
        self.nonzero_count() as f64 / self.entries.len() as f64
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c).clone());
            }
        }
        t
    }

    pub fn mul(&self, other: &ExactMatrix) -> ExactMatrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch in product");
        let mut out = Self::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(r, k);
                if a.is_zero() {
                    continue;
                }
                for c in 0..other.cols {
                    let b = other.get(k, c);
                    if !b.is_zero() {
                        out.add_to(r, c, &(a * b));
                    }
                }
            }
        }
        out
    }

    pub fn add(&self, other: &ExactMatrix) -> ExactMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        ExactMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().zip(&other.entries).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, other: &ExactMatrix) -> ExactMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        ExactMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().zip(&other.entries).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn scale(&self, c: &ExactScalar) -> ExactMatrix {
        ExactMatrix { rows: self.rows, cols: self.cols, entries: self.entries.iter().map(|a| a * c).collect() }
    }

    /// `self * other - other * self`.
    pub fn commutator(&self, other: &ExactMatrix) -> ExactMatrix {
        self.mul(other).sub(&other.mul(self))
    }

    pub fn trace(&self) -> ExactScalar {
        (0..self.rows.min(self.cols)).fold(BigRational::zero(), |acc, i| acc + self.get(i, i))
    }

    pub fn apply(&self, v: &[ExactScalar]) -> Vec<ExactScalar> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|r| {
                self.row(r)
                    .iter()
                    .zip(v)
                    .filter(|(a, b)| !a.is_zero() && !b.is_zero())
                    .fold(BigRational::zero(), |acc, (a, b)| acc + a * b)
            })
            .collect()
    }

    /// Returns `Some(c)` if the matrix is exactly `c` times the identity.
    pub fn as_scalar(&self) -> Option<ExactScalar> {
        if self.rows != self.cols {
            return None;
        }
        if self.rows == 0 {
            return Some(BigRational::zero());
        }
        let c = self.get(0, 0).clone();
        for r in 0..self.rows {
            for k in 0..self.cols {
                let e = self.get(r, k);
                if (r == k && *e != c) || (r != k && !e.is_zero()) {
                    return None;
                }
            }
        }
        Some(c)
    }

    /// Inverse via Gauss-Jordan; `None` when singular or non-square.
    pub fn inverse(&self) -> Option<ExactMatrix> {
        if self.rows != self.cols {
            return None;
        }
        let n = self.rows;
        let mut aug = Self::zeros(n, 2 * n);
        for r in 0..n {
            for c in 0..n {
                aug.set(r, c, self.get(r, c).clone());
            }
            aug.set(r, n + r, BigRational::one());
        }
        let red = rref(&aug);
        if red.pivots.len() < n || red.pivots[..n].iter().enumerate().any(|(i, &p)| p != i) {
            return None;
        }
        let mut inv = Self::zeros(n, n);
        for r in 0..n {
            for c in 0..n {
                inv.set(r, c, red.matrix.get(r, n + c).clone());
            }
        }
        Some(inv)
    }

    pub fn select_columns(&self, cols: &[usize]) -> ExactMatrix {
        let mut out = Self::zeros(self.rows, cols.len());
        for r in 0..self.rows {
            for (j, &c) in cols.iter().enumerate() {
                out.set(r, j, self.get(r, c).clone());
            }
        }
        out
    }

    pub fn select(&self, rows: &[usize], cols: &[usize]) -> ExactMatrix {
        let mut out = Self::zeros(rows.len(), cols.len());
        for (i, &r) in rows.iter().enumerate() {
            for (j, &c) in cols.iter().enumerate() {
                out.set(i, j, self.get(r, c).clone());
            }
        }
        out
    }

    /// Each row multiplied by the lcm of its denominators.
    fn integer_rows(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows)
            .map(|r| {
                let row = self.row(r);
                let l = row.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
                row.iter().map(|x| (x * BigRational::from_integer(l.clone())).to_integer()).collect()
            })
            .collect()
    }
}

/// Reduced row echelon form together with the pivot columns.
#[derive(Clone, Debug)]
pub struct Rref {
    pub matrix: ExactMatrix,
    pub pivots: Vec<usize>,
}

impl Rref {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Coefficients expressing column `c` of the original matrix in terms of
    /// the pivot columns (one coefficient per pivot, in pivot order).
    pub fn column_in_pivot_basis(&self, c: usize) -> Vec<ExactScalar> {
        (0..self.pivots.len()).map(|r| self.matrix.get(r, c).clone()).collect()
    }
}

/// Gauss-Jordan reduction over the rationals.
pub fn rref(m: &ExactMatrix) -> Rref {
    let mut a = m.clone();
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..a.cols {
        if row == a.rows {
            break;
        }
        let Some(p) = (row..a.rows).find(|&r| !a.get(r, col).is_zero()) else {
            continue;
        };
        if p != row {
            for c in 0..a.cols {
                a.entries.swap(p * a.cols + c, row * a.cols + c);
            }
        }
        let inv = a.get(row, col).recip();
        for c in col..a.cols {
            let v = a.get(row, c) * &inv;
            a.set(row, c, v);
        }
        for r in 0..a.rows {
            if r == row || a.get(r, col).is_zero() {
                continue;
            }
            let f = a.get(r, col).clone();
            for c in col..a.cols {
                let pv = a.get(row, c);
                if pv.is_zero() {
                    continue;
                }
                let v = a.get(r, c) - &f * pv;
                a.set(r, c, v);
            }
        }
        pivots.push(col);
        row += 1;
    }
    Rref { matrix: a, pivots }
}

/// Rank and a basis of the right kernel `{x : m x = 0}`.
pub fn rank_and_kernel(m: &ExactMatrix) -> (usize, Vec<Vec<ExactScalar>>) {
    let red = rref(m);
    let mut is_pivot = vec![false; m.cols];
    for &p in &red.pivots {
        is_pivot[p] = true;
    }
    let kernel = (0..m.cols)
        .filter(|&c| !is_pivot[c])
        .map(|free| {
            let mut v = vec![BigRational::zero(); m.cols];
            v[free] = BigRational::one();
            for (r, &p) in red.pivots.iter().enumerate() {
                v[p] = -red.matrix.get(r, free).clone();
            }
            v
        })
        .collect();
    (red.rank(), kernel)
}

/// Rank by fraction-free Bareiss elimination on the integer-scaled rows.
pub fn rank_bareiss(m: &ExactMatrix) -> usize {
    let mut a = m.integer_rows();
    let (rows, cols) = (m.rows, m.cols);
    let mut prev = BigInt::one();
    let mut rank = 0;
    for col in 0..cols {
        if rank == rows {
            break;
        }
        let Some(p) = (rank..rows).find(|&r| !a[r][col].is_zero()) else {
            continue;
        };
        a.swap(p, rank);
        let pivot = a[rank][col].clone();
        for r in rank + 1..rows {
            let lead = a[r][col].clone();
            for c in col..cols {
                let v = (&pivot * &a[r][c] - &lead * &a[rank][c]) / &prev;
                a[r][c] = v;
            }
        }
        prev = pivot;
        rank += 1;
    }
    rank
}

/// Rank by sparse integer elimination; rows are kept primitive.
pub fn rank_sparse(m: &ExactMatrix) -> usize {
    let rows = m.integer_rows();
    let mut pivot_rows: std::collections::BTreeMap<usize, Vec<(usize, BigInt)>> = std::collections::BTreeMap::new();
    for row in rows {
        let mut v: Vec<(usize, BigInt)> = row.into_iter().enumerate().filter(|(_, x)| !x.is_zero()).collect();
        loop {
            let Some((lead_col, lead)) = v.first().cloned() else { break };
            match pivot_rows.get(&lead_col) {
                None => {
                    pivot_rows.insert(lead_col, v);
                    break;
                }
                Some(p) => {
                    let pl = &p[0].1;
                    let g = pl.gcd(&lead);
                    let (fa, fb) = (pl / &g, &lead / &g);
                    v = sparse_combine(&v, &fa, p, &fb);
                    make_primitive(&mut v);
                }
            }
        }
    }
    pivot_rows.len()
}

fn sparse_combine(a: &[(usize, BigInt)], fa: &BigInt, b: &[(usize, BigInt)], fb: &BigInt) -> Vec<(usize, BigInt)> {
    // fa * a - fb * b, merged by column
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        let ca = a.get(i).map(|e| e.0).unwrap_or(usize::MAX);
        let cb = b.get(j).map(|e| e.0).unwrap_or(usize::MAX);
        let (c, v) = if ca < cb {
            i += 1;
            (ca, fa * &a[i - 1].1)
        } else if cb < ca {
            j += 1;
            (cb, -(fb * &b[j - 1].1))
        } else {
            i += 1;
            j += 1;
            (ca, fa * &a[i - 1].1 - fb * &b[j - 1].1)
        };
        if !v.is_zero() {
            out.push((c, v));
        }
    }
    out
}

fn make_primitive(v: &mut [(usize, BigInt)]) {
    let g = v.iter().fold(BigInt::zero(), |acc, (_, x)| acc.gcd(x));
    if !g.is_zero() && !g.is_one() {
        for e in v.iter_mut() {
            e.1 = &e.1 / &g;
        }
    }
    if v.first().is_some_and(|e| e.1.is_negative()) {
        for e in v.iter_mut() {
            e.1 = -e.1.clone();
        }
    }
}

/// Rank, choosing the sparse path when fewer than 10% of entries are nonzero.
pub fn rank(m: &ExactMatrix) -> usize {
    if m.rows == 0 || m.cols == 0 {
        return 0;
    }
    if m.density() < 0.1 {
        rank_sparse(m)
    } else {
        rank_bareiss(m)
    }
}
