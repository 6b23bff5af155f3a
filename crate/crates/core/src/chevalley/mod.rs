//! Split semisimple Lie algebras over the rationals in a Chevalley basis.
//!
//! Basis order: `h_1..h_n` (simple coroots), then `e_α` and `f_α` for the
//! positive roots in height order. For a non-simple root `γ`, let `α_i` be the
//! simple root of smallest index with `γ - α_i` a root; then
//! `e_γ = [e_i, e_{γ-α_i}]/(p+1)` and `f_γ = -[f_i, f_{γ-α_i}]/(p+1)`, with `p`
//! the largest integer such that `γ - α_i - pα_i` is a root. This makes every
//! extraspecial structure constant `+(p+1)`, and `f_α` is the image of `-e_α`
//! under the Chevalley involution. The structure constants are read off the
//! adjoint module, which is built from the Cartan matrix alone.

mod casimir;
mod module;
mod parabolic;

pub use casimir::{casimir_eigenvalue, casimir_operator, invariant_form_gram};
pub use module::{highest_weight_module, highest_weight_module_capped, WeightModule, DEFAULT_DIMENSION_CAP};
pub use parabolic::{parabolic_split, ParabolicSplit};

use std::collections::BTreeMap;

use num_traits::Zero;
use serde_json::{json, Value};

use crate::error::Result;
use crate::exact::{
    axpy, int, rref, scalar_to_string, sparse_from_map, ExactMatrix, ExactScalar, SparseMatrix, SparseVec, Weight,
};
use crate::rootsys::RootDatum;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BasisLabel {
    /// Simple coroot `h_i`.
    H(usize),
    /// Root vector of the positive root with this index.
    E(usize),
    /// Root vector of the negative of the positive root with this index.
    F(usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum RootStep {
    Simple(usize),
    Bracket { simple: usize, rest: usize, p: i64 },
}

/// How each positive root vector is produced from simpler ones.
pub(crate) fn root_recursion(datum: &RootDatum) -> Vec<RootStep> {
    let n = datum.rank();
    datum
        .positive_roots_simple()
        .iter()
        .map(|c| {
            if c.iter().sum::<i64>() == 1 {
                return RootStep::Simple(c.iter().position(|&x| x == 1).unwrap());
            }
            let root = |coords: &[i64]| -> Option<usize> {
                let w: Weight = (0..n).map(|j| (0..n).map(|i| coords[i] * datum.cartan_matrix()[i][j]).sum()).collect();
                datum.positive_root_index(&w)
            };
            for i in 0..n {
                if c[i] == 0 {
                    continue;
                }
                let mut beta = c.clone();
                beta[i] -= 1;
                if let Some(rest) = root(&beta) {
                    let mut p = 0;
                    let mut down = beta.clone();
                    loop {
                        down[i] -= 1;
                        let neg_or_pos = down.iter().all(|&x| x >= 0) && root(&down).is_some()
                            || down.iter().all(|&x| x <= 0)
                                && root(&down.iter().map(|x| -x).collect::<Vec<_>>()).is_some();
                        if !neg_or_pos {
                            break;
                        }
                        p += 1;
                    }
                    return RootStep::Bracket { simple: i, rest, p };
                }
            }
            unreachable!("every non-simple positive root is a simple root plus a positive root")
        })
        .collect()
}

/// Structure-constant Lie algebra in a Chevalley basis.
#[derive(Clone, Debug)]
pub struct ChevalleyAlgebra {
    datum: RootDatum,
    basis: Vec<BasisLabel>,
    weights: Vec<Weight>,
    brackets: Vec<Vec<SparseVec>>,
}

/// Constructs the algebra of the datum's type.
pub fn build_chevalley_algebra(datum: &RootDatum) -> Result<ChevalleyAlgebra> {
    ChevalleyAlgebra::new(datum)
}

impl ChevalleyAlgebra {
    pub fn new(datum: &RootDatum) -> Result<Self> {
        let n = datum.rank();
        let npos = datum.positive_roots().len();
        let mut basis: Vec<BasisLabel> = (0..n).map(BasisLabel::H).collect();
        basis.extend((0..npos).map(BasisLabel::E));
        basis.extend((0..npos).map(BasisLabel::F));
        let mut weights: Vec<Weight> = vec![vec![0; n]; n];
        weights.extend(datum.positive_roots().iter().cloned());
        weights.extend(datum.positive_roots().iter().map(|r| r.iter().map(|x| -x).collect()));

        let dim = basis.len();
        let mut brackets = vec![vec![Vec::new(); dim]; dim];
        if npos > 0 {
            // faithful realization on the adjoint module L(θ)
            let theta = datum.positive_roots().last().unwrap().clone();
            let rep = module::simple_generator_rep(datum, &theta);
            let (e, f) = module::root_vector_actions(datum, &rep);
            let mut mats: Vec<SparseMatrix> = (0..n)
                .map(|i| SparseMatrix::diagonal(&rep.weights.iter().map(|w| int(w[i])).collect::<Vec<_>>()))
                .collect();
            mats.extend(e);
            mats.extend(f);
            let diag_system: ExactMatrix = ExactMatrix::from_i64_rows(&rep.weights);
            for x in 0..dim {
                for y in x + 1..dim {
                    let c = mats[x].commutator(&mats[y]);
                    if c.is_zero() {
                        continue;
                    }
                    let w: Weight = weights[x].iter().zip(&weights[y]).map(|(a, b)| a + b).collect();
                    let coeffs = decompose(datum, &mats, &diag_system, &c, &w);
                    brackets[y][x] = coeffs.iter().map(|(k, v)| (*k, -v.clone())).collect();
                    brackets[x][y] = coeffs;
                }
            }
        }
        Ok(ChevalleyAlgebra { datum: datum.clone(), basis, weights, brackets })
    }

    pub fn datum(&self) -> &RootDatum {
        &self.datum
    }

    pub fn rank(&self) -> usize {
        self.datum.rank()
    }

    pub fn dimension(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[BasisLabel] {
        &self.basis
    }

    /// Weight of each basis element under the Cartan subalgebra.
    pub fn basis_weights(&self) -> &[Weight] {
        &self.weights
    }

    pub fn index_of(&self, label: BasisLabel) -> usize {
        let n = self.rank();
        let npos = self.datum.positive_roots().len();
        match label {
            BasisLabel::H(i) => i,
            BasisLabel::E(a) => n + a,
            BasisLabel::F(a) => n + npos + a,
        }
    }

    /// Index of the root vector for a (positive or negative) root.
    pub fn root_vector(&self, root: &[i64]) -> Option<usize> {
        if let Some(a) = self.datum.positive_root_index(root) {
            return Some(self.index_of(BasisLabel::E(a)));
        }
        let neg: Weight = root.iter().map(|x| -x).collect();
        self.datum.positive_root_index(&neg).map(|a| self.index_of(BasisLabel::F(a)))
    }

    pub fn label_string(&self, k: usize) -> String {
        let coords = |a: usize| {
            self.datum.positive_roots_simple()[a].iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
        };
        match self.basis[k] {
            BasisLabel::H(i) => format!("h{}", i + 1),
            BasisLabel::E(a) => format!("e({})", coords(a)),
            BasisLabel::F(a) => format!("f({})", coords(a)),
        }
    }

    /// `[x, y]` for basis indices, as a sparse combination of basis elements.
    pub fn bracket(&self, x: usize, y: usize) -> &SparseVec {
        &self.brackets[x][y]
    }

    /// Bracket of two sparse combinations.
    pub fn bracket_vectors(&self, u: &[(usize, ExactScalar)], v: &[(usize, ExactScalar)]) -> SparseVec {
        let mut acc = BTreeMap::new();
        for (x, a) in u {
            for (y, b) in v {
                axpy(&mut acc, &(a * b), &self.brackets[*x][*y]);
            }
        }
        sparse_from_map(acc)
    }

    /// Matrix of `ad x` in the basis.
    pub fn ad(&self, x: usize) -> SparseMatrix {
        SparseMatrix::from_columns(self.dimension(), self.brackets[x].clone())
    }

    /// `B(x, y) = tr(ad x ad y)` on the basis.
    pub fn killing_form(&self) -> ExactMatrix {
        let d = self.dimension();
        let ads: Vec<SparseMatrix> = (0..d).map(|x| self.ad(x)).collect();
        let mut b = ExactMatrix::zeros(d, d);
        for x in 0..d {
            for y in x..d {
                // only pairs of opposite weight can pair nontrivially
                let opposite = self.weights[x].iter().zip(&self.weights[y]).all(|(a, c)| a + c == 0);
                if !opposite {
                    continue;
                }
                let v = ads[x].trace_of_product(&ads[y]);
                b.set(x, y, v.clone());
                b.set(y, x, v);
            }
        }
        b
    }

    /// Checks the Jacobi identity on every basis triple.
    pub fn jacobi_holds(&self) -> bool {
        self.jacobi_violation().is_none()
    }

    pub fn jacobi_violation(&self) -> Option<(usize, usize, usize)> {
        let d = self.dimension();
        let unit = |k: usize| vec![(k, int(1))];
        for x in 0..d {
            for y in x + 1..d {
                let xy = self.bracket(x, y).clone();
                for z in y + 1..d {
                    let mut acc = BTreeMap::new();
                    axpy(&mut acc, &int(1), &self.bracket_vectors(&unit(x), self.bracket(y, z)));
                    axpy(&mut acc, &int(1), &self.bracket_vectors(&unit(y), self.bracket(z, x)));
                    axpy(&mut acc, &int(1), &self.bracket_vectors(&unit(z), &xy));
                    if !sparse_from_map(acc).is_empty() {
                        return Some((x, y, z));
                    }
                }
            }
        }
        None
    }

    pub fn is_antisymmetric(&self) -> bool {
        let d = self.dimension();
        (0..d).all(|x| {
            (0..d).all(|y| {
                let a = &self.brackets[x][y];
                let b = &self.brackets[y][x];
                a.len() == b.len() && a.iter().zip(b).all(|(p, q)| p.0 == q.0 && p.1 == -q.1.clone())
            })
        })
    }

    /// Structure constants as JSON: nonzero brackets of basis pairs `x < y`.
    pub fn to_json(&self) -> Value {
        let d = self.dimension();
        let mut table = Vec::new();
        for x in 0..d {
            for y in x + 1..d {
                let terms: Vec<Value> = self.brackets[x][y]
                    .iter()
                    .map(|(k, c)| json!({"basis": self.label_string(*k), "coeff": scalar_to_string(c)}))
                    .collect();
                if !terms.is_empty() {
                    table.push(json!({"x": self.label_string(x), "y": self.label_string(y), "bracket": terms}));
                }
            }
        }
        json!({
            "type": self.datum.label(),
            "dimension": d,
            "basis": (0..d).map(|k| self.label_string(k)).collect::<Vec<_>>(),
            "convention": "chevalley basis; e_γ = [e_i, e_{γ-α_i}]/(p+1) for the smallest such i; f_α = -ω(e_α)",
            "brackets": table,
        })
    }
}

/// Writes a commutator of basis images as a combination of basis images.
fn decompose(
    datum: &RootDatum,
    mats: &[SparseMatrix],
    diag_system: &ExactMatrix,
    c: &SparseMatrix,
    weight: &[i64],
) -> SparseVec {
    let n = datum.rank();
    let alg_index = |root: &[i64]| -> Option<usize> {
        let npos = datum.positive_roots().len();
        if let Some(a) = datum.positive_root_index(root) {
            return Some(n + a);
        }
        let neg: Weight = root.iter().map(|x| -x).collect();
        datum.positive_root_index(&neg).map(|a| n + npos + a)
    };
    let out: SparseVec = if weight.iter().all(|&x| x == 0) {
        // diagonal; solve Σ c_i w_i(v) = entry_v
        let dim = c.rows();
        let mut aug = ExactMatrix::zeros(dim, n + 1);
        for v in 0..dim {
            for i in 0..n {
                aug.set(v, i, diag_system.get(v, i).clone());
            }
            aug.set(v, n, c.get(v, v));
        }
        let red = rref(&aug);
        assert!(!red.pivots.contains(&n), "commutator is not in the Cartan subalgebra");
        let mut sol = vec![num_rational::BigRational::zero(); n];
        for (r, &p) in red.pivots.iter().enumerate() {
            sol[p] = red.matrix.get(r, n).clone();
        }
        sol.into_iter().enumerate().filter(|(_, v)| !v.is_zero()).collect()
    } else {
        let k = alg_index(weight).expect("nonzero commutator of root vectors must have a root weight");
        let target = &mats[k];
        let (r, col) = (0..target.cols())
            .find_map(|col| target.column(col).first().map(|e| (e.0, col)))
            .expect("root vectors act nontrivially");
        let coeff = c.get(r, col) / target.get(r, col);
        vec![(k, coeff)]
    };
    let mut check = SparseMatrix::zeros(c.rows(), c.cols());
    for (k, v) in &out {
        check = check.add(&mats[*k].scale(v));
    }
    assert_eq!(&check, c, "commutator does not decompose along the basis");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rootsys::build_root_system;

    fn alg(label: &str) -> ChevalleyAlgebra {
        build_chevalley_algebra(&build_root_system(label).unwrap()).unwrap()
    }

    #[test]
    fn a1_relations() {
        let g = alg("A1");
        assert_eq!(g.dimension(), 3);
        let (h, e, f) = (0, 1, 2);
        assert_eq!(g.bracket(e, f), &vec![(h, int(1))]);
        assert_eq!(g.bracket(h, e), &vec![(e, int(2))]);
        assert_eq!(g.bracket(h, f), &vec![(f, int(-2))]);
    }

    #[test]
    fn a2_extraspecial_sign() {
        let g = alg("A2");
        assert_eq!(g.dimension(), 8);
        let e1 = g.root_vector(&[2, -1]).unwrap();
        let e2 = g.root_vector(&[-1, 2]).unwrap();
        let e12 = g.root_vector(&[1, 1]).unwrap();
        assert_eq!(g.bracket(e1, e2), &vec![(e12, int(1))]);
    }

    #[test]
    fn dimensions() {
        for (label, dim) in [("B2", 10), ("G2", 14), ("A3", 15), ("C3", 21)] {
            assert_eq!(alg(label).dimension(), dim);
        }
    }

    #[test]
    fn jacobi_and_antisymmetry() {
        for label in ["A1", "A2", "B2", "C2", "G2", "A3"] {
            let g = alg(label);
            assert!(g.is_antisymmetric(), "{label}");
            assert_eq!(g.jacobi_violation(), None, "{label}");
        }
    }

    #[test]
    fn chevalley_basis_properties() {
        for label in ["A2", "B2", "G2", "B3"] {
            let g = alg(label);
            let d = g.datum().clone();
            let n = d.rank();
            for (a, root) in d.positive_roots().iter().enumerate() {
                let e = g.index_of(BasisLabel::E(a));
                let f = g.index_of(BasisLabel::F(a));
                // [e_α, f_α] = h_α, the coroot, in the basis of simple coroots
                let coroot: Vec<_> = {
                    let norm = d.weight_norm(root);
                    (0..n)
                        .map(|i| d.simple_coordinates(root)[i].clone() * int(2 * d.symmetrizer()[i]) / &norm)
                        .collect()
                };
                let expected: SparseVec = coroot.into_iter().enumerate().filter(|(_, v)| !v.is_zero()).collect();
                assert_eq!(g.bracket(e, f), &expected, "{label} {root:?}");
                // [h_i, e_α] = α(h_i) e_α
                for i in 0..n {
                    let expected: SparseVec = if root[i] == 0 { vec![] } else { vec![(e, int(root[i]))] };
                    assert_eq!(g.bracket(i, e), &expected);
                }
            }
            // N_{α,β} = ±(p+1)
            let roots: Vec<Weight> =
                d.positive_roots().iter().flat_map(|r| [r.clone(), r.iter().map(|x| -x).collect()]).collect();
            for a in &roots {
                for b in &roots {
                    let s: Weight = a.iter().zip(b).map(|(x, y)| x + y).collect();
                    if !d.is_root(&s) {
                        continue;
                    }
                    let mut p = 0;
                    let mut down: Weight = b.iter().zip(a).map(|(x, y)| x - y).collect();
                    while d.is_root(&down) {
                        p += 1;
                        down = down.iter().zip(a).map(|(x, y)| x - y).collect();
                    }
                    let br = g.bracket(g.root_vector(a).unwrap(), g.root_vector(b).unwrap());
                    assert_eq!(br.len(), 1);
                    assert_eq!(br[0].0, g.root_vector(&s).unwrap());
                    let abs = if br[0].1 < int(0) { -br[0].1.clone() } else { br[0].1.clone() };
                    assert_eq!(abs, int(p + 1), "{label} {a:?} {b:?}");
                }
            }
        }
    }

    #[test]
    fn killing_form_a1() {
        let g = alg("A1");
        let b = g.killing_form();
        assert_eq!(b.get(0, 0), &int(8));
        assert_eq!(b.get(1, 2), &int(4));
        assert_eq!(b.get(1, 1), &int(0));
    }

    #[test]
    fn killing_form_invariant_and_matches_cartan_formula() {
        for label in ["A2", "B2", "G2"] {
            let g = alg(label);
            let b = g.killing_form();
            let d = g.dimension();
            assert!(b.inverse().is_some());
            let bil = |u: &SparseVec, v: &SparseVec| {
                let mut acc = num_rational::BigRational::zero();
                for (i, a) in u {
                    for (j, c) in v {
                        acc += a * c * b.get(*i, *j);
                    }
                }
                acc
            };
            for x in 0..d {
                for y in 0..d {
                    for z in 0..d {
                        let lhs = bil(g.bracket(x, y), &vec![(z, int(1))]) + bil(&vec![(y, int(1))], g.bracket(x, z));
                        assert!(lhs.is_zero(), "{label} {x} {y} {z}");
                    }
                }
            }
            let n = g.rank();
            let kc = g.datum().killing_on_cartan();
            for i in 0..n {
                for j in 0..n {
                    assert_eq!(b.get(i, j), kc.get(i, j));
                }
            }
        }
    }
}
