//! Irreducible highest-weight modules built from lowering operators.
//!
//! Weight spaces are produced depth by depth below the highest weight. In a
//! weight space `μ` the candidates `f_i u` (with `u` a basis vector of weight
//! `μ + α_i`) span; a combination vanishes in the irreducible quotient exactly
//! when every raising operator kills it. Raising operators are evaluated
//! through `e_j f_i u = f_i e_j u + δ_ij ⟨wt u, α_i^∨⟩ u`, which only needs data
//! from the two previous depths. A maximal independent set of candidates is
//! kept as the basis.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use num_traits::Zero;

use super::ChevalleyAlgebra;
use crate::error::{LefError, Result};
use crate::exact::{axpy, int, rref, sparse_from_map, ExactMatrix, LaurentCharacter, SparseMatrix, SparseVec, Weight};
use crate::rootsys::RootDatum;

pub const DEFAULT_DIMENSION_CAP: u64 = 5000;

/// Action of the simple generators on an irreducible module.
pub(crate) struct SimpleGeneratorRep {
    pub weights: Vec<Weight>,
    pub e: Vec<SparseMatrix>,
    pub f: Vec<SparseMatrix>,
}

pub(crate) fn simple_generator_rep(datum: &RootDatum, lam: &[i64]) -> SimpleGeneratorRep {
    let n = datum.rank();
    let simple: Vec<Weight> = datum.simple_roots();
    let add = |a: &[i64], b: &[i64]| -> Weight { a.iter().zip(b).map(|(x, y)| x + y).collect() };
    let sub = |a: &[i64], b: &[i64]| -> Weight { a.iter().zip(b).map(|(x, y)| x - y).collect() };

    let mut weights: Vec<Weight> = vec![lam.to_vec()];
    let mut space: HashMap<Weight, Vec<usize>> = HashMap::new();
    space.insert(lam.to_vec(), vec![0]);
    // e_act[j][b] = e_j applied to basis vector b; same for f_act
    let mut e_act: Vec<Vec<SparseVec>> = vec![vec![Vec::new()]; n];
    let mut f_act: Vec<Vec<SparseVec>> = vec![vec![Vec::new()]; n];

    let mut level: Vec<Weight> = vec![lam.to_vec()];
    while !level.is_empty() {
        let targets: BTreeSet<Weight> = level.iter().flat_map(|nu| simple.iter().map(move |a| sub(nu, a))).collect();
        let mut next_level = Vec::new();
        for mu in targets {
            let mut cands: Vec<(usize, usize)> = Vec::new();
            for (i, a) in simple.iter().enumerate() {
                if let Some(us) = space.get(&add(&mu, a)) {
                    cands.extend(us.iter().map(|&u| (i, u)));
                }
            }
            let mut row_of: HashMap<usize, usize> = HashMap::new();
            let mut row_basis: Vec<(usize, usize)> = Vec::new();
            for (j, a) in simple.iter().enumerate() {
                if let Some(vs) = space.get(&add(&mu, a)) {
                    for &v in vs {
                        row_of.insert(v, row_basis.len());
                        row_basis.push((j, v));
                    }
                }
            }
            if row_basis.is_empty() || cands.is_empty() {
                continue;
            }
            let mut phi = ExactMatrix::zeros(row_basis.len(), cands.len());
            for (c, &(i, u)) in cands.iter().enumerate() {
                for j in 0..n {
                    let mut acc = BTreeMap::new();
                    for (v, coef) in &e_act[j][u] {
                        axpy(&mut acc, coef, &f_act[i][*v]);
                    }
                    if i == j {
                        axpy(&mut acc, &int(weights[u][i]), &[(u, int(1))]);
                    }
                    for (r, val) in acc {
                        if !val.is_zero() {
                            phi.set(row_of[&r], c, val);
                        }
                    }
                }
            }
            let red = rref(&phi);
            if red.rank() == 0 {
                continue;
            }
            let mut new_idx = Vec::with_capacity(red.rank());
            for &p in &red.pivots {
                let b = weights.len();
                weights.push(mu.clone());
                for j in 0..n {
                    let mut col: SparseVec = Vec::new();
                    for (r, &(jj, v)) in row_basis.iter().enumerate() {
                        if jj == j && !phi.get(r, p).is_zero() {
                            col.push((v, phi.get(r, p).clone()));
                        }
                    }
                    col.sort_by_key(|e| e.0);
                    e_act[j].push(col);
                    f_act[j].push(Vec::new());
                }
                new_idx.push(b);
            }
            for (c, &(i, u)) in cands.iter().enumerate() {
                let coeffs = red.column_in_pivot_basis(c);
                let mut map = BTreeMap::new();
                for (q, &b) in coeffs.into_iter().zip(&new_idx) {
                    map.insert(b, q);
                }
                f_act[i][u] = sparse_from_map(map);
            }
            space.insert(mu.clone(), new_idx);
            next_level.push(mu);
        }
        level = next_level;
    }
    let dim = weights.len();
    SimpleGeneratorRep {
        weights,
        e: e_act.into_iter().map(|cols| SparseMatrix::from_columns(dim, cols)).collect(),
        f: f_act.into_iter().map(|cols| SparseMatrix::from_columns(dim, cols)).collect(),
    }
}

/// Extends simple-generator actions to every root vector via
/// `e_γ = [e_i, e_β]/(p+1)` and `f_γ = -[f_i, f_β]/(p+1)`.
pub(crate) fn root_vector_actions(
    datum: &RootDatum,
    rep: &SimpleGeneratorRep,
) -> (Vec<SparseMatrix>, Vec<SparseMatrix>) {
    let recursion = super::root_recursion(datum);
    let npos = datum.positive_roots().len();
    let mut e: Vec<Option<SparseMatrix>> = vec![None; npos];
    let mut f: Vec<Option<SparseMatrix>> = vec![None; npos];
    for (k, step) in recursion.iter().enumerate() {
        match step {
            super::RootStep::Simple(i) => {
                e[k] = Some(rep.e[*i].clone());
                f[k] = Some(rep.f[*i].clone());
            }
            super::RootStep::Bracket { simple, rest, p } => {
                let c = int(1) / int(p + 1);
                let i = datum.positive_root_index(&datum.simple_root(*simple)).unwrap();
                let eb = e[*rest].as_ref().unwrap();
                let fb = f[*rest].as_ref().unwrap();
                e[k] = Some(e[i].as_ref().unwrap().commutator(eb).scale(&c));
                f[k] = Some(f[i].as_ref().unwrap().commutator(fb).scale(&-c));
            }
        }
    }
    (e.into_iter().map(Option::unwrap).collect(), f.into_iter().map(Option::unwrap).collect())
}

/// Finite-dimensional irreducible module with exact action matrices for every
/// Chevalley basis element.
#[derive(Clone, Debug)]
pub struct WeightModule {
    highest_weight: Weight,
    weights: Vec<Weight>,
    /// Indexed like the algebra basis.
    action: Vec<SparseMatrix>,
}

impl WeightModule {
    pub fn highest_weight(&self) -> &Weight {
        &self.highest_weight
    }

    pub fn dimension(&self) -> usize {
        self.weights.len()
    }

    /// Weight of each basis vector.
    pub fn weights(&self) -> &[Weight] {
        &self.weights
    }

    pub fn action(&self, basis_index: usize) -> &SparseMatrix {
        &self.action[basis_index]
    }

    pub fn action_matrix(&self, basis_index: usize) -> ExactMatrix {
        self.action[basis_index].to_dense()
    }

    pub fn character(&self) -> LaurentCharacter {
        let rank = self.highest_weight.len();
        LaurentCharacter::from_weights(rank, self.weights.iter().cloned())
    }

    /// Checks `[ρ(x), ρ(y)] = ρ([x, y])` for every pair of basis elements.
    pub fn satisfies_bracket_relations(&self, alg: &ChevalleyAlgebra) -> bool {
        let d = alg.dimension();
        for x in 0..d {
            for y in x + 1..d {
                let lhs = self.action[x].commutator(&self.action[y]);
                let mut rhs = SparseMatrix::zeros(self.dimension(), self.dimension());
                for (z, c) in alg.bracket(x, y) {
                    rhs = rhs.add(&self.action[*z].scale(c));
                }
                if lhs != rhs {
                    return false;
                }
            }
        }
        true
    }

    /// The Cartan elements act diagonally with the listed weights.
    pub fn cartan_is_diagonal(&self) -> bool {
        let n = self.highest_weight.len();
        (0..n).all(|i| {
            let diag: Vec<_> = self.weights.iter().map(|w| int(w[i])).collect();
            self.action[i] == SparseMatrix::diagonal(&diag)
        })
    }
}

/// Irreducible module of highest weight `lam` with the default dimension cap.
pub fn highest_weight_module(alg: &ChevalleyAlgebra, lam: &[i64]) -> Result<WeightModule> {
    highest_weight_module_capped(alg, lam, DEFAULT_DIMENSION_CAP)
}

pub fn highest_weight_module_capped(alg: &ChevalleyAlgebra, lam: &[i64], cap: u64) -> Result<WeightModule> {
    let datum = alg.datum();
    if lam.len() != datum.rank() {
        return Err(LefError::RankMismatch(lam.len(), datum.rank()));
    }
    let dim = datum.weyl_dimension(lam)?;
    if dim > cap {
        return Err(LefError::DimensionCap { dim, cap });
    }
    let rep = simple_generator_rep(datum, lam);
    debug_assert_eq!(rep.weights.len() as u64, dim);
    let (e, f) = root_vector_actions(datum, &rep);
    let n = datum.rank();
    let mut action: Vec<SparseMatrix> = (0..n)
        .map(|i| {
            let diag: Vec<_> = rep.weights.iter().map(|w| int(w[i])).collect();
            SparseMatrix::diagonal(&diag)
        })
        .collect();
    action.extend(e);
    action.extend(f);
    Ok(WeightModule { highest_weight: lam.to_vec(), weights: rep.weights, action })
}
