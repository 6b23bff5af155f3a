use serde_json::{json, Value};

use super::{BasisLabel, ChevalleyAlgebra};
use crate::error::Result;
use crate::exact::{scalar_to_string, ExactScalar, Weight};
use crate::rootsys::RootDatum;

/// Reductive part of the Levi factor: the semisimple rank-`|S|` piece.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LeviPart {
    pub simple_roots: Vec<usize>,
    /// Cartan matrix of the Levi root system, in the order of `simple_roots`.
    pub cartan: Vec<Vec<i64>>,
    pub symmetrizer: Vec<i64>,
    /// Positive roots of `g` lying in the Levi span.
    pub positive_roots: Vec<Weight>,
    pub dimension: usize,
}

/// `g = a ⊕ m ⊕ n ⊕ n̄` for the standard parabolic with Levi simple roots `S`.
#[derive(Clone, Debug)]
pub struct ParabolicSplit {
    datum: RootDatum,
    levi: Vec<usize>,
    complement: Vec<usize>,
    /// Fundamental coweights `ω_j^∨` (`j ∉ S`) in simple-coroot coordinates.
    a_basis: Vec<Vec<ExactScalar>>,
    m_part: LeviPart,
    n_indices: Vec<usize>,
    n_roots: Vec<Weight>,
    nbar_roots: Vec<Weight>,
    two_rho_p: Weight,
}

pub fn parabolic_split(alg: &ChevalleyAlgebra, levi: &[usize]) -> Result<ParabolicSplit> {
    ParabolicSplit::new(alg.datum(), levi)
}

impl ParabolicSplit {
    pub fn new(datum: &RootDatum, levi: &[usize]) -> Result<Self> {
        let n = datum.rank();
        let mut levi = levi.to_vec();
        levi.sort_unstable();
        levi.dedup();
        if let Some(&bad) = levi.iter().find(|&&i| i >= n) {
            return Err(crate::LefError::InvalidInput(format!("Levi index {} out of range", bad + 1)));
        }
        let complement: Vec<usize> = (0..n).filter(|j| !levi.contains(j)).collect();
        let cinv = {
            let c = crate::exact::ExactMatrix::from_i64_rows(datum.cartan_matrix());
            if n == 0 {
                c
            } else {
                c.inverse().expect("Cartan matrix is invertible")
            }
        };
        // α_i(ω_j^∨) = δ_ij with α_i(h_k) = C[i][k]
        let a_basis = complement.iter().map(|&j| (0..n).map(|k| cinv.get(k, j).clone()).collect()).collect();

        let mut n_indices = Vec::new();
        let mut levi_roots = Vec::new();
        for (k, c) in datum.positive_roots_simple().iter().enumerate() {
            if complement.iter().any(|&j| c[j] != 0) {
                n_indices.push(k);
            } else {
                levi_roots.push(datum.positive_roots()[k].clone());
            }
        }
        let n_roots: Vec<Weight> = n_indices.iter().map(|&k| datum.positive_roots()[k].clone()).collect();
        let nbar_roots = n_roots.iter().map(|r| r.iter().map(|x| -x).collect()).collect();
        let mut two_rho_p = vec![0; n];
        for r in &n_roots {
            for (t, x) in two_rho_p.iter_mut().zip(r) {
                *t += x;
            }
        }
        let m_part = LeviPart {
            cartan: levi.iter().map(|&i| levi.iter().map(|&j| datum.cartan_matrix()[i][j]).collect()).collect(),
            symmetrizer: levi.iter().map(|&i| datum.symmetrizer()[i]).collect(),
            dimension: levi.len() + 2 * levi_roots.len(),
            positive_roots: levi_roots,
            simple_roots: levi.clone(),
        };
        Ok(ParabolicSplit {
            datum: datum.clone(),
            levi,
            complement,
            a_basis,
            m_part,
            n_indices,
            n_roots,
            nbar_roots,
            two_rho_p,
        })
    }

    pub fn datum(&self) -> &RootDatum {
        &self.datum
    }

    pub fn levi_simple_roots(&self) -> &[usize] {
        &self.levi
    }

    /// Simple-root indices outside the Levi; they index the `a` coordinates.
    pub fn a_indices(&self) -> &[usize] {
        &self.complement
    }

    pub fn a_basis(&self) -> &[Vec<ExactScalar>] {
        &self.a_basis
    }

    pub fn dim_a(&self) -> usize {
        self.complement.len()
    }

    pub fn m_part(&self) -> &LeviPart {
        &self.m_part
    }

    pub fn dim_m(&self) -> usize {
        self.m_part.dimension
    }

    pub fn dim_n(&self) -> usize {
        self.n_roots.len()
    }

    /// Positive-root indices (in the datum's order) of the roots of `n`.
    pub fn n_indices(&self) -> &[usize] {
        &self.n_indices
    }

    pub fn n_roots(&self) -> &[Weight] {
        &self.n_roots
    }

    pub fn nbar_roots(&self) -> &[Weight] {
        &self.nbar_roots
    }

    /// Sum of the roots of `n`, as an `h`-weight.
    pub fn two_rho_p(&self) -> &Weight {
        &self.two_rho_p
    }

    /// Restriction of an `h`-weight to `a`: its values on the `ω_j^∨`.
    pub fn a_weight(&self, w: &[i64]) -> Vec<ExactScalar> {
        let coords = self.datum.simple_coordinates(w);
        self.complement.iter().map(|&j| coords[j].clone()).collect()
    }

    pub fn two_rho_p_on_a(&self) -> Vec<ExactScalar> {
        self.a_weight(&self.two_rho_p)
    }

    /// Levi root datum from the Cartan submatrix.
    pub fn levi_datum(&self) -> RootDatum {
        RootDatum::from_cartan(
            &format!("levi{:?}", self.levi.iter().map(|i| i + 1).collect::<Vec<_>>()),
            self.m_part.cartan.clone(),
            self.m_part.symmetrizer.clone(),
        )
        .expect("Levi subsystem is of finite type")
    }

    /// Algebra basis indices spanning `n`.
    pub fn n_basis(&self, alg: &ChevalleyAlgebra) -> Vec<usize> {
        self.n_indices.iter().map(|&k| alg.index_of(BasisLabel::E(k))).collect()
    }

    /// Algebra basis indices spanning `a ⊕ m` (all of `h` plus Levi root vectors).
    pub fn levi_basis(&self, alg: &ChevalleyAlgebra) -> Vec<usize> {
        let npos = self.datum.positive_roots().len();
        let mut out: Vec<usize> = (0..self.datum.rank()).collect();
        for k in (0..npos).filter(|k| !self.n_indices.contains(k)) {
            out.push(alg.index_of(BasisLabel::E(k)));
            out.push(alg.index_of(BasisLabel::F(k)));
        }
        out
    }

    pub fn n_is_subalgebra(&self, alg: &ChevalleyAlgebra) -> bool {
        let nb = self.n_basis(alg);
        nb.iter().all(|&x| nb.iter().all(|&y| alg.bracket(x, y).iter().all(|(z, _)| nb.contains(z))))
    }

    /// `[a ⊕ m, n] ⊆ n`.
    pub fn n_is_normalized(&self, alg: &ChevalleyAlgebra) -> bool {
        let nb = self.n_basis(alg);
        self.levi_basis(alg).iter().all(|&x| nb.iter().all(|&y| alg.bracket(x, y).iter().all(|(z, _)| nb.contains(z))))
    }

    pub fn dimensions_add_up(&self, alg: &ChevalleyAlgebra) -> bool {
        self.dim_a() + self.dim_m() + 2 * self.dim_n() == alg.dimension()
    }

    pub fn to_json(&self) -> Value {
        let q = |v: &[ExactScalar]| v.iter().map(scalar_to_string).collect::<Vec<_>>();
        json!({
            "type": self.datum.label(),
            "levi_simple_roots": self.levi.iter().map(|i| i + 1).collect::<Vec<_>>(),
            "dim_a": self.dim_a(),
            "dim_m": self.dim_m(),
            "dim_n": self.dim_n(),
            "a_basis": self.a_basis.iter().map(|v| q(v)).collect::<Vec<_>>(),
            "m_cartan": self.m_part.cartan,
            "m_positive_roots": self.m_part.positive_roots,
            "n_roots": self.n_roots,
            "nbar_roots": self.nbar_roots,
            "two_rho_P": self.two_rho_p,
            "two_rho_P_on_a": q(&self.two_rho_p_on_a()),
        })
    }
}
