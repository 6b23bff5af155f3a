//! Lie algebra cohomology and homology of the nilradical `n` of a parabolic
//! with coefficients in a finite-dimensional module.
//!
//! Cochains `V ⊗ ∧^q n*` have basis `v_b ⊗ e_I^*` for `q`-subsets `I` of the
//! roots of `n`, of weight `wt(v_b) - Σ_{α∈I} α`. Differentials preserve this
//! weight, so ranks are computed one weight block at a time.

use std::collections::{BTreeMap, HashMap};

use num_traits::Zero;
use serde_json::{json, Value};

use crate::chevalley::{ChevalleyAlgebra, ParabolicSplit, WeightModule};
use crate::error::{LefError, Result};
use crate::exact::{rank, scalar_to_string, ExactMatrix, ExactScalar, LaurentCharacter, Weight};
use crate::rootsys::dot_action;

/// Largest total number of (co)chains the complex will materialize.
pub const MAX_COCHAINS: u64 = 2_000_000;

/// Subset of the roots of `n`, as a bitmask over their positions.
type Subset = u128;

fn bits(s: Subset) -> impl Iterator<Item = usize> {
    (0..128).filter(move |i| s >> i & 1 == 1)
}

/// `#{r ∈ s : r < l}`.
fn below(s: Subset, l: usize) -> u32 {
    (s & ((1u128 << l) - 1)).count_ones()
}

fn sign(k: u32) -> i64 {
    if k % 2 == 0 {
        1
    } else {
        -1
    }
}

/// A structure constant of `n`: `[e_a, e_c] = coeff · e_l` with `a < c`.
#[derive(Clone, Debug)]
struct NBracket {
    a: usize,
    c: usize,
    l: usize,
    coeff: ExactScalar,
}

/// Data shared by the cochain and chain complexes.
#[derive(Clone, Debug)]
struct NilData {
    roots: Vec<Weight>,
    brackets: Vec<NBracket>,
    /// `actions[k]` is the module action of the `k`-th root vector of `n`.
    actions: Vec<crate::exact::SparseMatrix>,
    module_weights: Vec<Weight>,
    rank: usize,
}

impl NilData {
    fn new(alg: &ChevalleyAlgebra, split: &ParabolicSplit, module: &WeightModule) -> Result<Self> {
        let nb = split.n_basis(alg);
        if nb.len() > 127 {
            return Err(LefError::BoundTooLarge(format!("nilradical of dimension {}", nb.len())));
        }
        let total = (module.dimension() as u64).saturating_mul(1u64.checked_shl(nb.len() as u32).unwrap_or(u64::MAX));
        if total > MAX_COCHAINS {
            return Err(LefError::BoundTooLarge(format!(
                "{} x 2^{} cochains exceed {MAX_COCHAINS}",
                module.dimension(),
                nb.len()
            )));
        }
        let pos: HashMap<usize, usize> = nb.iter().enumerate().map(|(k, &x)| (x, k)).collect();
        let mut brackets = Vec::new();
        for a in 0..nb.len() {
            for c in a + 1..nb.len() {
                for (z, coeff) in alg.bracket(nb[a], nb[c]) {
                    let l = *pos.get(z).expect("n is a subalgebra");
                    brackets.push(NBracket { a, c, l, coeff: coeff.clone() });
                }
            }
        }
        Ok(NilData {
            roots: split.n_roots().to_vec(),
            brackets,
            actions: nb.iter().map(|&x| module.action(x).clone()).collect(),
            module_weights: module.weights().to_vec(),
            rank: alg.rank(),
        })
    }

    fn dim_n(&self) -> usize {
        self.roots.len()
    }

    fn subset_weight(&self, s: Subset) -> Weight {
        let mut w = vec![0; self.rank];
        for i in bits(s) {
            for (t, x) in w.iter_mut().zip(&self.roots[i]) {
                *t += x;
            }
        }
        w
    }

    /// Basis `(b, I)` of `V ⊗ ∧^q` grouped by degree and weight. `dir` is `-1`
    /// for cochains (`n*` weights) and `+1` for chains.
    fn graded_basis(&self, dir: i64) -> Vec<BTreeMap<Weight, Vec<(usize, Subset)>>> {
        let n = self.dim_n();
        let mut out = vec![BTreeMap::new(); n + 1];
        for s in 0..(1u128 << n) {
            let q = s.count_ones() as usize;
            let sw = self.subset_weight(s);
            for (b, vw) in self.module_weights.iter().enumerate() {
                let w: Weight = vw.iter().zip(&sw).map(|(x, y)| x + dir * y).collect();
                out[q].entry(w).or_insert_with(Vec::new).push((b, s));
            }
        }
        for deg in &mut out {
            for v in deg.values_mut() {
                v.sort_unstable();
            }
        }
        out
    }

    /// Image of `v_b ⊗ e_I^*` under the cochain differential, as `((b', J), c)` pairs.
    fn coboundary(&self, b: usize, s: Subset) -> Vec<((usize, Subset), ExactScalar)> {
        let mut acc: BTreeMap<(usize, Subset), ExactScalar> = BTreeMap::new();
        let mut push = |key: (usize, Subset), c: ExactScalar| {
            let e = acc.entry(key).or_insert_with(ExactScalar::zero);
            *e += c;
        };
        // Σ_i (-1)^i x_i·ω(..x̂_i..): x_i = e_k with J = I ∪ {k}
        for k in (0..self.dim_n()).filter(|k| s >> k & 1 == 0) {
            let j = s | (1 << k);
            let sg = crate::exact::int(sign(below(s, k)));
            for (r, v) in self.actions[k].column(b) {
                push((*r, j), v * &sg);
            }
        }
        // Σ_{i<j} (-1)^{i+j} ω([x_i,x_j], ..): [e_a, e_c] = N e_l with l ∈ I
        for br in &self.brackets {
            if s >> br.l & 1 == 0 {
                continue;
            }
            let rest = s & !(1 << br.l);
            if rest >> br.a & 1 == 1 || rest >> br.c & 1 == 1 {
                continue;
            }
            let j = rest | (1 << br.a) | (1 << br.c);
            let (pa, pc) = (below(j, br.a), below(j, br.c));
            let sg = sign(pa + pc + below(rest, br.l));
            push((b, j), &br.coeff * crate::exact::int(sg));
        }
        acc.into_iter().filter(|(_, v)| !v.is_zero()).collect()
    }

    /// Image of `v_b ⊗ e_I` under the chain boundary.
    fn boundary(&self, b: usize, s: Subset) -> Vec<((usize, Subset), ExactScalar)> {
        let mut acc: BTreeMap<(usize, Subset), ExactScalar> = BTreeMap::new();
        let mut push = |key: (usize, Subset), c: ExactScalar| {
            let e = acc.entry(key).or_insert_with(ExactScalar::zero);
            *e += c;
        };
        // Σ_i (-1)^{i+1} x_i·v ⊗ (..x̂_i..), positions counted from 0
        for k in bits(s) {
            let rest = s & !(1 << k);
            let sg = crate::exact::int(-sign(below(s, k)));
            for (r, v) in self.actions[k].column(b) {
                push((*r, rest), v * &sg);
            }
        }
        // Σ_{i<j} (-1)^{i+j} v ⊗ [x_i,x_j] ∧ (..x̂_i..x̂_j..)
        for br in &self.brackets {
            if s >> br.a & 1 == 0 || s >> br.c & 1 == 0 {
                continue;
            }
            let rest = s & !(1 << br.a) & !(1 << br.c);
            if rest >> br.l & 1 == 1 {
                continue;
            }
            let sg = sign(below(s, br.a) + below(s, br.c) + below(rest, br.l));
            push((b, rest | (1 << br.l)), &br.coeff * crate::exact::int(sg));
        }
        acc.into_iter().filter(|(_, v)| !v.is_zero()).collect()
    }
}

/// Per-weight matrix of a map between two graded pieces.
fn block_matrix<F>(src: &[(usize, Subset)], dst: &[(usize, Subset)], image: F) -> ExactMatrix
where
    F: Fn(usize, Subset) -> Vec<((usize, Subset), ExactScalar)>,
{
    let index: HashMap<(usize, Subset), usize> = dst.iter().enumerate().map(|(i, &k)| (k, i)).collect();
    let mut m = ExactMatrix::zeros(dst.len(), src.len());
    for (c, &(b, s)) in src.iter().enumerate() {
        for (key, v) in image(b, s) {
            let r = *index.get(&key).expect("differential preserves weight");
            m.set(r, c, v);
        }
    }
    m
}

/// The complex `V ⊗ ∧^• n*` with its weight-block differentials.
#[derive(Clone, Debug)]
pub struct CEComplex {
    split: ParabolicSplit,
    data: NilData,
    cochain_bases: Vec<BTreeMap<Weight, Vec<(usize, Subset)>>>,
    /// `differentials[q][μ]` maps the `μ` block of `C^q` to that of `C^{q+1}`.
    differentials: Vec<BTreeMap<Weight, ExactMatrix>>,
}

pub fn build_ce_complex(alg: &ChevalleyAlgebra, split: &ParabolicSplit, module: &WeightModule) -> Result<CEComplex> {
    let data = NilData::new(alg, split, module)?;
    let bases = data.graded_basis(-1);
    let n = data.dim_n();
    let empty = Vec::new();
    let mut differentials = Vec::with_capacity(n);
    for q in 0..n {
        let mut blocks = BTreeMap::new();
        for (w, src) in &bases[q] {
            let dst = bases[q + 1].get(w).unwrap_or(&empty);
            blocks.insert(w.clone(), block_matrix(src, dst, |b, s| data.coboundary(b, s)));
        }
        differentials.push(blocks);
    }
    Ok(CEComplex { split: split.clone(), data, cochain_bases: bases, differentials })
}

impl CEComplex {
    pub fn split(&self) -> &ParabolicSplit {
        &self.split
    }

    pub fn top_degree(&self) -> usize {
        self.data.dim_n()
    }

    pub fn cochain_dimension(&self, q: usize) -> usize {
        self.cochain_bases.get(q).map_or(0, |m| m.values().map(Vec::len).sum())
    }

    /// Cochain basis of degree `q` as `(module index, root positions in n, weight)`.
    pub fn cochain_basis(&self, q: usize) -> Vec<(usize, Vec<usize>, Weight)> {
        let mut out: Vec<_> = self.cochain_bases[q]
            .iter()
            .flat_map(|(w, v)| v.iter().map(move |&(b, s)| (b, bits(s).collect(), w.clone())))
            .collect();
        out.sort();
        out
    }

    /// Weight blocks of `d_q`.
    pub fn differential_blocks(&self, q: usize) -> &BTreeMap<Weight, ExactMatrix> {
        &self.differentials[q]
    }

    /// `d_{q+1} ∘ d_q = 0` on every weight block.
    pub fn d_squared_vanishes(&self) -> bool {
        (0..self.differentials.len().saturating_sub(1)).all(|q| {
            self.differentials[q].iter().all(|(w, d0)| match self.differentials[q + 1].get(w) {
                Some(d1) => d1.rows() == 0 || d0.cols() == 0 || d1.mul(d0).is_zero(),
                None => true,
            })
        })
    }

    /// Block ranks of `d_q` for every weight.
    fn ranks(&self) -> Vec<BTreeMap<Weight, usize>> {
        self.differentials.iter().map(|blocks| blocks.iter().map(|(w, m)| (w.clone(), rank(m))).collect()).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DegreeTable {
    pub q: usize,
    pub h_weights: BTreeMap<Weight, usize>,
    pub a_weights: BTreeMap<Vec<ExactScalar>, usize>,
}

impl DegreeTable {
    pub fn dimension(&self) -> usize {
        self.h_weights.values().sum()
    }
}

/// Weight-graded dimensions of (co)homology in each degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CohomologyTable {
    pub degrees: Vec<DegreeTable>,
    pub euler_character: LaurentCharacter,
}

impl CohomologyTable {
    fn from_h_tables(split: &ParabolicSplit, tables: Vec<BTreeMap<Weight, usize>>) -> Self {
        let rank = split.datum().rank();
        let mut euler = LaurentCharacter::zero(rank);
        let degrees = tables
            .into_iter()
            .enumerate()
            .map(|(q, h_weights)| {
                let mut a_weights = BTreeMap::new();
                for (w, &d) in &h_weights {
                    *a_weights.entry(split.a_weight(w)).or_insert(0) += d;
                    euler.add_term(w.clone(), if q % 2 == 0 { d as i64 } else { -(d as i64) });
                }
                DegreeTable { q, h_weights, a_weights }
            })
            .collect();
        CohomologyTable { degrees, euler_character: euler }
    }

    pub fn dimensions(&self) -> Vec<usize> {
        self.degrees.iter().map(DegreeTable::dimension).collect()
    }

    /// Character of degree `q`.
    pub fn character(&self, q: usize) -> LaurentCharacter {
        let rank = self.euler_character.rank();
        let mut c = LaurentCharacter::zero(rank);
        if let Some(d) = self.degrees.get(q) {
            for (w, &m) in &d.h_weights {
                c.add_term(w.clone(), m as i64);
            }
        }
        c
    }

    pub fn to_json(&self) -> Value {
        let degrees: Vec<Value> = self
            .degrees
            .iter()
            .map(|d| {
                json!({
                    "q": d.q,
                    "dimension": d.dimension(),
                    "h_weights": d.h_weights.iter().map(|(w, m)| json!({"weight": w, "dim": m})).collect::<Vec<_>>(),
                    "a_weights": d.a_weights.iter().map(|(w, m)| json!({
                        "weight": w.iter().map(scalar_to_string).collect::<Vec<_>>(),
                        "dim": m,
                    })).collect::<Vec<_>>(),
                })
            })
            .collect();
        json!({"degrees": degrees, "euler_character": self.euler_character.to_json()})
    }
}

/// `dim H^q_μ = dim C^q_μ - rank d_q,μ - rank d_{q-1},μ`.
pub fn cohomology_table(cx: &CEComplex) -> CohomologyTable {
    let ranks = cx.ranks();
    let n = cx.top_degree();
    let tables = (0..=n)
        .map(|q| {
            let mut t = BTreeMap::new();
            for (w, basis) in &cx.cochain_bases[q] {
                let out = if q < n { ranks[q].get(w).copied().unwrap_or(0) } else { 0 };
                let inc = if q > 0 { ranks[q - 1].get(w).copied().unwrap_or(0) } else { 0 };
                let d = basis.len() - out - inc;
                if d > 0 {
                    t.insert(w.clone(), d);
                }
            }
            t
        })
        .collect();
    CohomologyTable::from_h_tables(&cx.split, tables)
}

/// Kostant's theorem: `H^q(n, L(λ)) = ⊕_{w ∈ W^P, ℓ(w) = q} L_S(w·λ)`.
pub fn kostant_prediction(split: &ParabolicSplit, lam: &[i64]) -> Result<CohomologyTable> {
    let datum = split.datum();
    if lam.len() != datum.rank() {
        return Err(LefError::RankMismatch(lam.len(), datum.rank()));
    }
    if !datum.is_dominant(lam) {
        return Err(LefError::NotDominant(lam.to_vec()));
    }
    let levi = datum.subsystem(split.levi_simple_roots());
    let mut tables = vec![BTreeMap::new(); split.dim_n() + 1];
    for w in datum.minimal_coset_representatives(split.levi_simple_roots())? {
        let mu = dot_action(&w, lam, datum);
        for (wt, m) in levi.character(&mu)?.terms() {
            *tables[w.length].entry(wt.clone()).or_insert(0) += m as usize;
        }
    }
    Ok(CohomologyTable::from_h_tables(split, tables))
}

/// `Σ_q (-1)^q ch H^q = ch V · Σ_p (-1)^p ch ∧^p n*`.
pub fn euler_character_check(cx: &CEComplex, module: &WeightModule) -> bool {
    let table = cohomology_table(cx);
    let nstar: Vec<Weight> = cx.split.nbar_roots().to_vec();
    let rhs =
        module.character().product(&LaurentCharacter::product_one_minus(cx.data.rank, &nstar)).expect("same rank");
    table.euler_character == rhs
}

#[derive(Clone, Debug)]
pub struct HomologyResult {
    pub table: CohomologyTable,
    /// `ch H_p = ch H^{dim n - p} · x^{2ρ_P}` for every `p`.
    pub duality_holds: bool,
}

/// Homology of the chain complex `V ⊗ ∧^• n`, with the duality check against
/// cohomology.
pub fn homology_table(alg: &ChevalleyAlgebra, split: &ParabolicSplit, module: &WeightModule) -> Result<HomologyResult> {
    let data = NilData::new(alg, split, module)?;
    let bases = data.graded_basis(1);
    let n = data.dim_n();
    let empty = Vec::new();
    // ranks[p] = block ranks of ∂_p: C_p → C_{p-1}, for p ≥ 1
    let mut ranks: Vec<BTreeMap<Weight, usize>> = vec![BTreeMap::new(); n + 2];
    for p in 1..=n {
        for (w, src) in &bases[p] {
            let dst = bases[p - 1].get(w).unwrap_or(&empty);
            let m = block_matrix(src, dst, |b, s| data.boundary(b, s));
            ranks[p].insert(w.clone(), rank(&m));
        }
    }
    let tables: Vec<BTreeMap<Weight, usize>> = (0..=n)
        .map(|p| {
            let mut t = BTreeMap::new();
            for (w, basis) in &bases[p] {
                let out = ranks[p].get(w).copied().unwrap_or(0);
                let inc = ranks[p + 1].get(w).copied().unwrap_or(0);
                let d = basis.len() - out - inc;
                if d > 0 {
                    t.insert(w.clone(), d);
                }
            }
            t
        })
        .collect();
    let table = CohomologyTable::from_h_tables(split, tables);
    let coh = cohomology_table(&build_ce_complex(alg, split, module)?);
    let top = split.two_rho_p();
    let duality_holds = (0..=n).all(|p| table.character(p) == coh.character(n - p).shifted(top));
    Ok(HomologyResult { table, duality_holds })
}

/// Boundary of the chain complex squares to zero; exposed for testing the
/// sign conventions.
pub fn boundary_squared_vanishes(
    alg: &ChevalleyAlgebra,
    split: &ParabolicSplit,
    module: &WeightModule,
) -> Result<bool> {
    let data = NilData::new(alg, split, module)?;
    let bases = data.graded_basis(1);
    let empty = Vec::new();
    for p in 2..=data.dim_n() {
        for (w, src) in &bases[p] {
            let mid = bases[p - 1].get(w).unwrap_or(&empty);
            let dst = bases[p - 2].get(w).unwrap_or(&empty);
            let d1 = block_matrix(src, mid, |b, s| data.boundary(b, s));
            let d0 = block_matrix(mid, dst, |b, s| data.boundary(b, s));
            if d0.rows() > 0 && d1.cols() > 0 && !d0.mul(&d1).is_zero() {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chevalley::{build_chevalley_algebra, highest_weight_module, parabolic_split};
    use crate::rootsys::build_root_system;

    fn setup(label: &str, levi: &[usize], lam: &[i64]) -> (ChevalleyAlgebra, ParabolicSplit, WeightModule) {
        let g = build_chevalley_algebra(&build_root_system(label).unwrap()).unwrap();
        let s = parabolic_split(&g, levi).unwrap();
        let m = highest_weight_module(&g, lam).unwrap();
        (g, s, m)
    }

    #[test]
    fn a1_borel_trivial() {
        let (g, s, m) = setup("A1", &[], &[0]);
        let cx = build_ce_complex(&g, &s, &m).unwrap();
        assert_eq!((cx.cochain_dimension(0), cx.cochain_dimension(1)), (1, 1));
        assert!(cx.differential_blocks(0).values().all(ExactMatrix::is_zero));
        let t = cohomology_table(&cx);
        assert_eq!(t.degrees[0].h_weights, BTreeMap::from([(vec![0], 1)]));
        assert_eq!(t.degrees[1].h_weights, BTreeMap::from([(vec![-2], 1)]));
        assert!(euler_character_check(&cx, &m));
        let h = homology_table(&g, &s, &m).unwrap();
        assert_eq!(h.table.degrees[1].h_weights, BTreeMap::from([(vec![2], 1)]));
        assert!(h.duality_holds);
    }

    #[test]
    fn a1_borel_adjoint() {
        let (g, s, m) = setup("A1", &[], &[2]);
        let t = cohomology_table(&build_ce_complex(&g, &s, &m).unwrap());
        assert_eq!(t.degrees[0].h_weights, BTreeMap::from([(vec![2], 1)]));
        assert_eq!(t.degrees[1].h_weights, BTreeMap::from([(vec![-4], 1)]));
    }

    #[test]
    fn a2_borel_trivial() {
        let (g, s, m) = setup("A2", &[], &[0, 0]);
        let cx = build_ce_complex(&g, &s, &m).unwrap();
        assert_eq!((0..4).map(|q| cx.cochain_dimension(q)).collect::<Vec<_>>(), vec![1, 3, 3, 1]);
        assert!(cx.d_squared_vanishes());
        assert_eq!(cohomology_table(&cx).dimensions(), vec![1, 2, 2, 1]);
        let h = homology_table(&g, &s, &m).unwrap();
        assert_eq!(h.table.dimensions().iter().sum::<usize>(), 6);
    }

    #[test]
    fn kostant_examples() {
        let (_, s, _) = setup("A2", &[0], &[1, 1]);
        let k = kostant_prediction(&s, &[1, 1]).unwrap();
        assert_eq!(k.degrees.len(), 3);
        assert!(k.degrees.iter().all(|d| d.dimension() > 0));
        let (_, b, _) = setup("A2", &[], &[0, 0]);
        assert_eq!(kostant_prediction(&b, &[0, 0]).unwrap().dimensions(), vec![1, 2, 2, 1]);
        assert!(kostant_prediction(&b, &[-1, 0]).is_err());
    }

    #[test]
    fn full_levi_is_degenerate() {
        let (g, s, m) = setup("A2", &[0, 1], &[1, 0]);
        let cx = build_ce_complex(&g, &s, &m).unwrap();
        assert_eq!(cohomology_table(&cx).character(0), m.character());
        assert!(euler_character_check(&cx, &m));
        assert!(homology_table(&g, &s, &m).unwrap().duality_holds);
    }

    #[test]
    fn sweep_matches_kostant() {
        for label in ["A1", "A2", "B2"] {
            let d = build_root_system(label).unwrap();
            let g = build_chevalley_algebra(&d).unwrap();
            let n = d.rank();
            for code in 0..3usize.pow(n as u32) {
                let lam: Vec<i64> = (0..n).map(|j| ((code / 3usize.pow(j as u32)) % 3) as i64).collect();
                let m = highest_weight_module(&g, &lam).unwrap();
                for mask in 0..(1usize << n) {
                    let levi: Vec<usize> = (0..n).filter(|i| mask >> i & 1 == 1).collect();
                    let s = parabolic_split(&g, &levi).unwrap();
                    let cx = build_ce_complex(&g, &s, &m).unwrap();
                    assert!(cx.d_squared_vanishes(), "{label} {lam:?} {levi:?}");
                    assert_eq!(
                        cohomology_table(&cx),
                        kostant_prediction(&s, &lam).unwrap(),
                        "{label} {lam:?} {levi:?}"
                    );
                    assert!(euler_character_check(&cx, &m));
                    assert!(boundary_squared_vanishes(&g, &s, &m).unwrap());
                    assert!(homology_table(&g, &s, &m).unwrap().duality_holds, "{label} {lam:?} {levi:?}");
                }
            }
        }
    }
}
