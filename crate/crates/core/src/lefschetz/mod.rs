//! Both sides of the higher-rank Lefschetz formula for finite-dimensional
//! data: spectral terms from nilradical cohomology, geometric coefficients of
//! closed-geodesic classes, and the identities linking them.

mod balance;

pub use balance::{
    balance_evaluator, geometric_term, integrate_testfn, BalanceResult, GeodesicClassRecord, Ledger, NWeight,
    SpectralEntry, SpectralInput, TestFunction, TestPiece,
};

use std::collections::BTreeMap;

use serde_json::{json, Value};

use crate::chevalley::{ChevalleyAlgebra, ParabolicSplit, WeightModule};
use crate::error::{LefError, Result};
use crate::euler::decompose_virtual;
use crate::exact::{scalar_to_string, ExactScalar, LaurentCharacter, Weight};
use crate::nilcohomology::{build_ce_complex, cohomology_table, homology_table, CohomologyTable};
use crate::rootsys::RootDatum;

/// `Σ_r (-1)^r tr(t | ∧^r n) = ∏_{w} (1 - t^w)` at a rational torus point.
pub fn det_identity_check(n_weights: &[Weight], point: &[ExactScalar]) -> Result<bool> {
    let rank = point.len();
    if let Some(w) = n_weights.iter().find(|w| w.len() != rank) {
        return Err(LefError::RankMismatch(w.len(), rank));
    }
    let lhs =
        LaurentCharacter::from_weights(rank, n_weights.iter().cloned()).alternating_exterior_sum()?.evaluate(point)?;
    let mut rhs = crate::exact::int(1);
    for w in n_weights {
        rhs *= crate::exact::int(1) - LaurentCharacter::monomial(w.clone()).evaluate(point)?;
    }
    Ok(lhs == rhs)
}

/// How `K_M`-invariants are extracted from `M`-modules.
#[derive(Clone, Debug)]
pub enum InvariantExtractor {
    /// `K_M` is the compact form of the Levi: weights restrict to the Levi
    /// simple coroots.
    CompactLevi,
    /// `K_M` given by its own Cartan data, with `h`-weights mapped to its
    /// weights by `projection` (rows: `K_M` coordinates).
    Explicit { projection: Vec<Vec<i64>>, km_cartan: Vec<Vec<i64>>, km_symmetrizer: Vec<i64> },
}

impl InvariantExtractor {
    pub fn from_name(name: &str) -> Result<Self> {
        match name {
            "compact-levi" => Ok(InvariantExtractor::CompactLevi),
            other => Err(LefError::UnsupportedExtractor(other.to_string())),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            InvariantExtractor::CompactLevi => "compact-levi",
            InvariantExtractor::Explicit { .. } => "explicit",
        }
    }
}

/// `p_M` as a `K_M`-module together with the invariant extractor.
#[derive(Clone, Debug)]
pub struct LeviRealForm {
    pub p_m_char: LaurentCharacter,
    pub extractor: InvariantExtractor,
}

impl LeviRealForm {
    /// Compact Levi with `p_M = 0`.
    pub fn compact(split: &ParabolicSplit) -> Self {
        LeviRealForm {
            p_m_char: LaurentCharacter::zero(split.levi_simple_roots().len()),
            extractor: InvariantExtractor::CompactLevi,
        }
    }

    /// Root datum of `K_M` and the projection of `h`-weights to its weights.
    fn km(&self, split: &ParabolicSplit) -> Result<(RootDatum, Box<dyn Fn(&[i64]) -> Weight>)> {
        match &self.extractor {
            InvariantExtractor::CompactLevi => {
                let levi = split.levi_simple_roots().to_vec();
                Ok((split.levi_datum(), Box::new(move |w: &[i64]| levi.iter().map(|&i| w[i]).collect())))
            }
            InvariantExtractor::Explicit { projection, km_cartan, km_symmetrizer } => {
                let n = split.datum().rank();
                if projection.len() != km_cartan.len() {
                    return Err(LefError::RankMismatch(projection.len(), km_cartan.len()));
                }
                if let Some(row) = projection.iter().find(|r| r.len() != n) {
                    return Err(LefError::RankMismatch(row.len(), n));
                }
                let datum = RootDatum::from_cartan("K_M", km_cartan.clone(), km_symmetrizer.clone())?;
                let p = projection.clone();
                Ok((
                    datum,
                    Box::new(move |w: &[i64]| {
                        p.iter().map(|row| row.iter().zip(w).map(|(a, b)| a * b).sum()).collect()
                    }),
                ))
            }
        }
    }
}

/// `λ ↦ m_λ` over rational `a`-weights.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SpectralTermTable {
    pub entries: BTreeMap<Vec<ExactScalar>, i64>,
}

impl SpectralTermTable {
    pub fn add(&self, other: &SpectralTermTable) -> SpectralTermTable {
        let mut entries = self.entries.clone();
        for (k, v) in &other.entries {
            *entries.entry(k.clone()).or_insert(0) += v;
        }
        entries.retain(|_, v| *v != 0);
        SpectralTermTable { entries }
    }

    pub fn to_json(&self) -> Value {
        Value::Array(
            self.entries
                .iter()
                .map(|(l, m)| json!({"lambda": l.iter().map(scalar_to_string).collect::<Vec<_>>(), "m": m}))
                .collect(),
        )
    }
}

/// `m_λ = Σ_{p,q} (-1)^{p+q+dim N} dim(H^q(n,V)^λ ⊗ ∧^p p_M ⊗ V_τ̆)^{K_M}`.
pub fn spectral_term(
    alg: &ChevalleyAlgebra,
    module: &WeightModule,
    split: &ParabolicSplit,
    levi: &LeviRealForm,
    tau_char: &LaurentCharacter,
) -> Result<SpectralTermTable> {
    let table = cohomology_table(&build_ce_complex(alg, split, module)?);
    spectral_term_from_cohomology(&table, split, levi, tau_char)
}

pub fn spectral_term_from_cohomology(
    table: &CohomologyTable,
    split: &ParabolicSplit,
    levi: &LeviRealForm,
    tau_char: &LaurentCharacter,
) -> Result<SpectralTermTable> {
    let (km, project) = levi.km(split)?;
    let r = km.rank();
    for ch in [&levi.p_m_char, tau_char] {
        if ch.rank() != r {
            return Err(LefError::RankMismatch(ch.rank(), r));
        }
    }
    if !tau_char.is_effective() {
        return Err(LefError::NegativeMultiplicity);
    }
    let pm = levi.p_m_char.alternating_exterior_sum()?;
    let twist = pm.product(&tau_char.dual())?;
    // Σ_q (-1)^q ch H^q restricted to K_M, per a-weight
    let mut by_lambda: BTreeMap<Vec<ExactScalar>, LaurentCharacter> = BTreeMap::new();
    for d in &table.degrees {
        let sign = if d.q % 2 == 0 { 1 } else { -1 };
        for (w, &dim) in &d.h_weights {
            by_lambda
                .entry(split.a_weight(w))
                .or_insert_with(|| LaurentCharacter::zero(r))
                .add_term(project(w), sign * dim as i64);
        }
    }
    let global = if split.dim_n() % 2 == 0 { 1 } else { -1 };
    let mut entries = BTreeMap::new();
    for (lam, ch) in by_lambda {
        let total = ch.product(&twist)?;
        let m = decompose_virtual(&total, &km)?.get(&km.zero_weight()).copied().unwrap_or(0);
        if m != 0 {
            entries.insert(lam, global * m);
        }
    }
    Ok(SpectralTermTable { entries })
}

/// `λ(am) = λ_min(a|n̄) / λ_max(m|g)`; membership in `(AM)^∼` iff `λ(am) > 1`.
pub fn am_tilde_membership(a_eigs_on_nbar: &[f64], m_eigs_on_g: &[f64]) -> Result<(bool, f64)> {
    if a_eigs_on_nbar.is_empty() || m_eigs_on_g.is_empty() {
        return Err(LefError::EmptyEigenvalues);
    }
    if a_eigs_on_nbar.iter().chain(m_eigs_on_g).any(|x| !(x.is_finite() && *x > 0.0)) {
        return Err(LefError::InvalidInput("eigenvalue moduli must be positive".into()));
    }
    let min = a_eigs_on_nbar.iter().copied().fold(f64::INFINITY, f64::min);
    let max = m_eigs_on_g.iter().copied().fold(0.0, f64::max);
    let lambda = min / max;
    Ok((lambda > 1.0, lambda))
}

/// Which product `∏(1 - x^w)` matched `Σ_p (-1)^p ch H_p(n, V)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HechtSchmidPairing {
    /// Weights of `n`.
    N,
    /// Weights of `n*`.
    NDual,
}

impl HechtSchmidPairing {
    pub fn name(&self) -> &'static str {
        match self {
            HechtSchmidPairing::N => "n",
            HechtSchmidPairing::NDual => "n*",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HechtSchmidResult {
    pub holds: bool,
    pub pairing: Option<HechtSchmidPairing>,
}

/// `ch V · ∏_{α∈n}(1 - x^α) = Σ_p (-1)^p ch H_p(n, V)` with the Koszul
/// chain boundary; the `n*` orientation is tried as well and reported.
pub fn hecht_schmid_check(
    alg: &ChevalleyAlgebra,
    module: &WeightModule,
    split: &ParabolicSplit,
) -> Result<HechtSchmidResult> {
    let h = homology_table(alg, split, module)?;
    let rhs = &h.table.euler_character;
    let rank = alg.rank();
    let ch = module.character();
    let with = |ws: &[Weight]| ch.product(&LaurentCharacter::product_one_minus(rank, ws)).expect("same rank");
    let pairing = if &with(split.n_roots()) == rhs {
        Some(HechtSchmidPairing::N)
    } else if &with(split.nbar_roots()) == rhs {
        Some(HechtSchmidPairing::NDual)
    } else {
        None
    };
    Ok(HechtSchmidResult { holds: pairing == Some(HechtSchmidPairing::N), pairing })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chevalley::{build_chevalley_algebra, highest_weight_module, parabolic_split};
    use crate::euler::euler_poincare_trace;
    use crate::exact::{frac, int};
    use crate::rootsys::{build_root_system, irreducible_character};

    fn setup(label: &str, levi: &[usize], lam: &[i64]) -> (ChevalleyAlgebra, ParabolicSplit, WeightModule) {
        let g = build_chevalley_algebra(&build_root_system(label).unwrap()).unwrap();
        let s = parabolic_split(&g, levi).unwrap();
        let m = highest_weight_module(&g, lam).unwrap();
        (g, s, m)
    }

    #[test]
    fn det_identity_examples() {
        assert!(det_identity_check(&[vec![1]], &[frac(3, 7)]).unwrap());
        assert!(det_identity_check(&[], &[frac(3, 7)]).unwrap());
        let (_, s, _) = setup("A2", &[], &[0, 0]);
        assert!(det_identity_check(s.n_roots(), &[frac(2, 3), frac(-5, 4)]).unwrap());
    }

    #[test]
    fn spectral_a1_borel() {
        let (g, s, m) = setup("A1", &[], &[0]);
        let t = spectral_term(&g, &m, &s, &LeviRealForm::compact(&s), &LaurentCharacter::one(0)).unwrap();
        assert_eq!(t.entries, BTreeMap::from([(vec![int(0)], -1), (vec![int(-1)], 1)]));
    }

    #[test]
    fn spectral_full_levi_matches_euler_poincare() {
        let (g, s, m) = setup("A2", &[0, 1], &[1, 1]);
        let adj = irreducible_character(g.datum(), &[1, 1]).unwrap();
        let levi = LeviRealForm { p_m_char: adj.clone(), extractor: InvariantExtractor::CompactLevi };
        let tau = LaurentCharacter::one(2);
        let t = spectral_term(&g, &m, &s, &levi, &tau).unwrap();
        let ep = euler_poincare_trace(&m.character(), &adj, &tau, g.datum()).unwrap();
        let expected = if ep == 0 { BTreeMap::new() } else { BTreeMap::from([(vec![], ep)]) };
        assert_eq!(t.entries, expected);
    }

    #[test]
    fn spectral_is_additive() {
        let g = build_chevalley_algebra(&build_root_system("A2").unwrap()).unwrap();
        let s = parabolic_split(&g, &[0]).unwrap();
        let tau = LaurentCharacter::one(1);
        let levi = LeviRealForm::compact(&s);
        let a = highest_weight_module(&g, &[1, 0]).unwrap();
        let b = highest_weight_module(&g, &[0, 1]).unwrap();
        let ta = cohomology_table(&build_ce_complex(&g, &s, &a).unwrap());
        let tb = cohomology_table(&build_ce_complex(&g, &s, &b).unwrap());
        let mut sum = ta.clone();
        for (d, e) in sum.degrees.iter_mut().zip(&tb.degrees) {
            for (w, k) in &e.h_weights {
                *d.h_weights.entry(w.clone()).or_insert(0) += k;
            }
        }
        let lhs = spectral_term_from_cohomology(&sum, &s, &levi, &tau).unwrap();
        let rhs = spectral_term_from_cohomology(&ta, &s, &levi, &tau)
            .unwrap()
            .add(&spectral_term_from_cohomology(&tb, &s, &levi, &tau).unwrap());
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn explicit_extractor_matches_compact_levi() {
        let (g, s, m) = setup("B2", &[1], &[1, 1]);
        let explicit = LeviRealForm {
            p_m_char: LaurentCharacter::zero(1),
            extractor: InvariantExtractor::Explicit {
                projection: vec![vec![0, 1]],
                km_cartan: vec![vec![2]],
                km_symmetrizer: vec![1],
            },
        };
        let tau = LaurentCharacter::one(1);
        assert_eq!(
            spectral_term(&g, &m, &s, &explicit, &tau).unwrap(),
            spectral_term(&g, &m, &s, &LeviRealForm::compact(&s), &tau).unwrap()
        );
        assert!(matches!(InvariantExtractor::from_name("other"), Err(LefError::UnsupportedExtractor(_))));
    }

    #[test]
    fn am_tilde() {
        assert!(am_tilde_membership(&[1.5, 3.0], &[1.0, 1.0]).unwrap().0);
        assert_eq!(am_tilde_membership(&[1.0, 2.0], &[1.0]).unwrap(), (false, 1.0));
        assert_eq!(am_tilde_membership(&[2.0, 4.0], &[0.5, 2.0]).unwrap(), (false, 1.0));
        assert_eq!(am_tilde_membership(&[], &[1.0]), Err(LefError::EmptyEigenvalues));
    }

    #[test]
    fn hecht_schmid_sweep() {
        for label in ["A1", "A2"] {
            let d = build_root_system(label).unwrap();
            let g = build_chevalley_algebra(&d).unwrap();
            let n = d.rank();
            for code in 0..3usize.pow(n as u32) {
                let lam: Vec<i64> = (0..n).map(|j| ((code / 3usize.pow(j as u32)) % 3) as i64).collect();
                let m = highest_weight_module(&g, &lam).unwrap();
                for mask in 0..(1usize << n) {
                    let levi: Vec<usize> = (0..n).filter(|i| mask >> i & 1 == 1).collect();
                    let s = parabolic_split(&g, &levi).unwrap();
                    let r = hecht_schmid_check(&g, &m, &s).unwrap();
                    assert!(r.holds, "{label} {lam:?} {levi:?}");
                    if s.dim_n() > 0 && lam.iter().all(|&x| x == 0) {
                        assert_eq!(r.pairing, Some(HechtSchmidPairing::N));
                    }
                }
            }
        }
    }
}
