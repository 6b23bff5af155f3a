//! Spin modules of polarized quadratic spaces and the half-spin character
//! identities.
//!
//! `V = V⁺ ⊕ V⁻` with bases `v_i`, `v̂_i` and `q(v_i, v̂_j) = -δ_ij`. The spin
//! module is `S = ∧V⁻`; a basis monomial `v̂_{i_1} ∧ … ∧ v̂_{i_k}` with
//! `i_1 < … < i_k` is stored as the bitmask of its indices.

use std::fmt;
use std::str::FromStr;

use serde_json::{json, Value};

use crate::error::{LefError, Result};
use crate::exact::{frac, ExactScalar, LaurentCharacter, SparseMatrix, Weight};

/// Largest supported half-dimension.
pub const MAX_HALF_DIMENSION: usize = 20;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Generator {
    /// `v_i ∈ V⁺`.
    Plus(usize),
    /// `v̂_i ∈ V⁻`.
    Minus(usize),
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Generator::Plus(i) => write!(f, "v{}", i + 1),
            Generator::Minus(i) => write!(f, "vhat{}", i + 1),
        }
    }
}

impl FromStr for Generator {
    type Err = LefError;

    /// Parses `v3` or `vhat3` (1-based).
    fn from_str(s: &str) -> Result<Self> {
        let bad = || LefError::UnknownGenerator(s.to_string());
        let (ctor, rest): (fn(usize) -> Generator, &str) = if let Some(r) = s.strip_prefix("vhat") {
            (Generator::Minus, r)
        } else if let Some(r) = s.strip_prefix('v') {
            (Generator::Plus, r)
        } else {
            return Err(bad());
        };
        let i: usize = rest.parse().map_err(|_| bad())?;
        if i == 0 {
            return Err(bad());
        }
        Ok(ctor(i - 1))
    }
}

/// Even-dimensional quadratic space with a chosen polarization and torus
/// weights `μ_i` on `V⁺` (so `V⁻` carries `-μ_i`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolarizedSpace {
    m: usize,
    torus_rank: usize,
    torus_weights: Vec<Weight>,
}

impl PolarizedSpace {
    pub fn new(torus_weights: Vec<Weight>) -> Result<Self> {
        let m = torus_weights.len();
        if m == 0 || m > MAX_HALF_DIMENSION {
            return Err(LefError::InvalidInput(format!("half-dimension must be in 1..={MAX_HALF_DIMENSION}")));
        }
        let torus_rank = torus_weights[0].len();
        if let Some(w) = torus_weights.iter().find(|w| w.len() != torus_rank) {
            return Err(LefError::RankMismatch(w.len(), torus_rank));
        }
        Ok(PolarizedSpace { m, torus_rank, torus_weights })
    }

    /// `μ_i = e_i` in a rank-`m` torus.
    pub fn standard(m: usize) -> Result<Self> {
        Self::new((0..m).map(|i| (0..m).map(|j| i64::from(i == j)).collect()).collect())
    }

    pub fn half_dimension(&self) -> usize {
        self.m
    }

    pub fn torus_rank(&self) -> usize {
        self.torus_rank
    }

    pub fn torus_weights(&self) -> &[Weight] {
        &self.torus_weights
    }

    pub fn generators(&self) -> Vec<Generator> {
        (0..self.m).map(Generator::Plus).chain((0..self.m).map(Generator::Minus)).collect()
    }

    fn check(&self, g: Generator) -> Result<()> {
        let i = match g {
            Generator::Plus(i) | Generator::Minus(i) => i,
        };
        if i >= self.m {
            return Err(LefError::UnknownGenerator(g.to_string()));
        }
        Ok(())
    }

    /// The polarization pairing: `q(v_i, v̂_j) = q(v̂_j, v_i) = -δ_ij`, zero on `V⁺` and `V⁻`.
    pub fn pairing(&self, x: Generator, y: Generator) -> i64 {
        match (x, y) {
            (Generator::Plus(i), Generator::Minus(j)) | (Generator::Minus(j), Generator::Plus(i)) => -i64::from(i == j),
            _ => 0,
        }
    }

    /// Symmetric bilinear form for which `xy + yx = -2 b(x, y)` holds under the
    /// action rules; it is half the pairing.
    pub fn clifford_form(&self, x: Generator, y: Generator) -> ExactScalar {
        frac(self.pairing(x, y), 2)
    }

    /// Character of `V = V⁺ ⊕ V⁻`.
    pub fn character(&self) -> LaurentCharacter {
        LaurentCharacter::from_weights(
            self.torus_rank,
            self.torus_weights.iter().flat_map(|w| [w.clone(), w.iter().map(|x| -x).collect()]),
        )
    }

    pub fn plus_character(&self) -> LaurentCharacter {
        LaurentCharacter::from_weights(self.torus_rank, self.torus_weights.iter().cloned())
    }

    /// `ε = ½(μ_1 + … + μ_m)` in the doubled lattice.
    pub fn epsilon_doubled(&self) -> Weight {
        let mut e = vec![0; self.torus_rank];
        for w in &self.torus_weights {
            for (t, x) in e.iter_mut().zip(w) {
                *t += x;
            }
        }
        e
    }
}

/// `#{i ∈ s : i < j}`.
fn koszul_count(s: u32, j: usize) -> u32 {
    (s & ((1u32 << j) - 1)).count_ones()
}

/// Action of a generator on a basis monomial; `None` when the result is zero.
///
/// `v̂_j · s = v̂_j ∧ s` and `v_j · s` contracts `v̂_j` out of `s`, each with
/// the sign of moving `v̂_j` past the smaller indices.
pub fn clifford_action(space: &PolarizedSpace, g: Generator, s: u32) -> Result<Option<(u32, i64)>> {
    space.check(g)?;
    let out = match g {
        Generator::Minus(j) if s & (1 << j) == 0 => {
            Some((s | (1 << j), if koszul_count(s, j) % 2 == 0 { 1 } else { -1 }))
        }
        Generator::Plus(j) if s & (1 << j) != 0 => {
            Some((s & !(1 << j), if koszul_count(s, j) % 2 == 0 { 1 } else { -1 }))
        }
        _ => None,
    };
    Ok(out)
}

/// The spin module `S = ∧V⁻` with its action matrices.
#[derive(Clone, Debug)]
pub struct SpinModule {
    space: PolarizedSpace,
}

impl SpinModule {
    pub fn new(space: PolarizedSpace) -> Self {
        SpinModule { space }
    }

    pub fn space(&self) -> &PolarizedSpace {
        &self.space
    }

    pub fn dimension(&self) -> usize {
        1 << self.space.m
    }

    /// Bitmasks of even cardinality.
    pub fn plus_part(&self) -> Vec<u32> {
        (0..self.dimension() as u32).filter(|s| s.count_ones() % 2 == 0).collect()
    }

    pub fn minus_part(&self) -> Vec<u32> {
        (0..self.dimension() as u32).filter(|s| s.count_ones() % 2 == 1).collect()
    }

    pub fn action_matrix(&self, g: Generator) -> Result<SparseMatrix> {
        let dim = self.dimension();
        let mut cols = Vec::with_capacity(dim);
        for s in 0..dim as u32 {
            cols.push(match clifford_action(&self.space, g, s)? {
                Some((t, sign)) => vec![(t as usize, crate::exact::int(sign))],
                None => vec![],
            });
        }
        Ok(SparseMatrix::from_columns(dim, cols))
    }

    /// Checks `xy + yx = -2 b(x, y)` on every generator pair.
    pub fn clifford_relations_hold(&self) -> Result<bool> {
        let gens = self.space.generators();
        let mats: Vec<SparseMatrix> = gens.iter().map(|&g| self.action_matrix(g)).collect::<Result<_>>()?;
        let id = SparseMatrix::identity(self.dimension());
        for (a, &x) in gens.iter().enumerate() {
            for (b, &y) in gens.iter().enumerate() {
                let anti = mats[a].mul(&mats[b]).add(&mats[b].mul(&mats[a]));
                let expected = id.scale(&(self.space.clifford_form(x, y) * crate::exact::int(-2)));
                if anti != expected {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// Products of two generators preserve the parity of monomials.
    pub fn even_part_preserves_halves(&self) -> Result<bool> {
        let gens = self.space.generators();
        for &x in &gens {
            for &y in &gens {
                for s in 0..self.dimension() as u32 {
                    if let Some((t, _)) = clifford_action(&self.space, y, s)? {
                        if let Some((u, _)) = clifford_action(&self.space, x, t)? {
                            if u.count_ones() % 2 != s.count_ones() % 2 {
                                return Ok(false);
                            }
                        }
                    }
                }
            }
        }
        Ok(true)
    }
}

/// Characters of `S⁺` and `S⁻`, stored at lattice scale 2. The monomial
/// indexed by `I` has weight `½Σμ - Σ_{i∈I} μ_i`.
pub fn half_spin_characters(space: &PolarizedSpace) -> (LaurentCharacter, LaurentCharacter) {
    let r = space.torus_rank;
    let eps2 = space.epsilon_doubled();
    let mut plus = LaurentCharacter::zero_scaled(r, 2);
    let mut minus = LaurentCharacter::zero_scaled(r, 2);
    for s in 0u32..(1u32 << space.m) {
        let mut w = eps2.clone();
        for i in (0..space.m).filter(|i| s & (1 << i) != 0) {
            for (t, x) in w.iter_mut().zip(&space.torus_weights[i]) {
                *t -= 2 * x;
            }
        }
        if s.count_ones() % 2 == 0 {
            plus.add_term(w, 1);
        } else {
            minus.add_term(w, 1);
        }
    }
    (plus, minus)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpinSquareResult {
    pub holds: bool,
    /// `ε(m)` with `ch(S⁺ - S⁻)² = ε(m) · ch(∧^even V - ∧^odd V)`.
    pub sign: i64,
}

pub fn verify_spin_square(space: &PolarizedSpace) -> SpinSquareResult {
    let (p, m) = half_spin_characters(space);
    let diff = p.sub(&m).expect("same rank");
    let lhs = diff.product(&diff).expect("same rank");
    let rhs = space.character().alternating_exterior_sum().expect("effective");
    if lhs == rhs {
        SpinSquareResult { holds: true, sign: 1 }
    } else if lhs == rhs.scaled_by(-1) {
        SpinSquareResult { holds: true, sign: -1 }
    } else {
        SpinSquareResult { holds: false, sign: 0 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn name(&self) -> &'static str {
        match self {
            Parity::Even => "even",
            Parity::Odd => "odd",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EpsilonTwistResult {
    pub holds: bool,
    /// Parity of `∧V⁺` matched by `S⁺ ⊗ ε`.
    pub parity: Option<Parity>,
}

/// Compares `S^± ⊗ ε` with the even and odd parts of `∧V⁺`.
pub fn epsilon_twist_check(space: &PolarizedSpace) -> EpsilonTwistResult {
    let (p, m) = half_spin_characters(space);
    let eps = space.epsilon_doubled();
    let (p, m) = (p.shifted(&eps), m.shifted(&eps));
    let powers = space.plus_character().exterior_powers_upto(space.m).expect("effective");
    let mut even = LaurentCharacter::zero(space.torus_rank);
    let mut odd = LaurentCharacter::zero(space.torus_rank);
    for (k, c) in powers.iter().enumerate() {
        if k % 2 == 0 {
            even = even.add(c).expect("same rank");
        } else {
            odd = odd.add(c).expect("same rank");
        }
    }
    let parity = if p == even && m == odd {
        Some(Parity::Even)
    } else if p == odd && m == even {
        Some(Parity::Odd)
    } else {
        None
    };
    EpsilonTwistResult { holds: parity.is_some(), parity }
}

/// Per-`m` spin report for the standard torus weights.
pub fn spin_report(max_m: usize) -> Result<Vec<Value>> {
    (1..=max_m)
        .map(|m| {
            let space = PolarizedSpace::standard(m)?;
            let sq = verify_spin_square(&space);
            let tw = epsilon_twist_check(&space);
            Ok(json!({
                "m": m,
                "spin_square_holds": sq.holds,
                "sign": sq.sign,
                "epsilon_twist_holds": tw.holds,
                "parity": tw.parity.map(|p| p.name()),
            }))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn space(m: usize) -> PolarizedSpace {
        PolarizedSpace::standard(m).unwrap()
    }

    #[test]
    fn action_rules_m1() {
        let s = space(1);
        let (v, vh) = (Generator::Plus(0), Generator::Minus(0));
        assert_eq!(clifford_action(&s, vh, 0).unwrap(), Some((1, 1)));
        assert_eq!(clifford_action(&s, v, 1).unwrap(), Some((0, 1)));
        assert_eq!(clifford_action(&s, v, 0).unwrap(), None);
        assert!(clifford_action(&s, Generator::Plus(1), 0).is_err());
    }

    #[test]
    fn koszul_signs() {
        let s = space(3);
        // v̂_2 ∧ (v̂_1 ∧ v̂_3) = -v̂_1 ∧ v̂_2 ∧ v̂_3
        assert_eq!(clifford_action(&s, Generator::Minus(1), 0b101).unwrap(), Some((0b111, -1)));
        assert_eq!(clifford_action(&s, Generator::Plus(2), 0b111).unwrap(), Some((0b011, 1)));
    }

    #[test]
    fn labels() {
        assert_eq!("vhat2".parse::<Generator>().unwrap(), Generator::Minus(1));
        assert_eq!("v1".parse::<Generator>().unwrap(), Generator::Plus(0));
        assert!("w1".parse::<Generator>().is_err());
        assert!("v0".parse::<Generator>().is_err());
        assert_eq!(Generator::Minus(4).to_string(), "vhat5");
    }

    #[test]
    fn clifford_relations() {
        for m in 1..=4 {
            let sm = SpinModule::new(space(m));
            assert!(sm.clifford_relations_hold().unwrap());
            assert!(sm.even_part_preserves_halves().unwrap());
            assert_eq!(sm.plus_part().len(), 1 << (m - 1));
        }
    }

    #[test]
    fn half_spin_examples() {
        let (p, m) = half_spin_characters(&space(1));
        assert_eq!(p, LaurentCharacter::from_terms(1, 2, [(vec![1], 1)]));
        assert_eq!(m, LaurentCharacter::from_terms(1, 2, [(vec![-1], 1)]));
        let (p, _) = half_spin_characters(&space(2));
        assert_eq!(p, LaurentCharacter::from_terms(2, 2, [(vec![1, 1], 1), (vec![-1, -1], 1)]));
    }

    #[test]
    fn spin_square_signs() {
        assert_eq!(verify_spin_square(&space(1)), SpinSquareResult { holds: true, sign: -1 });
        assert_eq!(verify_spin_square(&space(2)), SpinSquareResult { holds: true, sign: 1 });
    }

    #[test]
    fn epsilon_examples() {
        assert_eq!(epsilon_twist_check(&space(1)).parity, Some(Parity::Odd));
        assert_eq!(epsilon_twist_check(&space(2)).parity, Some(Parity::Even));
        assert_eq!(epsilon_twist_check(&space(3)).parity, Some(Parity::Odd));
    }

    #[test]
    fn non_standard_weights() {
        let s = PolarizedSpace::new(vec![vec![1, 0], vec![1, 1], vec![0, 2]]).unwrap();
        assert_eq!(verify_spin_square(&s).sign, -1);
        assert!(epsilon_twist_check(&s).holds);
    }
}
