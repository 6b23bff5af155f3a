use std::collections::BTreeMap;

use num_integer::Integer;
use num_rational::BigRational;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::{scalar_pow, ExactScalar};
use crate::error::{LefError, Result};

/// Integer lattice point. Interpreted as `key / scale` for the owning character.
pub type Weight = Vec<i64>;

/// Finite integer combination of torus characters `x^w`.
///
/// Keys live in a lattice scaled by `scale`: a stored key `k` stands for the
/// weight `k / scale`. Spin characters use `scale = 2`. Equality compares the
/// represented weights, so the same character stored at different scales
/// compares equal.
#[derive(Clone, Debug)]
pub struct LaurentCharacter {
    rank: usize,
    scale: i64,
    terms: BTreeMap<Weight, i64>,
}

impl PartialEq for LaurentCharacter {
    fn eq(&self, other: &Self) -> bool {
        if self.rank != other.rank {
            return false;
        }
        let s = self.scale.lcm(&other.scale);
        self.rescaled(s).terms == other.rescaled(s).terms
    }
}

impl Eq for LaurentCharacter {}

impl LaurentCharacter {
    pub fn zero(rank: usize) -> Self {
        Self::zero_scaled(rank, 1)
    }

    pub fn zero_scaled(rank: usize, scale: i64) -> Self {
        assert!(scale > 0, "lattice scale must be positive");
        LaurentCharacter { rank, scale, terms: BTreeMap::new() }
    }

    /// The constant character 1.
    pub fn one(rank: usize) -> Self {
        Self::monomial(vec![0; rank])
    }

    pub fn monomial(w: Weight) -> Self {
        let mut c = Self::zero(w.len());
        c.add_term(w, 1);
        c
    }

    /// Character of a weight multiset (integral weights, scale 1).
    pub fn from_weights<I: IntoIterator<Item = Weight>>(rank: usize, weights: I) -> Self {
        let mut c = Self::zero(rank);
        for w in weights {
            c.add_term(w, 1);
        }
        c
    }

    /// Builds from `(key, multiplicity)` pairs in the given scaled lattice.
    pub fn from_terms<I: IntoIterator<Item = (Weight, i64)>>(rank: usize, scale: i64, terms: I) -> Self {
        let mut c = Self::zero_scaled(rank, scale);
        for (w, m) in terms {
            c.add_term(w, m);
        }
        c
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn scale(&self) -> i64 {
        self.scale
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Weight, i64)> {
        self.terms.iter().map(|(w, &m)| (w, m))
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Multiplicity of the stored key `w` (in the scaled lattice).
    pub fn multiplicity(&self, w: &[i64]) -> i64 {
        self.terms.get(w).copied().unwrap_or(0)
    }

    pub fn add_term(&mut self, w: Weight, m: i64) {
        assert_eq!(w.len(), self.rank, "weight length differs from character rank");
        if m == 0 {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(w) {
            Entry::Vacant(v) => {
                v.insert(m);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += m;
                if *o.get() == 0 {
                    o.remove();
                }
            }
        }
    }

    /// Same character with keys stored at `scale` (a multiple of the current scale).
    pub fn rescaled(&self, scale: i64) -> Self {
        assert!(scale % self.scale == 0, "target scale must be a multiple");
        let f = scale / self.scale;
        LaurentCharacter {
            rank: self.rank,
            scale,
            terms: self.terms.iter().map(|(w, &m)| (w.iter().map(|x| x * f).collect(), m)).collect(),
        }
    }

    /// Lowers the scale as far as the stored keys allow.
    pub fn normalized(&self) -> Self {
        let g = self.terms.keys().flatten().fold(self.scale, |acc, &x| acc.gcd(&x));
        if g <= 1 {
            return self.clone();
        }
        LaurentCharacter {
            rank: self.rank,
            scale: self.scale / g,
            terms: self.terms.iter().map(|(w, &m)| (w.iter().map(|x| x / g).collect(), m)).collect(),
        }
    }

    fn aligned(&self, other: &Self) -> Result<(Self, Self)> {
        if self.rank != other.rank {
            return Err(LefError::RankMismatch(self.rank, other.rank));
        }
        let s = self.scale.lcm(&other.scale);
        Ok((self.rescaled(s), other.rescaled(s)))
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        let (mut a, b) = self.aligned(other)?;
        for (w, m) in b.terms {
            a.add_term(w, m);
        }
        Ok(a)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scaled_by(-1))
    }

    pub fn scaled_by(&self, k: i64) -> Self {
        let mut out = Self::zero_scaled(self.rank, self.scale);
        if k != 0 {
            out.terms = self.terms.iter().map(|(w, &m)| (w.clone(), m * k)).collect();
        }
        out
    }

    /// Tensor product: convolution of the weight multisets.
    pub fn product(&self, other: &Self) -> Result<Self> {
        let (a, b) = self.aligned(other)?;
        let mut out = Self::zero_scaled(a.rank, a.scale);
        for (u, &mu) in &a.terms {
            for (v, &mv) in &b.terms {
                let w: Weight = u.iter().zip(v).map(|(x, y)| x + y).collect();
                out.add_term(w, mu * mv);
            }
        }
        Ok(out)
    }

    /// Dual character: every weight negated.
    pub fn dual(&self) -> Self {
        LaurentCharacter {
            rank: self.rank,
            scale: self.scale,
            terms: self.terms.iter().map(|(w, &m)| (w.iter().map(|x| -x).collect(), m)).collect(),
        }
    }

    /// Multiplies by the monomial with stored key `shift`.
    pub fn shifted(&self, shift: &[i64]) -> Self {
        assert_eq!(shift.len(), self.rank);
        LaurentCharacter {
            rank: self.rank,
            scale: self.scale,
            terms: self.terms.iter().map(|(w, &m)| (w.iter().zip(shift).map(|(x, s)| x + s).collect(), m)).collect(),
        }
    }

    /// Pushes the character forward along a map of stored keys.
    pub fn map_weights<F: Fn(&[i64]) -> Weight>(&self, rank: usize, scale: i64, f: F) -> Self {
        let mut out = Self::zero_scaled(rank, scale);
        for (w, &m) in &self.terms {
            out.add_term(f(w), m);
        }
        out
    }

    pub fn is_effective(&self) -> bool {
        self.terms.values().all(|&m| m >= 0)
    }

    /// Sum of multiplicities (the dimension for an effective character).
    pub fn degree(&self) -> i64 {
        self.terms.values().sum()
    }

    /// Weight list with repetitions; requires an effective character.
    pub fn weight_list(&self) -> Result<Vec<Weight>> {
        if !self.is_effective() {
            return Err(LefError::NegativeMultiplicity);
        }
        Ok(self.terms.iter().flat_map(|(w, &m)| std::iter::repeat(w.clone()).take(m as usize)).collect())
    }

    /// Character of the `p`-th exterior power of an effective character.
    pub fn exterior_power(&self, p: i64) -> Result<Self> {
        if p < 0 {
            return Err(LefError::InvalidInput(format!("negative exterior degree {p}")));
        }
        let powers = self.exterior_powers_upto(p as usize)?;
        Ok(powers.into_iter().nth(p as usize).unwrap())
    }

    /// `[∧^0, ∧^1, ..., ∧^p]` by the elementary-symmetric recursion.
    pub fn exterior_powers_upto(&self, p: usize) -> Result<Vec<Self>> {
        let weights = self.weight_list()?;
        let mut e: Vec<Self> = (0..=p).map(|_| Self::zero_scaled(self.rank, self.scale)).collect();
        e[0].add_term(vec![0; self.rank], 1);
        for (k, w) in weights.iter().enumerate() {
            for q in (1..=p.min(k + 1)).rev() {
                let prev = e[q - 1].shifted(w);
                e[q] = e[q].add(&prev).expect("same rank");
            }
        }
        Ok(e)
    }

    /// `Σ_p (-1)^p ∧^p` of an effective character.
    pub fn alternating_exterior_sum(&self) -> Result<Self> {
        let n = self.degree().max(0) as usize;
        let powers = self.exterior_powers_upto(n)?;
        let mut acc = Self::zero_scaled(self.rank, self.scale);
        for (p, c) in powers.iter().enumerate() {
            let signed = if p % 2 == 0 { c.clone() } else { c.scaled_by(-1) };
            acc = acc.add(&signed)?;
        }
        Ok(acc)
    }

    /// Evaluates at a torus point: `x^w ↦ Π t_j^{w_j}`. Needs scale 1 and
    /// nonzero coordinates wherever negative exponents occur.
    pub fn evaluate(&self, point: &[ExactScalar]) -> Result<ExactScalar> {
        if point.len() != self.rank {
            return Err(LefError::RankMismatch(point.len(), self.rank));
        }
        let c = self.normalized();
        if c.scale != 1 {
            return Err(LefError::InvalidInput("cannot evaluate half-integral weights at a rational point".into()));
        }
        let mut acc = BigRational::zero();
        for (w, &m) in &c.terms {
            let mut term = BigRational::from_integer(m.into());
            for (t, &e) in point.iter().zip(w) {
                if e < 0 && t.is_zero() {
                    return Err(LefError::InvalidInput("zero coordinate with negative exponent".into()));
                }
                term *= scalar_pow(t, e);
            }
            acc += term;
        }
        Ok(acc)
    }

    /// Weights as rationals `key / scale`.
    pub fn rational_weights(&self) -> Vec<(Vec<ExactScalar>, i64)> {
        let s = BigRational::from_integer(self.scale.into());
        self.terms
            .iter()
            .map(|(w, &m)| (w.iter().map(|&x| BigRational::from_integer(x.into()) / &s).collect(), m))
            .collect()
    }

    pub fn to_json(&self) -> CharacterJson {
        CharacterJson {
            rank: self.rank,
            scale: self.scale,
            terms: self.terms.iter().map(|(w, &m)| TermJson { w: w.clone(), m }).collect(),
        }
    }

    pub fn from_json(j: &CharacterJson) -> Result<Self> {
        if j.scale <= 0 {
            return Err(LefError::InvalidInput("scale must be positive".into()));
        }
        let mut c = Self::zero_scaled(j.rank, j.scale);
        for t in &j.terms {
            if t.w.len() != j.rank {
                return Err(LefError::RankMismatch(t.w.len(), j.rank));
            }
            c.add_term(t.w.clone(), t.m);
        }
        Ok(c)
    }
}

impl LaurentCharacter {
    /// `∏ (1 - x^w)` over the given weight list, as a character.
    pub fn product_one_minus(rank: usize, weights: &[Weight]) -> Self {
        let mut acc = Self::one(rank);
        for w in weights {
            let mut f = Self::one(rank);
            f.add_term(w.clone(), -1);
            acc = acc.product(&f).expect("same rank");
        }
        acc
    }
}

/// Serialized form: `{"rank": r, "scale": s, "terms": [{"w": [...], "m": k}, ...]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CharacterJson {
    pub rank: usize,
    pub scale: i64,
    pub terms: Vec<TermJson>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermJson {
    pub w: Vec<i64>,
    pub m: i64,
}

impl Default for LaurentCharacter {
    fn default() -> Self {
        Self::zero(0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x(k: i64) -> LaurentCharacter {
        LaurentCharacter::monomial(vec![k])
    }

    #[test]
    fn product_convolves() {
        let a = x(1).add(&x(-1)).unwrap();
        let sq = a.product(&a).unwrap();
        let expected = LaurentCharacter::from_terms(1, 1, [(vec![2], 1), (vec![0], 2), (vec![-2], 1)]);
        assert_eq!(sq, expected);

        let b = x(1).sub(&x(-1)).unwrap();
        let sq = b.product(&b).unwrap();
        let expected = LaurentCharacter::from_terms(1, 1, [(vec![2], 1), (vec![0], -2), (vec![-2], 1)]);
        assert_eq!(sq, expected);

        assert_eq!(a.product(&LaurentCharacter::one(1)).unwrap(), a);
    }

    #[test]
    fn product_rank_mismatch() {
        let a = LaurentCharacter::one(1);
        let b = LaurentCharacter::one(2);
        assert_eq!(a.product(&b), Err(LefError::RankMismatch(1, 2)));
    }

    #[test]
    fn exterior_powers_small() {
        let ch = LaurentCharacter::from_weights(2, [vec![1, 0], vec![0, 3]]);
        assert_eq!(ch.exterior_power(0).unwrap(), LaurentCharacter::one(2));
        assert_eq!(ch.exterior_power(1).unwrap(), ch);
        assert_eq!(ch.exterior_power(2).unwrap(), LaurentCharacter::monomial(vec![1, 3]));
        assert!(ch.exterior_power(3).unwrap().is_empty());
        assert!(ch.exterior_power(-1).is_err());
        let virt = ch.sub(&LaurentCharacter::one(2)).unwrap();
        assert_eq!(virt.exterior_power(1), Err(LefError::NegativeMultiplicity));
    }

    #[test]
    fn mixed_scale_equality() {
        let half = LaurentCharacter::from_terms(1, 2, [(vec![2], 1)]);
        assert_eq!(half, x(1));
        let h = LaurentCharacter::from_terms(1, 2, [(vec![1], 1)]);
        let sq = h.product(&h).unwrap();
        assert_eq!(sq, x(1));
        assert_eq!(sq.scale(), 2);
        assert_eq!(sq.normalized().scale(), 1);
    }

    #[test]
    fn evaluation() {
        use crate::exact::{frac, int};
        let ch = LaurentCharacter::from_terms(2, 1, [(vec![1, -1], 2), (vec![0, 0], -1)]);
        assert_eq!(ch.evaluate(&[int(3), int(2)]).unwrap(), frac(2, 1));
        assert!(ch.evaluate(&[int(3), int(0)]).is_err());
    }

    #[test]
    fn json_is_sorted() {
        let ch = LaurentCharacter::from_weights(1, [vec![3], vec![-1], vec![0], vec![3]]);
        let s = serde_json::to_string(&ch.to_json()).unwrap();
        assert_eq!(s, r#"{"rank":1,"scale":1,"terms":[{"w":[-1],"m":1},{"w":[0],"m":1},{"w":[3],"m":2}]}"#);
        let back = LaurentCharacter::from_json(&serde_json::from_str(&s).unwrap()).unwrap();
        assert_eq!(back, ch);
    }
}
