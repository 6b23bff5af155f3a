use std::collections::{BTreeSet, HashMap};

use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::RootDatum;
use crate::error::{LefError, Result};
use crate::exact::{int, LaurentCharacter, Weight};

/// Root subsystem spanned by a subset of the simple roots, in the ambient
/// weight coordinates. The full subset gives the whole system.
#[derive(Clone, Debug)]
pub struct SubSystem<'a> {
    datum: &'a RootDatum,
    subset: Vec<usize>,
    positive_roots: Vec<Weight>,
    heights: Vec<i64>,
    two_rho: Weight,
}

impl<'a> SubSystem<'a> {
    pub(super) fn new(datum: &'a RootDatum, subset: &[usize]) -> Self {
        let mut subset = subset.to_vec();
        subset.sort_unstable();
        subset.dedup();
        let n = datum.rank();
        let mut positive_roots = Vec::new();
        let mut heights = Vec::new();
        for (r, c) in datum.positive_roots().iter().zip(datum.positive_roots_simple()) {
            if (0..n).all(|j| c[j] == 0 || subset.contains(&j)) {
                positive_roots.push(r.clone());
                heights.push(c.iter().sum());
            }
        }
        let mut two_rho = vec![0; n];
        for r in &positive_roots {
            for (t, x) in two_rho.iter_mut().zip(r) {
                *t += x;
            }
        }
        SubSystem { datum, subset, positive_roots, heights, two_rho }
    }

    pub fn subset(&self) -> &[usize] {
        &self.subset
    }

    pub fn positive_roots(&self) -> &[Weight] {
        &self.positive_roots
    }

    /// Twice the half-sum of the positive roots of the subsystem.
    pub fn two_rho(&self) -> &Weight {
        &self.two_rho
    }

    pub fn is_dominant(&self, lam: &[i64]) -> bool {
        self.subset.iter().all(|&i| lam[i] >= 0)
    }

    /// Weyl dimension formula for the subsystem.
    pub fn weyl_dimension(&self, lam: &[i64]) -> Result<u64> {
        if lam.len() != self.datum.rank() {
            return Err(LefError::RankMismatch(lam.len(), self.datum.rank()));
        }
        if !self.is_dominant(lam) {
            return Err(LefError::NotDominant(lam.to_vec()));
        }
        let shifted: Weight = lam.iter().zip(&self.two_rho).map(|(l, r)| 2 * l + r).collect();
        let mut acc = BigRational::one();
        for a in &self.positive_roots {
            acc *= self.datum.inner(&shifted, a) / self.datum.inner(&self.two_rho, a);
        }
        Ok(acc.to_integer().to_u64().expect("dimension fits in u64"))
    }

    /// Whether `mu` is a weight of the irreducible module of highest weight `lam`.
    fn is_weight_of(&self, lam: &[i64], mu: &[i64]) -> bool {
        let dom = self.datum.dominant_conjugate(mu, &self.subset);
        let diff: Weight = lam.iter().zip(&dom).map(|(a, b)| a - b).collect();
        let coords = self.datum.simple_coordinates(&diff);
        coords.iter().enumerate().all(|(j, c)| if self.subset.contains(&j) { !c.is_negative() } else { c.is_zero() })
    }

    /// Character of the irreducible module with highest weight `lam`, by
    /// Freudenthal's multiplicity formula.
    pub fn character(&self, lam: &[i64]) -> Result<LaurentCharacter> {
        if lam.len() != self.datum.rank() {
            return Err(LefError::RankMismatch(lam.len(), self.datum.rank()));
        }
        if !self.is_dominant(lam) {
            return Err(LefError::NotDominant(lam.to_vec()));
        }
        let n = self.datum.rank();
        let mut mult: HashMap<Weight, (i64, i64)> = HashMap::new();
        mult.insert(lam.to_vec(), (1, 0));
        let mut level = vec![lam.to_vec()];
        let mut depth = 0i64;
        loop {
            depth += 1;
            let candidates: BTreeSet<Weight> = level
                .iter()
                .flat_map(|mu| {
                    self.subset.iter().map(move |&i| {
                        let a = self.datum.simple_root(i);
                        mu.iter().zip(&a).map(|(x, y)| x - y).collect::<Weight>()
                    })
                })
                .collect();
            let mut next = Vec::new();
            for mu in candidates {
                if !self.is_weight_of(lam, &mu) {
                    continue;
                }
                let mut numer = BigRational::zero();
                for (a, &h) in self.positive_roots.iter().zip(&self.heights) {
                    let mut k = 1;
                    while depth - k * h >= 0 {
                        let up: Weight = mu.iter().zip(a).map(|(x, y)| x + k * y).collect();
                        if let Some(&(m, _)) = mult.get(&up) {
                            numer += int(m) * self.datum.inner(&up, a);
                        }
                        k += 1;
                    }
                }
                numer *= int(2);
                // (λ+ρ,λ+ρ) - (μ+ρ,μ+ρ) = (λ-μ, λ+μ+2ρ)
                let diff: Weight = lam.iter().zip(&mu).map(|(a, b)| a - b).collect();
                let sum: Weight = (0..n).map(|j| lam[j] + mu[j] + self.two_rho[j]).collect();
                let denom = self.datum.inner(&diff, &sum);
                let m = numer / denom;
                debug_assert!(m.is_integer());
                let m = m.to_integer().to_i64().expect("multiplicity fits in i64");
                if m > 0 {
                    mult.insert(mu.clone(), (m, depth));
                    next.push(mu);
                }
            }
            if next.is_empty() {
                break;
            }
            level = next;
        }
        let mut ch = LaurentCharacter::zero(n);
        for (w, (m, _)) in mult {
            ch.add_term(w, m);
        }
        Ok(ch)
    }
}

/// Character of the irreducible module `L(lam)` of the full root system.
pub fn irreducible_character(datum: &RootDatum, lam: &[i64]) -> Result<LaurentCharacter> {
    let all: Vec<usize> = (0..datum.rank()).collect();
    datum.subsystem(&all).character(lam)
}
