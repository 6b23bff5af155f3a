//! Finite root systems in fundamental-weight coordinates.
//!
//! A weight `λ` is stored as `(λ(h_1), ..., λ(h_n))`, its pairings with the
//! simple coroots. Simple roots are the rows of the Cartan matrix in this
//! basis, dominance is a sign check, and everything stays integral except the
//! invariant form.

mod freudenthal;
mod weyl;

pub use freudenthal::{irreducible_character, SubSystem};
pub use weyl::{WeylElement, DEFAULT_WEYL_BOUND};

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use num_rational::BigRational;
use num_traits::{One, Zero};
use serde_json::{json, Value};

use crate::error::{LefError, Result};
use crate::exact::{int, scalar_to_string, ExactMatrix, ExactScalar, Weight};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Series {
    A,
    B,
    C,
    D,
    E,
    F,
    G,
}

/// A Cartan type such as `A2` or `E6`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct CartanType {
    pub series: Series,
    pub rank: usize,
}

impl fmt::Display for CartanType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}{}", self.series, self.rank)
    }
}

impl FromStr for CartanType {
    type Err = LefError;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || LefError::UnsupportedLabel(s.to_string());
        let s = s.trim();
        let mut chars = s.chars();
        let series = match chars.next().map(|c| c.to_ascii_uppercase()) {
            Some('A') => Series::A,
            Some('B') => Series::B,
            Some('C') => Series::C,
            Some('D') => Series::D,
            Some('E') => Series::E,
            Some('F') => Series::F,
            Some('G') => Series::G,
            _ => return Err(bad()),
        };
        let rank: usize = chars.as_str().parse().map_err(|_| bad())?;
        let ok = match series {
            Series::A => (1..=8).contains(&rank),
            Series::B | Series::C => (2..=8).contains(&rank),
            Series::D => (3..=8).contains(&rank),
            Series::E => (6..=8).contains(&rank),
            Series::F => rank == 4,
            Series::G => rank == 2,
        };
        if ok {
            Ok(CartanType { series, rank })
        } else {
            Err(bad())
        }
    }
}

impl CartanType {
    /// Half squared lengths of the simple roots (short roots have 1) and the
    /// off-diagonal inner products `(α_i, α_j)` in the short-root-2 scale.
    fn diagram(&self) -> (Vec<i64>, Vec<(usize, usize, i64)>) {
        let n = self.rank;
        let chain =
            |val: i64| -> Vec<(usize, usize, i64)> { (0..n.saturating_sub(1)).map(|i| (i, i + 1, val)).collect() };
        match self.series {
            Series::A => (vec![1; n], chain(-1)),
            Series::B => {
                let mut d = vec![2; n];
                d[n - 1] = 1;
                (d, chain(-2))
            }
            Series::C => {
                let mut d = vec![1; n];
                d[n - 1] = 2;
                let mut e = chain(-1);
                e[n - 2].2 = -2;
                (d, e)
            }
            Series::D => {
                let mut e: Vec<_> = (0..n - 2).map(|i| (i, i + 1, -1)).collect();
                e.push((n - 3, n - 1, -1));
                (vec![1; n], e)
            }
            Series::E => {
                let mut e = vec![(0, 2, -1), (1, 3, -1)];
                e.extend((2..n - 1).map(|i| (i, i + 1, -1)));
                (vec![1; n], e)
            }
            Series::F => (vec![2, 2, 1, 1], vec![(0, 1, -2), (1, 2, -2), (2, 3, -1)]),
            Series::G => (vec![1, 3], vec![(0, 1, -3)]),
        }
    }
}

/// Which invariant form the datum's `(·,·)` is.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FormNormalization {
    /// Short roots have `(α, α) = 2`.
    ShortRootTwo,
    /// Dual of the Killing form restricted to the Cartan subalgebra.
    Killing,
}

impl FormNormalization {
    pub fn name(&self) -> &'static str {
        match self {
            FormNormalization::ShortRootTwo => "short-root-2",
            FormNormalization::Killing => "killing",
        }
    }
}

impl FromStr for FormNormalization {
    type Err = LefError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "short-root-2" | "short" => Ok(FormNormalization::ShortRootTwo),
            "killing" => Ok(FormNormalization::Killing),
            _ => Err(LefError::InvalidInput(format!("unknown form normalization `{s}`"))),
        }
    }
}

/// Root datum of a finite (possibly reducible) root system.
#[derive(Clone, Debug)]
pub struct RootDatum {
    label: String,
    cartan: Vec<Vec<i64>>,
    symmetrizer: Vec<i64>,
    positive_roots: Vec<Weight>,
    positive_roots_simple: Vec<Vec<i64>>,
    root_index: HashMap<Weight, usize>,
    cartan_inverse: ExactMatrix,
    normalization: FormNormalization,
    form: ExactMatrix,
}

/// Builds the root datum of a supported type (rank at most 8).
pub fn build_root_system(label: &str) -> Result<RootDatum> {
    let ty: CartanType = label.parse()?;
    let (d, edges) = ty.diagram();
    let n = ty.rank;
    let mut gram = vec![vec![0i64; n]; n];
    for i in 0..n {
        gram[i][i] = 2 * d[i];
    }
    for &(i, j, v) in &edges {
        gram[i][j] = v;
        gram[j][i] = v;
    }
    // C[i][j] = <α_i, α_j^∨> = 2(α_i, α_j)/(α_j, α_j)
    let cartan: Vec<Vec<i64>> = (0..n).map(|i| (0..n).map(|j| gram[i][j] / d[j]).collect()).collect();
    RootDatum::from_cartan(&ty.to_string(), cartan, d)
}

impl RootDatum {
    /// Builds from a Cartan matrix `C[i][j] = <α_i, α_j^∨>` and the half
    /// squared lengths of the simple roots. The empty matrix gives the rank-0
    /// datum.
    pub fn from_cartan(label: &str, cartan: Vec<Vec<i64>>, symmetrizer: Vec<i64>) -> Result<Self> {
        let n = cartan.len();
        if symmetrizer.len() != n || cartan.iter().any(|r| r.len() != n) {
            return Err(LefError::InvalidInput("Cartan matrix shape".into()));
        }
        let cm = ExactMatrix::from_i64_rows(&cartan);
        let cartan_inverse = if n == 0 {
            ExactMatrix::zeros(0, 0)
        } else {
            cm.inverse().ok_or_else(|| LefError::InvalidInput("singular Cartan matrix".into()))?
        };

        // closure of the simple roots under simple reflections; each s_i
        // permutes the positive roots other than α_i
        let mut positive_roots_simple: Vec<Vec<i64>> =
            (0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect();
        let mut seen: std::collections::HashSet<Vec<i64>> = positive_roots_simple.iter().cloned().collect();
        let mut k = 0;
        while k < positive_roots_simple.len() {
            let beta = positive_roots_simple[k].clone();
            for i in 0..n {
                if beta.iter().enumerate().all(|(j, &c)| c == i64::from(i == j)) {
                    continue;
                }
                // <β, α_i^∨> = Σ_j c_j C[j][i]
                let pairing: i64 = (0..n).map(|j| beta[j] * cartan[j][i]).sum();
                if pairing == 0 {
                    continue;
                }
                let mut img = beta.clone();
                img[i] -= pairing;
                if img.iter().any(|&c| c < 0) {
                    return Err(LefError::InvalidInput("Cartan matrix is not of finite type".into()));
                }
                if seen.insert(img.clone()) {
                    positive_roots_simple.push(img);
                }
            }
            k += 1;
            if positive_roots_simple.len() > 10_000 {
                return Err(LefError::InvalidInput("Cartan matrix is not of finite type".into()));
            }
        }
        positive_roots_simple.sort_by(|a, b| {
            let ha: i64 = a.iter().sum();
            let hb: i64 = b.iter().sum();
            ha.cmp(&hb).then_with(|| b.cmp(a))
        });
        let positive_roots: Vec<Weight> = positive_roots_simple
            .iter()
            .map(|c| (0..n).map(|j| (0..n).map(|i| c[i] * cartan[i][j]).sum()).collect())
            .collect();
        let root_index = positive_roots.iter().cloned().enumerate().map(|(i, r)| (r, i)).collect();

        let dm = {
            let mut m = ExactMatrix::zeros(n, n);
            for i in 0..n {
                m.set(i, i, int(symmetrizer[i]));
            }
            m
        };
        let form = cartan_inverse.mul(&dm);
        Ok(RootDatum {
            label: label.to_string(),
            cartan,
            symmetrizer,
            positive_roots,
            positive_roots_simple,
            root_index,
            cartan_inverse,
            normalization: FormNormalization::ShortRootTwo,
            form,
        })
    }

    /// The same datum with `(·,·)` replaced by the chosen normalization.
    pub fn with_normalization(&self, norm: FormNormalization) -> Self {
        let mut out = self.clone();
        out.normalization = norm;
        out.form = match norm {
            FormNormalization::ShortRootTwo => {
                let n = self.rank();
                let mut dm = ExactMatrix::zeros(n, n);
                for i in 0..n {
                    dm.set(i, i, int(self.symmetrizer[i]));
                }
                self.cartan_inverse.mul(&dm)
            }
            FormNormalization::Killing => {
                self.killing_on_cartan().inverse().expect("Killing form of a semisimple algebra is nondegenerate")
            }
        };
        out
    }

    /// `B(h_i, h_j) = Σ_{α ∈ Φ} α(h_i) α(h_j)`, the Killing form on the simple coroots.
    pub fn killing_on_cartan(&self) -> ExactMatrix {
        let n = self.rank();
        let mut g = ExactMatrix::zeros(n, n);
        for r in &self.positive_roots {
            for i in 0..n {
                for j in 0..n {
                    g.add_to(i, j, &int(2 * r[i] * r[j]));
                }
            }
        }
        g
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn rank(&self) -> usize {
        self.cartan.len()
    }

    pub fn cartan_matrix(&self) -> &[Vec<i64>] {
        &self.cartan
    }

    pub fn symmetrizer(&self) -> &[i64] {
        &self.symmetrizer
    }

    pub fn normalization(&self) -> FormNormalization {
        self.normalization
    }

    pub fn form(&self) -> &ExactMatrix {
        &self.form
    }

    pub fn simple_root(&self, i: usize) -> Weight {
        self.cartan[i].clone()
    }

    pub fn simple_roots(&self) -> Vec<Weight> {
        self.cartan.clone()
    }

    /// Positive roots ordered by height.
    pub fn positive_roots(&self) -> &[Weight] {
        &self.positive_roots
    }

    /// Positive roots in simple-root coordinates, same order.
    pub fn positive_roots_simple(&self) -> &[Vec<i64>] {
        &self.positive_roots_simple
    }

    pub fn fundamental_weights(&self) -> Vec<Weight> {
        let n = self.rank();
        (0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect()
    }

    pub fn rho(&self) -> Weight {
        vec![1; self.rank()]
    }

    pub fn zero_weight(&self) -> Weight {
        vec![0; self.rank()]
    }

    /// Index of a positive root, if `w` is one.
    pub fn positive_root_index(&self, w: &[i64]) -> Option<usize> {
        self.root_index.get(w).copied()
    }

    /// `Some(true)` for positive roots, `Some(false)` for negative roots.
    pub fn root_sign(&self, w: &[i64]) -> Option<bool> {
        if self.root_index.contains_key(w) {
            return Some(true);
        }
        let neg: Weight = w.iter().map(|x| -x).collect();
        self.root_index.contains_key(&neg).then_some(false)
    }

    pub fn is_root(&self, w: &[i64]) -> bool {
        self.root_sign(w).is_some()
    }

    pub fn is_dominant(&self, w: &[i64]) -> bool {
        w.iter().all(|&x| x >= 0)
    }

    /// Coordinates of a weight in the basis of simple roots (rational).
    pub fn simple_coordinates(&self, w: &[i64]) -> Vec<ExactScalar> {
        let n = self.rank();
        (0..n)
            .map(|j| (0..n).fold(BigRational::zero(), |acc, i| acc + int(w[i]) * self.cartan_inverse.get(i, j)))
            .collect()
    }

    pub fn inner(&self, a: &[i64], b: &[i64]) -> ExactScalar {
        let n = self.rank();
        let mut acc = BigRational::zero();
        for i in 0..n {
            if a[i] == 0 {
                continue;
            }
            for j in 0..n {
                if b[j] != 0 {
                    acc += self.form.get(i, j) * int(a[i] * b[j]);
                }
            }
        }
        acc
    }

    /// `(λ, λ)` under the datum's form.
    pub fn weight_norm(&self, lam: &[i64]) -> ExactScalar {
        self.inner(lam, lam)
    }

    /// Weyl dimension formula `Π_{α>0} (λ+ρ, α)/(ρ, α)`.
    pub fn weyl_dimension(&self, lam: &[i64]) -> Result<u64> {
        if !self.is_dominant(lam) {
            return Err(LefError::NotDominant(lam.to_vec()));
        }
        let rho = self.rho();
        let shifted: Weight = lam.iter().zip(&rho).map(|(a, b)| a + b).collect();
        let mut acc = BigRational::one();
        for a in &self.positive_roots {
            acc *= self.inner(&shifted, a) / self.inner(&rho, a);
        }
        use num_traits::ToPrimitive;
        Ok(acc.to_integer().to_u64().expect("dimension fits in u64"))
    }

    /// Reflection `s_i(λ) = λ - λ_i α_i`.
    pub fn reflect(&self, i: usize, lam: &[i64]) -> Weight {
        let c = lam[i];
        lam.iter().zip(&self.cartan[i]).map(|(x, a)| x - c * a).collect()
    }

    /// Dominant representative of the Weyl orbit of `lam`, restricted to the
    /// reflections in `subset`.
    pub fn dominant_conjugate(&self, lam: &[i64], subset: &[usize]) -> Weight {
        let mut w = lam.to_vec();
        while let Some(&i) = subset.iter().find(|&&i| w[i] < 0) {
            w = self.reflect(i, &w);
        }
        w
    }

    /// Levi subsystem generated by the simple roots in `subset`.
    pub fn subsystem(&self, subset: &[usize]) -> SubSystem<'_> {
        SubSystem::new(self, subset)
    }

    pub fn to_json(&self) -> Value {
        let form: Vec<Vec<String>> =
            self.form.to_rows().iter().map(|r| r.iter().map(scalar_to_string).collect()).collect();
        json!({
            "label": self.label,
            "rank": self.rank(),
            "cartan_matrix": self.cartan,
            "simple_roots": self.simple_roots(),
            "positive_roots": self.positive_roots,
            "positive_roots_simple_coords": self.positive_roots_simple,
            "fundamental_weights": self.fundamental_weights(),
            "rho": self.rho(),
            "normalization": self.normalization.name(),
            "form": form,
        })
    }
}

/// `(λ, λ)` under the datum's form.
pub fn weight_norm(datum: &RootDatum, lam: &[i64]) -> ExactScalar {
    datum.weight_norm(lam)
}

pub fn weyl_dimension(datum: &RootDatum, lam: &[i64]) -> Result<u64> {
    datum.weyl_dimension(lam)
}

/// Dot action `w·λ = w(λ + ρ) - ρ`.
pub fn dot_action(w: &WeylElement, lam: &[i64], datum: &RootDatum) -> Weight {
    let rho = datum.rho();
    let shifted: Weight = lam.iter().zip(&rho).map(|(x, r)| x + r).collect();
    w.apply(&shifted).iter().zip(&rho).map(|(x, r)| x - r).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::frac;

    #[test]
    fn labels() {
        assert!(build_root_system("A1").is_ok());
        assert!(build_root_system("B1").is_err());
        assert!(build_root_system("E9").is_err());
        assert!(build_root_system("Q3").is_err());
        assert!(build_root_system("A9").is_err());
        assert!(build_root_system("F4").is_ok());
    }

    #[test]
    fn positive_root_counts() {
        let expected = [
            ("A1", 1),
            ("A2", 3),
            ("A3", 6),
            ("B2", 4),
            ("C2", 4),
            ("B3", 9),
            ("C3", 9),
            ("D4", 12),
            ("G2", 6),
            ("F4", 24),
            ("E6", 36),
            ("E7", 63),
            ("E8", 120),
        ];
        for (label, count) in expected {
            assert_eq!(build_root_system(label).unwrap().positive_roots().len(), count, "{label}");
        }
    }

    #[test]
    fn a2_roots() {
        let d = build_root_system("A2").unwrap();
        let mut simple: Vec<_> = d.positive_roots_simple().to_vec();
        simple.sort();
        assert_eq!(simple, vec![vec![0, 1], vec![1, 0], vec![1, 1]]);
        assert_eq!(d.positive_roots()[2], vec![1, 1]);
    }

    #[test]
    fn simple_reflections_permute_other_positive_roots() {
        for label in ["A3", "B3", "C3", "G2", "F4", "D4"] {
            let d = build_root_system(label).unwrap();
            for i in 0..d.rank() {
                let ai = d.simple_root(i);
                for r in d.positive_roots() {
                    if *r == ai {
                        assert_eq!(d.root_sign(&d.reflect(i, r)), Some(false));
                    } else {
                        assert_eq!(d.root_sign(&d.reflect(i, r)), Some(true), "{label}");
                    }
                }
            }
        }
    }

    #[test]
    fn root_lengths_positive() {
        for label in ["B2", "G2", "F4", "C3"] {
            let d = build_root_system(label).unwrap();
            let short = d.positive_roots().iter().map(|r| d.weight_norm(r)).min().unwrap();
            assert_eq!(short, int(2), "{label}");
            for r in d.positive_roots() {
                assert!(d.weight_norm(r) > BigRational::zero());
            }
        }
    }

    #[test]
    fn weyl_dimension_examples() {
        let a1 = build_root_system("A1").unwrap();
        assert_eq!(a1.weyl_dimension(&[0]).unwrap(), 1);
        assert_eq!(a1.weyl_dimension(&[1]).unwrap(), 2);
        let a2 = build_root_system("A2").unwrap();
        assert_eq!(a2.weyl_dimension(&[1, 1]).unwrap(), 8);
        assert_eq!(a2.weyl_dimension(&[-1, 1]), Err(LefError::NotDominant(vec![-1, 1])));
        let g2 = build_root_system("G2").unwrap();
        assert_eq!(g2.weyl_dimension(&[1, 0]).unwrap(), 7);
        assert_eq!(g2.weyl_dimension(&[0, 1]).unwrap(), 14);
    }

    #[test]
    fn weight_norms() {
        let a1 = build_root_system("A1").unwrap();
        assert_eq!(a1.weight_norm(&[0]), int(0));
        assert_eq!(a1.weight_norm(&[2]), int(2));
        let k = a1.with_normalization(FormNormalization::Killing);
        assert_eq!(k.weight_norm(&[2]), frac(1, 2));
        assert_eq!(k.normalization(), FormNormalization::Killing);
    }
}
