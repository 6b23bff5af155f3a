//! Higher Euler characteristics, Harish-Chandra constants, and the values of
//! Euler-Poincaré functions and their orbital integrals.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::{LefError, Result};
use crate::exact::{
    binomial, int, parse_scalar, scalar_to_f64, scalar_to_string, ExactScalar, LaurentCharacter, Weight,
};
use crate::rootsys::RootDatum;

/// `C(n, k)` for small arguments; `None` on overflow.
fn small_binomial(n: u64, k: u64) -> Option<i128> {
    if k > n {
        return Some(0);
    }
    let k = k.min(n - k);
    let mut acc: i128 = 1;
    for i in 0..k {
        acc = acc.checked_mul((n - i) as i128)? / (i + 1) as i128;
    }
    Some(acc)
}

fn chi_r_small(betti: &[u64], r: u64) -> Option<i128> {
    let mut acc: i128 = 0;
    for (j, &b) in betti.iter().enumerate() {
        let t = small_binomial(j as u64, r)?.checked_mul(b as i128)?;
        acc = if (j as u64 + r) % 2 == 0 { acc.checked_add(t)? } else { acc.checked_sub(t)? };
    }
    Some(acc)
}

/// `χ_r = Σ_j (-1)^{j+r} C(j, r) b_j`.
pub fn chi_r(betti: &[u64], r: u64) -> BigInt {
    if let Some(v) = chi_r_small(betti, r) {
        return BigInt::from(v);
    }
    betti
        .iter()
        .enumerate()
        .map(|(j, &b)| {
            let t = binomial(j as i64, r as i64) * BigInt::from(b);
            if (j as u64 + r) % 2 == 0 {
                t
            } else {
                -t
            }
        })
        .sum()
}

/// Betti numbers of a space that is a product of the base with an `r`-torus
/// in cohomology: `b_j = Σ_k C(r, k) base_{j-k}`.
pub fn bundle_betti_transfer(base: &[u64], r: u64) -> Vec<u64> {
    let row: Vec<u64> = (0..=r).map(|k| binomial(r as i64, k as i64).to_u64().expect("binomial fits in u64")).collect();
    let mut out = vec![0u64; base.len() + r as usize];
    for (i, &b) in base.iter().enumerate() {
        for (k, c) in row.iter().enumerate() {
            out[i + k] += c * b;
        }
    }
    out
}

/// `Σ_{j=r}^{r+p} (-1)^{j+r} C(j, r) C(r, j-p)`.
pub fn comb_identity_sum(r: u64, p: u64) -> BigInt {
    (r..=r + p)
        .map(|j| {
            let t = binomial(j as i64, r as i64) * binomial(r as i64, j as i64 - p as i64);
            if (j + r) % 2 == 0 {
                t
            } else {
                -t
            }
        })
        .sum()
}

pub fn comb_identity_check(r: u64, p: u64) -> bool {
    comb_identity_sum(r, p) == if p % 2 == 0 { BigInt::one() } else { -BigInt::one() }
}

/// Exact rational or floating scalar.
#[derive(Clone, Debug, PartialEq)]
pub enum Scalar {
    Exact(ExactScalar),
    Float(f64),
}

impl Scalar {
    pub fn one() -> Self {
        Scalar::Exact(int(1))
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Scalar::Exact(q) => scalar_to_f64(q),
            Scalar::Float(x) => *x,
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Exact(q) => q.is_zero(),
            Scalar::Float(x) => *x == 0.0,
        }
    }

    pub fn is_positive(&self) -> bool {
        match self {
            Scalar::Exact(q) => q.is_positive(),
            Scalar::Float(x) => *x > 0.0,
        }
    }

    pub fn mul(&self, other: &Scalar) -> Scalar {
        match (self, other) {
            (Scalar::Exact(a), Scalar::Exact(b)) => Scalar::Exact(a * b),
            _ => Scalar::Float(self.to_f64() * other.to_f64()),
        }
    }

    pub fn recip(&self) -> Result<Scalar> {
        if self.is_zero() {
            return Err(LefError::ZeroConstant);
        }
        Ok(match self {
            Scalar::Exact(q) => Scalar::Exact(q.recip()),
            Scalar::Float(x) => Scalar::Float(1.0 / x),
        })
    }

    pub fn to_json(&self) -> Value {
        match self {
            Scalar::Exact(q) => Value::String(scalar_to_string(q)),
            Scalar::Float(x) => json!(x),
        }
    }

    /// Accepts `"p/q"`, a decimal string, or a JSON number (integers stay exact).
    pub fn from_json(v: &Value) -> Result<Scalar> {
        match v {
            Value::String(s) => {
                parse_scalar(s).map(Scalar::Exact).ok_or_else(|| LefError::InvalidInput(format!("not a scalar: `{s}`")))
            }
            Value::Number(n) => {
                if let Some(i) = n.as_i64() {
                    Ok(Scalar::Exact(int(i)))
                } else {
                    n.as_f64().map(Scalar::Float).ok_or_else(|| LefError::InvalidInput(format!("not a scalar: {n}")))
                }
            }
            _ => Err(LefError::InvalidInput(format!("not a scalar: {v}"))),
        }
    }

    /// Parses command-line text: exact when it is `p`, `p/q` or a decimal.
    pub fn parse(s: &str) -> Result<Scalar> {
        if let Some(q) = parse_scalar(s) {
            return Ok(Scalar::Exact(q));
        }
        s.trim()
            .parse::<f64>()
            .ok()
            .filter(|x| x.is_finite())
            .map(Scalar::Float)
            .ok_or_else(|| LefError::InvalidInput(format!("not a scalar: `{s}`")))
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Exact(q) => write!(f, "{}", scalar_to_string(q)),
            Scalar::Float(x) => write!(f, "{x}"),
        }
    }
}

impl Serialize for Scalar {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_json().serialize(s)
    }
}

impl<'de> Deserialize<'de> for Scalar {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = Value::deserialize(d)?;
        Scalar::from_json(&v).map_err(serde::de::Error::custom)
    }
}

/// `sign · (2π)^two_pi_power · √2^sqrt2_power · coefficient`, with
/// `sqrt2_power ∈ {0, 1}`.
#[derive(Clone, Debug, PartialEq)]
pub struct Symbolic {
    pub sign: i64,
    pub two_pi_power: i64,
    pub sqrt2_power: i64,
    pub coefficient: Scalar,
}

impl Symbolic {
    pub fn scalar(c: Scalar) -> Self {
        Symbolic { sign: 1, two_pi_power: 0, sqrt2_power: 0, coefficient: c }.normalized()
    }

    /// Moves the sign of an exact coefficient into `sign` and reduces `√2` powers.
    fn normalized(mut self) -> Self {
        let two = self.sqrt2_power.div_euclid(2);
        self.sqrt2_power = self.sqrt2_power.rem_euclid(2);
        if two != 0 {
            self.coefficient = self.coefficient.mul(&Scalar::Exact(crate::exact::scalar_pow(&int(2), two)));
        }
        match &mut self.coefficient {
            Scalar::Exact(q) if q.is_negative() => {
                *q = -q.clone();
                self.sign = -self.sign;
            }
            Scalar::Float(x) if *x < 0.0 => {
                *x = -*x;
                self.sign = -self.sign;
            }
            _ => {}
        }
        if self.coefficient.is_zero() {
            self.sign = 1;
            self.two_pi_power = 0;
            self.sqrt2_power = 0;
        }
        self
    }

    pub fn is_zero(&self) -> bool {
        self.coefficient.is_zero()
    }

    pub fn mul(&self, other: &Symbolic) -> Symbolic {
        Symbolic {
            sign: self.sign * other.sign,
            two_pi_power: self.two_pi_power + other.two_pi_power,
            sqrt2_power: self.sqrt2_power + other.sqrt2_power,
            coefficient: self.coefficient.mul(&other.coefficient),
        }
        .normalized()
    }

    pub fn mul_scalar(&self, c: &Scalar) -> Symbolic {
        self.mul(&Symbolic::scalar(c.clone()))
    }

    pub fn recip(&self) -> Result<Symbolic> {
        Ok(Symbolic {
            sign: self.sign,
            two_pi_power: -self.two_pi_power,
            sqrt2_power: -self.sqrt2_power,
            coefficient: self.coefficient.recip()?,
        }
        .normalized())
    }

    /// Exact rational value when no transcendental factor remains.
    pub fn as_exact(&self) -> Option<ExactScalar> {
        match (&self.coefficient, self.two_pi_power, self.sqrt2_power) {
            (Scalar::Exact(q), 0, 0) => Some(q * int(self.sign)),
            _ => None,
        }
    }

    pub fn to_f64(&self) -> f64 {
        self.sign as f64
            * (2.0 * std::f64::consts::PI).powi(self.two_pi_power as i32)
            * std::f64::consts::SQRT_2.powi(self.sqrt2_power as i32)
            * self.coefficient.to_f64()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "sign": self.sign,
            "two_pi_power": self.two_pi_power,
            "sqrt2_power": self.sqrt2_power,
            "coefficient": self.coefficient.to_json(),
            "value": self.to_f64(),
            "display": self.to_string(),
        })
    }
}

impl fmt::Display for Symbolic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        if self.sign < 0 {
            parts.push("-1".to_string());
        }
        if self.two_pi_power != 0 {
            parts.push(format!("(2π)^{}", self.two_pi_power));
        }
        if self.sqrt2_power != 0 {
            parts.push("√2".to_string());
        }
        parts.push(self.coefficient.to_string());
        write!(f, "{}", parts.join(" * "))
    }
}

/// Root-theoretic data of a connected real reductive group needed for its
/// Harish-Chandra constant.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HarishChandraInput {
    /// `|Φ_n⁺|`, noncompact positive roots.
    pub n_noncompact_pos_roots: u64,
    /// `|Φ⁺|`.
    pub n_pos_roots: u64,
    /// `ν = dim G/K - rk_ℝ G`.
    pub nu: u64,
    /// `v(T)/v(K)`.
    pub volume_ratio: Scalar,
    pub weyl_order: u64,
    pub weyl_order_complex: u64,
    /// `∏_{α∈Φ⁺} (ρ, α)`.
    pub rho_product: Scalar,
}

impl HarishChandraInput {
    /// A compact torus: every product is empty and the volume ratio is 1.
    pub fn torus() -> Self {
        HarishChandraInput {
            n_noncompact_pos_roots: 0,
            n_pos_roots: 0,
            nu: 0,
            volume_ratio: Scalar::one(),
            weyl_order: 1,
            weyl_order_complex: 1,
            rho_product: Scalar::one(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !self.volume_ratio.is_positive() {
            return Err(LefError::InvalidInput("volume_ratio must be positive".into()));
        }
        if self.weyl_order == 0 || self.weyl_order_complex % self.weyl_order != 0 {
            return Err(LefError::InvalidInput("weyl_order must divide weyl_order_complex".into()));
        }
        if self.n_noncompact_pos_roots > self.n_pos_roots {
            return Err(LefError::InvalidInput("more noncompact roots than positive roots".into()));
        }
        Ok(())
    }
}

/// `c_G = (-1)^{|Φ_n⁺|} (2π)^{|Φ⁺|} 2^{ν/2} (v(T)/v(K)) |W|`.
pub fn harish_chandra_constant(input: &HarishChandraInput) -> Result<Symbolic> {
    input.validate()?;
    Ok(Symbolic {
        sign: if input.n_noncompact_pos_roots % 2 == 0 { 1 } else { -1 },
        two_pi_power: input.n_pos_roots as i64,
        sqrt2_power: input.nu as i64,
        coefficient: input.volume_ratio.mul(&Scalar::Exact(int(input.weyl_order as i64))),
    }
    .normalized())
}

#[derive(Clone, Debug, PartialEq)]
pub struct ChiGen {
    pub chi_gen: Symbolic,
    /// `χ_gen / vol(A/Γ_A)` when the split-torus covolume is known.
    pub chi_r: Option<Symbolic>,
}

/// `χ_gen = c_L^{-1} |W_ℂ| ∏(ρ, α) vol(Γ\L)`.
pub fn chi_gen(input: &HarishChandraInput, covolume: &Scalar, a_covolume: Option<&Scalar>) -> Result<ChiGen> {
    if !covolume.is_positive() {
        return Err(LefError::InvalidInput("covolume must be positive".into()));
    }
    let c = harish_chandra_constant(input)?;
    let value = c
        .recip()?
        .mul_scalar(&Scalar::Exact(int(input.weyl_order_complex as i64)))
        .mul_scalar(&input.rho_product)
        .mul_scalar(covolume);
    let chi_r = match a_covolume {
        Some(v) if !v.is_positive() => return Err(LefError::InvalidInput("A-covolume must be positive".into())),
        Some(v) => Some(value.mul_scalar(&v.recip()?)),
        None => None,
    };
    Ok(ChiGen { chi_gen: value, chi_r })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EllipticClassInput {
    pub tau_trace: Scalar,
    pub centralizer_data: HarishChandraInput,
    pub is_elliptic: bool,
    pub is_regular: bool,
}

/// `O_g(f_τ) = tr τ(g) c_g^{-1} |W(t, g_g)| ∏_{α∈Φ_g⁺} (ρ_g, α)`, zero off the
/// elliptic set; a regular element has a torus centralizer and gives `tr τ(g)`.
pub fn orbital_integral_value(input: &EllipticClassInput) -> Result<Symbolic> {
    if !input.is_elliptic {
        return Ok(Symbolic::scalar(Scalar::Exact(int(0))));
    }
    if input.is_regular {
        return Ok(Symbolic::scalar(input.tau_trace.clone()));
    }
    let d = &input.centralizer_data;
    Ok(harish_chandra_constant(d)?
        .recip()?
        .mul_scalar(&Scalar::Exact(int(d.weyl_order_complex as i64)))
        .mul_scalar(&d.rho_product)
        .mul_scalar(&input.tau_trace))
}

fn require_invariant(ch: &LaurentCharacter, group: &RootDatum) -> Result<LaurentCharacter> {
    if ch.rank() != group.rank() {
        return Err(LefError::RankMismatch(ch.rank(), group.rank()));
    }
    let ch = ch.normalized();
    if ch.scale() != 1 {
        return Err(LefError::InvalidInput("character has non-integral weights".into()));
    }
    for i in 0..group.rank() {
        if ch.map_weights(ch.rank(), 1, |w| group.reflect(i, w)) != ch {
            return Err(LefError::NotWeylInvariant);
        }
    }
    Ok(ch)
}

/// Multiplicities of irreducibles in a Weyl-invariant virtual character:
/// repeatedly removes the character of the dominant weight `μ` with the
/// largest `(μ+ρ, μ+ρ)`.
pub fn decompose_virtual(ch: &LaurentCharacter, group: &RootDatum) -> Result<BTreeMap<Weight, i64>> {
    let mut rest = require_invariant(ch, group)?;
    let rho = group.rho();
    let mut out = BTreeMap::new();
    while !rest.is_empty() {
        let top = rest
            .terms()
            .filter(|(w, _)| group.is_dominant(w))
            .map(|(w, m)| {
                let s: Weight = w.iter().zip(&rho).map(|(a, b)| a + b).collect();
                (group.weight_norm(&s), w.clone(), m)
            })
            .max_by(|a, b| a.0.cmp(&b.0).then_with(|| a.1.cmp(&b.1)))
            .expect("a nonzero invariant character has a dominant weight");
        let (_, lam, m) = top;
        let irr = crate::rootsys::irreducible_character(group, &lam)?;
        rest = rest.sub(&irr.scaled_by(m))?;
        out.insert(lam, m);
    }
    Ok(out)
}

/// `Σ_p (-1)^p dim (V_π ⊗ ∧^p p ⊗ V_τ̆)^K` from characters of the compact group.
pub fn euler_poincare_trace(
    pi_char: &LaurentCharacter,
    p_char: &LaurentCharacter,
    tau_char: &LaurentCharacter,
    group: &RootDatum,
) -> Result<i64> {
    let pi = require_invariant(pi_char, group)?;
    let p = require_invariant(p_char, group)?;
    let tau = require_invariant(tau_char, group)?;
    let alt = p.alternating_exterior_sum()?;
    let total = pi.product(&alt)?.product(&tau.dual())?;
    Ok(decompose_virtual(&total, group)?.get(&group.zero_weight()).copied().unwrap_or(0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::frac;
    use crate::rootsys::{build_root_system, irreducible_character};

    #[test]
    fn chi_r_examples() {
        assert_eq!(chi_r(&[1, 0, 1], 0), BigInt::from(2));
        assert_eq!(chi_r(&[1, 1], 1), BigInt::from(1));
        assert_eq!(chi_r(&[1, 2, 1], 1), BigInt::from(0));
    }

    #[test]
    fn transfer_examples() {
        assert_eq!(bundle_betti_transfer(&[1], 1), vec![1, 1]);
        assert_eq!(bundle_betti_transfer(&[1], 2), vec![1, 2, 1]);
        assert_eq!(bundle_betti_transfer(&[1, 0, 1], 1), vec![1, 1, 1, 1]);
    }

    #[test]
    fn comb_identity() {
        assert_eq!(comb_identity_sum(1, 1), BigInt::from(-1));
        let count =
            (0..=12).flat_map(|r| (0..=12).map(move |p| (r, p))).filter(|&(r, p)| comb_identity_check(r, p)).count();
        assert_eq!(count, 169);
    }

    #[test]
    fn harish_chandra_examples() {
        let c = harish_chandra_constant(&HarishChandraInput::torus()).unwrap();
        assert_eq!(c.as_exact(), Some(int(1)));
        let input = HarishChandraInput {
            n_noncompact_pos_roots: 1,
            n_pos_roots: 1,
            nu: 2,
            volume_ratio: Scalar::one(),
            weyl_order: 2,
            weyl_order_complex: 2,
            rho_product: Scalar::one(),
        };
        let c = harish_chandra_constant(&input).unwrap();
        assert_eq!((c.sign, c.two_pi_power, c.sqrt2_power), (-1, 1, 0));
        assert_eq!(c.coefficient, Scalar::Exact(int(4)));
        assert!((c.to_f64() + 8.0 * std::f64::consts::PI).abs() < 1e-12);
        let mut flipped = input.clone();
        flipped.n_noncompact_pos_roots = 0;
        assert_eq!(harish_chandra_constant(&flipped).unwrap().sign, 1);
        let mut odd = input;
        odd.nu = 3;
        assert_eq!(harish_chandra_constant(&odd).unwrap().sqrt2_power, 1);
    }

    #[test]
    fn chi_gen_properties() {
        let input = HarishChandraInput {
            n_noncompact_pos_roots: 1,
            n_pos_roots: 1,
            nu: 2,
            volume_ratio: Scalar::Exact(frac(1, 3)),
            weyl_order: 1,
            weyl_order_complex: 2,
            rho_product: Scalar::Exact(frac(1, 2)),
        };
        let v = Scalar::Exact(int(3));
        let a = chi_gen(&input, &v, None).unwrap().chi_gen;
        let b = chi_gen(&input, &Scalar::Exact(int(6)), None).unwrap().chi_gen;
        assert_eq!(b, a.mul_scalar(&Scalar::Exact(int(2))));
        let c = harish_chandra_constant(&input).unwrap();
        // |W_C| · rho_product · v = 2 · 1/2 · 3
        let back = a.mul_scalar(&Scalar::Exact(int(input.weyl_order as i64))).mul_scalar(&Scalar::Exact(frac(1, 3)));
        assert_eq!(back, c.recip().unwrap().mul_scalar(&Scalar::Exact(int(input.weyl_order as i64))));
        let mut zero = input.clone();
        zero.rho_product = Scalar::Exact(int(0));
        assert!(chi_gen(&zero, &v, None).unwrap().chi_gen.is_zero());
        let with_a = chi_gen(&input, &v, Some(&Scalar::Exact(int(2)))).unwrap();
        assert_eq!(with_a.chi_r.unwrap().mul_scalar(&Scalar::Exact(int(2))), a);
    }

    #[test]
    fn orbital_integrals() {
        let mut input = EllipticClassInput {
            tau_trace: Scalar::Exact(frac(5, 2)),
            centralizer_data: HarishChandraInput::torus(),
            is_elliptic: false,
            is_regular: true,
        };
        assert!(orbital_integral_value(&input).unwrap().is_zero());
        input.is_elliptic = true;
        assert_eq!(orbital_integral_value(&input).unwrap().as_exact(), Some(frac(5, 2)));
        input.is_regular = false;
        assert_eq!(orbital_integral_value(&input).unwrap().as_exact(), Some(frac(5, 2)));
        input.tau_trace = Scalar::one();
        input.is_regular = true;
        assert_eq!(orbital_integral_value(&input).unwrap().as_exact(), Some(int(1)));
    }

    #[test]
    fn euler_poincare_examples() {
        let d = build_root_system("A1").unwrap();
        let one = LaurentCharacter::one(1);
        let empty = LaurentCharacter::zero(1);
        assert_eq!(euler_poincare_trace(&one, &empty, &one, &d).unwrap(), 1);
        // every weight of adj ⊗ ∧adj ⊗ L(ω) is odd, so there are no invariants
        let tau = irreducible_character(&d, &[1]).unwrap();
        let adj = irreducible_character(&d, &[2]).unwrap();
        assert_eq!(euler_poincare_trace(&adj, &adj, &tau, &d).unwrap(), 0);
        let bad = LaurentCharacter::monomial(vec![2]);
        assert_eq!(euler_poincare_trace(&bad, &empty, &one, &d), Err(LefError::NotWeylInvariant));
    }

    #[test]
    fn decomposition_round_trip() {
        let d = build_root_system("B2").unwrap();
        let a = irreducible_character(&d, &[1, 0]).unwrap();
        let b = irreducible_character(&d, &[0, 1]).unwrap();
        let ch = a.product(&b).unwrap().sub(&a).unwrap();
        let dec = decompose_virtual(&ch, &d).unwrap();
        let mut rebuilt = LaurentCharacter::zero(2);
        for (w, m) in &dec {
            rebuilt = rebuilt.add(&irreducible_character(&d, w).unwrap().scaled_by(*m)).unwrap();
        }
        assert_eq!(rebuilt, ch);
    }
}
