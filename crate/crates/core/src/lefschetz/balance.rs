use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::SpectralTermTable;
use crate::error::{LefError, Result};
use crate::euler::Scalar;
use crate::exact::{scalar_to_f64, ExactScalar};

/// Complex number written as `[re, im]` or a bare real.
fn complex_from_json(v: &Value) -> Result<Complex64> {
    match v {
        Value::Array(a) if a.len() == 2 => {
            let re = Scalar::from_json(&a[0])?.to_f64();
            let im = Scalar::from_json(&a[1])?.to_f64();
            Ok(Complex64::new(re, im))
        }
        Value::Array(_) => Err(LefError::InvalidInput("complex numbers are [re, im]".into())),
        other => Ok(Complex64::new(Scalar::from_json(other)?.to_f64(), 0.0)),
    }
}

mod complex_serde {
    use super::*;

    pub fn serialize<S: serde::Serializer>(c: &Complex64, s: S) -> std::result::Result<S::Ok, S::Error> {
        [c.re, c.im].serialize(s)
    }

    pub fn deserialize<'de, D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Complex64, D::Error> {
        complex_from_json(&Value::deserialize(d)?).map_err(serde::de::Error::custom)
    }
}

fn default_multipliers() -> Vec<[f64; 2]> {
    Vec::new()
}

/// One conjugacy class `γ` of the geometric side.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GeodesicClassRecord {
    /// `log a_γ` in the basis of `a` dual to the `a`-weight coordinates.
    pub a_log: Vec<f64>,
    /// `λ_γ`.
    pub covolume: f64,
    /// `χ_r(Γ_γ)`.
    pub chi_r: Scalar,
    #[serde(with = "complex_serde")]
    pub omega_trace: Complex64,
    #[serde(with = "complex_serde")]
    pub tau_trace: Complex64,
    /// Unit-modulus eigenvalues of `b_γ` on the weight spaces of `n`, as
    /// `[re, im]` in the order of the `n`-weights; empty means all 1.
    #[serde(default = "default_multipliers")]
    pub n_multipliers: Vec<[f64; 2]>,
}

/// An `a`-weight of `n` with the eigenvalue of `b_γ` on its root space.
#[derive(Clone, Debug, PartialEq)]
pub struct NWeight {
    pub a_weight: Vec<ExactScalar>,
    pub multiplier: Complex64,
}

impl NWeight {
    pub fn plain(a_weight: Vec<ExactScalar>) -> Self {
        NWeight { a_weight, multiplier: Complex64::new(1.0, 0.0) }
    }
}

fn pairing(w: &[ExactScalar], x: &[f64]) -> f64 {
    w.iter().zip(x).map(|(a, b)| scalar_to_f64(a) * b).sum()
}

/// `c_γ = λ_γ χ_r(Γ_γ) tr ω(γ) tr τ(b_γ) / det(1 - a_γ b_γ | n)`.
pub fn geometric_term(rec: &GeodesicClassRecord, n_weights: &[NWeight]) -> Result<Complex64> {
    if !(rec.covolume > 0.0) {
        return Err(LefError::InvalidInput("covolume must be positive".into()));
    }
    if !rec.n_multipliers.is_empty() && rec.n_multipliers.len() != n_weights.len() {
        return Err(LefError::RankMismatch(rec.n_multipliers.len(), n_weights.len()));
    }
    let mut det = Complex64::new(1.0, 0.0);
    for (k, w) in n_weights.iter().enumerate() {
        if w.a_weight.len() != rec.a_log.len() {
            return Err(LefError::RankMismatch(w.a_weight.len(), rec.a_log.len()));
        }
        let e = pairing(&w.a_weight, &rec.a_log);
        if !(e < 0.0) {
            return Err(LefError::InvalidInput("a_log is not in the negative chamber".into()));
        }
        let b = match rec.n_multipliers.get(k) {
            Some(&[re, im]) => Complex64::new(re, im) * w.multiplier,
            None => w.multiplier,
        };
        det *= Complex64::new(1.0, 0.0) - b * e.exp();
    }
    if det.norm() == 0.0 {
        return Err(LefError::VanishingDenominator);
    }
    Ok(rec.omega_trace * rec.tau_trace * (rec.covolume * rec.chi_r.to_f64()) / det)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Ledger {
    pub classes: Vec<GeodesicClassRecord>,
}

/// `c · e^{μ·t}` on a box in chamber coordinates `t = -log a`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TestPiece {
    pub coefficient: f64,
    pub exponent: Vec<Scalar>,
    #[serde(rename = "box")]
    pub bounds: Vec<[f64; 2]>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TestFunction {
    pub pieces: Vec<TestPiece>,
}

impl TestFunction {
    pub fn validate(&self) -> Result<()> {
        for p in &self.pieces {
            if p.exponent.len() != p.bounds.len() {
                return Err(LefError::RankMismatch(p.exponent.len(), p.bounds.len()));
            }
            if p.bounds.iter().any(|&[t, u]| !(0.0 < t && t < u && u.is_finite())) {
                return Err(LefError::InvalidInput("test-function boxes need 0 < T < U".into()));
            }
        }
        Ok(())
    }

    pub fn scaled(&self, c: f64) -> TestFunction {
        TestFunction {
            pieces: self.pieces.iter().map(|p| TestPiece { coefficient: p.coefficient * c, ..p.clone() }).collect(),
        }
    }

    /// `φ` at chamber coordinates `t`.
    pub fn evaluate(&self, t: &[f64]) -> f64 {
        self.pieces
            .iter()
            .filter(|p| p.bounds.iter().zip(t).all(|(&[lo, hi], x)| lo <= *x && *x <= hi))
            .map(|p| p.coefficient * p.exponent.iter().zip(t).map(|(m, x)| m.to_f64() * x).sum::<f64>().exp())
            .sum()
    }
}

/// `∫_T^U e^{ct} dt`.
fn integrate_exp(c: f64, lo: f64, hi: f64) -> f64 {
    if c == 0.0 {
        hi - lo
    } else {
        ((c * hi).exp() - (c * lo).exp()) / c
    }
}

/// `Σ_i c_i ∏_j ∫_{T_j}^{U_j} e^{(μ_ij + λ_j) t} dt`.
pub fn integrate_testfn(phi: &TestFunction, lam: &[ExactScalar]) -> Result<f64> {
    phi.validate()?;
    let mut total = 0.0;
    for p in &phi.pieces {
        if p.exponent.len() != lam.len() {
            return Err(LefError::RankMismatch(p.exponent.len(), lam.len()));
        }
        let mut prod = p.coefficient;
        for ((m, l), &[lo, hi]) in p.exponent.iter().zip(lam).zip(&p.bounds) {
            // exact exponent whenever μ is rational, so cancellation to zero is detected
            let c = match m {
                Scalar::Exact(q) => scalar_to_f64(&(q + l)),
                Scalar::Float(x) => x + scalar_to_f64(l),
            };
            prod *= integrate_exp(c, lo, hi);
        }
        total += prod;
    }
    Ok(total)
}

/// A spectral entry: an `a`-weight table with its multiplicity `N`, or a
/// highest weight to be resolved against the current parabolic.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpectralEntry {
    #[serde(default)]
    pub table: Option<Vec<TableRow>>,
    #[serde(default)]
    pub weight: Option<Vec<i64>>,
    pub multiplicity: i64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TableRow {
    pub lambda: Vec<Scalar>,
    pub m: i64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpectralInput {
    pub entries: Vec<SpectralEntry>,
}

impl SpectralEntry {
    /// The explicit table, if any, with exact `λ`.
    pub fn explicit_table(&self) -> Result<Option<SpectralTermTable>> {
        let Some(rows) = &self.table else { return Ok(None) };
        let mut t = SpectralTermTable::default();
        for row in rows {
            let lam = row
                .lambda
                .iter()
                .map(|s| match s {
                    Scalar::Exact(q) => Ok(q.clone()),
                    Scalar::Float(_) => Err(LefError::InvalidInput("table weights must be rational".into())),
                })
                .collect::<Result<Vec<_>>>()?;
            *t.entries.entry(lam).or_insert(0) += row.m;
        }
        t.entries.retain(|_, v| *v != 0);
        Ok(Some(t))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct BalanceResult {
    pub global: f64,
    pub local: Complex64,
    pub residual: Complex64,
}

/// Global side `Σ N Σ_λ m_λ ∫ φ(t) e^{-λ·t} dt` against the local side
/// `Σ_γ c_γ φ(a_γ)`. An `a`-weight `λ` is `a ↦ e^{λ(log a)}`, which in chamber
/// coordinates `t = -log a` is the exponent `-λ`.
pub fn balance_evaluator(
    spectral: &[(SpectralTermTable, i64)],
    ledger: &[GeodesicClassRecord],
    phi: &TestFunction,
    n_weights: &[NWeight],
) -> Result<BalanceResult> {
    phi.validate()?;
    let mut global = 0.0;
    for (table, mult) in spectral {
        for (lam, m) in &table.entries {
            let neg: Vec<ExactScalar> = lam.iter().map(|x| -x.clone()).collect();
            global += (*mult * *m) as f64 * integrate_testfn(phi, &neg)?;
        }
    }
    let mut local = Complex64::new(0.0, 0.0);
    for rec in ledger {
        let c = geometric_term(rec, n_weights)?;
        let t: Vec<f64> = rec.a_log.iter().map(|x| -x).collect();
        local += c * phi.evaluate(&t);
    }
    Ok(BalanceResult { global, local, residual: Complex64::new(global, 0.0) - local })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::int;
    use std::collections::BTreeMap;

    fn record(l: f64) -> GeodesicClassRecord {
        GeodesicClassRecord {
            a_log: vec![-l],
            covolume: l,
            chi_r: Scalar::one(),
            omega_trace: Complex64::new(1.0, 0.0),
            tau_trace: Complex64::new(1.0, 0.0),
            n_multipliers: vec![],
        }
    }

    fn box_fn(c: f64, mu: i64, lo: f64, hi: f64) -> TestFunction {
        TestFunction {
            pieces: vec![TestPiece { coefficient: c, exponent: vec![Scalar::Exact(int(mu))], bounds: vec![[lo, hi]] }],
        }
    }

    #[test]
    fn geometric_examples() {
        let n = [NWeight::plain(vec![int(1)])];
        let l = 1.7f64;
        let c = geometric_term(&record(l), &n).unwrap();
        assert!((c.re - l / (1.0 - (-l).exp())).abs() < 1e-12 && c.im == 0.0);
        let mut doubled = record(l);
        doubled.covolume *= 2.0;
        assert!((geometric_term(&doubled, &n).unwrap() - c * 2.0).norm() < 1e-12);
        let mut zero = record(l);
        zero.omega_trace = Complex64::new(0.0, 0.0);
        assert_eq!(geometric_term(&zero, &n).unwrap().norm(), 0.0);
        assert!(geometric_term(&record(-1.0), &n).is_err());
    }

    #[test]
    fn integration_examples() {
        assert_eq!(integrate_testfn(&box_fn(1.0, 0, 1.0, 2.0), &[int(0)]).unwrap(), 1.0);
        let v = integrate_testfn(&box_fn(1.0, -1, 0.5, 1.5), &[int(0)]).unwrap();
        assert!((v - ((-0.5f64).exp() - (-1.5f64).exp())).abs() < 1e-15);
        let two = TestFunction {
            pieces: vec![TestPiece {
                coefficient: 1.0,
                exponent: vec![Scalar::Exact(int(-1)), Scalar::Exact(int(0))],
                bounds: vec![[0.5, 1.5], [1.0, 3.0]],
            }],
        };
        assert!((integrate_testfn(&two, &[int(0), int(0)]).unwrap() - 2.0 * v).abs() < 1e-15);
        assert!(box_fn(1.0, 0, 0.0, 1.0).validate().is_err());
    }

    #[test]
    fn balance_fixture() {
        assert_eq!(
            balance_evaluator(&[], &[], &box_fn(1.0, 0, 1.0, 2.0), &[]).unwrap(),
            BalanceResult { global: 0.0, local: Complex64::new(0.0, 0.0), residual: Complex64::new(0.0, 0.0) }
        );
        let n = [NWeight::plain(vec![int(1)])];
        let l = 2.0;
        let c = geometric_term(&record(l), &n).unwrap().re;
        let phi = box_fn(1.0, 0, l - c / 2.0, l + c / 2.0);
        let table = SpectralTermTable { entries: BTreeMap::from([(vec![int(0)], 1)]) };
        let r = balance_evaluator(&[(table.clone(), 1)], &[record(l)], &phi, &n).unwrap();
        assert!(r.residual.norm() < 1e-12);
        let r3 = balance_evaluator(&[(table, 1)], &[record(l)], &phi.scaled(3.0), &n).unwrap();
        assert!((r3.global - 3.0 * r.global).abs() < 1e-12 && (r3.local - r.local * 3.0).norm() < 1e-12);
    }

    #[test]
    fn ledger_json() {
        let j = r#"{"classes": [{"a_log": [-1.0], "covolume": 1.0, "chi_r": "1/2", "omega_trace": [1, 0], "tau_trace": 2}]}"#;
        let l: Ledger = serde_json::from_str(j).unwrap();
        assert_eq!(l.classes[0].chi_r, Scalar::Exact(crate::exact::frac(1, 2)));
        assert_eq!(l.classes[0].tau_trace, Complex64::new(2.0, 0.0));
        let s: SpectralInput =
            serde_json::from_str(r#"{"entries": [{"table": [{"lambda": ["-1"], "m": 1}], "multiplicity": 2}]}"#)
                .unwrap();
        let t = s.entries[0].explicit_table().unwrap().unwrap();
        assert_eq!(t.entries, BTreeMap::from([(vec![int(-1)], 1)]));
    }
}
