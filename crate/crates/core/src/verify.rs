//! The verification suite: every algebraic identity of the engine, swept over
//! configurable bounds, collected into one deterministic report.

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::chevalley::{
    build_chevalley_algebra, casimir_eigenvalue, highest_weight_module_capped, parabolic_split, ChevalleyAlgebra,
    DEFAULT_DIMENSION_CAP,
};
use crate::error::{LefError, Result};
use crate::euler::{bundle_betti_transfer, chi_r, comb_identity_check, comb_identity_sum};
use crate::exact::{frac, scalar_to_string, ExactScalar, Weight};
use crate::lefschetz::{det_identity_check, hecht_schmid_check};
use crate::nilcohomology::{
    build_ce_complex, cohomology_table, euler_character_check, homology_table, kostant_prediction,
};
use crate::rootsys::{build_root_system, FormNormalization, RootDatum};
use crate::spinor::{epsilon_twist_check, spin_report, verify_spin_square, PolarizedSpace, SpinModule};

pub const CHECK_NAMES: [&str; 12] = [
    "casimir",
    "chitransfer",
    "comb",
    "d2",
    "det",
    "duality",
    "epsilon",
    "euler",
    "hechtschmid",
    "jacobi",
    "kostant",
    "spin",
];

/// Bounds and selection for a suite run.
#[derive(Clone, Debug, PartialEq)]
pub struct SuiteConfig {
    pub checks: Vec<String>,
    pub types: Vec<String>,
    pub max_coord: i64,
    pub seed: u64,
    pub det_points: usize,
    pub max_m: usize,
    pub comb_max: u64,
    pub betti_len: usize,
    pub betti_max: u64,
    pub r_max: u64,
    pub dimension_cap: u64,
    pub timings: bool,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            checks: vec!["all".into()],
            types: vec!["A1".into(), "A2".into(), "B2".into()],
            max_coord: 2,
            seed: 0,
            det_points: 50,
            max_m: 6,
            comb_max: 12,
            betti_len: 8,
            betti_max: 5,
            r_max: 5,
            dimension_cap: DEFAULT_DIMENSION_CAP,
            timings: false,
        }
    }
}

impl SuiteConfig {
    /// Expands `all` and rejects unknown names; the result is sorted.
    pub fn selected_checks(&self) -> Result<Vec<&'static str>> {
        let mut out = Vec::new();
        for c in &self.checks {
            if c == "all" {
                out.extend(CHECK_NAMES);
            } else {
                let name = CHECK_NAMES.iter().find(|n| *n == c).ok_or_else(|| LefError::UnknownCheck(c.clone()))?;
                out.push(*name);
            }
        }
        out.sort_unstable();
        out.dedup();
        Ok(out)
    }

    /// Refuses bounds that would not finish at desk scale.
    pub fn validate(&self) -> Result<()> {
        self.selected_checks()?;
        let refuse = |what: String| Err(LefError::BoundTooLarge(what));
        if !(0..=4).contains(&self.max_coord) {
            return refuse(format!("max-coord {} (limit 4)", self.max_coord));
        }
        if self.max_m > 10 {
            return refuse(format!("max-m {} (limit 10)", self.max_m));
        }
        if self.comb_max > 60 {
            return refuse(format!("comb max {} (limit 60)", self.comb_max));
        }
        if self.betti_len > 9 || self.betti_max > 6 || self.r_max > 8 {
            return refuse("Betti sweep (limits: length 9, entries 6, r 8)".into());
        }
        if self.det_points > 10_000 {
            return refuse(format!("{} det points (limit 10000)", self.det_points));
        }
        for t in &self.types {
            let d = build_root_system(t)?;
            if d.positive_roots().len() > 12 {
                return refuse(format!("type {t}: {} positive roots (limit 12)", d.positive_roots().len()));
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ReportEntry {
    pub check: String,
    pub params: Value,
    pub cases: u64,
    pub pass: bool,
    /// Always present on failure.
    pub counterexample: Option<Value>,
    pub details: Value,
    pub wall_ms: Option<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct VerificationReport {
    pub seed: u64,
    pub entries: Vec<ReportEntry>,
}

impl VerificationReport {
    pub fn failures(&self) -> usize {
        self.entries.iter().filter(|e| !e.pass).count()
    }

    pub fn all_pass(&self) -> bool {
        self.failures() == 0
    }

    pub fn to_json(&self) -> Value {
        let entries: Vec<Value> = self
            .entries
            .iter()
            .map(|e| {
                let mut v = json!({
                    "check": e.check,
                    "params": e.params,
                    "cases": e.cases,
                    "pass": e.pass,
                    "counterexample": e.counterexample,
                    "details": e.details,
                });
                if let Some(ms) = e.wall_ms {
                    v["wall_ms"] = json!(ms);
                }
                v
            })
            .collect();
        json!({
            "seed": self.seed,
            "entries": entries,
            "summary": {
                "total": self.entries.len(),
                "passed": self.entries.len() - self.failures(),
                "failed": self.failures(),
            },
        })
    }
}

/// Accumulates cases of one check and keeps the first failure.
struct Tally {
    cases: u64,
    counterexample: Option<Value>,
}

impl Tally {
    fn new() -> Self {
        Tally { cases: 0, counterexample: None }
    }

    fn record(&mut self, ok: bool, payload: impl FnOnce() -> Value) {
        self.cases += 1;
        if !ok && self.counterexample.is_none() {
            self.counterexample = Some(payload());
        }
    }
}

fn dominant_weights(rank: usize, max_coord: i64) -> Vec<Weight> {
    let base = (max_coord + 1) as usize;
    (0..base.pow(rank as u32))
        .map(|code| (0..rank).map(|j| ((code / base.pow(j as u32)) % base) as i64).collect())
        .collect()
}

fn levi_subsets(rank: usize) -> Vec<Vec<usize>> {
    (0..1usize << rank).map(|mask| (0..rank).filter(|i| mask >> i & 1 == 1).collect()).collect()
}

fn case(label: &str, levi: &[usize], lam: &[i64]) -> Value {
    json!({"type": label, "levi": levi.iter().map(|i| i + 1).collect::<Vec<_>>(), "weight": lam})
}

struct Sweep {
    label: String,
    alg: ChevalleyAlgebra,
}

impl Sweep {
    fn datum(&self) -> &RootDatum {
        self.alg.datum()
    }
}

/// Runs every case of a (type, Levi, λ) sweep through `f`.
fn sweep_cases<F>(sweeps: &[Sweep], cfg: &SuiteConfig, tally: &mut Tally, mut f: F) -> Result<()>
where
    F: FnMut(&Sweep, &[usize], &crate::chevalley::WeightModule) -> Result<bool>,
{
    for s in sweeps {
        let n = s.datum().rank();
        for lam in dominant_weights(n, cfg.max_coord) {
            let module = highest_weight_module_capped(&s.alg, &lam, cfg.dimension_cap)?;
            for levi in levi_subsets(n) {
                let ok = f(s, &levi, &module)?;
                tally.record(ok, || case(&s.label, &levi, &lam));
            }
        }
    }
    Ok(())
}

fn random_point(rng: &mut ChaCha8Rng, rank: usize) -> Vec<ExactScalar> {
    (0..rank)
        .map(|_| {
            let mut p = 0;
            while p == 0 {
                p = rng.gen_range(-9i64..=9);
            }
            frac(p, rng.gen_range(1i64..=9))
        })
        .collect()
}

fn run_check(name: &str, cfg: &SuiteConfig, sweeps: &[Sweep]) -> Result<(Value, Tally, Value)> {
    let mut t = Tally::new();
    let sweep_params = json!({"types": cfg.types, "max_coord": cfg.max_coord});
    let mut details = Value::Null;
    let params = match name {
        "jacobi" => {
            for s in sweeps {
                let v = s.alg.jacobi_violation();
                let anti = s.alg.is_antisymmetric();
                t.record(v.is_none() && anti, || {
                    let triple = v.map(|(x, y, z)| [x, y, z].map(|k| s.alg.label_string(k)).to_vec());
                    json!({"type": s.label, "triple": triple, "antisymmetric": anti})
                });
            }
            json!({"types": cfg.types})
        }
        "casimir" => {
            sweep_cases(sweeps, cfg, &mut t, |s, levi, m| {
                if !levi.is_empty() {
                    return Ok(true);
                }
                let mut ok = true;
                for norm in [FormNormalization::Killing, FormNormalization::ShortRootTwo] {
                    let d = s.datum().with_normalization(norm);
                    let rho = d.rho();
                    let lr: Weight = m.highest_weight().iter().zip(&rho).map(|(a, b)| a + b).collect();
                    let expected = d.weight_norm(&lr) - d.weight_norm(&rho);
                    ok &= casimir_eigenvalue(&s.alg, m, norm).map(|c| c == expected).unwrap_or(false);
                }
                Ok(ok)
            })?;
            sweep_params
        }
        "d2" => {
            sweep_cases(sweeps, cfg, &mut t, |s, levi, m| {
                let split = parabolic_split(&s.alg, levi)?;
                Ok(build_ce_complex(&s.alg, &split, m)?.d_squared_vanishes()
                    && crate::nilcohomology::boundary_squared_vanishes(&s.alg, &split, m)?)
            })?;
            sweep_params
        }
        "kostant" => {
            sweep_cases(sweeps, cfg, &mut t, |s, levi, m| {
                let split = parabolic_split(&s.alg, levi)?;
                let table = cohomology_table(&build_ce_complex(&s.alg, &split, m)?);
                Ok(table == kostant_prediction(&split, m.highest_weight())?)
            })?;
            sweep_params
        }
        "euler" => {
            sweep_cases(sweeps, cfg, &mut t, |s, levi, m| {
                let split = parabolic_split(&s.alg, levi)?;
                Ok(euler_character_check(&build_ce_complex(&s.alg, &split, m)?, m))
            })?;
            sweep_params
        }
        "duality" => {
            sweep_cases(sweeps, cfg, &mut t, |s, levi, m| {
                let split = parabolic_split(&s.alg, levi)?;
                Ok(homology_table(&s.alg, &split, m)?.duality_holds)
            })?;
            sweep_params
        }
        "hechtschmid" => {
            let mut pairings = std::collections::BTreeSet::new();
            sweep_cases(sweeps, cfg, &mut t, |s, levi, m| {
                let split = parabolic_split(&s.alg, levi)?;
                let r = hecht_schmid_check(&s.alg, m, &split)?;
                if split.dim_n() > 0 {
                    pairings.insert(r.pairing.map(|p| p.name()).unwrap_or("none"));
                }
                Ok(r.holds)
            })?;
            details = json!({"pairing": pairings.into_iter().collect::<Vec<_>>()});
            sweep_params
        }
        "det" => {
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
            for s in sweeps {
                let n = s.datum().rank();
                for levi in levi_subsets(n) {
                    let split = parabolic_split(&s.alg, &levi)?;
                    for _ in 0..cfg.det_points {
                        let point = random_point(&mut rng, n);
                        let ok = det_identity_check(split.n_roots(), &point)?;
                        t.record(ok, || {
                            json!({
                                "type": s.label,
                                "levi": levi.iter().map(|i| i + 1).collect::<Vec<_>>(),
                                "point": point.iter().map(scalar_to_string).collect::<Vec<_>>(),
                            })
                        });
                    }
                }
            }
            json!({"types": cfg.types, "points": cfg.det_points, "seed": cfg.seed})
        }
        "spin" => {
            for m in 1..=cfg.max_m {
                let space = PolarizedSpace::standard(m)?;
                let module = SpinModule::new(space.clone());
                let clifford = module.clifford_relations_hold()?;
                let even = m > 4 || module.even_part_preserves_halves()?;
                let sq = verify_spin_square(&space);
                t.record(
                    clifford && even && sq.holds,
                    || json!({"m": m, "clifford": clifford, "even_stable": even, "square_holds": sq.holds}),
                );
            }
            details = Value::Array(spin_report(cfg.max_m)?);
            json!({"max_m": cfg.max_m})
        }
        "epsilon" => {
            let mut parities = Vec::new();
            for m in 1..=cfg.max_m {
                let r = epsilon_twist_check(&PolarizedSpace::standard(m)?);
                parities.push(json!({"m": m, "parity": r.parity.map(|p| p.name())}));
                t.record(r.holds, || json!({"m": m}));
            }
            details = Value::Array(parities);
            json!({"max_m": cfg.max_m})
        }
        "comb" => {
            for r in 0..=cfg.comb_max {
                for p in 0..=cfg.comb_max {
                    t.record(
                        comb_identity_check(r, p),
                        || json!({"r": r, "p": p, "sum": comb_identity_sum(r, p).to_string()}),
                    );
                }
            }
            json!({"max": cfg.comb_max})
        }
        "chitransfer" => {
            let base = cfg.betti_max + 1;
            for len in 1..=cfg.betti_len {
                let mut b = vec![0u64; len];
                loop {
                    let chi0 = chi_r(&b, 0);
                    for r in 0..=cfg.r_max {
                        let ok = chi_r(&bundle_betti_transfer(&b, r), r) == chi0;
                        t.record(ok, || json!({"betti": b, "r": r}));
                    }
                    // odometer increment
                    let mut k = 0;
                    while k < len && b[k] == base - 1 {
                        b[k] = 0;
                        k += 1;
                    }
                    if k == len {
                        break;
                    }
                    b[k] += 1;
                }
            }
            json!({"max_len": cfg.betti_len, "max_entry": cfg.betti_max, "max_r": cfg.r_max})
        }
        other => return Err(LefError::UnknownCheck(other.to_string())),
    };
    Ok((params, t, details))
}

/// Runs the selected checks. Entries come out sorted by check name.
pub fn run_suite(cfg: &SuiteConfig) -> Result<VerificationReport> {
    cfg.validate()?;
    let checks = cfg.selected_checks()?;
    let needs_algebra = checks
        .iter()
        .any(|c| matches!(*c, "jacobi" | "casimir" | "d2" | "kostant" | "euler" | "duality" | "hechtschmid" | "det"));
    let sweeps: Vec<Sweep> = if needs_algebra {
        cfg.types
            .iter()
            .map(|t| {
                let d = build_root_system(t)?;
                Ok(Sweep { label: d.label().to_string(), alg: build_chevalley_algebra(&d)? })
            })
            .collect::<Result<_>>()?
    } else {
        Vec::new()
    };
    let mut entries = Vec::new();
    for name in checks {
        let start = Instant::now();
        let (params, tally, details) = run_check(name, cfg, &sweeps)?;
        let elapsed = start.elapsed().as_secs_f64() * 1000.0;
        entries.push(ReportEntry {
            check: name.to_string(),
            params,
            cases: tally.cases,
            pass: tally.counterexample.is_none(),
            counterexample: tally.counterexample,
            details,
            wall_ms: cfg.timings.then_some(elapsed),
        });
    }
    Ok(VerificationReport { seed: cfg.seed, entries })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(checks: &[&str]) -> SuiteConfig {
        SuiteConfig { checks: checks.iter().map(|s| s.to_string()).collect(), ..SuiteConfig::default() }
    }

    #[test]
    fn comb_report() {
        let r = run_suite(&cfg(&["comb"])).unwrap();
        assert_eq!(r.entries.len(), 1);
        assert_eq!(r.entries[0].cases, 169);
        assert!(r.all_pass());
    }

    #[test]
    fn empty_selection() {
        let r = run_suite(&cfg(&[])).unwrap();
        assert!(r.entries.is_empty() && r.all_pass());
    }

    #[test]
    fn rejects_unknown_and_oversized() {
        assert_eq!(run_suite(&cfg(&["nope"])).unwrap_err(), LefError::UnknownCheck("nope".into()));
        let mut c = cfg(&["kostant"]);
        c.types = vec!["E8".into()];
        assert!(matches!(run_suite(&c), Err(LefError::BoundTooLarge(_))));
    }

    #[test]
    fn deterministic_output() {
        let mut c = cfg(&["det", "spin", "epsilon", "jacobi"]);
        c.types = vec!["A1".into(), "A2".into()];
        c.seed = 7;
        let a = run_suite(&c).unwrap().to_json().to_string();
        let b = run_suite(&c).unwrap().to_json().to_string();
        assert_eq!(a, b);
        assert!(!a.contains("wall_ms"));
    }
}
