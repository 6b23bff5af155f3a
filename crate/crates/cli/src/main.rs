use std::ffi::OsString;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::parser::ValueSource;
use clap::{ArgAction, CommandFactory, FromArgMatches, Parser, Subcommand};
use serde_json::{json, Map, Value};

use lef_core::chevalley::{
    build_chevalley_algebra, highest_weight_module_capped, parabolic_split, ChevalleyAlgebra, ParabolicSplit,
    WeightModule, DEFAULT_DIMENSION_CAP,
};
use lef_core::euler::{
    bundle_betti_transfer, chi_gen, chi_r, harish_chandra_constant, orbital_integral_value, EllipticClassInput,
    HarishChandraInput, Scalar,
};
use lef_core::exact::{scalar_to_string, CharacterJson, LaurentCharacter};
use lef_core::lefschetz::{
    am_tilde_membership, hecht_schmid_check, spectral_term, InvariantExtractor, LeviRealForm, SpectralTermTable,
};
use lef_core::lefschetz::{balance_evaluator, geometric_term, Ledger, NWeight, SpectralInput, TestFunction};
use lef_core::nilcohomology::{
    build_ce_complex, cohomology_table, euler_character_check, homology_table, kostant_prediction,
};
use lef_core::rootsys::{build_root_system, irreducible_character, RootDatum};
use lef_core::verify::{run_suite, SuiteConfig};
use lef_core::{LefError, Result};

#[derive(Parser, Debug)]
#[command(name = "lef", version, about = "Exact Lie-theoretic checks behind a Lefschetz trace formula")]
struct Cli {
    /// JSON file whose keys match the long flag names; flags on the command line win.
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Root datum of a Cartan type.
    RootSystem {
        #[arg(long = "type")]
        label: String,
    },
    /// Chevalley basis and structure constants.
    Algebra {
        #[arg(long = "type")]
        label: String,
    },
    /// Irreducible highest-weight module.
    Module {
        #[arg(long = "type")]
        label: String,
        #[arg(long, allow_hyphen_values = true)]
        weight: String,
        /// Include the action matrix of every basis element.
        #[arg(long)]
        matrices: bool,
    },
    /// n-cohomology table with the Kostant cross-check.
    Cohomology {
        #[arg(long = "type")]
        label: String,
        /// 1-based simple roots of the Levi; empty for the Borel.
        #[arg(long, default_value = "")]
        levi: String,
        #[arg(long, allow_hyphen_values = true)]
        weight: String,
        /// Also compute homology and test the duality.
        #[arg(long)]
        duality: bool,
    },
    /// Spectral coefficients m_λ.
    Spectral {
        #[arg(long = "type")]
        label: String,
        #[arg(long, default_value = "")]
        levi: String,
        #[arg(long, allow_hyphen_values = true)]
        weight: String,
        /// `trivial` or a K_M highest weight.
        #[arg(long, default_value = "trivial", allow_hyphen_values = true)]
        tau: String,
        /// JSON character of p_M; absent means p_M = 0.
        #[arg(long, value_name = "FILE")]
        pm_char: Option<PathBuf>,
        /// JSON `{"projection", "km_cartan", "km_symmetrizer"}` for an explicit K_M.
        #[arg(long, value_name = "FILE")]
        km: Option<PathBuf>,
    },
    /// Geometric coefficients c_γ of a ledger.
    Geometric {
        #[arg(long, value_name = "FILE")]
        ledger: PathBuf,
        #[arg(long = "type")]
        label: String,
        #[arg(long, default_value = "")]
        levi: String,
    },
    /// Both sides of the trace formula on a test function.
    Balance {
        #[arg(long, value_name = "FILE")]
        spectral: PathBuf,
        #[arg(long, value_name = "FILE")]
        ledger: PathBuf,
        #[arg(long, value_name = "FILE")]
        testfn: PathBuf,
        #[arg(long = "type", default_value = "A1")]
        label: String,
        #[arg(long, default_value = "")]
        levi: String,
        #[arg(long, default_value = "trivial", allow_hyphen_values = true)]
        tau: String,
        /// Exit 1 when |residual| exceeds this.
        #[arg(long, allow_hyphen_values = true)]
        tolerance: Option<f64>,
    },
    /// r-th Euler characteristic of a Betti vector.
    ChiR {
        #[arg(long, allow_hyphen_values = true)]
        betti: String,
        #[arg(long, default_value_t = 0)]
        r: u64,
        /// Also report χ_r of the bundle transfer of the Betti vector.
        #[arg(long)]
        transfer: bool,
    },
    /// Generic Euler number from Harish-Chandra data.
    ChiGen {
        /// JSON file, or `torus`.
        #[arg(long)]
        input: String,
        #[arg(long, allow_hyphen_values = true)]
        covolume: String,
        #[arg(long, allow_hyphen_values = true)]
        a_covolume: Option<String>,
    },
    /// Elliptic orbital integral of f_τ.
    Orbital {
        #[arg(long, value_name = "FILE")]
        input: PathBuf,
    },
    /// Membership in (AM)^∼ from eigenvalue moduli.
    AmTilde {
        #[arg(long, allow_hyphen_values = true)]
        a_eigs: String,
        #[arg(long, allow_hyphen_values = true)]
        m_eigs: String,
    },
    /// Verification suite.
    Verify {
        /// Checks to run, or `all`.
        #[arg(value_delimiter = ',')]
        checks: Vec<String>,
        #[arg(long, value_delimiter = ',', default_value = "A1,A2,B2")]
        types: Vec<String>,
        #[arg(long, default_value_t = 2)]
        max_coord: i64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 50)]
        det_points: usize,
        #[arg(long, default_value_t = 6)]
        max_m: usize,
        /// Bound for the combinatorial identity.
        #[arg(long = "max", default_value_t = 12)]
        comb_max: u64,
        #[arg(long, default_value_t = 8)]
        betti_len: usize,
        #[arg(long, default_value_t = 5)]
        betti_max: u64,
        #[arg(long, default_value_t = 5)]
        r_max: u64,
        /// Report wall time per check (output is then not reproducible).
        #[arg(long)]
        timings: bool,
    },
}

enum Failure {
    Input(String),
    Verification(Value),
}

impl From<LefError> for Failure {
    fn from(e: LefError) -> Self {
        Failure::Input(e.to_string())
    }
}

type Outcome = std::result::Result<Value, Failure>;

fn malformed(msg: impl Into<String>) -> Failure {
    Failure::Input(msg.into())
}

fn dimension_cap() -> std::result::Result<u64, Failure> {
    match std::env::var("LEF_MAX_DIM") {
        Ok(s) => s.trim().parse().map_err(|_| malformed(format!("LEF_MAX_DIM is not an integer: {s}"))),
        Err(_) => Ok(DEFAULT_DIMENSION_CAP),
    }
}

fn parse_list<T: std::str::FromStr>(s: &str, what: &str) -> std::result::Result<Vec<T>, Failure> {
    s.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| t.parse().map_err(|_| malformed(format!("bad {what} entry `{t}`"))))
        .collect()
}

fn parse_levi(s: &str, rank: usize) -> std::result::Result<Vec<usize>, Failure> {
    let mut out = Vec::new();
    for i in parse_list::<usize>(s, "levi")? {
        if i == 0 || i > rank {
            return Err(malformed(format!("levi index {i} outside 1..={rank}")));
        }
        out.push(i - 1);
    }
    out.sort_unstable();
    out.dedup();
    Ok(out)
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> std::result::Result<T, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| malformed(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| malformed(format!("{}: {e}", path.display())))
}

fn scalar(s: &str) -> std::result::Result<Scalar, Failure> {
    Ok(Scalar::parse(s)?)
}

struct Setting {
    alg: ChevalleyAlgebra,
    split: ParabolicSplit,
    levi: Vec<usize>,
}

impl Setting {
    fn new(label: &str, levi: &str) -> std::result::Result<Self, Failure> {
        let datum = build_root_system(label)?;
        let alg = build_chevalley_algebra(&datum)?;
        let levi = parse_levi(levi, datum.rank())?;
        let split = parabolic_split(&alg, &levi)?;
        Ok(Setting { alg, split, levi })
    }

    fn module(&self, weight: &[i64]) -> std::result::Result<WeightModule, Failure> {
        Ok(highest_weight_module_capped(&self.alg, weight, dimension_cap()?)?)
    }

    fn levi_json(&self) -> Value {
        json!(self.levi.iter().map(|i| i + 1).collect::<Vec<_>>())
    }

    fn n_weights(&self) -> Vec<NWeight> {
        self.split.n_roots().iter().map(|r| NWeight::plain(self.split.a_weight(r))).collect()
    }
}

/// The K_M datum and `p_M` of the real form, from optional files.
fn levi_form(
    split: &ParabolicSplit,
    pm: Option<&Path>,
    km: Option<&Path>,
) -> std::result::Result<(LeviRealForm, RootDatum), Failure> {
    let mut form = LeviRealForm::compact(split);
    let mut km_datum = split.levi_datum();
    if let Some(path) = km {
        let v: Value = read_json(path)?;
        let parse = |k: &str| v.get(k).cloned().ok_or_else(|| malformed(format!("{}: missing `{k}`", path.display())));
        let projection: Vec<Vec<i64>> =
            serde_json::from_value(parse("projection")?).map_err(|e| malformed(e.to_string()))?;
        let km_cartan: Vec<Vec<i64>> =
            serde_json::from_value(parse("km_cartan")?).map_err(|e| malformed(e.to_string()))?;
        let km_symmetrizer: Vec<i64> =
            serde_json::from_value(parse("km_symmetrizer")?).map_err(|e| malformed(e.to_string()))?;
        km_datum = RootDatum::from_cartan("K_M", km_cartan.clone(), km_symmetrizer.clone())?;
        form.extractor = InvariantExtractor::Explicit { projection, km_cartan, km_symmetrizer };
        form.p_m_char = LaurentCharacter::zero(km_datum.rank());
    }
    if let Some(path) = pm {
        let j: CharacterJson = read_json(path)?;
        form.p_m_char = LaurentCharacter::from_json(&j)?;
    }
    Ok((form, km_datum))
}

fn tau_character(tau: &str, km: &RootDatum) -> std::result::Result<LaurentCharacter, Failure> {
    if tau == "trivial" {
        return Ok(LaurentCharacter::one(km.rank()));
    }
    let w = parse_list::<i64>(tau, "tau")?;
    Ok(irreducible_character(km, &w)?)
}

fn complex_json(re: f64, im: f64) -> Value {
    json!([re, im])
}

fn run(cmd: Command) -> Outcome {
    match cmd {
        Command::RootSystem { label } => Ok(build_root_system(&label)?.to_json()),
        Command::Algebra { label } => {
            let alg = build_chevalley_algebra(&build_root_system(&label)?)?;
            let mut v = alg.to_json();
            v["jacobi_holds"] = json!(alg.jacobi_holds());
            Ok(v)
        }
        Command::Module { label, weight, matrices } => {
            let s = Setting::new(&label, "")?;
            let w = parse_list::<i64>(&weight, "weight")?;
            let m = s.module(&w)?;
            let mut v = json!({
                "type": s.alg.datum().label(),
                "highest_weight": w,
                "dimension": m.dimension(),
                "character": m.character().to_json(),
            });
            if matrices {
                let mut mats = Map::new();
                for k in 0..s.alg.dimension() {
                    let rows: Vec<Vec<String>> =
                        m.action_matrix(k).to_rows().iter().map(|r| r.iter().map(scalar_to_string).collect()).collect();
                    mats.insert(s.alg.label_string(k), json!(rows));
                }
                v["matrices"] = Value::Object(mats);
            }
            Ok(v)
        }
        Command::Cohomology { label, levi, weight, duality } => {
            let s = Setting::new(&label, &levi)?;
            let w = parse_list::<i64>(&weight, "weight")?;
            let m = s.module(&w)?;
            let cx = build_ce_complex(&s.alg, &s.split, &m)?;
            let table = cohomology_table(&cx);
            let mut v = table.to_json();
            v["type"] = json!(s.alg.datum().label());
            v["levi"] = s.levi_json();
            v["weight"] = json!(w);
            v["kostant_match"] = json!(table == kostant_prediction(&s.split, &w)?);
            v["euler_identity"] = json!(euler_character_check(&cx, &m));
            if duality {
                v["duality"] = json!(homology_table(&s.alg, &s.split, &m)?.duality_holds);
                v["hecht_schmid"] = json!(hecht_schmid_check(&s.alg, &m, &s.split)?.holds);
            }
            Ok(v)
        }
        Command::Spectral { label, levi, weight, tau, pm_char, km } => {
            let s = Setting::new(&label, &levi)?;
            let w = parse_list::<i64>(&weight, "weight")?;
            let m = s.module(&w)?;
            let (form, km_datum) = levi_form(&s.split, pm_char.as_deref(), km.as_deref())?;
            let tau_char = tau_character(&tau, &km_datum)?;
            let table = spectral_term(&s.alg, &m, &s.split, &form, &tau_char)?;
            Ok(json!({
                "type": s.alg.datum().label(),
                "levi": s.levi_json(),
                "weight": w,
                "tau": tau,
                "extractor": form.extractor.name(),
                "dim_n": s.split.dim_n(),
                "table": table.to_json(),
            }))
        }
        Command::Geometric { ledger, label, levi } => {
            let s = Setting::new(&label, &levi)?;
            let ledger: Ledger = read_json(&ledger)?;
            let nw = s.n_weights();
            let classes = ledger
                .classes
                .iter()
                .map(|rec| geometric_term(rec, &nw).map(|z| complex_json(z.re, z.im)))
                .collect::<Result<Vec<_>>>()?;
            Ok(json!({
                "type": s.alg.datum().label(),
                "levi": s.levi_json(),
                "n_weights": nw.iter().map(|w| w.a_weight.iter().map(scalar_to_string).collect::<Vec<_>>()).collect::<Vec<_>>(),
                "c_gamma": classes,
            }))
        }
        Command::Balance { spectral, ledger, testfn, label, levi, tau, tolerance } => {
            let s = Setting::new(&label, &levi)?;
            let input: SpectralInput = read_json(&spectral)?;
            let ledger: Ledger = read_json(&ledger)?;
            let phi: TestFunction = read_json(&testfn)?;
            let (form, km_datum) = levi_form(&s.split, None, None)?;
            let tau_char = tau_character(&tau, &km_datum)?;
            let mut tables: Vec<(SpectralTermTable, i64)> = Vec::new();
            for entry in &input.entries {
                let table = match (entry.explicit_table()?, &entry.weight) {
                    (Some(t), _) => t,
                    (None, Some(w)) => spectral_term(&s.alg, &s.module(w)?, &s.split, &form, &tau_char)?,
                    (None, None) => return Err(malformed("spectral entry needs `table` or `weight`")),
                };
                tables.push((table, entry.multiplicity));
            }
            let r = balance_evaluator(&tables, &ledger.classes, &phi, &s.n_weights())?;
            let norm = r.residual.norm();
            let v = json!({
                "global": r.global,
                "local": complex_json(r.local.re, r.local.im),
                "residual": complex_json(r.residual.re, r.residual.im),
                "residual_norm": norm,
            });
            match tolerance {
                Some(tol) if !(norm <= tol) => Err(Failure::Verification(v)),
                _ => Ok(v),
            }
        }
        Command::ChiR { betti, r, transfer } => {
            let b = parse_list::<u64>(&betti, "betti")?;
            let mut v = json!({"betti": b, "r": r, "chi_r": chi_r(&b, r).to_string()});
            if transfer {
                let t = bundle_betti_transfer(&b, r);
                v["transfer"] =
                    json!({"betti": t, "chi_r": chi_r(&t, r).to_string(), "chi_0_base": chi_r(&b, 0).to_string()});
            }
            Ok(v)
        }
        Command::ChiGen { input, covolume, a_covolume } => {
            let data = if input == "torus" { HarishChandraInput::torus() } else { read_json(Path::new(&input))? };
            let a = a_covolume.as_deref().map(scalar).transpose()?;
            let g = chi_gen(&data, &scalar(&covolume)?, a.as_ref())?;
            Ok(json!({
                "harish_chandra_constant": harish_chandra_constant(&data)?.to_json(),
                "chi_gen": g.chi_gen.to_json(),
                "chi_r": g.chi_r.map(|x| x.to_json()),
            }))
        }
        Command::Orbital { input } => {
            let data: EllipticClassInput = read_json(&input)?;
            Ok(json!({"orbital_integral": orbital_integral_value(&data)?.to_json()}))
        }
        Command::AmTilde { a_eigs, m_eigs } => {
            let a = parse_list::<f64>(&a_eigs, "a-eigs")?;
            let m = parse_list::<f64>(&m_eigs, "m-eigs")?;
            let (member, lambda) = am_tilde_membership(&a, &m)?;
            Ok(json!({"member": member, "lambda": lambda}))
        }
        Command::Verify {
            checks,
            types,
            max_coord,
            seed,
            det_points,
            max_m,
            comb_max,
            betti_len,
            betti_max,
            r_max,
            timings,
        } => {
            let cfg = SuiteConfig {
                checks,
                types,
                max_coord,
                seed,
                det_points,
                max_m,
                comb_max,
                betti_len,
                betti_max,
                r_max,
                dimension_cap: dimension_cap()?,
                timings,
            };
            let report = run_suite(&cfg)?;
            if report.all_pass() {
                Ok(report.to_json())
            } else {
                Err(Failure::Verification(report.to_json()))
            }
        }
    }
}

fn config_scalar(v: &Value) -> Option<String> {
    match v {
        Value::String(s) => Some(s.clone()),
        Value::Number(n) => Some(n.to_string()),
        Value::Array(items) => Some(items.iter().filter_map(config_scalar).collect::<Vec<_>>().join(",")),
        _ => None,
    }
}

/// Appends config-file values for every argument not given on the command line.
fn with_config(raw: Vec<OsString>) -> std::result::Result<Vec<OsString>, clap::Error> {
    let cmd = Cli::command();
    let matches = cmd.clone().try_get_matches_from(&raw)?;
    let Some((name, sub)) = matches.subcommand() else { return Ok(raw) };
    let Some(path) = sub.get_one::<PathBuf>("config").or_else(|| matches.get_one::<PathBuf>("config")) else {
        return Ok(raw);
    };
    let bad = |msg: String| cmd.clone().error(clap::error::ErrorKind::InvalidValue, msg);
    let text = std::fs::read_to_string(path).map_err(|e| bad(format!("{}: {e}", path.display())))?;
    let config: Map<String, Value> =
        serde_json::from_str(&text).map_err(|e| bad(format!("{}: {e}", path.display())))?;
    let subcmd = cmd.find_subcommand(name).expect("parsed subcommand exists");
    let mut out = raw;
    for arg in subcmd.get_arguments() {
        let id = arg.get_id().as_str();
        if id == "config" || sub.value_source(id) == Some(ValueSource::CommandLine) {
            continue;
        }
        let keys =
            [Some(id.to_string()), arg.get_long().map(str::to_string), arg.get_long().map(|l| l.replace('-', "_"))];
        let Some(value) = keys.iter().flatten().find_map(|k| config.get(k)) else { continue };
        if arg.is_positional() {
            out.extend(
                config_scalar(value).into_iter().flat_map(|s| s.split(',').map(OsString::from).collect::<Vec<_>>()),
            );
            continue;
        }
        let long = format!("--{}", arg.get_long().expect("options have long names"));
        if matches!(arg.get_action(), ArgAction::SetTrue) {
            if value.as_bool() == Some(true) {
                out.push(long.into());
            }
        } else if let Some(s) = config_scalar(value) {
            out.push(format!("{long}={s}").into());
        } else {
            return Err(bad(format!("config key for --{} has an unsupported value", arg.get_long().unwrap_or(id))));
        }
    }
    Ok(out)
}

fn print(v: &Value) {
    use std::io::Write;
    let text = serde_json::to_string_pretty(v).expect("JSON values serialize");
    // a closed pipe downstream is not an error of ours
    let _ = writeln!(std::io::stdout().lock(), "{text}");
}

fn main() -> ExitCode {
    let raw: Vec<OsString> = std::env::args_os().collect();
    let cli = match with_config(raw).and_then(|args| {
        let m = Cli::command().try_get_matches_from(args)?;
        Cli::from_arg_matches(&m)
    }) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli.command) {
        Ok(v) => {
            print(&v);
            ExitCode::SUCCESS
        }
        Err(Failure::Verification(v)) => {
            print(&v);
            eprintln!("lef: verification failed");
            ExitCode::from(1)
        }
        Err(Failure::Input(msg)) => {
            eprintln!("lef: {msg}");
            ExitCode::from(2)
        }
    }
}
