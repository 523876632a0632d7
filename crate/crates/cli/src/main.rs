use std::collections::BTreeSet;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::Context;
use clap::{Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use dfslab::basis::parse_class_list;
use dfslab::decoupling::{parity_kick_sweep, simulate_open_system_sweep, BathModel, SimulationReport, SweepPoint};
use dfslab::dfs3::{build_basis64, logical_ops3, partition3};
use dfslab::dfs4::{build_basis256, canonical_ops4, leo4, leo4_modified_z, partition4, states_dump};
use dfslab::error_decomp::{
    decompose_error, decompose_error4, dm_error, product_error, scalar_error, tensor_error, ConventionInfo, CouplingTensor,
    Vec3,
};
use dfslab::io::{round_sig, to_json_pretty, write_records_csv};
use dfslab::leakage::{make_canonical_leo, make_generalized_leo, BlockPartition, Leo};
use dfslab::operator::{collective, total_spin_squared, Axis, Operator};
use dfslab::verify::{error_identity_checks, run_suite, Suite, BETA, GAMMA1, GAMMA2};
use dfslab::{ErrorClass, FactorNorm, TildeProduct, DEFAULT_TOL};

const EXIT_VERIFY: u8 = 1;
const EXIT_USAGE: u8 = 2;

#[derive(Parser)]
#[command(name = "dfslab", version, about = "Decoherence-free subsystem laboratory")]
struct Cli {
    /// Default numerical tolerance.
    #[arg(long, global = true, env = "DFSLAB_TOL", default_value_t = DEFAULT_TOL)]
    tol: f64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(try_from = "u8")]
enum Dfs {
    #[value(name = "3")]
    Three,
    #[value(name = "4")]
    Four,
}

impl TryFrom<u8> for Dfs {
    type Error = String;
    fn try_from(n: u8) -> Result<Self, String> {
        match n {
            3 => Ok(Dfs::Three),
            4 => Ok(Dfs::Four),
            _ => Err(format!("dfs must be 3 or 4, got {n}")),
        }
    }
}

impl Dfs {
    fn n(self) -> usize {
        match self {
            Dfs::Three => 3,
            Dfs::Four => 4,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
enum LeoMethod {
    Canonical,
    S2,
    ModifiedZ,
}

#[derive(Clone, Copy, ValueEnum)]
enum ErrorKind {
    Dm,
    Product,
    Scalar,
    TensorFile,
}

#[derive(Clone, Copy, ValueEnum)]
enum StatesAction {
    Dump,
}

#[derive(Subcommand)]
enum Command {
    /// Dump the classified operator basis.
    Basis {
        #[arg(long, value_enum)]
        dfs: Dfs,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Dump the four-qubit DFS states.
    States {
        #[arg(value_enum, default_value = "dump")]
        action: StatesAction,
        #[arg(long, value_enum, default_value = "4")]
        dfs: Dfs,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Build a leakage elimination operator and its grading certificate.
    Leo {
        #[arg(long, value_enum)]
        dfs: Dfs,
        #[arg(long, value_enum, default_value = "canonical")]
        method: LeoMethod,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Run verification suites.
    Verify {
        #[arg(long, default_value = "all", value_parser = parse_suite)]
        suite: Suite,
        /// Print the checks as JSON instead of text lines.
        #[arg(long)]
        json: bool,
    },
    /// Run a simulation described by a JSON config file.
    Simulate {
        #[arg(long)]
        config: PathBuf,
        /// Write the sweep table as CSV.
        #[arg(long)]
        csv: Option<PathBuf>,
        /// Overrides the config's output path.
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Decompose an exchange error on the classified basis.
    Decompose {
        #[arg(long, value_enum, default_value = "3")]
        dfs: Dfs,
        /// Qubit pair `i,j` (default 1,2, or the pair stored in `--tensor`).
        #[arg(long, value_parser = parse_pair)]
        pair: Option<(usize, usize)>,
        #[arg(long, value_enum, default_value = "product")]
        error: ErrorKind,
        #[arg(long, value_parser = parse_vec3, allow_hyphen_values = true)]
        beta: Option<Vec3>,
        #[arg(long, value_parser = parse_vec3, allow_hyphen_values = true)]
        gamma1: Option<Vec3>,
        #[arg(long, value_parser = parse_vec3, allow_hyphen_values = true)]
        gamma2: Option<Vec3>,
        /// Isotropic coupling for `--error scalar`.
        #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
        g: f64,
        /// Coupling tensor JSON for `--error tensor-file`.
        #[arg(long)]
        tensor: Option<PathBuf>,
        /// Comma-separated classes to drop, e.g. `leakage,cperp`.
        #[arg(long, value_parser = parse_drop)]
        drop: Option<BTreeSet<ErrorClass>>,
        /// Check the reference coefficient identities instead.
        #[arg(long)]
        paper_check: bool,
        #[arg(long)]
        output: Option<PathBuf>,
    },
}

fn parse_suite(s: &str) -> Result<Suite, String> {
    s.parse().map_err(|_| format!("unknown suite `{s}` (all, dfs3, dfs4, leo, decoupling, errors)"))
}

fn parse_pair(s: &str) -> Result<(usize, usize), String> {
    let (a, b) = s.split_once(',').ok_or_else(|| format!("expected i,j, got `{s}`"))?;
    let p = |t: &str| t.trim().parse::<usize>().map_err(|e| format!("`{t}`: {e}"));
    Ok((p(a)?, p(b)?))
}

fn parse_vec3(s: &str) -> Result<Vec3, String> {
    let v: Vec<f64> = s
        .split(',')
        .map(|t| t.trim().parse::<f64>().map_err(|e| format!("`{t}`: {e}")))
        .collect::<Result<_, _>>()?;
    let arr: Vec3 = v.try_into().map_err(|v: Vec<f64>| format!("expected 3 components, got {}", v.len()))?;
    if arr.iter().any(|x| !x.is_finite()) {
        return Err("components must be finite".into());
    }
    Ok(arr)
}

fn parse_drop(s: &str) -> Result<BTreeSet<ErrorClass>, String> {
    parse_class_list(s).map_err(|e| e.to_string())
}

/// Errors that map to exit code 2.
#[derive(Debug)]
struct UsageError(String);

impl std::fmt::Display for UsageError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

fn usage(msg: impl Into<String>) -> anyhow::Error {
    UsageError(msg.into()).into()
}

fn emit(text: &str, output: Option<&Path>) -> anyhow::Result<()> {
    match output {
        Some(path) => fs::write(path, format!("{text}\n")).with_context(|| format!("writing {}", path.display())),
        None => {
            let mut out = std::io::stdout().lock();
            writeln!(out, "{text}")?;
            Ok(())
        }
    }
}

fn emit_json<T: Serialize>(value: &T, output: Option<&Path>) -> anyhow::Result<()> {
    emit(&to_json_pretty(value)?, output)
}

fn partition_for(dfs: Dfs, tol: f64) -> BlockPartition {
    match dfs {
        Dfs::Three => partition3(),
        Dfs::Four => partition4(),
    }
    .with_tol(tol)
}

fn basis_for(dfs: Dfs, tol: f64) -> dfslab::DfsBasis {
    let mut b = match dfs {
        Dfs::Three => build_basis64(),
        Dfs::Four => build_basis256(),
    };
    b.partition = b.partition.with_tol(tol);
    b
}

#[derive(Serialize)]
struct BasisCsvRow {
    index: usize,
    name: String,
    class: ErrorClass,
    tilde: String,
    hs_norm: f64,
}

fn cmd_basis(dfs: Dfs, format: Format, output: Option<&Path>, tol: f64) -> anyhow::Result<()> {
    let dump = basis_for(dfs, tol).dump();
    match format {
        Format::Json => emit_json(&dump, output),
        Format::Csv => {
            let rows: Vec<BasisCsvRow> = dump
                .elements
                .into_iter()
                .map(|r| BasisCsvRow {
                    index: r.index,
                    name: r.name,
                    class: r.class,
                    tilde: r.tilde.unwrap_or_default(),
                    hs_norm: round_sig(r.hs_norm),
                })
                .collect();
            let mut buf = Vec::new();
            write_records_csv(&rows, &mut buf)?;
            emit(String::from_utf8(buf)?.trim_end(), output)
        }
    }
}

fn cmd_states(dfs: Dfs, output: Option<&Path>) -> anyhow::Result<()> {
    if dfs != Dfs::Four {
        return Err(usage("states are only tabulated for the four-qubit code (--dfs 4)"));
    }
    #[derive(Serialize)]
    struct States {
        n: usize,
        order: &'static str,
        states: Vec<dfslab::dfs4::StateRow>,
    }
    emit_json(&States { n: 4, order: "computational basis, qubit 1 most significant", states: states_dump() }, output)
}

fn build_leo(dfs: Dfs, method: LeoMethod, tol: f64) -> anyhow::Result<Leo> {
    let p = partition_for(dfs, tol);
    let leo = match (dfs, method) {
        (Dfs::Three, LeoMethod::Canonical) => {
            let (_, _, z) = logical_ops3();
            make_canonical_leo(&z, &p)?
        }
        (Dfs::Three, LeoMethod::S2) => {
            let h = (total_spin_squared(3) - Operator::identity(8) * 0.75) * (1.0 / 3.0);
            make_generalized_leo(&h, &p)?
        }
        (Dfs::Three, LeoMethod::ModifiedZ) => {
            let (_, _, z) = logical_ops3();
            make_generalized_leo(&z, &p)?
        }
        (Dfs::Four, LeoMethod::Canonical) => {
            let (_, _, z) = canonical_ops4();
            make_canonical_leo(&z, &p)?
        }
        (Dfs::Four, LeoMethod::S2) => {
            let l = leo4();
            Leo::from_unitary(l.unitary, &p)?
        }
        (Dfs::Four, LeoMethod::ModifiedZ) => {
            let l = leo4_modified_z();
            Leo::from_unitary(l.unitary, &p)?
        }
    };
    Ok(leo)
}

fn cmd_leo(dfs: Dfs, method: LeoMethod, output: Option<&Path>, tol: f64) -> anyhow::Result<()> {
    #[derive(Serialize)]
    struct Out {
        dfs: usize,
        method: LeoMethod,
        leo: dfslab::leakage::LeoReport,
    }
    let leo = build_leo(dfs, method, tol)?;
    emit_json(&Out { dfs: dfs.n(), method, leo: leo.report() }, output)
}

fn cmd_verify(suite: Suite, json: bool, tol: f64) -> anyhow::Result<bool> {
    let checks = run_suite(suite, tol);
    let ok = checks.iter().all(|c| c.passed);
    if json {
        #[derive(Serialize)]
        struct Out<'a> {
            passed: bool,
            checks: &'a [dfslab::verify::Check],
        }
        emit_json(&Out { passed: ok, checks: &checks }, None)?;
    } else {
        let mut out = std::io::stdout().lock();
        for c in &checks {
            let status = if c.passed { "PASS" } else { "FAIL" };
            write!(out, "{status} {} value={:.6e} threshold={:.1e}", c.name, c.value + 0.0, c.threshold)?;
            if !c.detail.is_empty() {
                write!(out, " ({})", c.detail)?;
            }
            writeln!(out)?;
        }
        let failed = checks.iter().filter(|c| !c.passed).count();
        writeln!(out, "{} checks, {} failed", checks.len(), failed)?;
    }
    Ok(ok)
}

// --- simulate ---------------------------------------------------------------

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct FrameTerm {
    tilde: String,
    #[serde(default = "one")]
    coefficient: f64,
}

fn one() -> f64 {
    1.0
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "snake_case")]
enum SystemOperator {
    /// Sum of tilde products in the DFS frame.
    Frame(Vec<FrameTerm>),
    /// Collective spin component `x`, `y` or `z`.
    Collective(String),
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct BathConfig {
    dim: usize,
    couplings: Vec<SystemOperator>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Deserialize, Serialize)]
#[serde(rename_all = "snake_case")]
enum SimKind {
    ParityKick,
    OpenSystem,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RunConfig {
    kind: SimKind,
    dfs: Dfs,
    total_time: f64,
    cycles: Vec<usize>,
    #[serde(default)]
    leo: Option<LeoMethod>,
    /// System Hamiltonian as tilde products in the DFS frame.
    #[serde(default)]
    hamiltonian: Vec<FrameTerm>,
    #[serde(default)]
    bath: Option<BathConfig>,
    #[serde(default)]
    seed: u64,
    #[serde(default)]
    tol: Option<f64>,
    #[serde(default)]
    output: Option<PathBuf>,
}

fn load_config(path: &Path) -> anyhow::Result<RunConfig> {
    let text = fs::read_to_string(path).map_err(|e| usage(format!("reading {}: {e}", path.display())))?;
    let de = &mut serde_json::Deserializer::from_str(&text);
    let cfg: RunConfig = serde_path_to_error::deserialize(de).map_err(|e| {
        let pointer = json_pointer(e.path());
        usage(format!("config {}: at {pointer}: {}", path.display(), e.inner()))
    })?;
    validate_config(&cfg)?;
    Ok(cfg)
}

/// Renders a serde path as a JSON pointer.
fn json_pointer(path: &serde_path_to_error::Path) -> String {
    use serde_path_to_error::Segment;
    let mut out = String::new();
    for seg in path.iter() {
        out.push('/');
        match seg {
            Segment::Seq { index } => out.push_str(&index.to_string()),
            Segment::Map { key } => out.push_str(&key.replace('~', "~0").replace('/', "~1")),
            Segment::Enum { variant } => out.push_str(variant),
            Segment::Unknown => out.push('?'),
        }
    }
    if out.is_empty() {
        out.push('/');
    }
    out
}

fn validate_config(cfg: &RunConfig) -> anyhow::Result<()> {
    if !cfg.total_time.is_finite() || cfg.total_time < 0.0 {
        return Err(usage("at /total_time: must be finite and non-negative"));
    }
    if cfg.cycles.is_empty() {
        return Err(usage("at /cycles: at least one cycle count is required"));
    }
    if let Some(i) = cfg.cycles.iter().position(|&n| n == 0) {
        return Err(usage(format!("at /cycles/{i}: cycle counts must be >= 1")));
    }
    if let Some(t) = cfg.tol {
        if !(t.is_finite() && t > 0.0) {
            return Err(usage("at /tol: must be positive"));
        }
    }
    let width = cfg.dfs.n();
    let check_terms = |terms: &[FrameTerm], at: &str| -> anyhow::Result<()> {
        for (i, t) in terms.iter().enumerate() {
            let p: TildeProduct = t.tilde.parse().map_err(|_| usage(format!("at {at}/{i}/tilde: invalid tilde product `{}`", t.tilde)))?;
            if p.factors().len() != width {
                return Err(usage(format!("at {at}/{i}/tilde: expected {width} factors, found {}", p.factors().len())));
            }
            if !t.coefficient.is_finite() {
                return Err(usage(format!("at {at}/{i}/coefficient: must be finite")));
            }
        }
        Ok(())
    };
    check_terms(&cfg.hamiltonian, "/hamiltonian")?;
    match (cfg.kind, &cfg.bath) {
        (SimKind::OpenSystem, None) => return Err(usage("at /bath: required for open_system runs")),
        (SimKind::ParityKick, Some(_)) => return Err(usage("at /bath: not used by parity_kick runs")),
        (SimKind::ParityKick, None) if cfg.hamiltonian.is_empty() => {
            return Err(usage("at /hamiltonian: parity_kick runs need at least one term"))
        }
        _ => {}
    }
    if let Some(b) = &cfg.bath {
        if b.dim == 0 {
            return Err(usage("at /bath/dim: must be >= 1"));
        }
        for (i, c) in b.couplings.iter().enumerate() {
            match c {
                SystemOperator::Frame(terms) => check_terms(terms, &format!("/bath/couplings/{i}/frame"))?,
                SystemOperator::Collective(a) => {
                    if parse_axis(a).is_none() {
                        return Err(usage(format!("at /bath/couplings/{i}/collective: expected x, y or z")));
                    }
                }
            }
        }
    }
    Ok(())
}

fn parse_axis(s: &str) -> Option<Axis> {
    match s {
        "x" => Some(Axis::X),
        "y" => Some(Axis::Y),
        "z" => Some(Axis::Z),
        _ => None,
    }
}

fn frame_operator(terms: &[FrameTerm], p: &BlockPartition) -> anyhow::Result<Operator> {
    let mut acc = Operator::zeros(p.total_dim);
    for t in terms {
        let prod: TildeProduct = t.tilde.parse()?;
        acc = acc + prod.to_operator(FactorNorm::Literal) * t.coefficient;
    }
    Ok(p.from_frame(&acc))
}

#[derive(Serialize)]
struct SimulateOutput {
    dfs: usize,
    seed: u64,
    leo_method: LeoMethod,
    report: SimulationReport,
}

fn cmd_simulate(config: &Path, csv: Option<&Path>, output: Option<&Path>, tol: f64) -> anyhow::Result<()> {
    let cfg = load_config(config)?;
    let tol = cfg.tol.unwrap_or(tol);
    let method = cfg.leo.unwrap_or(match cfg.dfs {
        Dfs::Three => LeoMethod::Canonical,
        Dfs::Four => LeoMethod::S2,
    });
    let p = partition_for(cfg.dfs, tol);
    let leo = build_leo(cfg.dfs, method, tol)?;
    let h_s = frame_operator(&cfg.hamiltonian, &p)?;
    let report = match cfg.kind {
        SimKind::ParityKick => parity_kick_sweep(&h_s, &leo, cfg.total_time, &cfg.cycles)?,
        SimKind::OpenSystem => {
            let b = cfg.bath.as_ref().expect("validated");
            let mut ops = Vec::with_capacity(b.couplings.len());
            for c in &b.couplings {
                ops.push(match c {
                    SystemOperator::Frame(terms) => frame_operator(terms, &p)?,
                    SystemOperator::Collective(a) => collective(cfg.dfs.n(), parse_axis(a).expect("validated")),
                });
            }
            let bath = BathModel::random(b.dim, cfg.seed, ops)?;
            simulate_open_system_sweep(&bath, &h_s, &leo, cfg.total_time, &cfg.cycles, &p)?
        }
    };
    if let Some(path) = csv {
        let mut rows: Vec<SweepPoint> = report.unpulsed.iter().chain(&report.points).cloned().collect();
        for r in &mut rows {
            r.leakage_norm = round_sig(r.leakage_norm);
            r.fidelity = round_sig(r.fidelity);
            r.limit_error = round_sig(r.limit_error);
        }
        let file = fs::File::create(path).with_context(|| format!("writing {}", path.display()))?;
        write_records_csv(&rows, file)?;
    }
    let out_path = output.map(Path::to_path_buf).or(cfg.output.clone());
    emit_json(&SimulateOutput { dfs: cfg.dfs.n(), seed: cfg.seed, leo_method: method, report }, out_path.as_deref())
}

// --- decompose --------------------------------------------------------------

struct DecomposeArgs {
    dfs: Dfs,
    pair: Option<(usize, usize)>,
    error: ErrorKind,
    beta: Option<Vec3>,
    gamma1: Option<Vec3>,
    gamma2: Option<Vec3>,
    g: f64,
    tensor: Option<PathBuf>,
    drop: Option<BTreeSet<ErrorClass>>,
}

fn cmd_decompose(a: DecomposeArgs, output: Option<&Path>, tol: f64) -> anyhow::Result<()> {
    let n = a.dfs.n();
    let tensor = match (a.error, &a.tensor) {
        (ErrorKind::TensorFile, Some(path)) => Some(load_tensor(path)?),
        (ErrorKind::TensorFile, None) => return Err(usage("--error tensor-file needs --tensor")),
        _ => None,
    };
    let pair = a.pair.or(tensor.as_ref().map(|t| t.pair)).unwrap_or((1, 2));
    let (i, j) = pair;
    if !(1 <= i && i < j && j <= n) {
        return Err(usage(format!("pair {i},{j}: need 1 <= i < j <= {n}")));
    }
    let op = match a.error {
        ErrorKind::Dm => dm_error(a.beta.ok_or_else(|| usage("--error dm needs --beta"))?, pair, n)?,
        ErrorKind::Product => product_error(
            a.gamma1.ok_or_else(|| usage("--error product needs --gamma1"))?,
            a.gamma2.ok_or_else(|| usage("--error product needs --gamma2"))?,
            pair,
            n,
        )?,
        ErrorKind::Scalar => scalar_error(a.g, pair, n)?,
        ErrorKind::TensorFile => {
            let mut t = tensor.expect("loaded above");
            t.pair = pair;
            tensor_error(&t, n)?
        }
    };
    let basis = basis_for(a.dfs, tol);
    let drop = a.drop.unwrap_or_default();
    let report = match a.dfs {
        Dfs::Three => decompose_error(&op, &basis, &drop)?,
        Dfs::Four => decompose_error4(&op, &basis, &drop)?,
    };
    emit_json(&report, output)
}

fn load_tensor(path: &Path) -> anyhow::Result<CouplingTensor> {
    let text = fs::read_to_string(path).map_err(|e| usage(format!("reading {}: {e}", path.display())))?;
    let de = &mut serde_json::Deserializer::from_str(&text);
    let t: CouplingTensor = serde_path_to_error::deserialize(de)
        .map_err(|e| usage(format!("tensor {}: at {}: {}", path.display(), json_pointer(e.path()), e.inner())))?;
    if t.g.iter().flatten().any(|v| !v.is_finite()) {
        return Err(usage(format!("tensor {}: at /g: entries must be finite", path.display())));
    }
    Ok(t)
}

#[derive(Serialize)]
struct PaperCheck {
    passed: bool,
    tolerance: f64,
    beta: Vec3,
    gamma1: Vec3,
    gamma2: Vec3,
    conventions: Vec<ConventionInfo>,
    notes: Vec<&'static str>,
    checks: Vec<dfslab::error_decomp::IdentityCheck>,
}

fn cmd_paper_check(beta: Vec3, g1: Vec3, g2: Vec3, output: Option<&Path>, tol: f64) -> anyhow::Result<bool> {
    let checks = error_identity_checks(beta, g1, g2, tol)?;
    let passed = checks.iter().all(|c| c.passed);
    let out = PaperCheck {
        passed,
        tolerance: tol,
        beta,
        gamma1: g1,
        gamma2: g2,
        conventions: vec![ConventionInfo::for_basis(&build_basis64()), ConventionInfo::for_basis(&build_basis256())],
        notes: vec![
            "three-qubit DM error: code-acting terms after dropping leakage and complement-only classes",
            "three-qubit product error: all non-leakage terms",
            "four-qubit results come from the product error; the DM error has no logical component",
        ],
        checks,
    };
    emit_json(&out, output)?;
    Ok(passed)
}

fn run(cli: Cli) -> anyhow::Result<bool> {
    let tol = cli.tol;
    if !(tol.is_finite() && tol > 0.0) {
        return Err(usage(format!("tolerance must be positive, got {tol}")));
    }
    match cli.command {
        Command::Basis { dfs, format, output } => cmd_basis(dfs, format, output.as_deref(), tol).map(|_| true),
        Command::States { action: StatesAction::Dump, dfs, output } => cmd_states(dfs, output.as_deref()).map(|_| true),
        Command::Leo { dfs, method, output } => cmd_leo(dfs, method, output.as_deref(), tol).map(|_| true),
        Command::Verify { suite, json } => cmd_verify(suite, json, tol),
        Command::Simulate { config, csv, output } => {
            cmd_simulate(&config, csv.as_deref(), output.as_deref(), tol).map(|_| true)
        }
        Command::Decompose { dfs, pair, error, beta, gamma1, gamma2, g, tensor, drop, paper_check, output } => {
            if paper_check {
                return cmd_paper_check(
                    beta.unwrap_or(BETA),
                    gamma1.unwrap_or(GAMMA1),
                    gamma2.unwrap_or(GAMMA2),
                    output.as_deref(),
                    tol,
                );
            }
            let args = DecomposeArgs { dfs, pair, error, beta, gamma1, gamma2, g, tensor, drop };
            cmd_decompose(args, output.as_deref(), tol).map(|_| true)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_USAGE } else { 0 });
        }
    };
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(EXIT_VERIFY),
        Err(e) => {
            eprintln!("error: {e:#}");
            if e.downcast_ref::<UsageError>().is_some() {
                ExitCode::from(EXIT_USAGE)
            } else {
                ExitCode::from(EXIT_VERIFY)
            }
        }
    }
}
