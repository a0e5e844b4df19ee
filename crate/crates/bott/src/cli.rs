//! Command-line front end. Every successful command prints one JSON
//! [`RunReport`]; errors go to standard error with a distinct exit code.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use bott_core::chern::{self, Polarization, SurfacePairing};
use bott_core::filtration::{self, FiltrationBundle};
use bott_core::{klyachko, positivity, BottMatrix, Error, Subspace};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use crate::acceptance::{self, Fault, Grid};
use crate::json::{self, BundleJson, DivisorJson, FanJson, MatrixJson, PositivityJson, RunReport, StabilityJson};

pub const EXIT_OK: i32 = 0;
pub const EXIT_ACCEPTANCE: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_PRECONDITION: i32 = 3;
pub const EXIT_DISAGREEMENT: i32 = 4;

pub const CAP_VAR: &str = "BOTT_CLOSURE_CAP";

#[derive(Parser, Debug)]
#[command(name = "bott", version, about = "Bott towers, divisor positivity and equivariant bundles, in exact arithmetic")]
pub struct Cli {
    /// Write the JSON report here instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Rays, maximal cones and walls of the fan.
    Fan(MatrixArg),
    /// Jet ampleness, ampleness, nefness and bigness of a divisor.
    ClassifyDivisor(DivisorArgs),
    /// Fano and weak Fano, anticanonical jets, splitting of the tangent bundle.
    ClassifyVariety(MatrixArg),
    /// Operations on equivariant bundles given by filtrations.
    Bundle(BundleArgs),
    /// Slope semistability of a rank-2 bundle on a Hirzebruch surface.
    Stability(StabilityArgs),
    /// Run the acceptance suite.
    Acceptance(AcceptanceArgs),
}

#[derive(Args, Debug)]
pub struct MatrixArg {
    /// JSON file `{"k": .., "c": [[..], ..]}`.
    #[arg(long)]
    pub matrix: PathBuf,
}

#[derive(Args, Debug)]
pub struct DivisorArgs {
    #[arg(long)]
    pub matrix: PathBuf,
    /// `k` coefficients in the Picard basis or `2k` on the rays.
    #[arg(long, allow_hyphen_values = true)]
    pub coeffs: String,
    /// Also report whether the divisor is `s`-jet ample.
    #[arg(long, allow_hyphen_values = true)]
    pub sjet: Option<i64>,
    /// Cross-check against the fan-based oracles.
    #[arg(long)]
    pub oracle: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum BundleOp {
    Sum,
    Tensor,
    Twist,
    Compat,
    Split,
    Tangent,
    Subbundle,
    Quotient,
}

#[derive(Args, Debug)]
pub struct BundleArgs {
    #[arg(value_enum)]
    pub op: BundleOp,
    #[arg(long)]
    pub matrix: PathBuf,
    #[arg(long)]
    pub bundle: Option<PathBuf>,
    /// Second bundle for `sum` and `tensor`.
    #[arg(long)]
    pub other: Option<PathBuf>,
    /// Line bundle for `twist`, optionally prefixed `reduced:` or `full:`.
    #[arg(long, allow_hyphen_values = true)]
    pub coeffs: Option<String>,
    /// Subspace for `subbundle` and `quotient`: vectors split by `;`, entries by `,`.
    #[arg(long, allow_hyphen_values = true)]
    pub subspace: Option<String>,
}

#[derive(Args, Debug)]
pub struct StabilityArgs {
    /// The surface `H_r`.
    #[arg(long)]
    pub r: i64,
    /// Polarization `a D_3 + b D_4`.
    #[arg(long, allow_hyphen_values = true)]
    pub a: i64,
    #[arg(long, allow_hyphen_values = true)]
    pub b: i64,
    /// Rank-2 bundle; the tangent bundle when omitted.
    #[arg(long)]
    pub bundle: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum FaultArg {
    WrongPairing,
}

#[derive(Args, Debug)]
pub struct AcceptanceArgs {
    #[arg(long, value_enum, default_value = "small")]
    pub grid: Grid,
    #[arg(long, default_value_t = acceptance::DEFAULT_SEED)]
    pub seed: u64,
    #[arg(long, value_enum, hide = true)]
    pub inject_fault: Option<FaultArg>,
}

#[derive(Debug)]
pub enum CliError {
    Core(Error),
    Input(String),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) => EXIT_INPUT,
            CliError::Core(e) => match e {
                Error::RequiresNonnegMatrix => EXIT_PRECONDITION,
                Error::DeciderDisagreement(_) => EXIT_DISAGREEMENT,
                Error::Input(_)
                | Error::NotUnimodular
                | Error::NotNef
                | Error::ClosureCapExceeded { .. }
                | Error::NotASubbundle
                | Error::Unsupported(_)
                | Error::HypothesisNotMet(_) => EXIT_INPUT,
            },
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Core(e) => write!(f, "{e}"),
            CliError::Input(msg) => f.write_str(msg),
        }
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> CliResult<T> {
    let text = fs::read_to_string(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

fn read_matrix(path: &Path) -> CliResult<BottMatrix> {
    Ok(read_json::<MatrixJson>(path)?.to_matrix()?)
}

fn read_bundle(path: Option<&Path>, c: &BottMatrix, flag: &str) -> CliResult<FiltrationBundle> {
    let path = path.ok_or_else(|| CliError::Input(format!("--{flag} is required")))?;
    // either a bare bundle or the report of a command that produced one
    let mut value: Value = read_json(path)?;
    if value_is_report(&value) {
        value = value["result"].take();
    }
    let b: BundleJson = serde_json::from_value(value).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    Ok(b.to_bundle(c.ray_count())?)
}

fn value_is_report(v: &Value) -> bool {
    v.get("command").is_some() && v.get("result").is_some()
}

fn to_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("report types serialize")
}

/// The closure cap from the environment, or the default.
pub fn closure_cap() -> CliResult<usize> {
    match std::env::var(CAP_VAR) {
        Err(_) => Ok(bott_core::DEFAULT_CLOSURE_CAP),
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(n) if n > 0 => Ok(n),
            _ => Err(CliError::Input(format!("{CAP_VAR} must be a positive integer, got {v:?}"))),
        },
    }
}

/// Parses `--coeffs`, accepting an optional `reduced:` or `full:` prefix.
fn parse_coeffs(text: &str, k: usize) -> CliResult<DivisorJson> {
    let text = text.trim();
    let parsed = if let Some(rest) = text.strip_prefix("reduced:") {
        DivisorJson::Reduced(json::parse_csv_ints(rest)?)
    } else if let Some(rest) = text.strip_prefix("full:") {
        DivisorJson::Full(json::parse_csv_ints(rest)?)
    } else {
        DivisorJson::from_csv(text, k)?
    };
    Ok(parsed)
}

fn report(command: &str, inputs_echo: Value, result: Value) -> RunReport {
    RunReport { command: command.into(), inputs_echo, result: Some(result), warnings: Vec::new(), oracle_agreement: None }
}

fn cmd_fan(args: &MatrixArg) -> CliResult<RunReport> {
    let c = read_matrix(&args.matrix)?;
    Ok(report("fan", json!({ "matrix": MatrixJson::from_matrix(&c) }), to_value(&FanJson::from_matrix(&c))))
}

fn cmd_classify_divisor(args: &DivisorArgs) -> CliResult<RunReport> {
    let c = read_matrix(&args.matrix)?;
    let coeffs = parse_coeffs(&args.coeffs, c.height())?;
    let d = coeffs.to_divisor(&c)?;
    let r = positivity::classify_divisor(&c, &d, args.oracle)?;
    let echo = json!({
        "matrix": MatrixJson::from_matrix(&c),
        "divisor": coeffs,
        "sjet": args.sjet,
        "oracle": args.oracle,
    });
    let mut out = report("classify-divisor", echo, to_value(&PositivityJson::new(&r, args.sjet)));
    out.warnings = r.warnings.clone();
    // a disagreement has already been turned into an error
    out.oracle_agreement = args.oracle.then_some(true);
    Ok(out)
}

fn cmd_classify_variety(args: &MatrixArg) -> CliResult<RunReport> {
    let c = read_matrix(&args.matrix)?;
    let r = positivity::classify_variety(&c)?;
    Ok(report(
        "classify-variety",
        json!({ "matrix": MatrixJson::from_matrix(&c) }),
        to_value(&json::VarietyJson::new(&r)),
    ))
}

fn required<'a>(x: &'a Option<String>, flag: &str) -> CliResult<&'a str> {
    x.as_deref().ok_or_else(|| CliError::Input(format!("--{flag} is required")))
}

fn cmd_bundle(args: &BundleArgs, cap: usize) -> CliResult<RunReport> {
    let c = read_matrix(&args.matrix)?;
    let bundle = || read_bundle(args.bundle.as_deref(), &c, "bundle");
    let subspace = |e: &FiltrationBundle| -> CliResult<Subspace> {
        Ok(json::parse_subspace_rows(required(&args.subspace, "subspace")?, e.rank())?)
    };
    let mut echo = json!({ "matrix": MatrixJson::from_matrix(&c), "op": format!("{:?}", args.op).to_lowercase() });
    let result = match args.op {
        BundleOp::Sum | BundleOp::Tensor => {
            let (e, f) = (bundle()?, read_bundle(args.other.as_deref(), &c, "other")?);
            let g = if args.op == BundleOp::Sum { filtration::direct_sum(&e, &f)? } else { filtration::tensor(&e, &f)? };
            to_value(&BundleJson::from_bundle(&g))
        }
        BundleOp::Twist => {
            let e = bundle()?;
            let coeffs = parse_coeffs(required(&args.coeffs, "coeffs")?, c.height())?;
            let l = coeffs.to_divisor(&c)?;
            echo["line"] = to_value(&coeffs);
            to_value(&BundleJson::from_bundle(&filtration::twist(&e, &l)?))
        }
        BundleOp::Compat => {
            let r = klyachko::compatibility(&c, &bundle()?, cap)?;
            json!({
                "compatible": r.holds(),
                "failing_cone": r.failing_cone.map(|m| m.selection),
                "bases": json::cone_bases(&r.bases),
            })
        }
        BundleOp::Split => {
            let b = klyachko::splitting(&c, &bundle()?, cap)?;
            json!({ "split": b.is_some(), "basis": b.as_ref().map(json::AdaptedBasisJson::new) })
        }
        BundleOp::Tangent => to_value(&BundleJson::from_bundle(&klyachko::tangent_bundle(&c))),
        BundleOp::Subbundle => {
            let e = bundle()?;
            let f0 = subspace(&e)?;
            echo["subspace"] = to_value(&json::subspace_json(&f0));
            let r = klyachko::subbundle_check(&c, &e, &f0, cap)?;
            json!({ "is_subbundle": r.is_subbundle, "induced": BundleJson::from_bundle(&r.induced) })
        }
        BundleOp::Quotient => {
            let e = bundle()?;
            let f0 = subspace(&e)?;
            echo["subspace"] = to_value(&json::subspace_json(&f0));
            to_value(&BundleJson::from_bundle(&klyachko::quotient(&c, &e, &f0, cap)?))
        }
    };
    Ok(report("bundle", echo, result))
}

fn cmd_stability(args: &StabilityArgs, cap: usize) -> CliResult<RunReport> {
    if args.r < 0 {
        return Err(CliError::Input(format!("--r must be non-negative, got {}", args.r)));
    }
    let h = Polarization::new(args.a, args.b)?;
    let pairing = SurfacePairing::new(args.r);
    let c = pairing.matrix();
    let e = match &args.bundle {
        Some(p) => read_bundle(Some(p), &c, "bundle")?,
        None => klyachko::tangent_bundle(&c),
    };
    let s = chern::is_semistable_rank2(&e, h, &pairing)?;
    let mut warnings = Vec::new();
    let chern = match chern::chern_data(&e, &pairing, cap) {
        Ok(cd) => Some(json::ChernJson::new(&cd, &chern::discriminant(&cd, &pairing)?)),
        Err(Error::Unsupported(msg)) => {
            warnings.push(format!("no Chern classes: {msg}"));
            None
        }
        Err(e) => return Err(e.into()),
    };
    let echo = json!({
        "r": args.r,
        "a": args.a,
        "b": args.b,
        "bundle": args.bundle.as_ref().map(|_| BundleJson::from_bundle(&e)),
    });
    let mut out = report("stability", echo, to_value(&StabilityJson::new(&s, chern)));
    out.warnings = warnings;
    Ok(out)
}

fn cmd_acceptance(args: &AcceptanceArgs, cap: usize) -> (RunReport, bool) {
    let opts = acceptance::Options {
        grid: args.grid,
        seed: args.seed,
        cap,
        fault: args.inject_fault.map(|FaultArg::WrongPairing| Fault::WrongPairing),
    };
    let summary = acceptance::run(&opts);
    let mut stderr = std::io::stderr().lock();
    for c in &summary.criteria {
        let _ = writeln!(stderr, "{}", c.line());
    }
    let warnings = summary
        .criteria
        .iter()
        .filter(|c| !c.passed)
        .map(|c| format!("criterion {} failed: {}", c.id, c.name))
        .collect();
    let echo = json!({ "grid": args.grid, "seed": args.seed, "fault": args.inject_fault.is_some() });
    let mut out = report("acceptance", echo, to_value(&summary));
    out.warnings = warnings;
    if !summary.passed {
        out.result = None;
    }
    (out, summary.passed)
}

fn emit(report: &RunReport, out: Option<&Path>) -> CliResult<()> {
    let text = serde_json::to_string_pretty(report).expect("report types serialize") + "\n";
    match out {
        Some(p) => fs::write(p, text).map_err(|e| CliError::Input(format!("{}: {e}", p.display()))),
        None => std::io::stdout().write_all(text.as_bytes()).map_err(|e| CliError::Input(format!("stdout: {e}"))),
    }
}

fn execute(cli: &Cli) -> CliResult<i32> {
    let cap = closure_cap()?;
    let (report, code) = match &cli.command {
        Command::Fan(a) => (cmd_fan(a)?, EXIT_OK),
        Command::ClassifyDivisor(a) => (cmd_classify_divisor(a)?, EXIT_OK),
        Command::ClassifyVariety(a) => (cmd_classify_variety(a)?, EXIT_OK),
        Command::Bundle(a) => (cmd_bundle(a, cap)?, EXIT_OK),
        Command::Stability(a) => (cmd_stability(a, cap)?, EXIT_OK),
        Command::Acceptance(a) => {
            let (report, passed) = cmd_acceptance(a, cap);
            (report, if passed { EXIT_OK } else { EXIT_ACCEPTANCE })
        }
    };
    emit(&report, cli.out.as_deref())?;
    Ok(code)
}

/// Runs the command line and returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
        }
    };
    match execute(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

pub fn main() -> i32 {
    run(std::env::args_os())
}

#[cfg(test)]
mod tests {
    use super::*;
    use clap::CommandFactory;

    #[test]
    fn cli_definition_is_consistent() {
        Cli::command().debug_assert();
    }

    #[test]
    fn exit_codes_are_disjoint() {
        assert_eq!(CliError::from(Error::RequiresNonnegMatrix).exit_code(), EXIT_PRECONDITION);
        assert_eq!(CliError::from(Error::DeciderDisagreement("x".into())).exit_code(), EXIT_DISAGREEMENT);
        assert_eq!(CliError::from(Error::NotASubbundle).exit_code(), EXIT_INPUT);
        assert_eq!(CliError::from(Error::ClosureCapExceeded { cap: 1 }).exit_code(), EXIT_INPUT);
        assert_eq!(CliError::Input("x".into()).exit_code(), EXIT_INPUT);
    }

    #[test]
    fn coeff_prefixes() {
        assert_eq!(parse_coeffs("reduced: 0,0", 2).unwrap(), DivisorJson::Reduced(vec![0, 0]));
        assert_eq!(parse_coeffs("full:1,0,0,0", 2).unwrap(), DivisorJson::Full(vec![1, 0, 0, 0]));
        assert_eq!(parse_coeffs("-1,2", 2).unwrap(), DivisorJson::Reduced(vec![-1, 2]));
    }
}
