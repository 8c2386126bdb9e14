//! `noether`: build groups, run reductions, verify certificates and query
//! the lattice and invariance oracles.
//!
//! Exit codes: 0 success, 1 a claim failed, 2 usage, hypothesis or schema
//! error, 3 resource limit.

mod expr;

use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use thiserror::Error;

use noether_core::funcfield::{set_term_cap, GroupAction, RatFunc, VarSet, DEFAULT_TERM_CAP};
use noether_core::groups::spec::GroupSpec;
use noether_core::groups::{CentralExtensionData, FiniteGroup, GroupError, DEFAULT_SIZE_CAP};
use noether_core::oracle::{self, hnf, kernel_lattice, IntMatrix};
use noether_core::reductions::{self as red, Certificate, ReduceOptions, ReductionError, DEFAULT_DESCENT_DIM_CAP};
use noether_core::scalars::{field_with_root_of_unity, FieldSpec};

#[derive(Parser, Debug)]
#[command(name = "noether", version, about = "Constructive reductions for invariant fields of finite groups")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct RunConfig {
    /// RNG seed for randomized constructions.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Retry budget for randomized constructions.
    #[arg(long, default_value_t = 32, value_parser = clap::value_parser!(u64).range(1..))]
    max_retries: u64,
    /// Coefficient field: Q, Q(zeta:m), Fp:p or Fp:p(zeta:m). Defaults to
    /// ℚ with the roots of unity the chosen construction needs.
    #[arg(long)]
    field: Option<String>,
    /// Largest number of terms in any intermediate polynomial.
    #[arg(long, default_value_t = DEFAULT_TERM_CAP as u64, value_parser = clap::value_parser!(u64).range(1..))]
    cap_terms: u64,
    /// Largest group order constructed.
    #[arg(long, default_value_t = DEFAULT_SIZE_CAP as u64, value_parser = clap::value_parser!(u64).range(1..))]
    cap_size: u64,
    /// Largest dimension on which the affine descent step is run.
    #[arg(long, default_value_t = DEFAULT_DESCENT_DIM_CAP as u64)]
    cap_descent: u64,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Describe a group given as a JSON spec (file path or inline JSON).
    Group {
        spec: String,
        #[arg(long, default_value_t = DEFAULT_SIZE_CAP as u64)]
        cap_size: u64,
    },
    /// Run a reduction and write its certificate.
    Reduce(ReduceArgs),
    /// Re-run every claim of a certificate from its serialized data.
    Verify { certificate: PathBuf },
    /// Hermite normal forms, exponent lattices and invariance checks.
    Oracle(OracleArgs),
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Theorem {
    #[value(name = "1.1")]
    T1_1,
    #[value(name = "1.4")]
    T1_4,
    #[value(name = "1.5")]
    T1_5,
    #[value(name = "1.6")]
    T1_6,
    #[value(name = "1.7")]
    T1_7,
    #[value(name = "1.8")]
    T1_8,
    #[value(name = "1.9")]
    T1_9,
    #[value(name = "1.10")]
    T1_10,
    #[value(name = "4.2")]
    T4_2,
    #[value(name = "fischer")]
    Fischer,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum WitnessChoice {
    None,
    Fischer,
}

#[derive(Args, Debug)]
struct ReduceArgs {
    #[arg(long, value_enum)]
    theorem: Theorem,
    /// The group (fischer, 1.6, 1.8) as a JSON spec.
    #[arg(long)]
    group: Option<String>,
    /// H as a JSON spec (1.1, 1.7, 1.9, 1.10).
    #[arg(long)]
    h: Option<String>,
    /// G as a JSON spec (1.1, 1.4, 1.7, 1.9, 1.10); trivial when omitted.
    #[arg(long)]
    g: Option<String>,
    /// Odd n (1.5, 4.2).
    #[arg(long)]
    n: Option<usize>,
    /// Central element of prime order (1.6), as an element index.
    #[arg(long)]
    c: Option<usize>,
    /// Normal subgroup elements (1.8), comma separated.
    #[arg(long, value_delimiter = ',')]
    subgroup: Option<Vec<usize>>,
    /// Rationality witness for K(H) (1.9, 1.10, 4.2).
    #[arg(long, value_enum)]
    witness: Option<WitnessChoice>,
    /// Extra variables for a stably rational witness.
    #[arg(long, default_value_t = 0)]
    extra: usize,
    /// Output file; the certificate goes to stdout otherwise.
    #[arg(long)]
    out: Option<PathBuf>,
    #[command(flatten)]
    config: RunConfig,
}

#[derive(Args, Debug)]
#[command(group(clap::ArgGroup::new("mode").required(true).args(["hnf", "kernel", "invariant_check"])))]
struct OracleArgs {
    /// Integer matrix as JSON, e.g. [[2,4],[1,3]].
    #[arg(long, value_name = "MATRIX")]
    hnf: Option<String>,
    /// Integer matrix M as JSON; prints a basis of {v : M·v ≡ 0 mod moduli}.
    #[arg(long, value_name = "MATRIX", requires = "moduli")]
    kernel: Option<String>,
    /// One modulus per row of the kernel matrix, as JSON.
    #[arg(long)]
    moduli: Option<String>,
    /// Check --expr, written in x[0], x[1], …, for invariance under the
    /// regular action of --group.
    #[arg(long, requires_all = ["group", "expr"])]
    invariant_check: bool,
    #[arg(long)]
    expr: Option<String>,
    #[arg(long)]
    group: Option<String>,
    #[arg(long, default_value = "Q")]
    field: String,
}

#[derive(Debug, Error)]
enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Hypothesis(String),
    #[error("{0}")]
    Schema(String),
    #[error("{0}")]
    Resource(String),
    #[error("{0}")]
    Io(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Resource(_) => 3,
            _ => 2,
        }
    }
}

impl From<ReductionError> for CliError {
    fn from(e: ReductionError) -> Self {
        if e.is_resource() {
            CliError::Resource(e.to_string())
        } else {
            CliError::Hypothesis(e.to_string())
        }
    }
}

impl From<GroupError> for CliError {
    fn from(e: GroupError) -> Self {
        match e {
            GroupError::SizeCap { .. } => CliError::Resource(e.to_string()),
            e => CliError::Hypothesis(e.to_string()),
        }
    }
}

fn json_error(source: &str, e: &serde_json::Error) -> CliError {
    CliError::Schema(format!("malformed JSON in {source} at line {}, column {}: {e}", e.line(), e.column()))
}

/// Inline JSON or the contents of a file.
fn read_json_arg(arg: &str) -> Result<(String, String), CliError> {
    if arg.trim_start().starts_with(['{', '[']) {
        Ok(("argument".into(), arg.to_string()))
    } else {
        let text = std::fs::read_to_string(arg).map_err(|e| CliError::Io(format!("cannot read {arg}: {e}")))?;
        Ok((arg.to_string(), text))
    }
}

fn parse_group(arg: &str, cap: usize) -> Result<FiniteGroup, CliError> {
    let (source, text) = read_json_arg(arg)?;
    let spec: GroupSpec = serde_json::from_str(&text).map_err(|e| json_error(&source, &e))?;
    Ok(spec.build(cap)?)
}

fn parse_field(s: &str) -> Result<Arc<FieldSpec>, CliError> {
    FieldSpec::parse(s).map_err(|e| CliError::Usage(e.to_string()))
}

fn parse_matrix(what: &str, s: &str) -> Result<Vec<Vec<i64>>, CliError> {
    let m: Vec<Vec<i64>> = serde_json::from_str(s).map_err(|e| json_error(what, &e))?;
    let cols = m.first().map_or(0, Vec::len);
    if m.is_empty() || cols == 0 || m.iter().any(|r| r.len() != cols) {
        return Err(CliError::Usage(format!("{what}: expected a nonempty rectangular integer matrix")));
    }
    Ok(m)
}

fn need<T>(v: Option<T>, flag: &str, theorem: &str) -> Result<T, CliError> {
    v.ok_or_else(|| CliError::Usage(format!("--theorem {theorem} requires --{flag}")))
}

fn witness_for(
    choice: Option<WitnessChoice>,
    default: WitnessChoice,
    h: &FiniteGroup,
    field: &Arc<FieldSpec>,
    extra: usize,
) -> Result<Option<red::RationalityWitness>, CliError> {
    match choice.unwrap_or(default) {
        WitnessChoice::None => {
            if extra > 0 {
                return Err(CliError::Usage("--extra needs a witness".into()));
            }
            Ok(None)
        }
        WitnessChoice::Fischer => {
            let w = red::fischer_witness(h, field)?;
            Ok(Some(if extra > 0 { w.stabilize(extra) } else { w }))
        }
    }
}

/// ℚ(ζₑ) where e is the exponent of the group whose roots of unity the
/// construction uses; ℚ for the constructions that need none.
fn default_field(args: &ReduceArgs, cap: usize) -> Result<Arc<FieldSpec>, CliError> {
    let exponent = |flag: &Option<String>| -> Result<usize, CliError> {
        flag.as_deref().map_or(Ok(1), |s| Ok(parse_group(s, cap)?.exponent()))
    };
    let e = match args.theorem {
        Theorem::Fischer => exponent(&args.group)?,
        Theorem::T1_1 | Theorem::T1_10 => exponent(&args.h)?,
        Theorem::T1_9 if args.witness == Some(WitnessChoice::Fischer) => exponent(&args.h)?,
        Theorem::T4_2 => args.n.unwrap_or(1),
        _ => 1,
    };
    field_with_root_of_unity(0, e.max(1) as u64).map_err(|e| CliError::Usage(e.to_string()))
}

fn run_reduce(args: &ReduceArgs) -> Result<Certificate, CliError> {
    let cfg = &args.config;
    let cap = usize::try_from(cfg.cap_size).unwrap_or(usize::MAX);
    let field = match &cfg.field {
        Some(s) => parse_field(s)?,
        None => default_field(args, cap)?,
    };
    set_term_cap(usize::try_from(cfg.cap_terms).unwrap_or(usize::MAX));
    let opts = ReduceOptions {
        seed: cfg.seed,
        max_retries: usize::try_from(cfg.max_retries).unwrap_or(usize::MAX),
        size_cap: cap,
        descent_dim_cap: usize::try_from(cfg.cap_descent).unwrap_or(usize::MAX),
    };
    let group = |flag: &Option<String>, name: &str, tag: &str| -> Result<FiniteGroup, CliError> {
        parse_group(need(flag.as_deref(), name, tag)?, cap)
    };
    let optional = |flag: &Option<String>| -> Result<FiniteGroup, CliError> {
        flag.as_deref().map_or_else(|| Ok(FiniteGroup::trivial()), |s| parse_group(s, cap))
    };
    let cert = match args.theorem {
        Theorem::Fischer => red::fischer(&group(&args.group, "group", "fischer")?, &field, &opts)?,
        Theorem::T1_1 => red::theorem11_embed(&group(&args.h, "h", "1.1")?, &optional(&args.g)?, &field, &opts)?,
        Theorem::T1_4 => red::theorem14_reduce(&group(&args.g, "g", "1.4")?, &field, &opts)?,
        Theorem::T1_5 => red::theorem15_pipeline(need(args.n, "n", "1.5")?, &field, &opts)?,
        Theorem::T1_6 => {
            let total = group(&args.group, "group", "1.6")?;
            let ext = CentralExtensionData::new(&total, need(args.c, "c", "1.6")?)?;
            red::theorem16_reduce(&ext, &field, &opts)?
        }
        Theorem::T1_7 => red::theorem17_chain(&group(&args.h, "h", "1.7")?, &optional(&args.g)?, &field, &opts)?,
        Theorem::T1_8 => {
            let total = group(&args.group, "group", "1.8")?;
            let sub = need(args.subgroup.as_ref(), "subgroup", "1.8")?;
            red::theorem18_chain(&total, sub, &field, &opts)?
        }
        Theorem::T1_9 => {
            let h = group(&args.h, "h", "1.9")?;
            let w = witness_for(args.witness, WitnessChoice::None, &h, &field, args.extra)?;
            red::theorem19_construct(&h, &optional(&args.g)?, &field, w.as_ref(), &opts)?
        }
        Theorem::T1_10 => {
            let h = group(&args.h, "h", "1.10")?;
            let w = witness_for(args.witness, WitnessChoice::Fischer, &h, &field, args.extra)?
                .ok_or_else(|| CliError::Usage("--theorem 1.10 requires a witness".into()))?;
            red::theorem110_construct(&h, &optional(&args.g)?, &field, &w, &opts)?
        }
        Theorem::T4_2 => {
            let n = need(args.n, "n", "4.2")?;
            let cn = noether_core::groups::cyclic(n.max(1));
            let w = witness_for(args.witness, WitnessChoice::Fischer, &cn, &field, args.extra)?;
            red::theorem42_pipeline(n, &field, w.as_ref(), &opts)?
        }
    };
    Ok(cert)
}

fn summary(cert: &Certificate) -> String {
    let mut lines = vec![format!(
        "theorem {}: {} ({} claims, {} certificates, retries {})",
        cert.theorem,
        if cert.is_ok() { "OK" } else { "FAILED" },
        cert.claim_count(),
        cert.depth_first().len(),
        cert.retries
    )];
    lines.extend(cert.failures().into_iter().map(|f| format!("failed claim: {f}")));
    lines.join("\n")
}

fn cmd_reduce(args: &ReduceArgs) -> Result<u8, CliError> {
    let cert = run_reduce(args)?;
    let text = cert.to_json_string();
    match &args.out {
        Some(path) => {
            std::fs::write(path, &text).map_err(|e| CliError::Io(format!("cannot write {}: {e}", path.display())))?;
            println!("{}", summary(&cert));
        }
        None => {
            print!("{text}");
            eprintln!("{}", summary(&cert));
        }
    }
    Ok(if cert.is_ok() { 0 } else { 1 })
}

fn cmd_verify(path: &PathBuf) -> Result<u8, CliError> {
    let source = path.display().to_string();
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("cannot read {source}: {e}")))?;
    let cert: Certificate = serde_json::from_str(&text).map_err(|e| json_error(&source, &e))?;
    let report = red::verify_certificate(&cert).map_err(|e| {
        if e.is_resource() {
            CliError::Resource(e.to_string())
        } else {
            CliError::Schema(format!("{source}: {e}"))
        }
    })?;
    let failures = report.failures();
    for f in &failures {
        println!("failed claim: {f}");
    }
    println!(
        "verify {}: {} ({} claims re-checked)",
        report.theorem,
        if failures.is_empty() { "OK" } else { "FAILED" },
        report.claim_count()
    );
    Ok(if failures.is_empty() { 0 } else { 1 })
}

fn matrix_json(m: &IntMatrix) -> String {
    let rows: Vec<String> = m.to_strings().iter().map(|r| format!("[{}]", r.join(","))).collect();
    format!("[{}]", rows.join(","))
}

fn cmd_oracle(args: &OracleArgs) -> Result<u8, CliError> {
    if let Some(m) = &args.hnf {
        let (h, _) = hnf(&IntMatrix::from_i64(&parse_matrix("--hnf", m)?));
        println!("{}", matrix_json(&h));
        return Ok(0);
    }
    if let Some(m) = &args.kernel {
        let m = parse_matrix("--kernel", m)?;
        let moduli_text = args.moduli.as_deref().unwrap_or("[]");
        let moduli: Vec<i64> = serde_json::from_str(moduli_text).map_err(|e| json_error("--moduli", &e))?;
        if moduli.len() != m.len() || moduli.iter().any(|&d| d <= 0) {
            return Err(CliError::Usage("--moduli: one positive modulus per matrix row".into()));
        }
        let moduli: Vec<BigInt> = moduli.into_iter().map(BigInt::from).collect();
        let (basis, index) = kernel_lattice(&IntMatrix::from_i64(&m), &moduli);
        println!("basis: {}", matrix_json(&basis));
        println!("index: {index}");
        return Ok(0);
    }
    let text = args.expr.as_deref().expect("clap requires --expr");
    let g = parse_group(args.group.as_deref().expect("clap requires --group"), DEFAULT_SIZE_CAP)?;
    let field = parse_field(&args.field)?;
    let vars = VarSet::new("x", (0..g.order()).map(|i| format!("x[{i}]")).collect());
    let images: Vec<Vec<RatFunc>> = g
        .elements()
        .map(|s| g.elements().map(|e| RatFunc::var(&field, &vars, g.mul(s, e))).collect())
        .collect();
    let action = GroupAction::from_all_images(&g, &field, &vars, images).map_err(|e| CliError::Usage(e.to_string()))?;
    let f = expr::parse(text, &field, &vars).map_err(|e| CliError::Usage(format!("--invariant-check: {e}")))?;
    let inv = oracle::check_invariant(&f, &action).map_err(|e| CliError::Usage(e.to_string()))?;
    println!("{}", if inv { "invariant" } else { "not invariant" });
    Ok(if inv { 0 } else { 1 })
}

fn run(cli: &Cli) -> Result<u8, CliError> {
    match &cli.command {
        Command::Group { spec, cap_size } => {
            let g = parse_group(spec, usize::try_from(*cap_size).unwrap_or(usize::MAX))?;
            println!("{}", g.describe());
            Ok(0)
        }
        Command::Reduce(args) => cmd_reduce(args),
        Command::Verify { certificate } => cmd_verify(certificate),
        Command::Oracle(args) => cmd_oracle(args),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code())
        }
    }
}
