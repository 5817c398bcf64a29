//! `superhom`: Hochschild and cyclic homology of finite-dimensional
//! superalgebras, and machine verification of the supertrace theorem.

mod table;

use std::fmt;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use superhom::chain::{
    bprime_acyclicity_check, connes_sequence_check, cyclic_homology, hochschild_homology,
    ChainError, HochschildComplex, Theory, DEFAULT_CHAIN_CAP,
};
use superhom::linalg::Field;
use superhom::morphism::{MorphismError, SupertraceMap};
use superhom::report::{gating_pass, to_canonical_json, AlgebraRef, Check};
use superhom::suite::{operator_suite, DEFAULT_SEED};
use superhom::superalgebra::{
    builtin, matrix_algebra, validate, AlgebraError, Builtin, MatrixShape, SuperAlgebra,
    DEFAULT_ALGEBRA_CAP,
};

#[derive(Parser, Debug)]
#[command(
    name = "superhom",
    version,
    about = "Hochschild and cyclic homology of superalgebras"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    config: Config,
}

#[derive(Args, Debug, Clone)]
struct Config {
    /// Coefficient field: `rational` or `gf:P` for a prime P.
    #[arg(long, global = true, default_value = "rational", value_parser = parse_field)]
    field: Field,
    /// Highest homological degree to compute or check.
    #[arg(long, global = true, default_value_t = 3)]
    max_degree: usize,
    /// Size of the even block of M_{p,q}(A).
    #[arg(long, global = true)]
    p: Option<usize>,
    /// Size of the odd block of M_{p,q}(A).
    #[arg(long, global = true)]
    q: Option<usize>,
    /// Seed for the randomized supplements of ops-check.
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Largest chain space (number of basis tuples) that may be enumerated.
    #[arg(long, global = true, env = "SUPERHOM_CAP", default_value_t = DEFAULT_CHAIN_CAP)]
    cap: usize,
    /// Write the JSON report (or algebra file) here.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Print the JSON report on stdout (the default when --out is absent).
    #[arg(long, global = true, conflicts_with = "table")]
    json: bool,
    /// Print a human-readable table derived from the report.
    #[arg(long, global = true)]
    table: bool,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Write a builtin algebra as a canonical algebra file.
    Gen { kind: String },
    /// Check the superalgebra axioms of an algebra file.
    Validate { algebra: String },
    /// Hochschild homology.
    Hh { algebra: String },
    /// Cyclic homology via the total complex of the cyclic bicomplex.
    Hc { algebra: String },
    /// Verify that the supertrace is a morphism of cyclic bicomplexes
    /// M_{p,q}(A) -> A and that it induces isomorphisms in homology.
    StrCheck {
        algebra: String,
        #[arg(long, value_enum, default_value_t = TheoryArg::Hc)]
        theory: TheoryArg,
    },
    /// Run the operator identity suite, b' acyclicity and the Connes
    /// sequence checks, also on M_{p,q}(A) when a shape is given.
    OpsCheck { algebra: String },
    /// Write M_{p,q}(A) as an algebra file.
    Matrix { algebra: String },
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum TheoryArg {
    Hh,
    Hc,
}

impl From<TheoryArg> for Theory {
    fn from(t: TheoryArg) -> Theory {
        match t {
            TheoryArg::Hh => Theory::Hh,
            TheoryArg::Hc => Theory::Hc,
        }
    }
}

fn parse_field(s: &str) -> Result<Field, String> {
    s.parse()
        .map_err(|e: superhom::linalg::LinalgError| e.to_string())
}

/// Failure modes, each with its exit code.
#[derive(Debug)]
enum Failure {
    /// A mathematical check failed or a computation was refused (exit 1).
    Check(String),
    /// Bad input or usage (exit 2).
    Input(String),
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Check(m) | Failure::Input(m) => f.write_str(m),
        }
    }
}

impl From<ChainError> for Failure {
    fn from(e: ChainError) -> Self {
        Failure::Check(e.to_string())
    }
}

impl From<MorphismError> for Failure {
    fn from(e: MorphismError) -> Self {
        match e {
            MorphismError::NoEvenCorner => Failure::Input(e.to_string()),
            other => Failure::Check(other.to_string()),
        }
    }
}

impl From<AlgebraError> for Failure {
    fn from(e: AlgebraError) -> Self {
        match e {
            AlgebraError::TooLarge { .. } => Failure::Check(e.to_string()),
            other => Failure::Input(other.to_string()),
        }
    }
}

/// A builtin kind, or else a path to an algebra file.
fn load_algebra(spec: &str) -> Result<SuperAlgebra, Failure> {
    let path = Path::new(spec);
    if path.is_file() {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Failure::Input(format!("cannot read {spec}: {e}")))?;
        return Ok(SuperAlgebra::from_json(&text)?);
    }
    match spec.parse::<Builtin>() {
        Ok(kind) => Ok(builtin(kind)?),
        Err(_) => Err(Failure::Input(format!(
            "`{spec}` is neither a file nor a builtin algebra"
        ))),
    }
}

fn load_valid(spec: &str) -> Result<SuperAlgebra, Failure> {
    let a = load_algebra(spec)?;
    let report = validate(&a);
    if report.is_valid() {
        Ok(a)
    } else {
        Err(Failure::Input(format!(
            "{} is not a superalgebra: {}",
            a.name(),
            report.summary()
        )))
    }
}

fn shape(config: &Config) -> Result<Option<MatrixShape>, Failure> {
    match (config.p, config.q) {
        (None, None) => Ok(None),
        (p, q) => MatrixShape::new(p.unwrap_or(0), q.unwrap_or(0))
            .map(Some)
            .map_err(Failure::from),
    }
}

fn required_shape(config: &Config) -> Result<MatrixShape, Failure> {
    shape(config)?.ok_or_else(|| Failure::Input("a shape is required: pass --p and --q".into()))
}

fn complex(a: SuperAlgebra, config: &Config) -> Result<Arc<HochschildComplex>, Failure> {
    Ok(Arc::new(HochschildComplex::new(
        Arc::new(a),
        config.field,
        config.cap,
    )?))
}

struct Output {
    report: Value,
    pass: bool,
}

impl Config {
    fn to_value(&self, command: &Command) -> Value {
        let mut v = json!({
            "command": command.name(),
            "field": self.field.to_string(),
            "max_degree": self.max_degree,
            "seed": self.seed,
            "cap": self.cap,
        });
        if let Some(p) = self.p {
            v["p"] = json!(p);
        }
        if let Some(q) = self.q {
            v["q"] = json!(q);
        }
        if let Command::StrCheck { theory, .. } = command {
            v["theory"] = json!(Theory::from(*theory).as_str());
        }
        v
    }
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Gen { .. } => "gen",
            Command::Validate { .. } => "validate",
            Command::Hh { .. } => "hh",
            Command::Hc { .. } => "hc",
            Command::StrCheck { .. } => "str-check",
            Command::OpsCheck { .. } => "ops-check",
            Command::Matrix { .. } => "matrix",
        }
    }
}

fn value<T: serde::Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("reports serialize")
}

fn run_validate(spec: &str) -> Result<Output, Failure> {
    let a = load_algebra(spec)?;
    let report = validate(&a);
    let violations: Vec<String> = report.violations.iter().map(|v| v.to_string()).collect();
    Ok(Output {
        report: json!({
            "algebra": value(&AlgebraRef::from(&a)),
            "dim": a.dim(),
            "valid": report.is_valid(),
            "violations": violations,
        }),
        pass: report.is_valid(),
    })
}

fn run_homology(spec: &str, theory: Theory, config: &Config) -> Result<Output, Failure> {
    let a = load_valid(spec)?;
    let c = complex(a.clone(), config)?;
    let result = match theory {
        Theory::Hc => cyclic_homology(c, config.max_degree)?.0,
        _ => hochschild_homology(&c, config.max_degree)?,
    };
    Ok(Output {
        report: value(&result.report(&a, Vec::new())),
        pass: true,
    })
}

fn run_str_check(spec: &str, theory: Theory, config: &Config) -> Result<Output, Failure> {
    let s = required_shape(config)?;
    if s.p() == 0 {
        return Err(MorphismError::NoEvenCorner.into());
    }
    let base = load_valid(spec)?;
    let m = matrix_algebra(&base, s, DEFAULT_ALGEBRA_CAP)?;
    let map = SupertraceMap::new(m, config.field, config.cap)?;
    // boundaries in degree n come from degree n + 1, so commutation is
    // needed one degree higher than the homology itself
    let commutation = map.verify_bicomplex_morphism(config.max_degree + 1)?;
    if !commutation.pass {
        return Ok(Output {
            report: json!({ "commutation": value(&commutation), "iso": false }),
            pass: false,
        });
    }
    let iso = map.induced_iso_report(&commutation, config.max_degree, theory)?;
    Ok(Output {
        pass: iso.iso,
        report: value(&iso),
    })
}

fn suite_checks(a: &SuperAlgebra, config: &Config) -> Result<Vec<Check>, Failure> {
    let c = complex(a.clone(), config)?;
    let mut checks = operator_suite(&c, config.max_degree, config.seed)?;
    checks.extend(bprime_acyclicity_check(&c, config.max_degree)?.1);
    Ok(checks)
}

fn run_ops_check(spec: &str, config: &Config) -> Result<Output, Failure> {
    let a = load_valid(spec)?;
    let c = complex(a.clone(), config)?;
    let connes = connes_sequence_check(c, config.max_degree)?;
    let checks = suite_checks(&a, config)?;
    let mut pass = gating_pass(&checks);
    let mut report = value(&connes.hc.report(&a, checks));
    report["theory"] = json!("connes");
    if let Some(s) = shape(config)? {
        let m = matrix_algebra(&a, s, DEFAULT_ALGEBRA_CAP)?;
        let checks = suite_checks(m.algebra(), config)?;
        pass &= gating_pass(&checks);
        report["matrix_algebra"] = json!({
            "algebra": value(&AlgebraRef::from(&**m.algebra())),
            "checks": value(&checks),
        });
    }
    Ok(Output { report, pass })
}

fn write_out(path: &Path, text: &str) -> Result<(), Failure> {
    std::fs::write(path, text)
        .map_err(|e| Failure::Input(format!("cannot write {}: {e}", path.display())))
}

fn emit_algebra(a: &SuperAlgebra, config: &Config) -> Result<(), Failure> {
    let mut text = a.to_canonical_json();
    text.push('\n');
    match &config.out {
        Some(path) => write_out(path, &text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run(cli: &Cli) -> Result<bool, Failure> {
    let config = &cli.config;
    let output = match &cli.command {
        Command::Gen { kind } => {
            let kind: Builtin = kind
                .parse()
                .map_err(|e: AlgebraError| Failure::Input(e.to_string()))?;
            emit_algebra(&builtin(kind)?, config)?;
            return Ok(true);
        }
        Command::Matrix { algebra } => {
            let base = load_valid(algebra)?;
            let m = matrix_algebra(&base, required_shape(config)?, DEFAULT_ALGEBRA_CAP)?;
            emit_algebra(m.algebra(), config)?;
            return Ok(true);
        }
        Command::Validate { algebra } => run_validate(algebra)?,
        Command::Hh { algebra } => run_homology(algebra, Theory::Hh, config)?,
        Command::Hc { algebra } => run_homology(algebra, Theory::Hc, config)?,
        Command::StrCheck { algebra, theory } => run_str_check(algebra, (*theory).into(), config)?,
        Command::OpsCheck { algebra } => run_ops_check(algebra, config)?,
    };

    let mut report = output.report;
    report["config"] = config.to_value(&cli.command);
    let text = to_canonical_json(&report);
    if let Some(path) = &config.out {
        write_out(path, &text)?;
    }
    if config.table {
        print!("{}", table::render(&report));
    } else if config.json || config.out.is_none() {
        print!("{text}");
    }
    Ok(output.pass)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Failure::Check(m)) => {
            eprintln!("superhom: {m}");
            ExitCode::from(1)
        }
        Err(Failure::Input(m)) => {
            eprintln!("superhom: {m}");
            ExitCode::from(2)
        }
    }
}
