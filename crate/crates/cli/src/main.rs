//! `cartan`: classify Levi triples, decompose unitaries as `L·B·H`, verify
//! decompositions and emit non-surjectivity certificates.

mod json;
mod sweep;

use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};

use cartan_core::certificates::{certify_exact, certify_nonsurjective_with, default_z};
use cartan_core::herringbone::{
    classify, decompose_with, verify_with, DecompositionResult, TripleSpec,
};
use cartan_core::linalg::haar::{haar_unitary_with, rng_from_seed};
use cartan_core::linalg::{ComplexMatrix, UnitaryMatrix};
use cartan_core::{Error, Tolerances};

#[derive(Parser, Debug)]
#[command(
    name = "cartan",
    version,
    about = "Generalized Cartan decompositions of U(n)"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print the case label of a triple.
    Classify(SpecArgs),
    /// Decompose a unitary read from `--in` or sampled with `--haar`.
    Decompose(DecomposeArgs),
    /// Check a decomposition written by `decompose`.
    Verify(VerifyArgs),
    /// Emit a non-surjectivity certificate.
    Certify(CertifyArgs),
    /// Classify every triple of size n, decomposing or certifying each.
    Sweep(SweepArgs),
    /// Write Haar unitaries.
    Sample(SampleArgs),
}

#[derive(Args, Debug, Clone)]
struct SpecArgs {
    /// Matrix size; must equal the sum of either partition.
    #[arg(long)]
    n: Option<usize>,
    /// Comma-separated block sizes of L.
    #[arg(long, value_delimiter = ',', required = true)]
    lparts: Vec<usize>,
    /// Comma-separated block sizes of H.
    #[arg(long, value_delimiter = ',', required = true)]
    hparts: Vec<usize>,
    #[command(flatten)]
    out: OutArgs,
}

#[derive(Args, Debug, Clone)]
struct OutArgs {
    /// Write JSON here instead of standard output.
    #[arg(long = "out")]
    out: Option<PathBuf>,
}

#[derive(Args, Debug, Clone)]
struct TolArgs {
    /// Residual tolerance per unit of n.
    #[arg(long)]
    tol_residual: Option<f64>,
    /// Minimum rescaled imaginary part for certificates.
    #[arg(long)]
    tol_cert: Option<f64>,
}

impl TolArgs {
    fn resolve(&self) -> Tolerances {
        let mut t = Tolerances::default();
        if let Some(r) = self.tol_residual {
            t.residual = r;
        }
        if let Some(c) = self.tol_cert {
            t.cert = c;
        }
        t
    }
}

#[derive(Args, Debug)]
struct DecomposeArgs {
    #[command(flatten)]
    spec: SpecArgs,
    /// JSON matrix to decompose.
    #[arg(long = "in", conflicts_with = "haar")]
    input: Option<PathBuf>,
    /// Sample the input from Haar measure.
    #[arg(long)]
    haar: bool,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[command(flatten)]
    tol: TolArgs,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    /// Output of `decompose`.
    #[arg(long = "in")]
    input: PathBuf,
    #[command(flatten)]
    out: OutArgs,
    #[command(flatten)]
    tol: TolArgs,
}

#[derive(Args, Debug)]
struct CertifyArgs {
    #[command(flatten)]
    spec: SpecArgs,
    /// Only the exact part: skip the numeric epsilon search.
    #[arg(long)]
    exact: bool,
    #[command(flatten)]
    tol: TolArgs,
}

#[derive(Args, Debug)]
struct SweepArgs {
    #[arg(long)]
    n: usize,
    /// Haar samples per decomposable triple.
    #[arg(long, default_value_t = 1)]
    samples: u64,
    /// First seed; sample `s` uses `seed + s`.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[command(flatten)]
    out: OutArgs,
    #[command(flatten)]
    tol: TolArgs,
}

#[derive(Args, Debug)]
struct SampleArgs {
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// With more than one sample the output is an array.
    #[arg(long, default_value_t = 1)]
    samples: usize,
    #[command(flatten)]
    out: OutArgs,
}

/// Exit statuses.
mod status {
    pub const OK: u8 = 0;
    pub const FAILURE: u8 = 1;
    pub const VERIFY_FAILED: u8 = 2;
    pub const NOT_SURJECTIVE: u8 = 3;
    pub const IO: u8 = 4;
}

#[derive(Debug)]
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn io(message: impl ToString) -> Self {
        Failure {
            code: status::IO,
            message: message.to_string(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::NotSurjectiveSpec => status::NOT_SURJECTIVE,
            Error::InvalidSpec(_)
            | Error::Json(_)
            | Error::ShapeMismatch(_)
            | Error::NotUnitary(_) => status::IO,
            _ => status::FAILURE,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

type Outcome = Result<u8, Failure>;

#[derive(Serialize, Deserialize)]
struct DecomposeOutput {
    spec: TripleSpec,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    seed: Option<u64>,
    input: UnitaryMatrix,
    #[serde(flatten)]
    result: DecompositionResult,
}

fn parse_spec(a: &SpecArgs) -> Result<TripleSpec, Failure> {
    let spec = TripleSpec::new(a.lparts.clone(), a.hparts.clone())?;
    if let Some(n) = a.n {
        if n != spec.n() {
            return Err(Failure::io(format!(
                "--n {n} but partitions sum to {}",
                spec.n()
            )));
        }
    }
    Ok(spec)
}

fn emit<T: Serialize>(value: &T, out: &OutArgs) -> Result<(), Failure> {
    let text = json::to_string(value).map_err(Failure::io)?;
    match &out.out {
        Some(path) => {
            fs::write(path, text).map_err(|e| Failure::io(format!("{}: {e}", path.display())))
        }
        None => match io::stdout().lock().write_all(text.as_bytes()) {
            Err(e) if e.kind() != io::ErrorKind::BrokenPipe => Err(Failure::io(e)),
            _ => Ok(()),
        },
    }
}

fn read_json<T: for<'de> Deserialize<'de>>(path: &PathBuf) -> Result<T, Failure> {
    let text =
        fs::read_to_string(path).map_err(|e| Failure::io(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Failure::io(format!("{}: {e}", path.display())))
}

fn classify_cmd(a: &SpecArgs) -> Outcome {
    let spec = parse_spec(a)?;
    emit(&classify(&spec), &a.out)?;
    Ok(status::OK)
}

fn decompose_cmd(a: &DecomposeArgs) -> Outcome {
    let spec = parse_spec(&a.spec)?;
    let tol = a.tol.resolve();
    let (g, seed) = match (&a.input, a.haar) {
        (Some(path), _) => (read_json::<UnitaryMatrix>(path)?, None),
        (None, true) => (
            haar_unitary_with(spec.n(), &mut rng_from_seed(a.seed)),
            Some(a.seed),
        ),
        (None, false) => return Err(Failure::io("need --in or --haar")),
    };
    if g.n() != spec.n() {
        return Err(Failure::io(format!(
            "input is {0}x{0}, spec has n = {1}",
            g.n(),
            spec.n()
        )));
    }
    let result = decompose_with(&g, &spec, &tol)?;
    let report = verify_with(&g, &spec, &result, &tol)?;
    emit(
        &DecomposeOutput {
            spec,
            seed,
            input: g,
            result,
        },
        &a.spec.out,
    )?;
    Ok(if report.passed {
        status::OK
    } else {
        status::VERIFY_FAILED
    })
}

fn verify_cmd(a: &VerifyArgs) -> Outcome {
    let tol = a.tol.resolve();
    let d: DecomposeOutput = read_json(&a.input)?;
    if d.input.n() != d.spec.n() {
        return Err(Failure::io("input size does not match spec"));
    }
    let report = verify_with(&d.input, &d.spec, &d.result, &tol)?;
    emit(&report, &a.out)?;
    Ok(if report.passed {
        status::OK
    } else {
        status::VERIFY_FAILED
    })
}

fn certify_cmd(a: &CertifyArgs) -> Outcome {
    let spec = parse_spec(&a.spec)?;
    let z = default_z();
    if a.exact {
        emit(&certify_exact(&spec, &z)?, &a.spec.out)?;
    } else {
        emit(
            &certify_nonsurjective_with(&spec, &z, &a.tol.resolve())?,
            &a.spec.out,
        )?;
    }
    Ok(status::OK)
}

fn sample_cmd(a: &SampleArgs) -> Outcome {
    if a.n == 0 {
        return Err(Failure::io("--n must be positive"));
    }
    let mut rng = rng_from_seed(a.seed);
    let ms: Vec<ComplexMatrix> = (0..a.samples)
        .map(|_| haar_unitary_with(a.n, &mut rng).into_matrix())
        .collect();
    if ms.len() == 1 {
        emit(&ms[0], &a.out)?;
    } else {
        emit(&ms, &a.out)?;
    }
    Ok(status::OK)
}

fn sweep_cmd(a: &SweepArgs) -> Outcome {
    if a.n < 2 {
        return Err(Failure::io("--n must be at least 2"));
    }
    let summary = sweep::run(a.n, a.samples, a.seed, &a.tol.resolve());
    emit(&summary, &a.out)?;
    Ok(if summary.failures == 0 {
        status::OK
    } else {
        status::VERIFY_FAILED
    })
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) if e.use_stderr() => {
            let _ = e.print();
            return ExitCode::from(status::IO);
        }
        Err(e) => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
    };
    let outcome = match &cli.command {
        Command::Classify(a) => classify_cmd(a),
        Command::Decompose(a) => decompose_cmd(a),
        Command::Verify(a) => verify_cmd(a),
        Command::Certify(a) => certify_cmd(a),
        Command::Sweep(a) => sweep_cmd(a),
        Command::Sample(a) => sample_cmd(a),
    };
    match outcome {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("cartan: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
