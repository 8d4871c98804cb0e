mod formats;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use formats::ParseError;
use nnrank::selftest::run_selftest;
use nnrank::{
    build_extension, nn_factor, polygon_from_points, verify_extension, verify_nn_factorization,
    Matrix, VerificationReport,
};

#[derive(Parser)]
#[command(
    name = "nnrank",
    version,
    about = "Exact nonnegative factorizations of rank-3 matrices"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Factor a nonnegative rank-3 matrix and write the certificate.
    Factor {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        output: PathBuf,
        /// Input matrix format; inferred from the extension when omitted.
        #[arg(long, value_enum)]
        format: Option<Format>,
    },
    /// Build an extended formulation of a convex polygon.
    Extend {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        output: PathBuf,
    },
    /// Re-verify a certificate against its matrix, or a formulation
    /// against its polygon.
    Verify {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        cert: PathBuf,
        #[arg(long, value_enum)]
        format: Option<Format>,
    },
    /// Run the seeded property suites.
    Selftest {
        #[arg(long, default_value_t = 200)]
        iterations: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Debug, thiserror::Error)]
enum Failure {
    #[error("{0}")]
    Parse(#[from] ParseError),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{0}")]
    Module(#[from] nnrank::Error),
    #[error("verification failed")]
    Verification,
}

impl Failure {
    fn exit_code(&self) -> u8 {
        match self {
            Failure::Parse(_) | Failure::Io { .. } => 2,
            Failure::Module(_) | Failure::Verification => 1,
        }
    }

    fn kind(&self) -> &'static str {
        match self {
            Failure::Parse(_) => "ParseError",
            Failure::Io { .. } => "IoError",
            Failure::Module(e) => e.kind(),
            Failure::Verification => "VerificationFailed",
        }
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|source| Failure::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn read_json(path: &Path) -> Result<Value, Failure> {
    serde_json::from_str(&read(path)?)
        .map_err(|e| ParseError(format!("{}: {e}", path.display())).into())
}

fn write_json(path: &Path, v: &Value) -> Result<(), Failure> {
    let mut text = serde_json::to_string_pretty(v).expect("JSON values serialize");
    text.push('\n');
    fs::write(path, text).map_err(|source| Failure::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn input_format(path: &Path, format: Option<Format>) -> Format {
    format.unwrap_or_else(|| match path.extension().and_then(|e| e.to_str()) {
        Some(ext) if ext.eq_ignore_ascii_case("csv") => Format::Csv,
        _ => Format::Json,
    })
}

fn read_matrix(path: &Path, format: Option<Format>) -> Result<Matrix, Failure> {
    let m = match input_format(path, format) {
        Format::Csv => formats::matrix_from_csv(&read(path)?)?,
        Format::Json => formats::matrix_from_json(&read_json(path)?, "matrix")?,
    };
    log::info!(
        "read {}x{} matrix from {}",
        m.rows(),
        m.cols(),
        path.display()
    );
    Ok(m)
}

fn finish(report: &VerificationReport) -> Result<(), Failure> {
    print!("{report}");
    if report.passed() {
        Ok(())
    } else {
        Err(Failure::Verification)
    }
}

fn run(cmd: Command) -> Result<(), Failure> {
    match cmd {
        Command::Factor {
            input,
            output,
            format,
        } => {
            let a = read_matrix(&input, format)?;
            let fact = nn_factor(&a)?;
            let report = verify_nn_factorization(&a, &fact);
            write_json(&output, &formats::certificate_to_json(&fact, Some(&report)))?;
            println!(
                "inner dimension {} (bound {}) for a {}x{} matrix",
                fact.inner_dim,
                fact.bound,
                a.rows(),
                a.cols()
            );
            finish(&report)
        }
        Command::Extend { input, output } => {
            let poly = polygon_from_points(&formats::points_from_json(&read_json(&input)?)?)?;
            let ef = build_extension(&poly)?;
            let report = verify_extension(&poly, &ef);
            write_json(&output, &formats::formulation_to_json(&ef, Some(&report)))?;
            println!("{} inequalities for a {}-gon", ef.k, poly.len());
            finish(&report)
        }
        Command::Verify {
            input,
            cert,
            format,
        } => {
            let claim = read_json(&cert)?;
            let is_formulation = claim.get("T").is_some();
            let report = if is_formulation {
                let poly = polygon_from_points(&formats::points_from_json(&read_json(&input)?)?)?;
                verify_extension(&poly, &formats::formulation_from_json(&claim)?)
            } else {
                let a = read_matrix(&input, format)?;
                verify_nn_factorization(&a, &formats::certificate_from_json(&claim)?)
            };
            finish(&report)
        }
        Command::Selftest { iterations, seed } => {
            let report = run_selftest(seed, iterations);
            print!("{report}");
            if report.passed() {
                Ok(())
            } else {
                Err(Failure::Verification)
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    env_logger::Builder::from_env(env_logger::Env::new().filter_or("NNF_LOG", "off")).init();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{}", json!({ "error": e.kind(), "message": e.to_string() }));
            ExitCode::from(e.exit_code())
        }
    }
}
