//! `tiltcert`: exact tilting, positivity certificates, separation witnesses,
//! factorization and tilt verification from the command line.
//!
//! Results go to standard output as JSON (exit 0). Domain errors print
//! `{"error": {"kind", "message"}}` to standard output (exit 1); usage errors
//! go to standard error (exit 2).

use std::fmt::Debug;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Value};
use tiltcert_core::positivity::classify;
use tiltcert_core::rational::{format_rational, parse_rational};
use tiltcert_core::{
    approx_23, enumerate_p_factorizations, extend_map, factor_real, interval_orbit, polya_exponent, separate,
    separate_dense, tilt, tilt_measure, verify_is_tilting, EndoError, EndoTable, GridMeasure, Poly, Rational,
};

#[derive(Parser)]
#[command(name = "tiltcert", version, about = "Exact tilting of finitely supported measures")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

/// Inputs are inline text (`1/2 + 1/2*x`), inline JSON, or a path to a file
/// holding either.
#[derive(Subcommand)]
enum Command {
    /// Tilt a polynomial, p(x) -> p(g x) / p(g), or a grid measure.
    ///
    /// For a grid measure `{"denom", "offset", "masses"}` the parameter acts
    /// per grid step: the mass at (z + k)/n is multiplied by g^k, so g plays
    /// the role of e^(-beta/n).
    Tilt {
        #[arg(long, value_parser = parse_rational)]
        gamma: Rational,
        #[command(flatten)]
        input: Input,
    },
    /// Classify as P(N), M(N) or neither, with the count of positive roots.
    Member {
        #[command(flatten)]
        input: Input,
    },
    /// Smallest n with q (x + gamma)^n coefficientwise non-negative.
    Certify {
        #[arg(long, value_parser = parse_rational, default_value = "1")]
        gamma: Rational,
        #[arg(long, default_value_t = 1000)]
        cap: usize,
        #[command(flatten)]
        input: Input,
    },
    /// Witness q with p q non-negative and p' q having a negative coefficient.
    Separate {
        p: String,
        p_prime: String,
        /// Round the witness onto denominators at most N.
        #[arg(long)]
        denom_cap: Option<u64>,
    },
    /// Factor into x + b and x^2 - a gamma x + gamma^2 pieces.
    Factor {
        #[arg(long, default_value_t = 1e-12)]
        precision: f64,
        #[command(flatten)]
        input: Input,
    },
    /// All factorizations into P(N)-irreducible factors with rational coefficients.
    Factorizations {
        /// Largest degree accepted.
        #[arg(long, default_value_t = 40)]
        cap: usize,
        #[command(flatten)]
        input: Input,
    },
    /// Decide whether a table [{"from", "to"}, ...] is a tilt; prints its parameter.
    Verify {
        table: String,
        /// JSON list of polynomials that must be in the table.
        #[arg(long)]
        generators: Option<PathBuf>,
    },
    /// Steps of x -> x^2 - 2 until the orbit of a enters [-1, 1].
    Orbit {
        #[arg(value_parser = parse_rational, allow_hyphen_values = true)]
        a: Rational,
    },
    /// (m, n) with |2^m 3^n - y| <= eps y and |m| + |n| minimal.
    Approx23 { y: f64, eps: f64 },
    /// Image of a polynomial under the map extended from a table.
    Extend {
        table: String,
        #[command(flatten)]
        input: Input,
    },
}

#[derive(clap::Args)]
struct Input {
    /// Inline input or path to a file.
    #[arg(allow_hyphen_values = true, required_unless_present = "file")]
    value: Option<String>,
    /// Read the input from a file.
    #[arg(long = "in", value_name = "PATH", conflicts_with = "value")]
    file: Option<PathBuf>,
}

impl Input {
    fn text(&self) -> Result<String, Failure> {
        match (&self.value, &self.file) {
            (_, Some(path)) => read(path),
            (Some(v), None) => resolve(v),
            (None, None) => Err(Failure::Usage("missing input".into())),
        }
    }
}

enum Failure {
    Usage(String),
    Domain { kind: String, message: String },
}

impl Failure {
    fn domain<E: Debug + std::fmt::Display>(e: E) -> Self {
        Failure::Domain {
            kind: kind_of(&e),
            message: e.to_string(),
        }
    }
}

/// Snake-case name of an error variant, e.g. `CapTooSmall` -> `cap_too_small`.
fn kind_of<E: Debug>(e: &E) -> String {
    let debug = format!("{e:?}");
    let name = debug.split(|c: char| !c.is_alphanumeric()).next().unwrap_or("error");
    let mut out = String::new();
    for (i, ch) in name.chars().enumerate() {
        if ch.is_uppercase() {
            if i > 0 {
                out.push('_');
            }
            out.extend(ch.to_lowercase());
        } else {
            out.push(ch);
        }
    }
    out
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))
}

/// A positional argument naming an existing file is read; anything else is inline.
fn resolve(value: &str) -> Result<String, Failure> {
    let path = Path::new(value);
    if path.is_file() {
        read(path)
    } else {
        Ok(value.to_string())
    }
}

fn poly(text: &str) -> Result<Poly, Failure> {
    Poly::parse_any(text).map_err(|e| Failure::Usage(e.to_string()))
}

fn json_input<T: serde::de::DeserializeOwned>(text: &str, what: &str) -> Result<T, Failure> {
    serde_json::from_str(text).map_err(|e| Failure::Usage(format!("invalid {what}: {e}")))
}

fn to_json<T: Serialize>(value: &T) -> Value {
    serde_json::to_value(value).expect("library types serialize")
}

#[derive(Serialize)]
struct SeparationOutput {
    q: Poly,
    neg_index: usize,
    p_q: Poly,
    p_prime_q: Poly,
}

fn run(command: Command) -> Result<Value, Failure> {
    match command {
        Command::Tilt { gamma, input } => {
            let text = input.text()?;
            if text.contains("\"denom\"") {
                let m: GridMeasure = json_input(&text, "grid measure")?;
                tilt_measure(&m, &gamma).map(|t| to_json(&t)).map_err(Failure::domain)
            } else {
                tilt(&poly(&text)?, &gamma)
                    .map(|t| to_json(&t))
                    .map_err(Failure::domain)
            }
        }
        Command::Member { input } => {
            let (class, roots) = classify(&poly(&input.text()?)?).map_err(Failure::domain)?;
            Ok(json!({ "class": class.label(), "positive_roots": roots }))
        }
        Command::Certify { gamma, cap, input } => {
            let q = poly(&input.text()?)?;
            polya_exponent(&q, &gamma, cap)
                .map(|c| to_json(&c))
                .map_err(Failure::domain)
        }
        Command::Separate { p, p_prime, denom_cap } => {
            let (p, p_prime) = (poly(&resolve(&p)?)?, poly(&resolve(&p_prime)?)?);
            let witness = match denom_cap {
                Some(cap) => separate_dense(&p, &p_prime, cap),
                None => separate(&p, &p_prime),
            }
            .map_err(Failure::domain)?;
            Ok(to_json(&SeparationOutput {
                p_q: p.mul(&witness.q),
                p_prime_q: p_prime.mul(&witness.q),
                q: witness.q,
                neg_index: witness.neg_index,
            }))
        }
        Command::Factor { precision, input } => {
            let p = poly(&input.text()?)?;
            factor_real(&p, precision).map(|f| to_json(&f)).map_err(Failure::domain)
        }
        Command::Factorizations { cap, input } => {
            let p = poly(&input.text()?)?;
            enumerate_p_factorizations(&p, cap)
                .map(|f| to_json(&f))
                .map_err(Failure::domain)
        }
        Command::Verify { table, generators } => {
            let table: EndoTable = json_input(&resolve(&table)?, "table")?;
            let generators: Vec<Poly> = match generators {
                Some(path) => json_input(&read(&path)?, "generators")?,
                None => Vec::new(),
            };
            match verify_is_tilting(&table, &generators) {
                Ok(gamma) => Ok(json!({ "gamma": format_rational(&gamma) })),
                Err(EndoError::Violated(v)) => Err(Failure::Domain {
                    kind: v.kind().to_string(),
                    message: v.to_string(),
                }),
                Err(e) => Err(Failure::domain(e)),
            }
        }
        Command::Orbit { a } => {
            let steps = interval_orbit(&a).map_err(Failure::domain)?;
            Ok(json!({ "a": format_rational(&a), "steps": steps }))
        }
        Command::Approx23 { y, eps } => {
            let (m, n) = approx_23(y, eps).map_err(Failure::domain)?;
            Ok(json!({ "m": m, "n": n }))
        }
        Command::Extend { table, input } => {
            let table: EndoTable = json_input(&resolve(&table)?, "table")?;
            let q = poly(&input.text()?)?;
            extend_map(&table, &q).map(|t| to_json(&t)).map_err(Failure::domain)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(value) => {
            println!("{value}");
            ExitCode::SUCCESS
        }
        Err(Failure::Domain { kind, message }) => {
            println!("{}", json!({ "error": { "kind": kind, "message": message } }));
            ExitCode::from(1)
        }
        Err(Failure::Usage(message)) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
    }
}
