//! Batch command-line front end: key generation, encapsulation,
//! decapsulation, Monte Carlo failure-rate runs, and replays of the
//! embedded worked examples.
//!
//! Exit codes: 0 success, 2 usage, 3 file or format problem,
//! 4 cryptographic failure (invalid cryptogram, verification mismatch).

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;
use serde::Serialize;
use skew_goppa::goppa::CodeSpec;
use skew_goppa::kem::{self, Cryptogram, CryptogramSpec, Params, PublicKey, PublicKeySpec};
use skew_goppa::verify::VerifyReport;
use skew_goppa::{run_failure_trials, verify, wang_counterexample, Error, GoppaCode};

const EXIT_USAGE: u8 = 2;
const EXIT_FORMAT: u8 = 3;
const EXIT_CRYPTO: u8 = 4;

#[derive(Parser)]
#[command(
    name = "skew-goppa",
    version,
    about = "Skew Goppa code toolkit: keygen, encapsulation, decoding, failure simulation",
    after_help = "Exit codes: 0 success, 2 usage, 3 file/format, 4 cryptographic failure."
)]
struct Cli {
    /// Print every check line, not only failures and summaries.
    #[arg(short, long, global = true)]
    verbose: bool,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Generate a keypair, or list admissible parameters.
    Keygen(KeygenArgs),
    /// Encapsulate a fresh shared secret against a public key.
    Encap(EncapArgs),
    /// Decapsulate a cryptogram with the secret key.
    Decap(DecapArgs),
    /// Monte Carlo failure-rate run over random errors on a fresh code.
    Simulate(SimulateArgs),
    /// Replay every embedded worked example and parameter table.
    VerifyPaper,
    /// Replay the linearized-polynomial counterexample, check by check.
    VerifyAppendixA,
    /// List admissible (m, delta) pairs for a parameter set.
    Params(ParamsArgs),
}

/// The (n, t, p, d) quadruple every parameterized subcommand takes, plus
/// the optional tower choice. Omitting both --m and --s picks the first
/// admissible (m, delta) pair with s = delta.
#[derive(Args)]
struct ParamFlags {
    /// Code length.
    #[arg(long)]
    n: usize,
    /// Correction capability.
    #[arg(long)]
    t: usize,
    /// Field characteristic.
    #[arg(long)]
    p: u64,
    /// Alphabet degree: the code lives over F = F_{p^d}.
    #[arg(long)]
    d: u32,
    /// Tower degree: points and polynomials live over L = F_{p^{dm}}.
    #[arg(long)]
    m: Option<u32>,
    /// Automorphism exponent: sigma is the p^s-power Frobenius.
    #[arg(long)]
    s: Option<u32>,
}

#[derive(Args)]
struct KeygenArgs {
    #[command(flatten)]
    params: ParamFlags,
    /// RNG seed (keygen is deterministic in flags and seed).
    #[arg(long, required_unless_present = "list_params")]
    seed: Option<u64>,
    /// Print the admissible (m, delta) pairs instead of generating keys.
    #[arg(long)]
    list_params: bool,
    /// Public key output path.
    #[arg(long, default_value = "pk.json")]
    pk: PathBuf,
    /// Secret key output path.
    #[arg(long, default_value = "sk.json")]
    sk: PathBuf,
}

#[derive(Args)]
struct EncapArgs {
    /// Public key path.
    #[arg(long)]
    pk: PathBuf,
    /// RNG seed for the error vector.
    #[arg(long)]
    seed: u64,
    /// Cryptogram output path.
    #[arg(long, default_value = "cryptogram.json")]
    cryptogram: PathBuf,
    /// Shared secret output path (lowercase hex plus newline).
    #[arg(long, default_value = "secret.hex")]
    secret: PathBuf,
}

#[derive(Args)]
struct DecapArgs {
    /// Secret key path.
    #[arg(long)]
    sk: PathBuf,
    /// Public key path.
    #[arg(long)]
    pk: PathBuf,
    /// Cryptogram path.
    #[arg(long)]
    cryptogram: PathBuf,
    /// Optional shared secret output path; the secret always goes to stdout.
    #[arg(long)]
    secret: Option<PathBuf>,
}

#[derive(Args)]
struct SimulateArgs {
    #[command(flatten)]
    params: ParamFlags,
    /// Number of random-error trials.
    #[arg(long)]
    trials: u64,
    /// RNG seed; drives keygen and the per-trial streams.
    #[arg(long)]
    seed: u64,
    /// CSV output path; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ParamsArgs {
    /// Code length.
    #[arg(long)]
    n: usize,
    /// Correction capability.
    #[arg(long)]
    t: usize,
    /// Field characteristic.
    #[arg(long)]
    p: u64,
    /// Alphabet degree.
    #[arg(long)]
    d: u32,
}

enum CliError {
    Usage(String),
    Format(String),
    Crypto(String),
}

impl CliError {
    fn usage(msg: impl Into<String>) -> CliError {
        CliError::Usage(msg.into())
    }

    fn format(msg: impl Into<String>) -> CliError {
        CliError::Format(msg.into())
    }

    fn crypto(msg: impl Into<String>) -> CliError {
        CliError::Crypto(msg.into())
    }

    fn code(&self) -> u8 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Format(_) => EXIT_FORMAT,
            CliError::Crypto(_) => EXIT_CRYPTO,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Format(m) | CliError::Crypto(m) => m,
        }
    }
}

/// Parameter and construction errors are usage problems; serialization
/// errors are format problems; the rest are cryptographic failures.
fn map_core(err: Error) -> CliError {
    match &err {
        Error::InvalidParameter(_)
        | Error::NoAdmissibleParameters
        | Error::NotPrime(_)
        | Error::BadModulus { .. } => CliError::usage(err.to_string()),
        Error::Format(_) => CliError::format(err.to_string()),
        _ => CliError::crypto(err.to_string()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.cmd {
        Cmd::Keygen(a) => cmd_keygen(a),
        Cmd::Encap(a) => cmd_encap(a),
        Cmd::Decap(a) => cmd_decap(a),
        Cmd::Simulate(a) => cmd_simulate(a),
        Cmd::VerifyPaper => cmd_verify_paper(cli.verbose),
        Cmd::VerifyAppendixA => cmd_verify_appendix_a(),
        Cmd::Params(a) => print_pairs(a.n, a.t, a.p, a.d),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message());
            ExitCode::from(e.code())
        }
    }
}

/// Fill in (m, s) when omitted: the first admissible (m, delta) pair, with
/// s = delta (delta divides dm, so gcd(delta, dm) = delta realizes it).
fn resolve_params(f: &ParamFlags) -> Result<Params, CliError> {
    let (m, s) = match (f.m, f.s) {
        (Some(m), Some(s)) => (m, s),
        (None, None) => {
            let pairs = kem::search_parameters(f.n, f.t, f.p, f.d).map_err(map_core)?;
            let (m, delta) = pairs[0];
            (m, delta)
        }
        _ => return Err(CliError::usage("give both --m and --s, or neither")),
    };
    Params::new(f.n, f.t, f.p, f.d, m, s).map_err(map_core)
}

fn print_pairs(n: usize, t: usize, p: u64, d: u32) -> Result<(), CliError> {
    let pairs = kem::search_parameters(n, t, p, d).map_err(map_core)?;
    for (m, delta) in pairs {
        println!("m={m} delta={delta}");
    }
    Ok(())
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<(), CliError> {
    let body = serde_json::to_string_pretty(value)
        .map_err(|e| CliError::format(format!("{}: {e}", path.display())))?;
    fs::write(path, body + "\n")
        .map_err(|e| CliError::format(format!("{}: {e}", path.display())))
}

fn read_file(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::format(format!("{}: {e}", path.display())))
}

fn load_public_key(path: &Path) -> Result<PublicKey, CliError> {
    let body = read_file(path)?;
    let spec: PublicKeySpec = serde_json::from_str(&body)
        .map_err(|e| CliError::format(format!("{}: {e}", path.display())))?;
    PublicKey::from_spec(&spec).map_err(|e| CliError::format(e.to_string()))
}

fn load_secret_key(path: &Path) -> Result<GoppaCode, CliError> {
    let body = read_file(path)?;
    let spec: CodeSpec = serde_json::from_str(&body)
        .map_err(|e| CliError::format(format!("{}: {e}", path.display())))?;
    GoppaCode::from_spec(&spec).map_err(|e| CliError::format(e.to_string()))
}

fn cmd_keygen(a: KeygenArgs) -> Result<(), CliError> {
    if a.list_params {
        return print_pairs(a.params.n, a.params.t, a.params.p, a.params.d);
    }
    let params = resolve_params(&a.params)?;
    let seed = a.seed.expect("clap enforces --seed without --list-params");
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let (pk, sk) = kem::keygen(&params, &mut rng).map_err(map_core)?;
    write_json(&a.pk, &pk.to_spec())?;
    write_json(&a.sk, &sk.to_spec())?;
    eprintln!(
        "keygen: n={} t={} p={} d={} m={} s={} (delta={}, k={}); wrote {} and {}",
        params.n(),
        params.t(),
        params.p(),
        params.d(),
        params.m(),
        params.s(),
        params.delta(),
        params.k(),
        a.pk.display(),
        a.sk.display()
    );
    Ok(())
}

fn cmd_encap(a: EncapArgs) -> Result<(), CliError> {
    let pk = load_public_key(&a.pk)?;
    let mut rng = ChaCha12Rng::seed_from_u64(a.seed);
    let (c, ss) = kem::encap(&pk, &mut rng).map_err(map_core)?;
    write_json(&a.cryptogram, &c.to_spec(pk.tower()))?;
    fs::write(&a.secret, ss.to_hex() + "\n")
        .map_err(|e| CliError::format(format!("{}: {e}", a.secret.display())))?;
    eprintln!("encap: wrote {} and {}", a.cryptogram.display(), a.secret.display());
    Ok(())
}

fn cmd_decap(a: DecapArgs) -> Result<(), CliError> {
    let sk = load_secret_key(&a.sk)?;
    let pk = load_public_key(&a.pk)?;
    let body = read_file(&a.cryptogram)?;
    let spec: CryptogramSpec = serde_json::from_str(&body)
        .map_err(|e| CliError::format(format!("{}: {e}", a.cryptogram.display())))?;
    let c = Cryptogram::from_spec(pk.tower(), &spec)
        .map_err(|e| CliError::format(e.to_string()))?;
    let ss = kem::decap(&sk, &pk, &c).map_err(|err| match err {
        Error::InvalidCryptogram(_) | Error::Undecodable(_) => CliError::crypto(err.to_string()),
        other => CliError::format(other.to_string()),
    })?;
    println!("{}", ss.to_hex());
    if let Some(path) = &a.secret {
        fs::write(path, ss.to_hex() + "\n")
            .map_err(|e| CliError::format(format!("{}: {e}", path.display())))?;
    }
    Ok(())
}

fn cmd_simulate(a: SimulateArgs) -> Result<(), CliError> {
    let params = resolve_params(&a.params)?;
    let mut rng = ChaCha12Rng::seed_from_u64(a.seed);
    let (_pk, code) = kem::keygen(&params, &mut rng).map_err(map_core)?;
    let records = run_failure_trials(&code, a.trials, a.seed).map_err(map_core)?;

    let mut csv = String::from("trial,weight,alg2_failed,alg3_roots_added,certificate\n");
    for r in &records {
        csv.push_str(&format!(
            "{},{},{},{},{}\n",
            r.trial, r.weight, r.alg2_failed, r.alg3_roots_added, r.certificate
        ));
    }
    match &a.out {
        Some(path) => fs::write(path, csv)
            .map_err(|e| CliError::format(format!("{}: {e}", path.display())))?,
        None => print!("{csv}"),
    }

    let failures = records.iter().filter(|r| r.alg2_failed).count();
    eprintln!(
        "simulate: {} trials, {} truncated-pass failures, failure rate {:.6}",
        records.len(),
        failures,
        skew_goppa::failure_rate(&records)
    );
    Ok(())
}

fn print_report(r: &VerifyReport, verbose: bool) {
    if verbose {
        for c in &r.checks {
            println!("  {}: {}", c.label, if c.pass { "PASS" } else { "FAIL" });
        }
    }
    println!("{}: {}", r.name, if r.pass() { "PASS" } else { "FAIL" });
    for c in r.failures() {
        match &c.detail {
            Some(d) => println!("  {}: {d}", c.label),
            None => println!("  {}: mismatch", c.label),
        }
    }
}

fn cmd_verify_paper(verbose: bool) -> Result<(), CliError> {
    let reports = verify::all();
    for r in &reports {
        print_report(r, verbose);
    }
    if reports.iter().all(|r| r.pass()) {
        Ok(())
    } else {
        Err(CliError::crypto("verification failed"))
    }
}

fn cmd_verify_appendix_a() -> Result<(), CliError> {
    let rep = wang_counterexample();
    for c in &rep.checks {
        println!("{}: {}", c.label, if c.pass { "PASS" } else { "FAIL" });
    }
    if rep.all_pass() {
        Ok(())
    } else {
        Err(CliError::crypto("counterexample replay failed"))
    }
}
