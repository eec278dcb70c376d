//! `storen`: derive hash families, preprocess digests, serve provers, run
//! audits and adversary experiments, and print certification tables.

mod commands;
mod data;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use storen_core::{Error, FamilyKind, Variant};

#[derive(Parser, Debug)]
#[command(name = "storen", version, about = "Storage-enforcement audits over almost-universal hash families")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Derive a hash family for messages of length k and write its descriptor.
    Derive {
        #[arg(long, value_parser = parse_kind)]
        kind: FamilyKind,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        epsilon: f64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Draw a challenge and write the verifier's digest for a data file.
    Preprocess {
        #[arg(long)]
        descriptor: PathBuf,
        #[arg(long)]
        data: PathBuf,
        #[arg(long, default_value = "single", value_parser = parse_variant)]
        variant: Variant,
        /// Number of provers.
        #[arg(long, default_value_t = 1)]
        s: usize,
        /// Cheaters the rs-parity digest can identify.
        #[arg(long, default_value_t = 0)]
        r: usize,
        /// Silent provers the rs-parity digest can tolerate.
        #[arg(long, default_value_t = 0)]
        e: usize,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Audit provers with a digest. Exit 0 accepted, 1 rejected, 3 undecidable.
    Audit {
        #[arg(long)]
        descriptor: PathBuf,
        #[arg(long)]
        digest: PathBuf,
        /// Comma-separated host:port, one per prover in order.
        #[arg(long, value_delimiter = ',', required = true)]
        providers: Vec<String>,
        /// Per-challenge timeout in milliseconds.
        #[arg(long, env = "STOREN_TIMEOUT_MS", default_value_t = storen_core::transport::DEFAULT_TIMEOUT_MS)]
        timeout: u64,
    },
    /// Serve one prover over TCP until killed.
    Serve {
        #[arg(long)]
        descriptor: PathBuf,
        #[arg(long)]
        data: PathBuf,
        /// honest, partial:T, raw:T, uniform, zero, silent, no-response, flaky:P
        #[arg(long, default_value = "honest")]
        strategy: String,
        #[arg(long, default_value = "127.0.0.1:0")]
        bind: String,
        #[arg(long, default_value = "single", value_parser = parse_variant)]
        variant: Variant,
        #[arg(long, default_value_t = 1)]
        s: usize,
        /// Which prover this is, 1-based.
        #[arg(long, default_value_t = 1)]
        prover: usize,
        /// Seed for randomized strategies.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// How long a session waits for the verifier, in milliseconds.
        #[arg(long, env = "STOREN_TIMEOUT_MS", default_value_t = storen_core::transport::DEFAULT_TIMEOUT_MS)]
        timeout: u64,
    },
    /// Run an adversary experiment file and write the CSV table.
    Experiment {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Run the exhaustive small-instance checks and print a pass/fail table.
    Certify {
        #[arg(long, hide = true)]
        sabotage: bool,
    },
}

fn parse_kind(s: &str) -> Result<FamilyKind, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_variant(s: &str) -> Result<Variant, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn error_exit(e: &Error) -> u8 {
    match e {
        Error::Io(_) | Error::Protocol(_) => 4,
        _ => 2,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Derive { kind, k, epsilon, out } => commands::derive(kind, k, epsilon, &out),
        Command::Preprocess { descriptor, data, variant, s, r, e, seed, out } => {
            commands::preprocess(&descriptor, &data, variant, s, r, e, seed, &out)
        }
        Command::Audit { descriptor, digest, providers, timeout } => {
            commands::audit(&descriptor, &digest, &providers, timeout)
        }
        Command::Serve { descriptor, data, strategy, bind, variant, s, prover, seed, timeout } => {
            commands::serve(&descriptor, &data, &strategy, &bind, variant, s, prover, seed, timeout)
        }
        Command::Experiment { config, out } => commands::experiment(&config, &out),
        Command::Certify { sabotage } => commands::certify(sabotage),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("storen: {e}");
            ExitCode::from(error_exit(&e))
        }
    }
}
