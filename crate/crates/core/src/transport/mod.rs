//! Wire format and transports for running audits across a process boundary:
//! a TCP prover service, a TCP verifier client, and an in-process loopback
//! on a simulated clock.
//!
//! Every connection carries one session: HELLO both ways (the prover checks
//! the family fingerprint), then one CHALLENGE and its answer.

mod client;
mod loopback;
mod service;
mod session;
mod wire;

pub use client::{collect_responses, run_verifier_client, TcpTransport, Transport, VerifierClient};
pub use loopback::{Endpoint, LoopbackTransport};
pub use service::{read_frame, run_prover_service, ProverService, ServerHandle, ServiceAction};
pub use session::{Phase, ProverSession, ProverStep, VerifierSession, VerifierStep};
pub use wire::{
    decode_message, encode_message, error_code, frame_len, Decoded, WireMessage, WIRE_VERSION,
};

/// Environment variable read by the command line for the per-challenge timeout.
pub const TIMEOUT_ENV: &str = "STOREN_TIMEOUT_MS";
pub const DEFAULT_TIMEOUT_MS: u64 = 2_000;
