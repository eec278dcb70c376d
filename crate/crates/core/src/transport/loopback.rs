use std::sync::Arc;

use crate::error::Result;
use crate::hash_families::FamilyFingerprint;
use crate::protocol::Response;

use super::client::Transport;
use super::service::{ProverService, ServiceAction};
use super::session::{refusal_error, violation_error, VerifierSession, VerifierStep};
use super::wire::{decode_message, encode_message, Decoded, WireMessage};

/// A prover reachable in-process.
#[derive(Debug, Clone)]
pub enum Endpoint {
    /// Answers after `latency_ms` simulated milliseconds.
    Up { service: Arc<ProverService>, latency_ms: u64 },
    /// Nothing listening: the connection is refused.
    Down,
}

impl Endpoint {
    pub fn up(service: ProverService) -> Self {
        Endpoint::Up { service: Arc::new(service), latency_ms: 0 }
    }
}

/// In-process transport on a simulated clock. Frames still go through the
/// wire encoding; a reply later than `timeout_ms`, or a silent prover, is an
/// erasure, with no real waiting.
#[derive(Debug, Clone)]
pub struct LoopbackTransport {
    endpoints: Vec<Endpoint>,
    timeout_ms: u64,
}

fn over_wire(m: WireMessage) -> WireMessage {
    match decode_message(&encode_message(&m)) {
        Ok(Decoded::Frame(back, _)) => back,
        other => unreachable!("encoded frame failed to decode: {other:?}"),
    }
}

impl LoopbackTransport {
    pub fn new(endpoints: Vec<Endpoint>, timeout_ms: u64) -> Self {
        LoopbackTransport { endpoints, timeout_ms }
    }
}

impl Transport for LoopbackTransport {
    fn provers(&self) -> usize {
        self.endpoints.len()
    }

    fn query(&self, prover: usize, fingerprint: FamilyFingerprint, beta: u64) -> Result<Response> {
        let Endpoint::Up { service, latency_ms } = &self.endpoints[prover - 1] else {
            return Ok(Response::NoResponse);
        };
        let mut rng = service.connection_rng();
        let mut verifier = VerifierSession::new(fingerprint, beta);
        let mut prover_side = service.session();
        let mut outgoing = verifier.start();
        loop {
            let incoming = match service.step(&mut prover_side, over_wire(outgoing), &mut rng) {
                ServiceAction::Reply(m) | ServiceAction::Close(Some(m)) => over_wire(m),
                ServiceAction::Silent | ServiceAction::Close(None) => return Ok(Response::NoResponse),
            };
            match verifier.on_message(incoming) {
                VerifierStep::Send(next) => outgoing = next,
                VerifierStep::Finished(r) if *latency_ms <= self.timeout_ms => return Ok(r),
                VerifierStep::Finished(_) => return Ok(Response::NoResponse),
                VerifierStep::Refused(code) => return Err(refusal_error(prover, code)),
                VerifierStep::Violation(_) => return violation_error(prover),
            }
        }
    }
}
