//! Sans-IO session state machines. They consume decoded messages and say
//! what to send next; the socket and loopback transports drive them.

use crate::error::{Error, Result};
use crate::hash_families::FamilyFingerprint;
use crate::protocol::Response;

use super::wire::{error_code, WireMessage, WIRE_VERSION};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Phase {
    /// Waiting for (prover) or on (verifier) the HELLO exchange.
    Hello,
    /// HELLO done; the single challenge is outstanding.
    Challenged,
    Done,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProverStep {
    Send(WireMessage),
    /// Answer challenge `beta`; the session is then done.
    Answer(u64),
    /// Send this error and close.
    Abort(WireMessage),
}

#[derive(Debug, Clone)]
pub struct ProverSession {
    fingerprint: FamilyFingerprint,
    n: u64,
    phase: Phase,
}

fn abort(code: u16) -> ProverStep {
    ProverStep::Abort(WireMessage::Error { code })
}

impl ProverSession {
    pub fn new(fingerprint: FamilyFingerprint, n: u64) -> Self {
        ProverSession { fingerprint, n, phase: Phase::Hello }
    }

    pub fn phase(&self) -> Phase {
        self.phase
    }

    pub fn on_message(&mut self, m: WireMessage) -> ProverStep {
        let step = match (self.phase, m) {
            (Phase::Hello, WireMessage::Hello { version, .. }) if version != WIRE_VERSION => {
                abort(error_code::VERSION_MISMATCH)
            }
            (Phase::Hello, WireMessage::Hello { fingerprint, .. }) if fingerprint != self.fingerprint => {
                abort(error_code::FINGERPRINT_MISMATCH)
            }
            (Phase::Hello, WireMessage::Hello { .. }) => {
                self.phase = Phase::Challenged;
                return ProverStep::Send(WireMessage::Hello { version: WIRE_VERSION, fingerprint: self.fingerprint });
            }
            (Phase::Challenged, WireMessage::Challenge { beta }) if (1..=self.n).contains(&beta) => {
                self.phase = Phase::Done;
                return ProverStep::Answer(beta);
            }
            (Phase::Challenged, WireMessage::Challenge { .. }) => abort(error_code::BAD_CHALLENGE),
            _ => abort(error_code::UNEXPECTED_MESSAGE),
        };
        self.phase = Phase::Done;
        step
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VerifierStep {
    Send(WireMessage),
    Finished(Response),
    /// The prover sent ERROR with this code.
    Refused(u16),
    /// The prover broke the message order; send this error and close.
    Violation(WireMessage),
}

#[derive(Debug, Clone)]
pub struct VerifierSession {
    fingerprint: FamilyFingerprint,
    beta: u64,
    phase: Phase,
}

impl VerifierSession {
    pub fn new(fingerprint: FamilyFingerprint, beta: u64) -> Self {
        VerifierSession { fingerprint, beta, phase: Phase::Hello }
    }

    pub fn phase(&self) -> Phase {
        self.phase
    }

    pub fn start(&self) -> WireMessage {
        WireMessage::Hello { version: WIRE_VERSION, fingerprint: self.fingerprint }
    }

    pub fn on_message(&mut self, m: WireMessage) -> VerifierStep {
        let step = match (self.phase, m) {
            (_, WireMessage::Error { code }) => VerifierStep::Refused(code),
            (Phase::Hello, WireMessage::Hello { version, fingerprint })
                if version == WIRE_VERSION && fingerprint == self.fingerprint =>
            {
                self.phase = Phase::Challenged;
                return VerifierStep::Send(WireMessage::Challenge { beta: self.beta });
            }
            (Phase::Challenged, WireMessage::Response { value }) => VerifierStep::Finished(Response::Value(value)),
            (Phase::Challenged, WireMessage::NoResponse) => VerifierStep::Finished(Response::NoResponse),
            _ => VerifierStep::Violation(WireMessage::Error { code: error_code::UNEXPECTED_MESSAGE }),
        };
        self.phase = Phase::Done;
        step
    }
}

pub(crate) fn refusal_error(prover: usize, code: u16) -> Error {
    let reason = match code {
        error_code::VERSION_MISMATCH => "protocol version mismatch",
        error_code::FINGERPRINT_MISMATCH => "family fingerprint mismatch",
        error_code::UNEXPECTED_MESSAGE => "unexpected message",
        error_code::BAD_CHALLENGE => "challenge out of range",
        error_code::MALFORMED_FRAME => "malformed frame",
        _ => "unknown error",
    };
    Error::Protocol(format!("prover {prover} refused the session: {reason} (code {code})"))
}

pub(crate) fn violation_error(prover: usize) -> Result<Response> {
    Err(Error::Protocol(format!("prover {prover} violated the message order")))
}

#[cfg(test)]
mod tests {
    use super::*;

    const FP: FamilyFingerprint = FamilyFingerprint([7; 32]);

    #[test]
    fn happy_path() {
        let mut v = VerifierSession::new(FP, 3);
        let mut p = ProverSession::new(FP, 5);
        let ProverStep::Send(echo) = p.on_message(v.start()) else { panic!() };
        let VerifierStep::Send(challenge) = v.on_message(echo) else { panic!() };
        assert_eq!(p.on_message(challenge), ProverStep::Answer(3));
        assert_eq!(v.on_message(WireMessage::Response { value: 9 }), VerifierStep::Finished(Response::Value(9)));
        assert_eq!((p.phase(), v.phase()), (Phase::Done, Phase::Done));
    }

    #[test]
    fn prover_rejections() {
        let other = WireMessage::Hello { version: WIRE_VERSION, fingerprint: FamilyFingerprint([8; 32]) };
        assert_eq!(ProverSession::new(FP, 5).on_message(other), abort(error_code::FINGERPRINT_MISMATCH));
        let old = WireMessage::Hello { version: 0, fingerprint: FP };
        assert_eq!(ProverSession::new(FP, 5).on_message(old), abort(error_code::VERSION_MISMATCH));
        assert_eq!(
            ProverSession::new(FP, 5).on_message(WireMessage::Challenge { beta: 1 }),
            abort(error_code::UNEXPECTED_MESSAGE)
        );
        let mut p = ProverSession::new(FP, 5);
        p.on_message(WireMessage::Hello { version: WIRE_VERSION, fingerprint: FP });
        assert_eq!(p.on_message(WireMessage::Challenge { beta: 6 }), abort(error_code::BAD_CHALLENGE));
        assert_eq!(p.phase(), Phase::Done);
    }

    #[test]
    fn verifier_rejections() {
        let mut v = VerifierSession::new(FP, 1);
        assert_eq!(v.on_message(WireMessage::Error { code: 2 }), VerifierStep::Refused(2));
        let mut v = VerifierSession::new(FP, 1);
        assert!(matches!(v.on_message(WireMessage::Response { value: 1 }), VerifierStep::Violation(_)));
    }
}
