use std::collections::HashSet;
use std::io::{self, Write};
use std::net::{TcpStream, ToSocketAddrs};
use std::sync::Mutex;
use std::thread;
use std::time::{Duration, Instant};

use sha2::{Digest as _, Sha256};

use crate::error::{Error, Result};
use crate::hash_families::{FamilyFingerprint, HashFamilyDescriptor};
use crate::protocol::{self, Digest, Response, Variant, Verdict};

use super::service::read_frame;
use super::session::{refusal_error, violation_error, VerifierSession, VerifierStep};
use super::wire::encode_message;

/// Carries one challenge to prover `i` (1-based) and brings back its answer.
/// Silence of any kind comes back as `Response::NoResponse`.
pub trait Transport: Sync {
    fn provers(&self) -> usize;
    fn query(&self, prover: usize, fingerprint: FamilyFingerprint, beta: u64) -> Result<Response>;
}

/// Queries every prover concurrently.
pub fn collect_responses<T: Transport + ?Sized>(
    transport: &T,
    fingerprint: FamilyFingerprint,
    beta: u64,
) -> Result<Vec<Response>> {
    thread::scope(|scope| {
        let handles: Vec<_> = (1..=transport.provers())
            .map(|i| scope.spawn(move || transport.query(i, fingerprint, beta)))
            .collect();
        handles.into_iter().map(|h| h.join().expect("query thread panicked")).collect()
    })
}

/// TCP transport: one connection per prover per audit.
#[derive(Debug, Clone)]
pub struct TcpTransport {
    addrs: Vec<String>,
    timeout: Duration,
}

impl TcpTransport {
    pub fn new(addrs: Vec<String>, timeout: Duration) -> Self {
        TcpTransport { addrs, timeout }
    }

    fn session(&self, prover: usize, stream: &mut TcpStream, fingerprint: FamilyFingerprint, beta: u64) -> Result<Response> {
        let deadline = Instant::now() + self.timeout;
        let mut session = VerifierSession::new(fingerprint, beta);
        stream.write_all(&encode_message(&session.start()))?;
        loop {
            let left = deadline.saturating_duration_since(Instant::now());
            if left.is_zero() {
                return Ok(Response::NoResponse);
            }
            stream.set_read_timeout(Some(left))?;
            let m = match read_frame(stream) {
                Ok(Some(m)) => m,
                Ok(None) => return Ok(Response::NoResponse),
                Err(Error::Io(_)) => return Ok(Response::NoResponse),
                Err(e) => return Err(e),
            };
            match session.on_message(m) {
                VerifierStep::Send(next) => stream.write_all(&encode_message(&next))?,
                VerifierStep::Finished(r) => return Ok(r),
                VerifierStep::Refused(code) => return Err(refusal_error(prover, code)),
                VerifierStep::Violation(err) => {
                    let _ = stream.write_all(&encode_message(&err));
                    return violation_error(prover);
                }
            }
        }
    }
}

fn silent_io(e: &io::Error) -> bool {
    !matches!(e.kind(), io::ErrorKind::InvalidInput)
}

impl Transport for TcpTransport {
    fn provers(&self) -> usize {
        self.addrs.len()
    }

    fn query(&self, prover: usize, fingerprint: FamilyFingerprint, beta: u64) -> Result<Response> {
        let addr = &self.addrs[prover - 1];
        let resolved: Vec<_> = addr
            .to_socket_addrs()
            .map_err(|e| Error::Usage(format!("bad address {addr}: {e}")))?
            .collect();
        let Some(sock) = resolved.first() else {
            return Err(Error::Usage(format!("address {addr} resolves to nothing")));
        };
        // Refused, unreachable or slow to connect all count as no response.
        let mut stream = match TcpStream::connect_timeout(sock, self.timeout) {
            Ok(s) => s,
            Err(e) if silent_io(&e) => return Ok(Response::NoResponse),
            Err(e) => return Err(e.into()),
        };
        let _ = stream.set_nodelay(true);
        match self.session(prover, &mut stream, fingerprint, beta) {
            Err(Error::Io(_)) => Ok(Response::NoResponse),
            other => other,
        }
    }
}

/// The verifier side. Remembers which digests it has spent, since each one
/// carries a single challenge.
#[derive(Debug, Default)]
pub struct VerifierClient {
    spent: Mutex<HashSet<[u8; 32]>>,
}

impl VerifierClient {
    pub fn new() -> Self {
        VerifierClient::default()
    }

    /// Audits the provers behind `transport` with `digest`, which was made
    /// under `fam` (the chunk family for the trivial variant).
    pub fn audit<T: Transport + ?Sized>(&self, transport: &T, fam: &HashFamilyDescriptor, digest: &Digest) -> Result<Verdict> {
        if fam.fingerprint() != digest.fingerprint {
            return Err(Error::Protocol("digest was made under a different family".into()));
        }
        let expected = match digest.variant {
            Variant::Single => Some(1),
            Variant::Trivial => Some(digest.gammas.len()),
            Variant::Linear | Variant::RsParity => None,
        };
        if let Some(s) = expected.filter(|&s| s != transport.provers()) {
            return Err(Error::Usage(format!("{} digest needs {s} provers, got {}", digest.variant, transport.provers())));
        }
        let id: [u8; 32] = Sha256::digest(digest.to_bytes()).into();
        if !self.spent.lock().expect("spent set poisoned").insert(id) {
            return Err(Error::Usage("digest already used; preprocess a fresh one".into()));
        }
        let responses = collect_responses(transport, digest.fingerprint, digest.beta)?;
        protocol::verify(fam, digest, &responses)
    }
}

/// One-shot audit over TCP.
pub fn run_verifier_client(
    client: &VerifierClient,
    addrs: &[String],
    fam: &HashFamilyDescriptor,
    digest: &Digest,
    timeout: Duration,
) -> Result<Verdict> {
    client.audit(&TcpTransport::new(addrs.to_vec(), timeout), fam, digest)
}
