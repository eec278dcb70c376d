use std::io::{self, Read, Write};
use std::net::{Shutdown, TcpListener, TcpStream};
use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};
use std::sync::Arc;
use std::thread::{self, JoinHandle};
use std::time::Duration;

use crate::adversary::{ProverStore, SilenceMode};
use crate::error::{Error, Result};
use crate::protocol::Response;
use crate::rng::{trial_rng, Rng};

use super::session::{ProverSession, ProverStep};
use super::wire::{decode_message, encode_message, error_code, frame_len, Decoded, WireMessage};

/// What the service does after one incoming message.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ServiceAction {
    Reply(WireMessage),
    /// Say nothing and wait for the verifier to hang up.
    Silent,
    /// Optionally send a final message, then close.
    Close(Option<WireMessage>),
}

/// A prover behind a transport: a store plus the randomness for its answers.
/// Connection `c` draws from the stream `(seed, c)`.
#[derive(Debug)]
pub struct ProverService {
    store: ProverStore,
    seed: u64,
    connections: AtomicU64,
}

impl ProverService {
    pub fn new(store: ProverStore, seed: u64) -> Self {
        ProverService { store, seed, connections: AtomicU64::new(0) }
    }

    pub fn store(&self) -> &ProverStore {
        &self.store
    }

    pub fn session(&self) -> ProverSession {
        let fam = self.store.family();
        ProverSession::new(fam.fingerprint(), fam.n() as u64)
    }

    pub(crate) fn connection_rng(&self) -> Rng {
        trial_rng(self.seed, self.connections.fetch_add(1, Ordering::Relaxed))
    }

    pub fn step(&self, session: &mut ProverSession, m: WireMessage, rng: &mut Rng) -> ServiceAction {
        match session.on_message(m) {
            ProverStep::Send(reply) => ServiceAction::Reply(reply),
            ProverStep::Abort(err) => ServiceAction::Close(Some(err)),
            ProverStep::Answer(beta) => match self.store.answer(beta, rng) {
                Response::Value(value) => ServiceAction::Close(Some(WireMessage::Response { value })),
                Response::NoResponse => match self.store.silence_mode() {
                    Some(SilenceMode::Timeout) => ServiceAction::Silent,
                    _ => ServiceAction::Close(Some(WireMessage::NoResponse)),
                },
            },
        }
    }

    /// Serves one session over a byte stream.
    pub fn serve_connection<S: Read + Write>(&self, stream: &mut S) -> Result<()> {
        let mut rng = self.connection_rng();
        let mut session = self.session();
        loop {
            let m = match read_frame(stream) {
                Ok(Some(m)) => m,
                Ok(None) => return Ok(()),
                Err(Error::Protocol(_)) => {
                    stream.write_all(&encode_message(&WireMessage::Error { code: error_code::MALFORMED_FRAME }))?;
                    return Ok(());
                }
                Err(e) => return Err(e),
            };
            match self.step(&mut session, m, &mut rng) {
                ServiceAction::Reply(r) => stream.write_all(&encode_message(&r))?,
                ServiceAction::Close(last) => {
                    if let Some(r) = last {
                        stream.write_all(&encode_message(&r))?;
                    }
                    stream.flush()?;
                    return Ok(());
                }
                ServiceAction::Silent => {
                    // Hold the line until the verifier gives up.
                    let mut sink = [0u8; 64];
                    while stream.read(&mut sink)? > 0 {}
                    return Ok(());
                }
            }
            stream.flush()?;
        }
    }
}

/// Reads one frame; `None` on a clean end of stream before any byte.
pub fn read_frame<R: Read>(r: &mut R) -> Result<Option<WireMessage>> {
    let mut ty = [0u8; 1];
    loop {
        match r.read(&mut ty) {
            Ok(0) => return Ok(None),
            Ok(_) => break,
            Err(e) if e.kind() == io::ErrorKind::Interrupted => continue,
            Err(e) => return Err(e.into()),
        }
    }
    let len = frame_len(ty[0]).ok_or_else(|| Error::Protocol(format!("unknown message type {:#04x}", ty[0])))?;
    let mut buf = vec![0u8; len];
    buf[0] = ty[0];
    r.read_exact(&mut buf[1..])?;
    match decode_message(&buf)? {
        Decoded::Frame(m, _) => Ok(Some(m)),
        Decoded::NeedMore(_) => unreachable!("buffer sized from the type byte"),
    }
}

/// A running TCP prover service.
#[derive(Debug)]
pub struct ServerHandle {
    addr: std::net::SocketAddr,
    stop: Arc<AtomicBool>,
    thread: Option<JoinHandle<()>>,
}

impl ServerHandle {
    pub fn local_addr(&self) -> std::net::SocketAddr {
        self.addr
    }

    /// Stops accepting and waits for the accept loop to exit. Sessions in
    /// flight finish on their own threads.
    pub fn shutdown(mut self) {
        self.stop_now();
    }

    /// Blocks for as long as the service runs.
    pub fn join(mut self) {
        if let Some(t) = self.thread.take() {
            let _ = t.join();
        }
    }

    fn stop_now(&mut self) {
        self.stop.store(true, Ordering::SeqCst);
        // Wake the blocking accept.
        let _ = TcpStream::connect(self.addr);
        if let Some(t) = self.thread.take() {
            let _ = t.join();
        }
    }
}

impl Drop for ServerHandle {
    fn drop(&mut self) {
        if self.thread.is_some() {
            self.stop_now();
        }
    }
}

/// Binds `addr` and serves each connection on its own thread. `idle_timeout`
/// bounds how long a session waits for the verifier's next message.
pub fn run_prover_service(addr: &str, service: ProverService, idle_timeout: Duration) -> Result<ServerHandle> {
    let listener = TcpListener::bind(addr)?;
    let local = listener.local_addr()?;
    let stop = Arc::new(AtomicBool::new(false));
    let service = Arc::new(service);
    let flag = stop.clone();
    let thread = thread::spawn(move || {
        for conn in listener.incoming() {
            if flag.load(Ordering::SeqCst) {
                break;
            }
            let Ok(mut stream) = conn else { continue };
            let service = service.clone();
            thread::spawn(move || {
                let _ = stream.set_read_timeout(Some(idle_timeout));
                let _ = stream.set_nodelay(true);
                let _ = service.serve_connection(&mut stream);
                let _ = stream.shutdown(Shutdown::Both);
            });
        }
    });
    Ok(ServerHandle { addr: local, stop, thread: Some(thread) })
}
