use crate::error::{Error, Result};
use crate::hash_families::FamilyFingerprint;

pub const WIRE_VERSION: u16 = 1;

pub const TYPE_HELLO: u8 = 0x00;
pub const TYPE_CHALLENGE: u8 = 0x01;
pub const TYPE_RESPONSE: u8 = 0x02;
pub const TYPE_NO_RESPONSE: u8 = 0x03;
pub const TYPE_ERROR: u8 = 0x7F;

/// Codes carried by `ERROR`.
pub mod error_code {
    pub const VERSION_MISMATCH: u16 = 1;
    pub const FINGERPRINT_MISMATCH: u16 = 2;
    pub const UNEXPECTED_MESSAGE: u16 = 3;
    pub const BAD_CHALLENGE: u16 = 4;
    pub const MALFORMED_FRAME: u16 = 5;
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WireMessage {
    Hello { version: u16, fingerprint: FamilyFingerprint },
    Challenge { beta: u64 },
    Response { value: u64 },
    NoResponse,
    Error { code: u16 },
}

/// Outcome of decoding from the front of a buffer.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Decoded {
    /// A whole frame and how many bytes it used.
    Frame(WireMessage, usize),
    /// The buffer holds a prefix; at least this many more bytes are needed.
    NeedMore(usize),
}

/// Total frame length implied by a type byte.
pub fn frame_len(type_byte: u8) -> Option<usize> {
    match type_byte {
        TYPE_HELLO => Some(1 + 2 + 32),
        TYPE_CHALLENGE | TYPE_RESPONSE => Some(1 + 8),
        TYPE_NO_RESPONSE => Some(1),
        TYPE_ERROR => Some(1 + 2),
        _ => None,
    }
}

pub fn encode_message(m: &WireMessage) -> Vec<u8> {
    let mut out = Vec::with_capacity(35);
    match m {
        WireMessage::Hello { version, fingerprint } => {
            out.push(TYPE_HELLO);
            out.extend_from_slice(&version.to_le_bytes());
            out.extend_from_slice(&fingerprint.0);
        }
        WireMessage::Challenge { beta } => {
            out.push(TYPE_CHALLENGE);
            out.extend_from_slice(&beta.to_le_bytes());
        }
        WireMessage::Response { value } => {
            out.push(TYPE_RESPONSE);
            out.extend_from_slice(&value.to_le_bytes());
        }
        WireMessage::NoResponse => out.push(TYPE_NO_RESPONSE),
        WireMessage::Error { code } => {
            out.push(TYPE_ERROR);
            out.extend_from_slice(&code.to_le_bytes());
        }
    }
    out
}

pub fn decode_message(bytes: &[u8]) -> Result<Decoded> {
    let Some(&ty) = bytes.first() else {
        return Ok(Decoded::NeedMore(1));
    };
    let len = frame_len(ty).ok_or_else(|| Error::Protocol(format!("unknown message type {ty:#04x}")))?;
    if bytes.len() < len {
        return Ok(Decoded::NeedMore(len - bytes.len()));
    }
    let body = &bytes[1..len];
    let u64_at = |b: &[u8]| u64::from_le_bytes(b[..8].try_into().expect("8 bytes"));
    let u16_at = |b: &[u8]| u16::from_le_bytes([b[0], b[1]]);
    let m = match ty {
        TYPE_HELLO => {
            let mut fp = [0u8; 32];
            fp.copy_from_slice(&body[2..34]);
            WireMessage::Hello { version: u16_at(body), fingerprint: FamilyFingerprint(fp) }
        }
        TYPE_CHALLENGE => WireMessage::Challenge { beta: u64_at(body) },
        TYPE_RESPONSE => WireMessage::Response { value: u64_at(body) },
        TYPE_NO_RESPONSE => WireMessage::NoResponse,
        _ => WireMessage::Error { code: u16_at(body) },
    };
    Ok(Decoded::Frame(m, len))
}
