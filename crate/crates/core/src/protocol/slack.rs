use std::fmt;

use crate::codes::johnson_list_bound;
use crate::hash_families::HashFamilyDescriptor;

use super::Variant;

/// Inputs to the storage-bound slack formulas.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SlackParams {
    /// Alphabet size.
    pub q: u64,
    /// Number of hash functions.
    pub n: u64,
    /// List-decoding list size.
    pub list_size: u64,
    /// Number of provers; ignored by the single-prover formula.
    pub s: u64,
}

impl SlackParams {
    /// Parameters for `fam` with the Johnson list size `2 sum q_i`.
    pub fn for_family(fam: &HashFamilyDescriptor, s: u64) -> Self {
        SlackParams { q: fam.max_alphabet(), n: fam.n() as u64, list_size: johnson_list_bound(fam), s }
    }
}

/// Everything subtracted from `C(x)` in a storage bound, apart from the
/// constant `c0` which stays symbolic.
#[derive(Debug, Clone, PartialEq)]
pub struct SlackReport {
    pub variant: Variant,
    pub params: SlackParams,
    /// Numeric part of the slack, in bits.
    pub bits: f64,
    pub formula: &'static str,
}

impl fmt::Display for SlackReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "f(x) = C(x) - [{}] = C(x) - {:.2} - c0 bits", self.formula, self.bits)
    }
}

/// Slack of the storage bound for each protocol:
///
/// * single: `log(q L n^3) + 2 log log(q n)`
/// * trivial: `s + log(s^2 q L^s n^4) + 2 log log(q n)`
/// * linear, rs-parity: `s + log(s^2 q L n^4) + 2 log log(q n)`
///
/// Logarithms are base 2.
pub fn storage_bound_slack(variant: Variant, params: SlackParams) -> SlackReport {
    let lg = |v: f64| v.log2();
    let q = params.q as f64;
    let n = params.n as f64;
    let l = params.list_size as f64;
    let s = params.s as f64;
    let loglog = 2.0 * lg(lg(q * n));
    let (bits, formula) = match variant {
        Variant::Single => (lg(q) + lg(l) + 3.0 * lg(n) + loglog, "log(qLn^3) + 2 log log(qn) + c0"),
        Variant::Trivial => (
            s + 2.0 * lg(s) + lg(q) + s * lg(l) + 4.0 * lg(n) + loglog,
            "s + log(s^2 q L^s n^4) + 2 log log(qn) + c0",
        ),
        Variant::Linear | Variant::RsParity => (
            s + 2.0 * lg(s) + lg(q) + lg(l) + 4.0 * lg(n) + loglog,
            "s + log(s^2 q L n^4) + 2 log log(qn) + c0",
        ),
    };
    SlackReport { variant, params, bits, formula }
}
