use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::time::Duration;

use storen_core::adversary::{build_store_for, ExperimentSpec, ProverStrategy, SweepRow};
use storen_core::certify::certify_all;
use storen_core::protocol::{
    multi_linear_preprocess, multi_rs_preprocess, multi_trivial_preprocess, resource_bound_bits, single_preprocess,
    storage_bound_slack, ChunkPlan, SlackParams, PACKED_HEADER_BITS,
};
use storen_core::transport::{run_prover_service, run_verifier_client, ProverService, VerifierClient};
use storen_core::{derive_family, Digest, Error, FamilyKind, HashFamilyDescriptor, Outcome, Result, Variant};

use crate::data::{self, Prepared};

fn read_descriptor(path: &Path) -> Result<HashFamilyDescriptor> {
    HashFamilyDescriptor::decode(&fs::read(path)?)
}

fn describe_alphabet(fam: &HashFamilyDescriptor) -> String {
    match fam.primes() {
        None => format!("q: {}", fam.max_alphabet()),
        Some(p) if p.len() <= 12 => {
            format!("primes: {}", p.iter().map(|p| p.to_string()).collect::<Vec<_>>().join(", "))
        }
        Some(p) => format!("primes: 2, 3, 5, ..., {} (the first {})", p[p.len() - 1], p.len()),
    }
}

pub fn derive(kind: FamilyKind, k: usize, epsilon: f64, out: &Path) -> Result<u8> {
    let fam = derive_family(kind, k, epsilon)?;
    let bytes = fam.encode();
    fs::write(out, &bytes)?;
    println!("kind: {}", fam.kind());
    println!("k: {}", fam.k());
    println!("n: {}", fam.n());
    println!("{}", describe_alphabet(&fam));
    println!("epsilon_actual: {}", fam.epsilon_actual());
    println!("fingerprint: {}", fam.fingerprint());
    println!("wrote {} ({} bytes)", out.display(), bytes.len());
    Ok(0)
}

#[allow(clippy::too_many_arguments)]
pub fn preprocess(
    descriptor: &Path,
    data_path: &Path,
    variant: Variant,
    s: usize,
    r: usize,
    e: usize,
    seed: u64,
    out: &Path,
) -> Result<u8> {
    let fam = read_descriptor(descriptor)?;
    let plan = ChunkPlan::new(fam.k(), s)?;
    if variant != Variant::RsParity && r + e > 0 {
        return Err(Error::Usage(format!("--r and --e only apply to rs-parity, not {variant}")));
    }
    let bytes = fs::read(data_path)?;
    let (digest, digest_family) = match (variant, data::prepare(&fam, &bytes, variant, s)?) {
        (Variant::Trivial, Prepared::Chunks(cf, chunks)) => (multi_trivial_preprocess(&cf, &chunks, &plan, seed)?, cf),
        (Variant::Single, Prepared::Whole(x)) => (single_preprocess(&fam, &x, seed)?, fam.clone()),
        (Variant::Linear, Prepared::Whole(x)) => (multi_linear_preprocess(&fam, &x, &plan, seed)?, fam.clone()),
        (Variant::RsParity, Prepared::Whole(x)) => (multi_rs_preprocess(&fam, &x, &plan, r, e, seed)?, fam.clone()),
        _ => unreachable!("prepare splits exactly for the trivial variant"),
    };
    let file = digest.to_bytes();
    fs::write(out, &file)?;

    let packed = digest.pack(&digest_family)?;
    let bound = resource_bound_bits(variant, &digest_family, s, r, e);
    let count = match variant {
        Variant::Single | Variant::Linear => "1".to_string(),
        Variant::Trivial => format!("s={s}"),
        Variant::RsParity => format!("2r+e={}", 2 * r + e),
    };
    println!("variant: {variant} (s={s}, r={r}, e={e})");
    println!("challenge: beta = {} of n = {}", digest.beta, fam.n());
    println!("digest file: {} ({} bytes)", out.display(), file.len());
    println!(
        "packed digest: {} bits = {PACKED_HEADER_BITS} header + {} payload",
        packed.total_bits,
        packed.payload_bits()
    );
    println!(
        "resource bound: ceil(log2 n) + ({count}) * ceil(log2 q) = {} + {} * {} = {bound} bits [{}]",
        storen_core::bits::ceil_log2(fam.n() as u64),
        digest.gammas.len(),
        digest_family.symbol_bits(),
        if packed.payload_bits() == bound { "match" } else { "MISMATCH" }
    );
    println!("storage bound: {}", storage_bound_slack(variant, SlackParams::for_family(&fam, s as u64)));
    Ok(0)
}

fn spent_marker(digest: &Path) -> PathBuf {
    let mut p = digest.as_os_str().to_owned();
    p.push(".spent");
    PathBuf::from(p)
}

pub fn audit(descriptor: &Path, digest_path: &Path, providers: &[String], timeout_ms: u64) -> Result<u8> {
    let fam = read_descriptor(descriptor)?;
    let digest = Digest::from_bytes(&fs::read(digest_path)?)?;
    let fam = match digest.variant {
        Variant::Trivial => fam.chunk_family(providers.len())?,
        _ => fam,
    };
    if fam.fingerprint() != digest.fingerprint {
        return Err(Error::Usage("digest was not made under this descriptor".into()));
    }
    let marker = spent_marker(digest_path);
    if marker.exists() {
        return Err(Error::Usage(format!("digest already used (found {}); preprocess a fresh one", marker.display())));
    }
    fs::write(&marker, b"spent\n")?;
    let verdict = run_verifier_client(&VerifierClient::new(), providers, &fam, &digest, Duration::from_millis(timeout_ms))?;
    println!("{verdict}");
    Ok(match verdict.outcome {
        Outcome::Accepted => 0,
        Outcome::Rejected => 1,
        Outcome::Undecidable => 3,
    })
}

#[allow(clippy::too_many_arguments)]
pub fn serve(
    descriptor: &Path,
    data_path: &Path,
    strategy: &str,
    bind: &str,
    variant: Variant,
    s: usize,
    prover: usize,
    seed: u64,
    timeout_ms: u64,
) -> Result<u8> {
    let fam = read_descriptor(descriptor)?;
    let strategy = ProverStrategy::parse(strategy)?;
    let assigned = data::assignment(&fam, &fs::read(data_path)?, variant, s, prover)?;
    let store = build_store_for(&strategy, prover, &assigned.family, &assigned.message)?;
    let retained = store.retained_bits();
    let handle = run_prover_service(bind, ProverService::new(store, seed), Duration::from_millis(timeout_ms))?;
    println!(
        "listening on {} (prover {prover} of {s}, {variant}, strategy {strategy}, retained {retained} bits)",
        handle.local_addr()
    );
    std::io::stdout().flush()?;
    handle.join();
    Ok(0)
}

pub fn experiment(config: &Path, out: &Path) -> Result<u8> {
    let spec = ExperimentSpec::parse(&fs::read_to_string(config)?)?;
    let rows = spec.run()?;
    let csv = SweepRow::to_csv(&rows);
    fs::write(out, &csv)?;
    print!("{csv}");
    eprintln!("prng={} seed={} wrote {}", storen_core::rng::PRNG_ALGORITHM, spec.seed, out.display());
    Ok(0)
}

pub fn certify(sabotage: bool) -> Result<u8> {
    let rows = certify_all(sabotage)?;
    for row in &rows {
        println!("{row}");
    }
    let failed = rows.iter().filter(|r| !r.passed).count();
    if failed == 0 {
        println!("all {} checks passed", rows.len());
        Ok(0)
    } else {
        println!("{failed} of {} checks failed", rows.len());
        Ok(1)
    }
}
