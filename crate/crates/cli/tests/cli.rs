use std::io::{BufRead, BufReader};
use std::path::{Path, PathBuf};
use std::process::{Child, Command, Output, Stdio};

use tempfile::TempDir;

const BIN: &str = env!("CARGO_BIN_EXE_storen");

fn run(args: &[&str]) -> Output {
    Command::new(BIN).args(args).env_remove("STOREN_TIMEOUT_MS").output().expect("run storen")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn path(dir: &TempDir, name: &str) -> PathBuf {
    dir.path().join(name)
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

fn derive(dir: &TempDir, kind: &str, k: &str, eps: &str) -> PathBuf {
    let out = path(dir, &format!("{kind}-{k}.fam"));
    let o = run(&["derive", "--kind", kind, "--k", k, "--epsilon", eps, "--out", p(&out)]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    out
}

/// A `storen serve` child, killed on drop.
struct Server {
    child: Child,
    addr: String,
}

impl Drop for Server {
    fn drop(&mut self) {
        let _ = self.child.kill();
        let _ = self.child.wait();
    }
}

fn serve(fam: &Path, data: &Path, strategy: &str, variant: &str, s: usize, prover: usize) -> Server {
    let mut child = Command::new(BIN)
        .args(["serve", "--descriptor", p(fam), "--data", p(data), "--strategy", strategy, "--variant", variant])
        .args(["--s", &s.to_string(), "--prover", &prover.to_string(), "--bind", "127.0.0.1:0"])
        .stdout(Stdio::piped())
        .spawn()
        .expect("spawn serve");
    let mut line = String::new();
    BufReader::new(child.stdout.take().unwrap()).read_line(&mut line).unwrap();
    let addr = line.strip_prefix("listening on ").expect(&line).split_whitespace().next().unwrap().to_string();
    Server { child, addr }
}

fn preprocess(dir: &TempDir, fam: &Path, data: &Path, variant: &str, s: &str, r: &str, e: &str, seed: &str) -> PathBuf {
    let out = path(dir, &format!("{variant}-{seed}.digest"));
    let o = run(&[
        "preprocess", "--descriptor", p(fam), "--data", p(data), "--variant", variant, "--s", s, "--r", r, "--e", e,
        "--seed", seed, "--out", p(&out),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    out
}

fn audit(fam: &Path, digest: &Path, servers: &[&str]) -> Output {
    Command::new(BIN)
        .args(["audit", "--descriptor", p(fam), "--digest", p(digest), "--providers", &servers.join(",")])
        .env("STOREN_TIMEOUT_MS", "300")
        .output()
        .unwrap()
}

#[test]
fn derive_examples() {
    let dir = TempDir::new().unwrap();
    let out = path(&dir, "a.fam");
    let o = run(&["derive", "--kind", "polynomial", "--k", "2", "--epsilon", "0.8", "--out", p(&out)]);
    let text = stdout(&o);
    assert!(text.contains("n: 4\n") && text.contains("q: 5\n"), "{text}");
    assert_eq!(std::fs::metadata(&out).unwrap().len(), 25);

    let o = run(&["derive", "--kind", "karp-rabin", "--k", "2", "--epsilon", "0.70711", "--out", p(&out)]);
    assert!(stdout(&o).contains("primes: 2, 3, 5, 7\n"), "{}", stdout(&o));

    let o = run(&["derive", "--kind", "polynomial", "--k", "1", "--epsilon", "0.9", "--out", p(&out)]);
    assert!(stdout(&o).contains("epsilon_actual: 0\n"), "{}", stdout(&o));

    let o = run(&["derive", "--kind", "polynomial", "--k", "2", "--epsilon", "1.5", "--out", p(&out)]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn golden_digest() {
    let dir = TempDir::new().unwrap();
    let fam = derive(&dir, "polynomial", "4", "0.5"); // n = 16, q = 17
    let data = path(&dir, "x.bin");
    std::fs::write(&data, [1, 2, 3, 4]).unwrap();
    let digest = preprocess(&dir, &fam, &data, "single", "1", "0", "0", "42");
    let bytes = std::fs::read(&digest).unwrap();
    let hex: String = bytes.iter().map(|b| format!("{b:02x}")).collect();
    assert_eq!(hex, GOLDEN_DIGEST);

    // Cross-check the frozen bytes field by field.
    assert_eq!(&bytes[..7], b"SENF\x01\x00\x00");
    let beta = u64::from_le_bytes(bytes[39..47].try_into().unwrap());
    assert_eq!(&bytes[47..51], &[1, 0, 0, 0]);
    let gamma = u64::from_le_bytes(bytes[51..59].try_into().unwrap());
    let point = beta - 1;
    let expected = [1u64, 2, 3, 4].iter().rev().fold(0, |acc, c| (acc * point + c) % 17);
    assert_eq!(gamma, expected);
}

const GOLDEN_DIGEST: &str =
    "53454e460100008521e39f06505b37261e7aa57f6e9abb92af0f2908c67a8942ae134ed6b162080900000000000000010000000d00000000000000";

#[test]
fn preprocess_reports_size_against_formula() {
    let dir = TempDir::new().unwrap();
    let fam = derive(&dir, "polynomial", "6", "0.7"); // n = 13, q = 13
    let data = path(&dir, "x.bin");
    std::fs::write(&data, [1, 2, 3, 4, 5, 6]).unwrap();
    for (variant, s, r, e, payload) in
        [("single", "1", "0", "0", 4 + 4), ("trivial", "3", "0", "0", 4 + 3 * 4), ("linear", "2", "0", "0", 8), ("rs", "3", "1", "1", 4 + 3 * 4)]
    {
        let out = path(&dir, "d");
        let o = run(&[
            "preprocess", "--descriptor", p(&fam), "--data", p(&data), "--variant", variant, "--s", s, "--r", r, "--e",
            e, "--seed", "1", "--out", p(&out),
        ]);
        let text = stdout(&o);
        assert!(text.contains(&format!("+ {payload} payload")), "{text}");
        assert!(text.contains(&format!("= {payload} bits [match]")), "{text}");
    }
}

#[test]
fn preprocess_usage_errors() {
    let dir = TempDir::new().unwrap();
    let fam = derive(&dir, "polynomial", "6", "0.7");
    let data = path(&dir, "x.bin");
    std::fs::write(&data, [1, 2, 3, 4, 5, 6]).unwrap();
    let out = path(&dir, "d");
    let o = run(&["preprocess", "--descriptor", p(&fam), "--data", p(&data), "--variant", "trivial", "--s", "4", "--seed", "1", "--out", p(&out)]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("divide k = 6"));

    let empty = path(&dir, "empty.bin");
    std::fs::write(&empty, []).unwrap();
    let o = run(&["preprocess", "--descriptor", p(&fam), "--data", p(&empty), "--seed", "1", "--out", p(&out)]);
    assert_eq!(o.status.code(), Some(2));

    let o = run(&["preprocess", "--descriptor", p(&path(&dir, "missing")), "--data", p(&data), "--seed", "1", "--out", p(&out)]);
    assert_eq!(o.status.code(), Some(4));
}

#[test]
fn honest_audit_and_digest_reuse() {
    let dir = TempDir::new().unwrap();
    let fam = derive(&dir, "polynomial", "4", "0.5");
    let data = path(&dir, "x.bin");
    std::fs::write(&data, [9, 8, 7, 6]).unwrap();
    let server = serve(&fam, &data, "honest", "single", 1, 1);
    let digest = preprocess(&dir, &fam, &data, "single", "1", "0", "0", "5");
    let o = audit(&fam, &digest, &[&server.addr]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), r#"{"verdict":"accepted","accepted":true,"accused":[],"erased":[]}"#);
    let again = audit(&fam, &digest, &[&server.addr]);
    assert_eq!(again.status.code(), Some(2));
}

#[test]
fn karp_rabin_trivial_audit() {
    let dir = TempDir::new().unwrap();
    let fam = derive(&dir, "karp-rabin", "4", "0.5");
    let data = path(&dir, "x.bin");
    std::fs::write(&data, [4, 5]).unwrap(); // chunks 4 and 5, each below 2 * 3
    let servers: Vec<Server> = (1..=2).map(|i| serve(&fam, &data, "honest", "trivial", 2, i)).collect();
    let digest = preprocess(&dir, &fam, &data, "trivial", "2", "0", "0", "3");
    let addrs: Vec<&str> = servers.iter().map(|s| s.addr.as_str()).collect();
    assert_eq!(audit(&fam, &digest, &addrs).status.code(), Some(0));
}

#[test]
fn rs_parity_cheater_and_budget() {
    let dir = TempDir::new().unwrap();
    let fam = derive(&dir, "polynomial", "6", "0.7");
    let data = path(&dir, "x.bin");
    std::fs::write(&data, [1, 2, 3, 4, 5, 6]).unwrap();
    let honest: Vec<Server> = (1..=3).map(|i| serve(&fam, &data, "honest", "rs", 3, i)).collect();
    let cheat = serve(&fam, &data, "uniform", "rs", 3, 2);
    let silent = serve(&fam, &data, "silent", "rs", 3, 3);

    // Find a seed where the cheater's guess is wrong; the verdict names it.
    let mut saw_rejection = false;
    for seed in 0..20 {
        let digest = preprocess(&dir, &fam, &data, "rs", "3", "1", "1", &seed.to_string());
        let o = audit(&fam, &digest, &[&honest[0].addr, &cheat.addr, &honest[2].addr]);
        match o.status.code() {
            Some(1) => {
                assert!(stdout(&o).contains(r#""accused":[2]"#), "{}", stdout(&o));
                saw_rejection = true;
                break;
            }
            code => assert_eq!(code, Some(0)),
        }
    }
    assert!(saw_rejection);

    // Budget r=0, e=1 but two silent provers: undecidable.
    let digest = preprocess(&dir, &fam, &data, "rs", "3", "0", "1", "99");
    let o = audit(&fam, &digest, &[&honest[0].addr, &silent.addr, "127.0.0.1:1"]);
    assert_eq!(o.status.code(), Some(3), "{}", stdout(&o));
    assert!(stdout(&o).contains("undecidable"));
}

#[test]
fn partial_store_served() {
    let dir = TempDir::new().unwrap();
    let fam = derive(&dir, "polynomial", "4", "0.5"); // n = 16
    let data = path(&dir, "x.bin");
    std::fs::write(&data, [9, 8, 7, 6]).unwrap();
    let server = serve(&fam, &data, "partial:16", "single", 1, 1);
    let digest = preprocess(&dir, &fam, &data, "single", "1", "0", "0", "8");
    assert_eq!(audit(&fam, &digest, &[&server.addr]).status.code(), Some(0));
}

#[test]
fn experiment_csv_is_deterministic() {
    let dir = TempDir::new().unwrap();
    let cfg = path(&dir, "exp.txt");
    std::fs::write(&cfg, "kind=polynomial\nk=4\nepsilon=0.5\nvariant=single\nt=0,8,16\ntrials=2000\nseed=7\n").unwrap();
    let a = path(&dir, "a.csv");
    let b = path(&dir, "b.csv");
    assert!(run(&["experiment", "--config", p(&cfg), "--out", p(&a)]).status.success());
    assert!(run(&["experiment", "--config", p(&cfg), "--out", p(&b)]).status.success());
    let csv = std::fs::read_to_string(&a).unwrap();
    assert_eq!(csv, std::fs::read_to_string(&b).unwrap());
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], "t,retained_bits,trials,passes,empirical_rate,analytic_rate");
    assert_eq!(lines.len(), 4);
    assert!(lines[3].starts_with("16,") && lines[3].ends_with(",2000,2000,1.000000,1.000000"), "{}", lines[3]);
}

#[test]
fn certify_green_and_sabotaged() {
    let o = run(&["certify"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert_eq!(text.lines().filter(|l| l.starts_with("PASS")).count(), 8, "{text}");
    let o = run(&["certify", "--sabotage"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).lines().any(|l| l.starts_with("FAIL") && l.contains("rs-decode")));
}
