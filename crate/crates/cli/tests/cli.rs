use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_goppa-ld"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

#[test]
fn table_four_matches() {
    let out = run(&["table", "4"]);
    assert_eq!(code(&out), 0);
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("security,dlp_keysize,mceliece_keysize,ratio,status"));
    let rows: Vec<_> = lines.collect();
    assert_eq!(rows.len(), 5);
    assert!(rows.iter().all(|l| l.ends_with(",MATCH")));
    assert!(rows[0].starts_with("80,"));
    assert!(rows[0].contains(",11.0,"));
}

#[test]
fn tables_with_mismatches_exit_two() {
    for t in ["1", "2", "3"] {
        let out = run(&["table", t, "--format", "tsv"]);
        assert_eq!(code(&out), 2, "table {t}");
        let text = String::from_utf8(out.stdout).unwrap();
        let header = text.lines().next().unwrap();
        assert_eq!(header, "method\tm\tn\tk\tr\ttau2\twf\tkeysize\tgain\tstatus\tmismatches");
        assert!(text.contains("MISMATCH"));
    }
}

#[test]
fn table_out_of_range_is_an_error() {
    assert_eq!(code(&run(&["table", "5"])), 1);
    assert_eq!(code(&run(&["frobnicate"])), 1);
    assert_eq!(code(&run(&["--help"])), 0);
}

#[test]
fn bounds_output_is_stable() {
    let a = run(&["bounds", "--n", "1024", "--tmax", "50"]);
    let b = run(&["bounds", "--n", "1024", "--tmax", "50"]);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
    let text = String::from_utf8(a.stdout).unwrap();
    assert_eq!(text.lines().count(), 51);
    assert!(text.starts_with("t,t_over_n,unique,generic,bernstein,tau2\n"));
}

#[test]
fn search_finds_a_dyadic_key() {
    let out = run(&[
        "search", "--target", "80", "--variant", "dyadic", "--decoder", "ld", "--countermeasure", "cm1",
    ]);
    assert_eq!(code(&out), 0);
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().count(), 2);
    let fields: Vec<&str> = text.lines().nth(1).unwrap().split(',').collect();
    assert_eq!(fields[0], "LD");
    let keysize: u64 = fields[7].parse().unwrap();
    assert!(keysize <= 11264);
}

#[test]
fn search_rejects_out_of_range_targets() {
    let out = run(&["search", "--target", "20", "--variant", "generic", "--decoder", "ud"]);
    assert_eq!(code(&out), 1);
}

#[test]
fn keygen_refuses_insecure_dyadic_parameters() {
    let dir = tempfile::tempdir().unwrap();
    let key = dir.path().join("k.bin");
    let out = run(&[
        "--seed", "01", "--out", p(&key), "keygen", "--variant", "dyadic", "--m", "12", "--n", "3072", "--r",
        "32", "--decoder", "ud",
    ]);
    assert_eq!(code(&out), 1);
    assert!(!key.exists());
}

#[test]
fn keygen_requires_a_seed() {
    let out = run(&["keygen", "--variant", "generic", "--m", "5", "--n", "32", "--r", "4", "--decoder", "ud"]);
    assert_eq!(code(&out), 1);
}

#[test]
fn roundtrip_through_files_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let msg = d.join("msg.bin");
    fs::write(&msg, b"list decoding!").unwrap();

    for (variant, m, n, r) in [("generic", "6", "64", "6"), ("dyadic", "8", "240", "16")] {
        let mut keys = Vec::new();
        let mut cts = Vec::new();
        for i in 0..2 {
            let key = d.join(format!("{variant}{i}.key"));
            let ct = d.join(format!("{variant}{i}.ct"));
            let out = run(&[
                "--seed", "c0ffee", "--out", p(&key), "keygen", "--variant", variant, "--m", m, "--n", n, "--r",
                r, "--decoder", "ld",
            ]);
            assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
            let out = run(&["--seed", "beef", "--out", p(&ct), "encrypt", "--key", p(&key), "--in", p(&msg), "--bits", "14"]);
            assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
            keys.push(fs::read(&key).unwrap());
            cts.push(fs::read(&ct).unwrap());

            let out = run(&["decrypt", "--key", p(&key), "--in", p(&ct)]);
            assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
            // 14 payload bits of "li": all of the first byte, low six bits of the second
            assert_eq!(out.stdout, vec![b'l', b'i' & 0x3f]);
        }
        assert_eq!(keys[0], keys[1]);
        assert_eq!(cts[0], cts[1]);
        assert_eq!(&keys[0][..4], b"GPPA");
        assert_eq!(&cts[0][..4], b"GCTX");
    }
}

#[test]
fn decrypt_rejects_garbage() {
    let dir = tempfile::tempdir().unwrap();
    let junk = dir.path().join("junk");
    fs::write(&junk, b"not a key").unwrap();
    assert_eq!(code(&run(&["decrypt", "--key", p(&junk), "--in", p(&junk)])), 1);
}
