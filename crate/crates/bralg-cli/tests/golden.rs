//! Black-box tests of the compiled binary: pinned text renderings, byte
//! determinism across runs, JSON validity, exit-code discipline, and module
//! files surviving the write -> verify -> act -> is-simple loop.

use serde_json::Value;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn fixture(name: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(name)
        .display()
        .to_string()
}

fn bralg(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bralg"))
        .args(args)
        .output()
        .unwrap()
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).unwrap()
}

fn scratch_dir(tag: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("bralg-golden-{}-{}", tag, std::process::id()));
    if dir.exists() {
        std::fs::remove_dir_all(&dir).unwrap();
    }
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

#[test]
fn info_rendering_is_pinned_and_deterministic() {
    let cfg = fixture("cyclotomic.cfg");
    let first = bralg(&["-c", &cfg, "info"]);
    let second = bralg(&["-c", &cfg, "info"]);
    assert!(first.status.success());
    assert_eq!(first.stdout, second.stdout, "output must be byte-identical");
    assert_eq!(
        stdout(&first),
        "field: cyclotomic 3\n\
         variables: z1, z2\n\
         sigma: z1 -> q*z1, z2 -> (-q - 1)*z2\n\
         H: (z2 - q, z1 + q + 1)\n\
         J: (z2 - 1, z1 - 1)\n\
         degree +1 generators: z1 - 1, z2 - 1\n\
         degree -1 generators: z1 - 1, z2 - 1\n\
         GK dimension: 3\n"
    );
}

#[test]
fn json_outputs_parse_and_stay_stable() {
    let cfg = fixture("cyclotomic.cfg");
    for args in [
        vec!["--json", "-c", &cfg, "info"],
        vec!["--json", "-c", &cfg, "orbit", "-p", "1,1"],
        vec!["--json", "-c", &cfg, "simples", "-p", "1,1"],
        vec!["--json", "-c", &cfg, "gkdim"],
    ] {
        let first = bralg(&args);
        let second = bralg(&args);
        assert!(first.status.success(), "{args:?}");
        assert_eq!(first.stdout, second.stdout, "{args:?}");
        serde_json::from_slice::<Value>(&first.stdout).expect("valid JSON");
    }
    let gk = bralg(&["--json", "-c", &cfg, "gkdim"]);
    assert_eq!(stdout(&gk).trim(), r#"{"gk_dimension":3}"#);
    let breaks = bralg(&["--json", "-c", &cfg, "breaks", "-p", "1,1"]);
    assert_eq!(
        stdout(&breaks).trim(),
        r#"{"breaks":[0,2],"complete_breaks":true}"#
    );
}

#[test]
fn exit_codes_discriminate_failure_kinds() {
    let cfg = fixture("cyclotomic.cfg");
    // 2: malformed expression.
    let out = bralg(&["-c", &cfg, "mul", "-a", "(z1", "-b", "t"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).starts_with("parse error: "));
    // 2: unreadable config.
    let out = bralg(&["-c", "no-such-file.cfg", "info"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).starts_with("io error: "));
    // 2: missing --config.
    let out = bralg(&["info"]);
    assert_eq!(out.status.code(), Some(2));
    // 2: clap-level argument error.
    let out = bralg(&["-c", &cfg, "no-such-command"]);
    assert_eq!(out.status.code(), Some(2));
    // 3: structurally valid input that violates a precondition.
    let out = bralg(&["-c", &cfg, "witness", "-p", "1,1", "-k", "4"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(stderr(&out).starts_with("precondition error: "));
    // 3: break-free cyclic orbit needs a theta datum.
    let out = bralg(&["-c", &fixture("theta.cfg"), "simples", "-p", "0"]);
    assert_eq!(out.status.code(), Some(3));
    // 0: success.
    let out = bralg(&["-c", &cfg, "gkdim"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stderr(&out).is_empty());
}

#[test]
fn module_files_round_trip_through_the_binary() {
    let cfg = fixture("cyclotomic.cfg");
    let dir_a = scratch_dir("a");
    let dir_b = scratch_dir("b");
    for dir in [&dir_a, &dir_b] {
        let out = bralg(&[
            "-c",
            &cfg,
            "simples",
            "-p",
            "1,1",
            "--out-dir",
            &dir.display().to_string(),
        ]);
        assert!(out.status.success());
    }
    // The writer is deterministic byte for byte.
    let file_a = dir_a.join("module_0.mod");
    let bytes_a = std::fs::read(&file_a).unwrap();
    let bytes_b = std::fs::read(dir_b.join("module_0.mod")).unwrap();
    assert_eq!(bytes_a, bytes_b);
    let text = String::from_utf8(bytes_a).unwrap();
    assert!(text.starts_with("[module]\nalgebra = cyclotomic\nbase = 1,1\nkind = cyclic 3\n"));
    assert!(text.contains("[up 1 0]\nshape = 1x1\nentries = q - 1\n"));
    // The written file verifies, acts, and classifies through the binary.
    let module = file_a.display().to_string();
    let out = bralg(&["-c", &cfg, "verify", "-m", &module]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("verified: true"));
    let out = bralg(&[
        "-c", &cfg, "act", "-m", &module, "-u", "(z1 - 1)*t^1", "-i", "1", "-v", "1",
    ]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), "target: 2\nimage: q - 1\n");
    let out = bralg(&["-c", &cfg, "is-simple", "-m", &module]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("simple: true"));
    // Tampering with one transfer scalar breaks the cross relations: the
    // verifier refuses the file with exit code 4.
    let tampered_path = dir_a.join("tampered.mod");
    let tampered = text.replacen("entries = q - 1", "entries = q + 1", 1);
    assert_ne!(tampered, text);
    std::fs::write(&tampered_path, tampered).unwrap();
    let out = bralg(&["-c", &cfg, "verify", "-m", &tampered_path.display().to_string()]);
    assert_eq!(out.status.code(), Some(4));
    assert!(stderr(&out).starts_with("verification error: "));
    std::fs::remove_dir_all(&dir_a).unwrap();
    std::fs::remove_dir_all(&dir_b).unwrap();
}

#[test]
fn witness_files_written_by_the_binary_verify() {
    let cfg = fixture("cyclotomic.cfg");
    let dir = scratch_dir("w");
    let path = dir.join("witness.mod");
    let out = bralg(&[
        "-c",
        &cfg,
        "witness",
        "-p",
        "1,1",
        "-k",
        "1",
        "-o",
        &path.display().to_string(),
    ]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("verified: true"));
    let out = bralg(&["-c", &cfg, "verify", "-m", &path.display().to_string()]);
    assert_eq!(out.status.code(), Some(0));
    std::fs::remove_dir_all(&dir).unwrap();
}
