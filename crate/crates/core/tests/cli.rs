//! The `phoenix` binary: commands, streams and exit codes.

mod common;

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use phoenix::samples::AVERAGE;

const BIN: &str = env!("CARGO_BIN_EXE_phoenix");

struct Run {
    code: i32,
    stdout: String,
    stderr: String,
}

fn finish(out: Output) -> Run {
    Run {
        code: out.status.code().expect("exited normally"),
        stdout: String::from_utf8(out.stdout).unwrap(),
        stderr: String::from_utf8(out.stderr).unwrap(),
    }
}

fn phoenix(dir: &Path, args: &[&str]) -> Run {
    finish(
        Command::new(BIN)
            .current_dir(dir)
            .env_remove("PHOENIX_MAX_STEPS")
            .args(args)
            .output()
            .unwrap(),
    )
}

fn workspace() -> (tempfile::TempDir, PathBuf) {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().to_path_buf();
    std::fs::write(path.join("average.phx"), AVERAGE).unwrap();
    std::fs::write(path.join("grades.txt"), "10\n20\n30\n40\n50\n").unwrap();
    (dir, path)
}

#[test]
fn build_writes_image_next_to_source() {
    let (_d, dir) = workspace();
    let r = phoenix(&dir, &["build", "average.phx"]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let bytes = std::fs::read(dir.join("average.phxc")).unwrap();
    assert_eq!(&bytes[..4], b"PHXC");
    let r = phoenix(&dir, &["build", "average.phx", "-o", "out.bin"]);
    assert_eq!(r.code, 0);
    assert_eq!(std::fs::read(dir.join("out.bin")).unwrap(), bytes);
}

#[test]
fn build_reports_syntax_errors() {
    let (_d, dir) = workspace();
    std::fs::write(dir.join("broken.phx"), common::entry("أعرض : 1")).unwrap();
    let r = phoenix(&dir, &["build", "broken.phx"]);
    assert_eq!(r.code, 1);
    assert_eq!(r.stderr.matches("E-PAR-").count(), 1, "{}", r.stderr);
    assert!(!dir.join("broken.phxc").exists());
}

#[test]
fn unreadable_input_is_an_io_error() {
    let (_d, dir) = workspace();
    for cmd in ["build", "run", "lex", "parse", "check", "disasm"] {
        assert_eq!(phoenix(&dir, &[cmd, "missing.phx"]).code, 66, "{cmd}");
    }
}

#[test]
fn run_with_input_script() {
    let (_d, dir) = workspace();
    let r = phoenix(
        &dir,
        &["run", "average.phx", "--input-script", "grades.txt"],
    );
    assert_eq!(r.code, 0, "{}", r.stderr);
    assert!(r.stdout.ends_with("المعدل هو 30\n"), "{}", r.stdout);
    assert_eq!(r.stdout.matches("? أدخل علامتك\n").count(), 5);
}

#[test]
fn run_reads_stdin_without_script() {
    let (_d, dir) = workspace();
    let child = Command::new(BIN)
        .current_dir(&dir)
        .args(["run", "average.phx"])
        .stdin(std::process::Stdio::piped())
        .stdout(std::process::Stdio::piped())
        .stderr(std::process::Stdio::piped())
        .spawn()
        .unwrap();
    use std::io::Write;
    child
        .stdin
        .as_ref()
        .unwrap()
        .write_all("1\n2\n2\n2\n2\n".as_bytes())
        .unwrap();
    let r = finish(child.wait_with_output().unwrap());
    assert_eq!(r.code, 0);
    assert!(r.stdout.ends_with("المعدل هو 1.8\n"));
}

#[test]
fn image_and_source_runs_agree() {
    let (_d, dir) = workspace();
    assert_eq!(phoenix(&dir, &["build", "average.phx"]).code, 0);
    let a = phoenix(
        &dir,
        &["run", "average.phx", "--input-script", "grades.txt"],
    );
    let b = phoenix(
        &dir,
        &["run", "average.phxc", "--input-script", "grades.txt"],
    );
    assert_eq!(
        (a.code, &a.stdout, &a.stderr),
        (b.code, &b.stdout, &b.stderr)
    );
}

#[test]
fn runtime_errors_exit_two() {
    let (_d, dir) = workspace();
    std::fs::write(
        dir.join("oob.phx"),
        common::entry("قائمة-رقم ق[5] ;\nأعرض : ق[5] ;"),
    )
    .unwrap();
    assert_eq!(phoenix(&dir, &["build", "oob.phx"]).code, 0);
    let r = phoenix(&dir, &["run", "oob.phxc"]);
    assert_eq!(r.code, 2);
    assert!(
        r.stderr.starts_with("خطأ وقت التشغيل R-003: "),
        "{}",
        r.stderr
    );
    let r = phoenix(&dir, &["run", "average.phx", "--input-script", "oob.phx"]);
    assert_eq!(r.code, 2);
    assert!(r.stderr.contains("R-004"), "{}", r.stderr);
}

#[test]
fn bad_image_is_a_link_error() {
    let (_d, dir) = workspace();
    std::fs::write(dir.join("bad.phxc"), b"NOPE\x01\x00").unwrap();
    let r = phoenix(&dir, &["run", "bad.phxc"]);
    assert_eq!(r.code, 1);
    assert!(r.stderr.contains("E-LNK-003"), "{}", r.stderr);
}

#[test]
fn step_limit_from_flag_and_environment() {
    let (_d, dir) = workspace();
    std::fs::write(
        dir.join("loop.phx"),
        common::entry("رقم س = 0 ;\nكرر : س < 1\n{\nس = س × 1 ;\n}"),
    )
    .unwrap();
    let r = phoenix(&dir, &["run", "loop.phx", "--max-steps", "500"]);
    assert_eq!(r.code, 2);
    assert!(r.stderr.contains("R-006"));
    let out = Command::new(BIN)
        .current_dir(&dir)
        .env("PHOENIX_MAX_STEPS", "500")
        .args(["run", "loop.phx"])
        .output();
    let r = finish(out.unwrap());
    assert_eq!(r.code, 2);
    assert!(r.stderr.contains("R-006"));
    let out = Command::new(BIN)
        .current_dir(&dir)
        .env("PHOENIX_MAX_STEPS", "many")
        .args(["run", "loop.phx"])
        .output();
    assert_eq!(finish(out.unwrap()).code, 64);
}

#[test]
fn trace_goes_to_stderr() {
    let (_d, dir) = workspace();
    let r = phoenix(
        &dir,
        &[
            "run",
            "average.phx",
            "--input-script",
            "grades.txt",
            "--trace",
        ],
    );
    assert_eq!(r.code, 0);
    assert!(r.stderr.lines().count() > 50);
    assert!(r.stderr.contains("DIV"));
    assert!(!r.stdout.contains("DIV"));
}

#[test]
fn inspection_commands() {
    let (_d, dir) = workspace();
    let r = phoenix(&dir, &["lex", "average.phx"]);
    assert_eq!(r.code, 0);
    assert!(
        r.stdout.starts_with("KW_FUNC\tوظيفة\t1:1\n"),
        "{}",
        r.stdout
    );
    assert!(r.stdout.trim_end().ends_with("EOF\t\t16:1") || r.stdout.contains("EOF\t"));

    let r = phoenix(&dir, &["parse", "average.phx"]);
    assert_eq!(r.code, 0);
    assert!(r.stdout.starts_with("Program items=1\n"));

    std::fs::write(
        dir.join("broken.phx"),
        "وظيفة رئيسية (-) : البداية\n{\nأعرض : ;\n}\nنهاية الوظيفة\n",
    )
    .unwrap();
    let r = phoenix(&dir, &["parse", "broken.phx"]);
    assert_eq!(r.code, 1);
    assert!(r.stderr.contains("E-PAR-"));

    assert_eq!(phoenix(&dir, &["build", "average.phx"]).code, 0);
    let r = phoenix(&dir, &["disasm", "average.phxc"]);
    assert_eq!(r.code, 0);
    assert_eq!(
        r.stdout
            .lines()
            .filter(|l| l.split_whitespace().nth(1) == Some("DIV"))
            .count(),
        1
    );
    assert_eq!(phoenix(&dir, &["disasm", "average.phx"]).stdout, r.stdout);
}

#[test]
fn check_reports_warnings_and_errors() {
    let (_d, dir) = workspace();
    std::fs::write(
        dir.join("warn.phx"),
        AVERAGE.replace("رقم عداد = 0 ;", "رقم عداد = 0 ;\nرقم زائد = 9 ;"),
    )
    .unwrap();
    let r = phoenix(&dir, &["check", "warn.phx"]);
    assert_eq!(r.code, 0);
    assert!(r.stdout.contains("W-SEM-001"), "{}", r.stdout);
    std::fs::write(
        dir.join("err.phx"),
        common::entry("أعرض : س ;\nرقم س = 1 ;"),
    )
    .unwrap();
    let r = phoenix(&dir, &["check", "err.phx"]);
    assert_eq!(r.code, 1);
    assert!(
        r.stdout.starts_with("semantic E-SEM-001 3:"),
        "{}",
        r.stdout
    );
    assert_eq!(phoenix(&dir, &["check", "average.phx"]).stdout, "");
}

#[test]
fn usage_errors() {
    let (_d, dir) = workspace();
    assert_eq!(phoenix(&dir, &[]).code, 64);
    assert_eq!(phoenix(&dir, &["compile", "average.phx"]).code, 64);
    assert_eq!(phoenix(&dir, &["run"]).code, 64);
    assert_eq!(
        phoenix(&dir, &["run", "average.phx", "--max-steps", "x"]).code,
        64
    );
    let r = phoenix(&dir, &["--help"]);
    assert_eq!(r.code, 0);
    for cmd in ["build", "run", "lex", "parse", "check", "disasm"] {
        assert!(r.stdout.contains(cmd), "{cmd}");
    }
}
