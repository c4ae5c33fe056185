use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn locnash(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_locnash"))
        .current_dir(dir)
        .env_remove("LOCNASH_CONFIG")
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p
}

fn fixtures() -> tempfile::TempDir {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    write(d, "exp.desc", "dim = 1\nfamily = \"exp\"\n");
    write(d, "sin.desc", "dim = 1\nfamily = \"sin\"\n");
    write(d, "p2.desc", "dim = 2\nfamily = \"p2\"\n");
    write(
        d,
        "p4.desc",
        "dim = 2\nfamily = \"p4\"\na = 1\nlattice = \"lattice(1, 1i)\"\n",
    );
    write(
        d,
        "p5.desc",
        "dim = 2\nfamily = \"p5\"\na = \"0.3\"\nlattice = \"lattice(1, 1i)\"\n",
    );
    write(
        d,
        "sq.desc",
        "dim = 1\nfamily = \"wp\"\nlattice = \"lattice(1, 1i)\"\n",
    );
    write(
        d,
        "sq2.desc",
        "dim = 1\nfamily = \"wp\"\nlattice = \"lattice(1, 2i)\"\n",
    );
    write(
        d,
        "sqpi.desc",
        "dim = 1\nfamily = \"wp\"\nlattice = \"lattice(1, pi*i)\"\n",
    );
    dir
}

#[test]
fn eval_grid_has_nineteen_squared_rows() {
    let dir = fixtures();
    let o = locnash(
        dir.path(),
        &[
            "eval",
            "--lattice",
            "lattice(1,1i)",
            "--fn",
            "wp",
            "--grid",
            "-0.9:0.9:0.1",
        ],
    );
    assert_eq!(code(&o), 0);
    let text = stdout(&o);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "re_u,im_u,re_val,im_val,est_err,pole");
    assert_eq!(lines.len(), 1 + 19 * 19);
    let poles: Vec<&&str> = lines[1..].iter().filter(|l| l.ends_with(",1")).collect();
    assert_eq!(poles.len(), 1);
    assert!(poles[0].ends_with(",,,,1"), "{}", poles[0]);
    for l in &lines[1..] {
        assert_eq!(l.split(',').count(), 6);
    }
}

#[test]
fn eval_descriptor_writes_one_csv_per_coordinate() {
    let dir = fixtures();
    let out = dir.path().join("p4.csv");
    let o = locnash(
        dir.path(),
        &[
            "eval",
            "--descriptor",
            "p4.desc",
            "--grid",
            "0:0.5:0.25",
            "--other",
            "0.1",
            "--out",
            out.to_str().unwrap(),
        ],
    );
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    for i in 1..=2 {
        let text = fs::read_to_string(dir.path().join(format!("p4.coord{i}.csv"))).unwrap();
        assert_eq!(text.lines().count(), 1 + 9);
    }
}

#[test]
fn parse_errors_exit_two() {
    let dir = fixtures();
    assert_eq!(
        code(&locnash(
            dir.path(),
            &["eval", "--lattice", "lattice(1,", "--grid", "0:1:0.5"]
        )),
        2
    );
    assert_eq!(
        code(&locnash(
            dir.path(),
            &["eval", "--lattice", "lattice(1, 2)", "--grid", "0:1:0.5"]
        )),
        2
    );
    assert_eq!(
        code(&locnash(
            dir.path(),
            &["eval", "--lattice", "lattice(1,1i)", "--grid", "0:1"]
        )),
        2
    );
    write(dir.path(), "bad.desc", "dim = 1\nfamily = \"cos\"\n");
    assert_eq!(code(&locnash(dir.path(), &["periods", "bad.desc"])), 2);
    assert_eq!(code(&locnash(dir.path(), &["periods", "missing.desc"])), 2);
    assert_eq!(
        code(&locnash(dir.path(), &["compare", "exp.desc", "p2.desc"])),
        2
    );
}

#[test]
fn compare_exit_codes_follow_the_verdict() {
    let dir = fixtures();
    let o = locnash(dir.path(), &["compare", "p2.desc", "p5.desc"]);
    assert_eq!(code(&o), 1);
    let report = stdout(&o);
    assert!(report.contains("outcome = \"NotIsomorphic\""));
    assert!(report.contains("\"rank: "), "{report}");
    assert!(report.contains("ranks = [1, 3]"));

    let o = locnash(dir.path(), &["compare", "sq.desc", "sq2.desc"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("ratio = \"1/2\""));
    assert_eq!(
        code(&locnash(dir.path(), &["compare", "sq.desc", "sqpi.desc"])),
        4
    );
    assert_eq!(
        code(&locnash(dir.path(), &["compare", "exp.desc", "sin.desc"])),
        1
    );
}

#[test]
fn verify_aat_on_exp() {
    let dir = fixtures();
    let o = locnash(dir.path(), &["verify-aat", "exp.desc"]);
    assert_eq!(code(&o), 0);
    let report = stdout(&o);
    assert!(report.contains("status = \"ok\""));
    let relation = report
        .lines()
        .find(|l| l.starts_with("relation = "))
        .unwrap();
    assert!(
        relation.contains("*X1*X2") && relation.contains("*X3"),
        "{relation}"
    );
    assert_eq!(relation.matches('X').count(), 3, "{relation}");
}

#[test]
fn verify_aat_reports_failure_at_too_low_degree() {
    let dir = fixtures();
    let o = locnash(dir.path(), &["verify-aat", "sin.desc", "--max-degree", "1"]);
    assert_eq!(code(&o), 1);
    assert!(stdout(&o).contains("status = \"no-relation-found\""));
}

#[test]
fn check_identities_on_the_square_lattice() {
    let dir = fixtures();
    let o = locnash(
        dir.path(),
        &["check-identities", "--lattice", "lattice(1,1i)"],
    );
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let report = stdout(&o);
    assert_eq!(report.matches("[[check]]").count(), 6);
    assert!(report.contains("all_pass = true"));
}

#[test]
fn classify_and_periods_reports() {
    let dir = fixtures();
    let o = locnash(dir.path(), &["classify", "sq2.desc"]);
    assert_eq!(code(&o), 0);
    let r = stdout(&o);
    assert!(
        r.contains("canonical = \"wp\"") && r.contains("rank = 2") && r.contains("citations = [")
    );
    let o = locnash(dir.path(), &["classify", "p5.desc"]);
    assert!(stdout(&o).contains("family = \"P5\""));
    let o = locnash(dir.path(), &["periods", "p4.desc"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("rank = 2"));
}

#[test]
fn reports_are_byte_identical_across_runs() {
    let dir = fixtures();
    for args in [
        vec!["classify", "sq.desc"],
        vec!["compare", "sq.desc", "sq2.desc"],
        vec!["verify-aat", "sin.desc"],
        vec!["check-identities", "--lattice", "lattice(1, 2i)"],
    ] {
        let a = locnash(dir.path(), &args);
        let b = locnash(dir.path(), &args);
        assert_eq!(a.stdout, b.stdout, "{args:?}");
        let mut with_out = args.clone();
        with_out.extend(["--out", "r.toml"]);
        locnash(dir.path(), &with_out);
        assert_eq!(
            fs::read(dir.path().join("r.toml")).unwrap(),
            a.stdout,
            "{args:?}"
        );
    }
}

#[test]
fn config_precedence() {
    let dir = fixtures();
    let cfg = write(dir.path(), "run.toml", "seed = 7\nmax_denominator = 1000\n");
    let cfg = cfg.to_str().unwrap();

    let o = locnash(dir.path(), &["classify", "exp.desc", "--config", cfg]);
    let r = stdout(&o);
    assert!(
        r.contains("seed = 7\n") && r.contains("max_denominator = 1000\n"),
        "{r}"
    );

    let o = locnash(
        dir.path(),
        &["classify", "exp.desc", "--config", cfg, "--seed", "9"],
    );
    let r = stdout(&o);
    assert!(
        r.contains("seed = 9\n") && r.contains("max_denominator = 1000\n"),
        "{r}"
    );

    let o = Command::new(env!("CARGO_BIN_EXE_locnash"))
        .current_dir(dir.path())
        .env("LOCNASH_CONFIG", cfg)
        .args(["classify", "exp.desc"])
        .output()
        .unwrap();
    assert!(stdout(&o).contains("seed = 7\n"));

    let o = locnash(dir.path(), &["classify", "exp.desc"]);
    assert!(stdout(&o).contains("seed = 1\n"));

    write(dir.path(), "typo.toml", "sed = 7\n");
    assert_eq!(
        code(&locnash(
            dir.path(),
            &["classify", "exp.desc", "--config", "typo.toml"]
        )),
        2
    );
    assert_eq!(
        code(&locnash(
            dir.path(),
            &["classify", "exp.desc", "--tol", "-1"]
        )),
        2
    );
}
