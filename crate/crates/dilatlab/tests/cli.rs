use std::path::Path;
use std::process::{Command, Output};

fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_dilatlab")
}

fn run(args: &[&str]) -> Output {
    Command::new(bin()).args(args).output().expect("binary should launch")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("no exit code")
}

fn text(bytes: &[u8]) -> String {
    String::from_utf8_lossy(bytes).into_owned()
}

fn write_config(dir: &Path, name: &str, body: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, body).unwrap();
    path.to_string_lossy().into_owned()
}

const WELL: &str = r#"
[potential]
family = "gaussian"
amplitude = -1.2
c = [1.0, 0.0]

[grid]
L = 10.0
N = 64

[angles]
phi = [0.1]

[constants]
gamma = 1.5
d = 1

[tolerances]
tol_match = 1.0e-2

[bounds]
theorems = ["negative_axis", "left_cone"]
kappa = 1.0
"#;

const RATIONAL: &str = r#"
[potential]
family = "rational"
c = [-1.5, 0.5]
s = 1.0

[grid]
L = 10.0
N = 64

[angles]
phi = [0.1, 0.2]

[constants]
gamma = 1.5
d = 1

[tolerances]
tol_match = 1.0e-2

[norms]
p = [1.5, 2.0]

[scan]
theorems = ["cone_complement"]
kappa = [0.5, 1.0, 2.0]
"#;

#[test]
fn verify_prints_a_line_per_estimate_and_exits_zero() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "well.toml", WELL);
    let out_dir = dir.path().join("out");
    let out = run(&["verify", "--config", &cfg, "--out", out_dir.to_str().unwrap()]);
    assert_eq!(code(&out), 0, "stderr: {}", text(&out.stderr));

    let stdout = text(&out.stdout);
    let passes = stdout.lines().filter(|l| l.starts_with("PASS ")).count();
    assert_eq!(passes, 2, "stdout: {stdout}");
    assert!(stdout.contains("negative_axis"));
    assert!(stdout.contains("left_cone"));

    let raw = std::fs::read_to_string(out_dir.join("reports.json")).unwrap();
    let json: serde_json::Value = serde_json::from_str(&raw).unwrap();
    assert_eq!(json["reports"].as_array().unwrap().len(), 2);
    assert_eq!(json["config_sha256"].as_str().unwrap().len(), 64);
}

#[test]
fn spectrum_output_is_byte_stable() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "rational.toml", RATIONAL);
    let d1 = dir.path().join("a");
    let d2 = dir.path().join("b");
    for d in [&d1, &d2] {
        let out = run(&["spectrum", "--config", &cfg, "--out", d.to_str().unwrap()]);
        assert_eq!(code(&out), 0, "stderr: {}", text(&out.stderr));
    }
    let a = std::fs::read(d1.join("spectrum.csv")).unwrap();
    let b = std::fs::read(d2.join("spectrum.csv")).unwrap();
    assert_eq!(a, b);

    let head = text(&a).lines().next().unwrap().to_owned();
    assert!(head.starts_with("# dilatlab v"), "header: {head}");
    let hash = head.rsplit("config_sha256=").next().unwrap().to_owned();
    assert_eq!(hash.len(), 64);
    assert!(hash.chars().all(|c| c.is_ascii_hexdigit()));
}

#[test]
fn config_hash_tracks_file_bytes_not_semantics() {
    let dir = tempfile::tempdir().unwrap();
    let cfg1 = write_config(dir.path(), "one.toml", RATIONAL);
    let commented = format!("{RATIONAL}\n# a trailing remark\n");
    let cfg2 = write_config(dir.path(), "two.toml", &commented);
    let d1 = dir.path().join("a");
    let d2 = dir.path().join("b");
    run(&["spectrum", "--config", &cfg1, "--out", d1.to_str().unwrap()]);
    run(&["spectrum", "--config", &cfg2, "--out", d2.to_str().unwrap()]);

    let a = text(&std::fs::read(d1.join("spectrum.csv")).unwrap());
    let b = text(&std::fs::read(d2.join("spectrum.csv")).unwrap());
    let (ah, at) = a.split_once('\n').unwrap();
    let (bh, bt) = b.split_once('\n').unwrap();
    assert_ne!(ah, bh, "different bytes must hash differently");
    assert_eq!(at, bt, "identical physics must produce identical rows");
}

#[test]
fn invalid_inputs_exit_two_with_a_named_field() {
    let dir = tempfile::tempdir().unwrap();

    let out = run(&["verify", "--config", dir.path().join("missing.toml").to_str().unwrap()]);
    assert_eq!(code(&out), 2);

    let tiny = WELL.replace("N = 64", "N = 7");
    let cfg = write_config(dir.path(), "tiny.toml", &tiny);
    let out = run(&["verify", "--config", &cfg]);
    assert_eq!(code(&out), 2);
    assert!(text(&out.stderr).contains("grid.N"), "stderr: {}", text(&out.stderr));

    let odd = format!("{WELL}\nmystery = 3\n");
    let cfg = write_config(dir.path(), "odd.toml", &odd);
    let out = run(&["verify", "--config", &cfg]);
    assert_eq!(code(&out), 2);

    let cfg = write_config(dir.path(), "ok.toml", WELL);
    let out = run(&["verify", "--config", &cfg, "--tol-eig", "0"]);
    assert_eq!(code(&out), 2);
    assert!(text(&out.stderr).contains("tol-eig"));
}

#[test]
fn unreachable_residual_tolerance_exits_three() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "rational.toml", RATIONAL);
    let out_dir = dir.path().join("out");
    let out = run(&[
        "spectrum",
        "--config",
        &cfg,
        "--out",
        out_dir.to_str().unwrap(),
        "--tol-eig",
        "1e-16",
    ]);
    assert_eq!(code(&out), 3, "stderr: {}", text(&out.stderr));
}

#[test]
fn violated_estimates_exit_four_but_still_report() {
    let dir = tempfile::tempdir().unwrap();
    let weak = WELL.replace(
        "gamma = 1.5\nd = 1",
        "gamma = 1.5\nd = 1\nL_policy = { value = 1.0e-9 }",
    );
    let cfg = write_config(dir.path(), "weak.toml", &weak);
    let out_dir = dir.path().join("out");
    let out = run(&["verify", "--config", &cfg, "--out", out_dir.to_str().unwrap()]);
    assert_eq!(code(&out), 4);
    let stdout = text(&out.stdout);
    assert_eq!(stdout.lines().filter(|l| l.starts_with("FAIL ")).count(), 2);
    assert!(out_dir.join("reports.json").exists());
}

#[test]
fn unmatched_spectrum_is_flagged_not_counted() {
    let dir = tempfile::tempdir().unwrap();
    // strict matching on a coarse grid: the bound state drifts past tol_match
    // and must surface as an undecided marker, never as a negative zero
    let strict = WELL.replace("[tolerances]\ntol_match = 1.0e-2\n", "");
    let cfg = write_config(dir.path(), "strict.toml", &strict);
    let out_dir = dir.path().join("out");
    let out = run(&["verify", "--config", &cfg, "--out", out_dir.to_str().unwrap()]);
    assert_eq!(code(&out), 0, "stderr: {}", text(&out.stderr));

    let stdout = text(&out.stdout);
    assert!(stdout.contains("undecided nearby]"), "stdout: {stdout}");
    assert!(!stdout.contains("lhs=-0"), "stdout: {stdout}");

    let raw = std::fs::read_to_string(out_dir.join("reports.json")).unwrap();
    let json: serde_json::Value = serde_json::from_str(&raw).unwrap();
    let flagged = json["reports"]
        .as_array()
        .unwrap()
        .iter()
        .any(|r| r["undecided_in_region"].as_u64().unwrap() > 0);
    assert!(flagged, "reports: {raw}");
}

#[test]
fn matrix_dumps_read_back_with_their_metadata() {
    let dir = tempfile::tempdir().unwrap();
    let dumped = format!("{WELL}\n[output]\nmatrix_dump = true\n");
    let cfg = write_config(dir.path(), "dump.toml", &dumped);
    let out_dir = dir.path().join("out");
    let out = run(&["spectrum", "--config", &cfg, "--out", out_dir.to_str().unwrap()]);
    assert_eq!(code(&out), 0, "stderr: {}", text(&out.stderr));

    let path = out_dir.join("matrix_0.bin");
    assert_eq!(std::fs::metadata(&path).unwrap().len(), 24 + 16 * 64 * 64);
    let (n, l, phi, a) = dilatlab::operator::read_matrix_dump(&path).unwrap();
    assert_eq!((n, l, phi), (64, 10.0, 0.1));
    assert_eq!(a.nrows(), 64);
}

#[test]
fn norms_and_scan_write_one_row_per_grid_point() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "rational.toml", RATIONAL);
    let out_dir = dir.path().join("out");

    let out = run(&["norms", "--config", &cfg, "--out", out_dir.to_str().unwrap()]);
    assert_eq!(code(&out), 0, "stderr: {}", text(&out.stderr));
    let norms = text(&std::fs::read(out_dir.join("norms.csv")).unwrap());
    // two p values over two angles
    assert_eq!(norms.lines().count(), 2 + 4);

    let out = run(&["scan", "--config", &cfg, "--out", out_dir.to_str().unwrap()]);
    assert_eq!(code(&out), 0, "stderr: {}", text(&out.stderr));
    let scan = text(&std::fs::read(out_dir.join("scan.csv")).unwrap());
    let rows: Vec<&str> = scan.lines().skip(2).collect();
    assert_eq!(rows.len(), 3);
    let expected = [
        "5.0000000000000000e-1",
        "1.0000000000000000e0",
        "2.0000000000000000e0",
    ];
    for (row, kappa) in rows.iter().zip(expected) {
        assert!(row.contains("cone_complement"));
        assert!(row.contains(kappa), "row {row} missing {kappa}");
    }
}
