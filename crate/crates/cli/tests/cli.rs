//! End-to-end checks of the command-line surface.

use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_tautring"))
}

fn stdout_of(cmd: &mut Command) -> String {
    let out = cmd.output().expect("binary runs");
    String::from_utf8(out.stdout).expect("utf8")
}

#[test]
fn dims_tables() {
    let out = stdout_of(bin().args(["dims", "--ring", "FxF"]));
    assert_eq!(out.trim(), "0:1 1:2 2:6 3:8 4:12 5:8 6:6 7:2 8:1");
    let out = stdout_of(bin().args(["dims", "--ring", "F"]));
    assert_eq!(out.trim(), "0:1 1:1 2:2 3:1 4:1");
    let out = stdout_of(bin().args(["dims", "--ring", "Gr"]));
    assert_eq!(out.trim(), "0:1 1:1 2:2 3:2 4:3 5:2 6:2 7:1 8:1");
    let out = stdout_of(bin().args(["dims", "--ring", "K3:2,4"]));
    assert_eq!(out.trim(), "0:1 1:2 2:4 3:2 4:1");
}

#[test]
fn reduce_and_integrate() {
    let out = stdout_of(bin().args(["reduce", "--ring", "F", "12*g*c-5*g^3"]));
    assert_eq!(out.trim(), "0");
    let out = stdout_of(bin().args(["reduce", "--ring", "F", "4*c^2 - g^4"]));
    assert_eq!(out.trim(), "0");
    let out = stdout_of(bin().args(["integrate", "--ring", "F", "g^4"]));
    assert_eq!(out.trim(), "108");
    let out = stdout_of(bin().args(["integrate", "--ring", "F", "g^2*c"]));
    assert_eq!(out.trim(), "45");
    let out = stdout_of(bin().args(["integrate", "--ring", "Gr", "x1^8"]));
    assert_eq!(out.trim(), "14");
    let out = stdout_of(bin().args(["reduce", "--ring", "FxF", "D*I - 6*c1*D + 3*g1^2*D"]));
    assert_eq!(out.trim(), "0");
    let out = stdout_of(bin().args(["reduce", "--ring", "K3:3,4", "D12*D23 - D13*D23"]));
    assert_eq!(out.trim(), "0");
}

#[test]
fn render_parse_round_trip() {
    // normal-form renderings re-parse to themselves
    for (ring, expr) in [
        ("F", "7/3*g*c + g^3"),
        ("FxF", "I^2"),
        ("FxF", "delta(g^2 - 2*c)"),
        ("K3:2,4", "D12*h1 + 5*o2*h1"),
    ] {
        let first = stdout_of(bin().args(["reduce", "--ring", ring, expr]));
        let second = stdout_of(bin().args(["reduce", "--ring", ring, first.trim()]));
        assert_eq!(first.trim(), second.trim(), "round trip in {ring}");
    }
}

#[test]
fn exit_codes() {
    // usage error: unknown ring
    let status = bin()
        .args(["dims", "--ring", "Elliptic"])
        .output()
        .unwrap();
    assert_eq!(status.status.code(), Some(2));
    // usage error: unknown symbol carries a suggestion
    let out = bin().args(["reduce", "--ring", "F", "q^2"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("available"));
    // closure violation in an explicit composition
    let out = bin().args(["compose", "I", "I"]).output().unwrap();
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("outside tautological closure"));
    // degree mismatch is a usage error
    let out = bin().args(["reduce", "--ring", "F", "g + c"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn verify_is_deterministic_and_filters() {
    let run = || stdout_of(bin().args(["verify", "--only", "grassmann", "--no-time"]));
    let a = run();
    let b = run();
    assert_eq!(a, b, "report bodies must be byte-identical");
    assert!(a.lines().all(|l| l.contains("grassmann") || l.starts_with("summary")));
    assert!(a.contains("failures=0"));
}

#[test]
fn verify_parallel_preserves_order() {
    let serial = stdout_of(bin().args(["verify", "--no-time"]));
    let parallel = stdout_of(bin().args(["verify", "--no-time", "--jobs", "4"]));
    assert_eq!(serial, parallel);
}

#[test]
fn verify_report_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let status = bin()
        .args([
            "verify",
            "--only",
            "fano-numbers",
            "--report",
            path.to_str().unwrap(),
        ])
        .status()
        .unwrap();
    assert!(status.success());
    let body: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(body["all_passed"], serde_json::Value::Bool(true));
    assert_eq!(body["entries"][0]["id"], "fano-numbers");
}

#[test]
fn config_failure_modes() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.cfg");
    std::fs::write(&bad, "fujiki_constant = 2\n").unwrap();
    let out = bin()
        .args(["--config", bad.to_str().unwrap(), "verify", "--no-time"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1), "verification failure expected");
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("id=fujiki-consistency status=fail"));
    // model-dependent entries downgrade to skipped
    assert!(text.contains("id=relation-coherence status=skipped"));

    let unknown = dir.path().join("unknown.cfg");
    std::fs::write(&unknown, "not_a_key = 1\n").unwrap();
    let out = bin()
        .args(["--config", unknown.to_str().unwrap(), "dims", "--ring", "F"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2), "config errors abort");
}

#[test]
fn config_via_environment() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("env.cfg");
    std::fs::write(&cfg, "polarization_degree_d = 2\n").unwrap();
    let out = bin()
        .env("TAUTRING_CONFIG", cfg.to_str().unwrap())
        .args(["dims", "--ring", "F"])
        .output()
        .unwrap();
    assert!(out.status.success());
}

#[test]
fn compose_subcommand() {
    let out = stdout_of(bin().args(["compose", "--model", "cohom", "pi2", "pi6"]));
    assert_eq!(out.trim(), "0");
    let out = stdout_of(bin().args(["compose", "delta(g)", "delta(c)"]));
    assert!(out.trim() != "0");
    // spec headline: the filtered composite is exactly zero in cohomology
    let out = stdout_of(bin().args([
        "reduce",
        "--ring",
        "FxF",
        "comp(pi4, comp(delta(g), pi4))",
    ]));
    assert_eq!(out.trim(), "0");
}

#[test]
fn derive_subcommand() {
    let out = stdout_of(bin().args([
        "derive",
        "--target",
        "6*delta(g) + g1*g2*(g1+g2)*I",
        "--family",
        "gc:5",
    ]));
    assert!(out.contains("g1^4*g2: 1/4"));
    assert!(out.contains("g1^3*g2^2: 7/12"));
    assert!(out.contains("kernel dimension: 0"));
    // the raw monomial space leaves a kernel
    let out = stdout_of(bin().args([
        "derive",
        "--target",
        "6*delta(g) + g1*g2*(g1+g2)*I",
        "--family",
        "gc-raw:5",
    ]));
    let kernel_line = out
        .lines()
        .find(|l| l.starts_with("kernel dimension"))
        .unwrap();
    let dim: usize = kernel_line.rsplit(' ').next().unwrap().parse().unwrap();
    assert!(dim > 0, "raw family must be degenerate");
}

#[test]
fn every_report_anchor_is_indexed() {
    let index = std::fs::read_to_string(
        std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("../../docs/anchors.md"),
    )
    .expect("anchor index exists");
    let out = stdout_of(bin().args(["verify", "--no-time"]));
    for line in out.lines() {
        let Some(rest) = line.split("anchor=\"").nth(1) else {
            continue;
        };
        let anchor = rest.split('"').next().unwrap();
        assert!(
            index.contains(anchor),
            "anchor `{anchor}` missing from docs/anchors.md"
        );
    }
}

#[test]
fn k3_power_flag_is_validated() {
    let out = bin()
        .args(["verify", "--k3-max-power", "6"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn pushforward_and_transpose_operators() {
    // pr2_*(Delta * g1^3) = g^3 through the expression language
    let out = stdout_of(bin().args(["reduce", "--ring", "FxF", "pf2(delta(g^3))"]));
    assert_eq!(out.trim(), "g^3");
    let out = stdout_of(bin().args(["reduce", "--ring", "FxF", "pf2(I*g1^2)"]));
    assert_eq!(out.trim(), "21");
    let out = stdout_of(bin().args(["reduce", "--ring", "FxF", "pf1(g2^4)"]));
    assert_eq!(out.trim(), "108");
    // transpose on a cycle swaps the factors
    let out = stdout_of(bin().args(["reduce", "--ring", "FxF", "tr(g1^2*c2) - g2^2*c1"]));
    assert_eq!(out.trim(), "0");
    // low-degree pushforward warns and returns zero
    let out = bin()
        .args(["reduce", "--ring", "FxF", "pf2(I)"])
        .output()
        .unwrap();
    assert_eq!(String::from_utf8_lossy(&out.stdout).trim(), "0");
    assert!(String::from_utf8_lossy(&out.stderr).contains("degree below 4"));
}

#[test]
fn derive_with_expression_family() {
    let out = stdout_of(bin().args([
        "derive",
        "--target",
        "c1*I",
        "--family",
        "g1^4; g1^3*g2; c1*g2^2; c1*c2",
    ]));
    assert!(out.contains("g1^4: 1/18"));
    assert!(out.contains("g1^3*g2: 5/36"));
    assert!(out.contains("c1*g2^2: 1/3"));
    assert!(out.contains("c1*c2: -1/3"));
    // a target outside the span reports absence and a nonzero exit
    let out = bin()
        .args(["derive", "--target", "I", "--family", "g1^2; g2^2"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stdout).contains("no solution"));
}

#[test]
fn integrate_error_paths() {
    // wrong degree is a usage error, not a silent zero
    let out = bin()
        .args(["integrate", "--ring", "F", "g^3"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    // parse errors carry a byte offset
    let out = bin()
        .args(["reduce", "--ring", "F", "g^"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("byte"));
}
