use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

const FIXTURES: [&str; 6] = [
    "ex1_r3_spacelike",
    "ex2_r3_timelike",
    "ex5d_r5_g1",
    "ex5d_r5_g2",
    "flat_r3",
    "warped_r3",
];

fn fixtures() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

fn fixture(name: &str) -> String {
    fixtures().join(format!("{name}.json")).display().to_string()
}

fn paratensor(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_paratensor"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

#[test]
fn reports_match_golden_files() {
    let update = std::env::var_os("UPDATE_GOLDEN").is_some();
    for name in FIXTURES {
        let out = paratensor(&["report", "--all", &fixture(name), "--json"]);
        let code = out.status.code().unwrap();
        assert!(code == 0 || code == 1, "{name}: exit {code}");
        let text = stdout(&out);
        let golden = fixtures().join("golden").join(format!("{name}.json"));
        if update {
            fs::write(&golden, &text).unwrap();
            continue;
        }
        let expected = fs::read_to_string(&golden)
            .unwrap_or_else(|e| panic!("{}: {e}; run with UPDATE_GOLDEN=1", golden.display()));
        assert!(text == expected, "{name}: report differs from {}", golden.display());
    }
}

#[test]
fn repeated_runs_are_byte_identical() {
    let args = ["report", "--all", &fixture("ex2_r3_timelike"), "--json", "--seed", "7"];
    let first = paratensor(&args);
    let second = paratensor(&args);
    assert_eq!(first.stdout, second.stdout);
    assert!(stdout(&first).contains("\"seed\": 7"));
}

#[test]
fn validate_example_one_passes() {
    let out = paratensor(&["validate", &fixture("ex1_r3_spacelike")]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("axioms.phi_squared"));
    assert!(text.contains("summary: 12 pass, 0 fail, 0 inapplicable"), "{text}");
}

#[test]
fn soliton_solve_reports_least_squares_constants() {
    let out = paratensor(&["soliton", "solve", &fixture("ex1_r3_spacelike"), "--potential", "xi", "--json"]);
    assert_eq!(out.status.code(), Some(1));
    let text = stdout(&out);
    assert!(text.contains("least squares: lambda = 0, mu = 2; residual diag (1, -1, 0); residual norm 1.4142135623730951"));
    assert!(text.contains("\"lambda\": \"0\""));
}

#[test]
fn paper_frame_sum_ricci_on_example_two() {
    let out = paratensor(&[
        "curvature",
        &fixture("ex2_r3_timelike"),
        "--ricci-mode",
        "paper_frame_sum",
        "--json",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("\"ricci_mode\": \"paper_frame_sum\""));
    assert!(text.contains("\"details\": \"diag(-2, -2, -2); r = -2\""), "{text}");
    assert!(text.contains("\"details\": \"diag(0, 0, -2); r = 2\""), "{text}");
}

#[test]
fn base_point_override_changes_signature() {
    let out = paratensor(&["validate", &fixture("ex5d_r5_g2"), "--base-point", "0,0,0,2,0"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("index 3 at base point"));
}

#[test]
fn extension_is_optional() {
    let path = fixtures().join("flat_r3").display().to_string();
    let out = paratensor(&["torse", &path]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("classification=recurrent_case_II"));
}

#[test]
fn truncated_manifest_is_an_input_error() {
    let text = fs::read_to_string(fixture("ex1_r3_spacelike")).unwrap();
    let dir = std::env::temp_dir().join(format!("paratensor-cli-{}", std::process::id()));
    fs::create_dir_all(&dir).unwrap();
    let path = dir.join("truncated.json");
    fs::write(&path, &text[..200]).unwrap();
    let out = paratensor(&["validate", &path.display().to_string()]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("malformed manifest at line"), "{err}");
    fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn usage_errors_exit_with_two() {
    let ex1 = fixture("ex1_r3_spacelike");
    for args in [
        vec!["frobnicate", ex1.as_str()],
        vec!["validate", ex1.as_str(), "--no-such-flag"],
        vec!["curvature", ex1.as_str(), "--ricci-mode", "sideways"],
        vec!["validate", "/nonexistent/manifest.json"],
        vec!["validate", ex1.as_str(), "--base-point", "0,x,0"],
        vec!["collinear", &fixture("ex5d_r5_g1")],
        vec!["curvature", &fixture("ex5d_r5_g1"), "--ricci-mode", "paper_frame_sum"],
    ] {
        let out = paratensor(&args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn oracle_halving_on_example_one() {
    let out = paratensor(&["oracle", &fixture("ex1_r3_spacelike")]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("ratio 4 (expected in [3, 5])"));
}
