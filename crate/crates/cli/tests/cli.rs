use std::path::Path;
use std::process::{Command, Output};

use covgen::search::{load_state, save_state};

fn covgen(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_covgen"))
        .args(args)
        .env("RUST_LOG", "off")
        .output()
        .expect("binary runs")
}

fn stdout(args: &[&str]) -> String {
    let out = covgen(args);
    assert!(
        out.status.success(),
        "covgen {args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

/// `(degree, dim C, sigma, dim S, delta)` rows of a printed table.
fn rows(text: &str) -> Vec<[u64; 5]> {
    text.lines()
        .filter_map(|l| {
            let v: Vec<u64> = l.split_whitespace().take(5).map_while(|w| w.parse().ok()).collect();
            (v.len() == 5).then(|| [v[0], v[1], v[2], v[3], v[4]])
        })
        .collect()
}

#[test]
fn dims_examples() {
    let r = rows(&stdout(&["dims", "--d", "8", "--max-degree", "3"]));
    assert_eq!(r, [[1, 1, 0, 0, 1], [2, 5, 1, 0, 4], [3, 13, 5, 0, 8]]);
    let r = rows(&stdout(&["dims", "--d", "1", "--max-degree", "2"]));
    assert_eq!(r.iter().map(|r| r[4]).collect::<Vec<_>>(), [1, 0]);
    let r = rows(&stdout(&["dims", "--d", "8", "--max-degree", "1"]));
    assert_eq!(r, [[1, 1, 0, 0, 1]]);
}

#[test]
fn dims_json() {
    let text = stdout(&["dims", "--d", "4", "--max-degree", "4", "--json"]);
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    let deltas: Vec<u64> = v.as_array().unwrap().iter().map(|r| r["delta"].as_u64().unwrap()).collect();
    assert_eq!(deltas, [1, 2, 2, 0]);
}

#[test]
fn run_degree_two_octic() {
    let text = stdout(&["run", "--d", "8", "--max-degree", "2"]);
    for (name, order) in [("dv1", 12), ("dv2", 8), ("dv3", 4), ("dv4", 0)] {
        let line = text.lines().find(|l| l.trim_start().starts_with(name)).unwrap();
        assert!(line.contains(&format!("order {order:>2}")), "{line}");
    }
    assert!(text.contains("generators: 5"));
}

#[test]
fn run_quadratic() {
    let text = stdout(&["run", "--d", "2", "--max-degree", "4", "--verify-completeness"]);
    assert!(text.contains("generators: 2"));
    assert!(text.contains("check: complete"));
}

#[test]
fn transvect_examples() {
    let z2 = stdout(&["transvect", "t", "t", "2", "--d", "8"]);
    assert!(z2.starts_with("[t, t]^2 = z2\n"), "{z2}");
    let dv2 = stdout(&["transvect", "t", "t", "4", "--d", "8"]);
    assert!(dv2.starts_with("[t, t]^4 = (3*z2^2 + z4)/t^2\n"), "{dv2}");
    assert!(dv2.contains("order 8"));
    let zero = stdout(&["transvect", "t", "t", "3", "--d", "8"]);
    assert!(zero.contains("identically zero"));
}

#[test]
fn transvect_errors() {
    let out = covgen(&["transvect", "t", "nope", "2", "--d", "8"]);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("unknown generator"));
    let out = covgen(&["transvect", "t", "t", "9", "--d", "8"]);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("out of range"));
}

#[test]
fn invalid_flags_are_rejected() {
    assert!(!covgen(&["dims", "--d", "x", "--max-degree", "2"]).status.success());
    assert!(!covgen(&["run", "--d", "8", "--max-degree", "2", "--mode", "other"]).status.success());
    assert!(!covgen(&["frobnicate"]).status.success());
}

#[test]
fn checkpoint_resume_and_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let partial = dir.path().join("partial.json");
    let p = partial.to_str().unwrap();
    stdout(&["run", "--d", "8", "--max-degree", "4", "--out", p]);

    let saved = std::fs::read_to_string(&partial).unwrap();
    let state = load_state(&partial).unwrap();
    assert_eq!(state.to_json().unwrap(), saved);
    let copy = dir.path().join("copy.json");
    save_state(&state, &copy).unwrap();
    assert_eq!(std::fs::read_to_string(&copy).unwrap(), saved);

    let full = dir.path().join("full.json");
    let resumed = stdout(&["run", "--d", "8", "--max-degree", "6", "--resume", p, "--out", full.to_str().unwrap()]);
    let direct = stdout(&["run", "--d", "8", "--max-degree", "6"]);
    assert_eq!(resumed, direct);
    assert!(resumed.contains("generators: 43"));
}

#[test]
fn corrupt_checkpoints_are_refused() {
    let dir = tempfile::tempdir().unwrap();
    let good = dir.path().join("good.json");
    stdout(&["run", "--d", "8", "--max-degree", "3", "--out", good.to_str().unwrap()]);
    let text = std::fs::read_to_string(&good).unwrap();

    let check = |name: &str, content: &str, needle: &str| {
        let path = dir.path().join(name);
        std::fs::write(&path, content).unwrap();
        let out = covgen(&["run", "--d", "8", "--max-degree", "4", "--resume", path.to_str().unwrap()]);
        assert!(!out.status.success(), "{name} accepted");
        let err = String::from_utf8_lossy(&out.stderr);
        assert!(err.contains(needle), "{name}: {err}");
    };
    check("schema.json", &text.replacen("covgen/1", "covgen/9", 1), "schema");
    check("truncated.json", &text[..text.len() / 2], "loading");
    let tampered = tamper_coefficient(&text);
    check("tampered.json", &tampered, "checkpoint rejected");
}

/// Changes the leading numerator of a stored generator Z-form.
fn tamper_coefficient(text: &str) -> String {
    let mut v: serde_json::Value = serde_json::from_str(text).unwrap();
    let gens = v["generators"].as_array_mut().unwrap();
    let g = gens.iter_mut().find(|g| g["name"] == "tr1").unwrap();
    let terms = g["zform"]["terms"].as_array_mut().unwrap();
    let c = &mut terms[0]["num"];
    let old = c.as_str().unwrap().to_string();
    *c = serde_json::Value::String(if old == "2" { "3".into() } else { "2".into() });
    serde_json::to_string_pretty(&v).unwrap()
}

#[test]
fn identical_flags_give_identical_stdout() {
    let a = stdout(&["run", "--d", "6", "--max-degree", "6", "--mode", "generic", "--threads", "1"]);
    let b = stdout(&["run", "--d", "6", "--max-degree", "6", "--mode", "generic", "--threads", "2"]);
    assert_eq!(a, b);
}

#[test]
fn errata_flags_known_discrepancies() {
    let dir = tempfile::tempdir().unwrap();
    let state = dir.path().join("octic.json");
    stdout(&["run", "--d", "8", "--max-degree", "8", "--out", state.to_str().unwrap()]);
    let text = stdout(&["errata", "--state", state.to_str().unwrap()]);
    let status = |location: &str| {
        let line = text
            .lines()
            .find(|l| l.ends_with(&format!("] {location}")))
            .unwrap_or_else(|| panic!("{location} missing"));
        line.starts_with("[match")
    };
    for loc in ["degree 5: dim C", "degree 5: sigma", "degree 5: dim S", "degree 5: delta"] {
        assert!(status(loc), "{loc}");
    }
    assert!(!status("D(t) for d = 8"));
    assert!(!status("degree 8 paragraph"));
    assert!(!status("slice map sigma(x_i)"));
    assert!(!status("order of z2^i2 ... zd^id, at z2"));
    assert!(status("degree-5 syzygy 1"));
    assert!(Path::new(&state).exists());
}
