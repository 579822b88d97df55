use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn scenario(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../scenarios").join(name)
}

fn tmp(name: &str) -> PathBuf {
    Path::new(env!("CARGO_TARGET_TMPDIR")).join(name)
}

fn relstab(args: &[&str], file: &Path, json: Option<&Path>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_relstab"));
    cmd.args(args).arg(file);
    if let Some(j) = json {
        cmd.arg("--json").arg(j);
    }
    cmd.output().expect("relstab runs")
}

fn report(args: &[&str], name: &str) -> (i32, Value) {
    let out = tmp(&format!("{name}.{}.json", args.join("-")));
    let o = relstab(args, &scenario(name), Some(&out));
    let v = serde_json::from_slice(&std::fs::read(&out).unwrap()).unwrap();
    (o.status.code().unwrap(), v)
}

#[test]
fn reports_carry_the_documented_keys() {
    let (code, v) = report(&["verify"], "two_spheres.scn");
    assert_eq!(code, 0);
    let keys: Vec<&str> = v.as_object().unwrap().keys().map(String::as_str).collect();
    assert_eq!(
        keys,
        ["hypotheses", "ladder", "oracle", "resolution", "scenario", "seed", "verdict", "verification", "version"]
    );
    assert_eq!(v["verdict"], "pass");
    assert_eq!(v["seed"], 3);
}

#[test]
fn exit_codes() {
    assert_eq!(report(&["run"], "c4_trivial_resolve.scn").0, 0);
    let (code, v) = report(&["run"], "c4_trivial_localize.scn");
    assert_eq!(code, 3);
    assert_eq!(v["verdict"], "not_finite");
    assert_eq!(v["resolution"]["kernel_dims"], serde_json::json!([1, 1, 1, 1]));

    let missing = relstab(&["run"], &tmp("does-not-exist.scn"), None);
    assert_eq!(missing.status.code(), Some(2));

    let bad = tmp("bad.scn");
    std::fs::write(&bad, "field p=2\ncontext kind=module\ngroup kind=cyclic n=4\nobjct kind=trivial\n").unwrap();
    let o = relstab(&["run"], &bad, None);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 4, column 1"));
}

#[test]
fn cap_override_changes_the_chain_length() {
    let out = tmp("cap2.json");
    let o = Command::new(env!("CARGO_BIN_EXE_relstab"))
        .args(["run", "--cap", "2", "--quiet", "--json"])
        .arg(&out)
        .arg(scenario("c4_trivial_resolve.scn"))
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let v: Value = serde_json::from_slice(&std::fs::read(&out).unwrap()).unwrap();
    assert_eq!(v["resolution"]["kernel_dims"], serde_json::json!([1, 1]));
}

#[test]
fn shipped_scenarios_pass() {
    for name in ["two_spheres.scn", "explicit_complex.scn", "v4_member.scn", "s3_permutation.scn", "c4_stable_hom.scn"] {
        let (code, v) = report(&["run"], name);
        assert_eq!((code, v["verdict"].as_str()), (0, Some("pass")), "{name}");
    }
    let (code, v) = report(&["oracle"], "c4_oracle.scn");
    assert_eq!(code, 0);
    assert_eq!(v["oracle"]["hom"]["agree"], true, "{}", v["oracle"]);
}

#[test]
fn runs_are_byte_identical() {
    let a = tmp("det-a.json");
    let b = tmp("det-b.json");
    relstab(&["verify"], &scenario("explicit_complex.scn"), Some(&a));
    relstab(&["verify"], &scenario("explicit_complex.scn"), Some(&b));
    assert_eq!(std::fs::read(a).unwrap(), std::fs::read(b).unwrap());
}

#[test]
fn text_report_goes_where_asked() {
    let text = tmp("two_spheres.txt");
    let o = Command::new(env!("CARGO_BIN_EXE_relstab"))
        .args(["run", "--quiet", "--text"])
        .arg(&text)
        .arg(scenario("two_spheres.scn"))
        .output()
        .unwrap();
    assert!(o.stdout.is_empty());
    let body = std::fs::read_to_string(text).unwrap();
    assert!(body.contains("verdict      pass"));
}
