use std::process::Command;

use ::lamination::cli::{run, EXIT_DOMAIN, EXIT_OK, EXIT_USAGE, EXIT_VERIFY};
use ::lamination::io::parse_lam_json;

fn lamcli(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("lamcli").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

#[test]
fn map_angle() {
    assert_eq!(lamcli(&["map", "--degree", "2", "--angle", "1/3"]), (0, "2/3\n".into(), String::new()));
    let (code, out, _) = lamcli(&["map", "-d", "3", "--leaf", "1/8,3/8"]);
    assert_eq!((code, out.as_str()), (0, "[\"1/8\",\"3/8\"]\n"));
    let (code, out, _) = lamcli(&["map", "--leaf", "1/4,3/4"]);
    assert_eq!((code, out.as_str()), (0, "{\"point\":\"1/2\"}\n"));
}

#[test]
fn mac2scm_quad() {
    let (code, out, _) = lamcli(&["mac2scm", "--degree", "3", "--major", "1/8,3/8"]);
    assert_eq!(code, EXIT_OK);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["scm"]["polygon"], serde_json::json!(["1/8", "1/4", "3/8", "3/4"]));
    assert_eq!(v["mac"]["coroots"], serde_json::json!(["3/4"]));
    let (_, pretty, _) = lamcli(&["mac2scm", "--degree", "3", "--major", "1/8,3/8", "--pretty"]);
    assert!(pretty.contains("{1/8, 1/4, 3/8, 3/4}") && pretty.contains("3/4]"));
}

#[test]
fn scm2mac_inverts() {
    let (code, out, _) = lamcli(&["scm2mac", "-d", "3", "--polygon", "1/8,1/4,3/8,3/4"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["mac"]["major"], serde_json::json!(["1/8", "3/8"]));
}

#[test]
fn exit_codes() {
    assert_eq!(lamcli(&[]).0, EXIT_USAGE);
    assert_eq!(lamcli(&["frobnicate"]).0, EXIT_USAGE);
    assert_eq!(lamcli(&["map", "--angle", "2/4"]).0, EXIT_USAGE);
    assert_eq!(lamcli(&["map", "--angle", "1/3", "--leaf", "1/3,2/3"]).0, EXIT_USAGE);
    assert_eq!(lamcli(&["map", "--degree", "1", "--angle", "1/3"]).0, EXIT_DOMAIN);
    let (code, _, err) = lamcli(&["coroots", "-d", "3", "--major", "1/3,2/3"]);
    assert_eq!(code, EXIT_DOMAIN);
    assert!(err.contains("not a MAC"));
    assert_eq!(lamcli(&["scm2mac", "-d", "3", "--polygon", "0,1/3,2/3"]).0, EXIT_DOMAIN);
    assert_eq!(lamcli(&["render", "/nonexistent/lam.json"]).0, EXIT_USAGE);
    assert_eq!(lamcli(&["--help"]).0, EXIT_OK);
    // The verification exit code is reserved for suites that find a
    // violation; a passing suite exits 0.
    assert_ne!(EXIT_VERIFY, EXIT_OK);
}

#[test]
fn check_suite_degree_3() {
    let (code, out, _) = lamcli(&["check", "--suite", "all", "--degree", "3", "--max-period", "5"]);
    assert_eq!(code, EXIT_OK);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    let reports = v.as_array().unwrap();
    assert!(reports.len() >= 6);
    assert!(reports.iter().all(|r| r["failed"] == 0 && r["passed"].as_u64().unwrap() > 0));
}

#[test]
fn pullback_json_and_render_file() {
    let dir = tempfile::tempdir().unwrap();
    let json = dir.path().join("basilica.json");
    let json_s = json.to_str().unwrap();
    let (code, out, _) = lamcli(&["pullback", "--major", "1/3,2/3", "--depth", "2", "--out", json_s]);
    assert_eq!((code, out.as_str()), (0, ""));
    let doc = parse_lam_json(&std::fs::read_to_string(&json).unwrap()).unwrap();
    assert_eq!(doc.leaves.len(), 4);
    assert_eq!(doc.leaves.iter().filter(|l| l.depth == Some(2)).count(), 2);
    let (code, svg, _) = lamcli(&["render", json_s]);
    assert_eq!(code, 0);
    assert!(svg.starts_with("<svg") && svg.trim_end().ends_with("</svg>"));
    assert_eq!(svg.matches("<line").count(), 5);
    let (_, again, _) = lamcli(&["render", json_s]);
    assert_eq!(svg, again);
}

#[test]
fn catalog_and_classify() {
    let (code, out, _) = lamcli(&["catalog", "-d", "2", "--max-period", "3"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    let majors: Vec<_> = v.as_array().unwrap().iter().map(|m| m["major"].clone()).collect();
    assert!(majors.contains(&serde_json::json!(["2/7", "5/7"])));
    let (_, out, _) = lamcli(&["classify", "--polygon", "1/7,2/7,4/7"]);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["class"]["tag"], "Rotational");
    assert_eq!(v["class"]["rotation"], "1/3");
}

#[test]
fn binary_exit_status() {
    let bin = env!("CARGO_BIN_EXE_lamcli");
    let o = Command::new(bin).args(["map", "--degree", "2", "--angle", "1/3"]).output().unwrap();
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(String::from_utf8_lossy(&o.stdout), "2/3\n");
    let o = Command::new(bin).args(["mac2scm", "-d", "2", "--major", "1/5,2/5"]).output().unwrap();
    assert_eq!(o.status.code(), Some(EXIT_DOMAIN));
}
