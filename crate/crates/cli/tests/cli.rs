use hypercf_cli::report::Report;
use hypercf_cli::{run, EXIT_MISMATCH, EXIT_OK, EXIT_USAGE};

fn call(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("hypercf").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn squash(s: &str) -> String {
    s.chars().filter(|c| !c.is_whitespace()).collect()
}

#[test]
fn expand_matches_published_listing() {
    let (code, out, err) = call(&["expand", "--p", "7", "--u", "2,4,5", "--steps", "65", "--cfe", "7"]);
    assert_eq!(code, EXIT_OK, "{err}");
    assert_eq!(squash(&out), squash(include_str!("golden/p7_u245.txt")));
    assert!(err.contains("residual: zero"));
}

#[test]
fn expand_json_roundtrip_is_idempotent() {
    let (code, out, _) = call(&["expand", "--p", "5", "--u", "1,2,1", "--steps", "20", "--format", "json"]);
    assert_eq!(code, EXIT_OK);
    let report: Report = serde_json::from_str(&out).unwrap();
    assert_eq!(report.p, 5);
    assert_eq!(report.u, [1, 2, 1]);
    assert_eq!(report.partial_quotients.len(), 20);
    assert_eq!(report.big_positions[0], [1, 5, 9]);
    assert_eq!(report.verified, Some(true));
    let again = serde_json::to_string(&report).unwrap();
    assert_eq!(again, out.trim_end());
    assert_eq!(serde_json::from_str::<Report>(&again).unwrap(), report);
}

#[test]
fn negative_u_is_reduced() {
    let (code, a, _) = call(&["pattern", "--p", "7", "--u", "-5,-3,-2", "--steps", "10"]);
    assert_eq!(code, EXIT_OK);
    let (_, b, _) = call(&["pattern", "--p", "7", "--u", "2,4,5", "--steps", "10"]);
    assert_eq!(a, b);
}

#[test]
fn parameter_errors_exit_2() {
    for args in [
        &["expand", "--p", "9", "--u", "1,1,1", "--steps", "5"][..],
        &["expand", "--p", "2", "--u", "1,1,1", "--steps", "5"],
        &["verify", "--p", "15", "--u", "1,1,1"],
    ] {
        let (code, _, err) = call(args);
        assert_eq!(code, EXIT_USAGE, "{args:?}");
        assert!(err.contains("p must be an odd prime"), "{err}");
    }
    let (code, _, err) = call(&["pattern", "--p", "7", "--u", "0,1,1", "--steps", "5"]);
    assert_eq!(code, EXIT_USAGE);
    assert!(!err.is_empty());
    let (code, _, _) = call(&["pattern", "--p", "7", "--u", "1,1", "--steps", "5"]);
    assert_eq!(code, EXIT_USAGE);
    let (code, _, _) = call(&["expand", "--p", "3", "--u", "1", "--equation", "eq4", "--steps", "5"]);
    assert_eq!(code, EXIT_USAGE);
    let (code, _, _) = call(&["verify", "--p", "7"]);
    assert_eq!(code, EXIT_USAGE);
    let (code, _, _) = call(&["frobnicate"]);
    assert_eq!(code, EXIT_USAGE);
}

#[test]
fn help_exits_0() {
    let (code, out, _) = call(&["--help"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("expand"));
}

#[test]
fn verify_sweep_over_all_triples() {
    let (code, out, _) = call(&["verify", "--p", "3,5", "--all-triples", "--steps", "12", "--jobs", "2"]);
    assert_eq!(code, EXIT_OK, "{out}");
    assert_eq!(out.matches("verified: true").count(), 8 + 64);
}

#[test]
fn verify_json_list_for_sweeps() {
    let (code, out, _) = call(&["verify", "--p", "3", "--all-triples", "--steps", "10", "--format", "json"]);
    assert_eq!(code, EXIT_OK);
    let reports: Vec<Report> = serde_json::from_str(&out).unwrap();
    assert_eq!(reports.len(), 8);
    assert!(reports.iter().all(|r| r.verified == Some(true)));
}

#[test]
fn verify_with_listing_r_fails() {
    let (code, out, _) = call(&["verify", "--p", "3", "--u", "1,1,1", "--steps", "6", "--r", "listing"]);
    assert_eq!(code, EXIT_MISMATCH);
    assert!(out.contains("verified: false"));
}

#[test]
fn mills_robbins_expansion() {
    let (code, out, _) = call(&["expand", "--p", "7", "--u", "-1", "--equation", "eq4", "--steps", "30", "--format", "json"]);
    assert_eq!(code, EXIT_OK);
    let r: Report = serde_json::from_str(&out).unwrap();
    assert!(r.partial_quotients.iter().all(|q| q.coeffs == [0, 6]));
    assert_eq!(r.nu, None);
}

#[test]
fn expand_from_file() {
    // x^2 - T x - 1 = 0 has the root [T, T, T, ...]
    let dir = std::env::temp_dir().join(format!("hypercf-cli-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("omega.txt");
    std::fs::write(&path, "# x^2 - T x - 1\n0: 2\n1: 0 2\n2: 1\n").unwrap();
    let (code, out, err) = call(&[
        "expand", "--p", "3", "--equation", "file", "--file", path.to_str().unwrap(), "--steps", "6",
    ]);
    assert_eq!(code, EXIT_OK, "{err}");
    assert!(out.contains("cfe [t, t, t, t, t, t]"), "{out}");
    let (code, _, err) = call(&["expand", "--p", "3", "--equation", "file", "--steps", "6"]);
    assert_eq!(code, EXIT_USAGE);
    assert!(err.contains("--file"));
}

#[test]
fn identities_and_measure() {
    let (code, out, _) = call(&["identities"]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(out.lines().count(), 5);
    let (code, out, _) = call(&["measure", "--p", "7", "--k", "3", "--u", "2,4,5"]);
    assert_eq!(code, EXIT_OK, "{out}");
    assert!(out.contains("nu 6"));
    assert!(out.contains("(2, 14, 97, s=25)"));
    assert!(out.contains("closed forms agree: true"));
    let (code, out, _) = call(&["measure", "--p", "3", "--format", "json"]);
    assert_eq!(code, EXIT_OK);
    let r: Report = serde_json::from_str(&out).unwrap();
    assert_eq!((r.nu.unwrap().num, r.nu.unwrap().den), (10, 3));
}
