use std::path::PathBuf;
use std::process::{Command, Output};

use frontal_kit::germs::parse_germ;

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name)
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_frontal-kit"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(args: &[&str]) -> String {
    let out = run(args);
    assert!(
        out.status.success(),
        "{args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn json(args: &[&str]) -> serde_json::Value {
    serde_json::from_str(&stdout(args)).expect("valid JSON")
}

fn path_str(p: &std::path::Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn analyze_cuspidal_edge() {
    let ce = fixture("ce.germ");
    let v = json(&["analyze", path_str(&ce)]);
    assert_eq!(v["schema"], 1);
    assert_eq!(v["surface"]["class"], "CuspidalEdge");
    assert_eq!(v["surface"]["lift"]["integral"], true);
    let input = v["input"].as_str().unwrap();
    assert_eq!(parse_germ(input).unwrap().to_canonical(), input);
}

#[test]
fn analyze_curve_type() {
    let v = json(&["analyze", path_str(&fixture("curve234.germ"))]);
    assert_eq!(v["curve"]["type"], "(2,3,4)");
    assert_eq!(v["curve"]["order"], 2);
}

#[test]
fn analyze_is_reproducible() {
    let ce = fixture("sw.germ");
    let a = stdout(&["analyze", path_str(&ce)]);
    let b = stdout(&["analyze", path_str(&ce)]);
    assert_eq!(a, b);
    assert!(!a.contains("timings_ms"));
    assert!(stdout(&["analyze", path_str(&ce), "--timings"]).contains("timings_ms"));
}

#[test]
fn analyze_out_file() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("r.json");
    let printed = stdout(&[
        "analyze",
        path_str(&fixture("ce.germ")),
        "--out",
        path_str(&out),
    ]);
    assert!(printed.is_empty());
    let v: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(out).unwrap()).unwrap();
    assert_eq!(v["surface"]["class"], "CuspidalEdge");
}

#[test]
fn analyze_at_base_point() {
    let v = json(&["analyze", path_str(&fixture("ce.germ")), "--at", "0,1"]);
    assert_eq!(v["surface"]["class"], "Regular");
    assert_eq!(v["base_point"], serde_json::json!(["0", "1"]));
}

#[test]
fn exit_codes() {
    let empty = run(&["analyze", path_str(&fixture("empty.germ"))]);
    assert_eq!(empty.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&empty.stderr).contains("1:1"));

    let missing = run(&["analyze", "/nonexistent/x.germ"]);
    assert_eq!(missing.status.code(), Some(2));

    // tangent needs a curve
    let surf = run(&["tangent", path_str(&fixture("ce.germ"))]);
    assert_eq!(surf.status.code(), Some(3));

    let unknown = run(&["nonsense"]);
    assert_eq!(unknown.status.code(), Some(2));

    let flat = run(&["openings", "versal", "--f", "t^4", "--K", "5"]);
    assert_eq!(flat.status.code(), Some(3));
}

#[test]
fn tangent_normal_form() {
    let out = stdout(&["tangent", path_str(&fixture("twisted_cubic.germ"))]);
    assert_eq!(out, "(t+s, t^2+2*s*t, t^3+3*s*t^2)\n");
}

#[test]
fn tangent_classify_swallowtail() {
    let out = stdout(&["tangent", path_str(&fixture("curve234.germ")), "--classify"]);
    assert!(out.ends_with("class: Swallowtail\n"), "{out}");
}

#[test]
fn flat_connection_is_byte_identical() {
    for curve in ["twisted_cubic.germ", "curve234.germ"] {
        let c = fixture(curve);
        let plain = stdout(&["tangent", path_str(&c), "--classify"]);
        let via_file = stdout(&[
            "tangent",
            path_str(&c),
            "--classify",
            "--connection",
            path_str(&fixture("flat.json")),
        ]);
        let via_preset = stdout(&[
            "tangent",
            path_str(&c),
            "--classify",
            "--connection",
            "flat",
        ]);
        assert_eq!(plain, via_file);
        assert_eq!(plain, via_preset);
    }
}

#[test]
fn mesh_cuspidal_edge_counts() {
    let dir = tempfile::tempdir().unwrap();
    let obj = dir.path().join("ce.obj");
    let csv = dir.path().join("ce.csv");
    stdout(&[
        "mesh",
        path_str(&fixture("ce.germ")),
        "--grid",
        "100x100",
        "--obj",
        path_str(&obj),
        "--csv",
        path_str(&csv),
    ]);
    let text = std::fs::read_to_string(&obj).unwrap();
    let surface: Vec<&str> = text
        .split("o singular_locus")
        .next()
        .unwrap()
        .lines()
        .collect();
    assert_eq!(
        surface.iter().filter(|l| l.starts_with("v ")).count(),
        10000
    );
    assert_eq!(
        surface.iter().filter(|l| l.starts_with("f ")).count(),
        99 * 99
    );

    // the cuspidal edge is the image of s = 0: points (t, 0, 0)
    let locus = text.split("o singular_locus").nth(1).unwrap();
    let verts: Vec<Vec<f64>> = locus
        .lines()
        .filter_map(|l| l.strip_prefix("v "))
        .map(|l| l.split(' ').map(|x| x.parse().unwrap()).collect())
        .collect();
    assert_eq!(verts.len(), 100);
    assert!(verts.iter().all(|v| v[1] == 0.0 && v[2] == 0.0));
    assert!(locus.lines().any(|l| l.starts_with("l 10001 10002")));

    let csv = std::fs::read_to_string(csv).unwrap();
    assert_eq!(csv.lines().next(), Some("t,s,x1,x2,x3,sigma"));
    assert_eq!(csv.lines().count(), 10001);
}

#[test]
fn mesh_swallowtail_indices_valid() {
    let dir = tempfile::tempdir().unwrap();
    let obj = dir.path().join("sw.obj");
    stdout(&[
        "mesh",
        path_str(&fixture("sw.germ")),
        "--grid",
        "20x15",
        "--obj",
        path_str(&obj),
    ]);
    let text = std::fs::read_to_string(&obj).unwrap();
    let nv = text.lines().filter(|l| l.starts_with("v ")).count();
    for l in text.lines() {
        let refs = match l.split_once(' ') {
            Some(("f", r)) | Some(("l", r)) => r,
            _ => continue,
        };
        for i in refs.split(' ') {
            let i: usize = i.parse().unwrap();
            assert!((1..=nv).contains(&i), "{l}");
        }
        if l.starts_with("f ") {
            assert_eq!(refs.split(' ').count(), 4);
        }
    }
}

#[test]
fn mesh_curve_goes_through_tangent_surface() {
    let out = stdout(&[
        "mesh",
        path_str(&fixture("twisted_cubic.germ")),
        "--grid",
        "4x4",
    ]);
    assert_eq!(out, "vertices: 16\nfaces: 9\nsingular_locus: 4\n");
}

#[test]
fn openings_commands() {
    let v = json(&["openings", "member", "--f", "t^3", "--h", "t^5"]);
    assert_eq!(v["member"], true);
    let v = json(&["openings", "member", "--f", "t^3", "--h", "t^2"]);
    assert_eq!(v["member"], false);
    let v = json(&["openings", "versal", "--f", "t^2"]);
    assert_eq!(v["opening"], "(t^2, t^3)");
    let v = json(&["openings", "versal", "--f", "u,w^2"]);
    assert_eq!(v["opening"], "(u, w^2, w^3)");
    let v = json(&["openings", "jacobi", "--f", "u,w^2", "--K", "6"]);
    let rows = v["graded_dimensions"].as_array().unwrap();
    assert_eq!(rows.len(), 6);
    assert_eq!(v["f"], "(u, w^2)");
}

#[test]
fn duality_sphere_and_twice() {
    let c = fixture("smallcircle.germ");
    let once = stdout(&["duality", "sphere", "--curve", path_str(&c)]);
    let first = once.lines().next().unwrap();
    assert_eq!(first, "curve R->R^3: -4/5+2/5*t^2, -4/5*t+2/15*t^3, 3/5");
    let twice = stdout(&["duality", "sphere", "--curve", path_str(&c), "--twice"]);
    let original = parse_germ(&std::fs::read_to_string(&c).unwrap()).unwrap();
    assert_eq!(twice.lines().next().unwrap(), original.to_canonical());
}

#[test]
fn duality_sphere_rejects_off_sphere() {
    let out = run(&[
        "duality",
        "sphere",
        "--curve",
        path_str(&fixture("twisted_cubic.germ")),
    ]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn a3_table() {
    let out = stdout(&["duality", "a3-table"]);
    let rows: Vec<Vec<String>> = out
        .lines()
        .skip(1)
        .take(4)
        .map(|l| l.split('|').map(|c| c.trim().to_string()).collect())
        .collect();
    let expect = [
        ["(1,2,3)", "CuspidalEdge", "(1,2,3)", "CuspidalEdge"],
        ["(2,3,4)", "Swallowtail", "(1,2,4)", "FoldedUmbrella"],
        ["(1,2,4)", "FoldedUmbrella", "(2,3,4)", "Swallowtail"],
        ["(1,3,4)", "Unrecognized*", "(1,3,4)", "Unrecognized*"],
    ];
    for (r, e) in rows.iter().zip(expect) {
        assert_eq!(r, &e);
    }
}
