use std::path::Path;
use std::process::{Command, Output};

use relcap::geometry::parse_region;

fn relcap(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_relcap")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_owned()
}

#[test]
fn extremal_prints_the_pick_jet() {
    let o = relcap(&["extremal", "--map", "pick", "--param", "0.5", "--numeric-check"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let residual: f64 = text
        .lines()
        .find_map(|l| l.strip_prefix("class-B residual = "))
        .expect("residual line")
        .parse()
        .unwrap();
    assert!(residual.abs() < 1e-12, "{text}");
    assert!(text.contains("numeric jet"));
}

#[test]
fn invalid_parameters_exit_with_an_error() {
    let o = relcap(&["extremal", "--map", "two-slit", "--param", "1.5"]);
    assert_eq!(o.status.code(), Some(2));
    let o = relcap(&["verify", "--suite", "nope", "--trials", "1", "--samples", "10", "--seed", "1"]);
    assert!(!o.status.success());
}

#[test]
fn relcap_and_hcap_write_csv() {
    let dir = tempfile::tempdir().unwrap();
    let region = write(dir.path(), "e.json", r#"{"primitives":[{"disk":{"center":[-0.2,0.1],"radius":0.3}}]}"#);
    let csv = dir.path().join("r.csv");
    let o = relcap(&[
        "relcap", "--region", &region, "--samples", "4000", "--offsets", "0.1,0.5,4", "--eps", "1e-6", "--seed", "3",
        "--csv", csv.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = std::fs::read_to_string(&csv).unwrap();
    assert!(text.starts_with("kind,offset,value,stderr\n"));
    assert_eq!(text.lines().count(), 6);

    let slit = write(dir.path(), "s.json", r#"{"primitives":[{"segment":{"a":[0,0],"b":[0,1]}}]}"#);
    let o = relcap(&[
        "hcap", "--region", &slit, "--heights", "5,10,20", "--samples", "4000", "--eps", "1e-4", "--seed", "3",
        "--fast-exit",
    ]);
    assert!(o.status.success());
    assert!(stdout(&o).starts_with("hcap = "));
}

#[test]
fn symmetrize_writes_a_parsable_region() {
    let dir = tempfile::tempdir().unwrap();
    let region = write(dir.path(), "e.json", r#"{"primitives":[{"disk":{"center":[0,0.3],"radius":0.4}}]}"#);
    for (op, grid, center) in [("cr-minus", "32,64", "0,0"), ("steiner", "40,40", "0,0"), ("average", "32,64", "0,0")] {
        let out = dir.path().join(format!("{op}.json"));
        let o = relcap(&[
            "symmetrize", "--region", &region, "--op", op, "--center", center, "--grid", grid, "--out",
            out.to_str().unwrap(),
        ]);
        assert!(o.status.success(), "{op}: {}", String::from_utf8_lossy(&o.stderr));
        let r = parse_region(&std::fs::read_to_string(&out).unwrap()).unwrap();
        assert!(!r.is_empty());
    }
    let out = dir.path().join("bad.json");
    let o = relcap(&[
        "symmetrize", "--region", &region, "--op", "r-transform", "--center", "0,0", "--grid", "32,64", "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn verify_is_deterministic_and_exits_zero_without_failures() {
    let dir = tempfile::tempdir().unwrap();
    let run = |name: &str| {
        let p = dir.path().join(name);
        let o = relcap(&[
            "verify", "--suite", "monotonicity", "--trials", "3", "--samples", "3000", "--seed", "5", "--csv",
            p.to_str().unwrap(), "--tolerance", "3",
        ]);
        assert_eq!(o.status.code(), Some(0));
        std::fs::read(p).unwrap()
    };
    let a = run("a.csv");
    assert_eq!(a, run("b.csv"));
    assert!(a.starts_with(b"case,lhs,rhs,slack,stderr,status\n"));
}
