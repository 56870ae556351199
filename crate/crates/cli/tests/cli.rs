use std::path::Path;
use std::process::{Command, Output};

fn torpack(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_torpack"))
        .args(args)
        .env_remove("TORPACK_JOBS")
        .output()
        .unwrap()
}

fn ok(args: &[&str]) -> String {
    let o = torpack(args);
    assert!(
        o.status.success(),
        "{args:?}: {}",
        String::from_utf8_lossy(&o.stderr)
    );
    String::from_utf8(o.stdout).unwrap()
}

fn body(text: &str) -> impl Iterator<Item = &str> {
    text.lines()
        .filter(|l| !l.starts_with('#') && !l.is_empty())
}

fn read(p: &Path) -> String {
    std::fs::read_to_string(p).unwrap()
}

#[test]
fn enumerate_six_points() {
    let out = ok(&["enumerate", "--n", "6"]);
    assert_eq!(body(&out).count(), 252);
    assert!(out.contains("# counts: graphs=252"));
}

#[test]
fn manifest_opens_every_text_output() {
    for args in [
        vec!["atlas", "--n", "6"],
        vec!["verify", "--n", "5"],
        vec!["enumerate", "--n", "5"],
    ] {
        let out = ok(&args);
        let block: Vec<&str> = out.lines().take_while(|l| !l.is_empty()).collect();
        assert!(
            block.len() >= 4 && block.iter().all(|l| l.starts_with("# ")),
            "{args:?}"
        );
        assert!(block[0].starts_with("# torpack "));
        assert_eq!(block[1], format!("# command: {}", args[0]));
    }
}

#[test]
fn atlas_csv_rows() {
    let out = ok(&["atlas", "--n", "7", "--format", "csv"]);
    let mut rows = body(&out);
    assert_eq!(rows.next(), Some("n,variant,status,d,index,x,y,free"));
    let rows: Vec<&str> = rows.collect();
    assert_eq!(rows.len(), 3 * 7);
    assert_eq!(rows.iter().filter(|r| r.ends_with(",true")).count(), 1);
}

#[test]
fn solve_then_certify() {
    let dir = tempfile::tempdir().unwrap();
    let graphs = dir.path().join("graphs.txt");
    let boxes = dir.path().join("boxes.txt");
    let certs = dir.path().join("certs.txt");
    ok(&["enumerate", "--n", "6", "--out", graphs.to_str().unwrap()]);
    ok(&[
        "solve",
        "--n",
        "6",
        "--graphs",
        graphs.to_str().unwrap(),
        "--out",
        boxes.to_str().unwrap(),
    ]);
    let b = read(&boxes);
    assert!(b.contains("sha256="));
    // One cluster of the full graph lacks a regular certificate.
    let o = torpack(&[
        "certify",
        "--n",
        "6",
        "--boxes",
        boxes.to_str().unwrap(),
        "--out",
        certs.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(2));
    let c = read(&certs);
    let lines: Vec<&str> = body(&c).filter(|l| l.starts_with("certificate ")).collect();
    assert!(
        lines
            .iter()
            .filter(|l| l.contains("certified=true"))
            .count()
            >= 3
    );
    assert!(lines.iter().any(|l| l.contains("verdict=singular")));
    assert!(lines
        .iter()
        .filter(|l| l.contains("certified=true"))
        .all(|l| l.contains("atlas=1")));
}

#[test]
fn reruns_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let p = |s: &str| dir.path().join(s).to_str().unwrap().to_owned();
    for tag in ["a", "b"] {
        let jobs = if tag == "a" { "1" } else { "3" };
        ok(&[
            "--jobs",
            jobs,
            "pipeline",
            "--n",
            "5",
            "--out",
            &p(&format!("pipe-{tag}.txt")),
        ]);
        ok(&["render", "--n", "6", "--out", &p(&format!("fig-{tag}.svg"))]);
        ok(&[
            "atlas",
            "--n",
            "8",
            "--out",
            &p(&format!("atlas-{tag}.txt")),
        ]);
    }
    for f in ["pipe", "fig", "atlas"] {
        let ext = if f == "fig" { "svg" } else { "txt" };
        assert_eq!(
            read(Path::new(&p(&format!("{f}-a.{ext}")))),
            read(Path::new(&p(&format!("{f}-b.{ext}")))),
            "{f}"
        );
    }
    let svg = read(Path::new(&p("fig-a.svg")));
    assert!(svg.starts_with("<?xml"));
    assert!(svg.lines().nth(1).unwrap().starts_with("<!--"));
}

#[test]
fn single_disk_renders_as_four_quarters() {
    let dir = tempfile::tempdir().unwrap();
    let coords = dir.path().join("one.txt");
    std::fs::write(&coords, "0 0\n").unwrap();
    let svg = dir.path().join("one.svg");
    ok(&[
        "render",
        "--coords",
        coords.to_str().unwrap(),
        "--d",
        "0.5",
        "--out",
        svg.to_str().unwrap(),
    ]);
    assert_eq!(read(&svg).matches(r#"r="100.000000""#).count(), 4);
}

#[test]
fn exit_codes() {
    let o = torpack(&["pipeline", "--n", "6"]);
    assert_eq!(o.status.code(), Some(0));
    let out = String::from_utf8(o.stdout).unwrap();
    assert!(out.contains("survivors=0 exhausted=0"), "{out}");
    assert_eq!(torpack(&["pipeline", "--n", "12"]).status.code(), Some(1));
    assert_eq!(torpack(&["atlas", "--n", "1"]).status.code(), Some(1));
    assert_eq!(
        torpack(&["verify", "--n", "6", "--expected", "0.41"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        torpack(&["certify", "--n", "6", "--boxes", "/nonexistent"])
            .status
            .code(),
        Some(1)
    );
}

#[test]
fn dumped_systems_list_every_hypothesis() {
    let dir = tempfile::tempdir().unwrap();
    let graphs = dir.path().join("g.txt");
    let sys = dir.path().join("sys.txt");
    ok(&["enumerate", "--n", "5", "--out", graphs.to_str().unwrap()]);
    ok(&[
        "solve",
        "--n",
        "5",
        "--graphs",
        graphs.to_str().unwrap(),
        "--dump-system",
        sys.to_str().unwrap(),
    ]);
    assert!(!read(&sys).is_empty());
}
