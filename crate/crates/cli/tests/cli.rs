use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn bninf(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bninf"))
        .current_dir(dir)
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

const TRIANGLE: &str = "graph v1\nn 3\nedge 0 1\nedge 1 2\nedge 0 2\n";
const PATH3: &str = "graph v1\nn 3\nedge 0 1\nedge 1 2\n";
const THIRDS: &str = "ntm v1\nstates q0 acc rej\nalphabet _ a\nstart q0\naccept acc\n\
                      t q0 _ -> acc _ S\nt q0 _ -> acc a S\nt q0 _ -> rej _ S\n";
const COIN: &str = "ntm v1\nstates q0 acc rej\nalphabet _\nstart q0\naccept acc\nt q0 _ -> acc _ S\nt q0 _ -> rej _ S\n";

/// A scratch dir holding the triangle's clique network as `k3.bn`.
fn triangle_network() -> tempfile::TempDir {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("k3.graph"), TRIANGLE).unwrap();
    let o = bninf(dir.path(), &["reduce", "clique-to-inference", "k3.graph", "--k", "3", "--out", "k3.bn"]);
    assert!(o.status.success(), "{}", stderr(&o));
    dir
}

#[test]
fn triangle_network_probability_and_threshold() {
    let dir = triangle_network();
    let d = dir.path();
    let o = bninf(d, &["infer", "k3.bn", "--h", "XC=True"]);
    assert_eq!(stdout(&o), "2/9\n");

    let o = bninf(d, &["decide", "k3.bn", "--h", "XC=True", "--q", "1/2"]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(stdout(&o), "false\n");

    let o = bninf(d, &["decide", "k3.bn", "--h", "XC=True", "--q", "1/5"]);
    assert_eq!(o.status.code(), Some(0));

    let o = bninf(d, &["decide", "k3.bn", "--h", "XC=True"]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn path_has_no_triangle() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("p3.graph"), PATH3).unwrap();
    let o = bninf(dir.path(), &["reduce", "clique-to-inference", "p3.graph", "--k", "3", "--out", "p3.bn"]);
    assert!(o.status.success());
    let o = bninf(dir.path(), &["infer", "p3.bn", "--h", "XC=True"]);
    assert_eq!(stdout(&o), "0/1\n");
}

#[test]
fn reductions_write_a_provenance_sidecar() {
    let dir = triangle_network();
    let d = dir.path();
    let prov = fs::read_to_string(d.join("k3.prov")).unwrap();
    assert!(prov.lines().all(|l| l.split('\t').count() == 2));
    assert!(prov.lines().any(|l| l.starts_with("XC\t")));

    let o = bninf(d, &["reduce", "inference-to-clique", "k3.bn", "--h", "XC=True", "--out", "back.graph"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let graph = fs::read_to_string(d.join("back.graph")).unwrap();
    assert!(graph.starts_with("# k 7\n"));
    assert!(d.join("back.prov").exists());

    let o = bninf(d, &["reduce", "inference-to-cmc", "k3.bn", "--h", "XC=True", "--out", "back.cmc"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let o = bninf(d, &["reduce", "cmc-to-inference", "back.cmc", "--out", "again.bn"]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(d.join("again.prov").exists());
}

#[test]
fn tvsn_of_a_path() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("path5.dag"), "dag v1\nn 5\nedge 0 1\nedge 1 2\nedge 2 3\nedge 3 4\n").unwrap();
    let o = bninf(dir.path(), &["tvsn", "path5.dag"]);
    assert_eq!(stdout(&o), "1\nwitness 0 1 2 3 4\n");
    let o = bninf(dir.path(), &["vsn", "path5.dag"]);
    assert_eq!(stdout(&o).lines().next(), Some("1"));
}

#[test]
fn verify_prints_a_passing_table() {
    let dir = tempfile::tempdir().unwrap();
    let o = bninf(dir.path(), &["verify", "clique-roundtrip", "--seed", "7"]);
    assert!(o.status.success());
    let out = stdout(&o);
    assert!(out.contains("clique-roundtrip") && out.contains("PASS"));
    let o = bninf(dir.path(), &["verify", "no-such-suite"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn same_seed_same_bytes() {
    let dir = triangle_network();
    let run = |seq: bool| {
        let mut args = vec!["sample", "k3.bn", "--seed", "42", "--h", "XC=True"];
        if seq {
            args.push("--sequential");
        }
        stdout(&bninf(dir.path(), &args))
    };
    assert_eq!(run(false), run(false));
    assert_eq!(run(false), run(true));
    let a = stdout(&bninf(dir.path(), &["verify", "frontier-audit", "--seed", "5"]));
    let b = stdout(&bninf(dir.path(), &["verify", "frontier-audit", "--seed", "5", "--sequential"]));
    assert_eq!(a, b);
}

#[test]
fn zero_threshold_matches_positive_mode() {
    let dir = triangle_network();
    for h in ["XC=True", "XC=False", "X[1]=v0", "X[1,2]=True"] {
        let positive = bninf(dir.path(), &["decide", "k3.bn", "--h", h]);
        let zero = bninf(dir.path(), &["decide", "k3.bn", "--h", h, "--q", "0/1"]);
        assert_eq!(positive.status.code(), zero.status.code(), "{h}");
    }
}

#[test]
fn malformed_input_reports_a_location() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    fs::write(d.join("bad.bn"), "bayesnet v1\nvar A : F T\ncpt A | : 1/2 oops\n").unwrap();
    let o = bninf(d, &["infer", "bad.bn"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("bad.bn: line 3"), "{}", stderr(&o));

    fs::write(d.join("short.bn"), "bayesnet v1\nvar A : F T\ncpt A | : 1/2\n").unwrap();
    let o = bninf(d, &["infer", "short.bn"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("`A`"), "{}", stderr(&o));
    let o = bninf(d, &["validate", "short.bn"]);
    assert_eq!(o.status.code(), Some(1));

    let o = bninf(d, &["infer", "missing.bn"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn resource_guard_is_an_error() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("path5.dag"), "dag v1\nn 5\nedge 0 1\nedge 1 2\nedge 2 3\nedge 3 4\n").unwrap();
    let o = bninf(dir.path(), &["tvsn", "path5.dag", "--guard", "3"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("guard"));
}

#[test]
fn machine_deciders_and_grids() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    fs::write(d.join("thirds.ntm"), THIRDS).unwrap();
    fs::write(d.join("coin.ntm"), COIN).unwrap();

    let o = bninf(d, &["stmma", "thirds.ntm", "--k", "1"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("2/3"));
    let o = bninf(d, &["tstmma", "coin.ntm", "--s", "1", "--t", "1"]);
    assert_eq!(o.status.code(), Some(1));

    let o = bninf(d, &["reduce", "ntm-to-net", "coin.ntm", "--k", "1", "--out", "coin.bn"]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert_eq!(stdout(&bninf(d, &["infer", "coin.bn", "--h", "D[1]=True"])), "1/2\n");

    let o = bninf(d, &["reduce", "tstm-to-net", "thirds.ntm", "--s", "2", "--t", "2", "--out", "thirds.bn"]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert_eq!(stdout(&bninf(d, &["infer", "thirds.bn", "--h", "D[2]=True"])), "2/3\n");

    let o = bninf(d, &["reduce", "ntm-to-net", "coin.ntm", "--out", "x.bn"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn moral_graph_of_a_v_structure() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("v.dag"), "dag v1\nn 3\nedge 0 2\nedge 1 2\n").unwrap();
    let o = bninf(dir.path(), &["moralize", "v.dag"]);
    assert_eq!(stdout(&o), "graph v1\nn 3\nedge 0 1\nedge 0 2\nedge 1 2\n");
}
