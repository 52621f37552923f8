use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn hemln(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hemln"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn write_network(dir: &Path) -> String {
    fs::write(dir.join("a.txt"), "# two triangles\na1 a2\na2 a3\na1 a3\na4 a5\na5 a6\na4 a6\n").unwrap();
    fs::write(dir.join("d.txt"), "d1 d2\nd2 d3\nd1 d3\nd4 d5\nd5 d6\nd4 d6\n").unwrap();
    fs::write(dir.join("ad.txt"), "a1 d1\na2 d2\na3 d1\na4 d5\na5 d5\n").unwrap();
    let cfg = dir.join("net.toml");
    fs::write(
        &cfg,
        "[[layers]]\nname = \"A\"\nedges_path = \"a.txt\"\n\n[[layers]]\nname = \"D\"\nedges_path = \"d.txt\"\n\n\
         [[interlayer]]\nleft = \"A\"\nright = \"D\"\nedges_path = \"ad.txt\"\n",
    )
    .unwrap();
    cfg.to_str().unwrap().to_owned()
}

#[test]
fn missing_expr_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_network(dir.path());
    let o = hemln(&["detect", "--config", &cfg, "--out", "x.tsv"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn bench_rejects_zero_repeat() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_network(dir.path());
    let o = hemln(&["bench", "--config", &cfg, "--expr", "A *[A,D] D", "--repeat", "0"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn unknown_layer_fails_with_one() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_network(dir.path());
    let out = dir.path().join("t.tsv");
    let o = hemln(&["detect", "--config", &cfg, "--expr", "A *[A,M] M", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("M"));
}

#[test]
fn missing_file_fails_with_one() {
    let o = hemln(&["baseline", "--config", "/nonexistent/net.toml"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn detect_writes_table_edges_and_cache() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_network(dir.path());
    let out = dir.path().join("t.tsv");
    let cache = dir.path().join("cache");
    let args = [
        "detect",
        "--config",
        &cfg,
        "--expr",
        "A *[A,D] D",
        "--out",
        out.to_str().unwrap(),
        "--emit-edges",
        "--cache",
        cache.to_str().unwrap(),
    ];
    let o = hemln(&args);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let s = stdout(&o);
    assert!(s.contains("seed=42"));
    assert!(s.contains("case=initial"));
    assert!(s.contains("pairs=2"));

    let table = fs::read_to_string(&out).unwrap();
    assert_eq!(table, "#A\tD\tclass\tA-D\n1\t1\ttotal\t3\n2\t2\ttotal\t2\n");
    let edges = fs::read_to_string(format!("{}.edges", out.display())).unwrap();
    assert_eq!(edges.lines().count(), 6);
    assert!(edges.contains("0\ta1\td1"));
    assert!(cache.join("A.seed42.tsv").exists());

    let again = hemln(&args);
    assert!(again.status.success());
    assert_eq!(fs::read_to_string(&out).unwrap(), table);
}

#[test]
fn baseline_stats_and_modularity() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_network(dir.path());
    let b = stdout(&hemln(&["baseline", "--config", &cfg]));
    assert!(b.starts_with("nodes=12 edges=17"), "{b}");
    assert!(b.contains("Q="));

    let s = stdout(&hemln(&["stats", "--config", &cfg]));
    assert!(s.contains("A\t6\t6\t2/2\t3.00"), "{s}");

    let m = stdout(&hemln(&["modularity", "--config", &cfg, "--expr", "A *[A,D] D"]));
    assert_eq!(m.lines().count(), 5);
    assert!(m.lines().nth(1).unwrap().starts_with("mwm"));
}

#[test]
fn bench_prints_medians() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_network(dir.path());
    let o = hemln(&["bench", "--config", &cfg, "--expr", "A *[A,D] D", "--repeat", "2"]);
    assert!(o.status.success());
    let s = stdout(&o);
    assert!(s.contains("one_time layer=A ms="));
    assert!(s.contains("recurring step=1 left=A right=D ms="));
    assert!(s.contains("recurring_over_one_time_max="));
}

#[test]
fn generate_round_trips_through_detect() {
    let dir = tempfile::tempdir().unwrap();
    let gen = dir.path().join("gen");
    let o = hemln(&["generate", "--layers", "2", "--blocks", "3", "--block-size", "10", "--out", gen.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(gen.join("truth.tsv").exists());
    let out = dir.path().join("t.tsv");
    let o = hemln(&[
        "--threads",
        "2",
        "detect",
        "--config",
        gen.join("network.toml").to_str().unwrap(),
        "--expr",
        "L1 *[L1,L2] L2",
        "--algo",
        "MWPM",
        "--metric",
        "wd",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(stdout(&o).contains("threads=2"));
    assert!(fs::read_to_string(&out).unwrap().lines().count() >= 4);
}
