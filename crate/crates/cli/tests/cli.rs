use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

fn lab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_causal-lab"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn path(dir: &TempDir, name: &str) -> PathBuf {
    dir.path().join(name)
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn h2(p: f64) -> f64 {
    if p <= 0.0 || p >= 1.0 {
        0.0
    } else {
        -p * p.log2() - (1.0 - p) * (1.0 - p).log2()
    }
}

fn rows(csv: &str) -> Vec<Vec<f64>> {
    csv.lines()
        .skip(1)
        .map(|l| l.split(',').map(|v| v.parse().unwrap()).collect())
        .collect()
}

#[test]
fn bounds_grid_examples() {
    let o = lab(&["bounds", "--step", "0.25"]);
    assert_eq!(code(&o), 0);
    let r = rows(&stdout(&o));
    assert_eq!(
        r.iter().map(|r| r[0]).collect::<Vec<_>>(),
        vec![0.0, 0.25, 0.5]
    );
    assert_eq!(r[1][3], 0.0);
    assert_eq!(rows(&stdout(&lab(&["bounds", "--step", "0.5"]))).len(), 2);

    let r = rows(&stdout(&lab(&["bounds"])));
    assert_eq!(r.len(), 501);
    for row in &r {
        let p = row[0];
        let want = (1.0 - h2(p)).min((1.0 - 4.0 * p).max(0.0));
        assert!((row[3] - want).abs() <= 1e-9, "p={p}");
        assert!(row[3] <= row[1].min(row[2]) + 1e-12);
    }
}

#[test]
fn exit_codes() {
    let dir = TempDir::new().unwrap();
    assert_eq!(code(&lab(&["bounds", "--step", "0"])), 2);
    assert_eq!(code(&lab(&["bounds", "--unknown"])), 2);
    assert_eq!(
        code(&lab(&[
            "simulate",
            "--n",
            "8",
            "--p",
            "1/4",
            "--rate",
            "0.5",
            "--adversary",
            "nope"
        ])),
        2
    );
    assert_eq!(
        code(&lab(&[
            "simulate", "--n", "8", "--p", "3/4", "--rate", "0.5"
        ])),
        2
    );
    let missing = path(&dir, "no/such/dir/out.csv");
    assert_eq!(code(&lab(&["bounds", "--out", s(&missing)])), 4);
    let o = lab(&[
        "exact",
        "--n",
        "24",
        "--p",
        "1/4",
        "--rate",
        "0.5",
        "--adversary",
        "bsc:1/8",
        "--seed",
        "1",
    ]);
    assert_eq!(code(&o), 3, "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn exact_on_the_repetition_fixture() {
    let o = lab(&[
        "exact",
        "--n",
        "3",
        "--p",
        "1/3",
        "--code",
        "repetition",
        "--adversary",
        "fixed:0",
        "--seed",
        "1",
    ]);
    assert_eq!(code(&o), 0);
    let out = stdout(&o);
    let row: Vec<&str> = out.lines().nth(1).unwrap().split(',').collect();
    assert_eq!(
        row[..8],
        [
            "3",
            "0.3333333333333333",
            "1/3",
            "",
            "fixed:0",
            "mindist",
            "exact",
            "0"
        ]
    );
    assert_eq!(row[8..], ["0", "0", "0", "1"]);
}

#[test]
fn simulation_is_reproducible_and_replayable() {
    let dir = TempDir::new().unwrap();
    let (a, b, c) = (
        path(&dir, "a.csv"),
        path(&dir, "b.csv"),
        path(&dir, "c.csv"),
    );
    let args = |out: &Path| {
        vec![
            "simulate".to_string(),
            "--n=12".into(),
            "--p=1/6".into(),
            "--rate=0.5".into(),
            "--adversary=waitpush".into(),
            "--eps=1/4".into(),
            "--decoder=map".into(),
            "--trials=3000".into(),
            "--seed=42".into(),
            format!("--out={}", out.display()),
        ]
    };
    let run = |out: &Path| {
        let a = args(out);
        lab(&a.iter().map(String::as_str).collect::<Vec<_>>())
    };
    assert_eq!(code(&run(&a)), 0);
    assert_eq!(code(&run(&b)), 0);
    let first = std::fs::read(&a).unwrap();
    assert_eq!(first, std::fs::read(&b).unwrap());

    let manifest = format!("{}.manifest.json", a.display());
    let m: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&manifest).unwrap()).unwrap();
    assert_eq!(m["command"], "simulate");
    assert_eq!(m["experiment"]["p"], "1/6");
    assert_eq!(m["experiment"]["adversary"], "waitpush:0.25");
    assert_eq!(m["experiment"]["seed"], 42);
    assert_eq!(m["seed_source"], "flag");

    assert_eq!(code(&lab(&["replay", &manifest, "--out", s(&c)])), 0);
    assert_eq!(first, std::fs::read(&c).unwrap());
}

#[test]
fn omitted_seed_is_recorded() {
    let dir = TempDir::new().unwrap();
    let (a, b) = (path(&dir, "a.csv"), path(&dir, "b.csv"));
    let o = lab(&[
        "simulate",
        "--n",
        "10",
        "--p",
        "0.2",
        "--rate",
        "0.4",
        "--adversary",
        "bsc:0.1",
        "--trials",
        "500",
        "--out",
        s(&a),
    ]);
    assert_eq!(code(&o), 0);
    let manifest = format!("{}.manifest.json", a.display());
    let m: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&manifest).unwrap()).unwrap();
    assert_eq!(m["seed_source"], "random");
    assert!(m["experiment"]["seed"].is_u64());
    assert_eq!(code(&lab(&["replay", &manifest, "--out", s(&b)])), 0);
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
}

#[test]
fn sweeps() {
    let dir = TempDir::new().unwrap();
    let o = lab(&[
        "sweep", "--n", "", "--rate", "0.5", "--p", "0.1", "--seed", "1",
    ]);
    assert_eq!(code(&o), 0);
    assert_eq!(
        stdout(&o),
        "n,R,p,eps,adversary,decoder,mode,trials,err,lo,hi,budget_exhaust_rate\n"
    );

    let out = path(&dir, "s.csv");
    let o = lab(&[
        "sweep",
        "--n",
        "8,10",
        "--rate",
        "2,0.25",
        "--p",
        "1/8",
        "--adversary",
        "waitpush",
        "--eps",
        "1/4",
        "--trials",
        "400",
        "--seed",
        "7",
        "--out",
        s(&out),
    ]);
    assert_eq!(code(&o), 0);
    let stderr = String::from_utf8_lossy(&o.stderr);
    assert!(
        stderr.contains("cell 0:") && stderr.contains("cell 2:"),
        "{stderr}"
    );
    let csv = std::fs::read_to_string(&out).unwrap();
    assert_eq!(csv.lines().count(), 3);
    let manifest = format!("{}.manifest.json", out.display());
    let m: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&manifest).unwrap()).unwrap();
    let failed: Vec<u64> = m["failures"]
        .as_array()
        .unwrap()
        .iter()
        .map(|f| f["index"].as_u64().unwrap())
        .collect();
    assert_eq!(failed, vec![0, 2]);

    let again = path(&dir, "r.csv");
    assert_eq!(code(&lab(&["replay", &manifest, "--out", s(&again)])), 0);
    assert_eq!(csv, std::fs::read_to_string(&again).unwrap());
}

fn write(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let p = path(dir, name);
    std::fs::write(&p, text).unwrap();
    p
}

fn field<'a>(report: &'a str, key: &str) -> &'a str {
    report
        .lines()
        .find_map(|l| l.strip_prefix(key)?.strip_prefix('='))
        .unwrap_or_else(|| panic!("no {key} in\n{report}"))
}

const SIX: &str = "n=6 type=det
u=0 r=0 p=1/6 word=000000
u=1 r=0 p=1/6 word=000001
u=2 r=0 p=1/6 word=000011
u=3 r=0 p=1/6 word=111111
u=4 r=0 p=1/6 word=111110
u=5 r=0 p=1/6 word=110000
";

#[test]
fn graph_reports() {
    let dir = TempDir::new().unwrap();
    let six = write(&dir, "six.code", SIX);

    // Distance-1 pairs: (0,1), (1,2), (3,4). Components: a path of three,
    // an edge, an isolated vertex, so the independence number is 2 + 1 + 1.
    let r = stdout(&lab(&["graph", "--code", s(&six), "--d", "2"]));
    assert_eq!(field(&r, "vertices"), "6");
    assert_eq!(field(&r, "edges"), "3");
    assert_eq!(field(&r, "avg_degree"), "1");
    assert_eq!(field(&r, "density").parse::<f64>().unwrap(), 3.0 / 36.0);
    assert_eq!(field(&r, "turan_lower"), "3");
    assert_eq!(field(&r, "max_independent"), "4");

    let r = stdout(&lab(&["graph", "--code", s(&six), "--d", "1"]));
    assert_eq!(field(&r, "edges"), "0");
    assert_eq!(field(&r, "density"), "0");

    // Suffix of length 4 after "11"; threshold 3 puts it in the Plotkin regime.
    let r = stdout(&lab(&[
        "graph",
        "--code",
        s(&six),
        "--prefix",
        "11",
        "--d",
        "3",
    ]));
    assert_eq!(field(&r, "vertices"), "3");
    assert_eq!(field(&r, "plotkin_cap"), "4");

    let o = lab(&[
        "graph",
        "--code",
        s(&six),
        "--prefix",
        "10",
        "--p",
        "3/20",
        "--eps",
        "1/5",
    ]);
    assert_eq!(code(&o), 0);
    let r = stdout(&o);
    assert_eq!(field(&r, "vertices"), "0");
    assert_eq!(field(&r, "density"), "0");
    assert_eq!(field(&r, "sixteen_p_over_eps"), "12");
    assert_eq!(field(&r, "instance_cap=2d/(2d-length)+1"), "12");
    assert_eq!(field(&r, "instance_cap_equals_16p/eps"), "true");
    // ceil(2 * 3/20 * 6 - 6/40) = ceil(1.65) = 2.
    assert!(field(&r, "threshold").starts_with("2 "));
}

const THREE: &str = "n=4 type=prob
u=0 r=0 p=1/4 word=0000
u=0 r=1 p=1/4 word=0011
u=1 r=0 p=3/8 word=0101
u=2 r=0 p=7/64 word=1111
u=2 r=1 p=1/64 word=0110
";

#[test]
fn partition_reports() {
    let dir = TempDir::new().unwrap();
    let three = write(&dir, "three.code", THREE);
    let o = lab(&[
        "partition",
        "--code",
        s(&three),
        "--prefix",
        "0",
        "--eps",
        "1",
    ]);
    assert_eq!(code(&o), 0);
    let r = stdout(&o);
    // Prefix mass 57/64. Relative masses 16/57, 16/57, 24/57 exceed 1/8 and
    // land in cell 1; 1/57 lies in (1/64, 1/8] and lands in cell 2.
    assert_eq!(field(&r, "prefix_mass"), "57/64");
    let lines: Vec<&str> = r
        .lines()
        .filter(|l| l.trim_start().starts_with("cell"))
        .collect();
    assert_eq!(lines.len(), 4, "{r}");
    assert!(lines[0].starts_with("cell i=1 members=3 mass=7/8 share=56/57"));
    assert!(lines[1]
        .trim_start()
        .starts_with("cell i=1 j=1 members=3 mass=7/8 share=1"));
    assert!(lines[2].starts_with("cell i=2 members=1 mass=1/64 share=1/57 message_entropy=0"));
    let h: f64 = lines[1].rsplit('=').next().unwrap().parse().unwrap();
    let want = -(4.0f64 / 7.0) * (4.0f64 / 7.0).log2() - (3.0f64 / 7.0) * (3.0f64 / 7.0).log2();
    assert!((h - want).abs() < 1e-9);
    assert!(field(&r, "good_cell").starts_with("(1,1)"));
    assert_eq!(
        field(&r, "mass_conservation level1"),
        "57/64 level2=57/64 prefix_mass=57/64 equal=true"
    );
    assert!(r
        .lines()
        .filter(|l| l.contains("aggregation"))
        .all(|l| l.ends_with("holds=true")));

    let six = write(&dir, "six.code", SIX);
    let r = stdout(&lab(&["partition", "--code", s(&six), "--eps", "1/2"]));
    assert!(r.contains("note=deterministic code"));
    assert_eq!(r.lines().filter(|l| l.starts_with("cell i=")).count(), 1);
    // One cell of six equally likely messages: entropy log2 6 clears 6 * (1/2) / 64.
    assert!(field(&r, "good_cell").starts_with("(1,1) message_entropy=2.58"));
}

#[test]
fn made_codes_match_simulated_ones() {
    let dir = TempDir::new().unwrap();
    let file = path(&dir, "c.code");
    assert_eq!(
        code(&lab(&[
            "make-code",
            "--n",
            "10",
            "--rate",
            "0.4",
            "--seed",
            "5",
            "--out",
            s(&file)
        ])),
        0
    );
    let text = std::fs::read_to_string(&file).unwrap();
    assert!(text.starts_with("n=10 type=det\n"));
    assert_eq!(text.lines().count(), 17);
    let common = [
        "--n",
        "10",
        "--p",
        "1/5",
        "--adversary",
        "waitpush:1/5",
        "--trials",
        "800",
        "--seed",
        "9",
    ];
    let from_file = lab(&[&["simulate", "--code", s(&file)][..], &common].concat());
    let drawn = lab(&[
        &["simulate", "--rate", "0.4", "--code-seed", "5"][..],
        &common,
    ]
    .concat());
    assert_eq!(code(&from_file), 0);
    assert_eq!(stdout(&from_file), stdout(&drawn));
}

#[test]
fn trace_dump() {
    let dir = TempDir::new().unwrap();
    let t = path(&dir, "t.txt");
    let o = lab(&[
        "simulate",
        "--n",
        "9",
        "--p",
        "1/3",
        "--code",
        "repetition",
        "--adversary",
        "fixed:1,4,7",
        "--trials",
        "1",
        "--seed",
        "0",
        "--trace",
        s(&t),
    ]);
    assert_eq!(code(&o), 0);
    let dump = std::fs::read_to_string(&t).unwrap();
    let flips: Vec<&str> = dump.lines().filter(|l| l.contains("flip=1")).collect();
    assert_eq!(flips.len(), 3);
    assert!(flips[0].starts_with("i=1 "));
    assert_eq!(dump.lines().last(), Some("budget_exhausted=true"));
}
