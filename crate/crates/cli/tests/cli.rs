use std::io::Write;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_graphci"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

/// Parses `header + rows` CSV into one Vec per row.
fn rows(out: &Output) -> Vec<Vec<String>> {
    stdout(out)
        .lines()
        .skip(1)
        .map(|l| l.split(',').map(str::to_owned).collect())
        .collect()
}

fn six_qubit_file() -> tempfile::NamedTempFile {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    write!(f, "# worked example\n2 4\n0 2\n0 4\n1 2\n1 3\n1 5\n").unwrap();
    f
}

#[test]
fn compute_worked_example_endpoints() {
    let f = six_qubit_file();
    let path = f.path().to_str().unwrap();

    let out = run(&["compute", "--graph", path, "--p", "1.0"]);
    assert!(out.status.success());
    let r = rows(&out);
    assert_eq!(r.len(), 1);
    let i_a: f64 = r[0][4].parse().unwrap();
    let i_b: f64 = r[0][5].parse().unwrap();
    assert_eq!(i_a, 2.0);
    assert_eq!(i_b, 2.0);

    // maximal mixing: I_A = n_A - n = 2 - 6 = -4
    let out = run(&["compute", "--graph", path, "--p", "0.5"]);
    let r = rows(&out);
    let i_a: f64 = r[0][4].parse().unwrap();
    assert_eq!(i_a, -4.0);
}

#[test]
fn compute_matches_oracle_method() {
    let f = six_qubit_file();
    let path = f.path().to_str().unwrap();
    let engine = rows(&run(&["compute", "--graph", path, "--p", "0.9"]));
    let oracle = rows(&run(&[
        "compute", "--graph", path, "--p", "0.9", "--method", "oracle",
    ]));
    for col in 1..=5 {
        let a: f64 = engine[0][col].parse().unwrap();
        let b: f64 = oracle[0][col].parse().unwrap();
        assert!((a - b).abs() < 1e-9, "column {col}: {a} vs {b}");
    }
    assert_eq!(oracle[0][6], "oracle");
}

#[test]
fn csv_header_and_format() {
    let out = run(&["compute", "--family", "star", "--n-a", "2", "--p", "0.25"]);
    let text = stdout(&out);
    assert!(text.starts_with("P,H_A,H_B,H_AB,I_A,I_B,method\n"));
    // 17 significant digits, '.' decimal
    assert!(text.contains("2.5000000000000000e-1"));
}

#[test]
fn classify_worked_matrix() {
    // rows (100),(011),(111),(111)
    let mut f = tempfile::NamedTempFile::new().unwrap();
    write!(f, "4 3\n0 4\n1 5\n1 6\n2 4\n2 5\n2 6\n3 4\n3 5\n3 6\n").unwrap();
    let out = run(&["classify", "--graph", f.path().to_str().unwrap()]);
    let text = stdout(&out);
    assert!(text.contains("rank = 2"), "{text}");
    assert!(text.contains("side A: rank-2 type-2 (n1=1, n2=1, n3=2)"), "{text}");
    assert!(text.contains("side B: rank-2 type-1 (n1=1, n2=2)"), "{text}");
}

#[test]
fn classify_general_rank3() {
    // rows 1110, 1111, 0001, 1001, 0111
    let mut f = tempfile::NamedTempFile::new().unwrap();
    write!(
        f,
        "5 4\n0 5\n0 6\n0 7\n1 5\n1 6\n1 7\n1 8\n2 8\n3 5\n3 8\n4 6\n4 7\n4 8\n"
    )
    .unwrap();
    let out = run(&["classify", "--graph", f.path().to_str().unwrap()]);
    let text = stdout(&out);
    assert!(text.contains("rank = 3"), "{text}");
    assert!(text.contains("side A: general (rank=3)"), "{text}");
}

#[test]
fn sweep_is_deterministic_and_inclusive() {
    let args = [
        "sweep", "--family", "rank2type2", "--n1", "2", "--n2", "2", "--n3", "2", "--n-b", "2",
        "--p-start", "0.1", "--p-end", "0.9", "--steps", "8",
    ];
    let a = run(&args);
    let b = run(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let r = rows(&a);
    assert_eq!(r.len(), 9);
    assert_eq!(r[0][0], "1.0000000000000001e-1");
    assert_eq!(r[8][0], "9.0000000000000002e-1");
}

#[test]
fn sweep_star_curves_ordered_in_n_a() {
    let sweep = |n_a: &str| {
        rows(&run(&[
            "sweep", "--family", "star", "--n-a", n_a, "--n-b", "1", "--p-start", "0.55",
            "--p-end", "0.95", "--steps", "8",
        ]))
    };
    let small = sweep("2");
    let large = sweep("6");
    for (s, l) in small.iter().zip(&large) {
        let i_s: f64 = s[4].parse().unwrap();
        let i_l: f64 = l[4].parse().unwrap();
        assert!(i_l > i_s, "I_A must grow with n_A ({i_s} vs {i_l})");
    }
}

#[test]
fn sweep_equitable_split_dominates() {
    let sweep = |n1: &str, n2: &str| {
        rows(&run(&[
            "sweep", "--family", "rank2type1", "--n1", n1, "--n2", n2, "--n-b", "2",
            "--p-start", "0.1", "--p-end", "0.9", "--steps", "8", "--method", "closedform",
        ]))
    };
    let equitable = sweep("3", "3");
    let skewed = sweep("1", "5");
    for (e, s) in equitable.iter().zip(&skewed) {
        let p: f64 = e[0].parse().unwrap();
        let i_e: f64 = e[4].parse().unwrap();
        let i_s: f64 = s[4].parse().unwrap();
        assert!(i_e >= i_s - 1e-12, "p={p}: {i_e} < {i_s}");
    }
}

#[test]
fn repcode_csv_values() {
    let out = run(&["repcode", "--n", "3", "--variant", "bob-only", "--p", "0.9"]);
    assert!(out.status.success());
    let r = rows(&out);
    assert_eq!(r.len(), 1);
    let lambda: f64 = r[0][2].parse().unwrap();
    let p = 0.9f64;
    assert!((lambda - (3.0 * p * p - 2.0 * p * p * p)).abs() < 1e-15);

    let out = run(&["repcode", "--n", "1", "--variant", "all", "--p", "0.8"]);
    let r = rows(&out);
    let ci: f64 = r[0][3].parse().unwrap();
    let h2 = |x: f64| -x * x.log2() - (1.0 - x) * (1.0 - x).log2();
    assert!((ci - (1.0 - 2.0 * h2(0.8))).abs() < 1e-12);
}

#[test]
fn exit_codes() {
    // 2: input errors
    assert_eq!(run(&["compute", "--graph", "/no/such/file", "--p", "0.5"]).status.code(), Some(2));
    assert_eq!(run(&["repcode", "--n", "2", "--p", "0.9"]).status.code(), Some(2));
    assert_eq!(run(&["compute", "--family", "bogus", "--p", "0.5"]).status.code(), Some(2));
    assert_eq!(run(&["compute", "--family", "star", "--p", "1.5"]).status.code(), Some(2));
    // 3: resource cap
    assert_eq!(
        run(&[
            "compute", "--family", "complete", "--n-a", "20", "--n-b", "20", "--p", "0.3",
            "--method", "general", "--max-nu", "10",
        ])
        .status
        .code(),
        Some(3)
    );
    // closed form demanded where none exists
    let mut f = tempfile::NamedTempFile::new().unwrap();
    write!(
        f,
        "5 4\n0 5\n0 6\n0 7\n1 5\n1 6\n1 7\n1 8\n2 8\n3 5\n3 8\n4 6\n4 7\n4 8\n"
    )
    .unwrap();
    assert_eq!(
        run(&[
            "compute", "--graph", f.path().to_str().unwrap(), "--p", "0.5", "--method",
            "closedform",
        ])
        .status
        .code(),
        Some(2)
    );
}

#[test]
fn oracle_check_pass_and_injected_fault() {
    let out = run(&["oracle-check", "--max-n", "4", "--random-samples", "5", "--seed", "1"]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("PASS"));

    let out = run(&["oracle-check", "--max-n", "3", "--inject-fault"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn out_flag_writes_file_and_keeps_stdout_clean() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("sweep.csv");
    let out = run(&[
        "sweep", "--family", "star", "--n-a", "2", "--n-b", "1", "--steps", "2", "--out",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let text = std::fs::read_to_string(path).unwrap();
    assert_eq!(text.lines().count(), 4);
}
