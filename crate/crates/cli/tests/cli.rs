use std::path::Path;
use std::process::{Command, Output};

use cubetest::{delta, CochainFile};
use cubetest_cli::Report;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cubetest"))
        .args(args)
        .output()
        .expect("spawn cubetest")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn read(path: &Path) -> CochainFile {
    std::fs::read_to_string(path).unwrap().parse().unwrap()
}

fn gen(dir: &Path, name: &str, extra: &[&str]) -> std::path::PathBuf {
    let path = dir.join(name);
    let mut args = vec!["gen", "--out", path.to_str().unwrap()];
    args.extend_from_slice(extra);
    let o = run(&args);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    path
}

#[test]
fn generated_files_round_trip_and_are_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let args = [
        "--kind", "noisy", "--n", "9", "--d", "2", "--seed", "4", "--noise", "0.05",
    ];
    let a = gen(dir.path(), "a.txt", &args);
    let b = gen(dir.path(), "b.txt", &args);
    let text = std::fs::read_to_string(&a).unwrap();
    assert_eq!(text, std::fs::read_to_string(&b).unwrap());
    let file = read(&a);
    assert_eq!(file.to_string(), text);
    assert!(file.meta.iter().any(|(k, v)| k == "noise" && v == "0.05"));

    let stdout_text = stdout(&run(&[
        "gen", "--kind", "noisy", "--n", "9", "--d", "2", "--seed", "4", "--noise", "0.05",
    ]));
    assert_eq!(stdout_text, text);
}

#[test]
fn zero_noise_matches_coboundary() {
    let dir = tempfile::tempdir().unwrap();
    for d in ["1", "2"] {
        let common = ["--n", "10", "--d", d, "--seed", "21"];
        let noisy = gen(
            dir.path(),
            "noisy.txt",
            &[&["--kind", "noisy", "--noise", "0"][..], &common].concat(),
        );
        let cob = gen(
            dir.path(),
            "cob.txt",
            &[&["--kind", "coboundary"][..], &common].concat(),
        );
        assert_eq!(read(&noisy).cochain, read(&cob).cochain);
    }
}

#[test]
fn noise_flips_within_three_sigma() {
    let dir = tempfile::tempdir().unwrap();
    let p = 0.01;
    for seed in 0..5 {
        let path = gen(
            dir.path(),
            "g.txt",
            &[
                "--kind",
                "noisy",
                "--n",
                "40",
                "--d",
                "1",
                "--seed",
                &seed.to_string(),
                "--noise",
                "0.01",
            ],
        );
        let file = read(&path);
        let flipped: f64 = file
            .meta
            .iter()
            .find(|(k, _)| k == "flipped")
            .unwrap()
            .1
            .parse()
            .unwrap();
        let cells = file.cochain.len() as f64;
        assert!(
            (flipped - p * cells).abs() <= 3.0 * (cells * p * (1.0 - p)).sqrt(),
            "seed {seed}: {flipped}"
        );
    }
}

#[test]
fn tester_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let good = gen(
        dir.path(),
        "good.txt",
        &["--kind", "cocycle", "--n", "10", "--d", "2", "--seed", "3"],
    );
    let o = run(&[
        "test",
        "--in",
        good.to_str().unwrap(),
        "--trials",
        "2000",
        "--exact",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let r = Report::parse(&stdout(&o));
    assert_eq!(r.get("verdict"), Some("accepted"));
    assert_eq!(r.get("delta_norm"), Some("0"));
    assert!(r.get("guarantee_epsilon").is_some());

    let bad = gen(
        dir.path(),
        "bad.txt",
        &["--kind", "random", "--n", "8", "--d", "1", "--seed", "3"],
    );
    let o = run(&["test", "--in", bad.to_str().unwrap(), "--trials", "200"]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(Report::parse(&stdout(&o)).get("verdict"), Some("rejected"));
}

#[test]
fn usage_and_parse_errors_exit_two() {
    assert_eq!(
        run(&["gen", "--kind", "sideways", "--n", "5", "--d", "1"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("broken.txt");
    std::fs::write(&path, "CUBECHAIN n=5 d=1\n0 1 7\n").unwrap();
    let o = run(&["test", "--in", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(!o.stderr.is_empty());
}

#[test]
fn decoder_recovers_planted_cocycle() {
    let dir = tempfile::tempdir().unwrap();
    let path = gen(
        dir.path(),
        "f.txt",
        &[
            "--kind", "noisy", "--n", "20", "--d", "1", "--seed", "8", "--noise", "0.01",
            "--theta", "-1",
        ],
    );
    let out = dir.path().join("alpha.txt");
    let o = run(&[
        "decode",
        "--in",
        path.to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(o.status.success());
    let r = Report::parse(&stdout(&o));
    assert_eq!(r.get("theta"), Some("-1"));
    assert_eq!(r.get("certificate_holds"), Some("true"));
    assert_eq!(r.get("delta_norm_exact"), Some("true"));
    let alpha = read(&out).cochain;
    assert_eq!(alpha.dim(), 0);
    let f = read(&path).cochain;
    let approx = &delta(&alpha).unwrap() * cubetest::Sign::MINUS;
    let dist = f.distance(&approx).unwrap();
    assert_eq!(Some(dist.to_string().as_str()), r.get("achieved_distance"));
}

#[test]
fn cohomology_and_expansion_reports() {
    let o = run(&["cohomology", "--n", "10", "--d", "2", "--structure"]);
    assert!(o.status.success());
    let r = Report::parse(&stdout(&o));
    assert_eq!(r.get("dim_H"), Some("2"));
    assert_eq!(r.get("dim_Z"), Some("37"));
    assert_eq!(r.get("dim_B"), Some("35"));

    let o = run(&["cohomology", "--n", "3", "--d", "2"]);
    assert_eq!(o.status.code(), Some(2));

    let o = run(&["expansion", "--n", "5", "--d", "1", "--mode", "exact"]);
    assert!(o.status.success());
    let r = Report::parse(&stdout(&o));
    assert_eq!(r.get("mode"), Some("exact"));
}

fn bench_csv(args: &[&str]) -> Vec<csv::StringRecord> {
    let mut full = vec!["bench"];
    full.extend_from_slice(args);
    let o = run(&full);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let mut reader = csv::Reader::from_reader(o.stdout.as_slice());
    let headers = reader.headers().unwrap().clone();
    assert_eq!(&headers[0], "noise_rate");
    assert_eq!(&headers[1], "exact_distance_to_property");
    reader.records().map(|r| r.unwrap()).collect()
}

#[test]
fn bench_rows_are_consistent() {
    let rows = bench_csv(&[
        "--n",
        "12",
        "--d",
        "1",
        "--noise",
        "0,0.01,0.05",
        "--trials",
        "2000",
        "--seed",
        "5",
        "--exact",
    ]);
    assert_eq!(rows.len(), 3);
    let num = |r: &csv::StringRecord, i: usize| r[i].parse::<f64>().unwrap();
    assert_eq!(num(&rows[0], 1), 0.0);
    assert_eq!(num(&rows[0], 4), 0.0);
    for r in &rows {
        assert_eq!(&r[3], "true");
        assert_eq!(num(r, 4), num(r, 2));
        assert!(num(r, 2) * 3.0 + 1e-9 >= num(r, 1));
    }

    let sampled = bench_csv(&[
        "--n", "12", "--d", "2", "--noise", "0,0.001", "--trials", "500", "--seed", "2",
    ]);
    assert_eq!(num(&sampled[0], 5), 0.0);
    assert_eq!(sampled[1][7].parse::<u64>().unwrap(), 2);
}
