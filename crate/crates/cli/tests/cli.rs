use std::f64::consts::PI;
use std::path::Path;
use std::process::Command;

use stiefel_qg::{matio, random_tangent, stiefel_exp, RngSeed, StiefelPoint};
use stiefel_qg_cli::commands::{connect_points, relative_deviation};
use stiefel_qg_cli::{cmd_figure1, cmd_table1, CurveKind, ExperimentConfig};

fn qgeo() -> Command {
    Command::new(env!("CARGO_BIN_EXE_qgeo"))
}

fn write_point(path: &Path, x: &StiefelPoint) {
    std::fs::write(path, matio::write_matrix(x.matrix())).unwrap();
}

fn pair(n: usize, p: usize, d: f64, seed: u64) -> (StiefelPoint, StiefelPoint) {
    let u = StiefelPoint::random(n, p, RngSeed(seed));
    let delta = random_tangent(&u, d, RngSeed(seed).derive(1)).unwrap();
    (u, stiefel_exp(&delta, 1.0))
}

fn row_point(m: &nalgebra::DMatrix<f64>, row: usize, n: usize, p: usize) -> nalgebra::DMatrix<f64> {
    nalgebra::DMatrix::from_fn(n, p, |r, c| m[(row, r * p + c)])
}

#[test]
fn connect_identical_files() {
    let dir = tempfile::tempdir().unwrap();
    let u = StiefelPoint::random(10, 3, RngSeed(1));
    let a = dir.path().join("u.txt");
    write_point(&a, &u);
    let out = dir.path().join("curve.txt");
    for curve in ["econ", "short", "geodesic-shooting"] {
        let status = qgeo()
            .args([
                "connect",
                a.to_str().unwrap(),
                a.to_str().unwrap(),
                "--curve",
                curve,
            ])
            .args(["--samples", "5", "--out", out.to_str().unwrap()])
            .status()
            .unwrap();
        assert!(status.success(), "{curve}");
        let m = matio::parse_matrix(&std::fs::read_to_string(&out).unwrap()).unwrap();
        assert_eq!(m.shape(), (5, 30));
        for i in 0..5 {
            assert!(
                (row_point(&m, i, 10, 3) - u.matrix()).norm() < 1e-7,
                "{curve} row {i}"
            );
        }
    }
}

#[test]
fn connect_reaches_the_target() {
    let dir = tempfile::tempdir().unwrap();
    let (u, target) = pair(12, 3, 0.5 * PI, 2);
    let (a, b) = (dir.path().join("a.txt"), dir.path().join("b.txt"));
    write_point(&a, &u);
    write_point(&b, &target);
    let out = qgeo()
        .args([
            "connect",
            a.to_str().unwrap(),
            b.to_str().unwrap(),
            "--curve",
            "econ",
        ])
        .args(["--samples", "11"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let m = matio::parse_matrix(&String::from_utf8(out.stdout).unwrap()).unwrap();
    assert_eq!(m.nrows(), 11);
    assert_eq!(row_point(&m, 0, 12, 3), u.matrix().clone());
    assert!((row_point(&m, 10, 12, 3) - target.matrix()).norm() <= 1e-8);
}

#[test]
fn connect_in_process_matches_geodesic_by_shooting() {
    let (u, target) = pair(10, 2, 0.4 * PI, 3);
    let m = connect_points(&u, &target, CurveKind::GeodesicShooting, 3).unwrap();
    assert!((row_point(&m, 2, 10, 2) - target.matrix()).norm() <= 1e-10);
}

#[test]
fn mismatched_shapes_are_a_parse_error() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (dir.path().join("a.txt"), dir.path().join("b.txt"));
    write_point(&a, &StiefelPoint::random(10, 3, RngSeed(4)));
    write_point(&b, &StiefelPoint::random(10, 2, RngSeed(5)));
    let out = qgeo()
        .args(["connect", a.to_str().unwrap(), b.to_str().unwrap()])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    let stderr = String::from_utf8(out.stderr).unwrap();
    assert_eq!(stderr.lines().next(), Some("ParseError"));
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.txt");
    std::fs::write(&bad, "2 2\n1,1\n0,1\n").unwrap();
    let good = dir.path().join("good.txt");
    write_point(&good, &StiefelPoint::random(2, 2, RngSeed(6)));
    let out = qgeo()
        .args(["connect", bad.to_str().unwrap(), good.to_str().unwrap()])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(
        String::from_utf8(out.stderr).unwrap().lines().next(),
        Some("NotOrthonormal")
    );

    // Orthogonal subspaces: the overlap is singular.
    let mut e = nalgebra::DMatrix::zeros(6, 2);
    e[(0, 0)] = 1.0;
    e[(1, 1)] = 1.0;
    let mut f = nalgebra::DMatrix::zeros(6, 2);
    f[(2, 0)] = 1.0;
    f[(3, 1)] = 1.0;
    let (a, b) = (dir.path().join("e.txt"), dir.path().join("f.txt"));
    std::fs::write(&a, matio::write_matrix(&e)).unwrap();
    std::fs::write(&b, matio::write_matrix(&f)).unwrap();
    let out = qgeo()
        .args([
            "connect",
            a.to_str().unwrap(),
            b.to_str().unwrap(),
            "--curve",
            "econ",
        ])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));
    assert_eq!(
        String::from_utf8(out.stderr).unwrap().lines().next(),
        Some("SubspaceAngleTooLarge")
    );

    let out = qgeo()
        .args(["figure1", "--n", "10", "--p", "6"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    let out = qgeo().args(["figure1", "--d", "banana"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn figure1_is_deterministic_and_pinned_at_endpoints() {
    let dir = tempfile::tempdir().unwrap();
    let mut outputs = Vec::new();
    for run in 0..2 {
        let path = dir.path().join(format!("f{run}.csv"));
        let status = qgeo()
            .args(["figure1", "--n", "12", "--p", "3", "--d", "0.1pi,0.5pi"])
            .args(["--trials", "3", "--samples", "6", "--seed", "9"])
            .args(["--out", path.to_str().unwrap()])
            .status()
            .unwrap();
        assert!(status.success());
        outputs.push(std::fs::read(&path).unwrap());
    }
    assert_eq!(outputs[0], outputs[1]);
    let text = String::from_utf8(outputs.remove(0)).unwrap();
    let mut lines = text.lines();
    assert!(lines.next().unwrap().starts_with("# qgeo"));
    assert_eq!(
        lines.next().unwrap(),
        "trial,seed,d,t,dist_econ,dist_short,chordal_econ,chordal_short"
    );
    let rows: Vec<Vec<&str>> = lines.map(|l| l.split(',').collect()).collect();
    assert_eq!(rows.len(), 2 * 3 * 6);
    for row in rows {
        let t: f64 = row[3].parse().unwrap();
        if t == 0.0 || t == 1.0 {
            for field in &row[4..] {
                assert!(field.parse::<f64>().unwrap() <= 1e-8);
            }
        }
    }
}

#[test]
fn json_report_embeds_config() {
    let out = qgeo()
        .args(["table1", "--n", "20", "--p-range", "2:4:2", "--trials", "2"])
        .args(["--format", "json", "--seed", "3"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["experiment"], "table1");
    assert_eq!(v["seed"], 3);
    assert_eq!(v["config"]["n"], 20);
    assert_eq!(v["table1"].as_array().unwrap().len(), 2);
    assert_eq!(v["table1"][0]["trials"].as_array().unwrap().len(), 2);
}

#[test]
fn table1_trend_at_desk_scale() {
    let cfg = ExperimentConfig {
        n: 40,
        p_range: Some((4, 16, 12)),
        trials: 5,
        ..ExperimentConfig::table1_default()
    };
    let report = cmd_table1(&cfg).unwrap();
    let row = &report.table1;
    assert!(row[0].reldev_short < row[0].reldev_econ * 1e-2);
    assert!(row[1].reldev_short < row[0].reldev_short);
}

#[test]
fn geodesic_has_no_length_deviation() {
    let u = StiefelPoint::random(30, 5, RngSeed(10));
    let delta = random_tangent(&u, 0.5 * PI, RngSeed(11)).unwrap();
    let geo = stiefel_qg::Geodesic::new(delta);
    assert!(relative_deviation(geo.length(), 0.5 * PI) <= 1e-10);
}

#[test]
fn figure1_in_process_rows_share_trial_seed() {
    let cfg = ExperimentConfig {
        trials: 2,
        samples_per_curve: 3,
        distances: vec![0.2 * PI],
        ..ExperimentConfig::figure1_default()
    };
    let report = cmd_figure1(&cfg).unwrap();
    assert_eq!(report.figure1.len(), 2);
    assert_ne!(report.figure1[0].seed, report.figure1[1].seed);
    assert!(report.failures.is_empty());
}

#[test]
fn bench_rejects_short_curve_beyond_half() {
    let out = qgeo()
        .args([
            "bench",
            "--n",
            "20",
            "--p-range",
            "10:11:1",
            "--trials",
            "1",
        ])
        .output()
        .unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let rows: Vec<Vec<&str>> = text
        .lines()
        .skip(2)
        .map(|l| l.split(',').collect())
        .collect();
    assert!(!rows[0][6].is_empty());
    assert!(rows[1][6].is_empty());
}
