use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use bifree::{parse_bivariate, parse_univariate, read_bivariate};
use bifree_core::{BivariateCdf, ProjectionPairLaw, UnivariateCdf};
use tempfile::TempDir;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_bifree"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("spawn bifree")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn put_bi(dir: &TempDir, name: &str, f: &BivariateCdf) -> PathBuf {
    let p = dir.path().join(name);
    bifree::write_bivariate(&p, f).unwrap();
    p
}

fn put_uni(dir: &TempDir, name: &str, f: &UnivariateCdf) -> PathBuf {
    let p = dir.path().join(name);
    bifree::write_univariate(&p, f).unwrap();
    p
}

fn put_text(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let p = dir.path().join(name);
    fs::write(&p, text).unwrap();
    p
}

fn uni(b: &[f64], v: &[f64]) -> UnivariateCdf {
    UnivariateCdf::new(b.to_vec(), v.to_vec()).unwrap()
}

fn product() -> BivariateCdf {
    BivariateCdf::product(&uni(&[0.0, 1.0], &[0.4, 1.0]), &uni(&[0.0, 2.0], &[0.7, 1.0])).unwrap()
}

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

#[test]
fn validate_reports() {
    let dir = TempDir::new().unwrap();
    let ok = put_bi(&dir, "ok.json", &product());
    let o = run(&["validate", s(&ok)]);
    assert_eq!((code(&o), stdout(&o).trim()), (0, "OK"));

    // the cell (1,1) carries mass 1 - 0.6 - 0.6 + 0.1 < 0
    let bad = put_text(
        &dir,
        "bad.json",
        r#"{"x_breaks":[0,1],"y_breaks":[0,1],"cdf":[[0.1,0.6],[0.6,1.0]]}"#,
    );
    let o = run(&["validate", s(&bad)]);
    assert_eq!(code(&o), 1);
    assert!(stderr(&o).contains("rectangle violation at cell (1, 1)"), "{}", stderr(&o));

    let cut = put_text(&dir, "cut.json", r#"{"x_breaks":[0,1],"y_breaks":[0,1],"cdf":[[0.1,"#);
    let o = run(&["validate", s(&cut)]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("EOF"), "{}", stderr(&o));

    let o = run(&["validate", "/nonexistent/f.json"]);
    assert_eq!(code(&o), 2);

    let u = put_uni(&dir, "u.json", &uni(&[0.0, 1.0], &[0.3, 1.0]));
    assert_eq!(code(&run(&["validate", "--kind", "uni", s(&u)])), 0);
    let u = put_text(&dir, "u2.json", r#"{"breaks":[0,1],"values":[0.5,0.9]}"#);
    let o = run(&["validate", "--kind", "uni", s(&u)]);
    assert_eq!(code(&o), 1);
    assert!(stderr(&o).contains("total-mass"));
}

#[test]
fn uniconv_examples() {
    let dir = TempDir::new().unwrap();
    let cases = [
        ("max", uni(&[0.0, 1.0], &[0.6, 1.0]), uni(&[0.0, 1.0], &[0.7, 1.0]), vec![0.3, 1.0]),
        ("min", uni(&[0.0, 1.0], &[0.2, 1.0]), uni(&[0.0, 1.0], &[0.3, 1.0]), vec![0.5, 1.0]),
        ("max", uni(&[0.0, 1.0], &[0.2, 1.0]), uni(&[0.0, 1.0], &[0.3, 1.0]), vec![0.0, 1.0]),
    ];
    for (k, (op, f, g, want)) in cases.iter().enumerate() {
        let pf = put_uni(&dir, &format!("f{k}.json"), f);
        let pg = put_uni(&dir, &format!("g{k}.json"), g);
        let out = dir.path().join(format!("h{k}.json"));
        let o = run(&["uniconv", s(&pf), s(&pg), "--op", op, "--out", s(&out)]);
        assert_eq!(code(&o), 0, "{}", stderr(&o));
        let h = parse_univariate(&out, &fs::read_to_string(&out).unwrap()).unwrap();
        for (a, b) in h.values().iter().zip(want) {
            assert!((a - b).abs() < 1e-15);
        }
    }
    let bad = put_text(&dir, "bad.json", r#"{"breaks":[0,1],"values":[0.5,0.4]}"#);
    let good = put_uni(&dir, "good.json", &uni(&[0.0], &[1.0]));
    assert_eq!(code(&run(&["uniconv", s(&bad), s(&good)])), 1);
}

#[test]
fn biconv_examples() {
    let dir = TempDir::new().unwrap();
    let f = put_bi(&dir, "f.json", &product());
    let g = put_bi(
        &dir,
        "g.json",
        &BivariateCdf::product(&uni(&[0.5, 1.0], &[0.8, 1.0]), &uni(&[0.0, 1.0], &[0.9, 1.0])).unwrap(),
    );
    let out = dir.path().join("h.json");
    let o = run(&["biconv", s(&f), s(&g), "--out", s(&out)]);
    assert_eq!(code(&o), 0);
    assert!(stderr(&o).contains("psi ≡ 1"), "{}", stderr(&o));
    assert!(stderr(&o).contains("marginals exact"));
    let h = read_bivariate(&out).unwrap();
    let (h1, h2) = h.marginals();
    let prod = BivariateCdf::product(&h1, &h2).unwrap();
    for (a, b) in h.as_slice().iter().zip(prod.as_slice()) {
        assert!((a - b).abs() < 1e-15);
    }

    let pa = put_bi(&dir, "pa.json", &ProjectionPairLaw::new(0.6, 0.7, 0.5).unwrap().indicator_cdf());
    let pb = put_bi(&dir, "pb.json", &ProjectionPairLaw::new(0.8, 0.5, 0.45).unwrap().indicator_cdf());
    let o = run(&["biconv", s(&pa), s(&pb)]);
    assert_eq!(code(&o), 0);
    let h = parse_bivariate(Path::new("stdout"), &stdout(&o)).unwrap();
    assert!((h.value(0, 0) - 0.1097561).abs() < 1e-7);
    assert!((h.value(0, 0) - 9.0 / 82.0).abs() < 1e-15);

    let gb = product();
    let unit = put_bi(&dir, "unit.json", &BivariateCdf::point_mass(gb.x_breaks()[0], gb.y_breaks()[0]).unwrap());
    let o = run(&["biconv", s(&unit), s(&f)]);
    let h = parse_bivariate(Path::new("stdout"), &stdout(&o)).unwrap();
    assert_eq!(h.x_breaks(), gb.x_breaks());
    assert_eq!(h.y_breaks(), gb.y_breaks());
    for (a, b) in h.as_slice().iter().zip(gb.as_slice()) {
        assert!((a - b).abs() < 1e-15);
    }

    let bad = put_text(&dir, "bad.json", r#"{"x_breaks":[0,1],"y_breaks":[0,1],"cdf":[[0.1,0.6],[0.6,1.0]]}"#);
    let o = run(&["biconv", s(&bad), s(&f)]);
    assert_eq!(code(&o), 1);
    assert!(stderr(&o).contains("rectangle"));
}

#[test]
fn nfold_and_root() {
    let dir = TempDir::new().unwrap();
    // every value sits above 2/3, so the 3-fold power loses nothing
    let f = BivariateCdf::from_rows(
        vec![0.0, 1.0],
        vec![0.0, 1.0],
        &[vec![0.92, 0.95], vec![0.96, 1.0]],
    )
    .unwrap();
    let pf = put_bi(&dir, "f.json", &f);

    let one = dir.path().join("one.json");
    assert_eq!(code(&run(&["nfold", s(&pf), "1", "--out", s(&one)])), 0);
    assert_eq!(fs::read(&one).unwrap(), fs::read(&pf).unwrap());

    let three = dir.path().join("three.json");
    assert_eq!(code(&run(&["nfold", s(&pf), "3", "--out", s(&three)])), 0);
    let root = dir.path().join("root.json");
    let o = run(&["root", s(&three), "3", "--out", s(&root)]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let back = read_bivariate(&root).unwrap();
    for (a, b) in back.as_slice().iter().zip(f.as_slice()) {
        assert!((a - b).abs() <= 1e-9);
    }

    let o = run(&["root", s(&fixture("root_failure.json")), "2", "--out", s(&dir.path().join("x.json"))]);
    assert_eq!(code(&o), 1);
    assert!(stderr(&o).contains("rectangle violation at cell (2, 1)"), "{}", stderr(&o));
    assert!(!dir.path().join("x.json").exists());

    assert_eq!(code(&run(&["nfold", s(&pf), "0"])), 1);
}

#[test]
fn stability_examples() {
    let dir = TempDir::new().unwrap();
    let pf = put_bi(&dir, "f.json", &product());
    let o = run(&["stability", s(&pf), "1", "1", "0", "1", "0"]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o).trim().parse::<f64>().unwrap(), 0.0);

    let pm = put_bi(&dir, "pm.json", &BivariateCdf::point_mass(0.3, -2.0).unwrap());
    for n in ["2", "7"] {
        let o = run(&["stability", s(&pm), n, "1", "0", "1", "0"]);
        assert_eq!(stdout(&o).trim().parse::<f64>().unwrap(), 0.0);
    }

    // nfold(F, 2) of the product has marginals (0, 1) and (0.4, 1); on the grid
    // |H - F| is 0.28, 0.3, 0.4 and 0, the largest at (0, 2) where H = 0.
    let o = run(&["stability", s(&pf), "2", "1", "0", "1", "0"]);
    assert_eq!(code(&o), 0);
    let text = stdout(&o);
    assert_eq!(text.trim(), "4.000000000e-1");

    // negative shifts and a bad scale
    let o = run(&["stability", s(&pf), "2", "2", "-1", "0.5", "-3"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    assert_eq!(code(&run(&["stability", s(&pf), "2", "0", "0", "1", "0"])), 1);
}

#[test]
fn oracle_examples() {
    let o = run(&["oracle", "1", "1", "1", "1", "1", "1"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let vals: Vec<f64> = stdout(&o)
        .lines()
        .take(3)
        .map(|l| l.split('\t').nth(1).unwrap().parse().unwrap())
        .collect();
    assert_eq!(vals, vec![1.0, 1.0, 1.0]);

    let o = run(&["oracle", "0.6", "0.7", "0.5", "0.8", "0.5", "0.45"]);
    assert_eq!(code(&o), 0);
    let out = stdout(&o);
    let mut spread = f64::NAN;
    for line in out.lines() {
        let (k, v) = line.split_once('\t').unwrap();
        let v: f64 = v.parse().unwrap();
        if k == "spread" {
            spread = v;
        } else {
            assert!((v - 0.1097561).abs() < 1e-6, "{line}");
        }
    }
    assert!(spread <= 1e-6);

    let o = run(&["oracle", "0.3", "0.5", "0.2", "0.4", "0.5", "0.2"]);
    assert_eq!(code(&o), 0);
    for line in stdout(&o).lines() {
        assert_eq!(line.split('\t').nth(1).unwrap().parse::<f64>().unwrap(), 0.0);
    }

    let o = run(&["oracle", "0.6", "0.7", "0.2", "0.8", "0.5", "0.45"]);
    assert_eq!(code(&o), 1);
    assert!(stderr(&o).contains("Frechet lower bound"));
    let o = run(&["oracle", "0.6", "0.7", "0.5", "0.8", "0.5", "0.6"]);
    assert_eq!(code(&o), 1);
    assert!(stderr(&o).contains("Frechet upper bound"));

    // an impossible spread tolerance turns agreement into a domain failure
    let o = run(&["oracle", "0.6", "0.7", "0.5", "0.8", "0.5", "0.45", "--tol-spread=-1"]);
    assert_eq!(code(&o), 1);
}

#[test]
fn ecdf_and_plotdata() {
    let dir = TempDir::new().unwrap();
    let one = put_text(&dir, "one.tsv", "# a single draw\n1.5\t-2\n");
    let o = run(&["ecdf", s(&one)]);
    assert_eq!(code(&o), 0);
    let e = parse_bivariate(Path::new("stdout"), &stdout(&o)).unwrap();
    assert_eq!(e, BivariateCdf::point_mass(1.5, -2.0).unwrap());

    let grid = put_text(&dir, "grid.tsv", "0\t0\n0\t1\n\n1\t0\n1\t1\n");
    let out = dir.path().join("e.json");
    assert_eq!(code(&run(&["ecdf", s(&grid), "--out", s(&out)])), 0);
    let e = read_bivariate(&out).unwrap();
    let half = uni(&[0.0, 1.0], &[0.5, 1.0]);
    assert_eq!(e, BivariateCdf::product(&half, &half).unwrap());

    let empty = put_text(&dir, "empty.tsv", "# nothing\n\n");
    assert_eq!(code(&run(&["ecdf", s(&empty)])), 1);
    let junk = put_text(&dir, "junk.tsv", "1\tx\n");
    assert_eq!(code(&run(&["ecdf", s(&junk)])), 2);

    let pf = put_bi(&dir, "f.json", &product());
    let plot = dir.path().join("p.tsv");
    assert_eq!(code(&run(&["plotdata", s(&pf), "--out", s(&plot)])), 0);
    let text = fs::read_to_string(&plot).unwrap();
    assert_eq!(text.lines().count(), 4);
    let rows: Vec<Vec<f64>> = text
        .lines()
        .map(|l| l.split('\t').map(|v| v.parse().unwrap()).collect())
        .collect();
    assert_eq!(rows[1], vec![0.0, 2.0, 0.4]);
    assert_eq!(rows[2], vec![1.0, 0.0, 0.7]);
}

#[test]
fn written_files_round_trip_bit_exactly() {
    let dir = TempDir::new().unwrap();
    let f = ProjectionPairLaw::new(0.1 + 0.2, 0.7, 0.3).unwrap().joint_cdf();
    let p = put_bi(&dir, "f.json", &f);
    let back = read_bivariate(&p).unwrap();
    for (a, b) in back.as_slice().iter().zip(f.as_slice()) {
        assert_eq!(a.to_bits(), b.to_bits());
    }
    // nfold with n = 1 through the binary goes through a full read and write
    let q = dir.path().join("q.json");
    assert_eq!(code(&run(&["nfold", s(&p), "1", "--out", s(&q)])), 0);
    assert_eq!(fs::read(&p).unwrap(), fs::read(&q).unwrap());
}
