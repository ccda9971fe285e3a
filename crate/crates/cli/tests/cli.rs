use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn gsmi(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gsmi")).args(args).output().unwrap()
}

fn write_config(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_string()
}

fn data_rows(text: &str) -> Vec<Vec<String>> {
    text.lines()
        .filter(|l| !l.starts_with('#'))
        .skip(1)
        .map(|l| l.split(',').map(String::from).collect())
        .collect()
}

#[test]
fn ground_reports_energy_and_reuses_cache() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("cache");
    let config = write_config(dir.path(), "g.conf", "L = 8\nmethod = lanczos\n");
    let args = ["ground", "--config", &config, "--cache-dir", cache.to_str().unwrap()];

    let first = gsmi(&args);
    assert!(first.status.success(), "{}", String::from_utf8_lossy(&first.stderr));
    let line = String::from_utf8(first.stdout).unwrap();
    assert!(line.contains("cache=miss"), "{line}");

    let energy: f64 = line
        .split_whitespace()
        .find_map(|t| t.strip_prefix("energy="))
        .unwrap()
        .parse()
        .unwrap();
    let dense_config = write_config(dir.path(), "d.conf", "L = 8\nmethod = dense\n");
    let dense = gsmi(&["ground", "--config", &dense_config]);
    let dense_line = String::from_utf8(dense.stdout).unwrap();
    let dense_energy: f64 = dense_line
        .split_whitespace()
        .find_map(|t| t.strip_prefix("energy="))
        .unwrap()
        .parse()
        .unwrap();
    assert!((energy - dense_energy).abs() < 1e-8);

    let second = gsmi(&args);
    assert!(String::from_utf8(second.stdout).unwrap().contains("cache=hit"));
}

#[test]
fn lanczos_rejects_two_sites() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(dir.path(), "g.conf", "L = 2\n");
    let out = gsmi(&["ground", "--config", &config]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn case1_writes_sorted_points_and_fits() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("z.csv");
    let config = write_config(
        dir.path(),
        "c1.conf",
        "L = 10\naxis = Z\np_m = 0.5, 0, 0.2\nL_A = 1:9\n",
    );
    let run = gsmi(&["case1", "--config", &config, "--out", out.to_str().unwrap(), "--window", "3:7"]);
    assert!(run.status.success(), "{}", String::from_utf8_lossy(&run.stderr));

    let points = fs::read_to_string(&out).unwrap();
    assert!(points.starts_with('#'));
    assert_eq!(points.lines().nth(1).unwrap(), "L,L_A,axis,p_m,p_y,S_A,S_B,S_AB,I2");
    let rows = data_rows(&points);
    assert_eq!(rows.len(), 27);
    assert_eq!(rows[0][..5], ["10", "1", "Z", "0", "0"]);
    assert_eq!(rows[26][..5], ["10", "9", "Z", "0.5", "0"]);

    let fits = fs::read_to_string(dir.path().join("z.fit.csv")).unwrap();
    assert_eq!(fits.lines().nth(1).unwrap(), "axis,p_m,p_y,c2,b2,rms,window");
    let fit_rows = data_rows(&fits);
    assert_eq!(fit_rows.len(), 3);
    assert!(fit_rows.iter().all(|r| r[6] == "3:7"));

    // Refitting the emitted points reproduces the fit table byte for byte.
    let refit = dir.path().join("refit.csv");
    let run = gsmi(&["fit", out.to_str().unwrap(), "--window", "3:7", "--out", refit.to_str().unwrap()]);
    assert!(run.status.success());
    assert_eq!(fs::read_to_string(refit).unwrap(), fits);
}

#[test]
fn output_is_deterministic_across_worker_counts() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(dir.path(), "c.conf", "L = 9\naxis = Y\np_m = 0.1, 0.3\nL_A = 2:7\n");
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    assert!(gsmi(&["--workers", "1", "case1", "--config", &config, "--out", a.to_str().unwrap()]).status.success());
    assert!(gsmi(&["--workers", "3", "case1", "--config", &config, "--out", b.to_str().unwrap()]).status.success());
    let (ra, rb) = (data_rows(&fs::read_to_string(a).unwrap()), data_rows(&fs::read_to_string(b).unwrap()));
    assert_eq!(ra.len(), rb.len());
    for (x, y) in ra.iter().zip(&rb) {
        assert_eq!(x[..5], y[..5]);
        for k in 5..9 {
            let (u, v): (f64, f64) = (x[k].parse().unwrap(), y[k].parse().unwrap());
            assert!((u - v).abs() <= 1e-13, "{u} vs {v}");
        }
    }
}

#[test]
fn case2_without_decoherence_matches_case1() {
    let dir = tempfile::tempdir().unwrap();
    let c1 = write_config(dir.path(), "c1.conf", "L = 8\np_m = 0, 0.3, 0.5\nL_A = 2:6\n");
    let c2 = write_config(dir.path(), "c2.conf", "L = 8\np_m = 0, 0.3, 0.5\np_y = 0\nL_A = 2:6\n");
    let (o1, o2) = (dir.path().join("one.csv"), dir.path().join("two.csv"));
    assert!(gsmi(&["case1", "--config", &c1, "--out", o1.to_str().unwrap()]).status.success());
    let run = gsmi(&["case2", "--config", &c2, "--out", o2.to_str().unwrap()]);
    assert!(run.status.success(), "{}", String::from_utf8_lossy(&run.stderr));
    let (r1, r2) = (data_rows(&fs::read_to_string(o1).unwrap()), data_rows(&fs::read_to_string(o2).unwrap()));
    assert_eq!(r1.len(), r2.len());
    for (x, y) in r1.iter().zip(&r2) {
        assert_eq!(x[..5], y[..5]);
        let (u, v): (f64, f64) = (x[8].parse().unwrap(), y[8].parse().unwrap());
        assert!((u - v).abs() <= 1e-10);
    }
}

#[test]
fn config_errors_exit_with_status_2() {
    let dir = tempfile::tempdir().unwrap();
    let cases = [
        ("case1", "L = 8\np_m = 0.1\np_y = 0.1\n"),
        ("case1", "L = 8\n"),
        ("case1", "L = 8\np_m = 0.9\n"),
        ("case2", "L = 14\np_m = 0.1\n"),
        ("case2", "L = 8\naxis = X\np_m = 0.1\n"),
        ("case1", "L = 8\np_m = 0.1\nbogus = 1\n"),
    ];
    for (k, (cmd, text)) in cases.iter().enumerate() {
        let config = write_config(dir.path(), &format!("bad{k}.conf"), text);
        let out = gsmi(&[cmd, "--config", &config]);
        assert_eq!(out.status.code(), Some(2), "{cmd} {text:?}: {}", String::from_utf8_lossy(&out.stderr));
    }
    let missing = gsmi(&["case1", "--config", dir.path().join("nope.conf").to_str().unwrap()]);
    assert_eq!(missing.status.code(), Some(2));
    assert_eq!(gsmi(&["case1", "--config", "x", "--window", "9:2"]).status.code(), Some(2));
}

#[test]
fn numeric_failure_exits_with_status_3() {
    let dir = tempfile::tempdir().unwrap();
    // A single L_A leaves the fit with one scaling-variable value.
    let config = write_config(dir.path(), "c.conf", "L = 8\np_m = 0.2\nL_A = 4\n");
    let out = gsmi(&["case1", "--config", &config, "--out", dir.path().join("o.csv").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));
}
