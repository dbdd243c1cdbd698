use std::f64::consts::PI;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use qcollide::collision::{CollisionConfig, CouplingParams};
use qcollide::thermo::{steady_currents, SteadyMethod};
use tempfile::TempDir;

fn qcollide(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qcollide"))
        .current_dir(dir)
        .env_remove("QCOLLIDE_MAX_WORKERS")
        .args(args)
        .output()
        .expect("binary runs")
}

fn write_config(dir: &Path, body: &str) -> PathBuf {
    let path = dir.join("experiment.toml");
    fs::write(&path, body).unwrap();
    path
}

fn read_csv(path: &Path) -> (Vec<String>, Vec<Vec<f64>>) {
    let mut r = csv::Reader::from_path(path).unwrap();
    let header = r.headers().unwrap().iter().map(String::from).collect();
    let rows = r
        .records()
        .map(|rec| rec.unwrap().iter().map(|c| c.parse::<f64>().unwrap()).collect())
        .collect();
    (header, rows)
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

#[test]
fn empty_config_names_mode() {
    let tmp = TempDir::new().unwrap();
    let cfg = write_config(tmp.path(), "");
    let out = qcollide(tmp.path(), &["--config", cfg.to_str().unwrap(), "run"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(stderr(&out).contains("mode"));
}

#[test]
fn malformed_file_reports_line() {
    let tmp = TempDir::new().unwrap();
    let cfg = write_config(tmp.path(), "mode = \"steady\"\ndelta = [\n");
    let out = qcollide(tmp.path(), &["--config", cfg.to_str().unwrap(), "run"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("line"), "{}", stderr(&out));

    let cfg = write_config(tmp.path(), "mode = \"steady\"\n[hot]\ntemprature = 2.0\n");
    let out = qcollide(tmp.path(), &["--config", cfg.to_str().unwrap(), "run"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("temprature"), "{}", stderr(&out));
}

#[test]
fn physically_invalid_values_are_rejected() {
    let tmp = TempDir::new().unwrap();
    for set in ["p=1.2", "hot.temperature=0", "gamma=\"3pi/4\"", "system=\"21\""] {
        let out = qcollide(tmp.path(), &["--set", set, "steady"]);
        assert_eq!(out.status.code(), Some(3), "{set}: {}", stderr(&out));
    }
}

#[test]
fn uncoupled_trajectory_exchanges_no_heat() {
    let tmp = TempDir::new().unwrap();
    let cfg = write_config(
        tmp.path(),
        "mode = \"trajectory\"\ngamma = 0\ncollisions = 25\np = 0.8\ndphi = \"pi/2\"\n",
    );
    let out = qcollide(tmp.path(), &["--config", cfg.to_str().unwrap(), "--out", "o", "run"]);
    assert!(out.status.success(), "{}", stderr(&out));
    let (header, rows) = read_csv(&tmp.path().join("o/trajectory.csv"));
    assert_eq!(header, ["n", "J_h", "J_c", "cumulative_Q_h", "cumulative_Q_c"]);
    assert_eq!(rows.len(), 25);
    for (i, row) in rows.iter().enumerate() {
        assert_eq!(row[0], (i + 1) as f64);
        assert!(row[1..].iter().all(|&x| x == 0.0));
    }
    assert!(tmp.path().join("o/trajectory.manifest.toml").exists());
}

#[test]
fn angles_in_multiples_of_pi() {
    let tmp = TempDir::new().unwrap();
    let cfg = write_config(
        tmp.path(),
        "mode = \"trajectory\"\ncollisions = 2\ndphi = \"1.25pi\"\ndelta = \"pi/3\"\n[cold]\nphase = \"pi/4\"\n",
    );
    let out = qcollide(tmp.path(), &["--config", cfg.to_str().unwrap(), "--out", "o", "run"]);
    assert!(out.status.success(), "{}", stderr(&out));
    let manifest: toml::Table = fs::read_to_string(tmp.path().join("o/trajectory.manifest.toml"))
        .unwrap()
        .parse()
        .unwrap();
    let c = &manifest["config"];
    assert_eq!(c["delta"].as_float(), Some(PI / 3.0));
    assert_eq!(c["cold"]["phase"].as_float(), Some(PI / 4.0));
    assert_eq!(c["hot"]["phase"].as_float(), Some(PI / 4.0 + 1.25 * PI));

    let out = qcollide(tmp.path(), &["--set", "dphi=\"1.25 pie\"", "steady"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn exit_codes_follow_error_class() {
    let tmp = TempDir::new().unwrap();
    let out = qcollide(tmp.path(), &["--out", "o", "--max-steps", "10", "steady"]);
    assert_eq!(out.status.code(), Some(4), "{}", stderr(&out));
    let out = qcollide(tmp.path(), &["--out", "o", "--joint-cap", "6", "entropy"]);
    assert_eq!(out.status.code(), Some(5), "{}", stderr(&out));
    let out = qcollide(
        tmp.path(),
        &["--out", "o", "--set", "grids.temperature=[1.0]", "--set", "grids.delta_t=[0.5, 1.0]", "conductance"],
    );
    assert_eq!(out.status.code(), Some(6), "{}", stderr(&out));
    let out = qcollide(tmp.path(), &["--bogus-flag", "steady"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn sweeps_are_identical_across_workers() {
    let tmp = TempDir::new().unwrap();
    let cfg = write_config(
        tmp.path(),
        "mode = \"phase-sweep\"\np = 0.8\n[grids]\ndphi = [0, \"pi/4\", \"pi/2\", \"pi\", \"1.25pi\", \"3pi/2\", 5.5]\np = [0.3, 0.8]\n",
    );
    let c = cfg.to_str().unwrap();
    let mut outputs = Vec::new();
    for workers in ["1", "3", "0"] {
        let dir = format!("w{workers}");
        let out = qcollide(tmp.path(), &["--config", c, "--out", &dir, "--workers", workers, "run"]);
        assert!(out.status.success(), "{}", stderr(&out));
        outputs.push(fs::read(tmp.path().join(&dir).join("phase_sweep.csv")).unwrap());
    }
    let capped = Command::new(env!("CARGO_BIN_EXE_qcollide"))
        .current_dir(tmp.path())
        .env("QCOLLIDE_MAX_WORKERS", "2")
        .args(["--config", c, "--out", "capped", "run"])
        .output()
        .unwrap();
    assert!(capped.status.success());
    outputs.push(fs::read(tmp.path().join("capped/phase_sweep.csv")).unwrap());
    assert!(outputs.windows(2).all(|w| w[0] == w[1]));

    let again = qcollide(tmp.path(), &["--config", c, "--out", "w1", "--workers", "1", "run"]);
    assert!(again.status.success());
    assert_eq!(fs::read(tmp.path().join("w1/phase_sweep.csv")).unwrap(), outputs[0]);
}

#[test]
fn sweep_rows_rederive_from_library() {
    let tmp = TempDir::new().unwrap();
    let out = qcollide(
        tmp.path(),
        &["--out", "o", "--set", "p=0.8", "--set", "grids.dphi=[0.4, 2.2, 4.9]", "--set", "steady.method=\"fixed-point\"", "sweep-phase"],
    );
    assert!(out.status.success(), "{}", stderr(&out));
    let (header, rows) = read_csv(&tmp.path().join("o/phase_sweep.csv"));
    assert_eq!(header, ["p", "dphi", "J_h", "J_c"]);
    for row in rows {
        let cfg = CollisionConfig::standard(2.0, 1.0, row[1], row[0], CouplingParams::new(PI / 32.0, PI / 4.0).unwrap())
            .unwrap();
        let (jh, jc) = steady_currents(&cfg, &SteadyMethod::FixedPoint).unwrap();
        assert_eq!((row[2], row[3]), (jh, jc));
    }
}

#[test]
fn conductance_mode_reports_fits() {
    let tmp = TempDir::new().unwrap();
    let out = qcollide(
        tmp.path(),
        &["--out", "o", "--set", "grids.temperature=[0.5, 1.0, 2.0]", "--set", "grids.p=[0.0, 0.8]", "conductance"],
    );
    assert!(out.status.success(), "{}", stderr(&out));
    let (header, rows) = read_csv(&tmp.path().join("o/conductance.csv"));
    assert_eq!(header, ["p", "dphi", "T", "kappa", "intercept_c", "residual_rms"]);
    assert_eq!(rows.len(), 6);
    for chunk in rows.chunks(3) {
        assert!(chunk.iter().all(|r| r[3] > 0.0 && r[4].abs() < 1e-8));
    }
    // Coherence at zero phase difference lowers the conductance.
    for i in 0..3 {
        assert!(rows[3 + i][3] < rows[i][3]);
    }
}

#[test]
fn entropy_mode_ledger() {
    let tmp = TempDir::new().unwrap();
    let out = qcollide(tmp.path(), &["--out", "o", "--set", "p=0.8", "--set", "dphi=\"pi/2\"", "--set", "entropy.collisions=3", "entropy"]);
    assert!(out.status.success(), "{}", stderr(&out));
    let (header, rows) = read_csv(&tmp.path().join("o/entropy.csv"));
    assert_eq!(header[0], "n");
    assert_eq!(rows.len(), 3);
    let col = |name: &str| header.iter().position(|h| h == name).unwrap();
    for row in rows {
        assert!(row[col("dS_production")] >= 0.0);
        assert!(row[col("decomposition_residual")] < 1e-9);
        assert_eq!(row[col("support_violated")], 0.0);
    }
}

#[test]
fn fig2_preset_layout() {
    let tmp = TempDir::new().unwrap();
    let out = qcollide(tmp.path(), &["preset", "fig2"]);
    assert!(out.status.success(), "{}", stderr(&out));
    let (header, rows) = read_csv(&tmp.path().join("fig2/fig2_trajectories.csv"));
    assert_eq!(header[..3], ["p", "dphi", "n"]);
    assert_eq!(rows.len(), 7 * 1000);
    let runs: Vec<(f64, f64)> = rows.iter().filter(|r| r[2] == 1.0).map(|r| (r[0], r[1])).collect();
    let expected = [0.0, 0.25, 0.5, 1.0, 1.25, 1.5].map(|k| (0.8, k * PI));
    assert_eq!(runs[..6], expected);
    assert_eq!(runs[6], (0.0, 0.0));

    let (_, steady) = read_csv(&tmp.path().join("fig2/fig2_steady.csv"));
    assert_eq!(steady.len(), 7);
    let thermal = steady[6][2];
    assert!(thermal < 0.0);
    // Reversed current at 5π/4 and 3π/2.
    assert!(steady[4][2] > 0.0 && steady[5][2] > 0.0);
    let manifest = fs::read_to_string(tmp.path().join("fig2/fig2_steady.manifest.toml")).unwrap();
    assert!(manifest.contains("preset = \"fig2\""));
}

#[test]
fn fig3_preset_layout() {
    let tmp = TempDir::new().unwrap();
    let out = qcollide(tmp.path(), &["--set", "steady.method=\"fixed-point\"", "preset", "fig3"]);
    assert!(out.status.success(), "{}", stderr(&out));
    let (header, rows) = read_csv(&tmp.path().join("fig3/fig3_phase.csv"));
    assert_eq!(header, ["gamma", "dphi", "J_h", "J_c"]);
    let gammas: Vec<f64> = rows.chunks(72).map(|c| c[0][0]).collect();
    assert_eq!(gammas, [PI / 2.0, PI / 4.0, PI / 12.0, PI / 32.0]);
    for c in rows.chunks(72) {
        assert!(c.iter().all(|r| r[0] == c[0][0]));
        assert_eq!(c[0][1], 0.0);
        assert!(c[71][1] < 2.0 * PI);
    }
}

#[test]
fn fig4_preset_keeps_conductance_order() {
    let tmp = TempDir::new().unwrap();
    let out = qcollide(tmp.path(), &["--out", "f4", "preset", "fig4"]);
    assert!(out.status.success(), "{}", stderr(&out));
    let (_, rows) = read_csv(&tmp.path().join("f4/fig4_conductance.csv"));
    let n = rows.len() / 3;
    for i in 0..n {
        let (k0, kpi, kth) = (rows[i][3], rows[n + i][3], rows[2 * n + i][3]);
        assert!(k0 < kpi && kpi < kth, "T {}", rows[i][2]);
    }
}

#[test]
fn fig5_preset_signs_at_small_gap() {
    let tmp = TempDir::new().unwrap();
    let out = qcollide(tmp.path(), &["--out", "f5", "preset", "fig5"]);
    assert!(out.status.success(), "{}", stderr(&out));
    let (header, rows) = read_csv(&tmp.path().join("f5/fig5_surface.csv"));
    assert_eq!(header, ["dphi", "delta_T", "T", "J_h"]);
    let smallest = rows.iter().map(|r| r[1]).fold(f64::INFINITY, f64::min);
    for r in rows.iter().filter(|r| r[1] == smallest) {
        if r[0] < PI {
            assert!(r[3] < 0.0);
        } else {
            assert!(r[3] > 0.0);
        }
    }
}

#[test]
fn selfcheck_passes() {
    let tmp = TempDir::new().unwrap();
    let out = qcollide(tmp.path(), &["selfcheck"]);
    assert!(out.status.success(), "{}", stderr(&out));
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(!text.contains("FAIL"));
}
