use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use umm_cli::config::{parse, parse_focus, Overrides, RunConfig};
use umm_cli::experiments::{find, registry};
use umm_cli::output::{fmt_f64, Table};

fn umm(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_umm")).args(args).output().expect("binary runs")
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn read_csv(path: &Path) -> (Vec<String>, Vec<Vec<String>>) {
    let mut r = csv::Reader::from_path(path).unwrap();
    let header = r.headers().unwrap().iter().map(str::to_string).collect();
    let rows = r.records().map(|rec| rec.unwrap().iter().map(str::to_string).collect()).collect();
    (header, rows)
}

const IDS: [&str; 13] = [
    "nf-factor",
    "aperture-gain",
    "beam",
    "beamdepth",
    "fig4-mu",
    "fig5-su",
    "fig6-ula",
    "fig6-upa",
    "fig9",
    "fig10",
    "fig11",
    "bbu",
    "circuit-demo",
];

#[test]
fn list_shows_every_experiment_in_order() {
    let o = umm(&["list-experiments"]);
    assert!(o.status.success());
    let text = String::from_utf8(o.stdout).unwrap();
    let ids: Vec<&str> = text.lines().map(|l| l.split_whitespace().next().unwrap()).collect();
    assert_eq!(ids, IDS);
    assert_eq!(registry().len(), IDS.len());
}

#[test]
fn same_seed_gives_identical_bytes() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    for dir in [&a, &b] {
        let o = umm(&["run", "fig6-ula", "--seed", "7", "--out", dir.path().to_str().unwrap()]);
        assert!(o.status.success(), "{}", stderr(&o));
    }
    for name in ["eigenvalues.csv", "ranks.csv"] {
        let x = fs::read(a.path().join("fig6-ula/seed-7").join(name)).unwrap();
        let y = fs::read(b.path().join("fig6-ula/seed-7").join(name)).unwrap();
        assert_eq!(x, y, "{name}");
    }
}

#[test]
fn monte_carlo_runs_repeat_bit_for_bit() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    for dir in [&a, &b] {
        let o = umm(&["fig9", "--seed", "3", "--trials", "4", "--out", dir.path().to_str().unwrap()]);
        assert!(o.status.success(), "{}", stderr(&o));
    }
    let x = fs::read(a.path().join("fig9/seed-3/fig9_clustered.csv")).unwrap();
    let y = fs::read(b.path().join("fig9/seed-3/fig9_clustered.csv")).unwrap();
    assert_eq!(x, y);
}

#[test]
fn fig9_tables_have_documented_columns() {
    let dir = tempfile::tempdir().unwrap();
    let o = umm(&["run", "fig9", "--trials", "3", "--out", dir.path().to_str().unwrap()]);
    assert!(o.status.success(), "{}", stderr(&o));
    let run = dir.path().join("fig9/seed-1");
    for env in ["isotropic", "clustered"] {
        let (header, rows) = read_csv(&run.join(format!("fig9_{env}.csv")));
        assert_eq!(header, ["tau_p", "estimator", "nmse", "stderr"]);
        assert!(!rows.is_empty());
        for r in &rows {
            assert!(r[1] == "ls" || r[1] == "mmse", "{}", r[1]);
            let nmse: f64 = r[2].parse().unwrap();
            assert!(nmse > 0.0 && nmse.is_finite());
        }
    }
    let manifest = fs::read_to_string(run.join("manifest.toml")).unwrap();
    assert!(manifest.contains("schema_version = 1"));
    assert!(manifest.contains("trials = 3"));
}

#[test]
fn beamdepth_row_matches_library() {
    use umm_core::beam::beamdepth_3db;
    use umm_core::geometry::{build_upa, region_bounds};

    let dir = tempfile::tempdir().unwrap();
    let o = umm(&["beamdepth", "--F", "0.05dF", "--out", dir.path().to_str().unwrap()]);
    assert!(o.status.success(), "{}", stderr(&o));
    let (header, rows) = read_csv(&dir.path().join("beamdepth/seed-1/beamdepth.csv"));
    assert_eq!(header[..5], ["fraunhofer_m", "focus_m", "lower_m", "upper_m", "depth_m"]);
    let row: Vec<f64> = rows[0].iter().map(|c| c.parse().unwrap()).collect();

    let df = region_bounds(&build_upa(100, 50, 0.01, 0.01, 0.01).unwrap()).fraunhofer;
    let bd = beamdepth_3db(0.05 * df, df).unwrap();
    assert_eq!(row[0], df);
    assert_eq!(row[4], bd.depth);
    assert!(row[4].is_finite());
    // numeric half-power search agrees with the closed form to within a percent
    assert!((row[5] - row[2]).abs() / row[2] < 0.01);
    assert!((row[6] - row[3]).abs() / row[3] < 0.01);
}

#[test]
fn unknown_config_key_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("c.toml");
    fs::write(&cfg, "seed = 3\n[array]\nnx = 4\ncolour = 2\n").unwrap();
    let o = umm(&["fig6-ula", "--config", cfg.to_str().unwrap(), "--out", dir.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("colour"), "{}", stderr(&o));
}

#[test]
fn invalid_value_names_the_field() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("c.toml");
    fs::write(&cfg, "[array]\nspacing = -0.5\n").unwrap();
    let o = umm(&["fig6-ula", "--config", cfg.to_str().unwrap(), "--out", dir.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("array.spacing"), "{}", stderr(&o));
}

#[test]
fn unknown_experiment_and_bad_focus_exit_two() {
    assert_eq!(umm(&["fig99"]).status.code(), Some(2));
    assert_eq!(umm(&["beamdepth", "--F", "far"]).status.code(), Some(2));
}

#[test]
fn differing_manifest_is_never_overwritten() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    assert!(umm(&["bbu", "--out", out]).status.success());
    let manifest = dir.path().join("bbu/seed-1/manifest.toml");
    let before = fs::read_to_string(&manifest).unwrap();
    // rerunning the same configuration is fine
    assert!(umm(&["bbu", "--out", out]).status.success());
    let o = umm(&["bbu", "--out", out, "--trials", "9"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("different configuration"));
    assert_eq!(fs::read_to_string(&manifest).unwrap(), before);
}

#[test]
fn csv_floats_round_trip_with_lf_endings() {
    let values = [0.1, 1.0 / 3.0, 5.033510268644620e15, 1e-300, -2.5e-7, f64::MAX, 0.0];
    let mut t = Table::new("t", &["x"]);
    for v in values {
        t.push(vec![v.into()]);
    }
    let bytes = t.to_csv();
    assert!(!bytes.contains(&b'\r'));
    let text = String::from_utf8(bytes).unwrap();
    let parsed: Vec<f64> = text.lines().skip(1).map(|l| l.parse().unwrap()).collect();
    assert_eq!(parsed, values);
    assert_eq!(fmt_f64(f64::INFINITY), "inf");
}

#[test]
fn svg_written_on_request() {
    let dir = tempfile::tempdir().unwrap();
    let o = umm(&["nf-factor", "--svg", "--out", dir.path().to_str().unwrap()]);
    assert!(o.status.success());
    let svg = fs::read_to_string(dir.path().join("nf-factor/seed-1/nf_factor.svg")).unwrap();
    assert!(svg.starts_with("<svg") && svg.contains("polyline"));
}

#[test]
fn command_line_beats_file_beats_defaults() {
    let exp = find("fig9").unwrap();
    let file = parse("seed = 5\ntrials = 20\n[snr]\ndb = 3.0\n").unwrap();
    let cli = Overrides { trials: Some(2), ..Default::default() };
    let cfg = RunConfig::resolve(&exp, &file, &cli).unwrap();
    assert_eq!((cfg.seed, cfg.trials, cfg.snr_db), (5, 2, 3.0));
    assert_eq!(cfg.array.nx, 8);
}

#[test]
fn focus_accepts_fraction_of_fraunhofer_distance() {
    assert_eq!(parse_focus("0.05dF").unwrap(), 0.05);
    assert_eq!(parse_focus("0.1").unwrap(), 0.1);
    assert!(parse_focus("dF").is_err());
}
