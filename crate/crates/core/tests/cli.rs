use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use gspcd::io::{read_raster_auto, write_raster_auto, write_targets, ROC_HEADER};
use gspcd::{Image, Target};

fn gspcd(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gspcd"))
        .args(args)
        .env_remove("GSPCD_THREADS")
        .output()
        .expect("spawn gspcd")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn raster(dir: &Path, name: &str, img: &Image) -> PathBuf {
    let p = dir.join(name);
    write_raster_auto(img, &p).unwrap();
    p
}

fn ramp(rows: usize, cols: usize, offset: f32) -> Image {
    Image::new(rows, cols, (0..rows * cols).map(|i| offset + 0.001 * i as f32).collect()).unwrap()
}

fn with_block(base: &Image, r0: usize, c0: usize, size: usize, boost: f32) -> Image {
    let mut px = base.pixels().to_vec();
    for r in r0..r0 + size {
        for c in c0..c0 + size {
            px[r * base.cols() + c] += boost;
        }
    }
    Image::new(base.rows(), base.cols(), px).unwrap()
}

#[test]
fn gsp_median_writes_raster() {
    let dir = tempfile::tempdir().unwrap();
    let inputs: Vec<PathBuf> = (0..3)
        .map(|i| raster(dir.path(), &format!("{i}.f32"), &ramp(8, 6, i as f32)))
        .collect();
    let out = dir.path().join("g.f32");
    let res = gspcd(&["gsp", "--est", "median", "--out", s(&out), s(&inputs[0]), s(&inputs[1]), s(&inputs[2])]);
    assert_eq!(code(&res), 0, "{}", String::from_utf8_lossy(&res.stderr));
    let g = read_raster_auto(&out).unwrap();
    assert_eq!(g.pixels(), ramp(8, 6, 1.0).pixels());
    let stdout = String::from_utf8_lossy(&res.stdout);
    assert!(stdout.starts_with("image,average,std_dev,skewness,kurtosis\nmedian,"));
}

#[test]
fn gsp_rejects_bad_alpha_and_estimator() {
    let dir = tempfile::tempdir().unwrap();
    let a = raster(dir.path(), "a.f32", &ramp(4, 4, 0.0));
    let b = raster(dir.path(), "b.f32", &ramp(4, 4, 0.5));
    let out = dir.path().join("g.f32");
    let res = gspcd(&["gsp", "--est", "trimmed", "--alpha", "0.6", "--out", s(&out), s(&a), s(&b)]);
    assert_eq!(code(&res), 2);
    assert!(!out.exists());
    assert_eq!(code(&gspcd(&["gsp", "--est", "mode", "--out", s(&out), s(&a), s(&b)])), 2);
    assert_eq!(code(&gspcd(&["gsp", "--est", "median", "--out", s(&out), s(&a)])), 2);
}

#[test]
fn gsp_ar_on_identical_stack() {
    let dir = tempfile::tempdir().unwrap();
    let img = ramp(5, 7, 0.2);
    let inputs: Vec<String> = (0..8)
        .map(|i| s(&raster(dir.path(), &format!("{i}.f32"), &img)).to_string())
        .collect();
    let out = dir.path().join("ar.f32");
    let mut args = vec!["gsp", "--est", "ar", "--out", s(&out)];
    args.extend(inputs.iter().map(String::as_str));
    assert_eq!(code(&gspcd(&args)), 0);
    let g = read_raster_auto(&out).unwrap();
    for (o, i) in g.pixels().iter().zip(img.pixels()) {
        assert!((f64::from(*o) - f64::from(*i) * 7.0 / 8.0).abs() < 1e-6);
    }
}

#[test]
fn gsp_missing_input_is_io_error() {
    let dir = tempfile::tempdir().unwrap();
    let a = raster(dir.path(), "a.f32", &ramp(4, 4, 0.0));
    let out = dir.path().join("g.f32");
    let res = gspcd(&["gsp", "--est", "mean", "--out", s(&out), s(&a), "/nonexistent/b.f32"]);
    assert_eq!(code(&res), 1);
}

#[test]
fn detect_cases() {
    let dir = tempfile::tempdir().unwrap();
    let reference = Image::filled(100, 100, 0.1).unwrap();
    let ref_path = raster(dir.path(), "ref.f32", &reference);
    let out = dir.path().join("det.csv");

    let res = gspcd(&["detect", "--reference", s(&ref_path), "--surveillance", s(&ref_path), "--c", "5", "--out", s(&out)]);
    assert_eq!(code(&res), 0, "{}", String::from_utf8_lossy(&res.stderr));
    assert_eq!(fs::read_to_string(&out).unwrap().lines().count(), 1);

    let surv = raster(dir.path(), "surv.f32", &with_block(&reference, 40, 60, 10, 0.5));
    let res = gspcd(&["detect", "--reference", s(&ref_path), "--surveillance", s(&surv), "--out", s(&out)]);
    assert_eq!(code(&res), 0);
    let text = fs::read_to_string(&out).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 2);
    assert_eq!(lines[1], "44.500000,64.500000,256,37,57,52,72");

    let res = gspcd(&["detect", "--reference", "/nope.f32", "--surveillance", s(&surv), "--out", s(&out)]);
    assert_eq!(code(&res), 1);

    let other = raster(dir.path(), "small.f32", &Image::filled(50, 100, 0.1).unwrap());
    let res = gspcd(&["detect", "--reference", s(&ref_path), "--surveillance", s(&other), "--out", s(&out)]);
    assert_eq!(code(&res), 1);
    assert!(String::from_utf8_lossy(&res.stderr).contains("dimension"));

    let res = gspcd(&["detect", "--reference", s(&ref_path), "--surveillance", s(&surv), "--opening", "4", "--out", s(&out)]);
    assert_eq!(code(&res), 2);
}

fn grid_case(dir: &Path) -> (PathBuf, PathBuf, PathBuf) {
    let reference = Image::filled(200, 200, 0.1).unwrap();
    let mut surv = reference.clone();
    let mut targets = Vec::new();
    for i in 0..5 {
        for j in 0..5 {
            let (r0, c0) = (40 + 25 * i, 40 + 25 * j);
            surv = with_block(&surv, r0, c0, 6, 0.5);
            targets.push(Target::new(format!("v{}", 5 * i + j), r0 as f64 + 2.5, c0 as f64 + 2.5));
        }
    }
    let tgt = dir.join("targets.csv");
    write_targets(&targets, &tgt).unwrap();
    (raster(dir, "ref.f32", &reference), raster(dir, "surv.f32", &surv), tgt)
}

#[test]
fn evaluate_all_found() {
    let dir = tempfile::tempdir().unwrap();
    let (reference, surv, tgt) = grid_case(dir.path());
    let det = dir.path().join("det.csv");
    assert_eq!(
        code(&gspcd(&["detect", "--reference", s(&reference), "--surveillance", s(&surv), "--out", s(&det)])),
        0
    );
    let table = dir.path().join("cases.csv");
    let case = format!("{},{},1,1", s(&det), s(&tgt));
    let res = gspcd(&["evaluate", "--case", &case, "--area-km2", "6", "--out", s(&table)]);
    assert_eq!(code(&res), 0, "{}", String::from_utf8_lossy(&res.stderr));
    let text = fs::read_to_string(&table).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "mission,pass,known,detected,pd,false_alarms");
    assert_eq!(lines[1], "1,1,25,25,1.000000,0");
    assert_eq!(lines[2], "total,,25,25,1.000000,0");

    assert_eq!(code(&gspcd(&["evaluate", "--case", &case, "--area-km2", "6", "--radius", "0"])), 2);
    assert_eq!(code(&gspcd(&["evaluate", "--area-km2", "6"])), 2);
    assert_eq!(code(&gspcd(&["evaluate", "--case", "only-one-field", "--area-km2", "6"])), 2);
}

#[test]
fn roc_default_sweep() {
    let dir = tempfile::tempdir().unwrap();
    let (reference, surv, tgt) = grid_case(dir.path());
    let roc = dir.path().join("roc.csv");
    let per_case = dir.path().join("per_case.csv");
    let case = format!("{},{}", s(&surv), s(&tgt));
    let res = gspcd(&[
        "roc", "--reference", s(&reference), "--case", &case, "--area-km2", "6", "--out", s(&roc), "--cases-out", s(&per_case),
    ]);
    assert_eq!(code(&res), 0, "{}", String::from_utf8_lossy(&res.stderr));
    let text = fs::read_to_string(&roc).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], ROC_HEADER);
    assert_eq!(lines.len(), 6);
    for (line, c) in lines[1..].iter().zip(["2", "3", "4", "5", "6"]) {
        let f: Vec<&str> = line.split(',').collect();
        assert_eq!(f[0], c);
        assert_eq!(&f[2..], ["25", "25", "1", "0", "6", "0"]);
    }
    assert!(fs::read_to_string(&per_case).unwrap().contains("1,1,25,25,1.000000,0"));

    let res = gspcd(&["roc", "--reference", s(&reference), "--out", s(&roc)]);
    assert_eq!(code(&res), 2);
    let res = gspcd(&["roc", "--reference", s(&reference), "--case", &case, "--c", "3,0", "--out", s(&roc)]);
    assert_eq!(code(&res), 2);
}

#[test]
fn stats_tables() {
    let dir = tempfile::tempdir().unwrap();
    let x = raster(dir.path(), "x.f32", &Image::new(1, 2, vec![1.0, 2.0]).unwrap());
    let xh = raster(dir.path(), "xh.f32", &Image::new(1, 2, vec![1.0, 1.0]).unwrap());
    let q = dir.path().join("q.csv");
    let res = gspcd(&["stats", "--interest", s(&x), "--quality-out", s(&q), s(&xh)]);
    assert_eq!(code(&res), 0, "{}", String::from_utf8_lossy(&res.stderr));
    assert_eq!(fs::read_to_string(&q).unwrap(), "image,mse,mape,mdae,pixels_used\nxh,0.500000,0.250000,0.500000,2\n");
}

#[test]
fn synth_writes_stack_and_truth() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("s");
    let res = gspcd(&["synth", "--out-dir", s(&out), "--seed", "3"]);
    assert_eq!(code(&res), 0);
    for i in 0..8 {
        assert!(out.join(format!("image_{i:02}.f32")).exists());
        assert!(out.join(format!("image_{i:02}.hdr")).exists());
        assert!(out.join(format!("targets_{i:02}.csv")).exists());
    }
    let t0 = gspcd::io::read_targets(&out.join("targets_00.csv")).unwrap();
    assert_eq!(t0.len(), 25);
    assert_eq!(code(&gspcd(&["synth", "--out-dir", s(&out), "--n-images", "1"])), 2);
}

#[test]
fn pipeline_synth_default_is_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a");
    let b = dir.path().join("b");
    let res = gspcd(&["pipeline", "--synth-default", "--out-dir", s(&a)]);
    assert_eq!(code(&res), 0, "{}", String::from_utf8_lossy(&res.stderr));
    for f in ["roc.csv", "gsp.f32", "gsp.hdr", "detections.csv", "cases.csv", "stats.csv"] {
        assert!(a.join(f).exists(), "{f} missing");
    }
    let roc = fs::read_to_string(a.join("roc.csv")).unwrap();
    assert_eq!(roc.lines().count(), 6);

    let res = Command::new(env!("CARGO_BIN_EXE_gspcd"))
        .args(["pipeline", "--synth-default", "--out-dir", s(&b)])
        .env("GSPCD_THREADS", "3")
        .output()
        .unwrap();
    assert_eq!(code(&res), 0);
    for f in ["roc.csv", "gsp.f32", "detections.csv", "cases.csv", "stats.csv", "synth/image_05.f32"] {
        assert_eq!(fs::read(a.join(f)).unwrap(), fs::read(b.join(f)).unwrap(), "{f} differs");
    }
}

#[test]
fn pipeline_from_files() {
    let dir = tempfile::tempdir().unwrap();
    let (_, surv, tgt) = grid_case(dir.path());
    let stack: Vec<String> = (0..4)
        .map(|i| s(&raster(dir.path(), &format!("st{i}.f32"), &Image::filled(200, 200, 0.1).unwrap())).to_string())
        .collect();
    let out = dir.path().join("out");
    let mut args = vec!["pipeline", "--out-dir", s(&out), "--est", "trimmed", "--area-km2", "6", "--stack"];
    args.extend(stack.iter().map(String::as_str));
    args.extend(["--surveillance", s(&surv), "--targets", s(&tgt)]);
    let res = gspcd(&args);
    assert_eq!(code(&res), 0, "{}", String::from_utf8_lossy(&res.stderr));
    assert!(fs::read_to_string(out.join("cases.csv")).unwrap().contains("1,1,25,25,1.000000,0"));
    assert_eq!(code(&gspcd(&["pipeline", "--out-dir", s(&out)])), 2);
}

#[test]
fn pipeline_unwritable_output() {
    let dir = tempfile::tempdir().unwrap();
    let blocker = dir.path().join("file");
    fs::write(&blocker, b"x").unwrap();
    let out = blocker.join("sub");
    let res = gspcd(&["pipeline", "--synth-default", "--out-dir", s(&out)]);
    assert_eq!(code(&res), 1);
}

#[test]
fn help_per_subcommand() {
    for sub in ["gsp", "stats", "detect", "evaluate", "roc", "synth", "pipeline"] {
        let res = gspcd(&[sub, "--help"]);
        assert_eq!(code(&res), 0, "{sub}");
        assert!(String::from_utf8_lossy(&res.stdout).contains("Usage"));
    }
}
