//! End-to-end checks of the command-line binary.

use std::path::PathBuf;
use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_tpctf"))
}

fn tmpdir(tag: &str) -> PathBuf {
    let d = std::env::temp_dir().join(format!("tpctf_cli_{tag}_{}", std::process::id()));
    std::fs::create_dir_all(&d).unwrap();
    d
}

fn write_test_pgm(path: &std::path::Path, n: usize) {
    let mut px = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            let v = 96.0 + 80.0 * ((i as f64) * 0.23).sin() * ((j as f64) * 0.31).cos();
            px.push(v.clamp(0.0, 255.0));
        }
    }
    let img = tpctf::imgio::Image {
        width: n,
        height: n,
        pixels: px,
    };
    tpctf::imgio::write_pgm(&img, path).unwrap();
}

#[test]
fn help_exits_zero_everywhere() {
    for sub in [
        "build",
        "analyze",
        "transform",
        "generators",
        "denoise",
        "psnr",
        "factors",
    ] {
        let out = bin().args([sub, "--help"]).output().unwrap();
        assert!(out.status.success(), "{sub} --help failed");
    }
    assert!(bin().arg("--help").output().unwrap().status.success());
}

#[test]
fn unknown_flag_is_usage_error() {
    let out = bin().args(["psnr", "--frobnicate"]).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn build_analyze_pipeline() {
    let dir = tmpdir("build");
    let bank = dir.join("ctf6.json");
    let out = bin()
        .args(["build", "--n", "6", "--grid", "1024", "--out"])
        .arg(&bank)
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let out = bin().arg("analyze").arg(&bank).output().unwrap();
    assert!(out.status.success());
    let text = String::from_utf8_lossy(&out.stdout);
    let doc: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(doc["pass"], serde_json::Value::Bool(true));
    assert!(doc["frame_1d"]["max_residual_pr1"].as_f64().unwrap() <= 1e-8);
    assert_eq!(doc["highpass_2d"].as_u64(), Some(32));
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn rational_parameters_accepted() {
    let dir = tmpdir("ratio");
    let bank = dir.join("ctf3.json");
    let out = bin()
        .args([
            "build", "--n", "3", "--c1", "33/32", "--eps1", "69/128", "--grid", "512", "--out",
        ])
        .arg(&bank)
        .output()
        .unwrap();
    assert!(out.status.success());
    let out = bin().arg("analyze").arg(&bank).output().unwrap();
    assert!(out.status.success());
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn transform_round_trip_via_files() {
    let dir = tmpdir("xform");
    let bank = dir.join("bank.json");
    let img = dir.join("in.pgm");
    write_test_pgm(&img, 64);
    assert!(bin()
        .args(["build", "--n", "4", "--grid", "64", "--out"])
        .arg(&bank)
        .output()
        .unwrap()
        .status
        .success());
    let pyr = dir.join("pyr");
    let out = bin()
        .args(["transform", "--levels", "3", "--bank"])
        .arg(&bank)
        .arg("--in")
        .arg(&img)
        .arg("--out-dir")
        .arg(&pyr)
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(pyr.join("manifest.json").exists());
    let back = dir.join("back");
    let out = bin()
        .args(["transform", "--levels", "3", "--inverse", "--bank"])
        .arg(&bank)
        .arg("--in")
        .arg(&pyr)
        .arg("--out-dir")
        .arg(&back)
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    // integer-valued image comes back exactly after round + clip
    let a = tpctf::imgio::read_pgm(&img).unwrap();
    let b = tpctf::imgio::read_pgm(&back.join("reconstructed.pgm")).unwrap();
    assert_eq!(a, b);
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn bank_json_schema_fields() {
    let dir = tmpdir("schema");
    let bank = dir.join("b.json");
    assert!(bin()
        .args(["build", "--n", "4", "--grid", "64", "--out"])
        .arg(&bank)
        .output()
        .unwrap()
        .status
        .success());
    let doc: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&bank).unwrap()).unwrap();
    for key in ["name", "n", "grid_size", "warnings", "filters"] {
        assert!(doc.get(key).is_some(), "missing {key}");
    }
    let f = &doc["filters"][0];
    for key in ["label", "role", "direction_deg", "freq_re", "freq_im"] {
        assert!(f.get(key).is_some(), "missing filter field {key}");
    }
    assert_eq!(f["freq_re"].as_array().unwrap().len(), 64);
    assert!(doc["filters"]
        .as_array()
        .unwrap()
        .iter()
        .any(|f| f["role"] == "highpass"));
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn pyramid_manifest_schema_fields() {
    let dir = tmpdir("pyrschema");
    let bank = dir.join("b.json");
    let img = dir.join("img.pgm");
    write_test_pgm(&img, 32);
    assert!(bin()
        .args(["build", "--n", "3", "--grid", "64", "--out"])
        .arg(&bank)
        .output()
        .unwrap()
        .status
        .success());
    let pyr = dir.join("p");
    assert!(bin()
        .args(["transform", "--levels", "2", "--bank"])
        .arg(&bank)
        .arg("--in")
        .arg(&img)
        .arg("--out-dir")
        .arg(&pyr)
        .output()
        .unwrap()
        .status
        .success());
    let doc: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(pyr.join("manifest.json")).unwrap()).unwrap();
    let sb = &doc["subbands"][0];
    for key in ["level", "label", "height", "width", "file"] {
        assert!(sb.get(key).is_some(), "missing subband field {key}");
    }
    // raw payload is 16 bytes per sample: little-endian (re, im) f64 pairs
    let file = pyr.join(sb["file"].as_str().unwrap());
    let len = std::fs::metadata(&file).unwrap().len();
    let (h, w) = (sb["height"].as_u64().unwrap(), sb["width"].as_u64().unwrap());
    assert_eq!(len, 16 * h * w);
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn psnr_of_identical_files_prints_inf() {
    let dir = tmpdir("psnr");
    let img = dir.join("x.pgm");
    write_test_pgm(&img, 16);
    let out = bin().arg("psnr").arg(&img).arg(&img).output().unwrap();
    assert!(out.status.success());
    assert_eq!(String::from_utf8_lossy(&out.stdout).trim(), "inf");
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn psnr_missing_file_is_io_error() {
    let out = bin()
        .args(["psnr", "/nonexistent/a.pgm", "/nonexistent/b.pgm"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn factors_csv_has_curves() {
    let dir = tmpdir("factors");
    let csv = dir.join("factors.csv");
    let out = bin()
        .args(["factors", "--samples", "64", "--out"])
        .arg(&csv)
        .output()
        .unwrap();
    assert!(out.status.success());
    let text = std::fs::read_to_string(&csv).unwrap();
    assert!(text.starts_with("xi,sin,ideal,half_sin,half_cos_sgn"));
    assert_eq!(text.lines().count(), 65);
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn generators_exports_pgm_images() {
    let dir = tmpdir("gens");
    let bank = dir.join("bank.json");
    assert!(bin()
        .args(["build", "--n", "3", "--grid", "512", "--out"])
        .arg(&bank)
        .output()
        .unwrap()
        .status
        .success());
    let gdir = dir.join("gen");
    let out = bin()
        .args(["generators", "--levels", "3", "--level", "2", "--size", "64", "--bank"])
        .arg(&bank)
        .arg("--out-dir")
        .arg(&gdir)
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let count = std::fs::read_dir(&gdir).unwrap().count();
    // 8 high-pass generators, real and imaginary part each
    assert_eq!(count, 16);
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn denoise_cli_prints_table() {
    let dir = tmpdir("den");
    let img = dir.join("img.pgm");
    write_test_pgm(&img, 64);
    let saved = dir.join("saved");
    let out = bin()
        .args([
            "denoise",
            "--transform",
            "tpctf3",
            "--sigma",
            "20",
            "--levels",
            "3",
            "--trials",
            "2",
            "--out-table",
            "csv",
            "--image",
        ])
        .arg(&img)
        .arg("--save-images")
        .arg(&saved)
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.starts_with("sigma_n,psnr_mean"), "{text}");
    assert_eq!(text.lines().count(), 2);
    assert!(saved.join("noisy_sigma20.pgm").exists());
    assert!(saved.join("denoised_sigma20.pgm").exists());
    std::fs::remove_dir_all(&dir).ok();
}
