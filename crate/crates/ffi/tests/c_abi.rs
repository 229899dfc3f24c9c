#![allow(clippy::excessive_precision)]

use std::ffi::{CStr, CString};
use std::path::{Path, PathBuf};
use std::process::Command;
use std::ptr;

use argzeta_ffi::*;

const FIRST_ZEROS: [f64; 10] = [
    14.134725141734693,
    21.022039638771555,
    25.010857580145688,
    30.424876125859513,
    32.935061587739189,
    37.586178158825671,
    40.918719012147495,
    43.327073280914999,
    48.005150881167159,
    49.773832477672302,
];

fn last_error() -> String {
    let p = az_last_error_message();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

fn small_table() -> *mut AzZeroTable {
    let mut t = ptr::null_mut();
    let s = unsafe { az_zero_table_from_ordinates(FIRST_ZEROS.as_ptr(), FIRST_ZEROS.len(), 50.0, &mut t) };
    assert_eq!(s, AzStatus::Ok, "{}", last_error());
    t
}

#[test]
fn zero_table_lifecycle_and_oracle() {
    let t = small_table();
    unsafe {
        assert_eq!(az_zero_table_len(t), 10);
        assert_eq!(az_zero_table_height_max(t), 50.0);
        let mut s = f64::NAN;
        assert_eq!(az_oracle_s(t, 20.0, &mut s), AzStatus::Ok);
        // one zero below 20; theta(20) = 1.18689480844448 (mpmath)
        assert!((s + 0.377800351388096).abs() < 1e-12, "{s}");
        assert_eq!(az_oracle_s(t, 60.0, &mut s), AzStatus::Coverage);
        assert!(last_error().contains("60"));
        az_zero_table_free(t);
    }
}

#[test]
fn null_handles_are_reported() {
    let mut v = 0.0;
    unsafe {
        assert_eq!(az_oracle_s(ptr::null(), 20.0, &mut v), AzStatus::NullPointer);
        assert!(last_error().contains("table"));
        assert_eq!(az_extremal_eval(ptr::null(), 0.0, &mut v), AzStatus::NullPointer);
        assert_eq!(az_zero_table_len(ptr::null()), 0);
        assert!(az_zero_table_height_max(ptr::null()).is_nan());
        az_zero_table_free(ptr::null_mut());
        az_extremal_free(ptr::null_mut());
        az_von_mangoldt_free(ptr::null_mut());
    }
}

#[test]
fn bad_table_and_path() {
    let mut t = ptr::null_mut();
    let decreasing = [21.0, 14.13];
    unsafe {
        assert_eq!(
            az_zero_table_from_ordinates(decreasing.as_ptr(), 2, f64::NAN, &mut t),
            AzStatus::Data
        );
        assert!(t.is_null());
        let path = CString::new("/nonexistent/zeros.txt").unwrap();
        assert_eq!(az_zero_table_load(path.as_ptr(), &mut t), AzStatus::Io);
        assert!(t.is_null());
    }
}

#[test]
fn extremal_handle_dominates_kernel() {
    let mut g = ptr::null_mut();
    unsafe {
        assert_eq!(
            az_extremal_new(AZ_PARITY_EVEN, AZ_SIDE_MAJORANT, 1.0, 20.0, 1e-10, &mut g),
            AzStatus::Ok
        );
        for i in -200..=200 {
            let x = i as f64 * 0.1;
            let mut v = 0.0;
            assert_eq!(az_extremal_eval(g, x, &mut v), AzStatus::Ok);
            assert!(v >= az_f1(x) - 1e-9, "{x}");
        }
        let (mut re, mut im) = (0.0, 0.0);
        assert_eq!(az_extremal_fourier(g, 1.5, &mut re, &mut im), AzStatus::Ok);
        assert_eq!((re, im), (0.0, 0.0));
        let mut v = 0.0;
        assert_eq!(az_extremal_eval(g, f64::NAN, &mut v), AzStatus::InvalidArgument);
        az_extremal_free(g);

        assert_eq!(
            az_extremal_new(7, AZ_SIDE_MAJORANT, 1.0, 20.0, 1e-10, &mut g),
            AzStatus::InvalidArgument
        );
        assert!(g.is_null());
    }
}

#[test]
fn envelopes_and_sieve() {
    let (mut lo, mut hi, mut e) = (0.0, 0.0, 0.0);
    unsafe {
        assert_eq!(az_s1_envelope(1e6, &mut lo, &mut hi), AzStatus::Ok);
        assert!(lo < 0.0 && hi > 0.0 && (hi / lo + 0.5).abs() < 1e-15);
        assert_eq!(az_s_envelope(1.0, &mut e), AzStatus::InvalidArgument);
        let mut p = ptr::null_mut();
        assert_eq!(az_von_mangoldt_new(1000, &mut p), AzStatus::Ok);
        assert_eq!(az_von_mangoldt(p, 8), 2f64.ln());
        assert_eq!(az_von_mangoldt(p, 10), 0.0);
        az_von_mangoldt_free(p);
        assert_eq!(az_von_mangoldt_new(1, &mut p), AzStatus::InvalidArgument);
    }
}

#[test]
fn version_string() {
    let v = unsafe { CStr::from_ptr(az_version()) };
    assert_eq!(v.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
}

fn target_dir() -> PathBuf {
    // tests run from target/<profile>/deps
    let exe = std::env::current_exe().unwrap();
    exe.parent().unwrap().parent().unwrap().to_path_buf()
}

const C_PROGRAM: &str = r#"
#include <math.h>
#include <stdio.h>
#include "argzeta.h"

int main(void) {
    double gap = 0.0;
    if (az_l1_gap(AZ_PARITY_ODD, AZ_SIDE_MAJORANT, 2.0, &gap) != AZ_STATUS_OK) return 1;
    if (fabs(gap - 0.78539816339744831) > 1e-15) return 2;
    if (az_l1_gap(AZ_PARITY_ODD, AZ_SIDE_MAJORANT, -1.0, &gap) != AZ_STATUS_INVALID_ARGUMENT) return 3;
    if (az_last_error_message() == NULL) return 4;
    AzExtremal *g = NULL;
    if (az_extremal_new(AZ_PARITY_ODD, AZ_SIDE_MAJORANT, 1.0, 10.0, 1e-10, &g) != AZ_STATUS_OK) return 5;
    double v = 0.0;
    az_extremal_eval(g, 0.0, &v);
    az_extremal_free(g);
    if (fabs(v - 1.5707963267948966) > 1e-12) return 6;
    printf("%s\n", az_version());
    return 0;
}
"#;

fn have(tool: &str) -> bool {
    Command::new(tool)
        .arg("--version")
        .output()
        .map(|o| o.status.success())
        .unwrap_or(false)
}

#[test]
fn header_compiles_and_links_from_c() {
    let lib = target_dir().join("libargzeta_ffi.a");
    if !have("cc") || !lib.exists() {
        eprintln!("skipping: no C compiler or static library at {}", lib.display());
        return;
    }
    let include = Path::new(env!("CARGO_MANIFEST_DIR")).join("include");
    let dir = probe_dir();
    let src = dir.join("probe.c");
    std::fs::write(&src, C_PROGRAM).unwrap();
    let exe = dir.join("probe");
    let status = Command::new("cc")
        .args(["-std=c11", "-Wall", "-Werror", "-o"])
        .arg(&exe)
        .arg(&src)
        .arg("-I")
        .arg(&include)
        .arg(&lib)
        .args(["-lm", "-lpthread", "-ldl"])
        .status()
        .unwrap();
    assert!(status.success(), "C probe failed to build");
    let run = Command::new(&exe).output().unwrap();
    assert!(run.status.success(), "C probe exited with {:?}", run.status.code());
    assert_eq!(String::from_utf8_lossy(&run.stdout).trim(), env!("CARGO_PKG_VERSION"));
    std::fs::remove_dir_all(&dir).ok();
}

fn probe_dir() -> PathBuf {
    let dir = std::env::temp_dir().join(format!("argzeta-ffi-probe-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}
