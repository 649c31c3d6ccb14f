use std::ffi::{c_char, CStr};
use std::ptr;

use metastable_ffi::*;

unsafe fn take(s: *mut c_char) -> String {
    let out = CStr::from_ptr(s).to_str().unwrap().to_owned();
    ms_string_free(s);
    out
}

unsafe fn last_error() -> String {
    CStr::from_ptr(ms_last_error()).to_string_lossy().into_owned()
}

#[test]
fn octahedron_through_handles() {
    unsafe {
        let mut h = ptr::null_mut();
        assert_eq!(ms_landscape_new(4, 0, &mut h), MsStatus::Ok);
        let (mut minima, mut saddles) = (0, 0);
        assert_eq!(ms_landscape_counts(h, &mut minima, &mut saddles), MsStatus::Ok);
        assert_eq!((minima, saddles), (6, 12));
        for node in 0..minima {
            let mut d = 0;
            assert_eq!(ms_landscape_degree(h, node, &mut d), MsStatus::Ok);
            assert_eq!(d, 4);
        }
        let mut d = 0;
        assert_eq!(ms_landscape_degree(h, 6, &mut d), MsStatus::InvalidInput);
        let mut dot = ptr::null_mut();
        assert_eq!(ms_landscape_dot(h, &mut dot), MsStatus::Ok);
        assert_eq!(take(dot).matches(" -- ").count(), 12);
        ms_landscape_free(h);
    }
}

#[test]
fn orbit_quotient_at_n8() {
    unsafe {
        let mut h = ptr::null_mut();
        assert_eq!(ms_landscape_new(8, 1, &mut h), MsStatus::Ok);
        let mut classes = 0;
        assert_eq!(ms_landscape_counts(h, &mut classes, ptr::null_mut()), MsStatus::Ok);
        assert_eq!(classes, 2);
        ms_landscape_free(h);
    }
}

#[test]
fn errors_map_to_codes() {
    unsafe {
        let mut h = ptr::null_mut();
        assert_eq!(ms_landscape_new(9, 0, &mut h), MsStatus::InvalidInput);
        assert!(h.is_null());
        assert!(last_error().contains('9'));
        assert_eq!(ms_landscape_new(8, 0, ptr::null_mut()), MsStatus::NullPointer);
        assert_eq!(ms_landscape_counts(ptr::null(), ptr::null_mut(), ptr::null_mut()), MsStatus::NullPointer);
        let mut s = ptr::null_mut();
        assert_eq!(ms_rate_table_json(14, 0.02, 0.05, &mut s), MsStatus::NumericFailure);
        assert!(s.is_null());
        assert_eq!(ms_rate_table_json(8, 0.0, 0.0, &mut s), MsStatus::InvalidInput);
        ms_landscape_free(ptr::null_mut());
        ms_string_free(ptr::null_mut());
    }
}

#[test]
fn gap_ignores_qy_and_defaults_on_nan() {
    unsafe {
        let (mut a, mut b, mut c) = (0.0, 0.0, 0.0);
        assert_eq!(ms_spectral_gap(8, 0.0, 0.05, f64::NAN, &mut a), MsStatus::Ok);
        assert_eq!(ms_spectral_gap(8, 0.0, 0.05, 1e4, &mut b), MsStatus::Ok);
        assert_eq!(ms_spectral_gap(8, 0.0, 0.05, 1e-3, &mut c), MsStatus::Ok);
        assert!(a > 0.0);
        assert!((a - b).abs() <= 1e-12 * a && (a - c).abs() <= 1e-12 * a);
    }
}

#[test]
fn rate_table_json_has_symmetry_factors() {
    unsafe {
        let mut s = ptr::null_mut();
        assert_eq!(ms_rate_table_json(14, 0.0, 0.05, &mut s), MsStatus::Ok);
        let v: serde_json::Value = serde_json::from_str(&take(s)).unwrap();
        let exact: Vec<&str> = v.as_array().unwrap().iter().map(|r| r["symmetry_exact"].as_str().unwrap()).collect();
        assert_eq!(exact, ["1/8", "1/9"]);
    }
}

#[test]
fn jump_runs_are_seeded() {
    unsafe {
        let traces: Vec<String> = (0..2)
            .map(|_| {
                let mut h = ptr::null_mut();
                assert_eq!(ms_jump_run_new(16, 0.09, 0.05, 2000, 7, &mut h), MsStatus::Ok);
                let (mut events, mut p, mut t) = (0, 0, 0.0);
                assert_eq!(ms_jump_run_summary(h, &mut events, &mut p, &mut t), MsStatus::Ok);
                assert_eq!(events, 2000);
                assert!(p < 16 && p % 2 == 0 && t > 0.0);
                let mut csv = ptr::null_mut();
                assert_eq!(ms_jump_run_trace_csv(h, &mut csv), MsStatus::Ok);
                ms_jump_run_free(h);
                take(csv)
            })
            .collect();
        assert_eq!(traces[0], traces[1]);
        assert!(traces[0].starts_with("t,p,label\n"));
        let mut h = ptr::null_mut();
        assert_eq!(ms_jump_run_new(6, 0.0, 0.05, 10, 0, &mut h), MsStatus::InvalidInput);
    }
}

#[test]
fn header_declares_the_entry_points() {
    let header = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/metastable.h")).unwrap();
    for f in [
        "ms_last_error", "ms_string_free", "ms_landscape_new", "ms_landscape_counts", "ms_landscape_degree",
        "ms_landscape_dot", "ms_landscape_free", "ms_spectral_gap", "ms_rate_table_json", "ms_jump_run_new",
        "ms_jump_run_summary", "ms_jump_run_trace_csv", "ms_jump_run_free", "ms_verify",
    ] {
        assert!(header.contains(&format!("{f}(")), "{f}");
    }
    assert!(header.contains("MS_STATUS_PANIC = 5"));
}
