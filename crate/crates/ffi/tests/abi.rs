use std::ffi::{CStr, CString};
use std::ptr;

use racs_ffi::*;

fn last_error() -> String {
    unsafe { CStr::from_ptr(racs_last_error()) }
        .to_string_lossy()
        .into_owned()
}

fn take(s: *mut std::ffi::c_char) -> String {
    assert!(!s.is_null());
    let out = unsafe { CStr::from_ptr(s) }.to_str().unwrap().to_owned();
    unsafe { racs_string_free(s) };
    out
}

fn small_config() -> *mut RacsConfig {
    let text = CString::new("node_count = 12\nsim_time = 40\nruns = 2\n").unwrap();
    let mut cfg = ptr::null_mut();
    assert_eq!(
        unsafe { racs_config_parse(text.as_ptr(), &mut cfg) },
        RacsStatus::Ok
    );
    cfg
}

#[test]
fn run_and_read_metrics() {
    let cfg = small_config();
    let mut report = ptr::null_mut();
    assert_eq!(unsafe { racs_run(cfg, &mut report) }, RacsStatus::Ok);
    assert_eq!(unsafe { racs_report_run_count(report) }, 2);

    let mut eff = f64::NAN;
    assert_eq!(
        unsafe { racs_report_metric(report, RacsMetric::RepEfficiency, &mut eff) },
        RacsStatus::Ok
    );
    assert!(eff.is_finite());
    let mut det = 0.0;
    assert_eq!(
        unsafe { racs_report_metric(report, RacsMetric::DetectionRatePct, &mut det) },
        RacsStatus::Undefined
    );

    let csv = take(unsafe { racs_report_csv(report) });
    assert!(csv.starts_with("malicious_count,rep_efficiency,"));
    assert_eq!(csv.lines().count(), 2);
    let hash = take(unsafe { racs_report_trace_hash(report) });
    assert_eq!(hash.len(), 64);

    // Same configuration, same hash.
    let mut again = ptr::null_mut();
    assert_eq!(unsafe { racs_run(cfg, &mut again) }, RacsStatus::Ok);
    assert_eq!(take(unsafe { racs_report_trace_hash(again) }), hash);

    unsafe {
        racs_report_free(report);
        racs_report_free(again);
        racs_config_free(cfg);
    }
}

#[test]
fn config_errors_are_reported() {
    let cfg = racs_config_new();
    let key = CString::new("no_such_key").unwrap();
    let val = CString::new("1").unwrap();
    assert_eq!(
        unsafe { racs_config_set(cfg, key.as_ptr(), val.as_ptr()) },
        RacsStatus::Config
    );
    assert!(last_error().contains("no_such_key"));

    let key = CString::new("node_count").unwrap();
    let val = CString::new("25").unwrap();
    assert_eq!(
        unsafe { racs_config_set(cfg, key.as_ptr(), val.as_ptr()) },
        RacsStatus::Ok
    );
    assert!(last_error().is_empty());
    let text = take(unsafe { racs_config_to_text(cfg) });
    assert!(
        text.lines().any(|l| l.replace(' ', "") == "node_count=25"),
        "{text}"
    );

    let bad = CString::new("node_count = ten\n").unwrap();
    let mut out = ptr::null_mut();
    assert_eq!(
        unsafe { racs_config_parse(bad.as_ptr(), &mut out) },
        RacsStatus::Config
    );
    assert!(out.is_null());
    unsafe { racs_config_free(cfg) };
}

#[test]
fn null_arguments_are_rejected() {
    let mut out = ptr::null_mut();
    assert_eq!(
        unsafe { racs_config_parse(ptr::null(), &mut out) },
        RacsStatus::NullPointer
    );
    assert_eq!(
        unsafe { racs_run(ptr::null(), &mut out.cast()) },
        RacsStatus::NullPointer
    );
    assert!(unsafe { racs_report_csv(ptr::null()) }.is_null());
    assert_eq!(unsafe { racs_report_run_count(ptr::null()) }, 0);
    unsafe {
        racs_config_free(ptr::null_mut());
        racs_report_free(ptr::null_mut());
        racs_string_free(ptr::null_mut());
    }
}

#[test]
fn invalid_utf8_is_rejected() {
    let bytes = CString::new(vec![0xffu8, 0xfe]).unwrap();
    let mut out = ptr::null_mut();
    assert_eq!(
        unsafe { racs_config_parse(bytes.as_ptr(), &mut out) },
        RacsStatus::InvalidUtf8
    );
}

#[test]
fn apd_link_and_delay_variants() {
    let mut r = RacsApdResult::default();
    assert_eq!(
        unsafe { racs_apd_eval(0.1, 0.9, 0.9, 0.5, 100, 10, &mut r) },
        RacsStatus::Ok
    );
    assert_eq!((r.c, r.e, r.z), (b'a', b'd', b'd'));
    assert_ne!(r.p, 0);
    assert!(r.kappa > 0.0 && r.kappa < 1.0);

    assert_eq!(
        unsafe { racs_apd_eval(0.1, 0.9, 0.9, f64::NAN, 100, 10, &mut r) },
        RacsStatus::Ok
    );
    assert_eq!(r.p, 0);
    assert_eq!(r.raq, r.rho2);

    assert_eq!(
        unsafe { racs_apd_eval(2.0, 0.5, 0.5, 0.5, 100, 10, &mut r) },
        RacsStatus::Range
    );
}

#[test]
fn propositions_and_bound() {
    let mut p = RacsPropositions::default();
    assert_eq!(
        unsafe { racs_check_props(2.0, 100.0, 0.8, 0.5, &mut p) },
        RacsStatus::Ok
    );
    assert!((p.link_theta_h - 158.4).abs() < 1e-9);
    assert!((p.link_theta_d - 3.2).abs() < 1e-12);
    assert!((p.link_margin - 155.2).abs() < 1e-9);
    assert!((p.collusion_margin - 4.0 * 97.0).abs() < 1e-9);
    assert_eq!(
        unsafe { racs_check_props(1.0, 100.0, 0.8, 0.5, &mut p) },
        RacsStatus::Precondition
    );
    assert_eq!(racs_damage_bound(10.0, 5.0, 1.0, 60.0), 10.0 * 5.0 * 59.0);
}

#[test]
fn attributes_round_trip() {
    let a = RacsAttributes {
        node_id: 4999,
        lat: 1234.0,
        long: 999.0,
        radio_range: 250.0,
        velocity: 17.0,
        hello_interval: 6.0,
    };
    let mut bits = 0;
    assert_eq!(
        unsafe { racs_attributes_encode(&a, &mut bits) },
        RacsStatus::Ok
    );
    assert!(bits < 1 << 53);
    assert_eq!(bits >> 40, 4999);
    let mut back = RacsAttributes::default();
    assert_eq!(
        unsafe { racs_attributes_decode(bits, &mut back) },
        RacsStatus::Ok
    );
    assert_eq!(back, a);

    assert_eq!(
        unsafe { racs_attributes_decode(1 << 53, &mut back) },
        RacsStatus::Range
    );
    let far = RacsAttributes { lat: 2001.0, ..a };
    assert_eq!(
        unsafe { racs_attributes_encode(&far, &mut bits) },
        RacsStatus::Range
    );
}
