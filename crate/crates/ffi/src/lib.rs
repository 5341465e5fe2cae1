//! C ABI over `racs_core`.
//!
//! Conventions: every fallible call returns a [`RacsStatus`] and writes its
//! result through an out pointer. On failure a message is kept per thread
//! and can be read with [`racs_last_error`]. Handles returned by `*_new`,
//! `*_parse` and `racs_run` are owned by the caller and released with the
//! matching `*_free`. Strings returned as `*mut c_char` are released with
//! [`racs_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use racs_core::apd::{evaluate, ApdInputs, Grade, RangeParams};
use racs_core::net::{decode_attributes, encode_attributes, AttributeBlock, NodeAttributes};
use racs_core::sim::{
    damage_bound, metrics_csv, proposition_gains_collusion, proposition_gains_link, run_simulation,
    SimConfig, SimulationResult,
};
use racs_core::Error;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RacsStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    /// Bad configuration text, key or value.
    Config = 3,
    /// A numeric input outside its domain.
    Range = 4,
    /// Proposition preconditions (α > 1, |Φ| > 3, ψ in [0, 1]) not met.
    Precondition = 5,
    Io = 6,
    /// The requested metric is undefined for this report.
    Undefined = 7,
    /// A Rust panic was caught at the boundary.
    Internal = 8,
}

/// Opaque simulation configuration.
pub struct RacsConfig(SimConfig);

/// Opaque result of [`racs_run`].
pub struct RacsReport(SimulationResult);

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RacsMetric {
    RepEfficiency = 0,
    DmgSelfish = 1,
    DmgMalicious = 2,
    DetectionRatePct = 3,
    PaperLiteralPct = 4,
}

/// Outcome of one penalty decision; grades are the ASCII letters `a`..`d`,
/// and `p` is 0 for the delay variant.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct RacsApdResult {
    pub c: u8,
    pub e: u8,
    pub z: u8,
    pub p: u8,
    pub rho1: u8,
    pub rho2: u8,
    pub raq: u8,
    pub kappa: f64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct RacsPropositions {
    pub link_theta_h: f64,
    pub link_theta_d: f64,
    pub link_margin: f64,
    pub collusion_theta_h: f64,
    pub collusion_theta_d: f64,
    pub collusion_margin: f64,
}

/// The six fields carried in the 53-bit attribute block.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct RacsAttributes {
    pub node_id: u32,
    pub lat: f64,
    pub long: f64,
    pub radio_range: f64,
    pub velocity: f64,
    pub hello_interval: f64,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(msg).expect("nul bytes replaced"));
}

fn status_of(err: &Error) -> RacsStatus {
    match err {
        Error::InvalidConfig { .. } | Error::ConfigSyntax { .. } => RacsStatus::Config,
        Error::PropositionPrecondition(_) => RacsStatus::Precondition,
        Error::Output { .. } => RacsStatus::Io,
        _ => RacsStatus::Range,
    }
}

fn fail(err: Error) -> RacsStatus {
    set_error(err.to_string());
    status_of(&err)
}

/// Runs `f`, turning panics into [`RacsStatus::Internal`].
fn guard(f: impl FnOnce() -> RacsStatus) -> RacsStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(status) => {
            if status == RacsStatus::Ok {
                set_error("");
            }
            status
        }
        Err(_) => {
            set_error("internal error");
            RacsStatus::Internal
        }
    }
}

unsafe fn text<'a>(p: *const c_char) -> Result<&'a str, RacsStatus> {
    if p.is_null() {
        set_error("null string argument");
        return Err(RacsStatus::NullPointer);
    }
    CStr::from_ptr(p).to_str().map_err(|_| {
        set_error("string argument is not UTF-8");
        RacsStatus::InvalidUtf8
    })
}

fn null(what: &str) -> RacsStatus {
    set_error(format!("null {what}"));
    RacsStatus::NullPointer
}

fn owned_string(s: String) -> *mut c_char {
    CString::new(s).map_or(ptr::null_mut(), CString::into_raw)
}

/// Message of the last failed call on this thread; empty after a success.
/// The pointer stays valid until the next call on the same thread.
#[no_mangle]
pub extern "C" fn racs_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// # Safety
/// `s` must come from this library, or be null.
#[no_mangle]
pub unsafe extern "C" fn racs_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// A configuration with the desk-scale defaults.
#[no_mangle]
pub extern "C" fn racs_config_new() -> *mut RacsConfig {
    Box::into_raw(Box::new(RacsConfig(SimConfig::desk())))
}

/// Parses `key = value` text.
///
/// # Safety
/// `text` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn racs_config_parse(
    text_ptr: *const c_char,
    out: *mut *mut RacsConfig,
) -> RacsStatus {
    guard(|| {
        if out.is_null() {
            return null("out pointer");
        }
        let t = match text(text_ptr) {
            Ok(t) => t,
            Err(s) => return s,
        };
        match SimConfig::parse(t) {
            Ok(cfg) => {
                *out = Box::into_raw(Box::new(RacsConfig(cfg)));
                RacsStatus::Ok
            }
            Err(e) => fail(e),
        }
    })
}

/// Sets one key as it would appear in a config file.
///
/// # Safety
/// `cfg` must be a live handle; `key` and `value` NUL-terminated strings.
#[no_mangle]
pub unsafe extern "C" fn racs_config_set(
    cfg: *mut RacsConfig,
    key: *const c_char,
    value: *const c_char,
) -> RacsStatus {
    guard(|| {
        let Some(cfg) = cfg.as_mut() else {
            return null("config");
        };
        let (k, v) = match (text(key), text(value)) {
            (Ok(k), Ok(v)) => (k, v),
            (Err(s), _) | (_, Err(s)) => return s,
        };
        match cfg.0.set(k, v) {
            Ok(()) => RacsStatus::Ok,
            Err(e) => fail(e),
        }
    })
}

/// The configuration as config-file text.
///
/// # Safety
/// `cfg` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn racs_config_to_text(cfg: *const RacsConfig) -> *mut c_char {
    match cfg.as_ref() {
        Some(c) => owned_string(c.0.to_text()),
        None => {
            null("config");
            ptr::null_mut()
        }
    }
}

/// # Safety
/// `cfg` must come from this library, or be null; it is invalid afterwards.
#[no_mangle]
pub unsafe extern "C" fn racs_config_free(cfg: *mut RacsConfig) {
    if !cfg.is_null() {
        drop(Box::from_raw(cfg));
    }
}

/// Runs every repetition of `cfg`.
///
/// # Safety
/// `cfg` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn racs_run(cfg: *const RacsConfig, out: *mut *mut RacsReport) -> RacsStatus {
    guard(|| {
        let Some(cfg) = cfg.as_ref() else {
            return null("config");
        };
        if out.is_null() {
            return null("out pointer");
        }
        match run_simulation(&cfg.0) {
            Ok(r) => {
                *out = Box::into_raw(Box::new(RacsReport(r)));
                RacsStatus::Ok
            }
            Err(e) => fail(e),
        }
    })
}

/// Aggregate metric over all runs. Detection metrics are
/// [`RacsStatus::Undefined`] when no attacker acted.
///
/// # Safety
/// `report` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn racs_report_metric(
    report: *const RacsReport,
    metric: RacsMetric,
    out: *mut f64,
) -> RacsStatus {
    guard(|| {
        let Some(r) = report.as_ref() else {
            return null("report");
        };
        if out.is_null() {
            return null("out pointer");
        }
        let a = &r.0.report.aggregate;
        let value = match metric {
            RacsMetric::RepEfficiency => a.rep_efficiency,
            RacsMetric::DmgSelfish => Some(a.dmg_selfish),
            RacsMetric::DmgMalicious => Some(a.dmg_malicious),
            RacsMetric::DetectionRatePct => a.detection_rate_pct,
            RacsMetric::PaperLiteralPct => a.paper_literal_pct,
        };
        match value {
            Some(v) => {
                *out = v;
                RacsStatus::Ok
            }
            None => {
                set_error("metric undefined for this report");
                RacsStatus::Undefined
            }
        }
    })
}

/// Number of repetitions in the report, 0 for a null handle.
///
/// # Safety
/// `report` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn racs_report_run_count(report: *const RacsReport) -> usize {
    report.as_ref().map_or(0, |r| r.0.outputs.len())
}

/// The metrics CSV (header plus one row). Free with [`racs_string_free`].
///
/// # Safety
/// `report` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn racs_report_csv(report: *const RacsReport) -> *mut c_char {
    match report.as_ref() {
        Some(r) => owned_string(metrics_csv(std::slice::from_ref(&r.0.report))),
        None => {
            null("report");
            ptr::null_mut()
        }
    }
}

/// Hex SHA-256 over the run traces. Free with [`racs_string_free`].
///
/// # Safety
/// `report` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn racs_report_trace_hash(report: *const RacsReport) -> *mut c_char {
    match report.as_ref() {
        Some(r) => owned_string(r.0.trace_hash()),
        None => {
            null("report");
            ptr::null_mut()
        }
    }
}

/// # Safety
/// `report` must come from this library, or be null; it is invalid afterwards.
#[no_mangle]
pub unsafe extern "C" fn racs_report_free(report: *mut RacsReport) {
    if !report.is_null() {
        drop(Box::from_raw(report));
    }
}

fn letter(g: Grade) -> u8 {
    g.letter() as u8
}

/// Fuzzifies crisp inputs and runs the rule tables. A NaN `p` selects the
/// delay variant, which has no path-fraction input.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn racs_apd_eval(
    c: f64,
    e: f64,
    z: f64,
    p: f64,
    phi_size: usize,
    hop_limit: u32,
    out: *mut RacsApdResult,
) -> RacsStatus {
    guard(|| {
        if out.is_null() {
            return null("out pointer");
        }
        let inputs = ApdInputs {
            comparative: c,
            expectation: e,
            correctness: z,
            path_fraction: (!p.is_nan()).then_some(p),
        };
        match evaluate(
            &inputs,
            RangeParams {
                phi_size,
                hop_limit,
            },
        ) {
            Ok(ev) => {
                *out = RacsApdResult {
                    c: letter(ev.c),
                    e: letter(ev.e),
                    z: letter(ev.z),
                    p: ev.p.map_or(0, letter),
                    rho1: letter(ev.rho1),
                    rho2: letter(ev.rho2),
                    raq: letter(ev.raq),
                    kappa: ev.kappa,
                };
                RacsStatus::Ok
            }
            Err(e) => fail(e),
        }
    })
}

/// Gains of honest reporting over deviating, for link-breakage
/// concealment and for collusion.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn racs_check_props(
    alpha: f64,
    phi_size: f64,
    psi1: f64,
    psi2: f64,
    out: *mut RacsPropositions,
) -> RacsStatus {
    guard(|| {
        if out.is_null() {
            return null("out pointer");
        }
        let both = proposition_gains_link(psi1, psi2, alpha, phi_size)
            .and_then(|l| proposition_gains_collusion(alpha, phi_size).map(|c| (l, c)));
        match both {
            Ok((l, c)) => {
                *out = RacsPropositions {
                    link_theta_h: l.theta_h,
                    link_theta_d: l.theta_d,
                    link_margin: l.margin,
                    collusion_theta_h: c.theta_h,
                    collusion_theta_d: c.theta_d,
                    collusion_margin: c.margin,
                };
                RacsStatus::Ok
            }
            Err(e) => fail(e),
        }
    })
}

/// Most energy a single link breaker can waste.
#[no_mangle]
pub extern "C" fn racs_damage_bound(
    hop_limit: f64,
    max_suspicions: f64,
    sigma: f64,
    phi_size: f64,
) -> f64 {
    damage_bound(hop_limit, max_suspicions, sigma, phi_size)
}

/// Packs the attributes into the low 53 bits of `*out`.
///
/// # Safety
/// `attrs` must be readable and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn racs_attributes_encode(
    attrs: *const RacsAttributes,
    out: *mut u64,
) -> RacsStatus {
    guard(|| {
        let Some(a) = attrs.as_ref() else {
            return null("attributes");
        };
        if out.is_null() {
            return null("out pointer");
        }
        let full = NodeAttributes {
            node_id: a.node_id,
            lat: a.lat,
            long: a.long,
            radio_range: a.radio_range,
            velocity: a.velocity,
            hello_interval: a.hello_interval,
            processing_time: 0.0,
            queue_size: 0,
        };
        match encode_attributes(&full) {
            Ok(block) => {
                *out = block.bits();
                RacsStatus::Ok
            }
            Err(e) => fail(e),
        }
    })
}

/// Inverse of [`racs_attributes_encode`]; bits above 53 are a range error.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn racs_attributes_decode(bits: u64, out: *mut RacsAttributes) -> RacsStatus {
    guard(|| {
        if out.is_null() {
            return null("out pointer");
        }
        let Some(block) = AttributeBlock::from_bits(bits) else {
            set_error("attribute block wider than 53 bits");
            return RacsStatus::Range;
        };
        let a = decode_attributes(block);
        *out = RacsAttributes {
            node_id: a.node_id,
            lat: a.lat,
            long: a.long,
            radio_range: a.radio_range,
            velocity: a.velocity,
            hello_interval: a.hello_interval,
        };
        RacsStatus::Ok
    })
}
