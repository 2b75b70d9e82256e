//! C ABI for the verification engine, so other languages can configure a
//! run, execute it, and read the JSON report.
//!
//! Conventions:
//! - handles (`DualbraidConfig`, `DualbraidReport`) are opaque; create and
//!   destroy them only through this API;
//! - every function returns a [`DualbraidStatus`] unless it cannot fail;
//! - strings returned by the library are NUL-terminated UTF-8 and must be
//!   released with [`dualbraid_string_free`];
//! - no function panics across the boundary.
//!
//! The matching header lives at `include/dualbraid.h` (kept by hand, with
//! a `cbindgen.toml` for regeneration where that tool is available).

use std::ffi::{c_char, c_int, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use dualbraid::report::{run, Report, SuiteConfig};

/// Opaque configuration handle.
pub struct DualbraidConfig(SuiteConfig);

/// Opaque report handle.
pub struct DualbraidReport(Report);

/// Status codes returned by the C API.
#[repr(C)]
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum DualbraidStatus {
    Ok = 0,
    NullArgument = 1,
    InvalidArgument = 2,
    InvalidUtf8 = 3,
    ChecksFailed = 4,
    Panic = 5,
}

/// Create a configuration with the default parameters.
#[no_mangle]
pub extern "C" fn dualbraid_config_new() -> *mut DualbraidConfig {
    Box::into_raw(Box::new(DualbraidConfig(SuiteConfig::default())))
}

/// Release a configuration handle. A null pointer is a no-op.
///
/// # Safety
/// `cfg` must be null or a handle from [`dualbraid_config_new`] that has
/// not been freed.
#[no_mangle]
pub unsafe extern "C" fn dualbraid_config_free(cfg: *mut DualbraidConfig) {
    if !cfg.is_null() {
        drop(unsafe { Box::from_raw(cfg) });
    }
}

macro_rules! set_usize_field {
    ($name:ident, $field:ident) => {
        /// Set one integer configuration field.
        ///
        /// # Safety
        /// `cfg` must be null or a live configuration handle.
        #[no_mangle]
        pub unsafe extern "C" fn $name(cfg: *mut DualbraidConfig, value: usize) -> DualbraidStatus {
            let Some(cfg) = (unsafe { cfg.as_mut() }) else {
                return DualbraidStatus::NullArgument;
            };
            cfg.0.$field = value;
            DualbraidStatus::Ok
        }
    };
}

set_usize_field!(dualbraid_config_set_order, order);
set_usize_field!(dualbraid_config_set_h_order, h_order);
set_usize_field!(dualbraid_config_set_compare_degree, compare_degree);
set_usize_field!(dualbraid_config_set_samples, samples);
set_usize_field!(dualbraid_config_set_qybe_order, qybe_order);

/// Set the seed of all pseudo-random choices.
///
/// # Safety
/// `cfg` must be null or a live configuration handle.
#[no_mangle]
pub unsafe extern "C" fn dualbraid_config_set_seed(
    cfg: *mut DualbraidConfig,
    seed: u64,
) -> DualbraidStatus {
    let Some(cfg) = (unsafe { cfg.as_mut() }) else {
        return DualbraidStatus::NullArgument;
    };
    cfg.0.seed = seed;
    DualbraidStatus::Ok
}

/// Set both numeric tolerances (algebraic residuals, finite differences).
///
/// # Safety
/// `cfg` must be null or a live configuration handle.
#[no_mangle]
pub unsafe extern "C" fn dualbraid_config_set_tolerances(
    cfg: *mut DualbraidConfig,
    tol_qybe: f64,
    tol_fd: f64,
) -> DualbraidStatus {
    let Some(cfg) = (unsafe { cfg.as_mut() }) else {
        return DualbraidStatus::NullArgument;
    };
    if tol_qybe.partial_cmp(&0.0) != Some(std::cmp::Ordering::Greater)
        || tol_fd.partial_cmp(&0.0) != Some(std::cmp::Ordering::Greater)
    {
        return DualbraidStatus::InvalidArgument;
    }
    cfg.0.tol_qybe = tol_qybe;
    cfg.0.tol_fd = tol_fd;
    DualbraidStatus::Ok
}

/// Select suites from a comma-separated list (e.g. `"series,compare"` or
/// `"all"`).
///
/// # Safety
/// `cfg` must be null or a live configuration handle; `suites` must be
/// null or a NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn dualbraid_config_set_suites(
    cfg: *mut DualbraidConfig,
    suites: *const c_char,
) -> DualbraidStatus {
    let Some(cfg) = (unsafe { cfg.as_mut() }) else {
        return DualbraidStatus::NullArgument;
    };
    if suites.is_null() {
        return DualbraidStatus::NullArgument;
    }
    let raw = unsafe { CStr::from_ptr(suites) };
    let Ok(text) = raw.to_str() else {
        return DualbraidStatus::InvalidUtf8;
    };
    let parsed: Vec<String> = text
        .split(',')
        .map(|s| s.trim().to_string())
        .filter(|s| !s.is_empty())
        .collect();
    let mut candidate = cfg.0.clone();
    candidate.suites = parsed;
    if candidate.validate().is_err() {
        return DualbraidStatus::InvalidArgument;
    }
    cfg.0 = candidate;
    DualbraidStatus::Ok
}

/// Execute the selected suites.  On success (including a run with failing
/// checks) a report handle is stored in `out`; the status distinguishes a
/// fully passing run (`Ok`) from one with failures (`ChecksFailed`).
///
/// # Safety
/// `cfg` must be null or a live configuration handle; `out` must be null
/// or point to writable storage for one pointer.
#[no_mangle]
pub unsafe extern "C" fn dualbraid_run(
    cfg: *const DualbraidConfig,
    out: *mut *mut DualbraidReport,
) -> DualbraidStatus {
    let Some(cfg) = (unsafe { cfg.as_ref() }) else {
        return DualbraidStatus::NullArgument;
    };
    if out.is_null() {
        return DualbraidStatus::NullArgument;
    }
    unsafe { *out = std::ptr::null_mut() };
    if cfg.0.validate().is_err() {
        return DualbraidStatus::InvalidArgument;
    }
    let result = catch_unwind(AssertUnwindSafe(|| run(&cfg.0)));
    match result {
        Ok(Ok(report)) => {
            let passed = report.all_passed();
            unsafe { *out = Box::into_raw(Box::new(DualbraidReport(report))) };
            if passed {
                DualbraidStatus::Ok
            } else {
                DualbraidStatus::ChecksFailed
            }
        }
        Ok(Err(_)) => DualbraidStatus::InvalidArgument,
        Err(_) => DualbraidStatus::Panic,
    }
}

/// 1 when every check passed, 0 otherwise (or on a null handle).
///
/// # Safety
/// `report` must be null or a live report handle.
#[no_mangle]
pub unsafe extern "C" fn dualbraid_report_passed(report: *const DualbraidReport) -> c_int {
    match unsafe { report.as_ref() } {
        Some(r) if r.0.all_passed() => 1,
        _ => 0,
    }
}

/// Copy out the pass/fail/skip counts; null count pointers are skipped.
///
/// # Safety
/// `report` must be null or a live report handle; each count pointer must
/// be null or point to writable storage.
#[no_mangle]
pub unsafe extern "C" fn dualbraid_report_counts(
    report: *const DualbraidReport,
    passed: *mut usize,
    failed: *mut usize,
    skipped: *mut usize,
) -> DualbraidStatus {
    let Some(r) = (unsafe { report.as_ref() }) else {
        return DualbraidStatus::NullArgument;
    };
    if let Some(p) = unsafe { passed.as_mut() } {
        *p = r.0.summary.passed;
    }
    if let Some(f) = unsafe { failed.as_mut() } {
        *f = r.0.summary.failed;
    }
    if let Some(s) = unsafe { skipped.as_mut() } {
        *s = r.0.summary.skipped;
    }
    DualbraidStatus::Ok
}

/// Serialize the report as JSON.  The returned string must be released
/// with [`dualbraid_string_free`]; null on a null handle.
///
/// # Safety
/// `report` must be null or a live report handle.
#[no_mangle]
pub unsafe extern "C" fn dualbraid_report_to_json(report: *const DualbraidReport) -> *mut c_char {
    let Some(r) = (unsafe { report.as_ref() }) else {
        return std::ptr::null_mut();
    };
    match CString::new(r.0.to_json()) {
        Ok(s) => s.into_raw(),
        Err(_) => std::ptr::null_mut(),
    }
}

/// Release a report handle. A null pointer is a no-op.
///
/// # Safety
/// `report` must be null or a handle from [`dualbraid_run`] that has not
/// been freed.
#[no_mangle]
pub unsafe extern "C" fn dualbraid_report_free(report: *mut DualbraidReport) {
    if !report.is_null() {
        drop(unsafe { Box::from_raw(report) });
    }
}

/// Release a string returned by this library.
///
/// # Safety
/// `s` must be null or a string returned by this library that has not
/// been freed.
#[no_mangle]
pub unsafe extern "C" fn dualbraid_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(unsafe { CString::from_raw(s) });
    }
}

/// Library version as a static NUL-terminated string; do not free.
#[no_mangle]
pub extern "C" fn dualbraid_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_through_the_c_api() {
        unsafe {
        let cfg = dualbraid_config_new();
        assert_eq!(dualbraid_config_set_order(cfg, 3), DualbraidStatus::Ok);
        assert_eq!(dualbraid_config_set_h_order(cfg, 2), DualbraidStatus::Ok);
        assert_eq!(dualbraid_config_set_compare_degree(cfg, 2), DualbraidStatus::Ok);
        assert_eq!(dualbraid_config_set_samples(cfg, 4), DualbraidStatus::Ok);
        assert_eq!(dualbraid_config_set_seed(cfg, 1), DualbraidStatus::Ok);
        let suites = CString::new("series,compare").unwrap();
        assert_eq!(
            dualbraid_config_set_suites(cfg, suites.as_ptr()),
            DualbraidStatus::Ok
        );

        let mut report: *mut DualbraidReport = std::ptr::null_mut();
        assert_eq!(dualbraid_run(cfg, &mut report), DualbraidStatus::Ok);
        assert_eq!(dualbraid_report_passed(report), 1);

        let mut passed = 0usize;
        let mut failed = 0usize;
        let mut skipped = 0usize;
        assert_eq!(
            dualbraid_report_counts(report, &mut passed, &mut failed, &mut skipped),
            DualbraidStatus::Ok
        );
        assert!(passed >= 5);
        assert_eq!(failed, 0);

        let json = dualbraid_report_to_json(report);
        assert!(!json.is_null());
        let text = CStr::from_ptr(json).to_str().unwrap();
        assert!(text.contains("\"summary\""));
        dualbraid_string_free(json);

        dualbraid_report_free(report);
        dualbraid_config_free(cfg);
        }
    }

    #[test]
    fn null_and_invalid_arguments() {
        unsafe {
        assert_eq!(
            dualbraid_config_set_order(std::ptr::null_mut(), 4),
            DualbraidStatus::NullArgument
        );
        let cfg = dualbraid_config_new();
        let bogus = CString::new("bogus").unwrap();
        assert_eq!(
            dualbraid_config_set_suites(cfg, bogus.as_ptr()),
            DualbraidStatus::InvalidArgument
        );
        assert_eq!(
            dualbraid_config_set_tolerances(cfg, -1.0, 1e-4),
            DualbraidStatus::InvalidArgument
        );
        // inconsistent degrees are rejected at run time
        assert_eq!(dualbraid_config_set_compare_degree(cfg, 9), DualbraidStatus::Ok);
        let mut report: *mut DualbraidReport = std::ptr::null_mut();
        assert_eq!(
            dualbraid_run(cfg, &mut report),
            DualbraidStatus::InvalidArgument
        );
        assert!(report.is_null());
        dualbraid_config_free(cfg);
        dualbraid_config_free(std::ptr::null_mut());
        dualbraid_report_free(std::ptr::null_mut());
        dualbraid_string_free(std::ptr::null_mut());
        }
    }

    #[test]
    fn version_is_a_c_string() {
        let v = dualbraid_version();
        let text = unsafe { CStr::from_ptr(v) }.to_str().unwrap();
        assert_eq!(text, env!("CARGO_PKG_VERSION"));
    }
}
