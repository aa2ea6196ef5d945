//! C ABI for the frontlab library.
//!
//! Models are opaque handles created from preset names with JSON parameter
//! objects; analyses return status codes and write results through out
//! pointers. The last error message per thread is retrievable as a C
//! string. The header `include/frontlab.h` is generated by cbindgen at
//! build time.

use std::cell::RefCell;
use std::collections::BTreeMap;
use std::ffi::{c_char, c_int, CStr, CString};
use std::path::Path;

use frontlab::dispersion::linear_spreading_speed;
use frontlab::harness::pipeline::experiment_run;
use frontlab::models::{build_preset, eval_reaction, ReactionModel};
use frontlab::models::equilibrium_at;

/// Status codes of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FrontlabStatus {
    Ok = 0,
    InvalidArgument = 1,
    ConfigError = 2,
    NumericalError = 3,
    CriterionFailure = 4,
}

/// Opaque reaction-diffusion model handle.
pub struct FrontlabModel {
    inner: ReactionModel,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::new("").unwrap());
}

fn set_error(msg: &str) {
    let sanitized: String = msg.chars().filter(|&ch| ch != '\0').collect();
    LAST_ERROR.with(|slot| {
        *slot.borrow_mut() = CString::new(sanitized).unwrap_or_default();
    });
}

fn status_of(err: &frontlab::error::Error) -> FrontlabStatus {
    match err.exit_code() {
        2 => FrontlabStatus::ConfigError,
        4 => FrontlabStatus::CriterionFailure,
        _ => FrontlabStatus::NumericalError,
    }
}

unsafe fn cstr<'a>(ptr: *const c_char) -> Option<&'a str> {
    if ptr.is_null() {
        return None;
    }
    CStr::from_ptr(ptr).to_str().ok()
}

fn params_from_json(json: Option<&str>) -> Result<BTreeMap<String, f64>, String> {
    match json {
        None => Ok(BTreeMap::new()),
        Some(text) if text.trim().is_empty() => Ok(BTreeMap::new()),
        Some(text) => serde_json::from_str::<BTreeMap<String, f64>>(text)
            .map_err(|e| format!("params must be a JSON object of numbers: {e}")),
    }
}

/// Library version as a static C string.
#[no_mangle]
pub extern "C" fn frontlab_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}

/// Message of the most recent error on this thread; valid until the next
/// failing call.
#[no_mangle]
pub extern "C" fn frontlab_last_error() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ptr())
}

/// Create a preset model. `params_json` is an optional JSON object of
/// numeric parameters (e.g. `{"alpha": 0.02, "beta": 0.5}`); NULL uses the
/// preset defaults. Returns NULL on error.
///
/// # Safety
/// `name` and `params_json` must be NULL or valid NUL-terminated strings.
#[no_mangle]
pub unsafe extern "C" fn frontlab_model_preset(
    name: *const c_char,
    params_json: *const c_char,
) -> *mut FrontlabModel {
    let Some(name) = cstr(name) else {
        set_error("model name must not be NULL");
        return std::ptr::null_mut();
    };
    let params = match params_from_json(cstr(params_json)) {
        Ok(p) => p,
        Err(e) => {
            set_error(&e);
            return std::ptr::null_mut();
        }
    };
    match build_preset(name, &params) {
        Ok(model) => Box::into_raw(Box::new(FrontlabModel { inner: model })),
        Err(e) => {
            set_error(&e.to_string());
            std::ptr::null_mut()
        }
    }
}

/// Destroy a model handle. NULL is ignored.
///
/// # Safety
/// `model` must be a pointer previously returned by
/// [`frontlab_model_preset`] and not yet freed.
#[no_mangle]
pub unsafe extern "C" fn frontlab_model_free(model: *mut FrontlabModel) {
    if !model.is_null() {
        drop(Box::from_raw(model));
    }
}

/// Number of components of the model, or -1 for NULL.
///
/// # Safety
/// `model` must be a live handle or NULL.
#[no_mangle]
pub unsafe extern "C" fn frontlab_model_components(model: *const FrontlabModel) -> c_int {
    match model.as_ref() {
        Some(m) => m.inner.n_components as c_int,
        None => -1,
    }
}

/// Evaluate the reaction map F(U): `u` and `out` are arrays of length `n`.
///
/// # Safety
/// `model` must be a live handle; `u` and `out` must point to `n` doubles.
#[no_mangle]
pub unsafe extern "C" fn frontlab_eval_reaction(
    model: *const FrontlabModel,
    u: *const f64,
    n: usize,
    out: *mut f64,
) -> FrontlabStatus {
    let Some(m) = model.as_ref() else {
        set_error("model handle is NULL");
        return FrontlabStatus::InvalidArgument;
    };
    if u.is_null() || out.is_null() {
        set_error("u and out must not be NULL");
        return FrontlabStatus::InvalidArgument;
    }
    let state = std::slice::from_raw_parts(u, n);
    match eval_reaction(&m.inner, state) {
        Ok(rates) => {
            std::ptr::copy_nonoverlapping(rates.as_ptr(), out, rates.len());
            FrontlabStatus::Ok
        }
        Err(e) => {
            set_error(&e.to_string());
            status_of(&e)
        }
    }
}

/// Linear spreading data at the equilibrium `at` (array of length `n`):
/// writes c_lin, the leading-edge decay rate eta, and the effective
/// diffusivity d_eff.
///
/// # Safety
/// `model` must be a live handle; `at` must point to `n` doubles; the out
/// pointers must be valid or NULL (NULL outputs are skipped).
#[no_mangle]
pub unsafe extern "C" fn frontlab_spreading_speed(
    model: *const FrontlabModel,
    at: *const f64,
    n: usize,
    out_c_lin: *mut f64,
    out_eta: *mut f64,
    out_d_eff: *mut f64,
) -> FrontlabStatus {
    let Some(m) = model.as_ref() else {
        set_error("model handle is NULL");
        return FrontlabStatus::InvalidArgument;
    };
    if at.is_null() || n != m.inner.n_components {
        set_error("`at` must hold one value per model component");
        return FrontlabStatus::InvalidArgument;
    }
    let state = std::slice::from_raw_parts(at, n).to_vec();
    let eq = equilibrium_at(&m.inner, state);
    match linear_spreading_speed(&m.inner, &eq) {
        Ok(s) => {
            if !out_c_lin.is_null() {
                *out_c_lin = s.c_lin;
            }
            if !out_eta.is_null() {
                *out_eta = s.eta;
            }
            if !out_d_eff.is_null() {
                *out_d_eff = s.d_eff;
            }
            FrontlabStatus::Ok
        }
        Err(e) => {
            set_error(&e.to_string());
            status_of(&e)
        }
    }
}

/// Run a named experiment into `out_dir`, writing its record files. When
/// `out_passed` is non-NULL it receives 1 if every criterion passed.
/// Returns CriterionFailure when the experiment ran but a criterion failed.
///
/// # Safety
/// `name` and `out_dir` must be valid strings; `params_json` NULL or valid.
#[no_mangle]
pub unsafe extern "C" fn frontlab_run_experiment(
    name: *const c_char,
    params_json: *const c_char,
    out_dir: *const c_char,
    out_passed: *mut c_int,
) -> FrontlabStatus {
    let (Some(name), Some(dir)) = (cstr(name), cstr(out_dir)) else {
        set_error("name and out_dir must not be NULL");
        return FrontlabStatus::InvalidArgument;
    };
    let params = match params_from_json(cstr(params_json)) {
        Ok(p) => p,
        Err(e) => {
            set_error(&e);
            return FrontlabStatus::ConfigError;
        }
    };
    match experiment_run(name, &params, Path::new(dir)) {
        Ok(record) => {
            if !out_passed.is_null() {
                *out_passed = record.passed as c_int;
            }
            if record.passed {
                FrontlabStatus::Ok
            } else {
                set_error("one or more criteria failed; see the record file");
                FrontlabStatus::CriterionFailure
            }
        }
        Err(e) => {
            set_error(&e.to_string());
            status_of(&e)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::ffi::CString;

    #[test]
    fn preset_lifecycle_and_eval() {
        let name = CString::new("skew").unwrap();
        let params = CString::new(r#"{"mu": 0.1}"#).unwrap();
        unsafe {
            let model = frontlab_model_preset(name.as_ptr(), params.as_ptr());
            assert!(!model.is_null());
            assert_eq!(frontlab_model_components(model), 2);
            let u = [1.0, 0.5];
            let mut out = [0.0, 0.0];
            let status = frontlab_eval_reaction(model, u.as_ptr(), 2, out.as_mut_ptr());
            assert_eq!(status, FrontlabStatus::Ok);
            assert!((out[1] - 0.4125).abs() < 1e-12);
            frontlab_model_free(model);
        }
    }

    #[test]
    fn spreading_speed_through_ffi() {
        let name = CString::new("nagumo").unwrap();
        unsafe {
            let model = frontlab_model_preset(name.as_ptr(), std::ptr::null());
            let at = [0.0];
            let mut c_lin = 0.0;
            let mut eta = 0.0;
            let mut d_eff = 0.0;
            let status = frontlab_spreading_speed(
                model,
                at.as_ptr(),
                1,
                &mut c_lin,
                &mut eta,
                &mut d_eff,
            );
            assert_eq!(status, FrontlabStatus::Ok);
            assert!((c_lin - 2.0).abs() < 1e-8);
            assert!((eta - 1.0).abs() < 1e-7);
            frontlab_model_free(model);
        }
    }

    #[test]
    fn unknown_preset_reports_error() {
        let name = CString::new("not_a_model").unwrap();
        unsafe {
            let model = frontlab_model_preset(name.as_ptr(), std::ptr::null());
            assert!(model.is_null());
            let msg = CStr::from_ptr(frontlab_last_error()).to_str().unwrap();
            assert!(msg.contains("not_a_model"), "{msg}");
        }
    }

    #[test]
    fn header_generated() {
        let header = std::path::Path::new(env!("CARGO_MANIFEST_DIR"))
            .join("include")
            .join("frontlab.h");
        let text = std::fs::read_to_string(header).expect("cbindgen header");
        assert!(text.contains("frontlab_model_preset"));
        assert!(text.contains("FrontlabStatus"));
    }
}
