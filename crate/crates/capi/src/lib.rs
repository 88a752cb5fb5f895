//! C ABI for the schreier-ising toolkit: opaque graph handles, UTF-8 JSON
//! and CSV strings, and numeric evaluators. Every fallible call returns an
//! [`SiStatus`]; the message for the most recent failure on the current
//! thread is available from `si_last_error_message`.
//!
//! Strings returned through `char**` out-parameters are owned by the caller
//! and must be released with `si_string_free`. Graph handles must be
//! released with `si_graph_free`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::ptr;

use rug::Float;
use schreier_ising::genfun::GfLabeling;
use schreier_ising::graph::{
    build_rotation_invariant_omega, build_schreier, contract_to_sierpinski, LabeledMultigraph,
};
use schreier_ising::group::Family;
use schreier_ising::ising::{self, RenormVariant, PREC};
use schreier_ising::{acceptance, fisher, genfun, Error};

/// Status codes for every fallible entry point.
#[repr(C)]
#[derive(Clone, Copy, PartialEq, Eq)]
pub enum SiStatus {
    Ok = 0,
    InvalidArgument = 1,
    Unsupported = 2,
    BudgetExceeded = 3,
    VerificationFailed = 4,
    Internal = 5,
}

/// Opaque labeled multigraph handle.
pub struct SiGraph {
    inner: LabeledMultigraph,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::new("").unwrap());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn status_of(err: &Error) -> SiStatus {
    match err {
        Error::BudgetExceeded { .. } => SiStatus::BudgetExceeded,
        Error::VerificationFailed(_) => SiStatus::VerificationFailed,
        Error::UnsupportedLevel { .. } | Error::UnsupportedDegree { .. } | Error::NegativePower => {
            SiStatus::Unsupported
        }
        Error::InvalidParams(_) | Error::FamilyMismatch { .. } => SiStatus::InvalidArgument,
        _ => SiStatus::Internal,
    }
}

fn fail(err: Error) -> SiStatus {
    let s = status_of(&err);
    set_error(&err.to_string());
    s
}

fn fail_invalid(msg: &str) -> SiStatus {
    set_error(msg);
    SiStatus::InvalidArgument
}

/// Message from the most recent failing call on this thread. The pointer is
/// valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn si_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Releases a string returned by this library.
///
/// # Safety
/// `s` must be a pointer previously returned through a `char**` out-param of
/// this library, or null.
#[no_mangle]
pub unsafe extern "C" fn si_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

unsafe fn parse_str<'a>(p: *const c_char, what: &str) -> Result<&'a str, SiStatus> {
    if p.is_null() {
        return Err(fail_invalid(&format!("{what} must not be null")));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| fail_invalid(&format!("{what} must be UTF-8")))
}

fn emit_string(s: String, out: *mut *mut c_char) -> SiStatus {
    match CString::new(s) {
        Ok(c) => {
            unsafe { *out = c.into_raw() };
            SiStatus::Ok
        }
        Err(_) => fail_invalid("interior NUL in output"),
    }
}

fn build_graph_impl(
    family: Family,
    level: u32,
    labeling: GfLabeling,
) -> Result<LabeledMultigraph, Error> {
    match (family, labeling) {
        (Family::Sierpinski, GfLabeling::RotationInvariant) => {
            build_rotation_invariant_omega(level)
        }
        (Family::Sierpinski, _) => contract_to_sierpinski(&build_schreier(Family::Hanoi, level)?),
        (_, GfLabeling::RotationInvariant) => Err(Error::InvalidParams(
            "rotation labeling exists only for sierpinski".into(),
        )),
        _ => build_schreier(family, level),
    }
}

/// Builds a graph. `family` is one of "grigorchuk", "basilica", "hanoi",
/// "sierpinski"; `labeling` is "plain", "labels" or "rotation".
///
/// # Safety
/// `family` and `labeling` must be valid NUL-terminated strings and
/// `out_graph` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn si_graph_build(
    family: *const c_char,
    level: u32,
    labeling: *const c_char,
    out_graph: *mut *mut SiGraph,
) -> SiStatus {
    if out_graph.is_null() {
        return fail_invalid("out_graph must not be null");
    }
    *out_graph = ptr::null_mut();
    let family = match parse_str(family, "family").and_then(|s| Family::parse(s).map_err(fail)) {
        Ok(f) => f,
        Err(s) => return s,
    };
    let labeling =
        match parse_str(labeling, "labeling").and_then(|s| GfLabeling::parse(s).map_err(fail)) {
            Ok(l) => l,
            Err(s) => return s,
        };
    match build_graph_impl(family, level, labeling) {
        Ok(g) => {
            *out_graph = Box::into_raw(Box::new(SiGraph { inner: g }));
            SiStatus::Ok
        }
        Err(e) => fail(e),
    }
}

/// Contracts a Hanoi Schreier graph to its Sierpinski graph.
///
/// # Safety
/// `graph` must be a live handle from this library, `out_graph` valid.
#[no_mangle]
pub unsafe extern "C" fn si_graph_contract(
    graph: *const SiGraph,
    out_graph: *mut *mut SiGraph,
) -> SiStatus {
    if graph.is_null() || out_graph.is_null() {
        return fail_invalid("null argument");
    }
    *out_graph = ptr::null_mut();
    match contract_to_sierpinski(&(*graph).inner) {
        Ok(g) => {
            *out_graph = Box::into_raw(Box::new(SiGraph { inner: g }));
            SiStatus::Ok
        }
        Err(e) => fail(e),
    }
}

/// Applies the polygon-to-dimer vertex-gadget transform.
///
/// # Safety
/// `graph` must be a live handle from this library, `out_graph` valid.
#[no_mangle]
pub unsafe extern "C" fn si_graph_fisher_transform(
    graph: *const SiGraph,
    out_graph: *mut *mut SiGraph,
) -> SiStatus {
    if graph.is_null() || out_graph.is_null() {
        return fail_invalid("null argument");
    }
    *out_graph = ptr::null_mut();
    match fisher::fisher_transform(&(*graph).inner) {
        Ok((g, _)) => {
            *out_graph = Box::into_raw(Box::new(SiGraph { inner: g }));
            SiStatus::Ok
        }
        Err(e) => fail(e),
    }
}

/// Number of vertices.
///
/// # Safety
/// `graph` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn si_graph_vertex_count(graph: *const SiGraph) -> u64 {
    if graph.is_null() {
        return 0;
    }
    (*graph).inner.vertex_count() as u64
}

/// Number of edges; loops are excluded when `loopless` is true.
///
/// # Safety
/// `graph` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn si_graph_edge_count(graph: *const SiGraph, loopless: bool) -> u64 {
    if graph.is_null() {
        return 0;
    }
    let g = &(*graph).inner;
    if loopless {
        g.loopless_edge_count() as u64
    } else {
        g.edges.len() as u64
    }
}

/// Serializes the graph as JSON.
///
/// # Safety
/// `graph` must be a live handle and `out_json` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn si_graph_to_json(
    graph: *const SiGraph,
    out_json: *mut *mut c_char,
) -> SiStatus {
    if graph.is_null() || out_json.is_null() {
        return fail_invalid("null argument");
    }
    emit_string(
        serde_json::to_string(&(*graph).inner.to_json()).unwrap(),
        out_json,
    )
}

/// Serializes the graph as DOT.
///
/// # Safety
/// `graph` must be a live handle and `out_dot` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn si_graph_to_dot(
    graph: *const SiGraph,
    include_loops: bool,
    out_dot: *mut *mut c_char,
) -> SiStatus {
    if graph.is_null() || out_dot.is_null() {
        return fail_invalid("null argument");
    }
    emit_string((*graph).inner.to_dot(include_loops), out_dot)
}

/// Releases a graph handle.
///
/// # Safety
/// `graph` must be a handle from this library (or null), not yet freed.
#[no_mangle]
pub unsafe extern "C" fn si_graph_free(graph: *mut SiGraph) {
    if !graph.is_null() {
        drop(Box::from_raw(graph));
    }
}

fn genfun_impl(
    family: Family,
    level: u32,
    labeling: GfLabeling,
) -> Result<genfun::GenFunSet, Error> {
    match (family, labeling) {
        (Family::Grigorchuk, GfLabeling::Unweighted) => genfun::grigorchuk_gamma(level, false),
        (Family::Grigorchuk, GfLabeling::SchreierLabels) => genfun::grigorchuk_gamma(level, true),
        (Family::Basilica, GfLabeling::Unweighted) => genfun::basilica_gamma(level, false),
        (Family::Basilica, GfLabeling::SchreierLabels) => genfun::basilica_gamma(level, true),
        (Family::Hanoi, GfLabeling::Unweighted) => genfun::hanoi_gamma_recursive(level),
        (Family::Hanoi, GfLabeling::SchreierLabels) => genfun::hanoi_gamma_weighted(level),
        (Family::Sierpinski, GfLabeling::Unweighted) => genfun::sierpinski_gamma_recursive(level),
        (Family::Sierpinski, GfLabeling::SchreierLabels) => {
            genfun::sierpinski_schreier_weighted(level)
        }
        (Family::Sierpinski, GfLabeling::RotationInvariant) => {
            genfun::sierpinski_gamma_rotation_invariant(level)
        }
        (_, GfLabeling::RotationInvariant) => Err(Error::InvalidParams(
            "rotation labeling exists only for sierpinski".into(),
        )),
    }
}

/// Computes the closed-polygon generating function and returns its JSON,
/// including the metadata header.
///
/// # Safety
/// String arguments must be valid NUL-terminated strings; `out_json` valid.
#[no_mangle]
pub unsafe extern "C" fn si_genfun_json(
    family: *const c_char,
    level: u32,
    labeling: *const c_char,
    out_json: *mut *mut c_char,
) -> SiStatus {
    if out_json.is_null() {
        return fail_invalid("out_json must not be null");
    }
    let family = match parse_str(family, "family").and_then(|s| Family::parse(s).map_err(fail)) {
        Ok(f) => f,
        Err(s) => return s,
    };
    let labeling =
        match parse_str(labeling, "labeling").and_then(|s| GfLabeling::parse(s).map_err(fail)) {
            Ok(l) => l,
            Err(s) => return s,
        };
    match genfun_impl(family, level, labeling) {
        Ok(gf) => emit_string(serde_json::to_string(&gf.to_json()).unwrap(), out_json),
        Err(e) => fail(e),
    }
}

/// log Z_n at z = tanh(beta J), evaluated from the closed forms at ~115
/// decimal digits and rounded to f64.
///
/// # Safety
/// `family` must be a valid string, `out_log_z` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn si_log_partition(
    family: *const c_char,
    level: u32,
    z: f64,
    out_log_z: *mut f64,
) -> SiStatus {
    if out_log_z.is_null() {
        return fail_invalid("out_log_z must not be null");
    }
    let family = match parse_str(family, "family").and_then(|s| Family::parse(s).map_err(fail)) {
        Ok(f) => f,
        Err(s) => return s,
    };
    let zf = Float::with_val(PREC, z);
    match ising::log_partition(family, level, &zf, PREC) {
        Ok(v) => {
            *out_log_z = v.to_f64();
            SiStatus::Ok
        }
        Err(e) => fail(e),
    }
}

/// Thermodynamic limit at z = tanh(beta J) with truncation error <= tol;
/// also reports the tail bound actually achieved.
///
/// # Safety
/// `family` must be a valid string; out-pointers valid.
#[no_mangle]
pub unsafe extern "C" fn si_thermodynamic_limit(
    family: *const c_char,
    z: f64,
    tol: f64,
    out_value: *mut f64,
    out_tail_bound: *mut f64,
) -> SiStatus {
    if out_value.is_null() || out_tail_bound.is_null() {
        return fail_invalid("null output pointer");
    }
    let family = match parse_str(family, "family").and_then(|s| Family::parse(s).map_err(fail)) {
        Ok(f) => f,
        Err(s) => return s,
    };
    let zf = Float::with_val(PREC, z);
    match ising::thermodynamic_limit(family, &zf, tol, PREC) {
        Ok(series) => {
            *out_value = series.value.to_f64();
            *out_tail_bound = series.tail_bound.to_f64();
            SiStatus::Ok
        }
        Err(e) => fail(e),
    }
}

/// One renormalization step: f(y) and c(y). `variant` is "sierpinski" or
/// "hanoi".
///
/// # Safety
/// `variant` must be a valid string; out-pointers valid.
#[no_mangle]
pub unsafe extern "C" fn si_renormalization_step(
    variant: *const c_char,
    y: f64,
    out_f: *mut f64,
    out_c: *mut f64,
) -> SiStatus {
    if out_f.is_null() || out_c.is_null() {
        return fail_invalid("null output pointer");
    }
    let variant =
        match parse_str(variant, "variant").and_then(|s| RenormVariant::parse(s).map_err(fail)) {
            Ok(v) => v,
            Err(s) => return s,
        };
    let yf = Float::with_val(PREC, y);
    match ising::renormalization_step(variant, &yf) {
        Ok((f, c)) => {
            *out_f = f.to_f64();
            *out_c = c.to_f64();
            SiStatus::Ok
        }
        Err(e) => fail(e),
    }
}

/// Exact per-label statistics as CSV.
///
/// # Safety
/// String arguments must be valid NUL-terminated strings; `out_csv` valid.
#[no_mangle]
pub unsafe extern "C" fn si_label_statistics_csv(
    family: *const c_char,
    level: u32,
    labeling: *const c_char,
    out_csv: *mut *mut c_char,
) -> SiStatus {
    if out_csv.is_null() {
        return fail_invalid("out_csv must not be null");
    }
    let family = match parse_str(family, "family").and_then(|s| Family::parse(s).map_err(fail)) {
        Ok(f) => f,
        Err(s) => return s,
    };
    let labeling =
        match parse_str(labeling, "labeling").and_then(|s| GfLabeling::parse(s).map_err(fail)) {
            Ok(GfLabeling::Unweighted) => GfLabeling::SchreierLabels,
            Ok(l) => l,
            Err(s) => return s,
        };
    match ising::label_statistics(family, level, labeling) {
        Ok(rows) => emit_string(ising::stats_csv(family, level, labeling, &rows), out_csv),
        Err(e) => fail(e),
    }
}

/// Runs one acceptance criterion (1..=11). Returns Ok when it passes,
/// VerificationFailed (with the detail in the error message) otherwise.
#[no_mangle]
pub extern "C" fn si_verify_criterion(id: u32) -> SiStatus {
    match acceptance::run_criterion(id) {
        Ok(outcome) if outcome.passed => SiStatus::Ok,
        Ok(outcome) => {
            set_error(&format!("{}\n{}", outcome.line(), outcome.detail));
            SiStatus::VerificationFailed
        }
        Err(e) => fail(e),
    }
}
