//! C ABI over `metastable-core`.
//!
//! Every entry point returns an [`MsStatus`]; results come back through out
//! pointers. Objects are opaque handles released with their `_free`
//! function, strings with [`ms_string_free`]. The message of the last
//! failure on the calling thread is available from [`ms_last_error`].

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use metastable_core::landscape::graph::{build_transition_graph, GraphMode, TransitionGraph};
use metastable_core::rates::{rate_table, spectral_gap};
use metastable_core::simulate::csv::trace_csv;
use metastable_core::simulate::kmc::{alternating_state, run_jump, JumpRun, RateModel};
use metastable_core::verify::run_suite;
use metastable_core::Error;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MsStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidInput = 2,
    NumericFailure = 3,
    VerifyFailed = 4,
    Panic = 5,
}

/// Transition graph of the uncoupled landscape.
pub struct MsLandscape {
    graph: TransitionGraph,
}

/// Completed jump-chain run.
pub struct MsJumpRun {
    run: JumpRun,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let c = CString::new(msg.into().replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn fail(e: Error) -> MsStatus {
    set_error(e.to_string());
    if e.is_input() {
        MsStatus::InvalidInput
    } else {
        MsStatus::NumericFailure
    }
}

/// Runs `f`, turning panics into `MsStatus::Panic`.
fn guard(f: impl FnOnce() -> MsStatus) -> MsStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(s) => s,
        Err(_) => {
            set_error("internal panic");
            MsStatus::Panic
        }
    }
}

fn to_c_string(s: String, out: *mut *mut c_char) -> MsStatus {
    match CString::new(s) {
        Ok(c) => {
            // SAFETY: callers check `out` for null before reaching here.
            unsafe { *out = c.into_raw() };
            MsStatus::Ok
        }
        Err(_) => {
            set_error("output contains a NUL byte");
            MsStatus::NumericFailure
        }
    }
}

/// Message of the last failure on this thread, or NULL. Owned by the
/// library; valid until the next call on the same thread.
#[no_mangle]
pub extern "C" fn ms_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn ms_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Builds the zero-coupling transition graph. `orbits != 0` selects the
/// orbit quotient; otherwise every point is listed (n <= 10).
///
/// # Safety
/// `out` must be a valid pointer to writable storage for one handle.
#[no_mangle]
pub unsafe extern "C" fn ms_landscape_new(n: usize, orbits: i32, out: *mut *mut MsLandscape) -> MsStatus {
    if out.is_null() {
        return MsStatus::NullPointer;
    }
    guard(|| {
        let mode = if orbits != 0 { GraphMode::OrbitQuotient } else { GraphMode::Full };
        match build_transition_graph(n, mode) {
            Ok(graph) => {
                *out = Box::into_raw(Box::new(MsLandscape { graph }));
                MsStatus::Ok
            }
            Err(e) => fail(e),
        }
    })
}

/// Node and edge counts of the graph (classes in quotient mode).
///
/// # Safety
/// `h` must be a live handle; `minima` and `saddles` valid or NULL.
#[no_mangle]
pub unsafe extern "C" fn ms_landscape_counts(h: *const MsLandscape, minima: *mut usize, saddles: *mut usize) -> MsStatus {
    let Some(h) = h.as_ref() else { return MsStatus::NullPointer };
    if let Some(m) = minima.as_mut() {
        *m = h.graph.nodes.len();
    }
    if let Some(s) = saddles.as_mut() {
        *s = h.graph.edges.len();
    }
    MsStatus::Ok
}

/// Degree of node `node`.
///
/// # Safety
/// `h` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ms_landscape_degree(h: *const MsLandscape, node: usize, out: *mut usize) -> MsStatus {
    let (Some(h), false) = (h.as_ref(), out.is_null()) else { return MsStatus::NullPointer };
    if node >= h.graph.nodes.len() {
        set_error(format!("node {node} out of range"));
        return MsStatus::InvalidInput;
    }
    *out = h.graph.degree(node);
    MsStatus::Ok
}

/// Graphviz rendering; free with `ms_string_free`.
///
/// # Safety
/// `h` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ms_landscape_dot(h: *const MsLandscape, out: *mut *mut c_char) -> MsStatus {
    let (Some(h), false) = (h.as_ref(), out.is_null()) else { return MsStatus::NullPointer };
    guard(|| to_c_string(h.graph.to_dot(), out))
}

/// # Safety
/// `h` must come from `ms_landscape_new` and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn ms_landscape_free(h: *mut MsLandscape) {
    if !h.is_null() {
        drop(Box::from_raw(h));
    }
}

/// Smallest nonzero eigenvalue of the two-orbit chain. A NaN or
/// non-positive `q_y` selects the Eyring-Kramers default.
///
/// # Safety
/// `lambda2` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ms_spectral_gap(n: usize, gamma: f64, eps: f64, q_y: f64, lambda2: *mut f64) -> MsStatus {
    if lambda2.is_null() {
        return MsStatus::NullPointer;
    }
    guard(|| {
        let qy = (q_y > 0.0).then_some(q_y);
        match spectral_gap(n, gamma, eps, qy) {
            Ok(r) => {
                *lambda2 = r.lambda2;
                MsStatus::Ok
            }
            Err(e) => fail(e),
        }
    })
}

/// `B_k -> B_(k-1)` table as JSON; free with `ms_string_free`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ms_rate_table_json(n: usize, gamma: f64, eps: f64, out: *mut *mut c_char) -> MsStatus {
    if out.is_null() {
        return MsStatus::NullPointer;
    }
    guard(|| match rate_table(n, gamma, eps) {
        Ok(t) => match serde_json::to_string(&t) {
            Ok(s) => to_c_string(s, out),
            Err(e) => fail(Error::from(e)),
        },
        Err(e) => fail(e),
    })
}

/// Jump chain from the alternating state.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ms_jump_run_new(
    n: usize,
    gamma: f64,
    eps: f64,
    events: usize,
    seed: u64,
    out: *mut *mut MsJumpRun,
) -> MsStatus {
    if out.is_null() {
        return MsStatus::NullPointer;
    }
    guard(|| {
        let run = RateModel::new(n, gamma, eps).and_then(|m| run_jump(&alternating_state(n)?, &m, events, seed));
        match run {
            Ok(run) => {
                *out = Box::into_raw(Box::new(MsJumpRun { run }));
                MsStatus::Ok
            }
            Err(e) => fail(e),
        }
    })
}

/// Number of events and final interface count.
///
/// # Safety
/// `h` must be a live handle; the out pointers valid or NULL.
#[no_mangle]
pub unsafe extern "C" fn ms_jump_run_summary(h: *const MsJumpRun, events: *mut usize, final_p: *mut usize, elapsed: *mut f64) -> MsStatus {
    let Some(h) = h.as_ref() else { return MsStatus::NullPointer };
    if let Some(e) = events.as_mut() {
        *e = h.run.events.len();
    }
    if let Some(p) = final_p.as_mut() {
        *p = h.run.final_state.p;
    }
    if let Some(t) = elapsed.as_mut() {
        *t = h.run.events.iter().map(|e| e.t_wait).sum();
    }
    MsStatus::Ok
}

/// `t,p,label` trace; free with `ms_string_free`.
///
/// # Safety
/// `h` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ms_jump_run_trace_csv(h: *const MsJumpRun, out: *mut *mut c_char) -> MsStatus {
    let (Some(h), false) = (h.as_ref(), out.is_null()) else { return MsStatus::NullPointer };
    guard(|| match trace_csv(&h.run) {
        Ok(s) => to_c_string(s, out),
        Err(e) => fail(e),
    })
}

/// # Safety
/// `h` must come from `ms_jump_run_new` and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn ms_jump_run_free(h: *mut MsJumpRun) {
    if !h.is_null() {
        drop(Box::from_raw(h));
    }
}

/// Runs the invariant suite. Returns `VerifyFailed` if any check fails.
///
/// # Safety
/// `passed` and `total` must be valid or NULL.
#[no_mangle]
pub unsafe extern "C" fn ms_verify(passed: *mut usize, total: *mut usize) -> MsStatus {
    guard(|| {
        let checks = run_suite();
        let ok = checks.iter().filter(|c| c.passed).count();
        if let Some(p) = passed.as_mut() {
            *p = ok;
        }
        if let Some(t) = total.as_mut() {
            *t = checks.len();
        }
        if ok == checks.len() {
            MsStatus::Ok
        } else {
            let names: Vec<&str> = checks.iter().filter(|c| !c.passed).map(|c| c.name.as_str()).collect();
            set_error(format!("failed checks: {}", names.join(", ")));
            MsStatus::VerifyFailed
        }
    })
}
