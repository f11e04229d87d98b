//! C interface to absgrid.
//!
//! Objects cross the boundary as opaque handles owned by the caller and
//! released with the matching `*_free`. Every fallible call returns an
//! [`AbsgridStatus`]; on failure `absgrid_last_error` describes the error
//! for the calling thread. Strings returned to the caller are freed with
//! [`absgrid_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use absgrid::bench::{generate_instance, InstanceSpec, Problem};
use absgrid::cegar::{run_loop, CegarOptions, CegarOutcome, CegarTask, Status, StrategyKind};
use absgrid::quadtree::{CostDenominator, GridMapping};
use absgrid::render::{render, RenderFormat};
use absgrid::report::RunReport;
use absgrid::Error;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AbsgridStatus {
    Ok = 0,
    NullArgument = 1,
    InvalidUtf8 = 2,
    /// Malformed input text: a mapping, an instance or a name.
    Parse = 3,
    /// Grid sizes or regions that do not fit together.
    Grid = 4,
    /// Any other library error.
    Failed = 5,
    /// The run ended on its global timeout.
    Timeout = 6,
    Panic = 7,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AbsgridRunStatus {
    Concrete = 0,
    AbstractUnsat = 1,
    Unknown = 2,
}

/// A quad-tree grid mapping.
pub struct AbsgridMapping(GridMapping);

/// A benchmark instance.
pub struct AbsgridInstance(InstanceSpec);

/// The result of a refinement run, with its JSON report.
pub struct AbsgridOutcome {
    outcome: CegarOutcome,
    report: String,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> AbsgridStatus {
    match e {
        Error::Syntax { .. } | Error::Invalid(_) => AbsgridStatus::Parse,
        Error::Grid(_) => AbsgridStatus::Grid,
        _ => AbsgridStatus::Failed,
    }
}

/// Runs `f`, turning errors and panics into a status.
fn guard(f: impl FnOnce() -> Result<(), (AbsgridStatus, String)>) -> AbsgridStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => AbsgridStatus::Ok,
        Ok(Err((status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("panic inside absgrid".into());
            AbsgridStatus::Panic
        }
    }
}

fn lib(e: Error) -> (AbsgridStatus, String) {
    (status_of(&e), e.to_string())
}

unsafe fn read_str<'a>(p: *const c_char) -> Result<&'a str, (AbsgridStatus, String)> {
    if p.is_null() {
        return Err((AbsgridStatus::NullArgument, "null string argument".into()));
    }
    unsafe { CStr::from_ptr(p) }
        .to_str()
        .map_err(|_| (AbsgridStatus::InvalidUtf8, "string argument is not UTF-8".into()))
}

unsafe fn handle<'a, T>(p: *const T) -> Result<&'a T, (AbsgridStatus, String)> {
    unsafe { p.as_ref() }.ok_or_else(|| (AbsgridStatus::NullArgument, "null handle".into()))
}

unsafe fn put<T>(out: *mut T, v: T) -> Result<(), (AbsgridStatus, String)> {
    if out.is_null() {
        return Err((AbsgridStatus::NullArgument, "null output pointer".into()));
    }
    unsafe { out.write(v) };
    Ok(())
}

fn c_string(s: String) -> *mut c_char {
    CString::new(s.replace('\0', " ")).unwrap_or_default().into_raw()
}

/// Message of the last failed call on this thread, or null. Valid until the
/// next failing call on the same thread.
#[no_mangle]
pub extern "C" fn absgrid_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// # Safety
/// `s` must come from this library and not be freed yet, or be null.
#[no_mangle]
pub unsafe extern "C" fn absgrid_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(unsafe { CString::from_raw(s) });
    }
}

/// Parses the text form `n=8 b=2; x=1..4 y=1..4; ...`.
///
/// # Safety
/// `text` must be a NUL-terminated string and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn absgrid_mapping_parse(text: *const c_char, out: *mut *mut AbsgridMapping) -> AbsgridStatus {
    guard(|| {
        let m: GridMapping = unsafe { read_str(text) }?.parse().map_err(lib)?;
        unsafe { put(out, Box::into_raw(Box::new(AbsgridMapping(m)))) }
    })
}

/// The root region of side `n` split once into `branching²` regions.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn absgrid_mapping_initial(n: u32, branching: u32, out: *mut *mut AbsgridMapping) -> AbsgridStatus {
    guard(|| {
        let m = GridMapping::initial(n, branching).map_err(lib)?;
        unsafe { put(out, Box::into_raw(Box::new(AbsgridMapping(m)))) }
    })
}

/// # Safety
/// `m` must come from this library and not be freed yet, or be null.
#[no_mangle]
pub unsafe extern "C" fn absgrid_mapping_free(m: *mut AbsgridMapping) {
    if !m.is_null() {
        drop(unsafe { Box::from_raw(m) });
    }
}

/// Number of leaf regions.
///
/// # Safety
/// `m` must be a live mapping handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn absgrid_mapping_leaf_count(m: *const AbsgridMapping, out: *mut usize) -> AbsgridStatus {
    guard(|| unsafe { put(out, handle(m)?.0.leaves().len()) })
}

/// Cost of the mapping; `per_level_count` selects the alternative
/// denominator.
///
/// # Safety
/// `m` must be a live mapping handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn absgrid_mapping_cost(m: *const AbsgridMapping, per_level_count: bool, out: *mut f64) -> AbsgridStatus {
    let d = if per_level_count {
        CostDenominator::PerLevelCount
    } else {
        CostDenominator::Literal
    };
    guard(|| unsafe { put(out, handle(m)?.0.cost(d)) })
}

/// Splits the leaf containing cell `(x, y)` into a new mapping.
///
/// # Safety
/// `m` must be a live mapping handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn absgrid_mapping_split_at(
    m: *const AbsgridMapping,
    x: u32,
    y: u32,
    out: *mut *mut AbsgridMapping,
) -> AbsgridStatus {
    guard(|| {
        let g = &unsafe { handle(m) }?.0;
        let leaf = *g
            .leaf_at(x, y)
            .ok_or_else(|| (AbsgridStatus::Grid, format!("cell ({x}, {y}) is outside the grid")))?;
        let split = g.split(&leaf).map_err(lib)?;
        unsafe { put(out, Box::into_raw(Box::new(AbsgridMapping(split)))) }
    })
}

/// Text form of the mapping; free with [`absgrid_string_free`].
///
/// # Safety
/// `m` must be a live mapping handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn absgrid_mapping_to_string(m: *const AbsgridMapping, out: *mut *mut c_char) -> AbsgridStatus {
    guard(|| unsafe { put(out, c_string(handle(m)?.0.to_string())) })
}

/// Reads an instance file produced by the generator.
///
/// # Safety
/// `text` must be a NUL-terminated string and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn absgrid_instance_parse(text: *const c_char, out: *mut *mut AbsgridInstance) -> AbsgridStatus {
    guard(|| {
        let spec = InstanceSpec::from_lp(unsafe { read_str(text) }?).map_err(lib)?;
        unsafe { put(out, Box::into_raw(Box::new(AbsgridInstance(spec)))) }
    })
}

/// Generates an instance of `problem` (`reachability`, `sudoku`,
/// `knights_tour`, `visitall_plan`, `visitall_kt` or a short alias).
/// With `certify`, only oracle-proven unsatisfiable instances are returned.
///
/// # Safety
/// `problem` must be a NUL-terminated string and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn absgrid_instance_generate(
    problem: *const c_char,
    n: u32,
    seed: u64,
    certify: bool,
    out: *mut *mut AbsgridInstance,
) -> AbsgridStatus {
    guard(|| {
        let p: Problem = unsafe { read_str(problem) }?.parse().map_err(lib)?;
        let spec = generate_instance(p, n, seed, certify).map_err(lib)?;
        unsafe { put(out, Box::into_raw(Box::new(AbsgridInstance(spec)))) }
    })
}

/// # Safety
/// `i` must come from this library and not be freed yet, or be null.
#[no_mangle]
pub unsafe extern "C" fn absgrid_instance_free(i: *mut AbsgridInstance) {
    if !i.is_null() {
        drop(unsafe { Box::from_raw(i) });
    }
}

/// The instance as a facts file; free with [`absgrid_string_free`].
///
/// # Safety
/// `i` must be a live instance handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn absgrid_instance_to_lp(i: *const AbsgridInstance, out: *mut *mut c_char) -> AbsgridStatus {
    guard(|| unsafe { put(out, c_string(handle(i)?.0.to_lp())) })
}

/// Draws `m` over `i`, as SVG when `svg` is set and ASCII otherwise.
///
/// # Safety
/// `m` and `i` must be live handles and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn absgrid_render(
    m: *const AbsgridMapping,
    i: *const AbsgridInstance,
    svg: bool,
    out: *mut *mut c_char,
) -> AbsgridStatus {
    guard(|| {
        let format = if svg { RenderFormat::Svg } else { RenderFormat::Ascii };
        let text = render(&unsafe { handle(m) }?.0, &unsafe { handle(i) }?.0, format).map_err(lib)?;
        unsafe { put(out, c_string(text)) }
    })
}

/// Runs abstraction refinement on `i` from its initial mapping with the
/// named strategy (`default`, `two-phase`, `time-inc`, `grid-inc`) and
/// default options otherwise. `timeout_ms = 0` means no global timeout;
/// when it hits, the outcome is still written and `TIMEOUT` returned.
///
/// # Safety
/// `i` must be a live instance handle, `strategy` a NUL-terminated string
/// and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn absgrid_refine(
    i: *const AbsgridInstance,
    strategy: *const c_char,
    timeout_ms: u64,
    out: *mut *mut AbsgridOutcome,
) -> AbsgridStatus {
    let mut timed_out = false;
    let status = guard(|| {
        let spec = &unsafe { handle(i) }?.0;
        let name = unsafe { read_str(strategy) }?;
        let kind = StrategyKind::ALL
            .into_iter()
            .find(|k| k.name() == name)
            .ok_or_else(|| (AbsgridStatus::Parse, format!("unknown strategy `{name}`")))?;
        let mut opts = CegarOptions::default();
        opts.strategy.kind = kind;
        opts.seed = spec.seed;
        if timeout_ms > 0 {
            opts.global_timeout = Some(std::time::Duration::from_millis(timeout_ms));
        }
        let task = CegarTask::from_instance(spec).map_err(lib)?;
        let m0 = task.initial_mapping().map_err(lib)?;
        let outcome = run_loop(&task, m0.clone(), &opts).map_err(lib)?;
        let report = RunReport::new(spec, None, &opts, &m0, &outcome).to_json();
        timed_out = outcome.status == Status::Unknown && timeout_ms > 0;
        unsafe { put(out, Box::into_raw(Box::new(AbsgridOutcome { outcome, report }))) }
    });
    if status == AbsgridStatus::Ok && timed_out {
        set_error("global timeout".into());
        return AbsgridStatus::Timeout;
    }
    status
}

/// # Safety
/// `o` must come from this library and not be freed yet, or be null.
#[no_mangle]
pub unsafe extern "C" fn absgrid_outcome_free(o: *mut AbsgridOutcome) {
    if !o.is_null() {
        drop(unsafe { Box::from_raw(o) });
    }
}

/// # Safety
/// `o` must be a live outcome handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn absgrid_outcome_status(o: *const AbsgridOutcome, out: *mut AbsgridRunStatus) -> AbsgridStatus {
    guard(|| {
        let s = match unsafe { handle(o) }?.outcome.status {
            Status::Concrete => AbsgridRunStatus::Concrete,
            Status::AbstractUnsat => AbsgridRunStatus::AbstractUnsat,
            Status::Unknown => AbsgridRunStatus::Unknown,
        };
        unsafe { put(out, s) }
    })
}

/// Refinement steps taken.
///
/// # Safety
/// `o` must be a live outcome handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn absgrid_outcome_steps(o: *const AbsgridOutcome, out: *mut usize) -> AbsgridStatus {
    guard(|| unsafe { put(out, handle(o)?.outcome.steps) })
}

/// Cost of the final mapping.
///
/// # Safety
/// `o` must be a live outcome handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn absgrid_outcome_cost(o: *const AbsgridOutcome, out: *mut f64) -> AbsgridStatus {
    guard(|| unsafe { put(out, handle(o)?.outcome.cost) })
}

/// A copy of the final mapping.
///
/// # Safety
/// `o` must be a live outcome handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn absgrid_outcome_final_mapping(o: *const AbsgridOutcome, out: *mut *mut AbsgridMapping) -> AbsgridStatus {
    guard(|| {
        let m = unsafe { handle(o) }?.outcome.final_mapping.clone();
        unsafe { put(out, Box::into_raw(Box::new(AbsgridMapping(m)))) }
    })
}

/// The run report as JSON; free with [`absgrid_string_free`].
///
/// # Safety
/// `o` must be a live outcome handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn absgrid_outcome_report_json(o: *const AbsgridOutcome, out: *mut *mut c_char) -> AbsgridStatus {
    guard(|| unsafe { put(out, c_string(handle(o)?.report.clone())) })
}
