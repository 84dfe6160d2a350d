//! C ABI over the batched-bandits core.
//!
//! Every fallible call returns a [`BbStatus`]; on failure the message is kept
//! per thread and can be read with [`bb_last_error`]. Handles are opaque and
//! must be released with the matching `*_free`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use batched_bandits::bounds::{kl_divergence, static_lb_value, tv_distance};
use batched_bandits::grids::{make_grid, validate_grid, Grid, GridFamily};
use batched_bandits::instance::BanditInstance;
use batched_bandits::policies::{PolicyKind, PolicySpec};
use batched_bandits::simulator::{mean_regret, Execution};
use batched_bandits::Error;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BbStatus {
    Ok = 0,
    NullPointer,
    InvalidArgument,
    InfeasibleGrid,
    InvalidGrid,
    DegenerateInstance,
    Constraint,
    Domain,
    Unsupported,
    Internal,
    BufferTooSmall,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BbGridFamily {
    Minimax = 0,
    Geometric,
    Arithmetic,
    Sequential,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BbPolicy {
    Base = 0,
    Ucb1,
    Etc,
    Uniform,
}

/// Opaque batch grid.
pub struct BbGrid {
    inner: Grid,
}

/// Opaque Gaussian bandit instance.
pub struct BbInstance {
    inner: BanditInstance,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(err: &Error) -> BbStatus {
    match err {
        Error::InvalidTrace(_) | Error::Config(_) => BbStatus::InvalidArgument,
        Error::DegenerateInstance(_) => BbStatus::DegenerateInstance,
        Error::Constraint(_) => BbStatus::Constraint,
        Error::InfeasibleGrid(_) => BbStatus::InfeasibleGrid,
        Error::InvalidGrid { .. } => BbStatus::InvalidGrid,
        Error::Unsupported(_) => BbStatus::Unsupported,
        Error::Domain(_) => BbStatus::Domain,
        _ => BbStatus::Internal,
    }
}

/// Runs `f`, turning errors and panics into a status plus a stored message.
fn guard(f: impl FnOnce() -> Result<(), (BbStatus, String)>) -> BbStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => BbStatus::Ok,
        Ok(Err((status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("panic inside batched-bandits".into());
            BbStatus::Internal
        }
    }
}

fn core<T>(r: batched_bandits::Result<T>) -> Result<T, (BbStatus, String)> {
    r.map_err(|e| (status_of(&e), e.to_string()))
}

fn null(what: &str) -> (BbStatus, String) {
    (BbStatus::NullPointer, format!("{what} is null"))
}

fn invalid(msg: impl Into<String>) -> (BbStatus, String) {
    (BbStatus::InvalidArgument, msg.into())
}

unsafe fn slice<'a, T>(p: *const T, len: usize, what: &str) -> Result<&'a [T], (BbStatus, String)> {
    if len == 0 {
        return Ok(&[]);
    }
    if p.is_null() {
        return Err(null(what));
    }
    Ok(std::slice::from_raw_parts(p, len))
}

unsafe fn deref<'a, T>(p: *const T, what: &str) -> Result<&'a T, (BbStatus, String)> {
    p.as_ref().ok_or_else(|| null(what))
}

unsafe fn write<T>(out: *mut T, value: T, what: &str) -> Result<(), (BbStatus, String)> {
    if out.is_null() {
        return Err(null(what));
    }
    out.write(value);
    Ok(())
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn bb_version() -> *const c_char {
    static VERSION: &CStr = match CStr::from_bytes_with_nul(concat!(env!("CARGO_PKG_VERSION"), "\0").as_bytes()) {
        Ok(v) => v,
        Err(_) => panic!("version string"),
    };
    VERSION.as_ptr()
}

/// Message for the most recent failure on this thread, or NULL if none.
/// The pointer stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn bb_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

#[no_mangle]
pub extern "C" fn bb_clear_error() {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
}

/// Builds a grid of the given family.
///
/// # Safety
/// `out` must be a valid pointer to writable storage for one handle.
#[no_mangle]
pub unsafe extern "C" fn bb_grid_new(
    family: BbGridFamily,
    horizon: u64,
    batches: usize,
    arms: usize,
    out: *mut *mut BbGrid,
) -> BbStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let family = match family {
            BbGridFamily::Minimax => GridFamily::Minimax,
            BbGridFamily::Geometric => GridFamily::Geometric,
            BbGridFamily::Arithmetic => GridFamily::Arithmetic,
            BbGridFamily::Sequential => GridFamily::Sequential,
        };
        let inner = core(make_grid(family, horizon, batches, arms))?;
        write(out, Box::into_raw(Box::new(BbGrid { inner })), "out")
    })
}

/// Validates an explicit list of batch endpoints.
///
/// # Safety
/// `times` must point to `len` readable values; `out` as in [`bb_grid_new`].
#[no_mangle]
pub unsafe extern "C" fn bb_grid_from_times(
    times: *const u64,
    len: usize,
    horizon: u64,
    arms: usize,
    out: *mut *mut BbGrid,
) -> BbStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let times = slice(times, len, "times")?;
        let inner = core(validate_grid(times, horizon, arms))?;
        write(out, Box::into_raw(Box::new(BbGrid { inner })), "out")
    })
}

/// Number of batches, or 0 for a NULL handle.
///
/// # Safety
/// `grid` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn bb_grid_len(grid: *const BbGrid) -> usize {
    grid.as_ref().map_or(0, |g| g.inner.num_batches())
}

/// Copies the endpoints into `buf`. `written` receives the number of
/// endpoints even when `cap` is too small.
///
/// # Safety
/// `grid` must be a live handle, `buf` writable for `cap` values, `written` writable.
#[no_mangle]
pub unsafe extern "C" fn bb_grid_times(
    grid: *const BbGrid,
    buf: *mut u64,
    cap: usize,
    written: *mut usize,
) -> BbStatus {
    guard(|| {
        let times = deref(grid, "grid")?.inner.times();
        write(written, times.len(), "written")?;
        if cap < times.len() {
            return Err((
                BbStatus::BufferTooSmall,
                format!("buffer holds {cap} endpoints, grid has {}", times.len()),
            ));
        }
        if buf.is_null() {
            return Err(null("buf"));
        }
        ptr::copy_nonoverlapping(times.as_ptr(), buf, times.len());
        Ok(())
    })
}

/// # Safety
/// `grid` must be NULL or a handle from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn bb_grid_free(grid: *mut BbGrid) {
    if !grid.is_null() {
        drop(Box::from_raw(grid));
    }
}

/// Instance with unit-variance Gaussian arms of the given means.
///
/// # Safety
/// `means` must point to `len` readable values; `out` writable for one handle.
#[no_mangle]
pub unsafe extern "C" fn bb_instance_new(means: *const f64, len: usize, out: *mut *mut BbInstance) -> BbStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let means = slice(means, len, "means")?.to_vec();
        let inner = core(BanditInstance::new(means))?;
        write(out, Box::into_raw(Box::new(BbInstance { inner })), "out")
    })
}

/// # Safety
/// `instance` must be NULL or a handle from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn bb_instance_free(instance: *mut BbInstance) {
    if !instance.is_null() {
        drop(Box::from_raw(instance));
    }
}

/// Monte-Carlo expected regret over `reps` replications. Deterministic in `seed`.
///
/// # Safety
/// Handles must be live; `mean` and `stderr` writable.
#[no_mangle]
pub unsafe extern "C" fn bb_mean_regret(
    policy: BbPolicy,
    gamma: f64,
    grid: *const BbGrid,
    instance: *const BbInstance,
    reps: usize,
    seed: u64,
    mean: *mut f64,
    stderr: *mut f64,
) -> BbStatus {
    guard(|| {
        let grid = &deref(grid, "grid")?.inner;
        let instance = &deref(instance, "instance")?.inner;
        if mean.is_null() || stderr.is_null() {
            return Err(null("output"));
        }
        let kind = match policy {
            BbPolicy::Base => PolicyKind::Base,
            BbPolicy::Ucb1 => PolicyKind::Ucb1,
            BbPolicy::Etc => PolicyKind::Etc,
            BbPolicy::Uniform => PolicyKind::Uniform,
        };
        if !gamma.is_finite() || gamma <= 0.0 {
            return Err(invalid(format!("gamma must be positive and finite, got {gamma}")));
        }
        let est = core(mean_regret(
            &PolicySpec::new(kind, gamma),
            grid,
            instance,
            reps,
            seed,
            Execution::Parallel,
        ))?;
        write(mean, est.mean, "mean")?;
        write(stderr, est.stderr, "stderr")
    })
}

/// Static-grid minimax lower bound at gap `delta`.
///
/// # Safety
/// `grid` must be live and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn bb_static_lb(grid: *const BbGrid, delta: f64, arms: usize, out: *mut f64) -> BbStatus {
    guard(|| {
        let grid = &deref(grid, "grid")?.inner;
        let v = core(static_lb_value(grid, delta, arms))?;
        write(out, v, "out")
    })
}

/// Total-variation distance between two distributions on `len` points.
///
/// # Safety
/// `p` and `q` must point to `len` readable values; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn bb_tv_distance(p: *const f64, q: *const f64, len: usize, out: *mut f64) -> BbStatus {
    guard(|| {
        let v = core(tv_distance(slice(p, len, "p")?, slice(q, len, "q")?))?;
        write(out, v, "out")
    })
}

/// KL(p‖q); `+inf` when `q` misses mass of `p`.
///
/// # Safety
/// As for [`bb_tv_distance`].
#[no_mangle]
pub unsafe extern "C" fn bb_kl_divergence(p: *const f64, q: *const f64, len: usize, out: *mut f64) -> BbStatus {
    guard(|| {
        let v = core(kl_divergence(slice(p, len, "p")?, slice(q, len, "q")?))?;
        write(out, v, "out")
    })
}
