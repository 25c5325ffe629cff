//! C ABI for `mpqw`.
//!
//! Objects are opaque handles created by `*_new` functions and released with
//! the matching `*_free`. Every fallible function returns an [`MpqwStatus`];
//! on failure [`mpqw_last_error_message`] describes the most recent error on
//! the calling thread. Output buffers are caller-allocated.

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use mpqw::circuit::{self, Circuit};
use mpqw::fixedpoint::{self, RobustSchedule};
use mpqw::subspace::{self, InitialMode};
use mpqw::{Error, GraphConfig, MarkedSets};

/// Result codes.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MpqwStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    DomainError = 3,
    BufferTooSmall = 4,
    Panic = 5,
}

/// Graph size and marking layout.
pub struct MpqwConfig {
    inner: GraphConfig,
}

/// Fixed-point phase schedule.
pub struct MpqwSchedule {
    inner: RobustSchedule,
}

/// Compiled walk step.
pub struct MpqwCircuit {
    inner: Circuit,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

struct Failure {
    status: MpqwStatus,
    message: String,
}

impl Failure {
    fn new(status: MpqwStatus, message: impl Into<String>) -> Self {
        Failure {
            status,
            message: message.into(),
        }
    }

    fn null(what: &str) -> Self {
        Failure::new(MpqwStatus::NullPointer, format!("{what} is null"))
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let status = match e {
            Error::InvalidConfig(_)
            | Error::VertexOutOfRange { .. }
            | Error::NotAdjacent
            | Error::CaseMismatch
            | Error::DimensionMismatch { .. }
            | Error::MalformedSchedule { .. }
            | Error::Parse { .. } => MpqwStatus::InvalidArgument,
            Error::NoMarkedVertices
            | Error::Domain(_)
            | Error::TooLarge { .. }
            | Error::NotPowerOfTwo { .. } => MpqwStatus::DomainError,
        };
        Failure::new(status, e.to_string())
    }
}

fn set_last_error(message: &str) {
    let c = CString::new(message.replace('\0', " ")).expect("interior NULs removed");
    LAST_ERROR.with(|slot| *slot.borrow_mut() = Some(c));
}

fn guard(f: impl FnOnce() -> Result<(), Failure>) -> MpqwStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => MpqwStatus::Ok,
        Ok(Err(failure)) => {
            set_last_error(&failure.message);
            failure.status
        }
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".to_string());
            set_last_error(&format!("panic: {msg}"));
            MpqwStatus::Panic
        }
    }
}

unsafe fn deref<'a, T>(p: *const T, what: &str) -> Result<&'a T, Failure> {
    p.as_ref().ok_or_else(|| Failure::null(what))
}

unsafe fn out_slice<'a>(
    buf: *mut f64,
    len: usize,
    needed: usize,
) -> Result<&'a mut [f64], Failure> {
    if len < needed {
        return Err(Failure::new(
            MpqwStatus::BufferTooSmall,
            format!("buffer holds {len} values, {needed} needed"),
        ));
    }
    if buf.is_null() {
        return Err(Failure::null("output buffer"));
    }
    Ok(std::slice::from_raw_parts_mut(buf, needed))
}

unsafe fn write_out<T>(out: *mut T, value: T) -> Result<(), Failure> {
    if out.is_null() {
        return Err(Failure::null("output pointer"));
    }
    out.write(value);
    Ok(())
}

/// Message for the most recent failed call on this thread, or NULL.
/// The pointer stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn mpqw_last_error_message() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Creates a graph configuration. `case_tag` is 1 (marks in every set) or
/// 2 (marks in set 0 only).
///
/// # Safety
/// `out` must be a valid pointer to writable storage for one handle.
#[no_mangle]
pub unsafe extern "C" fn mpqw_config_new(
    sets: usize,
    set_size: usize,
    marked: usize,
    case_tag: u8,
    out: *mut *mut MpqwConfig,
) -> MpqwStatus {
    guard(|| {
        let case = MarkedSets::from_tag(case_tag)?;
        let inner = GraphConfig::new(sets, set_size, marked, case)?;
        write_out(out, Box::into_raw(Box::new(MpqwConfig { inner })))
    })
}

/// # Safety
/// `config` must be NULL or a handle from [`mpqw_config_new`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn mpqw_config_free(config: *mut MpqwConfig) {
    if !config.is_null() {
        drop(Box::from_raw(config));
    }
}

/// Creates the schedule for tolerance `epsilon` in (0, 1] and `t >= 1` pairs.
///
/// # Safety
/// `out` must be a valid pointer to writable storage for one handle.
#[no_mangle]
pub unsafe extern "C" fn mpqw_schedule_new(
    epsilon: f64,
    t: usize,
    out: *mut *mut MpqwSchedule,
) -> MpqwStatus {
    guard(|| {
        let inner = RobustSchedule::generate(epsilon, t)?;
        write_out(out, Box::into_raw(Box::new(MpqwSchedule { inner })))
    })
}

/// # Safety
/// `schedule` must be NULL or a handle from [`mpqw_schedule_new`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn mpqw_schedule_free(schedule: *mut MpqwSchedule) {
    if !schedule.is_null() {
        drop(Box::from_raw(schedule));
    }
}

/// Number of step pairs `t`; the schedule has `t` alphas and `t + 1` betas.
///
/// # Safety
/// `schedule` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn mpqw_schedule_len(
    schedule: *const MpqwSchedule,
    out: *mut usize,
) -> MpqwStatus {
    guard(|| write_out(out, deref(schedule, "schedule")?.inner.t()))
}

/// # Safety
/// `schedule` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn mpqw_schedule_gamma(
    schedule: *const MpqwSchedule,
    out: *mut f64,
) -> MpqwStatus {
    guard(|| write_out(out, deref(schedule, "schedule")?.inner.gamma()))
}

/// Copies the `t` coin phases into `buf`.
///
/// # Safety
/// `schedule` must be a live handle; `buf` must hold `len` doubles.
#[no_mangle]
pub unsafe extern "C" fn mpqw_schedule_alphas(
    schedule: *const MpqwSchedule,
    buf: *mut f64,
    len: usize,
) -> MpqwStatus {
    guard(|| {
        let alphas = deref(schedule, "schedule")?.inner.alphas();
        out_slice(buf, len, alphas.len())?.copy_from_slice(alphas);
        Ok(())
    })
}

/// Copies the `t + 1` query phases into `buf`.
///
/// # Safety
/// `schedule` must be a live handle; `buf` must hold `len` doubles.
#[no_mangle]
pub unsafe extern "C" fn mpqw_schedule_betas(
    schedule: *const MpqwSchedule,
    buf: *mut f64,
    len: usize,
) -> MpqwStatus {
    guard(|| {
        let betas = deref(schedule, "schedule")?.inner.betas();
        out_slice(buf, len, betas.len())?.copy_from_slice(betas);
        Ok(())
    })
}

/// Smallest guaranteed pair count with marks in every set.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn mpqw_min_steps_case1(
    epsilon: f64,
    set_size: usize,
    out: *mut usize,
) -> MpqwStatus {
    guard(|| write_out(out, fixedpoint::min_steps_case1(epsilon, set_size)?))
}

/// Smallest guaranteed pair count with marks in one set.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn mpqw_min_steps_case2(
    epsilon: f64,
    sets: usize,
    set_size: usize,
    out: *mut usize,
) -> MpqwStatus {
    guard(|| write_out(out, fixedpoint::min_steps_case2(epsilon, sets, set_size)?))
}

/// Success probability after each of `0..=steps` walk steps with fixed
/// phases, from the uniform arc state. `probs` must hold `steps + 1` values.
///
/// # Safety
/// `config` must be a live handle; `probs` must hold `probs_len` doubles.
#[no_mangle]
pub unsafe extern "C" fn mpqw_simulate_plain(
    config: *const MpqwConfig,
    alpha: f64,
    beta: f64,
    steps: usize,
    probs: *mut f64,
    probs_len: usize,
) -> MpqwStatus {
    guard(|| {
        let cfg = &deref(config, "config")?.inner;
        let needed = steps
            .checked_add(1)
            .ok_or_else(|| Failure::new(MpqwStatus::InvalidArgument, "step count overflows"))?;
        let out = out_slice(probs, probs_len, needed)?;
        let op = subspace::operator(cfg, alpha, beta)?;
        let start = subspace::initial_state(cfg, InitialMode::Exact)?;
        for (slot, state) in out.iter_mut().zip(subspace::evolve(&start, &op, steps)?) {
            *slot = state.success();
        }
        Ok(())
    })
}

/// Success probability after each of the `2t + 1` prefixes of the robust
/// walk. `probs` must hold `2t + 1` values.
///
/// # Safety
/// `config` and `schedule` must be live handles; `probs` must hold
/// `probs_len` doubles.
#[no_mangle]
pub unsafe extern "C" fn mpqw_simulate_robust(
    config: *const MpqwConfig,
    schedule: *const MpqwSchedule,
    probs: *mut f64,
    probs_len: usize,
) -> MpqwStatus {
    guard(|| {
        let cfg = &deref(config, "config")?.inner;
        let sched = &deref(schedule, "schedule")?.inner;
        let out = out_slice(probs, probs_len, sched.total_steps() + 1)?;
        for (slot, state) in out.iter_mut().zip(subspace::evolve_robust(cfg, sched)?) {
            *slot = state.success();
        }
        Ok(())
    })
}

/// Compiles one walk step. Requires `M - 1` and `N` to be powers of two.
///
/// # Safety
/// `config` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn mpqw_circuit_build_step(
    config: *const MpqwConfig,
    alpha: f64,
    beta: f64,
    out: *mut *mut MpqwCircuit,
) -> MpqwStatus {
    guard(|| {
        let cfg = &deref(config, "config")?.inner;
        let inner = circuit::build_step(cfg, alpha, beta)?;
        write_out(out, Box::into_raw(Box::new(MpqwCircuit { inner })))
    })
}

/// # Safety
/// `circuit` must be NULL or a handle from [`mpqw_circuit_build_step`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn mpqw_circuit_free(circuit: *mut MpqwCircuit) {
    if !circuit.is_null() {
        drop(Box::from_raw(circuit));
    }
}

/// Number of gates in the circuit.
///
/// # Safety
/// `circuit` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn mpqw_circuit_gate_count(
    circuit: *const MpqwCircuit,
    out: *mut usize,
) -> MpqwStatus {
    guard(|| write_out(out, deref(circuit, "circuit")?.inner.gates().len()))
}

/// Writes the circuit text plus a terminating NUL into `buf`.
/// `written` receives the text length without the NUL. If `len` is too
/// small (or `buf` is NULL) nothing is copied, `written` still receives the
/// length and the call returns `BufferTooSmall`.
///
/// # Safety
/// `circuit` must be a live handle, `written` writable, and `buf` NULL or
/// valid for `len` bytes.
#[no_mangle]
pub unsafe extern "C" fn mpqw_circuit_emit(
    circuit: *const MpqwCircuit,
    buf: *mut c_char,
    len: usize,
    written: *mut usize,
) -> MpqwStatus {
    guard(|| {
        let text = circuit::emit(&deref(circuit, "circuit")?.inner);
        write_out(written, text.len())?;
        if buf.is_null() || len < text.len() + 1 {
            return Err(Failure::new(
                MpqwStatus::BufferTooSmall,
                format!("circuit text needs {} bytes", text.len() + 1),
            ));
        }
        ptr::copy_nonoverlapping(text.as_ptr().cast::<c_char>(), buf, text.len());
        buf.add(text.len()).write(0);
        Ok(())
    })
}
