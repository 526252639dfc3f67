//! C ABI for qnoise.
//!
//! States are opaque `QnState` handles owned by the caller and released with
//! `qn_state_free`. Every fallible call returns a `QnStatus`; on failure the
//! message is available from `qn_last_error_message` on the same thread.
//! Panics never cross the boundary.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use qnoise::{ChannelFamily, ComplexMatrix, DensityMatrix, Error, GdConvention};

/// Status codes returned by every fallible function.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QnStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    InvalidState = 3,
    Numerical = 4,
    BufferTooSmall = 5,
    Panic = 6,
}

/// Channel families accepted by `qn_evolve`.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QnChannel {
    Dephasing = 0,
    TritFlip = 1,
    TritPhaseFlip = 2,
    Depolarizing = 3,
}

/// GD prefactor convention.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QnGdConvention {
    Paper = 0,
    Raw = 1,
}

/// Opaque bipartite density matrix.
pub struct QnState {
    inner: DensityMatrix,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(msg).ok());
}

fn status_of(err: &Error) -> QnStatus {
    match err {
        Error::InvalidDimension { .. } | Error::Domain(_) | Error::DimensionMismatch { .. } | Error::Config { .. } => {
            QnStatus::InvalidArgument
        }
        Error::NotHermitian { .. } | Error::InvalidState(_) | Error::IncompleteKraus(_) => QnStatus::InvalidState,
        Error::Numerical { .. } => QnStatus::Numerical,
    }
}

fn fail(status: QnStatus, msg: impl Into<String>) -> QnStatus {
    set_error(msg);
    status
}

/// Runs `f`, translating errors and panics into status codes.
fn guard(f: impl FnOnce() -> Result<(), QnStatus>) -> QnStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            LAST_ERROR.with(|e| *e.borrow_mut() = None);
            QnStatus::Ok
        }
        Ok(Err(s)) => s,
        Err(_) => fail(QnStatus::Panic, "internal panic"),
    }
}

fn lift<T>(r: qnoise::Result<T>) -> Result<T, QnStatus> {
    r.map_err(|e| fail(status_of(&e), e.to_string()))
}

unsafe fn state_ref<'a>(p: *const QnState) -> Result<&'a QnState, QnStatus> {
    p.as_ref().ok_or_else(|| fail(QnStatus::NullPointer, "null state handle"))
}

unsafe fn out_ref<'a, T>(p: *mut T) -> Result<&'a mut T, QnStatus> {
    p.as_mut().ok_or_else(|| fail(QnStatus::NullPointer, "null output pointer"))
}

fn family(c: QnChannel) -> ChannelFamily {
    match c {
        QnChannel::Dephasing => ChannelFamily::Dephasing,
        QnChannel::TritFlip => ChannelFamily::TritFlip,
        QnChannel::TritPhaseFlip => ChannelFamily::TritPhaseFlip,
        QnChannel::Depolarizing => ChannelFamily::Depolarizing,
    }
}

fn convention(c: QnGdConvention) -> GdConvention {
    match c {
        QnGdConvention::Paper => GdConvention::PAPER,
        QnGdConvention::Raw => GdConvention::RAW,
    }
}

fn boxed(out: &mut *mut QnState, inner: DensityMatrix) {
    *out = Box::into_raw(Box::new(QnState { inner }));
}

/// Maximally entangled state of two `d`-level systems.
///
/// # Safety
/// `out` must be a valid pointer to writable storage for a handle.
#[no_mangle]
pub unsafe extern "C" fn qn_bell_state(d: usize, out: *mut *mut QnState) -> QnStatus {
    guard(|| {
        let out = out_ref(out)?;
        boxed(out, lift(qnoise::make_bell_state(d))?);
        Ok(())
    })
}

/// Builds a validated state from row-major real and imaginary parts of
/// length `(d1*d2)^2`. `im` may be null for a real matrix.
///
/// # Safety
/// `re` (and `im` when non-null) must point to `(d1*d2)^2` readable doubles.
#[no_mangle]
pub unsafe extern "C" fn qn_state_from_parts(
    d1: usize,
    d2: usize,
    re: *const f64,
    im: *const f64,
    out: *mut *mut QnState,
) -> QnStatus {
    guard(|| {
        let out = out_ref(out)?;
        if re.is_null() {
            return Err(fail(QnStatus::NullPointer, "null real-part buffer"));
        }
        let n = d1.checked_mul(d2).filter(|&n| n > 0 && n <= 1 << 12);
        let n = n.ok_or_else(|| fail(QnStatus::InvalidArgument, format!("bad dimensions {d1}x{d2}")))?;
        let re = std::slice::from_raw_parts(re, n * n);
        let im = if im.is_null() { None } else { Some(std::slice::from_raw_parts(im, n * n)) };
        let m = ComplexMatrix::from_fn(n, n, |i, j| {
            let k = i * n + j;
            qnoise::linalg::c64(re[k], im.map_or(0.0, |v| v[k]))
        });
        boxed(out, lift(DensityMatrix::new(m, (d1, d2)))?);
        Ok(())
    })
}

/// Releases a handle. Null is ignored.
///
/// # Safety
/// `state` must be null or a handle from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn qn_state_free(state: *mut QnState) {
    if !state.is_null() {
        drop(Box::from_raw(state));
    }
}

/// Subsystem dimensions of a state.
///
/// # Safety
/// All pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn qn_state_dims(state: *const QnState, d1: *mut usize, d2: *mut usize) -> QnStatus {
    guard(|| {
        let s = state_ref(state)?;
        let (a, b) = s.inner.dims();
        *out_ref(d1)? = a;
        *out_ref(d2)? = b;
        Ok(())
    })
}

/// Copies the matrix into row-major `re`/`im` buffers of length `len`,
/// which must be at least `(d1*d2)^2`.
///
/// # Safety
/// `re` and `im` must point to `len` writable doubles each.
#[no_mangle]
pub unsafe extern "C" fn qn_state_entries(state: *const QnState, re: *mut f64, im: *mut f64, len: usize) -> QnStatus {
    guard(|| {
        let s = state_ref(state)?;
        if re.is_null() || im.is_null() {
            return Err(fail(QnStatus::NullPointer, "null output buffer"));
        }
        let m = s.inner.matrix();
        let n = m.nrows();
        if len < n * n {
            return Err(fail(QnStatus::BufferTooSmall, format!("need {} entries, got {len}", n * n)));
        }
        let re = std::slice::from_raw_parts_mut(re, n * n);
        let im = std::slice::from_raw_parts_mut(im, n * n);
        for i in 0..n {
            for j in 0..n {
                re[i * n + j] = m[(i, j)].re;
                im[i * n + j] = m[(i, j)].im;
            }
        }
        Ok(())
    })
}

/// Applies local channels for time `t` with rates `q_a` and `q_b`.
/// Both subsystems must be qutrits.
///
/// # Safety
/// `state` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn qn_evolve(
    state: *const QnState,
    channel_a: QnChannel,
    channel_b: QnChannel,
    q_a: f64,
    q_b: f64,
    t: f64,
    out: *mut *mut QnState,
) -> QnStatus {
    guard(|| {
        let s = state_ref(state)?;
        let out = out_ref(out)?;
        let rho = lift(qnoise::evolve(&s.inner, family(channel_a), family(channel_b), q_a, q_b, t))?;
        boxed(out, rho);
        Ok(())
    })
}

/// # Safety
/// `state` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn qn_negativity(state: *const QnState, out: *mut f64) -> QnStatus {
    guard(|| {
        let s = state_ref(state)?;
        *out_ref(out)? = qnoise::negativity(&s.inner);
        Ok(())
    })
}

/// Closed-form lower bound on geometric discord, clamped at zero.
///
/// # Safety
/// `state` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn qn_gd_lower_bound(state: *const QnState, conv: QnGdConvention, out: *mut f64) -> QnStatus {
    guard(|| {
        let s = state_ref(state)?;
        *out_ref(out)? = lift(qnoise::gd_lower_bound(&s.inner, convention(conv)))?;
        Ok(())
    })
}

/// Exact geometric discord (unscaled distance) by multi-start search.
///
/// # Safety
/// `state` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn qn_gd_exact(state: *const QnState, restarts: usize, seed: u64, out: *mut f64) -> QnStatus {
    guard(|| {
        let s = state_ref(state)?;
        *out_ref(out)? = lift(qnoise::oracle::gd_exact(&s.inner, restarts, seed))?.value;
        Ok(())
    })
}

/// Message for the last failed call on this thread, or null. The pointer is
/// valid until the next call into this library on the same thread.
#[no_mangle]
pub extern "C" fn qn_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn qn_version() -> *const c_char {
    static V: &CStr = match CStr::from_bytes_with_nul(concat!(env!("CARGO_PKG_VERSION"), "\0").as_bytes()) {
        Ok(s) => s,
        Err(_) => panic!("version string"),
    };
    V.as_ptr()
}
