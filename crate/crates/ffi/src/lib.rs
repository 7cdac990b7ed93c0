//! C interface to `qdirac`.
//!
//! Conventions:
//! * half-integers cross the boundary as twice their value (`3/2` is `3`);
//! * every function returns a [`QdStatus`] and writes results through
//!   out-pointers, which are left untouched on failure;
//! * [`qd_last_error_message`] describes the most recent failure on the
//!   calling thread;
//! * panics are caught and reported as [`QdStatus::Panic`].

use std::cell::RefCell;
use std::ffi::c_char;
use std::panic::{catch_unwind, AssertUnwindSafe};

use qdirac::basis::{BasisVector, Sign};
use qdirac::error::Error;
use qdirac::halfint::HalfInt;
use qdirac::pairing::{build_projector, closed_form_pairing, cm_pairing, dixmier_estimate, fredholm_pairing, hochschild_operator};
use qdirac::rep::alpha_coefficients;
use qdirac::triple::{build_triple, order_one_max, order_one_oracle, sign_table, spectrum, QuasiSpectralTriple};

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum QdStatus {
    Ok = 0,
    NullPointer = 1,
    Domain = 2,
    Validity = 3,
    Structural = 4,
    Calibration = 5,
    Regression = 6,
    BufferTooSmall = 7,
    Panic = 8,
}

/// Operators available through [`qd_dense_window`].
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum QdOperator {
    PiA = 0,
    PiB = 1,
    PiBStar = 2,
    Dirac = 3,
    Gamma = 4,
}

/// Opaque handle to a truncated quasi-spectral triple.
pub struct QdTriple {
    inner: QuasiSpectralTriple,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, Default)]
pub struct QdSignTable {
    pub j_squared: i32,
    pub jd_commute: bool,
    pub jgamma_anticommute: bool,
    pub ko_dimension: i32,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, Default)]
pub struct QdSpectrumLine {
    pub eigenvalue: f64,
    pub multiplicity: usize,
    pub twice_l: i32,
    /// +1 or -1
    pub sign: i32,
}

thread_local! {
    static LAST_ERROR: RefCell<String> = const { RefCell::new(String::new()) };
}

fn set_error(msg: String) {
    LAST_ERROR.with(|e| *e.borrow_mut() = msg);
}

enum Fail {
    Lib(Error),
    Null,
    Small(usize),
}

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail::Lib(e)
    }
}

fn guard(f: impl FnOnce() -> Result<(), Fail>) -> QdStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => QdStatus::Ok,
        Ok(Err(Fail::Null)) => {
            set_error("null pointer argument".into());
            QdStatus::NullPointer
        }
        Ok(Err(Fail::Small(need))) => {
            set_error(format!("output buffer too small; {need} elements needed"));
            QdStatus::BufferTooSmall
        }
        Ok(Err(Fail::Lib(e))) => {
            let status = match e {
                Error::Domain(_) | Error::SpaceMismatch | Error::Io(_) => QdStatus::Domain,
                Error::Validity(_) => QdStatus::Validity,
                Error::Structural(_) => QdStatus::Structural,
                Error::Calibration(_) => QdStatus::Calibration,
                Error::Regression(_) => QdStatus::Regression,
            };
            set_error(e.to_string());
            status
        }
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".into());
            set_error(format!("panic: {msg}"));
            QdStatus::Panic
        }
    }
}

fn triple<'a>(t: *const QdTriple) -> Result<&'a QuasiSpectralTriple, Fail> {
    // SAFETY: callers pass a handle from qd_triple_new that has not been freed.
    unsafe { t.as_ref() }.map(|t| &t.inner).ok_or(Fail::Null)
}

fn write<T>(out: *mut T, value: T) -> Result<(), Fail> {
    if out.is_null() {
        return Err(Fail::Null);
    }
    // SAFETY: non-null and, per the contract, valid for writes.
    unsafe { out.write(value) };
    Ok(())
}

fn h(twice: i32) -> HalfInt {
    HalfInt::from_twice(twice)
}

/// Builds a triple truncated at `lmax`. `d_offset = 0.5` is the standard choice.
///
/// # Safety
/// `out` must be valid for writes. Free the handle with [`qd_triple_free`].
#[no_mangle]
pub unsafe extern "C" fn qd_triple_new(
    twice_n: i32,
    twice_lmax: i32,
    d1: f64,
    d_offset: f64,
    out: *mut *mut QdTriple,
) -> QdStatus {
    guard(|| {
        if out.is_null() {
            return Err(Fail::Null);
        }
        let inner = build_triple(h(twice_n), h(twice_lmax), d1, d_offset)?;
        write(out, Box::into_raw(Box::new(QdTriple { inner })))
    })
}

/// # Safety
/// `t` must come from [`qd_triple_new`] and not have been freed; null is ignored.
#[no_mangle]
pub unsafe extern "C" fn qd_triple_free(t: *mut QdTriple) {
    if !t.is_null() {
        // SAFETY: ownership returns from the caller.
        drop(unsafe { Box::from_raw(t) });
    }
}

/// Copies the last error message of this thread, NUL-terminated and
/// truncated to `len` bytes. Returns the full message length plus one.
///
/// # Safety
/// `buf` must be valid for `len` bytes, or null with `len = 0`.
#[no_mangle]
pub unsafe extern "C" fn qd_last_error_message(buf: *mut c_char, len: usize) -> usize {
    LAST_ERROR.with(|e| {
        let msg = e.borrow();
        let bytes = msg.as_bytes();
        if !buf.is_null() && len > 0 {
            let n = bytes.len().min(len - 1);
            // SAFETY: buf is valid for len bytes and n < len.
            unsafe {
                std::ptr::copy_nonoverlapping(bytes.as_ptr().cast::<c_char>(), buf, n);
                *buf.add(n) = 0;
            }
        }
        bytes.len() + 1
    })
}

/// # Safety
/// `t` is a live handle and `out` is valid for writes.
#[no_mangle]
pub unsafe extern "C" fn qd_triple_dim(t: *const QdTriple, out: *mut usize) -> QdStatus {
    guard(|| write(out, triple(t)?.space.dim()))
}

/// Position of `|l, m, sign⟩` in the basis order; `sign` is +1 or -1.
///
/// # Safety
/// `t` is a live handle and `out` is valid for writes.
#[no_mangle]
pub unsafe extern "C" fn qd_index_of(t: *const QdTriple, twice_l: i32, twice_m: i32, sign: i32, out: *mut usize) -> QdStatus {
    guard(|| {
        let sign = match sign {
            1 => Sign::Plus,
            -1 => Sign::Minus,
            _ => return Err(Error::Domain(format!("sign must be +1 or -1, got {sign}")).into()),
        };
        let idx = triple(t)?.space.index_of(&BasisVector::new(h(twice_l), h(twice_m), sign))?;
        write(out, idx)
    })
}

/// # Safety
/// Out-pointers are valid for writes.
#[no_mangle]
pub unsafe extern "C" fn qd_alpha(twice_n: i32, twice_l: i32, alpha0: *mut f64, alpha_plus: *mut f64) -> QdStatus {
    guard(|| {
        if alpha0.is_null() || alpha_plus.is_null() {
            return Err(Fail::Null);
        }
        let (a0, ap) = alpha_coefficients(h(twice_n), h(twice_l))?;
        write(alpha0, a0)?;
        write(alpha_plus, ap)
    })
}

/// Closed-form order-one matrix elements `(c_BB, c_AB)`.
///
/// # Safety
/// Out-pointers are valid for writes.
#[no_mangle]
pub unsafe extern "C" fn qd_order_one_oracle(
    twice_n: i32,
    d1: f64,
    twice_l: i32,
    twice_m: i32,
    c_bb: *mut f64,
    c_ab: *mut f64,
) -> QdStatus {
    guard(|| {
        if c_bb.is_null() || c_ab.is_null() {
            return Err(Fail::Null);
        }
        let (bb, ab) = order_one_oracle(h(twice_n), d1, h(twice_l), h(twice_m));
        write(c_bb, bb)?;
        write(c_ab, ab)
    })
}

/// # Safety
/// `t` is a live handle and `out` is valid for writes.
#[no_mangle]
pub unsafe extern "C" fn qd_sign_table(t: *const QdTriple, out: *mut QdSignTable) -> QdStatus {
    guard(|| {
        let st = sign_table(triple(t)?)?;
        write(
            out,
            QdSignTable {
                j_squared: i32::from(st.j_squared),
                jd_commute: st.jd_commute,
                jgamma_anticommute: st.jgamma_anticommute,
                ko_dimension: i32::from(st.ko_dimension),
            },
        )
    })
}

/// Writes up to `cap` spectrum lines (ascending eigenvalue) and stores the
/// total count in `len`. Pass `out = NULL, cap = 0` to query the count.
///
/// # Safety
/// `out` is valid for `cap` elements (or null with `cap = 0`); `len` is valid for writes.
#[no_mangle]
pub unsafe extern "C" fn qd_spectrum(t: *const QdTriple, out: *mut QdSpectrumLine, cap: usize, len: *mut usize) -> QdStatus {
    guard(|| {
        let lines = spectrum(triple(t)?)?;
        write(len, lines.len())?;
        if out.is_null() && cap == 0 {
            return Ok(());
        }
        if out.is_null() {
            return Err(Fail::Null);
        }
        if cap < lines.len() {
            return Err(Fail::Small(lines.len()));
        }
        for (i, l) in lines.iter().enumerate() {
            let line = QdSpectrumLine {
                eigenvalue: l.eigenvalue,
                multiplicity: l.multiplicity,
                twice_l: l.l.twice(),
                sign: l.sign.as_f64() as i32,
            };
            // SAFETY: i < lines.len() <= cap.
            unsafe { out.add(i).write(line) };
        }
        Ok(())
    })
}

/// Largest order-one residual over all generator pairs and valid sectors.
///
/// # Safety
/// `t` is a live handle and `out` is valid for writes.
#[no_mangle]
pub unsafe extern "C" fn qd_order_one_max(t: *const QdTriple, out: *mut f64) -> QdStatus {
    guard(|| write(out, order_one_max(triple(t)?)?.max))
}

/// # Safety
/// `t` is a live handle; out-pointers are valid for writes.
#[no_mangle]
pub unsafe extern "C" fn qd_hochschild(t: *const QdTriple, max_residual: *mut f64, eigenvalue: *mut f64) -> QdStatus {
    guard(|| {
        if max_residual.is_null() || eigenvalue.is_null() {
            return Err(Fail::Null);
        }
        let t = triple(t)?;
        let r = hochschild_operator(t, &build_projector(t)?)?;
        write(max_residual, r.max_residual)?;
        write(eigenvalue, r.measured_eigenvalue)
    })
}

/// Fredholm pairing summed over sectors `l ≤ lsum`.
///
/// # Safety
/// `t` is a live handle and `out` is valid for writes.
#[no_mangle]
pub unsafe extern "C" fn qd_fredholm_pairing(t: *const QdTriple, twice_lsum: i32, out: *mut f64) -> QdStatus {
    guard(|| {
        let t = triple(t)?;
        write(out, fredholm_pairing(t, &build_projector(t)?, h(twice_lsum))?.estimate)
    })
}

/// # Safety
/// `t` is a live handle and `out` is valid for writes.
#[no_mangle]
pub unsafe extern "C" fn qd_cm_pairing(t: *const QdTriple, out: *mut f64) -> QdStatus {
    guard(|| {
        let t = triple(t)?;
        write(out, cm_pairing(t, &build_projector(t)?)?.estimate)
    })
}

/// # Safety
/// `out` is valid for writes.
#[no_mangle]
pub unsafe extern "C" fn qd_closed_form_pairing(twice_n: i32, twice_cutoff: i32, out: *mut f64) -> QdStatus {
    guard(|| write(out, closed_form_pairing(h(twice_n), h(twice_cutoff))?.estimate))
}

/// # Safety
/// `t` is a live handle and `out` is valid for writes.
#[no_mangle]
pub unsafe extern "C" fn qd_dixmier_slope(t: *const QdTriple, twice_lo: i32, twice_hi: i32, out: *mut f64) -> QdStatus {
    guard(|| write(out, dixmier_estimate(triple(t)?, (h(twice_lo), h(twice_hi)))?.slope))
}

/// Dense restriction of an operator to sectors `lmin..=lmax`, row-major,
/// real and imaginary parts in separate buffers of `cap` elements each.
/// The side length goes to `n`; with null buffers and `cap = 0` only `n`
/// is written.
///
/// # Safety
/// `re`/`im` are valid for `cap` elements (or null with `cap = 0`); `n` is valid for writes.
#[no_mangle]
pub unsafe extern "C" fn qd_dense_window(
    t: *const QdTriple,
    op: QdOperator,
    twice_lmin: i32,
    twice_lmax: i32,
    re: *mut f64,
    im: *mut f64,
    cap: usize,
    n: *mut usize,
) -> QdStatus {
    guard(|| {
        let t = triple(t)?;
        let a = match op {
            QdOperator::PiA => &t.gens.pi_a,
            QdOperator::PiB => &t.gens.pi_b,
            QdOperator::PiBStar => &t.gens.pi_bstar,
            QdOperator::Dirac => &t.dirac,
            QdOperator::Gamma => &t.gamma,
        };
        let m = a.dense_window(h(twice_lmin), h(twice_lmax))?;
        write(n, m.nrows())?;
        let need = m.nrows() * m.ncols();
        if re.is_null() && im.is_null() && cap == 0 {
            return Ok(());
        }
        if re.is_null() || im.is_null() {
            return Err(Fail::Null);
        }
        if cap < need {
            return Err(Fail::Small(need));
        }
        for r in 0..m.nrows() {
            for c in 0..m.ncols() {
                let k = r * m.ncols() + c;
                // SAFETY: k < need <= cap.
                unsafe {
                    re.add(k).write(m[(r, c)].re);
                    im.add(k).write(m[(r, c)].im);
                }
            }
        }
        Ok(())
    })
}
