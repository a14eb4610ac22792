//! C ABI over `dualsplit`.
//!
//! Objects are opaque heap handles freed with the matching `*_free`.
//! Every fallible call returns a [`DsStatus`]; on failure a description is
//! available from [`ds_last_error_message`] on the same thread. Points are
//! passed as `(pointer, dim)` and outputs are written to caller buffers of
//! the operator's dimension.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use dualsplit::duality::{kz_contains, psi_inverse, DualPair};
use dualsplit::splitting::{dr_operator, iterate_dr, IterationTrace};
use dualsplit::zoo::{self, ConvexSet, OperatorSpec};
use dualsplit::{Error, Point, ResolventOperator};

/// Result code of every fallible call.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DsStatus {
    Ok = 0,
    NullPointer = 1,
    DimensionMismatch = 2,
    InvalidArgument = 3,
    NotMonotone = 4,
    Precondition = 5,
    OutOfRange = 6,
    Internal = 7,
}

/// A maximally monotone operator represented by its resolvent.
pub struct DsOperator(ResolventOperator);

/// An ordered operator pair `(A, B)` with its dual pair.
pub struct DsPair(DualPair);

/// Iterates, shadows and residuals of one run.
pub struct DsTrace(IterationTrace);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn status_of(e: &Error) -> DsStatus {
    match e {
        Error::DimensionMismatch { .. } => DsStatus::DimensionMismatch,
        Error::NotMonotone(..) | Error::NotFirmlyNonexpansive { .. } => DsStatus::NotMonotone,
        Error::Precondition(_) | Error::NotParamonotone(_) => DsStatus::Precondition,
        Error::NonFinite { .. } | Error::EmptyPoint | Error::InvalidArgument(_) | Error::Json(_) => {
            DsStatus::InvalidArgument
        }
        _ => DsStatus::Internal,
    }
}

/// Runs `f`, converting errors and panics into status codes.
fn guard(f: impl FnOnce() -> Result<(), DsStatus>) -> DsStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_error("");
            DsStatus::Ok
        }
        Ok(Err(s)) => s,
        Err(_) => {
            set_error("panic inside dualsplit");
            DsStatus::Internal
        }
    }
}

trait OrStatus<T> {
    fn or_status(self) -> Result<T, DsStatus>;
}

impl<T> OrStatus<T> for dualsplit::Result<T> {
    fn or_status(self) -> Result<T, DsStatus> {
        self.map_err(|e| {
            set_error(&e.to_string());
            status_of(&e)
        })
    }
}

fn null() -> DsStatus {
    set_error("null pointer argument");
    DsStatus::NullPointer
}

unsafe fn slice<'a>(p: *const f64, len: usize) -> Result<&'a [f64], DsStatus> {
    if p.is_null() {
        return Err(null());
    }
    Ok(std::slice::from_raw_parts(p, len))
}

unsafe fn read_point(p: *const f64, dim: usize) -> Result<Point, DsStatus> {
    Point::new(slice(p, dim)?.to_vec()).or_status()
}

unsafe fn write_point(x: &Point, out: *mut f64) -> Result<(), DsStatus> {
    if out.is_null() {
        return Err(null());
    }
    ptr::copy_nonoverlapping(x.coords().as_ptr(), out, x.dim());
    Ok(())
}

unsafe fn handle<'a, T>(p: *const T) -> Result<&'a T, DsStatus> {
    p.as_ref().ok_or_else(null)
}

unsafe fn emit<T>(value: T, out: *mut *mut T) -> Result<(), DsStatus> {
    if out.is_null() {
        return Err(null());
    }
    *out = Box::into_raw(Box::new(value));
    Ok(())
}

fn check_dim(expected: usize, found: usize) -> Result<(), DsStatus> {
    if expected != found {
        set_error(&format!("dimension mismatch: expected {expected}, found {found}"));
        return Err(DsStatus::DimensionMismatch);
    }
    Ok(())
}

/// Description of the last failure on this thread; empty after a success.
/// The pointer stays valid until the next call on this thread.
#[no_mangle]
pub extern "C" fn ds_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// The zero operator on `R^dim`.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn ds_operator_zero(dim: usize, out: *mut *mut DsOperator) -> DsStatus {
    guard(|| {
        if dim == 0 {
            set_error("dimension must be positive");
            return Err(DsStatus::InvalidArgument);
        }
        emit(DsOperator(zoo::zero_operator(dim)), out)
    })
}

/// Normal cone of the box `[lo, hi]`; infinite bounds are allowed.
///
/// # Safety
/// `lo` and `hi` must point to `dim` doubles; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn ds_operator_normal_cone_box(
    lo: *const f64,
    hi: *const f64,
    dim: usize,
    out: *mut *mut DsOperator,
) -> DsStatus {
    guard(|| {
        let set = ConvexSet::boxed(slice(lo, dim)?.to_vec(), slice(hi, dim)?.to_vec()).or_status()?;
        emit(DsOperator(zoo::normal_cone_operator(&set)), out)
    })
}

/// Linear operator `x ↦ Mx` for a monotone `n × n` matrix in row-major order.
///
/// # Safety
/// `matrix` must point to `n * n` doubles; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn ds_operator_linear(matrix: *const f64, n: usize, out: *mut *mut DsOperator) -> DsStatus {
    guard(|| {
        let len = n.checked_mul(n).ok_or_else(|| {
            set_error("matrix size overflows");
            DsStatus::InvalidArgument
        })?;
        let spec = OperatorSpec::Linear {
            matrix: slice(matrix, len)?.to_vec(),
        };
        emit(DsOperator(spec.build().or_status()?), out)
    })
}

/// Constant operator `x ↦ u`.
///
/// # Safety
/// `u` must point to `dim` doubles; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn ds_operator_constant(u: *const f64, dim: usize, out: *mut *mut DsOperator) -> DsStatus {
    guard(|| emit(DsOperator(zoo::constant_operator(&read_point(u, dim)?)), out))
}

/// Operator from a JSON operator description, e.g.
/// `{"kind": "normal_cone_box", "lo": [0], "hi": [2]}`.
///
/// # Safety
/// `json` must be a NUL-terminated string; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn ds_operator_from_json(json: *const c_char, out: *mut *mut DsOperator) -> DsStatus {
    guard(|| {
        if json.is_null() {
            return Err(null());
        }
        let text = CStr::from_ptr(json).to_str().map_err(|_| {
            set_error("operator description is not UTF-8");
            DsStatus::InvalidArgument
        })?;
        let spec: OperatorSpec = serde_json::from_str(text).map_err(Error::from).or_status()?;
        emit(DsOperator(spec.build().or_status()?), out)
    })
}

/// `A⁻¹`.
///
/// # Safety
/// `op` must be a live handle; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn ds_operator_inverse(op: *const DsOperator, out: *mut *mut DsOperator) -> DsStatus {
    guard(|| emit(DsOperator(handle(op)?.0.inverse()), out))
}

/// `A^∨ = (−Id) ∘ A ∘ (−Id)`.
///
/// # Safety
/// `op` must be a live handle; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn ds_operator_ovee(op: *const DsOperator, out: *mut *mut DsOperator) -> DsStatus {
    guard(|| emit(DsOperator(handle(op)?.0.ovee()), out))
}

/// `A^{−∨} = (A⁻¹)^∨`.
///
/// # Safety
/// `op` must be a live handle; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn ds_operator_neg_ovee_inverse(op: *const DsOperator, out: *mut *mut DsOperator) -> DsStatus {
    guard(|| emit(DsOperator(handle(op)?.0.neg_ovee_inverse()), out))
}

/// Dimension of the space, or 0 for a null handle.
///
/// # Safety
/// `op` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn ds_operator_dim(op: *const DsOperator) -> usize {
    op.as_ref().map_or(0, |o| o.0.dim())
}

/// Declared paramonotone flag; false for a null handle.
///
/// # Safety
/// `op` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn ds_operator_is_paramonotone(op: *const DsOperator) -> bool {
    op.as_ref().is_some_and(|o| o.0.is_paramonotone())
}

/// `J_A x`.
///
/// # Safety
/// `x` and `out` must point to `dim` doubles.
#[no_mangle]
pub unsafe extern "C" fn ds_operator_resolvent(
    op: *const DsOperator,
    x: *const f64,
    dim: usize,
    out: *mut f64,
) -> DsStatus {
    guard(|| {
        let op = handle(op)?;
        check_dim(op.0.dim(), dim)?;
        write_point(&op.0.resolvent(&read_point(x, dim)?).or_status()?, out)
    })
}

/// `R_A x = 2 J_A x − x`.
///
/// # Safety
/// `x` and `out` must point to `dim` doubles.
#[no_mangle]
pub unsafe extern "C" fn ds_operator_reflected_resolvent(
    op: *const DsOperator,
    x: *const f64,
    dim: usize,
    out: *mut f64,
) -> DsStatus {
    guard(|| {
        let op = handle(op)?;
        check_dim(op.0.dim(), dim)?;
        write_point(&op.0.reflected_resolvent(&read_point(x, dim)?).or_status()?, out)
    })
}

/// # Safety
/// `op` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn ds_operator_free(op: *mut DsOperator) {
    if !op.is_null() {
        drop(Box::from_raw(op));
    }
}

/// Pair `(A, B)`; the operators are copied, so the inputs may be freed.
///
/// # Safety
/// `a` and `b` must be live handles; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn ds_pair_new(a: *const DsOperator, b: *const DsOperator, out: *mut *mut DsPair) -> DsStatus {
    guard(|| {
        let pair = DualPair::new(handle(a)?.0.clone(), handle(b)?.0.clone()).or_status()?;
        emit(DsPair(pair), out)
    })
}

/// The dual pair `(A⁻¹, B^{−∨})`.
///
/// # Safety
/// `pair` must be a live handle; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn ds_pair_dual(pair: *const DsPair, out: *mut *mut DsPair) -> DsStatus {
    guard(|| emit(DsPair(handle(pair)?.0.dual()), out))
}

/// Dimension of the space, or 0 for a null handle.
///
/// # Safety
/// `pair` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn ds_pair_dim(pair: *const DsPair) -> usize {
    pair.as_ref().map_or(0, |p| p.0.dim())
}

/// Douglas–Rachford operator `T x = J_B R_A x + x − J_A x`.
///
/// # Safety
/// `x` and `out` must point to `dim` doubles.
#[no_mangle]
pub unsafe extern "C" fn ds_pair_douglas_rachford(
    pair: *const DsPair,
    x: *const f64,
    dim: usize,
    out: *mut f64,
) -> DsStatus {
    guard(|| {
        let pair = handle(pair)?;
        check_dim(pair.0.dim(), dim)?;
        write_point(&pair.0.douglas_rachford(&read_point(x, dim)?).or_status()?, out)
    })
}

/// Whether `k ∈ A z ∩ (−B z)`, within `tol`.
///
/// # Safety
/// `z` and `k` must point to `dim` doubles; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn ds_pair_kz_contains(
    pair: *const DsPair,
    z: *const f64,
    k: *const f64,
    dim: usize,
    tol: f64,
    out: *mut bool,
) -> DsStatus {
    guard(|| {
        let pair = handle(pair)?;
        check_dim(pair.0.dim(), dim)?;
        let r = kz_contains(&pair.0, &read_point(z, dim)?, &read_point(k, dim)?, tol).or_status()?;
        if out.is_null() {
            return Err(null());
        }
        *out = r;
        Ok(())
    })
}

/// Splits a fixed point `x` of `T` into `z = J_A x` and `k = x − z`.
/// Fails with `Precondition` if `‖T x − x‖ > tol`.
///
/// # Safety
/// `x`, `z_out` and `k_out` must point to `dim` doubles.
#[no_mangle]
pub unsafe extern "C" fn ds_pair_psi_inverse(
    pair: *const DsPair,
    x: *const f64,
    dim: usize,
    tol: f64,
    z_out: *mut f64,
    k_out: *mut f64,
) -> DsStatus {
    guard(|| {
        let pair = handle(pair)?;
        check_dim(pair.0.dim(), dim)?;
        let (z, k) = psi_inverse(&pair.0, &read_point(x, dim)?, tol).or_status()?;
        write_point(&z, z_out)?;
        write_point(&k, k_out)
    })
}

/// # Safety
/// `pair` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn ds_pair_free(pair: *mut DsPair) {
    if !pair.is_null() {
        drop(Box::from_raw(pair));
    }
}

/// Douglas–Rachford iteration from `x0` until `‖T xₙ − xₙ‖ ≤ tol` or
/// `max_iter` steps. Not converging is not an error; see
/// [`ds_trace_converged`].
///
/// # Safety
/// `x0` must point to `dim` doubles; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn ds_iterate_dr(
    pair: *const DsPair,
    x0: *const f64,
    dim: usize,
    tol: f64,
    max_iter: usize,
    out: *mut *mut DsTrace,
) -> DsStatus {
    guard(|| {
        let pair = handle(pair)?;
        check_dim(pair.0.dim(), dim)?;
        let trace = iterate_dr(&dr_operator(&pair.0), &read_point(x0, dim)?, tol, max_iter).or_status()?;
        emit(DsTrace(trace), out)
    })
}

/// Number of recorded iterates (including `x0`), or 0 for a null handle.
///
/// # Safety
/// `trace` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn ds_trace_len(trace: *const DsTrace) -> usize {
    trace.as_ref().map_or(0, |t| t.0.iterates.len())
}

/// # Safety
/// `trace` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn ds_trace_iterations_used(trace: *const DsTrace) -> usize {
    trace.as_ref().map_or(0, |t| t.0.iterations_used)
}

/// # Safety
/// `trace` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn ds_trace_converged(trace: *const DsTrace) -> bool {
    trace.as_ref().is_some_and(|t| t.0.converged)
}

unsafe fn trace_entry<'a>(trace: *const DsTrace, n: usize) -> Result<&'a IterationTrace, DsStatus> {
    let t = &handle(trace)?.0;
    if n >= t.iterates.len() {
        set_error(&format!("index {n} out of range for a trace of length {}", t.iterates.len()));
        return Err(DsStatus::OutOfRange);
    }
    Ok(t)
}

/// Writes `xₙ` to `out`.
///
/// # Safety
/// `out` must point to room for the trace dimension.
#[no_mangle]
pub unsafe extern "C" fn ds_trace_iterate(trace: *const DsTrace, n: usize, out: *mut f64) -> DsStatus {
    guard(|| write_point(&trace_entry(trace, n)?.iterates[n], out))
}

/// Writes the shadow `J_A xₙ` to `out`.
///
/// # Safety
/// `out` must point to room for the trace dimension.
#[no_mangle]
pub unsafe extern "C" fn ds_trace_shadow(trace: *const DsTrace, n: usize, out: *mut f64) -> DsStatus {
    guard(|| write_point(&trace_entry(trace, n)?.shadows[n], out))
}

/// Writes `‖T xₙ − xₙ‖` to `out`.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn ds_trace_residual(trace: *const DsTrace, n: usize, out: *mut f64) -> DsStatus {
    guard(|| {
        let r = trace_entry(trace, n)?.residuals[n];
        if out.is_null() {
            return Err(null());
        }
        *out = r;
        Ok(())
    })
}

/// # Safety
/// `trace` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn ds_trace_free(trace: *mut DsTrace) {
    if !trace.is_null() {
        drop(Box::from_raw(trace));
    }
}
