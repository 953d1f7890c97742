//! C ABI over `gibbs-core`.
//!
//! Fields are opaque [`GibbsField`] handles created from a JSON field spec
//! and released with [`gibbs_field_free`]. Every fallible function returns a
//! [`GibbsStatus`]; on failure a message is available from
//! [`gibbs_last_error`] on the calling thread. Strings returned through
//! `char **` outputs are owned by the caller and released with
//! [`gibbs_string_free`]. Tensors are written row-major into `double[9]`,
//! with entry `(i, j)` the coefficient of `e_i ⊗ e_j`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use gibbs_core::fields::spec::parse_field_spec;
use gibbs_core::notation::{parse_spanned, EvalContext};
use gibbs_core::{check, kinematics, BlackBoxField, Multivector, Tensor3, Vec3, VectorField};

/// Result codes. Values 1 to 4 match the exit codes of the `gibbs` binary.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GibbsStatus {
    Ok = 0,
    Config = 1,
    FieldSpec = 2,
    Expression = 3,
    CheckFailed = 4,
    NullPointer = 5,
    InvalidUtf8 = 6,
    Panic = 7,
}

/// A vector field, differentiated exactly or by central differences.
pub struct GibbsField {
    inner: Box<dyn VectorField>,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(message: &str) {
    let c = CString::new(message.replace('\0', " ")).expect("NUL bytes removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

type Failure = (GibbsStatus, String);

fn fail<T>(status: GibbsStatus, message: impl Into<String>) -> Result<T, Failure> {
    Err((status, message.into()))
}

/// Runs `f`, converting failures and panics into a status code.
fn guard(f: impl FnOnce() -> Result<(), Failure>) -> GibbsStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            LAST_ERROR.with(|e| *e.borrow_mut() = None);
            GibbsStatus::Ok
        }
        Ok(Err((status, message))) => {
            set_last_error(&message);
            status
        }
        Err(payload) => {
            let message = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".to_string());
            set_last_error(&format!("internal error: {message}"));
            GibbsStatus::Panic
        }
    }
}

unsafe fn nonnull<'a, T>(p: *const T, what: &str) -> Result<&'a T, Failure> {
    p.as_ref()
        .map_or_else(|| fail(GibbsStatus::NullPointer, format!("{what} is NULL")), Ok)
}

unsafe fn out_slice<'a>(p: *mut f64, len: usize, what: &str) -> Result<&'a mut [f64], Failure> {
    if p.is_null() {
        return fail(GibbsStatus::NullPointer, format!("{what} is NULL"));
    }
    Ok(std::slice::from_raw_parts_mut(p, len))
}

unsafe fn in_array<const N: usize>(p: *const f64, what: &str) -> Result<[f64; N], Failure> {
    if p.is_null() {
        return fail(GibbsStatus::NullPointer, format!("{what} is NULL"));
    }
    Ok(std::array::from_fn(|i| *p.add(i)))
}

unsafe fn in_str<'a>(p: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return fail(GibbsStatus::NullPointer, format!("{what} is NULL"));
    }
    CStr::from_ptr(p)
        .to_str()
        .or_else(|_| fail(GibbsStatus::InvalidUtf8, format!("{what} is not valid UTF-8")))
}

unsafe fn point_arg(p: *const f64) -> Result<Vec3, Failure> {
    let x = Vec3::from(in_array::<3>(p, "point")?);
    if !x.is_finite() {
        return fail(GibbsStatus::Config, "point must be finite");
    }
    Ok(x)
}

unsafe fn write_string(out: *mut *mut c_char, s: String) -> Result<(), Failure> {
    if out.is_null() {
        return fail(GibbsStatus::NullPointer, "output string pointer is NULL");
    }
    let c = CString::new(s).or_else(|_| fail(GibbsStatus::Panic, "string contains NUL"))?;
    *out = c.into_raw();
    Ok(())
}

fn write_tensor(out: &mut [f64], t: &Tensor3) {
    for (slot, x) in out.iter_mut().zip(t.rows().iter().flatten()) {
        *slot = *x;
    }
}

fn field_error(e: impl std::fmt::Display) -> Failure {
    (GibbsStatus::FieldSpec, e.to_string())
}

/// Parses a polynomial field spec. `fd_step` of 0 selects exact
/// derivatives; a positive value selects central differences with that
/// step. On success `*out` receives a handle to free with
/// [`gibbs_field_free`].
///
/// # Safety
/// `json` must be NULL or a NUL-terminated string; `out` must be NULL or
/// writable.
#[no_mangle]
pub unsafe extern "C" fn gibbs_field_from_json(
    json: *const c_char,
    fd_step: f64,
    out: *mut *mut GibbsField,
) -> GibbsStatus {
    guard(|| {
        if out.is_null() {
            return fail(GibbsStatus::NullPointer, "out is NULL");
        }
        let text = in_str(json, "json")?;
        let poly = parse_field_spec(text).map_err(|e| {
            (
                GibbsStatus::FieldSpec,
                format!("at pointer \"{}\": {}", e.pointer, e.message),
            )
        })?;
        let inner: Box<dyn VectorField> = if fd_step == 0.0 {
            Box::new(poly)
        } else {
            Box::new(
                BlackBoxField::wrap(poly, fd_step)
                    .map_err(|e| (GibbsStatus::Config, e.to_string()))?,
            )
        };
        *out = Box::into_raw(Box::new(GibbsField { inner }));
        Ok(())
    })
}

/// Releases a field handle. NULL is ignored.
///
/// # Safety
/// `field` must be NULL or a handle from [`gibbs_field_from_json`] that has
/// not been freed.
#[no_mangle]
pub unsafe extern "C" fn gibbs_field_free(field: *mut GibbsField) {
    if !field.is_null() {
        drop(Box::from_raw(field));
    }
}

/// Writes `∇⊗v` (row `i` holds `∂v/∂x_i`) at `point[3]` into `out[9]`.
///
/// # Safety
/// `field` must be a live handle; `point` must hold 3 doubles and `out` 9.
#[no_mangle]
pub unsafe extern "C" fn gibbs_grad_gibbs(
    field: *const GibbsField,
    point: *const f64,
    out: *mut f64,
) -> GibbsStatus {
    guard(|| {
        let f = nonnull(field, "field")?;
        let x = point_arg(point)?;
        let g = f.inner.grad_gibbs(x).map_err(field_error)?;
        write_tensor(out_slice(out, 9, "out")?, &g);
        Ok(())
    })
}

/// Writes the transpose `(∇⊗v)†` at `point[3]` into `out[9]`.
///
/// # Safety
/// As for [`gibbs_grad_gibbs`].
#[no_mangle]
pub unsafe extern "C" fn gibbs_grad_alt(
    field: *const GibbsField,
    point: *const f64,
    out: *mut f64,
) -> GibbsStatus {
    guard(|| {
        let f = nonnull(field, "field")?;
        let x = point_arg(point)?;
        let g = f.inner.grad_alt(x).map_err(field_error)?;
        write_tensor(out_slice(out, 9, "out")?, &g);
        Ok(())
    })
}

/// Writes the strain-rate tensor `d` into `d_out[9]` and the rotation
/// tensor `Ω` into `omega_out[9]`.
///
/// # Safety
/// `field` must be a live handle; `point` must hold 3 doubles and each
/// output 9.
#[no_mangle]
pub unsafe extern "C" fn gibbs_decompose(
    field: *const GibbsField,
    point: *const f64,
    d_out: *mut f64,
    omega_out: *mut f64,
) -> GibbsStatus {
    guard(|| {
        let f = nonnull(field, "field")?;
        let x = point_arg(point)?;
        let dec = kinematics::decompose(f.inner.as_ref(), x).map_err(field_error)?;
        write_tensor(out_slice(d_out, 9, "d_out")?, &dec.d);
        write_tensor(out_slice(omega_out, 9, "omega_out")?, &dec.omega);
        Ok(())
    })
}

/// Writes the kinematics report at `point[3]` as a JSON string.
///
/// # Safety
/// `field` must be a live handle, `point` must hold 3 doubles, `out` must
/// be writable.
#[no_mangle]
pub unsafe extern "C" fn gibbs_report_json(
    field: *const GibbsField,
    point: *const f64,
    out: *mut *mut c_char,
) -> GibbsStatus {
    guard(|| {
        let f = nonnull(field, "field")?;
        let x = point_arg(point)?;
        let report = kinematics::report(f.inner.as_ref(), x).map_err(field_error)?;
        let text = serde_json::to_string_pretty(&report).expect("plain data serializes");
        write_string(out, text)
    })
}

/// Evaluates a notation expression at `point[3]` and writes
/// `{"kind": ..., "value": ...}` as JSON. `names[k]` is bound to the vector
/// `values[3k..3k+3]` for `k < count`; the arrays may be NULL when `count`
/// is 0. On an expression error the last-error message ends with the
/// character position of the failure.
///
/// # Safety
/// `field` must be a live handle, `point` must hold 3 doubles, `expr` must
/// be NUL-terminated, `names` must hold `count` NUL-terminated strings and
/// `values` `3 * count` doubles, `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn gibbs_eval_expr_json(
    field: *const GibbsField,
    point: *const f64,
    expr: *const c_char,
    names: *const *const c_char,
    values: *const f64,
    count: usize,
    out: *mut *mut c_char,
) -> GibbsStatus {
    guard(|| {
        let f = nonnull(field, "field")?;
        let x = point_arg(point)?;
        let src = in_str(expr, "expr")?;
        let mut ctx = EvalContext::new(f.inner.as_ref(), x);
        if count > 0 && (names.is_null() || values.is_null()) {
            return fail(GibbsStatus::NullPointer, "names or values is NULL");
        }
        for k in 0..count {
            let name = in_str(*names.add(k), "binding name")?;
            let v = Vec3::from(in_array::<3>(values.add(3 * k), "binding value")?);
            ctx = ctx
                .bind(name, v)
                .map_err(|e| (GibbsStatus::Config, e.to_string()))?;
        }
        let position = |offset: usize| src[..offset].chars().count();
        let (parsed, span) = parse_spanned(src).map_err(|e| {
            (
                GibbsStatus::Expression,
                format!("{e} at position {}", position(e.offset())),
            )
        })?;
        let value = ctx.evaluate_traced(&parsed).map_err(|e| {
            (
                GibbsStatus::Expression,
                format!("{e} at position {}", position(span.locate(&e.path))),
            )
        })?;
        write_string(out, value.to_json().to_string())
    })
}

/// Releases a string returned by this library. NULL is ignored.
///
/// # Safety
/// `s` must be NULL or a string from this library that has not been freed.
#[no_mangle]
pub unsafe extern "C" fn gibbs_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Geometric product of two multivectors with coefficients in the order
/// `1, e1, e2, e3, e12, e13, e23, e123`.
///
/// # Safety
/// `a` and `b` must hold 8 doubles; `out` must hold 8 and may alias either
/// input.
#[no_mangle]
pub unsafe extern "C" fn gibbs_mv_geometric_product(
    a: *const f64,
    b: *const f64,
    out: *mut f64,
) -> GibbsStatus {
    guard(|| {
        let ma = Multivector::from_coefficients(in_array::<8>(a, "a")?);
        let mb = Multivector::from_coefficients(in_array::<8>(b, "b")?);
        let product = (ma * mb).coefficients();
        out_slice(out, 8, "out")?.copy_from_slice(&product);
        Ok(())
    })
}

/// Runs the seeded identity suite. Returns `GIBBS_STATUS_CHECK_FAILED` if any
/// check fails; counts are written either way.
///
/// # Safety
/// `passed` and `failed` must be NULL or writable.
#[no_mangle]
pub unsafe extern "C" fn gibbs_check(seed: u64, passed: *mut u32, failed: *mut u32) -> GibbsStatus {
    guard(|| {
        let report = check::run_checks(seed);
        if let Some(p) = passed.as_mut() {
            *p = report.passed as u32;
        }
        if let Some(f) = failed.as_mut() {
            *f = report.failed as u32;
        }
        if report.all_passed() {
            Ok(())
        } else {
            let names: Vec<&str> = report
                .checks
                .iter()
                .filter(|c| !c.passed())
                .map(|c| c.name)
                .collect();
            fail(GibbsStatus::CheckFailed, format!("failed: {}", names.join(", ")))
        }
    })
}

/// Message for the last failure on this thread, or NULL after a success.
/// Valid until the next call into this library on the same thread.
#[no_mangle]
pub extern "C" fn gibbs_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}
