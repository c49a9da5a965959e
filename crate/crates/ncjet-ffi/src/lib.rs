//! C ABI for `ncjet`.
//!
//! Objects are opaque handles created by `*_from_json` and released by the
//! matching `*_free`. Every fallible call returns an [`NcjetStatus`]; on
//! failure a message is available from [`ncjet_last_error`] until the next
//! call on the same thread.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use ncjet::algebra::{Algebra, Module};
use ncjet::calculus::Calculus;
use ncjet::exterior::{maximal_exterior, SymmetricForms};
use ncjet::io::{point_module, to_json, AlgebraSpec, CalculusSpec, ModuleSpec};
use ncjet::jets::{Flavor, JetTowers};
use ncjet::Error;

/// Result codes; `NCJET_STATUS_OK` is zero.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NcjetStatus {
    Ok = 0,
    NullArgument = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    Validation = 4,
    Dimension = 5,
    TooLarge = 6,
    BufferTooSmall = 7,
    Internal = 8,
    Panic = 9,
}

/// Jet flavours, in increasing order of restriction.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NcjetFlavor {
    Nonholonomic = 0,
    Semiholonomic = 1,
    Sesquiholonomic = 2,
    Holonomic = 3,
}

impl From<NcjetFlavor> for Flavor {
    fn from(f: NcjetFlavor) -> Flavor {
        match f {
            NcjetFlavor::Nonholonomic => Flavor::Nonholonomic,
            NcjetFlavor::Semiholonomic => Flavor::Semiholonomic,
            NcjetFlavor::Sesquiholonomic => Flavor::Sesquiholonomic,
            NcjetFlavor::Holonomic => Flavor::Holonomic,
        }
    }
}

/// A validated finite-dimensional algebra.
pub struct NcjetAlgebra(Algebra);

/// A validated first-order calculus.
pub struct NcjetCalculus(Calculus);

/// A validated left module.
pub struct NcjetModule(Module);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> NcjetStatus {
    match e {
        Error::Parse(_) | Error::Json(_) | Error::Io(_) => NcjetStatus::Parse,
        Error::Validation(_) | Error::NotWellDefined(_) => NcjetStatus::Validation,
        Error::Dimension(_) => NcjetStatus::Dimension,
        Error::TooLarge { .. } => NcjetStatus::TooLarge,
        Error::Internal(_) => NcjetStatus::Internal,
    }
}

fn guard(f: impl FnOnce() -> Result<(), NcjetStatus>) -> NcjetStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => NcjetStatus::Ok,
        Ok(Err(s)) => s,
        Err(_) => {
            set_error("panic inside ncjet".into());
            NcjetStatus::Panic
        }
    }
}

fn fail(e: Error) -> NcjetStatus {
    let s = status_of(&e);
    set_error(e.to_string());
    s
}

unsafe fn read_str<'a>(s: *const c_char) -> Result<&'a str, NcjetStatus> {
    if s.is_null() {
        set_error("null string argument".into());
        return Err(NcjetStatus::NullArgument);
    }
    CStr::from_ptr(s).to_str().map_err(|_| {
        set_error("argument is not valid UTF-8".into());
        NcjetStatus::InvalidUtf8
    })
}

unsafe fn deref<'a, T>(p: *const T) -> Result<&'a T, NcjetStatus> {
    p.as_ref().ok_or_else(|| {
        set_error("null handle".into());
        NcjetStatus::NullArgument
    })
}

fn parse<T: serde::de::DeserializeOwned>(s: &str) -> Result<T, NcjetStatus> {
    serde_json::from_str(s).map_err(|e| fail(e.into()))
}

unsafe fn put<T>(out: *mut *mut T, value: T) -> Result<(), NcjetStatus> {
    if out.is_null() {
        set_error("null output pointer".into());
        return Err(NcjetStatus::NullArgument);
    }
    *out = Box::into_raw(Box::new(value));
    Ok(())
}

/// Parses and validates an algebra from its JSON description.
///
/// # Safety
/// `json` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ncjet_algebra_from_json(json: *const c_char, out: *mut *mut NcjetAlgebra) -> NcjetStatus {
    guard(|| {
        let spec: AlgebraSpec = parse(read_str(json)?)?;
        let alg = spec.build().map_err(fail)?;
        let rep = alg.validate();
        if !rep.ok() {
            return Err(fail(Error::Validation(rep.failures.join("; "))));
        }
        put(out, NcjetAlgebra(alg))
    })
}

/// # Safety
/// `alg` must be null or a handle from [`ncjet_algebra_from_json`].
#[no_mangle]
pub unsafe extern "C" fn ncjet_algebra_free(alg: *mut NcjetAlgebra) {
    if !alg.is_null() {
        drop(Box::from_raw(alg));
    }
}

/// Vector-space dimension of the algebra (0 for a null handle).
///
/// # Safety
/// `alg` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn ncjet_algebra_dim(alg: *const NcjetAlgebra) -> usize {
    alg.as_ref().map_or(0, |a| a.0.dim())
}

/// Parses and validates a calculus over `alg`.
///
/// # Safety
/// `alg` must be a live handle, `json` NUL-terminated, `out` valid.
#[no_mangle]
pub unsafe extern "C" fn ncjet_calculus_from_json(
    alg: *const NcjetAlgebra,
    json: *const c_char,
    out: *mut *mut NcjetCalculus,
) -> NcjetStatus {
    guard(|| {
        let alg = deref(alg)?;
        let spec: CalculusSpec = parse(read_str(json)?)?;
        let calc = spec.build(&alg.0).map_err(fail)?;
        let rep = calc.validate();
        if !rep.ok() {
            return Err(fail(Error::Validation(rep.failures.join("; "))));
        }
        put(out, NcjetCalculus(calc))
    })
}

/// # Safety
/// `calc` must be null or a handle from [`ncjet_calculus_from_json`].
#[no_mangle]
pub unsafe extern "C" fn ncjet_calculus_free(calc: *mut NcjetCalculus) {
    if !calc.is_null() {
        drop(Box::from_raw(calc));
    }
}

/// Dimension of `Ω¹` (0 for a null handle).
///
/// # Safety
/// `calc` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn ncjet_calculus_omega1_dim(calc: *const NcjetCalculus) -> usize {
    calc.as_ref().map_or(0, |c| c.0.dim())
}

/// Parses and validates a module over `alg`. The strings `"regular"` and
/// `"point"` name `A` itself and `k[0]`.
///
/// # Safety
/// `alg` must be a live handle, `json` NUL-terminated, `out` valid.
#[no_mangle]
pub unsafe extern "C" fn ncjet_module_from_json(
    alg: *const NcjetAlgebra,
    json: *const c_char,
    out: *mut *mut NcjetModule,
) -> NcjetStatus {
    guard(|| {
        let alg = &deref(alg)?.0;
        let m = match read_str(json)?.trim() {
            "regular" => Module::regular(alg),
            "point" => point_module(alg).map_err(fail)?,
            text => parse::<ModuleSpec>(text)?.build(alg).map_err(fail)?,
        };
        put(out, NcjetModule(m))
    })
}

/// # Safety
/// `m` must be null or a handle from [`ncjet_module_from_json`].
#[no_mangle]
pub unsafe extern "C" fn ncjet_module_free(m: *mut NcjetModule) {
    if !m.is_null() {
        drop(Box::from_raw(m));
    }
}

/// # Safety
/// `m` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn ncjet_module_dim(m: *const NcjetModule) -> usize {
    m.as_ref().map_or(0, |m| m.0.dim())
}

/// Writes `dim J^k E` for `k = 0..=order` into `dims`, which must hold
/// `order + 1` entries. `module` may be null for `E = A`. Exterior forms
/// are truncated at grade `truncate`.
///
/// # Safety
/// Handles must be live; `dims` must point to `len` writable entries.
#[no_mangle]
pub unsafe extern "C" fn ncjet_jet_dims(
    calc: *const NcjetCalculus,
    module: *const NcjetModule,
    flavor: NcjetFlavor,
    order: usize,
    truncate: usize,
    dims: *mut usize,
    len: usize,
) -> NcjetStatus {
    guard(|| {
        let calc = &deref(calc)?.0;
        let e = match module.as_ref() {
            Some(m) => m.0.clone(),
            None => Module::regular(calc.algebra()),
        };
        if dims.is_null() {
            set_error("null output buffer".into());
            return Err(NcjetStatus::NullArgument);
        }
        if len < order + 1 {
            set_error(format!("buffer holds {len} entries, {} needed", order + 1));
            return Err(NcjetStatus::BufferTooSmall);
        }
        let ext = maximal_exterior(calc, truncate).map_err(fail)?;
        let flavor = Flavor::from(flavor);
        let mut towers = JetTowers::for_flavor(&ext, &e, order, flavor).map_err(fail)?;
        if matches!(flavor, Flavor::Holonomic | Flavor::Sesquiholonomic) {
            towers.sym = Some(SymmetricForms::new(&ext, &e, order).map_err(fail)?);
        }
        let out = std::slice::from_raw_parts_mut(dims, len);
        for (k, slot) in out.iter_mut().enumerate().take(order + 1) {
            *slot = towers.dim(flavor, k).map_err(fail)?;
        }
        Ok(())
    })
}

/// The built-in report `"quaternion"` or `"infinitesimal"` as a JSON
/// string, to be released with [`ncjet_string_free`].
///
/// # Safety
/// `name` must be NUL-terminated and `out` valid.
#[no_mangle]
pub unsafe extern "C" fn ncjet_report(name: *const c_char, out: *mut *mut c_char) -> NcjetStatus {
    guard(|| {
        if out.is_null() {
            set_error("null output pointer".into());
            return Err(NcjetStatus::NullArgument);
        }
        let v = ncjet::report::by_name(read_str(name)?).map_err(fail)?;
        let text = to_json(&v).map_err(fail)?;
        *out = CString::new(text).map_err(|_| NcjetStatus::Internal)?.into_raw();
        Ok(())
    })
}

/// # Safety
/// `s` must be null or a string returned by this library.
#[no_mangle]
pub unsafe extern "C" fn ncjet_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// The message of the last failure on this thread, or null. The pointer is
/// valid until the next call into the library on the same thread.
#[no_mangle]
pub extern "C" fn ncjet_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}
