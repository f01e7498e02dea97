//! C interface to `dimlab`.
//!
//! Classes live behind the opaque [`DimlabClass`] handle. Every fallible call
//! returns a [`DimlabStatus`]; on failure the message is available from
//! [`dimlab_last_error`] until the next call on the same thread. Rationals
//! cross the boundary as `"num/den"` strings. Strings returned by the library
//! must be released with [`dimlab_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use dimlab::games;
use dimlab::loss::LossFunction;
use dimlab::{dimensions, generators, Error, HypothesisClass, Rat};

/// Opaque handle to a hypothesis class.
pub struct DimlabClass(HypothesisClass);

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DimlabStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    InvalidInput = 4,
    ResourceLimit = 5,
    Overflow = 6,
    Panic = 7,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("nul bytes removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> DimlabStatus {
    match e {
        _ if e.is_resource_cap() => DimlabStatus::ResourceLimit,
        Error::Parse(_) | Error::Io(_) => DimlabStatus::Parse,
        Error::Overflow(_) => DimlabStatus::Overflow,
        _ => DimlabStatus::InvalidInput,
    }
}

struct Fail(DimlabStatus, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Fail {
        Fail(status_of(&e), e.to_string())
    }
}

fn guard(f: impl FnOnce() -> Result<(), Fail>) -> DimlabStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => DimlabStatus::Ok,
        Ok(Err(Fail(s, m))) => {
            set_error(m);
            s
        }
        Err(p) => {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panic".into());
            set_error(msg);
            DimlabStatus::Panic
        }
    }
}

unsafe fn str_arg<'a>(p: *const c_char, name: &str) -> Result<&'a str, Fail> {
    if p.is_null() {
        return Err(Fail(DimlabStatus::NullPointer, format!("{name} is null")));
    }
    CStr::from_ptr(p).to_str().map_err(|e| Fail(DimlabStatus::InvalidUtf8, format!("{name}: {e}")))
}

unsafe fn class_arg<'a>(h: *const DimlabClass) -> Result<&'a HypothesisClass, Fail> {
    h.as_ref().map(|c| &c.0).ok_or_else(|| Fail(DimlabStatus::NullPointer, "class handle is null".into()))
}

unsafe fn write_out<T>(out: *mut T, v: T) -> Result<(), Fail> {
    if out.is_null() {
        return Err(Fail(DimlabStatus::NullPointer, "output pointer is null".into()));
    }
    out.write(v);
    Ok(())
}

unsafe fn write_string(out: *mut *mut c_char, s: String) -> Result<(), Fail> {
    let c = CString::new(s).map_err(|e| Fail(DimlabStatus::InvalidInput, e.to_string()))?;
    write_out(out, c.into_raw())
}

unsafe fn write_class(out: *mut *mut DimlabClass, h: HypothesisClass) -> Result<(), Fail> {
    write_out(out, Box::into_raw(Box::new(DimlabClass(h))))
}

/// Message of the last failed call on this thread, or null. The pointer stays
/// valid until the next library call on the same thread.
#[no_mangle]
pub extern "C" fn dimlab_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// # Safety
/// `s` must be null or a string returned by this library.
#[no_mangle]
pub unsafe extern "C" fn dimlab_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// # Safety
/// `h` must be null or a handle returned by this library.
#[no_mangle]
pub unsafe extern "C" fn dimlab_class_free(h: *mut DimlabClass) {
    if !h.is_null() {
        drop(Box::from_raw(h));
    }
}

/// Parses a class from its JSON form.
///
/// # Safety
/// `json` must be a nul-terminated string and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn dimlab_class_from_json(json: *const c_char, out: *mut *mut DimlabClass) -> DimlabStatus {
    guard(|| {
        let s = str_arg(json, "json")?;
        let h: HypothesisClass = serde_json::from_str(s).map_err(|e| Fail(DimlabStatus::Parse, e.to_string()))?;
        write_class(out, h)
    })
}

/// # Safety
/// `h` must be a valid handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn dimlab_class_to_json(h: *const DimlabClass, out: *mut *mut c_char) -> DimlabStatus {
    guard(|| write_string(out, serde_json::to_string(class_arg(h)?).expect("serializable")))
}

/// Built-in family by name: `powerset`, `threshold`, `interval`,
/// `even_interval`, `h0`, `h0_two_choice`.
///
/// # Safety
/// `name` must be a nul-terminated string and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn dimlab_class_generate(name: *const c_char, n: usize, out: *mut *mut DimlabClass) -> DimlabStatus {
    guard(|| {
        let h = match str_arg(name, "name")? {
            "powerset" => generators::powerset_class(n)?,
            "threshold" => generators::threshold_class(n)?,
            "interval" => generators::interval_class(n)?,
            "even_interval" => generators::even_interval_class(n)?,
            "h0" => generators::h0_class(n)?,
            "h0_two_choice" => generators::h0_two_choice_class(n)?,
            other => return Err(Fail(DimlabStatus::InvalidInput, format!("unknown family {other:?}"))),
        };
        write_class(out, h)
    })
}

/// # Safety
/// `h` must be a valid handle; `n_x` and `n_y` writable.
#[no_mangle]
pub unsafe extern "C" fn dimlab_class_shape(h: *const DimlabClass, n_x: *mut usize, n_y: *mut usize) -> DimlabStatus {
    guard(|| {
        let c = class_arg(h)?;
        write_out(n_x, c.n_x())?;
        write_out(n_y, c.n_y())
    })
}

/// Dual class (points and hypotheses swapped).
///
/// # Safety
/// `h` must be a valid handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn dimlab_class_dual(h: *const DimlabClass, out: *mut *mut DimlabClass) -> DimlabStatus {
    guard(|| write_class(out, dimlab::class::dual(class_arg(h)?)))
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DimlabDimKind {
    Vc = 0,
    Littlestone = 1,
    Fat = 2,
    SeqFat = 3,
    Graph = 4,
    Threshold = 5,
}

/// Computes a dimension. `gamma` is ignored for `Vc` and `Littlestone` and
/// may be null there; otherwise it is a rational string. When `witness_json`
/// is non-null it receives the witness.
///
/// # Safety
/// `h` must be a valid handle, `gamma` null or nul-terminated, `dim` writable.
#[no_mangle]
pub unsafe extern "C" fn dimlab_dimension(
    h: *const DimlabClass,
    kind: DimlabDimKind,
    gamma: *const c_char,
    dim: *mut usize,
    witness_json: *mut *mut c_char,
) -> DimlabStatus {
    guard(|| {
        let c = class_arg(h)?;
        let g = || -> Result<Rat, Fail> { Ok(str_arg(gamma, "gamma")?.parse::<Rat>()?) };
        let (d, w) = match kind {
            DimlabDimKind::Vc => dimensions::vc_dim(c).map(|(d, w)| (d, serde_json::to_string(&w)))?,
            DimlabDimKind::Littlestone => dimensions::littlestone_dim(c).map(|(d, w)| (d, serde_json::to_string(&w)))?,
            DimlabDimKind::Fat => dimensions::fat_dim(c, g()?).map(|(d, w)| (d, serde_json::to_string(&w)))?,
            DimlabDimKind::SeqFat => dimensions::seq_fat_dim(c, g()?).map(|(d, w)| (d, serde_json::to_string(&w)))?,
            DimlabDimKind::Graph => dimensions::graph_dim(c, g()?).map(|(d, w)| (d, serde_json::to_string(&w)))?,
            DimlabDimKind::Threshold => dimensions::threshold_dim_gamma(c, g()?).map(|(d, w)| (d, serde_json::to_string(&w)))?,
        };
        write_out(dim, d)?;
        if !witness_json.is_null() {
            write_string(witness_json, w.expect("serializable"))?;
        }
        Ok(())
    })
}

/// Exact value of the realizable game over `t` rounds under `loss`
/// (`id`, `l:<eps>` or `L:<eps>`). The exact value is written to `value` as a
/// rational string and its float approximation to `approx`.
///
/// # Safety
/// `h` must be a valid handle, `loss` nul-terminated, outputs writable.
#[no_mangle]
pub unsafe extern "C" fn dimlab_realizable_value(
    h: *const DimlabClass,
    loss: *const c_char,
    t: usize,
    value: *mut *mut c_char,
    approx: *mut f64,
) -> DimlabStatus {
    guard(|| {
        let c = class_arg(h)?;
        let l: LossFunction = str_arg(loss, "loss")?.parse()?;
        let v = games::realizable_value(c, l, t, None)?;
        write_out(approx, v.value_f64)?;
        write_string(value, v.value.to_string())
    })
}

/// Exact agnostic minimax regret over `t` rounds with default grids.
///
/// # Safety
/// `h` must be a valid handle, `loss` nul-terminated, outputs writable.
#[no_mangle]
pub unsafe extern "C" fn dimlab_agnostic_value(
    h: *const DimlabClass,
    loss: *const c_char,
    t: usize,
    value: *mut *mut c_char,
    approx: *mut f64,
) -> DimlabStatus {
    guard(|| {
        let c = class_arg(h)?;
        let l: LossFunction = str_arg(loss, "loss")?.parse()?;
        let v = games::agnostic_minimax(c, l, t, None, None, games::DEFAULT_MAX_STATES)?;
        write_out(approx, v.value_f64)?;
        write_string(value, v.value.to_string())
    })
}
