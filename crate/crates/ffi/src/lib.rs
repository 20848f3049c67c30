//! C ABI over the sigkit parser, expander and metric functions.
//!
//! Conventions:
//! - every fallible call returns a [`SigkitStatus`]; on failure the message is
//!   available from [`sigkit_last_error_message`] on the same thread
//! - strings passed in are NUL-terminated UTF-8
//! - strings handed out are owned by the caller and released with [`sigkit_string_free`]
//! - structured results are JSON documents

use sigkit::evalkit::{clopper_pearson, prf, EquivalenceLexicon, MatchCounts};
use sigkit::expand::expand_statement;
use sigkit::sigparse::{parse_statement, to_table_row};
use sigkit::{BrandMap, SigLexicon};
use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SigkitStatus {
    Ok = 0,
    NullArgument = 1,
    InvalidUtf8 = 2,
    InvalidInput = 3,
    Io = 4,
    Panic = 5,
}

/// Lexicon, brand map and equivalence classes used by the parse and expand calls.
pub struct SigkitToolkit {
    lex: SigLexicon,
    brands: BrandMap,
    eq: EquivalenceLexicon,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(msg).ok());
}

fn clear_error() {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
}

struct Failure(SigkitStatus, String);

type FfiResult<T> = Result<T, Failure>;

fn guard(f: impl FnOnce() -> FfiResult<()>) -> SigkitStatus {
    clear_error();
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => SigkitStatus::Ok,
        Ok(Err(Failure(status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic");
            SigkitStatus::Panic
        }
    }
}

unsafe fn str_arg<'a>(p: *const c_char, name: &str) -> FfiResult<&'a str> {
    if p.is_null() {
        return Err(Failure(SigkitStatus::NullArgument, format!("{name} is null")));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|e| Failure(SigkitStatus::InvalidUtf8, format!("{name}: {e}")))
}

unsafe fn opt_str_arg<'a>(p: *const c_char, name: &str) -> FfiResult<Option<&'a str>> {
    if p.is_null() {
        Ok(None)
    } else {
        str_arg(p, name).map(Some)
    }
}

unsafe fn toolkit<'a>(tk: *const SigkitToolkit) -> FfiResult<&'a SigkitToolkit> {
    tk.as_ref()
        .ok_or_else(|| Failure(SigkitStatus::NullArgument, "toolkit is null".to_string()))
}

unsafe fn out_ptr<'a, T>(p: *mut T, name: &str) -> FfiResult<&'a mut T> {
    p.as_mut()
        .ok_or_else(|| Failure(SigkitStatus::NullArgument, format!("{name} is null")))
}

fn to_c_string(s: String) -> FfiResult<*mut c_char> {
    CString::new(s)
        .map(CString::into_raw)
        .map_err(|_| Failure(SigkitStatus::InvalidInput, "output contains NUL".to_string()))
}

fn json_out<T: serde::Serialize>(value: &T, out: &mut *mut c_char) -> FfiResult<()> {
    let json = serde_json::to_string(value).map_err(|e| Failure(SigkitStatus::InvalidInput, e.to_string()))?;
    *out = to_c_string(json)?;
    Ok(())
}

fn io_failure(e: impl std::fmt::Display) -> Failure {
    Failure(SigkitStatus::Io, e.to_string())
}

/// Toolkit with the shipped lexicons. Never returns null.
#[no_mangle]
pub extern "C" fn sigkit_toolkit_new_default() -> *mut SigkitToolkit {
    Box::into_raw(Box::new(SigkitToolkit {
        lex: SigLexicon::shipped(),
        brands: BrandMap::shipped(),
        eq: EquivalenceLexicon::shipped().clone(),
    }))
}

/// Toolkit from JSON files; a null path selects the shipped resource.
///
/// # Safety
/// Paths must be null or valid NUL-terminated strings; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sigkit_toolkit_from_files(
    lexicon_path: *const c_char,
    brand_map_path: *const c_char,
    equivalence_path: *const c_char,
    out: *mut *mut SigkitToolkit,
) -> SigkitStatus {
    guard(|| {
        let out = out_ptr(out, "out")?;
        *out = ptr::null_mut();
        let lex = match opt_str_arg(lexicon_path, "lexicon_path")? {
            Some(p) => SigLexicon::load(p).map_err(io_failure)?,
            None => SigLexicon::shipped(),
        };
        let brands = match opt_str_arg(brand_map_path, "brand_map_path")? {
            Some(p) => BrandMap::load(p).map_err(io_failure)?,
            None => BrandMap::shipped(),
        };
        let eq = match opt_str_arg(equivalence_path, "equivalence_path")? {
            Some(p) => EquivalenceLexicon::load(p).map_err(io_failure)?,
            None => EquivalenceLexicon::shipped().clone(),
        };
        *out = Box::into_raw(Box::new(SigkitToolkit { lex, brands, eq }));
        Ok(())
    })
}

/// # Safety
/// `tk` must be null or a pointer from a toolkit constructor, freed at most once.
#[no_mangle]
pub unsafe extern "C" fn sigkit_toolkit_free(tk: *mut SigkitToolkit) {
    if !tk.is_null() {
        drop(Box::from_raw(tk));
    }
}

/// Annotations for `text` as a JSON array.
///
/// # Safety
/// `tk` must be a live toolkit, `text` a valid string and `out_json` writable.
#[no_mangle]
pub unsafe extern "C" fn sigkit_parse(
    tk: *const SigkitToolkit,
    text: *const c_char,
    out_json: *mut *mut c_char,
) -> SigkitStatus {
    guard(|| {
        let out = out_ptr(out_json, "out_json")?;
        *out = ptr::null_mut();
        let tk = toolkit(tk)?;
        let text = str_arg(text, "text")?;
        json_out(&parse_statement(text, &tk.lex, &tk.brands), out)
    })
}

/// Parse then expand `text`; JSON object with `record` and `provenance`.
///
/// # Safety
/// As for [`sigkit_parse`].
#[no_mangle]
pub unsafe extern "C" fn sigkit_expand(
    tk: *const SigkitToolkit,
    text: *const c_char,
    out_json: *mut *mut c_char,
) -> SigkitStatus {
    guard(|| {
        let out = out_ptr(out_json, "out_json")?;
        *out = ptr::null_mut();
        let tk = toolkit(tk)?;
        let text = str_arg(text, "text")?;
        let anns = parse_statement(text, &tk.lex, &tk.brands);
        json_out(&expand_statement(&anns, text, &tk.lex, &tk.brands), out)
    })
}

/// Parse `text` and render its 10-column table row as JSON.
///
/// # Safety
/// As for [`sigkit_parse`].
#[no_mangle]
pub unsafe extern "C" fn sigkit_table_row(
    tk: *const SigkitToolkit,
    text: *const c_char,
    out_json: *mut *mut c_char,
) -> SigkitStatus {
    guard(|| {
        let out = out_ptr(out_json, "out_json")?;
        *out = ptr::null_mut();
        let tk = toolkit(tk)?;
        let text = str_arg(text, "text")?;
        let anns = parse_statement(text, &tk.lex, &tk.brands);
        json_out(&to_table_row(text, &anns, &tk.lex), out)
    })
}

/// Whether two strings are equivalent under the toolkit's equivalence classes.
///
/// # Safety
/// `tk` must be a live toolkit, `a` and `b` valid strings and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn sigkit_equivalent(
    tk: *const SigkitToolkit,
    a: *const c_char,
    b: *const c_char,
    out: *mut bool,
) -> SigkitStatus {
    guard(|| {
        let out = out_ptr(out, "out")?;
        let tk = toolkit(tk)?;
        *out = tk.eq.equivalent(str_arg(a, "a")?, str_arg(b, "b")?);
        Ok(())
    })
}

/// Exact two-sided binomial interval.
///
/// # Safety
/// `low` and `high` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sigkit_clopper_pearson(
    successes: u64,
    n: u64,
    confidence: f64,
    low: *mut f64,
    high: *mut f64,
) -> SigkitStatus {
    guard(|| {
        let low = out_ptr(low, "low")?;
        let high = out_ptr(high, "high")?;
        let iv = clopper_pearson(successes, n, confidence)
            .map_err(|e| Failure(SigkitStatus::InvalidInput, e.to_string()))?;
        *low = iv.low;
        *high = iv.high;
        Ok(())
    })
}

/// Precision, recall and F1 from match counts; empty denominators give 0.
///
/// # Safety
/// The three output pointers must be writable.
#[no_mangle]
pub unsafe extern "C" fn sigkit_prf(
    tp: u64,
    fp: u64,
    fn_count: u64,
    precision: *mut f64,
    recall: *mut f64,
    f1: *mut f64,
) -> SigkitStatus {
    guard(|| {
        let p = out_ptr(precision, "precision")?;
        let r = out_ptr(recall, "recall")?;
        let f = out_ptr(f1, "f1")?;
        let m = prf(MatchCounts::new(tp as usize, fp as usize, fn_count as usize));
        *p = m.precision;
        *r = m.recall;
        *f = m.f1;
        Ok(())
    })
}

/// # Safety
/// `s` must be null or a string returned by this library, freed at most once.
#[no_mangle]
pub unsafe extern "C" fn sigkit_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Message for the last failed call on this thread, or null. Valid until the
/// next call into the library on the same thread.
#[no_mangle]
pub extern "C" fn sigkit_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Library version as a static string.
#[no_mangle]
pub extern "C" fn sigkit_version() -> *const c_char {
    static VERSION: &str = concat!(env!("CARGO_PKG_VERSION"), "\0");
    VERSION.as_ptr().cast()
}
