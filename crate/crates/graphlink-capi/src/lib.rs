//! C ABI for the graphlink library: opaque handles, status codes, and
//! string results. Every function returns a `graphlink_status`; output
//! parameters are written only on `GRAPHLINK_OK`. String results are
//! allocated here and must be released with `graphlink_string_free`; the
//! handle types must be released with their matching `_free` function.
//!
//! The most recent error message of the calling thread is available via
//! `graphlink_last_error`.

#![allow(non_camel_case_types)]

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};

use graphlink::presentation::GroupPresentation;
use graphlink::splice::{CohomologyClass, SpliceDiagram};
use graphlink::twisted::{twisted_alexander, PermRep};

/// Status code of every C-ABI call.
#[repr(C)]
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum graphlink_status {
    GRAPHLINK_OK = 0,
    GRAPHLINK_ERROR = 1,
    GRAPHLINK_PARSE_ERROR = 2,
    GRAPHLINK_PRECONDITION = 3,
    GRAPHLINK_NULL_ARGUMENT = 5,
    GRAPHLINK_INVALID_UTF8 = 6,
}

use graphlink_status::*;

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::new("").unwrap());
}

fn set_error(msg: impl ToString) {
    let msg = msg.to_string().replace('\0', " ");
    LAST_ERROR.with(|slot| {
        *slot.borrow_mut() = CString::new(msg).unwrap();
    });
}

/// Message of the last error on this thread. The pointer stays valid
/// until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn graphlink_last_error() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ptr())
}

/// Release a string returned by this library.
///
/// # Safety
/// `s` must have been returned by a graphlink function and not freed yet.
#[no_mangle]
pub unsafe extern "C" fn graphlink_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

unsafe fn read_utf8<'a>(ptr: *const c_char) -> Result<&'a str, graphlink_status> {
    if ptr.is_null() {
        set_error("null argument");
        return Err(GRAPHLINK_NULL_ARGUMENT);
    }
    CStr::from_ptr(ptr).to_str().map_err(|_| {
        set_error("argument is not valid UTF-8");
        GRAPHLINK_INVALID_UTF8
    })
}

fn give_string(out: *mut *mut c_char, value: String) -> graphlink_status {
    let c = CString::new(value.replace('\0', " ")).unwrap();
    unsafe { *out = c.into_raw() };
    GRAPHLINK_OK
}

unsafe fn read_class(phi: *const i64, len: usize) -> Result<Vec<i64>, graphlink_status> {
    if phi.is_null() && len > 0 {
        set_error("null class vector");
        return Err(GRAPHLINK_NULL_ARGUMENT);
    }
    if len == 0 {
        return Ok(Vec::new());
    }
    Ok(std::slice::from_raw_parts(phi, len).to_vec())
}

macro_rules! check_null {
    ($($ptr:expr),+) => {
        $(if $ptr.is_null() {
            set_error("null argument");
            return GRAPHLINK_NULL_ARGUMENT;
        })+
    };
}

// --------------------------------------------------------------------------
// splice diagrams

/// Opaque handle to a parsed splice diagram.
pub struct graphlink_splice(SpliceDiagram);

/// Parse a splice diagram from its text form.
///
/// # Safety
/// `text` must be a NUL-terminated string; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn graphlink_splice_parse(
    text: *const c_char,
    out: *mut *mut graphlink_splice,
) -> graphlink_status {
    check_null!(out);
    let text = match read_utf8(text) {
        Ok(t) => t,
        Err(code) => return code,
    };
    match SpliceDiagram::parse(text) {
        Ok(d) => {
            *out = Box::into_raw(Box::new(graphlink_splice(d)));
            GRAPHLINK_OK
        }
        Err(e) => {
            set_error(e);
            GRAPHLINK_PARSE_ERROR
        }
    }
}

/// # Safety
/// `handle` must come from `graphlink_splice_parse` and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn graphlink_splice_free(handle: *mut graphlink_splice) {
    if !handle.is_null() {
        drop(Box::from_raw(handle));
    }
}

/// Number of link components (arrowhead vertices).
///
/// # Safety
/// `handle` and `out` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn graphlink_splice_components(
    handle: *const graphlink_splice,
    out: *mut usize,
) -> graphlink_status {
    check_null!(handle, out);
    *out = (*handle).0.num_components();
    GRAPHLINK_OK
}

/// Multivariable Alexander polynomial in text form.
///
/// # Safety
/// `handle` and `out` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn graphlink_splice_alexander(
    handle: *const graphlink_splice,
    out: *mut *mut c_char,
) -> graphlink_status {
    check_null!(handle, out);
    match (*handle).0.alexander_polynomial() {
        Ok(p) => give_string(out, p.to_string()),
        Err(e) => {
            set_error(e);
            GRAPHLINK_PRECONDITION
        }
    }
}

/// Thurston norm of a class (`phi` has one entry per component).
///
/// # Safety
/// `handle` and `out` must be valid; `phi` must point to `len` values.
#[no_mangle]
pub unsafe extern "C" fn graphlink_splice_thurston_norm(
    handle: *const graphlink_splice,
    phi: *const i64,
    len: usize,
    out: *mut i64,
) -> graphlink_status {
    check_null!(handle, out);
    let class = match read_class(phi, len) {
        Ok(c) => c,
        Err(code) => return code,
    };
    match (*handle).0.thurston_norm(&CohomologyClass(class)) {
        Ok(n) => {
            *out = n;
            GRAPHLINK_OK
        }
        Err(e) => {
            set_error(e);
            GRAPHLINK_PRECONDITION
        }
    }
}

/// Whether the class fibers: writes 1 or 0.
///
/// # Safety
/// `handle` and `out` must be valid; `phi` must point to `len` values.
#[no_mangle]
pub unsafe extern "C" fn graphlink_splice_is_fibered(
    handle: *const graphlink_splice,
    phi: *const i64,
    len: usize,
    out: *mut i32,
) -> graphlink_status {
    check_null!(handle, out);
    let class = match read_class(phi, len) {
        Ok(c) => c,
        Err(code) => return code,
    };
    match (*handle).0.is_fibered(&CohomologyClass(class)) {
        Ok(f) => {
            *out = i32::from(f);
            GRAPHLINK_OK
        }
        Err(e) => {
            set_error(e);
            GRAPHLINK_PRECONDITION
        }
    }
}

/// Genus of a knot diagram.
///
/// # Safety
/// `handle` and `out` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn graphlink_splice_genus(
    handle: *const graphlink_splice,
    out: *mut i64,
) -> graphlink_status {
    check_null!(handle, out);
    match (*handle).0.genus() {
        Ok(g) => {
            *out = g;
            GRAPHLINK_OK
        }
        Err(e) => {
            set_error(e);
            GRAPHLINK_PRECONDITION
        }
    }
}

/// Single-variable polynomial of a class on a link.
///
/// # Safety
/// `handle` and `out` must be valid; `phi` must point to `len` values.
#[no_mangle]
pub unsafe extern "C" fn graphlink_splice_specialize(
    handle: *const graphlink_splice,
    phi: *const i64,
    len: usize,
    out: *mut *mut c_char,
) -> graphlink_status {
    check_null!(handle, out);
    let class = match read_class(phi, len) {
        Ok(c) => c,
        Err(code) => return code,
    };
    let d = &(*handle).0;
    let delta = match d.alexander_polynomial() {
        Ok(p) => p,
        Err(e) => {
            set_error(e);
            return GRAPHLINK_PRECONDITION;
        }
    };
    match d.specialize(&delta, &CohomologyClass(class)) {
        Ok(p) => give_string(out, p.to_string()),
        Err(e) => {
            set_error(e);
            GRAPHLINK_PRECONDITION
        }
    }
}

// --------------------------------------------------------------------------
// finitely presented groups

/// Opaque handle to a parsed group presentation.
pub struct graphlink_group(GroupPresentation);

/// Parse a group presentation from its text form.
///
/// # Safety
/// `text` must be a NUL-terminated string; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn graphlink_group_parse(
    text: *const c_char,
    out: *mut *mut graphlink_group,
) -> graphlink_status {
    check_null!(out);
    let text = match read_utf8(text) {
        Ok(t) => t,
        Err(code) => return code,
    };
    match GroupPresentation::parse(text) {
        Ok(g) => {
            *out = Box::into_raw(Box::new(graphlink_group(g)));
            GRAPHLINK_OK
        }
        Err(e) => {
            set_error(e);
            GRAPHLINK_PARSE_ERROR
        }
    }
}

/// # Safety
/// `handle` must come from `graphlink_group_parse` and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn graphlink_group_free(handle: *mut graphlink_group) {
    if !handle.is_null() {
        drop(Box::from_raw(handle));
    }
}

/// Number of generators.
///
/// # Safety
/// `handle` and `out` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn graphlink_group_num_generators(
    handle: *const graphlink_group,
    out: *mut usize,
) -> graphlink_status {
    check_null!(handle, out);
    *out = (*handle).0.num_generators();
    GRAPHLINK_OK
}

/// Free rank of the abelianization.
///
/// # Safety
/// `handle` and `out` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn graphlink_group_rank(
    handle: *const graphlink_group,
    out: *mut usize,
) -> graphlink_status {
    check_null!(handle, out);
    match (*handle).0.abelianize() {
        Ok(ab) => {
            *out = ab.rank;
            GRAPHLINK_OK
        }
        Err(e) => {
            set_error(e);
            GRAPHLINK_PRECONDITION
        }
    }
}

/// Express a class on the H1 basis as a character on the generators:
/// writes one value per generator into `out` (`out_len` must equal the
/// generator count).
///
/// # Safety
/// `handle` must be valid; `phi` must point to `len` values; `out` must
/// point to `out_len` writable values.
#[no_mangle]
pub unsafe extern "C" fn graphlink_group_character(
    handle: *const graphlink_group,
    phi: *const i64,
    len: usize,
    out: *mut i64,
    out_len: usize,
) -> graphlink_status {
    check_null!(handle, out);
    let class = match read_class(phi, len) {
        Ok(c) => c,
        Err(code) => return code,
    };
    let g = &(*handle).0;
    if out_len != g.num_generators() {
        set_error(format!(
            "output length {} does not match {} generators",
            out_len,
            g.num_generators()
        ));
        return GRAPHLINK_PRECONDITION;
    }
    let ab = match g.abelianize() {
        Ok(ab) => ab,
        Err(e) => {
            set_error(e);
            return GRAPHLINK_PRECONDITION;
        }
    };
    match ab.class_as_char(&class) {
        Ok(chi) => {
            for (i, v) in chi.iter().enumerate() {
                *out.add(i) = *v;
            }
            GRAPHLINK_OK
        }
        Err(e) => {
            set_error(e);
            GRAPHLINK_PRECONDITION
        }
    }
}

// --------------------------------------------------------------------------
// representations and twisted polynomials

/// Opaque handle to a parsed permutation representation.
pub struct graphlink_rep(PermRep);

/// Parse a representation from its text form.
///
/// # Safety
/// `text` must be a NUL-terminated string; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn graphlink_rep_parse(
    text: *const c_char,
    out: *mut *mut graphlink_rep,
) -> graphlink_status {
    check_null!(out);
    let text = match read_utf8(text) {
        Ok(t) => t,
        Err(code) => return code,
    };
    match PermRep::parse(text) {
        Ok(r) => {
            *out = Box::into_raw(Box::new(graphlink_rep(r)));
            GRAPHLINK_OK
        }
        Err(e) => {
            set_error(e);
            GRAPHLINK_PARSE_ERROR
        }
    }
}

/// # Safety
/// `handle` must come from `graphlink_rep_parse` and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn graphlink_rep_free(handle: *mut graphlink_rep) {
    if !handle.is_null() {
        drop(Box::from_raw(handle));
    }
}

/// Whether the representation respects every relator: writes 1 or 0.
///
/// # Safety
/// All pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn graphlink_rep_respects(
    group: *const graphlink_group,
    rep: *const graphlink_rep,
    out: *mut i32,
) -> graphlink_status {
    check_null!(group, rep, out);
    match (*rep).0.respects(&(*group).0) {
        Ok(f) => {
            *out = i32::from(f);
            GRAPHLINK_OK
        }
        Err(e) => {
            set_error(e);
            GRAPHLINK_PRECONDITION
        }
    }
}

/// Twisted Alexander polynomial at one prime, in text form. `chi` is the
/// character, one value per generator. With `tilde` nonzero the secondary
/// polynomial (the product of the torsion invariants) is returned instead.
///
/// # Safety
/// All pointers must be valid; `chi` must point to `len` values.
#[no_mangle]
pub unsafe extern "C" fn graphlink_twisted_delta(
    group: *const graphlink_group,
    rep: *const graphlink_rep,
    chi: *const i64,
    len: usize,
    prime: u64,
    tilde: i32,
    out: *mut *mut c_char,
) -> graphlink_status {
    check_null!(group, rep, out);
    let g = &(*group).0;
    let character = match read_class(chi, len) {
        Ok(c) => c,
        Err(code) => return code,
    };
    if character.len() != g.num_generators() {
        set_error(format!(
            "character length {} does not match {} generators",
            character.len(),
            g.num_generators()
        ));
        return GRAPHLINK_PRECONDITION;
    }
    match twisted_alexander(g, &(*rep).0, &character, prime, None) {
        Ok(res) => {
            let poly = if tilde != 0 {
                res.delta_tilde
            } else {
                res.delta
            };
            give_string(out, poly.to_string())
        }
        Err(e) => {
            set_error(e);
            GRAPHLINK_PRECONDITION
        }
    }
}
