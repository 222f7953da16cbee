//! C interface to `taut-core`.
//!
//! Results live behind opaque handles released with the matching `*_free`
//! function. Strings returned through `char **` out-parameters are owned by
//! the caller and released with [`taut_string_free`]. Every function
//! returns a [`TautStatus`]; on failure [`taut_last_error`] describes what
//! went wrong on the calling thread. Panics never cross the boundary.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use taut_core::chain::{self, StrataOptions};
use taut_core::elsv::{self, HodgeTable};
use taut_core::graphs;
use taut_core::hurwitz::{self, HurwitzValue, DEFAULT_BUDGET};
use taut_core::symmetric::HurwitzProblem;
use taut_core::{scalar, Error};

/// Outcome of a call. The first five values agree with the exit codes of
/// the `taut` command line tool.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TautStatus {
    Ok = 0,
    Internal = 1,
    BudgetExceeded = 2,
    InvalidDomain = 3,
    RankDeficient = 4,
    NullPointer = 5,
    NotFound = 6,
    Panic = 7,
}

/// Which counting route [`taut_hurwitz`] takes, passed as its integer value.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TautMethod {
    Fast = 0,
    Brute = 1,
}

/// A computed Hurwitz number.
pub struct TautHurwitz(HurwitzValue);

/// A table of linear Hodge integrals for one `(g, n)`.
pub struct TautHodgeTable(HodgeTable);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).expect("no interior nul");
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn status_of(e: &Error) -> TautStatus {
    match e.exit_code() {
        2 => TautStatus::BudgetExceeded,
        3 => TautStatus::InvalidDomain,
        4 => TautStatus::RankDeficient,
        _ => TautStatus::Internal,
    }
}

/// Runs `f`, recording errors and catching panics.
fn guard(f: impl FnOnce() -> Result<(), TautStatus>) -> TautStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_error("");
            TautStatus::Ok
        }
        Ok(Err(s)) => s,
        Err(_) => {
            set_error("internal panic");
            TautStatus::Panic
        }
    }
}

fn fail(e: Error) -> TautStatus {
    set_error(&e.to_string());
    status_of(&e)
}

fn null(what: &str) -> TautStatus {
    set_error(&format!("{what} is null"));
    TautStatus::NullPointer
}

unsafe fn parts<'a>(ptr: *const u32, len: usize) -> Result<&'a [u32], TautStatus> {
    if len == 0 {
        return Ok(&[]);
    }
    if ptr.is_null() {
        return Err(null("parts"));
    }
    Ok(std::slice::from_raw_parts(ptr, len))
}

unsafe fn put_string(out: *mut *mut c_char, s: String) -> Result<(), TautStatus> {
    if out.is_null() {
        return Err(null("out"));
    }
    let c = CString::new(s).map_err(|_| {
        set_error("string contains nul");
        TautStatus::Internal
    })?;
    *out = c.into_raw();
    Ok(())
}

unsafe fn put<T>(out: *mut T, v: T) -> Result<(), TautStatus> {
    if out.is_null() {
        return Err(null("out"));
    }
    *out = v;
    Ok(())
}

fn budget_or_default(budget: u64) -> u128 {
    if budget == 0 {
        DEFAULT_BUDGET
    } else {
        budget as u128
    }
}

fn json<T: serde::Serialize>(v: &T) -> Result<String, TautStatus> {
    serde_json::to_string(v).map_err(|e| fail(e.into()))
}

/// Library version, a static string.
#[no_mangle]
pub extern "C" fn taut_version() -> *const c_char {
    static VERSION: &CStr =
        match CStr::from_bytes_with_nul(concat!(env!("CARGO_PKG_VERSION"), "\0").as_bytes()) {
            Ok(v) => v,
            Err(_) => panic!("version has a nul"),
        };
    VERSION.as_ptr()
}

/// Message for the last failed call on this thread; empty after a success.
/// Valid until the next call on the same thread.
#[no_mangle]
pub extern "C" fn taut_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn taut_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Counts connected covers of genus `genus` with profile `alpha` over
/// infinity. `budget` bounds the exhaustive search, 0 for the default.
///
/// # Safety
/// `alpha` must point to `len` values and `out` to writable storage.
#[no_mangle]
pub unsafe extern "C" fn taut_hurwitz(
    genus: u32,
    alpha: *const u32,
    len: usize,
    method: u32,
    budget: u64,
    out: *mut *mut TautHurwitz,
) -> TautStatus {
    guard(|| {
        let alpha = parts(alpha, len)?.to_vec();
        let problem = HurwitzProblem::new(genus, alpha).map_err(fail)?;
        let value = match method {
            m if m == TautMethod::Fast as u32 => hurwitz::hurwitz_fast(&problem),
            m if m == TautMethod::Brute as u32 => {
                hurwitz::hurwitz_brute_with(&problem, budget_or_default(budget)).map_err(fail)?
            }
            m => {
                set_error(&format!("unknown method {m}"));
                return Err(TautStatus::Internal);
            }
        };
        put(out, Box::into_raw(Box::new(TautHurwitz(value))))
    })
}

/// `H` as an exact `"p/q"` string.
///
/// # Safety
/// `value` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn taut_hurwitz_h(
    value: *const TautHurwitz,
    out: *mut *mut c_char,
) -> TautStatus {
    guard(|| {
        let v = value.as_ref().ok_or_else(|| null("value"))?;
        put_string(out, scalar::format(&v.0.h))
    })
}

/// `#Aut(alpha) · H`, the degree of the labeled Hurwitz class.
///
/// # Safety
/// `value` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn taut_hurwitz_h_labeled(
    value: *const TautHurwitz,
    out: *mut *mut c_char,
) -> TautStatus {
    guard(|| {
        let v = value.as_ref().ok_or_else(|| null("value"))?;
        put_string(out, scalar::format(&v.0.h_labeled))
    })
}

/// Number of monodromy tuples, in decimal.
///
/// # Safety
/// `value` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn taut_hurwitz_tuple_count(
    value: *const TautHurwitz,
    out: *mut *mut c_char,
) -> TautStatus {
    guard(|| {
        let v = value.as_ref().ok_or_else(|| null("value"))?;
        put_string(out, v.0.tuple_count.to_string())
    })
}

/// # Safety
/// `value` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn taut_hurwitz_to_json(
    value: *const TautHurwitz,
    out: *mut *mut c_char,
) -> TautStatus {
    guard(|| {
        let v = value.as_ref().ok_or_else(|| null("value"))?;
        put_string(out, json(&v.0)?)
    })
}

/// # Safety
/// `value` must come from [`taut_hurwitz`] and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn taut_hurwitz_free(value: *mut TautHurwitz) {
    if !value.is_null() {
        drop(Box::from_raw(value));
    }
}

/// Interpolates the Hodge integrals of `(genus, n)` from Hurwitz numbers.
/// `max_part` fixes the grid; 0 grows it until points are left to check.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn taut_hodge_interpolate(
    genus: u32,
    n: usize,
    max_part: u32,
    out: *mut *mut TautHodgeTable,
) -> TautStatus {
    guard(|| {
        let interp = if max_part == 0 {
            elsv::auto_interpolate(genus, n, &[])
        } else {
            elsv::interpolate_on_grid(genus, n, max_part)
        }
        .map_err(fail)?;
        put(out, Box::into_raw(Box::new(TautHodgeTable(interp.table))))
    })
}

/// Number of integrals in the table.
///
/// # Safety
/// `table` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn taut_hodge_table_len(
    table: *const TautHodgeTable,
    out: *mut usize,
) -> TautStatus {
    guard(|| {
        let t = table.as_ref().ok_or_else(|| null("table"))?;
        put(out, t.0.entries.len())
    })
}

/// The integral of `psi_1^a_1 … psi_n^a_n lambda_k`, exponents in any order.
/// `NotFound` when the table has no such entry.
///
/// # Safety
/// `table` must be a live handle, `a` must point to `len` values and `out`
/// must be writable.
#[no_mangle]
pub unsafe extern "C" fn taut_hodge_table_get(
    table: *const TautHodgeTable,
    a: *const u32,
    len: usize,
    k: u32,
    out: *mut *mut c_char,
) -> TautStatus {
    guard(|| {
        let t = table.as_ref().ok_or_else(|| null("table"))?;
        let a = parts(a, len)?;
        match t.0.get(a, k) {
            Some(v) => put_string(out, scalar::format(v)),
            None => {
                set_error("no such integral in the table");
                Err(TautStatus::NotFound)
            }
        }
    })
}

/// # Safety
/// `table` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn taut_hodge_table_to_json(
    table: *const TautHodgeTable,
    out: *mut *mut c_char,
) -> TautStatus {
    guard(|| {
        let t = table.as_ref().ok_or_else(|| null("table"))?;
        put_string(out, json(&t.0)?)
    })
}

/// # Safety
/// `table` must come from [`taut_hodge_interpolate`] and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn taut_hodge_table_free(table: *mut TautHodgeTable) {
    if !table.is_null() {
        drop(Box::from_raw(table));
    }
}

/// Checks both forms of ELSV at one profile against `table`; `*equal` is 1
/// when both hold.
///
/// # Safety
/// `table` must be a live handle, `alpha` must point to `len` values and
/// `equal` must be writable.
#[no_mangle]
pub unsafe extern "C" fn taut_elsv_verify(
    genus: u32,
    alpha: *const u32,
    len: usize,
    table: *const TautHodgeTable,
    equal: *mut i32,
) -> TautStatus {
    guard(|| {
        let t = table.as_ref().ok_or_else(|| null("table"))?;
        let problem = HurwitzProblem::new(genus, parts(alpha, len)?.to_vec()).map_err(fail)?;
        let reports = elsv::verify_elsv(&problem, &t.0).map_err(fail)?;
        put(equal, reports.iter().all(|r| r.equal) as i32)
    })
}

/// Number of trivalent stable graphs of `(genus, n)` up to isomorphism.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn taut_top_strata_count(
    genus: u32,
    n: usize,
    out: *mut usize,
) -> TautStatus {
    guard(|| {
        let strata = graphs::enumerate_top_strata(genus, n).map_err(fail)?;
        put(out, strata.len())
    })
}

/// The trivalent stable graphs of `(genus, n)` as a JSON array.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn taut_top_strata_json(
    genus: u32,
    n: usize,
    out: *mut *mut c_char,
) -> TautStatus {
    guard(|| {
        let strata = graphs::enumerate_top_strata(genus, n).map_err(fail)?;
        put_string(out, json(&strata)?)
    })
}

/// Number of classes of top strata connected by duality moves; the search
/// certificate is checked before returning.
///
/// # Safety
/// `components` must be writable.
#[no_mangle]
pub unsafe extern "C" fn taut_connectivity(
    genus: u32,
    n: usize,
    components: *mut usize,
) -> TautStatus {
    guard(|| {
        let cert = graphs::connectivity_certificate(genus, n).map_err(fail)?;
        graphs::verify_certificate(&cert).map_err(fail)?;
        put(components, cert.components.len())
    })
}

/// The connectivity certificate as JSON.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn taut_connectivity_json(
    genus: u32,
    n: usize,
    out: *mut *mut c_char,
) -> TautStatus {
    guard(|| {
        let cert = graphs::connectivity_certificate(genus, n).map_err(fail)?;
        put_string(out, json(&cert)?)
    })
}

/// Degenerates every cover onto a chain of rational curves and returns the
/// stratum histogram as JSON. A histogram whose total disagrees with the
/// Hurwitz number is returned with status `Internal`.
///
/// # Safety
/// `alpha` must point to `len` values and `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn taut_degenerate_json(
    genus: u32,
    alpha: *const u32,
    len: usize,
    budget: u64,
    out: *mut *mut c_char,
) -> TautStatus {
    guard(|| {
        let problem = HurwitzProblem::new(genus, parts(alpha, len)?.to_vec()).map_err(fail)?;
        if !problem.is_stable() {
            return Err(fail(Error::Unstable {
                g: genus,
                n: problem.n(),
            }));
        }
        let opts = StrataOptions {
            budget: budget_or_default(budget),
            ..Default::default()
        };
        let hist = chain::hurwitz_to_strata(&problem, opts).map_err(fail)?;
        put_string(out, json(&hist)?)?;
        if hist.matches() {
            Ok(())
        } else {
            set_error("histogram total differs from the Hurwitz number");
            Err(TautStatus::Internal)
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::ptr;

    unsafe fn take(s: *mut c_char) -> String {
        let out = CStr::from_ptr(s).to_str().unwrap().to_owned();
        taut_string_free(s);
        out
    }

    #[test]
    fn null_out_is_reported() {
        let alpha = [2u32];
        let st = unsafe {
            taut_hurwitz(
                1,
                alpha.as_ptr(),
                1,
                TautMethod::Fast as u32,
                0,
                ptr::null_mut(),
            )
        };
        assert_eq!(st, TautStatus::NullPointer);
        let msg = unsafe { CStr::from_ptr(taut_last_error()) }
            .to_str()
            .unwrap();
        assert!(msg.contains("null"));
    }

    #[test]
    fn hurwitz_round_trip() {
        let alpha = [2u32];
        let mut h = ptr::null_mut();
        unsafe {
            assert_eq!(
                taut_hurwitz(1, alpha.as_ptr(), 1, TautMethod::Brute as u32, 0, &mut h),
                TautStatus::Ok
            );
            let mut s = ptr::null_mut();
            assert_eq!(taut_hurwitz_h(h, &mut s), TautStatus::Ok);
            assert_eq!(take(s), "1/2");
            taut_hurwitz_free(h);
        }
    }
}
