//! C ABI over the `tgrs` library.
//!
//! Fields and codes are opaque handles created by `*_new` and released by
//! `*_free`. Every fallible call returns a [`TgrsStatus`]; on failure the
//! message is available from [`tgrs_last_error_message`] on the same thread.
//!
//! Field elements cross the boundary as indices: an element with base-p
//! coefficient vector `(c_0, ..., c_{m-1})` has index `sum c_i p^i`, so in a
//! prime field the index is the integer value.

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;
use std::slice;

use tgrs::census::{census, BPattern, CensusOptions, Tier};
use tgrs::classify::{mds_fast, parity_check, selfdual_direct};
use tgrs::grs::{grs_classify, schur_square_dim, GrsStatus};
use tgrs::{Error, EvalParams, Felt, Field, Matrix};

/// Result codes.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TgrsStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    GuardExceeded = 3,
    PreconditionFailed = 4,
    InvariantViolated = 5,
    BufferTooSmall = 6,
    Panic = 7,
}

/// GRS classification of an MDS test.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TgrsGrsStatus {
    NotMds = 0,
    Grs = 1,
    NonGrsMds = 2,
}

/// Census size limits: 10^6, 10^8 and 10^10 candidates.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TgrsTier {
    Quick = 0,
    Standard = 1,
    Long = 2,
}

/// Opaque finite field handle.
pub struct TgrsField {
    inner: Field,
}

/// Opaque code handle.
pub struct TgrsCode {
    inner: tgrs::TgrsCode,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("no interior nul");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> TgrsStatus {
    match e {
        Error::GuardExceeded { .. } => TgrsStatus::GuardExceeded,
        Error::Precondition(_) => TgrsStatus::PreconditionFailed,
        Error::Invariant(_) => TgrsStatus::InvariantViolated,
        _ => TgrsStatus::InvalidArgument,
    }
}

fn fail(status: TgrsStatus, msg: impl Into<String>) -> TgrsStatus {
    set_error(msg.into());
    status
}

/// Runs `body`, converting errors and panics into status codes.
fn guarded(body: impl FnOnce() -> Result<(), TgrsStatus>) -> TgrsStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => {
            LAST_ERROR.with(|e| *e.borrow_mut() = None);
            TgrsStatus::Ok
        }
        Ok(Err(s)) => s,
        Err(_) => fail(TgrsStatus::Panic, "internal panic"),
    }
}

fn lib_err(e: Error) -> TgrsStatus {
    fail(status_of(&e), e.to_string())
}

unsafe fn nonnull<'a, T>(p: *const T, what: &str) -> Result<&'a T, TgrsStatus> {
    p.as_ref().ok_or_else(|| fail(TgrsStatus::NullPointer, format!("{what} is null")))
}

unsafe fn read_slice<'a, T>(p: *const T, len: usize, what: &str) -> Result<&'a [T], TgrsStatus> {
    if len == 0 {
        return Ok(&[]);
    }
    if p.is_null() {
        return Err(fail(TgrsStatus::NullPointer, format!("{what} is null")));
    }
    Ok(slice::from_raw_parts(p, len))
}

fn elements(field: &Field, idx: &[u32]) -> Result<Vec<Felt>, TgrsStatus> {
    idx.iter()
        .map(|&i| field.element(i as u64).map_err(lib_err))
        .collect()
}

unsafe fn write_out<T: Copy>(out: *mut T, len: usize, values: &[T]) -> Result<(), TgrsStatus> {
    if out.is_null() {
        return Err(fail(TgrsStatus::NullPointer, "output buffer is null"));
    }
    if len < values.len() {
        return Err(fail(
            TgrsStatus::BufferTooSmall,
            format!("buffer holds {len} values, {} needed", values.len()),
        ));
    }
    ptr::copy_nonoverlapping(values.as_ptr(), out, values.len());
    Ok(())
}

fn matrix_indices(m: &Matrix) -> Vec<u32> {
    m.data().iter().map(|v| v.index()).collect()
}

/// Message of the last failed call on this thread, or NULL. The pointer is
/// valid until the next call into the library on the same thread.
#[no_mangle]
pub extern "C" fn tgrs_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn tgrs_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Creates GF(p^m). `modulus` (constant first, monic, length m+1) may be
/// NULL to use the default primitive modulus.
///
/// # Safety
/// `modulus` must point to `modulus_len` values when non-null; `out` must be
/// a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn tgrs_field_new(
    p: u64,
    m: u32,
    modulus: *const u64,
    modulus_len: usize,
    out: *mut *mut TgrsField,
) -> TgrsStatus {
    guarded(|| {
        if out.is_null() {
            return Err(fail(TgrsStatus::NullPointer, "out is null"));
        }
        let modulus = if modulus.is_null() { None } else { Some(read_slice(modulus, modulus_len, "modulus")?) };
        let field = Field::new(p, m, modulus).map_err(lib_err)?;
        *out = Box::into_raw(Box::new(TgrsField { inner: field }));
        Ok(())
    })
}

/// # Safety
/// `field` must come from [`tgrs_field_new`] and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn tgrs_field_free(field: *mut TgrsField) {
    if !field.is_null() {
        drop(Box::from_raw(field));
    }
}

/// Number of elements, or 0 for a null handle.
///
/// # Safety
/// `field` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn tgrs_field_order(field: *const TgrsField) -> u32 {
    field.as_ref().map_or(0, |f| f.inner.order())
}

/// `a * b` on element indices.
///
/// # Safety
/// `field` must be a live handle and `out` valid.
#[no_mangle]
pub unsafe extern "C" fn tgrs_field_mul(field: *const TgrsField, a: u32, b: u32, out: *mut u32) -> TgrsStatus {
    guarded(|| {
        let f = &nonnull(field, "field")?.inner;
        let v = elements(f, &[a, b])?;
        write_out(out, 1, &[f.mul(v[0], v[1]).index()])
    })
}

/// Creates a TGRS code of length `n` and dimension `k`.
///
/// `alpha` holds `n` distinct evaluation points. `nu` holds `n` nonzero
/// column multipliers, or is NULL for all ones. `b` is the row-major
/// `k x (n-k)` coefficient matrix, or NULL for zero.
///
/// # Safety
/// Pointers must be null where allowed or reference arrays of the stated sizes.
#[no_mangle]
pub unsafe extern "C" fn tgrs_code_new(
    field: *const TgrsField,
    n: usize,
    k: usize,
    alpha: *const u32,
    nu: *const u32,
    b: *const u32,
    out: *mut *mut TgrsCode,
) -> TgrsStatus {
    guarded(|| {
        let f = &nonnull(field, "field")?.inner;
        if out.is_null() {
            return Err(fail(TgrsStatus::NullPointer, "out is null"));
        }
        if k == 0 || k >= n {
            return Err(fail(TgrsStatus::InvalidArgument, format!("need 0 < k < n, got n={n}, k={k}")));
        }
        let alpha = elements(f, read_slice(alpha, n, "alpha")?)?;
        let nu = if nu.is_null() { None } else { Some(elements(f, read_slice(nu, n, "nu")?)?) };
        let params = EvalParams::new(f, k, alpha, nu).map_err(lib_err)?;
        let bm = if b.is_null() {
            Matrix::zeros(f, k, n - k)
        } else {
            let vals = elements(f, read_slice(b, k * (n - k), "b")?)?;
            Matrix::from_fn(f, k, n - k, |i, j| vals[i * (n - k) + j])
        };
        let code = tgrs::TgrsCode::from_b(params, bm).map_err(lib_err)?;
        *out = Box::into_raw(Box::new(TgrsCode { inner: code }));
        Ok(())
    })
}

/// # Safety
/// `code` must come from [`tgrs_code_new`] and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn tgrs_code_free(code: *mut TgrsCode) {
    if !code.is_null() {
        drop(Box::from_raw(code));
    }
}

/// MDS test. When the code is not MDS and `witness` is non-null, the first
/// failing k-subset (0-based, lexicographic) is written to `witness[0..k]`.
///
/// # Safety
/// `code` live; `is_mds` valid; `witness` null or `k` writable entries.
#[no_mangle]
pub unsafe extern "C" fn tgrs_code_is_mds(code: *const TgrsCode, is_mds: *mut bool, witness: *mut usize) -> TgrsStatus {
    guarded(|| {
        let c = &nonnull(code, "code")?.inner;
        let v = mds_fast(c);
        write_out(is_mds, 1, &[v.is_mds])?;
        if let (Some(w), false) = (v.witness, witness.is_null()) {
            write_out(witness, w.len(), &w)?;
        }
        Ok(())
    })
}

/// Writes the row-major `k x n` generator matrix.
///
/// # Safety
/// `code` live; `out` holds `len` entries.
#[no_mangle]
pub unsafe extern "C" fn tgrs_code_generator(code: *const TgrsCode, out: *mut u32, len: usize) -> TgrsStatus {
    guarded(|| {
        let c = &nonnull(code, "code")?.inner;
        write_out(out, len, &matrix_indices(&c.generator_matrix()))
    })
}

/// Writes the row-major `(n-k) x n` parity-check matrix.
///
/// # Safety
/// `code` live; `out` holds `len` entries.
#[no_mangle]
pub unsafe extern "C" fn tgrs_code_parity_check(code: *const TgrsCode, out: *mut u32, len: usize) -> TgrsStatus {
    guarded(|| {
        let c = &nonnull(code, "code")?.inner;
        write_out(out, len, &matrix_indices(&parity_check(c)))
    })
}

/// # Safety
/// `code` live; `out` valid.
#[no_mangle]
pub unsafe extern "C" fn tgrs_code_grs_status(code: *const TgrsCode, out: *mut TgrsGrsStatus) -> TgrsStatus {
    guarded(|| {
        let c = &nonnull(code, "code")?.inner;
        let s = match grs_classify(c) {
            GrsStatus::NotMds => TgrsGrsStatus::NotMds,
            GrsStatus::Grs => TgrsGrsStatus::Grs,
            GrsStatus::NonGrsMds => TgrsGrsStatus::NonGrsMds,
        };
        write_out(out, 1, &[s])
    })
}

/// # Safety
/// `code` live; `out` valid.
#[no_mangle]
pub unsafe extern "C" fn tgrs_code_schur_dim(code: *const TgrsCode, out: *mut usize) -> TgrsStatus {
    guarded(|| {
        let c = &nonnull(code, "code")?.inner;
        write_out(out, 1, &[schur_square_dim(&c.generator_matrix())])
    })
}

/// Whether `n = 2k` and `G G^T = 0`.
///
/// # Safety
/// `code` live; `out` valid.
#[no_mangle]
pub unsafe extern "C" fn tgrs_code_is_selfdual(code: *const TgrsCode, out: *mut bool) -> TgrsStatus {
    guarded(|| {
        let c = &nonnull(code, "code")?.inner;
        write_out(out, 1, &[selfdual_direct(c)])
    })
}

/// Counts assignments of the wildcard cells of `pattern` giving MDS codes.
///
/// `pattern` is row-major `k x (n-k)`; a negative entry is a wildcard,
/// anything else an element index. `threads = 0` uses all cores.
///
/// # Safety
/// Arrays must have the stated sizes; `count` valid.
#[no_mangle]
pub unsafe extern "C" fn tgrs_census_count(
    field: *const TgrsField,
    n: usize,
    k: usize,
    alpha: *const u32,
    pattern: *const i64,
    threads: usize,
    tier: TgrsTier,
    count: *mut u64,
) -> TgrsStatus {
    guarded(|| {
        let f = &nonnull(field, "field")?.inner;
        if k == 0 || k >= n {
            return Err(fail(TgrsStatus::InvalidArgument, format!("need 0 < k < n, got n={n}, k={k}")));
        }
        let alpha = elements(f, read_slice(alpha, n, "alpha")?)?;
        let params = EvalParams::new(f, k, alpha, None).map_err(lib_err)?;
        let cells = read_slice(pattern, k * (n - k), "pattern")?
            .iter()
            .map(|&v| {
                if v < 0 {
                    Ok(None)
                } else {
                    f.element(v as u64).map(Some).map_err(lib_err)
                }
            })
            .collect::<Result<Vec<_>, _>>()?;
        let pat = BPattern::new(f, k, n - k, cells).map_err(lib_err)?;
        let opts = CensusOptions {
            threads,
            tier: match tier {
                TgrsTier::Quick => Tier::Quick,
                TgrsTier::Standard => Tier::Standard,
                TgrsTier::Long => Tier::Long,
            },
            ..Default::default()
        };
        let rep = census(&params, &pat, &opts).map_err(lib_err)?;
        write_out(count, 1, &[rep.omega_count])
    })
}
