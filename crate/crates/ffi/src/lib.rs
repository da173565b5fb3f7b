//! C interface to `invq`.
//!
//! Trees and results are opaque handles owned by the caller and released with
//! the matching `_free` function. Every fallible call returns an `INVQ_*`
//! status code; the message for the most recent failure on the calling thread
//! is available from [`invq_last_error`].

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use invq::baselines::Algorithm;
use invq::{AggRTree, Chromacity, Error, InverseQuerySpec, Point, Predicate, QueryReport, QuerySet};

pub const INVQ_OK: i32 = 0;
/// A required pointer argument was null.
pub const INVQ_ERR_NULL: i32 = 1;
/// Bad predicate, parameter, algorithm or query ids.
pub const INVQ_ERR_INVALID: i32 = 2;
/// Coordinates were not finite or dimensions disagree.
pub const INVQ_ERR_DATA: i32 = 3;
/// Duplicate object id in the input.
pub const INVQ_ERR_DUPLICATE_ID: i32 = 4;
/// A Rust panic was caught at the boundary.
pub const INVQ_ERR_PANIC: i32 = 5;
pub const INVQ_ERR_OTHER: i32 = 6;

pub const INVQ_PRED_EPS: i32 = 0;
pub const INVQ_PRED_KNN: i32 = 1;
pub const INVQ_PRED_SKYLINE: i32 = 2;

pub const INVQ_ALGO_MQF: i32 = 0;
pub const INVQ_ALGO_SQF: i32 = 1;
pub const INVQ_ALGO_NAIVE: i32 = 2;

/// Opaque aggregate R-tree.
pub struct InvqTree {
    inner: AggRTree,
}

/// Opaque query result.
pub struct InvqResult {
    inner: QueryReport,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: impl Into<String>) {
    let s = CString::new(msg.into().replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = s);
}

fn code_of(e: &Error) -> i32 {
    match e {
        Error::InvalidSpec(_) | Error::Empty(_) | Error::EmptyRect => INVQ_ERR_INVALID,
        Error::DimensionMismatch { .. } | Error::ZeroDimension | Error::NonFinite(_) => INVQ_ERR_DATA,
        Error::DuplicateId(_) => INVQ_ERR_DUPLICATE_ID,
        _ => INVQ_ERR_OTHER,
    }
}

fn fail(code: i32, msg: impl Into<String>) -> i32 {
    set_error(msg);
    code
}

fn guard(f: impl FnOnce() -> i32) -> i32 {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(code) => code,
        Err(_) => fail(INVQ_ERR_PANIC, "internal panic"),
    }
}

/// Message for the last failed call on this thread. The pointer stays valid
/// until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn invq_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Builds a tree over `n` points of dimension `dim`, stored row-major in
/// `coords`. `ids` may be null, in which case ids are `0..n`. A `page_size`
/// of 0 selects 1024 bytes.
///
/// # Safety
/// `coords` must point to `n * dim` doubles, `ids` (if non-null) to `n`
/// integers, and `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn invq_tree_build(
    coords: *const f64,
    ids: *const u64,
    n: usize,
    dim: usize,
    page_size: usize,
    out: *mut *mut InvqTree,
) -> i32 {
    guard(|| {
        if out.is_null() || (coords.is_null() && n * dim > 0) {
            return fail(INVQ_ERR_NULL, "null pointer argument");
        }
        *out = ptr::null_mut();
        if n == 0 || dim == 0 {
            return fail(INVQ_ERR_INVALID, "need at least one point and one dimension");
        }
        let flat = std::slice::from_raw_parts(coords, n * dim);
        let ids = (!ids.is_null()).then(|| std::slice::from_raw_parts(ids, n));
        let mut points = Vec::with_capacity(n);
        for (i, row) in flat.chunks_exact(dim).enumerate() {
            let id = ids.map_or(i as u64, |s| s[i]);
            match Point::new(id, row.to_vec()) {
                Ok(p) => points.push(p),
                Err(e) => return fail(code_of(&e), e.to_string()),
            }
        }
        let page = if page_size == 0 { 1024 } else { page_size };
        match AggRTree::bulk_load(points, page) {
            Ok(t) => {
                *out = Box::into_raw(Box::new(InvqTree { inner: t }));
                INVQ_OK
            }
            Err(e) => fail(code_of(&e), e.to_string()),
        }
    })
}

/// # Safety
/// `tree` must be null or a handle from [`invq_tree_build`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn invq_tree_free(tree: *mut InvqTree) {
    if !tree.is_null() {
        drop(Box::from_raw(tree));
    }
}

/// Number of objects, or 0 for a null handle.
///
/// # Safety
/// `tree` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn invq_tree_len(tree: *const InvqTree) -> usize {
    tree.as_ref().map_or(0, |t| t.inner.len())
}

/// # Safety
/// `tree` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn invq_tree_dim(tree: *const InvqTree) -> usize {
    tree.as_ref().map_or(0, |t| t.inner.dim())
}

fn predicate(kind: i32, param: f64) -> Result<Predicate, String> {
    match kind {
        INVQ_PRED_EPS => Ok(Predicate::EpsRange(param)),
        INVQ_PRED_KNN if param >= 1.0 && param.fract() == 0.0 && param <= usize::MAX as f64 => {
            Ok(Predicate::Knn(param as usize))
        }
        INVQ_PRED_KNN => Err(format!("k must be a positive integer, got {param}")),
        INVQ_PRED_SKYLINE => Ok(Predicate::DynamicSkyline),
        other => Err(format!("unknown predicate {other}")),
    }
}

fn algorithm(code: i32) -> Result<Algorithm, String> {
    match code {
        INVQ_ALGO_MQF => Ok(Algorithm::Mqf),
        INVQ_ALGO_SQF => Ok(Algorithm::Sqf),
        INVQ_ALGO_NAIVE => Ok(Algorithm::Naive),
        other => Err(format!("unknown algorithm {other}")),
    }
}

/// Runs an inverse query whose query objects are the objects of `tree` with
/// ids `query_ids[0..m]`. `param` is ε for range queries, k for kNN and is
/// ignored for skylines. When `candidates` is non-null the query is
/// bichromatic and results are drawn from that tree. `seed` only affects SQF's
/// pivot choice.
///
/// # Safety
/// `tree` must be a live handle, `candidates` null or a live handle,
/// `query_ids` must point to `m` integers and `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn invq_query(
    tree: *const InvqTree,
    candidates: *const InvqTree,
    predicate_kind: i32,
    param: f64,
    query_ids: *const u64,
    m: usize,
    algo: i32,
    seed: u64,
    out: *mut *mut InvqResult,
) -> i32 {
    guard(|| {
        if tree.is_null() || out.is_null() || (query_ids.is_null() && m > 0) {
            return fail(INVQ_ERR_NULL, "null pointer argument");
        }
        *out = ptr::null_mut();
        let t = &(*tree).inner;
        let pred = match predicate(predicate_kind, param) {
            Ok(p) => p,
            Err(msg) => return fail(INVQ_ERR_INVALID, msg),
        };
        let algo = match algorithm(algo) {
            Ok(a) => a,
            Err(msg) => return fail(INVQ_ERR_INVALID, msg),
        };
        let ids = if m == 0 { &[][..] } else { std::slice::from_raw_parts(query_ids, m) };
        let mut members = Vec::with_capacity(m);
        for &id in ids {
            match t.lookup(id) {
                Some(p) => members.push(p.clone()),
                None => return fail(INVQ_ERR_INVALID, format!("no object with id {id}")),
            }
        }
        let query = match QuerySet::new(members) {
            Ok(q) => q,
            Err(e) => return fail(code_of(&e), e.to_string()),
        };
        let aux = candidates.as_ref().map(|c| &c.inner);
        let mut spec = InverseQuerySpec::new(pred, query);
        if aux.is_some() {
            spec.mode = Chromacity::Bichromatic;
        }
        match algo.run(&spec, t, aux, seed) {
            Ok(r) => {
                *out = Box::into_raw(Box::new(InvqResult { inner: r }));
                INVQ_OK
            }
            Err(e) => fail(code_of(&e), e.to_string()),
        }
    })
}

/// # Safety
/// `res` must be null or a handle from [`invq_query`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn invq_result_free(res: *mut InvqResult) {
    if !res.is_null() {
        drop(Box::from_raw(res));
    }
}

/// Number of result ids.
///
/// # Safety
/// `res` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn invq_result_len(res: *const InvqResult) -> usize {
    res.as_ref().map_or(0, |r| r.inner.results.len())
}

/// Copies up to `cap` result ids, in ascending order, into `buf` and returns
/// the total number of results.
///
/// # Safety
/// `res` must be null or a live handle and `buf` must have room for `cap`
/// integers (it may be null when `cap` is 0).
#[no_mangle]
pub unsafe extern "C" fn invq_result_ids(res: *const InvqResult, buf: *mut u64, cap: usize) -> usize {
    let Some(r) = res.as_ref() else { return 0 };
    let ids = &r.inner.results;
    if !buf.is_null() {
        let n = ids.len().min(cap);
        ptr::copy_nonoverlapping(ids.as_ptr(), buf, n);
    }
    ids.len()
}

/// Index nodes read while answering the query.
///
/// # Safety
/// `res` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn invq_result_node_reads(res: *const InvqResult) -> u64 {
    res.as_ref().map_or(0, |r| r.inner.node_reads)
}

/// 1 when the answer was proved empty before touching the index.
///
/// # Safety
/// `res` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn invq_result_validated_empty(res: *const InvqResult) -> i32 {
    res.as_ref().map_or(0, |r| i32::from(r.inner.validated_empty))
}

/// Wall-clock time of the query in milliseconds.
///
/// # Safety
/// `res` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn invq_result_time_ms(res: *const InvqResult) -> f64 {
    res.as_ref().map_or(0.0, |r| r.inner.wall_time.as_secs_f64() * 1e3)
}
