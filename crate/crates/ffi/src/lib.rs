//! C ABI over `flipdist`.
//!
//! Every fallible function returns an [`FdStatus`] and writes its result
//! through out-pointers. Handles are opaque; each one returned to the caller
//! must be released with the matching `*_free` function. On failure the
//! calling thread's last error message is set (see [`fd_last_error_message`]).
//! Panics are caught at the boundary and reported as `FD_STATUS_PANIC`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use flipdist::fpt::{Solver, SolverConfig, SolverError, StackMode};
use flipdist::instance::{parse_instance, Instance, InstanceError};
use flipdist::oracle::{bfs_distance, BfsConfig, OracleError};
use flipdist::triangulation::{FlipError, PointSetMismatch, TriangulationError};
use flipdist::{Edge, PointSet, Triangulation};

/// Result code of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FdStatus {
    Ok = 0,
    /// A required pointer argument was NULL.
    NullPointer = 1,
    /// Malformed text, an invalid triangulation, or an illegal flip.
    InvalidInput = 2,
    /// A search hit its node or state budget.
    BudgetExceeded = 3,
    /// The two triangulations are over different point sets.
    PointSetMismatch = 4,
    /// No value: the instance has no `k`, or the distance exceeds the cap.
    NotFound = 5,
    /// The output buffer is too small; the required size was written.
    BufferTooSmall = 6,
    /// Internal error. The library state is unaffected.
    Panic = 7,
}

/// A parsed instance file.
pub struct FdInstance {
    inner: Instance,
}

/// A triangulation of a point set.
pub struct FdTriangulation {
    inner: Triangulation,
}

/// Options of the decision procedure.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct FdSolverOptions {
    /// Memoize solver states. Does not change answers.
    pub pruning: bool,
    /// Keep the walker's stack between runs.
    pub persist_stack: bool,
    /// Abort after this many generated states; 0 means unlimited.
    pub state_budget: u64,
}

impl From<FdSolverOptions> for SolverConfig {
    fn from(o: FdSolverOptions) -> Self {
        SolverConfig {
            pruning: o.pruning,
            stack_mode: if o.persist_stack { StackMode::Persist } else { StackMode::ClearPerIteration },
            state_budget: (o.state_budget > 0).then_some(o.state_budget),
        }
    }
}

struct Failure {
    status: FdStatus,
    message: String,
}

impl Failure {
    fn new(status: FdStatus, message: impl Into<String>) -> Self {
        Failure { status, message: message.into() }
    }
}

impl From<InstanceError> for Failure {
    fn from(e: InstanceError) -> Self {
        Failure::new(FdStatus::InvalidInput, e.to_string())
    }
}

impl From<TriangulationError> for Failure {
    fn from(e: TriangulationError) -> Self {
        Failure::new(FdStatus::InvalidInput, e.to_string())
    }
}

impl From<FlipError> for Failure {
    fn from(e: FlipError) -> Self {
        Failure::new(FdStatus::InvalidInput, e.to_string())
    }
}

impl From<PointSetMismatch> for Failure {
    fn from(e: PointSetMismatch) -> Self {
        Failure::new(FdStatus::PointSetMismatch, e.to_string())
    }
}

impl From<OracleError> for Failure {
    fn from(e: OracleError) -> Self {
        let status = match e {
            OracleError::PointSetMismatch(_) => FdStatus::PointSetMismatch,
            OracleError::BudgetExceeded(_) => FdStatus::BudgetExceeded,
        };
        Failure::new(status, e.to_string())
    }
}

impl From<SolverError> for Failure {
    fn from(e: SolverError) -> Self {
        let status = match e {
            SolverError::PointSetMismatch(_) => FdStatus::PointSetMismatch,
            SolverError::BudgetExceeded(_) => FdStatus::BudgetExceeded,
        };
        Failure::new(status, e.to_string())
    }
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(message: String) {
    let c = CString::new(message).unwrap_or_else(|e| {
        let mut bytes = e.into_vec();
        bytes.retain(|&b| b != 0);
        CString::new(bytes).expect("NUL bytes removed")
    });
    LAST_ERROR.with(|slot| *slot.borrow_mut() = Some(c));
}

fn guard(f: impl FnOnce() -> Result<(), Failure>) -> FdStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => FdStatus::Ok,
        Ok(Err(fail)) => {
            set_last_error(fail.message);
            fail.status
        }
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".into());
            set_last_error(format!("internal error: {msg}"));
            FdStatus::Panic
        }
    }
}

unsafe fn arg<'a, T>(p: *const T, name: &str) -> Result<&'a T, Failure> {
    p.as_ref().ok_or_else(|| Failure::new(FdStatus::NullPointer, format!("{name} is NULL")))
}

unsafe fn arg_mut<'a, T>(p: *mut T, name: &str) -> Result<&'a mut T, Failure> {
    p.as_mut().ok_or_else(|| Failure::new(FdStatus::NullPointer, format!("{name} is NULL")))
}

unsafe fn slice<'a, T>(p: *const T, len: usize, name: &str) -> Result<&'a [T], Failure> {
    if len == 0 {
        return Ok(&[]);
    }
    if p.is_null() {
        return Err(Failure::new(FdStatus::NullPointer, format!("{name} is NULL")));
    }
    Ok(std::slice::from_raw_parts(p, len))
}

fn edge(a: u32, b: u32) -> Result<Edge, Failure> {
    Edge::try_new(a, b).ok_or_else(|| Failure::new(FdStatus::InvalidInput, format!("degenerate edge ({a}, {b})")))
}

fn triples(flat: &[u32]) -> Vec<[u32; 3]> {
    flat.chunks_exact(3).map(|c| [c[0], c[1], c[2]]).collect()
}

fn boxed(t: Triangulation) -> *mut FdTriangulation {
    Box::into_raw(Box::new(FdTriangulation { inner: t }))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn fd_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Defaults: pruning on, stack cleared per run, no state budget.
#[no_mangle]
pub extern "C" fn fd_solver_options_default() -> FdSolverOptions {
    let c = SolverConfig::default();
    FdSolverOptions {
        pruning: c.pruning,
        persist_stack: c.stack_mode == StackMode::Persist,
        state_budget: c.state_budget.unwrap_or(0),
    }
}

/// Copy of the calling thread's last error message, or NULL if there is
/// none. Free it with [`fd_string_free`].
#[no_mangle]
pub extern "C" fn fd_last_error_message() -> *mut c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ref().map_or(ptr::null_mut(), |c| c.clone().into_raw()))
}

/// # Safety
/// `s` must be NULL or a string returned by this library and not yet freed.
#[no_mangle]
pub unsafe extern "C" fn fd_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses an instance file from NUL-terminated UTF-8 text.
///
/// # Safety
/// `text` must be NULL or a valid NUL-terminated string; `out` must be NULL
/// or writable.
#[no_mangle]
pub unsafe extern "C" fn fd_instance_parse(text: *const c_char, out: *mut *mut FdInstance) -> FdStatus {
    guard(|| {
        let out = arg_mut(out, "out")?;
        if text.is_null() {
            return Err(Failure::new(FdStatus::NullPointer, "text is NULL"));
        }
        let text = CStr::from_ptr(text)
            .to_str()
            .map_err(|e| Failure::new(FdStatus::InvalidInput, format!("text is not UTF-8: {e}")))?;
        let inner = parse_instance(text)?;
        *out = Box::into_raw(Box::new(FdInstance { inner }));
        Ok(())
    })
}

/// # Safety
/// `inst` must be NULL or a handle from [`fd_instance_parse`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn fd_instance_free(inst: *mut FdInstance) {
    if !inst.is_null() {
        drop(Box::from_raw(inst));
    }
}

/// New handle holding a copy of the instance's initial triangulation.
///
/// # Safety
/// `inst` must be a live handle or NULL; `out` must be writable or NULL.
#[no_mangle]
pub unsafe extern "C" fn fd_instance_initial(inst: *const FdInstance, out: *mut *mut FdTriangulation) -> FdStatus {
    guard(|| {
        let inst = arg(inst, "inst")?;
        *arg_mut(out, "out")? = boxed(inst.inner.initial.clone());
        Ok(())
    })
}

/// New handle holding a copy of the instance's final triangulation.
///
/// # Safety
/// As for [`fd_instance_initial`].
#[no_mangle]
pub unsafe extern "C" fn fd_instance_final(inst: *const FdInstance, out: *mut *mut FdTriangulation) -> FdStatus {
    guard(|| {
        let inst = arg(inst, "inst")?;
        *arg_mut(out, "out")? = boxed(inst.inner.target.clone());
        Ok(())
    })
}

/// The instance's `k`, or `FD_STATUS_NOT_FOUND` if the file has none.
///
/// # Safety
/// `inst` must be a live handle or NULL; `out` must be writable or NULL.
#[no_mangle]
pub unsafe extern "C" fn fd_instance_k(inst: *const FdInstance, out: *mut usize) -> FdStatus {
    guard(|| {
        let inst = arg(inst, "inst")?;
        let out = arg_mut(out, "out")?;
        *out = inst.inner.file.k.ok_or_else(|| Failure::new(FdStatus::NotFound, "instance has no k"))?;
        Ok(())
    })
}

/// Builds a triangulation from `n_points` points given as interleaved
/// `x, y` pairs and `n_triangles` vertex-index triples.
///
/// # Safety
/// `coords` must point to `2 * n_points` readable values and `triangles` to
/// `3 * n_triangles`; `out` must be writable or NULL.
#[no_mangle]
pub unsafe extern "C" fn fd_triangulation_new(
    coords: *const i32,
    n_points: usize,
    triangles: *const u32,
    n_triangles: usize,
    out: *mut *mut FdTriangulation,
) -> FdStatus {
    guard(|| {
        let out = arg_mut(out, "out")?;
        let coords = slice(coords, 2 * n_points, "coords")?;
        let tris = slice(triangles, 3 * n_triangles, "triangles")?;
        let pts: Vec<(i32, i32)> = coords.chunks_exact(2).map(|c| (c[0], c[1])).collect();
        let points = std::sync::Arc::new(PointSet::from_coords(&pts)?);
        *out = boxed(Triangulation::build(points, &triples(tris))?);
        Ok(())
    })
}

/// Builds another triangulation over the point set of `base`.
///
/// # Safety
/// `base` must be a live handle or NULL; `triangles` must point to
/// `3 * n_triangles` readable values; `out` must be writable or NULL.
#[no_mangle]
pub unsafe extern "C" fn fd_triangulation_rebuild(
    base: *const FdTriangulation,
    triangles: *const u32,
    n_triangles: usize,
    out: *mut *mut FdTriangulation,
) -> FdStatus {
    guard(|| {
        let base = arg(base, "base")?;
        let out = arg_mut(out, "out")?;
        let tris = slice(triangles, 3 * n_triangles, "triangles")?;
        *out = boxed(Triangulation::build(base.inner.point_set().clone(), &triples(tris))?);
        Ok(())
    })
}

/// # Safety
/// `t` must be a live handle or NULL; `out` must be writable or NULL.
#[no_mangle]
pub unsafe extern "C" fn fd_triangulation_clone(t: *const FdTriangulation, out: *mut *mut FdTriangulation) -> FdStatus {
    guard(|| {
        let t = arg(t, "t")?;
        *arg_mut(out, "out")? = boxed(t.inner.clone());
        Ok(())
    })
}

/// # Safety
/// `t` must be NULL or a handle from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn fd_triangulation_free(t: *mut FdTriangulation) {
    if !t.is_null() {
        drop(Box::from_raw(t));
    }
}

/// Number of points and of triangles.
///
/// # Safety
/// `t` must be a live handle or NULL; the out-pointers must be writable or NULL.
#[no_mangle]
pub unsafe extern "C" fn fd_triangulation_size(
    t: *const FdTriangulation,
    out_points: *mut usize,
    out_triangles: *mut usize,
) -> FdStatus {
    guard(|| {
        let t = arg(t, "t")?;
        *arg_mut(out_points, "out_points")? = t.inner.num_points();
        *arg_mut(out_triangles, "out_triangles")? = t.inner.triangles().len();
        Ok(())
    })
}

/// Writes the triangles as sorted vertex triples into `out`, which holds
/// room for `capacity` triangles. `written` receives the triangle count; if
/// it exceeds `capacity`, nothing is copied and `FD_STATUS_BUFFER_TOO_SMALL`
/// is returned. Pass `out = NULL, capacity = 0` to query the count.
///
/// # Safety
/// `out` must have room for `3 * capacity` values; `t` and `written` must
/// be valid or NULL.
#[no_mangle]
pub unsafe extern "C" fn fd_triangulation_triangles(
    t: *const FdTriangulation,
    out: *mut u32,
    capacity: usize,
    written: *mut usize,
) -> FdStatus {
    guard(|| {
        let t = arg(t, "t")?;
        let written = arg_mut(written, "written")?;
        let tris = t.inner.triangle_triples();
        *written = tris.len();
        if tris.len() > capacity {
            return Err(Failure::new(
                FdStatus::BufferTooSmall,
                format!("need room for {} triangles, got {capacity}", tris.len()),
            ));
        }
        if !tris.is_empty() {
            if out.is_null() {
                return Err(Failure::new(FdStatus::NullPointer, "out is NULL"));
            }
            ptr::copy_nonoverlapping(tris.as_ptr().cast::<u32>(), out, 3 * tris.len());
        }
        Ok(())
    })
}

/// Whether the edge `ab` can be flipped: interior, with a strictly convex
/// quadrilateral.
///
/// # Safety
/// `t` must be a live handle or NULL; `out` must be writable or NULL.
#[no_mangle]
pub unsafe extern "C" fn fd_triangulation_is_admissible(
    t: *const FdTriangulation,
    a: u32,
    b: u32,
    out: *mut bool,
) -> FdStatus {
    guard(|| {
        let t = arg(t, "t")?;
        *arg_mut(out, "out")? = t.inner.is_admissible(edge(a, b)?);
        Ok(())
    })
}

/// Flips the edge `ab` in place. The new edge's endpoints are written to
/// `out_c` and `out_d` when they are not NULL.
///
/// # Safety
/// `t` must be a live handle or NULL; `out_c`, `out_d` writable or NULL.
#[no_mangle]
pub unsafe extern "C" fn fd_triangulation_flip(
    t: *mut FdTriangulation,
    a: u32,
    b: u32,
    out_c: *mut u32,
    out_d: *mut u32,
) -> FdStatus {
    guard(|| {
        let t = arg_mut(t, "t")?;
        let phi = t.inner.flip_in_place(edge(a, b)?)?;
        if let Some(c) = out_c.as_mut() {
            *c = phi.a();
        }
        if let Some(d) = out_d.as_mut() {
            *d = phi.b();
        }
        Ok(())
    })
}

/// Whether two triangulations are equal (same point set, same triangles).
///
/// # Safety
/// Handles must be live or NULL; `out` writable or NULL.
#[no_mangle]
pub unsafe extern "C" fn fd_triangulation_equal(
    x: *const FdTriangulation,
    y: *const FdTriangulation,
    out: *mut bool,
) -> FdStatus {
    guard(|| {
        let (x, y) = (arg(x, "x")?, arg(y, "y")?);
        *arg_mut(out, "out")? = x.inner.same_point_set(&y.inner) && x.inner == y.inner;
        Ok(())
    })
}

/// Exact flip distance by breadth-first search. `FD_STATUS_NOT_FOUND` if it
/// exceeds `cap`; `FD_STATUS_BUDGET_EXCEEDED` if more than `node_budget`
/// triangulations would be visited.
///
/// # Safety
/// Handles must be live or NULL; `out` writable or NULL.
#[no_mangle]
pub unsafe extern "C" fn fd_flip_distance(
    from: *const FdTriangulation,
    to: *const FdTriangulation,
    cap: usize,
    node_budget: usize,
    out: *mut usize,
) -> FdStatus {
    guard(|| {
        let (from, to) = (arg(from, "from")?, arg(to, "to")?);
        let out = arg_mut(out, "out")?;
        let outcome = bfs_distance(&from.inner, &to.inner, BfsConfig { cap, node_budget })?;
        *out = outcome
            .distance
            .ok_or_else(|| Failure::new(FdStatus::NotFound, format!("distance exceeds {cap}")))?;
        Ok(())
    })
}

unsafe fn solver(options: *const FdSolverOptions) -> Solver {
    let opts = options.as_ref().copied().unwrap_or_else(|| fd_solver_options_default());
    Solver::new(opts.into())
}

/// Whether `to` is reachable from `from` by exactly `k` flips found by the
/// bounded search. `options` may be NULL for the defaults.
///
/// # Safety
/// Handles must be live or NULL; `options` valid or NULL; `out` writable or NULL.
#[no_mangle]
pub unsafe extern "C" fn fd_exists_exactly_k(
    from: *const FdTriangulation,
    to: *const FdTriangulation,
    k: usize,
    options: *const FdSolverOptions,
    out: *mut bool,
) -> FdStatus {
    guard(|| {
        let (from, to) = (arg(from, "from")?, arg(to, "to")?);
        let out = arg_mut(out, "out")?;
        *out = solver(options).exists_solution_with_exactly_k_flips(&from.inner, &to.inner, k)?.accepted;
        Ok(())
    })
}

/// Whether the flip distance from `from` to `to` is exactly `k`.
///
/// # Safety
/// As for [`fd_exists_exactly_k`].
#[no_mangle]
pub unsafe extern "C" fn fd_decide_flip_distance(
    from: *const FdTriangulation,
    to: *const FdTriangulation,
    k: usize,
    options: *const FdSolverOptions,
    out: *mut bool,
) -> FdStatus {
    guard(|| {
        let (from, to) = (arg(from, "from")?, arg(to, "to")?);
        let out = arg_mut(out, "out")?;
        *out = solver(options).decide_flip_distance_eq(&from.inner, &to.inner, k)?;
        Ok(())
    })
}
