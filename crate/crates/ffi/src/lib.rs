//! C interface to `drg-core`.
//!
//! Every function returns a [`DrgStatus`]. On failure a message is stored
//! per thread and can be read with [`drg_last_error_message`]. Handles are
//! opaque, created by `*_parse`/`*_named` functions and released with the
//! matching `*_free`. Strings returned through `char **` are owned by the
//! caller and must be released with [`drg_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;
use std::time::Duration;

use drg_core::enumerate::{enumerate_with, EnumerationOptions, FamilyFilter};
use drg_core::feasibility::run_battery;
use drg_core::graphs::{
    build_named, recognize_drg, search_hom, Graph, GraphFormat, HomOutcome, NamedGraph, SearchOptions,
};
use drg_core::homtheory::{search_triples, CoreTag, HomError};
use drg_core::params::{derive_parameters, IntersectionArray, SpectralConfig, SpectralData};
use drg_core::report::analyze;

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DrgStatus {
    Ok = 0,
    /// A null pointer or out-of-range argument.
    InvalidArgument = 1,
    /// Malformed array, graph or family text.
    ParseError = 2,
    /// An internal invariant failed.
    Internal = 3,
    /// A search hit its time limit.
    Timeout = 4,
    /// The caller's buffer is too small; the required size was written.
    BufferTooSmall = 5,
    /// The requested object does not exist (for instance, no array for a
    /// graph that is not distance-regular).
    NotFound = 6,
    /// The array is infeasible, so the requested data is undefined.
    Infeasible = 7,
    Panic = 8,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DrgGraphFormat {
    EdgeList = 0,
    Graph6 = 1,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DrgCoreTag {
    BipartiteCoreK2 = 0,
    ProvenCore = 1,
    ProvenCoreComplete = 2,
    SmallerDiameterCandidate = 3,
    NoSmallDiameterEndomorphism = 4,
    Inconclusive = 5,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DrgHomResult {
    Found = 0,
    NoHomomorphism = 1,
    Unknown = 2,
}

/// Opaque intersection array.
pub struct DrgArray {
    inner: IntersectionArray,
}

/// Opaque simple graph.
pub struct DrgGraph {
    inner: Graph,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let text = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(text).ok());
}

struct Fail(DrgStatus, String);

type FfiResult = Result<(), Fail>;

fn fail<T>(status: DrgStatus, msg: impl Into<String>) -> Result<T, Fail> {
    Err(Fail(status, msg.into()))
}

/// Runs `f`, converting errors and panics into a status plus message.
fn guard(f: impl FnOnce() -> FfiResult) -> DrgStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => DrgStatus::Ok,
        Ok(Err(Fail(status, msg))) => {
            set_error(msg);
            status
        }
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".into());
            set_error(format!("panic: {msg}"));
            DrgStatus::Panic
        }
    }
}

unsafe fn text<'a>(p: *const c_char, what: &str) -> Result<&'a str, Fail> {
    if p.is_null() {
        return fail(DrgStatus::InvalidArgument, format!("{what} is null"));
    }
    CStr::from_ptr(p).to_str().map_err(|_| Fail(DrgStatus::ParseError, format!("{what} is not UTF-8")))
}

unsafe fn out_ref<'a, T>(p: *mut T, what: &str) -> Result<&'a mut T, Fail> {
    p.as_mut().ok_or_else(|| Fail(DrgStatus::InvalidArgument, format!("{what} is null")))
}

unsafe fn handle<'a, T>(p: *const T, what: &str) -> Result<&'a T, Fail> {
    p.as_ref().ok_or_else(|| Fail(DrgStatus::InvalidArgument, format!("{what} is null")))
}

fn owned_string(s: String) -> *mut c_char {
    CString::new(s.replace('\0', " ")).expect("interior NULs removed").into_raw()
}

/// Message for the last failed call on this thread, or null. The pointer
/// stays valid until the next `drg_*` call on the same thread.
#[no_mangle]
pub extern "C" fn drg_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not have been freed already.
#[no_mangle]
pub unsafe extern "C" fn drg_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses `{b0,...;c1,...}`.
///
/// # Safety
/// `text` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn drg_array_parse(text_: *const c_char, out: *mut *mut DrgArray) -> DrgStatus {
    guard(|| {
        let out = out_ref(out, "out")?;
        *out = ptr::null_mut();
        let s = text(text_, "text")?;
        let inner: IntersectionArray = s.parse().map_err(|e| Fail(DrgStatus::ParseError, format!("{e}")))?;
        *out = Box::into_raw(Box::new(DrgArray { inner }));
        Ok(())
    })
}

/// # Safety
/// `a` must come from [`drg_array_parse`] or be null.
#[no_mangle]
pub unsafe extern "C" fn drg_array_free(a: *mut DrgArray) {
    if !a.is_null() {
        drop(Box::from_raw(a));
    }
}

/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn drg_array_diameter(a: *const DrgArray, out: *mut usize) -> DrgStatus {
    guard(|| {
        *out_ref(out, "out")? = handle(a, "array")?.inner.diameter();
        Ok(())
    })
}

/// Whether the array passes every feasibility check.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn drg_array_is_feasible(a: *const DrgArray, out: *mut bool) -> DrgStatus {
    guard(|| {
        let arr = &handle(a, "array")?.inner;
        let report = run_battery(arr);
        if let Some(c) = report.first_failure().filter(|c| c.detail.starts_with("internal:")) {
            return fail(DrgStatus::Internal, c.detail.clone());
        }
        *out_ref(out, "out")? = report.overall;
        Ok(())
    })
}

/// Full analysis as a JSON document.
///
/// # Safety
/// Pointers must be valid; free `*out` with [`drg_string_free`].
#[no_mangle]
pub unsafe extern "C" fn drg_array_analyze_json(a: *const DrgArray, out: *mut *mut c_char) -> DrgStatus {
    guard(|| {
        let out = out_ref(out, "out")?;
        *out = ptr::null_mut();
        let arr = &handle(a, "array")?.inner;
        let analysis =
            analyze(arr, &SpectralConfig::from_env()).map_err(|e| Fail(DrgStatus::Internal, e.to_string()))?;
        *out = owned_string(analysis.to_json());
        Ok(())
    })
}

/// Core verdict of a feasible array.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn drg_array_verdict(a: *const DrgArray, out: *mut DrgCoreTag) -> DrgStatus {
    guard(|| {
        let out = out_ref(out, "out")?;
        let arr = &handle(a, "array")?.inner;
        let analysis =
            analyze(arr, &SpectralConfig::from_env()).map_err(|e| Fail(DrgStatus::Internal, e.to_string()))?;
        if !analysis.feasibility.overall {
            let why = analysis.feasibility.first_failure().map(|c| c.detail.clone()).unwrap_or_default();
            return fail(DrgStatus::Infeasible, why);
        }
        let Some(v) = analysis.verdict else {
            return fail(DrgStatus::NotFound, analysis.notes.join("; "));
        };
        *out = match v.tag {
            CoreTag::BipartiteCoreK2 => DrgCoreTag::BipartiteCoreK2,
            CoreTag::ProvenCore => DrgCoreTag::ProvenCore,
            CoreTag::ProvenCoreComplete => DrgCoreTag::ProvenCoreComplete,
            CoreTag::SmallerDiameterCandidate => DrgCoreTag::SmallerDiameterCandidate,
            CoreTag::NoSmallDiameterEndomorphism => DrgCoreTag::NoSmallDiameterEndomorphism,
            CoreTag::Inconclusive => DrgCoreTag::Inconclusive,
        };
        Ok(())
    })
}

/// Writes the triples for image diameter `e` as `α, β, γ` groups into
/// `buf` (capacity `cap` integers) and their number to `count`. With
/// `DRG_STATUS_BUFFER_TOO_SMALL`, `count` still holds the number of triples.
///
/// # Safety
/// `buf` must have room for `cap` values (it may be null when `cap` is 0).
#[no_mangle]
pub unsafe extern "C" fn drg_array_triples(
    a: *const DrgArray,
    e: usize,
    buf: *mut u64,
    cap: usize,
    count: *mut usize,
) -> DrgStatus {
    guard(|| {
        let count = out_ref(count, "count")?;
        let arr = &handle(a, "array")?.inner;
        let ps = derive_parameters(arr).map_err(|err| Fail(DrgStatus::Infeasible, err.to_string()))?;
        let sd = SpectralData::compute_with(&ps, &SpectralConfig::from_env())
            .map_err(|err| Fail(DrgStatus::Infeasible, err.to_string()))?;
        let found = search_triples(&ps, &sd, e).map_err(|err| match err {
            HomError::DiameterOutOfRange { .. } => Fail(DrgStatus::InvalidArgument, err.to_string()),
            other => Fail(DrgStatus::Internal, other.to_string()),
        })?;
        *count = found.len();
        if cap < 3 * found.len() {
            return fail(DrgStatus::BufferTooSmall, format!("need room for {} values", 3 * found.len()));
        }
        if !found.is_empty() && buf.is_null() {
            return fail(DrgStatus::InvalidArgument, "buf is null");
        }
        for (i, w) in found.iter().enumerate() {
            *buf.add(3 * i) = w.alpha;
            *buf.add(3 * i + 1) = w.beta;
            *buf.add(3 * i + 2) = w.gamma;
        }
        Ok(())
    })
}

/// Feasible arrays of diameter `d` with valency up to `k_max` as JSON lines.
/// `family` is `primitive`, `antipodal`, `bipartite` or `all`.
///
/// # Safety
/// Pointers must be valid; free `*out` with [`drg_string_free`].
#[no_mangle]
pub unsafe extern "C" fn drg_enumerate_jsonl(
    d: usize,
    k_max: u64,
    family: *const c_char,
    out: *mut *mut c_char,
) -> DrgStatus {
    guard(|| {
        let out = out_ref(out, "out")?;
        *out = ptr::null_mut();
        let filter: FamilyFilter = text(family, "family")?.parse().map_err(|e| Fail(DrgStatus::ParseError, e))?;
        let mut opts = EnumerationOptions::new(d, k_max, filter);
        opts.jobs = Some(1);
        let mut lines = String::new();
        let mut internal = None;
        enumerate_with(&opts, |item| match item {
            Ok(rec) => {
                lines += &rec.to_json();
                lines.push('\n');
            }
            Err(f) if f.internal => internal = Some(format!("{}: {}", f.array, f.message)),
            Err(_) => {}
        })
        .map_err(|e| Fail(DrgStatus::InvalidArgument, e.to_string()))?;
        if let Some(m) = internal {
            return fail(DrgStatus::Internal, m);
        }
        *out = owned_string(lines);
        Ok(())
    })
}

/// # Safety
/// `text` must be NUL-terminated and `out` valid.
#[no_mangle]
pub unsafe extern "C" fn drg_graph_parse(
    text_: *const c_char,
    format: DrgGraphFormat,
    out: *mut *mut DrgGraph,
) -> DrgStatus {
    guard(|| {
        let out = out_ref(out, "out")?;
        *out = ptr::null_mut();
        let fmt = match format {
            DrgGraphFormat::EdgeList => GraphFormat::EdgeList,
            DrgGraphFormat::Graph6 => GraphFormat::Graph6,
        };
        let inner = Graph::parse(text(text_, "text")?, fmt).map_err(|e| Fail(DrgStatus::ParseError, e.to_string()))?;
        *out = Box::into_raw(Box::new(DrgGraph { inner }));
        Ok(())
    })
}

/// Builds a named graph such as `kneser(7,3)`, `hamming(3,3)` or `petersen`.
///
/// # Safety
/// `spec` must be NUL-terminated and `out` valid.
#[no_mangle]
pub unsafe extern "C" fn drg_graph_named(spec: *const c_char, out: *mut *mut DrgGraph) -> DrgStatus {
    guard(|| {
        let out = out_ref(out, "out")?;
        *out = ptr::null_mut();
        let named: NamedGraph = text(spec, "spec")?
            .parse()
            .map_err(|e: drg_core::graphs::GraphError| Fail(DrgStatus::ParseError, e.to_string()))?;
        let inner = build_named(named).map_err(|e| Fail(DrgStatus::InvalidArgument, e.to_string()))?;
        *out = Box::into_raw(Box::new(DrgGraph { inner }));
        Ok(())
    })
}

/// # Safety
/// `g` must come from this library or be null.
#[no_mangle]
pub unsafe extern "C" fn drg_graph_free(g: *mut DrgGraph) {
    if !g.is_null() {
        drop(Box::from_raw(g));
    }
}

/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn drg_graph_vertex_count(g: *const DrgGraph, out: *mut usize) -> DrgStatus {
    guard(|| {
        *out_ref(out, "out")? = handle(g, "graph")?.inner.n();
        Ok(())
    })
}

/// Intersection array of a distance-regular graph as text;
/// `DRG_STATUS_NOT_FOUND` if the graph is not distance-regular.
///
/// # Safety
/// Pointers must be valid; free `*out` with [`drg_string_free`].
#[no_mangle]
pub unsafe extern "C" fn drg_graph_recognize(g: *const DrgGraph, out: *mut *mut c_char) -> DrgStatus {
    guard(|| {
        let out = out_ref(out, "out")?;
        *out = ptr::null_mut();
        let g = &handle(g, "graph")?.inner;
        match recognize_drg(g).map_err(|e| Fail(DrgStatus::InvalidArgument, e.to_string()))? {
            Some(arr) => {
                *out = owned_string(arr.to_string());
                Ok(())
            }
            None => fail(DrgStatus::NotFound, "graph is not distance-regular"),
        }
    })
}

/// Searches for a homomorphism `x → y`. On `DRG_HOM_RESULT_FOUND` the image of
/// vertex `i` is in `image[i]`; `image` needs room for the vertex count of `x`.
/// A non-positive `timeout_seconds` means no limit. Hitting the limit sets
/// `result` to `DRG_HOM_RESULT_UNKNOWN` and returns `DRG_STATUS_TIMEOUT`.
///
/// # Safety
/// Pointers must be valid and `image` must hold `cap` entries.
#[no_mangle]
pub unsafe extern "C" fn drg_graph_search_hom(
    x: *const DrgGraph,
    y: *const DrgGraph,
    timeout_seconds: f64,
    image: *mut usize,
    cap: usize,
    result: *mut DrgHomResult,
) -> DrgStatus {
    guard(|| {
        let result = out_ref(result, "result")?;
        let (x, y) = (&handle(x, "x")?.inner, &handle(y, "y")?.inner);
        if cap < x.n() {
            return fail(DrgStatus::BufferTooSmall, format!("need room for {} vertices", x.n()));
        }
        let timeout =
            (timeout_seconds > 0.0 && timeout_seconds.is_finite()).then(|| Duration::from_secs_f64(timeout_seconds));
        let opts = SearchOptions { timeout, ..Default::default() };
        match search_hom(x, y, &opts).map_err(|e| Fail(DrgStatus::InvalidArgument, e.to_string()))? {
            HomOutcome::Found(phi) => {
                if x.n() > 0 && image.is_null() {
                    return fail(DrgStatus::InvalidArgument, "image is null");
                }
                for (i, &v) in phi.image.iter().enumerate() {
                    *image.add(i) = v;
                }
                *result = DrgHomResult::Found;
                Ok(())
            }
            HomOutcome::None => {
                *result = DrgHomResult::NoHomomorphism;
                Ok(())
            }
            HomOutcome::Unknown => {
                *result = DrgHomResult::Unknown;
                fail(DrgStatus::Timeout, "time limit reached")
            }
        }
    })
}
