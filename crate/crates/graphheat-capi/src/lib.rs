//! C ABI for the metric-graph heat kernel library.
//!
//! Handles are opaque pointers owned by Rust; every constructor has a
//! matching `_free`.  Functions return a [`GhStatus`] code; on failure a
//! thread-local message is available through [`gh_last_error_message`]
//! until the next failing call on the same thread.  Edges are addressed
//! by their string ids from the graph description, coordinates by the
//! edge coordinate in `[0, length]` measured from the edge's `from`
//! vertex.

use graphheat::graph::{GraphPoint, MetricGraph};
use graphheat::heat::{self, Truncation};
use graphheat::spectral::{self, SecularOptions, Spectrum};
use graphheat::trace;
use libc::{c_char, size_t};
use std::cell::RefCell;
use std::ffi::{CStr, CString};
use std::ptr;

/// Status codes returned by every fallible function.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GhStatus {
    Ok = 0,
    NullArgument = 1,
    InvalidUtf8 = 2,
    ParseError = 3,
    InvalidArgument = 4,
    ComputeError = 5,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::new("").unwrap());
}

fn set_error(message: impl std::fmt::Display) {
    let text = CString::new(message.to_string().replace('\0', " "))
        .unwrap_or_else(|_| CString::new("error").unwrap());
    LAST_ERROR.with(|slot| *slot.borrow_mut() = text);
}

/// Message for the most recent failure on this thread.  The pointer
/// stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn gh_last_error_message() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ptr())
}

/// Opaque metric-graph handle.
pub struct GhGraph {
    inner: MetricGraph,
}

/// Opaque spectrum handle.
pub struct GhSpectrum {
    inner: Spectrum,
}

unsafe fn read_str<'a>(ptr: *const c_char) -> Result<&'a str, GhStatus> {
    if ptr.is_null() {
        set_error("null string argument");
        return Err(GhStatus::NullArgument);
    }
    CStr::from_ptr(ptr).to_str().map_err(|_| {
        set_error("string argument is not valid UTF-8");
        GhStatus::InvalidUtf8
    })
}

unsafe fn graph_ref<'a>(g: *const GhGraph) -> Result<&'a MetricGraph, GhStatus> {
    if g.is_null() {
        set_error("null graph handle");
        return Err(GhStatus::NullArgument);
    }
    Ok(&(*g).inner)
}

fn point(g: &MetricGraph, edge: &str, x: f64) -> Result<GraphPoint, GhStatus> {
    match g.edge_by_name(edge) {
        Ok(e) => Ok(GraphPoint::new(e, x)),
        Err(e) => {
            set_error(e);
            Err(GhStatus::InvalidArgument)
        }
    }
}

/// Parse a JSON graph description (see the library README for the
/// schema) into a new graph handle.
///
/// # Safety
/// `json` must be a valid NUL-terminated string and `out` a valid
/// pointer; the result must be released with [`gh_graph_free`].
#[no_mangle]
pub unsafe extern "C" fn gh_graph_parse_json(
    json: *const c_char,
    out: *mut *mut GhGraph,
) -> GhStatus {
    if out.is_null() {
        set_error("null output pointer");
        return GhStatus::NullArgument;
    }
    let text = match read_str(json) {
        Ok(t) => t,
        Err(status) => return status,
    };
    match MetricGraph::parse_json(text) {
        Ok(inner) => {
            *out = Box::into_raw(Box::new(GhGraph { inner }));
            GhStatus::Ok
        }
        Err(e) => {
            set_error(e);
            *out = ptr::null_mut();
            GhStatus::ParseError
        }
    }
}

/// Release a graph handle; a null pointer is ignored.
///
/// # Safety
/// `g` must come from [`gh_graph_parse_json`] and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn gh_graph_free(g: *mut GhGraph) {
    if !g.is_null() {
        drop(Box::from_raw(g));
    }
}

/// Number of vertices.
///
/// # Safety
/// `g` must be a live graph handle.
#[no_mangle]
pub unsafe extern "C" fn gh_graph_vertex_count(g: *const GhGraph) -> size_t {
    graph_ref(g).map_or(0, |g| g.vertex_count())
}

/// Number of edges.
///
/// # Safety
/// `g` must be a live graph handle.
#[no_mangle]
pub unsafe extern "C" fn gh_graph_edge_count(g: *const GhGraph) -> size_t {
    graph_ref(g).map_or(0, |g| g.edge_count())
}

/// Total metric length.
///
/// # Safety
/// `g` must be a live graph handle.
#[no_mangle]
pub unsafe extern "C" fn gh_graph_total_length(g: *const GhGraph) -> f64 {
    graph_ref(g).map_or(f64::NAN, |g| g.total_length())
}

/// Heat kernel `H(t, (edge1, x1), (edge2, x2))` with a certified
/// truncation bound, cutoff chosen so the bound is at most `tol`.
///
/// # Safety
/// Pointer arguments must be valid; strings NUL-terminated.
#[no_mangle]
pub unsafe extern "C" fn gh_heat_kernel(
    g: *const GhGraph,
    t: f64,
    edge1: *const c_char,
    x1: f64,
    edge2: *const c_char,
    x2: f64,
    tol: f64,
    out_value: *mut f64,
    out_bound: *mut f64,
) -> GhStatus {
    let graph = match graph_ref(g) {
        Ok(graph) => graph,
        Err(status) => return status,
    };
    if out_value.is_null() || out_bound.is_null() {
        set_error("null output pointer");
        return GhStatus::NullArgument;
    }
    let (e1, e2) = match (read_str(edge1), read_str(edge2)) {
        (Ok(a), Ok(b)) => (a, b),
        (Err(s), _) | (_, Err(s)) => return s,
    };
    let q1 = match point(graph, e1, x1) {
        Ok(q) => q,
        Err(s) => return s,
    };
    let q2 = match point(graph, e2, x2) {
        Ok(q) => q,
        Err(s) => return s,
    };
    match heat::heat_kernel(graph, t, q1, q2, Truncation::Auto { tol }) {
        Ok(kv) => {
            *out_value = kv.value;
            *out_bound = kv.bound;
            GhStatus::Ok
        }
        Err(e) => {
            set_error(e);
            GhStatus::ComputeError
        }
    }
}

/// Diagonal heat kernel `h(t, (edge, x))`.
///
/// # Safety
/// Pointer arguments must be valid; strings NUL-terminated.
#[no_mangle]
pub unsafe extern "C" fn gh_heat_diagonal(
    g: *const GhGraph,
    t: f64,
    edge: *const c_char,
    x: f64,
    tol: f64,
    out_value: *mut f64,
    out_bound: *mut f64,
) -> GhStatus {
    gh_heat_kernel(g, t, edge, x, edge, x, tol, out_value, out_bound)
}

/// Diagonal kernel on `samples + 1` equispaced points of an edge.
/// `out_xs` and `out_values` must hold `samples + 1` doubles; the
/// certified bound shared by all rows lands in `out_bound`.
///
/// # Safety
/// Buffers must be caller-allocated with capacity `samples + 1`.
#[no_mangle]
pub unsafe extern "C" fn gh_heat_diagonal_grid(
    g: *const GhGraph,
    t: f64,
    edge: *const c_char,
    samples: size_t,
    tol: f64,
    out_xs: *mut f64,
    out_values: *mut f64,
    out_bound: *mut f64,
) -> GhStatus {
    let graph = match graph_ref(g) {
        Ok(graph) => graph,
        Err(status) => return status,
    };
    if out_xs.is_null() || out_values.is_null() || out_bound.is_null() {
        set_error("null output pointer");
        return GhStatus::NullArgument;
    }
    let name = match read_str(edge) {
        Ok(n) => n,
        Err(s) => return s,
    };
    let e = match graph.edge_by_name(name) {
        Ok(e) => e,
        Err(err) => {
            set_error(err);
            return GhStatus::InvalidArgument;
        }
    };
    match heat::heat_diagonal_grid(graph, &[t], e, samples, Truncation::Auto { tol }) {
        Ok(table) => {
            for (i, x) in table.xs.iter().enumerate() {
                *out_xs.add(i) = *x;
                *out_values.add(i) = table.values[i][0].value;
            }
            *out_bound = table.values[0][0].bound;
            GhStatus::Ok
        }
        Err(e) => {
            set_error(e);
            GhStatus::ComputeError
        }
    }
}

/// Rigorous bound on the path-sum tail beyond cutoff `l_cut`.
///
/// # Safety
/// `g` and `out_bound` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn gh_truncation_bound(
    g: *const GhGraph,
    t: f64,
    l_cut: f64,
    out_bound: *mut f64,
) -> GhStatus {
    let graph = match graph_ref(g) {
        Ok(graph) => graph,
        Err(status) => return status,
    };
    if out_bound.is_null() {
        set_error("null output pointer");
        return GhStatus::NullArgument;
    }
    match graphheat::paths::truncation_bound(graph, t, l_cut) {
        Ok(b) => {
            *out_bound = b;
            GhStatus::Ok
        }
        Err(e) => {
            set_error(e);
            GhStatus::ComputeError
        }
    }
}

/// Cycle-expansion heat trace truncated at iterate length `l_max`.
///
/// # Safety
/// `g` and `out_value` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn gh_roth_trace(
    g: *const GhGraph,
    t: f64,
    l_max: f64,
    out_value: *mut f64,
) -> GhStatus {
    let graph = match graph_ref(g) {
        Ok(graph) => graph,
        Err(status) => return status,
    };
    if out_value.is_null() {
        set_error("null output pointer");
        return GhStatus::NullArgument;
    }
    match trace::roth_trace(graph, t, l_max) {
        Ok(r) => {
            *out_value = r.value;
            GhStatus::Ok
        }
        Err(e) => {
            set_error(e);
            GhStatus::ComputeError
        }
    }
}

/// Compute the spectrum up to `sigma_max` with the secular solver.
///
/// # Safety
/// `g` and `out` must be valid; release the result with
/// [`gh_spectrum_free`].
#[no_mangle]
pub unsafe extern "C" fn gh_spectrum_secular(
    g: *const GhGraph,
    sigma_max: f64,
    out: *mut *mut GhSpectrum,
) -> GhStatus {
    let graph = match graph_ref(g) {
        Ok(graph) => graph,
        Err(status) => return status,
    };
    if out.is_null() {
        set_error("null output pointer");
        return GhStatus::NullArgument;
    }
    match spectral::secular_spectrum(graph, sigma_max, SecularOptions::default()) {
        Ok(sol) => {
            *out = Box::into_raw(Box::new(GhSpectrum {
                inner: sol.spectrum,
            }));
            GhStatus::Ok
        }
        Err(e) => {
            set_error(e);
            *out = ptr::null_mut();
            GhStatus::ComputeError
        }
    }
}

/// Number of distinct eigenvalue levels.
///
/// # Safety
/// `s` must be a live spectrum handle.
#[no_mangle]
pub unsafe extern "C" fn gh_spectrum_level_count(s: *const GhSpectrum) -> size_t {
    if s.is_null() {
        return 0;
    }
    let spectrum: &Spectrum = &(*s).inner;
    spectrum.levels.len()
}

/// Frequency and multiplicity of level `index` (ascending).
///
/// # Safety
/// `s` must be live; output pointers valid.
#[no_mangle]
pub unsafe extern "C" fn gh_spectrum_level(
    s: *const GhSpectrum,
    index: size_t,
    out_sigma: *mut f64,
    out_multiplicity: *mut size_t,
) -> GhStatus {
    if s.is_null() || out_sigma.is_null() || out_multiplicity.is_null() {
        set_error("null argument");
        return GhStatus::NullArgument;
    }
    let spectrum: &Spectrum = &(*s).inner;
    match spectrum.levels.get(index) {
        Some(level) => {
            *out_sigma = level.sigma;
            *out_multiplicity = level.multiplicity;
            GhStatus::Ok
        }
        None => {
            set_error(format!("level index {index} out of range"));
            GhStatus::InvalidArgument
        }
    }
}

/// Release a spectrum handle; a null pointer is ignored.
///
/// # Safety
/// `s` must come from [`gh_spectrum_secular`] and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn gh_spectrum_free(s: *mut GhSpectrum) {
    if !s.is_null() {
        drop(Box::from_raw(s));
    }
}
