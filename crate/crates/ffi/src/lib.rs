//! C ABI for `seedopt`.
//!
//! Graphs are opaque handles created by `seedopt_graph_*` and released with
//! [`seedopt_graph_free`]. Every fallible call returns a [`SeedoptStatus`]; on failure the
//! message is available from [`seedopt_last_error_message`] on the same thread. Output pointers
//! are written only on success.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use seedopt::{
    assign_uniform, assign_weighted_cascade, estimate_spread, exact_spread, greedy_maxinf, greedy_mintss, mintime,
    DirectedGraph, EdgeListOptions, Error, ExactCaps, GreedyOptions, Horizon, MintimeOptions, Model,
    MonteCarloOracle, NodeId,
};

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SeedoptStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Io = 3,
    Parse = 4,
    Infeasible = 5,
    CapExceeded = 6,
    Unimplemented = 7,
    BufferTooSmall = 8,
    Panic = 9,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SeedoptModel {
    Ic = 0,
    Lt = 1,
}

impl From<SeedoptModel> for Model {
    fn from(m: SeedoptModel) -> Self {
        match m {
            SeedoptModel::Ic => Model::Ic,
            SeedoptModel::Lt => Model::Lt,
        }
    }
}

/// Opaque graph handle.
pub struct SeedoptGraph(DirectedGraph);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("interior NULs removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> SeedoptStatus {
    match e {
        Error::Io { .. } => SeedoptStatus::Io,
        Error::Parse { .. }
        | Error::ProbabilityOutOfRange { .. }
        | Error::DuplicateArc { .. }
        | Error::SelfLoop { .. }
        | Error::MissingProbability { .. }
        | Error::InvalidLog(_) => SeedoptStatus::Parse,
        Error::Infeasible(_) => SeedoptStatus::Infeasible,
        Error::EnumerationCapExceeded { .. } => SeedoptStatus::CapExceeded,
        Error::Unimplemented(_) => SeedoptStatus::Unimplemented,
        _ => SeedoptStatus::InvalidArgument,
    }
}

struct Fail(SeedoptStatus, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail(status_of(&e), e.to_string())
    }
}

fn guard(f: impl FnOnce() -> Result<(), Fail>) -> SeedoptStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => SeedoptStatus::Ok,
        Ok(Err(Fail(status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic".into());
            SeedoptStatus::Panic
        }
    }
}

fn null(what: &str) -> Fail {
    Fail(SeedoptStatus::NullPointer, format!("{what} is NULL"))
}

unsafe fn graph<'a>(g: *const SeedoptGraph) -> Result<&'a DirectedGraph, Fail> {
    g.as_ref().map(|g| &g.0).ok_or_else(|| null("graph"))
}

unsafe fn slice<'a, T>(p: *const T, len: usize, what: &str) -> Result<&'a [T], Fail> {
    if len == 0 {
        return Ok(&[]);
    }
    if p.is_null() {
        return Err(null(what));
    }
    Ok(std::slice::from_raw_parts(p, len))
}

unsafe fn put<T>(out: *mut T, v: T, what: &str) -> Result<(), Fail> {
    if out.is_null() {
        return Err(null(what));
    }
    out.write(v);
    Ok(())
}

unsafe fn seeds_of(g: &DirectedGraph, seeds: *const u32, n: usize) -> Result<Vec<NodeId>, Fail> {
    let ids = slice(seeds, n, "seeds")?;
    match ids.iter().find(|&&v| v as usize >= g.node_count()) {
        Some(v) => Err(Error::UnknownNode(v.to_string()).into()),
        None => Ok(ids.iter().map(|&v| NodeId(v)).collect()),
    }
}

fn horizon_of(steps: i64) -> Horizon {
    if steps < 0 {
        Horizon::Unbounded
    } else {
        Horizon::Steps(steps.min(u32::MAX as i64) as u32)
    }
}

unsafe fn put_seeds(nodes: &[NodeId], out: *mut u32, cap: usize, out_len: *mut usize) -> Result<(), Fail> {
    put(out_len, nodes.len(), "out_len")?;
    if nodes.len() > cap {
        return Err(Fail(SeedoptStatus::BufferTooSmall, format!("{} seeds do not fit in {cap}", nodes.len())));
    }
    if !nodes.is_empty() {
        if out.is_null() {
            return Err(null("out_seeds"));
        }
        for (i, v) in nodes.iter().enumerate() {
            out.add(i).write(v.0);
        }
    }
    Ok(())
}

fn into_handle(g: DirectedGraph) -> *mut SeedoptGraph {
    Box::into_raw(Box::new(SeedoptGraph(g)))
}

/// Message of the last failed call on this thread, or NULL. Valid until the next failing call on
/// the same thread.
#[no_mangle]
pub extern "C" fn seedopt_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Builds a graph on nodes `0..n` from `m` arcs `tails[i] -> heads[i]` with probability
/// `probs[i]`.
///
/// # Safety
/// `tails`, `heads` and `probs` must each point to `m` readable elements; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn seedopt_graph_from_arcs(
    n: usize,
    tails: *const u32,
    heads: *const u32,
    probs: *const f64,
    m: usize,
    out: *mut *mut SeedoptGraph,
) -> SeedoptStatus {
    guard(|| {
        let (t, h, p) = (slice(tails, m, "tails")?, slice(heads, m, "heads")?, slice(probs, m, "probs")?);
        let arcs = (0..m).map(|i| (t[i] as usize, h[i] as usize, p[i]));
        let g = DirectedGraph::from_arcs(n, arcs)?;
        put(out, into_handle(g), "out")
    })
}

/// Loads a tab-separated edge list. `default_prob` fills arcs without a probability column; pass
/// a negative value to require the column.
///
/// # Safety
/// `path` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn seedopt_graph_load(
    path: *const c_char,
    default_prob: f64,
    symmetrize: bool,
    out: *mut *mut SeedoptGraph,
) -> SeedoptStatus {
    guard(|| {
        if path.is_null() {
            return Err(null("path"));
        }
        let path = CStr::from_ptr(path)
            .to_str()
            .map_err(|_| Fail(SeedoptStatus::InvalidArgument, "path is not UTF-8".into()))?;
        let opts = EdgeListOptions { default_prob: (default_prob >= 0.0).then_some(default_prob), symmetrize };
        let g = seedopt::load_edge_list(path, opts)?;
        put(out, into_handle(g), "out")
    })
}

/// Releases a graph. NULL is ignored.
///
/// # Safety
/// `g` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn seedopt_graph_free(g: *mut SeedoptGraph) {
    if !g.is_null() {
        drop(Box::from_raw(g));
    }
}

/// Node count, or 0 for NULL.
///
/// # Safety
/// `g` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn seedopt_graph_node_count(g: *const SeedoptGraph) -> usize {
    g.as_ref().map_or(0, |g| g.0.node_count())
}

/// Arc count, or 0 for NULL.
///
/// # Safety
/// `g` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn seedopt_graph_arc_count(g: *const SeedoptGraph) -> usize {
    g.as_ref().map_or(0, |g| g.0.arc_count())
}

/// New graph with every probability set to `p`.
///
/// # Safety
/// `g` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn seedopt_graph_assign_uniform(
    g: *const SeedoptGraph,
    p: f64,
    out: *mut *mut SeedoptGraph,
) -> SeedoptStatus {
    guard(|| put(out, into_handle(assign_uniform(graph(g)?, p)?), "out"))
}

/// New graph with weighted-cascade probabilities `1 / in_degree(head)`.
///
/// # Safety
/// `g` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn seedopt_graph_assign_weighted_cascade(
    g: *const SeedoptGraph,
    out: *mut *mut SeedoptGraph,
) -> SeedoptStatus {
    guard(|| put(out, into_handle(assign_weighted_cascade(graph(g)?)?), "out"))
}

/// Monte Carlo spread of `seeds`. A negative `horizon` means unbounded.
///
/// # Safety
/// `g` must be a live handle, `seeds` must hold `n_seeds` ids, and the outputs must be writable.
#[no_mangle]
pub unsafe extern "C" fn seedopt_estimate_spread(
    g: *const SeedoptGraph,
    model: SeedoptModel,
    seeds: *const u32,
    n_seeds: usize,
    horizon: i64,
    n_sims: usize,
    master_seed: u64,
    out_mean: *mut f64,
    out_std_err: *mut f64,
) -> SeedoptStatus {
    guard(|| {
        let g = graph(g)?;
        let s = seeds_of(g, seeds, n_seeds)?;
        let e = estimate_spread(g, model.into(), &s, horizon_of(horizon), n_sims, master_seed)?;
        put(out_mean, e.mean, "out_mean")?;
        put(out_std_err, e.std_err, "out_std_err")
    })
}

/// Exact expected spread by live-edge enumeration, with the default size caps.
///
/// # Safety
/// As [`seedopt_estimate_spread`].
#[no_mangle]
pub unsafe extern "C" fn seedopt_exact_spread(
    g: *const SeedoptGraph,
    model: SeedoptModel,
    seeds: *const u32,
    n_seeds: usize,
    horizon: i64,
    out: *mut f64,
) -> SeedoptStatus {
    guard(|| {
        let g = graph(g)?;
        let s = seeds_of(g, seeds, n_seeds)?;
        put(out, exact_spread(g, model.into(), &s, horizon_of(horizon), ExactCaps::default())?, "out")
    })
}

/// Greedy MAXINF: writes `k` seeds in pick order to `out_seeds` and their estimated spread to
/// `out_value`.
///
/// # Safety
/// `g` must be a live handle; `out_seeds` must have room for `k` ids; `out_value` must be writable.
#[no_mangle]
pub unsafe extern "C" fn seedopt_greedy_maxinf(
    g: *const SeedoptGraph,
    model: SeedoptModel,
    k: usize,
    horizon: i64,
    n_sims: usize,
    master_seed: u64,
    lazy: bool,
    out_seeds: *mut u32,
    out_value: *mut f64,
) -> SeedoptStatus {
    guard(|| {
        let g = graph(g)?;
        let oracle = MonteCarloOracle::new(g, model.into(), horizon_of(horizon), n_sims, master_seed)?;
        let s = greedy_maxinf(&oracle, k, GreedyOptions { lazy, ..Default::default() })?;
        let mut len = 0;
        put_seeds(s.nodes(), out_seeds, k, &mut len)?;
        put(out_value, oracle.estimate(s.nodes())?.mean, "out_value")
    })
}

/// Greedy MINTSS with the graph's node costs. On return `*out_len` holds the number of seeds
/// (also when the buffer of `cap` ids was too small) and `*out_feasible` whether `η - ε` was met.
///
/// # Safety
/// `g` must be a live handle; `out_seeds` must have room for `cap` ids; other outputs writable.
#[no_mangle]
pub unsafe extern "C" fn seedopt_greedy_mintss(
    g: *const SeedoptGraph,
    model: SeedoptModel,
    eta: f64,
    eps: f64,
    horizon: i64,
    n_sims: usize,
    master_seed: u64,
    lazy: bool,
    out_seeds: *mut u32,
    cap: usize,
    out_len: *mut usize,
    out_coverage: *mut f64,
    out_feasible: *mut bool,
) -> SeedoptStatus {
    guard(|| {
        let g = graph(g)?;
        let oracle = MonteCarloOracle::new(g, model.into(), horizon_of(horizon), n_sims, master_seed)?;
        let r = greedy_mintss(&oracle, eta, eps, g.costs(), GreedyOptions { lazy, ..Default::default() })?;
        put_seeds(r.seeds.nodes(), out_seeds, cap, out_len)?;
        put(out_coverage, r.achieved_coverage, "out_coverage")?;
        put(out_feasible, r.feasible, "out_feasible")
    })
}

/// MINTIME with at most `ceil(k (1 + ln(η/ε)))` seeds. `*out_time` is the first horizon that met
/// `η - ε`, or -1 on failure.
///
/// # Safety
/// `g` must be a live handle; `out_seeds` must have room for `cap` ids; other outputs writable.
#[no_mangle]
pub unsafe extern "C" fn seedopt_mintime(
    g: *const SeedoptGraph,
    model: SeedoptModel,
    k: usize,
    eta: f64,
    eps: f64,
    n_sims: usize,
    master_seed: u64,
    out_seeds: *mut u32,
    cap: usize,
    out_len: *mut usize,
    out_time: *mut i64,
    out_coverage: *mut f64,
) -> SeedoptStatus {
    guard(|| {
        let g = graph(g)?;
        let r = mintime(g, model.into(), k, eta, eps, n_sims, master_seed, MintimeOptions::default())?;
        put_seeds(r.seeds.nodes(), out_seeds, cap, out_len)?;
        put(out_time, r.time.map_or(-1, i64::from), "out_time")?;
        put(out_coverage, r.achieved_coverage, "out_coverage")
    })
}
