//! Compatibility graphs over k-subsets and maximum-clique search.
//!
//! The search is Bron–Kerbosch with a max-candidate-neighbourhood pivot,
//! pruned by candidate count, a greedy colouring bound and an optional
//! external upper bound at which it stops early.

mod bitset;
mod graph;

use std::sync::atomic::{AtomicBool, AtomicU64, AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bounds;
use crate::cwcode::{CodeError, ConstantWeightCode};

pub use bitset::BitSet;
pub use graph::{lex_subsets, mask_indices, CompatibilityGraph, Mode, MAX_N, MAX_VERTICES};

/// Default cap on the number of maximum cliques counted.
pub const DEFAULT_COUNT_CAP: u64 = 1_000_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CliqueError {
    #[error("invalid parameters n={n}, k={k}, d={d}")]
    BadParameters { n: usize, k: usize, d: usize },
    #[error("{what} = {value} exceeds limit {limit}")]
    SizeLimit {
        what: &'static str,
        value: usize,
        limit: usize,
    },
    #[error("vertices {0:?} do not form a clique")]
    NotAClique(Vec<usize>),
    #[error("search timed out after {0:?}")]
    Timeout(Duration),
    #[error(transparent)]
    Code(#[from] CodeError),
}

#[derive(Debug, Clone, Default)]
pub struct SearchOptions {
    /// Clique size already known to be achievable.
    pub lower_bound: Option<usize>,
    /// Size at which the search may stop.
    pub upper_bound: Option<usize>,
    pub timeout: Option<Duration>,
    /// Split the root branches across the rayon pool.
    pub parallel: bool,
}

impl SearchOptions {
    /// Parallel search stopping at the bounds module's upper bound.
    pub fn with_bound_hint(graph: &CompatibilityGraph) -> Self {
        SearchOptions {
            upper_bound: upper_bound_hint(graph),
            parallel: true,
            ..Default::default()
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "value", rename_all = "snake_case")]
pub enum CliqueCount {
    Exact(u64),
    Capped(u64),
}

impl CliqueCount {
    pub fn value(self) -> u64 {
        match self {
            CliqueCount::Exact(v) | CliqueCount::Capped(v) => v,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CliqueResult {
    pub n: usize,
    pub k: usize,
    #[serde(flatten)]
    pub mode: Mode,
    pub max_size: usize,
    /// False if the search was cut short by the timeout.
    pub complete: bool,
    /// Witness cliques as vertex ids.
    #[serde(skip)]
    pub witness_vertices: Vec<Vec<usize>>,
    /// Witness cliques as lists of k-subsets of `0..n`.
    pub witnesses: Vec<Vec<Vec<usize>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub count: Option<CliqueCount>,
    pub elapsed_secs: f64,
}

/// Largest possible clique size from the bounds module, for AtLeast graphs.
pub fn upper_bound_hint(graph: &CompatibilityGraph) -> Option<usize> {
    let (n, k) = (graph.n(), graph.k());
    match graph.mode() {
        Mode::AtLeast(d) if d > 2 * k.min(n - k) => Some(1),
        Mode::AtLeast(d) => bounds::best_upper_bound(n as u64, k as u64, d as u64)
            .ok()
            .map(|b| b.min(graph.vertex_count() as u128) as usize),
        Mode::Exact(_) => None,
    }
}

struct Shared {
    best_size: AtomicUsize,
    best: Mutex<Vec<usize>>,
    target: usize,
    stop: AtomicBool,
    timed_out: AtomicBool,
    deadline: Option<Instant>,
    nodes: AtomicU64,
}

impl Shared {
    fn record(&self, r: &[usize]) {
        let mut cur = self.best_size.load(Ordering::Relaxed);
        while r.len() > cur {
            match self.best_size.compare_exchange(cur, r.len(), Ordering::SeqCst, Ordering::Relaxed) {
                Ok(_) => {
                    let mut best = self.best.lock().unwrap();
                    if r.len() > best.len() {
                        *best = r.to_vec();
                    }
                    if r.len() >= self.target {
                        self.stop.store(true, Ordering::SeqCst);
                    }
                    return;
                }
                Err(now) => cur = now,
            }
        }
    }

    fn should_stop(&self) -> bool {
        if self.stop.load(Ordering::Relaxed) {
            return true;
        }
        let n = self.nodes.fetch_add(1, Ordering::Relaxed);
        if n.is_multiple_of(4096) {
            if let Some(dl) = self.deadline {
                if Instant::now() >= dl {
                    self.timed_out.store(true, Ordering::SeqCst);
                    self.stop.store(true, Ordering::SeqCst);
                    return true;
                }
            }
        }
        false
    }
}

/// Greedy colouring of `p`; returns the number of colours, stopping once it
/// exceeds `enough`.
fn colour_bound(adj: &[BitSet], p: &BitSet, enough: usize) -> usize {
    let mut uncoloured = p.clone();
    let mut colours = 0;
    while !uncoloured.is_empty() {
        colours += 1;
        if colours > enough {
            return colours;
        }
        let mut q = uncoloured.clone();
        while let Some(v) = q.first() {
            uncoloured.remove(v);
            q.remove(v);
            q.and_not_assign(&adj[v]);
        }
    }
    colours
}

fn pivot(adj: &[BitSet], p: &BitSet, x: &BitSet) -> Option<usize> {
    p.iter()
        .chain(x.iter())
        .max_by_key(|&u| (p.and_count(&adj[u]), std::cmp::Reverse(u)))
}

fn expand(adj: &[BitSet], r: &mut Vec<usize>, mut p: BitSet, mut x: BitSet, sh: &Shared) {
    if sh.should_stop() {
        return;
    }
    if p.is_empty() {
        sh.record(r);
        return;
    }
    let best = sh.best_size.load(Ordering::Relaxed);
    if r.len() + p.count() <= best {
        return;
    }
    if let Some(room) = best.checked_sub(r.len()) {
        if colour_bound(adj, &p, room) <= room {
            return;
        }
    }
    let u = pivot(adj, &p, &x).expect("p is non-empty");
    let branch = p.and_not(&adj[u]);
    for v in branch.iter() {
        if r.len() + p.count() <= sh.best_size.load(Ordering::Relaxed) || sh.stop.load(Ordering::Relaxed) {
            break;
        }
        r.push(v);
        expand(adj, r, p.and(&adj[v]), x.and(&adj[v]), sh);
        r.pop();
        p.remove(v);
        x.insert(v);
    }
}

pub(crate) fn max_clique_adj(adj: &[BitSet], opts: &SearchOptions) -> (usize, Vec<usize>, bool) {
    let m = adj.len();
    if m == 0 {
        return (0, Vec::new(), true);
    }
    let sh = Shared {
        best_size: AtomicUsize::new(opts.lower_bound.unwrap_or(0).saturating_sub(1)),
        best: Mutex::new(Vec::new()),
        target: opts.upper_bound.unwrap_or(usize::MAX),
        stop: AtomicBool::new(false),
        timed_out: AtomicBool::new(false),
        deadline: opts.timeout.map(|t| Instant::now() + t),
        nodes: AtomicU64::new(0),
    };
    let p0 = BitSet::full(m);
    let x0 = BitSet::new(m);
    let u = pivot(adj, &p0, &x0).expect("graph is non-empty");
    let roots: Vec<usize> = p0.and_not(&adj[u]).iter().collect();
    let branch = |i: usize| {
        let v = roots[i];
        let mut before = BitSet::new(m);
        for &w in &roots[..i] {
            before.insert(w);
        }
        let p = p0.and_not(&before).and(&adj[v]);
        let x = before.and(&adj[v]);
        let mut r = vec![v];
        expand(adj, &mut r, p, x, &sh);
    };
    if opts.parallel {
        (0..roots.len()).into_par_iter().for_each(branch);
    } else {
        (0..roots.len()).for_each(branch);
    }
    let best = sh.best.into_inner().unwrap();
    let size = sh.best_size.load(Ordering::SeqCst);
    let complete = !sh.timed_out.load(Ordering::SeqCst);
    if !complete {
        return (best.len(), best, false);
    }
    // Canonical witness: the lexicographically least clique of that size.
    let witness = first_clique_of_size(adj, size).unwrap_or(best);
    (size, witness, true)
}

/// Lexicographically least clique (sorted vertex list) of the given size.
pub(crate) fn first_clique_of_size(adj: &[BitSet], size: usize) -> Option<Vec<usize>> {
    fn rec(adj: &[BitSet], r: &mut Vec<usize>, mut p: BitSet, size: usize) -> bool {
        if r.len() == size {
            return true;
        }
        let need = size - r.len();
        if p.count() < need || colour_bound(adj, &p, need) < need {
            return false;
        }
        while let Some(v) = p.first() {
            if p.count() < need {
                return false;
            }
            p.remove(v);
            r.push(v);
            if rec(adj, r, p.and(&adj[v]), size) {
                return true;
            }
            r.pop();
        }
        false
    }
    if size == 0 {
        return Some(Vec::new());
    }
    let mut r = Vec::new();
    rec(adj, &mut r, BitSet::full(adj.len()), size).then_some(r)
}

/// Counts cliques of exactly `size`, with up to `keep` witnesses in
/// lexicographic order. Returns `(count, capped, witnesses)`.
pub(crate) fn count_cliques_adj(
    adj: &[BitSet],
    size: usize,
    cap: u64,
    keep: usize,
    deadline: Option<Instant>,
) -> Option<(u64, bool, Vec<Vec<usize>>)> {
    struct Ctx<'a> {
        adj: &'a [BitSet],
        size: usize,
        cap: u64,
        total: &'a AtomicU64,
        stop: &'a AtomicBool,
        timed_out: &'a AtomicBool,
        deadline: Option<Instant>,
        nodes: u64,
    }
    fn rec(c: &mut Ctx, r: &mut Vec<usize>, mut p: BitSet, keep: usize, found: &mut Vec<Vec<usize>>) -> u64 {
        if r.len() == c.size {
            if found.len() < keep {
                found.push(r.clone());
            }
            if c.total.fetch_add(1, Ordering::Relaxed) + 1 >= c.cap {
                c.stop.store(true, Ordering::Relaxed);
            }
            return 1;
        }
        c.nodes += 1;
        if c.nodes.is_multiple_of(4096) {
            if let Some(dl) = c.deadline {
                if Instant::now() >= dl {
                    c.timed_out.store(true, Ordering::Relaxed);
                    c.stop.store(true, Ordering::Relaxed);
                }
            }
        }
        if c.stop.load(Ordering::Relaxed) {
            return 0;
        }
        let need = c.size - r.len();
        if p.count() < need || colour_bound(c.adj, &p, need) < need {
            return 0;
        }
        let mut n = 0;
        while let Some(v) = p.first() {
            if p.count() < need || c.stop.load(Ordering::Relaxed) {
                break;
            }
            p.remove(v);
            r.push(v);
            n += rec(c, r, p.and(&c.adj[v]), keep, found);
            r.pop();
        }
        n
    }

    let m = adj.len();
    if size == 0 {
        return Some((1, false, vec![Vec::new()]));
    }
    let total = AtomicU64::new(0);
    let stop = AtomicBool::new(false);
    let timed_out = AtomicBool::new(false);
    let per_root: Vec<(u64, Vec<Vec<usize>>)> = (0..m)
        .into_par_iter()
        .map(|v| {
            let mut ctx = Ctx {
                adj,
                size,
                cap,
                total: &total,
                stop: &stop,
                timed_out: &timed_out,
                deadline,
                nodes: 0,
            };
            let mut p = adj[v].clone();
            for w in 0..=v {
                p.remove(w);
            }
            let mut found = Vec::new();
            let mut r = vec![v];
            let n = rec(&mut ctx, &mut r, p, keep, &mut found);
            (n, found)
        })
        .collect();
    if timed_out.load(Ordering::SeqCst) {
        return None;
    }
    let count: u64 = per_root.iter().map(|(n, _)| n).sum();
    let witnesses: Vec<Vec<usize>> = per_root.into_iter().flat_map(|(_, f)| f).take(keep).collect();
    let capped = count >= cap;
    Some((count.min(cap), capped, witnesses))
}

/// Exact maximum clique of a compatibility graph.
pub fn max_clique(graph: &CompatibilityGraph, opts: &SearchOptions) -> CliqueResult {
    let start = Instant::now();
    let adj: Vec<BitSet> = (0..graph.vertex_count()).map(|v| graph.neighbors(v).clone()).collect();
    let (max_size, witness, complete) = max_clique_adj(&adj, opts);
    result(graph, max_size, vec![witness], complete, None, start)
}

/// Maximum clique together with a count of all maximum cliques.
pub fn max_clique_with_count(
    graph: &CompatibilityGraph,
    opts: &SearchOptions,
    cap: u64,
    keep: usize,
) -> Result<CliqueResult, CliqueError> {
    let start = Instant::now();
    let mut res = max_clique(graph, opts);
    if !res.complete {
        return Err(CliqueError::Timeout(start.elapsed()));
    }
    let remaining = opts.timeout.map(|t| t.saturating_sub(start.elapsed()));
    let (count, witnesses) = count_maximum_cliques_with_witnesses(graph, res.max_size, cap, keep.max(1), remaining)?;
    res = result(graph, res.max_size, witnesses, true, Some(count), start);
    Ok(res)
}

fn result(
    graph: &CompatibilityGraph,
    max_size: usize,
    witness_vertices: Vec<Vec<usize>>,
    complete: bool,
    count: Option<CliqueCount>,
    start: Instant,
) -> CliqueResult {
    let witnesses = witness_vertices
        .iter()
        .map(|w| w.iter().map(|&v| graph.vertex_indices(v)).collect())
        .collect();
    CliqueResult {
        n: graph.n(),
        k: graph.k(),
        mode: graph.mode(),
        max_size,
        complete,
        witness_vertices,
        witnesses,
        count,
        elapsed_secs: start.elapsed().as_secs_f64(),
    }
}

/// Number of cliques of exactly `size` (the maximum clique size), capped.
pub fn count_maximum_cliques(
    graph: &CompatibilityGraph,
    size: usize,
    cap: u64,
    timeout: Option<Duration>,
) -> Result<CliqueCount, CliqueError> {
    count_maximum_cliques_with_witnesses(graph, size, cap, 0, timeout).map(|(c, _)| c)
}

pub fn count_maximum_cliques_with_witnesses(
    graph: &CompatibilityGraph,
    size: usize,
    cap: u64,
    keep: usize,
    timeout: Option<Duration>,
) -> Result<(CliqueCount, Vec<Vec<usize>>), CliqueError> {
    let start = Instant::now();
    let adj: Vec<BitSet> = (0..graph.vertex_count()).map(|v| graph.neighbors(v).clone()).collect();
    let deadline = timeout.map(|t| start + t);
    match count_cliques_adj(&adj, size, cap.max(1), keep, deadline) {
        Some((n, false, w)) => Ok((CliqueCount::Exact(n), w)),
        Some((n, true, w)) => Ok((CliqueCount::Capped(n), w)),
        None => Err(CliqueError::Timeout(start.elapsed())),
    }
}

/// The code whose codewords are the clique's vertices.
pub fn extract_code(graph: &CompatibilityGraph, clique: &[usize]) -> Result<ConstantWeightCode, CliqueError> {
    if clique.is_empty() || !graph.is_clique(clique) {
        return Err(CliqueError::NotAClique(clique.to_vec()));
    }
    let words: Vec<Vec<usize>> = clique.iter().map(|&v| graph.vertex_indices(v)).collect();
    Ok(ConstantWeightCode::from_indices(graph.n(), graph.k(), words)?)
}
