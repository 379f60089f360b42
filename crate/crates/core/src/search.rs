//! Exact maximum difference-avoiding sets.
//!
//! A maximum independent set of the Cayley graph is a maximum clique of its
//! complement, found here by bitset branch and bound with greedy colouring
//! bounds. Cayley graphs are vertex-transitive, so some maximum independent
//! set contains the zero vector; the search fixes it and only explores the
//! non-neighbours of zero.
//!
//! The top-level branches may be shared among worker threads. The incumbent
//! is ordered by `(size, earliest branch)`, with the greedy warm start ranked
//! below every branch, which makes the reported witness the same for every
//! thread count: the first maximum clique met in sequential DFS order.

use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};
use std::sync::Mutex;
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::bitset::Bitset;
use crate::error::{Error, Result};
use crate::graph::{build_graph, CayleyGraph};
use crate::zp::{power_residues, FpVector, Prime};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchLimits {
    pub time: Option<Duration>,
    pub node_budget: Option<u64>,
    /// Worker threads; 0 means one per available core.
    pub threads: usize,
    /// Largest subproblem (non-neighbours of zero) whose adjacency is
    /// materialised. Larger instances fall back to the greedy bound.
    pub dense_limit: usize,
    pub seed: u64,
}

impl Default for SearchLimits {
    fn default() -> Self {
        SearchLimits {
            time: Some(Duration::from_secs(60)),
            node_budget: None,
            threads: 1,
            dense_limit: 1 << 15,
            seed: 0,
        }
    }
}

impl SearchLimits {
    pub fn unlimited() -> Self {
        SearchLimits {
            time: None,
            ..Default::default()
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SearchStatus {
    Exact,
    LowerBoundOnly,
}

#[derive(Debug, Clone)]
pub struct SearchResult {
    pub max_size: usize,
    /// Ascending rank order.
    pub witness: Vec<FpVector>,
    pub witness_ranks: Vec<u64>,
    pub status: SearchStatus,
    pub nodes_explored: u64,
    pub elapsed: Duration,
}

impl SearchResult {
    pub fn is_exact(&self) -> bool {
        self.status == SearchStatus::Exact
    }
}

/// A maximal independent set built by scanning vertices in an order shuffled
/// with `seed`. Returned as ascending ranks.
pub fn greedy_ranks(g: &CayleyGraph, seed: u64) -> Vec<u64> {
    let v = g.vertex_count();
    let mut order: Vec<u64> = (0..v as u64).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    order.shuffle(&mut rng);

    let mut blocked = Bitset::new(v);
    let mut chosen = Vec::new();
    for u in order {
        if blocked.contains(u as usize) {
            continue;
        }
        chosen.push(u);
        blocked.insert(u as usize);
        for w in g.neighbors(u) {
            blocked.insert(w as usize);
        }
    }
    chosen.sort_unstable();
    chosen
}

pub fn greedy_lower_bound(g: &CayleyGraph, seed: u64) -> Vec<FpVector> {
    to_vectors(g, &greedy_ranks(g, seed))
}

fn to_vectors(g: &CayleyGraph, ranks: &[u64]) -> Vec<FpVector> {
    ranks
        .iter()
        .map(|&r| g.space().unrank(r).expect("rank in range"))
        .collect()
}

/// Complement graph restricted to the non-neighbours of zero, with vertices
/// sorted by descending degree (ties: lower rank first).
struct Subproblem {
    ranks: Vec<u64>,
    compat: Vec<Bitset>,
}

impl Subproblem {
    fn build(g: &CayleyGraph) -> Subproblem {
        let v = g.vertex_count();
        let candidates: Vec<u64> = (1..v as u64).filter(|&u| !g.is_adjacent(0, u)).collect();
        let m = candidates.len();

        let mut local = vec![u32::MAX; v];
        for (i, &u) in candidates.iter().enumerate() {
            local[u as usize] = i as u32;
        }
        let mut adj_deg = vec![0usize; m];
        for (i, &u) in candidates.iter().enumerate() {
            adj_deg[i] = g
                .neighbors(u)
                .filter(|&w| local[w as usize] != u32::MAX)
                .count();
        }
        let mut order: Vec<usize> = (0..m).collect();
        // descending complement degree == ascending adjacency degree
        order.sort_by_key(|&i| (adj_deg[i], candidates[i]));

        let ranks: Vec<u64> = order.iter().map(|&i| candidates[i]).collect();
        for (i, &u) in ranks.iter().enumerate() {
            local[u as usize] = i as u32;
        }
        let compat = ranks
            .iter()
            .enumerate()
            .map(|(i, &u)| {
                let mut row = Bitset::full(m);
                row.remove(i);
                for w in g.neighbors(u) {
                    let j = local[w as usize];
                    if j != u32::MAX {
                        row.remove(j as usize);
                    }
                }
                row
            })
            .collect();
        Subproblem { ranks, compat }
    }
}

/// Greedy sequential colouring of `cand` in the complement graph. Returns
/// vertices in colour order with their (ascending) colour numbers.
fn color_sort(compat: &[Bitset], cand: &Bitset) -> (Vec<usize>, Vec<usize>) {
    let mut order = Vec::with_capacity(cand.count());
    let mut colors = Vec::with_capacity(order.capacity());
    let mut uncolored = cand.clone();
    let mut color = 0;
    while !uncolored.is_empty() {
        color += 1;
        let mut q = uncolored.clone();
        while let Some(v) = q.first() {
            q.remove(v);
            q.difference_with(&compat[v]);
            uncolored.remove(v);
            order.push(v);
            colors.push(color);
        }
    }
    (order, colors)
}

const GREEDY_PRIORITY: u32 = 0;

#[inline]
fn pack(size: usize, priority: u32) -> u64 {
    ((size as u64) << 32) | priority as u64
}

#[inline]
fn branch_priority(branch: usize) -> u32 {
    u32::MAX - branch as u32
}

struct Shared<'a> {
    sub: &'a Subproblem,
    best: AtomicU64,
    witness: Mutex<(u64, Vec<usize>)>,
    nodes: AtomicU64,
    abort: AtomicBool,
    deadline: Option<Instant>,
    node_budget: Option<u64>,
}

struct Worker<'s, 'a> {
    shared: &'s Shared<'a>,
    priority: u32,
    clique: Vec<usize>,
    ticks: u32,
}

impl Worker<'_, '_> {
    #[inline]
    fn can_improve(&self, bound: usize) -> bool {
        pack(bound, self.priority) > self.shared.best.load(Ordering::Acquire)
    }

    fn tick(&mut self) -> bool {
        let s = self.shared;
        if s.abort.load(Ordering::Relaxed) {
            return false;
        }
        self.ticks += 1;
        if s.node_budget
            .is_some_and(|b| s.nodes.load(Ordering::Relaxed) + self.ticks as u64 > b)
        {
            s.abort.store(true, Ordering::Relaxed);
            return false;
        }
        if self.ticks == 1024 {
            self.flush();
            if s.deadline.is_some_and(|d| Instant::now() >= d) {
                s.abort.store(true, Ordering::Relaxed);
                return false;
            }
        }
        true
    }

    fn flush(&mut self) {
        self.shared
            .nodes
            .fetch_add(self.ticks as u64, Ordering::Relaxed);
        self.ticks = 0;
    }

    fn record(&self) {
        // +1 for the fixed zero vector
        let key = pack(self.clique.len() + 1, self.priority);
        let mut w = self.shared.witness.lock().expect("witness lock");
        if key > w.0 {
            *w = (key, self.clique.clone());
            self.shared.best.fetch_max(key, Ordering::AcqRel);
        }
    }

    fn expand(&mut self, mut cand: Bitset) {
        let compat = &self.shared.sub.compat;
        let (order, colors) = color_sort(compat, &cand);
        for i in (0..order.len()).rev() {
            if !self.tick() {
                return;
            }
            if !self.can_improve(self.clique.len() + 1 + colors[i]) {
                return;
            }
            let v = order[i];
            self.clique.push(v);
            let next = cand.and(&compat[v]);
            if next.is_empty() {
                if self.can_improve(self.clique.len() + 1) {
                    self.record();
                }
            } else {
                self.expand(next);
            }
            self.clique.pop();
            cand.remove(v);
        }
    }
}

/// A unit of work: the search below a fixed partial clique.
struct Task {
    index: usize,
    clique: Vec<usize>,
    cand: Bitset,
    bound: usize,
}

/// Issues the nodes at depth two of the search tree (one fixed orbit
/// representative plus one more vertex) in sequential DFS order, so task
/// indices order the tree exactly as a single thread would walk it.
struct TaskSource {
    reps: Vec<usize>,
    members: Vec<Vec<usize>>,
    next_rep: usize,
    remaining: Bitset,
    open: Option<OpenBranch>,
    issued: usize,
}

struct OpenBranch {
    rep: usize,
    order: Vec<usize>,
    colors: Vec<usize>,
    rest: Bitset,
}

impl TaskSource {
    fn next(&mut self, shared: &Shared<'_>) -> Option<Task> {
        loop {
            if let Some(open) = &mut self.open {
                if let Some(v) = open.order.pop() {
                    let color = open.colors.pop().expect("parallel vectors");
                    let cand = open.rest.and(&shared.sub.compat[v]);
                    open.rest.remove(v);
                    let rep = open.rep;
                    return Some(self.issue(vec![rep, v], cand, 2 + color));
                }
                self.open = None;
            }
            let r = *self.reps.get(self.next_rep)?;
            let cand = self.remaining.and(&shared.sub.compat[r]);
            for &i in &self.members[self.next_rep] {
                self.remaining.remove(i);
            }
            self.next_rep += 1;
            let bound = 2 + cand.count();
            if pack(bound, branch_priority(self.issued)) <= shared.best.load(Ordering::Acquire) {
                continue;
            }
            if cand.is_empty() {
                return Some(self.issue(vec![r], cand, 2));
            }
            let (order, colors) = color_sort(&shared.sub.compat, &cand);
            self.open = Some(OpenBranch {
                rep: r,
                order,
                colors,
                rest: cand,
            });
        }
    }

    fn issue(&mut self, clique: Vec<usize>, cand: Bitset, bound: usize) -> Task {
        self.issued += 1;
        Task {
            index: self.issued - 1,
            clique,
            cand,
            bound,
        }
    }
}

fn resolve_threads(requested: usize) -> usize {
    if requested == 0 {
        std::thread::available_parallelism().map_or(1, |n| n.get())
    } else {
        requested
    }
}

/// Maximum independent set of `g` (equivalently, the largest set whose
/// differences avoid the forbidden box). Limits degrade the status to
/// lower-bound-only; they never fail the call.
pub fn max_avoiding_set(g: &CayleyGraph, limits: &SearchLimits) -> SearchResult {
    let start = Instant::now();
    let greedy = greedy_ranks(g, limits.seed);
    let fallback = |status, nodes| SearchResult {
        max_size: greedy.len(),
        witness: to_vectors(g, &greedy),
        witness_ranks: greedy.clone(),
        status,
        nodes_explored: nodes,
        elapsed: start.elapsed(),
    };

    let non_neighbours = g.vertex_count() - 1 - g.degree();
    if non_neighbours > limits.dense_limit {
        return fallback(SearchStatus::LowerBoundOnly, 0);
    }
    let sub = Subproblem::build(g);
    let m = sub.ranks.len();

    // Top-level branches: one per orbit of the automorphisms fixing zero,
    // taking the orbit's first vertex in degree order. Branch j excludes the
    // orbits of branches before it.
    let orbit_of = g.stabilizer_orbits();
    let mut orbit_index: Vec<Option<usize>> = vec![None; g.vertex_count()];
    let mut reps: Vec<usize> = Vec::new();
    let mut members: Vec<Vec<usize>> = Vec::new();
    for (i, &u) in sub.ranks.iter().enumerate().rev() {
        let o = orbit_of[u as usize] as usize;
        let slot = *orbit_index[o].get_or_insert_with(|| {
            reps.push(i);
            members.push(Vec::new());
            reps.len() - 1
        });
        members[slot].push(i);
    }
    // With no candidates the answer is {0}.
    if m == 0 {
        let witness_ranks = vec![0];
        return SearchResult {
            max_size: 1,
            witness: to_vectors(g, &witness_ranks),
            witness_ranks,
            status: SearchStatus::Exact,
            nodes_explored: 0,
            elapsed: start.elapsed(),
        };
    }

    let shared = Shared {
        sub: &sub,
        best: AtomicU64::new(pack(greedy.len(), GREEDY_PRIORITY)),
        witness: Mutex::new((pack(greedy.len(), GREEDY_PRIORITY), Vec::new())),
        nodes: AtomicU64::new(0),
        abort: AtomicBool::new(false),
        deadline: limits.time.map(|t| start + t),
        node_budget: limits.node_budget,
    };
    let source = Mutex::new(TaskSource {
        reps,
        members,
        next_rep: 0,
        remaining: Bitset::full(m),
        open: None,
        issued: 0,
    });

    let run = || {
        let mut w = Worker {
            shared: &shared,
            priority: 0,
            clique: Vec::new(),
            ticks: 0,
        };
        loop {
            if shared.abort.load(Ordering::Relaxed) {
                break;
            }
            let Some(task) = source.lock().expect("task lock").next(&shared) else {
                break;
            };
            w.priority = branch_priority(task.index);
            if !w.tick() {
                break;
            }
            if !w.can_improve(task.bound) {
                continue;
            }
            w.clique.clear();
            w.clique.extend_from_slice(&task.clique);
            if task.cand.is_empty() {
                if w.can_improve(w.clique.len() + 1) {
                    w.record();
                }
            } else {
                w.expand(task.cand);
            }
        }
        w.flush();
    };

    let threads = resolve_threads(limits.threads).max(1);
    if threads == 1 {
        run();
    } else {
        std::thread::scope(|s| {
            for _ in 0..threads {
                s.spawn(run);
            }
        });
    }

    let status = if shared.abort.load(Ordering::Relaxed) {
        SearchStatus::LowerBoundOnly
    } else {
        SearchStatus::Exact
    };
    let nodes = shared.nodes.load(Ordering::Relaxed);
    let (key, local) = shared.witness.into_inner().expect("witness lock");
    if key & u32::MAX as u64 == GREEDY_PRIORITY as u64 {
        return fallback(status, nodes);
    }
    let mut ranks: Vec<u64> = std::iter::once(0)
        .chain(local.iter().map(|&i| sub.ranks[i]))
        .collect();
    ranks.sort_unstable();
    SearchResult {
        max_size: ranks.len(),
        witness: to_vectors(g, &ranks),
        witness_ranks: ranks,
        status,
        nodes_explored: nodes,
        elapsed: start.elapsed(),
    }
}

/// Clique number of the Paley graph of order `p`, computed as the largest set
/// avoiding quadratic-residue differences (the graph is self-complementary).
pub fn paley_clique_number(p: Prime, limits: &SearchLimits) -> Result<SearchResult> {
    if p.get() % 4 != 1 {
        return Err(Error::NotOneModFour(p.get()));
    }
    let qr = power_residues(p, 2)?;
    let g = build_graph(p, 1, &qr)?;
    Ok(max_avoiding_set(&g, limits))
}
