//! Branch-and-bound maximization of the score norm over numberings.
//!
//! The search space is shaped by the channel's symmetry:
//!
//! * transitive — some maximizer starts with any chosen label, so the first
//!   assigned position is pinned to label 0 and the tree shrinks from
//!   `|M|!` to `(|M|−1)!` leaves;
//! * centrally symmetric — for balanced costs some maximizer pairs mirrored
//!   positions `t` and `|M|+1−t` with antipodal states, so positions are
//!   assigned in pairs and the tree has `|M|!!` leaves (`(|M|−2)!!` when both
//!   reductions compose).
//!
//! Branching assigns positions in decreasing `|weight|` order (pairs in
//! decreasing pair-weight order), which tightens the bound early; this is a
//! search-order choice only and never changes the optimum. The bound is the
//! triangle inequality: a node's completions satisfy
//! `|v| ≤ |partial| + Σ_unassigned |w(t)|` (pair weights `w(t) − w(mirror)`
//! in paired mode), since every Bloch vector has norm at most one. Subtrees
//! are pruned only when their bound is strictly below the incumbent, so every
//! norm tie survives to the deterministic lexicographic tie-break.
//!
//! Leaf scores are always evaluated through [`score::weighted_vector_sum`] in
//! query-rank order, the same evaluator the brute-force oracle uses, so
//! solver and oracle agree bit-for-bit on values and argmax ties, and the
//! result is independent of thread count: the reported optimum is the
//! maximum of a fixed set of floating-point values under a total order
//! (norm descending, then label sequence ascending).

use crate::model::{CostFunction, Numbering, QubitCqChannel};
use crate::score::{self, WeightedSum};
use crate::symmetry::{detect_symmetries, SymmetryInfo};
use std::fmt;
use std::str::FromStr;
use std::sync::atomic::{AtomicBool, AtomicU64, AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::{Duration, Instant};
use thiserror::Error;

/// Interval (in expanded nodes) between deadline checks.
const DEADLINE_CHECK_INTERVAL: u64 = 4096;

/// Slack for the incremental-vs-canonical leaf norm comparison; incremental
/// and canonical sums of the same terms differ only by rounding, far below
/// this.
const LEAF_REJECT_SLACK: f64 = 1e-9;

#[derive(Debug, Error)]
pub enum SolveError {
    #[error("cost function is not balanced")]
    NotBalanced,
    #[error("cost has {cost} entries for a channel of {channel} states")]
    CostSize { cost: usize, channel: usize },
    #[error("regime `{requested}` needs symmetry the channel does not have")]
    RegimeUnavailable { requested: Regime },
    #[error("time budget exceeded; incumbent is a lower bound on the norm")]
    TimeBudgetExceeded { partial: Box<SolveResult> },
}

/// Which symmetry reductions the search applies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Regime {
    General,
    Transitive,
    Cs,
    TransitiveCs,
}

impl Regime {
    pub const ALL: [Regime; 4] =
        [Regime::General, Regime::Transitive, Regime::Cs, Regime::TransitiveCs];

    pub fn name(&self) -> &'static str {
        match self {
            Regime::General => "general",
            Regime::Transitive => "transitive",
            Regime::Cs => "cs",
            Regime::TransitiveCs => "transitive-cs",
        }
    }

    pub fn from_flags(transitive: bool, centrally_symmetric: bool) -> Regime {
        match (transitive, centrally_symmetric) {
            (true, true) => Regime::TransitiveCs,
            (true, false) => Regime::Transitive,
            (false, true) => Regime::Cs,
            (false, false) => Regime::General,
        }
    }

    pub fn requires_transitive(&self) -> bool {
        matches!(self, Regime::Transitive | Regime::TransitiveCs)
    }

    pub fn requires_cs(&self) -> bool {
        matches!(self, Regime::Cs | Regime::TransitiveCs)
    }

    /// Exact number of leaves of the regime's search tree:
    /// `|M|!`, `(|M|−1)!`, `|M|!!` or `(|M|−2)!!`.
    pub fn leaf_count(&self, size: usize) -> u128 {
        match self {
            Regime::General => factorial(size),
            Regime::Transitive => factorial(size.saturating_sub(1)),
            Regime::Cs => double_factorial(size),
            Regime::TransitiveCs => double_factorial(size.saturating_sub(2)),
        }
    }
}

impl fmt::Display for Regime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Regime {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        Regime::ALL
            .into_iter()
            .find(|r| r.name() == s)
            .ok_or_else(|| format!("unknown regime `{s}`"))
    }
}

pub fn factorial(n: usize) -> u128 {
    (1..=n as u128).product()
}

pub fn double_factorial(n: usize) -> u128 {
    let mut p = 1u128;
    let mut k = n as u128;
    while k > 1 {
        p *= k;
        k -= 2;
    }
    p
}

#[derive(Debug, Clone)]
pub struct SolveOptions {
    /// Worker threads; 0 means all available.
    pub threads: usize,
    /// Override the automatically selected regime.
    pub force_regime: Option<Regime>,
    /// Abort after this long, returning the incumbent as a bound.
    pub time_budget: Option<Duration>,
    /// Disable to enumerate the full tree (leaf counting, pruning audits).
    pub prune: bool,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions { threads: 0, force_regime: None, time_budget: None, prune: true }
    }
}

#[derive(Debug, Clone)]
pub struct SolveResult {
    /// Guesswork at the uniform prior, `γ̄ − best_norm`.
    pub value: f64,
    /// Maximizing numbering, in query order.
    pub best_numbering: Numbering,
    /// Maximal operator norm, `max_n |v(n)| / |M|`.
    pub best_norm: f64,
    pub nodes_expanded: u64,
    pub leaves_visited: u64,
    pub wall_time: Duration,
    pub regime: Regime,
    /// True when a time budget expired: `best_norm` is then only a lower
    /// bound on the maximum, hence `value` an upper bound on the guesswork.
    pub bound_only: bool,
    /// Every published incumbent operator norm, in publication order.
    pub incumbent_history: Vec<f64>,
}

/// The search context for one (channel, weights, regime) triple: position
/// order, effective weights per branching step, and bound tails.
pub struct SearchTree<'a> {
    channel: &'a QubitCqChannel,
    weights: Vec<f64>,
    regime: Regime,
    /// Pair partner per label, in paired (CS) regimes.
    antipode: Option<Vec<usize>>,
    /// `positions[rank]` = 0-based position assigned at that branching step
    /// (the front position of the pair, in paired regimes).
    positions: Vec<usize>,
    /// Weight applied to the chosen label's vector at each rank.
    rank_weights: Vec<f64>,
    /// `suffix[d]` = Σ over ranks ≥ d of `|rank_weights|`; the bound tail.
    suffix: Vec<f64>,
}

/// A partial assignment: the labels chosen for `positions[0..depth]`, the
/// running weighted sum, and the labels still free.
#[derive(Debug, Clone)]
pub struct SearchNode {
    assigned: Vec<usize>,
    partial: WeightedSum,
    remaining: Vec<usize>,
}

impl SearchNode {
    pub fn depth(&self) -> usize {
        self.assigned.len()
    }

    pub fn partial_vector(&self) -> WeightedSum {
        self.partial
    }

    pub fn remaining_labels(&self) -> &[usize] {
        &self.remaining
    }

    pub fn assigned_labels(&self) -> &[usize] {
        &self.assigned
    }
}

impl<'a> SearchTree<'a> {
    /// Build the search context. Fails when the regime demands symmetry the
    /// channel lacks, or (in paired regimes) when the weights are not
    /// antisymmetric under reversal.
    pub fn new(
        channel: &'a QubitCqChannel,
        weights: &[f64],
        info: &SymmetryInfo,
        regime: Regime,
    ) -> Result<Self, SolveError> {
        let n = channel.len();
        if weights.len() != n {
            return Err(SolveError::CostSize { cost: weights.len(), channel: n });
        }
        if regime.requires_transitive() && !info.transitive {
            return Err(SolveError::RegimeUnavailable { requested: regime });
        }
        let antipode = if regime.requires_cs() {
            let map = info
                .antipode
                .clone()
                .ok_or(SolveError::RegimeUnavailable { requested: regime })?;
            // Pair weights collapse to a single term only for balanced costs.
            let antisymmetric =
                (0..n / 2).all(|t| (weights[t] + weights[n - 1 - t]).abs() <= 1e-9);
            if !antisymmetric {
                return Err(SolveError::NotBalanced);
            }
            Some(map)
        } else {
            None
        };

        let (positions, rank_weights): (Vec<usize>, Vec<f64>) = if antipode.is_some() {
            // Front positions in order; weights are nonincreasing, so pair
            // weights w(t) − w(mirror) already come out largest first.
            (0..n / 2).map(|t| (t, weights[t] - weights[n - 1 - t])).unzip()
        } else {
            let mut order: Vec<usize> = (0..n).collect();
            order.sort_by(|&a, &b| {
                weights[b]
                    .abs()
                    .partial_cmp(&weights[a].abs())
                    .unwrap()
                    .then(a.cmp(&b))
            });
            let w = order.iter().map(|&t| weights[t]).collect();
            (order, w)
        };

        let mut suffix = vec![0.0; rank_weights.len() + 1];
        for d in (0..rank_weights.len()).rev() {
            suffix[d] = suffix[d + 1] + rank_weights[d].abs();
        }

        Ok(SearchTree {
            channel,
            weights: weights.to_vec(),
            regime,
            antipode,
            positions,
            rank_weights,
            suffix,
        })
    }

    pub fn regime(&self) -> Regime {
        self.regime
    }

    pub fn ranks(&self) -> usize {
        self.positions.len()
    }

    /// The root node. In transitive regimes the first position is pinned to
    /// label 0 (any label would do — some maximizer starts anywhere).
    pub fn root(&self) -> SearchNode {
        let n = self.channel.len();
        let mut node = SearchNode {
            assigned: Vec::new(),
            partial: WeightedSum::new(),
            remaining: (0..n).collect(),
        };
        if self.regime.requires_transitive() {
            node = self.child(&node, 0);
        }
        node
    }

    pub fn is_leaf(&self, node: &SearchNode) -> bool {
        node.depth() == self.ranks()
    }

    fn child(&self, node: &SearchNode, label: usize) -> SearchNode {
        let rank = node.depth();
        let mut assigned = node.assigned.clone();
        assigned.push(label);
        let partial = node.partial.add(self.rank_weights[rank], &self.channel.bloch()[label]);
        let mut remaining = node.remaining.clone();
        remaining.retain(|&m| m != label);
        if let Some(antipode) = &self.antipode {
            remaining.retain(|&m| m != antipode[label]);
        }
        SearchNode { assigned, partial, remaining }
    }

    /// One child per free label, in ascending label order; in paired regimes
    /// each child also consumes the chosen label's antipode.
    pub fn branch(&self, node: &SearchNode) -> Vec<SearchNode> {
        if self.is_leaf(node) {
            return Vec::new();
        }
        node.remaining.iter().map(|&m| self.child(node, m)).collect()
    }

    /// Upper bound on `|v|` over all completions of `node`: the partial norm
    /// plus the unassigned weight tail against unit vectors. Exact at leaves.
    pub fn bound(&self, node: &SearchNode) -> f64 {
        node.partial.norm() + self.suffix[node.depth()]
    }

    /// The full numbering of a leaf, over the weight indexing.
    pub fn numbering(&self, leaf: &SearchNode) -> Numbering {
        assert!(self.is_leaf(leaf), "only leaves have a complete numbering");
        self.materialize(&leaf.assigned)
    }

    fn materialize(&self, assigned: &[usize]) -> Numbering {
        let n = self.channel.len();
        let mut order = vec![usize::MAX; n];
        for (rank, &label) in assigned.iter().enumerate() {
            let t = self.positions[rank];
            order[t] = label;
            if let Some(antipode) = &self.antipode {
                order[n - 1 - t] = antipode[label];
            }
        }
        Numbering::new(order).expect("complete assignment is a permutation")
    }

    /// Canonical score norm `|v|` of a completed assignment.
    fn leaf_norm(&self, numbering: &Numbering) -> f64 {
        score::weighted_vector_sum(self.channel.bloch(), &self.weights, numbering).norm()
    }

    /// Quadratic-time incumbent: assign positions in search order, always
    /// taking the free label that maximizes the partial norm (smallest label
    /// on ties). Returns the numbering (weight indexing) and its canonical
    /// score norm.
    pub fn greedy(&self) -> (Numbering, f64) {
        let mut node = self.root();
        while !self.is_leaf(&node) {
            let rank = node.depth();
            let mut best: Option<(f64, usize)> = None;
            for &m in &node.remaining {
                let norm =
                    node.partial.add(self.rank_weights[rank], &self.channel.bloch()[m]).norm();
                if best.is_none_or(|(b, _)| norm > b) {
                    best = Some((norm, m));
                }
            }
            let (_, label) = best.expect("non-leaf has candidates");
            node = self.child(&node, label);
        }
        let numbering = self.numbering(&node);
        let norm = self.leaf_norm(&numbering);
        (numbering, norm)
    }
}

/// Greedy incumbent for a channel, weight sequence and regime; the returned
/// norm is the canonical `|v|` of the returned numbering.
pub fn greedy_init(
    channel: &QubitCqChannel,
    weights: &[f64],
    info: &SymmetryInfo,
    regime: Regime,
) -> Result<(Numbering, f64), SolveError> {
    Ok(SearchTree::new(channel, weights, info, regime)?.greedy())
}

/// Number of leaves the regime's tree has for this channel, obtained by full
/// enumeration with bounding disabled.
pub fn count_leaves(channel: &QubitCqChannel, regime: Regime) -> Result<u64, SolveError> {
    let options = SolveOptions {
        threads: 1,
        force_regime: Some(regime),
        prune: false,
        ..SolveOptions::default()
    };
    Ok(solve(channel, &CostFunction::identity(channel.len()), &options)?.leaves_visited)
}

struct Incumbent {
    norm: f64,
    numbering: Vec<usize>,
    history: Vec<f64>,
}

struct Shared<'t, 'a> {
    tree: &'t SearchTree<'a>,
    tasks: Vec<SearchNode>,
    next_task: AtomicUsize,
    best_bits: AtomicU64,
    best: Mutex<Incumbent>,
    stop: AtomicBool,
    deadline: Option<Instant>,
    prune: bool,
    nodes: AtomicU64,
    leaves: AtomicU64,
}

impl Shared<'_, '_> {
    fn cached_norm(&self) -> f64 {
        f64::from_bits(self.best_bits.load(Ordering::Relaxed))
    }

    /// Publish a leaf if it beats the incumbent: larger norm, or equal norm
    /// and lexicographically smaller label sequence.
    fn offer(&self, norm: f64, numbering: &Numbering) {
        let mut best = self.best.lock().unwrap();
        if norm > best.norm {
            best.norm = norm;
            best.numbering = numbering.order().to_vec();
            best.history.push(norm);
            // Non-negative f64 compare as bits; monotone under fetch_max.
            self.best_bits.fetch_max(norm.to_bits(), Ordering::Relaxed);
        } else if norm == best.norm && numbering.order() < best.numbering.as_slice() {
            best.numbering = numbering.order().to_vec();
        }
    }
}

struct Worker<'s, 't, 'a> {
    shared: &'s Shared<'t, 'a>,
    used: Vec<bool>,
    assigned: Vec<usize>,
    nodes: u64,
    leaves: u64,
    since_check: u64,
    stopped: bool,
}

impl Worker<'_, '_, '_> {
    fn run_task(&mut self, task: &SearchNode) {
        let n = self.shared.tree.channel.len();
        self.used = vec![true; n];
        for &m in &task.remaining {
            self.used[m] = false;
        }
        self.assigned.clear();
        self.assigned.extend_from_slice(&task.assigned);
        self.dfs(task.depth(), task.partial);
    }

    fn dfs(&mut self, rank: usize, partial: WeightedSum) {
        let tree = self.shared.tree;
        self.since_check += 1;
        if self.since_check >= DEADLINE_CHECK_INTERVAL {
            self.since_check = 0;
            if self.shared.stop.load(Ordering::Relaxed) {
                self.stopped = true;
            } else if let Some(deadline) = self.shared.deadline {
                if Instant::now() >= deadline {
                    self.shared.stop.store(true, Ordering::Relaxed);
                    self.stopped = true;
                }
            }
        }
        if self.stopped {
            return;
        }
        if rank == tree.ranks() {
            self.leaves += 1;
            // Cheap reject on the incremental norm; it differs from the
            // canonical norm only by rounding, far below the slack.
            if partial.norm() >= self.shared.cached_norm() - LEAF_REJECT_SLACK {
                let numbering = tree.materialize(&self.assigned);
                let norm = tree.leaf_norm(&numbering);
                self.shared.offer(norm, &numbering);
            }
            return;
        }
        self.nodes += 1;
        let w = tree.rank_weights[rank];
        let tail = tree.suffix[rank + 1];
        for m in 0..self.used.len() {
            if self.used[m] {
                continue;
            }
            let child = partial.add(w, &tree.channel.bloch()[m]);
            // The slack keeps norm ties alive: bounds are computed from the
            // incremental partial, which differs from the canonical leaf
            // evaluation by rounding, and ties must reach the lexicographic
            // tie-break.
            if self.shared.prune
                && child.norm() + tail < self.shared.cached_norm() - LEAF_REJECT_SLACK
            {
                continue;
            }
            self.used[m] = true;
            let pair = tree.antipode.as_ref().map(|a| a[m]);
            if let Some(p) = pair {
                self.used[p] = true;
            }
            self.assigned.push(m);
            self.dfs(rank + 1, child);
            self.assigned.pop();
            self.used[m] = false;
            if let Some(p) = pair {
                self.used[p] = false;
            }
            if self.stopped {
                return;
            }
        }
    }
}

/// Exact maximum of the score norm over the regime-reduced numbering set,
/// reported as the guesswork `γ̄ − max |v|/|M|` at the uniform prior.
///
/// The regime is chosen from the channel's detected symmetry unless forced.
/// The value is deterministic for any thread count; the reported numbering is
/// the lexicographically smallest optimum of the searched set (compared over
/// the nonincreasing-weight position order, reported in query order).
pub fn solve(
    channel: &QubitCqChannel,
    cost: &CostFunction,
    options: &SolveOptions,
) -> Result<SolveResult, SolveError> {
    let start = Instant::now();
    let n = channel.len();
    if cost.len() != n {
        return Err(SolveError::CostSize { cost: cost.len(), channel: n });
    }
    let normalized = score::normalize_cost(cost);
    if !normalized.balanced {
        return Err(SolveError::NotBalanced);
    }
    let info = detect_symmetries(channel);
    let regime = options
        .force_regime
        .unwrap_or_else(|| Regime::from_flags(info.transitive, info.centrally_symmetric));
    let tree = SearchTree::new(channel, &normalized.weights, &info, regime)?;

    let threads = if options.threads == 0 {
        std::thread::available_parallelism().map_or(1, |p| p.get())
    } else {
        options.threads
    };

    let (greedy_numbering, greedy_norm) = tree.greedy();

    // Task pool: depth-1 subtrees, or depth-2 when the top fan-out is small
    // compared to the worker count.
    let root = tree.root();
    let mut tasks = if tree.is_leaf(&root) { vec![root.clone()] } else { tree.branch(&root) };
    let mut frontier_nodes = u64::from(!tree.is_leaf(&root));
    if tasks.len() < 4 * threads {
        let mut deeper = Vec::new();
        for task in &tasks {
            if tree.is_leaf(task) {
                deeper.push(task.clone());
            } else {
                frontier_nodes += 1;
                deeper.extend(tree.branch(task));
            }
        }
        tasks = deeper;
    }

    let shared = Shared {
        tree: &tree,
        tasks,
        next_task: AtomicUsize::new(0),
        best_bits: AtomicU64::new(greedy_norm.to_bits()),
        best: Mutex::new(Incumbent {
            norm: greedy_norm,
            numbering: greedy_numbering.order().to_vec(),
            history: vec![greedy_norm],
        }),
        stop: AtomicBool::new(false),
        deadline: options.time_budget.map(|b| start + b),
        prune: options.prune,
        nodes: AtomicU64::new(frontier_nodes),
        leaves: AtomicU64::new(0),
    };

    std::thread::scope(|scope| {
        for _ in 0..threads.min(shared.tasks.len()).max(1) {
            scope.spawn(|| {
                let mut worker = Worker {
                    shared: &shared,
                    used: Vec::new(),
                    assigned: Vec::new(),
                    nodes: 0,
                    leaves: 0,
                    since_check: 0,
                    stopped: false,
                };
                loop {
                    let i = shared.next_task.fetch_add(1, Ordering::Relaxed);
                    if i >= shared.tasks.len() || shared.stop.load(Ordering::Relaxed) {
                        break;
                    }
                    worker.run_task(&shared.tasks[i]);
                }
                shared.nodes.fetch_add(worker.nodes, Ordering::Relaxed);
                shared.leaves.fetch_add(worker.leaves, Ordering::Relaxed);
            });
        }
    });

    let timed_out = shared.stop.load(Ordering::Relaxed);
    let best = shared.best.into_inner().unwrap();
    let internal = Numbering::new(best.numbering).expect("incumbent is a permutation");
    let best_norm = best.norm / n as f64;
    let result = SolveResult {
        value: normalized.mean - best_norm,
        best_numbering: normalized.to_query_order(&internal),
        best_norm,
        nodes_expanded: shared.nodes.into_inner(),
        leaves_visited: shared.leaves.into_inner(),
        wall_time: start.elapsed(),
        regime,
        bound_only: timed_out,
        incumbent_history: best.history.iter().map(|v| v / n as f64).collect(),
    };
    if timed_out {
        Err(SolveError::TimeBudgetExceeded { partial: Box::new(result) })
    } else {
        Ok(result)
    }
}

/// Shorthand for [`solve`] with defaults and the prepared symmetry info
/// recomputed internally.
pub fn solve_default(
    channel: &QubitCqChannel,
    cost: &CostFunction,
) -> Result<SolveResult, SolveError> {
    solve(channel, cost, &SolveOptions::default())
}
