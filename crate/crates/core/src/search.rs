//! Top-k search over the attribute lattice.
//!
//! Inside the search, attribute sets are expressed over input positions
//! `0..d` (the dataset's columns with the target removed); reported patterns
//! carry dataset column indices.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::time::{Duration, Instant};

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use crate::correction::{ScoredPattern, Scorer};
use crate::data::{build_table, AttributeSet, Dataset};
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::infotheory::target_entropy;

/// Largest attribute count the exhaustive oracle accepts.
pub const EXHAUSTIVE_MAX_D: usize = 20;

/// A lattice node: input positions with its score and optimistic bound.
#[derive(Debug, Clone, PartialEq)]
pub struct SearchNode {
    pub positions: AttributeSet,
    /// `F0` of the node; 0 for the root.
    pub score: f64,
    /// `1 - b0`, an upper bound on `F0` of every superset.
    pub bound: f64,
}

impl SearchNode {
    pub fn root() -> Self {
        SearchNode {
            positions: AttributeSet::empty(),
            score: 0.0,
            bound: 1.0,
        }
    }

    pub fn max_index(&self) -> Option<usize> {
        self.positions.indices().last().copied()
    }
}

/// Successors of a node: one per input position above its largest member.
///
/// Starting from the empty set this generates every non-empty subset of
/// `0..d` exactly once.
pub fn branch(node: &SearchNode, d: usize) -> Vec<AttributeSet> {
    successors(&node.positions, d)
}

fn successors(positions: &AttributeSet, d: usize) -> Vec<AttributeSet> {
    let start = positions.indices().last().map_or(0, |m| m + 1);
    (start..d).map(|i| positions.with(i)).collect()
}

/// Optimistic estimate `1 - b0` of an attribute set (column indices).
pub fn bound(dataset: &Dataset, attrs: &AttributeSet) -> Result<f64> {
    attrs.check(dataset)?;
    let t = build_table(dataset, attrs);
    let scorer = Scorer::new(dataset.n());
    Ok(1.0 - scorer.correction(&t)?.b0)
}

/// Result guarantee.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Guarantee {
    /// Exact top-k.
    Exact,
    /// Every excluded set `Z` satisfies `alpha * F0(Z) <= F0(X)` for every returned `X`.
    AlphaApproximate,
    /// The time budget ran out; no guarantee.
    BudgetExhausted,
}

impl Guarantee {
    pub fn as_str(self) -> &'static str {
        match self {
            Guarantee::Exact => "exact",
            Guarantee::AlphaApproximate => "alpha-approximate",
            Guarantee::BudgetExhausted => "budget-exhausted",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TopKResult {
    /// Sorted by `f0` descending, then fewer attributes, then lexicographically.
    pub patterns: Vec<ScoredPattern>,
    pub k: usize,
    pub alpha: f64,
    pub guarantee: Guarantee,
}

impl TopKResult {
    pub fn scores(&self) -> Vec<f64> {
        self.patterns.iter().map(|p| p.f0).collect()
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct SearchStats {
    pub nodes_expanded: u64,
    pub nodes_enqueued: u64,
    /// Scored nodes never expanded because of the bound, including those
    /// still queued at termination.
    pub nodes_pruned: u64,
    /// Non-empty sets that were scored.
    pub nodes_scored: u64,
    /// Largest cardinality among scored sets.
    pub max_depth_explored: usize,
    /// Cardinality of the best returned set.
    pub solution_depth: usize,
    pub wall_time: f64,
    /// Share of the `2^d - 1` non-empty sets that lie strictly below a pruned node.
    pub pruned_fraction: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SearchConfig {
    pub k: usize,
    pub alpha: f64,
    pub budget: Option<Duration>,
    pub execution: Execution,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            k: 1,
            alpha: 1.0,
            budget: None,
            execution: Execution::default(),
        }
    }
}

impl SearchConfig {
    pub fn new(k: usize, alpha: f64) -> Self {
        SearchConfig {
            k,
            alpha,
            ..Default::default()
        }
    }

    fn validate(&self) -> Result<()> {
        if self.k == 0 {
            return Err(Error::InvalidArgument("k must be at least 1".into()));
        }
        if !(self.alpha > 0.0 && self.alpha <= 1.0) {
            return Err(Error::InvalidArgument(format!(
                "alpha must lie in (0, 1], got {}",
                self.alpha
            )));
        }
        Ok(())
    }
}

/// Result ordering: higher `f0`, then fewer attributes, then lexicographic.
pub fn rank_order(a: &ScoredPattern, b: &ScoredPattern) -> Ordering {
    b.f0.total_cmp(&a.f0)
        .then_with(|| a.attrs.len().cmp(&b.attrs.len()))
        .then_with(|| a.attrs.cmp(&b.attrs))
}

struct TopK {
    k: usize,
    items: Vec<ScoredPattern>,
}

impl TopK {
    fn new(k: usize) -> Self {
        TopK {
            k,
            items: Vec::with_capacity(k + 1),
        }
    }

    fn offer(&mut self, p: ScoredPattern) {
        let pos = self
            .items
            .binary_search_by(|q| rank_order(q, &p))
            .unwrap_or_else(|e| e);
        if pos < self.k {
            self.items.insert(pos, p);
            self.items.truncate(self.k);
        }
    }

    /// Score of the k-th best set, or `-inf` while fewer than k are known.
    fn threshold(&self) -> f64 {
        if self.items.len() < self.k {
            f64::NEG_INFINITY
        } else {
            self.items[self.k - 1].f0
        }
    }
}

struct Queued {
    bound: f64,
    positions: AttributeSet,
}

impl Ord for Queued {
    // max-heap: higher bound, then fewer attributes, then lexicographically smaller
    fn cmp(&self, other: &Self) -> Ordering {
        self.bound
            .total_cmp(&other.bound)
            .then_with(|| other.positions.len().cmp(&self.positions.len()))
            .then_with(|| other.positions.cmp(&self.positions))
    }
}

impl PartialOrd for Queued {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl PartialEq for Queued {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Queued {}

fn ensure_target(dataset: &Dataset) -> Result<()> {
    let t = build_table(dataset, &AttributeSet::empty());
    if target_entropy(&t).get() <= 0.0 {
        return Err(Error::DegenerateTarget);
    }
    Ok(())
}

/// Scores input positions; returns the pattern (column indices) and `1 - b0`.
fn evaluate(dataset: &Dataset, scorer: &Scorer, positions: &AttributeSet) -> Result<(ScoredPattern, f64)> {
    let attrs = dataset.attrs_from_positions(positions.indices());
    let t = build_table(dataset, &attrs);
    let score = scorer.reliable(&t)?;
    let bound = 1.0 - score.b0;
    Ok((ScoredPattern::new(attrs, score), bound))
}

fn descendants(max_index: usize, d: usize) -> f64 {
    2f64.powi((d - 1 - max_index) as i32) - 1.0
}

/// Best-first branch-and-bound for the top-k sets by `F0`.
///
/// Nodes are expanded in order of decreasing bound. A successor is queued
/// only if it has successors itself and `alpha * bound > f_k`, where `f_k` is
/// the current k-th best score (`-inf` until k sets are known); the search
/// stops once `alpha * bound <= f_k` for the best queued node. With
/// `alpha = 1` the result is the exact top-k.
pub fn best_first_search(dataset: &Dataset, config: &SearchConfig) -> Result<(TopKResult, SearchStats)> {
    config.validate()?;
    let d = dataset.d();
    if d == 0 {
        return Err(Error::InvalidArgument("dataset has no input attributes".into()));
    }
    ensure_target(dataset)?;

    let started = Instant::now();
    // parallelism goes over successors; each table is scored sequentially
    let scorer = Scorer::with_execution(dataset.n(), Execution::Sequential);
    let alpha = config.alpha;
    let mut stats = SearchStats::default();
    let mut top = TopK::new(config.k);
    let mut queue = BinaryHeap::new();
    queue.push(Queued {
        bound: 1.0,
        positions: AttributeSet::empty(),
    });
    stats.nodes_enqueued = 1;
    let mut pruned_space = 0.0f64;
    let mut exhausted = false;

    while let Some(head) = queue.peek() {
        if alpha * head.bound <= top.threshold() {
            break;
        }
        if config.budget.is_some_and(|b| started.elapsed() > b) {
            exhausted = true;
            break;
        }
        let node = queue.pop().expect("peeked");
        stats.nodes_expanded += 1;

        let succ = successors(&node.positions, d);
        let scored = config
            .execution
            .map(&succ, |s| evaluate(dataset, &scorer, s))
            .into_iter()
            .collect::<Result<Vec<_>>>()?;

        let mut bounds = Vec::with_capacity(scored.len());
        for (pattern, b) in scored {
            stats.nodes_scored += 1;
            stats.max_depth_explored = stats.max_depth_explored.max(pattern.attrs.len());
            bounds.push(b);
            top.offer(pattern);
        }
        let fk = top.threshold();
        for (positions, b) in succ.into_iter().zip(bounds) {
            let max = *positions.indices().last().expect("non-empty successor");
            if max + 1 == d {
                continue;
            }
            if alpha * b > fk {
                queue.push(Queued { bound: b, positions });
                stats.nodes_enqueued += 1;
            } else {
                stats.nodes_pruned += 1;
                pruned_space += descendants(max, d);
            }
        }
    }

    for rest in queue.iter() {
        if let Some(&max) = rest.positions.indices().last() {
            stats.nodes_pruned += 1;
            pruned_space += descendants(max, d);
        } else if exhausted {
            // root never expanded
            pruned_space += 2f64.powi(d as i32) - 1.0;
        }
    }

    let total = 2f64.powi(d as i32) - 1.0;
    stats.pruned_fraction = (pruned_space / total).clamp(0.0, 1.0);
    stats.solution_depth = top.items.first().map_or(0, |p| p.attrs.len());
    stats.wall_time = started.elapsed().as_secs_f64();

    let guarantee = if exhausted {
        Guarantee::BudgetExhausted
    } else if alpha == 1.0 {
        Guarantee::Exact
    } else {
        Guarantee::AlphaApproximate
    };
    Ok((
        TopKResult {
            patterns: top.items,
            k: config.k,
            alpha,
            guarantee,
        },
        stats,
    ))
}

/// Scores every non-empty attribute set and returns the top-k under the
/// same ordering as [`best_first_search`].
pub fn exhaustive_search(dataset: &Dataset, k: usize) -> Result<TopKResult> {
    exhaustive_search_with(dataset, k, Execution::default())
}

pub fn exhaustive_search_with(dataset: &Dataset, k: usize, exec: Execution) -> Result<TopKResult> {
    let mut all = score_all_subsets(dataset, exec)?;
    if k == 0 {
        return Err(Error::InvalidArgument("k must be at least 1".into()));
    }
    all.truncate(k);
    Ok(TopKResult {
        patterns: all,
        k,
        alpha: 1.0,
        guarantee: Guarantee::Exact,
    })
}

/// Every non-empty attribute set with its scores, in result order.
pub fn score_all_subsets(dataset: &Dataset, exec: Execution) -> Result<Vec<ScoredPattern>> {
    let d = dataset.d();
    if d > EXHAUSTIVE_MAX_D {
        return Err(Error::ExhaustiveTooLarge {
            d,
            max: EXHAUSTIVE_MAX_D,
        });
    }
    ensure_target(dataset)?;
    let scorer = Scorer::with_execution(dataset.n(), Execution::Sequential);
    let count = (1usize << d) - 1;
    let mut all = exec
        .map_range(count, |m| {
            let mask = m + 1;
            let positions: Vec<usize> = (0..d).filter(|i| mask >> i & 1 == 1).collect();
            evaluate(dataset, &scorer, &AttributeSet::new(positions)?).map(|(p, _)| p)
        })
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
    all.sort_by(rank_order);
    Ok(all)
}

/// Nodes visited by a search that prunes on cardinality alone down to depth
/// `max_depth`: `sum_{i=1..max_depth} C(d, i)`.
pub fn cardinality_baseline_nodes(d: usize, max_depth: usize) -> Result<BigUint> {
    if max_depth == 0 || max_depth > d {
        return Err(Error::InvalidArgument(format!(
            "max depth must satisfy 1 <= l <= d (d={d}, l={max_depth})"
        )));
    }
    let mut total = BigUint::from(0u32);
    let mut binom = BigUint::from(1u32);
    for i in 1..=max_depth {
        binom = binom * BigUint::from(d - i + 1) / BigUint::from(i);
        total += &binom;
    }
    Ok(total)
}
