//! Exhaustive traversal of multisets of a fixed size over a group.
//!
//! Multisets are multiplicity vectors over the element indices, walked in
//! colex order: the highest-index element is assigned first, each
//! multiplicity ascending, and the identity (index 0) takes whatever is
//! left. The space is cut into [`EnumerationTask`]s by fixing the leading
//! multiplicities; tasks are independent and processed in parallel, and
//! results are merged in task order so any worker count gives the same
//! answer.

use std::ops::ControlFlow;
use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::Serialize;

use crate::dp::{IndexedGroup, Layers};
use crate::engine::has_zero_sum_of_length;
use crate::error::{Error, Result};
use crate::group::Group;
use crate::sequence::Sequence;

pub const DEFAULT_MAX_VISITED: u64 = 100_000_000;
pub const DEFAULT_MAX_WALL: Duration = Duration::from_secs(15 * 60);
pub const DEFAULT_MAX_LENGTH: usize = 256;
pub const DEFAULT_PARTITION_DEPTH: usize = 2;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchBudget {
    /// Traversal nodes (partial and complete multisets) across all tasks.
    pub max_visited: u64,
    pub max_wall: Duration,
    /// Longest sequence length a constant search will scan to.
    pub max_length: usize,
}

impl Default for SearchBudget {
    fn default() -> Self {
        Self {
            max_visited: DEFAULT_MAX_VISITED,
            max_wall: DEFAULT_MAX_WALL,
            max_length: DEFAULT_MAX_LENGTH,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SearchStrategy {
    /// Incremental reachability along the traversal; a partial multiset
    /// that already holds a witness settles its whole subtree.
    Pruned,
    /// Materialise every member and ask the engine. With `symmetry`, only
    /// canonical orbit representatives are checked.
    Enumerate { symmetry: bool },
}

#[derive(Clone, Debug)]
pub struct SearchConfig {
    pub workers: usize,
    pub budget: SearchBudget,
    pub strategy: SearchStrategy,
    /// Number of leading multiplicities fixed per task. Independent of
    /// `workers` so the task set, and hence every statistic, does not depend
    /// on parallelism.
    pub partition_depth: usize,
}

impl Default for SearchConfig {
    fn default() -> Self {
        Self {
            workers: std::thread::available_parallelism().map_or(1, |n| n.get()),
            budget: SearchBudget::default(),
            strategy: SearchStrategy::Pruned,
            partition_depth: DEFAULT_PARTITION_DEPTH,
        }
    }
}

/// One cell of the partition: every multiset of `length` whose leading
/// multiplicities (in traversal order) equal `prefix`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EnumerationTask {
    pub group: Group,
    pub length: usize,
    pub zero_sum_only: bool,
    pub symmetry_reduction: bool,
    pub prefix: Vec<usize>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct EnumerationStats {
    /// Traversal nodes expanded.
    pub nodes: u64,
    /// Complete multisets reached and examined individually.
    pub sequences_checked: u64,
    /// Multisets (of the requested kind) whose verdict is established,
    /// whether examined individually or settled by a pruned subtree.
    pub multisets_covered: u64,
    /// Orbit representatives passed to a visitor (symmetry mode).
    pub orbits_visited: u64,
    pub pruned_subtrees: u64,
}

impl EnumerationStats {
    pub fn merge(&mut self, other: &EnumerationStats) {
        self.nodes += other.nodes;
        self.sequences_checked += other.sequences_checked;
        self.multisets_covered = self.multisets_covered.saturating_add(other.multisets_covered);
        self.orbits_visited += other.orbits_visited;
        self.pruned_subtrees += other.pruned_subtrees;
    }
}

/// Shared budget accounting across tasks.
pub(crate) struct Control {
    visited: AtomicU64,
    max_visited: u64,
    deadline: Instant,
    aborted: AtomicBool,
}

impl Control {
    pub(crate) fn new(budget: &SearchBudget) -> Self {
        Self {
            visited: AtomicU64::new(0),
            max_visited: budget.max_visited,
            deadline: Instant::now() + budget.max_wall,
            aborted: AtomicBool::new(false),
        }
    }

    /// Charges `n` nodes; false once the budget is gone.
    fn charge(&self, n: u64) -> bool {
        if self.aborted.load(Ordering::Relaxed) {
            return false;
        }
        let before = self.visited.fetch_add(n, Ordering::Relaxed);
        if before + n > self.max_visited || Instant::now() > self.deadline {
            self.aborted.store(true, Ordering::Relaxed);
            return false;
        }
        true
    }

    pub(crate) fn visited(&self) -> u64 {
        self.visited.load(Ordering::Relaxed)
    }

    pub(crate) fn exhausted(&self) -> bool {
        self.aborted.load(Ordering::Relaxed)
    }
}

const CHARGE_BATCH: u64 = 1024;

/// `counts[i][r][x]`: multisets of size `r` over `order[i..]` summing to `x`.
struct SuffixCounts {
    order_len: usize,
    max_len: usize,
    group_order: usize,
    data: Vec<u64>,
    totals: Vec<u64>,
}

impl SuffixCounts {
    fn new(ig: &IndexedGroup, order: &[usize], max_len: usize) -> Self {
        let q = order.len();
        let go = ig.order();
        let stride_r = go;
        let stride_i = (max_len + 1) * go;
        let mut data = vec![0u64; (q + 1) * stride_i];
        data[q * stride_i] = 1;
        for i in (0..q).rev() {
            let e = order[i];
            for r in 0..=max_len {
                let mut shift = 0usize;
                for j in 0..=r {
                    if j > 0 {
                        shift = ig.add(shift, e);
                    }
                    for x in 0..go {
                        let src = data[(i + 1) * stride_i + (r - j) * stride_r + x];
                        if src != 0 {
                            let y = ig.add(x, shift);
                            let slot = &mut data[i * stride_i + r * stride_r + y];
                            *slot = slot.saturating_add(src);
                        }
                    }
                }
            }
        }
        let mut totals = vec![0u64; (q + 1) * (max_len + 1)];
        for i in 0..=q {
            for r in 0..=max_len {
                totals[i * (max_len + 1) + r] = data
                    [i * stride_i + r * stride_r..i * stride_i + (r + 1) * stride_r]
                    .iter()
                    .fold(0u64, |a, &b| a.saturating_add(b));
            }
        }
        Self {
            order_len: q,
            max_len,
            group_order: go,
            data,
            totals,
        }
    }

    fn get(&self, i: usize, r: usize, x: usize) -> u64 {
        debug_assert!(i <= self.order_len && r <= self.max_len);
        self.data[(i * (self.max_len + 1) + r) * self.group_order + x]
    }

    fn total(&self, i: usize, r: usize) -> u64 {
        self.totals[i * (self.max_len + 1) + r]
    }
}

/// Immutable traversal context shared by the tasks of one length.
struct Space {
    group: Group,
    ig: IndexedGroup,
    order: Vec<usize>,
    length: usize,
    zero_sum_only: bool,
    suffix: SuffixCounts,
}

impl Space {
    fn new(group: &Group, length: usize, zero_sum_only: bool) -> Self {
        let ig = IndexedGroup::new(group);
        let order: Vec<usize> = (0..ig.order()).rev().collect();
        let suffix = SuffixCounts::new(&ig, &order, length);
        Self {
            group: group.clone(),
            ig,
            order,
            length,
            zero_sum_only,
            suffix,
        }
    }

    /// Members of the space completing a partial assignment of `order[..i]`
    /// with `remaining` slots and running sum `sum`.
    fn completions(&self, i: usize, remaining: usize, sum: usize) -> u64 {
        if self.zero_sum_only {
            self.suffix.get(i, remaining, self.ig.neg(sum))
        } else {
            self.suffix.total(i, remaining)
        }
    }

    fn to_sequence(&self, mults: &[usize]) -> Sequence {
        Sequence::from_counts(
            self.group.clone(),
            self.order
                .iter()
                .zip(mults)
                .map(|(&e, &m)| (self.group.element_at(e), m)),
        )
        .expect("indices belong to the group")
    }

    fn prefix_depth(&self, depth: usize) -> usize {
        depth.min(self.order.len().saturating_sub(1))
    }

    fn tasks(&self, depth: usize, symmetry: bool) -> Vec<EnumerationTask> {
        let depth = self.prefix_depth(depth);
        let mut out = Vec::new();
        let mut prefix = Vec::with_capacity(depth);
        self.tasks_rec(depth, self.length, 0, &mut prefix, &mut |p| {
            out.push(EnumerationTask {
                group: self.group.clone(),
                length: self.length,
                zero_sum_only: self.zero_sum_only,
                symmetry_reduction: symmetry,
                prefix: p.to_vec(),
            })
        });
        out
    }

    fn tasks_rec(
        &self,
        depth: usize,
        remaining: usize,
        sum: usize,
        prefix: &mut Vec<usize>,
        emit: &mut dyn FnMut(&[usize]),
    ) {
        let i = prefix.len();
        if i == depth {
            if self.completions(i, remaining, sum) > 0 {
                emit(prefix);
            }
            return;
        }
        let e = self.order[i];
        let mut s = sum;
        for j in 0..=remaining {
            if j > 0 {
                s = self.ig.add(s, e);
            }
            prefix.push(j);
            self.tasks_rec(depth, remaining - j, s, prefix, emit);
            prefix.pop();
        }
    }
}

/// Cursor for a single task: budget batching plus statistics.
struct Cursor<'a> {
    control: &'a Control,
    pending: u64,
    stats: EnumerationStats,
}

impl<'a> Cursor<'a> {
    fn new(control: &'a Control) -> Self {
        Self {
            control,
            pending: 0,
            stats: EnumerationStats::default(),
        }
    }

    fn tick(&mut self) -> bool {
        self.stats.nodes += 1;
        self.pending += 1;
        if self.pending >= CHARGE_BATCH {
            let n = std::mem::take(&mut self.pending);
            return self.control.charge(n);
        }
        true
    }

    fn flush(&mut self) -> bool {
        let n = std::mem::take(&mut self.pending);
        n == 0 || self.control.charge(n)
    }
}

enum Halt {
    Budget,
    Failure(Vec<usize>),
}

/// Pruned search for a member with no zero-sum sub-multiset of size `k`.
struct Prover<'a> {
    space: &'a Space,
    k: usize,
    stack: Vec<Layers>,
    mults: Vec<usize>,
}

impl<'a> Prover<'a> {
    fn new(space: &'a Space, k: usize) -> Self {
        let q = space.order.len();
        let init = Layers::initial(space.ig.order(), k);
        Self {
            space,
            k,
            stack: vec![init; q + 1],
            mults: vec![0; q],
        }
    }

    fn witnessed(&self, i: usize) -> bool {
        self.stack[i].contains(self.k, 0)
    }

    /// Writes `stack[i + 1]` = `stack[i]` plus `j` copies of `order[i]`,
    /// building on the layer for `j - 1` copies already in place.
    fn extend(&mut self, i: usize, j: usize, shift: usize) {
        let (lo, hi) = self.stack.split_at_mut(i + 1);
        if j == 0 {
            hi[0].copy_from(&lo[i]);
        } else if j <= self.k {
            hi[0].absorb_copies(&lo[i], j, shift, &self.space.ig);
        }
    }

    fn run(&mut self, task: &EnumerationTask, cursor: &mut Cursor<'_>) -> Option<Halt> {
        let space = self.space;
        let mut remaining = space.length;
        let mut sum = 0usize;
        for (i, &j) in task.prefix.iter().enumerate() {
            let e = space.order[i];
            let mut shift = 0;
            self.extend(i, 0, 0);
            for c in 1..=j {
                shift = space.ig.add(shift, e);
                self.extend(i, c, shift);
            }
            sum = space.ig.add(sum, shift);
            remaining -= j;
            self.mults[i] = j;
        }
        let depth = task.prefix.len();
        if !cursor.tick() {
            return Some(Halt::Budget);
        }
        if self.witnessed(depth) {
            cursor.stats.pruned_subtrees += 1;
            cursor.stats.multisets_covered += space.completions(depth, remaining, sum);
            return None;
        }
        self.walk(depth, remaining, sum, cursor)
    }

    fn walk(&mut self, i: usize, remaining: usize, sum: usize, cursor: &mut Cursor<'_>) -> Option<Halt> {
        let space = self.space;
        let q = space.order.len();
        if i == q {
            cursor.stats.sequences_checked += 1;
            cursor.stats.multisets_covered += 1;
            return if self.witnessed(q) {
                None
            } else {
                Some(Halt::Failure(self.mults.clone()))
            };
        }
        let e = space.order[i];
        let last = i + 1 == q;
        let mut shift = 0usize;
        let mut s = sum;
        for j in 0..=remaining {
            if j > 0 {
                shift = space.ig.add(shift, e);
                s = space.ig.add(s, e);
            }
            self.extend(i, j, shift);
            if last && j < remaining {
                continue;
            }
            if space.completions(i + 1, remaining - j, s) == 0 {
                continue;
            }
            if !cursor.tick() {
                return Some(Halt::Budget);
            }
            self.mults[i] = j;
            if self.witnessed(i + 1) {
                // every larger multiplicity keeps the witness
                let mut covered = 0u64;
                let mut s2 = s;
                for j2 in j..=remaining {
                    if j2 > j {
                        s2 = space.ig.add(s2, e);
                    }
                    if last && j2 < remaining {
                        continue;
                    }
                    covered = covered.saturating_add(space.completions(i + 1, remaining - j2, s2));
                }
                cursor.stats.pruned_subtrees += 1;
                cursor.stats.multisets_covered += covered;
                self.mults[i] = 0;
                return None;
            }
            if let Some(h) = self.walk(i + 1, remaining - j, s, cursor) {
                return Some(h);
            }
        }
        self.mults[i] = 0;
        None
    }
}

/// Plain traversal handing each member to a visitor.
fn visit_task<F>(space: &Space, task: &EnumerationTask, cursor: &mut Cursor<'_>, visitor: &mut F) -> Option<Halt>
where
    F: FnMut(&Sequence) -> ControlFlow<()>,
{
    let q = space.order.len();
    let mut mults = vec![0usize; q];
    let mut remaining = space.length;
    let mut sum = 0usize;
    for (i, &j) in task.prefix.iter().enumerate() {
        mults[i] = j;
        remaining -= j;
        sum = space.ig.add(sum, space.ig.scale(space.order[i], j));
    }
    visit_rec(space, task, task.prefix.len(), remaining, sum, &mut mults, cursor, visitor)
}

#[allow(clippy::too_many_arguments)]
fn visit_rec<F>(
    space: &Space,
    task: &EnumerationTask,
    i: usize,
    remaining: usize,
    sum: usize,
    mults: &mut Vec<usize>,
    cursor: &mut Cursor<'_>,
    visitor: &mut F,
) -> Option<Halt>
where
    F: FnMut(&Sequence) -> ControlFlow<()>,
{
    let q = space.order.len();
    if i == q {
        if remaining != 0 || (space.zero_sum_only && sum != 0) {
            return None;
        }
        let seq = space.to_sequence(mults);
        cursor.stats.multisets_covered += 1;
        if task.symmetry_reduction && !seq.is_canonical() {
            return None;
        }
        cursor.stats.sequences_checked += 1;
        cursor.stats.orbits_visited += 1;
        return match visitor(&seq) {
            ControlFlow::Continue(()) => None,
            ControlFlow::Break(()) => Some(Halt::Failure(mults.clone())),
        };
    }
    let e = space.order[i];
    let last = i + 1 == q;
    let mut s = sum;
    for j in 0..=remaining {
        if j > 0 {
            s = space.ig.add(s, e);
        }
        if last && j < remaining {
            continue;
        }
        if space.completions(i + 1, remaining - j, s) == 0 {
            continue;
        }
        if !cursor.tick() {
            return Some(Halt::Budget);
        }
        mults[i] = j;
        if let Some(h) = visit_rec(space, task, i + 1, remaining - j, s, mults, cursor, visitor) {
            mults[i] = 0;
            return Some(h);
        }
    }
    mults[i] = 0;
    None
}

/// Outcome of deciding one length.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LengthVerdict {
    pub length: usize,
    /// Every member has a zero-sum sub-multiset of the target size.
    pub pass: bool,
    /// First failing member in traversal order.
    pub first_failure: Option<Sequence>,
    pub stats: EnumerationStats,
}

/// Partition of all size-`length` multisets (optionally only zero-sum ones).
pub fn partition(
    group: &Group,
    length: usize,
    zero_sum_only: bool,
    symmetry: bool,
    depth: usize,
) -> Vec<EnumerationTask> {
    Space::new(group, length, zero_sum_only).tasks(depth, symmetry)
}

fn budget_error(control: &Control, stats: &EnumerationStats, what: &str) -> Error {
    Error::BudgetExhausted(format!(
        "{what}: stopped after {} nodes ({} sequences checked, {} multisets covered)",
        control.visited(),
        stats.sequences_checked,
        stats.multisets_covered
    ))
}

pub(crate) fn pool(workers: usize) -> Result<rayon::ThreadPool> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .map_err(|e| Error::Precondition(format!("cannot start worker pool: {e}")))
}

/// Decides whether every multiset of size `length` (zero-sum ones only, if
/// requested) has a zero-sum sub-multiset of size `k`.
pub fn check_length(
    group: &Group,
    k: usize,
    length: usize,
    zero_sum_only: bool,
    config: &SearchConfig,
) -> Result<LengthVerdict> {
    let control = Control::new(&config.budget);
    let pool = pool(config.workers)?;
    check_length_in(group, k, length, zero_sum_only, config, &control, &pool)
}

pub(crate) fn check_length_in(
    group: &Group,
    k: usize,
    length: usize,
    zero_sum_only: bool,
    config: &SearchConfig,
    control: &Control,
    pool: &rayon::ThreadPool,
) -> Result<LengthVerdict> {
    let space = Space::new(group, length, zero_sum_only);
    let symmetry = matches!(config.strategy, SearchStrategy::Enumerate { symmetry: true });
    let tasks = space.tasks(config.partition_depth, symmetry);

    let results: Vec<(EnumerationStats, Option<Halt>)> = pool.install(|| {
        tasks
            .par_iter()
            .map(|task| {
                let mut cursor = Cursor::new(control);
                let halt = match config.strategy {
                    SearchStrategy::Pruned => Prover::new(&space, k).run(task, &mut cursor),
                    SearchStrategy::Enumerate { .. } => {
                        let mut visitor = |s: &Sequence| {
                            if has_zero_sum_of_length(s, k) {
                                ControlFlow::Continue(())
                            } else {
                                ControlFlow::Break(())
                            }
                        };
                        visit_task(&space, task, &mut cursor, &mut visitor)
                    }
                };
                let halt = if cursor.flush() { halt } else { Some(Halt::Budget) };
                (cursor.stats, halt)
            })
            .collect()
    });

    let mut stats = EnumerationStats::default();
    let mut failure = None;
    let mut budget_hit = false;
    for (s, halt) in &results {
        stats.merge(s);
        match halt {
            Some(Halt::Budget) => budget_hit = true,
            Some(Halt::Failure(m)) if failure.is_none() => failure = Some(space.to_sequence(m)),
            _ => {}
        }
    }
    if budget_hit || control.exhausted() {
        return Err(budget_error(control, &stats, &format!("{group}, length {length}")));
    }
    Ok(LengthVerdict {
        length,
        pass: failure.is_none(),
        first_failure: failure,
        stats,
    })
}

/// Runs `visitor` on every member of one task, sequentially.
pub fn enumerate_task<F>(task: &EnumerationTask, budget: &SearchBudget, mut visitor: F) -> Result<EnumerationStats>
where
    F: FnMut(&Sequence) -> ControlFlow<()>,
{
    let space = Space::new(&task.group, task.length, task.zero_sum_only);
    let control = Control::new(budget);
    let mut cursor = Cursor::new(&control);
    let halt = visit_task(&space, task, &mut cursor, &mut visitor);
    let ok = cursor.flush();
    match halt {
        Some(Halt::Budget) => Err(budget_error(&control, &cursor.stats, "enumeration")),
        _ if !ok => Err(budget_error(&control, &cursor.stats, "enumeration")),
        _ => Ok(cursor.stats),
    }
}

/// Every multiset of size `length` over `group`, or every zero-sum one,
/// in colex order. With `symmetry`, one canonical representative per orbit.
/// A visitor returning `Break` stops the traversal early.
pub fn enumerate_multisets<F>(
    group: &Group,
    length: usize,
    zero_sum_only: bool,
    symmetry: bool,
    budget: &SearchBudget,
    mut visitor: F,
) -> Result<EnumerationStats>
where
    F: FnMut(&Sequence) -> ControlFlow<()>,
{
    let space = Space::new(group, length, zero_sum_only);
    let control = Control::new(budget);
    let mut cursor = Cursor::new(&control);
    let root = EnumerationTask {
        group: group.clone(),
        length,
        zero_sum_only,
        symmetry_reduction: symmetry,
        prefix: Vec::new(),
    };
    let halt = visit_task(&space, &root, &mut cursor, &mut visitor);
    let ok = cursor.flush();
    match halt {
        Some(Halt::Budget) => Err(budget_error(&control, &cursor.stats, "enumeration")),
        _ if !ok => Err(budget_error(&control, &cursor.stats, "enumeration")),
        _ => Ok(cursor.stats),
    }
}

pub fn enumerate_zero_sum_multisets<F>(
    group: &Group,
    length: usize,
    symmetry: bool,
    budget: &SearchBudget,
    visitor: F,
) -> Result<EnumerationStats>
where
    F: FnMut(&Sequence) -> ControlFlow<()>,
{
    enumerate_multisets(group, length, true, symmetry, budget, visitor)
}
