//! Exhaustive search for Ryser designs with given parameters.
//!
//! Points are labeled so that `E1 = {0, .., e1-1}` and `E2 = {e1, .., v-1}`;
//! any design can be relabeled this way. Blocks are drawn from a candidate
//! list sorted by `(size, bits)` and the design is assembled as
//!
//! * `B0`: a block of minimum size, normalized to take the first points of
//!   `E1` and of `E2`;
//! * `B1`: a block of minimum size among the rest, normalized to take the
//!   first points of each of the four cells cut out by `E1`/`E2` and `B0`;
//! * the remaining `v - 2` blocks in increasing candidate order.
//!
//! Every design is reachable this way. The `(B0, B1)` choices are the
//! independent branches that run in parallel.
//!
//! Pruning, each switchable for cross-checking:
//! * `block_sizes`: only sizes `2λ + ta` with `r2 <= size <= r1`;
//! * `tau_split`: a block of size `2λ + ta` has exactly `λ - td` points in `E1`;
//! * `columns`: no point exceeds its replication number, and every point can
//!   still reach it with the candidates left.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::sync::atomic::{AtomicBool, Ordering};
use std::time::{Duration, Instant};

use thiserror::Error;

use crate::canon::{weak_canonical_form, weak_canonical_key};
use crate::design::{classify, DesignClass, IncidenceStructure};
use crate::exec::Execution;
use crate::feasibility::{apply_rules, enumerate_tuples, FeasibilityError, ParameterTuple, Verdict};
use crate::invariants::{ryser_invariants, type1_test};
use crate::pointset::PointSet;

pub const DEFAULT_V_CAP: usize = 13;
/// Candidate generation walks all `2^v` subsets.
pub const HARD_V_CAP: usize = 20;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SearchError {
    #[error("v = {v} exceeds the search cap {cap}")]
    CapExceeded { v: i64, cap: usize },
    #[error(transparent)]
    Tuple(#[from] FeasibilityError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Pruning {
    pub block_sizes: bool,
    pub tau_split: bool,
    pub columns: bool,
}

impl Pruning {
    pub const ALL: Pruning = Pruning { block_sizes: true, tau_split: true, columns: true };
}

impl Default for Pruning {
    fn default() -> Self {
        Pruning::ALL
    }
}

#[derive(Clone, Debug)]
pub struct SearchSpec {
    pub tuple: ParameterTuple,
    pub max_solutions: Option<usize>,
    pub node_budget: Option<u64>,
    pub time_budget: Option<Duration>,
    pub v_cap: usize,
    /// Further restricts the allowed block sizes.
    pub sizes: Option<Vec<usize>>,
    pub pruning: Pruning,
}

impl SearchSpec {
    pub fn new(tuple: ParameterTuple) -> Self {
        SearchSpec {
            tuple,
            max_solutions: None,
            node_budget: None,
            time_budget: None,
            v_cap: DEFAULT_V_CAP,
            sizes: None,
            pruning: Pruning::ALL,
        }
    }

    /// `{2λ + ta : r2 <= 2λ + ta <= r1}`, intersected with any explicit restriction.
    pub fn admissible_sizes(&self) -> Vec<usize> {
        let t = &self.tuple;
        let lattice = |k: i64| {
            if self.pruning.block_sizes {
                (k - 2 * t.lambda) % t.a == 0 && t.r2 <= k && k <= t.r1
            } else {
                true
            }
        };
        ((t.lambda + 1)..t.v)
            .filter(|&k| lattice(k))
            .map(|k| k as usize)
            .filter(|k| self.sizes.as_ref().is_none_or(|s| s.contains(k)))
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Solution {
    /// Representative in weak canonical form.
    pub design: IncidenceStructure,
    pub key: Vec<u32>,
    pub type1: bool,
    /// Labeled designs found in this class.
    pub labeled: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Complete,
    /// Node or time budget ran out; the solution list may be partial.
    Incomplete,
    /// No multiset of admissible block sizes has the required total.
    Infeasible,
}

impl Status {
    pub fn label(self) -> &'static str {
        match self {
            Status::Complete => "COMPLETE",
            Status::Incomplete => "INCOMPLETE",
            Status::Infeasible => "INFEASIBLE",
        }
    }
}

#[derive(Clone, Debug)]
pub struct SearchResult {
    pub tuple: ParameterTuple,
    pub solutions: Vec<Solution>,
    pub nodes: u64,
    pub status: Status,
    /// Stopped at `max_solutions`.
    pub truncated: bool,
    pub elapsed: Duration,
}

impl SearchResult {
    /// Deterministic text report; excludes wall time.
    pub fn report(&self) -> String {
        let mut out = String::new();
        writeln!(out, "tuple\t{}", self.tuple).unwrap();
        writeln!(out, "status\t{}", self.status.label()).unwrap();
        if self.truncated {
            writeln!(out, "truncated\tmax-solutions").unwrap();
        }
        writeln!(out, "nodes\t{}", self.nodes).unwrap();
        writeln!(out, "solutions\t{}", self.solutions.len()).unwrap();
        for (i, s) in self.solutions.iter().enumerate() {
            let rows: Vec<String> = s
                .design
                .blocks()
                .iter()
                .map(|b| (0..s.design.v()).map(|p| if b.contains(p) { '1' } else { '0' }).collect())
                .collect();
            writeln!(
                out,
                "solution\t{}\ttype1={}\tlabeled={}\tsizes={}\trows={}",
                i,
                s.type1,
                s.labeled,
                size_histogram(&s.design),
                rows.join(",")
            )
            .unwrap();
        }
        out
    }
}

fn size_histogram(s: &IncidenceStructure) -> String {
    let mut hist: BTreeMap<usize, usize> = BTreeMap::new();
    for k in s.block_sizes() {
        *hist.entry(k).or_insert(0) += 1;
    }
    hist.iter().map(|(k, n)| format!("{k}x{n}")).collect::<Vec<_>>().join(",")
}

/// Whether some multiset of `count` sizes from `sizes` sums to `total`.
fn size_multiset_exists(sizes: &[usize], count: usize, total: usize) -> bool {
    let mut reach = vec![vec![false; total + 1]; count + 1];
    reach[0][0] = true;
    for n in 0..count {
        for s in 0..=total {
            if reach[n][s] {
                for &k in sizes {
                    if s + k <= total {
                        reach[n + 1][s + k] = true;
                    }
                }
            }
        }
    }
    reach[count][total]
}

/// Fixed-width bitset over candidate indices.
#[derive(Clone)]
struct Bits(Vec<u64>);

impl Bits {
    fn zeros(n: usize) -> Self {
        Bits(vec![0; n.div_ceil(64).max(1)])
    }

    fn set(&mut self, i: usize) {
        self.0[i / 64] |= 1 << (i % 64);
    }

    fn count(&self) -> usize {
        self.0.iter().map(|w| w.count_ones() as usize).sum()
    }

    fn count_and(&self, other: &Bits) -> usize {
        self.0.iter().zip(&other.0).map(|(a, b)| (a & b).count_ones() as usize).sum()
    }
}

/// Target replication per point.
fn targets(t: &ParameterTuple) -> Vec<u8> {
    (0..t.v as usize).map(|p| if (p as i64) < t.e1 { t.r1 as u8 } else { t.r2 as u8 }).collect()
}

/// The shared, read-only setup of one search.
struct Setup {
    v: usize,
    lambda: usize,
    /// Sorted by `(size, bits)`.
    candidates: Vec<PointSet>,
    target: Vec<u8>,
    pruning: Pruning,
}

impl Setup {
    fn new(spec: &SearchSpec) -> Setup {
        let t = &spec.tuple;
        let v = t.v as usize;
        let e1_set = PointSet::range(0, t.e1 as usize);
        let sizes = spec.admissible_sizes();
        let mut candidates: Vec<PointSet> = (1u128..(1u128 << v) - 1)
            .map(PointSet::from_bits)
            .filter(|b| sizes.contains(&b.len()))
            .filter(|b| {
                if !spec.pruning.tau_split {
                    return true;
                }
                let off = b.len() as i64 - 2 * t.lambda;
                off % t.a == 0 && b.intersection_len(e1_set) as i64 == t.lambda - (off / t.a) * t.d
            })
            .collect();
        candidates.sort_by_key(|b| (b.len(), b.bits()));
        Setup { v, lambda: t.lambda as usize, candidates, target: targets(t), pruning: spec.pruning }
    }

    /// `(B0, B1)` pairs, in a fixed order.
    fn branches(&self, e1: usize) -> Vec<(PointSet, PointSet)> {
        let v = self.v;
        let e2 = v - e1;
        let is_candidate = |b: PointSet| self.candidates.binary_search_by_key(&(b.len(), b.bits()), |c| (c.len(), c.bits())).is_ok();
        let first = |lo: usize, n: usize| PointSet::range(lo, lo + n);
        let mut out = Vec::new();
        for p1 in 0..=e1 {
            for p2 in 0..=e2 {
                let b0 = first(0, p1).union(first(e1, p2));
                if b0.is_empty() || !is_candidate(b0) {
                    continue;
                }
                // cells: E1∩B0, E1\B0, E2∩B0, E2\B0
                for q11 in 0..=p1.min(self.lambda) {
                    let q21 = self.lambda - q11;
                    if q21 > p2 {
                        continue;
                    }
                    for q12 in 0..=(e1 - p1) {
                        for q22 in 0..=(e2 - p2) {
                            let b1 = first(0, q11)
                                .union(first(p1, q12))
                                .union(first(e1, q21))
                                .union(first(e1 + p2, q22));
                            if b1.len() < b0.len() || !is_candidate(b1) {
                                continue;
                            }
                            out.push((b0, b1));
                        }
                    }
                }
            }
        }
        out
    }
}

struct BranchOutcome {
    /// key -> (representative, type1, labeled count)
    classes: BTreeMap<Vec<u32>, (IncidenceStructure, bool, u64)>,
    nodes: u64,
    hit_budget: bool,
}

struct Branch<'a> {
    setup: &'a Setup,
    /// Candidates allowed after B0 and B1.
    rest: Vec<PointSet>,
    adj: Vec<Bits>,
    contains: Vec<Bits>,
    counts: Vec<u8>,
    chosen: Vec<usize>,
    head: [PointSet; 2],
    nodes: u64,
    node_cap: Option<u64>,
    max_classes: Option<usize>,
    deadline: Option<Instant>,
    abort: &'a AtomicBool,
    stopped: bool,
    hit_budget: bool,
    classes: BTreeMap<Vec<u32>, (IncidenceStructure, bool, u64)>,
}

impl<'a> Branch<'a> {
    fn new(
        setup: &'a Setup,
        b0: PointSet,
        b1: PointSet,
        spec: &SearchSpec,
        deadline: Option<Instant>,
        abort: &'a AtomicBool,
    ) -> Self {
        let lambda = setup.lambda;
        let rest: Vec<PointSet> = setup
            .candidates
            .iter()
            .copied()
            .filter(|c| c.len() >= b1.len())
            .filter(|c| c.intersection_len(b0) == lambda && c.intersection_len(b1) == lambda)
            .collect();
        let n = rest.len();
        let mut adj = vec![Bits::zeros(n); n];
        for i in 0..n {
            for j in (i + 1)..n {
                if rest[i].intersection_len(rest[j]) == lambda {
                    adj[i].set(j);
                }
            }
        }
        let mut contains = vec![Bits::zeros(n); setup.v];
        for (i, c) in rest.iter().enumerate() {
            for p in c.iter() {
                contains[p].set(i);
            }
        }
        let mut counts = vec![0u8; setup.v];
        for p in b0.iter().chain(b1.iter()) {
            counts[p] += 1;
        }
        Branch {
            setup,
            rest,
            adj,
            contains,
            counts,
            chosen: Vec::with_capacity(setup.v),
            head: [b0, b1],
            nodes: 0,
            node_cap: spec.node_budget,
            max_classes: spec.max_solutions,
            deadline,
            abort,
            stopped: false,
            hit_budget: false,
            classes: BTreeMap::new(),
        }
    }

    fn run(mut self) -> BranchOutcome {
        let n = self.rest.len();
        let mut all = Bits::zeros(n);
        for i in 0..n {
            all.set(i);
        }
        let over = self.head.iter().flat_map(|b| b.iter()).any(|p| self.counts[p] > self.setup.target[p]);
        if !(self.setup.pruning.columns && over) {
            self.dfs(self.setup.v - 2, all);
        }
        BranchOutcome { classes: self.classes, nodes: self.nodes, hit_budget: self.hit_budget }
    }

    /// Drops candidates through saturated points and checks every point can
    /// still reach its target. `false` means the node is dead.
    fn columns_feasible(&self, avail: &mut Bits, left: usize) -> bool {
        for (p, &target) in self.setup.target.iter().enumerate() {
            if self.counts[p] >= target {
                for (w, m) in avail.0.iter_mut().zip(&self.contains[p].0) {
                    *w &= !m;
                }
            }
        }
        self.needs_coverable(avail, left)
    }

    fn needs_coverable(&self, avail: &Bits, left: usize) -> bool {
        for (p, &target) in self.setup.target.iter().enumerate() {
            let need = (target - self.counts[p].min(target)) as usize;
            if need > left || (need > 0 && avail.count_and(&self.contains[p]) < need) {
                return false;
            }
        }
        true
    }

    fn dfs(&mut self, left: usize, mut avail: Bits) {
        if self.stopped {
            return;
        }
        self.nodes += 1;
        if let Some(cap) = self.node_cap {
            if self.nodes > cap {
                self.stopped = true;
                self.hit_budget = true;
                return;
            }
        }
        if self.nodes.is_multiple_of(4096) {
            if self.abort.load(Ordering::Relaxed) {
                self.stopped = true;
                self.hit_budget = true;
                return;
            }
            if let Some(deadline) = self.deadline {
                if Instant::now() >= deadline {
                    self.abort.store(true, Ordering::Relaxed);
                    self.stopped = true;
                    self.hit_budget = true;
                    return;
                }
            }
        }
        if left == 0 {
            if self.counts == self.setup.target {
                self.record();
            }
            return;
        }
        let columns = self.setup.pruning.columns;
        if columns && !self.columns_feasible(&mut avail, left) {
            return;
        }
        for w in 0..avail.0.len() {
            while avail.0[w] != 0 {
                if avail.count() < left {
                    return;
                }
                let bit = avail.0[w].trailing_zeros() as usize;
                let i = w * 64 + bit;
                let block = self.rest[i];
                let next = Bits(avail.0.iter().zip(&self.adj[i].0).map(|(a, b)| a & b).collect());
                let mut ok = true;
                for p in block.iter() {
                    self.counts[p] += 1;
                    if columns && self.counts[p] > self.setup.target[p] {
                        ok = false;
                    }
                }
                if ok {
                    self.chosen.push(i);
                    self.dfs(left - 1, next);
                    self.chosen.pop();
                }
                for p in block.iter() {
                    self.counts[p] -= 1;
                }
                if self.stopped {
                    return;
                }
                avail.0[w] &= !(1u64 << bit);
                if columns && !self.needs_coverable(&avail, left) {
                    return;
                }
            }
        }
    }

    fn record(&mut self) {
        let mut blocks = self.head.to_vec();
        blocks.extend(self.chosen.iter().map(|&i| self.rest[i]));
        let s = IncidenceStructure::from_sets(self.setup.v, blocks).expect("candidates are proper nonempty subsets");
        if classify(&s) != (DesignClass::Ryser { v: self.setup.v, lambda: self.setup.lambda }) {
            return;
        }
        let Ok(inv) = ryser_invariants(&s) else { return };
        let key = weak_canonical_key(&s);
        let rep = weak_canonical_form(&s);
        match self.classes.get_mut(&key) {
            Some(entry) => {
                entry.2 += 1;
                if rep.blocks() < entry.0.blocks() {
                    entry.0 = rep;
                }
            }
            None => {
                self.classes.insert(key, (rep, type1_test(&inv), 1));
                if self.max_classes.is_some_and(|m| self.classes.len() >= m) {
                    self.stopped = true;
                }
            }
        }
    }
}

/// Runs the search described by `spec`. Repeated runs, and sequential versus
/// parallel runs, give identical results unless the time budget intervenes.
pub fn search_designs(spec: &SearchSpec, exec: Execution) -> Result<SearchResult, SearchError> {
    let start = Instant::now();
    let t = &spec.tuple;
    t.check_consistency()?;
    let cap = spec.v_cap.min(HARD_V_CAP);
    if t.v as usize > cap || t.v < 3 {
        return Err(SearchError::CapExceeded { v: t.v, cap });
    }
    let mut result = SearchResult {
        tuple: t.clone(),
        solutions: Vec::new(),
        nodes: 0,
        status: Status::Complete,
        truncated: false,
        elapsed: Duration::ZERO,
    };

    let total = (t.e1 * t.r1 + t.e2 * t.r2) as usize;
    if !size_multiset_exists(&spec.admissible_sizes(), t.v as usize, total) {
        result.status = Status::Infeasible;
        result.elapsed = start.elapsed();
        return Ok(result);
    }

    let setup = Setup::new(spec);
    let branches = setup.branches(t.e1 as usize);
    let deadline = spec.time_budget.map(|d| start + d);
    let abort = AtomicBool::new(false);
    let outcomes = exec.map(&branches, |&(b0, b1)| {
        Branch::new(&setup, b0, b1, spec, deadline, &abort).run()
    });

    let mut merged: BTreeMap<Vec<u32>, (IncidenceStructure, bool, u64)> = BTreeMap::new();
    let mut nodes = 0u64;
    for outcome in outcomes {
        if let Some(budget) = spec.node_budget {
            if nodes + outcome.nodes > budget {
                result.status = Status::Incomplete;
                nodes = budget;
                break;
            }
        }
        nodes += outcome.nodes;
        if outcome.hit_budget {
            result.status = Status::Incomplete;
        }
        for (key, (rep, type1, labeled)) in outcome.classes {
            if let Some(entry) = merged.get_mut(&key) {
                entry.2 += labeled;
                if rep.blocks() < entry.0.blocks() {
                    entry.0 = rep;
                }
            } else if spec.max_solutions.is_some_and(|m| merged.len() >= m) {
                result.truncated = true;
            } else {
                merged.insert(key, (rep, type1, labeled));
            }
        }
        if spec.max_solutions.is_some_and(|m| merged.len() >= m) {
            result.truncated = true;
        }
    }
    if abort.load(Ordering::Relaxed) {
        result.status = Status::Incomplete;
    }
    result.nodes = nodes;
    result.solutions = merged
        .into_iter()
        .map(|(key, (design, type1, labeled))| Solution { design, key, type1, labeled })
        .collect();
    result.elapsed = start.elapsed();
    Ok(result)
}

#[derive(Clone, Debug)]
pub struct Type2Report {
    pub lambda: i64,
    pub v_cap: usize,
    pub runs: Vec<(Verdict, SearchResult)>,
}

impl Type2Report {
    /// Solutions whose arithmetic Type-1 test fails.
    pub fn type2_findings(&self) -> Vec<(&ParameterTuple, &Solution)> {
        self.runs
            .iter()
            .flat_map(|(_, r)| r.solutions.iter().filter(|s| !s.type1).map(move |s| (&r.tuple, s)))
            .collect()
    }

    pub fn complete(&self) -> bool {
        self.runs.iter().all(|(_, r)| r.status != Status::Incomplete)
    }

    pub fn report(&self) -> String {
        let mut out = String::new();
        writeln!(out, "type2-search\tlambda={}\tv_cap={}", self.lambda, self.v_cap).unwrap();
        for (verdict, r) in &self.runs {
            writeln!(out, "verdict\t{}\t{}", verdict.label(), verdict.rule_label()).unwrap();
            out.push_str(&r.report());
        }
        let findings = self.type2_findings();
        writeln!(out, "type2_findings\t{}", findings.len()).unwrap();
        writeln!(out, "overall\t{}", if self.complete() { "COMPLETE" } else { "INCOMPLETE" }).unwrap();
        out
    }
}

/// Searches every non-eliminated tuple of index `lambda` with `v <= v_cap`.
pub fn search_type2(lambda: i64, v_cap: usize, exec: Execution) -> Result<Type2Report, SearchError> {
    search_type2_with(lambda, v_cap, None, exec)
}

pub fn search_type2_with(
    lambda: i64,
    v_cap: usize,
    time_budget: Option<Duration>,
    exec: Execution,
) -> Result<Type2Report, SearchError> {
    if v_cap > HARD_V_CAP {
        return Err(SearchError::CapExceeded { v: v_cap as i64, cap: HARD_V_CAP });
    }
    let mut runs = Vec::new();
    for t in enumerate_tuples(lambda, false, exec)? {
        if t.v as usize > v_cap {
            continue;
        }
        let verdict = apply_rules(&t)?;
        if matches!(verdict, Verdict::Eliminated(_)) {
            continue;
        }
        let mut spec = SearchSpec::new(t);
        spec.v_cap = v_cap.max(DEFAULT_V_CAP);
        spec.time_budget = time_budget;
        runs.push((verdict, search_designs(&spec, exec)?));
    }
    Ok(Type2Report { lambda, v_cap, runs })
}
