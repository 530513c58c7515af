//! Exact motif search: sample-driven filtering of a row matrix with a stack
//! of chosen l-mers, then pattern-driven enumeration of the common
//! neighborhood once the stack reaches the threshold size.
//!
//! Pushing `u` removes from every later row each l-mer `v` that cannot share
//! a `d`-neighbor with the stack: `Hd(u, v) > 2d`, or `(v, s, u)` failing the
//! three-l-mer test for some older stack entry `s`. Older pairs were already
//! enforced when those entries were pushed. Every neighbor of the final
//! stack that has a survivor within `d` in each remaining row is a motif.

mod pairs;
mod rows;
mod threshold;

use std::collections::HashSet;
use std::time::{Duration, Instant};

use serde::Serialize;

pub use pairs::{PairCompatibilityMatrix, WORD_BITS};
pub use rows::{sort_rows_by_size, RowMatrix};
pub use threshold::{analytic_threshold, estimate_threshold, CurvePoint, ThresholdModel};

use crate::alphabet::Alphabet;
use crate::error::SolverError;
use crate::neighborhood::generate_common_neighborhood;
use crate::packed::{LmerId, PackedPattern, PackedSequenceSet};
use crate::pruning::triple_feasible_uniform;

/// An `(l, d)` motif search problem.
pub struct Instance {
    set: PackedSequenceSet,
    d: usize,
}

impl Instance {
    pub fn new<S: AsRef<[u8]>>(
        strings: &[S],
        alphabet: &Alphabet,
        l: usize,
        d: usize,
    ) -> Result<Self, SolverError> {
        Self::from_set(PackedSequenceSet::encode(strings, alphabet, l)?, d)
    }

    pub fn from_set(set: PackedSequenceSet, d: usize) -> Result<Self, SolverError> {
        if d > set.l() {
            return Err(SolverError::BadBudget { d, l: set.l() });
        }
        Ok(Instance { set, d })
    }

    pub fn set(&self) -> &PackedSequenceSet {
        &self.set
    }

    pub fn alphabet(&self) -> &Alphabet {
        self.set.alphabet()
    }

    pub fn n(&self) -> usize {
        self.set.n()
    }

    pub fn m(&self) -> usize {
        self.set.m()
    }

    pub fn l(&self) -> usize {
        self.set.l()
    }

    pub fn d(&self) -> usize {
        self.d
    }

    /// Input strings as alphabet symbols.
    pub fn strings(&self) -> Vec<Vec<u8>> {
        (0..self.n()).map(|i| self.set.decode(i)).collect()
    }
}

/// Deduplicated motifs as symbol strings, sorted bytewise.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct MotifSet {
    motifs: Vec<Vec<u8>>,
    truncated: bool,
}

impl MotifSet {
    pub fn from_motifs(motifs: impl IntoIterator<Item = Vec<u8>>) -> Self {
        let mut motifs: Vec<Vec<u8>> = motifs.into_iter().collect();
        motifs.sort_unstable();
        motifs.dedup();
        MotifSet {
            motifs,
            truncated: false,
        }
    }

    pub fn len(&self) -> usize {
        self.motifs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.motifs.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &[u8]> {
        self.motifs.iter().map(Vec::as_slice)
    }

    pub fn contains(&self, motif: &[u8]) -> bool {
        self.motifs
            .binary_search_by(|m| m.as_slice().cmp(motif))
            .is_ok()
    }

    /// Whether the search stopped at `max_motifs`.
    pub fn truncated(&self) -> bool {
        self.truncated
    }

    pub fn to_strings(&self) -> Vec<String> {
        self.motifs
            .iter()
            .map(|m| String::from_utf8_lossy(m).into_owned())
            .collect()
    }

    /// One motif per line, newline-terminated.
    pub fn to_lines(&self) -> String {
        let mut out = String::new();
        for m in &self.motifs {
            out.push_str(&String::from_utf8_lossy(m));
            out.push('\n');
        }
        out
    }

    pub(crate) fn set_truncated(&mut self, truncated: bool) {
        self.truncated = truncated;
    }

    /// Keeps the first `cap` motifs, marking the set truncated if any drop.
    pub fn truncate(&mut self, cap: usize) {
        if self.motifs.len() > cap {
            self.motifs.truncate(cap);
            self.truncated = true;
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SolverConfig {
    /// Stack size at which to switch to neighborhood generation.
    pub threshold_override: Option<usize>,
    pub sort_rows: bool,
    pub use_pair_matrix: bool,
    /// Stop once this many distinct motifs are found.
    pub max_motifs: Option<usize>,
    /// Re-check each motif against all original l-mers (debug aid).
    pub verify_against_original: bool,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            threshold_override: None,
            sort_rows: true,
            use_pair_matrix: true,
            max_motifs: None,
            verify_against_original: false,
        }
    }
}

/// Counters and timings for one or more solver runs.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize)]
pub struct SolveStats {
    /// Stacks that reached the pattern-driven phase.
    pub tuples: u64,
    /// Neighbors enumerated across all tuples.
    pub neighbors: u64,
    /// Neighbors that passed verification (before deduplication).
    pub hits: u64,
    #[serde(serialize_with = "as_secs")]
    pub sample_time: Duration,
    #[serde(serialize_with = "as_secs")]
    pub pattern_time: Duration,
}

fn as_secs<S: serde::Serializer>(d: &Duration, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_f64(d.as_secs_f64())
}

impl SolveStats {
    pub fn merge(&mut self, other: &SolveStats) {
        self.tuples += other.tuples;
        self.neighbors += other.neighbors;
        self.hits += other.hits;
        self.sample_time += other.sample_time;
        self.pattern_time += other.pattern_time;
    }
}

/// Memory held by the solver's data structures, in 64-bit words.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct AllocationReport {
    pub word_bits: usize,
    pub lmers: usize,
    pub pair_matrix_words: usize,
    pub row_matrix_words: usize,
    pub row_size_words: usize,
    pub encoded_words: usize,
    pub distance_cache_words: usize,
    pub total_words: usize,
    /// `n(n + m - l + 1) + K^2 / w`.
    pub bound_words: usize,
}

impl AllocationReport {
    pub fn ratio(&self) -> f64 {
        self.total_words as f64 / self.bound_words as f64
    }
}

/// Shared read-only state for any number of solvers over one instance.
pub struct SolveContext<'a> {
    instance: &'a Instance,
    pairs: Option<PairCompatibilityMatrix>,
    threshold: usize,
    config: SolverConfig,
}

impl<'a> SolveContext<'a> {
    pub fn new(instance: &'a Instance, config: SolverConfig) -> Result<Self, SolverError> {
        let n = instance.n();
        let threshold = match config.threshold_override {
            Some(t) if t == 0 || t > n => return Err(SolverError::BadThreshold { t, n }),
            Some(t) => t,
            None => estimate_threshold(
                n,
                instance.m(),
                instance.l(),
                instance.d(),
                instance.alphabet().len(),
            ),
        };
        let pairs = if config.use_pair_matrix {
            Some(PairCompatibilityMatrix::precompute(instance.set(), instance.d())?)
        } else {
            None
        };
        Ok(SolveContext {
            instance,
            pairs,
            threshold,
            config,
        })
    }

    pub fn instance(&self) -> &Instance {
        self.instance
    }

    pub fn threshold(&self) -> usize {
        self.threshold
    }

    pub fn config(&self) -> &SolverConfig {
        &self.config
    }

    pub fn pairs(&self) -> Option<&PairCompatibilityMatrix> {
        self.pairs.as_ref()
    }

    /// Accounting for the shared structures plus `solvers` per-worker states.
    pub fn allocation_report(&self, solvers: usize) -> AllocationReport {
        let set = self.instance.set();
        let (n, m, l) = (set.n(), set.m(), set.l());
        let k = set.lmer_count();
        let pair_matrix_words = self.pairs.as_ref().map_or(0, |p| p.words());
        let row_matrix_words = solvers * (k * std::mem::size_of::<LmerId>()).div_ceil(8);
        // live counts, saved counts, row order and saved orders
        let row_size_words = solvers * (2 * n + 2 * n * n);
        let distance_cache_words = solvers * (n * k * 2 + n * n * 2).div_ceil(8);
        let encoded_words = set.footprint_words();
        AllocationReport {
            word_bits: WORD_BITS,
            lmers: k,
            pair_matrix_words,
            row_matrix_words,
            row_size_words,
            encoded_words,
            distance_cache_words,
            total_words: pair_matrix_words
                + row_matrix_words
                + row_size_words
                + encoded_words
                + distance_cache_words,
            bound_words: n * (n + m - l + 1) + (k * k).div_ceil(WORD_BITS),
        }
    }
}

/// Per-worker search state.
pub struct Solver<'c, 'a> {
    ctx: &'c SolveContext<'a>,
    rows: RowMatrix,
    order: Vec<usize>,
    saved_order: Vec<usize>,
    stack: Vec<LmerId>,
    /// `stack_dist[q * n + p]`: distance between stack entries `q < p`.
    stack_dist: Vec<u16>,
    /// `dist_cache[q * K + v]`: distance from `v` to stack entry `q`.
    dist_cache: Vec<u16>,
    found: HashSet<Vec<u8>>,
    stats: SolveStats,
    stopped: bool,
}

impl<'c, 'a> Solver<'c, 'a> {
    pub fn new(ctx: &'c SolveContext<'a>) -> Self {
        let set = ctx.instance.set();
        let n = set.n();
        Solver {
            ctx,
            rows: RowMatrix::full(set),
            order: (0..n).collect(),
            saved_order: vec![0; n * n],
            stack: Vec::with_capacity(n),
            stack_dist: vec![0; n * n],
            dist_cache: vec![0; n * set.lmer_count()],
            found: HashSet::new(),
            stats: SolveStats::default(),
            stopped: false,
        }
    }

    /// Searches the whole instance.
    pub fn run(&mut self) {
        self.rows.reset(self.ctx.instance.set(), None);
        self.search();
    }

    /// Searches the subproblem whose first string is the single l-mer at
    /// `offset` of string 0.
    pub fn run_subproblem(&mut self, offset: usize) -> Result<(), SolverError> {
        let max = self.ctx.instance.m() - self.ctx.instance.l();
        if offset > max {
            return Err(SolverError::BadSubproblem { offset, max });
        }
        self.rows.reset(self.ctx.instance.set(), Some(offset));
        self.search();
        Ok(())
    }

    fn search(&mut self) {
        let n = self.rows.n();
        self.order.clear();
        self.order.extend(0..n);
        self.stack.clear();
        let start = Instant::now();
        let pattern_before = self.stats.pattern_time;
        self.generate_motifs(0);
        let pattern = self.stats.pattern_time - pattern_before;
        self.stats.sample_time += start.elapsed().saturating_sub(pattern);
    }

    pub fn rows(&self) -> &RowMatrix {
        &self.rows
    }

    pub fn stats(&self) -> &SolveStats {
        &self.stats
    }

    pub fn found_count(&self) -> usize {
        self.found.len()
    }

    pub fn stopped(&self) -> bool {
        self.stopped
    }

    /// Drains the motifs found so far, as symbol codes.
    pub fn take_motif_codes(&mut self) -> Vec<Vec<u8>> {
        self.found.drain().collect()
    }

    /// Drains the motifs found so far into a sorted set.
    pub fn take_motifs(&mut self) -> MotifSet {
        let alphabet = self.ctx.instance.alphabet().clone();
        let truncated = self.stopped;
        let mut set = MotifSet::from_motifs(self.found.drain().map(|m| alphabet.decode(&m)));
        set.set_truncated(truncated);
        set
    }

    /// Tries every live l-mer of the row at stack depth `p`.
    fn generate_motifs(&mut self, p: usize) {
        let n = self.rows.n();
        let row = self.order[p];
        let count = self.rows.live_count(row);
        for idx in 0..count {
            if self.stopped {
                break;
            }
            let u = self.rows.live(row)[idx];
            self.stack.push(u);
            self.rows.checkpoint(p);
            self.saved_order[p * n..(p + 1) * n].copy_from_slice(&self.order);

            if self.filter_rows(p) {
                let size = p + 1;
                if size >= self.ctx.threshold || size == n {
                    self.pattern_phase();
                } else {
                    if self.ctx.config.sort_rows {
                        sort_rows_by_size(&mut self.order, size, &self.rows);
                    }
                    self.generate_motifs(size);
                }
            }

            self.rows.restore(p);
            self.order
                .copy_from_slice(&self.saved_order[p * n..(p + 1) * n]);
            self.stack.pop();
        }
    }

    /// Filters the rows after depth `p` against the l-mer just pushed there.
    /// Returns `false` as soon as a row empties.
    fn filter_rows(&mut self, p: usize) -> bool {
        let Solver {
            ctx,
            rows,
            order,
            stack,
            stack_dist,
            dist_cache,
            ..
        } = self;
        let set = ctx.instance.set();
        let d = ctx.instance.d();
        let n = rows.n();
        let k = set.lmer_count();
        let u = stack[p];
        for q in 0..p {
            stack_dist[q * n + p] = set.distance(stack[q], u) as u16;
        }
        for &row in &order[p + 1..] {
            let kept = rows.retain_in_place(row, |v| {
                let h = match &ctx.pairs {
                    Some(pm) => {
                        if !pm.get(u, v) {
                            return false;
                        }
                        set.distance(u, v)
                    }
                    None => {
                        let h = set.distance(u, v);
                        if h > 2 * d {
                            return false;
                        }
                        h
                    }
                };
                for q in 0..p {
                    let s = stack[q];
                    let pair = [
                        dist_cache[q * k + v as usize] as usize,
                        h,
                        stack_dist[q * n + p] as usize,
                    ];
                    if !triple_feasible_uniform(pair, || set.all_distinct_columns(v, s, u), d) {
                        return false;
                    }
                }
                dist_cache[p * k + v as usize] = h as u16;
                true
            });
            if kept == 0 {
                return false;
            }
        }
        true
    }

    fn pattern_phase(&mut self) {
        let start = Instant::now();
        let Solver {
            ctx,
            rows,
            order,
            stack,
            found,
            stats,
            stopped,
            ..
        } = self;
        let set = ctx.instance.set();
        let d = ctx.instance.d();
        let cap = ctx.config.max_motifs.unwrap_or(usize::MAX);
        let remaining = &order[stack.len()..];
        let tuple: Vec<&[u8]> = stack.iter().map(|&id| set.lmer_codes(id)).collect();
        let mut pattern = PackedPattern::default();
        stats.tuples += 1;
        let visited = generate_common_neighborhood(&tuple, d, set.alphabet().len(), |m| {
            if *stopped {
                return;
            }
            set.pack_pattern_into(m, &mut pattern);
            if verify_motif(set, rows, remaining, &pattern, d) {
                if ctx.config.verify_against_original {
                    assert!(
                        verify_against_original(set, &pattern, d),
                        "motif {:?} fails against the original strings",
                        set.alphabet().decode_string(m)
                    );
                }
                stats.hits += 1;
                found.insert(m.to_vec());
                if found.len() >= cap {
                    *stopped = true;
                }
            }
        })
        .expect("stack l-mers are valid and d <= l");
        stats.neighbors += visited;
        stats.pattern_time += start.elapsed();
    }
}

/// True iff each of `which` rows holds a live l-mer within `d` of `pattern`.
pub fn verify_motif(
    set: &PackedSequenceSet,
    rows: &RowMatrix,
    which: &[usize],
    pattern: &PackedPattern,
    d: usize,
) -> bool {
    which.iter().all(|&r| {
        rows.live(r)
            .iter()
            .any(|&v| set.distance_to_pattern(pattern, v, d) <= d)
    })
}

/// True iff every input string has some l-mer within `d` of `pattern`.
pub fn verify_against_original(set: &PackedSequenceSet, pattern: &PackedPattern, d: usize) -> bool {
    let per_row = set.lmers_per_sequence();
    (0..set.n()).all(|i| {
        (0..per_row).any(|j| {
            let id = (i * per_row + j) as LmerId;
            set.distance_to_pattern(pattern, id, d) <= d
        })
    })
}

/// Finds every `(l, d)` motif of the instance on the calling thread.
pub fn solve(instance: &Instance, config: &SolverConfig) -> Result<MotifSet, SolverError> {
    solve_with_stats(instance, config).map(|(motifs, _)| motifs)
}

pub fn solve_with_stats(
    instance: &Instance,
    config: &SolverConfig,
) -> Result<(MotifSet, SolveStats), SolverError> {
    let ctx = SolveContext::new(instance, config.clone())?;
    let mut solver = Solver::new(&ctx);
    solver.run();
    let stats = *solver.stats();
    Ok((solver.take_motifs(), stats))
}
