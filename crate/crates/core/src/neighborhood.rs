//! Common d-neighborhood enumeration over the prefix tree of `Σ^l`.
//!
//! A node at depth `p` is a prefix `x[0..p]` with remaining budgets
//! `r_i = d - Hd(x[0..p], T_i[0..p])`. A node is cut when the suffixes
//! `T_i[p..]` cannot share a completion within `r`: a pair with
//! `Hd > r_i + r_j`, a triple failing the three-l-mer test, or the whole
//! tuple's consensus distance exceeding `Σ r_i`. Suffix distances are
//! tabulated once per call so each node costs `O(k^2)` comparisons.
//!
//! Children are visited in symbol-code order, so neighbors come out in
//! lexicographic code order.

use crate::error::NeighborhoodError;
use crate::pruning::{consensus_total_distance, triple_feasible};

/// Remaining per-l-mer budgets at a tree node.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NeighborBudget {
    pub remaining: Vec<isize>,
    pub depth: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum PruneMode {
    /// Cut subtrees with no valid completion.
    #[default]
    Enabled,
    /// Walk the whole tree and filter at the leaves.
    Disabled,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct TraversalStats {
    pub nodes: u64,
    pub neighbors: u64,
}

/// Visits every `M` in `Σ^l` with `Hd(M, T_i) <= d` for all `i`, exactly once
/// and in lexicographic code order. Returns the number visited.
pub fn generate_common_neighborhood<F>(
    tuple: &[&[u8]],
    d: usize,
    sigma: usize,
    visit: F,
) -> Result<u64, NeighborhoodError>
where
    F: FnMut(&[u8]),
{
    generate_common_neighborhood_with(tuple, d, sigma, PruneMode::Enabled, visit)
        .map(|s| s.neighbors)
}

pub fn generate_common_neighborhood_with<F>(
    tuple: &[&[u8]],
    d: usize,
    sigma: usize,
    mode: PruneMode,
    mut visit: F,
) -> Result<TraversalStats, NeighborhoodError>
where
    F: FnMut(&[u8]),
{
    let mut walker = Walker::new(tuple, d, sigma, mode)?;
    walker.descend(0, &mut visit);
    Ok(walker.stats)
}

/// Prune test from scratch on explicit suffixes. Returns `true` to cut.
///
/// Triples are restricted to those containing the last l-mer when more than
/// three l-mers are given, as in the traversal.
pub fn prune(suffixes: &[&[u8]], remaining: &[isize]) -> bool {
    let k = suffixes.len();
    if remaining.iter().any(|&r| r < 0) {
        return true;
    }
    let dist = |i: usize, j: usize| -> isize {
        suffixes[i]
            .iter()
            .zip(suffixes[j])
            .filter(|(a, b)| a != b)
            .count() as isize
    };
    for i in 0..k {
        for j in i + 1..k {
            if dist(i, j) > remaining[i] + remaining[j] {
                return true;
            }
        }
    }
    for (i, j, h) in triples(k) {
        let all_distinct = (0..suffixes[i].len())
            .filter(|&c| {
                let (x, y, z) = (suffixes[i][c], suffixes[j][c], suffixes[h][c]);
                x != y && x != z && y != z
            })
            .count();
        let pair = [dist(i, j), dist(i, h), dist(j, h)].map(|v| v as usize);
        let budgets = [remaining[i], remaining[j], remaining[h]].map(|v| v as usize);
        if !triple_feasible(pair, all_distinct, budgets) {
            return true;
        }
    }
    if k > 0 {
        let cd = consensus_total_distance(suffixes).unwrap_or(0) as isize;
        if cd > remaining.iter().sum::<isize>() {
            return true;
        }
    }
    false
}

/// Triples checked for a tuple of size `k`.
fn triples(k: usize) -> Vec<(usize, usize, usize)> {
    let mut out = Vec::new();
    if k < 3 {
        return out;
    }
    let last = k - 1;
    for i in 0..last {
        for j in i + 1..last {
            out.push((i, j, last));
        }
    }
    out
}

struct Walker<'t> {
    tuple: &'t [&'t [u8]],
    sigma: u8,
    l: usize,
    mode: PruneMode,
    remaining: Vec<isize>,
    prefix: Vec<u8>,
    pairs: Vec<(usize, usize)>,
    /// `suffix_pair[q][p]`: distance between the suffixes at depth `p` of pair `q`.
    suffix_pair: Vec<Vec<u16>>,
    triples: Vec<(usize, usize, usize, [usize; 3])>,
    /// `suffix_distinct[q][p]`: all-distinct columns in the suffixes of triple `q`.
    suffix_distinct: Vec<Vec<u16>>,
    suffix_consensus: Vec<u32>,
    stats: TraversalStats,
}

impl<'t> Walker<'t> {
    fn new(
        tuple: &'t [&'t [u8]],
        d: usize,
        sigma: usize,
        mode: PruneMode,
    ) -> Result<Self, NeighborhoodError> {
        let first = tuple.first().ok_or(NeighborhoodError::EmptyTuple)?;
        let l = first.len();
        if tuple.iter().any(|t| t.len() != l) {
            return Err(NeighborhoodError::LengthMismatch);
        }
        if d > l {
            return Err(NeighborhoodError::BudgetTooLarge { d, l });
        }
        if let Some(&bad) = tuple.iter().flat_map(|t| t.iter()).find(|&&c| c as usize >= sigma) {
            return Err(NeighborhoodError::BadCode(bad));
        }
        let k = tuple.len();

        let mut pairs = Vec::new();
        let mut pair_index = vec![0usize; k * k];
        for i in 0..k {
            for j in i + 1..k {
                pair_index[i * k + j] = pairs.len();
                pairs.push((i, j));
            }
        }
        let suffix_pair = pairs
            .iter()
            .map(|&(i, j)| suffix_sums(l, |c| (tuple[i][c] != tuple[j][c]) as u16))
            .collect();
        let triples: Vec<_> = triples(k)
            .into_iter()
            .map(|(i, j, h)| {
                let idx = [pair_index[i * k + j], pair_index[i * k + h], pair_index[j * k + h]];
                (i, j, h, idx)
            })
            .collect();
        let suffix_distinct = triples
            .iter()
            .map(|&(i, j, h, _)| {
                suffix_sums(l, |c| {
                    let (x, y, z) = (tuple[i][c], tuple[j][c], tuple[h][c]);
                    (x != y && x != z && y != z) as u16
                })
            })
            .collect();
        let mut freq = vec![0u32; sigma];
        let mut suffix_consensus = vec![0u32; l + 1];
        for c in (0..l).rev() {
            let mut best = 0;
            for t in tuple {
                freq[t[c] as usize] += 1;
                best = best.max(freq[t[c] as usize]);
            }
            for t in tuple {
                freq[t[c] as usize] = 0;
            }
            suffix_consensus[c] = suffix_consensus[c + 1] + (k as u32 - best);
        }

        Ok(Walker {
            tuple,
            sigma: sigma as u8,
            l,
            mode,
            remaining: vec![d as isize; k],
            prefix: vec![0; l],
            pairs,
            suffix_pair,
            triples,
            suffix_distinct,
            suffix_consensus,
            stats: TraversalStats::default(),
        })
    }

    fn descend<F: FnMut(&[u8])>(&mut self, p: usize, visit: &mut F) {
        self.stats.nodes += 1;
        if p == self.l {
            if self.remaining.iter().all(|&r| r >= 0) {
                self.stats.neighbors += 1;
                visit(&self.prefix);
            }
            return;
        }
        if self.mode == PruneMode::Enabled && self.cut(p) {
            return;
        }
        for alpha in 0..self.sigma {
            self.prefix[p] = alpha;
            let mut live = true;
            for (r, t) in self.remaining.iter_mut().zip(self.tuple) {
                if t[p] != alpha {
                    *r -= 1;
                    live &= *r >= 0;
                }
            }
            if live || self.mode == PruneMode::Disabled {
                self.descend(p + 1, visit);
            }
            for (r, t) in self.remaining.iter_mut().zip(self.tuple) {
                if t[p] != alpha {
                    *r += 1;
                }
            }
        }
    }

    /// Suffix test at depth `p`; assumes all budgets are non-negative.
    fn cut(&self, p: usize) -> bool {
        let r = &self.remaining;
        for (q, &(i, j)) in self.pairs.iter().enumerate() {
            if self.suffix_pair[q][p] as isize > r[i] + r[j] {
                return true;
            }
        }
        for (q, &(i, j, h, idx)) in self.triples.iter().enumerate() {
            let pair = idx.map(|e| self.suffix_pair[e][p] as usize);
            let budgets = [r[i], r[j], r[h]].map(|v| v as usize);
            if !triple_feasible(pair, self.suffix_distinct[q][p] as usize, budgets) {
                return true;
            }
        }
        self.suffix_consensus[p] as isize > r.iter().sum::<isize>()
    }
}

fn suffix_sums(l: usize, column: impl Fn(usize) -> u16) -> Vec<u16> {
    let mut out = vec![0u16; l + 1];
    for c in (0..l).rev() {
        out[c] = out[c + 1] + column(c);
    }
    out
}
