use crate::packed::{LmerId, PackedSequenceSet};

/// Surviving l-mers per input string.
///
/// Each row keeps its survivors in a prefix of its storage; filtering swaps
/// rejected l-mers past the prefix and shrinks the live count. Live counts
/// are checkpointed per stack depth in an `n x n` table, so undoing a
/// filtering step only restores counts: the rejected l-mers are still in the
/// row, just outside the prefix.
#[derive(Clone, Debug)]
pub struct RowMatrix {
    n: usize,
    rows: Vec<Vec<LmerId>>,
    live: Vec<usize>,
    saved: Vec<usize>,
}

impl RowMatrix {
    /// All l-mers of every string.
    pub fn full(set: &PackedSequenceSet) -> Self {
        let per_row = set.lmers_per_sequence();
        let n = set.n();
        let rows: Vec<Vec<LmerId>> = (0..n)
            .map(|i| ((i * per_row) as LmerId..((i + 1) * per_row) as LmerId).collect())
            .collect();
        RowMatrix {
            n,
            live: vec![per_row; n],
            rows,
            saved: vec![0; n * n],
        }
    }

    /// Resets to the initial state, optionally restricting row 0 to the
    /// single l-mer at `first_offset`.
    pub fn reset(&mut self, set: &PackedSequenceSet, first_offset: Option<usize>) {
        let per_row = set.lmers_per_sequence();
        for (i, row) in self.rows.iter_mut().enumerate() {
            for (j, slot) in row.iter_mut().enumerate() {
                *slot = (i * per_row + j) as LmerId;
            }
            self.live[i] = per_row;
        }
        if let Some(j) = first_offset {
            self.rows[0].swap(0, j);
            self.live[0] = 1;
        }
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn live(&self, row: usize) -> &[LmerId] {
        &self.rows[row][..self.live[row]]
    }

    #[inline]
    pub fn live_count(&self, row: usize) -> usize {
        self.live[row]
    }

    pub fn live_counts(&self) -> &[usize] {
        &self.live
    }

    pub fn checkpoint(&mut self, depth: usize) {
        self.saved[depth * self.n..(depth + 1) * self.n].copy_from_slice(&self.live);
    }

    pub fn restore(&mut self, depth: usize) {
        self.live
            .copy_from_slice(&self.saved[depth * self.n..(depth + 1) * self.n]);
    }

    /// Keeps the live l-mers of `row` for which `keep` holds, moving them to
    /// the front. Returns the new live count.
    #[inline]
    pub fn retain_in_place(&mut self, row: usize, mut keep: impl FnMut(LmerId) -> bool) -> usize {
        let items = &mut self.rows[row];
        let mut kept = 0;
        for i in 0..self.live[row] {
            let v = items[i];
            if keep(v) {
                items.swap(i, kept);
                kept += 1;
            }
        }
        self.live[row] = kept;
        kept
    }

    /// Words (64-bit) for row storage, and for the live/saved size tables.
    pub fn footprint_words(&self) -> (usize, usize) {
        let stored: usize = self.rows.iter().map(Vec::len).sum();
        (
            (stored * std::mem::size_of::<LmerId>()).div_ceil(8),
            self.live.len() + self.saved.len(),
        )
    }
}

/// Stable sort of `order[from..]` by ascending live count.
pub fn sort_rows_by_size(order: &mut [usize], from: usize, rows: &RowMatrix) {
    order[from..].sort_by_key(|&r| rows.live_count(r));
}
