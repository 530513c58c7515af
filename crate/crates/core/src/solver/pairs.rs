use crate::error::SolverError;
use crate::packed::{LmerId, PackedSequenceSet};

/// Bit `(u, v)` is set iff `Hd(u, v) <= 2d`, over all `K` l-mers of the input.
///
/// Bits are stored row-major in one flat run of exactly `ceil(K^2 / 64)` words.
#[derive(Clone, Debug)]
pub struct PairCompatibilityMatrix {
    k: usize,
    bits: Vec<u64>,
}

pub const WORD_BITS: usize = u64::BITS as usize;

impl PairCompatibilityMatrix {
    pub fn precompute(set: &PackedSequenceSet, d: usize) -> Result<Self, SolverError> {
        let k = set.lmer_count();
        let words = (k * k).div_ceil(WORD_BITS);
        let mut bits = Vec::new();
        bits.try_reserve_exact(words)
            .map_err(|_| SolverError::Capacity { lmers: k, words })?;
        bits.resize(words, 0u64);
        let mut matrix = PairCompatibilityMatrix { k, bits };

        if 2 * d >= set.l() {
            for idx in 0..k * k {
                matrix.bits[idx / WORD_BITS] |= 1 << (idx % WORD_BITS);
            }
            return Ok(matrix);
        }
        for u in 0..k {
            matrix.set(u, u);
            for v in u + 1..k {
                if set.distance(u as LmerId, v as LmerId) <= 2 * d {
                    matrix.set(u, v);
                    matrix.set(v, u);
                }
            }
        }
        Ok(matrix)
    }

    #[inline]
    fn set(&mut self, u: usize, v: usize) {
        let idx = u * self.k + v;
        self.bits[idx / WORD_BITS] |= 1 << (idx % WORD_BITS);
    }

    #[inline]
    pub fn get(&self, u: LmerId, v: LmerId) -> bool {
        let idx = u as usize * self.k + v as usize;
        (self.bits[idx / WORD_BITS] >> (idx % WORD_BITS)) & 1 == 1
    }

    pub fn lmer_count(&self) -> usize {
        self.k
    }

    pub fn words(&self) -> usize {
        self.bits.len()
    }
}
