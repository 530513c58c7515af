//! Bit-packed input strings with table-driven Hamming distance.
//!
//! Each string is kept as a contiguous bit stream of symbol codes. The
//! 16-bit window starting at any offset covers the next
//! `symbols_per_group16` symbols, so the window at offset `j + g` is also the
//! second window of the l-mer at `j` (for `g` symbols per group). One window
//! per offset is materialized, giving `O(n*m)` words for all l-mers of the
//! input. XOR of two windows leaves a non-zero bit group exactly where the
//! symbols differ; a 2^16-entry table turns that into a mismatch count.

use crate::alphabet::Alphabet;
use crate::error::EncodingError;

/// Number of non-zero `group_width`-bit groups for every 16-bit value.
#[derive(Clone)]
pub struct GroupPopcountTable {
    group_width: u32,
    counts: Box<[u8]>,
}

impl GroupPopcountTable {
    pub fn new(bits_per_symbol: u32) -> Result<Self, EncodingError> {
        if !(1..=16).contains(&bits_per_symbol) {
            return Err(EncodingError::BadGroupWidth(bits_per_symbol));
        }
        let masks = group_masks(bits_per_symbol);
        let counts = masks.iter().map(|m| m.count_ones() as u8).collect();
        Ok(GroupPopcountTable {
            group_width: bits_per_symbol,
            counts,
        })
    }

    #[inline]
    pub fn group_width(&self) -> u32 {
        self.group_width
    }

    #[inline]
    pub fn count(&self, x: u16) -> u8 {
        self.counts[x as usize]
    }

    pub fn counts(&self) -> &[u8] {
        &self.counts
    }
}

/// For each 16-bit value, a bit per group (bit `g` set iff group `g` is
/// non-zero). Used to count columns where three l-mers are all distinct.
fn group_masks(width: u32) -> Box<[u16]> {
    let groups = 16 / width;
    let group_bits: u32 = if width == 16 { u32::MAX } else { (1 << width) - 1 };
    (0..=u16::MAX as u32)
        .map(|x| {
            let mut mask = 0u16;
            for g in 0..groups {
                if (x >> (g * width)) & group_bits != 0 {
                    mask |= 1 << g;
                }
            }
            mask
        })
        .collect()
}

/// Reference to the l-mer starting at `offset` in string `sequence`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LmerRef {
    pub sequence: usize,
    pub offset: usize,
}

impl LmerRef {
    pub fn new(sequence: usize, offset: usize) -> Self {
        LmerRef { sequence, offset }
    }
}

/// Dense index of an l-mer over all strings: `sequence * (m - l + 1) + offset`.
pub type LmerId = u32;

/// An l-mer that does not come from the input (a candidate motif), laid out
/// as the same 16-bit windows the packed strings use.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PackedPattern {
    groups: Vec<u16>,
}

impl PackedPattern {
    pub fn groups(&self) -> &[u16] {
        &self.groups
    }
}

pub struct PackedSequenceSet {
    alphabet: Alphabet,
    n: usize,
    m: usize,
    l: usize,
    raw: Vec<Vec<u8>>,
    streams: Vec<Vec<u64>>,
    windows: Vec<u16>,
    lmer_start: Vec<u32>,
    table: GroupPopcountTable,
    masks: Box<[u16]>,
    groups: usize,
    tail_mask: u16,
}

impl PackedSequenceSet {
    /// Encodes equal-length strings of alphabet symbols for motif length `l`.
    pub fn encode<S: AsRef<[u8]>>(
        strings: &[S],
        alphabet: &Alphabet,
        l: usize,
    ) -> Result<Self, EncodingError> {
        let first = strings.first().ok_or(EncodingError::NoSequences)?;
        let m = first.as_ref().len();
        if l == 0 || l > m {
            return Err(EncodingError::BadLength { l, m });
        }
        let raw = strings
            .iter()
            .enumerate()
            .map(|(i, s)| {
                let s = s.as_ref();
                if s.len() != m {
                    return Err(EncodingError::UnequalLengths {
                        sequence: i,
                        expected: m,
                        found: s.len(),
                    });
                }
                alphabet.encode(s, i)
            })
            .collect::<Result<Vec<_>, _>>()?;
        Self::from_codes(raw, alphabet, l)
    }

    /// Builds the set from already-encoded strings (codes `< alphabet.len()`).
    pub fn from_codes(
        raw: Vec<Vec<u8>>,
        alphabet: &Alphabet,
        l: usize,
    ) -> Result<Self, EncodingError> {
        let m = raw.first().ok_or(EncodingError::NoSequences)?.len();
        if l == 0 || l > m {
            return Err(EncodingError::BadLength { l, m });
        }
        for (i, s) in raw.iter().enumerate() {
            if s.len() != m {
                return Err(EncodingError::UnequalLengths {
                    sequence: i,
                    expected: m,
                    found: s.len(),
                });
            }
            if let Some(position) = s.iter().position(|&c| c as usize >= alphabet.len()) {
                return Err(EncodingError::InvalidSymbol {
                    symbol: '?',
                    sequence: i,
                    position,
                });
            }
        }
        let n = raw.len();
        let b = alphabet.bits_per_symbol() as usize;
        let per_group = alphabet.symbols_per_group16();
        let table = GroupPopcountTable::new(b as u32)?;
        let masks = group_masks(b as u32);

        let streams: Vec<Vec<u64>> = raw.iter().map(|s| pack_stream(s, b)).collect();
        let mut windows = Vec::with_capacity(n * m);
        for stream in &streams {
            for j in 0..m {
                windows.push(extract_window(stream, j * b, per_group * b));
            }
        }
        let per_row = m - l + 1;
        let lmer_start = (0..n)
            .flat_map(|i| (0..per_row).map(move |j| (i * m + j) as u32))
            .collect();
        let groups = l.div_ceil(per_group);
        let tail_symbols = l - (groups - 1) * per_group;
        let tail_bits = tail_symbols * b;
        let tail_mask = if tail_bits >= 16 { u16::MAX } else { (1u16 << tail_bits) - 1 };

        Ok(PackedSequenceSet {
            alphabet: alphabet.clone(),
            n,
            m,
            l,
            raw,
            streams,
            windows,
            lmer_start,
            table,
            masks,
            groups,
            tail_mask,
        })
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn m(&self) -> usize {
        self.m
    }

    #[inline]
    pub fn l(&self) -> usize {
        self.l
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn table(&self) -> &GroupPopcountTable {
        &self.table
    }

    /// l-mers per string, `m - l + 1`.
    #[inline]
    pub fn lmers_per_sequence(&self) -> usize {
        self.m - self.l + 1
    }

    /// Total l-mer count `K = n * (m - l + 1)`.
    #[inline]
    pub fn lmer_count(&self) -> usize {
        self.n * self.lmers_per_sequence()
    }

    /// Symbol codes of string `i`.
    pub fn codes(&self, i: usize) -> &[u8] {
        &self.raw[i]
    }

    pub fn all_codes(&self) -> &[Vec<u8>] {
        &self.raw
    }

    /// Symbols of string `i`, recovered from the packed stream.
    pub fn decode(&self, i: usize) -> Vec<u8> {
        let b = self.alphabet.bits_per_symbol() as usize;
        (0..self.m)
            .map(|j| {
                let code = extract_window(&self.streams[i], j * b, b) as u8;
                self.alphabet.symbol(code)
            })
            .collect()
    }

    /// The 16-bit window at offset `j` of string `i`, read from the bit stream.
    pub fn window16(&self, i: usize, j: usize) -> u16 {
        let b = self.alphabet.bits_per_symbol() as usize;
        extract_window(
            &self.streams[i],
            j * b,
            self.alphabet.symbols_per_group16() * b,
        )
    }

    #[inline]
    pub fn id(&self, r: LmerRef) -> LmerId {
        (r.sequence * self.lmers_per_sequence() + r.offset) as LmerId
    }

    #[inline]
    pub fn lmer_ref(&self, id: LmerId) -> LmerRef {
        let per_row = self.lmers_per_sequence();
        LmerRef::new(id as usize / per_row, id as usize % per_row)
    }

    pub fn check(&self, r: LmerRef) -> Result<(), EncodingError> {
        if r.sequence >= self.n || r.offset > self.m - self.l {
            return Err(EncodingError::BadOffset {
                sequence: r.sequence,
                offset: r.offset,
            });
        }
        Ok(())
    }

    /// Symbol codes of an l-mer.
    pub fn lmer_codes(&self, id: LmerId) -> &[u8] {
        let r = self.lmer_ref(id);
        &self.raw[r.sequence][r.offset..r.offset + self.l]
    }

    /// Hamming distance between two l-mers of the input.
    pub fn hamming(&self, a: LmerRef, b: LmerRef) -> Result<usize, EncodingError> {
        self.check(a)?;
        self.check(b)?;
        Ok(self.distance(self.id(a), self.id(b)))
    }

    #[inline]
    fn windows_of(&self, id: LmerId) -> impl Iterator<Item = u16> + '_ {
        let start = self.lmer_start[id as usize] as usize;
        let step = self.alphabet.symbols_per_group16();
        (0..self.groups).map(move |g| self.windows[start + g * step])
    }

    /// Unchecked distance by dense id.
    #[inline]
    pub fn distance(&self, a: LmerId, b: LmerId) -> usize {
        let last = self.groups - 1;
        self.windows_of(a)
            .zip(self.windows_of(b))
            .enumerate()
            .map(|(g, (x, y))| {
                let mut diff = x ^ y;
                if g == last {
                    diff &= self.tail_mask;
                }
                self.table.count(diff) as usize
            })
            .sum()
    }

    /// Number of columns in which the three l-mers carry three distinct symbols.
    #[inline]
    pub fn all_distinct_columns(&self, a: LmerId, b: LmerId, c: LmerId) -> usize {
        let last = self.groups - 1;
        let mut total = 0;
        for (g, ((x, y), z)) in self
            .windows_of(a)
            .zip(self.windows_of(b))
            .zip(self.windows_of(c))
            .enumerate()
        {
            let mut all = self.masks[(x ^ y) as usize]
                & self.masks[(x ^ z) as usize]
                & self.masks[(y ^ z) as usize];
            if g == last {
                all &= self.masks[self.tail_mask as usize];
            }
            total += all.count_ones() as usize;
        }
        total
    }

    /// Packs an external l-mer (codes) for comparison against input l-mers.
    pub fn pack_pattern(&self, codes: &[u8]) -> PackedPattern {
        let mut pattern = PackedPattern::default();
        self.pack_pattern_into(codes, &mut pattern);
        pattern
    }

    /// As [`pack_pattern`](Self::pack_pattern), reusing `out`'s storage.
    pub fn pack_pattern_into(&self, codes: &[u8], out: &mut PackedPattern) {
        debug_assert_eq!(codes.len(), self.l);
        let b = self.alphabet.bits_per_symbol() as usize;
        let per_group = self.alphabet.symbols_per_group16();
        out.groups.clear();
        out.groups.extend(codes.chunks(per_group).map(|chunk| {
            chunk
                .iter()
                .enumerate()
                .fold(0u16, |w, (t, &c)| w | ((c as u16) << (t * b)))
        }));
    }

    /// Distance from a packed pattern to an input l-mer, stopping early once
    /// it exceeds `limit`. The returned value is exact when `<= limit`.
    #[inline]
    pub fn distance_to_pattern(&self, pattern: &PackedPattern, id: LmerId, limit: usize) -> usize {
        let last = self.groups - 1;
        let mut total = 0;
        for (g, (x, &y)) in self.windows_of(id).zip(&pattern.groups).enumerate() {
            let mut diff = x ^ y;
            if g == last {
                diff &= self.tail_mask;
            }
            total += self.table.count(diff) as usize;
            if total > limit {
                break;
            }
        }
        total
    }

    /// Memory held by the encoded strings, in 64-bit words.
    pub fn footprint_words(&self) -> usize {
        let stream_words: usize = self.streams.iter().map(Vec::len).sum();
        let window_words = (self.windows.len() * 2).div_ceil(8);
        let start_words = (self.lmer_start.len() * 4).div_ceil(8);
        stream_words + window_words + start_words
    }
}

fn pack_stream(codes: &[u8], bits: usize) -> Vec<u64> {
    // One spare word so any window read can touch `word + 1`.
    let mut stream = vec![0u64; (codes.len() * bits).div_ceil(64) + 1];
    for (j, &c) in codes.iter().enumerate() {
        let pos = j * bits;
        stream[pos / 64] |= (c as u64) << (pos % 64);
        if pos % 64 + bits > 64 {
            stream[pos / 64 + 1] |= (c as u64) >> (64 - pos % 64);
        }
    }
    stream
}

#[inline]
fn extract_window(stream: &[u64], bit: usize, width: usize) -> u16 {
    let word = bit / 64;
    let shift = bit % 64;
    if word >= stream.len() {
        return 0;
    }
    let mut v = stream[word] >> shift;
    if shift > 0 && word + 1 < stream.len() {
        v |= stream[word + 1] << (64 - shift);
    }
    let mask = if width >= 16 { 0xFFFF } else { (1u64 << width) - 1 };
    (v & mask) as u16
}
