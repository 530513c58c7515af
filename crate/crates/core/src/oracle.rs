//! Brute-force reference implementations.
//!
//! Nothing here reuses the packed distance, the pruning predicates or the
//! tree walker: candidates are enumerated with an odometer over the raw
//! alphabet symbols and compared byte by byte. Keep it that way; these
//! functions are the ground truth the fast paths are tested against.

use crate::error::OracleError;

/// Default cap on the number of candidate l-mers enumerated.
pub const DEFAULT_GUARD: u64 = 1_000_000;

fn mismatches(a: &[u8], b: &[u8]) -> usize {
    let mut count = 0;
    for i in 0..a.len() {
        if a[i] != b[i] {
            count += 1;
        }
    }
    count
}

fn check_guard(sigma: usize, l: usize, limit: u64) -> Result<(), OracleError> {
    let required = (sigma as u128).checked_pow(l as u32).unwrap_or(u128::MAX);
    if required > limit as u128 {
        return Err(OracleError::GuardExceeded { required, limit });
    }
    Ok(())
}

/// Calls `f` on every string of length `l` over `symbols`, in symbol order.
/// Stops early when `f` returns `false`.
fn for_each_candidate(symbols: &[u8], l: usize, mut f: impl FnMut(&[u8]) -> bool) {
    let mut digits = vec![0usize; l];
    let mut word: Vec<u8> = vec![symbols[0]; l];
    loop {
        if !f(&word) {
            return;
        }
        let mut pos = l;
        loop {
            if pos == 0 {
                return;
            }
            pos -= 1;
            digits[pos] += 1;
            if digits[pos] < symbols.len() {
                word[pos] = symbols[digits[pos]];
                break;
            }
            digits[pos] = 0;
            word[pos] = symbols[0];
        }
    }
}

/// First window offset of `text` within distance `d` of `motif`, if any.
pub fn find_occurrence(motif: &[u8], text: &[u8], d: usize) -> Option<usize> {
    let l = motif.len();
    if text.len() < l {
        return None;
    }
    (0..=text.len() - l).find(|&j| mismatches(motif, &text[j..j + l]) <= d)
}

/// All `(l, d)` motifs of `strings` (raw symbols), sorted bytewise.
///
/// Strings may differ in length; a string shorter than `l` admits no motif.
pub fn brute_force_solve(
    strings: &[Vec<u8>],
    symbols: &[u8],
    l: usize,
    d: usize,
    guard: u64,
) -> Result<Vec<Vec<u8>>, OracleError> {
    if strings.is_empty() || symbols.is_empty() || l == 0 {
        return Err(OracleError::BadInput("need strings, symbols and l >= 1".into()));
    }
    check_guard(symbols.len(), l, guard)?;
    let mut out = Vec::new();
    for_each_candidate(symbols, l, |cand| {
        if strings.iter().all(|s| find_occurrence(cand, s, d).is_some()) {
            out.push(cand.to_vec());
        }
        true
    });
    out.sort();
    Ok(out)
}

/// Smallest `M` (in symbol order) with `Hd(M, T_i) <= budgets[i]` for all `i`.
pub fn brute_force_common_neighbor(
    tuple: &[&[u8]],
    budgets: &[usize],
    symbols: &[u8],
    guard: u64,
) -> Result<Option<Vec<u8>>, OracleError> {
    let l = match tuple.first() {
        Some(t) => t.len(),
        None => return Err(OracleError::BadInput("empty tuple".into())),
    };
    if tuple.iter().any(|t| t.len() != l) || budgets.len() != tuple.len() {
        return Err(OracleError::BadInput("tuple lengths or budget count differ".into()));
    }
    check_guard(symbols.len(), l, guard)?;
    let mut found = None;
    for_each_candidate(symbols, l, |cand| {
        let ok = tuple
            .iter()
            .zip(budgets)
            .all(|(t, &b)| mismatches(cand, t) <= b);
        if ok {
            found = Some(cand.to_vec());
        }
        !ok
    });
    Ok(found)
}

/// Every `M` within `budgets` of all members of `tuple`, in symbol order.
pub fn brute_force_common_neighborhood(
    tuple: &[&[u8]],
    budgets: &[usize],
    symbols: &[u8],
    guard: u64,
) -> Result<Vec<Vec<u8>>, OracleError> {
    let l = tuple.first().map(|t| t.len()).unwrap_or(0);
    check_guard(symbols.len(), l, guard)?;
    let mut out = Vec::new();
    for_each_candidate(symbols, l, |cand| {
        if tuple
            .iter()
            .zip(budgets)
            .all(|(t, &b)| mismatches(cand, t) <= b)
        {
            out.push(cand.to_vec());
        }
        true
    });
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    /// One witness offset per string.
    Pass(Vec<usize>),
    /// Index of the first string with no window within `d`.
    Fail(usize),
}

/// Checks one candidate motif against every string.
pub fn verify_candidate(motif: &[u8], strings: &[Vec<u8>], d: usize) -> Verdict {
    let mut offsets = Vec::with_capacity(strings.len());
    for (i, s) in strings.iter().enumerate() {
        match find_occurrence(motif, s, d) {
            Some(j) => offsets.push(j),
            None => return Verdict::Fail(i),
        }
    }
    Verdict::Pass(offsets)
}
