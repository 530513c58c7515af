//! Distance-budget predicates for common neighbors.
//!
//! For l-mers `T_1..T_k` and budgets `d_1..d_k` the question is whether some
//! l-mer `M` has `Hd(M, T_i) <= d_i` for every `i`. Two l-mers have one iff
//! `Hd(a, b) <= d_a + d_b`. Three have one iff every pair passes that test
//! and the consensus total distance is at most `d_1 + d_2 + d_3`; the
//! witness builder below constructs `M` whenever both hold. For four or more
//! l-mers the consensus bound is only a necessary condition.
//!
//! All functions take l-mers as slices of symbol codes.

use crate::error::PruningError;

/// Per-l-mer distance budgets, one per member of the tuple they apply to.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Budgets(Vec<usize>);

impl Budgets {
    pub fn new(values: Vec<usize>) -> Self {
        Budgets(values)
    }

    pub fn uniform(d: usize, k: usize) -> Self {
        Budgets(vec![d; k])
    }

    pub fn values(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn total(&self) -> usize {
        self.0.iter().sum()
    }

    fn expect_len(&self, k: usize) -> Result<(), PruningError> {
        if self.0.len() != k {
            return Err(PruningError::BudgetCount {
                expected: k,
                found: self.0.len(),
            });
        }
        Ok(())
    }
}

impl From<Vec<usize>> for Budgets {
    fn from(values: Vec<usize>) -> Self {
        Budgets(values)
    }
}

/// Column-type counts for a triple `(T1, T2, T3)`.
///
/// `n0`: all equal. `n1`: T1 differs from `T2 == T3`. `n2`: T2 differs from
/// `T1 == T3`. `n3`: T3 differs from `T1 == T2`. `n4`: all distinct.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct ColumnProfile {
    pub n0: usize,
    pub n1: usize,
    pub n2: usize,
    pub n3: usize,
    pub n4: usize,
}

impl ColumnProfile {
    pub fn len(&self) -> usize {
        self.n0 + self.n1 + self.n2 + self.n3 + self.n4
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Consensus total distance of the triple.
    pub fn consensus_distance(&self) -> usize {
        self.n1 + self.n2 + self.n3 + 2 * self.n4
    }

    /// `n_i` for `i` in `1..=3`.
    fn single(&self, i: usize) -> usize {
        match i {
            1 => self.n1,
            2 => self.n2,
            3 => self.n3,
            _ => unreachable!(),
        }
    }
}

fn common_length(tuple: &[&[u8]]) -> Result<usize, PruningError> {
    let first = tuple.first().ok_or(PruningError::EmptyTuple)?;
    if tuple.iter().any(|t| t.len() != first.len()) {
        return Err(PruningError::LengthMismatch);
    }
    Ok(first.len())
}

/// `Cd(T)`: sum over columns of `k - (max symbol frequency in the column)`.
pub fn consensus_total_distance(tuple: &[&[u8]]) -> Result<usize, PruningError> {
    let l = common_length(tuple)?;
    let k = tuple.len();
    let sigma = tuple
        .iter()
        .flat_map(|t| t.iter())
        .map(|&c| c as usize + 1)
        .max()
        .unwrap_or(1);
    let mut freq = vec![0usize; sigma];
    let mut total = 0;
    for col in 0..l {
        let mut best = 0;
        for t in tuple {
            let f = &mut freq[t[col] as usize];
            *f += 1;
            best = best.max(*f);
        }
        for t in tuple {
            freq[t[col] as usize] = 0;
        }
        total += k - best;
    }
    Ok(total)
}

fn hamming(a: &[u8], b: &[u8]) -> usize {
    a.iter().zip(b).filter(|(x, y)| x != y).count()
}

pub fn pair_compatible(a: &[u8], b: &[u8], da: usize, db: usize) -> Result<bool, PruningError> {
    if a.len() != b.len() {
        return Err(PruningError::LengthMismatch);
    }
    Ok(hamming(a, b) <= da + db)
}

/// Three-l-mer test expressed through pairwise distances.
///
/// `pair` holds `(Hd(T1,T2), Hd(T1,T3), Hd(T2,T3))` and `all_distinct` the
/// number of columns where all three differ, so that
/// `Cd(T) = (sum of pair distances + all_distinct) / 2`.
#[inline]
pub fn triple_feasible(pair: [usize; 3], all_distinct: usize, budgets: [usize; 3]) -> bool {
    let [d1, d2, d3] = budgets;
    pair[0] <= d1 + d2
        && pair[1] <= d1 + d3
        && pair[2] <= d2 + d3
        && pair[0] + pair[1] + pair[2] + all_distinct <= 2 * (d1 + d2 + d3)
}

/// As [`triple_feasible`] for uniform budget `d`, computing the all-distinct
/// count only when the pairwise sums cannot decide on their own.
#[inline]
pub fn triple_feasible_uniform(pair: [usize; 3], all_distinct: impl FnOnce() -> usize, d: usize) -> bool {
    let two_d = 2 * d;
    if pair[0] > two_d || pair[1] > two_d || pair[2] > two_d {
        return false;
    }
    let sum = pair[0] + pair[1] + pair[2];
    let six_d = 6 * d;
    if sum > six_d {
        return false;
    }
    // all_distinct never exceeds the smallest pair distance.
    if sum + pair[0].min(pair[1]).min(pair[2]) <= six_d {
        return true;
    }
    sum + all_distinct() <= six_d
}

pub fn column_profile3(a: &[u8], b: &[u8], c: &[u8]) -> Result<ColumnProfile, PruningError> {
    common_length(&[a, b, c])?;
    let mut p = ColumnProfile::default();
    for ((&x, &y), &z) in a.iter().zip(b).zip(c) {
        match (x == y, x == z, y == z) {
            (true, true, _) => p.n0 += 1,
            (false, false, true) => p.n1 += 1,
            (false, true, false) => p.n2 += 1,
            (true, false, false) => p.n3 += 1,
            _ => p.n4 += 1,
        }
    }
    Ok(p)
}

pub fn triple_common_neighbor_exists(
    a: &[u8],
    b: &[u8],
    c: &[u8],
    budgets: &Budgets,
) -> Result<bool, PruningError> {
    budgets.expect_len(3)?;
    let p = column_profile3(a, b, c)?;
    let d = budgets.values();
    let pair = [p.n1 + p.n2 + p.n4, p.n1 + p.n3 + p.n4, p.n2 + p.n3 + p.n4];
    Ok(triple_feasible(pair, p.n4, [d[0], d[1], d[2]]))
}

/// Builds a common neighbor of a triple, or `None` when none exists.
///
/// If some `n_i >= d_i` (smallest such `i`), `M` copies `T_i` except on the
/// first `d_i` columns of type `N_i`, where it takes the symbol the other two
/// share. Otherwise `M` follows `T1` on `N0/N2/N3` columns and `T2` on `N1`
/// columns; each `T_i` then claims `max(0, n_i + n4 - d_i)` of the
/// all-distinct columns (lowest indices first) and the rest follow `T1`.
pub fn triple_witness(
    a: &[u8],
    b: &[u8],
    c: &[u8],
    budgets: &Budgets,
) -> Result<Option<Vec<u8>>, PruningError> {
    if !triple_common_neighbor_exists(a, b, c, budgets)? {
        return Ok(None);
    }
    let t = [a, b, c];
    let d = budgets.values();
    let p = column_profile3(a, b, c)?;

    if let Some(i) = (1..=3).find(|&i| p.single(i) >= d[i - 1]) {
        let own = t[i - 1];
        let other = t[if i == 1 { 1 } else { 0 }];
        let mut m = own.to_vec();
        let mut left = d[i - 1];
        for col in 0..own.len() {
            if left == 0 {
                break;
            }
            if column_type(a[col], b[col], c[col]) == i {
                m[col] = other[col];
                left -= 1;
            }
        }
        return Ok(Some(m));
    }

    let mut m = Vec::with_capacity(a.len());
    let mut distinct_cols = Vec::with_capacity(p.n4);
    for col in 0..a.len() {
        match column_type(a[col], b[col], c[col]) {
            1 => m.push(b[col]),
            4 => {
                distinct_cols.push(col);
                m.push(a[col]);
            }
            _ => m.push(a[col]),
        }
    }
    let mut cols = distinct_cols.into_iter();
    for i in 1..=3 {
        let claim = (p.single(i) + p.n4).saturating_sub(d[i - 1]);
        for col in cols.by_ref().take(claim) {
            m[col] = t[i - 1][col];
        }
    }
    Ok(Some(m))
}

#[inline]
fn column_type(x: u8, y: u8, z: u8) -> usize {
    match (x == y, x == z, y == z) {
        (true, true, _) => 0,
        (false, false, true) => 1,
        (false, true, false) => 2,
        (true, false, false) => 3,
        _ => 4,
    }
}

/// Consensus bound for any tuple size. `false` proves no common neighbor
/// exists; `true` is conclusive only for `k <= 3` together with the pair and
/// triple tests.
pub fn necessary_condition_k(tuple: &[&[u8]], budgets: &Budgets) -> Result<bool, PruningError> {
    budgets.expect_len(tuple.len())?;
    Ok(consensus_total_distance(tuple)? <= budgets.total())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::alphabet::Alphabet;

    fn enc(s: &str) -> Vec<u8> {
        Alphabet::dna().encode(s.as_bytes(), 0).unwrap()
    }

    #[test]
    fn consensus_examples() {
        let x = enc("ACGTAC");
        assert_eq!(consensus_total_distance(&[&x, &x, &x]).unwrap(), 0);
        let (a, b, c) = (enc("ACG"), enc("ACT"), enc("GCT"));
        assert_eq!(consensus_total_distance(&[&a, &b, &c]).unwrap(), 2);
        assert_eq!(consensus_total_distance(&[]), Err(PruningError::EmptyTuple));
        let short = enc("AC");
        assert_eq!(
            consensus_total_distance(&[&a, &short]),
            Err(PruningError::LengthMismatch)
        );
    }

    #[test]
    fn pair_examples() {
        let (a, t) = (enc("AAAA"), enc("TTTT"));
        assert!(pair_compatible(&a, &a, 0, 0).unwrap());
        assert!(!pair_compatible(&a, &t, 1, 1).unwrap());
        assert!(pair_compatible(&a, &t, 1, 3).unwrap());
        assert!(pair_compatible(&a, &enc("AAA"), 1, 1).is_err());
    }

    #[test]
    fn triple_examples() {
        let x = enc("ACGT");
        let ones = Budgets::uniform(1, 3);
        assert!(triple_common_neighbor_exists(&x, &x, &x, &Budgets::uniform(0, 3)).unwrap());
        let (aa, cc, gg) = (enc("AA"), enc("CC"), enc("GG"));
        assert!(!triple_common_neighbor_exists(&aa, &cc, &gg, &ones).unwrap());
        let (a, b, c) = (enc("AAAA"), enc("AAAT"), enc("AATT"));
        assert!(triple_common_neighbor_exists(&a, &b, &c, &ones).unwrap());
        assert_eq!(
            triple_common_neighbor_exists(&a, &b, &c, &Budgets::uniform(1, 2)),
            Err(PruningError::BudgetCount { expected: 3, found: 2 })
        );
    }

    #[test]
    fn profile_examples() {
        let x = enc("ACGTT");
        assert_eq!(
            column_profile3(&x, &x, &x).unwrap(),
            ColumnProfile { n0: 5, ..Default::default() }
        );
        let p = column_profile3(&enc("AAAA"), &enc("AAAT"), &enc("AATT")).unwrap();
        assert_eq!(p, ColumnProfile { n0: 2, n1: 1, n2: 0, n3: 1, n4: 0 });
    }

    #[test]
    fn witness_examples() {
        let x = enc("GATTACA");
        assert_eq!(
            triple_witness(&x, &x, &x, &Budgets::uniform(2, 3)).unwrap(),
            Some(x.clone())
        );
        let (a, b, c) = (enc("AAAA"), enc("AAAT"), enc("AATT"));
        let m = triple_witness(&a, &b, &c, &Budgets::uniform(1, 3)).unwrap().unwrap();
        for t in [&a, &b, &c] {
            assert!(hamming(&m, t) <= 1);
        }
        let (aa, cc, gg) = (enc("AA"), enc("CC"), enc("GG"));
        assert_eq!(triple_witness(&aa, &cc, &gg, &Budgets::uniform(1, 3)).unwrap(), None);
    }

    #[test]
    fn witness_case_two_uses_distinct_columns() {
        // All columns distinct, no single-outlier columns: case 2 with n4 = 3.
        let (a, b, c) = (enc("AAA"), enc("CCC"), enc("GGG"));
        let budgets = Budgets::new(vec![2, 2, 2]);
        let m = triple_witness(&a, &b, &c, &budgets).unwrap().unwrap();
        assert_eq!(m, enc("ACG"));
    }

    #[test]
    fn k_condition_examples() {
        let x = enc("ACG");
        assert!(necessary_condition_k(&[&x], &Budgets::uniform(0, 1)).unwrap());
        let t = ["AA", "CC", "GG", "TT"].map(enc);
        let refs: Vec<&[u8]> = t.iter().map(|v| v.as_slice()).collect();
        assert_eq!(consensus_total_distance(&refs).unwrap(), 6);
        assert!(!necessary_condition_k(&refs, &Budgets::uniform(1, 4)).unwrap());
        assert!(necessary_condition_k(&refs, &Budgets::uniform(1, 3)).is_err());
    }

    #[test]
    fn uniform_shortcut_agrees_with_general_test() {
        for d in 0..4 {
            for h0 in 0..10 {
                for h1 in 0..10 {
                    for h2 in 0..10 {
                        let min = h0.min(h1).min(h2);
                        for n4 in 0..=min {
                            let pair = [h0, h1, h2];
                            assert_eq!(
                                triple_feasible_uniform(pair, || n4, d),
                                triple_feasible(pair, n4, [d, d, d])
                            );
                        }
                    }
                }
            }
        }
    }
}
