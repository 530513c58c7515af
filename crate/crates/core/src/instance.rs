//! Planted instance generation and spurious-motif statistics.
//!
//! For a random string of length `m`, an l-mer is a spurious `(l, d)` motif
//! of `n` i.i.d. strings with probability `q^n`, where
//! `q = 1 - (1 - N_d / |Σ|^l)^(m - l + 1)`. The expected number of spurious
//! motifs is `|Σ|^l q^n`.

use num_bigint::BigUint;
use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::alphabet::Alphabet;
use crate::error::InstanceError;

/// `N_d = Σ_{i=0..d} C(l, i) (σ - 1)^i`, exactly.
pub fn neighborhood_size(l: usize, d: usize, sigma: usize) -> Result<BigUint, InstanceError> {
    if d > l {
        return Err(InstanceError::BudgetTooLarge { d, l });
    }
    let base = BigUint::from(sigma.saturating_sub(1));
    let mut binom = BigUint::from(1u32);
    let mut power = BigUint::from(1u32);
    let mut total = BigUint::from(0u32);
    for i in 0..=d {
        total += &binom * &power;
        binom = binom * (l - i) / (i + 1);
        power *= &base;
    }
    Ok(total)
}

/// `ln N_d`, with `d` clamped to `l`.
pub fn ln_neighborhood_size(l: usize, d: usize, sigma: usize) -> f64 {
    let d = d.min(l);
    let ln_base = ((sigma.max(1) - 1) as f64).ln();
    let mut ln_binom = 0.0;
    let mut terms = Vec::with_capacity(d + 1);
    for i in 0..=d {
        let term = if i == 0 { 0.0 } else { ln_binom + i as f64 * ln_base };
        terms.push(term);
        ln_binom += ((l - i) as f64 / (i + 1) as f64).ln();
    }
    let hi = terms.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    hi + terms.iter().map(|t| (t - hi).exp()).sum::<f64>().ln()
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SpuriousModel {
    pub ln_neighborhood: f64,
    /// Chance a fixed l-mer lies within `d` of one random l-mer.
    pub per_lmer_probability: f64,
    /// Chance a fixed l-mer has a `d`-occurrence in one random string.
    pub per_string_probability: f64,
    pub ln_expectation: f64,
}

impl SpuriousModel {
    pub fn new(n: usize, m: usize, l: usize, d: usize, sigma: usize) -> Self {
        let ln_nd = ln_neighborhood_size(l, d, sigma);
        let ln_space = l as f64 * (sigma as f64).ln();
        let p = (ln_nd - ln_space).exp().min(1.0);
        let windows = m.saturating_sub(l) as f64 + 1.0;
        // 1 - (1 - p)^L without cancellation.
        let q = -(windows * (-p).ln_1p()).exp_m1();
        SpuriousModel {
            ln_neighborhood: ln_nd,
            per_lmer_probability: p,
            per_string_probability: q,
            ln_expectation: ln_space + n as f64 * q.ln(),
        }
    }

    pub fn expectation(&self) -> f64 {
        self.ln_expectation.exp()
    }
}

pub fn expected_spurious_motifs(n: usize, m: usize, l: usize, d: usize, sigma: usize) -> f64 {
    SpuriousModel::new(n, m, l, d, sigma).expectation()
}

/// Smallest `d` whose expected spurious motif count reaches 1.
pub fn smallest_challenging_d(l: usize, n: usize, m: usize, sigma: usize) -> usize {
    (0..=l)
        .find(|&d| SpuriousModel::new(n, m, l, d, sigma).ln_expectation >= 0.0)
        .unwrap_or(l)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct GridCell {
    pub l: usize,
    pub d: usize,
    pub expected: f64,
    /// `expected > cap`.
    pub excluded: bool,
}

/// Marks each `(l, d)` cell whose expected spurious count exceeds `cap`.
pub fn count_spurious_expectation_filter(
    grid: &[(usize, usize)],
    n: usize,
    m: usize,
    sigma: usize,
    cap: f64,
) -> Vec<GridCell> {
    grid.iter()
        .map(|&(l, d)| {
            let expected = expected_spurious_motifs(n, m, l, d, sigma);
            GridCell {
                l,
                d,
                expected,
                excluded: expected > cap,
            }
        })
        .collect()
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum MutationMode {
    /// `d` distinct positions each get a uniform symbol, possibly the same.
    #[default]
    AtMostD,
    /// `d` distinct positions each get a different symbol.
    ExactlyD,
}

impl MutationMode {
    pub fn name(self) -> &'static str {
        match self {
            MutationMode::AtMostD => "atmost",
            MutationMode::ExactlyD => "exact",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PlantedInstanceSpec {
    pub n: usize,
    pub m: usize,
    pub l: usize,
    pub d: usize,
    pub alphabet: Alphabet,
    pub seed: u64,
    pub mutation_mode: MutationMode,
}

impl PlantedInstanceSpec {
    /// 20 DNA strings of length 600.
    pub fn new(l: usize, d: usize, seed: u64) -> Self {
        PlantedInstanceSpec {
            n: 20,
            m: 600,
            l,
            d,
            alphabet: Alphabet::dna(),
            seed,
            mutation_mode: MutationMode::AtMostD,
        }
    }

    pub fn validate(&self) -> Result<(), InstanceError> {
        if self.n == 0 {
            return Err(InstanceError::BadSpec("n must be at least 1".into()));
        }
        if self.l == 0 || self.l > self.m {
            return Err(InstanceError::BadSpec(format!(
                "need 1 <= l <= m, got l={} m={}",
                self.l, self.m
            )));
        }
        if self.d > self.l {
            return Err(InstanceError::BudgetTooLarge { d: self.d, l: self.l });
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PlantedInstance {
    pub spec: PlantedInstanceSpec,
    /// Alphabet symbols, `n` strings of length `m`.
    pub strings: Vec<Vec<u8>>,
    pub motif: Vec<u8>,
    /// Start of the planted occurrence in each string.
    pub positions: Vec<usize>,
}

/// Random strings with a mutated copy of one random motif planted in each.
pub fn generate_planted_instance(spec: &PlantedInstanceSpec) -> Result<PlantedInstance, InstanceError> {
    spec.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let sigma = spec.alphabet.len();
    let mut strings: Vec<Vec<u8>> = (0..spec.n)
        .map(|_| (0..spec.m).map(|_| rng.gen_range(0..sigma) as u8).collect())
        .collect();
    let motif: Vec<u8> = (0..spec.l).map(|_| rng.gen_range(0..sigma) as u8).collect();
    let mut positions = Vec::with_capacity(spec.n);
    for s in &mut strings {
        let pos = rng.gen_range(0..=spec.m - spec.l);
        let mut occurrence = motif.clone();
        for j in sample(&mut rng, spec.l, spec.d) {
            occurrence[j] = match spec.mutation_mode {
                MutationMode::AtMostD => rng.gen_range(0..sigma) as u8,
                MutationMode::ExactlyD => {
                    let shift = rng.gen_range(1..sigma) as u8;
                    (occurrence[j] + shift) % sigma as u8
                }
            };
        }
        s[pos..pos + spec.l].copy_from_slice(&occurrence);
        positions.push(pos);
    }
    Ok(PlantedInstance {
        strings: strings.iter().map(|s| spec.alphabet.decode(s)).collect(),
        motif: spec.alphabet.decode(&motif),
        positions,
        spec: spec.clone(),
    })
}
