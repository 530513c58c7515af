#![allow(dead_code)]

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use rand::Rng;

pub const DNA: &[u8] = b"ACGT";
pub const CODES4: &[u8] = &[0, 1, 2, 3];

pub fn random_strings(rng: &mut impl Rng, n: usize, m: usize, symbols: &[u8]) -> Vec<Vec<u8>> {
    (0..n)
        .map(|_| (0..m).map(|_| symbols[rng.gen_range(0..symbols.len())]).collect())
        .collect()
}

pub fn random_lmer(rng: &mut impl Rng, l: usize, sigma: u8) -> Vec<u8> {
    (0..l).map(|_| rng.gen_range(0..sigma)).collect()
}

pub fn hd(a: &[u8], b: &[u8]) -> usize {
    a.iter().zip(b).filter(|(x, y)| x != y).count()
}

/// Hamming-ball size by direct summation over BigUint binomials.
pub fn ball_size(l: usize, d: usize, sigma: usize) -> BigUint {
    let mut total = BigUint::zero();
    for i in 0..=d {
        let mut c = BigUint::one();
        for j in 0..i {
            c = c * (l - j) / (j + 1);
        }
        total += c * BigUint::from(sigma - 1).pow(i as u32);
    }
    total
}

fn ln_big(x: &BigUint) -> f64 {
    let bits = x.bits();
    if bits <= 1000 {
        return x.to_f64().unwrap().ln();
    }
    let shift = bits - 64;
    let top: BigUint = x >> shift;
    top.to_f64().unwrap().ln() + shift as f64 * std::f64::consts::LN_2
}

/// Exact `|Σ|^l (1 - (1 - N/|Σ|^l)^L)^n` as `num / den` over big integers.
pub fn expected_exact(n: usize, m: usize, l: usize, d: usize, sigma: usize) -> (BigUint, BigUint) {
    let a = BigUint::from(sigma).pow(l as u32);
    let b = &a - ball_size(l, d, sigma);
    let windows = (m - l + 1) as u32;
    let al = a.pow(windows);
    let q_num = &al - b.pow(windows);
    (&a * q_num.pow(n as u32), al.pow(n as u32))
}

pub fn ln_expected_exact(n: usize, m: usize, l: usize, d: usize, sigma: usize) -> f64 {
    let (num, den) = expected_exact(n, m, l, d, sigma);
    ln_big(&num) - ln_big(&den)
}

/// Smallest `d` with exact expectation at least 1.
pub fn smallest_challenging_exact(l: usize, n: usize, m: usize, sigma: usize) -> usize {
    (0..=l)
        .find(|&d| {
            let (num, den) = expected_exact(n, m, l, d, sigma);
            num >= den
        })
        .unwrap()
}
