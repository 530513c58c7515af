//! Cost model for the switch from sample-driven filtering to pattern-driven
//! enumeration.
//!
//! With `L = m - l + 1` l-mers per row, each push keeps a fraction
//! `p = N_2d / |Σ|^l` of every row, so `T_k = L^k p^(k(k-1)/2)` tuples of
//! size `k` are built. Filtering up to depth `t` costs
//! `Time_s(t) = n l Σ_{k=1..t} T_k`, and enumerating the neighborhoods of
//! the size-`t` tuples costs `Time_p(t) = T_t N_d q^(t-1) l` with
//! `q = N_d / N_2d`. Everything is evaluated in natural-log space.

use serde::Serialize;

use crate::instance::ln_neighborhood_size;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CurvePoint {
    pub t: usize,
    pub ln_time_sample: f64,
    pub ln_time_pattern: f64,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ThresholdModel {
    pub n: usize,
    pub m: usize,
    pub l: usize,
    pub d: usize,
    pub sigma: usize,
    pub ln_nd: f64,
    pub ln_n2d: f64,
    /// ln of the per-push survival rate `p`.
    pub ln_p: f64,
    /// ln of the per-l-mer neighborhood decay `q`.
    pub ln_q: f64,
}

impl ThresholdModel {
    pub fn new(n: usize, m: usize, l: usize, d: usize, sigma: usize) -> Self {
        let ln_nd = ln_neighborhood_size(l, d.min(l), sigma);
        let ln_n2d = ln_neighborhood_size(l, (2 * d).min(l), sigma);
        let ln_p = (ln_n2d - l as f64 * (sigma as f64).ln()).min(0.0);
        ThresholdModel {
            n,
            m,
            l,
            d,
            sigma,
            ln_nd,
            ln_n2d,
            ln_p,
            ln_q: (ln_nd - ln_n2d).min(0.0),
        }
    }

    fn ln_rows(&self) -> f64 {
        ((self.m - self.l + 1) as f64).ln()
    }

    /// ln T_k.
    pub fn ln_tuples(&self, k: usize) -> f64 {
        let k = k as f64;
        k * self.ln_rows() + k * (k - 1.0) / 2.0 * self.ln_p
    }

    pub fn ln_time_pattern(&self, t: usize) -> f64 {
        self.ln_tuples(t) + self.ln_nd + (t as f64 - 1.0) * self.ln_q + (self.l as f64).ln()
    }

    /// `ln Time_s(t)` for `t = 1..=max_t`.
    pub fn ln_time_sample_curve(&self, max_t: usize) -> Vec<f64> {
        let base = ((self.n * self.l) as f64).ln();
        let mut acc = f64::NEG_INFINITY;
        (1..=max_t)
            .map(|k| {
                acc = ln_add(acc, self.ln_tuples(k));
                base + acc
            })
            .collect()
    }

    pub fn ln_time_sample(&self, t: usize) -> f64 {
        *self.ln_time_sample_curve(t).last().expect("t >= 1")
    }

    /// Both cost curves for `t = 1..=n`.
    pub fn curve(&self) -> Vec<CurvePoint> {
        self.ln_time_sample_curve(self.n)
            .into_iter()
            .enumerate()
            .map(|(i, s)| CurvePoint {
                t: i + 1,
                ln_time_sample: s,
                ln_time_pattern: self.ln_time_pattern(i + 1),
            })
            .collect()
    }

    /// The `t` in `[2, n]` minimizing `max(Time_s, Time_p)`; smallest on ties.
    pub fn argmin(&self) -> usize {
        if self.n <= 1 {
            return 1;
        }
        if self.m == self.l {
            return self.n;
        }
        let base = ((self.n * self.l) as f64).ln();
        let mut acc = self.ln_tuples(1);
        let mut best = (0, f64::INFINITY);
        for t in 2..=self.n {
            acc = ln_add(acc, self.ln_tuples(t));
            // Time_s only grows with t, so nothing later can beat `best`.
            if base + acc >= best.1 {
                break;
            }
            let cost = (base + acc).max(self.ln_time_pattern(t));
            if cost < best.1 {
                best = (t, cost);
            }
        }
        best.0
    }
}

fn ln_add(a: f64, b: f64) -> f64 {
    if a == f64::NEG_INFINITY {
        return b;
    }
    let (hi, lo) = if a > b { (a, b) } else { (b, a) };
    hi + (lo - hi).exp().ln_1p()
}

/// Raw model optimum for one parameter set.
pub fn analytic_threshold(n: usize, m: usize, l: usize, d: usize, sigma: usize) -> usize {
    ThresholdModel::new(n, m, l, d, sigma).argmin()
}

/// Threshold used by the solver.
///
/// The model optimum alone is not monotone (it drops back to 2 once
/// `Time_p` stops shrinking with `t`), so the solver takes the envelope
/// `min over m' in [l, m] of max over d' <= d` of the optimum. The result
/// never decreases with `d` and never increases with `m`, and equals `n`
/// when `m = l`.
pub fn estimate_threshold(n: usize, m: usize, l: usize, d: usize, sigma: usize) -> usize {
    if n <= 1 {
        return 1;
    }
    if m <= l {
        return n;
    }
    let models: Vec<ThresholdModel> = (0..=d.min(l))
        .map(|dd| ThresholdModel::new(n, l, l, dd, sigma))
        .collect();
    let mut best = n;
    for mm in l + 1..=m {
        let mut worst = 2;
        for model in &models {
            worst = worst.max(ThresholdModel { m: mm, ..*model }.argmin());
            if worst >= best {
                break;
            }
        }
        best = best.min(worst);
        if best == 2 {
            break;
        }
    }
    best
}
