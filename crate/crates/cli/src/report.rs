use std::fmt::Write as _;

use serde::Serialize;

use pms8::solver::{AllocationReport, CurvePoint};

#[derive(Serialize)]
pub struct InstanceReport {
    pub input: String,
    pub n: usize,
    pub m: usize,
    pub l: usize,
    pub d: usize,
    pub alphabet: String,
    /// Generator seed recorded in the input file, if any.
    pub seed: Option<u64>,
}

#[derive(Serialize)]
pub struct ConfigReport {
    pub threshold: usize,
    pub threshold_override: Option<usize>,
    pub workers: usize,
    pub sort_rows: bool,
    pub use_pair_matrix: bool,
    pub max_motifs: Option<usize>,
}

#[derive(Serialize)]
pub struct TimingReport {
    /// Summed over workers.
    pub sample_driven_secs: f64,
    pub pattern_driven_secs: f64,
    pub tuples: u64,
    pub neighbors: u64,
}

#[derive(Serialize)]
pub struct RunReport {
    pub instance: InstanceReport,
    pub config: ConfigReport,
    pub motif_count: usize,
    pub truncated: bool,
    pub wall_time_secs: f64,
    pub memory: AllocationReport,
    pub peak_memory_bytes: usize,
    pub timing: TimingReport,
    pub jobs: usize,
    pub reproduce: String,
}

#[derive(Serialize)]
pub struct ModelReport {
    pub l: usize,
    pub d: usize,
    pub n: usize,
    pub m: usize,
    pub sigma: usize,
    pub neighborhood_d: String,
    pub neighborhood_2d: String,
    pub p: f64,
    pub q: f64,
    pub expected_spurious: f64,
    pub challenging: bool,
    pub smallest_challenging_d: usize,
    pub threshold: usize,
    pub curve: Vec<CurvePoint>,
}

impl ModelReport {
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "l={} d={} n={} m={} sigma={}", self.l, self.d, self.n, self.m, self.sigma);
        let _ = writeln!(out, "N_d={}", self.neighborhood_d);
        let _ = writeln!(out, "N_2d={}", self.neighborhood_2d);
        let _ = writeln!(out, "p={:.6e}", self.p);
        let _ = writeln!(out, "q={:.6e}", self.q);
        let _ = writeln!(out, "E={:.6e}", self.expected_spurious);
        let _ = writeln!(out, "challenging={}", if self.challenging { "yes" } else { "no" });
        let _ = writeln!(out, "smallest_challenging_d={}", self.smallest_challenging_d);
        let _ = writeln!(out, "threshold={}", self.threshold);
        let _ = writeln!(out, "t\tln_time_sample\tln_time_pattern");
        for p in &self.curve {
            let _ = writeln!(out, "{}\t{:.6}\t{:.6}", p.t, p.ln_time_sample, p.ln_time_pattern);
        }
        out
    }
}
