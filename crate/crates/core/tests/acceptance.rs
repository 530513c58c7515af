//! Acceptance criteria. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any fails.

mod common;

use std::collections::HashMap;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::sync::Mutex;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::{hd, random_lmer, random_strings, CODES4, DNA};
use pms8::instance::{neighborhood_size, smallest_challenging_d};
use pms8::neighborhood::{generate_common_neighborhood, generate_common_neighborhood_with, PruneMode};
use pms8::oracle::{
    brute_force_common_neighbor, brute_force_common_neighborhood, brute_force_solve, verify_candidate,
    Verdict, DEFAULT_GUARD,
};
use pms8::parallel::run_parallel_with;
use pms8::pruning::{triple_common_neighbor_exists, triple_witness, Budgets};
use pms8::solver::{estimate_threshold, ThresholdModel};
use pms8::{
    generate_planted_instance, solve, Alphabet, Instance, MutationMode, ParallelRun, PlantedInstanceSpec,
    SolverConfig,
};

const ORACLE_INSTANCES: usize = 120;
const ORACLE_LIMIT: Duration = Duration::from_secs(120);
const TRIPLE_RANDOM: usize = 10_000;
const TRIPLE_LIMIT: Duration = Duration::from_secs(60);
const PRUNING_TUPLES: usize = 1_000;
const PRUNING_LIMIT: Duration = Duration::from_secs(60);
const CLOSED_FORM_LIMIT: Duration = Duration::from_secs(1);
const CHALLENGING_SEQUENCE: [(usize, usize); 8] =
    [(13, 4), (15, 5), (17, 6), (19, 7), (21, 8), (23, 9), (25, 10), (26, 11)];
const SMOKE_SEEDS: [u64; 5] = [1, 2, 3, 4, 5];
const SMOKE_LIMIT: Duration = Duration::from_secs(60);
const LARGE_LIMIT: Duration = Duration::from_secs(300);
const LARGE_SEED: u64 = 1;
const WORKER_COUNTS: [usize; 4] = [1, 2, 4, 8];
const MIN_SPEEDUP_4: f64 = 2.5;
const THRESHOLD_LIMIT: Duration = Duration::from_secs(1);
const MEMORY_MULTIPLIER: f64 = 4.0;
const WORD_BITS: usize = 64;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

struct TimedRun {
    run: ParallelRun,
    elapsed: Duration,
    motif: Vec<u8>,
    strings: Vec<Vec<u8>>,
}

type RunKey = (usize, usize, u64, usize);

static RUNS: Mutex<Option<HashMap<RunKey, &'static TimedRun>>> = Mutex::new(None);

/// Solves the default-size planted instance `(l, d, seed)` once per worker count.
fn default_run(l: usize, d: usize, seed: u64, workers: usize) -> &'static TimedRun {
    let key = (l, d, seed, workers);
    if let Some(r) = RUNS.lock().unwrap().get_or_insert_with(HashMap::new).get(&key) {
        return r;
    }
    let planted = generate_planted_instance(&PlantedInstanceSpec::new(l, d, seed)).unwrap();
    let instance = Instance::new(&planted.strings, &Alphabet::dna(), l, d).unwrap();
    let start = Instant::now();
    let run = run_parallel_with(&instance, workers, &SolverConfig::default(), &|_, _| {}).unwrap();
    let elapsed = start.elapsed();
    let timed: &'static TimedRun = Box::leak(Box::new(TimedRun {
        run,
        elapsed,
        motif: planted.motif,
        strings: planted.strings,
    }));
    RUNS.lock().unwrap().as_mut().unwrap().insert(key, timed);
    timed
}

fn within(elapsed: Duration, limit: Duration, what: &str) -> Result<(), String> {
    if elapsed < limit {
        Ok(())
    } else {
        Err(format!("{what} took {elapsed:.2?}, limit {limit:?}"))
    }
}

fn oracle_equivalence() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut total_motifs = 0;
    for i in 0..ORACLE_INSTANCES {
        let n = rng.gen_range(3..=5);
        let m = rng.gen_range(15..=30);
        let l = rng.gen_range(4..=7);
        let d = rng.gen_range(0..=2);
        let strings = random_strings(&mut rng, n, m, DNA);
        let instance = Instance::new(&strings, &Alphabet::dna(), l, d).unwrap();
        let fast: Vec<Vec<u8>> = solve(&instance, &SolverConfig::default())
            .unwrap()
            .iter()
            .map(<[u8]>::to_vec)
            .collect();
        let brute = brute_force_solve(&strings, DNA, l, d, DEFAULT_GUARD).unwrap();
        if fast != brute {
            return Err(format!(
                "instance {i} (n={n} m={m} l={l} d={d}): solver {} motifs, oracle {}",
                fast.len(),
                brute.len()
            ));
        }
        total_motifs += brute.len();
    }
    within(start.elapsed(), ORACLE_LIMIT, "oracle grid")?;
    Ok(format!(
        "{ORACLE_INSTANCES} instances, {total_motifs} motifs, {:.2?}",
        start.elapsed()
    ))
}

fn all_lmers(l: usize) -> Vec<Vec<u8>> {
    (0..4usize.pow(l as u32))
        .map(|mut x| {
            (0..l)
                .map(|_| {
                    let c = (x % 4) as u8;
                    x /= 4;
                    c
                })
                .collect()
        })
        .collect()
}

fn check_triple(t: [&[u8]; 3], budgets: [usize; 3]) -> Result<(), String> {
    let b = Budgets::new(budgets.to_vec());
    let fast = triple_common_neighbor_exists(t[0], t[1], t[2], &b).unwrap();
    let brute = brute_force_common_neighbor(&t, &budgets, CODES4, DEFAULT_GUARD).unwrap();
    if fast != brute.is_some() {
        return Err(format!("{t:?} budgets {budgets:?}: fast {fast}, brute {}", brute.is_some()));
    }
    match triple_witness(t[0], t[1], t[2], &b).unwrap() {
        Some(w) => {
            if !fast || (0..3).any(|i| hd(&w, t[i]) > budgets[i]) {
                return Err(format!("{t:?} budgets {budgets:?}: bad witness {w:?}"));
            }
        }
        None if fast => return Err(format!("{t:?} budgets {budgets:?}: missing witness")),
        None => {}
    }
    Ok(())
}

fn triple_equivalence() -> Outcome {
    let start = Instant::now();
    let mut checked = 0usize;
    for l in 1..=3 {
        let lmers = all_lmers(l);
        for a in &lmers {
            for b in &lmers {
                for c in &lmers {
                    for budgets in (0..27).map(|x| [x % 3, x / 3 % 3, x / 9]) {
                        check_triple([a, b, c], budgets)?;
                        checked += 1;
                    }
                }
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    for _ in 0..TRIPLE_RANDOM {
        let l = rng.gen_range(4..=6);
        let t: Vec<Vec<u8>> = (0..3).map(|_| random_lmer(&mut rng, l, 4)).collect();
        let budgets = [rng.gen_range(0..=2), rng.gen_range(0..=2), rng.gen_range(0..=2)];
        check_triple([&t[0], &t[1], &t[2]], budgets)?;
        checked += 1;
    }
    within(start.elapsed(), TRIPLE_LIMIT, "triple checks")?;
    Ok(format!("{checked} (triple, budget) cases, {:.2?}", start.elapsed()))
}

fn pruning_soundness() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    let mut visited = 0;
    for i in 0..PRUNING_TUPLES {
        let k = rng.gen_range(1..=4);
        let l = rng.gen_range(1..=6);
        let d = rng.gen_range(0..=2.min(l));
        let tuple: Vec<Vec<u8>> = (0..k).map(|_| random_lmer(&mut rng, l, 4)).collect();
        let refs: Vec<&[u8]> = tuple.iter().map(Vec::as_slice).collect();
        let mut on = Vec::new();
        let mut off = Vec::new();
        generate_common_neighborhood_with(&refs, d, 4, PruneMode::Enabled, |m| on.push(m.to_vec())).unwrap();
        generate_common_neighborhood_with(&refs, d, 4, PruneMode::Disabled, |m| off.push(m.to_vec())).unwrap();
        let brute = brute_force_common_neighborhood(&refs, &vec![d; k], CODES4, DEFAULT_GUARD).unwrap();
        if on != off || on != brute {
            return Err(format!(
                "tuple {i} {tuple:?} d={d}: pruned {}, unpruned {}, brute {}",
                on.len(),
                off.len(),
                brute.len()
            ));
        }
        visited += on.len();
    }
    within(start.elapsed(), PRUNING_LIMIT, "pruning comparison")?;
    Ok(format!("{PRUNING_TUPLES} tuples, {visited} neighbors, {:.2?}", start.elapsed()))
}

fn closed_form() -> Outcome {
    let start = Instant::now();
    let mut failures = Vec::new();
    let n13 = neighborhood_size(13, 4, 4).unwrap();
    if n13 != 66379u32.into() {
        failures.push(format!("N(13,4)={n13}"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for l in 1..=6 {
        for d in 0..=3.min(l) {
            let x = random_lmer(&mut rng, l, 4);
            let count = generate_common_neighborhood(&[&x], d, 4, |_| {}).unwrap();
            let brute = brute_force_common_neighborhood(&[&x], &[d], CODES4, DEFAULT_GUARD)
                .unwrap()
                .len();
            if neighborhood_size(l, d, 4).unwrap() != count.into() || brute as u64 != count {
                failures.push(format!("l={l} d={d}: enumerated {count}, brute {brute}"));
            }
        }
    }
    let got: Vec<(usize, usize)> = CHALLENGING_SEQUENCE
        .iter()
        .map(|&(l, _)| (l, smallest_challenging_d(l, 20, 600, 4)))
        .collect();
    if got != CHALLENGING_SEQUENCE {
        failures.push(format!(
            "smallest challenging d: expected {CHALLENGING_SEQUENCE:?}, computed {got:?}"
        ));
    }
    if let Err(e) = within(start.elapsed(), CLOSED_FORM_LIMIT, "closed-form checks") {
        failures.push(e);
    }
    if failures.is_empty() {
        Ok(format!("challenging sequence {got:?}"))
    } else {
        Err(failures.join("; "))
    }
}

fn planted_recovery() -> Outcome {
    let mut solved = 0;
    for l in [5, 7, 9] {
        for d in 0..=2 {
            for mode in [MutationMode::AtMostD, MutationMode::ExactlyD] {
                for seed in 0..5 {
                    let spec = PlantedInstanceSpec {
                        n: 8,
                        m: 40,
                        mutation_mode: mode,
                        ..PlantedInstanceSpec::new(l, d, seed)
                    };
                    let p = generate_planted_instance(&spec).unwrap();
                    let instance = Instance::new(&p.strings, &Alphabet::dna(), l, d).unwrap();
                    let motifs = solve(&instance, &SolverConfig::default()).unwrap();
                    if !motifs.contains(&p.motif) {
                        return Err(format!("{spec:?}: planted motif missing"));
                    }
                    solved += 1;
                }
            }
        }
    }
    let mut parts = vec![format!("{solved} grid instances")];
    for (l, d) in [(13, 4), (15, 5)] {
        let r = default_run(l, d, LARGE_SEED, 1);
        if !r.run.motifs.contains(&r.motif) {
            return Err(format!("({l},{d}) seed {LARGE_SEED}: planted motif missing"));
        }
        let limit = if l == 15 { LARGE_LIMIT } else { SMOKE_LIMIT };
        within(r.elapsed, limit, &format!("({l},{d})"))?;
        parts.push(format!("({l},{d}) {} motifs in {:.2?}", r.run.motifs.len(), r.elapsed));
    }
    Ok(parts.join(", "))
}

fn challenging_smoke() -> Outcome {
    let mut parts = Vec::new();
    for seed in SMOKE_SEEDS {
        let r = default_run(13, 4, seed, 1);
        within(r.elapsed, SMOKE_LIMIT, &format!("(13,4) seed {seed}"))?;
        for m in r.run.motifs.iter() {
            if let Verdict::Fail(i) = verify_candidate(m, &r.strings, 4) {
                return Err(format!(
                    "seed {seed}: motif {} fails on string {i}",
                    String::from_utf8_lossy(m)
                ));
            }
        }
        if r.run.motifs.is_empty() {
            return Err(format!("seed {seed}: no motifs"));
        }
        parts.push(format!("seed {seed}: {} motifs {:.2?}", r.run.motifs.len(), r.elapsed));
    }
    Ok(parts.join(", "))
}

fn parallel_determinism() -> Outcome {
    let cores = std::thread::available_parallelism().map_or(1, |n| n.get());
    let base = default_run(15, 5, LARGE_SEED, 1);
    let base_text = base.run.motifs.to_lines();
    let mut times = vec![(1, base.elapsed)];
    let mut failures = Vec::new();
    for &w in &WORKER_COUNTS[1..] {
        let r = default_run(15, 5, LARGE_SEED, w);
        if r.run.motifs.to_lines() != base_text {
            failures.push(format!("{w} workers: motif output differs"));
        }
        times.push((w, r.elapsed));
    }
    let t4 = times.iter().find(|(w, _)| *w == 4).unwrap().1;
    let speedup = base.elapsed.as_secs_f64() / t4.as_secs_f64();
    let timing: Vec<String> = times.iter().map(|(w, t)| format!("{w}w {t:.2?}")).collect();
    let summary = format!(
        "{} ; speedup(4) {speedup:.2} (need >= {MIN_SPEEDUP_4}) ; {cores} hardware threads",
        timing.join(", ")
    );
    if speedup < MIN_SPEEDUP_4 {
        failures.push(format!("speedup {speedup:.2} below {MIN_SPEEDUP_4}"));
    }
    if failures.is_empty() {
        Ok(summary)
    } else {
        Err(format!("{} ; {summary}", failures.join("; ")))
    }
}

fn threshold_properties() -> Outcome {
    let start = Instant::now();
    let (n, sigma) = (20, 4);
    let mut grid: Vec<(usize, usize, usize)> = Vec::new();
    for &(l, d) in &CHALLENGING_SEQUENCE {
        for m in [200, 300, 400, 500, 600, 700] {
            grid.push((l, d, m));
        }
    }
    grid.push((9, 2, 600));
    grid.push((11, 3, 600));
    if grid.len() != 50 {
        return Err(format!("grid has {} points", grid.len()));
    }
    for &(l, d, m) in &grid {
        let curve = ThresholdModel::new(n, m, l, d, sigma).curve();
        for w in curve.windows(2) {
            if w[1].ln_time_sample < w[0].ln_time_sample {
                return Err(format!("Time_s decreases at (l={l},d={d},m={m}) t={}", w[1].t));
            }
            if w[1].ln_time_pattern > w[0].ln_time_pattern {
                return Err(format!("Time_p increases at (l={l},d={d},m={m}) t={}", w[1].t));
            }
        }
    }
    let ms = [200, 300, 400, 500, 600, 700];
    for &(l, dl) in &CHALLENGING_SEQUENCE {
        let table: Vec<Vec<usize>> = (0..=dl)
            .map(|d| ms.iter().map(|&m| estimate_threshold(n, m, l, d, sigma)).collect())
            .collect();
        for d in 0..=dl {
            for j in 0..ms.len() {
                if d > 0 && table[d][j] < table[d - 1][j] {
                    return Err(format!("t decreases with d at l={l} d={d} m={}", ms[j]));
                }
                if j > 0 && table[d][j] > table[d][j - 1] {
                    return Err(format!("t increases with m at l={l} d={d} m={}", ms[j]));
                }
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for _ in 0..10 {
        let strings = random_strings(&mut rng, 5, 20, DNA);
        let instance = Instance::new(&strings, &Alphabet::dna(), 6, 1).unwrap();
        let base = solve(&instance, &SolverConfig::default()).unwrap();
        for t in 1..=5 {
            let config = SolverConfig {
                threshold_override: Some(t),
                ..Default::default()
            };
            if solve(&instance, &config).unwrap() != base {
                return Err(format!("motifs change with threshold {t}"));
            }
        }
    }
    within(start.elapsed(), THRESHOLD_LIMIT, "threshold checks")?;
    Ok(format!("{} grid points, {:.2?}", grid.len(), start.elapsed()))
}

fn memory_accounting() -> Outcome {
    let r = default_run(13, 4, LARGE_SEED, 1);
    let report = r.run.allocation;
    let k: usize = 20 * (600 - 13 + 1);
    let expected = (k * k).div_ceil(WORD_BITS);
    if report.lmers != 11760 || k != 11760 || report.pair_matrix_words != expected {
        return Err(format!(
            "K={} pair matrix {} words, expected {expected}",
            report.lmers, report.pair_matrix_words
        ));
    }
    let ratio = report.ratio();
    if ratio > MEMORY_MULTIPLIER {
        return Err(format!(
            "total {} words vs bound {} (ratio {ratio:.3} > {MEMORY_MULTIPLIER})",
            report.total_words, report.bound_words
        ));
    }
    Ok(format!(
        "pair matrix {expected} words, total {} / bound {} = {ratio:.3}",
        report.total_words, report.bound_words
    ))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        ("oracle equivalence", oracle_equivalence),
        ("three-l-mer test equivalence", triple_equivalence),
        ("pruning soundness", pruning_soundness),
        ("closed-form checks", closed_form),
        ("planted recovery", planted_recovery),
        ("challenging smoke run", challenging_smoke),
        ("parallel determinism and scaling", parallel_determinism),
        ("threshold model properties", threshold_properties),
        ("memory accounting", memory_accounting),
    ];
    let mut failed = 0;
    for (name, check) in criteria {
        let outcome = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        match outcome {
            Ok(detail) => println!("PASS {name}: {detail}"),
            Err(detail) => {
                failed += 1;
                println!("FAIL {name}: {detail}");
            }
        }
    }
    println!("acceptance: {}/{} passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
