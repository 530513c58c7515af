//! One job per l-mer of the first string, pulled from a shared counter by
//! worker threads. The calling thread is worker 0. Each worker owns a
//! solver state and a private result buffer; buffers are merged after the
//! last job finishes.

use std::any::Any;
use std::collections::HashSet;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::sync::atomic::{AtomicBool, AtomicUsize, Ordering};
use std::sync::Mutex;

use serde::Serialize;

use crate::error::ParallelError;
use crate::solver::{AllocationReport, Instance, MotifSet, SolveContext, SolveStats, Solver, SolverConfig};

/// The part of the search whose first row is the single l-mer at
/// `first_lmer_offset` of string 0.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Subproblem {
    pub first_lmer_offset: usize,
}

pub fn split_subproblems(instance: &Instance) -> Vec<Subproblem> {
    (0..=instance.m() - instance.l())
        .map(|first_lmer_offset| Subproblem { first_lmer_offset })
        .collect()
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct WorkerReport {
    pub worker: usize,
    /// Subproblem offsets in the order this worker ran them.
    pub jobs: Vec<usize>,
    pub stats: SolveStats,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ParallelRun {
    pub motifs: MotifSet,
    pub threshold: usize,
    pub workers: Vec<WorkerReport>,
    pub allocation: AllocationReport,
}

impl ParallelRun {
    pub fn stats(&self) -> SolveStats {
        let mut total = SolveStats::default();
        for w in &self.workers {
            total.merge(&w.stats);
        }
        total
    }

    pub fn jobs_dispatched(&self) -> usize {
        self.workers.iter().map(|w| w.jobs.len()).sum()
    }
}

pub fn run_parallel(
    instance: &Instance,
    worker_count: usize,
    config: &SolverConfig,
) -> Result<MotifSet, ParallelError> {
    run_parallel_with(instance, worker_count, config, &|_, _| {}).map(|r| r.motifs)
}

/// Like [`run_parallel`], calling `before_job(worker, offset)` on the
/// worker's thread before each subproblem.
pub fn run_parallel_with(
    instance: &Instance,
    worker_count: usize,
    config: &SolverConfig,
    before_job: &(dyn Fn(usize, usize) + Sync),
) -> Result<ParallelRun, ParallelError> {
    if worker_count == 0 {
        return Err(ParallelError::NoWorkers);
    }
    let ctx = SolveContext::new(instance, config.clone())?;
    let jobs = split_subproblems(instance);
    let next = AtomicUsize::new(0);
    let abort = AtomicBool::new(false);
    let failures: Mutex<Vec<ParallelError>> = Mutex::new(Vec::new());

    let work = |worker: usize| -> (WorkerReport, HashSet<Vec<u8>>) {
        let mut solver = Solver::new(&ctx);
        let mut report = WorkerReport {
            worker,
            ..Default::default()
        };
        let mut found = HashSet::new();
        while !abort.load(Ordering::Relaxed) {
            let idx = next.fetch_add(1, Ordering::Relaxed);
            let Some(job) = jobs.get(idx) else { break };
            let offset = job.first_lmer_offset;
            report.jobs.push(offset);
            let outcome = catch_unwind(AssertUnwindSafe(|| {
                before_job(worker, offset);
                solver.run_subproblem(offset)
            }));
            let failure = match outcome {
                Ok(Ok(())) => None,
                Ok(Err(e)) => Some(e.to_string()),
                Err(panic) => Some(panic_message(panic)),
            };
            if let Some(message) = failure {
                abort.store(true, Ordering::Relaxed);
                failures.lock().unwrap().push(ParallelError::WorkerFailed {
                    worker,
                    offset,
                    message,
                });
                break;
            }
            found.extend(solver.take_motif_codes());
            if solver.stopped() {
                break;
            }
        }
        report.stats = *solver.stats();
        (report, found)
    };

    let mut results = std::thread::scope(|scope| {
        let handles: Vec<_> = (1..worker_count)
            .map(|w| scope.spawn(move || work(w)))
            .collect();
        let mut results = vec![work(0)];
        results.extend(handles.into_iter().map(|h| h.join().expect("worker loop does not panic")));
        results
    });

    let mut failures = failures.into_inner().unwrap();
    failures.sort_by_key(|e| match e {
        ParallelError::WorkerFailed { offset, .. } => *offset,
        _ => usize::MAX,
    });
    if let Some(first) = failures.into_iter().next() {
        return Err(first);
    }

    results.sort_by_key(|(r, _)| r.worker);
    let alphabet = instance.alphabet();
    let mut motifs = MotifSet::from_motifs(
        results
            .iter()
            .flat_map(|(_, found)| found.iter())
            .map(|m| alphabet.decode(m)),
    );
    if let Some(cap) = config.max_motifs {
        motifs.truncate(cap);
    }
    Ok(ParallelRun {
        motifs,
        threshold: ctx.threshold(),
        allocation: ctx.allocation_report(worker_count),
        workers: results.into_iter().map(|(r, _)| r).collect(),
    })
}

fn panic_message(panic: Box<dyn Any + Send>) -> String {
    if let Some(s) = panic.downcast_ref::<&str>() {
        (*s).to_string()
    } else if let Some(s) = panic.downcast_ref::<String>() {
        s.clone()
    } else {
        "worker panicked".to_string()
    }
}
