//! Exact `(l, d)` planted motif search.
//!
//! Given `n` strings over an alphabet `Σ`, an l-mer `M` is an `(l, d)` motif
//! if every string has a window of length `l` within Hamming distance `d`
//! of `M`. [`solve`] returns all of them.

pub mod alphabet;
pub mod error;
pub mod fasta;
pub mod instance;
pub mod neighborhood;
pub mod oracle;
pub mod packed;
pub mod parallel;
pub mod pruning;
pub mod solver;

pub use alphabet::Alphabet;
pub use error::{
    EncodingError, FastaError, InstanceError, NeighborhoodError, OracleError, ParallelError,
    PruningError, SolverError,
};
pub use instance::{generate_planted_instance, MutationMode, PlantedInstance, PlantedInstanceSpec};
pub use packed::{LmerId, LmerRef, PackedSequenceSet};
pub use parallel::{run_parallel, run_parallel_with, split_subproblems, ParallelRun, Subproblem};
pub use solver::{solve, solve_with_stats, Instance, MotifSet, SolverConfig};
