use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EncodingError {
    #[error("alphabet must have between 2 and 255 symbols, got {0}")]
    AlphabetSize(usize),
    #[error("symbol '{0}' appears twice in the alphabet")]
    DuplicateSymbol(char),
    #[error("unknown alphabet '{0}' (expected dna, protein or custom:<symbols>)")]
    UnknownAlphabet(String),
    #[error("symbol '{symbol}' at index {position} of sequence {sequence} is not in the alphabet")]
    InvalidSymbol {
        symbol: char,
        sequence: usize,
        position: usize,
    },
    #[error("sequence {sequence} has length {found}, expected {expected}")]
    UnequalLengths {
        sequence: usize,
        expected: usize,
        found: usize,
    },
    #[error("no sequences given")]
    NoSequences,
    #[error("motif length l={l} must satisfy 1 <= l <= m={m}")]
    BadLength { l: usize, m: usize },
    #[error("bits per symbol must be in 1..=16, got {0}")]
    BadGroupWidth(u32),
    #[error("l-mer offset {offset} in sequence {sequence} is out of range")]
    BadOffset { sequence: usize, offset: usize },
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PruningError {
    #[error("empty l-mer tuple")]
    EmptyTuple,
    #[error("l-mers have different lengths")]
    LengthMismatch,
    #[error("expected {expected} budgets, got {found}")]
    BudgetCount { expected: usize, found: usize },
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum NeighborhoodError {
    #[error("empty l-mer tuple")]
    EmptyTuple,
    #[error("l-mers have different lengths")]
    LengthMismatch,
    #[error("budget d={d} exceeds l={l}")]
    BudgetTooLarge { d: usize, l: usize },
    #[error("symbol code {0} is outside the alphabet")]
    BadCode(u8),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SolverError {
    #[error("d={d} must satisfy 0 <= d <= l={l}")]
    BadBudget { d: usize, l: usize },
    #[error("threshold {t} must satisfy 1 <= t <= n={n}")]
    BadThreshold { t: usize, n: usize },
    #[error("pair matrix for {lmers} l-mers needs {words} words, allocation failed")]
    Capacity { lmers: usize, words: usize },
    #[error("subproblem offset {offset} out of range (max {max})")]
    BadSubproblem { offset: usize, max: usize },
    #[error(transparent)]
    Encoding(#[from] EncodingError),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParallelError {
    #[error("worker count must be at least 1")]
    NoWorkers,
    #[error("worker {worker} failed on subproblem offset {offset}: {message}")]
    WorkerFailed {
        worker: usize,
        offset: usize,
        message: String,
    },
    #[error(transparent)]
    Solver(#[from] SolverError),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum InstanceError {
    #[error("invalid planted instance parameters: {0}")]
    BadSpec(String),
    #[error("d={d} exceeds l={l}")]
    BudgetTooLarge { d: usize, l: usize },
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OracleError {
    #[error("enumeration needs {required} candidates, guard allows {limit}")]
    GuardExceeded { required: u128, limit: u64 },
    #[error("l-mers or strings are inconsistent: {0}")]
    BadInput(String),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FastaError {
    #[error("line {line}: {message}")]
    Malformed { line: usize, message: String },
    #[error("record {record} ('{name}') is empty")]
    EmptyRecord { record: usize, name: String },
    #[error("input contains no sequences")]
    NoSequences,
}
