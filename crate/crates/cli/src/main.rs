use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use pms8::fasta::{self, Record, SequenceFile};
use pms8::instance::{
    expected_spurious_motifs, neighborhood_size, smallest_challenging_d, SpuriousModel,
};
use pms8::oracle::{verify_candidate, Verdict};
use pms8::parallel::run_parallel_with;
use pms8::solver::{estimate_threshold, ThresholdModel};
use pms8::{generate_planted_instance, Alphabet, Instance, MutationMode, PlantedInstanceSpec, SolverConfig};

mod report;

use report::{ConfigReport, InstanceReport, ModelReport, RunReport, TimingReport};

#[derive(Parser)]
#[command(name = "pms8", version, about = "Exact (l,d) planted motif search")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write a random instance with a planted motif as annotated FASTA.
    Generate(GenerateArgs),
    /// Find every (l,d) motif of the input sequences.
    Solve(SolveArgs),
    /// Check candidate motifs against the input by brute force.
    Verify(VerifyArgs),
    /// Print spurious-motif statistics and threshold curves.
    Model(ModelArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mutation {
    Atmost,
    Exact,
}

#[derive(Args)]
struct GenerateArgs {
    #[arg(short)]
    l: usize,
    #[arg(short)]
    d: usize,
    #[arg(short, default_value_t = 20)]
    n: usize,
    #[arg(short, default_value_t = 600)]
    m: usize,
    #[arg(long, default_value = "dna")]
    alphabet: String,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value_t = Mutation::Atmost)]
    mutation: Mutation,
    /// Output file; standard output when omitted.
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct SolveArgs {
    input: PathBuf,
    #[arg(short)]
    l: usize,
    #[arg(short)]
    d: usize,
    #[arg(long, default_value = "dna")]
    alphabet: String,
    #[arg(long, env = "WORKER_COUNT")]
    workers: Option<usize>,
    /// Stack size at which to switch to neighborhood generation.
    #[arg(long)]
    threshold: Option<usize>,
    #[arg(long)]
    max_motifs: Option<usize>,
    #[arg(long)]
    no_sort_rows: bool,
    #[arg(long)]
    no_pair_matrix: bool,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    input: PathBuf,
    /// File with one candidate motif per line.
    motifs: PathBuf,
    #[arg(short)]
    l: usize,
    #[arg(short)]
    d: usize,
    #[arg(long, default_value = "dna")]
    alphabet: String,
}

#[derive(Args)]
struct ModelArgs {
    #[arg(short)]
    l: usize,
    #[arg(short)]
    d: usize,
    #[arg(short, default_value_t = 20)]
    n: usize,
    #[arg(short, default_value_t = 600)]
    m: usize,
    #[arg(long, default_value = "dna")]
    alphabet: String,
    /// Alphabet size; overrides --alphabet.
    #[arg(long)]
    sigma: Option<usize>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Generate(a) => cmd_generate(a),
        Command::Solve(a) => cmd_solve(a),
        Command::Verify(a) => cmd_verify(a),
        Command::Model(a) => cmd_model(a),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn write_output(path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(p) => fs::write(p, text).with_context(|| format!("cannot write {}", p.display())),
        None => {
            std::io::stdout().write_all(text.as_bytes())?;
            Ok(())
        }
    }
}

fn read_input(path: &Path) -> Result<SequenceFile> {
    let text = fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    fasta::parse(&text).with_context(|| format!("{}", path.display()))
}

fn cmd_generate(a: GenerateArgs) -> Result<ExitCode> {
    let alphabet = Alphabet::parse(&a.alphabet)?;
    let spec = PlantedInstanceSpec {
        n: a.n,
        m: a.m,
        l: a.l,
        d: a.d,
        alphabet: alphabet.clone(),
        seed: a.seed,
        mutation_mode: match a.mutation {
            Mutation::Atmost => MutationMode::AtMostD,
            Mutation::Exact => MutationMode::ExactlyD,
        },
    };
    let inst = generate_planted_instance(&spec)?;
    let motif = String::from_utf8_lossy(&inst.motif).into_owned();
    let positions: Vec<String> = inst.positions.iter().map(|p| p.to_string()).collect();
    let file = SequenceFile {
        metadata: vec![
            ("n".into(), a.n.to_string()),
            ("m".into(), a.m.to_string()),
            ("l".into(), a.l.to_string()),
            ("d".into(), a.d.to_string()),
            ("alphabet".into(), alphabet.name()),
            ("seed".into(), a.seed.to_string()),
            ("mutation".into(), spec.mutation_mode.name().into()),
            ("rng".into(), "chacha8".into()),
            ("motif".into(), motif.clone()),
            ("positions".into(), positions.join(",")),
        ],
        records: inst
            .strings
            .into_iter()
            .enumerate()
            .map(|(i, s)| Record {
                name: format!("seq{} planted_at={}", i + 1, inst.positions[i]),
                sequence: s,
            })
            .collect(),
    };
    let text = fasta::write(&file);
    match &a.output {
        Some(path) => {
            write_output(Some(path), &text)?;
            println!("{motif}");
        }
        None => write_output(None, &text)?,
    }
    Ok(ExitCode::SUCCESS)
}

fn default_workers() -> usize {
    std::thread::available_parallelism().map_or(1, |n| n.get())
}

fn cmd_solve(a: SolveArgs) -> Result<ExitCode> {
    let alphabet = Alphabet::parse(&a.alphabet)?;
    let file = read_input(&a.input)?;
    let strings = file.sequences();
    let m = strings.iter().map(Vec::len).min().unwrap_or(0);
    if a.l == 0 || a.l > m {
        bail!("need 1 <= l <= m, got l={} with shortest sequence of length {m}", a.l);
    }
    let instance = Instance::new(&strings, &alphabet, a.l, a.d)?;
    let workers = a.workers.unwrap_or_else(default_workers);
    if workers == 0 {
        bail!("--workers must be at least 1");
    }
    let config = SolverConfig {
        threshold_override: a.threshold,
        sort_rows: !a.no_sort_rows,
        use_pair_matrix: !a.no_pair_matrix,
        max_motifs: a.max_motifs,
        verify_against_original: false,
    };
    let start = Instant::now();
    let run = run_parallel_with(&instance, workers, &config, &|_, _| {})?;
    let wall = start.elapsed();

    let text = match a.format {
        Format::Text => run.motifs.to_lines(),
        Format::Json => {
            let stats = run.stats();
            let report = RunReport {
                instance: InstanceReport {
                    input: a.input.display().to_string(),
                    n: instance.n(),
                    m: instance.m(),
                    l: instance.l(),
                    d: instance.d(),
                    alphabet: alphabet.name(),
                    seed: file.get("seed").and_then(|s| s.parse().ok()),
                },
                config: ConfigReport {
                    threshold: run.threshold,
                    threshold_override: a.threshold,
                    workers,
                    sort_rows: config.sort_rows,
                    use_pair_matrix: config.use_pair_matrix,
                    max_motifs: config.max_motifs,
                },
                motif_count: run.motifs.len(),
                truncated: run.motifs.truncated(),
                wall_time_secs: wall.as_secs_f64(),
                memory: run.allocation,
                peak_memory_bytes: run.allocation.total_words * 8,
                timing: TimingReport {
                    sample_driven_secs: stats.sample_time.as_secs_f64(),
                    pattern_driven_secs: stats.pattern_time.as_secs_f64(),
                    tuples: stats.tuples,
                    neighbors: stats.neighbors,
                },
                jobs: run.jobs_dispatched(),
                reproduce: reproduce_command(&a, workers),
            };
            let out = serde_json::json!({
                "motifs": run.motifs.to_strings(),
                "report": report,
            });
            serde_json::to_string_pretty(&out)? + "\n"
        }
    };
    write_output(a.output.as_deref(), &text)?;
    Ok(if run.motifs.is_empty() {
        ExitCode::from(1)
    } else {
        ExitCode::SUCCESS
    })
}

fn reproduce_command(a: &SolveArgs, workers: usize) -> String {
    let mut cmd = format!(
        "pms8 solve {} -l {} -d {} --alphabet {} --workers {workers}",
        a.input.display(),
        a.l,
        a.d,
        a.alphabet
    );
    if let Some(t) = a.threshold {
        cmd += &format!(" --threshold {t}");
    }
    if let Some(c) = a.max_motifs {
        cmd += &format!(" --max-motifs {c}");
    }
    if a.no_sort_rows {
        cmd += " --no-sort-rows";
    }
    if a.no_pair_matrix {
        cmd += " --no-pair-matrix";
    }
    cmd + " --format json"
}

fn cmd_verify(a: VerifyArgs) -> Result<ExitCode> {
    let alphabet = Alphabet::parse(&a.alphabet)?;
    let file = read_input(&a.input)?;
    let strings = file.sequences();
    for (i, s) in strings.iter().enumerate() {
        alphabet.encode(s, i)?;
    }
    let text = fs::read_to_string(&a.motifs)
        .with_context(|| format!("cannot read {}", a.motifs.display()))?;
    let mut out = String::new();
    let mut all_pass = true;
    for (line_no, line) in text.lines().enumerate() {
        let motif = line.trim().to_ascii_uppercase();
        if motif.is_empty() {
            continue;
        }
        if motif.len() != a.l {
            bail!(
                "{}:{}: motif '{motif}' has length {}, expected l={}",
                a.motifs.display(),
                line_no + 1,
                motif.len(),
                a.l
            );
        }
        alphabet
            .encode(motif.as_bytes(), 0)
            .with_context(|| format!("{}:{}", a.motifs.display(), line_no + 1))?;
        match verify_candidate(motif.as_bytes(), &strings, a.d) {
            Verdict::Pass(offsets) => {
                let offsets: Vec<String> = offsets.iter().map(|o| o.to_string()).collect();
                out += &format!("PASS {motif} {}\n", offsets.join(","));
            }
            Verdict::Fail(i) => {
                all_pass = false;
                out += &format!("FAIL {motif} string={}\n", i + 1);
            }
        }
    }
    write_output(None, &out)?;
    Ok(if all_pass {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

fn cmd_model(a: ModelArgs) -> Result<ExitCode> {
    let sigma = match a.sigma {
        Some(s) => s,
        None => Alphabet::parse(&a.alphabet)?.len(),
    };
    if a.l == 0 || a.l > a.m || a.d > a.l || a.n == 0 || sigma < 2 {
        bail!("need n >= 1, sigma >= 2, 1 <= l <= m and d <= l");
    }
    let spurious = SpuriousModel::new(a.n, a.m, a.l, a.d, sigma);
    let threshold = ThresholdModel::new(a.n, a.m, a.l, a.d, sigma);
    let expected = expected_spurious_motifs(a.n, a.m, a.l, a.d, sigma);
    let report = ModelReport {
        l: a.l,
        d: a.d,
        n: a.n,
        m: a.m,
        sigma,
        neighborhood_d: neighborhood_size(a.l, a.d, sigma)?.to_string(),
        neighborhood_2d: neighborhood_size(a.l, (2 * a.d).min(a.l), sigma)?.to_string(),
        p: spurious.per_lmer_probability,
        q: spurious.per_string_probability,
        expected_spurious: expected,
        challenging: expected >= 1.0,
        smallest_challenging_d: smallest_challenging_d(a.l, a.n, a.m, sigma),
        threshold: estimate_threshold(a.n, a.m, a.l, a.d, sigma),
        curve: threshold.curve(),
    };
    let text = match a.format {
        Format::Json => serde_json::to_string_pretty(&report)? + "\n",
        Format::Text => report.to_text(),
    };
    write_output(None, &text)?;
    Ok(ExitCode::SUCCESS)
}
