//! `cmgen`: command-line driver for the frame-embedding pipeline.

use std::collections::HashSet;
use std::fs::File;
use std::io::{self, BufRead, BufReader, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use cmgen::corpus::{
    build_mapping_table, emit_control_record, load_mapping_table, parse_ftc, parse_pfc,
    prepare_windows, read_windows, save_mapping_table, write_windows, DEFAULT_RADIUS,
};
use cmgen::embedding::{load_embeddings, save_embeddings, train};
use cmgen::evaluation::{
    aggregate_report_with, assemble_triples, krippendorff_alpha, load_annotations,
    load_sentence_embeddings, Level,
};
use cmgen::inventory::load_inventory;
use cmgen::mapper::{
    format_generation, generate, parse_generation_batch, select_rare_mapping,
    select_unseen_mapping, DEFAULT_CANDIDATES,
};
use cmgen::metrics::{evaluate_space, DEFAULT_SAMPLE_SIZE};
use cmgen::seed::derive_seed;
use cmgen::{Error, MetricConfig, TrainerConfig};

#[derive(Parser)]
#[command(
    name = "cmgen",
    version,
    about = "Frame embeddings and conceptual-mapping verb substitution"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Output {
    /// Write here instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct Seed {
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Subcommand)]
enum Command {
    /// Tagged sentences (FTC1) to training windows.
    Prepare {
        /// FTC1 file, or `-` for standard input.
        input: PathBuf,
        #[arg(long, default_value_t = DEFAULT_RADIUS)]
        radius: usize,
        /// Also emit a window centered on each focus lemma.
        #[arg(long)]
        lemma_windows: bool,
        #[command(flatten)]
        output: Output,
    },
    /// Training windows to an EMB1 embedding file.
    Train {
        input: PathBuf,
        #[arg(long, default_value_t = 50)]
        dim: usize,
        #[arg(long, default_value_t = 5)]
        epochs: usize,
        #[arg(long, default_value_t = 5)]
        negatives: usize,
        #[arg(long, default_value_t = 5)]
        min_count: u64,
        #[arg(long, default_value_t = 0.025)]
        lr: f64,
        /// Subsampling threshold; 0 turns it off.
        #[arg(long, default_value_t = 1e-3)]
        subsample: f64,
        /// More than one thread gives non-deterministic output.
        #[arg(long, default_value_t = 1)]
        threads: usize,
        #[command(flatten)]
        seed: Seed,
        #[command(flatten)]
        output: Output,
    },
    /// Lexical and structural frame-embedding metrics.
    EvalFrames {
        #[arg(long)]
        embeddings: PathBuf,
        #[arg(long)]
        inventory: PathBuf,
        /// Distant sample size.
        #[arg(long, default_value_t = DEFAULT_SAMPLE_SIZE)]
        k: usize,
        /// Only use verb lexical units as local words.
        #[arg(long)]
        verbs_only: bool,
        #[command(flatten)]
        seed: Seed,
        #[command(flatten)]
        output: Output,
    },
    /// Replace focus verbs along a frame-to-frame mapping.
    Generate {
        #[arg(long)]
        embeddings: PathBuf,
        /// Batch of FTC1 records with target and source frame columns.
        input: PathBuf,
        /// Candidates kept per request.
        #[arg(long, default_value_t = DEFAULT_CANDIDATES)]
        k: usize,
        /// Never return the input verb itself.
        #[arg(long)]
        exclude_input: bool,
        /// Only propose verb lexical units of this FIV1 inventory.
        #[arg(long)]
        inventory: Option<PathBuf>,
        #[command(flatten)]
        output: Output,
    },
    /// A rare and an unseen source frame for every target in a mapping table.
    SelectMappings {
        #[arg(long)]
        table: PathBuf,
        #[arg(long)]
        inventory: PathBuf,
        #[command(flatten)]
        seed: Seed,
        #[command(flatten)]
        output: Output,
    },
    /// dis, rel and exact match over SEB1 sentence triples.
    EvalMetrics {
        input: PathBuf,
        /// Report rel as a signed difference.
        #[arg(long)]
        signed_rel: bool,
        #[command(flatten)]
        output: Output,
    },
    /// Krippendorff's alpha for a rater-by-item matrix.
    Agreement {
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = LevelArg::Interval)]
        level: LevelArg,
        #[command(flatten)]
        output: Output,
    },
    /// Paired sentences (PFC1) to control records and a mapping table.
    EmitRecords {
        input: PathBuf,
        /// Where to write the mapping frequency table.
        #[arg(long)]
        table: Option<PathBuf>,
        #[command(flatten)]
        output: Output,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum LevelArg {
    Interval,
    Ordinal,
    Nominal,
}

impl From<LevelArg> for Level {
    fn from(l: LevelArg) -> Self {
        match l {
            LevelArg::Interval => Level::Interval,
            LevelArg::Ordinal => Level::Ordinal,
            LevelArg::Nominal => Level::Nominal,
        }
    }
}

fn open(path: &Path) -> Result<Box<dyn BufRead>> {
    if path == Path::new("-") {
        return Ok(Box::new(io::stdin().lock()));
    }
    let f = File::open(path).with_context(|| format!("cannot open {}", path.display()))?;
    Ok(Box::new(BufReader::new(f)))
}

fn load<T>(path: &Path, parse: impl FnOnce(Box<dyn BufRead>) -> cmgen::Result<T>) -> Result<T> {
    parse(open(path)?).with_context(|| format!("reading {}", path.display()))
}

fn emit(output: &Output, bytes: &[u8]) -> Result<()> {
    match &output.out {
        Some(p) => {
            std::fs::write(p, bytes).with_context(|| format!("cannot write {}", p.display()))
        }
        None => {
            let mut out = io::stdout().lock();
            out.write_all(bytes)?;
            out.flush()?;
            Ok(())
        }
    }
}

fn run(cli: Cli) -> Result<()> {
    let mut buf = Vec::new();
    let output = match cli.command {
        Command::Prepare {
            input,
            radius,
            lemma_windows,
            output,
        } => {
            let sentences = load(&input, parse_ftc)?;
            write_windows(
                &prepare_windows(&sentences, radius, lemma_windows),
                &mut buf,
            )?;
            output
        }
        Command::Train {
            input,
            dim,
            epochs,
            negatives,
            min_count,
            lr,
            subsample,
            threads,
            seed,
            output,
        } => {
            let windows = load(&input, read_windows)?;
            let config = TrainerConfig {
                dim,
                negatives,
                epochs,
                learning_rate: lr,
                subsample,
                min_count,
                seed: derive_seed(seed.seed, "train"),
                threads,
            };
            save_embeddings(&train(&windows, &config)?, &mut buf)?;
            output
        }
        Command::EvalFrames {
            embeddings,
            inventory,
            k,
            verbs_only,
            seed,
            output,
        } => {
            let space = load(&embeddings, load_embeddings)?;
            let inv = load(&inventory, load_inventory)?;
            let config = MetricConfig {
                sample_size: k,
                seed: derive_seed(seed.seed, "eval-frames"),
                verbs_only,
            };
            evaluate_space(&space, &inv, &config)?.write_tsv(&mut buf)?;
            output
        }
        Command::Generate {
            embeddings,
            input,
            k,
            exclude_input,
            inventory,
            output,
        } => {
            let space = load(&embeddings, load_embeddings)?;
            let requests = load(&input, parse_generation_batch)?;
            let allowed: Option<HashSet<String>> = match inventory {
                Some(path) => Some(
                    load(&path, load_inventory)?
                        .frames()
                        .flat_map(|f| &f.lexical_units)
                        .filter(|lu| lu.is_verb())
                        .map(|lu| lu.lemma.clone())
                        .collect(),
                ),
                None => None,
            };
            for (i, mut req) in requests.into_iter().enumerate() {
                req.candidates = k;
                req.exclude_input = exclude_input;
                req.allowed = allowed.clone();
                let result =
                    generate(&req, &space).with_context(|| format!("request {}", i + 1))?;
                writeln!(buf, "{}", format_generation(&req, &result))?;
            }
            output
        }
        Command::SelectMappings {
            table,
            inventory,
            seed,
            output,
        } => {
            let table = load(&table, load_mapping_table)?;
            let inv = load(&inventory, load_inventory)?;
            let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(seed.seed, "select-mappings"));
            for target in table.targets() {
                let rare = select_rare_mapping(&table, target, &mut rng)?;
                let unseen = match select_unseen_mapping(&table, &inv, target, &mut rng) {
                    Ok(s) => s,
                    Err(Error::MappingsExhausted(_)) => "NA".to_string(),
                    Err(e) => return Err(e.into()),
                };
                writeln!(buf, "{target}\t{rare}\t{unseen}")?;
            }
            output
        }
        Command::EvalMetrics {
            input,
            signed_rel,
            output,
        } => {
            let triples = assemble_triples(load(&input, load_sentence_embeddings)?)?;
            aggregate_report_with(&triples, signed_rel)?.write_tsv(&mut buf)?;
            output
        }
        Command::Agreement {
            input,
            level,
            output,
        } => {
            let matrix = load(&input, load_annotations)?;
            writeln!(buf, "{:.6}", krippendorff_alpha(&matrix, level.into()))?;
            output
        }
        Command::EmitRecords {
            input,
            table,
            output,
        } => {
            let pairs = load(&input, parse_pfc)?;
            for p in &pairs {
                writeln!(buf, "{}\t{}", emit_control_record(p), p.metaphoric.text())?;
            }
            if let Some(path) = table {
                let mut t = Vec::new();
                save_mapping_table(&build_mapping_table(&pairs), &mut t)?;
                emit(&Output { out: Some(path) }, &t)?;
            }
            output
        }
    };
    emit(&output, &buf)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
