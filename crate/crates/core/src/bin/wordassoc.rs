use std::fs::{self, File};
use std::io::{BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use log::info;

use wordassoc::cluster::{cluster_words, write_clustering};
use wordassoc::corpus::{
    build_vocabulary, read_role_words, select_role_words, write_role_words, write_vocabulary, CorpusSlice,
};
use wordassoc::embed::{self, read_embeddings, write_embeddings, TrainerKind};
use wordassoc::pipeline::{derive_seed, emit_reports, regenerate_report, run_evaluation, ExperimentConfig, Mode};
use wordassoc::{Error, Result};

#[derive(Parser)]
#[command(name = "wordassoc", version = wordassoc::pipeline::VERSION, about = "Train word embeddings on tagged corpus slices and compare the word associations they encode")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build per-slice vocabulary and role-word files from `<slice>.conllu` files.
    Ingest {
        #[arg(long)]
        corpus_dir: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = 5)]
        min_count: usize,
    },
    /// Train one model on one slice and write its vectors as text.
    Train {
        /// A CoNLL-U file, or a slice id looked up in the config's corpus_dir.
        #[arg(long)]
        slice: String,
        #[arg(long)]
        model: TrainerKind,
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Ward-cluster the role words of one embedding file.
    Cluster {
        #[arg(long)]
        embeddings: PathBuf,
        /// Role-word file written by `ingest`.
        #[arg(long)]
        roles: PathBuf,
        #[arg(long, default_value_t = 8)]
        k: usize,
        #[arg(long, default_value_t = 10_000)]
        cap: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Run an evaluation regime and write the report files.
    Evaluate {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        mode: ModeArg,
        #[arg(long)]
        out: PathBuf,
    },
    /// Rebuild summary.csv in a report directory and print the tables.
    Report {
        #[arg(long = "in")]
        input: PathBuf,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    FixedCorpus,
    FixedModel,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Mode {
        match m {
            ModeArg::FixedCorpus => Mode::FixedCorpus,
            ModeArg::FixedModel => Mode::FixedModel,
        }
    }
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        fs::create_dir_all(parent).map_err(|e| Error::io(parent, e))?;
    }
    File::create(path).map(BufWriter::new).map_err(|e| Error::io(path, e))
}

fn open(path: &Path) -> Result<BufReader<File>> {
    File::open(path).map(BufReader::new).map_err(|e| Error::io(path, e))
}

fn ingest(corpus_dir: &Path, out: &Path, min_count: usize) -> Result<()> {
    let mut files: Vec<PathBuf> = fs::read_dir(corpus_dir)
        .map_err(|e| Error::io(corpus_dir, e))?
        .filter_map(|entry| entry.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "conllu"))
        .collect();
    files.sort();
    if files.is_empty() {
        return Err(Error::CorpusEmpty);
    }
    for path in files {
        let slice = CorpusSlice::from_conllu_file(&path)?;
        let vocab = build_vocabulary(&slice, min_count)?;
        let roles = select_role_words(&slice, &vocab)?;
        let vocab_path = out.join(format!("{}.vocab.tsv", slice.slice_id));
        let mut w = create(&vocab_path)?;
        write_vocabulary(&vocab, &roles, &mut w)
            .and_then(|_| w.flush())
            .map_err(|e| Error::io(&vocab_path, e))?;
        let roles_path = out.join(format!("{}.roles.tsv", slice.slice_id));
        let mut w = create(&roles_path)?;
        write_role_words(&roles.ranked_words(&vocab, usize::MAX), &mut w)
            .and_then(|_| w.flush())
            .map_err(|e| Error::io(&roles_path, e))?;
        println!(
            "{}: {} tokens, {} words, {} neutral, {} attribute",
            slice.slice_id,
            slice.token_count(),
            vocab.len(),
            roles.neutral().len(),
            roles.attribute().len()
        );
    }
    Ok(())
}

fn train(slice: &str, model: TrainerKind, config: &Path, out: &Path) -> Result<()> {
    let config = ExperimentConfig::from_file(config)?;
    let direct = Path::new(slice);
    let path = if direct.is_file() {
        direct.to_path_buf()
    } else {
        config.slice_path(slice)
    };
    if !path.is_file() {
        return Err(Error::MissingSlice {
            slice: slice.to_owned(),
            path,
        });
    }
    let corpus = CorpusSlice::from_conllu_file(&path)?;
    let vocab = build_vocabulary(&corpus, config.hyperparams.min_count)?;
    let mut hp = config.hyperparams.clone();
    hp.seed = derive_seed(hp.seed, &corpus.slice_id, model);
    let trained = embed::train(model, &corpus, &vocab, &hp, config.training_threads())?;
    let mut w = create(out)?;
    write_embeddings(&trained.embeddings, &mut w)
        .and_then(|_| w.flush())
        .map_err(|e| Error::io(out, e))?;
    info!("wrote {} vectors to {}", trained.embeddings.len(), out.display());
    Ok(())
}

fn cluster(embeddings: &Path, roles: &Path, k: usize, cap: usize, out: &Path) -> Result<()> {
    let vectors = read_embeddings(open(embeddings)?)?;
    let mut words = read_role_words(open(roles)?)?;
    words.truncate(cap);
    let clusters = cluster_words(&vectors, &words, k)?;
    let mut w = create(out)?;
    write_clustering(&clusters.clustering, &mut w)
        .and_then(|_| w.flush())
        .map_err(|e| Error::io(out, e))
}

fn evaluate(config: &Path, mode: Mode, out: &Path) -> Result<()> {
    let config = ExperimentConfig::from_file(config)?;
    let bundle = run_evaluation(&config, mode)?;
    for path in emit_reports(&bundle, &config, out)? {
        info!("wrote {}", path.display());
    }
    print!("{}", regenerate_report(out)?);
    Ok(())
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Ingest {
            corpus_dir,
            out,
            min_count,
        } => ingest(&corpus_dir, &out, min_count),
        Command::Train {
            slice,
            model,
            config,
            out,
        } => train(&slice, model, &config, &out),
        Command::Cluster {
            embeddings,
            roles,
            k,
            cap,
            out,
        } => cluster(&embeddings, &roles, k, cap, &out),
        Command::Evaluate { config, mode, out } => evaluate(&config, mode.into(), &out),
        Command::Report { input } => regenerate_report(&input).map(|text| print!("{text}")),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
