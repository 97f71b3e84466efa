use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use acrox::llm::LlmConfig;
use acrox::pipeline::{run, FixtureConfig, FixtureMode, RunConfig, RunMode};

#[derive(Parser, Debug)]
#[command(
    name = "acrox",
    version,
    about = "Extract acronym-expansion pairs from page-delimited document text",
    subcommand_negates_reqs = true
)]
struct Cli {
    #[command(subcommand)]
    command: Option<Command>,

    /// Extraction mode
    #[arg(long, value_enum, required = true)]
    mode: Option<RunMode>,

    /// Input file(s): UTF-8 text, pages separated by form feeds
    #[arg(long, num_args = 1.., required = true)]
    input: Vec<PathBuf>,

    /// Report output path (JSON)
    #[arg(long, required = true)]
    out: Option<PathBuf>,

    /// Maximum stopword fraction tolerated in a forward expansion
    #[arg(long, default_value_t = 1.0 / 3.0)]
    stopword_threshold: f64,

    /// Table entries per model request (hard cap 20)
    #[arg(long, default_value_t = 15, value_parser = clap::value_parser!(u8).range(1..=20))]
    chunk_size: u8,

    /// Chat-completion endpoint URL
    #[arg(long)]
    endpoint: Option<String>,

    /// Model name sent with each request
    #[arg(long, default_value = "gpt-4o-mini")]
    model: String,

    /// Environment variable holding the API key
    #[arg(long, default_value = "OPENAI_API_KEY")]
    api_key_env: String,

    /// Requests per minute budget
    #[arg(long, default_value_t = 60)]
    rate_limit: u32,

    /// Maximum in-flight requests
    #[arg(long, default_value_t = 4)]
    max_concurrency: usize,

    /// Fixture file for recording or replaying model replies
    #[arg(long)]
    fixture: Option<PathBuf>,

    /// Replay model replies from the fixture (no network, no key)
    #[arg(long, requires = "fixture", conflicts_with = "record")]
    replay: bool,

    /// Record live model replies into the fixture
    #[arg(long, requires = "fixture")]
    record: bool,

    /// Converter command producing page-delimited text on stdout;
    /// "{}" stands for the input path
    #[arg(long)]
    converter: Option<String>,

    /// Stopword list file (one lowercase token per line)
    #[arg(long)]
    stopwords: Option<PathBuf>,

    /// Dictionary file for spelling correction (one word per line)
    #[arg(long)]
    dictionary: Option<PathBuf>,

    /// Enable conservative spelling correction (requires --dictionary)
    #[arg(long)]
    spellcheck: bool,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Aggregate saved reports into a CSV of per-domain, per-mode statistics
    Stats {
        /// Glob over report JSON files
        #[arg(long)]
        reports: String,
        /// CSV output path
        #[arg(long)]
        out: PathBuf,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Some(Command::Stats { reports, out }) => run_stats(&reports, &out),
        None => run_pipeline(cli),
    }
}

fn run_stats(pattern: &str, out: &PathBuf) -> ExitCode {
    let mut paths: Vec<PathBuf> = match glob::glob(pattern) {
        Ok(iter) => iter.filter_map(Result::ok).collect(),
        Err(e) => {
            eprintln!("acrox: bad glob {pattern:?}: {e}");
            return ExitCode::from(2);
        }
    };
    paths.sort();
    if paths.is_empty() {
        eprintln!("acrox: no reports match {pattern:?}");
        return ExitCode::from(2);
    }
    match acrox::analytics::write_stats_csv(&paths, out) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("acrox: stats: {e}");
            ExitCode::from(2)
        }
    }
}

fn run_pipeline(cli: Cli) -> ExitCode {
    let fixture = match (&cli.fixture, cli.record, cli.replay) {
        (Some(path), true, false) => Some(FixtureConfig {
            path: path.clone(),
            mode: FixtureMode::Record,
        }),
        (Some(path), false, true) => Some(FixtureConfig {
            path: path.clone(),
            mode: FixtureMode::Replay,
        }),
        (Some(_), false, false) => {
            eprintln!("acrox: --fixture requires --record or --replay");
            return ExitCode::from(2);
        }
        _ => None,
    };
    let llm = Some(LlmConfig {
        endpoint: cli.endpoint.clone().unwrap_or_default(),
        model_name: cli.model.clone(),
        requests_per_minute: cli.rate_limit,
        max_concurrency: cli.max_concurrency,
        api_key_env: cli.api_key_env.clone(),
        ..LlmConfig::default()
    });

    let config = RunConfig {
        mode: cli.mode.expect("clap enforces --mode"),
        inputs: cli.input,
        out: cli.out.expect("clap enforces --out"),
        stopword_threshold: cli.stopword_threshold,
        chunk_size: cli.chunk_size as usize,
        llm,
        converter: cli.converter,
        fixture,
        stopwords_path: cli.stopwords,
        dictionary_path: cli.dictionary,
        spellcheck: cli.spellcheck,
    };

    match run(&config) {
        Ok(report) => {
            println!(
                "{} document(s), {} acronym(s), {} expanded -> {}",
                report.corpus.documents,
                report.corpus.total_acronyms,
                report.corpus.expansions_found,
                config.out.display()
            );
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("acrox: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
