use std::fs;
use std::io::Write;
use std::net::{IpAddr, SocketAddr};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use insight::config::{file_label, ConfigError, DataPaths};
use insight::formats::{import_session, render_pool};
use insight::poolgen::{generate_pool, PoolSpec};
use insight::report::{Report, ReportProvenance};
use insight::service::{bind, router, serve, AppState};
use insight_core::{AudienceSet, Lexicon};

const EXIT_IO: u8 = 3;
const EXIT_POSTS: u8 = 4;
const EXIT_DATA: u8 = 5;
const EXIT_ANALYSIS: u8 = 6;

#[derive(Parser)]
#[command(name = "insight", version, about = "Big-Five personality insight over archived posts")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct DataArgs {
    /// Dictionary file (.dic format)
    #[arg(long, env = "INSIGHT_LEXICON")]
    lexicon: PathBuf,
    /// Trait model JSON
    #[arg(long, env = "INSIGHT_MODEL")]
    model: PathBuf,
    /// Reference pool JSON
    #[arg(long, env = "INSIGHT_POOL")]
    pool: PathBuf,
}

impl DataArgs {
    fn paths(&self) -> DataPaths {
        DataPaths {
            lexicon: self.lexicon.clone(),
            model: self.model.clone(),
            pool: self.pool.clone(),
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Score an NDJSON archive and write a JSON report
    Analyze {
        #[arg(long, env = "INSIGHT_POSTS")]
        posts: PathBuf,
        #[command(flatten)]
        data: DataArgs,
        /// Comma-separated audiences (public, friends, only_me) or "all"
        #[arg(long, default_value = "all")]
        audiences: String,
        /// Number of top and bottom posts listed per trait
        #[arg(long, default_value_t = 5)]
        top: usize,
        /// Output path, "-" for standard output
        #[arg(long, default_value = "-")]
        out: PathBuf,
        /// Also print a summary table to standard error
        #[arg(long)]
        summary: bool,
    },
    /// Run the HTTP service
    Serve {
        #[command(flatten)]
        data: DataArgs,
        #[arg(long, env = "INSIGHT_BIND", default_value = "127.0.0.1")]
        bind: IpAddr,
        /// Port to listen on; 0 picks a free one
        #[arg(long, env = "INSIGHT_PORT", default_value_t = 8080)]
        port: u16,
    },
    /// Generate a synthetic reference pool from a text corpus
    BuildPool {
        #[arg(long)]
        corpus: PathBuf,
        #[arg(long, env = "INSIGHT_LEXICON")]
        lexicon: PathBuf,
        #[arg(long, env = "INSIGHT_MODEL")]
        model: PathBuf,
        #[arg(long, default_value_t = 2000)]
        samples: usize,
        #[arg(long, default_value_t = 150)]
        min_words: usize,
        #[arg(long, default_value_t = 1500)]
        max_words: usize,
        #[arg(long, default_value_t = 0.01)]
        noise: f64,
        #[arg(long, default_value_t = 7)]
        seed: u64,
        #[arg(long, default_value = "-")]
        out: PathBuf,
    },
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn new(code: u8, message: impl ToString) -> Self {
        Failure {
            code,
            message: message.to_string(),
        }
    }
}

impl From<ConfigError> for Failure {
    fn from(e: ConfigError) -> Self {
        Failure::new(if e.io { EXIT_IO } else { EXIT_DATA }, format!("data file error: {e}"))
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::new(EXIT_IO, format!("{}: {e}", path.display())))
}

fn write_out(out: &Path, text: &str) -> Result<(), Failure> {
    let res = if out == Path::new("-") {
        let mut stdout = std::io::stdout().lock();
        stdout.write_all(text.as_bytes()).and_then(|_| stdout.flush())
    } else {
        fs::write(out, text)
    };
    res.map_err(|e| Failure::new(EXIT_IO, format!("{}: {e}", out.display())))
}

fn analyze(
    posts: &Path,
    data: &DataArgs,
    audiences: &str,
    top: usize,
    out: &Path,
    summary: bool,
) -> Result<(), Failure> {
    let audiences: AudienceSet = audiences
        .parse()
        .map_err(|bad| Failure::new(2, format!("unknown audience {bad:?}")))?;
    let (analyzer, provenance) = data.paths().load()?;
    let text = read(posts)?;
    let session =
        import_session(&text).map_err(|e| Failure::new(EXIT_POSTS, format!("{}: {e}", posts.display())))?;
    let report = Report::build(
        &session,
        &analyzer,
        audiences,
        top,
        ReportProvenance {
            data: provenance,
            posts: file_label(posts),
        },
    )
    .map_err(|e| Failure::new(EXIT_ANALYSIS, e))?;
    if summary {
        eprint!("{}", report.summary());
    }
    write_out(out, &report.to_json())
}

fn run_server(data: &DataArgs, bind_ip: IpAddr, port: u16) -> Result<(), Failure> {
    let (analyzer, provenance) = data.paths().load()?;
    let app = router(AppState::new(analyzer, provenance));
    let rt = tokio::runtime::Runtime::new().map_err(|e| Failure::new(EXIT_IO, e))?;
    rt.block_on(async move {
        let listener = bind(SocketAddr::new(bind_ip, port))
            .await
            .map_err(|e| Failure::new(EXIT_IO, format!("cannot bind {bind_ip}:{port}: {e}")))?;
        let addr = listener.local_addr().map_err(|e| Failure::new(EXIT_IO, e))?;
        println!("listening on http://{addr}");
        let _ = std::io::stdout().flush();
        serve(listener, app).await.map_err(|e| Failure::new(EXIT_IO, e))
    })
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Analyze {
            posts,
            data,
            audiences,
            top,
            out,
            summary,
        } => analyze(&posts, &data, &audiences, top, &out, summary),
        Command::Serve { data, bind, port } => run_server(&data, bind, port),
        Command::BuildPool {
            corpus,
            lexicon,
            model,
            samples,
            min_words,
            max_words,
            noise,
            seed,
            out,
        } => {
            let lex = Lexicon::parse(&read(&lexicon)?)
                .map_err(|e| Failure::new(EXIT_DATA, format!("{}: {e}", lexicon.display())))?;
            let m = insight::formats::parse_model(&read(&model)?)
                .map_err(|e| Failure::new(EXIT_DATA, format!("{}: {e}", model.display())))?;
            let spec = PoolSpec {
                samples,
                min_words,
                max_words,
                noise_sd: noise,
                seed,
            };
            let label = format!(
                "synthetic: {samples} windows of {min_words}-{max_words} words from {}, noise sd {noise}, seed {seed}",
                file_label(&corpus)
            );
            let pool = generate_pool(&read(&corpus)?, &lex, &m, &spec, label).map_err(|e| Failure::new(EXIT_DATA, e))?;
            write_out(&out, &render_pool(&pool))
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
