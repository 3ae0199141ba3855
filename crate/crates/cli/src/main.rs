use std::fs;
use std::io::{self, Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use nonfree_cli::commands::{self, Failure, Format};
use nonfree_cli::session::Session;

#[derive(Parser)]
#[command(name = "nonfree", version, about = "Nonfree loci and resolving-closure certificates for graded modules")]
struct Cli {
    /// Session file with the ring and named modules; `-` reads stdin.
    #[arg(long, global = true)]
    session: Option<PathBuf>,
    /// Seed for randomized corpus generation.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Worker threads for corpus evaluation.
    #[arg(long, global = true, default_value_t = 1)]
    jobs: usize,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = FormatArg::Text)]
    format: FormatArg,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Nonfree locus by both routes, with their agreement.
    Nf { module: String },
    /// The n-th syzygy module.
    Syzygy { module: String, n: usize },
    /// Ext^1(A, B) and its support.
    Ext1 { a: String, b: String },
    /// One pushout step along multiplication by an element.
    Pushout { module: String, element: String },
    /// A module in the resolving closure with the given nonfree locus.
    Realize { module: String, closed: String },
    /// Descent to a module nonfree at the prime (default: the homogeneous maximal ideal).
    Punctured { module: String, prime: Option<String> },
    /// Re-check a certificate JSON file.
    Verify { file: PathBuf },
    /// Singular locus of a hypersurface ring.
    Sing,
    /// Generate a corpus family and compare both nonfree-locus routes.
    Corpus {
        family: String,
        #[arg(long)]
        n: Option<u32>,
        #[arg(long)]
        f: Option<String>,
        #[arg(long, default_value_t = 20)]
        count: usize,
    },
}

fn read_source(path: &PathBuf) -> Result<String, Failure> {
    if path.as_os_str() == "-" {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s).map_err(|e| Failure::Input(e.to_string()))?;
        return Ok(s);
    }
    fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn load_session(cli: &Cli) -> Result<Session, Failure> {
    let path = cli.session.as_ref().ok_or_else(|| Failure::Input("this command needs --session".into()))?;
    let text = read_source(path)?;
    Session::parse(&text).map_err(|e| Failure::Input(format!("{}:{e}", path.display())))
}

fn run(cli: &Cli) -> Result<String, Failure> {
    let fmt = match cli.format {
        FormatArg::Text => Format::Text,
        FormatArg::Json => Format::Json,
    };
    match &cli.command {
        Command::Verify { file } => commands::verify_cmd(&read_source(file)?, fmt),
        Command::Corpus { family, n, f, count } => {
            commands::corpus_cmd(family, *n, f.as_deref(), *count, cli.seed, cli.jobs, fmt)
        }
        cmd => {
            let s = load_session(cli)?;
            match cmd {
                Command::Nf { module } => commands::nf(&s, module, fmt),
                Command::Syzygy { module, n } => commands::syzygy_cmd(&s, module, *n, fmt),
                Command::Ext1 { a, b } => commands::ext1_cmd(&s, a, b, fmt),
                Command::Pushout { module, element } => commands::pushout_cmd(&s, module, element, fmt),
                Command::Realize { module, closed } => commands::realize_cmd(&s, module, closed, fmt),
                Command::Punctured { module, prime } => commands::punctured_cmd(&s, module, prime.as_deref(), fmt),
                Command::Sing => commands::sing_cmd(&s, fmt),
                Command::Verify { .. } | Command::Corpus { .. } => unreachable!(),
            }
        }
    }
}

fn emit(cli: &Cli, text: &str) -> Result<(), Failure> {
    match &cli.output {
        Some(p) => fs::write(p, text).map_err(|e| Failure::Input(format!("{}: {e}", p.display()))),
        None => io::stdout().write_all(text.as_bytes()).map_err(|e| Failure::Input(e.to_string())),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(&cli).and_then(|out| emit(&cli, &out)) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("{}", f.message().trim_end());
            ExitCode::from(f.code())
        }
    }
}
