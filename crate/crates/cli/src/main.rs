use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use eqfix::library::DEFAULT_K;
use eqfix_cli::bench::Config;
use eqfix_cli::commands::{self, BenchOptions, FixOptions, TrainOptions, EXIT_INPUT};

#[derive(Parser)]
#[command(
    name = "eqfix",
    version,
    about = "Learn and apply fixing rules for LaTeX equations"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Learn rules from an examples file and store them in the library
    Train {
        #[arg(long)]
        library: PathBuf,
        #[arg(long)]
        examples: PathBuf,
        /// Number of ranked rules kept per entry
        #[arg(long)]
        top_k: Option<usize>,
    },
    /// Suggest fixes for an equation and its error message
    Fix {
        #[arg(long)]
        library: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        eq: String,
        #[arg(long, allow_hyphen_values = true)]
        err: String,
        /// Maximum number of candidates to present
        #[arg(long, default_value_t = DEFAULT_K)]
        limit: usize,
        /// Print the top candidate without asking
        #[arg(long)]
        yes: bool,
    },
    /// Run the benchmark over a corpus (the bundled one by default)
    Bench {
        #[arg(long)]
        corpus: Option<PathBuf>,
        #[arg(long, value_delimiter = ',', default_value = "c1,c2,c3,c4,all")]
        configs: Vec<Config>,
        #[arg(long, default_value_t = DEFAULT_K)]
        top_k: usize,
        /// Write the JSON report here
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let stdout = io::stdout();
    let mut out = stdout.lock();
    let result = match cli.command {
        Command::Train {
            library,
            examples,
            top_k,
        } => commands::train(
            &TrainOptions {
                library,
                examples,
                top_k,
            },
            &mut out,
        ),
        Command::Fix {
            library,
            eq,
            err,
            limit,
            yes,
        } => commands::fix(
            &FixOptions {
                library,
                eq,
                err,
                limit,
                yes,
            },
            &mut io::stdin().lock(),
            &mut out,
            &mut io::stderr(),
        ),
        Command::Bench {
            corpus,
            configs,
            top_k,
            out: report,
        } => commands::bench(
            &BenchOptions {
                corpus,
                configs,
                top_k,
                out: report,
            },
            &mut out,
        ),
    };
    let _ = out.flush();
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_INPUT)
        }
    }
}
