use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};
use subshift::run::{self, Command, RunOptions, EXIT_USAGE};

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Verb {
    #[value(name = "thm1-build")]
    Thm1Build,
    #[value(name = "thm1-verify")]
    Thm1Verify,
    #[value(name = "thm2-ledger")]
    Thm2Ledger,
    #[value(name = "thm2-build")]
    Thm2Build,
    Codebook,
    Complexity,
    Cover,
    #[value(name = "quiet-check")]
    QuietCheck,
    Liouville,
    Report,
}

impl From<Verb> for Command {
    fn from(v: Verb) -> Command {
        match v {
            Verb::Thm1Build => Command::Thm1Build,
            Verb::Thm1Verify => Command::Thm1Verify,
            Verb::Thm2Ledger => Command::Thm2Ledger,
            Verb::Thm2Build => Command::Thm2Build,
            Verb::Codebook => Command::Codebook,
            Verb::Complexity => Command::Complexity,
            Verb::Cover => Command::Cover,
            Verb::QuietCheck => Command::QuietCheck,
            Verb::Liouville => Command::Liouville,
            Verb::Report => Command::Report,
        }
    }
}

/// Exact certificates for concatenation subshifts.
#[derive(Parser, Debug)]
#[command(version, about)]
struct Cli {
    command: Verb,
    /// JSON config; defaults apply to absent fields.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long, default_value = "out")]
    out: PathBuf,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Caps worker threads.
    #[arg(long)]
    threads: Option<usize>,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            return ExitCode::from(code as u8);
        }
    };
    if let Some(t) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(t).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_USAGE as u8);
        }
    }
    let opts = RunOptions {
        out: cli.out,
        seed: cli.seed,
        threads: cli.threads,
    };
    let config = match run::load_config(cli.config.as_deref()) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_USAGE as u8);
        }
    };
    let (code, result) = run::run_and_record(cli.command.into(), &config, &opts);
    match result {
        Ok(r) => {
            for a in &r.artifacts {
                println!("wrote {}", opts.out.join(a).display());
            }
            for f in &r.failures {
                eprintln!("certificate failure: {f}");
            }
        }
        Err(e) => eprintln!("error: {e}"),
    }
    ExitCode::from(code as u8)
}
