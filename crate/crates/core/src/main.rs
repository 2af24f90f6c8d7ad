use std::io::Write;
use std::process::ExitCode;

use anyhow::Context;
use clap::Parser;
use tweet_emotion::cli::{self, Cli};

fn run(cli: &Cli) -> anyhow::Result<()> {
    if let Some(n) = cli::resolve_threads(&cli.global)? {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .context("configuring the thread pool")?;
    }
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    cli::run(cli, &mut out)?;
    out.flush().context("flushing stdout")?;
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    // clap exits with status 2 on usage errors.
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
