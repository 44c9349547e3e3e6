use std::process::ExitCode;

use clap::{CommandFactory, Parser};

use radium_cli::{requested_threads, resolve, run_command, Cli};

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if e.use_stderr() => usage_error(e),
        Err(e) => e.exit(),
    };
    if let Err(msg) = cli.command.validate() {
        usage_error(Cli::command().error(clap::error::ErrorKind::ValueValidation, msg));
    }
    match run(cli) {
        // With no --out the table owns stdout, so the summary moves aside.
        Ok((summary, true)) => {
            eprintln!("{summary}");
            ExitCode::SUCCESS
        }
        Ok((summary, false)) => {
            println!("{summary}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}

/// Prints a parse error with the usage line and exits with status 2.
fn usage_error(e: clap::Error) -> ! {
    let rendered = e.render().to_string();
    eprint!("{rendered}");
    if !rendered.contains("Usage:") {
        let mut cmd = Cli::command();
        cmd.build();
        let name = std::env::args().nth(1).unwrap_or_default();
        let usage = match cmd.find_subcommand_mut(&name) {
            Some(sub) => sub.render_usage(),
            None => cmd.render_usage(),
        };
        eprintln!("\n{usage}");
    }
    std::process::exit(2)
}

fn run(cli: Cli) -> anyhow::Result<(String, bool)> {
    let command = resolve(cli.command)?;
    if let Err(msg) = command.validate() {
        anyhow::bail!(msg);
    }
    let table_on_stdout = command.output().is_some_and(|o| o.out.is_none());
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(n) = requested_threads()? {
        pool = pool.num_threads(n);
    }
    let pool = pool.build()?;
    let summary = pool.install(|| run_command(&command))?;
    Ok((summary, table_on_stdout))
}
