use std::fs;
use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use synchro_cli::{execute, exit_code, Cli};

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let result = execute(&cli.command).and_then(|text| match &cli.out {
        Some(path) => fs::write(path, text).map_err(|e| anyhow::anyhow!("writing {}: {e}", path.display())),
        None => std::io::stdout().write_all(text.as_bytes()).map_err(Into::into),
    });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(exit_code(&err) as u8)
        }
    }
}
