use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use qbattery_cli::args::Cli;
use qbattery_cli::{run, RunConfig};

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let result = RunConfig::from_command(&cli.command).and_then(|cfg| {
        let stdout = std::io::stdout();
        let mut lock = stdout.lock();
        run::execute(&cfg, &mut lock)?;
        let _ = lock.flush();
        Ok(())
    });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
