use std::process::ExitCode;

use assouad_cli::args::Cli;
use assouad_cli::{run, CliError, RunConfig};
use clap::Parser;

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match RunConfig::from_cli(cli).and_then(|cfg| run(&cfg)) {
        Ok(outcome) => {
            print!("{}", outcome.summary);
            for a in &outcome.artifacts {
                log::info!("wrote {}", a.display());
            }
            if outcome.success {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("{}", error_json(&e));
            ExitCode::from(1)
        }
    }
}

fn error_json(e: &CliError) -> String {
    serde_json::to_string(&e.to_json()).unwrap_or_else(|_| format!("{{\"error\":{{\"message\":\"{e}\"}}}}"))
}
