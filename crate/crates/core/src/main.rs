use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use ghlab_core::cli::{run, Cli, OutputFormat, EXIT_CONFIG};

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let config = cli.to_config();
    let outcome = run(&config);
    let text = match cli.format {
        OutputFormat::Json => outcome.report.to_json(),
        OutputFormat::Table => outcome.report.to_table(),
    };
    match &config.output {
        Some(path) => {
            if let Err(e) = std::fs::write(path, format!("{text}\n")) {
                eprintln!("cannot write {}: {e}", path.display());
                return ExitCode::from(EXIT_CONFIG as u8);
            }
        }
        None => {
            // A closed pipe (e.g. `| head`) is not an error for the report.
            let _ = writeln!(std::io::stdout().lock(), "{text}");
        }
    }
    if let Some(err) = &outcome.report.error {
        eprintln!("error: {err}");
    }
    ExitCode::from(outcome.exit_code as u8)
}
