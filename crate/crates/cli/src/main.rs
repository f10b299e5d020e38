use std::io::Write;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;
use motsheaf::{run, Cli, CliError, Invocation};

fn execute() -> Result<u8, CliError> {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            print!("{e}");
            return Ok(0);
        }
        Err(e) => return Err(CliError::Parse(e.render().to_string().trim_end().to_string())),
    };
    let config = match cli.command.into_invocation()? {
        Invocation::EmitConfig(config) => {
            println!("{}", config.to_json());
            return Ok(0);
        }
        Invocation::Run(config) => config,
    };
    let outcome = run(&config)?;
    let rendered = outcome.document.render(config.format)?;
    std::io::stdout().write_all(rendered.as_bytes())?;
    for d in &outcome.diagnostics {
        eprintln!("motsheaf: {d}");
    }
    Ok(outcome.status)
}

fn main() -> ExitCode {
    match execute() {
        Ok(status) => ExitCode::from(status),
        Err(e) => {
            eprintln!("motsheaf: {e}");
            e.into()
        }
    }
}
