use std::fs;
use std::process::ExitCode;

use clap::Parser;

use percduel_cli::config::{Cli, Command};
use percduel_cli::{run, service};

fn echo(cmd: &Command, cli: &Cli) -> Result<(), String> {
    let text = serde_json::to_string(cmd).unwrap();
    match &cli.echo {
        Some(path) => fs::write(path, format!("{text}\n")).map_err(|e| format!("{}: {e}", path.display())),
        None => {
            eprintln!("config: {text}");
            Ok(())
        }
    }
}

fn execute(cmd: Command, cli: &Cli) -> Result<bool, String> {
    match &cmd {
        Command::Rerun(a) => {
            let text = fs::read_to_string(&a.config).map_err(|e| format!("{}: {e}", a.config.display()))?;
            let text = text.strip_prefix("config: ").unwrap_or(&text);
            let inner: Command = serde_json::from_str(text.trim()).map_err(|e| format!("{}: {e}", a.config.display()))?;
            if matches!(inner, Command::Rerun(_)) {
                return Err("a configuration echo cannot itself be a rerun".into());
            }
            return execute(inner, cli);
        }
        _ => echo(&cmd, cli)?,
    }
    let pretty = |v: &serde_json::Value| serde_json::to_string_pretty(v).unwrap();
    match cmd {
        Command::Verify(a) => {
            let (report, ok) = run::verify(&a)?;
            run::output(a.out.as_ref(), &pretty(&report))?;
            Ok(ok)
        }
        Command::Play(a) => {
            println!("{}", pretty(&run::play(&a)?));
            Ok(true)
        }
        Command::Batch(a) => {
            println!("{}", pretty(&run::batch(&a)?));
            Ok(true)
        }
        Command::SampleBoard(a) => {
            run::output(a.out.as_ref(), &run::sample_board(&a)?)?;
            Ok(true)
        }
        Command::Serve(a) => {
            let rt = tokio::runtime::Runtime::new().map_err(|e| e.to_string())?;
            rt.block_on(service::serve(&a.bind)).map_err(|e| format!("{}: {e}", a.bind))?;
            Ok(true)
        }
        Command::Rerun(_) => unreachable!(),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut cmd = cli.command.clone();
    if let Err(e) = cmd.resolve() {
        eprintln!("error: {e}");
        return ExitCode::from(2);
    }
    match execute(cmd, &cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
