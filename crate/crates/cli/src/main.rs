//! `zerosum`: command-line front end for zero-sum computations over
//! small finite groups.

mod args;
mod commands;

use std::io::Write;
use std::process::ExitCode;

use clap::Parser;

use args::{Cli, Format};
use commands::{command_name, dispatch, exit_for, header, resolve_workers, Exit, Outcome};

fn render(out: &Outcome, format: Format, command: &str, seed: u64, workers: usize) -> String {
    match format {
        Format::Human if out.raw => out.human.clone(),
        Format::Human => format!("{command} (seed {seed}, workers {workers})\n{}", out.human),
        Format::Structured => {
            let mut s = header(command, seed, workers).to_string();
            s.push('\n');
            for r in &out.records {
                s.push_str(&r.to_string());
                s.push('\n');
            }
            s
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let workers = resolve_workers(&cli.global);
    let name = command_name(&cli.command);
    let out = match dispatch(&cli.command, cli.global.seed, workers) {
        Ok(out) => out,
        Err(e) => {
            let code = exit_for(&e);
            eprintln!("error: {e:#}");
            return ExitCode::from(code as u8);
        }
    };
    let text = render(&out, cli.global.format, &name, cli.global.seed, workers);
    let written = match &cli.global.output {
        Some(path) => std::fs::write(path, &text).map_err(|e| format!("{}: {e}", path.display())),
        None => std::io::stdout().write_all(text.as_bytes()).map_err(|e| e.to_string()),
    };
    if let Err(e) = written {
        eprintln!("error: writing report: {e}");
        return ExitCode::from(Exit::Failed as u8);
    }
    ExitCode::from(out.exit as u8)
}
