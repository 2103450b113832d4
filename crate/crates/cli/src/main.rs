//! `ciflab`: runs the experiments and writes reproducible reports.
//!
//! Exit status is 0 when every verdict passes, 2 when a quantitative check
//! fails and 1 on usage or runtime errors.

mod args;
mod commands;
mod config;

use std::fs;
use std::io::Write;
use std::process::ExitCode;

use ciflab_core::exec::with_threads;
use ciflab_core::Exec;
use clap::Parser;

use crate::args::{Cli, Format};
use crate::commands::Outcome;
use crate::config::Settings;

const EXIT_FAIL: u8 = 2;
const EXIT_ERROR: u8 = 1;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(EXIT_ERROR)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(EXIT_FAIL),
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_ERROR)
        }
    }
}

fn run(cli: &Cli) -> Result<bool, String> {
    let settings = config::resolve(cli)?;
    let jobs = settings.jobs.unwrap_or(0);
    let exec = if jobs == 1 { Exec::Sequential } else { Exec::best() };
    let name = cli.command.name();
    let s = settings.clone();
    let outcome = with_threads(jobs, move || match name {
        "cif" => commands::cif(s, exec),
        "lemmas" => commands::lemmas(s, exec),
        "norms" => commands::norms(s, exec),
        "probe" => commands::probe(s, exec),
        _ => commands::spectrum(s, exec),
    })?;
    emit(name, &settings, &outcome)?;
    Ok(outcome.pass)
}

fn emit(name: &str, s: &Settings, out: &Outcome) -> Result<(), String> {
    let format = s.format.unwrap_or(Format::Json);
    let json = format != Format::Csv;
    let csv = format != Format::Json;
    match &s.out {
        Some(dir) => {
            let write = |file: &str, bytes: &[u8]| {
                let path = dir.join(file);
                fs::write(&path, bytes).map_err(|e| format!("{}: {e}", path.display()))
            };
            fs::create_dir_all(dir).map_err(|e| format!("{}: {e}", dir.display()))?;
            let tag = match (name, s.probe.as_deref()) {
                ("probe", Some(p)) => format!("probe_{p}"),
                _ => name.to_string(),
            };
            if json {
                write(&format!("{tag}.json"), out.json.as_bytes())?;
            }
            if csv {
                for (file, body) in &out.tables {
                    write(file, body.as_bytes())?;
                }
            }
            for (file, bytes) in &out.blobs {
                write(file, bytes)?;
            }
        }
        None => {
            if !out.blobs.is_empty() {
                return Err("binary output needs --out DIR".into());
            }
            let mut stdout = std::io::stdout().lock();
            let mut text = String::new();
            if json {
                text.push_str(&out.json);
            }
            if csv {
                if let Some((_, body)) = out.tables.first() {
                    text.push_str(body);
                }
            }
            stdout.write_all(text.as_bytes()).map_err(|e| e.to_string())?;
        }
    }
    Ok(())
}
