use std::process::ExitCode;

use clap::Parser;
use gseforge::cli::{run, RunConfig};

fn main() -> ExitCode {
    let cfg = RunConfig::parse();
    let outcome = cfg.thread_count().and_then(|t| {
        if let Some(t) = t {
            rayon::ThreadPoolBuilder::new()
                .num_threads(t)
                .build_global()
                .map_err(|e| gseforge::Error::InvalidParams(e.to_string()))?;
        }
        let text = run(&cfg)?;
        match &cfg.out {
            Some(p) => std::fs::write(p, text)?,
            None => print!("{text}"),
        }
        Ok(())
    });
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
