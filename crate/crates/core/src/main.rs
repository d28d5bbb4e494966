use clap::Parser;
use leafatlas::cli::{emit, exit_code, run_job, Args, JobConfig};
use std::process::ExitCode;

fn main() -> ExitCode {
    let args = Args::parse();
    let cfg = match JobConfig::from_args(&args) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("leafatlas: {e}");
            return ExitCode::from(2);
        }
    };
    let report = run_job(&cfg);
    let text = emit(&report, cfg.format);
    match &cfg.out {
        Some(p) => {
            if let Err(e) = std::fs::write(p, &text) {
                eprintln!("leafatlas: {}: {e}", p.display());
                return ExitCode::from(2);
            }
        }
        None => print!("{text}"),
    }
    for s in report.stages.iter().filter(|s| s.error.is_some()) {
        eprintln!("leafatlas: stage {} failed: {}", s.stage, s.error.as_deref().unwrap_or(""));
    }
    ExitCode::from(exit_code(&report) as u8)
}
