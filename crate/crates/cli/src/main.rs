use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;
use poincare_cli::{run, RunConfig};

fn main() -> ExitCode {
    let cfg = match RunConfig::try_parse() {
        Ok(cfg) => cfg,
        Err(e) => {
            let _ = e.print();
            let help = matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion);
            return ExitCode::from(if help { 0 } else { 1 });
        }
    };
    match run(&cfg) {
        Ok(report) => {
            print!("{}", report.render(cfg.json));
            ExitCode::from(report.status.exit_code())
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
