//! Request parsing, analysis drivers and report rendering for the `gitstab`
//! command-line tool.

pub mod commands;
pub mod error;
pub mod input;
pub mod report;

pub use commands::RunOptions;
pub use error::CliError;
pub use report::Report;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Analyze,
    VgitScan,
    Lct,
}

/// Parses `request` and runs one subcommand.
pub fn run(command: Command, request: &str, opts: &RunOptions) -> Result<Report, CliError> {
    let problem = input::parse_request(request)?;
    Ok(match command {
        Command::Analyze => Report::Analyze(Box::new(commands::analyze(&problem, opts)?)),
        Command::VgitScan => Report::Scan(Box::new(commands::vgit_scan(&problem, opts)?)),
        Command::Lct => Report::Lct(Box::new(commands::lct(&problem)?)),
    })
}

/// Pretty JSON with a trailing newline.
pub fn to_json(report: &Report) -> String {
    let mut s = serde_json::to_string_pretty(report).expect("reports serialize");
    s.push('\n');
    s
}
