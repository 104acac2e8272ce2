use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use gitstab::Mode;
use gitstab_cli::input::{parse_range, parse_rational};
use gitstab_cli::{run, to_json, CliError, Command, RunOptions};

#[derive(Parser)]
#[command(name = "gitstab", version, about = "Torus stability, VGIT walls and lct checks for tuples of hypersurfaces")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,

    #[arg(long, global = true, value_enum, default_value_t = ModeArg::Exact)]
    mode: ModeArg,

    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Seeded random coordinate changes tried by the destabilizer search.
    #[arg(long, global = true, default_value_t = 0)]
    random_transforms: usize,

    /// Scanned range of the scale along t, as `a/b:c/d`.
    #[arg(long, global = true)]
    t_range: Option<String>,

    /// Grid step `p/q` for the scan.
    #[arg(long, global = true)]
    t_grid: Option<String>,

    /// Worker threads; defaults to the number of CPUs.
    #[arg(long, global = true)]
    jobs: Option<usize>,

    #[arg(long, global = true)]
    output: Option<PathBuf>,

    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,

    /// Adds wall-clock time to the report (which makes it non-reproducible).
    #[arg(long, global = true)]
    timing: bool,

    /// Assert that every member of the tuple is smooth; skips the search.
    #[arg(long, global = true)]
    assume_smooth: bool,
}

#[derive(Subcommand)]
enum Cmd {
    /// Torus verdict, destabilizer search, VGIT and lct criteria.
    Analyze { input: PathBuf },
    /// Walls and a verdict table along a ray in t-space.
    VgitScan { input: PathBuf },
    /// Local lct of each generator at the listed points.
    Lct { input: PathBuf },
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Exact,
    Combinatorial,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Summary,
}

fn read_input(path: &PathBuf) -> Result<String, CliError> {
    let io = |source| CliError::Io { path: path.display().to_string(), source };
    if path.as_os_str() == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s).map_err(io)?;
        Ok(s)
    } else {
        std::fs::read_to_string(path).map_err(io)
    }
}

fn execute(cli: Cli) -> Result<(), CliError> {
    let opts = RunOptions {
        mode: match cli.mode {
            ModeArg::Exact => Mode::Exact,
            ModeArg::Combinatorial => Mode::Combinatorial,
        },
        seed: cli.seed,
        random_transforms: cli.random_transforms,
        t_range: cli.t_range.as_deref().map(parse_range).transpose()?,
        t_grid: cli.t_grid.as_deref().map(|s| parse_rational(s, "--t-grid")).transpose()?,
        assume_smooth: cli.assume_smooth,
    };
    let (command, path) = match &cli.command {
        Cmd::Analyze { input } => (Command::Analyze, input),
        Cmd::VgitScan { input } => (Command::VgitScan, input),
        Cmd::Lct { input } => (Command::Lct, input),
    };
    let text = read_input(path)?;

    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(j) = cli.jobs {
        if j == 0 {
            return Err(CliError::Input("--jobs: must be at least 1".into()));
        }
        builder = builder.num_threads(j);
    }
    let pool = builder.build().map_err(|e| CliError::Input(format!("--jobs: {e}")))?;
    let start = Instant::now();
    let report = pool.install(|| run(command, &text, &opts))?;
    let elapsed = start.elapsed().as_millis();

    let rendered = match cli.format {
        Format::Json if cli.timing => {
            let mut v = serde_json::to_value(&report).expect("reports serialize");
            v["timing_ms"] = serde_json::json!(elapsed);
            format!("{}\n", serde_json::to_string_pretty(&v).expect("value serializes"))
        }
        Format::Json => to_json(&report),
        Format::Summary if cli.timing => format!("{}time: {elapsed} ms\n", report.summary()),
        Format::Summary => report.summary(),
    };
    match &cli.output {
        Some(p) => std::fs::write(p, rendered).map_err(|source| CliError::Io { path: p.display().to_string(), source }),
        None => {
            print!("{rendered}");
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
