use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use acl_core::Caps;
use acl_harness::generate::{generate, Kind, Params};
use acl_harness::instance::{load, save};
use acl_harness::oracle::{brute_oracle, Which};
use acl_harness::suite::{run_suite, Suite};
use acl_harness::{analyze, Analysis, Options, Report};
use clap::{Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(name = "acl", version, about = "Sensitivity and colocalization analyses of structured finite flows")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Run one analysis on an instance file.
    Analyze {
        file: PathBuf,
        #[arg(long, value_parser = parse_with::<Analysis>)]
        analysis: Analysis,
        #[arg(long)]
        t_cap: Option<u64>,
        #[arg(long)]
        depth_cap: Option<usize>,
        #[arg(long)]
        scale: Option<f64>,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Run a theorem suite; exits 1 when violations are found.
    Suite {
        #[arg(value_parser = parse_with::<Suite>)]
        name: Suite,
        #[arg(long)]
        budget: usize,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        falsify: bool,
    },
    /// Write a generated instance.
    Generate {
        #[arg(value_parser = parse_with::<Kind>)]
        kind: Kind,
        #[arg(long, default_value_t = 8)]
        n: usize,
        #[arg(long, default_value_t = 1)]
        k: usize,
        #[arg(long)]
        sets: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(short = 'o', long = "output")]
        output: PathBuf,
    },
    /// Exhaustive ground truth on a small instance.
    Oracle {
        file: PathBuf,
        #[arg(long, value_parser = parse_with::<Which>)]
        which: Which,
    },
}

fn parse_with<T: std::str::FromStr<Err = acl_harness::HarnessError>>(s: &str) -> Result<T, String> {
    s.parse().map_err(|e: acl_harness::HarnessError| e.to_string())
}

fn print(report: &Report, format: Format) {
    match format {
        Format::Json => print!("{}", report.canonical_json()),
        Format::Csv => print!("{}", report.to_csv()),
    }
}

fn run(cli: Cli) -> acl_harness::Result<u8> {
    let start = Instant::now();
    let report = match cli.command {
        Command::Analyze { file, analysis, t_cap, depth_cap, scale, format } => {
            let inst = load(&file)?;
            let defaults = Caps::default();
            let caps = Caps {
                t_cap: t_cap.unwrap_or(defaults.t_cap),
                depth_cap: depth_cap.unwrap_or(defaults.depth_cap),
                ..defaults
            };
            let report = analyze(&inst, analysis, &Options { caps, scale })?;
            print(&report, format);
            report
        }
        Command::Suite { name, budget, seed, falsify } => {
            let report = run_suite(name, budget, seed, falsify)?;
            print(&report, Format::Json);
            report
        }
        Command::Generate { kind, n, k, sets, seed, output } => {
            let inst = generate(kind, &Params { n, k, sets, seed })?;
            save(&inst, &output)?;
            eprintln!("wrote {}", output.display());
            return Ok(0);
        }
        Command::Oracle { file, which } => {
            let inst = load(&file)?;
            let report = brute_oracle(&inst.system, which, &inst.labels)?;
            print(&report, Format::Json);
            report
        }
    };
    eprintln!("{} in {:.1} ms", report.analysis, start.elapsed().as_secs_f64() * 1e3);
    Ok(u8::from(report.violations > 0))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
