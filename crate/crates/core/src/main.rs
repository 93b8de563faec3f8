use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use k2modsym::harness::{
    default_suite, emit_report, run_checks, Backend, CheckKind, CheckSpec, CuspMode, Workspace, DEFAULT_SEED,
    DEFAULT_TRIALS,
};
use k2modsym::modsym::{CuspSelector, PresentationRecord};
use k2modsym::par;

#[derive(Parser)]
#[command(name = "k2modsym", version, about = "Modular symbols and cyclotomic K_2 verification")]
struct Cli {
    /// Cache directory (defaults to $K2MODSYM_CACHE_DIR).
    #[arg(long, global = true)]
    cache_dir: Option<PathBuf>,
    /// Run without the thread pool.
    #[arg(long, global = true)]
    sequential: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the presentation of H_1(X_1(M), cusps, Z).
    Present {
        #[arg(long = "M")]
        m: u64,
        #[arg(long, default_value = "all")]
        cusps: CuspSelector,
        /// Write to a file instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run one check and write report.json and summary.txt.
    Verify {
        kind: CheckKind,
        #[arg(long = "M")]
        m: u64,
        #[arg(long)]
        p: Option<u64>,
        #[arg(long)]
        l: Option<u64>,
        #[arg(long, default_value = "orbit")]
        cusps: CuspMode,
        #[arg(long, default_value_t = DEFAULT_TRIALS)]
        trials: usize,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long, default_value = "tame")]
        backend: Backend,
        #[arg(long, default_value = ".")]
        out_dir: PathBuf,
    },
    /// Run the standard suite.
    Suite {
        #[arg(long, default_value = "both")]
        backend: Backend,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long, default_value = ".")]
        out_dir: PathBuf,
    },
}

fn run(cli: Cli) -> k2modsym::Result<bool> {
    par::set_parallel(!cli.sequential);
    let ws = Workspace::from_env(cli.cache_dir);
    let (specs, out_dir) = match cli.command {
        Command::Present { m, cusps, out } => {
            let pres = ws.presentation(m)?;
            let text = PresentationRecord::new(&pres, cusps)?.to_text();
            match out {
                Some(path) => std::fs::write(path, text)?,
                None => print!("{text}"),
            }
            return Ok(true);
        }
        Command::Verify { kind, m, p, l, cusps, trials, seed, backend, out_dir } => {
            let spec = CheckSpec { kind, level: m, p, ell: l, cusps, trials, seed, backend };
            (vec![spec], out_dir)
        }
        Command::Suite { backend, seed, out_dir } => (default_suite(backend, seed), out_dir),
    };
    let report = run_checks(&ws, &specs);
    let (json, txt) = emit_report(&report, &out_dir)?;
    print!("{}", report.summary());
    eprintln!("wrote {} and {}", json.display(), txt.display());
    Ok(report.pass)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
