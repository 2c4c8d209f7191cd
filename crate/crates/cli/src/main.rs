mod commands;
mod config;
mod error;
mod output;
mod words;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand};

use commands::constructions::{CopyCheck, DeltaBuild, FcClass, Plateau};
use commands::couple::{Couple, CoupleExit, CoupleFc, NonNormalDemo};
use commands::harmonic::{DaEnergy, DaHarmonic, EtaCheck, Growth, HarmonicVerify, Voltage, ZwzCocycle};
use commands::walk::{Convolve, SnDelta, Tv, WalkSpeed};
use commands::Command;
use config::FileConfig;
use error::CliError;
use output::RunInfo;

#[derive(Debug, Parser)]
#[command(name = "lampwalk", version, about = "Random walk, coupling and harmonic-cocycle experiments")]
struct Cli {
    /// TOML file with `out-dir`, `threads` and one table per subcommand
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output directory (default `out`)
    #[arg(long, global = true, env = "LAMPWALK_OUT_DIR")]
    out_dir: Option<PathBuf>,
    /// Worker threads for Monte Carlo runs
    #[arg(long, global = true, env = "LAMPWALK_THREADS")]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Debug, Subcommand)]
enum Cmd {
    WalkSpeed(WalkSpeed),
    Convolve(Convolve),
    Tv(Tv),
    SnDelta(SnDelta),
    Couple(Couple),
    CoupleExit(CoupleExit),
    CoupleFc(CoupleFc),
    NonNormalDemo(NonNormalDemo),
    HarmonicVerify(HarmonicVerify),
    DaHarmonic(DaHarmonic),
    DaEnergy(DaEnergy),
    Voltage(Voltage),
    EtaCheck(EtaCheck),
    ZwzCocycle(ZwzCocycle),
    Growth(Growth),
    DeltaBuild(DeltaBuild),
    FcClass(FcClass),
    CopyCheck(CopyCheck),
    Plateau(Plateau),
    /// Lists the named presets
    ListPresets,
}

struct Env {
    file: FileConfig,
    out_dir: PathBuf,
    threads: usize,
}

fn run_cmd<C: Command>(flags: &C, env: &Env) -> Result<bool, CliError> {
    let mut cmd: C = config::merge(C::NAME, env.file.sections.get(C::NAME), flags)?;
    cmd.fill_defaults();
    let params = config::to_table(&cmd);
    let hash = config::config_hash(C::NAME, &cmd);
    let start = Instant::now();
    let report = cmd.execute()?;
    let info = RunInfo {
        command: C::NAME,
        config_hash: &hash,
        rng: lampwalk::walk::RNG_ID,
        params: &params,
        threads: env.threads,
        wall: start.elapsed(),
    };
    let paths = output::write_all(&env.out_dir, &info, &report)?;
    for line in &report.summary {
        println!("{line}");
    }
    for p in &paths {
        println!("wrote {}", p.display());
    }
    if let Some(v) = &report.violation {
        eprintln!("invariant violation: {v}");
        return Ok(false);
    }
    Ok(true)
}

fn list_presets() {
    let presets = lampwalk::presets::PRESETS;
    let w = presets.iter().map(|p| p.name.len()).max().unwrap_or(4);
    let t = presets.iter().map(|p| p.topic.len()).max().unwrap_or(5);
    println!("{:w$} | {:t$} | summary", "name", "topic");
    for p in presets {
        println!("{:w$} | {:t$} | {}", p.name, p.topic, p.summary);
    }
}

fn run(cli: Cli) -> Result<bool, CliError> {
    let file = match &cli.config {
        Some(path) => FileConfig::load(path, commands::NAMES)?,
        None => FileConfig::default(),
    };
    let out_dir = cli.out_dir.clone().or_else(|| file.out_dir.clone()).unwrap_or_else(|| "out".into());
    let threads = cli.threads.or(file.threads);
    if threads == Some(0) {
        return Err(CliError::Config("threads must be positive".into()));
    }
    if let Some(n) = threads {
        // Only fails when a pool already exists, which cannot happen here.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    let env = Env {
        file,
        out_dir,
        threads: rayon::current_num_threads(),
    };
    match &cli.command {
        Cmd::WalkSpeed(c) => run_cmd(c, &env),
        Cmd::Convolve(c) => run_cmd(c, &env),
        Cmd::Tv(c) => run_cmd(c, &env),
        Cmd::SnDelta(c) => run_cmd(c, &env),
        Cmd::Couple(c) => run_cmd(c, &env),
        Cmd::CoupleExit(c) => run_cmd(c, &env),
        Cmd::CoupleFc(c) => run_cmd(c, &env),
        Cmd::NonNormalDemo(c) => run_cmd(c, &env),
        Cmd::HarmonicVerify(c) => run_cmd(c, &env),
        Cmd::DaHarmonic(c) => run_cmd(c, &env),
        Cmd::DaEnergy(c) => run_cmd(c, &env),
        Cmd::Voltage(c) => run_cmd(c, &env),
        Cmd::EtaCheck(c) => run_cmd(c, &env),
        Cmd::ZwzCocycle(c) => run_cmd(c, &env),
        Cmd::Growth(c) => run_cmd(c, &env),
        Cmd::DeltaBuild(c) => run_cmd(c, &env),
        Cmd::FcClass(c) => run_cmd(c, &env),
        Cmd::CopyCheck(c) => run_cmd(c, &env),
        Cmd::Plateau(c) => run_cmd(c, &env),
        Cmd::ListPresets => {
            list_presets();
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(4),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
