use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use dunkl_spectral_cli::config::{Command, FieldError, RunConfig};
use dunkl_spectral_cli::{commands, manifest};

const EXIT_RUNTIME: u8 = 1;
const EXIT_CONFIG: u8 = 2;
const EXIT_FLAGGED: u8 = 3;

#[derive(Parser)]
#[command(
    name = "dunkl-spectral",
    version,
    about = "Dunkl transforms, oscillating multipliers and their maximal functions"
)]
struct Cli {
    /// TOML run config; absent fields take their defaults.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output directory; overrides `output` in the config.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Overrides `seed` in the config.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Worker threads.
    #[arg(long, global = true, env = "DUNKL_SPECTRAL_THREADS")]
    threads: Option<usize>,
    /// Exit 0 even when a frequency guard was tripped.
    #[arg(long, global = true)]
    allow_flagged: bool,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand, Clone, Copy)]
enum Cmd {
    /// Forward or inverse Dunkl transform of a built-in profile.
    Transform,
    /// Kernel of the oscillating multiplier near the unit sphere.
    Kernel,
    /// Wave propagation and the energy ledger.
    Wave,
    /// Maximal function over a time window.
    Maximal,
    /// Threshold map of a theorem over a (1/p, α) grid.
    Probe,
}

impl Cmd {
    fn command(self) -> Command {
        match self {
            Cmd::Transform => Command::Transform,
            Cmd::Kernel => Command::Kernel,
            Cmd::Wave => Command::Wave,
            Cmd::Maximal => Command::Maximal,
            Cmd::Probe => Command::Probe,
        }
    }

    fn name(self) -> &'static str {
        match self {
            Cmd::Transform => "transform",
            Cmd::Kernel => "kernel",
            Cmd::Wave => "wave",
            Cmd::Maximal => "maximal",
            Cmd::Probe => "probe",
        }
    }
}

fn config_error(errs: &[FieldError]) -> ExitCode {
    for e in errs {
        eprintln!("config error: {e}");
    }
    ExitCode::from(EXIT_CONFIG)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut cfg = match &cli.config {
        Some(path) => match fs::read_to_string(path) {
            Ok(text) => match RunConfig::parse(&text) {
                Ok(c) => c,
                Err(errs) => return config_error(&errs),
            },
            Err(e) => {
                return config_error(&[FieldError::new(
                    "--config",
                    format!("{}: {e}", path.display()),
                )])
            }
        },
        None => RunConfig::default(),
    };
    if let Some(seed) = cli.seed {
        cfg.seed = seed;
    }
    if let Some(out) = &cli.out {
        cfg.output = out.to_string_lossy().into_owned();
    }
    let errs = cfg.validate(cli.cmd.command());
    if !errs.is_empty() {
        return config_error(&errs);
    }
    if cli.threads == Some(0) {
        return config_error(&[FieldError::new("--threads", "must be ≥ 1")]);
    }
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
        {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_RUNTIME);
        }
    }

    let dir = PathBuf::from(&cfg.output);
    let run = || -> anyhow::Result<commands::Outcome> {
        fs::create_dir_all(&dir)?;
        fs::write(dir.join("config.toml"), cfg.to_toml())?;
        let outcome = commands::run(cli.cmd.command(), &cfg, &dir)?;
        manifest::write(
            &dir,
            cli.cmd.name(),
            "config.toml".as_ref(),
            cli.config.as_deref(),
            cli.threads,
            cli.allow_flagged,
            &outcome.flags,
            &outcome.files,
        )?;
        Ok(outcome)
    };
    let outcome = match run() {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e:#}");
            return ExitCode::from(EXIT_RUNTIME);
        }
    };
    for line in &outcome.summary {
        println!("{line}");
    }
    println!(
        "wrote {} files to {}",
        outcome.files.len() + 2,
        dir.display()
    );
    for f in &outcome.flags {
        eprintln!("flagged: {f}");
    }
    if !outcome.flags.is_empty() && !cli.allow_flagged {
        eprintln!("guard flags raised; rerun with --allow-flagged to accept");
        return ExitCode::from(EXIT_FLAGGED);
    }
    ExitCode::SUCCESS
}
