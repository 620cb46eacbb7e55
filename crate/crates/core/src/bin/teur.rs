//! `teur`: grid scans of `M_s(θ, φ)` and bound-check sweeps.
//!
//! Exit codes: 0 success, 1 violation found by `check`, 2 usage error,
//! 3 I/O error.

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use clap::{Args, Parser, Subcommand};
use temporal_eur::scan::{self, CheckKind, ScanConfig};
use temporal_eur::spin::SpinLabel;
use temporal_eur::Error;

#[derive(Parser)]
#[command(
    name = "teur",
    version,
    about = "Entropic uncertainty with temporal memory"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Scan M_s over a (theta, phi) grid and write CSV or JSON.
    Scan(ScanArgs),
    /// Run a randomized bound check; exits 1 on any violation.
    Check(CheckArgs),
    /// Print the effective scan configuration as key=value lines.
    ShowConfig(ScanArgs),
}

#[derive(Args)]
struct ScanArgs {
    /// key=value file; flags override its settings.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Spin, e.g. 1/2, 1, 3/2.
    #[arg(long)]
    spin: Option<SpinLabel>,
    /// Grid points per axis.
    #[arg(long)]
    res: Option<usize>,
    /// min:max, e.g. 0:2pi.
    #[arg(long, allow_hyphen_values = true)]
    theta_range: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    phi_range: Option<String>,
    /// csv or json.
    #[arg(long)]
    format: Option<String>,
    /// Output file; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Worker threads; 0 reads TEUR_THREADS, then picks automatically.
    #[arg(long)]
    threads: Option<usize>,
}

#[derive(Args)]
struct CheckArgs {
    /// mu, berta or theorem.
    kind: String,
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    trials: Option<usize>,
    #[arg(long)]
    dim: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    threads: Option<usize>,
}

const USAGE: u8 = 2;
const IO: u8 = 3;

fn exit_for(err: &anyhow::Error) -> u8 {
    let io = err.chain().any(|e| {
        e.is::<std::io::Error>() || matches!(e.downcast_ref::<Error>(), Some(Error::Io(_)))
    });
    if io {
        IO
    } else {
        USAGE
    }
}

fn read_config(path: &PathBuf) -> anyhow::Result<Vec<(String, String)>> {
    let text =
        std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    Ok(scan::parse_key_values(&text)?)
}

fn scan_config(args: &ScanArgs) -> anyhow::Result<ScanConfig> {
    let mut cfg = ScanConfig::default();
    if let Some(path) = &args.config {
        for (k, v) in read_config(path)? {
            if ScanConfig::is_key(&k) {
                cfg.set(&k, &v)?;
            } else if !matches!(k.as_str(), "trials" | "dim" | "seed" | "kind") {
                anyhow::bail!(Error::Parse(format!(
                    "unknown setting {k:?} in {}",
                    path.display()
                )));
            }
        }
    }
    if let Some(spin) = args.spin {
        cfg.twice_s = spin.twice_s();
    }
    if let Some(res) = args.res {
        cfg.resolution = res;
    }
    if let Some(r) = &args.theta_range {
        cfg.set("theta_range", r)?;
    }
    if let Some(r) = &args.phi_range {
        cfg.set("phi_range", r)?;
    }
    if let Some(f) = &args.format {
        cfg.set("format", f)?;
    }
    if let Some(out) = &args.out {
        cfg.output = Some(out.clone());
    }
    if let Some(t) = args.threads {
        cfg.threads = t;
    }
    cfg.validate()?;
    Ok(cfg)
}

fn run_scan(args: &ScanArgs) -> anyhow::Result<u8> {
    let cfg = scan_config(args)?;
    let result = scan::run_scan(&cfg)?;
    scan::emit(&result, &cfg).with_context(|| match &cfg.output {
        Some(path) => format!("writing {}", path.display()),
        None => "writing to stdout".to_string(),
    })?;
    eprintln!(
        "spin={} resolution={} negative_fraction={:.6} min={:.12} at theta={:.6} phi={:.6}",
        cfg.spin()?,
        cfg.resolution,
        result.negative_fraction,
        result.min_value,
        result.argmin.0,
        result.argmin.1
    );
    Ok(0)
}

fn run_check(args: &CheckArgs) -> anyhow::Result<u8> {
    let kind: CheckKind = args.kind.parse()?;
    let (mut trials, mut dim, mut seed, mut threads) = (1000usize, 2usize, 0u64, 0usize);
    if let Some(path) = &args.config {
        for (k, v) in read_config(path)? {
            let parse_err = |e: std::num::ParseIntError| Error::InvalidConfig {
                field: "config",
                message: format!("{k}={v}: {e}"),
            };
            match k.as_str() {
                "trials" => trials = v.parse().map_err(parse_err)?,
                "dim" => dim = v.parse().map_err(parse_err)?,
                "seed" => seed = v.parse().map_err(parse_err)?,
                "threads" => threads = v.parse().map_err(parse_err)?,
                "kind" => {}
                _ if ScanConfig::is_key(&k) => {}
                _ => anyhow::bail!(Error::Parse(format!(
                    "unknown setting {k:?} in {}",
                    path.display()
                ))),
            }
        }
    }
    trials = args.trials.unwrap_or(trials);
    dim = args.dim.unwrap_or(dim);
    seed = args.seed.unwrap_or(seed);
    threads = args.threads.unwrap_or(threads);

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(scan::effective_threads(threads))
        .build()?;
    let summary = pool.install(|| scan::run_checks(kind, trials, dim, seed))?;
    println!("{summary}");
    Ok(summary.exit_code() as u8)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match &cli.command {
        Command::Scan(args) => run_scan(args),
        Command::Check(args) => run_check(args),
        Command::ShowConfig(args) => scan_config(args).map(|cfg| {
            print!("{}", cfg.to_key_values());
            0
        }),
    };
    match outcome {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            eprintln!("teur: {err:#}");
            ExitCode::from(exit_for(&err))
        }
    }
}
