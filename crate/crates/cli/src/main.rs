//! Command-line front end tying surface specs, scans, estimates, and bound
//! tables together with reproducible file outputs.
//!
//! Exit codes: 0 success, 2 input/validation failure, 3 missing prerequisite
//! data (cache miss under --no-scan), 4 internal assertion failure.

mod selftest;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Deserialize;

use ellrank_core::error::Error;
use ellrank_core::orbits::{
    gcd_identity_check, glr_orbit_count, orbit_average_estimate, FiniteAction, GlMethod,
};
use ellrank_core::rank::rank_report;
use ellrank_core::report::{
    render_conductor, render_rank, render_scan, render_torsion, render_tower, OutputFormat,
};
use ellrank_core::surface::{conductor, load_spec, SurfaceSpec};
use ellrank_core::tower::tower_table;
use ellrank_core::trace::{michel_slack, scan, scan_cached_only, ScanCache};

#[derive(Parser)]
#[command(
    name = "ellrank",
    version,
    about = "Rank-bound machinery for elliptic surfaces: exact conductors, fiber-trace scans, Nagao estimates, orbit counts, tower bounds"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct ScanOpts {
    /// Scan primes p <= pmax (p >= 5, p outside S)
    #[arg(long)]
    pmax: u64,
    /// Worker pool width; output is byte-identical for any value
    #[arg(long, default_value_t = 1)]
    workers: usize,
    /// Append-only scan cache file, bound to the surface hash
    #[arg(long)]
    cache: Option<PathBuf>,
    /// Use cached records only; exit 3 on a miss
    #[arg(long)]
    no_scan: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Exact conductor degree |N| and per-place classification
    Conductor {
        spec: PathBuf,
        #[arg(long, default_value = "table")]
        format: OutputFormat,
    },
    /// Fiber-trace scan: exact s_p per prime plus the Deligne-Michel slack summary
    ApScan {
        spec: PathBuf,
        #[command(flatten)]
        scan: ScanOpts,
        #[arg(long, default_value = "table")]
        format: OutputFormat,
    },
    /// Truncated Nagao rank estimates against the geometric bound
    Nagao {
        spec: PathBuf,
        #[command(flatten)]
        scan: ScanOpts,
        /// Report cutoffs X as a comma list, e.g. 100,500,1000 (default: pmax)
        #[arg(long, value_delimiter = ',')]
        cutoffs: Option<Vec<u64>>,
        #[arg(long, default_value = "table")]
        format: OutputFormat,
    },
    /// Per-level tower table: orbit estimate, d(n), |N(E_n)|, and the bounds
    Tower {
        spec: PathBuf,
        /// Single tower level
        #[arg(long, conflicts_with = "n_range")]
        n: Option<u32>,
        /// Inclusive level range a..b
        #[arg(long)]
        n_range: Option<String>,
        /// Serre-mode index bound I (adds the I * d(n) * |N| column)
        #[arg(long)]
        index_bound: Option<u64>,
        #[command(flatten)]
        scan: ScanOpts,
        #[arg(long, default_value = "table")]
        format: OutputFormat,
    },
    /// Orbit counting
    Orbits {
        #[command(subcommand)]
        command: OrbitsCommand,
    },
    /// Exact arithmetic identities
    Identity {
        #[command(subcommand)]
        command: IdentityCommand,
    },
    /// Run the built-in oracle suite (CI entry point)
    Selftest,
}

#[derive(Subcommand)]
enum OrbitsCommand {
    /// Orbits of GL_2(Z/nZ) on (Z/nZ)^2: d(n), or brute-force enumeration
    Gl2 {
        #[arg(long)]
        n: u64,
        /// Enumerate the full matrix action instead of using d(n)
        #[arg(long)]
        brute: bool,
    },
    /// Orbit count of an explicit action from JSON {"set_size": k, "elements": [[..], ..]}
    Burnside {
        #[arg(long)]
        file: PathBuf,
    },
    /// Chebotarev sampling of h0 = |C0[n](F_p)| on the spec's base curve
    Average {
        spec: PathBuf,
        #[arg(long)]
        n: u32,
        #[arg(long)]
        pmax: u64,
        #[arg(long, default_value = "csv")]
        format: OutputFormat,
    },
}

#[derive(Subcommand)]
enum IdentityCommand {
    /// Check sum over units of gcd(a-1, n) = d(n) phi(n) for all n <= nmax
    Gcd {
        #[arg(long)]
        nmax: u64,
    },
}

#[derive(Deserialize)]
struct ActionFile {
    set_size: usize,
    elements: Vec<Vec<usize>>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    std::panic::set_hook(Box::new(|info| {
        eprintln!("internal assertion failed: {info}");
    }));
    match std::panic::catch_unwind(|| run(cli)) {
        Ok(Ok(())) => ExitCode::SUCCESS,
        Ok(Err(err)) => {
            eprintln!("error: {err}");
            match err {
                Error::CacheMiss => ExitCode::from(3),
                _ => ExitCode::from(2),
            }
        }
        Err(_) => ExitCode::from(4),
    }
}

fn open_cache(path: &Option<PathBuf>, spec: &SurfaceSpec) -> Result<Option<ScanCache>, Error> {
    match path {
        Some(p) => Ok(Some(ScanCache::open(p, &spec.content_hash())?)),
        None => Ok(None),
    }
}

fn load(path: &Path) -> Result<SurfaceSpec, Error> {
    load_spec(path)
}

fn scan_records(
    spec: &SurfaceSpec,
    n: u32,
    opts: &ScanOpts,
) -> Result<Vec<ellrank_core::trace::TowerTraceRecord>, Error> {
    let mut cache = open_cache(&opts.cache, spec)?;
    if opts.no_scan {
        let cache = cache.as_ref().ok_or(Error::CacheMiss)?;
        scan_cached_only(spec, n, opts.pmax, cache)
    } else {
        scan(spec, n, opts.pmax, opts.workers, cache.as_mut())
    }
}

fn run(cli: Cli) -> Result<(), Error> {
    match cli.command {
        Command::Conductor { spec, format } => {
            let spec = load(&spec)?;
            let report = conductor(&spec)?;
            print!("{}", render_conductor(&spec, &report, format));
        }
        Command::ApScan { spec, scan, format } => {
            let spec = load(&spec)?;
            let records = scan_records(&spec, 1, &scan)?;
            // slack summary needs the exact conductor; skip it when the
            // surface only supports scanning
            let michel = conductor(&spec)
                .ok()
                .map(|c| michel_slack(&records, c.geometric_bound));
            print!("{}", render_scan(&spec, &records, michel.as_ref(), format));
        }
        Command::Nagao {
            spec,
            scan,
            cutoffs,
            format,
        } => {
            let spec = load(&spec)?;
            let records = scan_records(&spec, 1, &scan)?;
            let report = conductor(&spec)?;
            let cutoffs = cutoffs.unwrap_or_else(|| vec![scan.pmax]);
            let sections = (!spec.sections.is_empty()).then_some(spec.sections.len() as u64);
            let rank = rank_report(
                &records,
                &cutoffs,
                report.geometric_bound,
                None,
                sections,
            )?;
            print!("{}", render_rank(&spec, &rank, format));
        }
        Command::Tower {
            spec,
            n,
            n_range,
            index_bound,
            scan,
            format,
        } => {
            let spec = load(&spec)?;
            let range = match (n, n_range) {
                (Some(n), None) => n..=n,
                (None, Some(range)) => parse_range(&range)?,
                (None, None) => 1..=2,
                (Some(_), Some(_)) => unreachable!("clap conflicts_with"),
            };
            let mut cache = open_cache(&scan.cache, &spec)?;
            let rows = tower_table(
                &spec,
                range,
                scan.pmax,
                index_bound,
                scan.workers,
                cache.as_mut(),
            )?;
            print!("{}", render_tower(&spec, &rows, format));
        }
        Command::Orbits { command } => run_orbits(command)?,
        Command::Identity {
            command: IdentityCommand::Gcd { nmax },
        } => {
            for n in 1..=nmax {
                let check = gcd_identity_check(n)?;
                assert!(
                    check.equal,
                    "identity failed at n = {n}: {} != {}",
                    check.lhs, check.rhs
                );
            }
            println!("{nmax} passes");
        }
        Command::Selftest => selftest::run()?,
    }
    Ok(())
}

fn run_orbits(command: OrbitsCommand) -> Result<(), Error> {
    match command {
        OrbitsCommand::Gl2 { n, brute } => {
            let method = if brute { GlMethod::Brute } else { GlMethod::Formula };
            let count = glr_orbit_count(n, 2, method)?;
            let label = if brute { "brute" } else { "formula" };
            println!("n={n} r=2 method={label} orbits={count}");
        }
        OrbitsCommand::Burnside { file } => {
            let text = std::fs::read_to_string(&file)?;
            let action: ActionFile =
                serde_json::from_str(&text).map_err(|e| Error::SpecParse(e.to_string()))?;
            let action = FiniteAction::new(action.set_size, action.elements)?;
            println!(
                "set_size={} group_order={} orbits={}",
                action.set_size(),
                action.order(),
                action.burnside_orbit_count()
            );
        }
        OrbitsCommand::Average {
            spec,
            n,
            pmax,
            format,
        } => {
            let spec = load(&spec)?;
            let report = orbit_average_estimate(&spec.base, n, pmax)?;
            print!("{}", render_torsion(&report, format));
        }
    }
    Ok(())
}

fn parse_range(text: &str) -> Result<std::ops::RangeInclusive<u32>, Error> {
    let bad = || Error::SpecParse(format!("invalid level range `{text}` (expected a..b)"));
    let (lo, hi) = text.split_once("..").ok_or_else(bad)?;
    let lo: u32 = lo.trim().parse().map_err(|_| bad())?;
    let hi: u32 = hi.trim().parse().map_err(|_| bad())?;
    if lo == 0 || hi < lo {
        return Err(bad());
    }
    Ok(lo..=hi)
}
