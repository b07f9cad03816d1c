use std::fs::{self, File};
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand};
use hamtg_core::liftbasis::DEFAULT_MAX_ORDER;
use hamtg_core::timegraph::OracleCaps;
use serde::Serialize;

use hamtg::cache::BasisCache;
use hamtg::campaign::{parse_records, replay, run_campaign, CampaignConfig, ModeRecord};
use hamtg::commands;
use hamtg::crossval::{run_crossval, CrossvalSource};
use hamtg::formats::{parse_graph, parse_time_graph, write_time_graph};

/// Time-graph indicator vectors, the GF(2) Hamiltonian path solver and its
/// conjecture harness.
///
/// `solve` exits with 10 when the system is consistent and 11 when it is
/// not. Other commands exit with 0 on success and 1 on error.
#[derive(Parser)]
#[command(name = "hamtg", version)]
struct Cli {
    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Directory for cached bases (also read from HAMTG_CACHE_DIR).
    #[arg(long, global = true)]
    cache_dir: Option<PathBuf>,

    /// Largest order for which bases of H_P^n are built. Memory grows as
    /// n^6 per vector, so orders above 6 are impractical.
    #[arg(long, global = true, default_value_t = DEFAULT_MAX_ORDER)]
    max_order: usize,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Reduce a graph file to its time-graph.
    Reduce {
        graph: PathBuf,
        /// Emit the plain-text time-graph format instead of JSON.
        #[arg(long)]
        text: bool,
    },
    /// Run the brute-force Hamiltonian path oracle on a graph file.
    Oracle { graph: PathBuf },
    /// Print the lifted basis of H_P^n.
    Basis {
        #[arg(long)]
        order: usize,
    },
    /// Tabulate |E(n)|, dim H^n, dim H_P^n and the lifted basis size.
    Dim {
        #[arg(long)]
        max: usize,
    },
    /// Decide a graph file with the linear system.
    Solve {
        graph: PathBuf,
        /// Also run the brute-force oracle and flag disagreements.
        #[arg(long)]
        oracle: bool,
    },
    /// Build the canonical basis for a time-graph file.
    Canonical {
        time_graph: PathBuf,
        /// Complement enumeration as comma separated edge indices.
        #[arg(long, value_delimiter = ',')]
        order: Option<Vec<usize>>,
        /// Shuffle permutations within each layer with this seed.
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Run a seeded conjecture campaign, writing JSON lines.
    Conjectures(ConjectureArgs),
    /// Re-run every report of a campaign output file.
    Replay { reports: PathBuf },
    /// Compare the solver with the oracle on many graphs.
    Crossval(CrossvalArgs),
}

#[derive(Args)]
struct ConjectureArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    trials: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Check only this conjecture.
    #[arg(long, value_parser = clap::value_parser!(u8).range(1..=2))]
    conjecture: Option<u8>,
    /// Enumeration and basis-order choices per trial.
    #[arg(long, default_value_t = 1)]
    orders: usize,
    /// Check the second conjecture layer by layer instead of at the top layer only.
    #[arg(long)]
    descent: bool,
    /// Record per-instance timings (makes output nondeterministic).
    #[arg(long)]
    timing: bool,
}

#[derive(Args)]
struct CrossvalArgs {
    #[arg(long)]
    n: usize,
    #[arg(long, conflicts_with = "random")]
    exhaustive: bool,
    /// Number of random graphs.
    #[arg(long)]
    random: Option<usize>,
    #[arg(long, default_value_t = 42)]
    seed: u64,
}

fn writer(out: Option<&Path>) -> anyhow::Result<Box<dyn Write>> {
    Ok(match out {
        Some(path) => Box::new(BufWriter::new(
            File::create(path).with_context(|| format!("creating {}", path.display()))?,
        )),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn emit(out: Option<&Path>, doc: &impl Serialize) -> anyhow::Result<()> {
    let mut w = writer(out)?;
    serde_json::to_writer_pretty(&mut w, doc)?;
    writeln!(w)?;
    w.flush()?;
    Ok(())
}

fn read(path: &Path) -> anyhow::Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn run(cli: Cli) -> anyhow::Result<ExitCode> {
    let out = cli.out.as_deref();
    let caps = OracleCaps::default();
    let mut cache = BasisCache::from_env(cli.cache_dir.clone(), cli.max_order);
    match cli.command {
        Command::Reduce { graph, text } => {
            let g = parse_graph(&read(&graph)?)?;
            if text {
                let mut w = writer(out)?;
                w.write_all(write_time_graph(&hamtg_core::timegraph::reduce_hamp(&g)).as_bytes())?;
                w.flush()?;
            } else {
                emit(out, &commands::reduce(&g))?;
            }
        }
        Command::Oracle { graph } => {
            let g = parse_graph(&read(&graph)?)?;
            emit(out, &commands::oracle(&g, &caps)?)?;
        }
        Command::Basis { order } => emit(out, &commands::basis(order, &mut cache)?)?,
        Command::Dim { max } => emit(out, &commands::dimensions(max, cli.max_order)?)?,
        Command::Solve { graph, oracle } => {
            let g = parse_graph(&read(&graph)?)?;
            let report = commands::solve(&g, &mut cache, oracle, &caps)?;
            emit(out, &report)?;
            return Ok(ExitCode::from(report.exit_code() as u8));
        }
        Command::Canonical {
            time_graph,
            order,
            seed,
        } => {
            let tg = parse_time_graph(&read(&time_graph)?)?;
            emit(out, &commands::canonical(&tg, order, seed, &caps)?)?;
        }
        Command::Conjectures(args) => {
            let config = CampaignConfig {
                n: args.n,
                trials: args.trials,
                seed: args.seed,
                conjecture: args.conjecture,
                orders: args.orders,
                mode: if args.descent {
                    ModeRecord::Descent
                } else {
                    ModeRecord::TopLayer
                },
                timing: args.timing,
            };
            let mut w = writer(out)?;
            run_campaign(&config, &mut cache, &caps, |record| {
                serde_json::to_writer(&mut w, record)?;
                writeln!(w).map_err(|e| hamtg::HarnessError::io("output", e))?;
                Ok(())
            })?;
            w.flush()?;
        }
        Command::Replay { reports } => {
            let (records, _) = parse_records(&read(&reports)?)?;
            let summary = replay(&records, &mut cache, &caps)?;
            emit(out, &summary)?;
            if !summary.mismatches.is_empty() {
                bail!("{} reports did not replay", summary.mismatches.len());
            }
        }
        Command::Crossval(args) => {
            let source = match (args.exhaustive, args.random) {
                (_, Some(count)) => CrossvalSource::Random {
                    count,
                    seed: args.seed,
                },
                _ => CrossvalSource::Exhaustive,
            };
            emit(out, &run_crossval(args.n, source, &mut cache, &caps)?)?;
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
