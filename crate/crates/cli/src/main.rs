use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Parser, Subcommand};
use streammatch::bench::{self, ExperimentConfig, Format, InstanceSpec, ParamOverrides};
use streammatch::exact::{max_matching_bipartite, max_matching_general};
use streammatch::generators::{load_edgelist, write_edgelist};
use streammatch::{Preset, Registry};

#[derive(Parser)]
#[command(
    name = "streammatch",
    version,
    about = "Random-order streaming matching experiments"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run seeded trials of one algorithm on one instance.
    Run(RunArgs),
    /// Write an instance in edge-list format.
    Gen {
        /// konrad:<n> | planted:<n>,<p> | gnp:<n>,<p>
        #[arg(long)]
        instance: InstanceSpec,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Output file; stdout if omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print the maximum matching size of an edge-list file.
    Oracle { path: PathBuf },
}

#[derive(clap::Args)]
struct RunArgs {
    /// greedy | bm-barg | bm-farg | gm | gm-barg
    #[arg(long)]
    algo: String,
    /// konrad:<n> | planted:<n>,<p> | gnp:<n>,<p> | file:<path>
    #[arg(long)]
    instance: InstanceSpec,
    #[arg(long, default_value_t = 1)]
    trials: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value = "practical")]
    preset: Preset,
    #[arg(long)]
    tau: Option<f64>,
    #[arg(long)]
    threshold: Option<f64>,
    #[arg(long)]
    depth: Option<usize>,
    #[arg(long)]
    prefix: Option<f64>,
    /// Edge budget; runs above it are flagged, not truncated.
    #[arg(long)]
    budget: Option<usize>,
    #[arg(long)]
    diagnostics: bool,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, default_value = "json")]
    format: Format,
}

fn run(args: RunArgs) -> anyhow::Result<()> {
    let registry = Registry::default();
    let config = ExperimentConfig {
        instance: args.instance,
        algorithm: args.algo,
        preset: args.preset,
        overrides: ParamOverrides {
            tau: args.tau,
            threshold: args.threshold,
            depth: args.depth,
            prefix: args.prefix,
        },
        trials: args.trials,
        base_seed: args.seed,
        budget: args.budget,
        diagnostics: args.diagnostics,
    };
    let report = bench::run(&config, &registry)?;
    bench::emit(&report, args.format, args.out.as_deref())
        .with_context(|| format!("writing report to {:?}", args.out))?;
    if report.aggregates.failed_trials == report.aggregates.trials {
        bail!(
            "every trial failed; first error: {}",
            report.records[0].flags.join("; ")
        );
    }
    Ok(())
}

fn gen(instance: InstanceSpec, seed: u64, out: Option<PathBuf>) -> anyhow::Result<()> {
    if let InstanceSpec::File { .. } = instance {
        bail!("gen needs a generator instance, not a file");
    }
    let g = instance.build(seed)?;
    match out {
        Some(p) => {
            let f =
                std::fs::File::create(&p).with_context(|| format!("creating {}", p.display()))?;
            write_edgelist(&g, std::io::BufWriter::new(f))?;
        }
        None => write_edgelist(&g, std::io::stdout().lock())?,
    }
    Ok(())
}

fn oracle(path: PathBuf) -> anyhow::Result<()> {
    let g = load_edgelist(&path)?;
    let mu = match g.bipartition() {
        Some(b) => max_matching_bipartite(g.n(), g.edges(), b)?.len(),
        None => max_matching_general(g.n(), g.edges()).len(),
    };
    writeln!(std::io::stdout(), "{mu}")?;
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let res = match cli.command {
        Command::Run(args) => run(args),
        Command::Gen {
            instance,
            seed,
            out,
        } => gen(instance, seed, out),
        Command::Oracle { path } => oracle(path),
    };
    match res {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            log::error!("{e:#}");
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
