use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use pram_cc::cc::Profile;
use pram_cc::forest::{parse_forest, write_forest};
use pram_cc::graph::{parse_graph, parse_labels, write_graph, write_labels, Graph};
use pram_cc::harness::{
    run_experiment, run_one, verify_forest_edges, verify_labels, write_csv, Algo, ExperimentConfig,
    GraphSpec, RunOutput, RunResult,
};
use pram_cc::pram::WritePolicy;

#[derive(Parser)]
#[command(
    name = "pramcc",
    version,
    about = "Simulated PRAM connectivity algorithms: generate, run, verify"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write a generated graph in edge-list format.
    Gen {
        /// Graph spec, e.g. `path:n=64` or `er:n=500,m=2000`.
        #[arg(long)]
        spec: String,
        /// Seed for the random families.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run an algorithm over specs, seeds and policies; print one CSV row per run.
    Run(RunArgs),
    /// Check a labelling or a forest against the connected components of a graph.
    Verify {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long, required_unless_present = "forest", conflicts_with = "forest")]
        labels: Option<PathBuf>,
        #[arg(long)]
        forest: Option<PathBuf>,
    },
}

#[derive(Args)]
struct RunArgs {
    /// vanilla, cc, sf or fastcc.
    #[arg(long, value_parser = parse_algo)]
    algo: Algo,
    /// Graph spec; repeat the flag for several.
    #[arg(long = "spec")]
    specs: Vec<String>,
    /// Edge-list file to run on instead of generated specs.
    #[arg(long, conflicts_with = "specs")]
    graph: Option<PathBuf>,
    /// Seeds as a list and/or half-open ranges, e.g. `1,2,3` or `0..50`.
    #[arg(long, default_value = "0", value_parser = parse_seeds)]
    seeds: Seeds,
    /// Write policies: any of low, high, random, comma separated.
    #[arg(long, default_value = "low", value_parser = parse_policies)]
    policy: Policies,
    #[arg(long, default_value = "desk", value_parser = parse_profile)]
    profile: Profile,
    /// Override the prepare exponent.
    #[arg(long)]
    c: Option<u32>,
    /// CSV destination; standard output when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Write the labels (or forest, for sf) of the single run to this file.
    #[arg(long)]
    emit: Option<PathBuf>,
    /// Report wall_time as 0 so that replays are byte-identical.
    #[arg(long)]
    no_timing: bool,
}

#[derive(Clone, Debug)]
struct Seeds(Vec<u64>);

#[derive(Clone, Debug)]
struct Policies(Vec<WritePolicy>);

fn parse_algo(s: &str) -> Result<Algo, String> {
    Algo::from_name(s)
        .ok_or_else(|| format!("unknown algorithm `{s}` (expected vanilla, cc, sf or fastcc)"))
}

fn parse_profile(s: &str) -> Result<Profile, String> {
    Profile::from_name(s).ok_or_else(|| format!("unknown profile `{s}` (expected paper or desk)"))
}

fn parse_policies(s: &str) -> Result<Policies, String> {
    s.split(',')
        .map(|p| {
            WritePolicy::from_short_name(p.trim())
                .ok_or_else(|| format!("unknown policy `{p}` (expected low, high or random)"))
        })
        .collect::<Result<_, _>>()
        .map(Policies)
}

fn parse_seeds(s: &str) -> Result<Seeds, String> {
    let number = |t: &str| {
        t.trim()
            .parse::<u64>()
            .map_err(|_| format!("`{t}` is not a seed"))
    };
    let mut seeds = Vec::new();
    for part in s.split(',') {
        match part.split_once("..") {
            Some((a, b)) => seeds.extend(number(a)?..number(b)?),
            None => seeds.push(number(part)?),
        }
    }
    Ok(Seeds(seeds))
}

enum Failure {
    /// Bad input: exit code 2.
    Usage(String),
    /// A run was wrong or a verification failed: exit code 1.
    Wrong,
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn load_graph(path: &Path) -> Result<Graph, Failure> {
    parse_graph(&read(path)?).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn write_to(out: Option<&Path>, text: &str) -> Result<(), Failure> {
    match out {
        Some(p) => fs::write(p, text).map_err(|e| Failure::Usage(format!("{}: {e}", p.display()))),
        None => Ok(io::stdout().write_all(text.as_bytes())?),
    }
}

fn gen(spec: &str, seed: u64, out: Option<&Path>) -> Result<(), Failure> {
    let spec = GraphSpec::parse(spec).map_err(|e| Failure::Usage(e.to_string()))?;
    write_to(out, &write_graph(&spec.generate(seed)))
}

fn run(args: &RunArgs) -> Result<(), Failure> {
    let specs = args
        .specs
        .iter()
        .map(|s| GraphSpec::parse(s))
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| Failure::Usage(e.to_string()))?;
    let (seeds, policies) = (&args.seeds.0, &args.policy.0);
    let graphs = if args.graph.is_some() { 1 } else { specs.len() };
    if args.emit.is_some() && graphs * seeds.len() * policies.len() != 1 {
        return Err(Failure::Usage(
            "--emit needs exactly one run (one graph, seed and policy)".into(),
        ));
    }

    let results: Vec<RunResult> = match &args.graph {
        Some(path) => {
            let g = load_graph(path)?;
            seeds
                .iter()
                .flat_map(|&seed| policies.iter().map(move |&p| (seed, p)))
                .map(|(seed, p)| run_one(args.algo, &g, None, seed, p, args.profile, args.c))
                .collect()
        }
        None => {
            let config = ExperimentConfig {
                algo: args.algo,
                specs,
                seeds: seeds.clone(),
                policies: policies.clone(),
                profile: args.profile,
                c: args.c,
            };
            run_experiment(&config).collect()
        }
    };

    let mut records = Vec::with_capacity(results.len());
    let mut all_correct = true;
    for r in &results {
        if let Some(e) = &r.error {
            eprintln!(
                "{} seed {} policy {}: {e}",
                r.record.algo, r.record.seed, r.record.policy
            );
        }
        all_correct &= r.record.correct == 1;
        let mut record = r.record.clone();
        if args.no_timing {
            record.wall_time = 0.0;
        }
        records.push(record);
    }
    let mut csv = Vec::new();
    write_csv(&mut csv, &records).map_err(|e| Failure::Usage(e.to_string()))?;
    write_to(args.out.as_deref(), &String::from_utf8_lossy(&csv))?;

    if let (Some(path), Some(r)) = (&args.emit, results.first()) {
        let text = match &r.output {
            Some(RunOutput::Labels(l)) => write_labels(l),
            Some(RunOutput::Forest(f)) => write_forest(r.record.n, f),
            None => String::new(),
        };
        write_to(Some(path), &text)?;
    }
    if all_correct {
        Ok(())
    } else {
        Err(Failure::Wrong)
    }
}

fn verify(graph: &Path, labels: Option<&Path>, forest: Option<&Path>) -> Result<(), Failure> {
    let g = load_graph(graph)?;
    let verdict = match (labels, forest) {
        (Some(path), _) => {
            let labels = parse_labels(&read(path)?)
                .map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
            verify_labels(&g, &labels)
        }
        (None, Some(path)) => {
            let edges = parse_forest(&read(path)?)
                .map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
            verify_forest_edges(&g, &edges)
        }
        (None, None) => return Err(Failure::Usage("pass --labels or --forest".into())),
    };
    println!("{verdict}");
    if verdict.is_match() {
        Ok(())
    } else {
        Err(Failure::Wrong)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Gen { spec, seed, out } => gen(spec, *seed, out.as_deref()),
        Command::Run(args) => run(args),
        Command::Verify {
            graph,
            labels,
            forest,
        } => verify(graph, labels.as_deref(), forest.as_deref()),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Wrong) => ExitCode::from(1),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
