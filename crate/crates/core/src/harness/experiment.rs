//! Runs algorithms over (spec, seed, policy) grids and reports CSV records.

use std::fmt;
use std::io::Write;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::cc::{run_cc, ExpandParams, Profile};
use crate::error::Result;
use crate::fastcc::{run_fast_cc, FastParams};
use crate::forest::{run_sf, verify_forest};
use crate::graph::{diameter, oracle_components, same_partition, Graph};
use crate::harness::GraphSpec;
use crate::pram::WritePolicy;
use crate::vanilla::run_vanilla;

pub const CSV_HEADER: [&str; 13] = [
    "algo",
    "n",
    "m",
    "d",
    "phases",
    "inner_rounds_total",
    "loop_rounds",
    "work_total",
    "seed",
    "policy",
    "profile",
    "correct",
    "wall_time",
];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Algo {
    Vanilla,
    Cc,
    Sf,
    FastCc,
}

impl Algo {
    pub const ALL: [Algo; 4] = [Algo::Vanilla, Algo::Cc, Algo::Sf, Algo::FastCc];

    pub fn name(self) -> &'static str {
        match self {
            Algo::Vanilla => "vanilla",
            Algo::Cc => "cc",
            Algo::Sf => "sf",
            Algo::FastCc => "fastcc",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|a| a.name() == name)
    }
}

impl fmt::Display for Algo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// One CSV row.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub algo: String,
    pub n: usize,
    pub m: usize,
    pub d: usize,
    /// Contraction phases, prepare included.
    pub phases: usize,
    pub inner_rounds_total: usize,
    /// Iterations of the algorithm's main loop (expand phases, or fast rounds).
    pub loop_rounds: usize,
    pub work_total: u64,
    pub seed: u64,
    pub policy: String,
    pub profile: String,
    pub correct: u8,
    pub wall_time: f64,
}

#[derive(Clone, Debug)]
pub struct ExperimentConfig {
    pub algo: Algo,
    pub specs: Vec<GraphSpec>,
    pub seeds: Vec<u64>,
    pub policies: Vec<WritePolicy>,
    pub profile: Profile,
    /// Prepare exponent override.
    pub c: Option<u32>,
}

/// A finished run: the record, the output, and the abort message if it aborted.
#[derive(Clone, Debug)]
pub struct RunResult {
    pub record: RunRecord,
    pub output: Option<RunOutput>,
    pub error: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RunOutput {
    Labels(Vec<usize>),
    Forest(Vec<(usize, usize)>),
}

struct Measured {
    phases: usize,
    inner: usize,
    loop_rounds: usize,
    work: u64,
    correct: bool,
    output: RunOutput,
}

fn measure(
    algo: Algo,
    g: &Graph,
    seed: u64,
    policy: WritePolicy,
    profile: Profile,
    c: Option<u32>,
) -> Result<Measured> {
    let expand = {
        let p = ExpandParams::for_profile(profile);
        c.map_or(p.clone(), |c| p.with_c(c))
    };
    let oracle = || oracle_components(g);
    Ok(match algo {
        Algo::Vanilla => {
            let out = run_vanilla(g, seed, policy)?;
            Measured {
                phases: out.phases,
                inner: 0,
                loop_rounds: out.phases,
                work: out.work_total,
                correct: same_partition(&out.labels, &oracle()),
                output: RunOutput::Labels(out.labels),
            }
        }
        Algo::Cc => {
            let out = run_cc(g, seed, policy, &expand)?;
            Measured {
                phases: out.stats.prepare_phases + out.stats.phases.len(),
                inner: out.stats.inner_rounds_total(),
                loop_rounds: out.stats.phases.len(),
                work: out.work_total,
                correct: same_partition(&out.labels, &oracle()),
                output: RunOutput::Labels(out.labels),
            }
        }
        Algo::Sf => {
            let out = run_sf(g, seed, policy, &expand)?;
            let edges = out.forest_edges(g);
            Measured {
                phases: out.stats.prepare_phases + out.stats.phases.len(),
                inner: out.stats.inner_rounds_total(),
                loop_rounds: out.stats.phases.len(),
                work: out.work_total,
                correct: verify_forest(g, &edges).is_empty()
                    && same_partition(&out.labels, &oracle()),
                output: RunOutput::Forest(edges),
            }
        }
        Algo::FastCc => {
            let params = {
                let p = FastParams::for_profile(profile);
                c.map_or(p.clone(), |c| p.with_c(c))
            };
            let out = run_fast_cc(g, seed, policy, &params)?;
            Measured {
                phases: out.prepare_phases
                    + out.residual.prepare_phases
                    + out.residual.phases.len(),
                inner: out.residual.inner_rounds_total(),
                loop_rounds: out.rounds,
                work: out.work_total,
                correct: same_partition(&out.labels, &oracle()),
                output: RunOutput::Labels(out.labels),
            }
        }
    })
}

/// Runs one algorithm on one graph. `d` is the input diameter if already known.
pub fn run_one(
    algo: Algo,
    g: &Graph,
    d: Option<usize>,
    seed: u64,
    policy: WritePolicy,
    profile: Profile,
    c: Option<u32>,
) -> RunResult {
    let start = Instant::now();
    let result = measure(algo, g, seed, policy, profile, c);
    let wall_time = start.elapsed().as_secs_f64();
    let mut record = RunRecord {
        algo: algo.name().to_string(),
        n: g.n(),
        m: g.m(),
        d: d.unwrap_or_else(|| diameter(g)),
        phases: 0,
        inner_rounds_total: 0,
        loop_rounds: 0,
        work_total: 0,
        seed,
        policy: policy.short_name().to_string(),
        profile: profile.name().to_string(),
        correct: 0,
        wall_time,
    };
    match result {
        Ok(x) => {
            record.phases = x.phases;
            record.inner_rounds_total = x.inner;
            record.loop_rounds = x.loop_rounds;
            record.work_total = x.work;
            record.correct = u8::from(x.correct);
            RunResult {
                record,
                output: Some(x.output),
                error: None,
            }
        }
        Err(e) => RunResult {
            record,
            output: None,
            error: Some(e.to_string()),
        },
    }
}

/// One result per (spec, seed, policy), in that nesting order.
pub fn run_experiment(config: &ExperimentConfig) -> impl Iterator<Item = RunResult> + '_ {
    config.specs.iter().flat_map(move |spec| {
        config.seeds.iter().flat_map(move |&seed| {
            let g = spec.generate(seed);
            let d = spec.diameter();
            config
                .policies
                .iter()
                .map(move |&policy| {
                    run_one(config.algo, &g, d, seed, policy, config.profile, config.c)
                })
                .collect::<Vec<_>>()
        })
    })
}

/// Writes the header, then one row per record.
pub fn write_csv<'a, W: Write>(
    out: W,
    records: impl IntoIterator<Item = &'a RunRecord>,
) -> csv::Result<()> {
    let mut w = csv::WriterBuilder::new()
        .has_headers(false)
        .from_writer(out);
    w.write_record(CSV_HEADER)?;
    for r in records {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_csv<R: std::io::Read>(input: R) -> csv::Result<Vec<RunRecord>> {
    csv::Reader::from_reader(input).deserialize().collect()
}

/// A record with `wall_time` zeroed, for replay comparisons.
pub fn without_timing(r: &RunRecord) -> RunRecord {
    RunRecord {
        wall_time: 0.0,
        ..r.clone()
    }
}
