//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit on any failure.

mod common;

use std::process::ExitCode;
use std::time::Instant;

use pram_cc::cc::{run_cc_observed, ExpandParams, ExpandTrace};
use pram_cc::fastcc::{run_fast_cc_observed, FastParams, RoundTrace};
use pram_cc::forest::{run_sf_observed, verify_forest, TreeLinkTrace};
use pram_cc::graph::{
    bfs_ball, bfs_distances, check_digraph_invariants, diameter, oracle_components, same_partition,
    Graph, LabeledDigraph,
};
use pram_cc::harness::GraphSpec;
use pram_cc::observe::{Observer, PhaseView, Silent};
use pram_cc::pram::WritePolicy;
use pram_cc::vanilla::{ceil_log2, run_vanilla, run_vanilla_observed};

const WORK_FACTOR: u64 = 32;

struct Outcome {
    name: &'static str,
    passed: bool,
    detail: String,
}

fn outcome(name: &'static str, passed: bool, detail: String) -> Outcome {
    Outcome {
        name,
        passed,
        detail,
    }
}

/// Failures kept for the report, capped so a broken run stays readable.
#[derive(Default)]
struct Failures {
    count: usize,
    first: Vec<String>,
}

impl Failures {
    fn push(&mut self, what: impl FnOnce() -> String) {
        self.count += 1;
        if self.first.len() < 3 {
            self.first.push(what());
        }
    }

    fn summary(&self) -> String {
        if self.count == 0 {
            String::new()
        } else {
            format!(
                "; {} failures, first: {}",
                self.count,
                self.first.join(" | ")
            )
        }
    }
}

/// Every Faster CC run in the suite reports here.
#[derive(Default)]
struct WorkAudit {
    runs: usize,
    worst_ratio: f64,
    over: Failures,
}

impl WorkAudit {
    fn record(&mut self, context: &str, g: &Graph, work: u64) {
        let m = common::padded_m(g.n(), g.m()) as u64;
        self.runs += 1;
        self.worst_ratio = self.worst_ratio.max(work as f64 / m as f64);
        if work > WORK_FACTOR * m {
            self.over
                .push(|| format!("{context}: {work} cells for m={m}"));
        }
    }
}

fn policy_for(i: usize) -> WritePolicy {
    WritePolicy::ALL[i % 3]
}

fn desk_expand(c: Option<u32>) -> ExpandParams {
    let p = ExpandParams::desk();
    match c {
        Some(c) => p.with_c(c),
        None => p,
    }
}

fn desk_fast(c: Option<u32>) -> FastParams {
    let p = FastParams::desk();
    match c {
        Some(c) => p.with_c(c),
        None => p,
    }
}

/// Flatness at phase starts, plus the inner-round bound of every expand.
struct PhaseWatch {
    round_bound: usize,
    phases: usize,
    expands: usize,
    max_rounds: usize,
    not_flat: Failures,
    too_many_rounds: Failures,
    context: String,
}

impl PhaseWatch {
    fn new() -> Self {
        PhaseWatch {
            round_bound: 0,
            phases: 0,
            expands: 0,
            max_rounds: 0,
            not_flat: Failures::default(),
            too_many_rounds: Failures::default(),
            context: String::new(),
        }
    }
}

impl Observer for PhaseWatch {
    fn phase_start(&mut self, view: &PhaseView) {
        self.phases += 1;
        if !LabeledDigraph::from_parents(view.parents.clone()).is_flat() {
            let ctx = &self.context;
            self.not_flat
                .push(|| format!("{ctx} {} phase {}", view.algorithm, view.phase));
        }
    }

    fn expand_done(&mut self, trace: &ExpandTrace) {
        self.expands += 1;
        self.max_rounds = self.max_rounds.max(trace.rounds);
        if trace.rounds > self.round_bound {
            let (ctx, bound) = (&self.context, self.round_bound);
            self.too_many_rounds.push(|| {
                format!(
                    "{ctx} phase {}: {} rounds > {bound}",
                    trace.phase, trace.rounds
                )
            });
        }
    }
}

struct SweepReport {
    correctness: Outcome,
    flat: Outcome,
    expand_rounds: Outcome,
}

fn oracle_sweep(work: &mut WorkAudit) -> SweepReport {
    let specs = common::corpus(504, 11, 1 << 12);
    let mut wrong = Failures::default();
    let mut watch = PhaseWatch::new();
    let mut runs = 0;
    let (mut max_n, mut max_m) = (0, 0);
    for (i, spec) in specs.iter().enumerate() {
        let seed = i as u64;
        let g = spec.generate(seed);
        max_n = max_n.max(g.n());
        max_m = max_m.max(g.m());
        let truth = oracle_components(&g);
        let d = spec.diameter().unwrap_or_else(|| diameter(&g));
        watch.round_bound = ceil_log2(d) + 2;
        // Alternate the default prepare with none at all, so the main loops do the work.
        let c = (i % 2 == 1).then_some(0);
        for (k, policy) in WritePolicy::ALL.into_iter().enumerate() {
            let run_seed = seed * 3 + k as u64;
            let ctx = format!("{spec} seed {run_seed} {}", policy.short_name());
            watch.context = ctx.clone();

            runs += 3;
            match run_vanilla_observed(&g, run_seed, policy, false, &mut watch) {
                Ok(out) if same_partition(&out.labels, &truth) => {}
                Ok(_) => wrong.push(|| format!("vanilla {ctx}: wrong partition")),
                Err(e) => wrong.push(|| format!("vanilla {ctx}: {e}")),
            }
            match run_cc_observed(&g, run_seed, policy, &desk_expand(c), &mut watch) {
                Ok(out) if same_partition(&out.labels, &truth) => {}
                Ok(_) => wrong.push(|| format!("cc {ctx}: wrong partition")),
                Err(e) => wrong.push(|| format!("cc {ctx}: {e}")),
            }
            match run_fast_cc_observed(&g, run_seed, policy, &desk_fast(c), &mut Silent) {
                Ok(out) => {
                    work.record(&format!("fastcc {ctx}"), &g, out.work_total);
                    if !same_partition(&out.labels, &truth) {
                        wrong.push(|| format!("fastcc {ctx}: wrong partition"));
                    }
                }
                Err(e) => wrong.push(|| format!("fastcc {ctx}: {e}")),
            }
        }
    }
    SweepReport {
        correctness: outcome(
            "oracle correctness (vanilla, cc, fastcc)",
            wrong.count == 0,
            format!(
                "{} graphs, {runs} runs, n ≤ {max_n}, m ≤ {max_m}{}",
                specs.len(),
                wrong.summary()
            ),
        ),
        flat: outcome(
            "flat trees at every phase boundary (vanilla, cc)",
            watch.not_flat.count == 0 && watch.phases > 0,
            format!(
                "{} phase boundaries{}",
                watch.phases,
                watch.not_flat.summary()
            ),
        ),
        expand_rounds: outcome(
            "expand rounds ≤ ⌈log₂ d⌉ + 2",
            watch.too_many_rounds.count == 0 && watch.expands > 0,
            format!(
                "{} expand phases, most rounds seen {}{}",
                watch.expands,
                watch.max_rounds,
                watch.too_many_rounds.summary()
            ),
        ),
    }
}

fn forest_validity() -> Outcome {
    let specs = common::corpus(301, 23, 1 << 11);
    let mut bad = Failures::default();
    let mut edges_total = 0;
    for (i, spec) in specs.iter().enumerate() {
        let seed = 1000 + i as u64;
        let g = spec.generate(seed);
        let c = (i % 2 == 1).then_some(0);
        let ctx = format!("{spec} seed {seed}");
        match run_sf_observed(&g, seed, policy_for(i), &desk_expand(c), &mut Silent) {
            Ok(out) => {
                let edges = out.forest_edges(&g);
                edges_total += edges.len();
                let violations = verify_forest(&g, &edges);
                if !violations.is_empty() {
                    bad.push(|| format!("{ctx}: {}", violations[0]));
                }
            }
            Err(e) => bad.push(|| format!("{ctx}: {e}")),
        }
    }
    outcome(
        "spanning-forest validity",
        bad.count == 0,
        format!(
            "{} graphs, {edges_total} forest edges{}",
            specs.len(),
            bad.summary()
        ),
    )
}

struct RadiusWatch {
    checked: usize,
    wrong: Failures,
    context: String,
}

impl Observer for RadiusWatch {
    fn expand_done(&mut self, trace: &ExpandTrace) {
        for u in 0..trace.current.n() {
            if !trace.ongoing[u] || !trace.owns[u] {
                continue;
            }
            for j in 0..trace.stop_round(u).min(trace.tables.len()) {
                self.checked += 1;
                let mut ball = bfs_ball(&trace.current, u, 1 << j);
                ball.sort_unstable();
                if trace.tables[j][u] != ball {
                    let ctx = &self.context;
                    self.wrong.push(|| {
                        format!(
                            "{ctx} phase {} vertex {u} round {j}: table {:?} ball {:?}",
                            trace.phase, trace.tables[j][u], ball
                        )
                    });
                }
            }
        }
    }
}

fn radius_doubling() -> Outcome {
    let specs = common::corpus(50, 31, 256);
    let mut watch = RadiusWatch {
        checked: 0,
        wrong: Failures::default(),
        context: String::new(),
    };
    let mut errors = Failures::default();
    for (i, spec) in specs.iter().enumerate() {
        let seed = 2000 + i as u64;
        let g = spec.generate(seed);
        watch.context = format!("{spec} seed {seed}");
        if let Err(e) = run_cc_observed(&g, seed, policy_for(i), &desk_expand(Some(0)), &mut watch)
        {
            errors.push(|| format!("{spec} seed {seed}: {e}"));
        }
    }
    outcome(
        "radius doubling of live tables",
        watch.wrong.count == 0 && errors.count == 0 && watch.checked > 0,
        format!(
            "{} runs, {} (vertex, round) tables{}{}",
            specs.len(),
            watch.checked,
            watch.wrong.summary(),
            errors.summary()
        ),
    )
}

struct BetaWatch {
    checked: usize,
    wrong: Failures,
    context: String,
}

impl Observer for BetaWatch {
    fn tree_link_done(&mut self, trace: &TreeLinkTrace) {
        let leaders = (0..trace.current.n()).filter(|&v| trace.leaders[v] && trace.ongoing[v]);
        let dist = bfs_distances(&trace.current, leaders);
        for (u, beta) in trace.beta.iter().enumerate() {
            let Some(beta) = *beta else { continue };
            self.checked += 1;
            if dist[u] != Some(beta) {
                let ctx = &self.context;
                self.wrong.push(|| {
                    format!(
                        "{ctx} phase {} vertex {u}: β={beta}, distance {:?}",
                        trace.phase, dist[u]
                    )
                });
            }
        }
    }
}

fn beta_correctness() -> Outcome {
    let specs = common::corpus(50, 37, 512);
    let mut watch = BetaWatch {
        checked: 0,
        wrong: Failures::default(),
        context: String::new(),
    };
    let mut errors = Failures::default();
    for (i, spec) in specs.iter().enumerate() {
        let seed = 3000 + i as u64;
        let g = spec.generate(seed);
        watch.context = format!("{spec} seed {seed}");
        if let Err(e) = run_sf_observed(&g, seed, policy_for(i), &desk_expand(Some(0)), &mut watch)
        {
            errors.push(|| format!("{spec} seed {seed}: {e}"));
        }
    }
    outcome(
        "β equals distance to the nearest leader",
        watch.wrong.count == 0 && errors.count == 0 && watch.checked > 0,
        format!(
            "{} runs, {} β values{}{}",
            specs.len(),
            watch.checked,
            watch.wrong.summary(),
            errors.summary()
        ),
    )
}

struct RoundWatch {
    rounds: usize,
    levels_bad: Failures,
    two_hop_checked: usize,
    two_hop_bad: Failures,
    context: String,
}

impl RoundWatch {
    fn new() -> Self {
        RoundWatch {
            rounds: 0,
            levels_bad: Failures::default(),
            two_hop_checked: 0,
            two_hop_bad: Failures::default(),
            context: String::new(),
        }
    }
}

impl Observer for RoundWatch {
    fn fast_round(&mut self, t: &RoundTrace) {
        self.rounds += 1;
        let ctx = &self.context;
        if let Err(v) = check_digraph_invariants(&t.end_parents, Some(&t.end_levels)) {
            self.levels_bad
                .push(|| format!("{ctx} round {}: {v}", t.round));
        }
        for v in 0..t.start_parents.len() {
            let quiet_root = t.start_parents[v] == v && t.end_parents[v] == v && !t.bumped[v];
            if !quiet_root {
                continue;
            }
            for u in bfs_ball(&t.start_graph, v, 2) {
                self.two_hop_checked += 1;
                let parent = t.linked_parents[u];
                if t.tables[v].binary_search(&parent).is_err() {
                    self.two_hop_bad.push(|| {
                        format!(
                            "{ctx} round {} root {v}: parent {parent} of {u} missing from {:?}",
                            t.round, t.tables[v]
                        )
                    });
                }
            }
        }
    }
}

/// Faster CC runs with no prepare, watched round by round.
fn fast_rounds(
    count: usize,
    corpus_seed: u64,
    seed_base: u64,
    watch: &mut RoundWatch,
    work: &mut WorkAudit,
) -> Failures {
    let specs = common::corpus(count, corpus_seed, 1 << 10);
    let mut wrong = Failures::default();
    for (i, spec) in specs.iter().enumerate() {
        let seed = seed_base + i as u64;
        let g = spec.generate(seed);
        let ctx = format!("{spec} seed {seed}");
        watch.context = ctx.clone();
        match run_fast_cc_observed(&g, seed, policy_for(i), &desk_fast(Some(0)), watch) {
            Ok(out) => {
                work.record(&format!("fastcc {ctx}"), &g, out.work_total);
                if !same_partition(&out.labels, &oracle_components(&g)) {
                    wrong.push(|| format!("{ctx}: wrong partition"));
                }
            }
            Err(e) => wrong.push(|| format!("{ctx}: {e}")),
        }
    }
    wrong
}

fn level_invariant(work: &mut WorkAudit) -> Outcome {
    let mut watch = RoundWatch::new();
    let wrong = fast_rounds(100, 41, 4000, &mut watch, work);
    outcome(
        "level invariant and acyclicity after every fastcc round",
        watch.levels_bad.count == 0 && wrong.count == 0 && watch.rounds > 0,
        format!(
            "100 runs, {} rounds{}{}",
            watch.rounds,
            watch.levels_bad.summary(),
            wrong.summary()
        ),
    )
}

fn two_hop(work: &mut WorkAudit) -> Outcome {
    let mut watch = RoundWatch::new();
    let wrong = fast_rounds(50, 43, 5000, &mut watch, work);
    outcome(
        "two-hop guarantee for quiet roots",
        watch.two_hop_bad.count == 0 && wrong.count == 0 && watch.two_hop_checked > 0,
        format!(
            "50 runs, {} rounds, {} two-hop checks{}{}",
            watch.rounds,
            watch.two_hop_checked,
            watch.two_hop_bad.summary(),
            wrong.summary()
        ),
    )
}

fn vanilla_decay() -> Outcome {
    const SEEDS: u64 = 300;
    let spec = GraphSpec::Er {
        n: 1024,
        m: 4096,
        seed: None,
    };
    let ks = [5usize, 10, 15];
    let mut hits = [0u32; 3];
    let mut errors = Failures::default();
    for seed in 0..SEEDS {
        let g = spec.generate(seed);
        match run_vanilla(&g, seed, policy_for(seed as usize)) {
            Ok(out) => {
                for (slot, &k) in ks.iter().enumerate() {
                    let ongoing = out.ongoing_history.get(k).copied().unwrap_or(0);
                    if ongoing as f64 <= (7.0f64 / 8.0).powi(k as i32) * g.n() as f64 {
                        hits[slot] += 1;
                    }
                }
            }
            Err(e) => errors.push(|| format!("seed {seed}: {e}")),
        }
    }
    let mut passed = errors.count == 0;
    let parts: Vec<String> = ks
        .iter()
        .zip(hits)
        .map(|(&k, h)| {
            let fraction = f64::from(h) / SEEDS as f64;
            let needed = 1.0 - (6.0f64 / 7.0).powi(k as i32) - 0.05;
            passed &= fraction >= needed;
            format!("k={k}: {fraction:.3} ≥ {needed:.3}")
        })
        .collect();
    outcome(
        "vanilla decay on G(1024, 4096)",
        passed,
        format!("{SEEDS} seeds, {}{}", parts.join(", "), errors.summary()),
    )
}

fn median(v: &mut [usize]) -> f64 {
    v.sort_unstable();
    let k = v.len();
    if k % 2 == 1 {
        v[k / 2] as f64
    } else {
        (v[k / 2 - 1] + v[k / 2]) as f64 / 2.0
    }
}

/// Least-squares line y = a·x + b and its R².
fn fit(points: &[(f64, f64)]) -> (f64, f64, f64) {
    let k = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / k;
    let my = points.iter().map(|p| p.1).sum::<f64>() / k;
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let syy: f64 = points.iter().map(|p| (p.1 - my).powi(2)).sum();
    let a = sxy / sxx;
    let b = my - a * mx;
    let r2 = if syy == 0.0 {
        0.0
    } else {
        sxy * sxy / (sxx * syy)
    };
    (a, b, r2)
}

fn fast_scaling(work: &mut WorkAudit) -> Outcome {
    const SEEDS: usize = 50;
    let mut points = Vec::new();
    let mut errors = Failures::default();
    for d in [8usize, 32, 128, 512] {
        let g = GraphSpec::Path { n: d + 1 }.generate(0);
        let truth = oracle_components(&g);
        let mut rounds = Vec::with_capacity(SEEDS);
        for s in 0..SEEDS {
            let seed = 6000 + s as u64;
            match run_fast_cc_observed(&g, seed, policy_for(s), &desk_fast(Some(0)), &mut Silent) {
                Ok(out) => {
                    work.record(
                        &format!("fastcc path d={d} seed {seed}"),
                        &g,
                        out.work_total,
                    );
                    if !same_partition(&out.labels, &truth) {
                        errors.push(|| format!("d={d} seed {seed}: wrong partition"));
                    }
                    rounds.push(out.rounds);
                }
                Err(e) => errors.push(|| format!("d={d} seed {seed}: {e}")),
            }
        }
        points.push(((d as f64).log2(), median(&mut rounds)));
    }
    let (a, b, r2) = fit(&points);
    let medians: Vec<String> = points
        .iter()
        .map(|(x, y)| format!("{}:{y}", 2f64.powf(*x) as usize))
        .collect();
    outcome(
        "fastcc rounds scale with log₂ d on paths",
        errors.count == 0 && r2 >= 0.8 && a <= 8.0,
        format!(
            "medians {}, a={a:.3}, b={b:.3}, R²={r2:.3}{}",
            medians.join(" "),
            errors.summary()
        ),
    )
}

fn main() -> ExitCode {
    let started = Instant::now();
    let mut work = WorkAudit::default();
    let mut results = Vec::new();

    let sweep = oracle_sweep(&mut work);
    results.push(sweep.correctness);
    results.push(forest_validity());
    results.push(sweep.flat);
    results.push(level_invariant(&mut work));
    results.push(radius_doubling());
    results.push(two_hop(&mut work));
    results.push(beta_correctness());
    results.push(vanilla_decay());
    results.push(sweep.expand_rounds);
    results.push(fast_scaling(&mut work));
    results.push(outcome(
        "fastcc work ≤ 32·m",
        work.over.count == 0 && work.runs > 0,
        format!(
            "{} runs, worst {:.2}·m{}",
            work.runs,
            work.worst_ratio,
            work.over.summary()
        ),
    ));

    let failed = results.iter().filter(|r| !r.passed).count();
    for r in &results {
        println!(
            "{} {}: {}",
            if r.passed { "PASS" } else { "FAIL" },
            r.name,
            r.detail
        );
    }
    println!(
        "{} of {} criteria passed in {:.1}s",
        results.len() - failed,
        results.len(),
        started.elapsed().as_secs_f64()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
