//! Connected components by hashing-based neighbourhood expansion.
//!
//! A run first contracts with vanilla phases (`prepare`), then repeats
//! expand, vote, link, shortcut and alter until only loops remain. Expand gives
//! every vertex that solely owns a block a hash table and doubles the radius
//! covered by the table each inner round; a vertex that sees a collision, or a
//! dormant vertex in its table, goes dormant and votes by coin instead.

use crate::error::{Error, Result};
use crate::forest;
use crate::graph::Graph;
use crate::hash::HashFn;
use crate::observe::{Observer, Silent};
use crate::pram::{Counters, PramMachine, Region, Word, WritePolicy, Zone};
use crate::seeds::{self, mix, tag};
use crate::shared::{decode, encode, SharedGraph};
use crate::vanilla::{ceil_log2, phase_cap, ForestMarks, Vanilla};

/// Constant regime: the asymptotic constants, or small-instance ones with visible progress.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Profile {
    Paper,
    Desk,
}

impl Profile {
    pub fn name(self) -> &'static str {
        match self {
            Profile::Paper => "paper",
            Profile::Desk => "desk",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        match name {
            "paper" => Some(Profile::Paper),
            "desk" => Some(Profile::Desk),
            _ => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExpandParams {
    /// Prepare exponent: vanilla phases run when m/n ≤ log^c n.
    pub c: u32,
    /// b = δ^budget_exponent.
    pub budget_exponent: f64,
    /// Dormant vertices lead with probability b^-vote_exponent.
    pub vote_exponent: f64,
    /// ñ shrinks by b^shrink_exponent per phase.
    pub shrink_exponent: f64,
    /// Block sizes are perfect squares of at least this many cells.
    pub min_block: usize,
}

impl ExpandParams {
    pub fn paper() -> Self {
        ExpandParams {
            c: 100,
            budget_exponent: 1.0 / 18.0,
            vote_exponent: 2.0 / 3.0,
            shrink_exponent: 0.25,
            min_block: 4,
        }
    }

    pub fn desk() -> Self {
        ExpandParams {
            c: 4,
            budget_exponent: 1.0 / 3.0,
            ..Self::paper()
        }
    }

    pub fn for_profile(profile: Profile) -> Self {
        match profile {
            Profile::Paper => Self::paper(),
            Profile::Desk => Self::desk(),
        }
    }

    pub fn with_c(mut self, c: u32) -> Self {
        self.c = c;
        self
    }
}

fn log2f(x: f64) -> f64 {
    x.max(1.0).log2()
}

/// Number of vanilla phases `prepare` runs: ⌈c·log_{8/7} log n⌉ when m/n ≤ log^c n, else 0.
pub fn prepare_phase_count(n: usize, m: usize, c: u32) -> usize {
    if n == 0 || (m as f64 / n as f64) > log2f(n as f64).powi(c as i32) {
        return 0;
    }
    let loglog = log2f(n as f64);
    if loglog <= 1.0 {
        return 0;
    }
    (c as f64 * loglog.ln() / (8.0f64 / 7.0).ln()).ceil() as usize
}

/// Vertex-count estimate after `prepare`: n / log^c n when prepare ran, else n.
pub fn initial_estimate(n: usize, m: usize, c: u32) -> f64 {
    let logc = log2f(n as f64).powi(c as i32);
    if (m as f64 / n.max(1) as f64) <= logc {
        n as f64 / logc
    } else {
        n as f64
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BudgetUpdate {
    /// b = (m/ñ)^e for the current estimate, before any floor.
    pub b: f64,
    /// b floored at 2, the value probabilities use.
    pub b_effective: f64,
    /// ñ / b^shrink for the next phase.
    pub next_estimate: f64,
    /// (m / next_estimate)^e.
    pub next_b: f64,
    pub b_floored: bool,
}

/// Applies the estimate rule: b from the current ñ, then ñ' = ñ / b^{1/4} and b' from ñ'.
pub fn update_budget(estimate: f64, m: usize, params: &ExpandParams) -> BudgetUpdate {
    let est = estimate.max(1.0);
    let b = (m as f64 / est).powf(params.budget_exponent);
    let next_estimate = est / b.powf(params.shrink_exponent);
    BudgetUpdate {
        b,
        b_effective: b.max(2.0),
        next_estimate,
        next_b: (m as f64 / next_estimate.max(f64::MIN_POSITIVE)).powf(params.budget_exponent),
        b_floored: b < 2.0,
    }
}

/// ⌈log_{1+e·s} log_{m/n₁} m⌉ + 1 where e, s are the budget and shrink exponents;
/// with the paper-profile exponents 1/18 and 1/4 the base is 73/72.
pub fn closed_form_phase_bound(m: f64, n1: f64, params: &ExpandParams) -> usize {
    let ratio = m / n1.max(1.0);
    if ratio <= 1.0 || n1 <= 1.0 {
        return 1;
    }
    let inner = m.ln() / ratio.ln();
    if inner <= 1.0 {
        return 1;
    }
    let base = 1.0 + params.budget_exponent * params.shrink_exponent;
    (inner.ln() / base.ln()).ceil() as usize + 1
}

/// Sizes derived from δ = m/ñ for one phase.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Sizes {
    pub delta: f64,
    pub block_size: usize,
    pub table_size: usize,
    pub blocks: usize,
}

impl Sizes {
    pub fn new(m: usize, estimate: f64, params: &ExpandParams) -> Self {
        let delta = m as f64 / estimate.max(1.0);
        let block_size =
            perfect_square_at_least(delta.powf(2.0 / 3.0).ceil() as usize, params.min_block);
        let table_size = isqrt(block_size);
        Sizes {
            delta,
            block_size,
            table_size,
            blocks: (m / block_size).max(1),
        }
    }
}

pub fn isqrt(x: usize) -> usize {
    let mut r = (x as f64).sqrt() as usize;
    while r * r > x {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= x {
        r += 1;
    }
    r
}

/// Smallest perfect square ≥ max(x, floor).
pub fn perfect_square_at_least(x: usize, floor: usize) -> usize {
    let x = x.max(floor).max(1);
    let r = isqrt(x);
    if r * r == x {
        x
    } else {
        (r + 1) * (r + 1)
    }
}

/// Result of one expand: ownership, every inner round's tables, and dormancy.
#[derive(Clone, Debug)]
pub struct Expansion {
    pub sizes: Sizes,
    pub block_hash: HashFn,
    pub table_hash: HashFn,
    /// Block index of each sole owner.
    pub block_of: Vec<Option<usize>>,
    /// Table snapshots H_0 ..= H_T, each `blocks × table_size` cells.
    pub history: Vec<Region>,
    /// Per vertex: 0 while live, else one plus the inner round in which it went dormant.
    pub dormant: Region,
    /// Inner rounds run after the initial hashing (T).
    pub rounds: usize,
}

impl Expansion {
    pub fn table(&self, round: usize, u: usize) -> Option<Region> {
        let t = self.sizes.table_size;
        self.block_of[u].map(|b| self.history[round].slice(b * t, t))
    }

    pub fn entries(&self, m: &PramMachine, round: usize, u: usize) -> Vec<usize> {
        let mut out: Vec<usize> = self
            .table(round, u)
            .map(|r| m.view(r).iter().filter_map(|&w| decode(w)).collect())
            .unwrap_or_default();
        out.sort_unstable();
        out
    }

    pub fn final_round(&self) -> usize {
        self.history.len() - 1
    }

    /// Inner round in which `u` went dormant, `None` if it stayed live.
    pub fn dormant_round(&self, m: &PramMachine, u: usize) -> Option<usize> {
        let d = m.get(self.dormant, u);
        (d != 0).then(|| d as usize - 1)
    }

    /// Whether `u` owns a block and had not gone dormant by round `j`.
    pub fn live_in_round(&self, m: &PramMachine, u: usize, j: usize) -> bool {
        self.block_of[u].is_some() && self.dormant_round(m, u).is_none_or(|r| r > j)
    }
}

/// Everything an observer needs to check an expand against BFS balls.
#[derive(Clone, Debug)]
pub struct ExpandTrace {
    pub phase: usize,
    pub current: Graph,
    pub ongoing: Vec<bool>,
    pub owns: Vec<bool>,
    /// `tables[j][u]`: sorted entries of H_j(u).
    pub tables: Vec<Vec<Vec<usize>>>,
    pub dormant_round: Vec<Option<usize>>,
    pub rounds: usize,
    pub table_hash: HashFn,
    pub sizes: Sizes,
}

impl ExpandTrace {
    fn capture(
        m: &PramMachine,
        g: &SharedGraph,
        ongoing: &[bool],
        x: &Expansion,
        phase: usize,
    ) -> Self {
        ExpandTrace {
            phase,
            current: g.current_graph(m),
            ongoing: ongoing.to_vec(),
            owns: x.block_of.iter().map(Option::is_some).collect(),
            tables: (0..x.history.len())
                .map(|j| (0..g.n).map(|u| x.entries(m, j, u)).collect())
                .collect(),
            dormant_round: (0..g.n).map(|u| x.dormant_round(m, u)).collect(),
            rounds: x.rounds,
            table_hash: x.table_hash,
            sizes: x.sizes,
        }
    }

    /// Round at which `u`'s table stopped growing: its dormancy round, or the first round
    /// whose table equals the previous one.
    pub fn stop_round(&self, u: usize) -> usize {
        if let Some(r) = self.dormant_round[u] {
            return r;
        }
        (1..self.tables.len())
            .find(|&j| self.tables[j][u] == self.tables[j - 1][u])
            .unwrap_or(self.tables.len())
    }
}

/// Runs expand on the ongoing vertices of `g`.
pub fn expand(
    m: &mut PramMachine,
    g: &SharedGraph,
    ongoing: &[bool],
    sizes: Sizes,
    block_hash: HashFn,
    table_hash: HashFn,
    zone_round: u32,
) -> Result<Expansion> {
    let n = g.n;
    let t = sizes.table_size;
    m.set_phase("expand");

    // Blocks: each ongoing vertex claims h_B(v); the claim stands only if uncontested.
    let owner = m.alloc(sizes.blocks);
    let contested = m.alloc(sizes.blocks);
    let dormant = m.alloc(n);
    let bucket = |v: usize| block_hash.eval(v as u64) as usize;
    for v in (0..n).filter(|&v| ongoing[v]) {
        m.put(owner, bucket(v), encode(v), g.vertex_pid(v));
    }
    m.end_step();
    for v in (0..n).filter(|&v| ongoing[v]) {
        if m.get(owner, bucket(v)) != encode(v) {
            m.put(contested, bucket(v), 1, g.vertex_pid(v));
        }
    }
    m.end_step();
    let block_of: Vec<Option<usize>> = (0..n)
        .map(|v| {
            let b = bucket(v);
            (ongoing[v] && m.get(owner, b) == encode(v) && m.get(contested, b) == 0).then_some(b)
        })
        .collect();
    for v in (0..n).filter(|&v| ongoing[v] && block_of[v].is_none()) {
        m.put(dormant, v, 1, g.vertex_pid(v));
    }
    m.end_step();

    let cell = |u: usize, x: usize| -> usize {
        block_of[u].expect("table owner") * t + table_hash.eval(x as u64) as usize
    };
    let mut history = Vec::new();
    let h0 = m.allocate_block(sizes.blocks * t, Zone::new(zone_round, 0))?;
    history.push(h0);

    // Round 0: each live arc tail hashes both endpoints into its own table.
    let live_before: Vec<bool> = (0..n).map(|v| m.get(dormant, v) == 0).collect();
    for i in 0..g.arc_count() {
        let (v, w) = g.arc(m, i);
        if !ongoing[v] {
            continue;
        }
        if live_before[v] {
            m.put(h0, cell(v, v), encode(v), 2 * i as u64);
            m.put(h0, cell(v, w), encode(w), 2 * i as u64 + 1);
        } else if m.get(dormant, w) == 0 {
            m.put(dormant, w, 1, i as u64);
        }
    }
    m.activate(2 * g.arc_count() as u64);
    m.end_step();
    for i in 0..g.arc_count() {
        let (v, w) = g.arc(m, i);
        if ongoing[v] && live_before[v] && m.get(dormant, v) == 0 {
            let hv = m.get(h0, cell(v, v));
            let hw = m.get(h0, cell(v, w));
            if hv != encode(v) || hw != encode(w) {
                m.put(dormant, v, 1, i as u64);
            }
        }
    }
    m.end_step();

    let owners: Vec<usize> = (0..n).filter(|&u| block_of[u].is_some()).collect();
    let cap = ceil_log2(n) + 2;
    let mut round = 0;
    loop {
        round += 1;
        if round > cap {
            return Err(Error::abort(
                "expand",
                format!("inner rounds exceeded ⌈log₂ n⌉ + 2 = {cap}"),
            ));
        }
        let prev = *history.last().expect("round 0 table");
        let next = m.allocate_block(sizes.blocks * t, Zone::new(zone_round, round as u32))?;
        let stamp = round as Word + 1;
        let pid = |u: usize, p: usize, q: usize| ((block_of[u].unwrap() * t + p) * t + q) as u64;

        // Two-hop merge: every w in H(v) for every v in H(u) is hashed into the new H(u).
        for &u in &owners {
            let bu = block_of[u].unwrap() * t;
            for p in 0..t {
                let Some(v) = decode(m.get(prev, bu + p)) else {
                    continue;
                };
                if m.get(dormant, v) != 0 && m.get(dormant, u) == 0 {
                    m.put(dormant, u, stamp, pid(u, p, 0));
                }
                let Some(bv) = block_of[v] else { continue };
                for q in 0..t {
                    if let Some(w) = decode(m.get(prev, bv * t + q)) {
                        m.put(next, cell(u, w), encode(w), pid(u, p, q));
                    }
                }
            }
        }
        m.activate((owners.len() * t * t) as u64);
        m.end_step();

        // A write that did not stick means a collision.
        for &u in &owners {
            let bu = block_of[u].unwrap() * t;
            for p in 0..t {
                let Some(v) = decode(m.get(prev, bu + p)) else {
                    continue;
                };
                let Some(bv) = block_of[v] else { continue };
                for q in 0..t {
                    if let Some(w) = decode(m.get(prev, bv * t + q)) {
                        if m.get(next, cell(u, w)) != encode(w) && m.get(dormant, u) == 0 {
                            m.put(dormant, u, stamp, pid(u, p, q));
                        }
                    }
                }
            }
        }
        m.activate((owners.len() * t * t) as u64);
        m.end_step();
        history.push(next);

        // Continue while some still-live table gained an entry.
        let changed = m.alloc(1);
        for &u in &owners {
            if m.get(dormant, u) != 0 {
                continue;
            }
            let bu = block_of[u].unwrap() * t;
            for p in 0..t {
                if m.get(next, bu + p) != m.get(prev, bu + p) {
                    m.put(changed, 0, 1, (bu + p) as u64);
                }
            }
        }
        m.end_step();
        m.end_round();
        if m.get(changed, 0) == 0 {
            break;
        }
    }

    Ok(Expansion {
        sizes,
        block_hash,
        table_hash,
        block_of,
        history,
        dormant,
        rounds: round,
    })
}

/// Leader bits: live vertices lead iff their final table holds no smaller id;
/// dormant ones lead with probability b^-vote_exponent. Non-ongoing vertices never lead.
pub fn vote(
    m: &mut PramMachine,
    g: &SharedGraph,
    ongoing: &[bool],
    x: &Expansion,
    is_dormant_leader: impl Fn(usize) -> bool,
) -> Region {
    let leader = m.alloc(g.n);
    let last = x.final_round();
    for u in (0..g.n).filter(|&u| ongoing[u]) {
        let lead = if x.dormant_round(m, u).is_none() && x.block_of[u].is_some() {
            x.entries(m, last, u).first().is_none_or(|&min| min >= u)
        } else {
            is_dormant_leader(u)
        };
        if lead {
            m.put(leader, u, 1, g.vertex_pid(u));
        }
    }
    m.end_step();
    leader
}

/// Non-leaders hook onto a leader reachable by an arc or through their final table.
pub fn link(m: &mut PramMachine, g: &SharedGraph, x: &Expansion, leader: Region) {
    let is_leader = |m: &PramMachine, v: usize| m.get(leader, v) == 1;
    for i in 0..g.arc_count() {
        let (v, w) = g.arc(m, i);
        if !is_leader(m, v) && is_leader(m, w) {
            m.put(g.parent, v, w as Word, i as u64);
        }
    }
    let last = x.history[x.final_round()];
    let t = x.sizes.table_size;
    for u in 0..g.n {
        let Some(b) = x.block_of[u] else { continue };
        if is_leader(m, u) {
            continue;
        }
        for p in 0..t {
            if let Some(w) = decode(m.get(last, b * t + p)) {
                if is_leader(m, w) {
                    m.put(g.parent, u, w as Word, (g.arc_count() + b * t + p) as u64);
                }
            }
        }
    }
    m.end_step();
}

/// Per-phase measurements.
#[derive(Clone, Debug, Default)]
pub struct PhaseStats {
    pub estimate: f64,
    pub b: f64,
    pub block_size: usize,
    pub table_size: usize,
    pub inner_rounds: usize,
    pub ongoing: usize,
    pub owners: usize,
    pub live: usize,
    pub tree_shortcut_iterations: usize,
}

#[derive(Clone, Debug, Default)]
pub struct ContractionStats {
    pub planned_prepare_phases: usize,
    pub prepare_phases: usize,
    pub phases: Vec<PhaseStats>,
    /// Ongoing count right after prepare.
    pub ongoing_after_prepare: usize,
    pub initial_estimate: f64,
    /// Conditions worth surfacing (floored b, clamped estimates).
    pub notes: Vec<String>,
}

impl ContractionStats {
    pub fn inner_rounds_total(&self) -> usize {
        self.phases.iter().map(|p| p.inner_rounds).sum()
    }

    fn note(&mut self, text: String) {
        if !self.notes.contains(&text) {
            self.notes.push(text);
        }
    }
}

/// Prepare plus the expand/vote/link loop on a graph already in memory.
/// With forest marks, linking goes through tree-link and arcs are marked.
pub(crate) fn contract(
    m: &mut PramMachine,
    g: SharedGraph,
    marks: Option<ForestMarks>,
    params: &ExpandParams,
    seed: u64,
    observer: &mut dyn Observer,
    algorithm: &'static str,
) -> Result<ContractionStats> {
    let n = g.n;
    let edges = g.arc_count() / 2;
    let mut stats = ContractionStats {
        planned_prepare_phases: prepare_phase_count(n, edges, params.c),
        ..Default::default()
    };

    let mut vanilla = Vanilla::with_marks(g, mix(&[seed, tag::PREPARE]), marks, m);
    for _ in 0..stats.planned_prepare_phases {
        let (flags, any) = vanilla.ongoing(m);
        if observer.enabled() {
            observer.phase_start(&vanilla.phase_view(m, algorithm, flags));
        }
        if !any {
            break;
        }
        vanilla.phase(m);
    }
    stats.prepare_phases = vanilla.phases();

    let mut estimate = initial_estimate(n, edges, params.c);
    stats.initial_estimate = estimate;
    if estimate < 1.0 {
        stats.note(format!("initial estimate {estimate:.3} clamped to 1"));
        estimate = 1.0;
    }
    let cap = phase_cap(n);
    for phase in 0.. {
        let (flags, any) = g.flag_non_loop_endpoints(m);
        let ongoing: Vec<bool> = m.view(flags).iter().map(|&f| f == 1).collect();
        if phase == 0 {
            stats.ongoing_after_prepare = ongoing.iter().filter(|&&o| o).count();
        }
        if observer.enabled() {
            let mut view = vanilla.phase_view(m, algorithm, flags);
            view.phase = stats.prepare_phases + phase;
            observer.phase_start(&view);
        }
        if !any {
            break;
        }
        if phase >= cap {
            return Err(Error::abort(
                algorithm,
                format!("exceeded the phase cap of {cap}"),
            ));
        }

        let budget = update_budget(estimate, edges, params);
        if budget.b_floored {
            stats.note(format!("b = {:.3} floored at 2", budget.b));
        }
        let sizes = Sizes::new(edges, estimate, params);
        let phase_tag = phase as u64;
        let universe = n.max(1) as u64;
        let block_hash = HashFn::sample(
            universe,
            sizes.blocks as u64,
            &mut seeds::stream(&[seed, tag::BLOCK_HASH, phase_tag]),
        );
        let table_hash = HashFn::sample(
            universe,
            sizes.table_size as u64,
            &mut seeds::stream(&[seed, tag::TABLE_HASH, phase_tag]),
        );
        let x = expand(
            m,
            &g,
            &ongoing,
            sizes,
            block_hash,
            table_hash,
            phase as u32 + 1,
        )?;
        if observer.enabled() {
            observer.expand_done(&ExpandTrace::capture(m, &g, &ongoing, &x, phase));
        }

        m.set_phase("vote");
        let p_lead = budget.b_effective.powf(-params.vote_exponent);
        let leader = vote(m, &g, &ongoing, &x, |u| {
            seeds::coin(p_lead, &[seed, tag::VOTE, phase_tag, u as u64])
        });

        let mut phase_stats = PhaseStats {
            estimate,
            b: budget.b_effective,
            block_size: sizes.block_size,
            table_size: sizes.table_size,
            inner_rounds: x.rounds,
            ongoing: ongoing.iter().filter(|&&o| o).count(),
            owners: x.block_of.iter().flatten().count(),
            live: (0..n)
                .filter(|&u| x.block_of[u].is_some() && x.dormant_round(m, u).is_none())
                .count(),
            tree_shortcut_iterations: 0,
        };
        m.set_phase("link");
        match marks {
            None => {
                link(m, &g, &x, leader);
                g.shortcut(m);
            }
            Some(marks) => {
                let outcome = forest::tree_link(m, &g, marks, &ongoing, &x, leader)?;
                if observer.enabled() {
                    observer.tree_link_done(&forest::TreeLinkTrace::capture(
                        m, &g, &ongoing, &x, leader, &outcome, phase,
                    ));
                }
                phase_stats.tree_shortcut_iterations = g.shortcut_until_flat(m);
            }
        }
        g.alter(m);
        m.end_round();
        stats.phases.push(phase_stats);

        estimate = budget.next_estimate;
        if estimate < 1.0 {
            stats.note("estimate fell below 1 and was clamped".to_string());
            estimate = 1.0;
        }
    }
    Ok(stats)
}

#[derive(Clone, Debug)]
pub struct CcOutcome {
    pub labels: Vec<usize>,
    pub stats: ContractionStats,
    pub counters: Counters,
    pub work_total: u64,
}

pub fn run_cc(
    g: &Graph,
    seed: u64,
    policy: WritePolicy,
    params: &ExpandParams,
) -> Result<CcOutcome> {
    run_cc_observed(g, seed, policy, params, &mut Silent)
}

pub fn run_cc_observed(
    g: &Graph,
    seed: u64,
    policy: WritePolicy,
    params: &ExpandParams,
    observer: &mut dyn Observer,
) -> Result<CcOutcome> {
    let g = g.normalized();
    let mut m = PramMachine::new(policy, seed);
    reserve_contraction_pool(&mut m, &g)?;
    let shared = SharedGraph::load(&mut m, &g);
    let stats = contract(&mut m, shared, None, params, seed, observer, "cc")?;
    Ok(CcOutcome {
        labels: shared.parents(&m),
        stats,
        counters: m.counters(),
        work_total: m.ledger().total(),
    })
}

/// Vertex processors, arc processors, and the expand pool of one processor per edge.
pub(crate) fn reserve_contraction_pool(m: &mut PramMachine, g: &Graph) -> Result<()> {
    m.reserve_pool((g.n() + g.arcs().len() + g.m()) as u64)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{oracle_components, same_partition};

    #[test]
    fn budget_arithmetic() {
        let u = update_budget(2f64.powi(18), 1 << 36, &ExpandParams::paper());
        assert!((u.b - 2.0).abs() < 1e-9);
        assert!((u.next_estimate - 2f64.powi(18) / 2f64.powf(0.25)).abs() < 1e-6);
        assert!(u.next_b > u.b);
        assert!(!u.b_floored);
    }

    #[test]
    fn budget_grows_as_the_estimate_shrinks() {
        let params = ExpandParams::paper();
        let mut est = 1024.0;
        let mut last_b = 0.0;
        while est >= 1.0 {
            let u = update_budget(est, 1 << 20, &params);
            assert!(u.b > last_b);
            last_b = u.b;
            est = u.next_estimate;
        }
    }

    #[test]
    fn estimate_recurrence_matches_closed_form() {
        let params = ExpandParams::paper();
        let (m, n1) = (2f64.powi(20), 2f64.powi(10));
        let mut est = n1;
        let mut phases = 0usize;
        while est >= 1.0 {
            est = update_budget(est, m as usize, &params).next_estimate;
            phases += 1;
        }
        let bound = closed_form_phase_bound(m, n1, &params);
        assert!(phases.abs_diff(bound) <= 1, "{phases} vs {bound}");
    }

    #[test]
    fn prepare_counts() {
        // log2 256 = 8 and ⌈4·log_{8/7} 8⌉ = ⌈62.29⌉.
        assert_eq!(prepare_phase_count(256, 512, 4), 63);
        assert_eq!(prepare_phase_count(256, 512, 0), 0);
        assert_eq!(prepare_phase_count(16, 1 << 20, 1), 0);
        assert_eq!(initial_estimate(16, 1 << 20, 1), 16.0);
        assert_eq!(initial_estimate(256, 512, 1), 32.0);
    }

    #[test]
    fn sizes_are_perfect_squares() {
        let params = ExpandParams::desk();
        for (m, est) in [(1000, 10.0), (64, 64.0), (1 << 15, 3.0)] {
            let s = Sizes::new(m, est, &params);
            assert_eq!(s.table_size * s.table_size, s.block_size);
            assert!(s.block_size >= 4);
            assert!(s.blocks * s.table_size <= m.max(s.table_size));
        }
        assert_eq!(perfect_square_at_least(10, 4), 16);
        assert_eq!(perfect_square_at_least(1, 4), 4);
        assert_eq!(perfect_square_at_least(49, 4), 49);
    }

    fn injective_setup(g: &Graph) -> (PramMachine, SharedGraph, Vec<bool>, Sizes, HashFn, HashFn) {
        let mut m = PramMachine::new(WritePolicy::LowestWriter, 1);
        let s = SharedGraph::load(&mut m, g);
        let n = g.n();
        let ongoing = vec![true; n];
        // Identity-like hashes: every vertex gets its own block and table slot.
        let p = crate::hash::next_prime_above(n as u64);
        let t = n.next_power_of_two().max(2);
        let sizes = Sizes {
            delta: 0.0,
            block_size: t * t,
            table_size: t,
            blocks: n,
        };
        let hb = HashFn::from_parts(1, 0, p, n as u64);
        let hv = HashFn::from_parts(1, 0, p, t as u64);
        (m, s, ongoing, sizes, hb, hv)
    }

    #[test]
    fn single_edge_is_complete_after_round_zero() {
        let g = Graph::from_edges(2, [(0, 1)]);
        let (mut m, s, ongoing, sizes, hb, hv) = injective_setup(&g);
        let x = expand(&mut m, &s, &ongoing, sizes, hb, hv, 1).unwrap();
        assert_eq!(x.entries(&m, 0, 0), vec![0, 1]);
        assert_eq!(x.rounds, 1);
        assert_eq!(x.entries(&m, 1, 0), vec![0, 1]);
    }

    #[test]
    fn path_tables_double_their_radius() {
        let g = Graph::from_edges(5, [(0, 1), (1, 2), (2, 3), (3, 4)]);
        let (mut m, s, ongoing, sizes, hb, hv) = injective_setup(&g);
        let x = expand(&mut m, &s, &ongoing, sizes, hb, hv, 1).unwrap();
        for u in 0..5 {
            for j in 0..x.history.len() {
                let radius = 1usize << j;
                let ball = crate::graph::bfs_ball(&g, u, radius);
                assert_eq!(x.entries(&m, j, u), ball, "u={u} j={j}");
            }
        }
        assert!(x.rounds <= ceil_log2(4) + 2);
    }

    #[test]
    fn colliding_neighbours_make_the_centre_dormant() {
        // 1 and 3 share a table slot under h(x) = x mod 2.
        let g = Graph::from_edges(4, [(0, 1), (0, 3)]);
        let mut m = PramMachine::new(WritePolicy::LowestWriter, 1);
        let s = SharedGraph::load(&mut m, &g);
        let sizes = Sizes {
            delta: 0.0,
            block_size: 4,
            table_size: 2,
            blocks: 4,
        };
        let hb = HashFn::from_parts(1, 0, 5, 4);
        let hv = HashFn::from_parts(1, 0, 5, 2);
        let x = expand(&mut m, &s, &[true; 4], sizes, hb, hv, 1).unwrap();
        assert_eq!(x.dormant_round(&m, 0), Some(0));
    }

    #[test]
    fn live_component_elects_its_minimum() {
        let g = Graph::from_edges(10, [(3, 5), (5, 9)]);
        let (mut m, s, _, sizes, hb, hv) = injective_setup(&g);
        let ongoing: Vec<bool> = (0..10).map(|v| [3, 5, 9].contains(&v)).collect();
        let x = expand(&mut m, &s, &ongoing, sizes, hb, hv, 1).unwrap();
        let leader = vote(&mut m, &s, &ongoing, &x, |_| false);
        let leaders: Vec<usize> = (0..10).filter(|&v| m.get(leader, v) == 1).collect();
        assert_eq!(leaders, vec![3]);
        link(&mut m, &s, &x, leader);
        assert_eq!(s.parents(&m)[5], 3);
        assert_eq!(s.parents(&m)[9], 3);
    }

    #[test]
    fn dormant_vertices_follow_their_coin() {
        let g = Graph::from_edges(2, [(0, 1)]);
        let mut m = PramMachine::new(WritePolicy::LowestWriter, 1);
        let s = SharedGraph::load(&mut m, &g);
        let sizes = Sizes {
            delta: 0.0,
            block_size: 4,
            table_size: 2,
            blocks: 1,
        };
        // Both vertices map to block 0, so neither owns it.
        let hb = HashFn::from_parts(1, 0, 3, 1);
        let hv = HashFn::from_parts(1, 0, 3, 2);
        let x = expand(&mut m, &s, &[true, true], sizes, hb, hv, 1).unwrap();
        assert!(x.block_of.iter().all(Option::is_none));
        let leader = vote(&mut m, &s, &[true, true], &x, |u| u == 1);
        assert_eq!(m.get(leader, 0), 0);
        assert_eq!(m.get(leader, 1), 1);
    }

    #[test]
    fn two_cliques_get_two_labels() {
        let mut edges = Vec::new();
        for base in [0, 8] {
            for a in 0..8 {
                for b in a + 1..8 {
                    edges.push((base + a, base + b));
                }
            }
        }
        let g = Graph::from_edges(16, edges);
        for policy in WritePolicy::ALL {
            for c in [0, 4] {
                let out = run_cc(&g, 5, policy, &ExpandParams::desk().with_c(c)).unwrap();
                assert!(same_partition(&out.labels, &oracle_components(&g)));
            }
        }
    }
}
