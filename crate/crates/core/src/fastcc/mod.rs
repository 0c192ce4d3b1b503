//! Connected components with levels and growing per-root budgets.
//!
//! After `compact` (prepare, rename, first block grant) every round runs
//! maxlink and alter, a random level bump, equal-budget neighbour hashing, a
//! two-hop table merge, a second maxlink with shortcut and alter, a dormant
//! level bump and a fresh block grant. Rounds stop once nothing changed and no
//! merge could add an entry; the leftover graph is finished by the expand-based
//! algorithm.

mod compaction;

use std::collections::BTreeMap;

pub use compaction::{approximate_compaction, CompactionMap};

use crate::cc::{
    self, isqrt, perfect_square_at_least, prepare_phase_count, ContractionStats, ExpandParams,
    Profile,
};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::hash::HashFn;
use crate::observe::{Observer, Silent};
use crate::pram::{Counters, PramMachine, Region, Word, WritePolicy, Zone};
use crate::seeds::{self, mix, tag};
use crate::shared::{decode, encode, SharedGraph};
use crate::vanilla::{ceil_log2, Vanilla};

/// Largest single block the simulator agrees to grant.
const MAX_GRANT: f64 = (1u64 << 28) as f64;

#[derive(Clone, Debug, PartialEq)]
pub struct FastParams {
    pub profile: Profile,
    /// Prepare exponent, shared with the residual run.
    pub c: u32,
    /// Roots bump their level with probability b^-bump_exponent.
    pub bump_exponent: f64,
    /// b_ℓ = b₁^{growth^{ℓ-1}}.
    pub growth: f64,
    /// Parameters for the residual run.
    pub expand: ExpandParams,
}

impl FastParams {
    pub fn paper() -> Self {
        FastParams {
            profile: Profile::Paper,
            c: 200,
            bump_exponent: 0.06,
            growth: 1.01,
            expand: ExpandParams::paper().with_c(200),
        }
    }

    pub fn desk() -> Self {
        FastParams {
            profile: Profile::Desk,
            c: 4,
            bump_exponent: 0.5,
            growth: 1.05,
            expand: ExpandParams::desk(),
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
        self.expand.c = c;
        self
    }

    /// b₁ = max{m/n, log^c n} / log² n, at least 4.
    pub fn base_budget(&self, n: usize, m: usize) -> f64 {
        let log = (n.max(2) as f64).log2();
        let dense = m as f64 / n.max(1) as f64;
        (dense.max(log.powi(self.c as i32)) / (log * log)).max(4.0)
    }

    /// Highest level a run may reach before it is declared broken.
    pub fn level_cap(&self, n: usize, m: usize, b1: f64) -> u32 {
        let cap = match self.profile {
            Profile::Paper => {
                let ratio = (m as f64 / n.max(1) as f64).max(2.0);
                let inner = ((n.max(2) as f64).ln() / ratio.ln()).max(1.0);
                1000.0 * inner.log2().max(2.0)
            }
            Profile::Desk => {
                let inner = ((m.max(2) as f64).ln() / b1.ln()).max(2.0);
                3.0 + inner.ln() / 1.01f64.ln()
            }
        };
        cap.ceil() as u32
    }

    /// Real-valued budget of a level; level 0 has none.
    pub fn budget(&self, b1: f64, level: u32) -> f64 {
        if level == 0 {
            0.0
        } else {
            b1.powf(self.growth.powi(level as i32 - 1))
        }
    }
}

/// Cells actually granted for a budget: ⌈b⌉ rounded up to a perfect square ≥ 4.
pub fn grant_size(budget: f64) -> Option<usize> {
    (budget.is_finite() && budget <= MAX_GRANT)
        .then(|| perfect_square_at_least(budget.ceil() as usize, 4))
}

/// A block of √b tables of √b cells. Table 0 takes neighbour hashes, table 1
/// receives the two-hop merge and keeps it as added edges.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Block {
    pub region: Region,
    /// Level whose budget the block was granted for.
    pub level: u32,
    pub granted_round: usize,
}

impl Block {
    pub fn table_size(&self) -> usize {
        isqrt(self.region.len())
    }

    pub fn table(&self, i: usize) -> Region {
        let t = self.table_size();
        self.region.slice(i * t, t)
    }
}

/// Added edges from one merge: every entry is joined to the owner.
#[derive(Clone, Copy, Debug)]
struct AddedTable {
    owner: Region,
    entries: Region,
}

/// Per-round snapshot for observers.
#[derive(Clone, Debug)]
pub struct RoundTrace {
    pub round: usize,
    /// Current graph (arcs plus added edges) at the start of the round.
    pub start_graph: Graph,
    pub start_parents: Vec<usize>,
    /// Parents after the first maxlink and alter.
    pub linked_parents: Vec<usize>,
    /// Roots with a non-loop edge after the first maxlink and alter.
    pub active: Vec<bool>,
    /// Table after the merge for active roots; `[v]` for other vertices.
    pub tables: Vec<Vec<usize>>,
    /// Level increased this round, by coin or by dormancy.
    pub bumped: Vec<bool>,
    pub end_parents: Vec<usize>,
    pub end_levels: Vec<Word>,
    pub end_graph: Graph,
    pub broke: bool,
}

pub struct FastRun {
    pub graph: SharedGraph,
    pub level: Region,
    blocks: Vec<Option<Block>>,
    added: Vec<AddedTable>,
    rename: CompactionMap,
    candidates: Region,
    width: usize,
    stamp: u64,
    params: FastParams,
    b1: f64,
    level_cap: u32,
    seed: u64,
    rounds: usize,
    prepare_phases: usize,
    planned_prepare_phases: usize,
    notes: Vec<String>,
    bump_rule: Option<Box<dyn Fn(usize) -> bool>>,
    table_hash: Option<HashFn>,
}

/// Prepare, rename ongoing roots, set levels and grant every ongoing root a block of b₁.
pub fn compact(
    m: &mut PramMachine,
    g: SharedGraph,
    params: &FastParams,
    seed: u64,
    observer: &mut dyn Observer,
) -> Result<FastRun> {
    let n = g.n;
    let edges = g.arc_count() / 2;
    let planned = prepare_phase_count(n, edges, params.c);
    let mut vanilla = Vanilla::with_marks(g, mix(&[seed, tag::PREPARE]), None, m);
    let mut notes = Vec::new();
    let mut budget_phases = planned;
    let log_c = ((n.max(2) as f64).log2()).powi(params.c as i32);
    let rename_range = (2.0 * edges as f64 / log_c).floor();
    let ongoing = loop {
        while vanilla.phases() < budget_phases {
            let (flags, any) = vanilla.ongoing(m);
            if observer.enabled() {
                observer.phase_start(&vanilla.phase_view(m, "fastcc", flags));
            }
            if !any {
                break;
            }
            vanilla.phase(m);
        }
        let (flags, _) = vanilla.ongoing(m);
        let ongoing: Vec<bool> = m.view(flags).iter().map(|&f| f == 1).collect();
        let k = ongoing.iter().filter(|&&o| o).count();
        if planned == 0
            || 2.0 * k as f64 <= rename_range
            || k == 0
            || vanilla.phases() >= budget_phases + planned * 4
        {
            break ongoing;
        }
        notes.push(format!(
            "{k} survivors exceed the rename range {rename_range}; running more prepare phases"
        ));
        budget_phases += planned;
    };

    let rename = approximate_compaction(m, &ongoing, mix(&[seed, tag::COMPACTION]))?;
    let level = m.alloc(n);
    for v in 0..n {
        if g.is_root(m, v) {
            m.put(level, v, 1, g.vertex_pid(v));
        }
    }
    m.end_step();

    let b1 = params.base_budget(n, edges);
    let mut run = FastRun {
        graph: g,
        level,
        blocks: vec![None; n],
        added: Vec::new(),
        rename,
        candidates: m.alloc(0),
        width: 0,
        stamp: 0,
        params: params.clone(),
        b1,
        level_cap: params.level_cap(n, edges, b1),
        seed,
        rounds: 0,
        prepare_phases: vanilla.phases(),
        planned_prepare_phases: planned,
        notes,
        bump_rule: None,
        table_hash: None,
    };
    let order = run.rename.order();
    for v in order {
        run.grant(m, v, 1, 0)?;
    }
    Ok(run)
}

impl FastRun {
    /// A run starting from explicit parents and levels, with every root granted a
    /// block for its level. Intended for exercising single rounds.
    pub fn from_state(
        m: &mut PramMachine,
        g: &Graph,
        parents: &[usize],
        levels: &[Word],
        params: &FastParams,
        seed: u64,
    ) -> Result<Self> {
        let d = crate::graph::LabeledDigraph::from_parents(parents.to_vec());
        let shared = SharedGraph::load_with_parents(m, g, &d);
        let n = g.n();
        let level = m.alloc(n);
        for (v, &l) in levels.iter().enumerate() {
            m.put(level, v, l, v as u64);
        }
        m.end_step();
        let roots: Vec<bool> = (0..n).map(|v| parents[v] == v).collect();
        let rename = approximate_compaction(m, &roots, mix(&[seed, tag::COMPACTION]))?;
        let b1 = params.base_budget(n, g.m().max(1));
        let mut run = FastRun {
            graph: shared,
            level,
            blocks: vec![None; n],
            added: Vec::new(),
            rename,
            candidates: m.alloc(0),
            width: 0,
            stamp: 0,
            params: params.clone(),
            b1,
            level_cap: params.level_cap(n, g.m().max(1), b1),
            seed,
            rounds: 0,
            prepare_phases: 0,
            planned_prepare_phases: 0,
            notes: Vec::new(),
            bump_rule: None,
            table_hash: None,
        };
        for v in (0..n).filter(|&v| roots[v]) {
            run.grant(m, v, levels[v].max(1) as u32, 0)?;
        }
        Ok(run)
    }

    /// Replaces the level-bump coin with a fixed rule.
    pub fn set_bump_rule(&mut self, rule: impl Fn(usize) -> bool + 'static) {
        self.bump_rule = Some(Box::new(rule));
    }

    /// Uses one fixed table hash instead of the per-round samples.
    pub fn set_table_hash(&mut self, h: HashFn) {
        self.table_hash = Some(h);
    }

    pub fn b1(&self) -> f64 {
        self.b1
    }

    pub fn level_cap(&self) -> u32 {
        self.level_cap
    }

    pub fn rounds(&self) -> usize {
        self.rounds
    }

    pub fn rename(&self) -> &CompactionMap {
        &self.rename
    }

    pub fn block(&self, v: usize) -> Option<Block> {
        self.blocks[v]
    }

    pub fn levels(&self, m: &PramMachine) -> Vec<Word> {
        m.view(self.level).to_vec()
    }

    pub fn notes(&self) -> &[String] {
        &self.notes
    }

    fn level_of(&self, m: &PramMachine, v: usize) -> Word {
        m.get(self.level, v)
    }

    fn grant(&mut self, m: &mut PramMachine, v: usize, level: u32, round: usize) -> Result<()> {
        let budget = self.params.budget(self.b1, level);
        let size = grant_size(budget).ok_or_else(|| {
            Error::abort(
                "fastcc",
                format!("budget {budget:.3e} of level {level} is not grantable"),
            )
        })?;
        let region = m.allocate_block(size, Zone::new(round as u32, level))?;
        self.blocks[v] = Some(Block {
            region,
            level,
            granted_round: round,
        });
        Ok(())
    }

    /// Directed edges of the current graph: both arc directions and both directions
    /// of every added edge.
    fn edges(&self, m: &PramMachine) -> Vec<(usize, usize)> {
        let g = &self.graph;
        let mut out: Vec<(usize, usize)> = (0..g.arc_count()).map(|i| g.arc(m, i)).collect();
        for t in &self.added {
            let o = m.get(t.owner, 0) as usize;
            for &e in m.view(t.entries) {
                if let Some(e) = decode(e) {
                    out.push((o, e));
                    out.push((e, o));
                }
            }
        }
        out
    }

    /// The current graph as an undirected multigraph, arcs first.
    pub fn current_graph(&self, m: &PramMachine) -> Graph {
        let mut g = self.graph.current_graph(m);
        for t in &self.added {
            let o = m.get(t.owner, 0) as usize;
            for &e in m.view(t.entries) {
                if let Some(e) = decode(e) {
                    g.add_edge(o, e);
                }
            }
        }
        g
    }

    /// Two iterations of: every vertex adopts the highest-level parent among its
    /// neighbours (itself included) if that level beats its own.
    pub fn maxlink(&mut self, m: &mut PramMachine) -> bool {
        let a = self.maxlink_iteration(m);
        let b = self.maxlink_iteration(m);
        a || b
    }

    fn maxlink_iteration(&mut self, m: &mut PramMachine) -> bool {
        let g = self.graph;
        let n = g.n;
        let top = (0..n).map(|v| self.level_of(m, v)).max().unwrap_or(0) as usize;
        if top >= self.width {
            self.width = (top + 1).max(8) * 2;
            self.candidates = m.alloc(n * self.width);
        }
        self.stamp += 1;
        let w = self.width;
        let tagged = |stamp: u64, x: usize| (stamp << 32) | encode(x);
        let edges = self.edges(m);
        for (k, &(v, u)) in edges.iter().enumerate() {
            let x = g.parent_of(m, u);
            let cell = v * w + self.level_of(m, x) as usize;
            m.put(self.candidates, cell, tagged(self.stamp, x), k as u64);
        }
        for v in 0..n {
            let x = g.parent_of(m, v);
            let cell = v * w + self.level_of(m, x) as usize;
            m.put(
                self.candidates,
                cell,
                tagged(self.stamp, x),
                (edges.len() + v) as u64,
            );
        }
        m.activate((edges.len() + n) as u64);
        m.end_step();

        let mut changed = false;
        for v in 0..n {
            let row = self.candidates.slice(v * w, w);
            let best = m
                .view(row)
                .iter()
                .rev()
                .find(|&&c| c >> 32 == self.stamp)
                .copied();
            let Some(best) = best.and_then(|c| decode(c & 0xffff_ffff)) else {
                continue;
            };
            if self.level_of(m, best) > self.level_of(m, v) && g.parent_of(m, v) != best {
                m.put(g.parent, v, best as Word, g.vertex_pid(v));
                changed = true;
            }
        }
        m.activate((n * w) as u64);
        m.end_step();
        changed
    }

    /// Moves every arc and added edge endpoint to its parent, in one step.
    fn alter_all(&self, m: &mut PramMachine) {
        let g = &self.graph;
        for i in 0..g.arc_count() {
            let (v, w) = g.arc(m, i);
            let (pv, pw) = (g.parent_of(m, v), g.parent_of(m, w));
            if pv != v {
                m.put(g.src, i, pv as Word, i as u64);
            }
            if pw != w {
                m.put(g.dst, i, pw as Word, i as u64);
            }
        }
        let mut pid = g.arc_count() as u64;
        for t in &self.added {
            let o = m.get(t.owner, 0) as usize;
            m.put(t.owner, 0, g.parent_of(m, o) as Word, pid);
            for i in 0..t.entries.len() {
                if let Some(e) = decode(m.get(t.entries, i)) {
                    m.put(t.entries, i, encode(g.parent_of(m, e)), pid + 1 + i as u64);
                }
            }
            pid += 1 + t.entries.len() as u64;
        }
        m.activate(pid);
        m.end_step();
    }

    /// Roots with a non-loop edge, via one flag-writing step.
    fn active_roots(&self, m: &mut PramMachine, edges: &[(usize, usize)]) -> Vec<bool> {
        let flags = m.alloc(self.graph.n);
        for (k, &(v, w)) in edges.iter().enumerate() {
            if v != w {
                m.put(flags, v, 1, k as u64);
            }
        }
        m.activate(edges.len() as u64);
        m.end_step();
        (0..self.graph.n)
            .map(|v| m.get(flags, v) == 1 && self.graph.is_root(m, v))
            .collect()
    }

    fn round_hash(&self, round: usize, level: u32, t: usize) -> HashFn {
        match self.table_hash {
            Some(h) => h,
            None => HashFn::sample(
                self.graph.n.max(1) as u64,
                t as u64,
                &mut seeds::stream(&[self.seed, tag::ROUND_HASH, round as u64, level as u64]),
            ),
        }
    }

    /// One round. Returns whether the break condition held.
    pub fn round(&mut self, m: &mut PramMachine, observer: &mut dyn Observer) -> Result<bool> {
        let r = self.rounds + 1;
        let g = self.graph;
        let n = g.n;
        let watch = observer.enabled();
        let start = watch.then(|| (self.current_graph(m), g.parents(m)));

        m.set_phase("maxlink");
        let mut changed = self.maxlink(m);
        self.alter_all(m);
        let linked_parents = watch.then(|| g.parents(m));
        let edges = self.edges(m);
        let active = self.active_roots(m, &edges);
        let active_list: Vec<usize> = (0..n).filter(|&v| active[v]).collect();

        m.set_phase("bump");
        let mut bumped = vec![false; n];
        for &v in &active_list {
            let budget = self
                .params
                .budget(self.b1, self.blocks[v].map_or(1, |b| b.level));
            let bump = match &self.bump_rule {
                Some(rule) => rule(v),
                None => seeds::coin(
                    budget.powf(-self.params.bump_exponent),
                    &[self.seed, tag::BUMP, r as u64, v as u64],
                ),
            };
            if bump {
                m.put(self.level, v, self.level_of(m, v) + 1, g.vertex_pid(v));
                bumped[v] = true;
                changed = true;
            }
        }
        m.end_step();

        m.set_phase("expand");
        for &v in &active_list {
            let stale = self.blocks[v].is_none_or(|b| b.granted_round + 1 != r);
            if stale {
                let level = self.blocks[v].map_or(1, |b| b.level);
                self.grant(m, v, level, r)?;
            }
        }
        let block = |v: usize| self.blocks[v].expect("active roots hold blocks");
        let mut hashes: BTreeMap<u32, HashFn> = BTreeMap::new();
        for &v in &active_list {
            let b = block(v);
            hashes
                .entry(b.level)
                .or_insert_with(|| self.round_hash(r, b.level, b.table_size()));
        }
        let slot =
            |v: usize, x: usize| -> usize { hashes[&block(v).level].eval(x as u64) as usize };
        let same_budget = |v: usize, w: usize| {
            active[w] && self.blocks[w].map(|b| b.level) == self.blocks[v].map(|b| b.level)
        };

        // Neighbour roots of equal budget, and the vertex itself.
        let writes: Vec<(usize, usize, u64)> = edges
            .iter()
            .enumerate()
            .filter(|&(_, &(v, w))| active[v] && v != w && same_budget(v, w))
            .map(|(k, &(v, w))| (v, w, k as u64))
            .chain(
                active_list
                    .iter()
                    .map(|&v| (v, v, (edges.len() + v) as u64)),
            )
            .collect();
        for &(v, w, pid) in &writes {
            m.put(block(v).table(0), slot(v, w), encode(w), pid);
        }
        m.activate(writes.len() as u64);
        m.end_step();
        let dormant = m.alloc(n);
        for &(v, w, pid) in &writes {
            if m.get(block(v).table(0), slot(v, w)) != encode(w) {
                m.put(dormant, v, 1, pid);
            }
        }
        m.end_step();
        for &v in &active_list {
            let h = block(v).table(0);
            for p in 0..h.len() {
                if decode(m.get(h, p)).is_some_and(|w| m.get(dormant, w) == 1) {
                    m.put(dormant, v, 1, (block(v).region.base() + p) as u64);
                }
            }
        }
        m.end_step();

        // Two-hop merge from the old tables into table 1.
        let unsettled = m.alloc(1);
        let mut merges: Vec<(usize, usize, u64)> = Vec::new();
        for &v in &active_list {
            let bv = block(v);
            let (old, new, t) = (bv.table(0), bv.table(1), bv.table_size());
            for p in 0..t {
                let Some(w) = decode(m.get(old, p)) else {
                    continue;
                };
                merges.push((v, w, (bv.region.base() + bv.region.len() + p) as u64));
                let Some(bw) = self.blocks[w].filter(|_| active[w]) else {
                    continue;
                };
                let wold = bw.table(0);
                for q in 0..wold.len() {
                    if let Some(u) = decode(m.get(wold, q)) {
                        merges.push((v, u, (bv.region.base() + p * t + q) as u64));
                    }
                }
            }
            let _ = new;
        }
        for &(v, u, pid) in &merges {
            let b = block(v);
            let s = slot(v, u);
            m.put(b.table(1), s, encode(u), pid);
            if m.get(b.table(0), s) != encode(u) {
                m.put(unsettled, 0, 1, pid);
            }
        }
        m.activate(merges.len() as u64);
        m.end_step();
        for &(v, u, pid) in &merges {
            if m.get(block(v).table(1), slot(v, u)) != encode(u) {
                m.put(dormant, v, 1, pid);
            }
        }
        m.end_step();
        if !active_list.is_empty() {
            let owners = m.alloc(active_list.len());
            for (i, &v) in active_list.iter().enumerate() {
                m.put(owners, i, v as Word, g.vertex_pid(v));
                self.added.push(AddedTable {
                    owner: owners.slice(i, 1),
                    entries: block(v).table(1),
                });
            }
            m.end_step();
        }
        let tables = watch.then(|| {
            (0..n)
                .map(|v| {
                    if active[v] {
                        let mut e: Vec<usize> = m
                            .view(block(v).table(1))
                            .iter()
                            .filter_map(|&x| decode(x))
                            .collect();
                        e.sort_unstable();
                        e
                    } else {
                        vec![v]
                    }
                })
                .collect::<Vec<_>>()
        });

        m.set_phase("maxlink");
        changed |= self.maxlink(m);
        changed |= g.shortcut(m);
        self.alter_all(m);

        m.set_phase("bump");
        for &v in &active_list {
            if g.is_root(m, v) && m.get(dormant, v) == 1 && !bumped[v] {
                m.put(self.level, v, self.level_of(m, v) + 1, g.vertex_pid(v));
                bumped[v] = true;
                changed = true;
            }
        }
        m.end_step();

        m.set_phase("grant");
        let survivors: Vec<usize> = active_list
            .iter()
            .copied()
            .filter(|&v| g.is_root(m, v))
            .collect();
        let mut by_level: BTreeMap<u32, Vec<bool>> = BTreeMap::new();
        for &v in &survivors {
            let id = self.rename.get(v).unwrap_or(v);
            let flags = by_level
                .entry(self.level_of(m, v) as u32)
                .or_insert_with(|| vec![false; self.rename.range().max(n)]);
            flags[id] = true;
        }
        let renamed_to: BTreeMap<usize, usize> = survivors
            .iter()
            .map(|&v| (self.rename.get(v).unwrap_or(v), v))
            .collect();
        for (level, flags) in by_level {
            if level > self.level_cap {
                return Err(Error::abort(
                    "fastcc",
                    format!("level {level} exceeds the cap {}", self.level_cap),
                ));
            }
            let index = approximate_compaction(
                m,
                &flags,
                mix(&[self.seed, tag::COMPACTION, r as u64, level as u64]),
            )?;
            for id in index.order() {
                self.grant(m, renamed_to[&id], level, r)?;
            }
        }

        let broke = !changed && m.get(unsettled, 0) == 0;
        self.rounds = r;
        if let (Some((start_graph, start_parents)), Some(linked_parents), Some(tables)) =
            (start, linked_parents, tables)
        {
            observer.fast_round(&RoundTrace {
                round: r,
                start_graph,
                start_parents,
                linked_parents,
                active,
                tables,
                bumped,
                end_parents: g.parents(m),
                end_levels: self.levels(m),
                end_graph: self.current_graph(m),
                broke,
            });
        }
        Ok(broke)
    }

    /// Non-loop edges left for the residual run.
    pub fn residual_graph(&self, m: &PramMachine) -> Graph {
        let all = self.current_graph(m);
        Graph::from_edges(all.n(), all.non_loop_edges())
    }
}

#[derive(Clone, Debug)]
pub struct FastOutcome {
    pub labels: Vec<usize>,
    pub planned_prepare_phases: usize,
    pub prepare_phases: usize,
    pub rounds: usize,
    pub b1: f64,
    pub level_cap: u32,
    pub max_level: Word,
    pub residual: ContractionStats,
    pub counters: Counters,
    pub work_total: u64,
    pub notes: Vec<String>,
}

/// Round cap: 64·⌈log₂ n⌉.
pub fn round_cap(n: usize) -> usize {
    64 * ceil_log2(n).max(1)
}

pub fn run_fast_cc(
    g: &Graph,
    seed: u64,
    policy: WritePolicy,
    params: &FastParams,
) -> Result<FastOutcome> {
    run_fast_cc_observed(g, seed, policy, params, &mut Silent)
}

pub fn run_fast_cc_observed(
    g: &Graph,
    seed: u64,
    policy: WritePolicy,
    params: &FastParams,
    observer: &mut dyn Observer,
) -> Result<FastOutcome> {
    let g = g.normalized();
    let mut m = PramMachine::new(policy, seed);
    cc::reserve_contraction_pool(&mut m, &g)?;
    let shared = SharedGraph::load(&mut m, &g);
    let mut run = compact(&mut m, shared, params, seed, observer)?;
    let cap = round_cap(g.n());
    loop {
        if run.rounds() >= cap {
            return Err(Error::abort(
                "fastcc",
                format!("exceeded the round cap of {cap}"),
            ));
        }
        if run.round(&mut m, observer)? {
            break;
        }
    }

    let parents = shared.parents(&m);
    let residual = run.residual_graph(&m).normalized();
    m.reserve_pool((residual.n() + residual.arcs().len() + residual.m()) as u64)?;
    let res_shared = SharedGraph::load(&mut m, &residual);
    let stats = cc::contract(
        &mut m,
        res_shared,
        None,
        &params.expand,
        mix(&[seed, tag::RESIDUAL]),
        observer,
        "fastcc-residual",
    )?;
    let res_parents = res_shared.parents(&m);
    let labels = parents.iter().map(|&p| res_parents[p]).collect();
    let max_level = run.levels(&m).into_iter().max().unwrap_or(0);
    Ok(FastOutcome {
        labels,
        planned_prepare_phases: run.planned_prepare_phases,
        prepare_phases: run.prepare_phases,
        rounds: run.rounds(),
        b1: run.b1,
        level_cap: run.level_cap,
        max_level,
        residual: stats,
        counters: m.counters(),
        work_total: m.ledger().total(),
        notes: run.notes.clone(),
    })
}
