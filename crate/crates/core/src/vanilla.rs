//! The random-vote contraction: every phase, roots flip a fair coin, non-leaders
//! hook onto an adjacent leader, then trees are shortcut and arcs altered.
//! The spanning-forest variant hooks through a chosen arc and marks it.

use crate::error::{Error, Result};
use crate::graph::{oracle_components, Graph};
use crate::observe::{Observer, PhaseView};
use crate::pram::{Counters, PramMachine, Region, Word, WritePolicy};
use crate::seeds::{self, tag};
use crate::shared::{decode, encode, SharedGraph};

/// Maximum phases before a run is declared stuck.
pub fn phase_cap(n: usize) -> usize {
    64 * ceil_log2(n).max(1)
}

pub fn ceil_log2(x: usize) -> usize {
    if x <= 1 {
        0
    } else {
        (usize::BITS - (x - 1).leading_zeros()) as usize
    }
}

/// Spanning-forest bookkeeping: the arc each vertex hooks through, and per-arc marks.
#[derive(Clone, Copy, Debug)]
pub struct ForestMarks {
    pub chosen: Region,
    pub marked: Region,
}

impl ForestMarks {
    pub fn new(m: &mut PramMachine, g: &SharedGraph) -> Self {
        ForestMarks {
            chosen: m.alloc(g.n),
            marked: m.alloc(g.arc_count()),
        }
    }

    pub fn marked_arcs(&self, m: &PramMachine) -> Vec<usize> {
        (0..self.marked.len())
            .filter(|&i| m.get(self.marked, i) == 1)
            .collect()
    }

    /// Hooks every vertex with a chosen arc onto that arc's current head and marks the arc.
    pub(crate) fn hook(&self, m: &mut PramMachine, g: &SharedGraph) {
        for u in 0..g.n {
            if let Some(arc) = decode(m.get(self.chosen, u)) {
                let w = m.get(g.dst, arc);
                m.put(g.parent, u, w, g.vertex_pid(u));
                m.put(self.marked, arc, 1, g.vertex_pid(u));
            }
        }
        m.activate(g.n as u64);
        m.end_step();
    }
}

pub struct Vanilla {
    pub graph: SharedGraph,
    pub leader: Region,
    pub marks: Option<ForestMarks>,
    seed: u64,
    phases: usize,
}

impl Vanilla {
    pub fn new(m: &mut PramMachine, graph: SharedGraph, seed: u64, track_forest: bool) -> Self {
        let marks = track_forest.then(|| ForestMarks::new(m, &graph));
        Self::with_marks(graph, seed, marks, m)
    }

    /// Runs over `graph`, marking arcs into existing `marks` if given.
    pub fn with_marks(
        graph: SharedGraph,
        seed: u64,
        marks: Option<ForestMarks>,
        m: &mut PramMachine,
    ) -> Self {
        let leader = m.alloc(graph.n);
        Vanilla {
            graph,
            leader,
            marks,
            seed,
            phases: 0,
        }
    }

    pub fn phases(&self) -> usize {
        self.phases
    }

    /// Flags roots incident to a non-loop arc; the bool says whether any exist.
    pub fn ongoing(&self, m: &mut PramMachine) -> (Region, bool) {
        self.graph.flag_non_loop_endpoints(m)
    }

    /// One phase with seeded fair coins.
    pub fn phase(&mut self, m: &mut PramMachine) {
        let (seed, phase) = (self.seed, self.phases as u64);
        self.phase_with(m, |v| seeds::coin(0.5, &[seed, tag::VOTE, phase, v as u64]));
    }

    /// One phase where `is_leader(v)` supplies the vote of vertex `v`.
    pub fn phase_with(&mut self, m: &mut PramMachine, is_leader: impl Fn(usize) -> bool) {
        let g = self.graph;
        m.set_phase("vanilla");
        for v in 0..g.n {
            m.put(self.leader, v, is_leader(v) as Word, g.vertex_pid(v));
            if let Some(marks) = self.marks {
                m.put(marks.chosen, v, 0, g.vertex_pid(v));
            }
        }
        m.activate(g.n as u64);
        m.end_step();

        for i in 0..g.arc_count() {
            let (v, w) = g.arc(m, i);
            if m.get(self.leader, v) == 0 && m.get(self.leader, w) == 1 {
                match self.marks {
                    Some(marks) => m.put(marks.chosen, v, encode(i), i as u64),
                    None => m.put(g.parent, v, w as Word, i as u64),
                }
            }
        }
        m.activate(g.arc_count() as u64);
        m.end_step();
        if let Some(marks) = self.marks {
            marks.hook(m, &g);
        }

        g.shortcut(m);
        g.alter(m);
        m.end_round();
        self.phases += 1;
    }

    pub fn phase_view(
        &self,
        m: &PramMachine,
        algorithm: &'static str,
        ongoing: Region,
    ) -> PhaseView {
        PhaseView {
            algorithm,
            phase: self.phases,
            parents: self.graph.parents(m),
            current: self.graph.current_graph(m),
            ongoing: m.view(ongoing).iter().map(|&f| f == 1).collect(),
            forest_arcs: self.marks.map(|k| k.marked_arcs(m)),
        }
    }
}

#[derive(Clone, Debug)]
pub struct VanillaOutcome {
    pub labels: Vec<usize>,
    pub phases: usize,
    /// Ongoing-vertex count at the start of each phase, plus the final (zero) count.
    pub ongoing_history: Vec<usize>,
    pub counters: Counters,
    pub work_total: u64,
    /// Marked original edges (indices into the input's edge list), for forest runs.
    pub forest_edges: Option<Vec<usize>>,
}

/// Runs phases until no non-loop arc remains.
pub fn run_vanilla(g: &Graph, seed: u64, policy: WritePolicy) -> Result<VanillaOutcome> {
    run_vanilla_observed(g, seed, policy, false, &mut crate::observe::Silent)
}

pub fn run_vanilla_observed(
    g: &Graph,
    seed: u64,
    policy: WritePolicy,
    track_forest: bool,
    observer: &mut dyn Observer,
) -> Result<VanillaOutcome> {
    let input_arcs = g.arcs().len();
    let g = g.normalized();
    let mut m = PramMachine::new(policy, seed);
    m.reserve_pool((g.n() + g.arcs().len()) as u64)?;
    let shared = SharedGraph::load(&mut m, &g);
    let mut run = Vanilla::new(&mut m, shared, seed, track_forest);
    let cap = phase_cap(g.n());
    let mut ongoing_history = Vec::new();
    loop {
        let (flags, any) = run.ongoing(&mut m);
        ongoing_history.push(m.view(flags).iter().filter(|&&f| f == 1).count());
        if observer.enabled() {
            let label = if track_forest {
                "vanilla-sf"
            } else {
                "vanilla"
            };
            observer.phase_start(&run.phase_view(&m, label, flags));
        }
        if !any {
            break;
        }
        if run.phases() >= cap {
            return Err(Error::abort(
                "vanilla",
                format!("exceeded the phase cap of {cap}"),
            ));
        }
        run.phase(&mut m);
    }
    let forest_edges = run.marks.map(|marks| {
        marks
            .marked_arcs(&m)
            .into_iter()
            .filter(|&a| a < input_arcs)
            .map(|a| a / 2)
            .collect()
    });
    Ok(VanillaOutcome {
        labels: run.graph.parents(&m),
        phases: run.phases(),
        ongoing_history,
        counters: m.counters(),
        work_total: m.ledger().total(),
        forest_edges,
    })
}

/// Checks the phase-start shape: every tree is flat, and a vertex is incident to a
/// non-loop arc exactly when it is a root that is not alone among its component's roots.
pub fn check_phase_start(original: &Graph, view: &PhaseView) -> Result<(), String> {
    let parents = &view.parents;
    for (v, &p) in parents.iter().enumerate() {
        if parents[p] != p {
            return Err(format!(
                "phase {}: vertex {v} is not in a flat tree",
                view.phase
            ));
        }
    }
    let comp = oracle_components(original);
    let mut roots_in = vec![0usize; parents.len()];
    for (v, &p) in parents.iter().enumerate() {
        if p == v {
            roots_in[comp[v]] += 1;
        }
    }
    let mut incident = vec![false; parents.len()];
    for (u, v) in view.current.non_loop_edges() {
        incident[u] = true;
        incident[v] = true;
    }
    for v in 0..parents.len() {
        let ongoing = parents[v] == v && roots_in[comp[v]] > 1;
        if ongoing != incident[v] || view.ongoing[v] != incident[v] {
            return Err(format!(
                "phase {}: vertex {v} ongoing={ongoing} but incident to non-loop arc={}",
                view.phase, incident[v]
            ));
        }
    }
    Ok(())
}
