//! Spanning forest: the expand-based contraction where non-leaders hook along
//! shortest paths to leaders, so every hook follows an input edge.
//!
//! Tree-link grows, for each non-leader owner, the largest clean ball around it
//! by binary search over the expand snapshots, derives the distance to the
//! nearest leader from it, and hooks each vertex through an arc one step closer.

use std::collections::HashMap;
use std::fmt::{self, Write as _};

use crate::cc::{self, ContractionStats, ExpandParams, Expansion};
use crate::error::Result;
use crate::graph::{oracle_components, Graph, LabeledDigraph, ParseError};
use crate::hash::HashFn;
use crate::observe::{Observer, Silent};
use crate::pram::{Counters, PramMachine, Region, WritePolicy};
use crate::shared::{decode, encode, SharedGraph};
use crate::vanilla::ForestMarks;

/// Per-vertex results of one tree-link, in PRAM memory.
#[derive(Clone, Copy, Debug)]
pub struct TreeLinkOutcome {
    /// α + 1, so 0 stands for α = −1.
    pub alpha: Region,
    /// β + 1, 0 while unset.
    pub beta: Region,
    /// Ball tables, one per owned block.
    pub balls: Region,
    pub leader_neighbor: Region,
}

impl TreeLinkOutcome {
    pub fn alpha(&self, m: &PramMachine, u: usize) -> i64 {
        m.get(self.alpha, u) as i64 - 1
    }

    pub fn beta(&self, m: &PramMachine, u: usize) -> Option<usize> {
        decode(m.get(self.beta, u))
    }
}

pub fn tree_link(
    m: &mut PramMachine,
    g: &SharedGraph,
    marks: ForestMarks,
    ongoing: &[bool],
    x: &Expansion,
    leader: Region,
) -> Result<TreeLinkOutcome> {
    let n = g.n;
    let t = x.sizes.table_size;
    let h = x.table_hash;
    let is_leader = |m: &PramMachine, v: usize| m.get(leader, v) == 1;
    let alpha = m.alloc(n);
    let balls = m.alloc(x.sizes.blocks * t);
    let ball = |u: usize| balls.slice(x.block_of[u].expect("ball owner") * t, t);

    for (u, &live) in ongoing.iter().enumerate() {
        m.put(marks.chosen, u, 0, g.vertex_pid(u));
        if live && x.block_of[u].is_some() && !is_leader(m, u) {
            m.put(alpha, u, 1, g.vertex_pid(u));
            m.put(
                ball(u),
                h.eval(u as u64) as usize,
                encode(u),
                g.vertex_pid(u),
            );
        }
    }
    m.end_step();

    for j in (0..x.history.len()).rev() {
        let snapshot = x.history[j];
        let growing: Vec<usize> = (0..n).filter(|&u| m.get(alpha, u) > 0).collect();
        let members = |m: &PramMachine, u: usize| -> Vec<(usize, usize)> {
            m.view(ball(u))
                .iter()
                .enumerate()
                .filter_map(|(p, &c)| decode(c).map(|v| (p, v)))
                .collect()
        };

        let blocked = m.alloc(n);
        for &u in &growing {
            for (p, v) in members(m, u) {
                if !x.live_in_round(m, v, j) {
                    m.put(blocked, u, 1, (ball(u).base() + p) as u64);
                }
            }
        }
        m.end_step();

        // Candidate ball of radius α + 2^j: the union of radius-2^j tables.
        let candidate = m.alloc(x.sizes.blocks * t);
        let spread = |m: &PramMachine, u: usize| -> Vec<(usize, u64)> {
            let mut out = Vec::new();
            for (p, v) in members(m, u) {
                let b = x.block_of[v].expect("live members own blocks");
                for q in 0..t {
                    if let Some(w) = decode(m.get(snapshot, b * t + q)) {
                        out.push((w, (ball(u).base() * t + p * t + q) as u64));
                    }
                }
            }
            out
        };
        let trying: Vec<usize> = growing
            .iter()
            .copied()
            .filter(|&u| m.get(blocked, u) == 0)
            .collect();
        let cand = |u: usize| candidate.slice(x.block_of[u].unwrap() * t, t);
        for &u in &trying {
            for (w, pid) in spread(m, u) {
                m.put(cand(u), h.eval(w as u64) as usize, encode(w), pid);
            }
        }
        m.end_step();

        let bad = m.alloc(n);
        for &u in &trying {
            for (w, pid) in spread(m, u) {
                if m.get(cand(u), h.eval(w as u64) as usize) != encode(w) || is_leader(m, w) {
                    m.put(bad, u, 1, pid);
                }
            }
        }
        m.end_step();

        let clean: Vec<usize> = trying
            .iter()
            .copied()
            .filter(|&u| m.get(bad, u) == 0)
            .collect();
        for &u in &clean {
            for p in 0..t {
                let c = m.get(cand(u), p);
                m.put(ball(u), p, c, (ball(u).base() + p) as u64);
            }
            let a = m.get(alpha, u);
            m.put(alpha, u, a + (1 << j), g.vertex_pid(u));
        }
        m.end_step();
    }

    let leader_neighbor = m.alloc(n);
    for i in 0..g.arc_count() {
        let (v, w) = g.arc(m, i);
        if is_leader(m, v) {
            m.put(leader_neighbor, w, 1, i as u64);
        }
    }
    m.end_step();

    let beta = m.alloc(n);
    for u in (0..n).filter(|&u| ongoing[u]) {
        if is_leader(m, u) {
            m.put(beta, u, encode(0), g.vertex_pid(u));
        } else if m.get(alpha, u) > 0 {
            let near = m
                .view(ball(u))
                .iter()
                .any(|&c| decode(c).is_some_and(|v| m.get(leader_neighbor, v) == 1));
            if near {
                // β = α + 1, stored as β + 1.
                m.put(beta, u, m.get(alpha, u) + 1, g.vertex_pid(u));
            }
        } else if m.get(leader_neighbor, u) == 1 {
            m.put(beta, u, encode(1), g.vertex_pid(u));
        }
    }
    m.end_step();

    for i in 0..g.arc_count() {
        let (v, w) = g.arc(m, i);
        let (bv, bw) = (m.get(beta, v), m.get(beta, w));
        if bv != 0 && bw != 0 && bv == bw + 1 {
            m.put(marks.chosen, v, encode(i), i as u64);
        }
    }
    m.end_step();
    marks.hook(m, g);

    Ok(TreeLinkOutcome {
        alpha,
        beta,
        balls,
        leader_neighbor,
    })
}

/// Everything needed to check a tree-link against BFS on the phase's graph.
#[derive(Clone, Debug)]
pub struct TreeLinkTrace {
    pub phase: usize,
    pub current: Graph,
    pub ongoing: Vec<bool>,
    pub leaders: Vec<bool>,
    pub owns: Vec<bool>,
    pub dormant_round: Vec<Option<usize>>,
    pub alpha: Vec<i64>,
    pub beta: Vec<Option<usize>>,
    /// Sorted ball contents for vertices with α ≥ 0.
    pub balls: Vec<Vec<usize>>,
    pub table_hash: HashFn,
    /// Parents right after hooking, before shortcutting.
    pub parents: Vec<usize>,
}

impl TreeLinkTrace {
    pub(crate) fn capture(
        m: &PramMachine,
        g: &SharedGraph,
        ongoing: &[bool],
        x: &Expansion,
        leader: Region,
        out: &TreeLinkOutcome,
        phase: usize,
    ) -> Self {
        let n = g.n;
        let t = x.sizes.table_size;
        TreeLinkTrace {
            phase,
            current: g.current_graph(m),
            ongoing: ongoing.to_vec(),
            leaders: (0..n).map(|v| m.get(leader, v) == 1).collect(),
            owns: x.block_of.iter().map(Option::is_some).collect(),
            dormant_round: (0..n).map(|v| x.dormant_round(m, v)).collect(),
            alpha: (0..n).map(|v| out.alpha(m, v)).collect(),
            beta: (0..n).map(|v| out.beta(m, v)).collect(),
            balls: (0..n)
                .map(|u| match x.block_of[u] {
                    Some(b) if out.alpha(m, u) >= 0 => {
                        let mut e: Vec<usize> = m
                            .view(out.balls.slice(b * t, t))
                            .iter()
                            .filter_map(|&c| decode(c))
                            .collect();
                        e.sort_unstable();
                        e
                    }
                    _ => Vec::new(),
                })
                .collect(),
            table_hash: x.table_hash,
            parents: g.parents(m),
        }
    }

    /// Whether a vertex set avoids leaders, fully dormant vertices and hash collisions.
    pub fn is_clean(&self, set: &[usize]) -> bool {
        let mut slots = std::collections::HashSet::new();
        set.iter().all(|&v| {
            !self.leaders[v]
                && (!self.ongoing[v] || self.owns[v])
                && slots.insert(self.table_hash.eval(v as u64))
        })
    }
}

/// Shortcuts until flat; returns the flat digraph and the iterations used.
pub fn tree_shortcut(d: &LabeledDigraph) -> (LabeledDigraph, usize) {
    let mut cur = d.clone();
    let mut iterations = 0;
    loop {
        cur = cur.shortcut();
        iterations += 1;
        if cur.is_flat() {
            return (cur, iterations);
        }
    }
}

#[derive(Clone, Debug)]
pub struct SfOutcome {
    /// Indices into the input's edge list, ascending.
    pub forest: Vec<usize>,
    pub labels: Vec<usize>,
    pub stats: ContractionStats,
    pub counters: Counters,
    pub work_total: u64,
}

impl SfOutcome {
    pub fn forest_edges(&self, g: &Graph) -> Vec<(usize, usize)> {
        self.forest.iter().map(|&e| g.arcs()[2 * e]).collect()
    }
}

pub fn run_sf(
    g: &Graph,
    seed: u64,
    policy: WritePolicy,
    params: &ExpandParams,
) -> Result<SfOutcome> {
    run_sf_observed(g, seed, policy, params, &mut Silent)
}

pub fn run_sf_observed(
    g: &Graph,
    seed: u64,
    policy: WritePolicy,
    params: &ExpandParams,
    observer: &mut dyn Observer,
) -> Result<SfOutcome> {
    let input_arcs = g.arcs().len();
    let g = g.normalized();
    let mut m = PramMachine::new(policy, seed);
    cc::reserve_contraction_pool(&mut m, &g)?;
    let shared = SharedGraph::load(&mut m, &g);
    let marks = ForestMarks::new(&mut m, &shared);
    let stats = cc::contract(&mut m, shared, Some(marks), params, seed, observer, "sf")?;
    let mut forest: Vec<usize> = marks
        .marked_arcs(&m)
        .into_iter()
        .filter(|&a| a < input_arcs)
        .map(|a| a / 2)
        .collect();
    forest.dedup();
    Ok(SfOutcome {
        forest,
        labels: shared.parents(&m),
        stats,
        counters: m.counters(),
        work_total: m.ledger().total(),
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ForestViolation {
    /// The edge is not among the input edges (or appears more often than in the input).
    NotInInput { edge: (usize, usize) },
    /// The edge closes a cycle with earlier forest edges.
    Cycle { edge: (usize, usize) },
    /// A component is not spanned by exactly size − 1 forest edges.
    ComponentCount {
        representative: usize,
        expected: usize,
        found: usize,
    },
}

impl fmt::Display for ForestViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ForestViolation::NotInInput { edge: (u, v) } => {
                write!(f, "edge {u} {v} is not an input edge")
            }
            ForestViolation::Cycle { edge: (u, v) } => write!(f, "edge {u} {v} closes a cycle"),
            ForestViolation::ComponentCount {
                representative,
                expected,
                found,
            } => write!(
                f,
                "component of vertex {representative} needs {expected} forest edges, found {found}"
            ),
        }
    }
}

/// Checks that `forest` is a spanning forest of `g`; an empty result means it is.
pub fn verify_forest(g: &Graph, forest: &[(usize, usize)]) -> Vec<ForestViolation> {
    let n = g.n();
    let key = |u: usize, v: usize| (u.min(v), u.max(v));
    let mut available: HashMap<(usize, usize), usize> = HashMap::new();
    for (u, v) in g.edges() {
        *available.entry(key(u, v)).or_default() += 1;
    }
    let mut violations = Vec::new();
    let mut uf: Vec<usize> = (0..n).collect();
    fn find(uf: &mut [usize], mut x: usize) -> usize {
        while uf[x] != x {
            uf[x] = uf[uf[x]];
            x = uf[x];
        }
        x
    }
    let comp = oracle_components(g);
    let mut found: HashMap<usize, usize> = HashMap::new();
    for &(u, v) in forest {
        let slot = available.get_mut(&key(u, v)).filter(|c| **c > 0);
        match slot {
            Some(c) => *c -= 1,
            None => {
                violations.push(ForestViolation::NotInInput { edge: (u, v) });
                continue;
            }
        }
        let (ru, rv) = (find(&mut uf, u), find(&mut uf, v));
        if ru == rv {
            violations.push(ForestViolation::Cycle { edge: (u, v) });
        } else {
            uf[ru] = rv;
        }
        *found.entry(comp[u]).or_default() += 1;
    }
    let mut sizes: HashMap<usize, usize> = HashMap::new();
    for &c in &comp {
        *sizes.entry(c).or_default() += 1;
    }
    let mut reps: Vec<(usize, usize)> = sizes.into_iter().collect();
    reps.sort_unstable();
    for (rep, size) in reps {
        let got = found.get(&rep).copied().unwrap_or(0);
        if got != size - 1 {
            violations.push(ForestViolation::ComponentCount {
                representative: rep,
                expected: size - 1,
                found: got,
            });
        }
    }
    violations
}

/// Forest file: one `u v` line per edge, then `# trees=<k>`.
pub fn write_forest(n: usize, forest: &[(usize, usize)]) -> String {
    let mut out = String::new();
    for (u, v) in forest {
        let _ = writeln!(out, "{u} {v}");
    }
    let _ = writeln!(out, "# trees={}", n.saturating_sub(forest.len()));
    out
}

pub fn parse_forest(text: &str) -> Result<Vec<(usize, usize)>, ParseError> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
        .map(|(line, body)| crate::graph::parse_pair(line, body))
        .collect()
}
