//! Sequential ground truth: BFS balls, union-find components, diameters, forest checks.

use std::collections::VecDeque;
use std::fmt;

use super::Graph;

/// Compressed adjacency lists. Self-loops are dropped; parallel edges are kept.
#[derive(Clone, Debug)]
pub struct Adjacency {
    offsets: Vec<usize>,
    targets: Vec<usize>,
}

impl Adjacency {
    pub fn new(g: &Graph) -> Self {
        Self::from_arcs(g.n(), g.arcs().iter().copied())
    }

    /// Builds from arbitrary arcs; callers supply both directions where needed.
    pub fn from_arcs(n: usize, arcs: impl Iterator<Item = (usize, usize)> + Clone) -> Self {
        let mut offsets = vec![0usize; n + 1];
        for (u, v) in arcs.clone() {
            if u != v {
                offsets[u + 1] += 1;
            }
        }
        for i in 0..n {
            offsets[i + 1] += offsets[i];
        }
        let mut fill = offsets.clone();
        let mut targets = vec![0usize; offsets[n]];
        for (u, v) in arcs {
            if u != v {
                targets[fill[u]] = v;
                fill[u] += 1;
            }
        }
        Adjacency { offsets, targets }
    }

    pub fn n(&self) -> usize {
        self.offsets.len() - 1
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.targets[self.offsets[v]..self.offsets[v + 1]]
    }

    /// Hop distances from the nearest source; `None` when unreachable.
    pub fn distances(&self, sources: impl IntoIterator<Item = usize>) -> Vec<Option<usize>> {
        let mut dist = vec![None; self.n()];
        let mut queue = VecDeque::new();
        for s in sources {
            if dist[s].is_none() {
                dist[s] = Some(0);
                queue.push_back(s);
            }
        }
        while let Some(v) = queue.pop_front() {
            let d = dist[v].unwrap_or(0);
            for &w in self.neighbors(v) {
                if dist[w].is_none() {
                    dist[w] = Some(d + 1);
                    queue.push_back(w);
                }
            }
        }
        dist
    }

    /// Sorted vertices within `radius` hops of `u`.
    pub fn ball(&self, u: usize, radius: usize) -> Vec<usize> {
        let mut seen = vec![false; self.n()];
        let mut frontier = vec![u];
        let mut out = vec![u];
        seen[u] = true;
        for _ in 0..radius {
            let mut next = Vec::new();
            for &v in &frontier {
                for &w in self.neighbors(v) {
                    if !seen[w] {
                        seen[w] = true;
                        next.push(w);
                        out.push(w);
                    }
                }
            }
            if next.is_empty() {
                break;
            }
            frontier = next;
        }
        out.sort_unstable();
        out
    }

    pub fn eccentricity(&self, u: usize) -> usize {
        self.distances([u]).into_iter().flatten().max().unwrap_or(0)
    }

    /// Largest eccentricity over all vertices.
    pub fn diameter(&self) -> usize {
        (0..self.n())
            .map(|u| self.eccentricity(u))
            .max()
            .unwrap_or(0)
    }
}

/// Sorted vertex set `{v : dist(u, v) ≤ radius}`.
pub fn bfs_ball(g: &Graph, u: usize, radius: usize) -> Vec<usize> {
    Adjacency::new(g).ball(u, radius)
}

pub fn bfs_distances(g: &Graph, sources: impl IntoIterator<Item = usize>) -> Vec<Option<usize>> {
    Adjacency::new(g).distances(sources)
}

/// Maximum component diameter.
pub fn diameter(g: &Graph) -> usize {
    Adjacency::new(g).diameter()
}

fn find(parent: &mut [usize], mut v: usize) -> usize {
    while parent[v] != v {
        parent[v] = parent[parent[v]];
        v = parent[v];
    }
    v
}

/// Component labels by union-find; each vertex is labelled with its component's minimum id.
pub fn oracle_components(g: &Graph) -> Vec<usize> {
    let mut parent: Vec<usize> = (0..g.n()).collect();
    for (u, v) in g.edges() {
        let (a, b) = (find(&mut parent, u), find(&mut parent, v));
        if a != b {
            let (lo, hi) = if a < b { (a, b) } else { (b, a) };
            parent[hi] = lo;
        }
    }
    (0..g.n()).map(|v| find(&mut parent, v)).collect()
}

pub fn component_count(g: &Graph) -> usize {
    let labels = oracle_components(g);
    labels.iter().enumerate().filter(|&(v, &l)| v == l).count()
}

/// Relabels each class by its minimum member.
pub fn canonical_labels(labels: &[usize]) -> Vec<usize> {
    let mut min_of = std::collections::HashMap::new();
    for (v, &l) in labels.iter().enumerate() {
        min_of.entry(l).or_insert(v);
    }
    labels.iter().map(|l| min_of[l]).collect()
}

pub fn same_partition(a: &[usize], b: &[usize]) -> bool {
    a.len() == b.len() && canonical_labels(a) == canonical_labels(b)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DigraphViolation {
    Cycle {
        vertex: usize,
    },
    ParentOutOfRange {
        vertex: usize,
        parent: usize,
    },
    LevelNotIncreasing {
        vertex: usize,
        level: u64,
        parent_level: u64,
    },
}

impl fmt::Display for DigraphViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DigraphViolation::Cycle { vertex } => {
                write!(f, "acyclicity: vertex {vertex} lies on a parent cycle")
            }
            DigraphViolation::ParentOutOfRange { vertex, parent } => {
                write!(f, "vertex {vertex} has out-of-range parent {parent}")
            }
            DigraphViolation::LevelNotIncreasing {
                vertex,
                level,
                parent_level,
            } => write!(
                f,
                "level: non-root {vertex} has level {level}, parent level {parent_level}"
            ),
        }
    }
}

impl std::error::Error for DigraphViolation {}

/// Checks that the only cycles are self-loops and, with levels, that each non-root's
/// level is strictly below its parent's.
pub fn check_digraph_invariants(
    parent: &[usize],
    levels: Option<&[u64]>,
) -> Result<(), DigraphViolation> {
    let n = parent.len();
    for (v, &p) in parent.iter().enumerate() {
        if p >= n {
            return Err(DigraphViolation::ParentOutOfRange {
                vertex: v,
                parent: p,
            });
        }
    }
    // 0 = unvisited, 1 = on the current walk, 2 = known to reach a root.
    let mut state = vec![0u8; n];
    for start in 0..n {
        let mut walk = Vec::new();
        let mut v = start;
        while state[v] == 0 {
            state[v] = 1;
            walk.push(v);
            if parent[v] == v {
                break;
            }
            v = parent[v];
        }
        if state[v] == 1 && parent[v] != v {
            return Err(DigraphViolation::Cycle { vertex: v });
        }
        for u in walk {
            state[u] = 2;
        }
    }
    if let Some(levels) = levels {
        for (v, &p) in parent.iter().enumerate() {
            if p != v && levels[v] >= levels[p] {
                return Err(DigraphViolation::LevelNotIncreasing {
                    vertex: v,
                    level: levels[v],
                    parent_level: levels[p],
                });
            }
        }
    }
    Ok(())
}
