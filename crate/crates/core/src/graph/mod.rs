//! Multigraphs stored as mirrored arc pairs, parent-pointer forests, and the
//! sequential reference versions of the building blocks.

mod io;
mod oracle;

pub(crate) use io::parse_pair;
pub use io::{parse_graph, parse_labels, write_graph, write_labels, ParseError};
pub use oracle::{
    bfs_ball, bfs_distances, canonical_labels, check_digraph_invariants, component_count, diameter,
    oracle_components, same_partition, Adjacency, DigraphViolation,
};

/// Undirected multigraph. Edge `i` is stored as arcs `2i` and `2i + 1`, which are mirrors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    arcs: Vec<(usize, usize)>,
}

impl Graph {
    pub fn new(n: usize) -> Self {
        Graph {
            n,
            arcs: Vec::new(),
        }
    }

    /// Panics if an endpoint is out of range.
    pub fn from_edges(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Self {
        let mut g = Graph::new(n);
        for (u, v) in edges {
            g.add_edge(u, v);
        }
        g
    }

    pub fn add_edge(&mut self, u: usize, v: usize) {
        assert!(
            u < self.n && v < self.n,
            "edge ({u}, {v}) outside {} vertices",
            self.n
        );
        self.arcs.push((u, v));
        self.arcs.push((v, u));
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of undirected edges, self-loops included.
    pub fn m(&self) -> usize {
        self.arcs.len() / 2
    }

    pub fn arcs(&self) -> &[(usize, usize)] {
        &self.arcs
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.arcs.iter().step_by(2).copied()
    }

    pub fn non_loop_edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.edges().filter(|(u, v)| u != v)
    }

    /// Index of the arc running the other way along the same edge.
    pub fn mirror(arc: usize) -> usize {
        arc ^ 1
    }

    /// Pads with self-loops until there are at least `2n` edges.
    pub fn normalized(&self) -> Graph {
        let mut g = self.clone();
        let mut next = 0;
        while g.m() < 2 * g.n {
            g.add_edge(next, next);
            next = (next + 1) % g.n;
        }
        g
    }

    /// Disjoint union; the vertices of `other` are shifted past this graph's.
    pub fn disjoint_union(&self, other: &Graph) -> Graph {
        let offset = self.n;
        let mut g = Graph::from_edges(self.n + other.n, self.edges());
        for (u, v) in other.edges() {
            g.add_edge(u + offset, v + offset);
        }
        g
    }
}

/// Parent pointers; roots point at themselves.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LabeledDigraph {
    parent: Vec<usize>,
}

impl LabeledDigraph {
    pub fn identity(n: usize) -> Self {
        LabeledDigraph {
            parent: (0..n).collect(),
        }
    }

    pub fn from_parents(parent: Vec<usize>) -> Self {
        LabeledDigraph { parent }
    }

    pub fn parents(&self) -> &[usize] {
        &self.parent
    }

    pub fn into_parents(self) -> Vec<usize> {
        self.parent
    }

    pub fn len(&self) -> usize {
        self.parent.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parent.is_empty()
    }

    pub fn is_root(&self, v: usize) -> bool {
        self.parent[v] == v
    }

    pub fn roots(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.parent.len()).filter(|&v| self.is_root(v))
    }

    /// Root of `v`'s tree. Assumes acyclicity.
    pub fn root_of(&self, mut v: usize) -> usize {
        while self.parent[v] != v {
            v = self.parent[v];
        }
        v
    }

    /// Depth of `v`: number of parent hops to its root.
    pub fn depth(&self, mut v: usize) -> usize {
        let mut d = 0;
        while self.parent[v] != v {
            v = self.parent[v];
            d += 1;
        }
        d
    }

    /// Maximum depth over all vertices. Flat forests have height at most one.
    pub fn height(&self) -> usize {
        (0..self.parent.len())
            .map(|v| self.depth(v))
            .max()
            .unwrap_or(0)
    }

    pub fn is_flat(&self) -> bool {
        self.parent.iter().all(|&p| self.parent[p] == p)
    }

    /// Simultaneous `p[v] := p[p[v]]`.
    pub fn shortcut(&self) -> LabeledDigraph {
        LabeledDigraph {
            parent: self.parent.iter().map(|&p| self.parent[p]).collect(),
        }
    }

    /// Root of every vertex, i.e. the partition the forest encodes.
    pub fn labels(&self) -> Vec<usize> {
        (0..self.parent.len()).map(|v| self.root_of(v)).collect()
    }
}

/// Replaces every arc `(v, w)` by `(p[v], p[w])`; arc indices are preserved.
pub fn alter(g: &Graph, d: &LabeledDigraph) -> Graph {
    let p = d.parents();
    Graph {
        n: g.n,
        arcs: g.arcs.iter().map(|&(v, w)| (p[v], p[w])).collect(),
    }
}
