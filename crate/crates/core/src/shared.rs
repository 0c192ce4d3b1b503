//! A graph and parent forest living in PRAM memory, with the bulk building blocks
//! every algorithm shares: shortcut, alter and ongoing detection.

use crate::graph::{Graph, LabeledDigraph};
use crate::pram::{PramMachine, Region, Word};

/// Sentinel for "no vertex" in cells that otherwise hold a vertex id plus one.
pub const EMPTY: Word = 0;

#[inline]
pub fn encode(v: usize) -> Word {
    v as Word + 1
}

#[inline]
pub fn decode(w: Word) -> Option<usize> {
    (w != EMPTY).then(|| w as usize - 1)
}

#[derive(Clone, Copy, Debug)]
pub struct SharedGraph {
    pub n: usize,
    /// Arc `i` runs from `src[i]` to `dst[i]`; arc `i ^ 1` is its mirror.
    pub src: Region,
    pub dst: Region,
    pub parent: Region,
}

impl SharedGraph {
    /// Copies `g` into fresh memory with every vertex its own root.
    pub fn load(machine: &mut PramMachine, g: &Graph) -> Self {
        let parents = LabeledDigraph::identity(g.n());
        Self::load_with_parents(machine, g, &parents)
    }

    pub fn load_with_parents(machine: &mut PramMachine, g: &Graph, d: &LabeledDigraph) -> Self {
        let n = g.n();
        let arcs = g.arcs();
        let src = machine.alloc(arcs.len());
        let dst = machine.alloc(arcs.len());
        let parent = machine.alloc(n);
        for (i, &(u, v)) in arcs.iter().enumerate() {
            machine.put(src, i, u as Word, i as u64);
            machine.put(dst, i, v as Word, i as u64);
        }
        for (v, &p) in d.parents().iter().enumerate() {
            machine.put(parent, v, p as Word, v as u64);
        }
        machine.activate((arcs.len() + n) as u64);
        machine.end_step();
        SharedGraph {
            n,
            src,
            dst,
            parent,
        }
    }

    pub fn arc_count(&self) -> usize {
        self.src.len()
    }

    /// Processor id for vertex-driven work, disjoint from arc processor ids.
    #[inline]
    pub fn vertex_pid(&self, v: usize) -> u64 {
        (self.arc_count() + v) as u64
    }

    #[inline]
    pub fn arc(&self, m: &PramMachine, i: usize) -> (usize, usize) {
        (m.get(self.src, i) as usize, m.get(self.dst, i) as usize)
    }

    #[inline]
    pub fn parent_of(&self, m: &PramMachine, v: usize) -> usize {
        m.get(self.parent, v) as usize
    }

    #[inline]
    pub fn is_root(&self, m: &PramMachine, v: usize) -> bool {
        self.parent_of(m, v) == v
    }

    pub fn parents(&self, m: &PramMachine) -> Vec<usize> {
        m.view(self.parent).iter().map(|&p| p as usize).collect()
    }

    pub fn current_graph(&self, m: &PramMachine) -> Graph {
        let mut g = Graph::new(self.n);
        for i in (0..self.arc_count()).step_by(2) {
            let (u, v) = self.arc(m, i);
            g.add_edge(u, v);
        }
        g
    }

    /// One step of `p[v] := p[p[v]]`. Returns whether any parent changed.
    pub fn shortcut(&self, m: &mut PramMachine) -> bool {
        let mut changed = false;
        for v in 0..self.n {
            let p = self.parent_of(m, v);
            let pp = self.parent_of(m, p);
            if pp != p {
                changed = true;
                m.put(self.parent, v, pp as Word, self.vertex_pid(v));
            }
        }
        m.activate(self.n as u64);
        m.end_step();
        changed
    }

    /// Shortcuts until every tree is flat. Each step also records whether some new
    /// parent is still a non-root, so a flat input costs one iteration.
    pub fn shortcut_until_flat(&self, m: &mut PramMachine) -> usize {
        let mut iterations = 0;
        loop {
            iterations += 1;
            let deeper = m.alloc(1);
            for v in 0..self.n {
                let p = self.parent_of(m, v);
                let pp = self.parent_of(m, p);
                if pp != p {
                    m.put(self.parent, v, pp as Word, self.vertex_pid(v));
                }
                if self.parent_of(m, pp) != pp {
                    m.put(deeper, 0, 1, self.vertex_pid(v));
                }
            }
            m.activate(self.n as u64);
            m.end_step();
            if m.get(deeper, 0) == 0 {
                return iterations;
            }
        }
    }

    /// One step replacing each arc `(v, w)` by `(p[v], p[w])`.
    pub fn alter(&self, m: &mut PramMachine) {
        for i in 0..self.arc_count() {
            let (v, w) = self.arc(m, i);
            let (pv, pw) = (self.parent_of(m, v), self.parent_of(m, w));
            if pv != v {
                m.put(self.src, i, pv as Word, i as u64);
            }
            if pw != w {
                m.put(self.dst, i, pw as Word, i as u64);
            }
        }
        m.activate(self.arc_count() as u64);
        m.end_step();
    }

    /// One step in which every non-loop arc flags its source in a fresh region, and
    /// also a single shared cell. Returns the flag region and whether that cell was set.
    pub fn flag_non_loop_endpoints(&self, m: &mut PramMachine) -> (Region, bool) {
        let flags = m.alloc(self.n);
        let any = m.alloc(1);
        for i in 0..self.arc_count() {
            let (v, w) = self.arc(m, i);
            if v != w {
                m.put(flags, v, 1, i as u64);
                m.put(any, 0, 1, i as u64);
            }
        }
        m.activate(self.arc_count() as u64);
        m.end_step();
        let any = m.get(any, 0) == 1;
        (flags, any)
    }
}
