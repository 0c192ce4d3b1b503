//! Seeded graph families, addressed by spec strings such as `path:n=64`,
//! `er:n=500,m=2000,seed=3` or `union:path:n=5+cycle:n=7`.

use std::collections::HashSet;
use std::fmt;

use rand::Rng;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::seeds::{self, tag};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GraphSpec {
    Path {
        n: usize,
    },
    Cycle {
        n: usize,
    },
    /// `side × side` grid.
    Grid {
        side: usize,
    },
    /// Heap-shaped binary tree on `n` vertices.
    BinaryTree {
        n: usize,
    },
    /// `m` distinct non-loop pairs drawn uniformly; `seed` overrides the run seed.
    Er {
        n: usize,
        m: usize,
        seed: Option<u64>,
    },
    /// `cliques` copies of K_size; the last vertex of clique i reaches the first
    /// vertex of clique i+1 through a path of `bridge` edges.
    CliqueChain {
        cliques: usize,
        size: usize,
        bridge: usize,
    },
    /// Disjoint union, vertex ids offset in order.
    Union(Vec<GraphSpec>),
}

fn invalid(spec: &str, reason: impl Into<String>) -> Error {
    Error::InvalidSpec {
        spec: spec.to_string(),
        reason: reason.into(),
    }
}

impl GraphSpec {
    pub fn parse(text: &str) -> Result<Self> {
        let text = text.trim();
        let (family, rest) = text.split_once(':').unwrap_or((text, ""));
        if family == "union" {
            let parts = rest
                .split('+')
                .map(GraphSpec::parse)
                .collect::<Result<Vec<_>>>()?;
            if parts.is_empty() || rest.is_empty() {
                return Err(invalid(text, "union needs at least one part"));
            }
            return Ok(GraphSpec::Union(parts));
        }
        let mut keys: Vec<(&str, u64)> = Vec::new();
        for kv in rest.split(',').filter(|s| !s.is_empty()) {
            let (k, v) = kv
                .split_once('=')
                .ok_or_else(|| invalid(text, format!("`{kv}` is not key=value")))?;
            let v: u64 = v
                .trim()
                .parse()
                .map_err(|_| invalid(text, format!("`{v}` is not a non-negative integer")))?;
            keys.push((k.trim(), v));
        }
        let allowed: &[&str] = match family {
            "path" | "cycle" | "binary-tree" => &["n"],
            "grid" => &["side"],
            "er" | "er-random" => &["n", "m", "seed"],
            "clique-chain" => &["cliques", "size", "bridge"],
            _ => return Err(invalid(text, format!("unknown family `{family}`"))),
        };
        if let Some((k, _)) = keys.iter().find(|(k, _)| !allowed.contains(k)) {
            return Err(invalid(text, format!("unknown key `{k}` for {family}")));
        }
        let get = |k: &str| {
            keys.iter()
                .rev()
                .find(|(key, _)| *key == k)
                .map(|&(_, v)| v as usize)
        };
        let need = |k: &str| get(k).ok_or_else(|| invalid(text, format!("missing `{k}`")));
        let positive = |k: &str| -> Result<usize> {
            let v = need(k)?;
            if v == 0 {
                Err(invalid(text, format!("`{k}` must be positive")))
            } else {
                Ok(v)
            }
        };
        let spec = match family {
            "path" => GraphSpec::Path { n: positive("n")? },
            "cycle" => {
                let n = positive("n")?;
                if n < 3 {
                    return Err(invalid(text, "a cycle needs n ≥ 3"));
                }
                GraphSpec::Cycle { n }
            }
            "grid" => GraphSpec::Grid {
                side: positive("side")?,
            },
            "binary-tree" => GraphSpec::BinaryTree { n: positive("n")? },
            "er" | "er-random" => {
                let n = positive("n")?;
                let m = need("m")?;
                if m > n * (n - 1) / 2 {
                    return Err(invalid(
                        text,
                        format!("{m} distinct pairs do not fit on {n} vertices"),
                    ));
                }
                GraphSpec::Er {
                    n,
                    m,
                    seed: get("seed").map(|s| s as u64),
                }
            }
            "clique-chain" => {
                let size = positive("size")?;
                if size < 2 {
                    return Err(invalid(text, "cliques need size ≥ 2"));
                }
                GraphSpec::CliqueChain {
                    cliques: positive("cliques")?,
                    size,
                    bridge: positive("bridge")?,
                }
            }
            _ => unreachable!(),
        };
        Ok(spec)
    }

    pub fn n(&self) -> usize {
        match self {
            GraphSpec::Path { n }
            | GraphSpec::Cycle { n }
            | GraphSpec::BinaryTree { n }
            | GraphSpec::Er { n, .. } => *n,
            GraphSpec::Grid { side } => side * side,
            GraphSpec::CliqueChain {
                cliques,
                size,
                bridge,
            } => cliques * size + (cliques - 1) * (bridge - 1),
            GraphSpec::Union(parts) => parts.iter().map(GraphSpec::n).sum(),
        }
    }

    pub fn m(&self) -> usize {
        match self {
            GraphSpec::Path { n } | GraphSpec::BinaryTree { n } => n - 1,
            GraphSpec::Cycle { n } => *n,
            GraphSpec::Grid { side } => 2 * side * (side - 1),
            GraphSpec::Er { m, .. } => *m,
            GraphSpec::CliqueChain {
                cliques,
                size,
                bridge,
            } => cliques * size * (size - 1) / 2 + (cliques - 1) * bridge,
            GraphSpec::Union(parts) => parts.iter().map(GraphSpec::m).sum(),
        }
    }

    /// Largest finite distance, where a closed form exists.
    pub fn diameter(&self) -> Option<usize> {
        match self {
            GraphSpec::Path { n } => Some(n - 1),
            GraphSpec::Cycle { n } => Some(n / 2),
            GraphSpec::Grid { side } => Some(2 * (side - 1)),
            GraphSpec::CliqueChain {
                cliques,
                size,
                bridge,
            } => Some(if *cliques == 1 {
                usize::from(*size > 1)
            } else {
                cliques + (cliques - 1) * bridge
            }),
            GraphSpec::Union(parts) => parts
                .iter()
                .map(GraphSpec::diameter)
                .try_fold(0, |a, d| d.map(|d| a.max(d))),
            GraphSpec::BinaryTree { .. } | GraphSpec::Er { .. } => None,
        }
    }

    /// Builds the graph; `seed` drives the random families unless the spec pins one.
    pub fn generate(&self, seed: u64) -> Graph {
        match self {
            GraphSpec::Path { n } => Graph::from_edges(*n, (1..*n).map(|v| (v - 1, v))),
            GraphSpec::Cycle { n } => Graph::from_edges(*n, (0..*n).map(|v| (v, (v + 1) % n))),
            GraphSpec::Grid { side } => {
                let s = *side;
                let id = |r: usize, c: usize| r * s + c;
                let mut g = Graph::new(s * s);
                for r in 0..s {
                    for c in 0..s {
                        if c + 1 < s {
                            g.add_edge(id(r, c), id(r, c + 1));
                        }
                        if r + 1 < s {
                            g.add_edge(id(r, c), id(r + 1, c));
                        }
                    }
                }
                g
            }
            GraphSpec::BinaryTree { n } => Graph::from_edges(*n, (1..*n).map(|v| ((v - 1) / 2, v))),
            GraphSpec::Er { n, m, seed: pinned } => {
                let mut rng = seeds::stream(&[pinned.unwrap_or(seed), tag::GENERATOR]);
                let mut seen = HashSet::with_capacity(*m);
                let mut g = Graph::new(*n);
                while g.m() < *m {
                    let (u, v) = (rng.gen_range(0..*n), rng.gen_range(0..*n));
                    if u != v && seen.insert((u.min(v), u.max(v))) {
                        g.add_edge(u, v);
                    }
                }
                g
            }
            GraphSpec::CliqueChain {
                cliques,
                size,
                bridge,
            } => {
                let mut g = Graph::new(self.n());
                let mut base = 0;
                let mut prev_exit = None;
                for _ in 0..*cliques {
                    if let Some(mut at) = prev_exit {
                        for b in base..base + bridge - 1 {
                            g.add_edge(at, b);
                            at = b;
                        }
                        base += bridge - 1;
                        g.add_edge(at, base);
                    }
                    for a in base..base + size {
                        for b in a + 1..base + size {
                            g.add_edge(a, b);
                        }
                    }
                    prev_exit = Some(base + size - 1);
                    base += size;
                }
                g
            }
            GraphSpec::Union(parts) => parts
                .iter()
                .map(|p| p.generate(seed))
                .reduce(|a, b| a.disjoint_union(&b))
                .unwrap_or_else(|| Graph::new(0)),
        }
    }
}

impl fmt::Display for GraphSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GraphSpec::Path { n } => write!(f, "path:n={n}"),
            GraphSpec::Cycle { n } => write!(f, "cycle:n={n}"),
            GraphSpec::Grid { side } => write!(f, "grid:side={side}"),
            GraphSpec::BinaryTree { n } => write!(f, "binary-tree:n={n}"),
            GraphSpec::Er { n, m, seed } => {
                write!(f, "er:n={n},m={m}")?;
                if let Some(s) = seed {
                    write!(f, ",seed={s}")?;
                }
                Ok(())
            }
            GraphSpec::CliqueChain {
                cliques,
                size,
                bridge,
            } => {
                write!(
                    f,
                    "clique-chain:cliques={cliques},size={size},bridge={bridge}"
                )
            }
            GraphSpec::Union(parts) => {
                write!(f, "union:")?;
                for (i, p) in parts.iter().enumerate() {
                    if i > 0 {
                        write!(f, "+")?;
                    }
                    write!(f, "{p}")?;
                }
                Ok(())
            }
        }
    }
}
