//! Oracle verdicts for label and forest outputs.

use std::fmt;

use crate::forest::{verify_forest, ForestViolation};
use crate::graph::{canonical_labels, oracle_components, Graph};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Match,
    WrongLength {
        expected: usize,
        found: usize,
    },
    /// First vertex whose label class differs from its oracle component.
    Partition {
        vertex: usize,
        labelled_with: usize,
        component_of: usize,
    },
    Forest(Vec<ForestViolation>),
}

impl Verdict {
    pub fn is_match(&self) -> bool {
        matches!(self, Verdict::Match)
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Match => write!(f, "ok"),
            Verdict::WrongLength { expected, found } => {
                write!(f, "expected {expected} labels, found {found}")
            }
            Verdict::Partition {
                vertex,
                labelled_with,
                component_of,
            } => write!(
                f,
                "vertex {vertex} shares a label with vertex {labelled_with} but its component starts at vertex {component_of}"
            ),
            Verdict::Forest(violations) => {
                for (i, v) in violations.iter().enumerate() {
                    if i > 0 {
                        writeln!(f)?;
                    }
                    write!(f, "{v}")?;
                }
                Ok(())
            }
        }
    }
}

/// Compares label classes with the oracle partition, not label values.
pub fn verify_labels(g: &Graph, labels: &[usize]) -> Verdict {
    if labels.len() != g.n() {
        return Verdict::WrongLength {
            expected: g.n(),
            found: labels.len(),
        };
    }
    let ours = canonical_labels(labels);
    let theirs = canonical_labels(&oracle_components(g));
    match (0..g.n()).find(|&v| ours[v] != theirs[v]) {
        None => Verdict::Match,
        Some(v) => Verdict::Partition {
            vertex: v,
            labelled_with: ours[v],
            component_of: theirs[v],
        },
    }
}

pub fn verify_forest_edges(g: &Graph, forest: &[(usize, usize)]) -> Verdict {
    let violations = verify_forest(g, forest);
    if violations.is_empty() {
        Verdict::Match
    } else {
        Verdict::Forest(violations)
    }
}
