//! Hooks through which tests watch algorithms at phase and round boundaries.
//!
//! Snapshots are only materialised when the observer reports itself enabled, so
//! unobserved runs pay nothing.

use crate::cc::ExpandTrace;
use crate::fastcc::RoundTrace;
use crate::forest::TreeLinkTrace;
use crate::graph::Graph;

/// State at the start of a contraction phase (vanilla, cc or spanning-forest).
#[derive(Clone, Debug)]
pub struct PhaseView {
    pub algorithm: &'static str,
    pub phase: usize,
    pub parents: Vec<usize>,
    pub current: Graph,
    /// Roots incident to a non-loop arc.
    pub ongoing: Vec<bool>,
    /// Marked original arcs, for spanning-forest runs.
    pub forest_arcs: Option<Vec<usize>>,
}

pub trait Observer {
    fn enabled(&self) -> bool {
        true
    }
    fn phase_start(&mut self, _view: &PhaseView) {}
    fn expand_done(&mut self, _trace: &ExpandTrace) {}
    fn tree_link_done(&mut self, _trace: &TreeLinkTrace) {}
    fn fast_round(&mut self, _trace: &RoundTrace) {}
}

/// Observer that asks for nothing.
pub struct Silent;

impl Observer for Silent {
    fn enabled(&self) -> bool {
        false
    }
}
