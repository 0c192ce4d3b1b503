//! Simulated ARBITRARY CRCW PRAM connectivity: a random-vote baseline, hashing-based
//! neighbourhood expansion, a spanning-forest variant, and a level-based variant
//! whose round count depends on the diameter rather than on n.

pub mod cc;
pub mod error;
pub mod fastcc;
pub mod forest;
pub mod graph;
pub mod harness;
pub mod hash;
pub mod observe;
pub mod pram;
pub mod seeds;
pub mod shared;
pub mod vanilla;

pub use error::{Error, Result};
