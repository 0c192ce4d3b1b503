//! Seeded graph corpora shared by the integration tests.

#![allow(dead_code)]

use pram_cc::harness::GraphSpec;
use pram_cc::seeds;
use rand::Rng;

/// Log-uniform integer in `[lo, hi]`.
fn log_uniform(rng: &mut impl Rng, lo: usize, hi: usize) -> usize {
    let x = rng
        .gen_range((lo as f64).ln()..=(hi as f64).ln())
        .exp()
        .round() as usize;
    x.clamp(lo, hi)
}

fn family(rng: &mut impl Rng, which: usize, max_n: usize) -> GraphSpec {
    let n = log_uniform(rng, 16, max_n);
    match which {
        0 => GraphSpec::Path { n },
        1 => GraphSpec::Cycle { n },
        2 => GraphSpec::Grid {
            side: log_uniform(rng, 4, (max_n as f64).sqrt() as usize),
        },
        3 => GraphSpec::BinaryTree { n },
        4 => {
            let n = n.min(max_n / 2).max(16);
            let cap = (n * (n - 1) / 2).min(8 * n).min(1 << 15);
            GraphSpec::Er {
                n,
                m: rng.gen_range(n / 2..=cap),
                seed: None,
            }
        }
        _ => GraphSpec::CliqueChain {
            cliques: rng.gen_range(1..=8),
            size: rng.gen_range(2..=24),
            bridge: rng.gen_range(1..=8),
        },
    }
}

/// `count` specs cycling through every family, unions included, with n ≤ `max_n`.
pub fn corpus(count: usize, seed: u64, max_n: usize) -> Vec<GraphSpec> {
    let mut rng = seeds::stream(&[seed, 0xC0]);
    (0..count)
        .map(|i| match i % 7 {
            6 => {
                let k = rng.gen_range(2..=3);
                GraphSpec::Union(
                    (0..k)
                        .map(|j| family(&mut rng, (i + j) % 6, max_n / k))
                        .collect(),
                )
            }
            f => family(&mut rng, f, max_n),
        })
        .collect()
}

/// Small graphs for property tests: every family at n ≤ 64.
pub fn small_corpus(count: usize, seed: u64) -> Vec<GraphSpec> {
    corpus(count, seed, 64)
}

/// The normalised edge count the engine pads to.
pub fn padded_m(n: usize, m: usize) -> usize {
    m.max(2 * n)
}
