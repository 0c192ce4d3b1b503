mod common;

use pram_cc::fastcc::{
    approximate_compaction, run_fast_cc, run_fast_cc_observed, FastParams, RoundTrace,
};
use pram_cc::graph::{diameter, oracle_components, same_partition, LabeledDigraph};
use pram_cc::observe::Observer;
use pram_cc::pram::{PramMachine, WritePolicy};
use pram_cc::seeds;
use rand::Rng;

#[test]
fn compaction_is_injective_into_twice_the_count() {
    let mut rng = seeds::stream(&[17]);
    let mut most_rounds = 0;
    for trial in 0..1000u64 {
        let n = rng.gen_range(1..=1 << 14);
        let density = rng.gen_range(0.0..1.0);
        let flags: Vec<bool> = (0..n).map(|_| rng.gen_bool(density)).collect();
        let k = flags.iter().filter(|&&f| f).count();
        let mut m = PramMachine::new(WritePolicy::ALL[trial as usize % 3], trial);
        let map = approximate_compaction(&mut m, &flags, trial).unwrap();
        assert_eq!(map.len(), k);
        assert_eq!(map.range(), 2 * k);
        let mut seen = vec![false; 2 * k];
        for (i, &f) in flags.iter().enumerate() {
            match map.get(i) {
                Some(slot) => {
                    assert!(f && slot < 2 * k && !seen[slot]);
                    seen[slot] = true;
                }
                None => assert!(!f),
            }
        }
        most_rounds = most_rounds.max(map.rounds());
    }
    assert!(most_rounds <= 8, "{most_rounds} rounds");
}

#[derive(Default)]
struct AfterBreak {
    audits: usize,
    problems: Vec<String>,
}

impl Observer for AfterBreak {
    fn fast_round(&mut self, t: &RoundTrace) {
        if !t.broke {
            return;
        }
        self.audits += 1;
        if !LabeledDigraph::from_parents(t.end_parents.clone()).is_flat() {
            self.problems
                .push(format!("round {}: trees not flat", t.round));
        }
        let d = diameter(&t.end_graph);
        if d > 2 {
            self.problems
                .push(format!("round {}: diameter {d}", t.round));
        }
    }
}

#[test]
fn break_leaves_flat_trees_and_a_small_diameter() {
    let mut watch = AfterBreak::default();
    for (i, spec) in common::corpus(100, 59, 1024).iter().enumerate() {
        let seed = i as u64;
        let g = spec.generate(seed);
        let out = run_fast_cc_observed(
            &g,
            seed,
            WritePolicy::ALL[i % 3],
            &FastParams::desk().with_c(0),
            &mut watch,
        )
        .unwrap();
        assert!(
            same_partition(&out.labels, &oracle_components(&g)),
            "{spec}"
        );
    }
    assert!(watch.audits >= 100);
    assert!(watch.problems.is_empty(), "{:?}", watch.problems);
}

#[test]
fn paper_profile_is_correct_at_small_scale() {
    for (i, spec) in common::small_corpus(21, 61).iter().enumerate() {
        let g = spec.generate(i as u64);
        let out = run_fast_cc(
            &g,
            i as u64,
            WritePolicy::SeededRandom,
            &FastParams::paper(),
        )
        .unwrap();
        assert!(
            same_partition(&out.labels, &oracle_components(&g)),
            "{spec}"
        );
    }
}
