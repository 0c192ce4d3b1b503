//! Injective renaming of the flagged positions of an array into `[2k]`.
//!
//! Flagged positions hash into a cascade of tables of sizes k, k/2, k/4, ...
//! laid out back to back inside `[2k]`; each table is one arbitration round and
//! the losers move on to the next. Anything left after the cascade retries into
//! empty cells of the whole range.

use crate::error::{Error, Result};
use crate::hash::HashFn;
use crate::pram::PramMachine;
use crate::seeds::{self, tag};
use crate::shared::{encode, EMPTY};

/// Global retry rounds allowed after the cascade before giving up.
const RETRY_ROUNDS: usize = 16;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CompactionMap {
    slots: Vec<Option<usize>>,
    range: usize,
    rounds: usize,
}

impl CompactionMap {
    /// Target index of position `i`, `None` for unflagged positions.
    pub fn get(&self, i: usize) -> Option<usize> {
        self.slots[i]
    }

    /// Size of the target array, twice the number of flagged positions.
    pub fn range(&self) -> usize {
        self.range
    }

    /// Arbitration rounds used.
    pub fn rounds(&self) -> usize {
        self.rounds
    }

    pub fn len(&self) -> usize {
        self.slots.iter().flatten().count()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Flagged positions in target order.
    pub fn order(&self) -> Vec<usize> {
        let mut pairs: Vec<(usize, usize)> = self
            .slots
            .iter()
            .enumerate()
            .filter_map(|(i, s)| s.map(|s| (s, i)))
            .collect();
        pairs.sort_unstable();
        pairs.into_iter().map(|(_, i)| i).collect()
    }
}

pub fn approximate_compaction(
    m: &mut PramMachine,
    flags: &[bool],
    seed: u64,
) -> Result<CompactionMap> {
    let n = flags.len();
    let k = flags.iter().filter(|&&f| f).count();
    let mut slots = vec![None; n];
    if k == 0 {
        return Ok(CompactionMap {
            slots,
            range: 0,
            rounds: 0,
        });
    }
    let range = 2 * k;
    let table = m.alloc(range);
    let universe = n as u64;
    let mut pending: Vec<usize> = (0..n).filter(|&i| flags[i]).collect();
    let mut rounds = 0;

    let mut offset = 0;
    let mut size = k;
    while !pending.is_empty() && size > 0 {
        rounds += 1;
        let h = HashFn::sample(
            universe,
            size as u64,
            &mut seeds::stream(&[seed, tag::COMPACTION, rounds as u64]),
        );
        for &i in &pending {
            m.put(
                table,
                offset + h.eval(i as u64) as usize,
                encode(i),
                i as u64,
            );
        }
        m.end_step();
        pending.retain(|&i| {
            let cell = offset + h.eval(i as u64) as usize;
            let won = m.get(table, cell) == encode(i);
            if won {
                slots[i] = Some(cell);
            }
            !won
        });
        offset += size;
        size /= 2;
    }

    let mut retries = 0;
    while !pending.is_empty() {
        retries += 1;
        if retries > RETRY_ROUNDS {
            return Err(Error::abort(
                "compaction",
                format!("{} positions unplaced after {rounds} rounds", pending.len()),
            ));
        }
        rounds += 1;
        let h = HashFn::sample(
            universe,
            range as u64,
            &mut seeds::stream(&[seed, tag::COMPACTION, rounds as u64]),
        );
        for &i in &pending {
            let cell = h.eval(i as u64) as usize;
            if m.get(table, cell) == EMPTY {
                m.put(table, cell, encode(i), i as u64);
            }
        }
        m.end_step();
        pending.retain(|&i| {
            let cell = h.eval(i as u64) as usize;
            let won = m.get(table, cell) == encode(i);
            if won {
                slots[i] = Some(cell);
            }
            !won
        });
    }
    Ok(CompactionMap {
        slots,
        range,
        rounds,
    })
}
