//! Step-synchronous ARBITRARY CRCW PRAM simulator.
//!
//! Programs issue reads directly against memory and queue writes with
//! [`PramMachine::submit_write`]. Nothing lands until [`PramMachine::end_step`],
//! which resolves every contended cell to exactly one of the values written to
//! it, chosen by the configured [`WritePolicy`].

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::seeds::mix;

pub type Word = u64;
pub type ProcessorId = u64;

/// Which writer wins when several processors write one cell in the same step.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum WritePolicy {
    LowestWriter,
    HighestWriter,
    SeededRandom,
}

impl WritePolicy {
    pub const ALL: [WritePolicy; 3] = [
        WritePolicy::LowestWriter,
        WritePolicy::HighestWriter,
        WritePolicy::SeededRandom,
    ];

    pub fn short_name(self) -> &'static str {
        match self {
            WritePolicy::LowestWriter => "low",
            WritePolicy::HighestWriter => "high",
            WritePolicy::SeededRandom => "random",
        }
    }

    pub fn from_short_name(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|p| p.short_name() == name)
    }
}

impl fmt::Display for WritePolicy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.short_name())
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PramError {
    #[error("write to cell {cell} outside memory of {len} cells")]
    OutOfBounds { cell: usize, len: usize },
    #[error("allocating {requested} cells in zone {zone} exceeds the budget cap {cap} (already allocated {allocated})")]
    BudgetExceeded {
        requested: u64,
        allocated: u64,
        cap: u64,
        zone: Zone,
    },
    #[error("block size must be at least one cell")]
    EmptyBlock,
}

/// Ledger key for processor blocks: the round that requested them and the level they serve.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Zone {
    pub round: u32,
    pub level: u32,
}

impl Zone {
    pub fn new(round: u32, level: u32) -> Self {
        Zone { round, level }
    }
}

impl fmt::Display for Zone {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.round, self.level)
    }
}

/// A contiguous run of memory cells.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Region {
    base: usize,
    len: usize,
}

impl Region {
    pub fn base(&self) -> usize {
        self.base
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Absolute cell index of the `i`-th word of this region.
    #[inline]
    pub fn cell(&self, i: usize) -> usize {
        debug_assert!(i < self.len, "index {i} outside region of {}", self.len);
        self.base + i
    }

    /// Sub-region `[start, start + len)`.
    pub fn slice(&self, start: usize, len: usize) -> Region {
        assert!(start + len <= self.len);
        Region {
            base: self.base + start,
            len,
        }
    }

    pub fn contains(&self, cell: usize) -> bool {
        cell >= self.base && cell < self.base + self.len
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Counters {
    pub steps: u64,
    pub rounds: u64,
    pub peak_processors: u64,
    pub total_allocated: u64,
}

/// Processor accounting: a reusable base pool plus per-zone block grants.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct WorkLedger {
    base_pool: u64,
    zones: BTreeMap<Zone, u64>,
    phase_steps: BTreeMap<&'static str, u64>,
}

impl WorkLedger {
    pub fn base_pool(&self) -> u64 {
        self.base_pool
    }

    pub fn zone(&self, zone: Zone) -> u64 {
        self.zones.get(&zone).copied().unwrap_or(0)
    }

    pub fn zones(&self) -> impl Iterator<Item = (Zone, u64)> + '_ {
        self.zones.iter().map(|(z, c)| (*z, *c))
    }

    pub fn block_total(&self) -> u64 {
        self.zones.values().sum()
    }

    pub fn total(&self) -> u64 {
        self.base_pool + self.block_total()
    }

    pub fn phase_steps(&self) -> impl Iterator<Item = (&'static str, u64)> + '_ {
        self.phase_steps.iter().map(|(k, v)| (*k, *v))
    }

    pub fn steps_in(&self, phase: &str) -> u64 {
        self.phase_steps.get(phase).copied().unwrap_or(0)
    }
}

struct PendingWrite {
    cell: usize,
    value: Word,
    writer: ProcessorId,
}

pub struct PramMachine {
    memory: Vec<Word>,
    pending: Vec<PendingWrite>,
    policy: WritePolicy,
    seed: u64,
    counters: Counters,
    ledger: WorkLedger,
    block_cap: Option<u64>,
    phase: &'static str,
    step_processors: u64,
    // Resolution scratch, indexed by cell: which pending write currently wins, valid when stamp == epoch.
    winner: Vec<u32>,
    stamp: Vec<u32>,
    epoch: u32,
}

impl PramMachine {
    pub fn new(policy: WritePolicy, seed: u64) -> Self {
        PramMachine {
            memory: Vec::new(),
            pending: Vec::new(),
            policy,
            seed,
            counters: Counters::default(),
            ledger: WorkLedger::default(),
            block_cap: None,
            phase: "setup",
            step_processors: 0,
            winner: Vec::new(),
            stamp: Vec::new(),
            epoch: 0,
        }
    }

    /// Caps the total of base pool plus block grants; exceeding it makes allocation fail.
    pub fn with_block_cap(mut self, cap: u64) -> Self {
        self.block_cap = Some(cap);
        self
    }

    pub fn policy(&self) -> WritePolicy {
        self.policy
    }

    pub fn counters(&self) -> Counters {
        self.counters
    }

    pub fn ledger(&self) -> &WorkLedger {
        &self.ledger
    }

    pub fn memory_len(&self) -> usize {
        self.memory.len()
    }

    /// Labels subsequent steps in the ledger's per-phase step counts.
    pub fn set_phase(&mut self, phase: &'static str) {
        self.phase = phase;
    }

    /// Shared memory that is not a processor grant (algorithm state arrays, scratch tables).
    pub fn alloc(&mut self, len: usize) -> Region {
        self.alloc_filled(len, 0)
    }

    pub fn alloc_filled(&mut self, len: usize, value: Word) -> Region {
        let base = self.memory.len();
        self.memory.resize(base + len, value);
        self.winner.resize(base + len, 0);
        self.stamp.resize(base + len, 0);
        Region { base, len }
    }

    /// Grows the reusable base processor pool to at least `processors`.
    pub fn reserve_pool(&mut self, processors: u64) -> Result<(), PramError> {
        if processors > self.ledger.base_pool {
            let extra = processors - self.ledger.base_pool;
            self.check_cap(extra, Zone::new(0, 0))?;
            self.ledger.base_pool = processors;
            self.counters.total_allocated += extra;
        }
        Ok(())
    }

    /// Grants `size` fresh zeroed cells, charged to the ledger under `zone`.
    pub fn allocate_block(&mut self, size: usize, zone: Zone) -> Result<Region, PramError> {
        if size == 0 {
            return Err(PramError::EmptyBlock);
        }
        self.check_cap(size as u64, zone)?;
        *self.ledger.zones.entry(zone).or_insert(0) += size as u64;
        self.counters.total_allocated += size as u64;
        Ok(self.alloc(size))
    }

    fn check_cap(&self, requested: u64, zone: Zone) -> Result<(), PramError> {
        match self.block_cap {
            Some(cap) if self.counters.total_allocated + requested > cap => {
                Err(PramError::BudgetExceeded {
                    requested,
                    allocated: self.counters.total_allocated,
                    cap,
                    zone,
                })
            }
            _ => Ok(()),
        }
    }

    #[inline]
    pub fn read(&self, cell: usize) -> Word {
        self.memory[cell]
    }

    #[inline]
    pub fn get(&self, region: Region, i: usize) -> Word {
        self.memory[region.cell(i)]
    }

    pub fn view(&self, region: Region) -> &[Word] {
        &self.memory[region.base..region.base + region.len]
    }

    pub fn submit_write(
        &mut self,
        cell: usize,
        value: Word,
        writer: ProcessorId,
    ) -> Result<(), PramError> {
        if cell >= self.memory.len() {
            return Err(PramError::OutOfBounds {
                cell,
                len: self.memory.len(),
            });
        }
        self.pending.push(PendingWrite {
            cell,
            value,
            writer,
        });
        Ok(())
    }

    /// Writes into `region[i]`; the region bound is checked, so this cannot fault.
    #[inline]
    pub fn put(&mut self, region: Region, i: usize, value: Word, writer: ProcessorId) {
        assert!(i < region.len, "index {i} outside region of {}", region.len);
        self.pending.push(PendingWrite {
            cell: region.base + i,
            value,
            writer,
        });
    }

    /// Declares how many processors are active in the current step.
    /// Steps that never call this are charged one processor per queued write.
    pub fn activate(&mut self, processors: u64) {
        self.step_processors = self.step_processors.max(processors);
    }

    pub fn pending_writes(&self) -> usize {
        self.pending.len()
    }

    fn priority(&self, index: usize) -> (u64, usize) {
        let w = &self.pending[index];
        let key = match self.policy {
            WritePolicy::LowestWriter => w.writer,
            WritePolicy::HighestWriter => !w.writer,
            WritePolicy::SeededRandom => {
                mix(&[self.seed, self.counters.steps, w.cell as u64, w.writer])
            }
        };
        (key, index)
    }

    pub fn end_step(&mut self) {
        self.epoch = self.epoch.wrapping_add(1);
        if self.epoch == 0 {
            self.stamp.fill(0);
            self.epoch = 1;
        }
        for i in 0..self.pending.len() {
            let cell = self.pending[i].cell;
            if self.stamp[cell] != self.epoch {
                self.stamp[cell] = self.epoch;
                self.winner[cell] = i as u32;
            } else if self.priority(i) < self.priority(self.winner[cell] as usize) {
                self.winner[cell] = i as u32;
            }
        }
        for (i, w) in self.pending.iter().enumerate() {
            if self.winner[w.cell] as usize == i {
                self.memory[w.cell] = w.value;
            }
        }
        let processors = if self.step_processors > 0 {
            self.step_processors
        } else {
            self.pending.len() as u64
        };
        self.counters.peak_processors = self.counters.peak_processors.max(processors);
        self.counters.steps += 1;
        *self.ledger.phase_steps.entry(self.phase).or_insert(0) += 1;
        self.pending.clear();
        self.step_processors = 0;
    }

    /// Test oracle only: resolves the buffered writes by summing per cell instead of
    /// picking a winner (a COMBINING machine), so exact counts can be compared with estimates.
    pub fn end_step_combining_sum(&mut self) {
        let mut sums: BTreeMap<usize, Word> = BTreeMap::new();
        for w in &self.pending {
            *sums.entry(w.cell).or_insert(0) += w.value;
        }
        for (cell, sum) in sums {
            self.memory[cell] = sum;
        }
        self.counters.steps += 1;
        *self.ledger.phase_steps.entry(self.phase).or_insert(0) += 1;
        self.pending.clear();
        self.step_processors = 0;
    }

    pub fn end_round(&mut self) {
        self.counters.rounds += 1;
    }

    /// Snapshot of all memory; used for determinism checks.
    pub fn memory_snapshot(&self) -> Vec<Word> {
        self.memory.clone()
    }
}
