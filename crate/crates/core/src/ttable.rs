//! Fixed-size transposition table with bound-typed entries.
//!
//! Slots form a power-of-two direct-mapped array; the full 64-bit key is
//! stored for verification, so a probe never returns another position's
//! data. Scores are stored exactly as given; callers rebase terminal
//! distances with `score::to_table`/`from_table` around store/probe.
//!
//! The optional move journal is an exact hash → designated-best-move map
//! used by the measurement procedures. Slot collisions may evict a value
//! entry, but a designation once made survives in the journal, so the
//! move oracle built from a populating search is complete even when the
//! slot array loses entries.

use crate::game::Move;
use crate::score::Score;
use std::collections::HashMap;

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Bound {
    Exact,
    Lower,
    Upper,
}

/// Value payload of an entry: valid for searches of `depth` remaining ply.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct TtValue {
    pub depth: u32,
    pub score: Score,
    pub bound: Bound,
}

impl TtValue {
    /// Score usable for an immediate return at `depth` under (alpha, beta),
    /// if this entry is accurate enough.
    pub fn sufficient(&self, depth: u32, alpha: Score, beta: Score) -> Option<Score> {
        if self.depth < depth {
            return None;
        }
        match self.bound {
            Bound::Exact => Some(self.score),
            Bound::Lower if self.score >= beta => Some(self.score),
            Bound::Upper if self.score <= alpha => Some(self.score),
            _ => None,
        }
    }
}

/// Everything a probe can yield. `value` is absent for move-only entries
/// (after `retain_best_moves_only`).
#[derive(Clone, Copy, PartialEq, Eq, Debug, Default)]
pub struct TtInfo {
    pub value: Option<TtValue>,
    pub best_move: Option<Move>,
}

#[derive(Clone, Default, Debug)]
struct Slot {
    used: bool,
    key: u64,
    generation: u32,
    info: TtInfo,
}

#[derive(Clone, Copy, Default, Debug, PartialEq, Eq)]
pub struct TtStats {
    pub probes: u64,
    pub hits: u64,
    pub collisions: u64,
    pub stores: u64,
}

pub struct TTable {
    slots: Vec<Slot>,
    mask: u64,
    generation: u32,
    occupied: usize,
    journal: Option<HashMap<u64, (Move, i64)>>,
    pub stats: TtStats,
}

/// Replacement rank: move-only entries rank below every valued entry.
fn value_depth(info: &TtInfo) -> i64 {
    info.value.map(|v| v.depth as i64).unwrap_or(i64::MIN)
}

impl TTable {
    pub fn new(bits: u32) -> TTable {
        assert!((4..=30).contains(&bits), "table bits out of range");
        let n = 1usize << bits;
        TTable {
            slots: vec![Slot::default(); n],
            mask: (n - 1) as u64,
            generation: 0,
            occupied: 0,
            journal: None,
            stats: TtStats::default(),
        }
    }

    /// Turns on the exact designation journal (measurement runs only).
    pub fn enable_journal(&mut self) {
        if self.journal.is_none() {
            self.journal = Some(HashMap::new());
        }
    }

    pub fn capacity(&self) -> usize {
        self.slots.len()
    }

    pub fn occupied(&self) -> usize {
        self.occupied
    }

    /// Designations that no longer fit in the slot array. Zero unless the
    /// journal outgrew the table.
    pub fn is_saturated(&self) -> bool {
        match &self.journal {
            Some(j) => j.len() > self.slots.len(),
            None => self.occupied == self.slots.len(),
        }
    }

    pub fn journal_len(&self) -> usize {
        self.journal.as_ref().map(|j| j.len()).unwrap_or(0)
    }

    pub fn new_generation(&mut self) {
        self.generation += 1;
    }

    #[inline]
    fn index(&self, key: u64) -> usize {
        (key & self.mask) as usize
    }

    pub fn probe(&mut self, key: u64) -> Option<TtInfo> {
        self.stats.probes += 1;
        let slot = &self.slots[self.index(key)];
        if !slot.used {
            return None;
        }
        if slot.key != key {
            self.stats.collisions += 1;
            return None;
        }
        self.stats.hits += 1;
        Some(slot.info)
    }

    /// Probe without touching statistics (for speculative lookups that are
    /// accounted separately by the caller).
    pub fn peek(&self, key: u64) -> Option<TtInfo> {
        let slot = &self.slots[self.index(key)];
        (slot.used && slot.key == key).then_some(slot.info)
    }

    /// Stores a search result and, when a move is given, records it as the
    /// position's designated best move. Within one generation a deeper
    /// same-key entry is never degraded; across keys the slot goes to the
    /// newer generation first, then to the deeper search.
    pub fn store(
        &mut self,
        key: u64,
        depth: u32,
        score: Score,
        bound: Bound,
        best_move: Option<Move>,
    ) {
        self.stats.stores += 1;
        let generation = self.generation;
        let idx = self.index(key);
        let slot = &mut self.slots[idx];
        let new_value = TtValue {
            depth,
            score,
            bound,
        };

        let mut designate = best_move.is_some();
        if slot.used && slot.key == key {
            let fresh = slot.generation != generation;
            if fresh || depth as i64 >= value_depth(&slot.info) {
                slot.generation = generation;
                slot.info.value = Some(new_value);
                if let Some(m) = best_move {
                    slot.info.best_move = Some(m);
                }
            } else {
                // A deeper result from this generation stands; the shallower
                // revisit neither replaces the value nor the designation.
                designate = false;
            }
        } else if !slot.used
            || slot.generation != generation
            || depth as i64 >= value_depth(&slot.info)
        {
            if !slot.used {
                self.occupied += 1;
            }
            *slot = Slot {
                used: true,
                key,
                generation,
                info: TtInfo {
                    value: Some(new_value),
                    best_move,
                },
            };
        }
        // Journal designations follow the same deeper-wins rule but are
        // immune to slot eviction.
        if designate {
            if let (Some(journal), Some(m)) = (self.journal.as_mut(), best_move) {
                let e = journal.entry(key).or_insert((m, depth as i64));
                if depth as i64 >= e.1 {
                    *e = (m, depth as i64);
                }
            }
        }
    }

    /// Stores a value without disturbing any move designation: an existing
    /// same-key move survives, and an entry written over a foreign key picks
    /// its move up from the journal. Counting traversals use this so the
    /// oracle built beforehand stays frozen.
    pub fn store_preserve_move(&mut self, key: u64, depth: u32, score: Score, bound: Bound) {
        self.stats.stores += 1;
        let generation = self.generation;
        let idx = self.index(key);
        let slot = &mut self.slots[idx];
        let new_value = TtValue {
            depth,
            score,
            bound,
        };

        if slot.used && slot.key == key {
            let fresh = slot.generation != generation;
            if fresh || depth as i64 >= value_depth(&slot.info) {
                slot.generation = generation;
                slot.info.value = Some(new_value);
            }
            return;
        }
        if !slot.used || slot.generation != generation || depth as i64 >= value_depth(&slot.info) {
            if !slot.used {
                self.occupied += 1;
            }
            let journal_move = self
                .journal
                .as_ref()
                .and_then(|j| j.get(&key))
                .map(|&(m, _)| m);
            *slot = Slot {
                used: true,
                key,
                generation,
                info: TtInfo {
                    value: Some(new_value),
                    best_move: journal_move,
                },
            };
        }
    }

    /// Overrides the designated best move for a position (the
    /// cheapest-cutoff procedures re-designate moves this way).
    pub fn set_best_move(&mut self, key: u64, m: Move) {
        if let Some(journal) = self.journal.as_mut() {
            // Forced designation outranks any depth rule.
            journal.insert(key, (m, i64::MAX));
        }
        let idx = self.index(key);
        let slot = &mut self.slots[idx];
        if slot.used && slot.key == key {
            slot.info.best_move = Some(m);
        } else if !slot.used {
            self.occupied += 1;
            *slot = Slot {
                used: true,
                key,
                generation: self.generation,
                info: TtInfo {
                    value: None,
                    best_move: Some(m),
                },
            };
        }
        // An occupied foreign slot is left alone: a move-only entry never
        // evicts, and the journal already holds the designation.
    }

    /// Wipes depth/value/bound everywhere; keys and best moves survive.
    /// Entries degrade to pure move oracles and can never satisfy
    /// `sufficient` until rewritten.
    pub fn retain_best_moves_only(&mut self) {
        for slot in &mut self.slots {
            if slot.used {
                slot.info.value = None;
            }
        }
    }

    /// Designated best move for a position: journal first (exact), slot
    /// otherwise.
    pub fn oracle_move(&self, key: u64) -> Option<Move> {
        if let Some(journal) = &self.journal {
            if let Some(&(m, _)) = journal.get(&key) {
                return Some(m);
            }
        }
        self.peek(key).and_then(|i| i.best_move)
    }
}
