//! Node accounting. A node access is an interior expansion, a leaf
//! evaluation, or a table cutoff; nothing else counts. A node ended by a
//! table cutoff is one access even though a full subtree was saved.

use crate::game::Move;
use crate::score::Score;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct IterationSnapshot {
    pub depth: u32,
    pub value: Score,
    pub best_move: Option<Move>,
    pub interior_expansions: u64,
    pub leaf_evaluations: u64,
    pub tt_cutoffs: u64,
    pub etc_probes: u64,
    pub etc_cutoffs: u64,
    pub tt_hits: u64,
}

impl IterationSnapshot {
    pub fn node_accesses(&self) -> u64 {
        self.interior_expansions + self.leaf_evaluations + self.tt_cutoffs
    }
}

#[derive(Clone, Debug, Default)]
pub struct SearchStats {
    pub interior_expansions: u64,
    pub leaf_evaluations: u64,
    pub tt_cutoffs: u64,
    /// Speculative successor probes; not node accesses.
    pub etc_probes: u64,
    pub etc_cutoffs: u64,
    /// Table moves that turned out not to be legal here (should stay 0 with
    /// full-key verification; counted instead of logged).
    pub tt_move_rejects: u64,
    /// Interior nodes reached in a counting traversal with no designated
    /// best move available.
    pub oracle_misses: u64,
    /// histogram[level][rank]: cutoffs at `level` plies below the search
    /// root that arrived on the rank-th ordered move. Iterative deepening
    /// resets this per iteration, so after a run it describes the last one.
    pub cutoff_rank_histogram: Vec<Vec<u64>>,
    pub iterations: Vec<IterationSnapshot>,
}

impl SearchStats {
    pub fn node_accesses(&self) -> u64 {
        self.interior_expansions + self.leaf_evaluations + self.tt_cutoffs
    }

    pub fn record_cutoff_rank(&mut self, level: usize, rank: usize) {
        if self.cutoff_rank_histogram.len() <= level {
            self.cutoff_rank_histogram.resize(level + 1, Vec::new());
        }
        let row = &mut self.cutoff_rank_histogram[level];
        if row.len() <= rank {
            row.resize(rank + 1, 0);
        }
        row[rank] += 1;
    }

    /// Fraction of cutoffs at `level` that the first ordered move caused;
    /// none if no cutoff happened there.
    pub fn first_move_cutoff_rate(&self, level: usize) -> Option<f64> {
        let row = self.cutoff_rank_histogram.get(level)?;
        let total: u64 = row.iter().sum();
        (total > 0).then(|| row[0] as f64 / total as f64)
    }

    pub fn histogram_levels(&self) -> usize {
        self.cutoff_rank_histogram.len()
    }

    pub fn reset_histogram(&mut self) {
        self.cutoff_rank_histogram.clear();
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn accesses_are_the_three_way_sum() {
        let stats = SearchStats {
            interior_expansions: 5,
            leaf_evaluations: 11,
            tt_cutoffs: 2,
            etc_probes: 100,
            ..SearchStats::default()
        };
        assert_eq!(stats.node_accesses(), 18);
    }

    #[test]
    fn histogram_and_rate() {
        let mut stats = SearchStats::default();
        stats.record_cutoff_rank(3, 0);
        stats.record_cutoff_rank(3, 0);
        stats.record_cutoff_rank(3, 2);
        stats.record_cutoff_rank(1, 1);
        assert_eq!(stats.cutoff_rank_histogram[3], vec![2, 0, 1]);
        assert_eq!(stats.first_move_cutoff_rate(3), Some(2.0 / 3.0));
        assert_eq!(stats.first_move_cutoff_rate(1), Some(0.0));
        assert_eq!(stats.first_move_cutoff_rate(0), None);
        assert_eq!(stats.first_move_cutoff_rate(9), None);
    }
}
