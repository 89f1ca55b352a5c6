//! Enhanced transposition cutoffs: before expanding any child, probe every
//! successor in the table. A successor that transposes into an already
//! searched line whose bound refutes this node ends it without a single
//! child expansion.

use crate::game::{GameSpec, Move, Position};
use crate::score::{from_table, Score};
use crate::search::SearchStats;
use crate::ttable::{Bound, TTable};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EtcConfig {
    pub enabled: bool,
    /// Probe only at nodes with at least this much remaining depth; the
    /// default skips the two plies nearest the leaves where probing costs
    /// more than it saves.
    pub min_remaining_depth: u32,
}

impl Default for EtcConfig {
    fn default() -> Self {
        EtcConfig {
            enabled: false,
            min_remaining_depth: 3,
        }
    }
}

impl EtcConfig {
    pub fn on() -> Self {
        EtcConfig {
            enabled: true,
            ..EtcConfig::default()
        }
    }
}

pub fn etc_enabled_at(depth: u32, cfg: &EtcConfig) -> bool {
    debug_assert!(cfg.min_remaining_depth >= 1);
    cfg.enabled && depth >= cfg.min_remaining_depth
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EtcHit {
    pub score: Score,
    pub mv: Move,
}

/// Probes each successor (in the given, already ordered, move order) and
/// returns the first one whose stored bound proves this node >= beta.
/// Probes are tallied in `etc_probes`, never in the table's own probe
/// statistics or in node accesses, and nothing is stored.
pub fn etc_probe(
    game: &GameSpec,
    pos: &Position,
    moves: &[Move],
    depth: u32,
    beta: Score,
    tt: &TTable,
    stats: &mut SearchStats,
) -> Option<EtcHit> {
    debug_assert!(depth >= 1);
    for &m in moves {
        let child = game.apply(pos, m);
        stats.etc_probes += 1;
        let Some(info) = tt.peek(child.hash) else {
            continue;
        };
        let Some(v) = info.value else { continue };
        // The child value is an upper bound from the child's perspective,
        // so its negation is a lower bound here.
        if v.depth >= depth - 1 && matches!(v.bound, Bound::Exact | Bound::Upper) {
            let score = -from_table(v.score, child.ply);
            if score >= beta {
                stats.etc_cutoffs += 1;
                return Some(EtcHit { score, mv: m });
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::{Branching, GameSpec, SyntheticSpec};
    use crate::score::to_table;

    #[test]
    fn threshold_gates_probing() {
        let cfg = EtcConfig::on();
        assert!(etc_enabled_at(3, &cfg));
        assert!(!etc_enabled_at(2, &cfg));
        assert!(!etc_enabled_at(5, &EtcConfig::default()));
    }

    #[test]
    fn empty_table_never_cuts() {
        let g = GameSpec::Synthetic(SyntheticSpec::new(1, Branching::Fixed(3), 4, 0.0));
        let pos = g.initial();
        let moves = g.moves(&pos);
        let tt = TTable::new(8);
        let mut stats = SearchStats::default();
        assert_eq!(etc_probe(&g, &pos, &moves, 3, 0, &tt, &mut stats), None);
        assert_eq!(stats.etc_probes, 3);
        assert_eq!(stats.etc_cutoffs, 0);
    }

    #[test]
    fn sufficient_upper_bound_on_a_child_cuts() {
        let g = GameSpec::Synthetic(SyntheticSpec::new(1, Branching::Fixed(3), 4, 0.0));
        let pos = g.initial();
        let moves = g.moves(&pos);
        let mut tt = TTable::new(8);
        let mut stats = SearchStats::default();

        let target = g.apply(&pos, moves[1]);
        // Child proven <= -40 at sufficient depth: this node is >= 40.
        tt.store(
            target.hash,
            2,
            to_table(-40, target.ply),
            Bound::Upper,
            None,
        );
        let hit = etc_probe(&g, &pos, &moves, 3, 40, &tt, &mut stats).unwrap();
        assert_eq!(hit, EtcHit { score: 40, mv: moves[1] });
        assert_eq!(stats.etc_probes, 2);
        assert_eq!(stats.etc_cutoffs, 1);

        // A lower bound on the child proves nothing here.
        let mut stats = SearchStats::default();
        tt.store(
            target.hash,
            2,
            to_table(-40, target.ply),
            Bound::Lower,
            None,
        );
        assert_eq!(etc_probe(&g, &pos, &moves, 3, 40, &tt, &mut stats), None);

        // Too shallow an entry proves nothing either.
        let mut tt = TTable::new(8);
        tt.store(
            target.hash,
            1,
            to_table(-40, target.ply),
            Bound::Upper,
            None,
        );
        let mut stats = SearchStats::default();
        assert_eq!(etc_probe(&g, &pos, &moves, 3, 40, &tt, &mut stats), None);
    }
}
