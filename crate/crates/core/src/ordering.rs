//! Move ordering: table move first, then history score, then static order.

use crate::game::Move;
use std::collections::HashMap;

/// Cutoff-credit accumulator keyed by a game-supplied move signature.
/// Scores only grow, so sort order is stable within one search.
#[derive(Default, Debug)]
pub struct HistoryTable {
    scores: HashMap<u64, u64>,
}

impl HistoryTable {
    pub fn new() -> HistoryTable {
        HistoryTable::default()
    }

    pub fn score(&self, signature: u64) -> u64 {
        self.scores.get(&signature).copied().unwrap_or(0)
    }

    /// Credit for causing a cutoff (or being best at an exact node) at
    /// `depth` remaining ply. Quadratic so deep successes dominate.
    pub fn update(&mut self, signature: u64, depth: u32) {
        if depth > 0 {
            *self.scores.entry(signature).or_insert(0) += (depth as u64) * (depth as u64);
        }
    }

    pub fn is_empty(&self) -> bool {
        self.scores.is_empty()
    }
}

/// Reorders `moves` in place: `tt_move` (when legal) first, the rest
/// stable-sorted by descending history score so ties keep static order.
/// Returns true when a table move was supplied but is not in the list;
/// such a move is dropped, never inserted.
pub fn order_moves(
    moves: &mut [Move],
    tt_move: Option<Move>,
    hist: &HistoryTable,
    mut signature: impl FnMut(Move) -> u64,
) -> bool {
    if !hist.is_empty() {
        moves.sort_by_cached_key(|&m| std::cmp::Reverse(hist.score(signature(m))));
    }
    if let Some(tt) = tt_move {
        match moves.iter().position(|&m| m == tt) {
            Some(i) => moves[..=i].rotate_right(1),
            None => return true,
        }
    }
    false
}
