//! Score encoding shared by every engine and game.
//!
//! Scores are plain integers. Heuristic evaluations stay inside
//! `[-EVAL_LIMIT, EVAL_LIMIT]`. Proven terminal outcomes are encoded as
//! `+/-(WIN_BASE - ply)`, so an outcome nearer the root compares higher than
//! the same outcome further away and fixed-depth comparisons stay sound
//! without separate mate-distance bookkeeping.

pub type Score = i32;

/// Window sentinel, strictly larger than any encodable score.
pub const INF: Score = 1 << 20;
pub const WIN_BASE: Score = 32_000;
pub const EVAL_LIMIT: Score = 10_000;
/// Anything at or above this magnitude is a terminal outcome score.
pub const TERMINAL_FLOOR: Score = 31_000;

#[inline]
pub fn win_at(ply: u32) -> Score {
    debug_assert!((ply as Score) < WIN_BASE - TERMINAL_FLOOR);
    WIN_BASE - ply as Score
}

#[inline]
pub fn loss_at(ply: u32) -> Score {
    -win_at(ply)
}

#[inline]
pub fn is_terminal_score(s: Score) -> bool {
    s.abs() >= TERMINAL_FLOOR
}

/// Shifts a terminal score into node-relative form before it is stored in
/// the table. A terminal distance is measured from the root; storing it
/// relative to the node keeps the value correct when the same position is
/// probed at a different distance from the root.
#[inline]
pub fn to_table(s: Score, ply: u32) -> Score {
    if s >= TERMINAL_FLOOR {
        s + ply as Score
    } else if s <= -TERMINAL_FLOOR {
        s - ply as Score
    } else {
        s
    }
}

/// Inverse of [`to_table`] at the probing node.
#[inline]
pub fn from_table(s: Score, ply: u32) -> Score {
    if s >= TERMINAL_FLOOR {
        s - ply as Score
    } else if s <= -TERMINAL_FLOOR {
        s + ply as Score
    } else {
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nearer_terminal_dominates() {
        assert!(win_at(5) > win_at(9));
        assert!(loss_at(9) > loss_at(5));
        assert!(win_at(100) > EVAL_LIMIT);
        assert!(loss_at(100) < -EVAL_LIMIT);
    }

    #[test]
    fn loss_encoding_example() {
        assert_eq!(loss_at(6), -31_994);
    }

    #[test]
    fn table_shift_round_trips() {
        for ply in [0u32, 3, 17, 80] {
            for s in [win_at(ply + 2), loss_at(ply + 5), 0, 774, -10_000] {
                assert_eq!(from_table(to_table(s, ply), ply), s);
            }
        }
    }

    #[test]
    fn table_shift_rebases_terminal_distance() {
        // A win 4 plies below a node at ply 6 probed again at ply 10.
        let stored = to_table(win_at(10), 6);
        assert_eq!(from_table(stored, 10), win_at(14));
    }

    #[test]
    fn heuristics_pass_through() {
        assert_eq!(to_table(123, 9), 123);
        assert_eq!(from_table(-9_999, 31), -9_999);
    }
}
