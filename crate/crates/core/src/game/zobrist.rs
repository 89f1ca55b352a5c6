//! Fixed hash keys for the board games.
//!
//! The seed is a constant so that position hashes, stored fixtures, and
//! frozen test counts agree across machines and builds.

use crate::rng::mix2;

pub const ZOBRIST_SEED: u64 = 0x7c3d_9a1e_55b2_0e4f;

/// Key toggled into the hash while the side to move is Min.
pub const SIDE_KEY: u64 = mix2(ZOBRIST_SEED, 0xbeef);

/// Key for a piece of `color` (0 = Max, 1 = Min) on `square` (0..36).
#[inline]
pub const fn piece_key(color: usize, square: usize) -> u64 {
    mix2(ZOBRIST_SEED, (color * 64 + square + 1) as u64)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn keys_are_distinct() {
        let mut seen = std::collections::HashSet::new();
        seen.insert(SIDE_KEY);
        for c in 0..2 {
            for s in 0..36 {
                assert!(seen.insert(piece_key(c, s)), "duplicate key {c}/{s}");
            }
        }
    }
}
