//! 6x6 checkers-like game, men only.
//!
//! Pieces live on dark squares, (row + col) odd. Max men advance toward
//! row 5, Min men toward row 0. Captures jump a single adjacent enemy man
//! and are compulsory when available; there is no chaining and no
//! promotion, so a man that reaches the far row simply stops moving.
//! A player with no legal move loses.

use super::zobrist::piece_key;
use super::{Move, Side};
use crate::score::Score;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CheckersBoard {
    pub max_men: u64,
    pub min_men: u64,
}

impl CheckersBoard {
    pub fn initial() -> Self {
        CheckersBoard {
            max_men: (1 << 1) | (1 << 3) | (1 << 5) | (1 << 6) | (1 << 8) | (1 << 10),
            min_men: (1 << 25) | (1 << 27) | (1 << 29) | (1 << 30) | (1 << 32) | (1 << 34),
        }
    }

    #[inline]
    pub fn men(&self, side: Side) -> u64 {
        match side {
            Side::Max => self.max_men,
            Side::Min => self.min_men,
        }
    }

    #[inline]
    pub fn occupied(&self) -> u64 {
        self.max_men | self.min_men
    }
}

#[inline]
pub fn encode_move(from: u32, to: u32) -> Move {
    Move(from * 36 + to)
}

#[inline]
pub fn decode_move(m: Move) -> (u32, u32) {
    (m.0 / 36, m.0 % 36)
}

#[inline]
pub fn is_capture(m: Move) -> bool {
    let (from, to) = decode_move(m);
    (from / 6).abs_diff(to / 6) == 2
}

#[inline]
fn dark(sq: u32) -> bool {
    (sq / 6 + sq % 6) % 2 == 1
}

/// Legal moves in static order: captures only when any capture exists,
/// otherwise quiet steps; either class sorted by (from, to).
pub fn moves(board: &CheckersBoard, side: Side, out: &mut Vec<Move>) {
    out.clear();
    let own = board.men(side);
    let opp = board.men(side.flip());
    let occ = board.occupied();
    let dr: i32 = match side {
        Side::Max => 1,
        Side::Min => -1,
    };
    let mut quiet: Vec<Move> = Vec::new();
    let mut men = own;
    while men != 0 {
        let from = men.trailing_zeros();
        men &= men - 1;
        let (r, c) = ((from / 6) as i32, (from % 6) as i32);
        for dc in [-1i32, 1] {
            let (jr, jc) = (r + dr, c + dc);
            if !(0..6).contains(&jr) || !(0..6).contains(&jc) {
                continue;
            }
            let over = (jr * 6 + jc) as u32;
            let (lr, lc) = (r + 2 * dr, c + 2 * dc);
            if opp & (1 << over) != 0 && (0..6).contains(&lr) && (0..6).contains(&lc) {
                let land = (lr * 6 + lc) as u32;
                if occ & (1 << land) == 0 {
                    out.push(encode_move(from, land));
                    continue;
                }
            }
            if occ & (1 << over) == 0 {
                quiet.push(encode_move(from, over));
            }
        }
    }
    if out.is_empty() {
        out.append(&mut quiet);
    }
    out.sort_by_key(|m| m.0);
}

/// Applies a move, returning the new board and the XOR delta of the piece
/// keys it touched.
pub fn apply_move(board: &CheckersBoard, side: Side, m: Move) -> (CheckersBoard, u64) {
    let (from, to) = decode_move(m);
    let (own_idx, opp_idx) = match side {
        Side::Max => (0, 1),
        Side::Min => (1, 0),
    };
    let mut delta = piece_key(own_idx, from as usize) ^ piece_key(own_idx, to as usize);
    let mut new = *board;
    let own = match side {
        Side::Max => &mut new.max_men,
        Side::Min => &mut new.min_men,
    };
    *own = (*own & !(1 << from)) | (1 << to);
    if is_capture(m) {
        let mid = (from + to) / 2;
        delta ^= piece_key(opp_idx, mid as usize);
        match side {
            Side::Max => new.min_men &= !(1u64 << mid),
            Side::Min => new.max_men &= !(1u64 << mid),
        }
    }
    (new, delta)
}

/// True when `side` has at least one forced capture available.
pub fn has_capture(board: &CheckersBoard, side: Side) -> bool {
    let own = board.men(side);
    let opp = board.men(side.flip());
    let occ = board.occupied();
    let dr: i32 = match side {
        Side::Max => 1,
        Side::Min => -1,
    };
    let mut men = own;
    while men != 0 {
        let from = men.trailing_zeros();
        men &= men - 1;
        let (r, c) = ((from / 6) as i32, (from % 6) as i32);
        for dc in [-1i32, 1] {
            let (jr, jc) = (r + dr, c + dc);
            let (lr, lc) = (r + 2 * dr, c + 2 * dc);
            if !(0..6).contains(&lr) || !(0..6).contains(&lc) {
                continue;
            }
            let over = (jr * 6 + jc) as u32;
            let land = (lr * 6 + lc) as u32;
            if opp & (1 << over) != 0 && occ & (1 << land) == 0 {
                return true;
            }
        }
    }
    false
}

/// Material plus advancement, from the mover's point of view. A pending
/// forced capture is credited at half a man so that values taken mid
/// exchange do not oscillate with the parity of the search horizon.
pub fn eval(board: &CheckersBoard, side: Side) -> Score {
    let score_of = |men: u64, toward_high: bool| -> Score {
        let mut s = 0;
        let mut bits = men;
        while bits != 0 {
            let sq = bits.trailing_zeros();
            bits &= bits - 1;
            let row = (sq / 6) as Score;
            s += 100 + 2 * if toward_high { row } else { 5 - row };
        }
        s
    };
    let max_score = score_of(board.max_men, true);
    let min_score = score_of(board.min_men, false);
    let mut s = match side {
        Side::Max => max_score - min_score,
        Side::Min => min_score - max_score,
    };
    if has_capture(board, side) {
        s += 50;
    }
    s
}

pub fn board_hash(board: &CheckersBoard) -> u64 {
    let mut h = 0;
    for (color, mut bits) in [(0, board.max_men), (1, board.min_men)] {
        while bits != 0 {
            h ^= piece_key(color, bits.trailing_zeros() as usize);
            bits &= bits - 1;
        }
    }
    h
}

pub fn to_grid(board: &CheckersBoard) -> Vec<String> {
    (0..6)
        .map(|r| {
            (0..6)
                .map(|c| {
                    let b = 1u64 << (r * 6 + c);
                    if board.max_men & b != 0 {
                        'X'
                    } else if board.min_men & b != 0 {
                        'O'
                    } else {
                        '.'
                    }
                })
                .collect()
        })
        .collect()
}

/// Parses six grid rows. Returns the square index of the first bad cell on
/// error; a piece on a light square is a bad cell.
pub fn from_grid(rows: &[&str]) -> Result<CheckersBoard, usize> {
    let mut board = CheckersBoard {
        max_men: 0,
        min_men: 0,
    };
    for (r, row) in rows.iter().enumerate() {
        let chars: Vec<char> = row.chars().collect();
        if chars.len() != 6 {
            return Err(r * 6);
        }
        for (c, ch) in chars.iter().enumerate() {
            let sq = (r * 6 + c) as u32;
            let b = 1u64 << sq;
            match ch.to_ascii_uppercase() {
                'X' | 'O' if !dark(sq) => return Err(sq as usize),
                'X' => board.max_men |= b,
                'O' => board.min_men |= b,
                '.' => {}
                _ => return Err(sq as usize),
            }
        }
    }
    Ok(board)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn initial_has_five_quiet_moves() {
        let b = CheckersBoard::initial();
        let mut out = Vec::new();
        moves(&b, Side::Max, &mut out);
        assert_eq!(out.len(), 5);
        assert!(out.iter().all(|&m| !is_capture(m)));
        // Row-0 men are blocked by their own row-1 men.
        assert!(out.iter().all(|&m| decode_move(m).0 >= 6));
    }

    #[test]
    fn captures_are_compulsory_and_exclusive() {
        // Max man on 13 (r2,c1) must jump the Min man on 20 (r3,c2) to 27 (r4,c3),
        // even though 6 (r1,c0) has quiet moves available.
        let b = CheckersBoard {
            max_men: (1 << 13) | (1 << 6),
            min_men: 1 << 20,
        };
        let mut out = Vec::new();
        moves(&b, Side::Max, &mut out);
        assert_eq!(out, vec![encode_move(13, 27)]);
        let (after, _) = apply_move(&b, Side::Max, out[0]);
        assert_eq!(after.min_men, 0);
        assert_eq!(after.max_men, (1 << 27) | (1 << 6));
    }

    #[test]
    fn blocked_landing_square_allows_quiet_moves() {
        // Same jump but the landing square is occupied by a Max man.
        let b = CheckersBoard {
            max_men: (1 << 13) | (1 << 27),
            min_men: 1 << 20,
        };
        let mut out = Vec::new();
        moves(&b, Side::Max, &mut out);
        assert!(!out.is_empty());
        assert!(out.iter().all(|&m| !is_capture(m)));
    }

    #[test]
    fn man_on_far_row_cannot_move() {
        let b = CheckersBoard {
            max_men: 1 << 32,
            min_men: 0,
        };
        let mut out = Vec::new();
        moves(&b, Side::Max, &mut out);
        assert!(out.is_empty());
    }

    #[test]
    fn no_pieces_means_no_moves() {
        let b = CheckersBoard {
            max_men: 0,
            min_men: 1 << 25,
        };
        let mut out = Vec::new();
        moves(&b, Side::Max, &mut out);
        assert!(out.is_empty());
    }
}
