//! 6x6 Othello board logic.
//!
//! Bitboards use bits 0..36, square = row * 6 + col, row 0 at the top.
//! A player without a placement passes; when neither player can place the
//! game is over and the disc difference decides the outcome.

use super::zobrist::piece_key;
use super::Side;
use crate::score::{loss_at, win_at, Score};

pub const BOARD: u64 = (1 << 36) - 1;
const COL0: u64 = (1 << 0) | (1 << 6) | (1 << 12) | (1 << 18) | (1 << 24) | (1 << 30);
const COL5: u64 = COL0 << 5;

/// Corner squares, the only positional term in the evaluation.
const CORNERS: u64 = (1 << 0) | (1 << 5) | (1 << 30) | (1 << 35);

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OthelloBoard {
    pub max_discs: u64,
    pub min_discs: u64,
}

impl OthelloBoard {
    pub fn initial() -> Self {
        OthelloBoard {
            max_discs: (1 << 14) | (1 << 21),
            min_discs: (1 << 15) | (1 << 20),
        }
    }

    #[inline]
    pub fn discs(&self, side: Side) -> u64 {
        match side {
            Side::Max => self.max_discs,
            Side::Min => self.min_discs,
        }
    }

    #[inline]
    pub fn occupied(&self) -> u64 {
        self.max_discs | self.min_discs
    }
}

#[inline]
fn shift(b: u64, dir: usize) -> u64 {
    let s = match dir {
        0 => (b & !COL5) << 1,
        1 => (b & !COL0) >> 1,
        2 => b << 6,
        3 => b >> 6,
        4 => (b & !COL5) << 7,
        5 => (b & !COL0) << 5,
        6 => (b & !COL5) >> 5,
        7 => (b & !COL0) >> 7,
        _ => unreachable!(),
    };
    s & BOARD
}

/// Squares where `side` may legally place a disc.
pub fn placements(board: &OthelloBoard, side: Side) -> u64 {
    let own = board.discs(side);
    let opp = board.discs(side.flip());
    let empty = BOARD & !(own | opp);
    let mut moves = 0;
    for dir in 0..8 {
        let mut x = shift(own, dir) & opp;
        for _ in 0..3 {
            x |= shift(x, dir) & opp;
        }
        moves |= shift(x, dir) & empty;
    }
    moves
}

/// Discs flipped by `side` placing on `sq`. Zero means the placement is illegal.
pub fn flips_for(board: &OthelloBoard, side: Side, sq: u32) -> u64 {
    let own = board.discs(side);
    let opp = board.discs(side.flip());
    let mut flips = 0;
    for dir in 0..8 {
        let mut ray = 0;
        let mut cur = shift(1 << sq, dir);
        while cur & opp != 0 {
            ray |= cur;
            cur = shift(cur, dir);
        }
        if cur & own != 0 {
            flips |= ray;
        }
    }
    flips
}

/// Applies a placement, returning the new board and the XOR delta of the
/// piece keys it touched.
pub fn apply_placement(board: &OthelloBoard, side: Side, sq: u32) -> (OthelloBoard, u64) {
    let flips = flips_for(board, side, sq);
    debug_assert!(flips != 0, "placement must flip at least one disc");
    let (own_idx, opp_idx) = match side {
        Side::Max => (0, 1),
        Side::Min => (1, 0),
    };
    let mut delta = piece_key(own_idx, sq as usize);
    let mut f = flips;
    while f != 0 {
        let s = f.trailing_zeros() as usize;
        delta ^= piece_key(opp_idx, s) ^ piece_key(own_idx, s);
        f &= f - 1;
    }
    let new = match side {
        Side::Max => OthelloBoard {
            max_discs: board.max_discs | (1 << sq) | flips,
            min_discs: board.min_discs & !flips,
        },
        Side::Min => OthelloBoard {
            max_discs: board.max_discs & !flips,
            min_discs: board.min_discs | (1 << sq) | flips,
        },
    };
    (new, delta)
}

/// Heuristic for a non-terminal position, from the mover's point of view.
pub fn eval(board: &OthelloBoard, side: Side) -> Score {
    let own = board.discs(side);
    let opp = board.discs(side.flip());
    let discs = own.count_ones() as Score - opp.count_ones() as Score;
    let corners = (own & CORNERS).count_ones() as Score - (opp & CORNERS).count_ones() as Score;
    discs * 100 + corners * 300
}

/// Score of a finished game, from the mover's point of view.
pub fn terminal_result(board: &OthelloBoard, side: Side, ply: u32) -> Score {
    let own = board.discs(side).count_ones();
    let opp = board.discs(side.flip()).count_ones();
    match own.cmp(&opp) {
        std::cmp::Ordering::Greater => win_at(ply),
        std::cmp::Ordering::Less => loss_at(ply),
        std::cmp::Ordering::Equal => 0,
    }
}

pub fn board_hash(board: &OthelloBoard) -> u64 {
    let mut h = 0;
    for (color, mut bits) in [(0, board.max_discs), (1, board.min_discs)] {
        while bits != 0 {
            h ^= piece_key(color, bits.trailing_zeros() as usize);
            bits &= bits - 1;
        }
    }
    h
}

pub fn to_grid(board: &OthelloBoard) -> Vec<String> {
    (0..6)
        .map(|r| {
            (0..6)
                .map(|c| {
                    let b = 1u64 << (r * 6 + c);
                    if board.max_discs & b != 0 {
                        'X'
                    } else if board.min_discs & b != 0 {
                        'O'
                    } else {
                        '.'
                    }
                })
                .collect()
        })
        .collect()
}

/// Parses six grid rows. Returns the square index of the first bad char on error.
pub fn from_grid(rows: &[&str]) -> Result<OthelloBoard, usize> {
    let mut board = OthelloBoard {
        max_discs: 0,
        min_discs: 0,
    };
    for (r, row) in rows.iter().enumerate() {
        let chars: Vec<char> = row.chars().collect();
        if chars.len() != 6 {
            return Err(r * 6);
        }
        for (c, ch) in chars.iter().enumerate() {
            let b = 1u64 << (r * 6 + c);
            match ch.to_ascii_uppercase() {
                'X' => board.max_discs |= b,
                'O' => board.min_discs |= b,
                '.' => {}
                _ => return Err(r * 6 + c),
            }
        }
    }
    Ok(board)
}
