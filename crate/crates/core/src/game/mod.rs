//! Game model: three small deterministic games behind one position type.
//!
//! Positions are immutable values; `apply` returns a fresh position and
//! leaves the parent untouched, so unwinding a line is dropping the child.
//! Hashes and evaluations depend only on the board content and the side to
//! move, never on the path that reached them.

pub mod checkers;
pub mod fixture;
pub mod othello;
pub mod synthetic;
pub mod zobrist;

pub use checkers::CheckersBoard;
pub use othello::OthelloBoard;
pub use synthetic::{Branching, SynthState, SyntheticSpec};

use crate::score::{loss_at, Score};
use zobrist::SIDE_KEY;

#[derive(Clone, Copy, PartialEq, Eq, Debug, Hash)]
pub enum Side {
    Max,
    Min,
}

impl Side {
    #[inline]
    pub fn flip(self) -> Side {
        match self {
            Side::Max => Side::Min,
            Side::Min => Side::Max,
        }
    }
}

/// Compact move encoding. The payload is game specific: a board square for
/// othello6 placements (36 encodes the pass), from * 36 + to for
/// minicheckers, and a child slot index for the synthetic game.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Hash)]
pub struct Move(pub u32);

pub const PASS: Move = Move(36);

#[derive(Clone, Debug, PartialEq)]
pub enum GameSpec {
    Othello6,
    MiniCheckers,
    Synthetic(SyntheticSpec),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BoardState {
    Othello(OthelloBoard),
    Checkers(CheckersBoard),
    Synthetic(SynthState),
}

/// Immutable game state. `ply` counts moves from the position the search
/// was rooted at; `hash` is maintained incrementally and always equals the
/// full recomputation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Position {
    pub board: BoardState,
    pub side: Side,
    pub ply: u32,
    pub hash: u64,
}

impl GameSpec {
    pub fn parse(s: &str) -> Result<GameSpec, String> {
        match s.trim() {
            "othello6" => Ok(GameSpec::Othello6),
            "minicheckers" => Ok(GameSpec::MiniCheckers),
            other if other.starts_with("seed=") => {
                Ok(GameSpec::Synthetic(SyntheticSpec::parse_spec_line(other)?))
            }
            "synthetic" => Err("synthetic needs a parameter line, e.g. seed=1 w=3 d=6 t=0.5".into()),
            other => Err(format!("unknown game '{other}'")),
        }
    }

    /// Game family name, without synthetic parameters.
    pub fn family(&self) -> &'static str {
        match self {
            GameSpec::Othello6 => "othello6",
            GameSpec::MiniCheckers => "minicheckers",
            GameSpec::Synthetic(_) => "synthetic",
        }
    }

    /// Full identity: family name, or the parameter line for synthetic.
    pub fn spec_string(&self) -> String {
        match self {
            GameSpec::Synthetic(s) => s.spec_line(),
            other => other.family().to_string(),
        }
    }

    pub fn initial(&self) -> Position {
        self.position_from(
            match self {
                GameSpec::Othello6 => BoardState::Othello(OthelloBoard::initial()),
                GameSpec::MiniCheckers => BoardState::Checkers(CheckersBoard::initial()),
                GameSpec::Synthetic(_) => BoardState::Synthetic(SynthState::root()),
            },
            Side::Max,
        )
    }

    /// Builds a root position (ply 0) from parts, computing the hash.
    pub fn position_from(&self, board: BoardState, side: Side) -> Position {
        let mut pos = Position {
            board,
            side,
            ply: 0,
            hash: 0,
        };
        pos.hash = self.recompute_hash(&pos);
        pos
    }

    pub fn legal_moves(&self, pos: &Position, out: &mut Vec<Move>) {
        out.clear();
        match (self, &pos.board) {
            (GameSpec::Othello6, BoardState::Othello(b)) => {
                let mut mask = othello::placements(b, pos.side);
                if mask == 0 {
                    if othello::placements(b, pos.side.flip()) != 0 {
                        out.push(PASS);
                    }
                    return;
                }
                while mask != 0 {
                    out.push(Move(mask.trailing_zeros()));
                    mask &= mask - 1;
                }
            }
            (GameSpec::MiniCheckers, BoardState::Checkers(b)) => {
                checkers::moves(b, pos.side, out);
            }
            (GameSpec::Synthetic(spec), BoardState::Synthetic(st)) => {
                if (st.labels.len() as u32) < spec.depth {
                    let n = synthetic::move_labels(spec, st, pos.hash).len();
                    out.extend((0..n as u32).map(Move));
                }
            }
            _ => unreachable!("position does not belong to this game"),
        }
    }

    pub fn moves(&self, pos: &Position) -> Vec<Move> {
        let mut out = Vec::new();
        self.legal_moves(pos, &mut out);
        out
    }

    pub fn is_terminal(&self, pos: &Position) -> bool {
        match (self, &pos.board) {
            (GameSpec::Othello6, BoardState::Othello(b)) => {
                othello::placements(b, pos.side) == 0
                    && othello::placements(b, pos.side.flip()) == 0
            }
            (GameSpec::MiniCheckers, BoardState::Checkers(_)) => self.moves(pos).is_empty(),
            (GameSpec::Synthetic(spec), BoardState::Synthetic(st)) => {
                st.labels.len() as u32 >= spec.depth
            }
            _ => unreachable!("position does not belong to this game"),
        }
    }

    pub fn apply(&self, pos: &Position, m: Move) -> Position {
        let (board, delta) = match (self, &pos.board) {
            (GameSpec::Othello6, BoardState::Othello(b)) => {
                if m == PASS {
                    debug_assert!(othello::placements(b, pos.side) == 0);
                    (BoardState::Othello(*b), 0)
                } else {
                    let (nb, delta) = othello::apply_placement(b, pos.side, m.0);
                    (BoardState::Othello(nb), delta)
                }
            }
            (GameSpec::MiniCheckers, BoardState::Checkers(b)) => {
                let (nb, delta) = checkers::apply_move(b, pos.side, m);
                (BoardState::Checkers(nb), delta)
            }
            (GameSpec::Synthetic(spec), BoardState::Synthetic(st)) => {
                let (ns, delta) = synthetic::apply(spec, st, pos.hash, m);
                // The synthetic delta already folds the side key in.
                let next = Position {
                    board: BoardState::Synthetic(ns),
                    side: pos.side.flip(),
                    ply: pos.ply + 1,
                    hash: pos.hash ^ delta,
                };
                debug_assert_eq!(next.hash, self.recompute_hash(&next));
                return next;
            }
            _ => unreachable!("position does not belong to this game"),
        };
        let next = Position {
            board,
            side: pos.side.flip(),
            ply: pos.ply + 1,
            hash: pos.hash ^ delta ^ SIDE_KEY,
        };
        debug_assert_eq!(next.hash, self.recompute_hash(&next));
        next
    }

    /// Heuristic when non-terminal, exact outcome when terminal. Always from
    /// the point of view of the side to move.
    pub fn evaluate(&self, pos: &Position) -> Score {
        match (self, &pos.board) {
            (GameSpec::Othello6, BoardState::Othello(b)) => {
                if self.is_terminal(pos) {
                    othello::terminal_result(b, pos.side, pos.ply)
                } else {
                    othello::eval(b, pos.side)
                }
            }
            (GameSpec::MiniCheckers, BoardState::Checkers(b)) => {
                if self.is_terminal(pos) {
                    loss_at(pos.ply)
                } else {
                    checkers::eval(b, pos.side)
                }
            }
            (GameSpec::Synthetic(spec), BoardState::Synthetic(_)) => {
                synthetic::eval(spec, pos.hash)
            }
            _ => unreachable!("position does not belong to this game"),
        }
    }

    /// Full hash recomputation, the oracle for the incremental updates.
    pub fn recompute_hash(&self, pos: &Position) -> u64 {
        let side_part = match pos.side {
            Side::Max => 0,
            Side::Min => SIDE_KEY,
        };
        match (self, &pos.board) {
            (GameSpec::Othello6, BoardState::Othello(b)) => othello::board_hash(b) ^ side_part,
            (GameSpec::MiniCheckers, BoardState::Checkers(b)) => {
                checkers::board_hash(b) ^ side_part
            }
            (GameSpec::Synthetic(spec), BoardState::Synthetic(st)) => {
                synthetic::state_hash(spec, st, pos.side)
            }
            _ => unreachable!("position does not belong to this game"),
        }
    }

    /// Stable per-move accumulator index for the history table. For the
    /// synthetic game this is the move's label, so shared labels keep one
    /// score across the whole tree.
    pub fn move_signature(&self, pos: &Position, m: Move) -> u64 {
        match (self, &pos.board) {
            (GameSpec::Synthetic(spec), BoardState::Synthetic(st)) => {
                synthetic::move_labels(spec, st, pos.hash)[m.0 as usize]
            }
            _ => m.0 as u64,
        }
    }

    /// Upper bound on the branching factor, for budget estimates.
    pub fn branching_hint(&self) -> u32 {
        match self {
            GameSpec::Othello6 => 32,
            GameSpec::MiniCheckers => 12,
            GameSpec::Synthetic(s) => s.branch.max(),
        }
    }
}

impl std::fmt::Display for GameSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.spec_string())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::Rng64;
    use crate::score::{is_terminal_score, EVAL_LIMIT, WIN_BASE};

    #[test]
    fn othello_initial_has_four_moves() {
        let g = GameSpec::Othello6;
        let pos = g.initial();
        let moves = g.moves(&pos);
        assert_eq!(moves.len(), 4);
        assert_eq!(moves, vec![Move(9), Move(16), Move(19), Move(26)]);
        assert!(!g.is_terminal(&pos));
    }

    #[test]
    fn checkers_initial_has_five_moves() {
        let g = GameSpec::MiniCheckers;
        let pos = g.initial();
        assert_eq!(g.moves(&pos).len(), 5);
    }

    #[test]
    fn othello_pass_is_offered_and_keeps_board() {
        // Row 2 holds X X O against the west wall: Max can flip the O from
        // square 15, Min has no line ending in its own disc. Min must pass.
        let board = OthelloBoard {
            max_discs: (1 << 12) | (1 << 13),
            min_discs: 1 << 14,
        };
        let g = GameSpec::Othello6;
        let pos = g.position_from(BoardState::Othello(board), Side::Min);
        assert!(othello::placements(&board, Side::Min) == 0);
        assert!(!g.is_terminal(&pos));
        let moves = g.moves(&pos);
        assert_eq!(moves, vec![PASS]);
        let next = g.apply(&pos, PASS);
        assert_eq!(next.board, pos.board);
        assert_eq!(next.side, Side::Max);
        assert_eq!(next.hash, pos.hash ^ SIDE_KEY);
    }

    #[test]
    fn othello_dead_board_is_terminal_for_either_side() {
        let board = OthelloBoard {
            max_discs: (1 << 14) | (1 << 15) | (1 << 20) | (1 << 21),
            min_discs: 0,
        };
        let g = GameSpec::Othello6;
        for side in [Side::Max, Side::Min] {
            let pos = g.position_from(BoardState::Othello(board), side);
            assert!(g.is_terminal(&pos));
            assert!(g.moves(&pos).is_empty());
        }
    }

    #[test]
    fn terminal_scores_encode_distance_from_root() {
        let board = OthelloBoard {
            max_discs: (1 << 14) | (1 << 15) | (1 << 20) | (1 << 21),
            min_discs: 0,
        };
        let g = GameSpec::Othello6;
        let mut pos = g.position_from(BoardState::Othello(board), Side::Max);
        pos.ply = 6;
        assert_eq!(g.evaluate(&pos), WIN_BASE - 6);
        pos.side = Side::Min;
        pos.hash ^= SIDE_KEY;
        assert_eq!(g.evaluate(&pos), -(WIN_BASE - 6));
    }

    #[test]
    fn checkers_stalled_side_loses() {
        let g = GameSpec::MiniCheckers;
        let board = CheckersBoard {
            max_men: 1 << 32,
            min_men: 0,
        };
        let pos = g.position_from(BoardState::Checkers(board), Side::Max);
        assert!(g.is_terminal(&pos));
        assert_eq!(g.evaluate(&pos), -(WIN_BASE));
    }

    #[test]
    fn apply_leaves_parent_untouched() {
        let g = GameSpec::Othello6;
        let pos = g.initial();
        let snapshot = pos.clone();
        let _child = g.apply(&pos, Move(9));
        assert_eq!(pos, snapshot);
    }

    fn random_playout_hashes(g: &GameSpec, seed: u64, max_plies: u32) {
        let mut pos = g.initial();
        let mut rng = Rng64::new(seed);
        for _ in 0..max_plies {
            let moves = g.moves(&pos);
            if moves.is_empty() {
                assert!(g.is_terminal(&pos));
                break;
            }
            let m = moves[rng.below(moves.len() as u64) as usize];
            pos = g.apply(&pos, m);
            assert_eq!(pos.hash, g.recompute_hash(&pos));
            let e = g.evaluate(&pos);
            if !g.is_terminal(&pos) && !matches!(g, GameSpec::Synthetic(_)) {
                assert!(e.abs() <= EVAL_LIMIT, "heuristic out of range: {e}");
            }
            if g.is_terminal(&pos) && !matches!(g, GameSpec::Synthetic(_)) {
                assert!(e == 0 || is_terminal_score(e));
            }
        }
    }

    #[test]
    fn incremental_hash_matches_recompute_on_playouts() {
        for seed in 0..20 {
            random_playout_hashes(&GameSpec::Othello6, seed, 40);
            random_playout_hashes(&GameSpec::MiniCheckers, seed, 60);
            random_playout_hashes(
                &GameSpec::Synthetic(SyntheticSpec::new(
                    seed,
                    Branching::Range(2, 4),
                    8,
                    0.5,
                )),
                seed,
                8,
            );
        }
    }

    #[test]
    fn spec_parse_round_trips() {
        for s in ["othello6", "minicheckers", "seed=3 w=2..4 d=7 t=0.25"] {
            let g = GameSpec::parse(s).unwrap();
            assert_eq!(g.spec_string(), s);
        }
        assert!(GameSpec::parse("othello8").is_err());
        assert!(GameSpec::parse("synthetic").is_err());
    }
}
