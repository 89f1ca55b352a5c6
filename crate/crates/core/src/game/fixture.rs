//! Fixture files: one search root per file.
//!
//! ```text
//! othello6          line 1: game, either a family name or a synthetic
//! max               line 2: side to move
//! ......            lines 3..8: board rows for the two board games;
//! ......            the synthetic game stops after line 2 because its
//! ..XO..            root is always the empty state
//! ..OX..
//! ......
//! ......
//! ```
//!
//! Lines starting with '#' and blank lines are skipped. Errors carry the
//! 1-based line number in the original file.

use super::{BoardState, GameSpec, Position, Side};
use super::{checkers, othello};

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
#[error("fixture line {line}: {msg}")]
pub struct FixtureError {
    pub line: usize,
    pub msg: String,
}

fn err(line: usize, msg: impl Into<String>) -> FixtureError {
    FixtureError {
        line,
        msg: msg.into(),
    }
}

pub fn parse_fixture(text: &str) -> Result<(GameSpec, Position), FixtureError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));

    let (game_ln, game_line) = lines.next().ok_or_else(|| err(1, "empty fixture"))?;
    let spec = GameSpec::parse(game_line).map_err(|m| err(game_ln, m))?;

    let (side_ln, side_line) = lines
        .next()
        .ok_or_else(|| err(game_ln, "missing side-to-move line"))?;
    let side = match side_line {
        "max" => Side::Max,
        "min" => Side::Min,
        other => return Err(err(side_ln, format!("expected max or min, got '{other}'"))),
    };

    let board = match &spec {
        GameSpec::Synthetic(_) => BoardState::Synthetic(super::SynthState::root()),
        _ => {
            let mut rows = Vec::with_capacity(6);
            let mut row_lines = Vec::with_capacity(6);
            for _ in 0..6 {
                let (ln, row) = lines
                    .next()
                    .ok_or_else(|| err(side_ln, "expected 6 board rows"))?;
                rows.push(row);
                row_lines.push(ln);
            }
            let grid_err = |sq: usize| {
                err(
                    row_lines[sq / 6],
                    format!("bad cell in column {}", sq % 6 + 1),
                )
            };
            match &spec {
                GameSpec::Othello6 => {
                    BoardState::Othello(othello::from_grid(&rows).map_err(grid_err)?)
                }
                GameSpec::MiniCheckers => {
                    BoardState::Checkers(checkers::from_grid(&rows).map_err(grid_err)?)
                }
                GameSpec::Synthetic(_) => unreachable!(),
            }
        }
    };

    if let Some((ln, _)) = lines.next() {
        return Err(err(ln, "unexpected trailing content"));
    }

    let pos = spec.position_from(board, side);
    Ok((spec, pos))
}

/// Serializes a search root. Only root states are representable for the
/// synthetic game; its board content is implied by the parameter line.
pub fn write_fixture(spec: &GameSpec, pos: &Position) -> String {
    let mut out = String::new();
    out.push_str(&spec.spec_string());
    out.push('\n');
    out.push_str(match pos.side {
        Side::Max => "max",
        Side::Min => "min",
    });
    out.push('\n');
    match &pos.board {
        BoardState::Othello(b) => {
            for row in othello::to_grid(b) {
                out.push_str(&row);
                out.push('\n');
            }
        }
        BoardState::Checkers(b) => {
            for row in checkers::to_grid(b) {
                out.push_str(&row);
                out.push('\n');
            }
        }
        BoardState::Synthetic(st) => {
            debug_assert!(st.labels.is_empty(), "only root states are writable");
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::{Branching, SyntheticSpec};

    #[test]
    fn round_trips_initial_positions() {
        let games = [
            GameSpec::Othello6,
            GameSpec::MiniCheckers,
            GameSpec::Synthetic(SyntheticSpec::new(7, Branching::Fixed(3), 8, 0.5)),
        ];
        for g in games {
            let pos = g.initial();
            let text = write_fixture(&g, &pos);
            let (g2, pos2) = parse_fixture(&text).unwrap();
            assert_eq!(g2, g);
            assert_eq!(pos2, pos);
        }
    }

    #[test]
    fn skips_comments_and_blank_lines() {
        let text = "# a remark\n\nothello6\n# side next\nmin\n......\n......\n..XO..\n..OX..\n......\n......\n";
        let (g, pos) = parse_fixture(text).unwrap();
        assert_eq!(g, GameSpec::Othello6);
        assert_eq!(pos.side, Side::Min);
    }

    #[test]
    fn reports_first_bad_cell_with_line_number() {
        let text = "othello6\nmax\n......\n......\n..XO..\n..OZ..\n......\n......\n";
        let e = parse_fixture(text).unwrap_err();
        assert_eq!(e.line, 6);
        assert!(e.msg.contains("column 4"));
    }

    #[test]
    fn rejects_piece_on_light_square() {
        let text = "minicheckers\nmax\nX.....\n......\n......\n......\n......\n......\n";
        let e = parse_fixture(text).unwrap_err();
        assert_eq!(e.line, 3);
    }

    #[test]
    fn rejects_structural_problems() {
        assert!(parse_fixture("").is_err());
        assert!(parse_fixture("othello6\n").unwrap_err().msg.contains("side"));
        assert!(parse_fixture("othello6\nboth\n").is_err());
        assert!(parse_fixture("othello6\nmax\n......\n").is_err());
        let trailing = "seed=1 w=2 d=4 t=0.0\nmax\nextra\n";
        assert!(parse_fixture(trailing)
            .unwrap_err()
            .msg
            .contains("trailing"));
    }
}
