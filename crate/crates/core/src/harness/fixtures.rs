//! The committed fixture corpus: 20 positions per game, generated once
//! from fixed seeds and frozen. `gen` materializes them, `check` proves the
//! files on disk still match the generator byte for byte.
//!
//! Board positions are random playout prefixes from the initial position
//! (varying length, never terminal); synthetic fixtures vary branching,
//! depth, and transposition density across the corpus.

use super::HarnessError;
use crate::game::fixture::{parse_fixture, write_fixture};
use crate::game::synthetic::{Branching, SyntheticSpec};
use crate::game::{GameSpec, Position};
use crate::rng::{mix2, Rng64};
use std::path::Path;

const PLAYOUT_SALT: u64 = 0x6669_7874;

pub const FAMILIES: [&str; 3] = ["othello6", "minicheckers", "synthetic"];
pub const PER_FAMILY: usize = 20;

fn playout_prefix(spec: &GameSpec, salt: u64, plies: u32) -> Position {
    let mut attempt = 0u64;
    loop {
        let mut rng = Rng64::new(mix2(PLAYOUT_SALT, salt ^ (attempt << 32)));
        let mut pos = spec.initial();
        let mut alive = true;
        for _ in 0..plies {
            if spec.is_terminal(&pos) {
                alive = false;
                break;
            }
            let moves = spec.moves(&pos);
            pos = spec.apply(&pos, moves[rng.below(moves.len() as u64) as usize]);
        }
        if alive && !spec.is_terminal(&pos) {
            return pos;
        }
        attempt += 1;
        assert!(attempt < 100, "playout generator cannot find a live prefix");
    }
}

fn board_fixture(family: &str, i: usize) -> String {
    let spec = GameSpec::parse(family).expect("known family");
    let plies = match family {
        "othello6" => 2 + (i as u32 % 9),
        _ => 1 + (i as u32 % 6),
    };
    let salt = mix2(fnv_name(family), i as u64);
    let pos = playout_prefix(&spec, salt, plies);
    write_fixture(&spec, &pos)
}

fn fnv_name(name: &str) -> u64 {
    super::config::fnv1a64(name.as_bytes())
}

fn synthetic_fixture(i: usize) -> String {
    let density = match i {
        0..=6 => 0.0,
        7..=11 => 0.5,
        12..=15 => 0.8,
        _ => 1.0,
    };
    let branch = match i % 4 {
        0 => Branching::Fixed(2),
        1 => Branching::Fixed(3),
        2 => Branching::Fixed(4),
        _ => Branching::Range(2, 4),
    };
    let depth = 8 + (i as u32 % 3);
    let spec = SyntheticSpec::new(1000 + i as u64, branch, depth, density);
    let game = GameSpec::parse(&spec.spec_line()).expect("valid spec");
    write_fixture(&game, &game.initial())
}

/// Every fixture as (relative path, contents), in committed order.
pub fn generate_all() -> Vec<(String, String)> {
    let mut out = Vec::with_capacity(FAMILIES.len() * PER_FAMILY);
    for family in FAMILIES {
        for i in 0..PER_FAMILY {
            let contents = match family {
                "synthetic" => synthetic_fixture(i),
                f => board_fixture(f, i),
            };
            out.push((format!("{family}/p{i:02}.pos"), contents));
        }
    }
    out
}

pub fn write_all(dir: &Path) -> Result<usize, HarnessError> {
    let fixtures = generate_all();
    for (rel, contents) in &fixtures {
        let path = dir.join(rel);
        if let Some(parent) = path.parent() {
            std::fs::create_dir_all(parent)
                .map_err(|e| HarnessError::Data(format!("mkdir {}: {e}", parent.display())))?;
        }
        std::fs::write(&path, contents)
            .map_err(|e| HarnessError::Data(format!("write {}: {e}", path.display())))?;
    }
    Ok(fixtures.len())
}

/// Byte-compares the corpus on disk against the generator and re-parses
/// every file.
pub fn check_all(dir: &Path) -> Result<usize, HarnessError> {
    let fixtures = generate_all();
    for (rel, expected) in &fixtures {
        let path = dir.join(rel);
        let on_disk = std::fs::read_to_string(&path)
            .map_err(|e| HarnessError::Data(format!("read {}: {e}", path.display())))?;
        if &on_disk != expected {
            return Err(HarnessError::Data(format!(
                "{} differs from the frozen generator output",
                path.display()
            )));
        }
        parse_fixture(&on_disk)
            .map_err(|e| HarnessError::Data(format!("{}: {e}", path.display())))?;
    }
    Ok(fixtures.len())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn corpus_is_complete_and_parseable() {
        let all = generate_all();
        assert_eq!(all.len(), 60);
        for (rel, contents) in &all {
            let (spec, pos) = parse_fixture(contents)
                .unwrap_or_else(|e| panic!("{rel}: {e}"));
            assert!(!spec.is_terminal(&pos), "{rel} is terminal");
            assert!(!spec.moves(&pos).is_empty(), "{rel} has no moves");
        }
    }

    #[test]
    fn corpus_is_frozen() {
        // Spot-checks pin the generator: if these change, every stored
        // fixture and downstream measurement changes with them.
        let all = generate_all();
        let find = |rel: &str| {
            all.iter()
                .find(|(r, _)| r == rel)
                .map(|(_, c)| c.as_str())
                .unwrap()
        };
        assert!(find("synthetic/p00.pos").starts_with("seed=1000 w=2 d=8 t=0\n"));
        assert!(find("synthetic/p19.pos").starts_with("seed=1019 w=2..4 d=9 t=1\n"));
        let oth = find("othello6/p03.pos");
        assert_eq!(oth.lines().count(), 8, "spec + side + six rows");
        let gen_twice = generate_all();
        assert_eq!(all, gen_twice);
    }

    #[test]
    fn write_then_check_round_trips() {
        let dir = std::env::temp_dir().join(format!("fixtures-test-{}", std::process::id()));
        write_all(&dir).unwrap();
        assert_eq!(check_all(&dir).unwrap(), 60);
        // A corrupted file must be caught.
        let victim = dir.join("othello6/p00.pos");
        let mut text = std::fs::read_to_string(&victim).unwrap();
        text.push('\n');
        std::fs::write(&victim, text).unwrap();
        assert!(check_all(&dir).is_err());
        std::fs::remove_dir_all(&dir).unwrap();
    }
}
