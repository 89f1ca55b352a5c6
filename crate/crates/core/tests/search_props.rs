//! Generative invariants for the engines: agreement with brute-force
//! negamax on arbitrary game trees, and fail-soft bound validity for
//! arbitrary windows.

use proptest::prelude::*;
use treelab::game::{GameSpec, Position};
use treelab::score::{Score, INF};
use treelab::search::{EngineKind, SearchConfig, Searcher};

fn brute(g: &GameSpec, pos: &Position, depth: u32) -> Score {
    if depth == 0 || g.is_terminal(pos) {
        return g.evaluate(pos);
    }
    g.moves(pos)
        .into_iter()
        .map(|m| -brute(g, &g.apply(pos, m), depth - 1))
        .max()
        .unwrap()
}

fn spec_strategy() -> impl Strategy<Value = (GameSpec, u32)> {
    (
        any::<u64>(),
        2u32..=4,
        1u32..=6,
        prop::sample::select(vec![0.0, 0.5, 0.8, 1.0]),
    )
        .prop_map(|(seed, w, d, t)| {
            let spec = GameSpec::parse(&format!("seed={seed} w={w} d={d} t={t}")).unwrap();
            (spec, d)
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(192))]

    #[test]
    fn engines_agree_with_brute_force((spec, depth) in spec_strategy()) {
        let pos = spec.initial();
        let want = brute(&spec, &pos, depth);
        for engine in EngineKind::ALL {
            let mut s = Searcher::new(&spec, SearchConfig::default(), 14);
            let r = s.iterative(&pos, depth, engine).unwrap();
            prop_assert_eq!(
                r.value, want,
                "{} disagrees with brute force on {}", engine.name(), spec.spec_string()
            );
        }
    }

    #[test]
    fn windowed_search_returns_valid_fail_soft_bounds(
        (spec, depth) in spec_strategy(),
        a in -800i32..800,
        width in 1i32..400,
    ) {
        let pos = spec.initial();
        let (alpha, beta) = (a, a + width);
        let truth = brute(&spec, &pos, depth);
        for scout in [false, true] {
            let mut s = Searcher::new(&spec, SearchConfig::default(), 14);
            let (g, _) = s.search_window(&pos, depth, alpha, beta, scout).unwrap();
            if g <= alpha {
                prop_assert!(truth <= g, "fail-low bound {g} below true value {truth}");
            } else if g >= beta {
                prop_assert!(truth >= g, "fail-high bound {g} above true value {truth}");
            } else {
                prop_assert_eq!(g, truth, "in-window value must be exact");
            }
        }
    }

    #[test]
    fn deeper_search_never_changes_terminal_outcomes(
        (spec, depth) in spec_strategy(),
    ) {
        // A proven win stays a win at any deeper horizon.
        let pos = spec.initial();
        let shallow = brute(&spec, &pos, depth);
        if treelab::score::is_terminal_score(shallow) {
            let deeper = brute(&spec, &pos, depth + 1);
            prop_assert_eq!(shallow, deeper);
        }
    }
}

#[test]
fn full_window_equals_iterative_on_fixtures() {
    let root = std::path::PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures");
    for family in ["othello6", "minicheckers"] {
        let dir = root.join(family);
        let mut paths: Vec<_> = std::fs::read_dir(&dir)
            .unwrap()
            .map(|e| e.unwrap().path())
            .filter(|p| p.extension().is_some_and(|x| x == "pos"))
            .collect();
        paths.sort();
        for p in paths.iter().take(6) {
            let text = std::fs::read_to_string(p).unwrap();
            let (spec, pos) = treelab::game::fixture::parse_fixture(&text).unwrap();
            let depth = 6;
            let mut one_shot = Searcher::new(&spec, SearchConfig::default(), 16);
            let direct = one_shot
                .search_window(&pos, depth, -INF, INF, true)
                .unwrap()
                .0;
            let mut deepened = Searcher::new(&spec, SearchConfig::default(), 16);
            let iter = deepened
                .iterative(&pos, depth, EngineKind::NegaScout)
                .unwrap()
                .value;
            assert_eq!(direct, iter, "{family}/{}", p.display());
        }
    }
}
