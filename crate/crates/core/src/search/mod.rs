//! Fail-soft negamax engines over one shared table: plain alpha-beta, the
//! scout variant with null-window re-searches, an aspiration-window driver,
//! repeated-null-window convergence, and iterative deepening.
//!
//! All engines return the same value for the same position and depth; they
//! differ only in how many nodes they touch. Every driver reports fail-soft
//! results: a value at or below alpha is an upper bound, at or beyond beta a
//! lower bound, anything strictly inside the window is exact.

mod stats;

pub use stats::{IterationSnapshot, SearchStats};

use crate::etc::{etc_enabled_at, etc_probe, EtcConfig};
use crate::game::{GameSpec, Move, Position};
use crate::ordering::{order_moves, HistoryTable};
use crate::score::{from_table, to_table, Score, INF};
use crate::ttable::{Bound, TTable, TtValue};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum EngineKind {
    AlphaBeta,
    NegaScout,
    AspNegaScout,
    MtdF,
}

impl EngineKind {
    pub const ALL: [EngineKind; 4] = [
        EngineKind::AlphaBeta,
        EngineKind::NegaScout,
        EngineKind::AspNegaScout,
        EngineKind::MtdF,
    ];

    pub fn name(self) -> &'static str {
        match self {
            EngineKind::AlphaBeta => "alphabeta",
            EngineKind::NegaScout => "negascout",
            EngineKind::AspNegaScout => "aspnegascout",
            EngineKind::MtdF => "mtdf",
        }
    }
}

impl std::str::FromStr for EngineKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        EngineKind::ALL
            .into_iter()
            .find(|e| e.name() == s)
            .ok_or_else(|| format!("unknown engine '{s}' (alphabeta|negascout|aspnegascout|mtdf)"))
    }
}

impl std::fmt::Display for EngineKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Debug)]
pub struct SearchConfig {
    pub use_tt: bool,
    /// Allow stored values to end nodes early. Off in counting passes that
    /// must walk the full tree.
    pub tt_value_cutoffs: bool,
    pub use_tt_move: bool,
    pub use_history: bool,
    /// Counting / designation-frozen mode: stores keep existing best moves,
    /// ordering consults the designation oracle, missing designations are
    /// tallied as oracle misses.
    pub preserve_tt_moves: bool,
    pub etc: EtcConfig,
    pub aspiration_delta: Score,
    pub node_budget: Option<u64>,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            use_tt: true,
            tt_value_cutoffs: true,
            use_tt_move: true,
            use_history: true,
            preserve_tt_moves: false,
            etc: EtcConfig::default(),
            aspiration_delta: 50,
            node_budget: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SearchError {
    #[error("node budget of {limit} accesses exhausted")]
    Budget { limit: u64 },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchResult {
    pub value: Score,
    pub best_move: Option<Move>,
    pub depth: u32,
    /// Root-level passes taken: 1 for direct searches, re-search count for
    /// aspiration, convergence passes for repeated null windows.
    pub passes: u32,
}

pub struct Searcher<'a> {
    pub game: &'a GameSpec,
    pub cfg: SearchConfig,
    pub tt: TTable,
    pub hist: HistoryTable,
    pub stats: SearchStats,
    root_ply: u32,
    pool: Vec<Vec<Move>>,
}

impl<'a> Searcher<'a> {
    pub fn new(game: &'a GameSpec, cfg: SearchConfig, tt_bits: u32) -> Searcher<'a> {
        Searcher {
            game,
            cfg,
            tt: TTable::new(tt_bits),
            hist: HistoryTable::new(),
            stats: SearchStats::default(),
            root_ply: 0,
            pool: Vec::new(),
        }
    }

    fn check_budget(&self) -> Result<(), SearchError> {
        match self.cfg.node_budget {
            Some(limit) if self.stats.node_accesses() > limit => {
                Err(SearchError::Budget { limit })
            }
            _ => Ok(()),
        }
    }

    /// One fixed-depth search. `guess` seeds the window-steering engines
    /// and is ignored by the plain ones.
    pub fn search(
        &mut self,
        pos: &Position,
        depth: u32,
        engine: EngineKind,
        guess: Option<Score>,
    ) -> Result<SearchResult, SearchError> {
        match engine {
            EngineKind::AlphaBeta => self.full_window(pos, depth, false),
            EngineKind::NegaScout => self.full_window(pos, depth, true),
            EngineKind::AspNegaScout => match guess {
                Some(g) => self.aspiration(pos, depth, g, self.cfg.aspiration_delta),
                None => self.full_window(pos, depth, true),
            },
            EngineKind::MtdF => self.mtd_f(pos, depth, guess.unwrap_or(0)),
        }
    }

    fn full_window(
        &mut self,
        pos: &Position,
        depth: u32,
        scout: bool,
    ) -> Result<SearchResult, SearchError> {
        let (value, best_move) = self.search_window(pos, depth, -INF, INF, scout)?;
        Ok(SearchResult {
            value,
            best_move,
            depth,
            passes: 1,
        })
    }

    /// Raw windowed entry point for drivers and measurement procedures.
    pub fn search_window(
        &mut self,
        pos: &Position,
        depth: u32,
        alpha: Score,
        beta: Score,
        scout: bool,
    ) -> Result<(Score, Option<Move>), SearchError> {
        self.root_ply = pos.ply;
        self.node(pos, depth, alpha, beta, scout)
    }

    /// Searches (guess-delta, guess+delta) first; a miss is re-searched with
    /// the failed side opened up, still containing the fail-soft bound. The
    /// full window is a last resort for the pathological case where the
    /// directed re-search misses too.
    pub fn aspiration(
        &mut self,
        pos: &Position,
        depth: u32,
        guess: Score,
        delta: Score,
    ) -> Result<SearchResult, SearchError> {
        assert!(delta > 0);
        let (alpha, beta) = (guess - delta, guess + delta);
        let (g, best) = self.search_window(pos, depth, alpha, beta, true)?;
        let (value, best_move, passes) = if g <= alpha {
            let (g2, b2) = self.search_window(pos, depth, -INF, g + 1, true)?;
            if g2 <= g {
                (g2, b2.or(best), 2)
            } else {
                let (g3, b3) = self.search_window(pos, depth, -INF, INF, true)?;
                (g3, b3, 3)
            }
        } else if g >= beta {
            let (g2, b2) = self.search_window(pos, depth, g - 1, INF, true)?;
            if g2 >= g {
                (g2, b2.or(best), 2)
            } else {
                let (g3, b3) = self.search_window(pos, depth, -INF, INF, true)?;
                (g3, b3, 3)
            }
        } else {
            (g, best, 1)
        };
        Ok(SearchResult {
            value,
            best_move,
            depth,
            passes,
        })
    }

    /// Repeated null-window searches walking the bound interval shut.
    pub fn mtd_f(
        &mut self,
        pos: &Position,
        depth: u32,
        first_guess: Score,
    ) -> Result<SearchResult, SearchError> {
        let mut g = first_guess.clamp(-INF + 1, INF - 1);
        let (mut lo, mut hi) = (-INF, INF);
        let mut best_move = None;
        let mut passes = 0u32;
        while lo < hi {
            passes += 1;
            assert!(passes <= 100_000, "null-window convergence stalled");
            let beta = if g == lo { g + 1 } else { g };
            let (v, bm) = self.search_window(pos, depth, beta - 1, beta, false)?;
            best_move = bm.or(best_move);
            if v < beta {
                hi = v;
            } else {
                lo = v;
            }
            g = v;
        }
        Ok(SearchResult {
            value: g,
            best_move,
            depth,
            passes,
        })
    }

    /// Deepening driver: one table generation per iteration, previous value
    /// as the next guess, per-iteration stat deltas recorded. The cutoff
    /// histogram is reset each iteration and so describes the last one.
    pub fn iterative(
        &mut self,
        pos: &Position,
        max_depth: u32,
        engine: EngineKind,
    ) -> Result<SearchResult, SearchError> {
        assert!(max_depth >= 1);
        let mut guess = None;
        let mut out = None;
        for depth in 1..=max_depth {
            self.tt.new_generation();
            self.stats.reset_histogram();
            let (i0, l0, t0, ep0, ec0, h0) = (
                self.stats.interior_expansions,
                self.stats.leaf_evaluations,
                self.stats.tt_cutoffs,
                self.stats.etc_probes,
                self.stats.etc_cutoffs,
                self.tt.stats.hits,
            );
            let r = self.search(pos, depth, engine, guess)?;
            self.stats.iterations.push(IterationSnapshot {
                depth,
                value: r.value,
                best_move: r.best_move,
                interior_expansions: self.stats.interior_expansions - i0,
                leaf_evaluations: self.stats.leaf_evaluations - l0,
                tt_cutoffs: self.stats.tt_cutoffs - t0,
                etc_probes: self.stats.etc_probes - ep0,
                etc_cutoffs: self.stats.etc_cutoffs - ec0,
                tt_hits: self.tt.stats.hits - h0,
            });
            guess = Some(r.value);
            out = Some(r);
        }
        Ok(out.expect("max_depth >= 1"))
    }

    fn node(
        &mut self,
        pos: &Position,
        depth: u32,
        alpha: Score,
        beta: Score,
        scout: bool,
    ) -> Result<(Score, Option<Move>), SearchError> {
        debug_assert!(alpha < beta);
        if depth == 0 || self.game.is_terminal(pos) {
            self.stats.leaf_evaluations += 1;
            self.check_budget()?;
            return Ok((self.game.evaluate(pos), None));
        }

        let mut tt_move = None;
        if self.cfg.use_tt {
            let info = self.tt.probe(pos.hash);
            if let Some(info) = info {
                // The root never returns from a table hit: callers need a
                // best move backed by a search from here.
                if self.cfg.tt_value_cutoffs && pos.ply != self.root_ply {
                    if let Some(v) = info.value {
                        let local = TtValue {
                            score: from_table(v.score, pos.ply),
                            ..v
                        };
                        if let Some(cut) = local.sufficient(depth, alpha, beta) {
                            self.stats.tt_cutoffs += 1;
                            self.check_budget()?;
                            return Ok((cut, info.best_move));
                        }
                    }
                }
                if self.cfg.use_tt_move {
                    tt_move = info.best_move;
                }
            }
            if self.cfg.preserve_tt_moves && self.cfg.use_tt_move {
                tt_move = self.tt.oracle_move(pos.hash).or(tt_move);
                if tt_move.is_none() {
                    self.stats.oracle_misses += 1;
                }
            }
        }

        let mut moves = self.pool.pop().unwrap_or_default();
        self.game.legal_moves(pos, &mut moves);
        debug_assert!(!moves.is_empty(), "non-terminal node without moves");
        self.stats.interior_expansions += 1;
        self.check_budget()?;

        let out = self.scan(pos, depth, alpha, beta, scout, tt_move, &mut moves);
        moves.clear();
        self.pool.push(moves);
        out
    }

    #[allow(clippy::too_many_arguments)]
    fn scan(
        &mut self,
        pos: &Position,
        depth: u32,
        alpha: Score,
        beta: Score,
        scout: bool,
        tt_move: Option<Move>,
        moves: &mut [Move],
    ) -> Result<(Score, Option<Move>), SearchError> {
        let game = self.game;
        if order_moves(moves, tt_move, &self.hist, |m| game.move_signature(pos, m)) {
            self.stats.tt_move_rejects += 1;
        }

        if etc_enabled_at(depth, &self.cfg.etc) && self.cfg.use_tt && self.cfg.tt_value_cutoffs {
            if let Some(hit) = etc_probe(game, pos, moves, depth, beta, &self.tt, &mut self.stats)
            {
                self.store_result(pos, depth, hit.score, alpha, beta, Some(hit.mv));
                return Ok((hit.score, Some(hit.mv)));
            }
        }

        let mut best = -INF;
        let mut best_move = None;
        let mut a = alpha;
        for (rank, &m) in moves.iter().enumerate() {
            let child = game.apply(pos, m);
            let v = if scout && rank > 0 {
                let t = -self.node(&child, depth - 1, -a - 1, -a, scout)?.0;
                if t > a && t < beta {
                    -self.node(&child, depth - 1, -beta, -t, scout)?.0
                } else {
                    t
                }
            } else {
                -self.node(&child, depth - 1, -beta, -a, scout)?.0
            };
            if v > best {
                best = v;
                best_move = Some(m);
            }
            if best > a {
                a = best;
            }
            if best >= beta {
                self.stats
                    .record_cutoff_rank((pos.ply - self.root_ply) as usize, rank);
                if self.cfg.use_history {
                    self.hist.update(game.move_signature(pos, m), depth);
                }
                break;
            }
        }
        if best < beta && best > alpha {
            if let (true, Some(m)) = (self.cfg.use_history, best_move) {
                self.hist.update(game.move_signature(pos, m), depth);
            }
        }
        self.store_result(pos, depth, best, alpha, beta, best_move);
        Ok((best, best_move))
    }

    fn store_result(
        &mut self,
        pos: &Position,
        depth: u32,
        g: Score,
        alpha: Score,
        beta: Score,
        best_move: Option<Move>,
    ) {
        if !self.cfg.use_tt {
            return;
        }
        let bound = if g <= alpha {
            Bound::Upper
        } else if g >= beta {
            Bound::Lower
        } else {
            Bound::Exact
        };
        let score = to_table(g, pos.ply);
        if self.cfg.preserve_tt_moves {
            self.tt.store_preserve_move(pos.hash, depth, score, bound);
        } else {
            self.tt.store(pos.hash, depth, score, bound, best_move);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::{Branching, SyntheticSpec};
    use crate::rng::Rng64;

    fn synth(seed: u64, w: u32, d: u32, t: f64) -> GameSpec {
        GameSpec::Synthetic(SyntheticSpec::new(seed, Branching::Fixed(w), d, t))
    }

    /// Unpruned negamax, the value oracle for everything else.
    fn plain_minimax(game: &GameSpec, pos: &Position, depth: u32) -> (Score, Option<Move>) {
        if depth == 0 || game.is_terminal(pos) {
            return (game.evaluate(pos), None);
        }
        let mut best = (-INF, None);
        for m in game.moves(pos) {
            let v = -plain_minimax(game, &game.apply(pos, m), depth - 1).0;
            if v > best.0 {
                best = (v, Some(m));
            }
        }
        best
    }

    #[test]
    fn depth_zero_is_one_evaluation() {
        let g = synth(42, 3, 4, 0.0);
        let pos = g.initial();
        let mut s = Searcher::new(&g, SearchConfig::default(), 10);
        let r = s.search(&pos, 0, EngineKind::AlphaBeta, None).unwrap();
        assert_eq!(r.value, g.evaluate(&pos));
        assert_eq!(s.stats.leaf_evaluations, 1);
        assert_eq!(s.stats.node_accesses(), 1);
    }

    #[test]
    fn all_engines_match_the_unpruned_oracle() {
        for seed in 0..30 {
            let g = synth(seed, 3, 4, if seed % 3 == 0 { 0.0 } else { 0.6 });
            let pos = g.initial();
            let oracle = plain_minimax(&g, &pos, 4).0;
            for engine in EngineKind::ALL {
                let mut s = Searcher::new(&g, SearchConfig::default(), 12);
                let r = s.iterative(&pos, 4, engine).unwrap();
                assert_eq!(r.value, oracle, "seed {seed} engine {engine}");
                assert!(r.best_move.is_some());
            }
        }
    }

    #[test]
    fn table_on_or_off_never_changes_the_value() {
        for seed in 100..130 {
            let g = synth(seed, 2, 6, 0.8);
            let pos = g.initial();
            let mut with = Searcher::new(&g, SearchConfig::default(), 12);
            let mut without = Searcher::new(
                &g,
                SearchConfig {
                    use_tt: false,
                    ..SearchConfig::default()
                },
                4,
            );
            let a = with.iterative(&pos, 6, EngineKind::NegaScout).unwrap();
            let b = without.iterative(&pos, 6, EngineKind::NegaScout).unwrap();
            assert_eq!(a.value, b.value, "seed {seed}");
        }
    }

    #[test]
    fn fail_soft_bounds_hold_on_arbitrary_windows() {
        let mut rng = Rng64::new(7);
        for seed in 0..40 {
            let g = synth(seed, 3, 4, 0.3);
            let pos = g.initial();
            let truth = plain_minimax(&g, &pos, 4).0;
            let a = -(rng.below(4000) as Score) + 2000;
            let b = a + 1 + rng.below(3000) as Score;
            let mut s = Searcher::new(&g, SearchConfig::default(), 12);
            let (v, _) = s.search_window(&pos, 4, a, b, false).unwrap();
            if v <= a {
                assert!(truth <= v, "seed {seed}: fail-low bound");
            } else if v >= b {
                assert!(truth >= v, "seed {seed}: fail-high bound");
            } else {
                assert_eq!(truth, v, "seed {seed}: exact");
            }
        }
    }

    #[test]
    fn aspiration_with_exact_guess_takes_one_pass() {
        let g = synth(5, 3, 5, 0.2);
        let pos = g.initial();
        let truth = plain_minimax(&g, &pos, 5).0;
        let mut s = Searcher::new(&g, SearchConfig::default(), 12);
        let r = s.aspiration(&pos, 5, truth, 50).unwrap();
        assert_eq!((r.value, r.passes), (truth, 1));

        // A far-off guess needs the directed re-search but lands exactly.
        let mut s = Searcher::new(&g, SearchConfig::default(), 12);
        let r = s.aspiration(&pos, 5, truth + 1000, 50).unwrap();
        assert_eq!((r.value, r.passes), (truth, 2));
    }

    #[test]
    fn null_window_convergence_from_exact_guess_is_two_passes() {
        let g = synth(9, 2, 6, 0.0);
        let pos = g.initial();
        let truth = plain_minimax(&g, &pos, 6).0;
        let mut s = Searcher::new(&g, SearchConfig::default(), 12);
        let r = s.mtd_f(&pos, 6, truth).unwrap();
        assert_eq!(r.value, truth);
        assert!(r.passes <= 2, "took {} passes", r.passes);
    }

    #[test]
    fn budget_aborts_reproducibly() {
        let g = synth(3, 3, 6, 0.0);
        let pos = g.initial();
        let mut s = Searcher::new(
            &g,
            SearchConfig {
                node_budget: Some(50),
                ..SearchConfig::default()
            },
            12,
        );
        let err = s.search(&pos, 6, EngineKind::AlphaBeta, None).unwrap_err();
        assert_eq!(err, SearchError::Budget { limit: 50 });
        assert!(s.stats.node_accesses() <= 51);
    }

    #[test]
    fn perfect_designations_reach_the_minimal_tree_leaf_count() {
        // Uniform w=2 d=4: a first-move-best search evaluates exactly
        // 2^2 + 2^2 - 1 = 7 leaves.
        let g = synth(42, 2, 4, 0.0);
        let pos = g.initial();
        let mut s = Searcher::new(&g, SearchConfig::default(), 14);
        s.tt.enable_journal();

        fn designate(s: &mut Searcher, pos: &Position, depth: u32) -> Score {
            let game = s.game;
            if depth == 0 || game.is_terminal(pos) {
                return game.evaluate(pos);
            }
            let mut best = (-INF, None);
            for m in game.moves(pos) {
                let v = -designate(s, &game.apply(pos, m), depth - 1);
                if v > best.0 {
                    best = (v, Some(m));
                }
            }
            s.tt
                .store(pos.hash, depth, to_table(best.0, pos.ply), Bound::Exact, best.1);
            best.0
        }
        let truth = designate(&mut s, &pos, 4);
        s.tt.retain_best_moves_only();

        s.cfg = SearchConfig {
            tt_value_cutoffs: false,
            use_history: false,
            preserve_tt_moves: true,
            ..SearchConfig::default()
        };
        let r = s.search(&pos, 4, EngineKind::AlphaBeta, None).unwrap();
        assert_eq!(r.value, truth);
        assert_eq!(s.stats.leaf_evaluations, 7);
        assert_eq!(s.stats.oracle_misses, 0);
    }

    #[test]
    fn iterative_records_per_depth_snapshots() {
        let g = synth(11, 3, 5, 0.4);
        let pos = g.initial();
        let mut s = Searcher::new(&g, SearchConfig::default(), 12);
        let r = s.iterative(&pos, 5, EngineKind::AspNegaScout).unwrap();
        assert_eq!(s.stats.iterations.len(), 5);
        let last = s.stats.iterations.last().unwrap();
        assert_eq!(last.depth, 5);
        assert_eq!(last.value, r.value);
        let total: u64 = s.stats.iterations.iter().map(|i| i.node_accesses()).sum();
        assert_eq!(total, s.stats.node_accesses());
        // Direct cold search at the final depth agrees on the value.
        let mut cold = Searcher::new(&g, SearchConfig::default(), 12);
        let c = cold.search(&pos, 5, EngineKind::AlphaBeta, None).unwrap();
        assert_eq!(c.value, r.value);
    }
}
