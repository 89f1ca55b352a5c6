//! Measurement procedures that compare what a search visits against the
//! smallest certificate of the minimax value.
//!
//! Four quantities, all exact node-access counts under deterministic rules:
//!
//! * `lfmt` (left-first minimal tree): a deepening search designates a best
//!   move everywhere, values are wiped, and a narrow-window re-search guided
//!   by those designations is counted with every transposition ignored.
//! * `lfmg` (left-first minimal graph): the same traversal, except a node
//!   already completed at the same window is charged one access instead of
//!   being walked again.
//! * `rmt` (real minimal tree): the cheapest proof tree of the value,
//!   computed by dynamic programming over cutoff alternatives with early
//!   abort, transpositions disabled.
//! * `armg` (approximated real minimal graph): designations are re-optimized
//!   near the leaves by continuing past each cutoff to look for cheaper
//!   refutations, then the graph is re-counted as in `lfmg`.
//!
//! A recount that contradicts the populating search's value is reported as
//! an error, never papered over; the procedures share one value `f` by
//! construction.

use crate::game::{GameSpec, Move, Position};
use crate::score::{Score, INF};
use crate::search::{EngineKind, SearchConfig, SearchError, Searcher};
use crate::ttable::TTable;
use std::collections::HashMap;

#[derive(Clone, Copy, PartialEq, Eq, Debug, Hash, PartialOrd, Ord)]
pub enum Quantity {
    Actual,
    Lfmt,
    Lfmg,
    Rmt,
    Armg,
}

impl Quantity {
    pub const ALL: [Quantity; 5] = [
        Quantity::Actual,
        Quantity::Lfmt,
        Quantity::Lfmg,
        Quantity::Rmt,
        Quantity::Armg,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Quantity::Actual => "actual",
            Quantity::Lfmt => "lfmt",
            Quantity::Lfmg => "lfmg",
            Quantity::Rmt => "rmt",
            Quantity::Armg => "armg",
        }
    }
}

impl std::str::FromStr for Quantity {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        Quantity::ALL
            .into_iter()
            .find(|q| q.name() == s)
            .ok_or_else(|| format!("unknown quantity '{s}' (actual|lfmt|lfmg|rmt|armg)"))
    }
}

impl std::fmt::Display for Quantity {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct NodeCountReport {
    pub quantity: Quantity,
    pub game: String,
    pub root_hash: u64,
    pub depth: u32,
    pub window: (Score, Score),
    pub mm_d: Option<u32>,
    /// The minimax value every pass agreed on.
    pub f: Score,
    pub leaf_count: u64,
    pub interior_count: u64,
    pub tt_cutoffs: u64,
    pub oracle_misses: u64,
}

impl NodeCountReport {
    pub fn total_node_accesses(&self) -> u64 {
        self.leaf_count + self.interior_count + self.tt_cutoffs
    }
}

#[derive(Clone, Copy, Debug)]
pub struct MinGraphConfig {
    pub tt_bits: u32,
    /// Hard ceiling on accesses (or proof-search work units) per phase;
    /// exceeding it aborts with an error instead of running unbounded.
    pub budget: u64,
}

impl Default for MinGraphConfig {
    fn default() -> Self {
        MinGraphConfig {
            tt_bits: 21,
            budget: 100_000_000,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum MetrologyError {
    #[error("budget of {limit} accesses exhausted")]
    Budget { limit: u64 },
    #[error("{designations} designated positions exceed the {capacity}-slot table; raise the table size")]
    Saturated { designations: usize, capacity: usize },
    #[error("recount returned {got} but the populating search found {expected}; designations are corrupt")]
    ValueMismatch { expected: Score, got: Score },
    #[error("{0}")]
    BadConfig(String),
}

impl From<SearchError> for MetrologyError {
    fn from(e: SearchError) -> Self {
        match e {
            SearchError::Budget { limit } => MetrologyError::Budget { limit },
        }
    }
}

/// Step 1 shared by the designation-based procedures: a deepening scout
/// search with the journal on, leaving a best move recorded for every
/// stored position.
fn populate<'a>(
    game: &'a GameSpec,
    pos: &Position,
    depth: u32,
    cfg: &MinGraphConfig,
) -> Result<(Score, Searcher<'a>), MetrologyError> {
    let scfg = SearchConfig {
        node_budget: Some(cfg.budget),
        ..SearchConfig::default()
    };
    let mut s = Searcher::new(game, scfg, cfg.tt_bits);
    s.tt.enable_journal();
    let r = s.iterative(pos, depth, EngineKind::NegaScout)?;
    if s.tt.is_saturated() {
        return Err(MetrologyError::Saturated {
            designations: s.tt.journal_len(),
            capacity: s.tt.capacity(),
        });
    }
    Ok((r.value, s))
}

#[derive(Default, Clone, Copy)]
struct CountStats {
    interior: u64,
    leaf: u64,
    tt_cutoffs: u64,
    oracle_misses: u64,
}

impl CountStats {
    fn accesses(&self) -> u64 {
        self.interior + self.leaf + self.tt_cutoffs
    }
}

/// The counting traversal: plain alpha-beta, designation-first move order,
/// stored values never cut. With `merge` on, a node finished earlier at the
/// same ply and window is charged a single access and returns its recorded
/// result, which is exactly what walking it again would produce.
struct Counter<'a> {
    game: &'a GameSpec,
    tt: &'a TTable,
    merge: Option<HashMap<(u64, u32, Score, Score), Score>>,
    // Leaf results do not depend on the window, so they merge on identity.
    leaf_merge: Option<HashMap<(u64, u32), Score>>,
    stats: CountStats,
    budget: u64,
}

impl<'a> Counter<'a> {
    fn new(game: &'a GameSpec, tt: &'a TTable, merge: bool, budget: u64) -> Counter<'a> {
        Counter {
            game,
            tt,
            merge: merge.then(HashMap::new),
            leaf_merge: merge.then(HashMap::new),
            stats: CountStats::default(),
            budget,
        }
    }

    fn check_budget(&self) -> Result<(), MetrologyError> {
        if self.stats.accesses() > self.budget {
            Err(MetrologyError::Budget { limit: self.budget })
        } else {
            Ok(())
        }
    }

    fn walk(
        &mut self,
        pos: &Position,
        depth: u32,
        alpha: Score,
        beta: Score,
    ) -> Result<Score, MetrologyError> {
        if depth == 0 || self.game.is_terminal(pos) {
            if let Some(lm) = &self.leaf_merge {
                if let Some(&v) = lm.get(&(pos.hash, pos.ply)) {
                    self.stats.tt_cutoffs += 1;
                    self.check_budget()?;
                    return Ok(v);
                }
            }
            self.stats.leaf += 1;
            self.check_budget()?;
            let v = self.game.evaluate(pos);
            if let Some(lm) = &mut self.leaf_merge {
                lm.insert((pos.hash, pos.ply), v);
            }
            return Ok(v);
        }
        let key = (pos.hash, pos.ply, alpha, beta);
        if let Some(merge) = &self.merge {
            if let Some(&g) = merge.get(&key) {
                self.stats.tt_cutoffs += 1;
                self.check_budget()?;
                return Ok(g);
            }
        }
        self.stats.interior += 1;
        self.check_budget()?;

        let mut moves = self.game.moves(pos);
        match self.tt.oracle_move(pos.hash) {
            Some(m) => {
                if let Some(i) = moves.iter().position(|&x| x == m) {
                    moves[..=i].rotate_right(1);
                }
            }
            None => self.stats.oracle_misses += 1,
        }

        let mut best = -INF;
        let mut a = alpha;
        for m in moves {
            let child = self.game.apply(pos, m);
            let v = -self.walk(&child, depth - 1, -beta, -a)?;
            if v > best {
                best = v;
            }
            if best > a {
                a = best;
            }
            if best >= beta {
                break;
            }
        }
        if let Some(merge) = &mut self.merge {
            merge.insert(key, best);
        }
        Ok(best)
    }
}

fn count_report(
    quantity: Quantity,
    game: &GameSpec,
    pos: &Position,
    depth: u32,
    mm_d: Option<u32>,
    f: Score,
    stats: CountStats,
) -> NodeCountReport {
    NodeCountReport {
        quantity,
        game: game.spec_string(),
        root_hash: pos.hash,
        depth,
        window: (f - 1, f + 1),
        mm_d,
        f,
        leaf_count: stats.leaf,
        interior_count: stats.interior,
        tt_cutoffs: stats.tt_cutoffs,
        oracle_misses: stats.oracle_misses,
    }
}

#[allow(clippy::too_many_arguments)]
fn recounted(
    quantity: Quantity,
    game: &GameSpec,
    pos: &Position,
    depth: u32,
    mm_d: Option<u32>,
    f: Score,
    tt: &TTable,
    merge: bool,
    budget: u64,
) -> Result<NodeCountReport, MetrologyError> {
    let mut counter = Counter::new(game, tt, merge, budget);
    let g = counter.walk(pos, depth, f - 1, f + 1)?;
    if g != f {
        return Err(MetrologyError::ValueMismatch {
            expected: f,
            got: g,
        });
    }
    Ok(count_report(quantity, game, pos, depth, mm_d, f, counter.stats))
}

pub fn compute_lfmt(
    game: &GameSpec,
    pos: &Position,
    depth: u32,
    cfg: &MinGraphConfig,
) -> Result<NodeCountReport, MetrologyError> {
    let (f, mut s) = populate(game, pos, depth, cfg)?;
    s.tt.retain_best_moves_only();
    recounted(Quantity::Lfmt, game, pos, depth, None, f, &s.tt, false, cfg.budget)
}

pub fn compute_lfmg(
    game: &GameSpec,
    pos: &Position,
    depth: u32,
    cfg: &MinGraphConfig,
) -> Result<NodeCountReport, MetrologyError> {
    let (f, mut s) = populate(game, pos, depth, cfg)?;
    s.tt.retain_best_moves_only();
    recounted(Quantity::Lfmg, game, pos, depth, None, f, &s.tt, true, cfg.budget)
}

/// Both left-first quantities from one designation pass; cheaper than two
/// full procedures and guaranteed to share `f`.
pub fn compute_lfmt_lfmg(
    game: &GameSpec,
    pos: &Position,
    depth: u32,
    cfg: &MinGraphConfig,
) -> Result<(NodeCountReport, NodeCountReport), MetrologyError> {
    let (f, mut s) = populate(game, pos, depth, cfg)?;
    s.tt.retain_best_moves_only();
    let lfmt = recounted(Quantity::Lfmt, game, pos, depth, None, f, &s.tt, false, cfg.budget)?;
    let lfmg = recounted(Quantity::Lfmg, game, pos, depth, None, f, &s.tt, true, cfg.budget)?;
    Ok((lfmt, lfmg))
}

/// An engine's own footprint at the final deepening iteration, in the same
/// report shape as the minimal quantities. Returns the searcher so callers
/// can read full statistics.
pub fn compute_actual<'a>(
    game: &'a GameSpec,
    pos: &Position,
    depth: u32,
    engine: EngineKind,
    scfg: SearchConfig,
    tt_bits: u32,
) -> Result<(NodeCountReport, Searcher<'a>), MetrologyError> {
    let mut s = Searcher::new(game, scfg, tt_bits);
    let r = s.iterative(pos, depth, engine)?;
    let last = *s.stats.iterations.last().expect("depth >= 1");
    let report = NodeCountReport {
        quantity: Quantity::Actual,
        game: game.spec_string(),
        root_hash: pos.hash,
        depth,
        window: (-INF, INF),
        mm_d: None,
        f: r.value,
        leaf_count: last.leaf_evaluations,
        interior_count: last.interior_expansions,
        tt_cutoffs: last.tt_cutoffs,
        oracle_misses: 0,
    };
    Ok((report, s))
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EfficiencyRatio {
    pub by_total: f64,
    pub by_leaves: f64,
}

/// Search effort relative to the minimal graph, in both counting
/// conventions. The reports must describe the same cell.
pub fn efficiency_ratio(
    actual: &NodeCountReport,
    lfmg: &NodeCountReport,
) -> Result<EfficiencyRatio, MetrologyError> {
    if lfmg.quantity != Quantity::Lfmg {
        return Err(MetrologyError::BadConfig(format!(
            "denominator is {}, expected lfmg",
            lfmg.quantity
        )));
    }
    if actual.game != lfmg.game || actual.root_hash != lfmg.root_hash {
        return Err(MetrologyError::BadConfig(
            "reports describe different positions".into(),
        ));
    }
    if actual.depth != lfmg.depth {
        return Err(MetrologyError::BadConfig(
            "reports describe different depths".into(),
        ));
    }
    if actual.f != lfmg.f {
        return Err(MetrologyError::BadConfig(format!(
            "value disagreement: {} vs {}",
            actual.f, lfmg.f
        )));
    }
    Ok(EfficiencyRatio {
        by_total: actual.total_node_accesses() as f64 / lfmg.total_node_accesses() as f64,
        by_leaves: actual.leaf_count as f64 / lfmg.leaf_count as f64,
    })
}

// ---------------------------------------------------------------------------
// Real minimal tree: cheapest proof by dynamic programming.

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct Cost {
    leaf: u64,
    interior: u64,
}

impl Cost {
    const LEAF: Cost = Cost {
        leaf: 1,
        interior: 0,
    };

    fn total(&self) -> u64 {
        self.leaf + self.interior
    }

    fn plus(&self, o: Cost) -> Cost {
        Cost {
            leaf: self.leaf + o.leaf,
            interior: self.interior + o.interior,
        }
    }

    fn minus(&self, o: Cost) -> Cost {
        Cost {
            leaf: self.leaf - o.leaf,
            interior: self.interior - o.interior,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Hash)]
enum ProofKind {
    /// value >= t from the mover's view
    Ge,
    /// value <= t from the mover's view
    Le,
    /// value == t exactly
    Eq,
}

struct ProofCtx<'a> {
    game: &'a GameSpec,
    values: HashMap<(u64, u32), Score>,
    costs: HashMap<(u64, u32, ProofKind, Score), Cost>,
    work: u64,
    budget: u64,
}

impl<'a> ProofCtx<'a> {
    fn bump(&mut self) -> Result<(), MetrologyError> {
        self.work += 1;
        if self.work > self.budget {
            Err(MetrologyError::Budget { limit: self.budget })
        } else {
            Ok(())
        }
    }

    fn leaf(&self, pos: &Position, depth: u32) -> bool {
        depth == 0 || self.game.is_terminal(pos)
    }

    /// Exact fixed-depth minimax value, memoized per (position, ply).
    fn value(&mut self, pos: &Position, depth: u32) -> Result<Score, MetrologyError> {
        self.bump()?;
        if self.leaf(pos, depth) {
            return Ok(self.game.evaluate(pos));
        }
        let key = (pos.hash, pos.ply);
        if let Some(&v) = self.values.get(&key) {
            return Ok(v);
        }
        let mut best = -INF;
        for m in self.game.moves(pos) {
            let v = -self.value(&self.game.apply(pos, m), depth - 1)?;
            best = best.max(v);
        }
        self.values.insert(key, best);
        Ok(best)
    }

    fn fits(cost: Cost, cap: Option<u64>) -> Option<Cost> {
        match cap {
            Some(c) if cost.total() > c => None,
            _ => Some(cost),
        }
    }

    /// Cheapest tree proving value(pos) >= t; None when every way exceeds
    /// `cap`. One child that is itself <= -t suffices, so this is a min over
    /// witnesses with early abort once a candidate cannot beat the best.
    fn prove_ge(
        &mut self,
        pos: &Position,
        depth: u32,
        t: Score,
        cap: Option<u64>,
    ) -> Result<Option<Cost>, MetrologyError> {
        self.bump()?;
        if self.leaf(pos, depth) {
            debug_assert!(self.game.evaluate(pos) >= t);
            return Ok(Self::fits(Cost::LEAF, cap));
        }
        let key = (pos.hash, pos.ply, ProofKind::Ge, t);
        if let Some(&c) = self.costs.get(&key) {
            return Ok(Self::fits(c, cap));
        }
        let mut best: Option<Cost> = None;
        for m in self.game.moves(pos) {
            let child = self.game.apply(pos, m);
            if -self.value(&child, depth - 1)? < t {
                continue;
            }
            // To improve, the witness subtree must undercut the best by 2
            // (this node adds 1); ties keep the earlier move.
            let improve = match best {
                Some(b) => match b.total().checked_sub(2) {
                    Some(x) => Some(x),
                    None => break,
                },
                None => None,
            };
            let outer = cap.map(|c| c.saturating_sub(1));
            let child_cap = match (improve, outer) {
                (Some(a), Some(b)) => Some(a.min(b)),
                (x, None) => x,
                (None, y) => y,
            };
            if let Some(c) = self.prove_le(&child, depth - 1, -t, child_cap)? {
                let tot = Cost {
                    leaf: c.leaf,
                    interior: c.interior + 1,
                };
                if best.is_none_or(|b| tot.total() < b.total()) {
                    best = Some(tot);
                }
            }
        }
        match best {
            Some(b) => {
                self.costs.insert(key, b);
                Ok(Self::fits(b, cap))
            }
            None => {
                debug_assert!(cap.is_some(), "no witness for a true lower bound");
                Ok(None)
            }
        }
    }

    /// Cheapest tree proving value(pos) <= t: every child must be refuted,
    /// so costs add up and the cap shrinks as the sum grows.
    fn prove_le(
        &mut self,
        pos: &Position,
        depth: u32,
        t: Score,
        cap: Option<u64>,
    ) -> Result<Option<Cost>, MetrologyError> {
        self.bump()?;
        if self.leaf(pos, depth) {
            debug_assert!(self.game.evaluate(pos) <= t);
            return Ok(Self::fits(Cost::LEAF, cap));
        }
        let key = (pos.hash, pos.ply, ProofKind::Le, t);
        if let Some(&c) = self.costs.get(&key) {
            return Ok(Self::fits(c, cap));
        }
        let mut acc = Cost {
            leaf: 0,
            interior: 1,
        };
        for m in self.game.moves(pos) {
            let child = self.game.apply(pos, m);
            let child_cap = match cap {
                Some(c) => match c.checked_sub(acc.total()) {
                    Some(left) if left >= 1 => Some(left),
                    _ => return Ok(None),
                },
                None => None,
            };
            match self.prove_ge(&child, depth - 1, -t, child_cap)? {
                Some(c) => acc = acc.plus(c),
                None => return Ok(None),
            }
        }
        self.costs.insert(key, acc);
        Ok(Self::fits(acc, cap))
    }

    /// Cheapest tree proving the exact value: refute every child, with the
    /// cheapest principal child upgraded from refutation to exact proof.
    fn prove_exact(&mut self, pos: &Position, depth: u32) -> Result<Cost, MetrologyError> {
        self.bump()?;
        if self.leaf(pos, depth) {
            return Ok(Cost::LEAF);
        }
        let v = self.value(pos, depth)?;
        let key = (pos.hash, pos.ply, ProofKind::Eq, v);
        if let Some(&c) = self.costs.get(&key) {
            return Ok(c);
        }
        let mut base = Cost {
            leaf: 0,
            interior: 1,
        };
        let mut refutes = Vec::new();
        let mut principal = Vec::new();
        for (i, m) in self.game.moves(pos).into_iter().enumerate() {
            let child = self.game.apply(pos, m);
            let refute = self
                .prove_ge(&child, depth - 1, -v, None)?
                .expect("uncapped refutation always resolves");
            base = base.plus(refute);
            refutes.push(refute);
            if self.value(&child, depth - 1)? == -v {
                principal.push((i, child));
            }
        }
        // Upgrading child i swaps its refutation for its exact proof; pick
        // the cheapest swap, first move on ties.
        let mut best: Option<(i128, usize, Cost)> = None;
        for (i, child) in principal {
            let exact = self.prove_exact(&child, depth - 1)?;
            let delta = exact.total() as i128 - refutes[i].total() as i128;
            if best.as_ref().is_none_or(|(d, _, _)| delta < *d) {
                best = Some((delta, i, exact));
            }
        }
        let (_, i, exact) = best.expect("some child attains the value");
        let cost = base.minus(refutes[i]).plus(exact);
        self.costs.insert(key, cost);
        Ok(cost)
    }
}

pub fn compute_rmt(
    game: &GameSpec,
    pos: &Position,
    depth: u32,
    cfg: &MinGraphConfig,
) -> Result<NodeCountReport, MetrologyError> {
    let mut ctx = ProofCtx {
        game,
        values: HashMap::new(),
        costs: HashMap::new(),
        work: 0,
        budget: cfg.budget,
    };
    let f = ctx.value(pos, depth)?;
    let cost = ctx.prove_exact(pos, depth)?;
    Ok(NodeCountReport {
        quantity: Quantity::Rmt,
        game: game.spec_string(),
        root_hash: pos.hash,
        depth,
        window: (f - 1, f + 1),
        mm_d: None,
        f,
        leaf_count: cost.leaf,
        interior_count: cost.interior,
        tt_cutoffs: 0,
        oracle_misses: 0,
    })
}

// ---------------------------------------------------------------------------
// Approximated real minimal graph: near-leaf cheapest-cutoff re-designation.

enum MmAbort {
    Budget,
    Cap,
}

/// The re-designation traversal. Narrow window, designation-first order,
/// live value cutoffs. At a cutoff within `mm_d` of the leaves the scan
/// keeps going: each remaining move is searched under the window frozen at
/// the cutoff, capped at the cheapest refutation found so far, and the
/// cheapest cutoff move takes over the designation.
struct MmWalker<'a> {
    game: &'a GameSpec,
    searcher: Searcher<'a>,
    mm_d: u32,
    cap: Option<u64>,
}

impl<'a> MmWalker<'a> {
    fn accesses(&self) -> u64 {
        self.searcher.stats.node_accesses()
    }

    fn check(&self) -> Result<(), MmAbort> {
        if let Some(limit) = self.searcher.cfg.node_budget {
            if self.accesses() > limit {
                return Err(MmAbort::Budget);
            }
        }
        if let Some(cap) = self.cap {
            if self.accesses() > cap {
                return Err(MmAbort::Cap);
            }
        }
        Ok(())
    }

    fn walk(
        &mut self,
        pos: &Position,
        depth: u32,
        alpha: Score,
        beta: Score,
    ) -> Result<Score, MmAbort> {
        if depth == 0 || self.game.is_terminal(pos) {
            self.searcher.stats.leaf_evaluations += 1;
            self.check()?;
            return Ok(self.game.evaluate(pos));
        }
        if let Some(info) = self.searcher.tt.probe(pos.hash) {
            if let Some(v) = info.value {
                let local = crate::ttable::TtValue {
                    score: crate::score::from_table(v.score, pos.ply),
                    ..v
                };
                if let Some(cut) = local.sufficient(depth, alpha, beta) {
                    self.searcher.stats.tt_cutoffs += 1;
                    self.check()?;
                    return Ok(cut);
                }
            }
        }
        self.searcher.stats.interior_expansions += 1;
        self.check()?;

        let mut moves = self.game.moves(pos);
        if let Some(m) = self.searcher.tt.oracle_move(pos.hash) {
            if let Some(i) = moves.iter().position(|&x| x == m) {
                moves[..=i].rotate_right(1);
            }
        } else {
            self.searcher.stats.oracle_misses += 1;
        }

        let mut best = -INF;
        let mut a = alpha;
        for (i, &m) in moves.iter().enumerate() {
            let a_before = a;
            let child = self.game.apply(pos, m);
            let start = self.accesses();
            let v = -self.walk(&child, depth - 1, -beta, -a_before)?;
            if v > best {
                best = v;
            }
            if best > a {
                a = best;
            }
            if best >= beta {
                if depth <= self.mm_d {
                    let first_cost = self.accesses() - start;
                    self.scan_for_cheaper(
                        pos,
                        depth,
                        a_before,
                        beta,
                        &moves[i + 1..],
                        first_cost,
                        m,
                        best,
                    )?;
                } else {
                    self.store(pos, depth, best, alpha, beta);
                }
                return Ok(best);
            }
        }
        self.store(pos, depth, best, alpha, beta);
        Ok(best)
    }

    /// Continues past a cutoff: every remaining move is tried under the
    /// window that produced the cutoff, abandoned as soon as it costs as
    /// much as the cheapest refutation so far.
    #[allow(clippy::too_many_arguments)]
    fn scan_for_cheaper(
        &mut self,
        pos: &Position,
        depth: u32,
        alpha_frozen: Score,
        beta: Score,
        rest: &[Move],
        first_cost: u64,
        first_move: Move,
        g: Score,
    ) -> Result<(), MmAbort> {
        let mut cheapest = (first_cost, first_move);
        for &m in rest {
            let child = self.game.apply(pos, m);
            let start = self.accesses();
            let saved_cap = self.cap;
            let my_cap = start + cheapest.0;
            self.cap = Some(saved_cap.map_or(my_cap, |c| c.min(my_cap)));
            let attempt = self.walk(&child, depth - 1, -beta, -alpha_frozen);
            self.cap = saved_cap;
            match attempt {
                Ok(v) => {
                    let cost = self.accesses() - start;
                    if -v >= beta && cost < cheapest.0 {
                        cheapest = (cost, m);
                    }
                }
                Err(MmAbort::Cap) => {
                    // Whose cap fired? Re-test the restored limits: if we
                    // are still over, it was not the candidate's.
                    self.check()?;
                }
                Err(e) => return Err(e),
            }
        }
        self.searcher.tt.set_best_move(pos.hash, cheapest.1);
        self.store(pos, depth, g, alpha_frozen, beta);
        Ok(())
    }

    fn store(&mut self, pos: &Position, depth: u32, g: Score, alpha: Score, beta: Score) {
        let bound = if g <= alpha {
            crate::ttable::Bound::Upper
        } else if g >= beta {
            crate::ttable::Bound::Lower
        } else {
            crate::ttable::Bound::Exact
        };
        self.searcher.tt.store_preserve_move(
            pos.hash,
            depth,
            crate::score::to_table(g, pos.ply),
            bound,
        );
    }
}

pub fn compute_armg(
    game: &GameSpec,
    pos: &Position,
    depth: u32,
    mm_d: u32,
    cfg: &MinGraphConfig,
) -> Result<NodeCountReport, MetrologyError> {
    if mm_d > depth {
        return Err(MetrologyError::BadConfig(format!(
            "mm_d {mm_d} exceeds search depth {depth}"
        )));
    }
    let (f, mut s) = populate(game, pos, depth, cfg)?;
    s.tt.retain_best_moves_only();
    s.tt.new_generation();

    // Phase 2: re-designate cheap refutations near the leaves.
    let mut walker = MmWalker {
        game,
        searcher: s,
        mm_d,
        cap: None,
    };
    let g = match walker.walk(pos, depth, f - 1, f + 1) {
        Ok(g) => g,
        Err(MmAbort::Budget) => return Err(MetrologyError::Budget { limit: cfg.budget }),
        Err(MmAbort::Cap) => unreachable!("no candidate cap is active at top level"),
    };
    if g != f {
        return Err(MetrologyError::ValueMismatch {
            expected: f,
            got: g,
        });
    }

    // Phase 3: wipe values, recount the graph under the new designations.
    let mut s = walker.searcher;
    s.tt.retain_best_moves_only();
    recounted(Quantity::Armg, game, pos, depth, Some(mm_d), f, &s.tt, true, cfg.budget)
}
