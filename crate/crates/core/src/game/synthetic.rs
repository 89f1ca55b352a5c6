//! Seeded synthetic game trees with a tunable amount of shared structure.
//!
//! A state is the multiset of move labels chosen so far plus the side to
//! move, so two paths that pick the same labels in a different order reach
//! the same state. Each move slot at a node is either "shared", drawing the
//! next unused label from a small common pool, or "unique", deriving a
//! label from the node hash that no other path can produce. The density
//! parameter `t` is the probability that a slot is shared: `t = 0` yields a
//! strict tree, `t = 1` a heavily transposing DAG.
//!
//! The draw order at a node is fixed and load-bearing for stored fixtures:
//! one draw for the branching factor when it is a range, then one draw per
//! slot for the shared/unique decision.

use super::zobrist::SIDE_KEY;
use super::{Move, Side};
use crate::rng::{mix2, Rng64};
use crate::score::{Score, EVAL_LIMIT};

const NODE_SALT: u64 = 0x6e6f_6465;
const SLOT_SALT: u64 = 0x736c_6f74;
const LEAF_SALT: u64 = 0x6c65_6166;
const LABEL_SALT: u64 = 0x6c61_6265;
const ROOT_SALT: u64 = 0x726f_6f74;
const UNIQUE_BIT: u64 = 1 << 63;

pub const DEFAULT_LEAF_LO: Score = -9_999;
pub const DEFAULT_LEAF_HI: Score = 9_999;

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Branching {
    Fixed(u32),
    Range(u32, u32),
}

impl Branching {
    pub fn max(&self) -> u32 {
        match *self {
            Branching::Fixed(w) => w,
            Branching::Range(_, b) => b,
        }
    }

    pub fn parse(s: &str) -> Option<Branching> {
        if let Some((a, b)) = s.split_once("..") {
            let (a, b) = (a.parse().ok()?, b.parse().ok()?);
            if a < 1 || b < a {
                return None;
            }
            Some(Branching::Range(a, b))
        } else {
            let w = s.parse().ok()?;
            if w < 1 {
                return None;
            }
            Some(Branching::Fixed(w))
        }
    }
}

impl std::fmt::Display for Branching {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match *self {
            Branching::Fixed(w) => write!(f, "{w}"),
            Branching::Range(a, b) => write!(f, "{a}..{b}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SyntheticSpec {
    pub seed: u64,
    pub branch: Branching,
    pub depth: u32,
    /// Probability that a move slot draws from the shared label pool.
    pub density: f64,
    pub leaf_lo: Score,
    pub leaf_hi: Score,
}

impl SyntheticSpec {
    pub fn new(seed: u64, branch: Branching, depth: u32, density: f64) -> Self {
        SyntheticSpec {
            seed,
            branch,
            depth,
            density,
            leaf_lo: DEFAULT_LEAF_LO,
            leaf_hi: DEFAULT_LEAF_HI,
        }
    }

    pub fn validate(&self) -> Result<(), String> {
        if !(0.0..=1.0).contains(&self.density) {
            return Err(format!("t must be in [0, 1], got {}", self.density));
        }
        if self.leaf_lo > self.leaf_hi {
            return Err("leaf range is empty".into());
        }
        if self.leaf_lo < -EVAL_LIMIT || self.leaf_hi > EVAL_LIMIT {
            return Err(format!("leaf range outside +/-{EVAL_LIMIT}"));
        }
        Ok(())
    }

    /// Shared pool size. Deep enough that a path can never exhaust it.
    fn pool_size(&self) -> u64 {
        (self.depth + self.branch.max()) as u64
    }

    /// `seed=.. w=.. d=.. t=..` with the leaf range appended when non-default.
    pub fn spec_line(&self) -> String {
        let mut s = format!(
            "seed={} w={} d={} t={}",
            self.seed, self.branch, self.depth, self.density
        );
        if self.leaf_lo != DEFAULT_LEAF_LO || self.leaf_hi != DEFAULT_LEAF_HI {
            s.push_str(&format!(" leaf={}..{}", self.leaf_lo, self.leaf_hi));
        }
        s
    }

    pub fn parse_spec_line(line: &str) -> Result<SyntheticSpec, String> {
        let mut seed = None;
        let mut branch = None;
        let mut depth = None;
        let mut density = None;
        let mut leaf = None;
        for tok in line.split_whitespace() {
            let (k, v) = tok
                .split_once('=')
                .ok_or_else(|| format!("expected key=value, got '{tok}'"))?;
            match k {
                "seed" => seed = Some(v.parse().map_err(|_| format!("bad seed '{v}'"))?),
                "w" => branch = Some(Branching::parse(v).ok_or(format!("bad w '{v}'"))?),
                "d" => depth = Some(v.parse().map_err(|_| format!("bad d '{v}'"))?),
                "t" => density = Some(v.parse().map_err(|_| format!("bad t '{v}'"))?),
                "leaf" => {
                    let (lo, hi) = v.split_once("..").ok_or(format!("bad leaf '{v}'"))?;
                    leaf = Some((
                        lo.parse().map_err(|_| format!("bad leaf '{v}'"))?,
                        hi.parse().map_err(|_| format!("bad leaf '{v}'"))?,
                    ));
                }
                _ => return Err(format!("unknown key '{k}'")),
            }
        }
        let mut spec = SyntheticSpec::new(
            seed.ok_or("missing seed=")?,
            branch.ok_or("missing w=")?,
            depth.ok_or("missing d=")?,
            density.ok_or("missing t=")?,
        );
        if let Some((lo, hi)) = leaf {
            spec.leaf_lo = lo;
            spec.leaf_hi = hi;
        }
        spec.validate()?;
        Ok(spec)
    }
}

/// Sorted multiset of chosen move labels. Labels never repeat on a path,
/// so XOR hashing over them is collision-free by construction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SynthState {
    pub labels: Vec<u64>,
}

impl SynthState {
    pub fn root() -> Self {
        SynthState { labels: Vec::new() }
    }

    #[inline]
    fn contains(&self, label: u64) -> bool {
        self.labels.binary_search(&label).is_ok()
    }
}

pub fn label_key(spec: &SyntheticSpec, label: u64) -> u64 {
    mix2(spec.seed ^ LABEL_SALT, label)
}

pub fn root_hash(spec: &SyntheticSpec, side: Side) -> u64 {
    state_hash(spec, &SynthState { labels: Vec::new() }, side)
}

pub fn state_hash(spec: &SyntheticSpec, state: &SynthState, side: Side) -> u64 {
    let mut h = mix2(spec.seed, ROOT_SALT);
    if side == Side::Min {
        h ^= SIDE_KEY;
    }
    for &l in &state.labels {
        h ^= label_key(spec, l);
    }
    h
}

/// Labels offered at a node, one per move slot.
pub fn move_labels(spec: &SyntheticSpec, state: &SynthState, hash: u64) -> Vec<u64> {
    let mut rng = Rng64::new(mix2(spec.seed ^ NODE_SALT, hash));
    let w = match spec.branch {
        Branching::Fixed(w) => w,
        Branching::Range(a, b) => a + rng.below((b - a + 1) as u64) as u32,
    };
    let pool = spec.pool_size();
    let mut labels = Vec::with_capacity(w as usize);
    let mut cursor = 0u64;
    for i in 0..w {
        if rng.unit_f64() < spec.density {
            while cursor < pool && state.contains(cursor) {
                cursor += 1;
            }
            debug_assert!(cursor < pool, "shared label pool exhausted");
            labels.push(cursor);
            cursor += 1;
        } else {
            labels.push(mix2(hash ^ SLOT_SALT, i as u64) | UNIQUE_BIT);
        }
    }
    labels
}

pub fn apply(
    spec: &SyntheticSpec,
    state: &SynthState,
    hash: u64,
    m: Move,
) -> (SynthState, u64) {
    let labels = move_labels(spec, state, hash);
    let label = labels[m.0 as usize];
    let mut new_labels = state.labels.clone();
    let at = new_labels.binary_search(&label).unwrap_err();
    new_labels.insert(at, label);
    (
        SynthState { labels: new_labels },
        label_key(spec, label) ^ SIDE_KEY,
    )
}

/// Seeded heuristic value keyed by the position hash, used for every
/// horizon node whether or not it sits on the depth bound.
pub fn eval(spec: &SyntheticSpec, hash: u64) -> Score {
    let span = (spec.leaf_hi - spec.leaf_lo + 1) as u64;
    spec.leaf_lo + (mix2(spec.seed ^ LEAF_SALT, hash) % span) as Score
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(seed: u64, w: u32, d: u32, t: f64) -> SyntheticSpec {
        SyntheticSpec::new(seed, Branching::Fixed(w), d, t)
    }

    fn child(
        spec: &SyntheticSpec,
        st: &SynthState,
        hash: u64,
        side: Side,
        i: u32,
    ) -> (SynthState, u64, Side) {
        let (ns, delta) = apply(spec, st, hash, Move(i));
        (ns, hash ^ delta, side.flip())
    }

    /// Walks every path to the depth bound and collects leaf hashes.
    fn leaf_hashes(spec: &SyntheticSpec) -> Vec<u64> {
        let mut out = Vec::new();
        fn rec(
            spec: &SyntheticSpec,
            st: &SynthState,
            hash: u64,
            side: Side,
            out: &mut Vec<u64>,
        ) {
            if st.labels.len() as u32 == spec.depth {
                out.push(hash);
                return;
            }
            let n = move_labels(spec, st, hash).len();
            for i in 0..n {
                let (ns, h, s) = {
                    let (ns, delta) = apply(spec, st, hash, Move(i as u32));
                    (ns, hash ^ delta, side.flip())
                };
                rec(spec, &ns, h, s, out);
            }
        }
        rec(spec, &SynthState::root(), root_hash(spec, Side::Max), Side::Max, &mut out);
        out
    }

    #[test]
    fn zero_density_is_a_strict_tree() {
        let sp = spec(11, 2, 4, 0.0);
        let leaves = leaf_hashes(&sp);
        assert_eq!(leaves.len(), 16);
        let distinct: std::collections::HashSet<_> = leaves.iter().collect();
        assert_eq!(distinct.len(), 16);
    }

    #[test]
    fn full_density_merges_transposed_grandchildren() {
        // With w=2, d=2 the four paths collapse to three states: {L0,L1}
        // is reached both ways round.
        let sp = spec(11, 2, 2, 1.0);
        let leaves = leaf_hashes(&sp);
        assert_eq!(leaves.len(), 4);
        let distinct: std::collections::HashSet<_> = leaves.iter().collect();
        assert_eq!(distinct.len(), 3);
    }

    #[test]
    fn commuting_pair_hashes_agree() {
        let sp = spec(5, 2, 3, 1.0);
        let root = SynthState::root();
        let rh = root_hash(&sp, Side::Max);
        let (a_state, a_hash, a_side) = child(&sp, &root, rh, Side::Max, 0);
        let (b_state, b_hash, b_side) = child(&sp, &root, rh, Side::Max, 1);
        // Find the mirrored label in each sibling's offer.
        let a_labels = move_labels(&sp, &a_state, a_hash);
        let b_labels = move_labels(&sp, &b_state, b_hash);
        let ab = a_labels.iter().position(|&l| l == 1).unwrap();
        let ba = b_labels.iter().position(|&l| l == 0).unwrap();
        let (_, ab_hash, _) = child(&sp, &a_state, a_hash, a_side, ab as u32);
        let (_, ba_hash, _) = child(&sp, &b_state, b_hash, b_side, ba as u32);
        assert_eq!(ab_hash, ba_hash);
    }

    #[test]
    fn state_hash_matches_incremental(){
        let sp = spec(99, 3, 5, 0.5);
        let mut st = SynthState::root();
        let mut hash = root_hash(&sp, Side::Max);
        let mut side = Side::Max;
        let mut rng = Rng64::new(123);
        for _ in 0..5 {
            let n = move_labels(&sp, &st, hash).len() as u64;
            let (ns, delta) = apply(&sp, &st, hash, Move(rng.below(n) as u32));
            st = ns;
            hash ^= delta;
            side = side.flip();
            assert_eq!(state_hash(&sp, &st, side), hash);
        }
    }

    #[test]
    fn spec_line_round_trips() {
        for line in [
            "seed=42 w=3 d=6 t=0.5",
            "seed=1 w=2..5 d=10 t=0",
            "seed=7 w=4 d=8 t=1 leaf=-50..50",
        ] {
            let sp = SyntheticSpec::parse_spec_line(line).unwrap();
            assert_eq!(sp.spec_line(), line);
        }
        assert!(SyntheticSpec::parse_spec_line("seed=1 w=0 d=3 t=0").is_err());
        assert!(SyntheticSpec::parse_spec_line("seed=1 w=2 d=3 t=1.5").is_err());
        assert!(SyntheticSpec::parse_spec_line("w=2 d=3 t=0").is_err());
    }
}
