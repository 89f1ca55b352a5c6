//! Flat key=value experiment configuration with a stable content hash.
//!
//! The canonical form (fixed key order, resolved fixture list) is what gets
//! hashed, so two configs that resolve to the same work share a hash no
//! matter how they were written.

use super::HarnessError;
use crate::minimal_graphs::Quantity;
use crate::search::EngineKind;
use std::collections::BTreeSet;
use std::path::{Path, PathBuf};

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum EtcChoice {
    Off,
    On,
    Both,
}

impl EtcChoice {
    /// The etc settings a run expands to, baseline first.
    pub fn settings(self) -> &'static [bool] {
        match self {
            EtcChoice::Off => &[false],
            EtcChoice::On => &[true],
            EtcChoice::Both => &[false, true],
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            EtcChoice::Off => "off",
            EtcChoice::On => "on",
            EtcChoice::Both => "both",
        }
    }
}

impl std::str::FromStr for EtcChoice {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "off" => Ok(EtcChoice::Off),
            "on" => Ok(EtcChoice::On),
            "both" => Ok(EtcChoice::Both),
            _ => Err(format!("etc must be on, off, or both, got '{s}'")),
        }
    }
}

#[derive(Clone, Debug)]
pub struct ExperimentConfig {
    /// Game family; also picks the default fixture directory.
    pub game: String,
    /// Resolved fixture files, name-sorted.
    pub fixtures: Vec<PathBuf>,
    pub depths: (u32, u32),
    pub engines: Vec<EngineKind>,
    pub tt_bits: u32,
    pub etc: EtcChoice,
    pub etc_min_depth: u32,
    pub use_history: bool,
    pub metrology: BTreeSet<Quantity>,
    pub mm_d: u32,
    pub budget: u64,
    pub out: PathBuf,
    pub odd_even_out: Option<PathBuf>,
}

pub fn parse_depths(s: &str) -> Result<(u32, u32), String> {
    let (a, b) = s
        .split_once("..")
        .ok_or_else(|| format!("depths must be a..b, got '{s}'"))?;
    let (a, b) = (
        a.parse().map_err(|_| format!("bad depth '{a}'"))?,
        b.parse().map_err(|_| format!("bad depth '{b}'"))?,
    );
    if a < 1 || b < a {
        return Err(format!("depth range {a}..{b} is empty or starts below 1"));
    }
    Ok((a, b))
}

pub fn parse_engines(s: &str) -> Result<Vec<EngineKind>, String> {
    if s == "all" {
        return Ok(EngineKind::ALL.to_vec());
    }
    s.split(',').map(|e| e.trim().parse()).collect()
}

pub fn parse_metrology(s: &str) -> Result<BTreeSet<Quantity>, String> {
    if s == "all" {
        return Ok(Quantity::ALL.into_iter().collect());
    }
    s.split(',').map(|q| q.trim().parse()).collect()
}

/// Pseudo-fixture: the experiment game's own start position.
pub const ROOT_FIXTURE: &str = "@root";

/// A synthetic parameter line names one concrete tree, so its root is the
/// natural default; board-game families default to the committed corpus.
pub fn default_fixture_spec(game: &str) -> String {
    if game.starts_with("seed=") {
        ROOT_FIXTURE.to_string()
    } else {
        format!("fixtures/{game}")
    }
}

/// A directory expands to its name-sorted `.pos` files; anything else is a
/// comma-separated file list, where the element `@root` names the game's
/// start position instead of a file.
pub fn resolve_fixtures(spec: &str) -> Result<Vec<PathBuf>, HarnessError> {
    let path = Path::new(spec);
    if path.is_dir() {
        let mut files: Vec<PathBuf> = std::fs::read_dir(path)
            .map_err(|e| HarnessError::Data(format!("cannot list {spec}: {e}")))?
            .filter_map(|entry| entry.ok().map(|e| e.path()))
            .filter(|p| p.extension().is_some_and(|x| x == "pos"))
            .collect();
        files.sort();
        if files.is_empty() {
            return Err(HarnessError::Data(format!("no .pos fixtures in {spec}")));
        }
        return Ok(files);
    }
    let files: Vec<PathBuf> = spec.split(',').map(|f| PathBuf::from(f.trim())).collect();
    for f in &files {
        if f.as_os_str() == ROOT_FIXTURE {
            continue;
        }
        if !f.is_file() {
            return Err(HarnessError::Data(format!(
                "fixture {} does not exist",
                f.display()
            )));
        }
    }
    Ok(files)
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<(), HarnessError> {
        if self.etc_min_depth < 1 {
            return Err(HarnessError::Data("etc_min_depth must be >= 1".into()));
        }
        if !(4..=30).contains(&self.tt_bits) {
            return Err(HarnessError::Data(format!(
                "tt_bits {} outside 4..=30",
                self.tt_bits
            )));
        }
        if self.fixtures.is_empty() {
            return Err(HarnessError::Data("no fixtures resolved".into()));
        }
        if self.engines.is_empty() {
            return Err(HarnessError::Data("no engines selected".into()));
        }
        if self.metrology.is_empty() {
            return Err(HarnessError::Data("no quantities selected".into()));
        }
        Ok(())
    }

    /// Fixed-order key=value lines; the identity of the experiment.
    pub fn canonical(&self) -> String {
        let fixtures: Vec<String> = self
            .fixtures
            .iter()
            .map(|p| p.display().to_string())
            .collect();
        let engines: Vec<&str> = self.engines.iter().map(|e| e.name()).collect();
        let metrology: Vec<&str> = self.metrology.iter().map(|q| q.name()).collect();
        format!(
            "game={}\nfixtures={}\ndepths={}..{}\nengines={}\ntt_bits={}\netc={}\netc_min_depth={}\nhistory={}\nmetrology={}\nmm_d={}\nbudget={}\n",
            self.game,
            fixtures.join(","),
            self.depths.0,
            self.depths.1,
            engines.join(","),
            self.tt_bits,
            self.etc.name(),
            self.etc_min_depth,
            if self.use_history { "on" } else { "off" },
            metrology.join(","),
            self.mm_d,
            self.budget,
        )
    }

    pub fn hash(&self) -> String {
        format!("{:016x}", fnv1a64(self.canonical().as_bytes()))
    }

    /// Parses the flat key=value config format. Unknown keys are errors so
    /// typos cannot silently drop a knob.
    pub fn from_kv(text: &str) -> Result<ExperimentConfig, HarnessError> {
        let data = |m: String| HarnessError::Data(m);
        let mut game = None;
        let mut fixtures = None;
        let mut depths = None;
        let mut engines = vec![EngineKind::NegaScout];
        let mut tt_bits = 21;
        let mut etc = EtcChoice::Off;
        let mut etc_min_depth = 3;
        let mut use_history = true;
        let mut metrology: BTreeSet<Quantity> = [Quantity::Actual].into();
        let mut mm_d = 3;
        let mut budget = 100_000_000u64;
        let mut out = None;
        let mut odd_even_out = None;

        for (ln, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| data(format!("config line {}: expected key=value", ln + 1)))?;
            let (k, v) = (k.trim(), v.trim());
            let at = |m: String| data(format!("config line {}: {m}", ln + 1));
            match k {
                "game" => game = Some(v.to_string()),
                "fixtures" => fixtures = Some(v.to_string()),
                "depths" => depths = Some(parse_depths(v).map_err(at)?),
                "engines" => engines = parse_engines(v).map_err(at)?,
                "tt_bits" => tt_bits = v.parse().map_err(|_| at(format!("bad tt_bits '{v}'")))?,
                "etc" => etc = v.parse().map_err(at)?,
                "etc_min_depth" => {
                    etc_min_depth = v
                        .parse()
                        .map_err(|_| at(format!("bad etc_min_depth '{v}'")))?
                }
                "history" => {
                    use_history = match v {
                        "on" => true,
                        "off" => false,
                        _ => return Err(at(format!("history must be on or off, got '{v}'"))),
                    }
                }
                "metrology" => metrology = parse_metrology(v).map_err(at)?,
                "mm_d" => mm_d = v.parse().map_err(|_| at(format!("bad mm_d '{v}'")))?,
                "budget" => budget = v.parse().map_err(|_| at(format!("bad budget '{v}'")))?,
                "out" => out = Some(PathBuf::from(v)),
                "odd_even_out" => odd_even_out = Some(PathBuf::from(v)),
                _ => return Err(at(format!("unknown key '{k}'"))),
            }
        }

        let game = game.ok_or_else(|| data("config missing game=".into()))?;
        let fixture_spec = fixtures.unwrap_or_else(|| default_fixture_spec(&game));
        let cfg = ExperimentConfig {
            fixtures: resolve_fixtures(&fixture_spec)?,
            depths: depths.ok_or_else(|| data("config missing depths=".into()))?,
            engines,
            tt_bits,
            etc,
            etc_min_depth,
            use_history,
            metrology,
            mm_d,
            budget,
            out: out.ok_or_else(|| data("config missing out=".into()))?,
            odd_even_out,
            game,
        };
        cfg.validate()?;
        Ok(cfg)
    }
}

pub fn fnv1a64(bytes: &[u8]) -> u64 {
    let mut h = 0xcbf2_9ce4_8422_2325u64;
    for &b in bytes {
        h ^= b as u64;
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    h
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fnv_vectors() {
        // Published FNV-1a test vectors.
        assert_eq!(fnv1a64(b""), 0xcbf29ce484222325);
        assert_eq!(fnv1a64(b"a"), 0xaf63dc4c8601ec8c);
        assert_eq!(fnv1a64(b"foobar"), 0x85944171f73967e8);
    }

    #[test]
    fn depth_range_grammar() {
        assert_eq!(parse_depths("1..8").unwrap(), (1, 8));
        assert!(parse_depths("5..3").is_err());
        assert!(parse_depths("0..3").is_err());
        assert!(parse_depths("7").is_err());
    }

    #[test]
    fn engine_and_metrology_lists() {
        assert_eq!(parse_engines("all").unwrap().len(), 4);
        assert_eq!(
            parse_engines("mtdf, alphabeta").unwrap(),
            vec![EngineKind::MtdF, EngineKind::AlphaBeta]
        );
        assert!(parse_engines("warp").is_err());
        assert_eq!(parse_metrology("all").unwrap().len(), 5);
        assert!(parse_metrology("lfmg,bogus").is_err());
    }
}
