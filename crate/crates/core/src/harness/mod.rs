//! Experiment runner: expands a configuration into measured cells, enforces
//! cross-cell value agreement, and emits order-stable CSV. Runs are fully
//! deterministic, so re-running a config produces byte-identical output.

pub mod config;
pub mod csv;
pub mod fixtures;
pub mod plot;

pub use config::{EtcChoice, ExperimentConfig};
pub use csv::{read_rows, write_rows, CsvRow, RowStatus};
pub use plot::{emit_plotdata, Figure};

use crate::etc::EtcConfig;
use crate::game::fixture::parse_fixture;
use crate::game::{GameSpec, Position};
use crate::minimal_graphs::{
    compute_actual, compute_armg, compute_lfmt_lfmg, compute_lfmg, compute_lfmt, compute_rmt,
    MetrologyError, MinGraphConfig, NodeCountReport, Quantity,
};
use crate::score::Score;
use crate::search::{EngineKind, SearchConfig};
use std::collections::HashMap;
use std::path::Path;

#[derive(Debug, thiserror::Error)]
pub enum HarnessError {
    /// Bad inputs: files, config values, missing quantities. Exit code 2.
    #[error("{0}")]
    Data(String),
    /// A violated internal invariant (value disagreement). Exit code 3.
    #[error("{0}")]
    Internal(String),
}

pub(crate) fn median(mut xs: Vec<f64>) -> f64 {
    assert!(!xs.is_empty());
    xs.sort_by(f64::total_cmp);
    let n = xs.len();
    if n % 2 == 1 {
        xs[n / 2]
    } else {
        (xs[n / 2 - 1] + xs[n / 2]) / 2.0
    }
}

fn fixture_id(path: &Path) -> String {
    path.file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| path.display().to_string())
}

struct CellCtx<'a> {
    cfg: &'a ExperimentConfig,
    hash: String,
    spec: GameSpec,
    pos: Position,
    fixture: String,
}

impl CellCtx<'_> {
    fn blank_row(&self, depth: u32, quantity: Quantity) -> CsvRow {
        CsvRow {
            config: self.hash.clone(),
            game: self.spec.spec_string(),
            fixture: self.fixture.clone(),
            depth,
            quantity,
            engine: None,
            etc: None,
            leaf: 0,
            interior: 0,
            total: 0,
            tt_hits: 0,
            etc_cutoffs: 0,
            fmcr: Vec::new(),
            f: None,
            status: RowStatus::Ok,
        }
    }

    fn report_row(&self, rep: &NodeCountReport) -> CsvRow {
        CsvRow {
            leaf: rep.leaf_count,
            interior: rep.interior_count,
            total: rep.total_node_accesses(),
            tt_hits: rep.tt_cutoffs,
            f: Some(rep.f),
            ..self.blank_row(rep.depth, rep.quantity)
        }
    }

    fn skipped_row(&self, depth: u32, quantity: Quantity, reason: &str) -> CsvRow {
        CsvRow {
            status: RowStatus::Skipped(reason.into()),
            ..self.blank_row(depth, quantity)
        }
    }

    fn actual_row(&self, depth: u32, engine: EngineKind, etc_on: bool) -> Result<CsvRow, HarnessError> {
        let scfg = SearchConfig {
            etc: EtcConfig {
                enabled: etc_on,
                min_remaining_depth: self.cfg.etc_min_depth,
            },
            use_history: self.cfg.use_history,
            node_budget: Some(self.cfg.budget),
            ..SearchConfig::default()
        };
        match compute_actual(&self.spec, &self.pos, depth, engine, scfg, self.cfg.tt_bits) {
            Ok((rep, s)) => {
                let last = s.stats.iterations.last().expect("depth >= 1");
                let fmcr = (0..depth as usize)
                    .map(|l| s.stats.first_move_cutoff_rate(l))
                    .collect();
                Ok(CsvRow {
                    engine: Some(engine),
                    etc: Some(etc_on),
                    tt_hits: last.tt_hits,
                    etc_cutoffs: last.etc_cutoffs,
                    fmcr,
                    ..self.report_row(&rep)
                })
            }
            Err(MetrologyError::Budget { .. }) => Ok(CsvRow {
                engine: Some(engine),
                etc: Some(etc_on),
                ..self.skipped_row(depth, Quantity::Actual, "budget")
            }),
            Err(e) => Err(self.lift(e)),
        }
    }

    fn lift(&self, e: MetrologyError) -> HarnessError {
        let tagged = format!("{}: {e}", self.fixture);
        match e {
            MetrologyError::ValueMismatch { .. } => HarnessError::Internal(tagged),
            _ => HarnessError::Data(tagged),
        }
    }

    fn metrology_rows(&self, depth: u32) -> Result<Vec<CsvRow>, HarnessError> {
        let mcfg = MinGraphConfig {
            tt_bits: self.cfg.tt_bits,
            budget: self.cfg.budget,
        };
        let want = &self.cfg.metrology;
        let mut rows = Vec::new();
        let push = |r: Result<NodeCountReport, MetrologyError>,
                        q: Quantity,
                        rows: &mut Vec<CsvRow>|
         -> Result<(), HarnessError> {
            match r {
                Ok(rep) => {
                    rows.push(self.report_row(&rep));
                    Ok(())
                }
                Err(MetrologyError::Budget { .. }) => {
                    rows.push(self.skipped_row(depth, q, "budget"));
                    Ok(())
                }
                Err(e) => Err(self.lift(e)),
            }
        };

        let both_left_first =
            want.contains(&Quantity::Lfmt) && want.contains(&Quantity::Lfmg);
        for &q in want {
            match q {
                Quantity::Actual => {}
                Quantity::Lfmt if both_left_first => {
                    match compute_lfmt_lfmg(&self.spec, &self.pos, depth, &mcfg) {
                        Ok((lfmt, lfmg)) => {
                            rows.push(self.report_row(&lfmt));
                            rows.push(self.report_row(&lfmg));
                        }
                        Err(MetrologyError::Budget { .. }) => {
                            rows.push(self.skipped_row(depth, Quantity::Lfmt, "budget"));
                            rows.push(self.skipped_row(depth, Quantity::Lfmg, "budget"));
                        }
                        Err(e) => return Err(self.lift(e)),
                    }
                }
                Quantity::Lfmg if both_left_first => {}
                Quantity::Lfmt => {
                    push(compute_lfmt(&self.spec, &self.pos, depth, &mcfg), q, &mut rows)?
                }
                Quantity::Lfmg => {
                    push(compute_lfmg(&self.spec, &self.pos, depth, &mcfg), q, &mut rows)?
                }
                Quantity::Rmt => {
                    push(compute_rmt(&self.spec, &self.pos, depth, &mcfg), q, &mut rows)?
                }
                Quantity::Armg => {
                    let mm_d = self.cfg.mm_d.min(depth);
                    push(
                        compute_armg(&self.spec, &self.pos, depth, mm_d, &mcfg),
                        q,
                        &mut rows,
                    )?
                }
            }
        }
        Ok(rows)
    }
}

/// Expands the config to its full cell matrix. Deterministic: the returned
/// rows (and therefore the CSV) depend only on the config contents.
pub fn run_cells(cfg: &ExperimentConfig) -> Result<Vec<CsvRow>, HarnessError> {
    cfg.validate()?;
    let hash = cfg.hash();
    let mut rows = Vec::new();
    for path in &cfg.fixtures {
        let (spec, pos, fixture) = if path.as_os_str() == config::ROOT_FIXTURE {
            let spec = GameSpec::parse(&cfg.game).map_err(|e| {
                HarnessError::Data(format!("{} needs a concrete game: {e}", config::ROOT_FIXTURE))
            })?;
            let pos = spec.initial();
            (spec, pos, "root".to_string())
        } else {
            let text = std::fs::read_to_string(path)
                .map_err(|e| HarnessError::Data(format!("read {}: {e}", path.display())))?;
            let (spec, pos) = parse_fixture(&text)
                .map_err(|e| HarnessError::Data(format!("{}: {e}", path.display())))?;
            (spec, pos, fixture_id(path))
        };
        let ctx = CellCtx {
            cfg,
            hash: hash.clone(),
            spec,
            pos,
            fixture,
        };
        for depth in cfg.depths.0..=cfg.depths.1 {
            if cfg.metrology.contains(&Quantity::Actual) {
                for &engine in &cfg.engines {
                    for &etc_on in cfg.etc.settings() {
                        rows.push(ctx.actual_row(depth, engine, etc_on)?);
                    }
                }
            }
            rows.extend(ctx.metrology_rows(depth)?);
        }
    }
    enforce_f_agreement(&rows)?;
    rows.sort_by_key(|r| r.sort_key());
    Ok(rows)
}

/// Every cell of one (fixture, depth) must report the same minimax value;
/// a mismatch means a search bug, not bad data.
fn enforce_f_agreement(rows: &[CsvRow]) -> Result<(), HarnessError> {
    let mut seen: HashMap<(&str, u32), (Score, &CsvRow)> = HashMap::new();
    for row in rows.iter().filter(|r| r.is_ok()) {
        let Some(f) = row.f else { continue };
        match seen.entry((row.fixture.as_str(), row.depth)) {
            std::collections::hash_map::Entry::Vacant(v) => {
                v.insert((f, row));
            }
            std::collections::hash_map::Entry::Occupied(o) => {
                let (prev, first) = *o.get();
                if prev != f {
                    return Err(HarnessError::Internal(format!(
                        "value disagreement on {} depth {}: {} ({} {}) vs {} ({} {})",
                        row.fixture,
                        row.depth,
                        prev,
                        first.quantity.name(),
                        first.engine_name(),
                        f,
                        row.quantity.name(),
                        row.engine_name(),
                    )));
                }
            }
        }
    }
    Ok(())
}

/// Runs the experiment and writes the CSV (plus the optional parity
/// summary). Timing goes to stderr only; the artifacts stay byte-stable.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<(), HarnessError> {
    let started = std::time::Instant::now();
    let rows = run_cells(cfg)?;
    let mut file = std::fs::File::create(&cfg.out)
        .map_err(|e| HarnessError::Data(format!("create {}: {e}", cfg.out.display())))?;
    write_rows(&rows, cfg.depths.1 as usize, &mut file)?;
    if let Some(oe_path) = &cfg.odd_even_out {
        let summary = sweep_odd_even(&rows)?;
        std::fs::write(oe_path, summary.render_csv())
            .map_err(|e| HarnessError::Data(format!("create {}: {e}", oe_path.display())))?;
    }
    eprintln!(
        "wrote {} rows to {} in {:.2?} (config {})",
        rows.len(),
        cfg.out.display(),
        started.elapsed(),
        cfg.hash(),
    );
    Ok(())
}

#[derive(Clone, Debug, PartialEq)]
pub struct OddEvenRow {
    pub engine: EngineKind,
    pub parity: &'static str,
    pub cells: usize,
    pub median_ratio_total: f64,
    pub median_ratio_leaves: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct OddEvenSummary {
    pub rows: Vec<OddEvenRow>,
}

impl OddEvenSummary {
    pub fn render_csv(&self) -> String {
        let mut out = String::from("engine,parity,cells,median_ratio_total,median_ratio_leaves\n");
        for r in &self.rows {
            out.push_str(&format!(
                "{},{},{},{:.6},{:.6}\n",
                r.engine.name(),
                r.parity,
                r.cells,
                r.median_ratio_total,
                r.median_ratio_leaves
            ));
        }
        out
    }

    pub fn median_for(&self, engine: EngineKind, parity: &str) -> Option<f64> {
        self.rows
            .iter()
            .find(|r| r.engine == engine && r.parity == parity)
            .map(|r| r.median_ratio_total)
    }
}

/// Pools engine-vs-graph ratios by depth parity. Needs lfmg rows, actual
/// rows at the baseline etc setting, and at least two odd and two even
/// depths with paired cells.
pub fn sweep_odd_even(rows: &[CsvRow]) -> Result<OddEvenSummary, HarnessError> {
    let graph = {
        let mut m: HashMap<(&str, u32), (f64, f64)> = HashMap::new();
        for r in rows.iter().filter(|r| r.is_ok() && r.quantity == Quantity::Lfmg) {
            m.insert((r.fixture.as_str(), r.depth), (r.total as f64, r.leaf as f64));
        }
        if m.is_empty() {
            return Err(HarnessError::Data(
                "parity summary requires lfmg rows; add lfmg to the metrology list".into(),
            ));
        }
        m
    };
    let actuals: Vec<&CsvRow> = rows
        .iter()
        .filter(|r| r.is_ok() && r.quantity == Quantity::Actual)
        .collect();
    let has_off = actuals.iter().any(|r| r.etc == Some(false));
    let baseline: Vec<&CsvRow> = actuals
        .into_iter()
        .filter(|r| r.etc == Some(!has_off))
        .collect();

    let mut buckets: HashMap<(EngineKind, bool), (Vec<f64>, Vec<f64>)> = HashMap::new();
    let mut odd_depths = std::collections::BTreeSet::new();
    let mut even_depths = std::collections::BTreeSet::new();
    for r in baseline {
        let Some(&(gt, gl)) = graph.get(&(r.fixture.as_str(), r.depth)) else {
            continue;
        };
        let engine = r.engine.expect("actual rows carry an engine");
        let even = r.depth % 2 == 0;
        if even {
            even_depths.insert(r.depth);
        } else {
            odd_depths.insert(r.depth);
        }
        let (ts, ls) = buckets.entry((engine, even)).or_default();
        ts.push(r.total as f64 / gt);
        ls.push(r.leaf as f64 / gl);
    }
    if odd_depths.len() < 2 || even_depths.len() < 2 {
        return Err(HarnessError::Data(format!(
            "parity summary needs at least two odd and two even depths with paired cells; have {} odd, {} even",
            odd_depths.len(),
            even_depths.len()
        )));
    }

    let mut out: Vec<OddEvenRow> = buckets
        .into_iter()
        .map(|((engine, even), (ts, ls))| OddEvenRow {
            engine,
            parity: if even { "even" } else { "odd" },
            cells: ts.len(),
            median_ratio_total: median(ts),
            median_ratio_leaves: median(ls),
        })
        .collect();
    out.sort_by_key(|r| (r.engine.name(), r.parity));
    Ok(OddEvenSummary { rows: out })
}

#[cfg(test)]
mod tests {
    use super::fixtures::write_all;
    use super::*;
    use std::path::PathBuf;

    fn scratch(tag: &str) -> PathBuf {
        let dir = std::env::temp_dir().join(format!("harness-{tag}-{}", std::process::id()));
        let _ = std::fs::remove_dir_all(&dir);
        std::fs::create_dir_all(&dir).unwrap();
        dir
    }

    fn synth_fixtures(dir: &Path, seeds: &[u64], w: u32, d: u32, t: f64) -> Vec<PathBuf> {
        seeds
            .iter()
            .map(|seed| {
                let spec = GameSpec::parse(&format!("seed={seed} w={w} d={d} t={t}")).unwrap();
                let path = dir.join(format!("s{seed}.pos"));
                std::fs::write(&path, crate::game::fixture::write_fixture(&spec, &spec.initial()))
                    .unwrap();
                path
            })
            .collect()
    }

    fn base_config(fixtures: Vec<PathBuf>, out: PathBuf) -> ExperimentConfig {
        ExperimentConfig {
            game: "synthetic".into(),
            fixtures,
            depths: (1, 4),
            engines: vec![EngineKind::NegaScout],
            tt_bits: 14,
            etc: EtcChoice::Off,
            etc_min_depth: 3,
            use_history: true,
            metrology: [Quantity::Actual, Quantity::Lfmt, Quantity::Lfmg]
                .into_iter()
                .collect(),
            mm_d: 2,
            budget: 10_000_000,
            out,
            odd_even_out: None,
        }
    }

    #[test]
    fn root_pseudo_fixture_runs_the_config_game_from_its_start() {
        let dir = scratch("root-fixture");
        let mut cfg = base_config(
            vec![PathBuf::from(config::ROOT_FIXTURE)],
            dir.join("out.csv"),
        );
        cfg.game = "seed=70 w=3 d=6 t=0.5".into();
        let rows = run_cells(&cfg).unwrap();
        assert_eq!(rows.len(), 4 * 3);
        assert!(rows.iter().all(|r| r.fixture == "root" && r.is_ok()));
        assert!(rows.iter().all(|r| r.game == cfg.game));

        // Same tree via a fixture file must produce the same cells.
        let by_file = base_config(
            synth_fixtures(&dir, &[70], 3, 6, 0.5),
            dir.join("out2.csv"),
        );
        let file_rows = run_cells(&by_file).unwrap();
        for (a, b) in rows.iter().zip(&file_rows) {
            assert_eq!((a.f, a.leaf, a.total), (b.f, b.leaf, b.total));
        }

        cfg.game = "synthetic".into();
        assert!(matches!(run_cells(&cfg), Err(HarnessError::Data(_))));
    }

    #[test]
    fn cell_matrix_is_complete_and_value_consistent() {
        let dir = scratch("matrix");
        let cfg = base_config(
            synth_fixtures(&dir, &[70, 71], 3, 6, 0.5),
            dir.join("out.csv"),
        );
        let rows = run_cells(&cfg).unwrap();
        // 2 fixtures x 4 depths x (actual + lfmt + lfmg)
        assert_eq!(rows.len(), 2 * 4 * 3);
        assert!(rows.iter().all(|r| r.is_ok()));
        for pair in rows.chunks(3) {
            assert!(pair.iter().all(|r| r.f == pair[0].f));
        }
        let sorted: Vec<_> = {
            let mut v = rows.clone();
            v.sort_by_key(|r| r.sort_key());
            v
        };
        assert_eq!(rows, sorted, "rows arrive pre-sorted by cell key");
        std::fs::remove_dir_all(&dir).unwrap();
    }

    #[test]
    fn experiment_output_is_byte_identical_across_runs() {
        let dir = scratch("bytes");
        let cfg = base_config(
            synth_fixtures(&dir, &[5], 3, 5, 0.8),
            dir.join("a.csv"),
        );
        run_experiment(&cfg).unwrap();
        let mut cfg2 = cfg.clone();
        cfg2.out = dir.join("b.csv");
        run_experiment(&cfg2).unwrap();
        let a = std::fs::read(dir.join("a.csv")).unwrap();
        let b = std::fs::read(dir.join("b.csv")).unwrap();
        assert!(!a.is_empty());
        assert_eq!(a, b);
        let rows = read_rows(&mut a.as_slice()).unwrap();
        assert_eq!(rows.len(), 4 * 3);
        std::fs::remove_dir_all(&dir).unwrap();
    }

    #[test]
    fn parity_summary_pools_by_depth_parity() {
        let dir = scratch("parity");
        let mut cfg = base_config(
            synth_fixtures(&dir, &[30, 31, 32], 3, 7, 0.5),
            dir.join("out.csv"),
        );
        cfg.depths = (2, 5);
        let rows = run_cells(&cfg).unwrap();
        let summary = sweep_odd_even(&rows).unwrap();
        assert_eq!(summary.rows.len(), 2);
        let even = summary.median_for(EngineKind::NegaScout, "even").unwrap();
        let odd = summary.median_for(EngineKind::NegaScout, "odd").unwrap();
        assert!(even > 0.0 && odd > 0.0);
        // 3 fixtures x 2 depths per parity
        assert!(summary.rows.iter().all(|r| r.cells == 6));

        cfg.depths = (2, 3);
        let narrow = run_cells(&cfg).unwrap();
        assert!(matches!(
            sweep_odd_even(&narrow),
            Err(HarnessError::Data(_))
        ));
        std::fs::remove_dir_all(&dir).unwrap();
    }

    #[test]
    fn plots_project_the_expected_columns() {
        let dir = scratch("plots");
        let mut cfg = base_config(
            synth_fixtures(&dir, &[8, 9], 3, 6, 0.8),
            dir.join("out.csv"),
        );
        cfg.metrology = Quantity::ALL.into_iter().collect();
        cfg.etc = EtcChoice::Both;
        cfg.depths = (1, 4);
        let rows = run_cells(&cfg).unwrap();

        let fig2 = emit_plotdata(&rows, Figure::Fig2).unwrap();
        assert!(fig2.starts_with("# depth lfmt_total lfmg_total\n"));
        assert_eq!(fig2.lines().count(), 1 + 4);

        let fig1 = emit_plotdata(&rows, Figure::Fig1).unwrap();
        assert!(fig1.lines().count() >= 2, "{fig1}");

        let fig3 = emit_plotdata(&rows, Figure::Fig3).unwrap();
        assert!(fig3.lines().nth(1).unwrap().starts_with("1 "));

        let fig56 = emit_plotdata(&rows, Figure::Fig5_6).unwrap();
        assert!(fig56.contains("total_etc_off"));

        let fig789 = emit_plotdata(&rows, Figure::Fig7_8_9).unwrap();
        assert_eq!(fig789.lines().count(), 1 + 4);

        // Projections that need missing quantities must name them.
        let thin: Vec<CsvRow> = rows
            .iter()
            .filter(|r| r.quantity == Quantity::Actual && r.etc == Some(false))
            .cloned()
            .collect();
        let err = emit_plotdata(&thin, Figure::Fig2).unwrap_err();
        assert!(format!("{err}").contains("lfmt"));
        let err = emit_plotdata(&thin, Figure::Fig5_6).unwrap_err();
        assert!(format!("{err}").contains("etc"));
        std::fs::remove_dir_all(&dir).unwrap();
    }

    #[test]
    fn generated_corpus_satisfies_config_resolution() {
        let dir = scratch("corpus");
        write_all(&dir).unwrap();
        let files =
            config::resolve_fixtures(&dir.join("minicheckers").display().to_string()).unwrap();
        assert_eq!(files.len(), 20);
        assert!(files.windows(2).all(|w| w[0] < w[1]));
        std::fs::remove_dir_all(&dir).unwrap();
    }

    #[test]
    fn config_hash_tracks_content() {
        let dir = scratch("hash");
        let f = synth_fixtures(&dir, &[1], 2, 4, 0.0);
        let cfg = base_config(f.clone(), dir.join("o.csv"));
        let mut other = cfg.clone();
        assert_eq!(cfg.hash(), other.hash());
        other.tt_bits = 15;
        assert_ne!(cfg.hash(), other.hash());
        // The output path is workflow, not identity.
        let mut moved = cfg.clone();
        moved.out = dir.join("elsewhere.csv");
        assert_eq!(cfg.hash(), moved.hash());
        std::fs::remove_dir_all(&dir).unwrap();
    }
}
