//! Projections from a results CSV to two-or-three-column whitespace plot
//! data, one file per figure family. Aggregation across fixtures uses the
//! median (means for the per-level ordering rates, which are already
//! normalized); every projection errors out loudly when the CSV lacks the
//! quantity it needs, naming the missing run.

use super::csv::CsvRow;
use super::{median, HarnessError};
use crate::minimal_graphs::Quantity;
use std::collections::BTreeMap;

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Figure {
    /// Move-ordering quality by tree level.
    Fig1,
    /// Tree vs graph size by depth.
    Fig2,
    /// Engine efficiency relative to the graph by depth.
    Fig3,
    /// Successor-probe cutoff savings by depth.
    Fig5_6,
    /// Graph vs cheapest-refutation re-count by depth.
    Fig7_8_9,
}

impl Figure {
    pub const ALL: [Figure; 5] = [
        Figure::Fig1,
        Figure::Fig2,
        Figure::Fig3,
        Figure::Fig5_6,
        Figure::Fig7_8_9,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Figure::Fig1 => "fig1",
            Figure::Fig2 => "fig2",
            Figure::Fig3 => "fig3",
            Figure::Fig5_6 => "fig5_6",
            Figure::Fig7_8_9 => "fig7_8_9",
        }
    }
}

impl std::str::FromStr for Figure {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        Figure::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| format!("unknown figure '{s}' (fig1|fig2|fig3|fig5_6|fig7_8_9)"))
    }
}

fn ok_rows(rows: &[CsvRow]) -> impl Iterator<Item = &CsvRow> {
    rows.iter().filter(|r| r.is_ok())
}

fn quantity_totals(rows: &[CsvRow], q: Quantity) -> BTreeMap<u32, Vec<f64>> {
    let mut by_depth: BTreeMap<u32, Vec<f64>> = BTreeMap::new();
    for r in ok_rows(rows).filter(|r| r.quantity == q) {
        by_depth.entry(r.depth).or_default().push(r.total as f64);
    }
    by_depth
}

fn require(
    by_depth: &BTreeMap<u32, Vec<f64>>,
    q: Quantity,
) -> Result<(), HarnessError> {
    if by_depth.is_empty() {
        return Err(HarnessError::Data(format!(
            "plot needs rows with quantity={}; add it to the metrology list and re-run",
            q.name()
        )));
    }
    Ok(())
}

/// Actual rows restricted to the baseline etc setting (off when present)
/// and checked to cover exactly one engine.
fn single_engine_actuals(rows: &[CsvRow]) -> Result<Vec<&CsvRow>, HarnessError> {
    let actuals: Vec<&CsvRow> = ok_rows(rows)
        .filter(|r| r.quantity == Quantity::Actual)
        .collect();
    if actuals.is_empty() {
        return Err(HarnessError::Data(
            "plot needs rows with quantity=actual; add it to the metrology list and re-run".into(),
        ));
    }
    let has_off = actuals.iter().any(|r| r.etc == Some(false));
    let picked: Vec<&CsvRow> = actuals
        .into_iter()
        .filter(|r| r.etc == Some(!has_off))
        .collect();
    let engines: std::collections::BTreeSet<&str> =
        picked.iter().map(|r| r.engine_name()).collect();
    if engines.len() > 1 {
        return Err(HarnessError::Data(format!(
            "plot needs a single engine, csv has {}; re-run the sweep per engine",
            engines.into_iter().collect::<Vec<_>>().join(",")
        )));
    }
    Ok(picked)
}

fn two_quantity_projection(
    rows: &[CsvRow],
    header: &str,
    a: Quantity,
    b: Quantity,
) -> Result<String, HarnessError> {
    let at = quantity_totals(rows, a);
    let bt = quantity_totals(rows, b);
    require(&at, a)?;
    require(&bt, b)?;
    let mut out = format!("# {header}\n");
    for (depth, xs) in &at {
        if let Some(ys) = bt.get(depth) {
            out.push_str(&format!(
                "{depth} {:.1} {:.1}\n",
                median(xs.clone()),
                median(ys.clone())
            ));
        }
    }
    Ok(out)
}

pub fn emit_plotdata(rows: &[CsvRow], figure: Figure) -> Result<String, HarnessError> {
    match figure {
        Figure::Fig1 => {
            let actuals = single_engine_actuals(rows)?;
            let deepest = actuals.iter().map(|r| r.depth).max().unwrap();
            let levels = actuals
                .iter()
                .map(|r| r.fmcr.len())
                .max()
                .unwrap_or(0);
            let mut out = String::from("# level first_move_cutoff_rate\n");
            for l in 0..levels {
                let rates: Vec<f64> = actuals
                    .iter()
                    .filter(|r| r.depth == deepest)
                    .filter_map(|r| r.fmcr.get(l).copied().flatten())
                    .collect();
                if !rates.is_empty() {
                    let mean = rates.iter().sum::<f64>() / rates.len() as f64;
                    out.push_str(&format!("{l} {mean:.6}\n"));
                }
            }
            Ok(out)
        }
        Figure::Fig2 => two_quantity_projection(
            rows,
            "depth lfmt_total lfmg_total",
            Quantity::Lfmt,
            Quantity::Lfmg,
        ),
        Figure::Fig3 => {
            let actuals = single_engine_actuals(rows)?;
            let graph = index_graph(rows, Quantity::Lfmg)?;
            let mut totals: BTreeMap<u32, Vec<f64>> = BTreeMap::new();
            let mut leaves: BTreeMap<u32, Vec<f64>> = BTreeMap::new();
            for r in &actuals {
                if let Some(&(gt, gl)) = graph.get(&(r.fixture.clone(), r.depth)) {
                    totals
                        .entry(r.depth)
                        .or_default()
                        .push(r.total as f64 / gt);
                    leaves.entry(r.depth).or_default().push(r.leaf as f64 / gl);
                }
            }
            if totals.is_empty() {
                return Err(HarnessError::Data(
                    "no (actual, lfmg) cell pairs; run both quantities in one sweep".into(),
                ));
            }
            let mut out = String::from("# depth ratio_total ratio_leaves\n");
            for (depth, ts) in &totals {
                out.push_str(&format!(
                    "{depth} {:.6} {:.6}\n",
                    median(ts.clone()),
                    median(leaves[depth].clone())
                ));
            }
            Ok(out)
        }
        Figure::Fig5_6 => {
            let actuals: Vec<&CsvRow> = ok_rows(rows)
                .filter(|r| r.quantity == Quantity::Actual)
                .collect();
            let mut off: BTreeMap<u32, Vec<f64>> = BTreeMap::new();
            let mut on: BTreeMap<u32, Vec<f64>> = BTreeMap::new();
            for r in actuals {
                match r.etc {
                    Some(false) => off.entry(r.depth).or_default().push(r.total as f64),
                    Some(true) => on.entry(r.depth).or_default().push(r.total as f64),
                    None => {}
                }
            }
            if off.is_empty() || on.is_empty() {
                return Err(HarnessError::Data(
                    "successor-probe comparison needs actual rows with etc=off and etc=on; sweep with --etc both".into(),
                ));
            }
            let mut out = String::from("# depth total_etc_off total_etc_on\n");
            for (depth, xs) in &off {
                if let Some(ys) = on.get(depth) {
                    out.push_str(&format!(
                        "{depth} {:.1} {:.1}\n",
                        median(xs.clone()),
                        median(ys.clone())
                    ));
                }
            }
            Ok(out)
        }
        Figure::Fig7_8_9 => two_quantity_projection(
            rows,
            "depth lfmg_total armg_total",
            Quantity::Lfmg,
            Quantity::Armg,
        ),
    }
}

/// (fixture, depth) -> (total, leaf) for a metrology quantity.
type GraphIndex = std::collections::HashMap<(String, u32), (f64, f64)>;

fn index_graph(rows: &[CsvRow], q: Quantity) -> Result<GraphIndex, HarnessError> {
    let map: GraphIndex = ok_rows(rows)
        .filter(|r| r.quantity == q)
        .map(|r| {
            (
                (r.fixture.clone(), r.depth),
                (r.total as f64, r.leaf as f64),
            )
        })
        .collect();
    if map.is_empty() {
        return Err(HarnessError::Data(format!(
            "plot needs rows with quantity={}; add it to the metrology list and re-run",
            q.name()
        )));
    }
    Ok(map)
}
