//! One row per measured cell, byte-stable across runs.
//!
//! Columns: config, game, fixture, depth, quantity, engine, etc, leaf,
//! interior, total, tt_hits, etc_cutoffs, fmcr_l0..fmcr_l{L-1}, f, status.
//! Engine and etc are "-" on metrology rows (those quantities are
//! engine-independent). Rates use six decimals; empty cells mean "not
//! applicable", never zero.

use super::HarnessError;
use crate::minimal_graphs::Quantity;
use crate::score::Score;
use crate::search::EngineKind;
use std::io::Write;

#[derive(Clone, Debug, PartialEq)]
pub enum RowStatus {
    Ok,
    Skipped(String),
}

impl RowStatus {
    fn render(&self) -> String {
        match self {
            RowStatus::Ok => "ok".into(),
            RowStatus::Skipped(reason) => format!("skipped({reason})"),
        }
    }

    fn parse(s: &str) -> Result<RowStatus, String> {
        if s == "ok" {
            return Ok(RowStatus::Ok);
        }
        s.strip_prefix("skipped(")
            .and_then(|r| r.strip_suffix(')'))
            .map(|r| RowStatus::Skipped(r.to_string()))
            .ok_or_else(|| format!("bad status '{s}'"))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CsvRow {
    pub config: String,
    pub game: String,
    pub fixture: String,
    pub depth: u32,
    pub quantity: Quantity,
    pub engine: Option<EngineKind>,
    pub etc: Option<bool>,
    pub leaf: u64,
    pub interior: u64,
    pub total: u64,
    pub tt_hits: u64,
    pub etc_cutoffs: u64,
    /// First-move-cutoff rate per tree level; empty on metrology rows and
    /// at levels that saw no cutoffs.
    pub fmcr: Vec<Option<f64>>,
    pub f: Option<Score>,
    pub status: RowStatus,
}

impl CsvRow {
    pub fn etc_name(&self) -> &'static str {
        match self.etc {
            Some(true) => "on",
            Some(false) => "off",
            None => "-",
        }
    }

    pub fn engine_name(&self) -> &'static str {
        self.engine.map_or("-", |e| e.name())
    }

    pub fn is_ok(&self) -> bool {
        self.status == RowStatus::Ok
    }

    /// Stable emission order: cell key, not completion order.
    pub fn sort_key(&self) -> (String, u32, Quantity, &'static str, &'static str) {
        (
            self.fixture.clone(),
            self.depth,
            self.quantity,
            self.engine_name(),
            self.etc_name(),
        )
    }
}

pub fn write_rows(rows: &[CsvRow], levels: usize, out: &mut dyn Write) -> Result<(), HarnessError> {
    let io_err = |e: csv::Error| HarnessError::Data(format!("csv write: {e}"));
    let mut w = csv::Writer::from_writer(out);
    let mut header: Vec<String> = [
        "config",
        "game",
        "fixture",
        "depth",
        "quantity",
        "engine",
        "etc",
        "leaf",
        "interior",
        "total",
        "tt_hits",
        "etc_cutoffs",
    ]
    .iter()
    .map(|s| s.to_string())
    .collect();
    for l in 0..levels {
        header.push(format!("fmcr_l{l}"));
    }
    header.push("f".into());
    header.push("status".into());
    w.write_record(&header).map_err(io_err)?;

    for row in rows {
        let mut rec: Vec<String> = vec![
            row.config.clone(),
            row.game.clone(),
            row.fixture.clone(),
            row.depth.to_string(),
            row.quantity.name().into(),
            row.engine_name().into(),
            row.etc_name().into(),
            row.leaf.to_string(),
            row.interior.to_string(),
            row.total.to_string(),
            row.tt_hits.to_string(),
            row.etc_cutoffs.to_string(),
        ];
        for l in 0..levels {
            rec.push(match row.fmcr.get(l).copied().flatten() {
                Some(r) => format!("{r:.6}"),
                None => String::new(),
            });
        }
        rec.push(row.f.map(|f| f.to_string()).unwrap_or_default());
        rec.push(row.status.render());
        w.write_record(&rec).map_err(io_err)?;
    }
    w.flush()
        .map_err(|e| HarnessError::Data(format!("csv write: {e}")))?;
    Ok(())
}

pub fn read_rows(input: &mut dyn std::io::Read) -> Result<Vec<CsvRow>, HarnessError> {
    let data = |m: String| HarnessError::Data(m);
    let mut r = csv::Reader::from_reader(input);
    let header = r
        .headers()
        .map_err(|e| data(format!("csv read: {e}")))?
        .clone();
    let levels = header.iter().filter(|h| h.starts_with("fmcr_l")).count();
    let expect = 12 + levels + 2;
    if header.len() != expect || header.get(0) != Some("config") {
        return Err(data("not a results csv (unexpected header)".into()));
    }
    let mut rows = Vec::new();
    for (i, rec) in r.records().enumerate() {
        let rec = rec.map_err(|e| data(format!("csv row {}: {e}", i + 2)))?;
        let at = |m: String| data(format!("csv row {}: {m}", i + 2));
        let field = |j: usize| rec.get(j).unwrap_or("");
        let num = |j: usize| -> Result<u64, HarnessError> {
            field(j)
                .parse()
                .map_err(|_| at(format!("bad integer '{}'", field(j))))
        };
        let mut fmcr = Vec::with_capacity(levels);
        for l in 0..levels {
            let cell = field(12 + l);
            fmcr.push(if cell.is_empty() {
                None
            } else {
                Some(cell.parse().map_err(|_| at(format!("bad rate '{cell}'")))?)
            });
        }
        if fmcr.iter().all(Option::is_none) {
            // Writers pad rate cells to the file width; a fully empty set
            // means the row had none.
            fmcr.clear();
        }
        let f_cell = field(12 + levels);
        rows.push(CsvRow {
            config: field(0).to_string(),
            game: field(1).to_string(),
            fixture: field(2).to_string(),
            depth: field(3)
                .parse()
                .map_err(|_| at(format!("bad depth '{}'", field(3))))?,
            quantity: field(4).parse().map_err(at)?,
            engine: match field(5) {
                "-" => None,
                e => Some(e.parse().map_err(at)?),
            },
            etc: match field(6) {
                "-" => None,
                "on" => Some(true),
                "off" => Some(false),
                other => return Err(at(format!("bad etc '{other}'"))),
            },
            leaf: num(7)?,
            interior: num(8)?,
            total: num(9)?,
            tt_hits: num(10)?,
            etc_cutoffs: num(11)?,
            fmcr,
            f: if f_cell.is_empty() {
                None
            } else {
                Some(
                    f_cell
                        .parse()
                        .map_err(|_| at(format!("bad f '{f_cell}'")))?,
                )
            },
            status: RowStatus::parse(field(12 + levels + 1)).map_err(at)?,
        });
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row(fixture: &str, depth: u32, q: Quantity) -> CsvRow {
        CsvRow {
            config: "00ff".into(),
            game: "minicheckers".into(),
            fixture: fixture.into(),
            depth,
            quantity: q,
            engine: (q == Quantity::Actual).then_some(EngineKind::NegaScout),
            etc: (q == Quantity::Actual).then_some(false),
            leaf: 10,
            interior: 5,
            total: 16,
            tt_hits: 1,
            etc_cutoffs: 0,
            fmcr: if q == Quantity::Actual {
                vec![Some(0.875), None]
            } else {
                vec![]
            },
            f: Some(-42),
            status: RowStatus::Ok,
        }
    }

    #[test]
    fn rows_round_trip_through_bytes() {
        let rows = vec![
            row("p00", 2, Quantity::Actual),
            row("p00", 2, Quantity::Lfmg),
            CsvRow {
                status: RowStatus::Skipped("budget".into()),
                f: None,
                ..row("p01", 3, Quantity::Rmt)
            },
        ];
        let mut buf = Vec::new();
        write_rows(&rows, 2, &mut buf).unwrap();
        let back = read_rows(&mut buf.as_slice()).unwrap();
        assert_eq!(back, rows);
    }

    #[test]
    fn writing_is_deterministic() {
        let rows = vec![row("p00", 2, Quantity::Actual)];
        let (mut a, mut b) = (Vec::new(), Vec::new());
        write_rows(&rows, 2, &mut a).unwrap();
        write_rows(&rows, 2, &mut b).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn malformed_input_names_the_row() {
        let text = "config,game,fixture,depth,quantity,engine,etc,leaf,interior,total,tt_hits,etc_cutoffs,f,status\n\
                    x,g,p,notanumber,lfmg,-,-,1,1,2,0,0,5,ok\n";
        let err = read_rows(&mut text.as_bytes()).unwrap_err();
        assert!(format!("{err}").contains("row 2"));
    }
}
