//! Experiment driver. Exit codes: 0 success, 1 usage, 2 data error,
//! 3 internal invariant violation.

use clap::{Parser, Subcommand};
use std::path::PathBuf;
use treelab::harness::{
    config::{default_fixture_spec, parse_depths, parse_engines, parse_metrology, resolve_fixtures},
    emit_plotdata, fixtures, read_rows, run_experiment, ExperimentConfig, Figure, HarnessError,
};

#[derive(Parser)]
#[command(name = "treelab", version, about = "Game-tree search measurement bench")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run an experiment described by a flat key=value config file.
    Run {
        #[arg(long)]
        config: PathBuf,
    },
    /// Sweep a fixture set over a depth range and write a results CSV.
    Sweep {
        /// Game family: othello6, minicheckers, or synthetic.
        #[arg(long)]
        game: String,
        /// Inclusive depth range, e.g. 1..8.
        #[arg(long)]
        depths: String,
        /// Engine name or comma list: alphabeta, negascout, aspnegascout,
        /// mtdf, or all.
        #[arg(long, default_value = "negascout")]
        engine: String,
        /// Successor-probe cutoffs: on, off, or both (two rows per cell).
        #[arg(long, default_value = "off")]
        etc: String,
        #[arg(long, default_value_t = 3)]
        etc_min_depth: u32,
        #[arg(long, default_value_t = 21)]
        tt_bits: u32,
        /// Quantities to measure: comma list of actual, lfmt, lfmg, rmt,
        /// armg, or all.
        #[arg(long, default_value = "actual")]
        metrology: String,
        /// Bottom plies re-designated by the cheapest-cutoff scan.
        #[arg(long, default_value_t = 3)]
        mm_d: u32,
        /// Node-access ceiling per measurement; exceeding marks the row
        /// skipped.
        #[arg(long, default_value_t = 100_000_000)]
        budget: u64,
        /// Fixture directory or comma list of files; defaults to
        /// fixtures/<game>.
        #[arg(long)]
        fixtures: Option<String>,
        #[arg(long)]
        out: PathBuf,
        /// Also write a per-parity efficiency summary here.
        #[arg(long)]
        odd_even_out: Option<PathBuf>,
    },
    /// Project a results CSV to whitespace plot data.
    Plot {
        /// fig1, fig2, fig3, fig5_6, or fig7_8_9.
        #[arg(long)]
        figure: String,
        #[arg(long, value_name = "CSV")]
        r#in: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Generate or verify the frozen fixture corpus.
    Fixture {
        #[command(subcommand)]
        action: FixtureCmd,
    },
}

#[derive(Subcommand)]
enum FixtureCmd {
    /// Write all 60 fixtures (overwrites).
    Gen {
        #[arg(long, default_value = "fixtures")]
        dir: PathBuf,
    },
    /// Verify the corpus matches the generator byte for byte.
    Check {
        #[arg(long, default_value = "fixtures")]
        dir: PathBuf,
    },
}

enum AppError {
    Usage(String),
    Harness(HarnessError),
}

impl From<HarnessError> for AppError {
    fn from(e: HarnessError) -> Self {
        AppError::Harness(e)
    }
}

fn usage(m: String) -> AppError {
    AppError::Usage(m)
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            std::process::exit(code);
        }
    };
    match dispatch(cli) {
        Ok(()) => {}
        Err(AppError::Usage(m)) => {
            eprintln!("error: {m}");
            std::process::exit(1);
        }
        Err(AppError::Harness(HarnessError::Data(m))) => {
            eprintln!("error: {m}");
            std::process::exit(2);
        }
        Err(AppError::Harness(HarnessError::Internal(m))) => {
            eprintln!("internal error: {m}");
            std::process::exit(3);
        }
    }
}

fn dispatch(cli: Cli) -> Result<(), AppError> {
    match cli.cmd {
        Cmd::Run { config } => {
            let text = std::fs::read_to_string(&config).map_err(|e| {
                HarnessError::Data(format!("read {}: {e}", config.display()))
            })?;
            let cfg = ExperimentConfig::from_kv(&text)?;
            run_experiment(&cfg)?;
            Ok(())
        }
        Cmd::Sweep {
            game,
            depths,
            engine,
            etc,
            etc_min_depth,
            tt_bits,
            metrology,
            mm_d,
            budget,
            fixtures,
            out,
            odd_even_out,
        } => {
            // Argument syntax first (exit 1), the filesystem after (exit 2).
            let depths = parse_depths(&depths).map_err(usage)?;
            let engines = parse_engines(&engine).map_err(usage)?;
            let etc = etc.parse().map_err(usage)?;
            let metrology = parse_metrology(&metrology).map_err(usage)?;
            let fixture_spec = fixtures.unwrap_or_else(|| default_fixture_spec(&game));
            let cfg = ExperimentConfig {
                fixtures: resolve_fixtures(&fixture_spec)?,
                depths,
                engines,
                tt_bits,
                etc,
                etc_min_depth,
                use_history: true,
                metrology,
                mm_d,
                budget,
                out,
                odd_even_out,
                game,
            };
            run_experiment(&cfg)?;
            Ok(())
        }
        Cmd::Plot { figure, r#in, out } => {
            let figure: Figure = figure.parse().map_err(usage)?;
            let mut file = std::fs::File::open(&r#in)
                .map_err(|e| HarnessError::Data(format!("read {}: {e}", r#in.display())))?;
            let rows = read_rows(&mut file)?;
            let dat = emit_plotdata(&rows, figure)?;
            std::fs::write(&out, &dat)
                .map_err(|e| HarnessError::Data(format!("write {}: {e}", out.display())))?;
            eprintln!(
                "wrote {} data lines to {}",
                dat.lines().count().saturating_sub(1),
                out.display()
            );
            Ok(())
        }
        Cmd::Fixture { action } => match action {
            FixtureCmd::Gen { dir } => {
                let n = fixtures::write_all(&dir)?;
                eprintln!("wrote {n} fixtures under {}", dir.display());
                Ok(())
            }
            FixtureCmd::Check { dir } => {
                let n = fixtures::check_all(&dir)?;
                eprintln!("verified {n} fixtures under {}", dir.display());
                Ok(())
            }
        },
    }
}
