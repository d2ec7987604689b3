mod args;
mod render;

use std::fs;
use std::io::Write;
use std::path::Path;
use std::process::ExitCode;

use clap::Parser;
use serde::Serialize;

use args::{Cli, Command, Common, CorrectionName, DepthName, DepthOpts, Derivatives, Format};
use fkwc_core::depth::{depth_table, DepthRow};
use fkwc_core::fda::{center_by_deepest, io};
use fkwc_core::fkwc::Correction;
use fkwc_core::power::{self, PowerSpec};
use fkwc_core::sim::{self, StudySpec};
use fkwc_core::{
    compute_depth, depth_ranks, fkwc_test, steel_mc, DepthKind, DepthSpec, Error, FunctionalDataset,
    TestConfig,
};

const EXIT_REJECT: u8 = 2;
const EXIT_INPUT: u8 = 1;
const EXIT_PARAM: u8 = 3;
const EXIT_NUMERIC: u8 = 4;

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Parameter(_) => EXIT_PARAM,
        Error::Numerical(_) => EXIT_NUMERIC,
        Error::Input { .. } | Error::Dimension { .. } | Error::Io(_) | Error::Json(_) => EXIT_INPUT,
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            // clap's own usage errors would exit 2, which means "rejected" here
            return if e.use_stderr() {
                ExitCode::from(EXIT_PARAM)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}

fn run(cli: Cli) -> Result<u8, Error> {
    match cli.command {
        Command::Test(a) => {
            init_threads(&a.common)?;
            let ds = load_dataset(&a.common, &a.depth)?;
            let mut config = TestConfig::new(depth_spec(&a.depth)).with_alpha(a.alpha);
            config.percentile_r = a.r;
            let result = fkwc_test(&ds, &config)?;
            warn(&result.warnings);
            let text = match a.format {
                Format::Json => json(&result)?,
                Format::Table => render::test_table(&result),
                Format::Csv => render::test_csv(&result),
            };
            emit(&a.common, &text)?;
            Ok(if result.rejected { EXIT_REJECT } else { 0 })
        }
        Command::Mc(a) => {
            init_threads(&a.common)?;
            let ds = load_dataset(&a.common, &a.depth)?;
            let correction = match a.correction {
                CorrectionName::Sidak => Correction::Sidak,
                CorrectionName::Bonferroni => Correction::Bonferroni,
                CorrectionName::Holm => Correction::Holm,
            };
            let result = steel_mc(&ds, &depth_spec(&a.depth), correction, a.comparisons)?;
            warn(&result.warnings);
            let text = match a.format {
                Format::Json => json(&result)?,
                Format::Table => render::mc_table(&result),
                Format::Csv => render::mc_csv(&result),
            };
            emit(&a.common, &text)?;
            Ok(0)
        }
        Command::Power(a) => {
            init_threads(&a.common)?;
            let mut spec: PowerSpec = read_json(&a.common.input)?;
            if let Some(s) = a.seed {
                spec.seed = s;
            }
            if let Some(alpha) = a.alpha {
                spec.alpha = alpha;
            }
            let report = power::evaluate(&spec)?;
            let text = match a.format {
                Format::Json => json(&report)?,
                Format::Table => render::power_table(&report),
                Format::Csv => render::power_csv(&report),
            };
            emit(&a.common, &text)?;
            Ok(0)
        }
        Command::Simulate(a) => {
            init_threads(&a.common)?;
            let mut spec: StudySpec = read_json(&a.common.input)?;
            if let Some(s) = a.seed {
                spec.seed = s;
            }
            if let Some(alpha) = a.alpha {
                spec.alpha = alpha;
            }
            if a.r.is_some() {
                spec.percentile_r = a.r;
            }
            let result = sim::run_study(&spec)?;
            let text = match a.format {
                Format::Json => json(&result)?,
                Format::Table => render::study_table(&result),
                Format::Csv => {
                    let mut buf = Vec::new();
                    sim::write_study_csv(&mut buf, &result)?;
                    String::from_utf8(buf).expect("csv output is utf-8")
                }
            };
            emit(&a.common, &text)?;
            Ok(0)
        }
        Command::Depth(a) => {
            init_threads(&a.common)?;
            let ds = load_dataset(&a.common, &a.depth)?;
            let spec = depth_spec(&a.depth);
            let depth = compute_depth(&ds, &spec)?;
            let ranks = depth_ranks(&ds, &spec)?;
            let rows = depth_table(&ds, &depth, &ranks);
            let text = match a.format {
                Format::Json => json(&DepthExport {
                    depth: spec.label(),
                    tie_breaks_applied: ranks.tie_breaks_applied,
                    rows: &rows,
                })?,
                Format::Table => render::depth_table(&rows),
                Format::Csv => {
                    let mut buf = Vec::new();
                    fkwc_core::depth::write_depth_csv(&mut buf, &rows)?;
                    String::from_utf8(buf).expect("csv output is utf-8")
                }
            };
            emit(&a.common, &text)?;
            Ok(0)
        }
    }
}

#[derive(Serialize)]
struct DepthExport<'a> {
    depth: String,
    tie_breaks_applied: usize,
    rows: &'a [DepthRow],
}

fn init_threads(c: &Common) -> Result<(), Error> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(c.threads)
        .build_global()
        .map_err(|e| Error::Parameter(format!("cannot start {} threads: {e}", c.threads)))
}

fn depth_spec(o: &DepthOpts) -> DepthSpec {
    let kind = match o.depth {
        DepthName::Ltr => DepthKind::Ltr,
        DepthName::Rp => DepthKind::Rp,
        DepthName::Mfhd => DepthKind::Mfhd,
        DepthName::Mbd => DepthKind::Mbd,
        DepthName::Spatial => DepthKind::Spatial,
        DepthName::Ksd => DepthKind::Ksd,
    };
    DepthSpec::new(kind)
        .with_derivatives(o.primed)
        .with_projections(o.projections)
        .with_seed(o.seed)
}

fn is_json(path: &Path) -> bool {
    path.extension().is_some_and(|e| e.eq_ignore_ascii_case("json"))
}

/// Names the file in "cannot open" errors; the library's messages do not know the path.
fn readable(path: &Path) -> Result<(), Error> {
    fs::metadata(path).map(|_| ()).map_err(|e| Error::Input {
        row: None,
        column: None,
        message: format!("cannot read {}: {e}", path.display()),
    })
}

fn load_dataset(c: &Common, o: &DepthOpts) -> Result<FunctionalDataset, Error> {
    readable(&c.input)?;
    let mut ds = if is_json(&c.input) {
        io::load_json(&c.input)?
    } else {
        io::load_csv(&c.input)?
    };
    if let Derivatives::File(path) = &o.derivatives {
        if !o.primed {
            eprintln!("warning: derivative file given without --primed; it is not used");
        }
        readable(path)?;
        ds = io::load_derivatives_csv(path, ds)?;
    }
    if o.center {
        ds = center_by_deepest(&ds, &depth_spec(o))?;
    }
    Ok(ds)
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T, Error> {
    readable(path)?;
    let text = fs::read_to_string(path)?;
    Ok(serde_json::from_str(&text)?)
}

fn json<T: Serialize>(value: &T) -> Result<String, Error> {
    Ok(serde_json::to_string_pretty(value)? + "\n")
}

fn warn(warnings: &[String]) {
    for w in warnings {
        eprintln!("warning: {w}");
    }
}

fn emit(c: &Common, text: &str) -> Result<(), Error> {
    match &c.output {
        Some(path) => fs::write(path, text)?,
        None => std::io::stdout().lock().write_all(text.as_bytes())?,
    }
    Ok(())
}
