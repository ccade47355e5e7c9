//! The `pcx` command line: argument handling, report documents and SVG output.
//!
//! Exit codes: 0 on success, 2 on usage errors, 3 when an input cannot be
//! parsed, 1 for any other failure. Verdicts are data inside the reports and
//! never change the exit code.

pub mod args;
pub mod config;
pub mod report;
pub mod svg;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::error::ErrorKind;
use clap::Parser;
use pcx_core::decomposition::{monotone_check, quotient_graph, strip_family};
use pcx_core::schoenflies::{complement_scan_compacta, scan_compacta};
use pcx_core::{
    common_refinement, complement_components, decompose_compactum, label_components, rasterize,
    refines, Connectivity, Error, GridCompactum, Level,
};
use rayon::prelude::*;
use serde_json::Value;

use args::{Cli, Command, CommonArgs, Format};
use config::{parse_levels, parse_strips, RunConfig, StripChoice};

pub use svg::render_svg;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("input error: {0}")]
    Parse(String),
    #[error("{0}")]
    Failed(String),
    /// Help or version text requested.
    #[error("{0}")]
    Info(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Info(_) => 0,
            CliError::Failed(_) => 1,
            CliError::Usage(_) => 2,
            CliError::Parse(_) => 3,
        }
    }

    /// Errors raised while reading an input file.
    pub fn from_input(e: Error) -> CliError {
        match e {
            Error::Parse(_) | Error::Io(_) => CliError::Parse(e.to_string()),
            other => other.into(),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::UnknownGenerator(_)
            | Error::InvalidParams(_)
            | Error::DepthExceeded { .. }
            | Error::BaseMismatch { .. }
            | Error::UnsupportedBase(_) => CliError::Usage(e.to_string()),
            Error::Parse(_) | Error::Io(_) => CliError::Parse(e.to_string()),
            other => CliError::Failed(other.to_string()),
        }
    }
}

/// Bytes produced by a command and where they should go.
#[derive(Debug, Clone, PartialEq)]
pub struct Output {
    pub bytes: Vec<u8>,
    /// `None` for standard output.
    pub path: Option<PathBuf>,
}

/// Runs a command line and returns its exit code, writing the result to the
/// requested file or standard output and errors to standard error.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    match execute(argv) {
        Ok(out) => {
            let written = match &out.path {
                Some(p) => {
                    std::fs::write(p, &out.bytes).map_err(|e| format!("{}: {e}", p.display()))
                }
                None => std::io::stdout()
                    .write_all(&out.bytes)
                    .map_err(|e| e.to_string()),
            };
            match written {
                Ok(()) => 0,
                Err(e) => {
                    eprintln!("pcx: cannot write output: {e}");
                    1
                }
            }
        }
        Err(CliError::Info(text)) => {
            print!("{text}");
            0
        }
        Err(e) => {
            let msg = e.to_string();
            // clap already prefixes its messages.
            if msg.starts_with("error:") {
                eprintln!("{msg}");
            } else {
                eprintln!("pcx: {msg}");
            }
            e.exit_code()
        }
    }
}

/// Parses and runs a command line without touching standard output or the
/// output file.
pub fn execute<I, T>(argv: I) -> Result<Output, CliError>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = Cli::try_parse_from(argv).map_err(|e| match e.kind() {
        ErrorKind::DisplayHelp
        | ErrorKind::DisplayVersion
        | ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand => {
            CliError::Info(e.render().to_string())
        }
        _ => CliError::Usage(e.render().to_string().trim_end().to_string()),
    })?;
    let (cfg, job) = plan(cli.command)?;
    let bytes = match cfg.jobs {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| CliError::Failed(e.to_string()))?
            .install(|| job.run(&cfg))?,
        None => job.run(&cfg)?,
    };
    Ok(Output {
        bytes,
        path: cfg.out.clone(),
    })
}

/// Work left after argument validation.
enum Job {
    Gen,
    Components,
    Scan { holes: Option<usize> },
    Decompose,
    Quotient { spur: usize },
    Compare { a: PathBuf, b: PathBuf },
    Render { plain: bool },
}

fn common(command: &'static str, a: &CommonArgs) -> Result<RunConfig, CliError> {
    let mut cfg = RunConfig::new(command, &a.source, &a.run)?.with_relation(&a.relation)?;
    cfg.level = a.level;
    cfg.format = a.format;
    Ok(cfg)
}

fn plan(command: Command) -> Result<(RunConfig, Job), CliError> {
    Ok(match command {
        Command::Gen(a) => {
            let mut cfg = RunConfig::new("gen", &a.source, &a.run)?;
            cfg.level = Some(a.level);
            (cfg, Job::Gen)
        }
        Command::Components(a) => (common("components", &a)?, Job::Components),
        Command::Scan(a) => {
            let mut cfg = RunConfig::new("scan", &a.source, &a.run)?.with_relation(&a.relation)?;
            cfg.levels = parse_levels(&a.levels)?;
            cfg.strips = parse_strips(&a.strips)?;
            cfg.format = a.format;
            if a.holes == Some(0) {
                return Err(CliError::Usage("--holes must be at least 1".into()));
            }
            (cfg, Job::Scan { holes: a.holes })
        }
        Command::Decompose(a) => (common("decompose", &a)?, Job::Decompose),
        Command::Quotient(a) => (
            common("quotient", &a.common)?,
            Job::Quotient { spur: a.spur },
        ),
        Command::Compare(a) => {
            if let Some(n) = a.run.jobs {
                if n == 0 {
                    return Err(CliError::Usage("--jobs must be at least 1".into()));
                }
            }
            let cfg = RunConfig {
                command: "compare",
                source: config::Source::Bitmap(a.a.clone()),
                level: None,
                levels: 0..=0,
                base: None,
                params: Default::default(),
                strips: StripChoice::Auto,
                jobs: a.run.jobs,
                format: a.format,
                out: a.run.out.clone(),
                max_level: None,
            };
            (cfg, Job::Compare { a: a.a, b: a.b })
        }
        Command::Render(a) => {
            let mut cfg = common("render", &a.common)?;
            cfg.format = Format::Svg;
            (cfg, Job::Render { plain: a.plain })
        }
    })
}

fn emit(cfg: &RunConfig, doc: Value) -> Result<Vec<u8>, CliError> {
    match cfg.format {
        Format::Json => Ok(report::to_bytes(&doc)),
        Format::Text => Ok(report::text_summary(&doc).into_bytes()),
        Format::Svg => Err(CliError::Usage(format!(
            "`{}` has no SVG output; use `render`",
            cfg.command
        ))),
    }
}

fn raster(cfg: &RunConfig) -> Result<(pcx_core::SetSpec, GridCompactum), CliError> {
    let (spec, level) = cfg.spec_and_level()?;
    let k = rasterize(&spec, level)?;
    Ok((spec, k))
}

impl Job {
    fn run(&self, cfg: &RunConfig) -> Result<Vec<u8>, CliError> {
        match self {
            Job::Gen => {
                let (_, k) = raster(cfg)?;
                Ok(pbm_bytes(&k))
            }
            Job::Components => {
                let (_, k) = raster(cfg)?;
                let fg = label_components(&k, Connectivity::Eight);
                let mut holes: Vec<f64> = if k.is_empty() {
                    Vec::new()
                } else {
                    let window = k.frame().expand(1).to_rect(k.level);
                    complement_components(&k, window)?
                        .components
                        .iter()
                        .filter(|c| !c.unbounded)
                        .map(|c| c.diameter)
                        .collect()
                };
                holes.sort_by(|a, b| b.total_cmp(a));
                emit(cfg, report::components(&k, &fg, &holes))
            }
            Job::Scan { holes } => {
                let (spec, _) = cfg.spec()?;
                for n in cfg.levels.clone() {
                    cfg.check_level(n)?;
                }
                let levels: Vec<Level> = cfg
                    .levels
                    .clone()
                    .map(|n| Level::new(n, spec.base))
                    .collect::<Result<_, _>>()?;
                let ks: Vec<GridCompactum> = levels
                    .par_iter()
                    .map(|&l| rasterize(&spec, l))
                    .collect::<Result<_, _>>()?;
                let strips = match &cfg.strips {
                    StripChoice::Given(s) => s.clone(),
                    StripChoice::Auto => strip_family(&ks[0], &cfg.params),
                };
                let mut rep = scan_compacta(&ks, &strips)?;
                if let Some(rank) = holes {
                    rep.complement = Some(complement_scan_compacta(&ks, *rank)?);
                }
                emit(cfg, report::scan(&spec.name, &rep))
            }
            Job::Decompose => {
                let (spec, k) = raster(cfg)?;
                let params = cfg.params_at(k.level.n);
                let d = decompose_compactum(&spec, &k, &params)?;
                match cfg.format {
                    Format::Svg => Ok(render_svg(&k, Some(&d))?.into_bytes()),
                    _ => emit(cfg, report::decomposition(&k, &d, &params)),
                }
            }
            Job::Quotient { spur } => {
                let (spec, k) = raster(cfg)?;
                let d = decompose_compactum(&spec, &k, &cfg.params_at(k.level.n))?;
                let g = quotient_graph(&k, &d)?;
                let mono = monotone_check(&k, &d)?;
                emit(cfg, report::quotient(&k, &g, &mono, *spur))
            }
            Job::Compare { a, b } => {
                let read = |p: &PathBuf| {
                    std::fs::read(p).map_err(|e| CliError::Parse(format!("{}: {e}", p.display())))
                };
                let da = report::load_decomposition(&read(a)?)?;
                let db = report::load_decomposition(&read(b)?)?;
                let ab = refines(&da, &db)?;
                let ba = refines(&db, &da)?;
                let meet = common_refinement(&da, &db)?;
                emit(cfg, report::compare(&da, &db, ab, ba, &meet))
            }
            Job::Render { plain } => {
                let (spec, k) = raster(cfg)?;
                let svg = if *plain {
                    render_svg(&k, None)?
                } else {
                    let d = decompose_compactum(&spec, &k, &cfg.params_at(k.level.n))?;
                    render_svg(&k, Some(&d))?
                };
                Ok(svg.into_bytes())
            }
        }
    }
}

/// Plain PBM (P1) of the raster's frame, top row first.
pub fn pbm_bytes(k: &GridCompactum) -> Vec<u8> {
    let f = k.frame();
    let mut out = String::new();
    if k.is_empty() {
        out.push_str("P1\n# empty\n1 1\n0\n");
        return out.into_bytes();
    }
    out.push_str(&format!(
        "P1\n# {} level {} origin {} {}\n{} {}\n",
        k.source,
        k.level,
        f.i0,
        f.j0,
        f.width(),
        f.height()
    ));
    for j in (f.j0..f.j1).rev() {
        let row: Vec<u8> = (f.i0..f.i1)
            .map(|i| {
                if k.contains(pcx_core::Cell::new(i, j)) {
                    b'1'
                } else {
                    b'0'
                }
            })
            .collect();
        for chunk in row.chunks(70) {
            out.push_str(std::str::from_utf8(chunk).unwrap());
            out.push('\n');
        }
    }
    out.into_bytes()
}
