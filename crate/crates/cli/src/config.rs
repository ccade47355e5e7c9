//! Validated run configuration assembled from the parsed arguments.

use std::ops::RangeInclusive;
use std::path::PathBuf;

use pcx_core::generators::native_base;
use pcx_core::{AnnulusFamily, GeneratorParams, Level, RelationParams, SetSpec, Strip};
use serde::Serialize;

use crate::args::{Family, Format, RelationArgs, RunArgs, SourceArgs};
use crate::CliError;

/// Environment variable capping the finest grid level any command may use.
pub const MAX_LEVEL_VAR: &str = "PCX_MAX_LEVEL";

#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Source {
    Generator(GeneratorParams),
    Bitmap(PathBuf),
}

#[derive(Debug, Clone, PartialEq)]
pub enum StripChoice {
    Auto,
    Given(Vec<Strip>),
}

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub command: &'static str,
    pub source: Source,
    pub level: Option<u32>,
    pub levels: RangeInclusive<u32>,
    pub base: Option<u32>,
    pub params: RelationParams,
    pub strips: StripChoice,
    pub jobs: Option<usize>,
    pub format: Format,
    pub out: Option<PathBuf>,
    /// Finest level allowed, from the environment.
    pub max_level: Option<u32>,
}

impl RunConfig {
    pub fn new(
        command: &'static str,
        source: &SourceArgs,
        run: &RunArgs,
    ) -> Result<RunConfig, CliError> {
        let source_cfg = match (&source.gen, &source.input) {
            (Some(name), None) => {
                let base = native_base(name).map_err(|e| CliError::Usage(e.to_string()))?;
                if let Some(b) = source.base {
                    if b != base {
                        return Err(CliError::Usage(format!(
                            "generator {name} is defined on base {base}, not {b}"
                        )));
                    }
                }
                let mut g = GeneratorParams::named(name);
                g.seed = source.seed;
                g.count = source.count;
                Source::Generator(g)
            }
            (None, Some(path)) => {
                if matches!(source.base, Some(b) if b != 2) {
                    return Err(CliError::Usage("bitmaps are read on base 2".into()));
                }
                Source::Bitmap(path.clone())
            }
            _ => {
                return Err(CliError::Usage(
                    "give exactly one of --gen and --input".into(),
                ))
            }
        };
        if run.jobs == Some(0) {
            return Err(CliError::Usage("--jobs must be at least 1".into()));
        }
        let max_level = match std::env::var(MAX_LEVEL_VAR) {
            Ok(v) => Some(v.trim().parse::<u32>().map_err(|_| {
                CliError::Usage(format!(
                    "{MAX_LEVEL_VAR} must be a non-negative integer, got {v:?}"
                ))
            })?),
            Err(_) => None,
        };
        Ok(RunConfig {
            command,
            source: source_cfg,
            level: None,
            levels: 2..=6,
            base: source.base,
            params: RelationParams::default(),
            strips: StripChoice::Auto,
            jobs: run.jobs,
            format: Format::Json,
            out: run.out.clone(),
            max_level,
        })
    }

    pub fn with_relation(mut self, r: &RelationArgs) -> Result<RunConfig, CliError> {
        self.params.n_min = r.nmin;
        self.params.delta_cells = r.delta;
        self.params.stride = r.stride;
        self.params.family = match r.family {
            Family::Strips => AnnulusFamily::Strips,
            Family::Annuli => AnnulusFamily::Annuli,
            Family::Both => AnnulusFamily::Both,
        };
        self.params
            .validate()
            .map_err(|e| CliError::Usage(e.to_string()))?;
        Ok(self)
    }

    /// Rejects levels above the environment cap.
    pub fn check_level(&self, n: u32) -> Result<(), CliError> {
        match self.max_level {
            Some(m) if n > m => Err(CliError::Usage(format!(
                "level {n} exceeds {MAX_LEVEL_VAR}={m}"
            ))),
            _ => Ok(()),
        }
    }

    /// Relation parameters for working level `n`, with refinement held
    /// under the environment cap.
    pub fn params_at(&self, n: u32) -> RelationParams {
        let mut p = self.params;
        if let Some(m) = self.max_level {
            p.refine_depth = p.refine_depth.min(m.saturating_sub(n));
        }
        p
    }

    pub fn spec(&self) -> Result<(SetSpec, Option<Level>), CliError> {
        match &self.source {
            Source::Generator(g) => {
                let spec = pcx_core::make_spec(g).map_err(|e| CliError::Usage(e.to_string()))?;
                Ok((spec, None))
            }
            Source::Bitmap(path) => {
                let p = pcx_core::from_pbm(path).map_err(CliError::from_input)?;
                Ok((p.spec, Some(p.level)))
            }
        }
    }

    /// The spec and the level to work at: `--level`, else the bitmap's own
    /// level, else 5.
    pub fn spec_and_level(&self) -> Result<(SetSpec, Level), CliError> {
        let (spec, native) = self.spec()?;
        let n = self.level.or(native.map(|l| l.n)).unwrap_or(5);
        self.check_level(n)?;
        let level = Level::new(n, spec.base).map_err(|e| CliError::Usage(e.to_string()))?;
        Ok((spec, level))
    }
}

/// Parses `a..b` (inclusive) or a single level.
pub fn parse_levels(s: &str) -> Result<RangeInclusive<u32>, CliError> {
    let bad = || CliError::Usage(format!("bad level range {s:?}; expected a..b"));
    let (a, b) = match s.split_once("..") {
        Some((a, b)) => (a, b.strip_prefix('=').unwrap_or(b)),
        None => (s, s),
    };
    let a: u32 = a.trim().parse().map_err(|_| bad())?;
    let b: u32 = b.trim().parse().map_err(|_| bad())?;
    if a > b {
        return Err(bad());
    }
    Ok(a..=b)
}

/// Parses `h:<c1>:<c2>`, `v:<c1>:<c2>` or `auto`.
pub fn parse_strips(items: &[String]) -> Result<StripChoice, CliError> {
    if items.iter().any(|s| s == "auto") {
        if items.len() > 1 {
            return Err(CliError::Usage(
                "`auto` cannot be combined with explicit strips".into(),
            ));
        }
        return Ok(StripChoice::Auto);
    }
    let strips = items
        .iter()
        .map(|s| {
            let bad = || {
                CliError::Usage(format!(
                    "bad strip {s:?}; expected h:<c1>:<c2> or v:<c1>:<c2>"
                ))
            };
            let parts: Vec<&str> = s.split(':').collect();
            if parts.len() != 3 {
                return Err(bad());
            }
            let c1: f64 = parts[1].parse().map_err(|_| bad())?;
            let c2: f64 = parts[2].parse().map_err(|_| bad())?;
            if !(c1.is_finite() && c2.is_finite() && c1 < c2) {
                return Err(bad());
            }
            match parts[0] {
                "h" => Ok(Strip::horizontal(c1, c2)),
                "v" => Ok(Strip::vertical(c1, c2)),
                _ => Err(bad()),
            }
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(StripChoice::Given(strips))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn level_ranges() {
        assert_eq!(parse_levels("2..6").unwrap(), 2..=6);
        assert_eq!(parse_levels("2..=6").unwrap(), 2..=6);
        assert_eq!(parse_levels("4").unwrap(), 4..=4);
        assert!(parse_levels("6..2").is_err());
        assert!(parse_levels("x").is_err());
    }

    #[test]
    fn strip_syntax() {
        let s = parse_strips(&["h:0.25:0.75".into(), "v:0:0.5".into()]).unwrap();
        assert_eq!(
            s,
            StripChoice::Given(vec![
                Strip::horizontal(0.25, 0.75),
                Strip::vertical(0.0, 0.5)
            ])
        );
        assert_eq!(parse_strips(&["auto".into()]).unwrap(), StripChoice::Auto);
        assert!(parse_strips(&["d:0:1".into()]).is_err());
        assert!(parse_strips(&["h:0.5:0.25".into()]).is_err());
        assert!(parse_strips(&["auto".into(), "h:0:1".into()]).is_err());
    }
}
