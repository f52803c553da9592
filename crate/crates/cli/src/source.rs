//! `--density` sources: `beta:v,w` or `file:PATH:FORMAT` with FORMAT one of
//! `scores`, `exam`, `cdf`. Several sources may be joined with `;`.

use std::fs::File;
use std::path::{Path, PathBuf};

use sil_core::population::io::{read_cdf_table, read_exam, read_scores};
use sil_core::population::{
    average_rows, density_from_cdf_table, fit_beta, normalize_scores, observed_range, FitMethod,
};
use sil_core::Density;

use crate::Failure;

/// Samples are pulled this far inside `(0, 1)` before fitting, since the
/// likelihood is undefined at the endpoints.
pub const CLAMP: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Scores,
    Exam,
    Cdf,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Source {
    Beta { v: f64, w: f64 },
    File { path: PathBuf, format: Format },
}

/// How raw file values map onto `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Scale {
    /// Fixed bounds; exam files default to `0..100`, others to `0..1`.
    Fixed(Option<(f64, f64)>),
    /// Observed minimum and maximum.
    Observed,
}

impl Source {
    pub fn parse(spec: &str) -> Result<Self, Failure> {
        let spec = spec.trim();
        if let Some(params) = spec.strip_prefix("beta:") {
            let (v, w) = params
                .split_once(',')
                .ok_or_else(|| Failure::flag(format!("expected beta:v,w, got {spec:?}")))?;
            let parse = |s: &str| {
                s.trim().parse::<f64>().map_err(|_| Failure::flag(format!("bad Beta shape {s:?} in {spec:?}")))
            };
            return Ok(Source::Beta { v: parse(v)?, w: parse(w)? });
        }
        if let Some(rest) = spec.strip_prefix("file:") {
            let (path, format) = rest
                .rsplit_once(':')
                .ok_or_else(|| Failure::flag(format!("expected file:PATH:FORMAT, got {spec:?}")))?;
            let format = match format {
                "scores" => Format::Scores,
                "exam" => Format::Exam,
                "cdf" => Format::Cdf,
                other => return Err(Failure::flag(format!("unknown file format {other:?} (scores, exam, cdf)"))),
            };
            return Ok(Source::File { path: PathBuf::from(path), format });
        }
        Err(Failure::flag(format!("expected beta:v,w or file:PATH:FORMAT, got {spec:?}")))
    }

    pub fn parse_list(spec: &str) -> Result<Vec<Self>, Failure> {
        spec.split(';').filter(|s| !s.trim().is_empty()).map(Source::parse).collect()
    }

    /// Name used in CSV rows.
    pub fn label(&self) -> String {
        match self {
            Source::Beta { v, w } => format!("beta:{v},{w}"),
            Source::File { path, format } => {
                let f = match format {
                    Format::Scores => "scores",
                    Format::Exam => "exam",
                    Format::Cdf => "cdf",
                };
                format!("file:{}:{f}", path.display())
            }
        }
    }

    /// Resolves to a density: Beta sources directly, score files by fitting,
    /// CDF tables as empirical densities.
    pub fn density(&self, scale: Scale, method: FitMethod) -> Result<Density, Failure> {
        match self {
            Source::Beta { v, w } => Density::beta(*v, *w).map_err(Failure::grid),
            Source::File { path, format: Format::Cdf } => {
                let table = read_cdf_table(open(path)?).map_err(|e| Failure::input(path, e))?;
                let scores: Vec<f64> = table.iter().map(|p| p.0).collect();
                let (lo, hi) = bounds(&scores, scale, (0.0, 1.0))?;
                let scaled = normalize_scores(&scores, lo, hi).map_err(|e| Failure::input(path, e))?;
                let points: Vec<(f64, f64)> = scaled.into_iter().zip(table.iter().map(|p| p.1)).collect();
                density_from_cdf_table(&points).map_err(|e| Failure::input(path, e))
            }
            Source::File { path, .. } => {
                let samples = self.samples(scale)?;
                fit_beta(&samples, method).map_err(|e| Failure::input(path, e))
            }
        }
    }

    /// Normalized samples from a scores or exam file, clamped into `(0, 1)`.
    pub fn samples(&self, scale: Scale) -> Result<Vec<f64>, Failure> {
        let Source::File { path, format } = self else {
            return Err(Failure::flag("only file sources carry samples".into()));
        };
        let (raw, default) = match format {
            Format::Scores => (read_scores(open(path)?).map_err(|e| Failure::input(path, e))?, (0.0, 1.0)),
            Format::Exam => {
                let rows = read_exam(open(path)?).map_err(|e| Failure::input(path, e))?;
                (average_rows(&rows), (0.0, 100.0))
            }
            Format::Cdf => return Err(Failure::flag("a cdf table has no samples to fit".into())),
        };
        let (lo, hi) = bounds(&raw, scale, default)?;
        let scaled = normalize_scores(&raw, lo, hi).map_err(|e| Failure::input(path, e))?;
        Ok(scaled.into_iter().map(|x| x.clamp(CLAMP, 1.0 - CLAMP)).collect())
    }
}

fn open(path: &Path) -> Result<File, Failure> {
    File::open(path).map_err(|e| Failure::input(path, e))
}

fn bounds(values: &[f64], scale: Scale, default: (f64, f64)) -> Result<(f64, f64), Failure> {
    match scale {
        Scale::Fixed(range) => Ok(range.unwrap_or(default)),
        Scale::Observed => observed_range(values)
            .filter(|(lo, hi)| lo < hi)
            .ok_or_else(|| Failure::flag("observed range is degenerate".into())),
    }
}
