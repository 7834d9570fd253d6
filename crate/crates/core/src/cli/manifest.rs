//! Figure manifest: frozen parameter sets for `kdvb figure <n>`.

use std::collections::BTreeMap;
use std::path::Path;

use serde::Deserialize;

use crate::error::{Error, Result};
use crate::params::PhysicalParams;
use crate::solutions::{Family, PhaseSweep};

/// The manifest shipped with the crate.
pub const DEFAULT_MANIFEST: &str = include_str!("../../figures.toml");

pub const MANIFEST_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Grid {
    pub min: f64,
    pub max: f64,
    pub points: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepRange {
    pub min: f64,
    pub max: f64,
    pub steps: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Coefficients {
    pub s: f64,
    pub mu: f64,
    pub alpha: f64,
    pub beta: f64,
    pub xi0: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FigureKind {
    Evaluate,
    Sweep,
    Physical,
}

/// One `[figure.<n>]` table as written in the file.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FigureEntry {
    pub description: String,
    pub kind: FigureKind,
    pub family: String,
    pub phase_a: Option<f64>,
    pub theta: Option<Grid>,
    pub a: Option<SweepRange>,
    pub physical: Option<Coefficients>,
    pub velocities: Option<Vec<f64>>,
    pub caption_velocities: Option<Vec<f64>>,
    pub x: Option<Grid>,
    pub t: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
struct ManifestFile {
    version: u32,
    figure: BTreeMap<String, FigureEntry>,
}

/// What a figure computes, with every parameter resolved.
#[derive(Debug, Clone, PartialEq)]
pub enum FigureJob {
    Evaluate { family: Family, phase_a: f64, theta: Grid },
    Sweep { family: Family, sweep: PhaseSweep, theta: Grid },
    Physical { family: Family, params: Vec<PhysicalParams>, x: Grid, t: f64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct FigureSpec {
    pub id: u32,
    pub description: String,
    pub job: FigureJob,
}

fn missing(id: u32, field: &str) -> Error {
    Error::InvalidInput(format!("figure {id}: missing '{field}'"))
}

impl FigureSpec {
    fn resolve(id: u32, entry: FigureEntry) -> Result<Self> {
        let family: Family = entry.family.parse()?;
        let job = match entry.kind {
            FigureKind::Evaluate => FigureJob::Evaluate {
                family,
                phase_a: entry.phase_a.unwrap_or(0.0),
                theta: entry.theta.ok_or_else(|| missing(id, "theta"))?,
            },
            FigureKind::Sweep => {
                let a = entry.a.ok_or_else(|| missing(id, "a"))?;
                FigureJob::Sweep {
                    family,
                    sweep: PhaseSweep::new(a.min, a.max, a.steps)?,
                    theta: entry.theta.ok_or_else(|| missing(id, "theta"))?,
                }
            }
            FigureKind::Physical => {
                let c = entry.physical.ok_or_else(|| missing(id, "physical"))?;
                let velocities = entry.velocities.ok_or_else(|| missing(id, "velocities"))?;
                let params = velocities
                    .iter()
                    .map(|&v| PhysicalParams::real(c.s, c.mu, c.alpha, c.beta, v).map(|p| p.with_phase(c.xi0.into())))
                    .collect::<Result<Vec<_>>>()?;
                FigureJob::Physical {
                    family,
                    params,
                    x: entry.x.ok_or_else(|| missing(id, "x"))?,
                    t: entry.t.unwrap_or(0.0),
                }
            }
        };
        Ok(Self { id, description: entry.description, job })
    }
}

/// Parsed and validated manifest.
#[derive(Debug, Clone, PartialEq)]
pub struct Manifest {
    pub figures: BTreeMap<u32, FigureSpec>,
}

impl Manifest {
    pub fn parse(text: &str) -> Result<Self> {
        let file: ManifestFile =
            toml::from_str(text).map_err(|e| Error::InvalidInput(format!("figure manifest: {e}")))?;
        if file.version != MANIFEST_VERSION {
            return Err(Error::InvalidInput(format!(
                "figure manifest version {} is not supported (expected {MANIFEST_VERSION})",
                file.version
            )));
        }
        let mut figures = BTreeMap::new();
        for (key, entry) in file.figure {
            let id: u32 =
                key.parse().map_err(|_| Error::InvalidInput(format!("figure id '{key}' is not a number")))?;
            figures.insert(id, FigureSpec::resolve(id, entry)?);
        }
        Ok(Self { figures })
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::InvalidInput(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn builtin() -> Self {
        Self::parse(DEFAULT_MANIFEST).expect("bundled manifest is valid")
    }

    pub fn figure(&self, id: u32) -> Result<&FigureSpec> {
        self.figures.get(&id).ok_or_else(|| {
            let ids: Vec<String> = self.figures.keys().map(u32::to_string).collect();
            Error::InvalidInput(format!("no figure {id} in manifest (available: {})", ids.join(", ")))
        })
    }
}
