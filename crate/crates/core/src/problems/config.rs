//! JSON case descriptions for batch solves.

use serde::{Deserialize, Serialize};

use super::convdiff::{convdiff_solve, ConvDiffProblem, ConvDiffSolution, EdgeCondition};
use super::operators::EdgeSupport;
use super::{
    beam_frequencies, plate_frequencies, problem_grid, skew_plate_frequencies, BeamBc, BeamProblem, FrequencyResult,
    PathChoice, PlateProblem, SkewPlateProblem,
};
use crate::error::{DqError, Result};
use crate::grid::{Grid, GridKind};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub kind: GridKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub nodes: Option<Vec<f64>>,
}

impl GridSpec {
    pub fn new(kind: GridKind, n: usize) -> Self {
        Self {
            kind,
            n: Some(n),
            nodes: None,
        }
    }

    pub fn build(&self) -> Result<Grid> {
        match (self.kind, &self.nodes, self.n) {
            (GridKind::Custom, Some(nodes), _) => Grid::custom(nodes.clone()),
            (GridKind::Custom, None, _) => Err(DqError::InvalidArgument("custom grid needs \"nodes\"".into())),
            (kind, _, Some(n)) => problem_grid(kind, n),
            (_, _, None) => Err(DqError::InvalidArgument("grid needs \"n\"".into())),
        }
    }
}

fn clamped() -> EdgeSupport {
    EdgeSupport::Clamped
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "problem", rename_all = "kebab-case")]
pub enum ProblemSpec {
    Beam {
        grid: GridSpec,
        #[serde(default)]
        bc: BeamBc,
    },
    Plate {
        grid: GridSpec,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        grid_y: Option<GridSpec>,
        alpha: f64,
        #[serde(default)]
        bc: EdgeSupport,
    },
    SkewPlate {
        grid: GridSpec,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        grid_y: Option<GridSpec>,
        /// Degrees.
        theta: f64,
        beta: f64,
        #[serde(default = "clamped")]
        bc: EdgeSupport,
    },
    ConvDiff {
        grid: GridSpec,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        grid_y: Option<GridSpec>,
        alpha: f64,
        beta: f64,
        sink: f64,
        /// West-edge values, one per `y` node.
        inlet: Vec<f64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        east: Option<Vec<f64>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        south: Option<EdgeCondition>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        north: Option<EdgeCondition>,
    },
}

fn default_count() -> usize {
    2
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CaseSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(flatten)]
    pub problem: ProblemSpec,
    #[serde(default = "default_count")]
    pub count: usize,
    #[serde(default)]
    pub path: PathChoice,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reference: Option<Vec<f64>>,
}

#[derive(Debug, Clone, Serialize)]
#[serde(tag = "output", rename_all = "kebab-case")]
pub enum CaseOutput {
    Frequencies {
        #[serde(skip_serializing_if = "Option::is_none")]
        name: Option<String>,
        #[serde(flatten)]
        result: FrequencyResult,
        #[serde(skip_serializing_if = "Option::is_none")]
        relative_errors: Option<Vec<Option<f64>>>,
    },
    Field {
        #[serde(skip_serializing_if = "Option::is_none")]
        name: Option<String>,
        #[serde(flatten)]
        solution: ConvDiffSolution,
    },
}

#[derive(Deserialize)]
#[serde(untagged)]
enum ConfigFile {
    Batch { cases: Vec<CaseSpec> },
    Single(CaseSpec),
}

/// Accepts a single case object or `{"cases": [...]}`.
pub fn parse_cases(text: &str) -> Result<Vec<CaseSpec>> {
    let file: ConfigFile = serde_json::from_str(text).map_err(|e| DqError::InvalidArgument(format!("bad config: {e}")))?;
    Ok(match file {
        ConfigFile::Batch { cases } => cases,
        ConfigFile::Single(c) => vec![c],
    })
}

fn pair(grid: &GridSpec, grid_y: &Option<GridSpec>) -> Result<(Grid, Grid)> {
    let gx = grid.build()?;
    let gy = match grid_y {
        Some(g) => g.build()?,
        None => gx.clone(),
    };
    Ok((gx, gy))
}

impl CaseSpec {
    pub fn run(&self) -> Result<CaseOutput> {
        let freq = |result: FrequencyResult| CaseOutput::Frequencies {
            name: self.name.clone(),
            relative_errors: self.reference.as_deref().map(|r| result.relative_errors(r)),
            result,
        };
        match &self.problem {
            ProblemSpec::Beam { grid, bc } => {
                let p = BeamProblem::new(grid.build()?, *bc)?;
                Ok(freq(beam_frequencies(&p, self.count, self.path)?))
            }
            ProblemSpec::Plate { grid, grid_y, alpha, bc } => {
                let (gx, gy) = pair(grid, grid_y)?;
                let p = PlateProblem::new(gx, gy, *alpha, *bc)?;
                Ok(freq(plate_frequencies(&p, self.count, self.path)?))
            }
            ProblemSpec::SkewPlate {
                grid,
                grid_y,
                theta,
                beta,
                bc,
            } => {
                let (gx, gy) = pair(grid, grid_y)?;
                let p = SkewPlateProblem::new(gx, gy, *theta, *beta, *bc)?;
                Ok(freq(skew_plate_frequencies(&p, self.count, self.path)?))
            }
            ProblemSpec::ConvDiff {
                grid,
                grid_y,
                alpha,
                beta,
                sink,
                inlet,
                east,
                south,
                north,
            } => {
                let (gx, gy) = pair(grid, grid_y)?;
                let mut p = ConvDiffProblem::with_inlet(gx, gy, *alpha, *beta, *sink, inlet.clone())?;
                if let Some(e) = east {
                    p.east = e.clone();
                }
                if let Some(s) = south {
                    p.south = s.clone();
                }
                if let Some(n) = north {
                    p.north = n.clone();
                }
                Ok(CaseOutput::Field {
                    name: self.name.clone(),
                    solution: convdiff_solve(&p)?,
                })
            }
        }
    }
}
