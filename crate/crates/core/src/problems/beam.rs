use serde::{Deserialize, Serialize};

use super::operators::{EdgeSupport, ModifiedOperatorSet};
use super::{solve_frequencies, AssembledOperator, FrequencyResult, PathChoice};
use crate::error::{DqError, Result};
use crate::grid::Grid;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BeamBc {
    #[default]
    SimplySupported,
    ClampedClamped,
}

impl BeamBc {
    pub fn support(self) -> EdgeSupport {
        match self {
            BeamBc::SimplySupported => EdgeSupport::SimplySupported,
            BeamBc::ClampedClamped => EdgeSupport::Clamped,
        }
    }
}

/// `w'''' = ω̄² w` on `[0, 1]`.
#[derive(Debug, Clone)]
pub struct BeamProblem {
    pub grid: Grid,
    pub bc: BeamBc,
}

impl BeamProblem {
    pub fn new(grid: Grid, bc: BeamBc) -> Result<Self> {
        if grid.n() < 6 {
            return Err(DqError::InvalidArgument(format!("beam needs n >= 6, got {}", grid.n())));
        }
        Ok(Self { grid, bc })
    }
}

/// The fourth-order operator on the unknown nodes (`n - 2` of them when simply
/// supported, `n - 4` when clamped).
pub fn beam_operator(p: &BeamProblem) -> Result<AssembledOperator> {
    let ops = ModifiedOperatorSet::new(&p.grid, p.bc.support())?;
    Ok(AssembledOperator::new(ops.dbar))
}

pub fn beam_frequencies(p: &BeamProblem, count: usize, path: PathChoice) -> Result<FrequencyResult> {
    solve_frequencies(&beam_operator(p)?, count, path)
}
