use super::operators::{EdgeSupport, ModifiedOperatorSet};
use super::{solve_frequencies, AssembledOperator, FrequencyResult, PathChoice};
use crate::error::{DqError, Result};
use crate::grid::Grid;
use crate::linalg::{kron, Matrix};

/// Isotropic rectangular plate with the same support on all four edges.
#[derive(Debug, Clone)]
pub struct PlateProblem {
    pub grid_x: Grid,
    pub grid_y: Grid,
    /// Aspect ratio `a / b`.
    pub alpha: f64,
    pub bc: EdgeSupport,
}

impl PlateProblem {
    pub fn new(grid_x: Grid, grid_y: Grid, alpha: f64, bc: EdgeSupport) -> Result<Self> {
        if !(alpha.is_finite() && alpha >= 0.0) {
            return Err(DqError::InvalidArgument(format!("aspect ratio must be >= 0, got {alpha}")));
        }
        Ok(Self {
            grid_x,
            grid_y,
            alpha,
            bc,
        })
    }
}

/// `I⊗D̄x + 2α²(B̄y⊗B̄x) + α⁴(D̄y⊗I)` acting on the column-stacked interior deflections.
pub fn plate_operator(p: &PlateProblem) -> Result<AssembledOperator> {
    let ox = ModifiedOperatorSet::new(&p.grid_x, p.bc)?;
    let oy = ModifiedOperatorSet::new(&p.grid_y, p.bc)?;
    Ok(AssembledOperator::new(rectangular(&ox, &oy, p.alpha)))
}

pub(super) fn rectangular(ox: &ModifiedOperatorSet, oy: &ModifiedOperatorSet, alpha: f64) -> Matrix {
    let a2 = alpha * alpha;
    kron(&Matrix::identity(oy.size()), &ox.dbar)
        .add(&kron(&oy.bbar, &ox.bbar).scale(2.0 * a2))
        .add(&kron(&oy.dbar, &Matrix::identity(ox.size())).scale(a2 * a2))
}

pub fn plate_frequencies(p: &PlateProblem, count: usize, path: PathChoice) -> Result<FrequencyResult> {
    solve_frequencies(&plate_operator(p)?, count, path)
}
