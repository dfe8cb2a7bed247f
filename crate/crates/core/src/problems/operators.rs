//! Weighting matrices with boundary conditions folded in.
//!
//! Each set acts on the unknown nodal deflections of one coordinate direction
//! and returns derivatives at the collocation nodes (the same node indices).

use serde::{Deserialize, Serialize};

use crate::error::{DqError, Result};
use crate::grid::Grid;
use crate::linalg::{Lu, Matrix};
use crate::weights::{first_order_matrix, higher_order};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EdgeSupport {
    /// `w = 0`, `w'' = 0`
    #[default]
    SimplySupported,
    /// `w = 0`, `w' = 0`
    Clamped,
}

/// Boundary-condition-modified DQ operators of orders 1 to 4.
#[derive(Debug, Clone)]
pub struct ModifiedOperatorSet {
    pub abar: Matrix,
    pub bbar: Matrix,
    pub cbar: Matrix,
    pub dbar: Matrix,
    /// Maps the unknowns to all `n` nodal values (`n × k`).
    pub expand: Matrix,
    /// Node indices of the unknowns (also the collocation rows).
    pub unknowns: Vec<usize>,
    pub support: EdgeSupport,
}

impl ModifiedOperatorSet {
    pub fn new(g: &Grid, support: EdgeSupport) -> Result<Self> {
        if !g.has_endpoints() {
            return Err(DqError::InvalidArgument(format!(
                "boundary-condition operators need nodes at 0 and 1 ({:?} grid has none)",
                g.kind()
            )));
        }
        match support {
            EdgeSupport::SimplySupported => Self::simply_supported(g),
            EdgeSupport::Clamped => Self::clamped(g),
        }
    }

    /// `w = 0` drops the boundary columns; `w'' = 0` drops them again when the
    /// second derivative is composed, so `D̄ = B_int·B_int`.
    fn simply_supported(g: &Grid) -> Result<Self> {
        let n = g.n();
        if n < 3 {
            return Err(DqError::InvalidArgument("simply supported edges need n >= 3".into()));
        }
        let a = first_order_matrix(g.nodes())?;
        let b = higher_order(g, 2)?.values;
        let unknowns: Vec<usize> = (1..n - 1).collect();
        let a_int = a.select(&unknowns, &unknowns);
        let b_int = b.select(&unknowns, &unknowns);
        Ok(Self {
            cbar: a_int.matmul(&b_int),
            dbar: b_int.matmul(&b_int),
            abar: a_int,
            bbar: b_int,
            expand: injection(n, &unknowns),
            unknowns,
            support: EdgeSupport::SimplySupported,
        })
    }

    /// `w = 0` at both ends, then the two slope conditions `Σ_j A_0j w_j = 0`,
    /// `Σ_j A_{n-1,j} w_j = 0` eliminate the nodes next to the boundary. The
    /// governing equation is collocated at the remaining `n - 4` nodes.
    fn clamped(g: &Grid) -> Result<Self> {
        let n = g.n();
        if n < 6 {
            return Err(DqError::InvalidArgument("clamped edges need n >= 6".into()));
        }
        let a = first_order_matrix(g.nodes())?;
        let unknowns: Vec<usize> = (2..n - 2).collect();
        let eliminated = [1, n - 2];
        let bc_rows = [0, n - 1];
        let m = a.select(&bc_rows, &eliminated);
        let r = a.select(&bc_rows, &unknowns);
        let lu = Lu::factor(&m);
        let mut expand = injection(n, &unknowns);
        for col in 0..unknowns.len() {
            let rhs = [-r[(0, col)], -r[(1, col)]];
            let w = lu.solve(&rhs).map_err(|_| DqError::Singular {
                factor: "clamped slope conditions".into(),
                pivot: 1,
            })?;
            expand[(eliminated[0], col)] = w[0];
            expand[(eliminated[1], col)] = w[1];
        }
        let collocate = |w: &Matrix| {
            let full = w.matmul(&expand);
            full.select(&unknowns, &(0..unknowns.len()).collect::<Vec<_>>())
        };
        let abar = collocate(&a);
        let bbar = collocate(&higher_order(g, 2)?.values);
        let cbar = collocate(&higher_order(g, 3)?.values);
        let dbar = collocate(&higher_order(g, 4)?.values);
        Ok(Self {
            abar,
            bbar,
            cbar,
            dbar,
            expand,
            unknowns,
            support: EdgeSupport::Clamped,
        })
    }

    pub fn size(&self) -> usize {
        self.unknowns.len()
    }
}

fn injection(n: usize, unknowns: &[usize]) -> Matrix {
    let mut e = Matrix::zeros(n, unknowns.len());
    for (c, &k) in unknowns.iter().enumerate() {
        e[(k, c)] = 1.0;
    }
    e
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::centro::{classify_symmetry, Symmetry};

    #[test]
    fn operator_classes_on_symmetric_grids() {
        for g in [Grid::uniform(8).unwrap(), Grid::chebyshev_with_ends(9).unwrap()] {
            for support in [EdgeSupport::SimplySupported, EdgeSupport::Clamped] {
                let ops = ModifiedOperatorSet::new(&g, support).unwrap();
                assert_eq!(classify_symmetry(&ops.abar, 1e-10), Symmetry::SkewCentro);
                assert_eq!(classify_symmetry(&ops.bbar, 1e-10), Symmetry::Centro);
                assert_eq!(classify_symmetry(&ops.cbar, 1e-10), Symmetry::SkewCentro);
                assert_eq!(classify_symmetry(&ops.dbar, 1e-10), Symmetry::Centro);
            }
        }
    }

    #[test]
    fn clamped_expansion_satisfies_boundary_conditions() {
        let g = Grid::chebyshev_with_ends(10).unwrap();
        let ops = ModifiedOperatorSet::new(&g, EdgeSupport::Clamped).unwrap();
        let a = first_order_matrix(g.nodes()).unwrap();
        let slopes = a.matmul(&ops.expand);
        for col in 0..ops.size() {
            assert_eq!(ops.expand[(0, col)], 0.0);
            assert_eq!(ops.expand[(9, col)], 0.0);
            assert!(slopes[(0, col)].abs() < 1e-10);
            assert!(slopes[(9, col)].abs() < 1e-10);
        }
    }

    #[test]
    fn grids_without_endpoints_are_rejected() {
        let g = Grid::chebyshev(8).unwrap();
        assert!(ModifiedOperatorSet::new(&g, EdgeSupport::SimplySupported).is_err());
    }
}
