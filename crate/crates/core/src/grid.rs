//! Node sets on the unit interval.
//!
//! All grids live on `[0, 1]`. A grid is *symmetric* when
//! `x[n-1-i] = 1 - x[i]` for every `i`; every structured fast path downstream
//! requires that property.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{DqError, Result};

/// Tolerance used by the solvers when deciding whether a structured path applies.
pub const SYMMETRY_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GridKind {
    Uniform,
    /// Roots of `T_n` mapped onto `(0, 1)` by `x = (1 - r) / 2`. No node sits on the boundary.
    #[serde(alias = "chebyshev")]
    ChebyshevShifted,
    /// Both endpoints plus the shifted roots of `T_{n-2}` in between.
    ChebyshevWithEnds,
    Custom,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "GridRepr", into = "GridRepr")]
pub struct Grid {
    kind: GridKind,
    nodes: Vec<f64>,
}

#[derive(Serialize, Deserialize)]
struct GridRepr {
    kind: GridKind,
    n: usize,
    nodes: Vec<f64>,
}

impl From<Grid> for GridRepr {
    fn from(g: Grid) -> Self {
        GridRepr {
            kind: g.kind,
            n: g.nodes.len(),
            nodes: g.nodes,
        }
    }
}

impl TryFrom<GridRepr> for Grid {
    type Error = DqError;

    fn try_from(r: GridRepr) -> Result<Self> {
        if r.n != r.nodes.len() {
            return Err(DqError::InvalidArgument(format!(
                "grid declares n = {} but lists {} nodes",
                r.n,
                r.nodes.len()
            )));
        }
        let mut g = Grid::custom(r.nodes)?;
        g.kind = r.kind;
        Ok(g)
    }
}

fn check_count(n: usize) -> Result<()> {
    if n < 2 {
        return Err(DqError::InvalidArgument(format!("grid needs at least 2 nodes, got {n}")));
    }
    Ok(())
}

fn shifted_chebyshev_roots(n: usize) -> Vec<f64> {
    (1..=n)
        .map(|i| {
            let r = ((2 * i - 1) as f64 * PI / (2 * n) as f64).cos();
            (1.0 - r) / 2.0
        })
        .collect()
}

impl Grid {
    /// `x_i = i / (n - 1)`.
    pub fn uniform(n: usize) -> Result<Self> {
        check_count(n)?;
        let h = 1.0 / (n - 1) as f64;
        let mut nodes: Vec<f64> = (0..n).map(|i| i as f64 * h).collect();
        nodes[n - 1] = 1.0;
        Ok(Self {
            kind: GridKind::Uniform,
            nodes,
        })
    }

    /// Roots `cos((2i-1)π / 2n)` of the Chebyshev polynomial mapped onto `[0, 1]`.
    pub fn chebyshev(n: usize) -> Result<Self> {
        check_count(n)?;
        Ok(Self {
            kind: GridKind::ChebyshevShifted,
            nodes: shifted_chebyshev_roots(n),
        })
    }

    /// Boundary nodes `0` and `1` with the `n - 2` shifted Chebyshev roots between them.
    ///
    /// This is the node set the boundary-condition-folded operators need, since
    /// they drop the first and last node as boundary points.
    pub fn chebyshev_with_ends(n: usize) -> Result<Self> {
        check_count(n)?;
        let mut nodes = Vec::with_capacity(n);
        nodes.push(0.0);
        if n > 2 {
            nodes.extend(shifted_chebyshev_roots(n - 2));
        }
        nodes.push(1.0);
        Ok(Self {
            kind: GridKind::ChebyshevWithEnds,
            nodes,
        })
    }

    /// Arbitrary strictly increasing nodes inside `[0, 1]`.
    pub fn custom(nodes: Vec<f64>) -> Result<Self> {
        check_count(nodes.len())?;
        if let Some(bad) = nodes.iter().find(|x| !(0.0..=1.0).contains(*x)) {
            return Err(DqError::InvalidArgument(format!("node {bad} lies outside [0, 1]")));
        }
        for i in 1..nodes.len() {
            if nodes[i] == nodes[i - 1] {
                return Err(DqError::DegenerateGrid {
                    first: i - 1,
                    second: i,
                });
            }
            if nodes[i] < nodes[i - 1] {
                return Err(DqError::InvalidArgument("nodes must be strictly increasing".into()));
            }
        }
        Ok(Self {
            kind: GridKind::Custom,
            nodes,
        })
    }

    pub fn of_kind(kind: GridKind, n: usize) -> Result<Self> {
        match kind {
            GridKind::Uniform => Self::uniform(n),
            GridKind::ChebyshevShifted => Self::chebyshev(n),
            GridKind::ChebyshevWithEnds => Self::chebyshev_with_ends(n),
            GridKind::Custom => Err(DqError::InvalidArgument(
                "custom grids need explicit nodes".into(),
            )),
        }
    }

    pub fn kind(&self) -> GridKind {
        self.kind
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn n(&self) -> usize {
        self.nodes.len()
    }

    /// `max_i |x_i + x_{n-1-i} - 1|`.
    pub fn symmetry_defect(&self) -> f64 {
        let n = self.nodes.len();
        (0..n)
            .map(|i| (self.nodes[i] + self.nodes[n - 1 - i] - 1.0).abs())
            .fold(0.0, f64::max)
    }

    pub fn is_symmetric(&self) -> bool {
        check_symmetry(self, SYMMETRY_TOL)
    }

    pub fn has_endpoints(&self) -> bool {
        self.nodes[0] == 0.0 && self.nodes[self.nodes.len() - 1] == 1.0
    }
}

pub fn check_symmetry(g: &Grid, tol: f64) -> bool {
    g.symmetry_defect() <= tol
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn uniform_examples() {
        assert_eq!(Grid::uniform(2).unwrap().nodes(), &[0.0, 1.0]);
        assert_eq!(Grid::uniform(3).unwrap().nodes(), &[0.0, 0.5, 1.0]);
        assert_eq!(Grid::uniform(5).unwrap().nodes(), &[0.0, 0.25, 0.5, 0.75, 1.0]);
        assert!(matches!(Grid::uniform(1), Err(DqError::InvalidArgument(_))));
        assert!(matches!(Grid::chebyshev(0), Err(DqError::InvalidArgument(_))));
    }

    #[test]
    fn chebyshev_examples() {
        let g = Grid::chebyshev(2).unwrap();
        let half = std::f64::consts::FRAC_1_SQRT_2;
        assert_abs_diff_eq!(g.nodes()[0], (1.0 - half) / 2.0, epsilon = 1e-15);
        assert_abs_diff_eq!(g.nodes()[1], (1.0 + half) / 2.0, epsilon = 1e-15);
        assert_abs_diff_eq!(g.nodes()[0] + g.nodes()[1], 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(g.nodes()[0], 0.14645, epsilon = 1e-5);
        assert_abs_diff_eq!(Grid::chebyshev(3).unwrap().nodes()[1], 0.5, epsilon = 1e-16);
    }

    #[test]
    fn symmetry_checks() {
        assert!(check_symmetry(&Grid::uniform(7).unwrap(), 1e-12));
        assert!(check_symmetry(&Grid::chebyshev(8).unwrap(), 1e-12));
        assert!(!check_symmetry(&Grid::custom(vec![0.0, 0.3, 1.0]).unwrap(), 1e-12));
    }

    #[test]
    fn families_are_symmetric_distinct_and_ordered() {
        for n in 2..=64 {
            for g in [
                Grid::uniform(n).unwrap(),
                Grid::chebyshev(n).unwrap(),
                Grid::chebyshev_with_ends(n).unwrap(),
            ] {
                assert!(g.symmetry_defect() < 1e-14, "{:?} n={n}", g.kind());
                assert!(g.nodes().windows(2).all(|w| w[1] - w[0] > 0.0));
                assert!(g.nodes().iter().all(|x| (0.0..=1.0).contains(x)));
            }
            let c = Grid::chebyshev(n).unwrap();
            assert!(c.nodes().iter().all(|&x| x != 0.0 && x != 1.0));
            assert!(Grid::chebyshev_with_ends(n).unwrap().has_endpoints());
            assert!(Grid::uniform(n).unwrap().has_endpoints());
        }
    }

    #[test]
    fn custom_rejects_bad_nodes() {
        assert!(matches!(
            Grid::custom(vec![0.0, 0.5, 0.5, 1.0]),
            Err(DqError::DegenerateGrid { first: 1, second: 2 })
        ));
        assert!(Grid::custom(vec![0.0, 1.2]).is_err());
        assert!(Grid::custom(vec![0.5, 0.2]).is_err());
    }

    #[test]
    fn json_shape() {
        let g = Grid::uniform(3).unwrap();
        let v: serde_json::Value = serde_json::to_value(&g).unwrap();
        assert_eq!(v["kind"], "uniform");
        assert_eq!(v["n"], 3);
        assert_eq!(v["nodes"], serde_json::json!([0.0, 0.5, 1.0]));
        let back: Grid = serde_json::from_value(v).unwrap();
        assert_eq!(back, g);
        let bad = serde_json::json!({"kind": "custom", "n": 4, "nodes": [0.0, 1.0]});
        assert!(serde_json::from_value::<Grid>(bad).is_err());
    }
}
