//! Steady two-dimensional diffusion with a linear sink on the unit square:
//! `α φ_xx + β φ_yy - s φ = f`.
//!
//! The west (`x = 0`) and east (`x = 1`) edges carry prescribed values, corners
//! included. The south (`y = 0`) and north (`y = 1`) edges carry either values or
//! a normal derivative `φ_y`. Interior collocation uses the unmodified
//! second-order weights.

use serde::{Deserialize, Serialize};

use super::SolvePath;
use crate::centro::{classify_symmetry, split_centro, Symmetry};
use crate::error::{DqError, Result};
use crate::grid::Grid;
use crate::linalg::{lu_inverse, lu_solve, Matrix};
use crate::weights::{first_order_matrix, higher_order};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "type", content = "values")]
pub enum EdgeCondition {
    /// `φ` at the `nx - 2` edge nodes strictly between the corners.
    Dirichlet(Vec<f64>),
    /// `φ_y` at the same nodes.
    Neumann(Vec<f64>),
}

impl EdgeCondition {
    fn values(&self) -> &[f64] {
        match self {
            EdgeCondition::Dirichlet(v) | EdgeCondition::Neumann(v) => v,
        }
    }
}

#[derive(Debug, Clone)]
pub struct ConvDiffProblem {
    pub grid_x: Grid,
    pub grid_y: Grid,
    pub alpha: f64,
    pub beta: f64,
    pub sink: f64,
    /// `φ(0, y_j)` for every `j`.
    pub west: Vec<f64>,
    /// `φ(1, y_j)` for every `j`.
    pub east: Vec<f64>,
    pub south: EdgeCondition,
    pub north: EdgeCondition,
    /// Source `f` at every node, `i + j·nx`; empty means zero.
    pub source: Vec<f64>,
}

impl ConvDiffProblem {
    /// Inlet data on the west edge, zero on the east and north edges, no flux through the south edge.
    pub fn with_inlet(grid_x: Grid, grid_y: Grid, alpha: f64, beta: f64, sink: f64, inlet: Vec<f64>) -> Result<Self> {
        let (nx, ny) = (grid_x.n(), grid_y.n());
        let edge = nx.saturating_sub(2);
        let p = Self {
            grid_x,
            grid_y,
            alpha,
            beta,
            sink,
            west: inlet,
            east: vec![0.0; ny],
            south: EdgeCondition::Neumann(vec![0.0; edge]),
            north: EdgeCondition::Dirichlet(vec![0.0; edge]),
            source: Vec::new(),
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        let (nx, ny) = (self.grid_x.n(), self.grid_y.n());
        if nx < 3 || ny < 3 {
            return Err(DqError::InvalidArgument("diffusion grids need at least 3 nodes".into()));
        }
        if !self.grid_x.has_endpoints() || !self.grid_y.has_endpoints() {
            return Err(DqError::InvalidArgument("diffusion grids need nodes at 0 and 1".into()));
        }
        let check = |name: &str, got: usize, want: usize| {
            if got == want {
                Ok(())
            } else {
                Err(DqError::InvalidArgument(format!("{name} data has {got} values, expected {want}")))
            }
        };
        check("west", self.west.len(), ny)?;
        check("east", self.east.len(), ny)?;
        check("south", self.south.values().len(), nx - 2)?;
        check("north", self.north.values().len(), nx - 2)?;
        if !self.source.is_empty() {
            check("source", self.source.len(), nx * ny)?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ConvDiffSolution {
    /// `φ(x_i, y_j)` at row `i`, column `j`.
    #[serde(with = "crate::weights::rows_serde")]
    pub values: Matrix,
    /// Largest equation residual, boundary conditions included.
    pub residual: f64,
    pub path: SolvePath,
    pub interior_unknowns: usize,
    pub boundary_unknowns: usize,
}

#[derive(Clone, Copy, PartialEq)]
enum Role {
    Interior(usize),
    Boundary(usize),
    Known,
}

/// One linear equation over nodal values.
struct Row {
    terms: Vec<(usize, f64)>,
    rhs: f64,
}

struct System {
    nx: usize,
    ny: usize,
    roles: Vec<Role>,
    known: Vec<f64>,
    interior_rows: Vec<Row>,
    boundary_rows: Vec<Row>,
    n_interior: usize,
    n_boundary: usize,
}

impl System {
    fn build(p: &ConvDiffProblem) -> Result<Self> {
        p.validate()?;
        let (nx, ny) = (p.grid_x.n(), p.grid_y.n());
        let bx = higher_order(&p.grid_x, 2)?.values;
        let by = higher_order(&p.grid_y, 2)?.values;
        let ay = first_order_matrix(p.grid_y.nodes())?;
        let at = |i: usize, j: usize| i + j * nx;

        let mut roles = vec![Role::Known; nx * ny];
        let mut known = vec![0.0; nx * ny];
        let mut n_interior = 0;
        for j in 1..ny - 1 {
            for i in 1..nx - 1 {
                roles[at(i, j)] = Role::Interior(n_interior);
                n_interior += 1;
            }
        }
        for j in 0..ny {
            known[at(0, j)] = p.west[j];
            known[at(nx - 1, j)] = p.east[j];
        }
        let mut n_boundary = 0;
        for (j, edge) in [(0, &p.south), (ny - 1, &p.north)] {
            for i in 1..nx - 1 {
                match edge {
                    EdgeCondition::Dirichlet(v) => known[at(i, j)] = v[i - 1],
                    EdgeCondition::Neumann(_) => {
                        roles[at(i, j)] = Role::Boundary(n_boundary);
                        n_boundary += 1;
                    }
                }
            }
        }

        let mut interior_rows = Vec::with_capacity(n_interior);
        for j in 1..ny - 1 {
            for i in 1..nx - 1 {
                let mut terms = Vec::with_capacity(nx + ny);
                for k in 0..nx {
                    terms.push((at(k, j), p.alpha * bx[(i, k)]));
                }
                for l in 0..ny {
                    terms.push((at(i, l), p.beta * by[(j, l)]));
                }
                terms.push((at(i, j), -p.sink));
                let rhs = p.source.get(at(i, j)).copied().unwrap_or(0.0);
                interior_rows.push(Row { terms, rhs });
            }
        }
        let mut boundary_rows = Vec::with_capacity(n_boundary);
        for (j, edge) in [(0, &p.south), (ny - 1, &p.north)] {
            if let EdgeCondition::Neumann(g) = edge {
                for i in 1..nx - 1 {
                    let terms = (0..ny).map(|l| (at(i, l), ay[(j, l)])).collect();
                    boundary_rows.push(Row { terms, rhs: g[i - 1] });
                }
            }
        }
        Ok(Self {
            nx,
            ny,
            roles,
            known,
            interior_rows,
            boundary_rows,
            n_interior,
            n_boundary,
        })
    }

    /// Splits `rows` into coefficients on interior and boundary unknowns plus a
    /// right-hand side with the known values moved over.
    fn distribute(&self, rows: &[Row]) -> (Matrix, Matrix, Vec<f64>) {
        let mut ci = Matrix::zeros(rows.len(), self.n_interior);
        let mut cb = Matrix::zeros(rows.len(), self.n_boundary);
        let mut rhs = Vec::with_capacity(rows.len());
        for (r, row) in rows.iter().enumerate() {
            let mut b = row.rhs;
            for &(node, c) in &row.terms {
                match self.roles[node] {
                    Role::Interior(k) => ci[(r, k)] += c,
                    Role::Boundary(k) => cb[(r, k)] += c,
                    Role::Known => b -= c * self.known[node],
                }
            }
            rhs.push(b);
        }
        (ci, cb, rhs)
    }

    fn finish(&self, interior: &[f64], boundary: &[f64], path: SolvePath) -> ConvDiffSolution {
        let mut full = self.known.clone();
        for (node, role) in self.roles.iter().enumerate() {
            match *role {
                Role::Interior(k) => full[node] = interior[k],
                Role::Boundary(k) => full[node] = boundary[k],
                Role::Known => {}
            }
        }
        let residual = self
            .interior_rows
            .iter()
            .chain(&self.boundary_rows)
            .map(|row| {
                let lhs: f64 = row.terms.iter().map(|&(n, c)| c * full[n]).sum();
                (lhs - row.rhs).abs()
            })
            .fold(0.0, f64::max);
        let values = Matrix::from_fn(self.nx, self.ny, |i, j| full[i + j * self.nx]);
        ConvDiffSolution {
            values,
            residual,
            path,
            interior_unknowns: self.n_interior,
            boundary_unknowns: self.n_boundary,
        }
    }
}

/// Eliminates the interior through the inverse of the interior operator, which
/// is centrosymmetric on symmetric grids, then solves the boundary system.
pub fn convdiff_solve(p: &ConvDiffProblem) -> Result<ConvDiffSolution> {
    let sys = System::build(p)?;
    let (l_ii, l_ib, r_i) = sys.distribute(&sys.interior_rows);
    let (inv, path) = if classify_symmetry(&l_ii, 1e-10) == Symmetry::Centro {
        (split_centro(&l_ii)?.inverse()?.reassemble(), SolvePath::Factorized)
    } else {
        (lu_inverse(&l_ii)?, SolvePath::Dense)
    };
    let h = inv.matvec(&r_i);
    let (interior, boundary) = if sys.n_boundary == 0 {
        (h, Vec::new())
    } else {
        let g = inv.matmul(&l_ib);
        let (n_i, n_b, r_b) = sys.distribute(&sys.boundary_rows);
        let schur = n_b.sub(&n_i.matmul(&g));
        let ni_h = n_i.matvec(&h);
        let t: Vec<f64> = r_b.iter().zip(&ni_h).map(|(r, x)| r - x).collect();
        let phi_b = lu_solve(&schur, &t)?;
        let g_phi = g.matvec(&phi_b);
        (h.iter().zip(&g_phi).map(|(a, b)| a - b).collect(), phi_b)
    };
    Ok(sys.finish(&interior, &boundary, path))
}

/// One LU solve over every unknown at once.
pub fn convdiff_solve_dense(p: &ConvDiffProblem) -> Result<ConvDiffSolution> {
    let sys = System::build(p)?;
    let (ni, nb) = (sys.n_interior, sys.n_boundary);
    let (l_ii, l_ib, r_i) = sys.distribute(&sys.interior_rows);
    let (n_i, n_b, r_b) = sys.distribute(&sys.boundary_rows);
    let mut k = Matrix::zeros(ni + nb, ni + nb);
    k.set_block(0, 0, &l_ii);
    k.set_block(ni, 0, &n_i);
    if nb > 0 {
        k.set_block(0, ni, &l_ib);
        k.set_block(ni, ni, &n_b);
    }
    let rhs: Vec<f64> = r_i.into_iter().chain(r_b).collect();
    let x = lu_solve(&k, &rhs)?;
    Ok(sys.finish(&x[..ni], &x[ni..], SolvePath::Dense))
}
