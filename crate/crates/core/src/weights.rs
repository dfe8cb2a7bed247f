//! DQ weighting-coefficient matrices.
//!
//! Row `i` of the order-`m` matrix holds the weights `w_ij` with
//! `f^(m)(x_i) ≈ Σ_j w_ij f(x_j)`, exact for polynomials of degree `< n`.
//! Off-diagonal first-order weights are the Lagrange basis derivatives; higher
//! orders follow the Shu recursion; every diagonal is the negative row sum.

use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::centro::Symmetry;
use crate::error::{DqError, Result};
use crate::grid::{Grid, GridKind};
use crate::linalg::Matrix;

pub use crate::centro::classify_symmetry;

/// Relative tolerance used when labelling a freshly computed weight matrix.
pub const CLASSIFY_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeightMatrix {
    pub order: usize,
    pub n: usize,
    pub symmetry: Symmetry,
    pub grid_kind: GridKind,
    #[serde(with = "rows_serde")]
    pub values: Matrix,
}

pub mod rows_serde {
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    use crate::linalg::Matrix;

    pub fn serialize<S: Serializer>(m: &Matrix, s: S) -> Result<S::Ok, S::Error> {
        m.to_rows().serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Matrix, D::Error> {
        let rows: Vec<Vec<f64>> = Vec::deserialize(d)?;
        if rows.is_empty() || rows.iter().any(|r| r.len() != rows[0].len()) {
            return Err(serde::de::Error::custom("matrix rows must be non-empty and of equal length"));
        }
        Ok(Matrix::from_rows(&rows))
    }
}

impl WeightMatrix {
    fn new(order: usize, grid: &Grid, values: Matrix) -> Self {
        let symmetry = classify_symmetry(&values, CLASSIFY_TOL);
        Self {
            order,
            n: values.rows(),
            symmetry,
            grid_kind: grid.kind(),
            values,
        }
    }

    /// `result_i = Σ_j w_ij · samples_j`.
    pub fn apply(&self, samples: &[f64]) -> Result<Vec<f64>> {
        if samples.len() != self.n {
            return Err(DqError::InvalidArgument(format!(
                "expected {} samples, got {}",
                self.n,
                samples.len()
            )));
        }
        Ok(self.values.matvec(samples))
    }

    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        for i in 0..self.n {
            w.write_record(self.values.row(i).iter().map(|v| format!("{v:.17e}")))
                .map_err(|e| DqError::InvalidArgument(e.to_string()))?;
        }
        w.flush().map_err(|e| DqError::InvalidArgument(e.to_string()))?;
        Ok(())
    }
}

/// Free-function form of [`WeightMatrix::apply`].
pub fn apply(w: &WeightMatrix, samples: &[f64]) -> Result<Vec<f64>> {
    w.apply(samples)
}

fn fill_diagonal_by_row_sum(m: &mut Matrix) {
    for i in 0..m.rows() {
        let s: f64 = (0..m.cols()).filter(|&j| j != i).map(|j| m[(i, j)]).sum();
        m[(i, i)] = -s;
    }
}

/// First-order weights for raw nodes; fails on coincident nodes.
pub fn first_order_matrix(x: &[f64]) -> Result<Matrix> {
    let n = x.len();
    for i in 0..n {
        for j in i + 1..n {
            if x[i] == x[j] {
                return Err(DqError::DegenerateGrid { first: i, second: j });
            }
        }
    }
    let mut a = Matrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            let prod: f64 = (0..n)
                .filter(|&k| k != i && k != j)
                .map(|k| (x[i] - x[k]) / (x[j] - x[k]))
                .product();
            a[(i, j)] = prod / (x[j] - x[i]);
        }
    }
    fill_diagonal_by_row_sum(&mut a);
    Ok(a)
}

pub fn first_order(g: &Grid) -> Result<WeightMatrix> {
    Ok(WeightMatrix::new(1, g, first_order_matrix(g.nodes())?))
}

/// Weights for derivative order `m` (`1 ≤ m < n`).
pub fn higher_order(g: &Grid, m: usize) -> Result<WeightMatrix> {
    let n = g.n();
    if m == 0 {
        return Err(DqError::InvalidArgument("derivative order must be at least 1".into()));
    }
    if m >= n {
        return Err(DqError::InsufficientNodes { order: m, n });
    }
    let x = g.nodes();
    let a = first_order_matrix(x)?;
    let mut w = a.clone();
    for order in 2..=m {
        let k = order as f64;
        let mut next = Matrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    next[(i, j)] = k * (a[(i, j)] * w[(i, i)] - w[(i, j)] / (x[i] - x[j]));
                }
            }
        }
        fill_diagonal_by_row_sum(&mut next);
        w = next;
    }
    Ok(WeightMatrix::new(m, g, w))
}

/// All orders `1..=m_max` in one pass.
pub fn orders_up_to(g: &Grid, m_max: usize) -> Result<Vec<WeightMatrix>> {
    (1..=m_max).map(|m| higher_order(g, m)).collect()
}

/// Closed-form first-order weights for [`GridKind::ChebyshevShifted`] grids.
///
/// Off-diagonals come from `(-1)^(i-j) / (r_i - r_j) · sqrt((1 - r_j²)/(1 - r_i²))`
/// on the raw roots `r = 1 - 2x`, scaled by `dr/dx = -2`. Diagonals are
/// recomputed as negative row sums. A cross-check for [`first_order`], not a
/// production path.
pub fn chebyshev_closed_form(g: &Grid) -> Result<WeightMatrix> {
    if g.kind() != GridKind::ChebyshevShifted {
        return Err(DqError::InvalidArgument(format!(
            "closed-form Chebyshev weights need a chebyshev-shifted grid, got {:?}",
            g.kind()
        )));
    }
    let r: Vec<f64> = g.nodes().iter().map(|x| 1.0 - 2.0 * x).collect();
    let n = r.len();
    let mut w = Matrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            let sign = if (i + j) % 2 == 0 { 1.0 } else { -1.0 };
            let raw = sign / (r[i] - r[j]) * ((1.0 - r[j] * r[j]) / (1.0 - r[i] * r[i])).sqrt();
            w[(i, j)] = -2.0 * raw;
        }
    }
    fill_diagonal_by_row_sum(&mut w);
    Ok(WeightMatrix::new(1, g, w))
}

/// The printed closed-form diagonal `r_i / (1 - r_i²)`, mapped to `[0, 1]`.
///
/// It is exactly twice the true diagonal; kept for diagnostics only.
pub fn chebyshev_printed_diagonal(g: &Grid) -> Result<Vec<f64>> {
    if g.kind() != GridKind::ChebyshevShifted {
        return Err(DqError::InvalidArgument("need a chebyshev-shifted grid".into()));
    }
    Ok(g.nodes()
        .iter()
        .map(|x| {
            let r = 1.0 - 2.0 * x;
            -2.0 * r / (1.0 - r * r)
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn assert_matrix_close(a: &Matrix, b: &Matrix, tol: f64) {
        let d = a.max_abs_diff(b);
        assert!(d <= tol, "max diff {d}\n{a:?}\n{b:?}");
    }

    #[test]
    fn two_point_first_order() {
        let w = first_order(&Grid::uniform(2).unwrap()).unwrap();
        assert_matrix_close(&w.values, &Matrix::from_rows(&[[-1.0, 1.0], [-1.0, 1.0]]), 1e-15);
    }

    #[test]
    fn three_point_first_order_matches_lagrange_derivatives() {
        // l0 = 2(x-1/2)(x-1), l1 = -4x(x-1), l2 = 2x(x-1/2); derivatives at 0, 1/2, 1.
        let want = Matrix::from_rows(&[[-3.0, 4.0, -1.0], [-1.0, 0.0, 1.0], [1.0, -4.0, 3.0]]);
        let w = first_order(&Grid::uniform(3).unwrap()).unwrap();
        assert_matrix_close(&w.values, &want, 1e-14);
        assert_eq!(w.symmetry, Symmetry::SkewCentro);
    }

    #[test]
    fn three_point_second_order_center_row() {
        let w = higher_order(&Grid::uniform(3).unwrap(), 2).unwrap();
        let row = w.values.row(1);
        for (got, want) in row.iter().zip([4.0, -8.0, 4.0]) {
            assert!((got - want).abs() < 1e-13);
        }
    }

    #[test]
    fn chebyshev_first_order_is_skew() {
        let w = first_order(&Grid::chebyshev(6).unwrap()).unwrap();
        assert_eq!(w.symmetry, Symmetry::SkewCentro);
    }

    #[test]
    fn order_parity_sets_class() {
        let g = Grid::chebyshev(9).unwrap();
        assert_eq!(higher_order(&g, 3).unwrap().symmetry, Symmetry::SkewCentro);
        assert_eq!(higher_order(&g, 4).unwrap().symmetry, Symmetry::Centro);
    }

    #[test]
    fn recursion_agrees_with_matrix_power() {
        let g = Grid::uniform(6).unwrap();
        let a = first_order(&g).unwrap().values;
        let w2 = higher_order(&g, 2).unwrap().values;
        assert_matrix_close(&w2, &a.matmul(&a), 1e-11);
    }

    #[test]
    fn order_limits() {
        let g = Grid::uniform(4).unwrap();
        assert!(matches!(
            higher_order(&g, 4),
            Err(DqError::InsufficientNodes { order: 4, n: 4 })
        ));
        assert!(higher_order(&g, 3).is_ok());
        assert!(higher_order(&g, 0).is_err());
    }

    #[test]
    fn duplicate_nodes_are_degenerate() {
        assert!(matches!(
            first_order_matrix(&[0.0, 0.4, 0.4, 1.0]),
            Err(DqError::DegenerateGrid { first: 1, second: 2 })
        ));
    }

    #[test]
    fn apply_examples() {
        let g = Grid::uniform(5).unwrap();
        let w = first_order(&g).unwrap();
        let zero = w.apply(&[2.5; 5]).unwrap();
        assert!(zero.iter().all(|v| v.abs() < 1e-12));
        let ones = w.apply(g.nodes()).unwrap();
        assert!(ones.iter().all(|v| (v - 1.0).abs() < 1e-12));
        assert!(matches!(w.apply(&[1.0; 4]), Err(DqError::InvalidArgument(_))));
    }

    #[test]
    fn closed_form_matches_lagrange_weights() {
        let g = Grid::chebyshev(4).unwrap();
        let lagrange = first_order(&g).unwrap().values;
        let closed = chebyshev_closed_form(&g).unwrap().values;
        assert_matrix_close(&closed, &lagrange, 1e-10);
        // W_ij·(x_i - x_j) carries the alternating sign (-1)^(i-j).
        let x = g.nodes();
        for i in 0..4 {
            for j in 0..4 {
                if i != j {
                    let expected = if (i + j) % 2 == 0 { 1.0 } else { -1.0 };
                    assert_eq!((closed[(i, j)] * (x[i] - x[j])).signum(), expected);
                }
            }
        }
        let printed = chebyshev_printed_diagonal(&g).unwrap();
        for i in 0..4 {
            assert!((printed[i] / lagrange[(i, i)] - 2.0).abs() < 1e-10);
        }
        assert!(chebyshev_closed_form(&Grid::uniform(4).unwrap()).is_err());
    }

    #[test]
    fn asymmetric_grid_classifies_none() {
        let g = Grid::custom(vec![0.0, 0.1, 0.35, 0.7, 1.0]).unwrap();
        assert_eq!(first_order(&g).unwrap().symmetry, Symmetry::None);
    }

    #[test]
    fn json_and_csv_export() {
        let w = first_order(&Grid::uniform(3).unwrap()).unwrap();
        let v = serde_json::to_value(&w).unwrap();
        assert_eq!(v["order"], 1);
        assert_eq!(v["n"], 3);
        assert_eq!(v["symmetry"], "skew-centro");
        assert_eq!(v["values"].as_array().unwrap().len(), 3);
        let back: WeightMatrix = serde_json::from_value(v).unwrap();
        assert_eq!(back, w);
        let mut buf = Vec::new();
        w.write_csv(&mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap().lines().count(), 3);
    }
}
