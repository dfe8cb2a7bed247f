use super::{Matrix, OpCounter};
use crate::error::{DqError, Result};

/// Relative pivot threshold below which a factor is considered singular.
const PIVOT_TOL: f64 = 1e-13;

/// Partial-pivoted LU factorization `P·M = L·U` (unit lower `L` stored below the diagonal).
#[derive(Debug, Clone)]
pub struct Lu {
    lu: Matrix,
    perm: Vec<usize>,
    sign: f64,
    singular_pivot: Option<usize>,
}

impl Lu {
    pub fn factor(m: &Matrix) -> Self {
        Self::factor_counted(m, &mut OpCounter::new())
    }

    pub fn factor_counted(m: &Matrix, ctr: &mut OpCounter) -> Self {
        assert!(m.is_square(), "LU needs a square matrix");
        let n = m.rows();
        let mut lu = m.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut sign = 1.0;
        let threshold = PIVOT_TOL * m.max_abs().max(f64::MIN_POSITIVE);
        let mut singular_pivot = None;

        for k in 0..n {
            let (p, pmax) = (k..n)
                .map(|i| (i, lu[(i, k)].abs()))
                .fold((k, -1.0), |acc, x| if x.1 > acc.1 { x } else { acc });
            if p != k {
                for j in 0..n {
                    let t = lu[(k, j)];
                    lu[(k, j)] = lu[(p, j)];
                    lu[(p, j)] = t;
                }
                perm.swap(k, p);
                sign = -sign;
            }
            if pmax <= threshold && singular_pivot.is_none() {
                singular_pivot = Some(k);
            }
            let pivot = lu[(k, k)];
            if pivot == 0.0 {
                continue;
            }
            for i in k + 1..n {
                let l = lu[(i, k)] / pivot;
                lu[(i, k)] = l;
                if l != 0.0 {
                    for j in k + 1..n {
                        lu[(i, j)] -= l * lu[(k, j)];
                    }
                }
            }
            let rem = (n - k - 1) as u64;
            ctr.mul(rem);
            ctr.fma(rem * rem);
        }
        Self {
            lu,
            perm,
            sign,
            singular_pivot,
        }
    }

    pub fn det(&self) -> f64 {
        self.det_counted(&mut OpCounter::new())
    }

    pub fn det_counted(&self, ctr: &mut OpCounter) -> f64 {
        let n = self.lu.rows();
        ctr.mul(n as u64);
        (0..n).fold(self.sign, |d, i| d * self.lu[(i, i)])
    }

    pub fn singular_pivot(&self) -> Option<usize> {
        self.singular_pivot
    }

    pub fn solve(&self, b: &[f64]) -> Result<Vec<f64>> {
        self.solve_counted(b, &mut OpCounter::new())
    }

    pub fn solve_counted(&self, b: &[f64], ctr: &mut OpCounter) -> Result<Vec<f64>> {
        let n = self.lu.rows();
        if b.len() != n {
            return Err(DqError::InvalidArgument(format!(
                "right-hand side has length {}, expected {n}",
                b.len()
            )));
        }
        if let Some(pivot) = self.singular_pivot {
            return Err(DqError::Singular {
                factor: "LU".into(),
                pivot,
            });
        }
        let mut x: Vec<f64> = self.perm.iter().map(|&p| b[p]).collect();
        for i in 0..n {
            let mut s = x[i];
            for j in 0..i {
                s -= self.lu[(i, j)] * x[j];
            }
            x[i] = s;
        }
        for i in (0..n).rev() {
            let mut s = x[i];
            for j in i + 1..n {
                s -= self.lu[(i, j)] * x[j];
            }
            x[i] = s / self.lu[(i, i)];
        }
        let nn = n as u64;
        ctr.fma(nn * nn.saturating_sub(1));
        ctr.mul(nn);
        Ok(x)
    }

    pub fn inverse_counted(&self, ctr: &mut OpCounter) -> Result<Matrix> {
        let n = self.lu.rows();
        let mut inv = Matrix::zeros(n, n);
        let mut e = vec![0.0; n];
        for j in 0..n {
            e.iter_mut().for_each(|v| *v = 0.0);
            e[j] = 1.0;
            let col = self.solve_counted(&e, ctr)?;
            for i in 0..n {
                inv[(i, j)] = col[i];
            }
        }
        Ok(inv)
    }
}

pub fn lu_det(m: &Matrix) -> f64 {
    lu_det_counted(m, &mut OpCounter::new())
}

pub fn lu_det_counted(m: &Matrix, ctr: &mut OpCounter) -> f64 {
    Lu::factor_counted(m, ctr).det_counted(ctr)
}

pub fn lu_solve(m: &Matrix, b: &[f64]) -> Result<Vec<f64>> {
    Lu::factor(m).solve(b)
}

pub fn lu_inverse(m: &Matrix) -> Result<Matrix> {
    lu_inverse_counted(m, &mut OpCounter::new())
}

pub fn lu_inverse_counted(m: &Matrix, ctr: &mut OpCounter) -> Result<Matrix> {
    Lu::factor_counted(m, ctr).inverse_counted(ctr)
}
