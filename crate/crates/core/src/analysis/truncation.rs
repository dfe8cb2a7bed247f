use std::f64::consts::PI;
use std::fmt;
use std::io::Write;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{DqError, Result};
use crate::grid::Grid;
use crate::weights::first_order_matrix;

/// Built-in functions with known derivatives.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TestFunction {
    Exp,
    /// `sin(2πx)`
    Sin2Pi,
    /// `1 / (1 + 25(2x - 1)²)`
    Runge,
    /// `x^p`
    Monomial(u32),
}

impl TestFunction {
    pub fn value(self, x: f64) -> f64 {
        match self {
            TestFunction::Exp => x.exp(),
            TestFunction::Sin2Pi => (2.0 * PI * x).sin(),
            TestFunction::Runge => {
                let s = 2.0 * x - 1.0;
                1.0 / (1.0 + 25.0 * s * s)
            }
            TestFunction::Monomial(p) => x.powi(p as i32),
        }
    }

    pub fn derivative(self, x: f64) -> f64 {
        match self {
            TestFunction::Exp => x.exp(),
            TestFunction::Sin2Pi => 2.0 * PI * (2.0 * PI * x).cos(),
            TestFunction::Runge => {
                let s = 2.0 * x - 1.0;
                let d = 1.0 + 25.0 * s * s;
                -100.0 * s / (d * d)
            }
            TestFunction::Monomial(0) => 0.0,
            TestFunction::Monomial(p) => p as f64 * x.powi(p as i32 - 1),
        }
    }

    pub fn sample(self, g: &Grid) -> (Vec<f64>, Vec<f64>) {
        let f = g.nodes().iter().map(|&x| self.value(x)).collect();
        let df = g.nodes().iter().map(|&x| self.derivative(x)).collect();
        (f, df)
    }
}

impl fmt::Display for TestFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TestFunction::Exp => write!(f, "exp"),
            TestFunction::Sin2Pi => write!(f, "sin2pi"),
            TestFunction::Runge => write!(f, "runge"),
            TestFunction::Monomial(p) => write!(f, "monomial:{p}"),
        }
    }
}

impl FromStr for TestFunction {
    type Err = DqError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exp" => Ok(TestFunction::Exp),
            "sin2pi" => Ok(TestFunction::Sin2Pi),
            "runge" => Ok(TestFunction::Runge),
            _ => s
                .strip_prefix("monomial:")
                .and_then(|p| p.parse().ok())
                .map(TestFunction::Monomial)
                .ok_or_else(|| {
                    DqError::InvalidArgument(format!(
                        "unknown function {s:?} (expected exp, sin2pi, runge or monomial:<p>)"
                    ))
                }),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ErrorBounds {
    /// Shared by both end nodes.
    pub end: f64,
    /// Middle nodes, even `n` only.
    pub center: Option<f64>,
}

/// `end = K / (N (N-1)^(N-1))` and, for even `N`,
/// `center = (N/2 - 1)! (N/2)! K / (N! (N-1)^(N-1))`.
pub fn error_bounds(n: usize, k: f64) -> Result<ErrorBounds> {
    if n < 2 {
        return Err(DqError::InvalidArgument(format!("bounds need n >= 2, got {n}")));
    }
    if !(k.is_finite() && k > 0.0) {
        return Err(DqError::InvalidArgument(format!("derivative bound K must be > 0, got {k}")));
    }
    let nf = n as f64;
    let ln_fact = |m: usize| (2..=m).map(|i| (i as f64).ln()).sum::<f64>();
    let ln_common = nf.ln() + (nf - 1.0) * (nf - 1.0).ln();
    let end = k * (-ln_common).exp();
    let center = (n % 2 == 0).then(|| {
        let h = n / 2;
        k * (ln_fact(h - 1) + ln_fact(h) - ln_fact(n) - (nf - 1.0) * (nf - 1.0).ln()).exp()
    });
    Ok(ErrorBounds { end, center })
}

/// `end / center` as an exact integer, `C(n-1, n/2)`; `None` for odd `n`.
pub fn end_center_ratio(n: usize) -> Option<u128> {
    if n % 2 == 1 || n < 2 {
        return None;
    }
    let (top, k) = ((n - 1) as u128, (n / 2) as u128);
    let mut c: u128 = 1;
    for i in 0..k {
        c = c * (top - i) / (i + 1);
    }
    Some(c)
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TruncationReport {
    pub grid: Grid,
    /// DQ first derivative minus the analytic one, per node.
    pub errors: Vec<f64>,
    pub bounds: ErrorBounds,
    /// Bound applying to each node, where one is defined.
    pub node_bounds: Vec<Option<f64>>,
    pub k: f64,
    /// 1-based node of the largest `|error|`.
    pub argmax: usize,
    pub max_error: f64,
}

pub fn truncation_profile(g: &Grid, f: &[f64], f_prime: &[f64], k: f64) -> Result<TruncationReport> {
    let n = g.n();
    if f.len() != n || f_prime.len() != n {
        return Err(DqError::InvalidArgument(format!(
            "samples have lengths {} and {}, grid has {n} nodes",
            f.len(),
            f_prime.len()
        )));
    }
    let d = first_order_matrix(g.nodes())?.matvec(f);
    let errors: Vec<f64> = d.iter().zip(f_prime).map(|(a, b)| a - b).collect();
    let (mut argmax, mut max_error) = (0, 0.0);
    for (i, e) in errors.iter().enumerate() {
        if e.abs() > max_error {
            argmax = i;
            max_error = e.abs();
        }
    }
    let bounds = error_bounds(n, k)?;
    let node_bounds = (0..n)
        .map(|i| {
            if i == 0 || i == n - 1 {
                Some(bounds.end)
            } else if n % 2 == 0 && (i == n / 2 - 1 || i == n / 2) {
                bounds.center
            } else {
                None
            }
        })
        .collect();
    Ok(TruncationReport {
        grid: g.clone(),
        errors,
        bounds,
        node_bounds,
        k,
        argmax: argmax + 1,
        max_error,
    })
}

impl TruncationReport {
    /// Columns: `node,x,error,bound`.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let fail = |e: &dyn fmt::Display| DqError::NumericFailure(format!("csv output failed: {e}"));
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["node", "x", "error", "bound"]).map_err(|e| fail(&e))?;
        for (i, (&x, &e)) in self.grid.nodes().iter().zip(&self.errors).enumerate() {
            let b = self.node_bounds[i].map(|b| format!("{b:.6e}")).unwrap_or_default();
            w.write_record([(i + 1).to_string(), format!("{x:.17e}"), format!("{e:.6e}"), b])
                .map_err(|e| fail(&e))?;
        }
        w.flush().map_err(|e| fail(&e))?;
        Ok(())
    }
}
