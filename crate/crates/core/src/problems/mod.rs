//! Beam, plate, skew-plate and convection-diffusion problems on DQ grids.
//!
//! Free-vibration problems assemble a boundary-condition-modified operator and
//! turn its eigenvalues into nondimensional frequencies `ω̄ = √λ`. On symmetric
//! grids the operator is centrosymmetric and the eigenproblem is split into two
//! half-size problems whose modes carry a symmetry label.

mod beam;
mod config;
mod convdiff;
mod operators;
mod plate;
mod skew_plate;

use std::io::Write;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::centro::{classify_symmetry, split_centro, ModeLabel, Symmetry};
use crate::error::{DqError, Result};
use crate::grid::{Grid, GridKind};
use crate::linalg::{eig_dense_counted, sort_spectrum, Matrix, OpCounter};

pub use beam::{beam_frequencies, beam_operator, BeamBc, BeamProblem};
pub use config::{parse_cases, CaseOutput, CaseSpec, GridSpec, ProblemSpec};
pub use convdiff::{convdiff_solve, convdiff_solve_dense, ConvDiffProblem, ConvDiffSolution, EdgeCondition};
pub use operators::{EdgeSupport, ModifiedOperatorSet};
pub use plate::{plate_frequencies, plate_operator, PlateProblem};
pub use skew_plate::{assemble_skew_plate, skew_plate_frequencies, skew_plate_operator, SkewPlateProblem};

/// Tolerance for deciding an operator is centrosymmetric.
pub const OPERATOR_CLASS_TOL: f64 = 1e-10;
/// Imaginary parts and negative real parts below this fraction of the spectral radius are rounding noise.
pub const SPECTRUM_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PathChoice {
    #[default]
    Auto,
    Dense,
    Factorized,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SolvePath {
    Factorized,
    Dense,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FrequencyResult {
    /// Ascending.
    pub frequencies: Vec<f64>,
    pub labels: Vec<ModeLabel>,
    pub path: SolvePath,
    /// Multiplies spent by the eigensolver on the path taken.
    pub multiplies: u64,
    /// Complex or negative eigenvalues skipped as non-physical.
    pub spurious: usize,
}

/// An assembled operator together with its detected class.
#[derive(Debug, Clone)]
pub struct AssembledOperator {
    pub matrix: Matrix,
    pub symmetry: Symmetry,
}

impl AssembledOperator {
    pub fn new(matrix: Matrix) -> Self {
        let symmetry = classify_symmetry(&matrix, OPERATOR_CLASS_TOL);
        Self { matrix, symmetry }
    }
}

/// Multiply counts for one eigen-solve under three accountings.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct EffortReport {
    pub dense: u64,
    /// Both half-size blocks.
    pub two_block: u64,
    /// The symmetric block only, enough for the symmetric modes.
    pub one_block: u64,
}

impl EffortReport {
    pub fn two_block_ratio(&self) -> f64 {
        self.two_block as f64 / self.dense as f64
    }

    pub fn one_block_ratio(&self) -> f64 {
        self.one_block as f64 / self.dense as f64
    }
}

/// Problem grid for a kind name: boundary problems always need the endpoints,
/// so the Chebyshev family maps to the variant that includes them.
pub fn problem_grid(kind: GridKind, n: usize) -> Result<Grid> {
    match kind {
        GridKind::ChebyshevShifted | GridKind::ChebyshevWithEnds => Grid::chebyshev_with_ends(n),
        k => Grid::of_kind(k, n),
    }
}

/// Lowest `count` frequencies of `op`, through the split eigenproblem when allowed.
pub fn solve_frequencies(op: &AssembledOperator, count: usize, path: PathChoice) -> Result<FrequencyResult> {
    let n = op.matrix.rows();
    if count == 0 || count > n {
        return Err(DqError::InvalidArgument(format!(
            "requested {count} frequencies from an operator of size {n}"
        )));
    }
    let factorize = match path {
        PathChoice::Dense => false,
        PathChoice::Auto => op.symmetry == Symmetry::Centro,
        PathChoice::Factorized => {
            if op.symmetry != Symmetry::Centro {
                return Err(DqError::ClassificationMismatch {
                    expected: Symmetry::Centro,
                    found: op.symmetry,
                });
            }
            true
        }
    };
    let mut ctr = OpCounter::new();
    let mut spectrum: Vec<(Complex64, ModeLabel)> = if factorize {
        split_centro(&op.matrix)?.labeled_eigenvalues_counted(&mut ctr)?
    } else {
        let mut v = eig_dense_counted(&op.matrix, &mut ctr)?;
        sort_spectrum(&mut v);
        v.into_iter().map(|l| (l, ModeLabel::Unlabeled)).collect()
    };
    spectrum.sort_by(|a, b| a.0.re.total_cmp(&b.0.re));
    let radius = spectrum.iter().map(|(l, _)| l.norm()).fold(0.0, f64::max);
    let floor = SPECTRUM_TOL * radius.max(f64::MIN_POSITIVE);
    let (real, spurious): (Vec<_>, Vec<_>) = spectrum
        .into_iter()
        .partition(|(l, _)| l.im.abs() <= floor && l.re >= -floor);
    if real.len() < count {
        let culprit = spurious.first().map(|p| p.0).unwrap_or_default();
        return Err(DqError::NumericFailure(format!(
            "only {} of {count} requested modes are real; eigenvalue {:.6e}{:+.6e}i has no real frequency",
            real.len(),
            culprit.re,
            culprit.im
        )));
    }
    let (frequencies, labels) = real.iter().take(count).map(|&(l, label)| (l.re.max(0.0).sqrt(), label)).unzip();
    Ok(FrequencyResult {
        frequencies,
        labels,
        path: if factorize { SolvePath::Factorized } else { SolvePath::Dense },
        multiplies: ctr.multiplies,
        spurious: spurious.len(),
    })
}

/// Counts the dense solve and both factorized accountings for a centro operator.
pub fn effort_report(op: &AssembledOperator) -> Result<EffortReport> {
    let mut dense = OpCounter::new();
    eig_dense_counted(&op.matrix, &mut dense)?;
    let blocks = split_centro(&op.matrix)?;
    let mut two = OpCounter::new();
    blocks.labeled_eigenvalues_counted(&mut two)?;
    let mut one = OpCounter::new();
    eig_dense_counted(&blocks.symmetric_block(), &mut one)?;
    Ok(EffortReport {
        dense: dense.multiplies,
        two_block: two.multiplies,
        one_block: one.multiplies,
    })
}

fn label_name(l: ModeLabel) -> &'static str {
    match l {
        ModeLabel::Symmetric => "symmetric",
        ModeLabel::SkewSymmetric => "skew-symmetric",
        ModeLabel::Unlabeled => "unlabeled",
    }
}

impl FrequencyResult {
    /// `(ω̄ - ref) / ref` per mode, where a reference value exists.
    pub fn relative_errors(&self, reference: &[f64]) -> Vec<Option<f64>> {
        self.frequencies
            .iter()
            .enumerate()
            .map(|(i, &w)| reference.get(i).map(|&r| (w - r) / r))
            .collect()
    }

    /// Columns: `mode,frequency,label,relative_error`.
    pub fn write_csv<W: Write>(&self, out: W, reference: Option<&[f64]>) -> Result<()> {
        let io = |e: csv::Error| DqError::NumericFailure(format!("csv output failed: {e}"));
        let errors = self.relative_errors(reference.unwrap_or(&[]));
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["mode", "frequency", "label", "relative_error"]).map_err(io)?;
        for (i, (&f, &l)) in self.frequencies.iter().zip(&self.labels).enumerate() {
            let err = errors[i].map(|e| format!("{e:.6e}")).unwrap_or_default();
            w.write_record([(i + 1).to_string(), format!("{f:.10}"), label_name(l).to_string(), err])
                .map_err(io)?;
        }
        w.flush()
            .map_err(|e| DqError::NumericFailure(format!("csv output failed: {e}")))?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn diagonal_operator_frequencies() {
        let op = AssembledOperator::new(Matrix::diag(&[4.0, 9.0, 9.0, 4.0]));
        assert_eq!(op.symmetry, Symmetry::Centro);
        let r = solve_frequencies(&op, 4, PathChoice::Auto).unwrap();
        assert_eq!(r.path, SolvePath::Factorized);
        assert_eq!(r.frequencies, vec![2.0, 2.0, 3.0, 3.0]);
        let d = solve_frequencies(&op, 2, PathChoice::Dense).unwrap();
        assert_eq!(d.labels, vec![ModeLabel::Unlabeled; 2]);
    }

    #[test]
    fn non_physical_eigenvalues_are_skipped_then_reported() {
        let op = AssembledOperator::new(Matrix::diag(&[-4.0, 9.0]));
        let r = solve_frequencies(&op, 1, PathChoice::Dense).unwrap();
        assert_eq!((r.frequencies[0], r.spurious), (3.0, 1));
        assert!(matches!(
            solve_frequencies(&op, 2, PathChoice::Dense),
            Err(DqError::NumericFailure(_))
        ));
        let rotation = AssembledOperator::new(Matrix::from_rows(&[vec![0.0, -1.0], vec![1.0, 0.0]]));
        assert!(solve_frequencies(&rotation, 1, PathChoice::Dense).is_err());
    }

    #[test]
    fn factorized_path_requires_centro() {
        let op = AssembledOperator::new(Matrix::from_rows(&[vec![1.0, 2.0], vec![3.0, 5.0]]));
        assert!(matches!(
            solve_frequencies(&op, 1, PathChoice::Factorized),
            Err(DqError::ClassificationMismatch { .. })
        ));
        assert!(solve_frequencies(&op, 3, PathChoice::Dense).is_err());
    }

    #[test]
    fn csv_has_reference_errors() {
        let r = FrequencyResult {
            frequencies: vec![2.0, 4.0],
            labels: vec![ModeLabel::Symmetric, ModeLabel::SkewSymmetric],
            path: SolvePath::Factorized,
            multiplies: 0,
            spurious: 0,
        };
        let mut buf = Vec::new();
        r.write_csv(&mut buf, Some(&[2.0])).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "mode,frequency,label,relative_error");
        assert_eq!(lines[1], "1,2.0000000000,symmetric,0.000000e0");
        assert_eq!(lines[2], "2,4.0000000000,skew-symmetric,");
    }
}
