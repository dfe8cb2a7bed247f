//! Centrosymmetric (`JQJ = Q`) and skew-centrosymmetric (`JQJ = -Q`) matrices.
//!
//! An even-order matrix of either class is fully described by two half-size
//! blocks `A` (top-left) and `C` (bottom-left):
//!
//! ```text
//!   centro:  [ A   JCJ ]        skew:  [ A  -JCJ ]
//!            [ C   JAJ ]               [ C  -JAJ ]
//! ```
//!
//! With `u = (x₁ + Jx₂)/√2`, `v = (x₁ - Jx₂)/√2` the centro matrix becomes
//! `diag(A + JC, A - JC)` and the skew matrix becomes the anti-diagonal
//! `[[0, A + JC], [A - JC, 0]]`, so determinants, inverses and spectra reduce
//! to half-size work. Odd orders carry the middle row and column as a border;
//! the border folds into the symmetric block.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{DqError, Result};
use crate::linalg::{eig_dense_counted, eig_with_vectors, eigenvector_for, Lu, Matrix, OpCounter};

/// Relative tolerance for accepting a matrix as structured in [`split`].
pub const SPLIT_TOL: f64 = 1e-10;

/// Absolute floor for structure tests so the zero matrix is handled.
const ABS_FLOOR: f64 = 1e-13;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Symmetry {
    Centro,
    SkewCentro,
    None,
}

/// Classifies `q` by comparing it against `JqJ`, relative to `max|q|`.
///
/// The zero matrix is both centro and skew; it reports [`Symmetry::Centro`].
pub fn classify_symmetry(q: &Matrix, tol: f64) -> Symmetry {
    if !q.is_square() {
        return Symmetry::None;
    }
    let n = q.rows();
    let threshold = (tol * q.max_abs()).max(ABS_FLOOR);
    let mut centro_dev = 0.0f64;
    let mut skew_dev = 0.0f64;
    for i in 0..n {
        for j in 0..n {
            let a = q[(i, j)];
            let b = q[(n - 1 - i, n - 1 - j)];
            centro_dev = centro_dev.max((a - b).abs());
            skew_dev = skew_dev.max((a + b).abs());
        }
    }
    if centro_dev <= threshold {
        Symmetry::Centro
    } else if skew_dev <= threshold {
        Symmetry::SkewCentro
    } else {
        Symmetry::None
    }
}

/// Class of `P ⊗ Q` from the classes of the factors (`J_{pq} = J_p ⊗ J_q`).
pub fn kron_class(c1: Symmetry, c2: Symmetry) -> Result<Symmetry> {
    use Symmetry::*;
    match (c1, c2) {
        (None, _) | (_, None) => Err(DqError::InvalidArgument(
            "Kronecker class needs two structured factors".into(),
        )),
        (Centro, Centro) | (SkewCentro, SkewCentro) => Ok(Centro),
        _ => Ok(SkewCentro),
    }
}

/// The exchange matrix `J` of order `n`. Never stored.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ContraIdentity {
    pub n: usize,
}

impl ContraIdentity {
    pub fn new(n: usize) -> Self {
        Self { n }
    }

    /// `J·v`.
    pub fn apply<T: Copy>(&self, v: &[T]) -> Vec<T> {
        assert_eq!(v.len(), self.n);
        v.iter().rev().copied().collect()
    }

    /// `J·M` (row reversal).
    pub fn left(&self, m: &Matrix) -> Matrix {
        assert_eq!(m.rows(), self.n);
        m.reverse_rows()
    }

    /// `M·J` (column reversal).
    pub fn right(&self, m: &Matrix) -> Matrix {
        assert_eq!(m.cols(), self.n);
        m.reverse_cols()
    }
}

/// Middle row/column of an odd-order structured matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct CenterBorder {
    /// Upper half of the middle column (length `m`).
    pub col: Vec<f64>,
    /// Left half of the middle row (length `m`).
    pub row: Vec<f64>,
    /// Middle entry; always zero for the skew class.
    pub center: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CentroBlocks {
    pub a: Matrix,
    pub c: Matrix,
    pub border: Option<CenterBorder>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SkewCentroBlocks {
    pub a: Matrix,
    pub c: Matrix,
    pub border: Option<CenterBorder>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ModeLabel {
    /// `v = Jv`
    Symmetric,
    /// `v = -Jv`
    SkewSymmetric,
    Unlabeled,
}

#[derive(Debug, Clone)]
pub struct SpectralPair {
    pub eigenvalue: Complex64,
    /// Unit 2-norm.
    pub eigenvector: Vec<Complex64>,
    pub label: ModeLabel,
}

#[derive(Debug, Clone)]
pub enum Split {
    Centro(CentroBlocks),
    Skew(SkewCentroBlocks),
}

fn take_blocks(q: &Matrix) -> (Matrix, Matrix, Option<CenterBorder>) {
    let n = q.rows();
    let m = n / 2;
    let odd = n % 2 == 1;
    let lower = m + usize::from(odd);
    let a = q.block(0, m, 0, m);
    let c = q.block(lower, n, 0, m);
    let border = odd.then(|| CenterBorder {
        col: (0..m).map(|i| q[(i, m)]).collect(),
        row: (0..m).map(|j| q[(m, j)]).collect(),
        center: q[(m, m)],
    });
    (a, c, border)
}

/// Splits `q` into half-size blocks after checking it really has `class`.
pub fn split(q: &Matrix, class: Symmetry) -> Result<Split> {
    if !q.is_square() {
        return Err(DqError::InvalidArgument("split needs a square matrix".into()));
    }
    let found = classify_symmetry(q, SPLIT_TOL);
    let mismatch = || DqError::ClassificationMismatch {
        expected: class,
        found,
    };
    match class {
        Symmetry::Centro if found == Symmetry::Centro => {
            let (a, c, border) = take_blocks(q);
            Ok(Split::Centro(CentroBlocks { a, c, border }))
        }
        // The zero matrix is also skew.
        Symmetry::SkewCentro
            if found == Symmetry::SkewCentro || (found == Symmetry::Centro && q.max_abs() <= ABS_FLOOR) =>
        {
            let (a, c, mut border) = take_blocks(q);
            if let Some(b) = border.as_mut() {
                b.center = 0.0;
            }
            Ok(Split::Skew(SkewCentroBlocks { a, c, border }))
        }
        _ => Err(mismatch()),
    }
}

pub fn split_centro(q: &Matrix) -> Result<CentroBlocks> {
    match split(q, Symmetry::Centro)? {
        Split::Centro(b) => Ok(b),
        Split::Skew(_) => unreachable!(),
    }
}

pub fn split_skew(q: &Matrix) -> Result<SkewCentroBlocks> {
    match split(q, Symmetry::SkewCentro)? {
        Split::Skew(b) => Ok(b),
        Split::Centro(_) => unreachable!(),
    }
}

/// `A + JC` and `A - JC`.
fn sum_diff(a: &Matrix, c: &Matrix, ctr: &mut OpCounter) -> (Matrix, Matrix) {
    let jc = c.reverse_rows();
    ctr.add(2 * (a.rows() * a.cols()) as u64);
    (a.add(&jc), a.sub(&jc))
}

fn assemble(a: &Matrix, c: &Matrix, border: Option<&CenterBorder>, sign: f64) -> Matrix {
    let m = a.rows();
    let odd = border.is_some();
    let n = 2 * m + usize::from(odd);
    let lower = m + usize::from(odd);
    let mut q = Matrix::zeros(n, n);
    q.set_block(0, 0, a);
    q.set_block(lower, 0, c);
    q.set_block(0, lower, &c.mirror().scale(sign));
    q.set_block(lower, lower, &a.mirror().scale(sign));
    if let Some(b) = border {
        for i in 0..m {
            q[(i, m)] = b.col[i];
            q[(n - 1 - i, m)] = sign * b.col[i];
            q[(m, i)] = b.row[i];
            q[(m, n - 1 - i)] = sign * b.row[i];
        }
        q[(m, m)] = if sign > 0.0 { b.center } else { 0.0 };
    }
    q
}

fn singular(factor: &str, lu: &Lu) -> Option<DqError> {
    lu.singular_pivot().map(|pivot| DqError::Singular {
        factor: factor.to_string(),
        pivot,
    })
}

/// Symmetric block in orthonormal coordinates; bordered for odd orders.
fn bordered_sym_block(sum: &Matrix, border: Option<&CenterBorder>, ctr: &mut OpCounter) -> Matrix {
    match border {
        None => sum.clone(),
        Some(b) => {
            let m = sum.rows();
            let s2 = std::f64::consts::SQRT_2;
            let mut s = Matrix::zeros(m + 1, m + 1);
            s.set_block(0, 0, sum);
            for i in 0..m {
                s[(i, m)] = s2 * b.col[i];
                s[(m, i)] = s2 * b.row[i];
            }
            s[(m, m)] = b.center;
            ctr.mul(2 * m as u64);
            s
        }
    }
}

/// Full vector from coordinates: `x₁ = (u+v)/√2`, middle `c`, `x₂ = J(u−v)/√2`.
fn embed(u: &[Complex64], center: Option<Complex64>, v: &[Complex64]) -> Vec<Complex64> {
    let m = u.len();
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let mut out = Vec::with_capacity(2 * m + 1);
    out.extend((0..m).map(|i| (u[i] + v[i]) * s));
    out.extend(center);
    out.extend((0..m).rev().map(|i| (u[i] - v[i]) * s));
    let norm = out.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    if norm > 0.0 {
        out.iter_mut().for_each(|z| *z /= norm);
    }
    out
}

fn matvec_c(m: &Matrix, v: &[Complex64]) -> Vec<Complex64> {
    (0..m.rows())
        .map(|i| (0..m.cols()).map(|j| v[j] * m[(i, j)]).sum())
        .collect()
}

fn snap_sort_pairs(pairs: &mut [SpectralPair]) {
    let radius = pairs.iter().fold(0.0f64, |r, p| r.max(p.eigenvalue.norm()));
    for p in pairs.iter_mut() {
        if p.eigenvalue.im.abs() <= 1e-8 * radius {
            p.eigenvalue.im = 0.0;
        }
    }
    pairs.sort_by(|a, b| {
        let (x, y) = (a.eigenvalue, b.eigenvalue);
        x.re.partial_cmp(&y.re)
            .unwrap_or(std::cmp::Ordering::Equal)
            .then(x.im.partial_cmp(&y.im).unwrap_or(std::cmp::Ordering::Equal))
    });
}

impl CentroBlocks {
    pub fn from_blocks(a: Matrix, c: Matrix, border: Option<CenterBorder>) -> Self {
        Self { a, c, border }
    }

    pub fn half(&self) -> usize {
        self.a.rows()
    }

    pub fn n(&self) -> usize {
        2 * self.half() + usize::from(self.border.is_some())
    }

    pub fn reassemble(&self) -> Matrix {
        assemble(&self.a, &self.c, self.border.as_ref(), 1.0)
    }

    /// The block carrying symmetric modes (`A + JC`, bordered when odd).
    pub fn symmetric_block(&self) -> Matrix {
        let (sum, _) = sum_diff(&self.a, &self.c, &mut OpCounter::new());
        bordered_sym_block(&sum, self.border.as_ref(), &mut OpCounter::new())
    }

    /// The block carrying skew-symmetric modes (`A - JC`).
    pub fn skew_block(&self) -> Matrix {
        sum_diff(&self.a, &self.c, &mut OpCounter::new()).1
    }

    pub fn det(&self) -> f64 {
        self.det_counted(&mut OpCounter::new())
    }

    /// `|Q| = |A + JC|·|A − JC|` (symmetric block bordered when odd).
    pub fn det_counted(&self, ctr: &mut OpCounter) -> f64 {
        let (sum, diff) = sum_diff(&self.a, &self.c, ctr);
        let sym = bordered_sym_block(&sum, self.border.as_ref(), ctr);
        let d1 = Lu::factor_counted(&sym, ctr).det_counted(ctr);
        let d2 = Lu::factor_counted(&diff, ctr).det_counted(ctr);
        ctr.mul(1);
        d1 * d2
    }

    pub fn inverse(&self) -> Result<CentroBlocks> {
        self.inverse_counted(&mut OpCounter::new())
    }

    /// With `E = (A+JC)⁻¹`, `F = (A−JC)⁻¹` the inverse has blocks
    /// `P = (E+F)/2` and `R = J(E−F)/2`.
    pub fn inverse_counted(&self, ctr: &mut OpCounter) -> Result<CentroBlocks> {
        let (sum, diff) = sum_diff(&self.a, &self.c, ctr);
        let sym = bordered_sym_block(&sum, self.border.as_ref(), ctr);
        let lu_s = Lu::factor_counted(&sym, ctr);
        if let Some(e) = singular("A + JC", &lu_s) {
            return Err(e);
        }
        let lu_d = Lu::factor_counted(&diff, ctr);
        if let Some(e) = singular("A - JC", &lu_d) {
            return Err(e);
        }
        let s_inv = lu_s.inverse_counted(ctr)?;
        let f = lu_d.inverse_counted(ctr)?;
        let m = self.half();
        let e = s_inv.block(0, m, 0, m);
        let a = e.add(&f).scale(0.5);
        let c = e.sub(&f).scale(0.5).reverse_rows();
        ctr.add(2 * (m * m) as u64);
        ctr.mul(2 * (m * m) as u64);
        let border = self.border.as_ref().map(|_| {
            let s = std::f64::consts::FRAC_1_SQRT_2;
            ctr.mul(2 * m as u64);
            CenterBorder {
                col: (0..m).map(|i| s * s_inv[(i, m)]).collect(),
                row: (0..m).map(|j| s * s_inv[(m, j)]).collect(),
                center: s_inv[(m, m)],
            }
        });
        Ok(CentroBlocks { a, c, border })
    }

    /// Eigenvalues with the symmetry label of their eigenvector, eigenvalues only.
    pub fn labeled_eigenvalues_counted(&self, ctr: &mut OpCounter) -> Result<Vec<(Complex64, ModeLabel)>> {
        let (sum, diff) = sum_diff(&self.a, &self.c, ctr);
        let sym = bordered_sym_block(&sum, self.border.as_ref(), ctr);
        let mut out: Vec<(Complex64, ModeLabel)> = eig_dense_counted(&sym, ctr)?
            .into_iter()
            .map(|l| (l, ModeLabel::Symmetric))
            .collect();
        out.extend(
            eig_dense_counted(&diff, ctr)?
                .into_iter()
                .map(|l| (l, ModeLabel::SkewSymmetric)),
        );
        Ok(out)
    }

    pub fn eigenvalues_counted(&self, ctr: &mut OpCounter) -> Result<Vec<Complex64>> {
        let mut v: Vec<Complex64> = self
            .labeled_eigenvalues_counted(ctr)?
            .into_iter()
            .map(|(l, _)| l)
            .collect();
        crate::linalg::sort_spectrum(&mut v);
        Ok(v)
    }

    /// Full eigendecomposition with symmetric / skew-symmetric eigenvectors.
    pub fn eig(&self) -> Result<Vec<SpectralPair>> {
        let (sum, diff) = sum_diff(&self.a, &self.c, &mut OpCounter::new());
        let sym = bordered_sym_block(&sum, self.border.as_ref(), &mut OpCounter::new());
        let m = self.half();
        let zeros = vec![Complex64::new(0.0, 0.0); m];
        let mut pairs = Vec::with_capacity(self.n());
        let es = eig_with_vectors(&sym)?;
        for (lambda, y) in es.values.into_iter().zip(es.vectors) {
            let center = self.border.as_ref().map(|_| y[m]);
            pairs.push(SpectralPair {
                eigenvalue: lambda,
                eigenvector: embed(&y[..m], center, &zeros),
                label: ModeLabel::Symmetric,
            });
        }
        let ed = eig_with_vectors(&diff)?;
        for (lambda, y) in ed.values.into_iter().zip(ed.vectors) {
            let center = self.border.as_ref().map(|_| Complex64::new(0.0, 0.0));
            pairs.push(SpectralPair {
                eigenvalue: lambda,
                eigenvector: embed(&zeros, center, &y),
                label: ModeLabel::SkewSymmetric,
            });
        }
        snap_sort_pairs(&mut pairs);
        Ok(pairs)
    }
}

impl SkewCentroBlocks {
    pub fn from_blocks(a: Matrix, c: Matrix, border: Option<CenterBorder>) -> Self {
        let border = border.map(|b| CenterBorder { center: 0.0, ..b });
        Self { a, c, border }
    }

    pub fn half(&self) -> usize {
        self.a.rows()
    }

    pub fn n(&self) -> usize {
        2 * self.half() + usize::from(self.border.is_some())
    }

    pub fn reassemble(&self) -> Matrix {
        assemble(&self.a, &self.c, self.border.as_ref(), -1.0)
    }

    pub fn det(&self) -> f64 {
        self.det_counted(&mut OpCounter::new())
    }

    /// `|Q| = (−1)^m·|A + JC|·|A − JC|`; odd orders are always singular.
    pub fn det_counted(&self, ctr: &mut OpCounter) -> f64 {
        if self.border.is_some() {
            return 0.0;
        }
        let (sum, diff) = sum_diff(&self.a, &self.c, ctr);
        let d1 = Lu::factor_counted(&sum, ctr).det_counted(ctr);
        let d2 = Lu::factor_counted(&diff, ctr).det_counted(ctr);
        ctr.mul(1);
        let sign = if self.half() % 2 == 0 { 1.0 } else { -1.0 };
        sign * d1 * d2
    }

    pub fn inverse(&self) -> Result<SkewCentroBlocks> {
        self.inverse_counted(&mut OpCounter::new())
    }

    /// With `E = (A+JC)⁻¹`, `F = (A−JC)⁻¹` the inverse has blocks
    /// `P = (E+F)/2` and `R = J(F−E)/2`.
    pub fn inverse_counted(&self, ctr: &mut OpCounter) -> Result<SkewCentroBlocks> {
        if self.border.is_some() {
            return Err(DqError::Singular {
                factor: "odd-order skew-centrosymmetric matrix".into(),
                pivot: self.half(),
            });
        }
        let (sum, diff) = sum_diff(&self.a, &self.c, ctr);
        let lu_s = Lu::factor_counted(&sum, ctr);
        if let Some(e) = singular("A + JC", &lu_s) {
            return Err(e);
        }
        let lu_d = Lu::factor_counted(&diff, ctr);
        if let Some(e) = singular("A - JC", &lu_d) {
            return Err(e);
        }
        let e = lu_s.inverse_counted(ctr)?;
        let f = lu_d.inverse_counted(ctr)?;
        let m = self.half();
        let a = e.add(&f).scale(0.5);
        let c = f.sub(&e).scale(0.5).reverse_rows();
        ctr.add(2 * (m * m) as u64);
        ctr.mul(2 * (m * m) as u64);
        Ok(SkewCentroBlocks { a, c, border: None })
    }

    /// `(A−JC)(A+JC)` plus the rank-one border correction `2·col·rowᵀ` when odd.
    fn product_block(&self, ctr: &mut OpCounter) -> (Matrix, Matrix, Matrix) {
        let (sum, diff) = sum_diff(&self.a, &self.c, ctr);
        let mut p = diff.matmul_counted(&sum, ctr);
        if let Some(b) = &self.border {
            let m = self.half();
            for i in 0..m {
                for j in 0..m {
                    p[(i, j)] += 2.0 * b.col[i] * b.row[j];
                }
            }
            ctr.fma(2 * (m * m) as u64);
        }
        (p, sum, diff)
    }

    /// Eigenvalues `±√μ` for each eigenvalue `μ` of the half-size product block,
    /// plus a zero eigenvalue for odd orders.
    pub fn eigenvalues_counted(&self, ctr: &mut OpCounter) -> Result<Vec<Complex64>> {
        let (p, _, _) = self.product_block(ctr);
        let mut out = Vec::with_capacity(self.n());
        for mu in eig_dense_counted(&p, ctr)? {
            let r = mu.sqrt();
            ctr.mul(1);
            out.push(r);
            out.push(-r);
        }
        if self.border.is_some() {
            out.push(Complex64::new(0.0, 0.0));
        }
        crate::linalg::sort_spectrum(&mut out);
        Ok(out)
    }

    pub fn eig(&self) -> Result<Vec<SpectralPair>> {
        let (p, sum, _) = self.product_block(&mut OpCounter::new());
        let m = self.half();
        let full = self.reassemble();
        let scale = full.max_abs().max(1.0);
        let zero_tol = 1e-7 * scale;
        let s2 = std::f64::consts::SQRT_2;
        let mut pairs: Vec<SpectralPair> = Vec::with_capacity(self.n());
        let mut zero_vectors: Vec<Vec<Complex64>> = Vec::new();
        let push_zero = |pairs: &mut Vec<SpectralPair>, zero_vectors: &mut Vec<Vec<Complex64>>| {
            let z = Complex64::new(0.0, 0.0);
            let v = eigenvector_for(&full, z, zero_vectors);
            zero_vectors.push(v.clone());
            pairs.push(SpectralPair {
                eigenvalue: z,
                eigenvector: v,
                label: ModeLabel::Unlabeled,
            });
        };
        let ep = eig_with_vectors(&p)?;
        for (mu, v) in ep.values.into_iter().zip(ep.vectors) {
            let root = mu.sqrt();
            for lambda in [root, -root] {
                if lambda.norm() <= zero_tol {
                    push_zero(&mut pairs, &mut zero_vectors);
                    continue;
                }
                let u: Vec<Complex64> = matvec_c(&sum, &v).into_iter().map(|z| z / lambda).collect();
                let center = self.border.as_ref().map(|b| {
                    (0..m).map(|j| v[j] * b.row[j]).sum::<Complex64>() * s2 / lambda
                });
                pairs.push(SpectralPair {
                    eigenvalue: lambda,
                    eigenvector: embed(&u, center, &v),
                    label: ModeLabel::Unlabeled,
                });
            }
        }
        if self.border.is_some() {
            push_zero(&mut pairs, &mut zero_vectors);
        }
        snap_sort_pairs(&mut pairs);
        Ok(pairs)
    }
}

pub fn det_centro(b: &CentroBlocks) -> f64 {
    b.det()
}

pub fn det_skew(b: &SkewCentroBlocks) -> f64 {
    b.det()
}

pub fn inv_centro(b: &CentroBlocks) -> Result<CentroBlocks> {
    b.inverse()
}

pub fn inv_skew(b: &SkewCentroBlocks) -> Result<SkewCentroBlocks> {
    b.inverse()
}

pub fn eig_centro(b: &CentroBlocks) -> Result<Vec<SpectralPair>> {
    b.eig()
}

pub fn eig_skew(b: &SkewCentroBlocks) -> Result<Vec<SpectralPair>> {
    b.eig()
}

/// Orthogonal map `K` with `K·x = [u; v]`, `u = (x₁+Jx₂)/√2`, `v = (x₁−Jx₂)/√2` (even `n`).
pub fn similarity_transform(n: usize) -> Matrix {
    assert!(n % 2 == 0, "transform defined for even orders");
    let m = n / 2;
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let mut k = Matrix::zeros(n, n);
    for i in 0..m {
        k[(i, i)] = s;
        k[(i, n - 1 - i)] = s;
        k[(m + i, i)] = s;
        k[(m + i, n - 1 - i)] = -s;
    }
    k
}
