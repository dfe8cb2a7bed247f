//! Real nonsymmetric eigensolver: balancing, Householder reduction to upper
//! Hessenberg form, then Francis double-shift QR with deflation. Eigenvectors
//! come from inverse iteration on the original matrix.

use num_complex::Complex64;

use super::{Matrix, OpCounter};
use crate::error::{DqError, Result};

/// QR sweeps allowed per eigenvalue before giving up.
pub const MAX_QR_ITERATIONS: usize = 60;

/// Imaginary parts below this fraction of the spectral radius are dropped.
const REAL_SNAP: f64 = 1e-8;

const INVERSE_ITERATION_STEPS: usize = 3;

#[derive(Debug, Clone)]
pub struct Eigen {
    pub values: Vec<Complex64>,
    /// Unit 2-norm eigenvectors, one per entry of `values`.
    pub vectors: Vec<Vec<Complex64>>,
}

pub fn eig_dense(m: &Matrix) -> Result<Vec<Complex64>> {
    eig_dense_counted(m, &mut OpCounter::new())
}

/// Eigenvalues sorted by (real, imaginary) with near-real values snapped to the real axis.
pub fn eig_dense_counted(m: &Matrix, ctr: &mut OpCounter) -> Result<Vec<Complex64>> {
    assert!(m.is_square(), "eigenproblem needs a square matrix");
    let n = m.rows();
    if n == 0 {
        return Ok(Vec::new());
    }
    // 1-based working copy, mirrors the classic EISPACK layout.
    let mut a = vec![0.0; (n + 1) * (n + 1)];
    let w = n + 1;
    for i in 0..n {
        for j in 0..n {
            a[(i + 1) * w + (j + 1)] = m[(i, j)];
        }
    }
    balance(&mut a, n, ctr);
    hessenberg(&mut a, n, ctr);
    let mut values = hqr(&mut a, n, ctr)?;
    snap_and_sort(&mut values);
    Ok(values)
}

pub fn eig_with_vectors(m: &Matrix) -> Result<Eigen> {
    let values = eig_dense(m)?;
    let mut vectors: Vec<Vec<Complex64>> = Vec::with_capacity(values.len());
    let scale = m.max_abs().max(1.0);
    for (k, &lambda) in values.iter().enumerate() {
        let cluster: Vec<Vec<Complex64>> = values[..k]
            .iter()
            .zip(&vectors)
            .filter(|(mu, _)| (**mu - lambda).norm() <= 1e-8 * scale)
            .map(|(_, v)| v.clone())
            .collect();
        vectors.push(eigenvector_for(m, lambda, &cluster));
    }
    Ok(Eigen { values, vectors })
}

/// Sorts by (real part, imaginary part) after snapping near-real values.
pub fn sort_spectrum(values: &mut [Complex64]) {
    snap_and_sort(values);
}

fn snap_and_sort(values: &mut [Complex64]) {
    let radius = values.iter().fold(0.0f64, |r, v| r.max(v.norm()));
    for v in values.iter_mut() {
        if v.im.abs() <= REAL_SNAP * radius {
            v.im = 0.0;
        }
    }
    values.sort_by(|a, b| {
        a.re.partial_cmp(&b.re)
            .unwrap_or(std::cmp::Ordering::Equal)
            .then(a.im.partial_cmp(&b.im).unwrap_or(std::cmp::Ordering::Equal))
    });
}

fn balance(a: &mut [f64], n: usize, ctr: &mut OpCounter) {
    const RADIX: f64 = 2.0;
    let w = n + 1;
    let sqrdx = RADIX * RADIX;
    let mut done = false;
    while !done {
        done = true;
        for i in 1..=n {
            let mut r = 0.0;
            let mut c = 0.0;
            for j in 1..=n {
                if j != i {
                    c += a[j * w + i].abs();
                    r += a[i * w + j].abs();
                }
            }
            if c != 0.0 && r != 0.0 {
                let mut g = r / RADIX;
                let mut f = 1.0;
                let s = c + r;
                while c < g {
                    f *= RADIX;
                    c *= sqrdx;
                }
                g = r * RADIX;
                while c > g {
                    f /= RADIX;
                    c /= sqrdx;
                }
                if (c + r) / f < 0.95 * s {
                    done = false;
                    let g = 1.0 / f;
                    for j in 1..=n {
                        a[i * w + j] *= g;
                    }
                    for j in 1..=n {
                        a[j * w + i] *= f;
                    }
                    ctr.mul(2 * n as u64);
                }
            }
        }
    }
}

/// Orthogonal similarity to upper Hessenberg form by Householder reflections.
fn hessenberg(a: &mut [f64], n: usize, ctr: &mut OpCounter) {
    let w = n + 1;
    let mut v = vec![0.0; n + 1];
    for k in 1..n.saturating_sub(1) {
        // Reflect rows/cols k+1..=n to zero a[k+2..=n][k].
        let len = (n - k) as u64;
        let alpha_sq: f64 = (k + 1..=n).map(|i| a[i * w + k].powi(2)).sum();
        ctr.fma(len);
        if alpha_sq == 0.0 {
            continue;
        }
        let x0 = a[(k + 1) * w + k];
        let alpha = if x0 >= 0.0 { -alpha_sq.sqrt() } else { alpha_sq.sqrt() };
        for i in k + 1..=n {
            v[i] = a[i * w + k];
        }
        v[k + 1] -= alpha;
        let vnorm_sq: f64 = (k + 1..=n).map(|i| v[i] * v[i]).sum();
        ctr.fma(len);
        if vnorm_sq == 0.0 {
            continue;
        }
        let beta = 2.0 / vnorm_sq;
        // A := (I - beta v vᵀ) A
        for j in k..=n {
            let s: f64 = (k + 1..=n).map(|i| v[i] * a[i * w + j]).sum::<f64>() * beta;
            for i in k + 1..=n {
                a[i * w + j] -= s * v[i];
            }
        }
        ctr.fma(2 * len * (n - k + 1) as u64);
        // A := A (I - beta v vᵀ)
        for i in 1..=n {
            let s: f64 = (k + 1..=n).map(|j| a[i * w + j] * v[j]).sum::<f64>() * beta;
            for j in k + 1..=n {
                a[i * w + j] -= s * v[j];
            }
        }
        ctr.fma(2 * len * n as u64);
        for i in k + 2..=n {
            a[i * w + k] = 0.0;
        }
    }
}

fn sign(a: f64, b: f64) -> f64 {
    if b >= 0.0 {
        a.abs()
    } else {
        -a.abs()
    }
}

/// Francis double-shift QR on a 1-based upper Hessenberg array.
fn hqr(a: &mut [f64], n: usize, ctr: &mut OpCounter) -> Result<Vec<Complex64>> {
    let w = n + 1;
    let at = |i: usize, j: usize| i * w + j;
    let mut wr = vec![0.0; n + 1];
    let mut wi = vec![0.0; n + 1];

    let mut anorm = 0.0;
    for i in 1..=n {
        for j in i.saturating_sub(1).max(1)..=n {
            anorm += a[at(i, j)].abs();
        }
    }
    let mut nn = n;
    let mut t = 0.0;
    let (mut p, mut q, mut r): (f64, f64, f64);
    while nn >= 1 {
        let mut its = 0usize;
        loop {
            // Look for a single small subdiagonal element.
            let mut l = nn;
            while l >= 2 {
                let mut s = a[at(l - 1, l - 1)].abs() + a[at(l, l)].abs();
                if s == 0.0 {
                    s = anorm;
                }
                if a[at(l, l - 1)].abs() <= f64::EPSILON * s {
                    a[at(l, l - 1)] = 0.0;
                    break;
                }
                l -= 1;
            }
            let mut x = a[at(nn, nn)];
            if l == nn {
                wr[nn] = x + t;
                wi[nn] = 0.0;
                nn -= 1;
                break;
            }
            let mut y = a[at(nn - 1, nn - 1)];
            let mut ww = a[at(nn, nn - 1)] * a[at(nn - 1, nn)];
            if l == nn - 1 {
                p = 0.5 * (y - x);
                q = p * p + ww;
                let mut z = q.abs().sqrt();
                x += t;
                if q >= 0.0 {
                    z = p + sign(z, p);
                    wr[nn - 1] = x + z;
                    wr[nn] = x + z;
                    if z != 0.0 {
                        wr[nn] = x - ww / z;
                    }
                    wi[nn - 1] = 0.0;
                    wi[nn] = 0.0;
                } else {
                    wr[nn - 1] = x + p;
                    wr[nn] = x + p;
                    wi[nn - 1] = -z;
                    wi[nn] = z;
                }
                ctr.mul(6);
                nn = nn.saturating_sub(2);
                break;
            }
            if its == MAX_QR_ITERATIONS {
                return Err(DqError::NumericFailure(format!(
                    "QR iteration did not converge after {its} sweeps (eigenvalue index {nn})"
                )));
            }
            if its > 0 && its % 10 == 0 {
                // Exceptional shift.
                t += x;
                for i in 1..=nn {
                    a[at(i, i)] -= x;
                }
                let s = a[at(nn, nn - 1)].abs() + a[at(nn - 1, nn - 2)].abs();
                x = 0.75 * s;
                y = x;
                ww = -0.4375 * s * s;
            }
            its += 1;
            let mut m = nn - 2;
            loop {
                let z = a[at(m, m)];
                let rr = x - z;
                let ss = y - z;
                p = (rr * ss - ww) / a[at(m + 1, m)] + a[at(m, m + 1)];
                q = a[at(m + 1, m + 1)] - z - rr - ss;
                r = a[at(m + 2, m + 1)];
                let s = p.abs() + q.abs() + r.abs();
                p /= s;
                q /= s;
                r /= s;
                ctr.mul(6);
                if m == l {
                    break;
                }
                let u = a[at(m, m - 1)].abs() * (q.abs() + r.abs());
                let v = p.abs() * (a[at(m - 1, m - 1)].abs() + z.abs() + a[at(m + 1, m + 1)].abs());
                if u <= f64::EPSILON * v {
                    break;
                }
                m -= 1;
            }
            for i in m + 2..=nn {
                a[at(i, i - 2)] = 0.0;
                if i != m + 2 {
                    a[at(i, i - 3)] = 0.0;
                }
            }
            let mut k = m;
            while k + 1 <= nn {
                if k != m {
                    p = a[at(k, k - 1)];
                    q = a[at(k + 1, k - 1)];
                    r = 0.0;
                    if k != nn - 1 {
                        r = a[at(k + 2, k - 1)];
                    }
                    x = p.abs() + q.abs() + r.abs();
                    if x != 0.0 {
                        p /= x;
                        q /= x;
                        r /= x;
                    }
                }
                let s = sign((p * p + q * q + r * r).sqrt(), p);
                if s != 0.0 {
                    if k == m {
                        if l != m {
                            a[at(k, k - 1)] = -a[at(k, k - 1)];
                        }
                    } else {
                        a[at(k, k - 1)] = -s * x;
                    }
                    p += s;
                    x = p / s;
                    y = q / s;
                    let z = r / s;
                    q /= p;
                    r /= p;
                    ctr.mul(12);
                    for j in k..=nn {
                        p = a[at(k, j)] + q * a[at(k + 1, j)];
                        if k != nn - 1 {
                            p += r * a[at(k + 2, j)];
                            a[at(k + 2, j)] -= p * z;
                        }
                        a[at(k + 1, j)] -= p * y;
                        a[at(k, j)] -= p * x;
                    }
                    ctr.fma(5 * (nn - k + 1) as u64);
                    let mmin = nn.min(k + 3);
                    for i in l..=mmin {
                        p = x * a[at(i, k)] + y * a[at(i, k + 1)];
                        if k != nn - 1 {
                            p += z * a[at(i, k + 2)];
                            a[at(i, k + 2)] -= p * r;
                        }
                        a[at(i, k + 1)] -= p * q;
                        a[at(i, k)] -= p;
                    }
                    ctr.fma(5 * (mmin + 1 - l) as u64);
                }
                k += 1;
            }
        }
    }
    Ok((1..=n).map(|i| Complex64::new(wr[i], wi[i])).collect())
}

/// Inverse iteration for one eigenvector of `m` near `lambda`, kept orthogonal
/// to `previous` (vectors already found for the same eigenvalue cluster).
pub fn eigenvector_for(m: &Matrix, lambda: Complex64, previous: &[Vec<Complex64>]) -> Vec<Complex64> {
    let n = m.rows();
    let scale = m.max_abs().max(f64::MIN_POSITIVE);
    let mut c: Vec<Complex64> = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            let mut v = Complex64::new(m[(i, j)], 0.0);
            if i == j {
                v -= lambda;
            }
            c.push(v);
        }
    }
    let lu = ComplexLu::factor(c, n, f64::EPSILON * scale);
    let mut x: Vec<Complex64> = (0..n)
        .map(|i| Complex64::new(1.0 + 0.37 * ((i * 7 + previous.len() * 3) % 11) as f64, 0.0))
        .collect();
    for _ in 0..INVERSE_ITERATION_STEPS + previous.len() {
        orthogonalize(&mut x, previous);
        x = lu.solve(&x);
        normalize(&mut x);
    }
    orthogonalize(&mut x, previous);
    normalize(&mut x);
    fix_phase(&mut x);
    x
}

fn orthogonalize(x: &mut [Complex64], basis: &[Vec<Complex64>]) {
    for b in basis {
        let dot: Complex64 = b.iter().zip(x.iter()).map(|(bi, xi)| bi.conj() * xi).sum();
        for (xi, bi) in x.iter_mut().zip(b) {
            *xi -= dot * bi;
        }
    }
}

fn normalize(x: &mut [Complex64]) {
    let norm = x.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt();
    if norm > 0.0 && norm.is_finite() {
        x.iter_mut().for_each(|v| *v /= norm);
    }
}

/// Rotates so the largest-magnitude component is real and positive.
fn fix_phase(x: &mut [Complex64]) {
    if let Some(big) = x
        .iter()
        .copied()
        .max_by(|a, b| a.norm().partial_cmp(&b.norm()).unwrap_or(std::cmp::Ordering::Equal))
    {
        if big.norm() > 0.0 {
            let phase = big.conj() / big.norm();
            x.iter_mut().for_each(|v| *v *= phase);
        }
    }
}

struct ComplexLu {
    lu: Vec<Complex64>,
    perm: Vec<usize>,
    n: usize,
}

impl ComplexLu {
    fn factor(mut lu: Vec<Complex64>, n: usize, floor: f64) -> Self {
        let mut perm: Vec<usize> = (0..n).collect();
        for k in 0..n {
            let p = (k..n)
                .max_by(|&a, &b| {
                    lu[a * n + k]
                        .norm()
                        .partial_cmp(&lu[b * n + k].norm())
                        .unwrap_or(std::cmp::Ordering::Equal)
                })
                .unwrap_or(k);
            if p != k {
                for j in 0..n {
                    lu.swap(k * n + j, p * n + j);
                }
                perm.swap(k, p);
            }
            if lu[k * n + k].norm() < floor {
                lu[k * n + k] = Complex64::new(floor, 0.0);
            }
            let pivot = lu[k * n + k];
            for i in k + 1..n {
                let l = lu[i * n + k] / pivot;
                lu[i * n + k] = l;
                for j in k + 1..n {
                    let u = lu[k * n + j];
                    lu[i * n + j] -= l * u;
                }
            }
        }
        Self { lu, perm, n }
    }

    fn solve(&self, b: &[Complex64]) -> Vec<Complex64> {
        let n = self.n;
        let mut x: Vec<Complex64> = self.perm.iter().map(|&p| b[p]).collect();
        for i in 0..n {
            for j in 0..i {
                let l = self.lu[i * n + j];
                x[i] = x[i] - l * x[j];
            }
        }
        for i in (0..n).rev() {
            for j in i + 1..n {
                let u = self.lu[i * n + j];
                x[i] = x[i] - u * x[j];
            }
            x[i] /= self.lu[i * n + i];
        }
        x
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::lu_det;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn assert_spectrum(got: &[Complex64], want: &[Complex64], tol: f64) {
        assert_eq!(got.len(), want.len());
        for (g, w) in got.iter().zip(want) {
            assert!((g - w).norm() <= tol, "got {got:?}, want {want:?}");
        }
    }

    #[test]
    fn diagonal_spectrum() {
        let ev = eig_dense(&Matrix::diag(&[3.0, 1.0, 2.0])).unwrap();
        let want: Vec<_> = [1.0, 2.0, 3.0].iter().map(|&v| Complex64::new(v, 0.0)).collect();
        assert_spectrum(&ev, &want, 1e-14);
    }

    #[test]
    fn rotation_generator_has_imaginary_pair() {
        let ev = eig_dense(&Matrix::from_rows(&[[0.0, -1.0], [1.0, 0.0]])).unwrap();
        assert_spectrum(
            &ev,
            &[Complex64::new(0.0, -1.0), Complex64::new(0.0, 1.0)],
            1e-14,
        );
    }

    #[test]
    fn companion_matrix_roots() {
        // x^3 - 6x^2 + 11x - 6 = (x-1)(x-2)(x-3)
        let c = Matrix::from_rows(&[[6.0, -11.0, 6.0], [1.0, 0.0, 0.0], [0.0, 1.0, 0.0]]);
        let ev = eig_dense(&c).unwrap();
        let want: Vec<_> = [1.0, 2.0, 3.0].iter().map(|&v| Complex64::new(v, 0.0)).collect();
        assert_spectrum(&ev, &want, 1e-9);
    }

    #[test]
    fn random_matrices_satisfy_characteristic_polynomial() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..100 {
            let m = Matrix::from_fn(8, 8, |_, _| rng.gen_range(-1.0..1.0));
            let norm = m.max_abs() * 8.0;
            let ev = eig_dense(&m).unwrap();
            assert_eq!(ev.len(), 8);
            for lambda in ev {
                // |det(M - λI)| via the complex LU pivots.
                let n = 8;
                let mut c = Vec::with_capacity(n * n);
                for i in 0..n {
                    for j in 0..n {
                        let mut v = Complex64::new(m[(i, j)], 0.0);
                        if i == j {
                            v -= lambda;
                        }
                        c.push(v);
                    }
                }
                let lu = ComplexLu::factor(c, n, 0.0);
                let det = (0..n).fold(1.0, |d, i| d * lu.lu[i * n + i].norm());
                assert!(det <= 1e-6 * norm.powi(8), "det {det} at {lambda}");
            }
        }
        // sanity: the real determinant of a random matrix is the product of eigenvalues
        let m = Matrix::from_fn(6, 6, |i, j| ((i * 6 + j) as f64 * 0.7).sin());
        let prod = eig_dense(&m).unwrap().iter().fold(Complex64::new(1.0, 0.0), |p, v| p * v);
        assert!((prod.re - lu_det(&m)).abs() < 1e-10 && prod.im.abs() < 1e-10);
    }

    #[test]
    fn eigenvectors_have_small_residual() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let m = Matrix::from_fn(7, 7, |_, _| rng.gen_range(-1.0..1.0));
        let eig = eig_with_vectors(&m).unwrap();
        for (lambda, v) in eig.values.iter().zip(&eig.vectors) {
            let norm: f64 = v.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
            assert!((norm - 1.0).abs() < 1e-12);
            for i in 0..7 {
                let mv: Complex64 = (0..7).map(|j| v[j] * m[(i, j)]).sum();
                assert!((mv - lambda * v[i]).norm() < 1e-9);
            }
        }
    }

    #[test]
    fn repeated_eigenvalue_gets_independent_vectors() {
        let m = Matrix::diag(&[2.0, 2.0, 5.0]);
        let eig = eig_with_vectors(&m).unwrap();
        let (a, b) = (&eig.vectors[0], &eig.vectors[1]);
        let dot: Complex64 = a.iter().zip(b).map(|(x, y)| x.conj() * y).sum();
        assert!(dot.norm() < 1e-10);
    }
}
