//! Small dense complex matrices.
//!
//! Entries are stored row-major. Tensor products put the probe factor
//! first and the control factor second, so index `i * d_control + a`
//! addresses probe level `i` and control level `a`.

use std::ops::{Add, Mul, Sub};

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::Scalar;

/// Square complex matrix of dimension `dim`.
#[derive(Clone, Debug, PartialEq)]
pub struct Matrix<T> {
    dim: usize,
    data: Vec<Complex<T>>,
}

/// Which factor of a bipartite operator to keep in [`Matrix::partial_trace`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Subsystem {
    Probe,
    Control,
}

/// Eigendecomposition of a Hermitian matrix.
#[derive(Clone, Debug)]
pub struct EigDecomp<T> {
    /// Ascending eigenvalues.
    pub eigenvalues: Vec<T>,
    /// Orthonormal eigenvectors stored as columns, in eigenvalue order.
    pub eigenvectors: Matrix<T>,
}

const MAX_SWEEPS: usize = 100;

impl<T: Scalar> Matrix<T> {
    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            data: vec![Complex::new(T::zero(), T::zero()); dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m[(i, i)] = Complex::new(T::one(), T::zero());
        }
        m
    }

    /// Builds a matrix from row-major entries; rejects wrong lengths and non-finite values.
    pub fn from_vec(dim: usize, data: Vec<Complex<T>>) -> Result<Self> {
        if dim == 0 || data.len() != dim * dim {
            return Err(Error::BadShape {
                dim,
                len: data.len(),
            });
        }
        if data.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(Self { dim, data })
    }

    /// Row-major construction from real and imaginary pairs. Panics on a ragged or non-square input.
    pub fn from_rows(rows: &[&[(f64, f64)]]) -> Self {
        let dim = rows.len();
        let data = rows
            .iter()
            .flat_map(|row| {
                assert_eq!(row.len(), dim, "matrix rows must be square");
                row.iter()
                    .map(|&(re, im)| Complex::new(T::lit(re), T::lit(im)))
            })
            .collect();
        Self::from_vec(dim, data).expect("finite square entries")
    }

    pub fn diag(values: &[Complex<T>]) -> Self {
        let mut m = Self::zeros(values.len());
        for (i, v) in values.iter().enumerate() {
            m[(i, i)] = *v;
        }
        m
    }

    pub fn real_diag(values: &[T]) -> Self {
        let v: Vec<_> = values.iter().map(|&x| Complex::new(x, T::zero())).collect();
        Self::diag(&v)
    }

    pub fn pauli_x() -> Self {
        Self::from_rows(&[&[(0.0, 0.0), (1.0, 0.0)], &[(1.0, 0.0), (0.0, 0.0)]])
    }

    pub fn pauli_y() -> Self {
        Self::from_rows(&[&[(0.0, 0.0), (0.0, -1.0)], &[(0.0, 1.0), (0.0, 0.0)]])
    }

    pub fn pauli_z() -> Self {
        Self::from_rows(&[&[(1.0, 0.0), (0.0, 0.0)], &[(0.0, 0.0), (-1.0, 0.0)]])
    }

    /// `|i⟩⟨j|` in dimension `dim`.
    pub fn unit(dim: usize, i: usize, j: usize) -> Self {
        let mut m = Self::zeros(dim);
        m[(i, j)] = Complex::new(T::one(), T::zero());
        m
    }

    /// `|v⟩⟨v|` for a column vector `v`.
    pub fn outer(v: &[Complex<T>]) -> Self {
        let dim = v.len();
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            for j in 0..dim {
                m[(i, j)] = v[i] * v[j].conj();
            }
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entries(&self) -> &[Complex<T>] {
        &self.data
    }

    pub fn get(&self, i: usize, j: usize) -> Complex<T> {
        self.data[i * self.dim + j]
    }

    pub fn mat_mul(&self, other: &Self) -> Result<Self> {
        self.same_dim(other)?;
        let n = self.dim;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.data[i * n + k];
                if a.re == T::zero() && a.im == T::zero() {
                    continue;
                }
                for j in 0..n {
                    out.data[i * n + j] += a * other.data[k * n + j];
                }
            }
        }
        Ok(out)
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        let n = self.dim;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                out.data[j * n + i] = self.data[i * n + j].conj();
            }
        }
        out
    }

    /// Kronecker product `self ⊗ other`; `self` indexes the coarse blocks.
    pub fn kron(&self, other: &Self) -> Self {
        let (na, nb) = (self.dim, other.dim);
        let n = na * nb;
        let mut out = Self::zeros(n);
        for i in 0..na {
            for j in 0..na {
                let a = self.data[i * na + j];
                for k in 0..nb {
                    for l in 0..nb {
                        out.data[(i * nb + k) * n + j * nb + l] = a * other.data[k * nb + l];
                    }
                }
            }
        }
        out
    }

    /// Reduced operator on `keep` for a bipartite operator with factor
    /// dimensions `dims = (d_probe, d_control)`.
    pub fn partial_trace(&self, keep: Subsystem, dims: (usize, usize)) -> Result<Self> {
        let (dp, dc) = dims;
        if self.dim != dp * dc {
            return Err(Error::DimensionMismatch {
                expected: dp * dc,
                found: self.dim,
            });
        }
        let n = self.dim;
        let zero = Complex::new(T::zero(), T::zero());
        Ok(match keep {
            Subsystem::Probe => {
                let mut out = Self::zeros(dp);
                for i in 0..dp {
                    for j in 0..dp {
                        out.data[i * dp + j] = (0..dc)
                            .map(|a| self.data[(i * dc + a) * n + j * dc + a])
                            .fold(zero, |s, z| s + z);
                    }
                }
                out
            }
            Subsystem::Control => {
                let mut out = Self::zeros(dc);
                for a in 0..dc {
                    for b in 0..dc {
                        out.data[a * dc + b] = (0..dp)
                            .map(|i| self.data[(i * dc + a) * n + i * dc + b])
                            .fold(zero, |s, z| s + z);
                    }
                }
                out
            }
        })
    }

    pub fn trace(&self) -> Complex<T> {
        (0..self.dim).fold(Complex::new(T::zero(), T::zero()), |s, i| {
            s + self.data[i * self.dim + i]
        })
    }

    pub fn scale(&self, factor: Complex<T>) -> Self {
        Self {
            dim: self.dim,
            data: self.data.iter().map(|&z| z * factor).collect(),
        }
    }

    pub fn scale_real(&self, factor: T) -> Self {
        self.scale(Complex::new(factor, T::zero()))
    }

    /// Largest entrywise modulus of `self − other`.
    pub fn max_abs_diff(&self, other: &Self) -> T {
        assert_eq!(self.dim, other.dim, "max_abs_diff on different dimensions");
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (*a - *b).norm())
            .fold(T::zero(), T::max)
    }

    /// Largest entrywise modulus of `self − self†`.
    pub fn hermitian_deviation(&self) -> T {
        self.max_abs_diff(&self.adjoint())
    }

    pub fn frobenius_norm(&self) -> T {
        self.data.iter().map(|z| z.norm_sqr()).sum::<T>().sqrt()
    }

    /// `self · other · self†`.
    pub fn conjugate(&self, other: &Self) -> Result<Self> {
        self.mat_mul(other)?.mat_mul(&self.adjoint())
    }

    fn same_dim(&self, other: &Self) -> Result<()> {
        if self.dim == other.dim {
            Ok(())
        } else {
            Err(Error::DimensionMismatch {
                expected: self.dim,
                found: other.dim,
            })
        }
    }

    /// Hermitian eigendecomposition by cyclic Jacobi rotations.
    ///
    /// Pairs are visited in fixed row-major `(p, q)` order; a sweep ends
    /// the iteration once the off-diagonal Frobenius norm drops below the
    /// convergence tolerance times the matrix norm.
    pub fn herm_eig(&self) -> Result<EigDecomp<T>> {
        let dev = self.hermitian_deviation();
        if !(dev < T::structural_tol()) {
            return Err(Error::NotHermitian(dev.as_f64()));
        }
        let n = self.dim;
        let half = T::lit(0.5);
        let mut a = self.clone();
        for i in 0..n {
            for j in 0..n {
                a.data[i * n + j] = (self.data[i * n + j] + self.data[j * n + i].conj()) * half;
            }
        }
        let mut v = Self::identity(n);
        let threshold = T::convergence_tol() * a.frobenius_norm();

        let mut converged = false;
        for _ in 0..=MAX_SWEEPS {
            if off_diagonal_norm(&a) <= threshold {
                converged = true;
                break;
            }
            for p in 0..n {
                for q in (p + 1)..n {
                    rotate(&mut a, &mut v, p, q);
                }
            }
        }
        if !converged {
            return Err(Error::NoConvergence(MAX_SWEEPS));
        }

        let mut order: Vec<usize> = (0..n).collect();
        let diag: Vec<T> = (0..n).map(|i| a.data[i * n + i].re).collect();
        order.sort_by(|&i, &j| diag[i].partial_cmp(&diag[j]).expect("finite eigenvalues"));
        let eigenvalues = order.iter().map(|&i| diag[i]).collect();
        let mut vectors = Self::zeros(n);
        for (col, &src) in order.iter().enumerate() {
            for row in 0..n {
                vectors.data[row * n + col] = v.data[row * n + src];
            }
        }
        Ok(EigDecomp {
            eigenvalues,
            eigenvectors: vectors,
        })
    }

    /// Column `j` as a vector.
    pub fn column(&self, j: usize) -> Vec<Complex<T>> {
        (0..self.dim).map(|i| self.data[i * self.dim + j]).collect()
    }

    /// `⟨u| self |v⟩`.
    pub fn sandwich(&self, u: &[Complex<T>], v: &[Complex<T>]) -> Complex<T> {
        let n = self.dim;
        let mut acc = Complex::new(T::zero(), T::zero());
        for (i, ui) in u.iter().enumerate().take(n) {
            let mut row = Complex::new(T::zero(), T::zero());
            for (j, vj) in v.iter().enumerate().take(n) {
                row += self.data[i * n + j] * vj;
            }
            acc += ui.conj() * row;
        }
        acc
    }
}

fn off_diagonal_norm<T: Scalar>(a: &Matrix<T>) -> T {
    let n = a.dim;
    let mut s = T::zero();
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += a.data[i * n + j].norm_sqr();
            }
        }
    }
    s.sqrt()
}

/// One complex Jacobi rotation zeroing `a[p][q]`: `a ← G† a G`, `v ← v G`.
fn rotate<T: Scalar>(a: &mut Matrix<T>, v: &mut Matrix<T>, p: usize, q: usize) {
    let n = a.dim;
    let beta = a.data[p * n + q];
    let mag = beta.norm();
    if mag == T::zero() {
        return;
    }
    let phase = beta / mag;
    let alpha = a.data[p * n + p].re;
    let gamma = a.data[q * n + q].re;
    let theta = (gamma - alpha) / (T::lit(2.0) * mag);
    let t = {
        let sign = if theta >= T::zero() { T::one() } else { -T::one() };
        sign / (theta.abs() + (theta * theta + T::one()).sqrt())
    };
    let c = T::one() / (t * t + T::one()).sqrt();
    let s = t * c;

    let zero = T::zero();
    let g_pp = Complex::new(c, zero);
    let g_pq = Complex::new(s, zero);
    let g_qp = phase.conj() * (-s);
    let g_qq = phase.conj() * c;

    for k in 0..n {
        let akp = a.data[k * n + p];
        let akq = a.data[k * n + q];
        a.data[k * n + p] = akp * g_pp + akq * g_qp;
        a.data[k * n + q] = akp * g_pq + akq * g_qq;
    }
    for k in 0..n {
        let apk = a.data[p * n + k];
        let aqk = a.data[q * n + k];
        a.data[p * n + k] = g_pp.conj() * apk + g_qp.conj() * aqk;
        a.data[q * n + k] = g_pq.conj() * apk + g_qq.conj() * aqk;
    }
    a.data[p * n + q] = Complex::new(zero, zero);
    a.data[q * n + p] = Complex::new(zero, zero);
    a.data[p * n + p].im = zero;
    a.data[q * n + q].im = zero;

    for k in 0..n {
        let vkp = v.data[k * n + p];
        let vkq = v.data[k * n + q];
        v.data[k * n + p] = vkp * g_pp + vkq * g_qp;
        v.data[k * n + q] = vkp * g_pq + vkq * g_qq;
    }
}

/// Choi matrix `Σ_jk |j⟩⟨k| ⊗ Σ_m K_m |j⟩⟨k| K_m†` (input factor first).
pub fn channel_choi<T: Scalar>(kraus: &[Matrix<T>]) -> Result<Matrix<T>> {
    let first = kraus.first().ok_or(Error::EmptyChannel)?;
    let d = first.dim();
    for k in kraus {
        first.same_dim(k)?;
    }
    let n = d * d;
    let mut choi = Matrix::zeros(n);
    for j in 0..d {
        for k in 0..d {
            let basis = Matrix::unit(d, j, k);
            let mut image = Matrix::zeros(d);
            for op in kraus {
                image = &image + &op.conjugate(&basis)?;
            }
            for a in 0..d {
                for b in 0..d {
                    choi.data[(j * d + a) * n + k * d + b] = image.data[a * d + b];
                }
            }
        }
    }
    Ok(choi)
}

impl<T> std::ops::Index<(usize, usize)> for Matrix<T> {
    type Output = Complex<T>;
    fn index(&self, (i, j): (usize, usize)) -> &Complex<T> {
        &self.data[i * self.dim + j]
    }
}

impl<T> std::ops::IndexMut<(usize, usize)> for Matrix<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex<T> {
        &mut self.data[i * self.dim + j]
    }
}

impl<T: Scalar> Add for &Matrix<T> {
    type Output = Matrix<T>;
    fn add(self, rhs: Self) -> Matrix<T> {
        assert_eq!(self.dim, rhs.dim, "adding matrices of different dimension");
        Matrix {
            dim: self.dim,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl<T: Scalar> Sub for &Matrix<T> {
    type Output = Matrix<T>;
    fn sub(self, rhs: Self) -> Matrix<T> {
        assert_eq!(self.dim, rhs.dim, "subtracting matrices of different dimension");
        Matrix {
            dim: self.dim,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}

/// Panicking product for operands already known to share a dimension.
impl<T: Scalar> Mul for &Matrix<T> {
    type Output = Matrix<T>;
    fn mul(self, rhs: Self) -> Matrix<T> {
        self.mat_mul(rhs).expect("multiplying matrices of different dimension")
    }
}
