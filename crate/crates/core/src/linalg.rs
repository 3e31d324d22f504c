//! Dense complex matrices and the Hermitian eigensolver.

use alloc::vec;
use alloc::vec::Vec;
use core::ops::{Index, IndexMut};

use num_complex::Complex;
use num_traits::Zero;

use crate::error::{Error, Result};

pub type C64 = Complex<f64>;

pub(crate) const ZERO: C64 = C64::new(0.0, 0.0);
pub(crate) const ONE: C64 = C64::new(1.0, 0.0);

/// Square complex matrix stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct CMatrix {
    dim: usize,
    data: Vec<C64>,
}

impl CMatrix {
    pub fn zeros(dim: usize) -> Self {
        CMatrix {
            dim,
            data: vec![ZERO; dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m[(i, i)] = ONE;
        }
        m
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        let mut data = Vec::with_capacity(dim * dim);
        for r in 0..dim {
            for c in 0..dim {
                data.push(f(r, c));
            }
        }
        CMatrix { dim, data }
    }

    pub fn from_diagonal(diag: &[C64]) -> Self {
        let mut m = Self::zeros(diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m[(i, i)] = d;
        }
        m
    }

    /// Builds a matrix from row-major entries; the length must be a perfect square.
    pub fn from_row_major(data: Vec<C64>) -> Result<Self> {
        let dim = isqrt(data.len());
        if dim * dim != data.len() {
            return Err(Error::BadLength { len: data.len() });
        }
        Ok(CMatrix { dim, data })
    }

    /// `|a⟩⟨b|`
    pub fn outer(a: &[C64], b: &[C64]) -> Self {
        assert_eq!(a.len(), b.len());
        Self::from_fn(a.len(), |r, c| a[r] * b[c].conj())
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn as_slice(&self) -> &[C64] {
        &self.data
    }

    pub fn into_vec(self) -> Vec<C64> {
        self.data
    }

    pub fn row(&self, r: usize) -> &[C64] {
        &self.data[r * self.dim..(r + 1) * self.dim]
    }

    pub fn diagonal(&self) -> Vec<C64> {
        (0..self.dim).map(|i| self[(i, i)]).collect()
    }

    pub fn trace(&self) -> C64 {
        (0..self.dim).map(|i| self[(i, i)]).sum()
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.dim, |r, c| self[(c, r)].conj())
    }

    pub fn scale(&self, s: C64) -> Self {
        CMatrix {
            dim: self.dim,
            data: self.data.iter().map(|&x| x * s).collect(),
        }
    }

    pub fn scale_real(&self, s: f64) -> Self {
        CMatrix {
            dim: self.dim,
            data: self.data.iter().map(|&x| x * s).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim);
        CMatrix {
            dim: self.dim,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim);
        CMatrix {
            dim: self.dim,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn matmul(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim);
        let n = self.dim;
        let mut out = Self::zeros(n);
        for r in 0..n {
            for k in 0..n {
                let a = self.data[r * n + k];
                if a.is_zero() {
                    continue;
                }
                let orow = &other.data[k * n..(k + 1) * n];
                let dst = &mut out.data[r * n..(r + 1) * n];
                for (d, &b) in dst.iter_mut().zip(orow) {
                    *d += a * b;
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[C64]) -> Vec<C64> {
        assert_eq!(self.dim, v.len());
        (0..self.dim)
            .map(|r| self.row(r).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// Kronecker product `self ⊗ other`; `self` occupies the high-order bits.
    pub fn kron(&self, other: &Self) -> Self {
        let (m, n) = (self.dim, other.dim);
        Self::from_fn(m * n, |r, c| {
            self[(r / n, c / n)] * other[(r % n, c % n)]
        })
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!(self.dim, other.dim);
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt()
    }

    /// `max |m - m†|` over entries.
    pub fn hermitian_deviation(&self) -> f64 {
        let n = self.dim;
        let mut dev = 0.0f64;
        for r in 0..n {
            for c in r..n {
                dev = dev.max((self[(r, c)] - self[(c, r)].conj()).norm());
            }
        }
        dev
    }

    /// `max |m†m - I|` over entries.
    pub fn unitarity_deviation(&self) -> f64 {
        self.adjoint()
            .matmul(self)
            .max_abs_diff(&Self::identity(self.dim))
    }

    /// Replaces `m` with `(m + m†)/2`.
    pub fn hermitian_part(&self) -> Self {
        Self::from_fn(self.dim, |r, c| (self[(r, c)] + self[(c, r)].conj()) * 0.5)
    }
}

impl Index<(usize, usize)> for CMatrix {
    type Output = C64;

    #[inline]
    fn index(&self, (r, c): (usize, usize)) -> &C64 {
        &self.data[r * self.dim + c]
    }
}

impl IndexMut<(usize, usize)> for CMatrix {
    #[inline]
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut C64 {
        &mut self.data[r * self.dim + c]
    }
}

pub(crate) fn isqrt(n: usize) -> usize {
    let mut r = (n as f64).sqrt() as usize;
    while r * r > n {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= n {
        r += 1;
    }
    r
}

/// Tolerance used to reject non-Hermitian eigensolver input.
pub const HERMITIAN_TOL: f64 = 1e-9;

/// Spectral decomposition `m = V diag(λ) V†` of a Hermitian matrix.
#[derive(Debug, Clone)]
pub struct Eigen {
    /// Eigenvalues in descending order.
    pub values: Vec<f64>,
    /// Column `k` is the eigenvector for `values[k]`.
    pub vectors: CMatrix,
}

impl Eigen {
    pub fn vector(&self, k: usize) -> Vec<C64> {
        let n = self.vectors.dim();
        (0..n).map(|r| self.vectors[(r, k)]).collect()
    }

    /// `V f(λ) V†`
    pub fn reassemble(&self, values: &[f64]) -> CMatrix {
        let n = self.vectors.dim();
        assert_eq!(values.len(), n);
        let v = &self.vectors;
        CMatrix::from_fn(n, |r, c| {
            let mut acc = ZERO;
            for (k, &l) in values.iter().enumerate() {
                if l != 0.0 {
                    acc += v[(r, k)] * v[(c, k)].conj() * l;
                }
            }
            acc
        })
    }
}

/// Full eigendecomposition of a Hermitian matrix by cyclic complex Jacobi sweeps.
pub fn hermitian_eigen(m: &CMatrix) -> Result<Eigen> {
    check_hermitian(m)?;
    let mut a = m.hermitian_part();
    let mut v = CMatrix::identity(m.dim());
    jacobi(&mut a, Some(&mut v));
    let n = m.dim();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(j, j)].re.total_cmp(&a[(i, i)].re));
    let values = order.iter().map(|&i| a[(i, i)].re).collect();
    let vectors = CMatrix::from_fn(n, |r, c| v[(r, order[c])]);
    Ok(Eigen { values, vectors })
}

/// Eigenvalues (descending) of a Hermitian matrix.
pub fn hermitian_eigenvalues(m: &CMatrix) -> Result<Vec<f64>> {
    check_hermitian(m)?;
    Ok(eigenvalues_unchecked(m.hermitian_part()))
}

/// Eigenvalues of a matrix already known to be Hermitian; consumes it as workspace.
pub(crate) fn eigenvalues_unchecked(mut a: CMatrix) -> Vec<f64> {
    let n = a.dim();
    if n == 1 {
        return vec![a[(0, 0)].re];
    }
    if n == 2 {
        // closed form for the qubit case
        let p = a[(0, 0)].re;
        let q = a[(1, 1)].re;
        let mean = 0.5 * (p + q);
        let rad = (0.25 * (p - q) * (p - q) + a[(0, 1)].norm_sqr()).sqrt();
        return vec![mean + rad, mean - rad];
    }
    jacobi(&mut a, None);
    let mut values: Vec<f64> = (0..n).map(|i| a[(i, i)].re).collect();
    values.sort_by(|x, y| y.total_cmp(x));
    values
}

fn check_hermitian(m: &CMatrix) -> Result<()> {
    let deviation = m.hermitian_deviation();
    if deviation > HERMITIAN_TOL || deviation.is_nan() {
        return Err(Error::NotHermitian { deviation });
    }
    Ok(())
}

const MAX_SWEEPS: usize = 64;

fn jacobi(a: &mut CMatrix, mut vecs: Option<&mut CMatrix>) {
    let n = a.dim();
    let scale = a.frobenius_norm();
    if scale == 0.0 {
        return;
    }
    let eps = f64::EPSILON * scale;
    for _ in 0..MAX_SWEEPS {
        let mut off = 0.0;
        for p in 0..n {
            for q in p + 1..n {
                off += a[(p, q)].norm_sqr();
            }
        }
        if off.sqrt() <= eps {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[(p, q)];
                let r = apq.norm();
                if r <= 1e-3 * eps {
                    continue;
                }
                let app = a[(p, p)].re;
                let aqq = a[(q, q)].re;
                // phase e^{-iα} that makes the (p, q) entry real
                let ph = apq.conj() / r;
                let tau = (aqq - app) / (2.0 * r);
                let t = if tau >= 0.0 {
                    1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    -1.0 / (-tau + (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                // U = [[c, s], [-s·ph, c·ph]] on (p, q); A ← U† A U
                let u_qp = -ph * s;
                let u_qq = ph * c;
                for k in 0..n {
                    let akp = a[(k, p)];
                    let akq = a[(k, q)];
                    a[(k, p)] = akp * c + akq * u_qp;
                    a[(k, q)] = akp * s + akq * u_qq;
                }
                for k in 0..n {
                    let apk = a[(p, k)];
                    let aqk = a[(q, k)];
                    a[(p, k)] = apk * c + aqk * u_qp.conj();
                    a[(q, k)] = apk * s + aqk * u_qq.conj();
                }
                a[(p, q)] = ZERO;
                a[(q, p)] = ZERO;
                a[(p, p)] = C64::new(app - t * r, 0.0);
                a[(q, q)] = C64::new(aqq + t * r, 0.0);
                if let Some(v) = vecs.as_deref_mut() {
                    for k in 0..n {
                        let vkp = v[(k, p)];
                        let vkq = v[(k, q)];
                        v[(k, p)] = vkp * c + vkq * u_qp;
                        v[(k, q)] = vkp * s + vkq * u_qq;
                    }
                }
            }
        }
    }
}

/// `exp(-i·t·h)` for Hermitian `h`, via its spectral decomposition.
pub fn unitary_exp(h: &CMatrix, t: f64) -> Result<CMatrix> {
    let eig = hermitian_eigen(h)?;
    let n = h.dim();
    let phases: Vec<C64> = eig
        .values
        .iter()
        .map(|&l| C64::new(0.0, -l * t).exp())
        .collect();
    let v = &eig.vectors;
    Ok(CMatrix::from_fn(n, |r, c| {
        let mut acc = ZERO;
        for (k, &ph) in phases.iter().enumerate() {
            acc += v[(r, k)] * ph * v[(c, k)].conj();
        }
        acc
    }))
}

/// The single-qubit Pauli matrices `I, X, Y, Z`.
pub mod pauli {
    use super::{CMatrix, C64, ONE, ZERO};

    pub fn i() -> CMatrix {
        CMatrix::identity(2)
    }

    pub fn x() -> CMatrix {
        CMatrix::from_fn(2, |r, c| if r != c { ONE } else { ZERO })
    }

    pub fn y() -> CMatrix {
        let mut m = CMatrix::zeros(2);
        m[(0, 1)] = C64::new(0.0, -1.0);
        m[(1, 0)] = C64::new(0.0, 1.0);
        m
    }

    pub fn z() -> CMatrix {
        CMatrix::from_diagonal(&[ONE, -ONE])
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn diagonal_spectrum() {
        let m = CMatrix::from_diagonal(&[c(0.3, 0.0), c(0.7, 0.0)]);
        let e = hermitian_eigen(&m).unwrap();
        assert!((e.values[0] - 0.7).abs() < 1e-15);
        assert!((e.values[1] - 0.3).abs() < 1e-15);
    }

    #[test]
    fn pauli_x_spectrum() {
        let e = hermitian_eigen(&pauli::x()).unwrap();
        assert!((e.values[0] - 1.0).abs() < 1e-12);
        assert!((e.values[1] + 1.0).abs() < 1e-12);
        let plus = e.vector(0);
        let h = core::f64::consts::FRAC_1_SQRT_2;
        // up to a global phase
        let overlap = (plus[0].conj() * h + plus[1].conj() * h).norm();
        assert!((overlap - 1.0).abs() < 1e-12);
        let minus = e.vector(1);
        let overlap = (minus[0].conj() * h - minus[1].conj() * h).norm();
        assert!((overlap - 1.0).abs() < 1e-12);
    }

    #[test]
    fn rejects_non_hermitian() {
        let mut m = CMatrix::zeros(2);
        m[(0, 1)] = ONE;
        assert!(matches!(
            hermitian_eigen(&m),
            Err(Error::NotHermitian { .. })
        ));
    }

    #[test]
    fn complex_3x3_reconstructs() {
        let m = CMatrix::from_row_major(vec![
            c(2.0, 0.0),
            c(0.5, 0.3),
            c(-0.1, 0.9),
            c(0.5, -0.3),
            c(-1.0, 0.0),
            c(0.0, 0.4),
            c(-0.1, -0.9),
            c(0.0, -0.4),
            c(0.25, 0.0),
        ])
        .unwrap();
        let e = hermitian_eigen(&m).unwrap();
        assert!(e.reassemble(&e.values).max_abs_diff(&m) < 1e-12);
        assert!(e.vectors.unitarity_deviation() < 1e-12);
        let vals = hermitian_eigenvalues(&m).unwrap();
        for (a, b) in vals.iter().zip(&e.values) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn kron_orders_left_operand_high() {
        let m = pauli::z().kron(&pauli::i());
        let d: Vec<f64> = m.diagonal().iter().map(|x| x.re).collect();
        assert_eq!(d, vec![1.0, 1.0, -1.0, -1.0]);
    }

    #[test]
    fn exp_of_pauli_x() {
        let theta = 0.7;
        let u = unitary_exp(&pauli::x(), theta).unwrap();
        let expected = CMatrix::from_fn(2, |r, col| {
            if r == col {
                c(theta.cos(), 0.0)
            } else {
                c(0.0, -theta.sin())
            }
        });
        assert!(u.max_abs_diff(&expected) < 1e-12);
    }
}
