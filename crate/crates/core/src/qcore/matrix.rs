use std::ops::{Index, IndexMut};

use num_complex::Complex64;

use crate::error::{invalid, Error, Result};

/// Dense square complex matrix, row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexMatrix {
    dim: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    pub fn zeros(dim: usize) -> Self {
        Self { dim, data: vec![Complex64::new(0.0, 0.0); dim * dim] }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m[(i, i)] = Complex64::new(1.0, 0.0);
        }
        m
    }

    /// Rejects wrong lengths and non-finite entries.
    pub fn from_vec(dim: usize, data: Vec<Complex64>) -> Result<Self> {
        if dim == 0 {
            return invalid("matrix dimension must be positive");
        }
        if data.len() != dim * dim {
            return invalid(format!("{} entries do not form a {dim}x{dim} matrix", data.len()));
        }
        if data.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::InvalidState("matrix has non-finite entries".into()));
        }
        Ok(Self { dim, data })
    }

    pub fn from_real_diagonal(diag: &[f64]) -> Self {
        let mut m = Self::zeros(diag.len());
        for (i, &v) in diag.iter().enumerate() {
            m[(i, i)] = Complex64::new(v, 0.0);
        }
        m
    }

    /// `|ψ⟩⟨ψ|`.
    pub fn outer(psi: &[Complex64]) -> Self {
        let dim = psi.len();
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            for j in 0..dim {
                m[(i, j)] = psi[i] * psi[j].conj();
            }
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    pub fn as_mut_slice(&mut self) -> &mut [Complex64] {
        &mut self.data
    }

    pub fn into_vec(self) -> Vec<Complex64> {
        self.data
    }

    pub fn row(&self, i: usize) -> &[Complex64] {
        &self.data[i * self.dim..(i + 1) * self.dim]
    }

    fn check_dim(&self, other: &Self) -> Result<()> {
        if self.dim != other.dim {
            return invalid(format!("dimension mismatch: {} vs {}", self.dim, other.dim));
        }
        Ok(())
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_dim(other)?;
        let d = self.dim;
        let mut out = Self::zeros(d);
        for i in 0..d {
            for k in 0..d {
                let a = self.data[i * d + k];
                if a.re == 0.0 && a.im == 0.0 {
                    continue;
                }
                let row = &other.data[k * d..(k + 1) * d];
                let dst = &mut out.data[i * d..(i + 1) * d];
                for (o, b) in dst.iter_mut().zip(row) {
                    *o += a * b;
                }
            }
        }
        Ok(out)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_dim(other)?;
        Ok(Self { dim: self.dim, data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect() })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_dim(other)?;
        Ok(Self { dim: self.dim, data: self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect() })
    }

    pub fn scale(&self, factor: Complex64) -> Self {
        Self { dim: self.dim, data: self.data.iter().map(|a| a * factor).collect() }
    }

    pub fn scale_real(&self, factor: f64) -> Self {
        Self { dim: self.dim, data: self.data.iter().map(|a| a * factor).collect() }
    }

    /// In-place `self += factor · other`.
    pub fn add_scaled(&mut self, other: &Self, factor: f64) -> Result<()> {
        self.check_dim(other)?;
        for (a, b) in self.data.iter_mut().zip(&other.data) {
            *a += b * factor;
        }
        Ok(())
    }

    pub fn adjoint(&self) -> Self {
        let d = self.dim;
        let mut out = Self::zeros(d);
        for i in 0..d {
            for j in 0..d {
                out.data[j * d + i] = self.data[i * d + j].conj();
            }
        }
        out
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim).map(|i| self.data[i * self.dim + i]).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Largest entrywise |a − b|.
    pub fn max_abs_diff(&self, other: &Self) -> Result<f64> {
        self.check_dim(other)?;
        Ok(self.data.iter().zip(&other.data).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max))
    }

    /// Largest |M_ij − conj(M_ji)|.
    pub fn hermitian_defect(&self) -> f64 {
        let d = self.dim;
        let mut worst = 0.0f64;
        for i in 0..d {
            for j in i..d {
                worst = worst.max((self.data[i * d + j] - self.data[j * d + i].conj()).norm());
            }
        }
        worst
    }

    /// Kronecker product `self ⊗ other`.
    pub fn kron(&self, other: &Self) -> Self {
        let (p, q) = (self.dim, other.dim);
        let d = p * q;
        let mut out = Self::zeros(d);
        for i in 0..p {
            for j in 0..p {
                let a = self.data[i * p + j];
                for k in 0..q {
                    for l in 0..q {
                        out.data[(i * q + k) * d + (j * q + l)] = a * other.data[k * q + l];
                    }
                }
            }
        }
        out
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;

    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[i * self.dim + j]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.data[i * self.dim + j]
    }
}

/// Sums matrices with a fixed pairwise tree so the result does not depend on
/// how the terms were produced.
pub fn pairwise_sum(mut terms: Vec<ComplexMatrix>) -> Option<ComplexMatrix> {
    if terms.is_empty() {
        return None;
    }
    while terms.len() > 1 {
        let mut next = Vec::with_capacity(terms.len().div_ceil(2));
        let mut it = terms.into_iter();
        while let Some(a) = it.next() {
            match it.next() {
                Some(b) => next.push(a.add(&b).expect("terms share a dimension")),
                None => next.push(a),
            }
        }
        terms = next;
    }
    terms.pop()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn multiply_and_adjoint() {
        let a = ComplexMatrix::from_vec(2, vec![c(1.0, 1.0), c(2.0, 0.0), c(0.0, -1.0), c(3.0, 0.5)]).unwrap();
        let i2 = ComplexMatrix::identity(2);
        assert_eq!(a.mul(&i2).unwrap(), a);
        let aa = a.adjoint();
        assert_eq!(aa[(0, 1)], c(0.0, 1.0));
        assert_eq!(aa.adjoint(), a);
        assert!(a.mul(&ComplexMatrix::identity(3)).is_err());
    }

    #[test]
    fn kron_of_identities() {
        let k = ComplexMatrix::identity(2).kron(&ComplexMatrix::identity(3));
        assert_eq!(k, ComplexMatrix::identity(6));
    }

    #[test]
    fn rejects_non_finite() {
        assert!(ComplexMatrix::from_vec(1, vec![c(f64::NAN, 0.0)]).is_err());
        assert!(ComplexMatrix::from_vec(2, vec![c(0.0, 0.0)]).is_err());
    }

    #[test]
    fn pairwise_sum_matches_sequential() {
        let terms: Vec<ComplexMatrix> = (0..7).map(|k| ComplexMatrix::from_real_diagonal(&[k as f64, 1.0])).collect();
        let s = pairwise_sum(terms).unwrap();
        assert_eq!(s[(0, 0)], c(21.0, 0.0));
        assert_eq!(s[(1, 1)], c(7.0, 0.0));
        assert!(pairwise_sum(Vec::new()).is_none());
    }
}
