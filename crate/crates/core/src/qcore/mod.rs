//! Dense density-matrix substrate: purity, collision entropy and trace distance.

mod cq;
mod eigen;
mod matrix;
pub(crate) mod random;
mod text;

pub use cq::{cq_purity, Branch, ClassicalQuantumState};
pub use eigen::{hermitian_eigenvalues, HERMITIAN_INPUT_TOL};
pub use matrix::{pairwise_sum, ComplexMatrix};
pub use random::{random_mixed_density, random_pure_density, random_pure_density_dim, random_pure_vector};
pub(crate) use text::read_matrix;
pub use text::{matrix_to_text, parse_matrix};

use num_complex::Complex64;

use crate::error::{invalid, Error, Result};

/// Hermiticity and trace tolerance for valid states.
pub const STATE_TOL: f64 = 1e-10;
/// Smallest eigenvalue accepted as positive semidefinite.
pub const PSD_TOL: f64 = -1e-9;

/// A Hermitian, positive semidefinite, unit-trace matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix(ComplexMatrix);

impl DensityMatrix {
    /// Validates every invariant, including positivity through the eigensolver.
    pub fn new(m: ComplexMatrix) -> Result<Self> {
        check_hermitian_unit_trace(&m)?;
        let min = hermitian_eigenvalues(&m)?.first().copied().unwrap_or(0.0);
        if min < PSD_TOL {
            return Err(Error::InvalidState(format!("not positive semidefinite (min eigenvalue {min:.3e})")));
        }
        Ok(Self(m))
    }

    /// For matrices that are PSD by construction (convex mixtures of unitary
    /// conjugates of valid states). Hermiticity and trace are still checked.
    pub(crate) fn from_channel_output(m: ComplexMatrix) -> Result<Self> {
        check_hermitian_unit_trace(&m)?;
        Ok(Self(m))
    }

    /// `|ψ⟩⟨ψ|` after normalizing ψ.
    pub fn from_pure(psi: &[Complex64]) -> Result<Self> {
        let norm = psi.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if psi.is_empty() || norm == 0.0 || !norm.is_finite() {
            return invalid("pure state vector must be nonzero and finite");
        }
        let unit: Vec<Complex64> = psi.iter().map(|z| z / norm).collect();
        Ok(Self(ComplexMatrix::outer(&unit)))
    }

    /// `|index⟩⟨index|`.
    pub fn basis(dim: usize, index: usize) -> Result<Self> {
        if index >= dim {
            return invalid(format!("basis index {index} outside dimension {dim}"));
        }
        let mut m = ComplexMatrix::zeros(dim);
        m[(index, index)] = Complex64::new(1.0, 0.0);
        Ok(Self(m))
    }

    /// `I/d`.
    pub fn maximally_mixed(dim: usize) -> Self {
        Self(ComplexMatrix::identity(dim).scale_real(1.0 / dim as f64))
    }

    /// Uniform superposition `|+…+⟩⟨+…+|` in dimension `dim`.
    pub fn uniform_superposition(dim: usize) -> Self {
        let amp = Complex64::new(1.0 / (dim as f64).sqrt(), 0.0);
        Self(ComplexMatrix::outer(&vec![amp; dim]))
    }

    /// `p·a + (1 − p)·b`.
    pub fn mix(a: &Self, b: &Self, p: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p) {
            return invalid(format!("mixing weight {p} outside [0, 1]"));
        }
        let mut m = a.0.scale_real(p);
        m.add_scaled(&b.0, 1.0 - p)?;
        Self::from_channel_output(m)
    }

    pub fn dim(&self) -> usize {
        self.0.dim()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.0
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.0
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.0[(i, j)]
    }
}

fn check_hermitian_unit_trace(m: &ComplexMatrix) -> Result<()> {
    let defect = m.hermitian_defect();
    if defect > STATE_TOL {
        return Err(Error::InvalidState(format!("not Hermitian (defect {defect:.3e})")));
    }
    let tr = m.trace();
    if (tr.re - 1.0).abs() > STATE_TOL || tr.im.abs() > STATE_TOL {
        return Err(Error::InvalidState(format!("trace is {tr}, expected 1")));
    }
    Ok(())
}

/// `Tr(ρ²) = Σ_ij |ρ_ij|²`.
pub fn purity(rho: &DensityMatrix) -> f64 {
    rho.0.as_slice().iter().map(|z| z.norm_sqr()).sum()
}

/// Collision (Rényi-2) entropy in bits.
pub fn renyi2(rho: &DensityMatrix) -> f64 {
    -purity(rho).log2()
}

/// `Tr|ρ − σ|`, the sum of absolute eigenvalues of the difference. Lies in [0, 2].
pub fn trace_distance(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    trace_norm(&rho.0.sub(&sigma.0)?)
}

/// Sum of |eigenvalues| of a Hermitian matrix.
pub fn trace_norm(m: &ComplexMatrix) -> Result<f64> {
    Ok(hermitian_eigenvalues(m)?.iter().map(|v| v.abs()).sum())
}

/// Best single-measurement success probability, `1/2 + D/4`.
pub fn distinguish_advantage(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    Ok(0.5 + trace_distance(rho, sigma)? / 4.0)
}

/// The ε for which `Tr(ρ²) = (1 + ε²)/d`; `D(ρ, I/d)` never exceeds it.
pub fn fact_trace2_epsilon(purity_value: f64, dim: usize) -> f64 {
    (dim as f64 * purity_value - 1.0).max(0.0).sqrt()
}
