use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use super::{ComplexMatrix, DensityMatrix};
use crate::error::{invalid, Result};

/// Largest dimension the generators will produce.
pub const MAX_RANDOM_DIM: usize = 1 << 12;

/// Normalized complex Gaussian vector (Haar-distributed pure state).
pub fn random_pure_vector<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> Vec<Complex64> {
    loop {
        let v: Vec<Complex64> =
            (0..dim).map(|_| Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))).collect();
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm > 0.0 {
            return v.into_iter().map(|z| z / norm).collect();
        }
    }
}

pub(crate) fn random_pure_dim<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> DensityMatrix {
    DensityMatrix(ComplexMatrix::outer(&random_pure_vector(dim, rng)))
}

/// Equal-weight mixture of `rank` random pure states.
pub(crate) fn random_mixed_dim<R: Rng + ?Sized>(dim: usize, rank: usize, rng: &mut R) -> DensityMatrix {
    let mut acc = ComplexMatrix::zeros(dim);
    for _ in 0..rank {
        let pure = ComplexMatrix::outer(&random_pure_vector(dim, rng));
        acc.add_scaled(&pure, 1.0 / rank as f64).expect("same dimension");
    }
    DensityMatrix(acc)
}

fn qubit_dim(n_qubits: usize) -> Result<usize> {
    if n_qubits > 12 {
        return invalid(format!("{n_qubits} qubits exceeds the dimension cap {MAX_RANDOM_DIM}"));
    }
    Ok(1 << n_qubits)
}

/// Random pure state on `n_qubits`, deterministic per seed.
pub fn random_pure_density(n_qubits: usize, seed: u64) -> Result<DensityMatrix> {
    let dim = qubit_dim(n_qubits)?;
    Ok(random_pure_dim(dim, &mut ChaCha8Rng::seed_from_u64(seed)))
}

/// Random pure state in an arbitrary dimension, deterministic per seed.
pub fn random_pure_density_dim(dim: usize, seed: u64) -> Result<DensityMatrix> {
    if dim == 0 || dim > MAX_RANDOM_DIM {
        return invalid(format!("dimension {dim} outside 1..={MAX_RANDOM_DIM}"));
    }
    Ok(random_pure_dim(dim, &mut ChaCha8Rng::seed_from_u64(seed)))
}

/// Equal-weight mixture of `rank` random pure states on `n_qubits`.
pub fn random_mixed_density(n_qubits: usize, rank: usize, seed: u64) -> Result<DensityMatrix> {
    let dim = qubit_dim(n_qubits)?;
    if rank == 0 {
        return invalid("rank must be positive");
    }
    Ok(random_mixed_dim(dim, rank, &mut ChaCha8Rng::seed_from_u64(seed)))
}
