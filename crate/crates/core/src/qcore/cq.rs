use std::collections::HashSet;

use num_complex::Complex64;

use super::{purity, trace_norm, ComplexMatrix, DensityMatrix, STATE_TOL};
use crate::error::{invalid, Result};

/// One block of a classical-quantum state.
#[derive(Clone, Debug, PartialEq)]
pub struct Branch {
    pub probability: f64,
    pub tag: u64,
    pub state: DensityMatrix,
}

/// `Σ_i p_i |i⟩⟨i| ⊗ ρ_i`, stored block by block.
#[derive(Clone, Debug, PartialEq)]
pub struct ClassicalQuantumState {
    branches: Vec<Branch>,
}

impl ClassicalQuantumState {
    pub fn new(branches: Vec<Branch>) -> Result<Self> {
        if branches.is_empty() {
            return invalid("a cq-state needs at least one branch");
        }
        let dim = branches[0].state.dim();
        if branches.iter().any(|b| b.state.dim() != dim) {
            return invalid("all branch states must share one dimension");
        }
        if branches.iter().any(|b| b.probability < 0.0 || !b.probability.is_finite()) {
            return invalid("branch probabilities must be finite and nonnegative");
        }
        let total: f64 = branches.iter().map(|b| b.probability).sum();
        if (total - 1.0).abs() > STATE_TOL {
            return invalid(format!("branch probabilities sum to {total}, expected 1"));
        }
        let mut seen = HashSet::new();
        if let Some(dup) = branches.iter().find(|b| !seen.insert(b.tag)) {
            return invalid(format!("duplicate branch tag {}", dup.tag));
        }
        Ok(Self { branches })
    }

    /// Equal weights over the given tagged states.
    pub fn uniform(states: Vec<(u64, DensityMatrix)>) -> Result<Self> {
        let p = 1.0 / states.len().max(1) as f64;
        Self::new(states.into_iter().map(|(tag, state)| Branch { probability: p, tag, state }).collect())
    }

    pub fn branches(&self) -> &[Branch] {
        &self.branches
    }

    /// Dimension of each quantum block.
    pub fn block_dim(&self) -> usize {
        self.branches[0].state.dim()
    }

    /// The full block-diagonal matrix, blocks in branch order.
    pub fn materialize(&self) -> Result<DensityMatrix> {
        let d = self.block_dim();
        let mut full = ComplexMatrix::zeros(d * self.branches.len());
        for (b, branch) in self.branches.iter().enumerate() {
            for i in 0..d {
                for j in 0..d {
                    full[(b * d + i, b * d + j)] = branch.state.get(i, j) * branch.probability;
                }
            }
        }
        DensityMatrix::from_channel_output(full)
    }

    /// Trace distance to `(uniform tags over these branches) ⊗ I/d`, summed block by block.
    pub fn distance_from_uniform(&self) -> Result<f64> {
        let d = self.block_dim();
        let reference = 1.0 / (self.branches.len() * d) as f64;
        let mut total = 0.0;
        for branch in &self.branches {
            let mut diff = branch.state.matrix().scale_real(branch.probability);
            for i in 0..d {
                diff[(i, i)] -= Complex64::new(reference, 0.0);
            }
            total += trace_norm(&diff)?;
        }
        Ok(total)
    }
}

/// `Tr(ρ²) = Σ_i p_i² Tr(ρ_i²)` for a block-diagonal state.
pub fn cq_purity(state: &ClassicalQuantumState) -> f64 {
    state.branches.iter().map(|b| b.probability * b.probability * purity(&b.state)).sum()
}

impl ClassicalQuantumState {
    pub fn purity(&self) -> f64 {
        cq_purity(self)
    }
}
