use num_complex::Complex64;

use crate::error::{invalid, Result};
use crate::pauli::{pauli_dense, PauliOp};
use crate::qcore::{ComplexMatrix, DensityMatrix};

/// `(I + sign·P)/2^n` for a Hermitian word `P`.
fn pauli_state(n: usize, u: u64, v: u64, negative: bool) -> Result<DensityMatrix> {
    let d = 1usize << n;
    let word = pauli_dense(&PauliOp::from_raw(n, u, v, negative))?;
    let mut m = ComplexMatrix::identity(d);
    m.add_scaled(&word, 1.0)?;
    DensityMatrix::new(m.scale_real(1.0 / d as f64))
}

/// Fixed test states on `n` qubits, labelled: computational basis states
/// (all of them for n ≤ 3, otherwise the first and last), the uniform
/// superposition, and `(I ± P)/2^n` for single-qubit and all-qubit X and Z words.
pub fn adversarial_suite(n: usize) -> Result<Vec<(String, DensityMatrix)>> {
    if n == 0 || n > 10 {
        return invalid(format!("adversarial suite supports 1 ≤ n ≤ 10, got {n}"));
    }
    let d = 1usize << n;
    let mut out = Vec::new();
    let basis: Vec<usize> = if n <= 3 { (0..d).collect() } else { vec![0, d - 1] };
    for t in basis {
        out.push((format!("basis{t}"), DensityMatrix::basis(d, t)?));
    }
    out.push(("plus".to_string(), DensityMatrix::uniform_superposition(d)));
    let all = (d - 1) as u64;
    let words = [("X0", 1u64, 0u64), ("Z0", 0, 1), ("Xall", all, 0), ("Zall", 0, all)];
    for (name, u, v) in words {
        for (sign, negative) in [("+", false), ("-", true)] {
            out.push((format!("I{sign}{name}"), pauli_state(n, u, v, negative)?));
        }
    }
    // A state with complex off-diagonal entries: (|0⟩ + i|1…1⟩)/√2.
    let mut psi = vec![Complex64::new(0.0, 0.0); d];
    psi[0] = Complex64::new(1.0, 0.0);
    psi[d - 1] += Complex64::new(0.0, 1.0);
    out.push(("cat-i".to_string(), DensityMatrix::from_pure(&psi)?));
    Ok(out)
}
