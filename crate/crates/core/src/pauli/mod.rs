//! Pauli words `±X^u Z^v` on n qubits and their action on density matrices.
//!
//! Basis index `t` of a 2^n-dimensional register is identified with the
//! little-endian bit string of `t`, so `X^u|t⟩ = |t ⊕ u⟩` and
//! `Z^v|t⟩ = (−1)^{v·t}|t⟩`. Conjugations are done by index permutation and
//! sign flips, never by dense products.

mod qudit;

pub use qudit::{
    conjugate_qudit, conjugate_qudit_inverse, is_prime, phase_op_ub, qudit_dense, qudit_x_pow, qudit_z_pow,
    smallest_odd_prime_at_least, QuditOp,
};
pub(crate) use qudit::{conjugate_qudit_raw, phase_op_ub_raw, roots_of_unity};

use std::fmt;

use num_complex::Complex64;

use crate::error::{invalid, Error, Result};
use crate::gf2::{parity_dot, BitString};
use crate::qcore::{ComplexMatrix, DensityMatrix};

/// Largest register for which dense Pauli matrices are built.
pub const MAX_DENSE_QUBITS: usize = 12;

#[inline]
fn sign_of(parity: u8) -> f64 {
    if parity == 0 {
        1.0
    } else {
        -1.0
    }
}

/// A signed Pauli word `sign · X^u Z^v`.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct PauliOp {
    n: usize,
    u: u64,
    v: u64,
    negative: bool,
}

impl PauliOp {
    pub fn new(u: BitString, v: BitString, sign: i8) -> Result<Self> {
        if u.len() != v.len() {
            return invalid(format!("X part has {} qubits, Z part {}", u.len(), v.len()));
        }
        let negative = match sign {
            1 => false,
            -1 => true,
            _ => return invalid(format!("sign must be ±1, got {sign}")),
        };
        Ok(Self { n: u.len(), u: u.bits(), v: v.bits(), negative })
    }

    pub(crate) fn from_raw(n: usize, u: u64, v: u64, negative: bool) -> Self {
        Self { n, u, v, negative }
    }

    pub fn identity(n: usize) -> Result<Self> {
        let zero = BitString::zeros(n)?;
        Self::new(zero, zero, 1)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn x_part(&self) -> BitString {
        BitString::new(self.n, self.u).expect("fits n bits")
    }

    pub fn z_part(&self) -> BitString {
        BitString::new(self.n, self.v).expect("fits n bits")
    }

    pub fn sign(&self) -> i8 {
        if self.negative {
            -1
        } else {
            1
        }
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.n != other.n {
            return invalid(format!("Pauli words on {} and {} qubits", self.n, other.n));
        }
        Ok(())
    }
}

impl fmt::Display for PauliOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sign = if self.negative { '-' } else { '+' };
        write!(f, "{sign}X({})Z({})", self.x_part(), self.z_part())
    }
}

impl fmt::Debug for PauliOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// `(X^u Z^v)(X^a Z^b) = (−1)^{a·v} X^{u⊕a} Z^{v⊕b}`, signs multiplied.
pub fn pauli_mul(p: &PauliOp, q: &PauliOp) -> Result<PauliOp> {
    p.check(q)?;
    let flip = parity_dot(q.u, p.v) == 1;
    Ok(PauliOp { n: p.n, u: p.u ^ q.u, v: p.v ^ q.v, negative: p.negative ^ q.negative ^ flip })
}

/// `+1` if the words commute, `−1` if they anticommute: `(−1)^{u·b + v·a}`.
pub fn commute_sign(p: &PauliOp, q: &PauliOp) -> Result<i8> {
    p.check(q)?;
    Ok(if (parity_dot(p.u, q.v) ^ parity_dot(p.v, q.u)) == 0 { 1 } else { -1 })
}

/// Dense `2^n × 2^n` matrix of the word.
pub fn pauli_dense(p: &PauliOp) -> Result<ComplexMatrix> {
    if p.n > MAX_DENSE_QUBITS {
        return Err(Error::ResourceLimit(format!("dense Pauli on {} qubits; limit is {MAX_DENSE_QUBITS}", p.n)));
    }
    let d = 1usize << p.n;
    let global = if p.negative { -1.0 } else { 1.0 };
    let mut m = ComplexMatrix::zeros(d);
    for col in 0..d {
        let row = col ^ p.u as usize;
        m[(row, col)] = Complex64::new(global * sign_of(parity_dot(p.v, col as u64)), 0.0);
    }
    Ok(m)
}

fn register_qubits(dim: usize) -> Result<usize> {
    if !dim.is_power_of_two() {
        return invalid(format!("dimension {dim} is not a power of two"));
    }
    Ok(dim.trailing_zeros() as usize)
}

/// `X^a Z^b ρ Z^b X^a` on packed strings: entry `(i, j)` is
/// `(−1)^{b·i + b·j} ρ_{i⊕a, j⊕a}`.
pub(crate) fn conjugate_pauli_raw(rho: &ComplexMatrix, a: u64, b: u64) -> ComplexMatrix {
    let d = rho.dim();
    let mut out = ComplexMatrix::zeros(d);
    for i in 0..d {
        let si = parity_dot(b, i as u64);
        let src = rho.row(i ^ a as usize);
        let dst = &mut out.as_mut_slice()[i * d..(i + 1) * d];
        for (j, slot) in dst.iter_mut().enumerate() {
            let z = src[j ^ a as usize];
            *slot = if si ^ parity_dot(b, j as u64) == 0 { z } else { -z };
        }
    }
    out
}

/// Conjugates `ρ` by the Pauli word `X^a Z^b`.
pub fn conjugate_pauli(rho: &DensityMatrix, a: &BitString, b: &BitString) -> Result<DensityMatrix> {
    let n = register_qubits(rho.dim())?;
    if a.len() != n || b.len() != n {
        return invalid(format!("key halves of {} and {} bits for a {n}-qubit state", a.len(), b.len()));
    }
    DensityMatrix::from_channel_output(conjugate_pauli_raw(rho.matrix(), a.bits(), b.bits()))
}

/// `Tr(X^u Z^v ρ) = Σ_t (−1)^{v·(t⊕u)} ρ_{t⊕u, t}`.
pub(crate) fn pauli_trace_raw(rho: &ComplexMatrix, u: u64, v: u64) -> Complex64 {
    (0..rho.dim())
        .map(|t| {
            let s = t ^ u as usize;
            rho[(s, t)] * sign_of(parity_dot(v, s as u64))
        })
        .sum()
}

/// `Tr(X^u Z^v ρ)`.
pub fn pauli_trace(rho: &DensityMatrix, u: &BitString, v: &BitString) -> Result<Complex64> {
    let n = register_qubits(rho.dim())?;
    if u.len() != n || v.len() != n {
        return invalid(format!("Pauli index lengths {}, {} for {n} qubits", u.len(), v.len()));
    }
    Ok(pauli_trace_raw(rho.matrix(), u.bits(), v.bits()))
}

/// Pauli–Fourier coefficient `α_{u,v} = 2^{−n} Tr(Z^v X^u ρ)`, so that
/// `ρ = Σ α_{u,v} X^u Z^v`.
pub fn pauli_coefficient(rho: &DensityMatrix, u: &BitString, v: &BitString) -> Result<Complex64> {
    let t = pauli_trace(rho, u, v)?;
    // Z^v X^u = (−1)^{u·v} X^u Z^v
    Ok(t * sign_of(parity_dot(u.bits(), v.bits())) / rho.dim() as f64)
}

/// All traces `Tr(X^u Z^v ρ)`, indexed by the packed string `v | (u << n)`.
///
/// This is the index under which the Scheme A key set `(a, b)` (with `a` in
/// the low half) sees the character `(v, u)`.
pub fn pauli_spectrum(rho: &DensityMatrix) -> Result<Vec<Complex64>> {
    let n = register_qubits(rho.dim())?;
    let d = 1u64 << n;
    let mut out = vec![Complex64::new(0.0, 0.0); 1 << (2 * n)];
    for u in 0..d {
        for v in 0..d {
            out[(v | (u << n)) as usize] = pauli_trace_raw(rho.matrix(), u, v);
        }
    }
    Ok(out)
}

/// `Tr(ρ²) = 2^{−n} Σ_{u,v} |Tr(X^u Z^v ρ)|²`.
pub fn purity_via_pauli(rho: &DensityMatrix) -> Result<f64> {
    let spectrum = pauli_spectrum(rho)?;
    Ok(spectrum.iter().map(|z| z.norm_sqr()).sum::<f64>() / rho.dim() as f64)
}
