//! Approximate quantum encryption from small-bias sets.
//!
//! Three keyed channels randomize an n-qubit state to within trace distance ε
//! of the maximally mixed state while using far fewer than the 2n key bits of
//! the perfect Pauli one-time pad:
//!
//! - **Scheme A** applies a Pauli word `X^a Z^b` with `(a, b)` drawn from a
//!   δ-biased set of 2n-bit strings.
//! - **Scheme B** draws a public tag `α ∈ GF(2^{2n})*` and applies the Pauli
//!   word named by the field product `α·κ`, where the key `κ` ranges over a
//!   k-dimensional subgroup. Output is a classical-quantum state.
//! - **Scheme C** embeds the qubits into a prime dimension `d`, applies a
//!   phase flip `U_b` from a small-bias set, then a Weyl operator `X^a Z^{a²}`.
//!
//! Every security bound is checked exactly at desk scale: channels are
//! evaluated by averaging all key terms on dense density matrices, bias is
//! certified by Walsh–Hadamard transform, and trace distance comes from a
//! Hermitian Jacobi eigensolver.
//!
//! Module map:
//!
//! - [`gf2`]: bit strings and GF(2^m) arithmetic.
//! - [`smallbias`]: AGHP sets, linear set families, exact bias certification.
//! - [`qcore`]: dense complex matrices, density matrices, purity, trace distance.
//! - [`pauli`]: signed Pauli words, Pauli–Fourier coefficients, qudit Weyl operators.
//! - [`schemes`]: the three schemes, their exact channels, key files and key lengths.
//! - [`cli`]: the experiment runner behind the `qpad` binary.

pub mod cli;
pub mod error;
pub mod gf2;
pub mod pauli;
pub mod qcore;
pub mod schemes;
pub mod smallbias;
mod textfmt;

pub use error::{Error, Result};
