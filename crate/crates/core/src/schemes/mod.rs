//! The three approximate encryption schemes, their exact channels, key
//! lengths and key/ciphertext files.
//!
//! Channels are the adversary's view: the uniform average of the encryption
//! map over all keys. Each average is computed term by term (in parallel) and
//! summed with a fixed pairwise tree, so results are bit-identical for any
//! thread count.

mod files;
mod keylen;
mod scheme_a;
mod scheme_b;
mod scheme_c;
mod suite;

pub use files::{ciphertext_from_text, ciphertext_to_text, key_from_text, key_to_text, KeyHeader};
pub use keylen::{key_length_table, KeyLengthRow};
pub use scheme_a::{scheme_a_channel, scheme_a_decrypt, scheme_a_encrypt, scheme_a_keygen, SchemeAConfig};
pub use scheme_b::{
    scheme_b_channel, scheme_b_channel_sampled, scheme_b_decrypt, scheme_b_encrypt, scheme_b_keygen, SchemeBConfig,
};
pub use scheme_c::{
    core_channel_purity, embed_qubits, scheme_c_channel, scheme_c_core_channel, scheme_c_decrypt, scheme_c_encrypt,
    scheme_c_keygen, scheme_c_phase_channel, unembed, SchemeCConfig,
};
pub use suite::adversarial_suite;

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::qcore::{ComplexMatrix, DensityMatrix};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SchemeKind {
    A,
    B,
    C,
}

impl fmt::Display for SchemeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SchemeKind::A => "A",
            SchemeKind::B => "B",
            SchemeKind::C => "C",
        })
    }
}

impl FromStr for SchemeKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "A" | "a" => Ok(SchemeKind::A),
            "B" | "b" => Ok(SchemeKind::B),
            "C" | "c" => Ok(SchemeKind::C),
            _ => Err(Error::Parse(format!("unknown scheme {s:?}; expected A, B or C"))),
        }
    }
}

/// Which bias threshold marks a config as secure.
///
/// `Tight` requires `δ ≤ ε·2^{−n/2}`, which gives trace distance ≤ ε through
/// the purity bound. `Relaxed` accepts `δ ≤ √2·ε·2^{−n/2}`, which only
/// guarantees `√2·ε`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum BoundMode {
    #[default]
    Tight,
    Relaxed,
}

impl BoundMode {
    pub fn factor(self) -> f64 {
        match self {
            BoundMode::Tight => 1.0,
            BoundMode::Relaxed => std::f64::consts::SQRT_2,
        }
    }
}

/// Key material. Ranges are checked against the config at use.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Key {
    /// Index into the set B.
    A { index: usize },
    /// Element κ of the span of `1, x, …, x^{k−1}`, stored as an integer < 2^k.
    B { kappa: u64 },
    /// Weyl exponent `a ∈ Z_d` and index into the phase set B.
    C { a: u64, index: usize },
}

impl Key {
    pub fn kind(&self) -> SchemeKind {
        match self {
            Key::A { .. } => SchemeKind::A,
            Key::B { .. } => SchemeKind::B,
            Key::C { .. } => SchemeKind::C,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Ciphertext {
    A(DensityMatrix),
    /// Public tag `α ≠ 0` and the encrypted state.
    B {
        tag: u64,
        state: DensityMatrix,
    },
    /// State in the prime dimension d.
    C(DensityMatrix),
}

impl Ciphertext {
    pub fn kind(&self) -> SchemeKind {
        match self {
            Ciphertext::A(_) => SchemeKind::A,
            Ciphertext::B { .. } => SchemeKind::B,
            Ciphertext::C(_) => SchemeKind::C,
        }
    }

    pub fn state(&self) -> &DensityMatrix {
        match self {
            Ciphertext::A(s) | Ciphertext::C(s) => s,
            Ciphertext::B { state, .. } => state,
        }
    }
}

fn wrong_kind<T>(expected: SchemeKind, got: SchemeKind) -> Result<T> {
    Err(Error::InvalidArgument(format!("scheme {expected} given a scheme {got} key or ciphertext")))
}

/// Largest number of matrix entries touched by one channel evaluation.
pub const MAX_CHANNEL_WORK: u64 = 1 << 32;

pub(crate) fn check_work(what: &str, terms: u64, dim: usize, hint: &str) -> Result<()> {
    let work = terms.saturating_mul((dim * dim) as u64);
    if work > MAX_CHANNEL_WORK {
        return Err(Error::ResourceLimit(format!(
            "{what} needs {terms} terms of a {dim}×{dim} state ({work} entries, limit {MAX_CHANNEL_WORK}); {hint}"
        )));
    }
    Ok(())
}

/// `Σ_t w_t f(k_t)` by recursive halving: the two halves run in parallel and
/// are always added in the same order, so the result does not depend on the
/// thread count, and only O(depth) partial sums are alive per thread.
pub(crate) fn weighted_average<K, F>(terms: &[(K, f64)], f: F) -> ComplexMatrix
where
    K: Sync,
    F: Fn(&K) -> ComplexMatrix + Sync,
{
    assert!(!terms.is_empty(), "at least one channel term");
    tree_sum(terms, &f)
}

fn tree_sum<K, F>(terms: &[(K, f64)], f: &F) -> ComplexMatrix
where
    K: Sync,
    F: Fn(&K) -> ComplexMatrix + Sync,
{
    if let [(k, w)] = terms {
        return f(k).scale_real(*w);
    }
    let (left, right) = terms.split_at(terms.len() / 2);
    let (mut a, b) = rayon::join(|| tree_sum(left, f), || tree_sum(right, f));
    a.add_scaled(&b, 1.0).expect("terms share one dimension");
    a
}

pub(crate) fn register_qubits(rho: &DensityMatrix, n: usize) -> Result<()> {
    if rho.dim() != 1 << n {
        return Err(Error::InvalidArgument(format!("state of dimension {} for an {n}-qubit scheme", rho.dim())));
    }
    Ok(())
}
