//! Weyl operators in prime dimension d, `ω = e^{2πi/d}`.
//!
//! `X|t⟩ = |t+1 mod d⟩` and `Z|t⟩ = ω^t|t⟩`. A word `X^j Z^k` is read in
//! application order: X^j acts first, then Z^k, so its matrix is `Z^k · X^j`.
//! With that reading `X^j Z^k = ω^{jk} Z^k X^j`; as plain matrix products the
//! same fact reads `X^j · Z^k = ω^{−jk} Z^k · X^j`.

use std::f64::consts::TAU;
use std::fmt;

use num_complex::Complex64;

use crate::error::{invalid, Error, Result};
use crate::gf2::{parity_dot, BitString};
use crate::qcore::{ComplexMatrix, DensityMatrix};

/// Largest d for which dense Weyl matrices are built.
pub const MAX_QUDIT_DENSE: usize = 4099;

/// Trial division; fine for the dimensions used here.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut f = 3u64;
    while f.saturating_mul(f) <= n {
        if n.is_multiple_of(f) {
            return false;
        }
        f += 2;
    }
    true
}

/// Smallest odd prime `p ≥ x` (so 3 for x ≤ 3).
pub fn smallest_odd_prime_at_least(x: u64) -> u64 {
    let mut p = x.max(3);
    if p.is_multiple_of(2) {
        p += 1;
    }
    while !is_prime(p) {
        p += 2;
    }
    p
}

/// `ω^e` for every `e` in `0..d`.
pub(crate) fn roots_of_unity(d: usize) -> Vec<Complex64> {
    (0..d).map(|e| Complex64::from_polar(1.0, TAU * e as f64 / d as f64)).collect()
}

fn check_prime_dim(d: usize) -> Result<()> {
    if !is_prime(d as u64) {
        return invalid(format!("qudit dimension {d} is not prime"));
    }
    Ok(())
}

/// `ω^{phase_exp} · X^j Z^k` with all exponents reduced mod d.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct QuditOp {
    d: u64,
    j: u64,
    k: u64,
    phase_exp: u64,
}

impl QuditOp {
    pub fn new(d: u64, j: i64, k: i64, phase_exp: i64) -> Result<Self> {
        check_prime_dim(d as usize)?;
        let m = d as i64;
        Ok(Self { d, j: j.rem_euclid(m) as u64, k: k.rem_euclid(m) as u64, phase_exp: phase_exp.rem_euclid(m) as u64 })
    }

    pub fn d(&self) -> u64 {
        self.d
    }

    pub fn j(&self) -> u64 {
        self.j
    }

    pub fn k(&self) -> u64 {
        self.k
    }

    pub fn phase_exp(&self) -> u64 {
        self.phase_exp
    }

    /// `(X^j Z^k)† = Z^{−k} X^{−j} = ω^{−jk} X^{−j} Z^{−k}`, phase conjugated.
    pub fn adjoint(&self) -> Self {
        let d = self.d;
        let neg = |x: u64| (d - x % d) % d;
        let jk = (self.j * self.k) % d;
        Self { d, j: neg(self.j), k: neg(self.k), phase_exp: (neg(self.phase_exp) + neg(jk)) % d }
    }
}

impl fmt::Display for QuditOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "w^{} X^{} Z^{} (d={})", self.phase_exp, self.j, self.k, self.d)
    }
}

fn check_dense(d: usize) -> Result<()> {
    if d > MAX_QUDIT_DENSE {
        return Err(Error::ResourceLimit(format!("dense qudit operator at d = {d}; limit is {MAX_QUDIT_DENSE}")));
    }
    Ok(())
}

/// Cyclic shift by `j`: `|t⟩ ↦ |t + j⟩`.
pub fn qudit_x_pow(d: usize, j: i64) -> Result<ComplexMatrix> {
    check_dense(d)?;
    check_prime_dim(d)?;
    let shift = j.rem_euclid(d as i64) as usize;
    let mut m = ComplexMatrix::zeros(d);
    for t in 0..d {
        m[((t + shift) % d, t)] = Complex64::new(1.0, 0.0);
    }
    Ok(m)
}

/// `diag(ω^{k·t})`.
pub fn qudit_z_pow(d: usize, k: i64) -> Result<ComplexMatrix> {
    check_dense(d)?;
    check_prime_dim(d)?;
    let roots = roots_of_unity(d);
    let k = k.rem_euclid(d as i64) as usize;
    let mut m = ComplexMatrix::zeros(d);
    for t in 0..d {
        m[(t, t)] = roots[(k * t) % d];
    }
    Ok(m)
}

/// Matrix of `ω^{phase} X^j Z^k` (X^j applied first): `|t⟩ ↦ ω^{phase + k(t+j)} |t + j⟩`.
pub fn qudit_dense(q: &QuditOp) -> Result<ComplexMatrix> {
    let d = q.d as usize;
    check_dense(d)?;
    let roots = roots_of_unity(d);
    let (j, k, p) = (q.j as usize, q.k as usize, q.phase_exp as usize);
    let mut m = ComplexMatrix::zeros(d);
    for t in 0..d {
        let s = (t + j) % d;
        m[(s, t)] = roots[(p + k * s) % d];
    }
    Ok(m)
}

/// Entry `(s, t)` becomes `ω^{k(s−j) − k(t−j)} ρ_{s−j, t−j}`; indices mod d.
pub(crate) fn conjugate_qudit_raw(rho: &ComplexMatrix, j: u64, k: u64, roots: &[Complex64]) -> ComplexMatrix {
    let d = rho.dim();
    let (j, k) = (j as usize % d, k as usize % d);
    let mut out = ComplexMatrix::zeros(d);
    for s in 0..d {
        let si = (s + d - j) % d;
        let src = rho.row(si);
        let dst = &mut out.as_mut_slice()[s * d..(s + 1) * d];
        for (t, slot) in dst.iter_mut().enumerate() {
            let ti = (t + d - j) % d;
            let e = (k * si % d + d - k * ti % d) % d;
            *slot = roots[e] * src[ti];
        }
    }
    out
}

fn check_qudit_state(rho: &DensityMatrix, d: usize) -> Result<()> {
    if rho.dim() != d {
        return invalid(format!("state of dimension {} for a d = {d} operator", rho.dim()));
    }
    check_prime_dim(d)
}

/// Conjugates `ρ` by `X^j Z^k`.
pub fn conjugate_qudit(rho: &DensityMatrix, j: i64, k: i64, d: usize) -> Result<DensityMatrix> {
    check_qudit_state(rho, d)?;
    let m = d as i64;
    let out = conjugate_qudit_raw(rho.matrix(), j.rem_euclid(m) as u64, k.rem_euclid(m) as u64, &roots_of_unity(d));
    DensityMatrix::from_channel_output(out)
}

/// Undoes [`conjugate_qudit`] with the same `(j, k)`.
pub fn conjugate_qudit_inverse(rho: &DensityMatrix, j: i64, k: i64, d: usize) -> Result<DensityMatrix> {
    conjugate_qudit(rho, -j, -k, d)
}

/// `U_b ρ U_b` with `U_b|x⟩ = (−1)^{b·x}|x⟩`.
pub(crate) fn phase_op_ub_raw(rho: &ComplexMatrix, b: u64) -> ComplexMatrix {
    let d = rho.dim();
    let signs: Vec<u8> = (0..d as u64).map(|x| parity_dot(b, x)).collect();
    let mut out = rho.clone();
    for (x, row) in out.as_mut_slice().chunks_mut(d).enumerate() {
        for (y, z) in row.iter_mut().enumerate() {
            if signs[x] != signs[y] {
                *z = -*z;
            }
        }
    }
    out
}

/// `U_b ρ U_b` for a `d`-dimensional ρ whose basis indices are read as `b.len()`-bit strings.
pub fn phase_op_ub(rho: &DensityMatrix, b: &BitString, d: usize) -> Result<DensityMatrix> {
    if rho.dim() != d {
        return invalid(format!("state of dimension {} where {d} was given", rho.dim()));
    }
    if b.len() < 64 && (d as u128) > (1u128 << b.len()) {
        return invalid(format!("{}-bit phase string cannot label {d} basis states", b.len()));
    }
    DensityMatrix::from_channel_output(phase_op_ub_raw(rho.matrix(), b.bits()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcore::{purity, random::random_mixed_dim, random_pure_density_dim};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn close(a: &ComplexMatrix, b: &ComplexMatrix) -> bool {
        a.max_abs_diff(b).unwrap() < 1e-12
    }

    #[test]
    fn primes() {
        let small: Vec<u64> = (0..40).filter(|&n| is_prime(n)).collect();
        assert_eq!(small, vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37]);
        assert_eq!(smallest_odd_prime_at_least(2), 3);
        assert_eq!(smallest_odd_prime_at_least(4), 5);
        assert_eq!(smallest_odd_prime_at_least(8), 11);
        assert_eq!(smallest_odd_prime_at_least(16), 17);
        assert_eq!(smallest_odd_prime_at_least(32), 37);
        assert!(is_prime(4099));
    }

    #[test]
    fn shift_has_order_d() {
        for d in [3usize, 5, 7] {
            let x = qudit_x_pow(d, 1).unwrap();
            let mut acc = ComplexMatrix::identity(d);
            for _ in 0..d {
                acc = acc.mul(&x).unwrap();
            }
            assert_eq!(acc, ComplexMatrix::identity(d));
            assert!(close(&qudit_z_pow(d, d as i64).unwrap(), &ComplexMatrix::identity(d)));
        }
    }

    #[test]
    fn commutation_in_both_readings() {
        for d in [3usize, 5] {
            let omega = roots_of_unity(d);
            for j in 0..d as i64 {
                for k in 0..d as i64 {
                    let x = qudit_x_pow(d, j).unwrap();
                    let z = qudit_z_pow(d, k).unwrap();
                    let w = omega[(j * k) as usize % d];
                    // Application order: (X^j then Z^k) = ω^{jk} (Z^k then X^j).
                    let word = qudit_dense(&QuditOp::new(d as u64, j, k, 0).unwrap()).unwrap();
                    assert!(close(&word, &z.mul(&x).unwrap()));
                    assert!(close(&word, &x.mul(&z).unwrap().scale(w)));
                    // Plain matrix products: X·Z = ω^{−jk} Z·X.
                    assert!(close(&x.mul(&z).unwrap(), &z.mul(&x).unwrap().scale(w.conj())));
                }
            }
        }
    }

    #[test]
    fn adjoint_identity() {
        let d = 5usize;
        for j in 0..5 {
            for k in 0..5 {
                for p in [0, 2] {
                    let q = QuditOp::new(5, j, k, p).unwrap();
                    let dense = qudit_dense(&q).unwrap();
                    assert!(close(&dense.adjoint(), &qudit_dense(&q.adjoint()).unwrap()));
                    // Z^{−k} X^{−j} as a word: Z^{−k} acts first.
                    let word = qudit_x_pow(d, -j).unwrap().mul(&qudit_z_pow(d, -k).unwrap()).unwrap();
                    let phase = roots_of_unity(d)[(5 - p as usize) % 5];
                    assert!(close(&dense.adjoint(), &word.scale(phase)));
                    assert!(close(&dense.mul(&dense.adjoint()).unwrap(), &ComplexMatrix::identity(d)));
                }
            }
        }
    }

    #[test]
    fn rejects_composite_dimension() {
        assert!(QuditOp::new(4, 1, 1, 0).is_err());
        assert!(qudit_x_pow(9, 1).is_err());
        assert!(qudit_z_pow(5000, 1).is_err());
    }

    #[test]
    fn conjugation_examples() {
        let rho = random_pure_density_dim(5, 3).unwrap();
        assert_eq!(conjugate_qudit(&rho, 0, 0, 5).unwrap(), rho);
        let diag = DensityMatrix::new(ComplexMatrix::from_real_diagonal(&[0.1, 0.2, 0.3, 0.15, 0.25])).unwrap();
        for k in 0..5 {
            assert!(close(conjugate_qudit(&diag, 0, k, 5).unwrap().matrix(), diag.matrix()));
        }
        assert!(conjugate_qudit(&rho, 1, 1, 3).is_err());
    }

    #[test]
    fn conjugation_matches_dense_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for d in [3usize, 5, 7] {
            let rho = random_mixed_dim(d, 2, &mut rng);
            for j in 0..d as i64 {
                for k in 0..d as i64 {
                    let m = qudit_dense(&QuditOp::new(d as u64, j, k, 1).unwrap()).unwrap();
                    let expect = m.mul(rho.matrix()).unwrap().mul(&m.adjoint()).unwrap();
                    let got = conjugate_qudit(&rho, j, k, d).unwrap();
                    assert!(close(got.matrix(), &expect));
                    assert!((got.matrix().trace().re - 1.0).abs() < 1e-12);
                    assert!((purity(&got) - purity(&rho)).abs() < 1e-12);
                    let back = conjugate_qudit_inverse(&got, j, k, d).unwrap();
                    assert!(close(back.matrix(), rho.matrix()));
                }
            }
        }
    }

    #[test]
    fn phase_layer() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let rho = random_mixed_dim(5, 2, &mut rng);
        let zero: BitString = "000".parse().unwrap();
        assert_eq!(phase_op_ub(&rho, &zero, 5).unwrap(), rho);
        let diag = DensityMatrix::new(ComplexMatrix::from_real_diagonal(&[0.2; 5])).unwrap();
        for b in 0..8 {
            let b = BitString::new(3, b).unwrap();
            assert_eq!(phase_op_ub(&diag, &b, 5).unwrap(), diag);
            let once = phase_op_ub(&rho, &b, 5).unwrap();
            assert_eq!(phase_op_ub(&once, &b, 5).unwrap(), rho);
            assert!((purity(&once) - purity(&rho)).abs() < 1e-12);
        }
        assert!(phase_op_ub(&rho, &"01".parse().unwrap(), 5).is_err());
        assert!(phase_op_ub(&rho, &zero, 3).is_err());
    }
}
