use rand::Rng;

use super::{check_work, weighted_average, wrong_kind, Ciphertext, Key, SchemeKind};
use crate::error::{invalid, Error, Result};
use crate::pauli::{conjugate_qudit_raw, is_prime, phase_op_ub_raw, roots_of_unity, smallest_odd_prime_at_least};
use crate::qcore::{ComplexMatrix, DensityMatrix, STATE_TOL};
use crate::smallbias::{certify_bias, SmallBiasSet};

/// Bits needed to label `d` basis states.
fn label_bits(d: usize) -> usize {
    (usize::BITS - (d - 1).leading_zeros()) as usize
}

/// Scheme C: qubits are embedded in a prime dimension `d`; the key is a
/// phase string `b` from an ε-biased set over `⌈log₂ d⌉` bits and a Weyl
/// exponent `a ∈ Z_d`. Encryption applies `U_b`, then `X^a Z^{a²}`.
#[derive(Clone, Debug)]
pub struct SchemeCConfig {
    n: usize,
    d: usize,
    set: SmallBiasSet,
    epsilon_target: f64,
    certified_bias: f64,
}

impl SchemeCConfig {
    /// Uses the smallest odd prime `d ≥ 2^n`.
    pub fn new(n: usize, set: SmallBiasSet, epsilon_target: f64) -> Result<Self> {
        if n == 0 || n > 12 {
            return invalid(format!("scheme C supports 1 ≤ n ≤ 12, got {n}"));
        }
        Self::with_dimension(n, smallest_odd_prime_at_least(1 << n) as usize, set, epsilon_target)
    }

    /// Any odd prime `d ≥ 2^n`.
    pub fn with_dimension(n: usize, d: usize, set: SmallBiasSet, epsilon_target: f64) -> Result<Self> {
        if d < 1 << n || d.is_multiple_of(2) || !is_prime(d as u64) {
            return invalid(format!("d = {d} must be an odd prime ≥ 2^{n}"));
        }
        let m = label_bits(d);
        if set.m() != m {
            return invalid(format!("d = {d} needs a phase set over {m} bits, got {}", set.m()));
        }
        if !(epsilon_target > 0.0 && epsilon_target <= 1.0) {
            return invalid(format!("epsilon {epsilon_target} outside (0, 1]"));
        }
        let certified_bias = certify_bias(&set)?.max_bias;
        Ok(Self { n, d, set, epsilon_target, certified_bias })
    }

    /// Bits of the phase strings for dimension `d`.
    pub fn phase_bits(d: usize) -> usize {
        label_bits(d)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn set(&self) -> &SmallBiasSet {
        &self.set
    }

    pub fn epsilon_target(&self) -> f64 {
        self.epsilon_target
    }

    pub fn certified_bias(&self) -> f64 {
        self.certified_bias
    }

    pub fn is_secure(&self) -> bool {
        self.certified_bias <= self.epsilon_target + 1e-15
    }

    /// `⌈log₂ d⌉ + log₂|B|`.
    pub fn key_bits(&self) -> f64 {
        label_bits(self.d) as f64 + (self.set.len() as f64).log2()
    }

    fn key_parts(&self, key: &Key) -> Result<(u64, u64)> {
        match *key {
            Key::C { a, index } => {
                if a >= self.d as u64 {
                    return invalid(format!("Weyl exponent {a} ≥ d = {}", self.d));
                }
                match self.set.points().get(index) {
                    Some(&b) => Ok((a, b)),
                    None => invalid(format!("key index {index} ≥ |B| = {}", self.set.len())),
                }
            }
            other => wrong_kind(SchemeKind::C, other.kind()),
        }
    }

    fn check_dim(&self, rho: &DensityMatrix) -> Result<()> {
        if rho.dim() != self.d {
            return invalid(format!("state of dimension {} for d = {}", rho.dim(), self.d));
        }
        Ok(())
    }
}

/// Zero-padding of a `2^n`-dimensional state into dimension `d`.
pub fn embed_qubits(rho: &DensityMatrix, d: usize) -> Result<DensityMatrix> {
    let q = rho.dim();
    if !q.is_power_of_two() || d < q {
        return invalid(format!("cannot embed dimension {q} into {d}"));
    }
    let mut m = ComplexMatrix::zeros(d);
    for i in 0..q {
        for j in 0..q {
            m[(i, j)] = rho.get(i, j);
        }
    }
    DensityMatrix::from_channel_output(m)
}

/// Keeps the leading `2^n × 2^n` block and renormalizes. Fails when more
/// than `STATE_TOL` of the trace lies outside the block.
pub fn unembed(rho: &DensityMatrix, n: usize) -> Result<DensityMatrix> {
    let q = 1usize << n;
    if q > rho.dim() {
        return invalid(format!("cannot unembed {n} qubits from dimension {}", rho.dim()));
    }
    let inner: f64 = (0..q).map(|i| rho.get(i, i).re).sum();
    let leak = 1.0 - inner;
    if leak.abs() > STATE_TOL {
        return Err(Error::InvalidState(format!("{leak:.3e} of the trace lies outside the qubit subspace")));
    }
    let mut m = ComplexMatrix::zeros(q);
    for i in 0..q {
        for j in 0..q {
            m[(i, j)] = rho.get(i, j) / inner;
        }
    }
    DensityMatrix::from_channel_output(m)
}

pub fn scheme_c_keygen<R: Rng + ?Sized>(cfg: &SchemeCConfig, rng: &mut R) -> Key {
    Key::C { a: rng.random_range(0..cfg.d as u64), index: rng.random_range(0..cfg.set.len()) }
}

fn weyl_exponents(a: u64, d: usize) -> (u64, u64) {
    let d = d as u64;
    (a % d, a * a % d)
}

/// `X^a Z^{a²} U_b ρ U_b Z^{−a²} X^{−a}` on an embedded state.
pub fn scheme_c_encrypt(cfg: &SchemeCConfig, key: &Key, rho_embedded: &DensityMatrix) -> Result<Ciphertext> {
    cfg.check_dim(rho_embedded)?;
    let (a, b) = cfg.key_parts(key)?;
    let (j, k) = weyl_exponents(a, cfg.d);
    let phased = phase_op_ub_raw(rho_embedded.matrix(), b);
    let out = conjugate_qudit_raw(&phased, j, k, &roots_of_unity(cfg.d));
    Ok(Ciphertext::C(DensityMatrix::from_channel_output(out)?))
}

/// Returns the embedded state; pair with [`unembed`] to get the qubits back.
pub fn scheme_c_decrypt(cfg: &SchemeCConfig, key: &Key, ct: &Ciphertext) -> Result<DensityMatrix> {
    let Ciphertext::C(state) = ct else {
        return wrong_kind(SchemeKind::C, ct.kind());
    };
    cfg.check_dim(state)?;
    let (a, b) = cfg.key_parts(key)?;
    let (j, k) = weyl_exponents(a, cfg.d);
    let d = cfg.d as u64;
    let undone = conjugate_qudit_raw(state.matrix(), (d - j) % d, (d - k) % d, &roots_of_unity(cfg.d));
    DensityMatrix::from_channel_output(phase_op_ub_raw(&undone, b))
}

/// `E(ρ) = (1/d) Σ_{a=0}^{d−1} X^a Z^{a²} ρ Z^{−a²} X^{−a}`.
///
/// The `a = 0` term is the identity; including it keeps the map trace preserving.
pub fn scheme_c_core_channel(d: usize, rho: &DensityMatrix) -> Result<DensityMatrix> {
    if rho.dim() != d {
        return invalid(format!("state of dimension {} for d = {d}", rho.dim()));
    }
    if d.is_multiple_of(2) || !is_prime(d as u64) {
        return invalid(format!("d = {d} must be an odd prime"));
    }
    check_work("scheme C channel", d as u64, d, "use a smaller d")?;
    let roots = roots_of_unity(d);
    let w = 1.0 / d as f64;
    let terms: Vec<(u64, f64)> = (0..d as u64).map(|a| (a, w)).collect();
    let out = weighted_average(&terms, |&a| {
        let (j, k) = weyl_exponents(a, d);
        conjugate_qudit_raw(rho.matrix(), j, k, &roots)
    });
    DensityMatrix::from_channel_output(out)
}

/// `E'(ρ) = (1/|B|) Σ_{b∈B} U_b ρ U_b`, i.e. entry `(x, y)` times `Â_B(x ⊕ y)`.
pub fn scheme_c_phase_channel(set: &SmallBiasSet, rho: &DensityMatrix) -> Result<DensityMatrix> {
    let d = rho.dim();
    if set.m() < 64 && d as u128 > 1u128 << set.m() {
        return invalid(format!("{}-bit phase strings cannot label dimension {d}", set.m()));
    }
    let distinct = set.multiplicities();
    check_work("phase channel", distinct.len() as u64, d, "use a smaller phase set")?;
    let total = set.len() as f64;
    let terms: Vec<(u64, f64)> = distinct.into_iter().map(|(b, c)| (b, c as f64 / total)).collect();
    let out = weighted_average(&terms, |&b| phase_op_ub_raw(rho.matrix(), b));
    DensityMatrix::from_channel_output(out)
}

/// `E''(ρ) = E(E'(ρ))`, the exact average of [`scheme_c_encrypt`] over all keys.
pub fn scheme_c_channel(cfg: &SchemeCConfig, rho: &DensityMatrix) -> Result<DensityMatrix> {
    cfg.check_dim(rho)?;
    scheme_c_core_channel(cfg.d, &scheme_c_phase_channel(&cfg.set, rho)?)
}

/// `1/d + (1/d) Σ_{i≠j} |ρ_ij|²`, the exact purity after the core channel.
pub fn core_channel_purity(rho: &DensityMatrix) -> f64 {
    let d = rho.dim();
    let off: f64 = (0..d)
        .flat_map(|i| (0..d).filter(move |&j| j != i).map(move |j| (i, j)))
        .map(|(i, j)| rho.get(i, j).norm_sqr())
        .sum();
    (1.0 + off) / d as f64
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcore::{
        purity, random::random_mixed_dim, random_pure_density, random_pure_density_dim, trace_distance,
    };
    use crate::smallbias::aghp_set;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn close(a: &DensityMatrix, b: &DensityMatrix, tol: f64) -> bool {
        a.matrix().max_abs_diff(b.matrix()).unwrap() < tol
    }

    #[test]
    fn dimension_choice() {
        let dims: Vec<usize> = (1..=5)
            .map(|n| {
                SchemeCConfig::new(
                    n,
                    SmallBiasSet::full_space(label_bits(smallest_odd_prime_at_least(1 << n) as usize)).unwrap(),
                    1.0,
                )
                .unwrap()
                .d()
            })
            .collect();
        assert_eq!(dims, vec![3, 5, 11, 17, 37]);
        assert_eq!(label_bits(3), 2);
        assert_eq!(label_bits(5), 3);
        assert_eq!(label_bits(17), 5);
        assert!(SchemeCConfig::with_dimension(2, 9, SmallBiasSet::full_space(4).unwrap(), 1.0).is_err());
        assert!(SchemeCConfig::with_dimension(2, 5, SmallBiasSet::full_space(4).unwrap(), 1.0).is_err());
    }

    #[test]
    fn diagonal_goes_to_maximally_mixed() {
        for d in [3usize, 5] {
            let diag: Vec<f64> = (1..=d).map(|i| i as f64 * 2.0 / (d * (d + 1)) as f64).collect();
            let rho = DensityMatrix::new(ComplexMatrix::from_real_diagonal(&diag)).unwrap();
            let out = scheme_c_core_channel(d, &rho).unwrap();
            assert!(close(&out, &DensityMatrix::maximally_mixed(d), 1e-12));
        }
    }

    #[test]
    fn uniform_superposition_purity() {
        let out = scheme_c_core_channel(3, &DensityMatrix::uniform_superposition(3)).unwrap();
        assert!((purity(&out) - 5.0 / 9.0).abs() < 1e-12);
    }

    #[test]
    fn exact_purity_formula() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for d in [3usize, 5, 7] {
            for rank in 1..=3 {
                let rho = random_mixed_dim(d, rank, &mut rng);
                let out = scheme_c_core_channel(d, &rho).unwrap();
                assert!((purity(&out) - core_channel_purity(&rho)).abs() < 1e-12);
                assert!(purity(&out) <= (1.0 + purity(&rho)) / d as f64 + 1e-10);
            }
        }
    }

    #[test]
    fn phase_channel_scales_off_diagonals() {
        let set = aghp_set(3, 2).unwrap();
        let rho = random_pure_density_dim(5, 8).unwrap();
        let out = scheme_c_phase_channel(&set, &rho).unwrap();
        for x in 0..5 {
            for y in 0..5 {
                let expect = rho.get(x, y) * set.bias_at((x ^ y) as u64);
                assert!((out.get(x, y) - expect).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn full_phase_set_gives_maximally_mixed() {
        let cfg = SchemeCConfig::new(2, SmallBiasSet::full_space(3).unwrap(), 0.1).unwrap();
        let rho = embed_qubits(&random_pure_density(2, 1).unwrap(), 5).unwrap();
        let out = scheme_c_channel(&cfg, &rho).unwrap();
        assert!(close(&out, &DensityMatrix::maximally_mixed(5), 1e-12));
    }

    #[test]
    fn composed_distance_bound() {
        let set = aghp_set(4, 4).unwrap();
        let cfg = SchemeCConfig::new(3, set, 0.5).unwrap();
        for seed in 0..5 {
            let rho = embed_qubits(&random_pure_density(3, seed).unwrap(), 11).unwrap();
            let out = scheme_c_channel(&cfg, &rho).unwrap();
            let dist = trace_distance(&out, &DensityMatrix::maximally_mixed(11)).unwrap();
            assert!(dist <= cfg.certified_bias() + 1e-6);
        }
    }

    #[test]
    fn embedding() {
        let rho = random_pure_density(2, 6).unwrap();
        let e = embed_qubits(&rho, 5).unwrap();
        assert_eq!(purity(&e), purity(&rho));
        assert_eq!(unembed(&e, 2).unwrap(), rho);
        assert!(unembed(&DensityMatrix::maximally_mixed(5), 2).is_err());
        assert!(embed_qubits(&rho, 3).is_err());
    }

    #[test]
    fn round_trip_every_key() {
        let cfg = SchemeCConfig::new(2, aghp_set(3, 2).unwrap(), 0.5).unwrap();
        let rho = random_pure_density(2, 2).unwrap();
        let e = embed_qubits(&rho, 5).unwrap();
        for a in 0..5 {
            for index in 0..cfg.set().len() {
                let key = Key::C { a, index };
                let ct = scheme_c_encrypt(&cfg, &key, &e).unwrap();
                let back = unembed(&scheme_c_decrypt(&cfg, &key, &ct).unwrap(), 2).unwrap();
                assert!(close(&back, &rho, 1e-12));
            }
        }
        let zero_index = cfg.set().points().iter().position(|&p| p == 0).unwrap();
        let ct = scheme_c_encrypt(&cfg, &Key::C { a: 0, index: zero_index }, &e).unwrap();
        assert_eq!(ct.state(), &e);
        assert!(scheme_c_encrypt(&cfg, &Key::C { a: 5, index: 0 }, &e).is_err());
    }

    #[test]
    fn key_bits() {
        let cfg = SchemeCConfig::new(2, aghp_set(3, 2).unwrap(), 0.5).unwrap();
        assert_eq!(cfg.key_bits(), 3.0 + 4.0);
    }
}
