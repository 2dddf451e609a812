use rand::Rng;

use super::{check_work, register_qubits, weighted_average, wrong_kind, BoundMode, Ciphertext, Key, SchemeKind};
use crate::error::{invalid, Result};
use crate::gf2::mask;
use crate::pauli::conjugate_pauli_raw;
use crate::qcore::DensityMatrix;
use crate::smallbias::{certify_bias, SmallBiasSet};

/// Scheme A: key is a point `(a, b)` of a δ-biased set over 2n bits; `a` is
/// the low half and selects X, `b` the high half and selects Z.
#[derive(Clone, Debug)]
pub struct SchemeAConfig {
    n: usize,
    set: SmallBiasSet,
    epsilon_target: f64,
    certified_bias: f64,
    mode: BoundMode,
}

impl SchemeAConfig {
    pub fn new(n: usize, set: SmallBiasSet, epsilon_target: f64, mode: BoundMode) -> Result<Self> {
        if n == 0 || 2 * n != set.m() {
            return invalid(format!("scheme A on {n} qubits needs a set over {} bits, got {}", 2 * n, set.m()));
        }
        if !(epsilon_target > 0.0 && epsilon_target <= 1.0) {
            return invalid(format!("epsilon {epsilon_target} outside (0, 1]"));
        }
        let certified_bias = certify_bias(&set)?.max_bias;
        Ok(Self { n, set, epsilon_target, certified_bias, mode })
    }

    pub fn n(&self) -> usize {
        self.n
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

    pub fn mode(&self) -> BoundMode {
        self.mode
    }

    /// Largest bias the mode accepts: `factor · ε · 2^{−n/2}`.
    pub fn required_bias(&self) -> f64 {
        self.mode.factor() * self.epsilon_target * (2f64).powf(-(self.n as f64) / 2.0)
    }

    pub fn is_secure(&self) -> bool {
        self.certified_bias <= self.required_bias() + 1e-15
    }

    /// `δ · 2^{n/2}` with the certified δ.
    pub fn distance_bound(&self) -> f64 {
        self.certified_bias * (2f64).powf(self.n as f64 / 2.0)
    }

    pub fn key_count(&self) -> usize {
        self.set.len()
    }

    fn split(&self, point: u64) -> (u64, u64) {
        (point & mask(self.n), point >> self.n)
    }

    fn key_point(&self, key: &Key) -> Result<u64> {
        match *key {
            Key::A { index } => match self.set.points().get(index) {
                Some(&p) => Ok(p),
                None => invalid(format!("key index {index} ≥ |B| = {}", self.set.len())),
            },
            other => wrong_kind(SchemeKind::A, other.kind()),
        }
    }
}

pub fn scheme_a_keygen<R: Rng + ?Sized>(cfg: &SchemeAConfig, rng: &mut R) -> Key {
    Key::A { index: rng.random_range(0..cfg.set.len()) }
}

pub fn scheme_a_encrypt(cfg: &SchemeAConfig, key: &Key, rho: &DensityMatrix) -> Result<Ciphertext> {
    register_qubits(rho, cfg.n)?;
    let (a, b) = cfg.split(cfg.key_point(key)?);
    Ok(Ciphertext::A(DensityMatrix::from_channel_output(conjugate_pauli_raw(rho.matrix(), a, b))?))
}

/// `X^a Z^b` is its own inverse up to a global sign, so decryption repeats the conjugation.
pub fn scheme_a_decrypt(cfg: &SchemeAConfig, key: &Key, ct: &Ciphertext) -> Result<DensityMatrix> {
    let Ciphertext::A(state) = ct else {
        return wrong_kind(SchemeKind::A, ct.kind());
    };
    register_qubits(state, cfg.n)?;
    let (a, b) = cfg.split(cfg.key_point(key)?);
    DensityMatrix::from_channel_output(conjugate_pauli_raw(state.matrix(), a, b))
}

/// Exact `E(ρ) = (1/|B|) Σ_{(a,b)∈B} X^a Z^b ρ Z^b X^a`; repeated points are merged.
pub fn scheme_a_channel(cfg: &SchemeAConfig, rho: &DensityMatrix) -> Result<DensityMatrix> {
    register_qubits(rho, cfg.n)?;
    let distinct = cfg.set.multiplicities();
    check_work("scheme A channel", distinct.len() as u64, rho.dim(), "use fewer qubits")?;
    let total = cfg.set.len() as f64;
    let terms: Vec<(u64, f64)> = distinct.into_iter().map(|(p, c)| (p, c as f64 / total)).collect();
    let out = weighted_average(&terms, |&p| {
        let (a, b) = cfg.split(p);
        conjugate_pauli_raw(rho.matrix(), a, b)
    });
    DensityMatrix::from_channel_output(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf2::BitString;
    use crate::pauli::pauli_trace;
    use crate::qcore::{purity, random_mixed_density, random_pure_density, trace_distance, ComplexMatrix};
    use crate::smallbias::{aghp_set, Construction};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn cfg(n: usize, set: SmallBiasSet) -> SchemeAConfig {
        SchemeAConfig::new(n, set, 0.5, BoundMode::Tight).unwrap()
    }

    #[test]
    fn zero_set_is_identity() {
        let c = cfg(2, SmallBiasSet::new(4, vec![0], 1.0, Construction::ExplicitList).unwrap());
        let rho = random_mixed_density(2, 2, 1).unwrap();
        assert_eq!(scheme_a_channel(&c, &rho).unwrap(), rho);
        let ct = scheme_a_encrypt(&c, &Key::A { index: 0 }, &rho).unwrap();
        assert_eq!(ct.state(), &rho);
    }

    #[test]
    fn full_space_gives_maximally_mixed() {
        let c = cfg(1, SmallBiasSet::full_space(2).unwrap());
        assert_eq!(c.certified_bias(), 0.0);
        for seed in 0..10 {
            let out = scheme_a_channel(&c, &random_pure_density(1, seed).unwrap()).unwrap();
            assert!(out.matrix().max_abs_diff(DensityMatrix::maximally_mixed(2).matrix()).unwrap() < 1e-15);
        }
    }

    #[test]
    fn round_trip_every_key() {
        let c = cfg(2, aghp_set(4, 2).unwrap());
        let rho = random_mixed_density(2, 3, 4).unwrap();
        for index in 0..c.key_count() {
            let key = Key::A { index };
            let ct = scheme_a_encrypt(&c, &key, &rho).unwrap();
            let back = scheme_a_decrypt(&c, &key, &ct).unwrap();
            assert!(back.matrix().max_abs_diff(rho.matrix()).unwrap() < 1e-14);
        }
    }

    #[test]
    fn wrong_key_gives_other_valid_state() {
        let c = cfg(1, SmallBiasSet::full_space(2).unwrap());
        let rho = DensityMatrix::basis(2, 0).unwrap();
        let ct = scheme_a_encrypt(&c, &Key::A { index: 1 }, &rho).unwrap();
        let wrong = scheme_a_decrypt(&c, &Key::A { index: 0 }, &ct).unwrap();
        DensityMatrix::new(wrong.clone().into_matrix()).unwrap();
        assert_ne!(wrong, rho);
    }

    #[test]
    fn errors() {
        let c = cfg(1, SmallBiasSet::full_space(2).unwrap());
        let rho = DensityMatrix::maximally_mixed(2);
        assert!(scheme_a_encrypt(&c, &Key::A { index: 4 }, &rho).is_err());
        assert!(scheme_a_encrypt(&c, &Key::B { kappa: 0 }, &rho).is_err());
        assert!(scheme_a_encrypt(&c, &Key::A { index: 0 }, &DensityMatrix::maximally_mixed(4)).is_err());
        assert!(SchemeAConfig::new(2, SmallBiasSet::full_space(2).unwrap(), 0.5, BoundMode::Tight).is_err());
        assert!(SchemeAConfig::new(1, SmallBiasSet::full_space(2).unwrap(), 0.0, BoundMode::Tight).is_err());
    }

    #[test]
    fn purity_and_distance_bounds() {
        let c = cfg(3, aghp_set(6, 4).unwrap());
        let delta = c.certified_bias();
        for seed in 0..10 {
            let rho = random_pure_density(3, seed).unwrap();
            let out = scheme_a_channel(&c, &rho).unwrap();
            let bound = (1.0 + delta * delta * 8.0 * purity(&rho)) / 8.0;
            assert!(purity(&out) <= bound + 1e-10);
            let dist = trace_distance(&out, &DensityMatrix::maximally_mixed(8)).unwrap();
            assert!(dist <= c.distance_bound() + 1e-8);
        }
    }

    #[test]
    fn coefficient_shrinks_by_set_bias() {
        // ρ = (I + Z⊗I)/4: Z on qubit 0 only.
        let rho = DensityMatrix::new(ComplexMatrix::from_real_diagonal(&[0.5, 0.0, 0.5, 0.0])).unwrap();
        let set = aghp_set(4, 2).unwrap();
        let c = cfg(2, set.clone());
        let out = scheme_a_channel(&c, &rho).unwrap();
        let (u, v) = (BitString::new(2, 0).unwrap(), BitString::new(2, 1).unwrap());
        let before = pauli_trace(&rho, &u, &v).unwrap();
        let after = pauli_trace(&out, &u, &v).unwrap();
        // α = (v ‖ u) = v in the low half.
        let bias = set.bias_at(v.bits());
        assert!((after - before * bias).norm() < 1e-12);
    }

    #[test]
    fn secure_flag_modes() {
        let set = SmallBiasSet::full_space(4).unwrap();
        assert!(SchemeAConfig::new(2, set.clone(), 0.01, BoundMode::Tight).unwrap().is_secure());
        let set = aghp_set(4, 3).unwrap();
        let delta = certify_bias(&set).unwrap().max_bias;
        assert!(delta > 0.0);
        // ε chosen between the two thresholds.
        let eps = delta * 2.0 / 1.2;
        let tight = SchemeAConfig::new(2, set.clone(), eps, BoundMode::Tight).unwrap();
        let relaxed = SchemeAConfig::new(2, set, eps, BoundMode::Relaxed).unwrap();
        assert!(!tight.is_secure());
        assert!(relaxed.is_secure());
    }

    #[test]
    fn keygen_in_range() {
        let c = cfg(2, aghp_set(4, 2).unwrap());
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        for _ in 0..50 {
            let Key::A { index } = scheme_a_keygen(&c, &mut rng) else { unreachable!() };
            assert!(index < c.key_count());
        }
    }
}
