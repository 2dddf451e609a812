use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::{check_work, register_qubits, weighted_average, wrong_kind, BoundMode, Ciphertext, Key, SchemeKind};
use crate::error::{invalid, Error, Result};
use crate::gf2::{mask, FieldSpec};
use crate::pauli::conjugate_pauli_raw;
use crate::qcore::{Branch, ClassicalQuantumState, DensityMatrix};
use crate::smallbias::{certify_family_bias, linear_family, SetFamily};

/// Scheme B: a public tag `α ∈ GF(2^{2n}) \ {0}` is drawn per encryption and
/// the Pauli word is named by the field product `α·κ`, with the secret `κ`
/// in the span of `1, x, …, x^{k−1}`.
///
/// `κ = 0` is a valid key. It encrypts as the identity for every tag; the
/// security bound only holds on average over keys.
#[derive(Clone, Debug)]
pub struct SchemeBConfig {
    n: usize,
    k: usize,
    family: SetFamily,
    epsilon_target: f64,
    mode: BoundMode,
}

impl SchemeBConfig {
    pub fn new(n: usize, k: usize, epsilon_target: f64, mode: BoundMode) -> Result<Self> {
        if n == 0 || n > 12 {
            return invalid(format!("scheme B supports 1 ≤ n ≤ 12, got {n}"));
        }
        if k == 0 || k > 2 * n {
            return invalid(format!("need 1 ≤ k ≤ 2n = {}, got {k}", 2 * n));
        }
        if !(epsilon_target > 0.0 && epsilon_target <= 1.0) {
            return invalid(format!("epsilon {epsilon_target} outside (0, 1]"));
        }
        Ok(Self { n, k, family: linear_family(2 * n, k)?, epsilon_target, mode })
    }

    /// Picks `k = n + 2⌈log₂(1/ε)⌉`, capped at the field size 2n.
    pub fn for_epsilon(n: usize, epsilon_target: f64, mode: BoundMode) -> Result<Self> {
        if !(epsilon_target > 0.0 && epsilon_target <= 1.0) {
            return invalid(format!("epsilon {epsilon_target} outside (0, 1]"));
        }
        Self::new(n, Self::k_for(n, epsilon_target).min(2 * n), epsilon_target, mode)
    }

    /// Uncapped `n + 2⌈log₂(1/ε)⌉`.
    pub fn k_for(n: usize, epsilon: f64) -> usize {
        n + 2 * ((1.0 / epsilon).log2() - 1e-9).ceil().max(0.0) as usize
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn field(&self) -> &FieldSpec {
        self.family.field().expect("linear family carries its field")
    }

    pub fn family(&self) -> &SetFamily {
        &self.family
    }

    pub fn epsilon_target(&self) -> f64 {
        self.epsilon_target
    }

    pub fn mode(&self) -> BoundMode {
        self.mode
    }

    /// The family's designed bias `2^{−k/2}`.
    pub fn design_bias(&self) -> f64 {
        (2f64).powf(-(self.k as f64) / 2.0)
    }

    /// Exact root-mean-square family bias; never above [`Self::design_bias`].
    pub fn certified_bias(&self) -> Result<f64> {
        Ok(certify_family_bias(&self.family)?.max_bias)
    }

    /// Exact root-mean-square bias in closed form: every nonzero character
    /// lies in the dual of `(2^{2n−k} − 1)` of the `2^{2n} − 1` members, so
    /// `E_i[Â_i(α)²] = (2^{2n−k} − 1)/(2^{2n} − 1)`. Matches [`Self::certified_bias`].
    pub fn rms_bias(&self) -> f64 {
        let dual = (2f64).powi((2 * self.n - self.k) as i32) - 1.0;
        (dual / self.tag_count() as f64).sqrt()
    }

    /// Judged on [`Self::rms_bias`], so the capped k = 2n config (the full pad) is secure.
    pub fn is_secure(&self) -> bool {
        self.rms_bias() <= self.mode.factor() * self.epsilon_target * (2f64).powf(-(self.n as f64) / 2.0) + 1e-15
    }

    /// `2^{−k/2} · 2^{n/2}`.
    pub fn distance_bound(&self) -> f64 {
        self.design_bias() * (2f64).powf(self.n as f64 / 2.0)
    }

    /// Number of nonzero tags, `2^{2n} − 1`.
    pub fn tag_count(&self) -> u64 {
        mask(2 * self.n)
    }

    pub fn key_count(&self) -> u64 {
        1 << self.k
    }

    fn kappa(&self, key: &Key) -> Result<u64> {
        match *key {
            Key::B { kappa } if kappa < self.key_count() => Ok(kappa),
            Key::B { kappa } => invalid(format!("κ = {kappa:#x} is outside the {}-dimensional key space", self.k)),
            other => wrong_kind(SchemeKind::B, other.kind()),
        }
    }

    fn check_tag(&self, tag: u64) -> Result<()> {
        if tag == 0 || tag > self.tag_count() {
            return invalid(format!("tag {tag:#x} is not a nonzero element of GF(2^{})", 2 * self.n));
        }
        Ok(())
    }

    /// `(a, b)` halves of `α·κ`.
    fn pad(&self, tag: u64, kappa: u64) -> (u64, u64) {
        let p = self.field().mul_raw(tag, kappa);
        (p & mask(self.n), p >> self.n)
    }

    fn branch_state(&self, rho: &DensityMatrix, tag: u64) -> Result<DensityMatrix> {
        let w = 1.0 / self.key_count() as f64;
        let terms: Vec<(u64, f64)> = (0..self.key_count()).map(|kappa| (kappa, w)).collect();
        let out = weighted_average(&terms, |&kappa| {
            let (a, b) = self.pad(tag, kappa);
            conjugate_pauli_raw(rho.matrix(), a, b)
        });
        DensityMatrix::from_channel_output(out)
    }
}

pub fn scheme_b_keygen<R: Rng + ?Sized>(cfg: &SchemeBConfig, rng: &mut R) -> Key {
    Key::B { kappa: rng.random_range(0..cfg.key_count()) }
}

/// Draws `α` uniformly from the nonzero field elements with a ChaCha8 stream
/// seeded by `randomness_seed`, then applies the word named by `α·κ`.
pub fn scheme_b_encrypt(
    cfg: &SchemeBConfig,
    key: &Key,
    rho: &DensityMatrix,
    randomness_seed: u64,
) -> Result<Ciphertext> {
    register_qubits(rho, cfg.n)?;
    let kappa = cfg.kappa(key)?;
    let tag = ChaCha8Rng::seed_from_u64(randomness_seed).random_range(1..=cfg.tag_count());
    let (a, b) = cfg.pad(tag, kappa);
    let state = DensityMatrix::from_channel_output(conjugate_pauli_raw(rho.matrix(), a, b))?;
    Ok(Ciphertext::B { tag, state })
}

pub fn scheme_b_decrypt(cfg: &SchemeBConfig, key: &Key, ct: &Ciphertext) -> Result<DensityMatrix> {
    let Ciphertext::B { tag, state } = ct else {
        return wrong_kind(SchemeKind::B, ct.kind());
    };
    register_qubits(state, cfg.n)?;
    cfg.check_tag(*tag)?;
    let (a, b) = cfg.pad(*tag, cfg.kappa(key)?);
    DensityMatrix::from_channel_output(conjugate_pauli_raw(state.matrix(), a, b))
}

fn cq_over_tags(cfg: &SchemeBConfig, rho: &DensityMatrix, tags: Vec<u64>) -> Result<ClassicalQuantumState> {
    let p = 1.0 / tags.len() as f64;
    let states: Vec<Result<DensityMatrix>> = tags.par_iter().map(|&t| cfg.branch_state(rho, t)).collect();
    let branches = tags
        .into_iter()
        .zip(states)
        .map(|(tag, state)| Ok(Branch { probability: p, tag, state: state? }))
        .collect::<Result<Vec<_>>>()?;
    ClassicalQuantumState::new(branches)
}

/// Exact cq-state `Σ_α (1/|I|) |α⟩⟨α| ⊗ E_κ[X^a Z^b ρ Z^b X^a]` with `(a, b) = α·κ`.
pub fn scheme_b_channel(cfg: &SchemeBConfig, rho: &DensityMatrix) -> Result<ClassicalQuantumState> {
    register_qubits(rho, cfg.n)?;
    check_work(
        "scheme B channel",
        cfg.tag_count().saturating_mul(cfg.key_count()),
        rho.dim(),
        "use fewer qubits, a smaller k, or the sampled-tag channel",
    )?;
    cq_over_tags(cfg, rho, (1..=cfg.tag_count()).collect())
}

/// The cq-state restricted to `samples` distinct tags drawn without
/// replacement (ChaCha8, `seed`), reweighted uniformly. Tags are kept in
/// increasing order.
pub fn scheme_b_channel_sampled(
    cfg: &SchemeBConfig,
    rho: &DensityMatrix,
    samples: usize,
    seed: u64,
) -> Result<ClassicalQuantumState> {
    register_qubits(rho, cfg.n)?;
    let total = cfg.tag_count();
    if samples == 0 || samples as u64 > total {
        return invalid(format!("cannot sample {samples} of {total} tags"));
    }
    check_work(
        "sampled scheme B channel",
        (samples as u64).saturating_mul(cfg.key_count()),
        rho.dim(),
        "sample fewer tags or use a smaller k",
    )?;
    let total = usize::try_from(total).map_err(|_| Error::ResourceLimit("tag space too large".into()))?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut tags: Vec<u64> = sample(&mut rng, total, samples).into_iter().map(|i| i as u64 + 1).collect();
    tags.sort_unstable();
    cq_over_tags(cfg, rho, tags)
}
