use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{invalid, Result};
use crate::gf2::parity_dot;

use super::{certify_bias, Construction, SmallBiasSet};

/// Knobs for the randomized greedy search.
#[derive(Clone, Copy, Debug)]
pub struct SearchBudget {
    pub restarts: usize,
    /// Candidates scored per greedy step; every unused point is scored when
    /// fewer remain.
    pub candidates_per_step: usize,
    pub seed: u64,
}

impl Default for SearchBudget {
    fn default() -> Self {
        Self { restarts: 8, candidates_per_step: 256, seed: 0 }
    }
}

/// Random-restart greedy search for a `size`-point set of distinct `m`-bit
/// strings with small maximum bias. The result is certified exactly and is a
/// pure function of `(m, size, budget)`.
pub fn exhaustive_best_set(m: usize, size: usize, budget: SearchBudget) -> Result<SmallBiasSet> {
    if m == 0 || m > 12 {
        return invalid(format!("search needs 1 ≤ m ≤ 12, got {m}"));
    }
    let universe = 1usize << m;
    if size == 0 || size > universe {
        return invalid(format!("set size {size} outside 1..={universe}"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(budget.seed);
    let mut best: Option<(u64, Vec<u64>)> = None;
    for _ in 0..budget.restarts.max(1) {
        let (score, points) = greedy_run(m, size, budget.candidates_per_step.max(1), &mut rng);
        if best.as_ref().is_none_or(|(s, _)| score < *s) {
            best = Some((score, points));
        }
    }
    let (_, points) = best.expect("at least one restart");
    let set = SmallBiasSet::new(m, points, 1.0, Construction::Exhaustive)?;
    let certified = certify_bias(&set)?.max_bias;
    SmallBiasSet::new(m, set.points().to_vec(), certified, Construction::Exhaustive)
}

/// One greedy pass. Returns (max |character sum| over α ≠ 0, points).
fn greedy_run(m: usize, size: usize, per_step: usize, rng: &mut ChaCha8Rng) -> (u64, Vec<u64>) {
    let universe = 1usize << m;
    let mut sums = vec![0i64; universe];
    let mut unused: Vec<u64> = (0..universe as u64).collect();
    let mut chosen = Vec::with_capacity(size);

    let first = rng.random_range(0..universe) as u64;
    add_point(first, &mut sums, &mut unused, &mut chosen);

    while chosen.len() < size {
        let pool: Vec<u64> = if unused.len() <= per_step {
            unused.clone()
        } else {
            let mut picked: Vec<u64> = sample(rng, unused.len(), per_step).into_iter().map(|i| unused[i]).collect();
            picked.sort_unstable();
            picked
        };
        let (_, pick) = pool.iter().map(|&c| (score_with(c, &sums), c)).min().expect("pool is nonempty");
        add_point(pick, &mut sums, &mut unused, &mut chosen);
    }
    let score = sums.iter().skip(1).map(|s| s.unsigned_abs()).max().unwrap_or(0);
    (score, chosen)
}

fn score_with(candidate: u64, sums: &[i64]) -> u64 {
    sums.iter()
        .enumerate()
        .skip(1)
        .map(|(alpha, s)| (s + chi(alpha as u64, candidate)).unsigned_abs())
        .max()
        .unwrap_or(0)
}

#[inline]
fn chi(alpha: u64, x: u64) -> i64 {
    1 - 2 * parity_dot(alpha, x) as i64
}

fn add_point(p: u64, sums: &mut [i64], unused: &mut Vec<u64>, chosen: &mut Vec<u64>) {
    for (alpha, s) in sums.iter_mut().enumerate() {
        *s += chi(alpha as u64, p);
    }
    unused.retain(|&q| q != p);
    chosen.push(p);
}
