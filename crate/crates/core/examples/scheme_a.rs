//! Scheme A: Pauli words keyed by a small-bias set. Shows one encryption and the
//! adversary's view as the set shrinks.
//!
//! `cargo run --example scheme_a`

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use qpad::qcore::{purity, random_pure_density, trace_distance, DensityMatrix};
use qpad::schemes::{scheme_a_channel, scheme_a_decrypt, scheme_a_encrypt, scheme_a_keygen, BoundMode, SchemeAConfig};
use qpad::smallbias::{aghp_set, SmallBiasSet};

fn main() -> qpad::Result<()> {
    let n = 3;
    let rho = random_pure_density(n, 11)?;
    let mixed = DensityMatrix::maximally_mixed(1 << n);

    println!("{:<22} {:>6} {:>10} {:>12} {:>12}", "key set", "|B|", "bias", "distance", "bound");
    let mut sets = vec![("full space".to_string(), SmallBiasSet::full_space(2 * n)?)];
    for m in [7, 6, 5, 4] {
        sets.push((format!("AGHP GF(2^{m})"), aghp_set(2 * n, m)?));
    }
    for (name, set) in sets {
        let cfg = SchemeAConfig::new(n, set, 0.5, BoundMode::Tight)?;
        let out = scheme_a_channel(&cfg, &rho)?;
        println!(
            "{name:<22} {:>6} {:>10.5} {:>12.3e} {:>12.5}",
            cfg.key_count(),
            cfg.certified_bias(),
            trace_distance(&out, &mixed)?,
            cfg.distance_bound()
        );
    }

    let cfg = SchemeAConfig::new(n, aghp_set(2 * n, 6)?, 0.5, BoundMode::Tight)?;
    let key = scheme_a_keygen(&cfg, &mut ChaCha8Rng::seed_from_u64(1));
    let ct = scheme_a_encrypt(&cfg, &key, &rho)?;
    let back = scheme_a_decrypt(&cfg, &key, &ct)?;
    println!(
        "\nkey {key:?}: ciphertext purity {:.3}, decryption error {:.1e}",
        purity(ct.state()),
        back.matrix().max_abs_diff(rho.matrix())?
    );
    Ok(())
}
