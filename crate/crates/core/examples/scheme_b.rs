//! Scheme B: a public field tag times a key from a k-dimensional subgroup.
//! The adversary sees a classical-quantum state; its distance from uniform
//! falls with k.
//!
//! `cargo run --example scheme_b`

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use qpad::qcore::random_pure_density;
use qpad::schemes::{scheme_b_channel, scheme_b_decrypt, scheme_b_encrypt, scheme_b_keygen, BoundMode, SchemeBConfig};

fn main() -> qpad::Result<()> {
    let n = 3;
    let rho = random_pure_density(n, 4)?;
    println!("{:>3} {:>8} {:>12} {:>12} {:>12}", "k", "keys", "cq purity", "distance", "bound");
    for k in 1..=2 * n {
        let cfg = SchemeBConfig::new(n, k, 0.5, BoundMode::Tight)?;
        let cq = scheme_b_channel(&cfg, &rho)?;
        println!(
            "{k:>3} {:>8} {:>12.4e} {:>12.4e} {:>12.4e}",
            cfg.key_count(),
            cq.purity(),
            cq.distance_from_uniform()?,
            cfg.distance_bound()
        );
    }

    let cfg = SchemeBConfig::for_epsilon(n, 0.5, BoundMode::Tight)?;
    let key = scheme_b_keygen(&cfg, &mut ChaCha8Rng::seed_from_u64(2));
    let ct = scheme_b_encrypt(&cfg, &key, &rho, 99)?;
    let back = scheme_b_decrypt(&cfg, &key, &ct)?;
    if let qpad::schemes::Ciphertext::B { tag, .. } = &ct {
        println!(
            "\nk={} key {key:?} tag {tag:#x}: decryption error {:.1e}",
            cfg.k(),
            back.matrix().max_abs_diff(rho.matrix())?
        );
    }
    Ok(())
}
