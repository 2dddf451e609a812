//! Scheme C: qubits embedded in a prime dimension, a phase layer from a
//! small-bias set, then a Weyl operator.
//!
//! `cargo run --example scheme_c`

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use qpad::qcore::{purity, random_pure_density, trace_distance, DensityMatrix};
use qpad::schemes::{
    core_channel_purity, embed_qubits, scheme_c_channel, scheme_c_core_channel, scheme_c_decrypt, scheme_c_encrypt,
    scheme_c_keygen, unembed, SchemeCConfig,
};
use qpad::smallbias::aghp_set;

fn main() -> qpad::Result<()> {
    let n = 3;
    let rho = random_pure_density(n, 5)?;
    let probe = SchemeCConfig::new(n, aghp_set(4, 3)?, 1.0)?;
    let d = probe.d();
    let embedded = embed_qubits(&rho, d)?;
    let mixed = DensityMatrix::maximally_mixed(d);

    let core = scheme_c_core_channel(d, &embedded)?;
    println!(
        "d={d}: core channel alone gives purity {:.5} (formula {:.5}), distance {:.4}",
        purity(&core),
        core_channel_purity(&embedded),
        trace_distance(&core, &mixed)?
    );

    println!("\n{:<14} {:>6} {:>10} {:>10} {:>10}", "phase set", "|B|", "bias", "key bits", "distance");
    for m in [2, 4, 6, 8] {
        let cfg = SchemeCConfig::new(n, aghp_set(SchemeCConfig::phase_bits(d), m)?, 1.0)?;
        let out = scheme_c_channel(&cfg, &embedded)?;
        println!(
            "AGHP GF(2^{m}) {:>6} {:>10.5} {:>10.2} {:>10.5}",
            cfg.set().len(),
            cfg.certified_bias(),
            cfg.key_bits(),
            trace_distance(&out, &mixed)?
        );
    }

    let cfg = SchemeCConfig::new(n, aghp_set(SchemeCConfig::phase_bits(d), 4)?, 1.0)?;
    let key = scheme_c_keygen(&cfg, &mut ChaCha8Rng::seed_from_u64(3));
    let ct = scheme_c_encrypt(&cfg, &key, &embedded)?;
    let back = unembed(&scheme_c_decrypt(&cfg, &key, &ct)?, n)?;
    println!("\nkey {key:?}: decryption error {:.1e}", back.matrix().max_abs_diff(rho.matrix())?);
    Ok(())
}
