//! Bias certification: a set's Walsh–Hadamard spectrum and the root-mean-square
//! bias of the linear families behind scheme B.
//!
//! `cargo run --example certify_bias`

use qpad::smallbias::{aghp_set, certify_bias, certify_family_bias, linear_family};

fn main() -> qpad::Result<()> {
    let set = aghp_set(10, 6)?;
    let spectrum = set.bias_spectrum()?;
    let report = certify_bias(&set)?.with_histogram(&spectrum, 8);
    println!("AGHP(10 bits, GF(2^6)): max bias {:.5} at alpha={}", report.max_bias, report.argmax_alpha.to_hex());
    for (edge, count) in report.histogram.unwrap_or_default() {
        println!("  |bias| >= {edge:.3}: {count}");
    }

    println!("\nlinear families over GF(2^8):");
    for k in [2, 4, 6, 8] {
        let fam = linear_family(8, k)?;
        let rms = certify_family_bias(&fam)?.max_bias;
        println!("  k={k}  members={:<4} rms bias={rms:.5}  2^(-k/2)={:.5}", fam.index_size(), fam.claimed_bias());
    }
    Ok(())
}
