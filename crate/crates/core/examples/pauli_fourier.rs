//! Pauli words, their products and the Pauli–Fourier expansion of a state.
//!
//! `cargo run --example pauli_fourier`

use qpad::gf2::BitString;
use qpad::pauli::{commute_sign, pauli_coefficient, pauli_mul, purity_via_pauli, PauliOp};
use qpad::qcore::{purity, random_mixed_density};

fn word(u: u64, v: u64) -> qpad::Result<PauliOp> {
    PauliOp::new(BitString::new(2, u)?, BitString::new(2, v)?, 1)
}

fn main() -> qpad::Result<()> {
    let p = word(0b01, 0b10)?;
    let q = word(0b11, 0b01)?;
    println!("{p} * {q} = {}", pauli_mul(&p, &q)?);
    println!("{q} * {p} = {}", pauli_mul(&q, &p)?);
    println!("commute sign: {}", commute_sign(&p, &q)?);

    let rho = random_mixed_density(2, 2, 7)?;
    println!("\nlargest Pauli–Fourier coefficients of a random rank-2 state:");
    let mut coeffs = Vec::new();
    for u in 0..4 {
        for v in 0..4 {
            let c = pauli_coefficient(&rho, &BitString::new(2, u)?, &BitString::new(2, v)?)?;
            coeffs.push((c.norm(), u, v, c));
        }
    }
    coeffs.sort_by(|a, b| b.0.total_cmp(&a.0));
    for (_, u, v, c) in coeffs.iter().take(5) {
        println!("  X({u:02b})Z({v:02b}): {:+.4}{:+.4}i", c.re, c.im);
    }
    println!("purity {:.12} (direct) vs {:.12} (Parseval)", purity(&rho), purity_via_pauli(&rho)?);
    Ok(())
}
