//! Builds small-bias sets three ways and prints their exact bias.
//!
//! `cargo run --example make_set`

use qpad::smallbias::{aghp_set, certify_bias, exhaustive_best_set, SearchBudget, SmallBiasSet};

fn main() -> qpad::Result<()> {
    let sets = [
        ("AGHP n_out=8 over GF(2^5)", aghp_set(8, 5)?),
        ("full space on 6 bits", SmallBiasSet::full_space(6)?),
        ("search, 12 points on 6 bits", exhaustive_best_set(6, 12, SearchBudget::default())?),
    ];
    for (name, set) in &sets {
        let report = certify_bias(set)?;
        println!(
            "{name:<30} |S|={:<5} claimed={:<8.5} certified={:<8.5} worst alpha={}",
            set.len(),
            set.claimed_bias(),
            report.max_bias,
            report.argmax_alpha.to_hex()
        );
    }
    // Sets round-trip through the SBSET text format.
    let text = sets[0].1.to_text();
    let back: SmallBiasSet = text.parse()?;
    assert_eq!(back.points(), sets[0].1.points());
    println!("\n{}", text.lines().next().unwrap_or_default());
    Ok(())
}
