//! Key lengths of the three schemes against the 2n-bit perfect pad, and where
//! scheme C switches branch.
//!
//! `cargo run --example keylen_table`

use qpad::schemes::key_length_table;

fn main() -> qpad::Result<()> {
    println!(
        "{:>6} {:>10} {:>6} {:>6} {:>8} {:>8} {:>6} {:>6}  C branch",
        "n", "epsilon", "A", "B", "C-bias", "C-code", "C", "2n"
    );
    for n in [16u64, 128, 1024] {
        for j in [1, 4, 7, 10, 20] {
            let eps = (2f64).powi(-j);
            let r = key_length_table(n, eps)?;
            println!(
                "{n:>6} {:>10} {:>6} {:>6} {:>8} {:>8} {:>6} {:>6}  {}",
                format!("2^-{j}"),
                r.scheme_a,
                r.scheme_b,
                r.scheme_c_bias_branch,
                r.scheme_c_code_branch,
                r.scheme_c,
                r.perfect_pad,
                if r.code_branch_wins { "code (not constructed)" } else { "bias" }
            );
        }
    }
    Ok(())
}
