//! The `qpad verify` report from library code: every scheme on the fixed
//! test states plus random ones, with the bound each row is checked against.
//!
//! `cargo run --example verify_suite -- 3` runs it at n = 3.

use qpad::cli::{run_verify, ExperimentSpec, OutputFormat};

fn main() -> qpad::Result<()> {
    let n = std::env::args().nth(1).and_then(|a| a.parse().ok()).unwrap_or(2);
    let spec = ExperimentSpec { n, trials: 2, seed: 1, ..Default::default() };
    let report = run_verify(&spec)?;
    print!("{}", report.render(OutputFormat::Table)?);
    if !report.all_pass() {
        std::process::exit(1);
    }
    Ok(())
}
