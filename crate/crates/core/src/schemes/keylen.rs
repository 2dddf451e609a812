use crate::error::{invalid, Result};

/// Key lengths in bits for one `(n, ε)` pair, additive constants taken as 0.
#[derive(Clone, Debug, PartialEq)]
pub struct KeyLengthRow {
    pub n: u64,
    pub epsilon: f64,
    /// `n + 2 log n + 2 log(1/ε)`.
    pub scheme_a: u64,
    /// `n + 2 log(1/ε)`.
    pub scheme_b: u64,
    /// `n + 2 log n + 2 log(1/ε)`, the branch built from small-bias sets.
    pub scheme_c_bias_branch: u64,
    /// `n + log n + 3 log(1/ε)`; formula only, not constructed here.
    pub scheme_c_code_branch: u64,
    /// The smaller of the two branches.
    pub scheme_c: u64,
    /// True when the code branch is strictly smaller, which happens iff `ε > 1/n`.
    pub code_branch_wins: bool,
    /// The full perfect one-time pad, `2n`.
    pub perfect_pad: u64,
}

/// Ceiling that ignores rounding noise just above an integer.
fn bits(x: f64) -> u64 {
    (x - 1e-9).ceil().max(0.0) as u64
}

pub fn key_length_table(n: u64, epsilon: f64) -> Result<KeyLengthRow> {
    if n == 0 {
        return invalid("n must be at least 1");
    }
    if !(epsilon > 0.0 && epsilon <= 1.0) {
        return invalid(format!("epsilon {epsilon} outside (0, 1]"));
    }
    let nf = n as f64;
    let log_n = nf.log2();
    let log_e = (1.0 / epsilon).log2();
    let first = nf + 2.0 * log_n + 2.0 * log_e;
    let second = nf + log_n + 3.0 * log_e;
    Ok(KeyLengthRow {
        n,
        epsilon,
        scheme_a: bits(first),
        scheme_b: bits(nf + 2.0 * log_e),
        scheme_c_bias_branch: bits(first),
        scheme_c_code_branch: bits(second),
        scheme_c: bits(first.min(second)),
        code_branch_wins: second < first - 1e-12,
        perfect_pad: 2 * n,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hand_arithmetic() {
        let row = key_length_table(128, (2f64).powi(-10)).unwrap();
        assert_eq!(row.scheme_a, 128 + 14 + 20);
        assert_eq!(row.scheme_b, 148);
        assert_eq!(row.scheme_c_bias_branch, 162);
        assert_eq!(row.scheme_c_code_branch, 128 + 7 + 30);
        assert_eq!(row.scheme_c, 162);
        assert!(!row.code_branch_wins);
        assert_eq!(row.perfect_pad, 256);
    }

    #[test]
    fn epsilon_one() {
        for n in [1, 5, 64] {
            assert_eq!(key_length_table(n, 1.0).unwrap().scheme_b, n);
        }
    }

    #[test]
    fn crossover_at_one_over_n() {
        let n = 64u64;
        assert!(key_length_table(n, 1.0 / 32.0).unwrap().code_branch_wins);
        assert!(!key_length_table(n, 1.0 / 64.0).unwrap().code_branch_wins);
        assert!(!key_length_table(n, 1.0 / 128.0).unwrap().code_branch_wins);
    }

    #[test]
    fn monotone_in_n() {
        let mut last = key_length_table(1, 0.01).unwrap();
        for n in 2..200 {
            let row = key_length_table(n, 0.01).unwrap();
            assert!(row.scheme_a >= last.scheme_a && row.scheme_b >= last.scheme_b && row.scheme_c >= last.scheme_c);
            last = row;
        }
    }

    #[test]
    fn rejects_bad_input() {
        assert!(key_length_table(0, 0.5).is_err());
        assert!(key_length_table(4, 0.0).is_err());
        assert!(key_length_table(4, 1.5).is_err());
    }
}
