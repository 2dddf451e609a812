//! `QSTATE v1` text format: a header line, then one row per line with
//! entries written as `re±imi` in 17 significant digits.

use std::str::FromStr;

use num_complex::Complex64;

use super::{ComplexMatrix, DensityMatrix};
use crate::error::{Error, Result};
use crate::textfmt::{header_field, parse_header};

fn format_entry(z: Complex64) -> String {
    let sign = if z.im.is_sign_negative() { '-' } else { '+' };
    format!("{:.16e}{}{:.16e}i", z.re, sign, z.im.abs())
}

fn parse_entry(token: &str) -> Result<Complex64> {
    let bad = || Error::Parse(format!("bad complex entry {token:?}"));
    let body = token.strip_suffix('i').ok_or_else(bad)?;
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&k| matches!(bytes[k], b'+' | b'-') && !matches!(bytes[k - 1], b'e' | b'E'))
        .ok_or_else(bad)?;
    let re: f64 = body[..split].parse().map_err(|_| bad())?;
    let im: f64 = body[split + 1..].parse().map_err(|_| bad())?;
    Ok(Complex64::new(re, if bytes[split] == b'-' { -im } else { im }))
}

pub fn matrix_to_text(m: &ComplexMatrix) -> String {
    let d = m.dim();
    let mut out = format!("QSTATE v1 dim={d}\n");
    for i in 0..d {
        let row: Vec<String> = m.row(i).iter().map(|&z| format_entry(z)).collect();
        out.push_str(&row.join(" "));
        out.push('\n');
    }
    out
}

/// Reads a `QSTATE` block from the front of `lines`, consuming exactly the
/// header and `dim` rows.
pub(crate) fn read_matrix<'a>(lines: &mut impl Iterator<Item = &'a str>) -> Result<ComplexMatrix> {
    let header = lines.next().ok_or_else(|| Error::Parse("missing QSTATE header".into()))?;
    let dim: usize = header_field(&parse_header(header, "QSTATE")?, "dim")?;
    let mut data = Vec::with_capacity(dim * dim);
    for r in 0..dim {
        let line = lines.next().ok_or_else(|| Error::Parse(format!("missing row {r} of {dim}")))?;
        let row = line.split_whitespace().map(parse_entry).collect::<Result<Vec<_>>>()?;
        if row.len() != dim {
            return Err(Error::Parse(format!("row {r} has {} entries, expected {dim}", row.len())));
        }
        data.extend(row);
    }
    ComplexMatrix::from_vec(dim, data)
}

pub fn parse_matrix(text: &str) -> Result<ComplexMatrix> {
    let mut lines = text.lines().filter(|l| !l.trim().is_empty());
    let m = read_matrix(&mut lines)?;
    if lines.next().is_some() {
        return Err(Error::Parse("trailing data after QSTATE block".into()));
    }
    Ok(m)
}

impl DensityMatrix {
    pub fn to_text(&self) -> String {
        matrix_to_text(self.matrix())
    }
}

impl FromStr for DensityMatrix {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        DensityMatrix::new(parse_matrix(text)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcore::random_mixed_density;
    use proptest::prelude::*;

    #[test]
    fn entry_forms() {
        assert_eq!(format_entry(Complex64::new(0.5, -0.25)), "5.0000000000000000e-1-2.5000000000000000e-1i");
        assert_eq!(parse_entry("1e-3+2E+1i").unwrap(), Complex64::new(1e-3, 20.0));
        assert_eq!(parse_entry("-1-2i").unwrap(), Complex64::new(-1.0, -2.0));
        assert!(parse_entry("1+2").is_err());
        assert!(parse_entry("abc+1i").is_err());
    }

    #[test]
    fn density_round_trip() {
        let rho = random_mixed_density(2, 2, 17).unwrap();
        let text = rho.to_text();
        assert!(text.starts_with("QSTATE v1 dim=4\n"));
        let back: DensityMatrix = text.parse().unwrap();
        assert_eq!(back, rho);
        assert_eq!(back.to_text(), text);
    }

    #[test]
    fn malformed_blocks() {
        assert!(parse_matrix("QSTATE v1 dim=2\n1+0i 0+0i\n").is_err());
        assert!(parse_matrix("QSTATE v1 dim=1\n1+0i 0+0i\n").is_err());
        assert!(parse_matrix("QSTATE v2 dim=1\n1+0i\n").is_err());
        assert!("QSTATE v1 dim=1\n2+0i\n".parse::<DensityMatrix>().is_err());
    }

    proptest! {
        #[test]
        fn entries_round_trip_exactly(re in proptest::num::f64::NORMAL | proptest::num::f64::ZERO,
                                      im in proptest::num::f64::NORMAL | proptest::num::f64::ZERO) {
            let z = Complex64::new(re, im);
            let back = parse_entry(&format_entry(z)).unwrap();
            prop_assert_eq!(back.re.to_bits(), z.re.to_bits());
            prop_assert_eq!(back.im.to_bits(), z.im.to_bits());
        }
    }
}
