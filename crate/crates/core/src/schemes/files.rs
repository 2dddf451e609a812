//! Text forms of keys and ciphertexts.
//!
//! ```text
//! QKEY v1 scheme=A n=2
//! 0x1f
//! QKEY v1 scheme=B n=2 k=4
//! 0x5
//! QKEY v1 scheme=C n=2 d=5
//! 0x3 0x11
//! ```
//!
//! Scheme B ciphertexts are `QCT v1 tag=0x..` followed by a `QSTATE` block;
//! A and C ciphertexts are a bare `QSTATE` block.

use super::{Ciphertext, Key, SchemeKind};
use crate::error::{Error, Result};
use crate::gf2::parse_hex;
use crate::qcore::{read_matrix, DensityMatrix};
use crate::textfmt::{header_field, parse_header};

/// Scheme parameters recorded in a key file next to the material.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct KeyHeader {
    pub scheme: SchemeKind,
    pub n: usize,
    /// Key-space dimension, scheme B only.
    pub k: Option<usize>,
    /// Prime dimension, scheme C only.
    pub d: Option<usize>,
}

pub fn key_to_text(header: &KeyHeader, key: &Key) -> String {
    let mut line = format!("QKEY v1 scheme={} n={}", header.scheme, header.n);
    if let Some(k) = header.k {
        line.push_str(&format!(" k={k}"));
    }
    if let Some(d) = header.d {
        line.push_str(&format!(" d={d}"));
    }
    let material = match *key {
        Key::A { index } => format!("{index:#x}"),
        Key::B { kappa } => format!("{kappa:#x}"),
        Key::C { a, index } => format!("{a:#x} {index:#x}"),
    };
    format!("{line}\n{material}\n")
}

pub fn key_from_text(text: &str) -> Result<(KeyHeader, Key)> {
    let mut lines = text.lines().filter(|l| !l.trim().is_empty());
    let head = lines.next().ok_or_else(|| Error::Parse("empty key file".into()))?;
    let fields = parse_header(head, "QKEY")?;
    let scheme: SchemeKind = header_field::<String>(&fields, "scheme")?.parse()?;
    let n: usize = header_field(&fields, "n")?;
    let optional = |key: &str| -> Result<Option<usize>> {
        if fields.iter().any(|(k, _)| *k == key) {
            header_field(&fields, key).map(Some)
        } else {
            Ok(None)
        }
    };
    let header = KeyHeader { scheme, n, k: optional("k")?, d: optional("d")? };
    let material: Vec<u64> = lines
        .next()
        .ok_or_else(|| Error::Parse("key file has no material line".into()))?
        .split_whitespace()
        .map(parse_hex)
        .collect::<Result<_>>()?;
    if lines.next().is_some() {
        return Err(Error::Parse("trailing data after key material".into()));
    }
    let key = match (scheme, material.as_slice()) {
        (SchemeKind::A, &[index]) => Key::A { index: index as usize },
        (SchemeKind::B, &[kappa]) => Key::B { kappa },
        (SchemeKind::C, &[a, index]) => Key::C { a, index: index as usize },
        _ => return Err(Error::Parse(format!("wrong number of material words for scheme {scheme}"))),
    };
    match (scheme, header.k, header.d) {
        (SchemeKind::B, None, _) => Err(Error::Parse("scheme B key needs k=".into())),
        (SchemeKind::C, _, None) => Err(Error::Parse("scheme C key needs d=".into())),
        _ => Ok((header, key)),
    }
}

pub fn ciphertext_to_text(ct: &Ciphertext) -> String {
    match ct {
        Ciphertext::A(s) | Ciphertext::C(s) => s.to_text(),
        Ciphertext::B { tag, state } => format!("QCT v1 tag={tag:#x}\n{}", state.to_text()),
    }
}

/// Parses a ciphertext for the given scheme.
pub fn ciphertext_from_text(scheme: SchemeKind, text: &str) -> Result<Ciphertext> {
    let mut lines = text.lines().filter(|l| !l.trim().is_empty());
    let tag = if scheme == SchemeKind::B {
        let head = lines.next().ok_or_else(|| Error::Parse("empty ciphertext".into()))?;
        let fields = parse_header(head, "QCT")?;
        let raw: String = header_field(&fields, "tag")?;
        let tag = parse_hex(&raw)?;
        if tag == 0 {
            return Err(Error::Parse("ciphertext tag must be nonzero".into()));
        }
        Some(tag)
    } else {
        None
    };
    let state = DensityMatrix::new(read_matrix(&mut lines)?)?;
    if lines.next().is_some() {
        return Err(Error::Parse("trailing data after ciphertext".into()));
    }
    Ok(match (scheme, tag) {
        (SchemeKind::A, _) => Ciphertext::A(state),
        (SchemeKind::B, Some(tag)) => Ciphertext::B { tag, state },
        (SchemeKind::C, _) => Ciphertext::C(state),
        (SchemeKind::B, None) => unreachable!("tag parsed above"),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcore::random_mixed_density;

    #[test]
    fn key_round_trips() {
        let cases = [
            (KeyHeader { scheme: SchemeKind::A, n: 2, k: None, d: None }, Key::A { index: 31 }),
            (KeyHeader { scheme: SchemeKind::B, n: 2, k: Some(4), d: None }, Key::B { kappa: 5 }),
            (KeyHeader { scheme: SchemeKind::C, n: 2, k: None, d: Some(5) }, Key::C { a: 3, index: 17 }),
        ];
        for (h, k) in cases {
            let text = key_to_text(&h, &k);
            assert_eq!(key_from_text(&text).unwrap(), (h, k));
        }
        assert_eq!(key_to_text(&cases[2].0, &cases[2].1), "QKEY v1 scheme=C n=2 d=5\n0x3 0x11\n");
    }

    #[test]
    fn malformed_keys() {
        assert!(key_from_text("QKEY v1 scheme=A n=2\n").is_err());
        assert!(key_from_text("QKEY v1 scheme=A n=2\n0x1 0x2\n").is_err());
        assert!(key_from_text("QKEY v1 scheme=B n=2\n0x1\n").is_err());
        assert!(key_from_text("QKEY v1 scheme=Q n=2\n0x1\n").is_err());
        assert!(key_from_text("QKEY v1 scheme=A n=2\nzz\n").is_err());
    }

    #[test]
    fn ciphertext_round_trips() {
        let state = random_mixed_density(2, 2, 8).unwrap();
        let b = Ciphertext::B { tag: 0xb, state: state.clone() };
        let text = ciphertext_to_text(&b);
        assert!(text.starts_with("QCT v1 tag=0xb\nQSTATE v1 dim=4\n"));
        assert_eq!(ciphertext_from_text(SchemeKind::B, &text).unwrap(), b);
        let a = Ciphertext::A(state);
        assert_eq!(ciphertext_from_text(SchemeKind::A, &ciphertext_to_text(&a)).unwrap(), a);
        assert!(ciphertext_from_text(SchemeKind::B, &ciphertext_to_text(&a)).is_err());
        let zero = text.replace("tag=0xb", "tag=0x0");
        assert!(ciphertext_from_text(SchemeKind::B, &zero).is_err());
    }
}
