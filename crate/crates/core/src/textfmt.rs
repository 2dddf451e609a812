//! Shared pieces of the line-oriented text formats.

use std::str::FromStr;

use crate::error::{Error, Result};

/// Splits `<MAGIC> v1 key=value ...` into its key/value pairs.
pub(crate) fn parse_header<'a>(line: &'a str, magic: &str) -> Result<Vec<(&'a str, &'a str)>> {
    let mut words = line.split_whitespace();
    if words.next() != Some(magic) || words.next() != Some("v1") {
        return Err(Error::Parse(format!("expected `{magic} v1` header, got {line:?}")));
    }
    words
        .map(|w| w.split_once('=').ok_or_else(|| Error::Parse(format!("header field {w:?} is not key=value"))))
        .collect()
}

pub(crate) fn header_field<T: FromStr>(fields: &[(&str, &str)], key: &str) -> Result<T> {
    let raw = fields
        .iter()
        .find(|(k, _)| *k == key)
        .map(|(_, v)| *v)
        .ok_or_else(|| Error::Parse(format!("header is missing `{key}=`")))?;
    raw.parse().map_err(|_| Error::Parse(format!("bad value for `{key}`: {raw:?}")))
}
