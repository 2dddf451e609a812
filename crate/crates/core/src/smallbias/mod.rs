//! Small-bias sample spaces and small-bias set families.
//!
//! A set `S ⊆ {0,1}^m` has bias `Â(α) = E_{s∈S}[(-1)^{α·s}]` at each
//! character `α`. Bias is never trusted from a construction's claim: every set
//! can be certified exactly, for all characters at once, with a Walsh–Hadamard
//! transform of its point-count vector.

mod family;
mod search;
mod wht;

pub use family::{
    certify_family_bias, linear_family, mean_square_bias, mean_square_bias_by_transform, FamilyKind, SetFamily,
};
pub use search::{exhaustive_best_set, SearchBudget};
pub use wht::fwht;

use std::fmt;
use std::str::FromStr;

use crate::error::{invalid, Error, Result};
use crate::gf2::{find_irreducible, mask, parity_dot, parse_hex, BitString, MAX_BITS};
use crate::textfmt::{header_field, parse_header};

/// Largest `m` for which a 2^m-entry transform is attempted.
pub const MAX_CERTIFY_BITS: usize = 24;
/// Largest point count that will be materialized.
pub const MAX_POINTS: u64 = 1 << 26;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Construction {
    Aghp,
    Exhaustive,
    FullSpace,
    ExplicitList,
}

impl fmt::Display for Construction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Construction::Aghp => "AGHP",
            Construction::Exhaustive => "EXHAUSTIVE",
            Construction::FullSpace => "FULL_SPACE",
            Construction::ExplicitList => "EXPLICIT_LIST",
        })
    }
}

/// A multiset of `m`-bit points with a claimed bias bound.
#[derive(Clone, Debug, PartialEq)]
pub struct SmallBiasSet {
    m: usize,
    points: Vec<u64>,
    claimed_bias: f64,
    construction: Construction,
}

impl SmallBiasSet {
    pub fn new(m: usize, points: Vec<u64>, claimed_bias: f64, construction: Construction) -> Result<Self> {
        if m == 0 || m > MAX_BITS {
            return invalid(format!("point length {m} outside 1..={MAX_BITS}"));
        }
        if points.is_empty() {
            return invalid("a small-bias set needs at least one point");
        }
        if let Some(p) = points.iter().find(|&&p| p & !mask(m) != 0) {
            return invalid(format!("point {p:#x} does not fit in {m} bits"));
        }
        if !(0.0..=1.0).contains(&claimed_bias) {
            return invalid(format!("claimed bias {claimed_bias} outside [0, 1]"));
        }
        Ok(Self { m, points, claimed_bias, construction })
    }

    /// An explicit list; the claimed bias is the certified one.
    pub fn from_points(m: usize, points: Vec<u64>) -> Result<Self> {
        let set = Self::new(m, points, 1.0, Construction::ExplicitList)?;
        set.with_certified_bias()
    }

    /// All of {0,1}^m, bias 0.
    pub fn full_space(m: usize) -> Result<Self> {
        if m as u64 > MAX_POINTS.trailing_zeros() as u64 {
            return Err(Error::ResourceLimit(format!("full space on {m} bits is too large")));
        }
        Self::new(m, (0..1u64 << m).collect(), 0.0, Construction::FullSpace)
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[u64] {
        &self.points
    }

    pub fn point(&self, index: usize) -> Option<BitString> {
        self.points.get(index).map(|&p| BitString::new(self.m, p).expect("points fit m bits"))
    }

    pub fn claimed_bias(&self) -> f64 {
        self.claimed_bias
    }

    pub fn construction(&self) -> Construction {
        self.construction
    }

    /// Distinct points in increasing order with their multiplicities.
    pub fn multiplicities(&self) -> Vec<(u64, usize)> {
        let mut sorted = self.points.clone();
        sorted.sort_unstable();
        let mut out: Vec<(u64, usize)> = Vec::new();
        for p in sorted {
            match out.last_mut() {
                Some((q, c)) if *q == p => *c += 1,
                _ => out.push((p, 1)),
            }
        }
        out
    }

    /// `Σ_{s∈S} (-1)^{α·s}` for every α, indexed by α.
    pub fn character_sums(&self) -> Result<Vec<i64>> {
        if self.m > MAX_CERTIFY_BITS {
            return Err(Error::ResourceLimit(format!(
                "certifying {}-bit points needs a 2^{} transform; use m ≤ {MAX_CERTIFY_BITS}",
                self.m, self.m
            )));
        }
        let mut counts = vec![0i64; 1 << self.m];
        for &p in &self.points {
            counts[p as usize] += 1;
        }
        fwht(&mut counts);
        Ok(counts)
    }

    /// Bias at one character, straight from the definition.
    pub fn bias_at(&self, alpha: u64) -> f64 {
        let sum: i64 = self.points.iter().map(|&s| if parity_dot(alpha, s) == 0 { 1 } else { -1 }).sum();
        sum as f64 / self.points.len() as f64
    }

    /// Biases at every character, indexed by α.
    pub fn bias_spectrum(&self) -> Result<Vec<f64>> {
        let n = self.points.len() as f64;
        Ok(self.character_sums()?.into_iter().map(|w| w as f64 / n).collect())
    }

    /// Replaces the claimed bias with the certified maximum.
    pub fn with_certified_bias(mut self) -> Result<Self> {
        self.claimed_bias = certify_bias(&self)?.max_bias;
        Ok(self)
    }

    /// Text form: a `SBSET v1` header line then one hex point per line.
    pub fn to_text(&self) -> String {
        let mut out = format!("SBSET v1 m={} count={} bias={}\n", self.m, self.points.len(), self.claimed_bias);
        for p in &self.points {
            out.push_str(&format!("{p:#x}\n"));
        }
        out
    }
}

impl FromStr for SmallBiasSet {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let mut lines = text.lines();
        let header = lines.next().ok_or_else(|| Error::Parse("empty set file".into()))?;
        let fields = parse_header(header, "SBSET")?;
        let m: usize = header_field(&fields, "m")?;
        let count: usize = header_field(&fields, "count")?;
        let bias: f64 = header_field(&fields, "bias")?;
        let points =
            lines.filter(|l| !l.trim().is_empty()).map(|l| parse_hex(l.trim())).collect::<Result<Vec<u64>>>()?;
        if points.len() != count {
            return Err(Error::Parse(format!("header says {count} points, found {}", points.len())));
        }
        Self::new(m, points, bias, Construction::ExplicitList)
    }
}

/// Exact bias certificate.
#[derive(Clone, Debug, PartialEq)]
pub struct BiasReport {
    pub max_bias: f64,
    pub argmax_alpha: BitString,
    pub histogram: Option<Vec<(f64, u64)>>,
}

impl BiasReport {
    /// Attaches a histogram of |bias| over nonzero characters using equal-width buckets on [0, 1].
    /// Each entry is (bucket lower edge, count).
    pub fn with_histogram(mut self, spectrum: &[f64], buckets: usize) -> Self {
        let buckets = buckets.max(1);
        let mut counts = vec![0u64; buckets];
        for b in spectrum.iter().skip(1) {
            let slot = ((b.abs() * buckets as f64) as usize).min(buckets - 1);
            counts[slot] += 1;
        }
        self.histogram = Some(counts.into_iter().enumerate().map(|(i, c)| (i as f64 / buckets as f64, c)).collect());
        self
    }
}

/// Picks the largest |value| over nonzero indices, ties to the smallest index.
pub(crate) fn max_over_nonzero(m: usize, values: impl Iterator<Item = f64>) -> BiasReport {
    let mut best = (0.0f64, 0u64);
    for (alpha, v) in values.enumerate().skip(1) {
        if v.abs() > best.0 {
            best = (v.abs(), alpha as u64);
        }
    }
    let argmax = if best.1 == 0 && m > 0 { 1 } else { best.1 };
    BiasReport {
        max_bias: best.0,
        argmax_alpha: BitString::new(m, argmax).expect("alpha fits m bits"),
        histogram: None,
    }
}

/// Exact maximum bias over all nonzero characters.
pub fn certify_bias(set: &SmallBiasSet) -> Result<BiasReport> {
    let spectrum = set.bias_spectrum()?;
    Ok(max_over_nonzero(set.m, spectrum.into_iter()))
}

/// The powering construction: points indexed by `(x, y) ∈ GF(2^m)²`, bit `i`
/// of point `(x, y)` is `⟨x^i, y⟩`. Claimed bias `(n_out − 1)/2^m`.
pub fn aghp_set(n_out: usize, field_degree: u32) -> Result<SmallBiasSet> {
    if n_out == 0 || n_out > MAX_BITS {
        return invalid(format!("output length {n_out} outside 1..={MAX_BITS}"));
    }
    if field_degree == 0 || field_degree > 24 {
        return invalid(format!("field degree {field_degree} outside 1..=24"));
    }
    let count = 1u64 << (2 * field_degree);
    if count > MAX_POINTS {
        return Err(Error::ResourceLimit(format!(
            "AGHP over GF(2^{field_degree}) has 2^{} points; use field degree ≤ {}",
            2 * field_degree,
            MAX_POINTS.trailing_zeros() / 2
        )));
    }
    let field = find_irreducible(field_degree)?;
    let size = 1u64 << field_degree;
    let mut points = Vec::with_capacity(count as usize);
    let mut powers = vec![0u64; n_out];
    for x in 0..size {
        let mut acc = 1u64;
        for p in powers.iter_mut() {
            *p = acc;
            acc = field.mul_raw(acc, x);
        }
        for y in 0..size {
            let point = powers.iter().enumerate().fold(0u64, |bits, (i, &p)| bits | ((parity_dot(p, y) as u64) << i));
            points.push(point);
        }
    }
    let claimed = ((n_out - 1) as f64 / size as f64).min(1.0);
    SmallBiasSet::new(n_out, points, claimed, Construction::Aghp)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn aghp_smallest_case() {
        let s = aghp_set(1, 1).unwrap();
        assert_eq!(s.len(), 4);
        assert_eq!(s.multiplicities(), vec![(0, 2), (1, 2)]);
        assert_eq!(certify_bias(&s).unwrap().max_bias, 0.0);
    }

    #[test]
    fn aghp_8_over_gf16() {
        let s = aghp_set(8, 4).unwrap();
        assert_eq!(s.len(), 256);
        assert_eq!(s.claimed_bias(), 7.0 / 16.0);
        let report = certify_bias(&s).unwrap();
        assert!(report.max_bias <= 7.0 / 16.0, "{}", report.max_bias);
    }

    #[test]
    fn aghp_point_count_and_limits() {
        for (n_out, m) in [(3, 2), (5, 3), (2, 5)] {
            assert_eq!(aghp_set(n_out, m).unwrap().len(), 1 << (2 * m));
        }
        assert!(matches!(aghp_set(4, 14), Err(Error::ResourceLimit(_))));
        assert!(aghp_set(0, 3).is_err());
    }

    #[test]
    fn trivial_certificates() {
        assert_eq!(certify_bias(&SmallBiasSet::full_space(5).unwrap()).unwrap().max_bias, 0.0);
        let single = SmallBiasSet::from_points(4, vec![0b1010]).unwrap();
        assert_eq!(single.claimed_bias(), 1.0);
        // Ties break toward the smallest character.
        assert_eq!(certify_bias(&single).unwrap().argmax_alpha.bits(), 1);
    }

    #[test]
    fn linear_code_biases_are_zero_or_one() {
        // Code spanned by 0011 and 0101 (packed); its dual has 4 words.
        let code: Vec<u64> = vec![0, 0b1100, 0b1010, 0b0110];
        let set = SmallBiasSet::from_points(4, code.clone()).unwrap();
        let spectrum = set.bias_spectrum().unwrap();
        for (alpha, b) in spectrum.iter().enumerate() {
            let in_dual = code.iter().all(|&c| parity_dot(alpha as u64, c) == 0);
            assert_eq!(*b, if in_dual { 1.0 } else { 0.0 });
        }
    }

    #[test]
    fn histogram_counts_nonzero_characters() {
        let s = aghp_set(4, 2).unwrap();
        let spectrum = s.bias_spectrum().unwrap();
        let report = certify_bias(&s).unwrap().with_histogram(&spectrum, 4);
        let total: u64 = report.histogram.unwrap().iter().map(|(_, c)| c).sum();
        assert_eq!(total, 15);
    }

    #[test]
    fn set_file_round_trip() {
        let s = aghp_set(5, 2).unwrap().with_certified_bias().unwrap();
        let text = s.to_text();
        assert!(text.starts_with("SBSET v1 m=5 count=16 bias="));
        let back: SmallBiasSet = text.parse().unwrap();
        assert_eq!(back.points(), s.points());
        assert_eq!(back.claimed_bias(), s.claimed_bias());
        assert_eq!(back.to_text(), text);
        assert!("SBSET v1 m=2 count=3 bias=0\n0x0\n".parse::<SmallBiasSet>().is_err());
        assert!("SBSET v2 m=2 count=1 bias=0\n0x0\n".parse::<SmallBiasSet>().is_err());
        assert!("SBSET v1 m=2 count=1 bias=0\n0x7\n".parse::<SmallBiasSet>().is_err());
    }
}
