//! Bit strings and binary finite fields GF(2^m), m ≤ 64.
//!
//! Everything here uses one convention: bit `i` of a packed word is the
//! coefficient of `x^i`, and bit strings print index 0 first. The same packing
//! is used for basis indices of quantum registers, so `dot` on a basis index
//! and on a field element mean the same thing.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::sync::{Mutex, OnceLock};

use crate::error::{invalid, Error, Result};

/// Largest supported bit-string length and field degree.
pub const MAX_BITS: usize = 64;

#[inline]
pub(crate) fn mask(len: usize) -> u64 {
    if len >= 64 {
        u64::MAX
    } else {
        (1u64 << len) - 1
    }
}

/// Parity of `x & y`, the dot product over Z_2 of two packed words.
#[inline]
pub fn parity_dot(x: u64, y: u64) -> u8 {
    ((x & y).count_ones() & 1) as u8
}

/// A fixed-length string of bits, packed little-endian into one word.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BitString {
    len: usize,
    bits: u64,
}

impl BitString {
    pub fn new(len: usize, bits: u64) -> Result<Self> {
        if len == 0 || len > MAX_BITS {
            return invalid(format!("bit string length {len} outside 1..={MAX_BITS}"));
        }
        if bits & !mask(len) != 0 {
            return invalid(format!("value {bits:#x} does not fit in {len} bits"));
        }
        Ok(Self { len, bits })
    }

    pub fn zeros(len: usize) -> Result<Self> {
        Self::new(len, 0)
    }

    /// Builds from explicit bit values, index 0 first.
    pub fn from_bits(bits: &[u8]) -> Result<Self> {
        let mut packed = 0u64;
        for (i, &b) in bits.iter().enumerate() {
            match b {
                0 => {}
                1 if i < 64 => packed |= 1 << i,
                1 => {}
                _ => return invalid(format!("bit value {b} is not 0 or 1")),
            }
        }
        Self::new(bits.len(), packed)
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn bits(&self) -> u64 {
        self.bits
    }

    pub fn bit(&self, i: usize) -> u8 {
        ((self.bits >> i) & 1) as u8
    }

    pub fn is_zero(&self) -> bool {
        self.bits == 0
    }

    pub fn xor(&self, other: &Self) -> Result<Self> {
        same_len(self, other)?;
        Ok(Self { len: self.len, bits: self.bits ^ other.bits })
    }

    /// Splits into the low `at` bits and the remaining high bits.
    pub fn split(&self, at: usize) -> Result<(Self, Self)> {
        if at == 0 || at >= self.len {
            return invalid(format!("cannot split {} bits at {at}", self.len));
        }
        let lo = Self { len: at, bits: self.bits & mask(at) };
        let hi = Self { len: self.len - at, bits: self.bits >> at };
        Ok((lo, hi))
    }

    /// Concatenation with `self` in the low positions.
    pub fn concat(&self, high: &Self) -> Result<Self> {
        Self::new(self.len + high.len, self.bits | (high.bits << self.len))
    }

    /// Lowercase hex of the packed word, `0x` prefixed.
    pub fn to_hex(&self) -> String {
        format!("{:#x}", self.bits)
    }

    pub fn from_hex(len: usize, text: &str) -> Result<Self> {
        Self::new(len, parse_hex(text)?)
    }
}

fn same_len(x: &BitString, y: &BitString) -> Result<()> {
    if x.len != y.len {
        return invalid(format!("bit string lengths differ: {} vs {}", x.len, y.len));
    }
    Ok(())
}

pub(crate) fn parse_hex(text: &str) -> Result<u64> {
    let digits =
        text.strip_prefix("0x").ok_or_else(|| Error::Parse(format!("expected 0x-prefixed hex, got {text:?}")))?;
    u64::from_str_radix(digits, 16).map_err(|e| Error::Parse(format!("bad hex {text:?}: {e}")))
}

impl fmt::Display for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.len {
            write!(f, "{}", self.bit(i))?;
        }
        Ok(())
    }
}

impl fmt::Debug for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitString({self})")
    }
}

impl FromStr for BitString {
    type Err = Error;

    /// Parses `"0110"`-style text, index 0 first.
    fn from_str(s: &str) -> Result<Self> {
        let bits = s
            .chars()
            .map(|c| match c {
                '0' => Ok(0),
                '1' => Ok(1),
                _ => Err(Error::Parse(format!("invalid bit character {c:?} in {s:?}"))),
            })
            .collect::<Result<Vec<u8>>>()?;
        Self::from_bits(&bits)
    }
}

/// Dot product over Z_2.
pub fn dot(x: &BitString, y: &BitString) -> Result<u8> {
    same_len(x, y)?;
    Ok(parity_dot(x.bits, y.bits))
}

// ---------------------------------------------------------------------------
// Polynomials over GF(2) packed in u128 (degree ≤ 127).

#[inline]
fn poly_degree(p: u128) -> i32 {
    127 - p.leading_zeros() as i32
}

fn poly_rem(mut a: u128, b: u128) -> u128 {
    let db = poly_degree(b);
    debug_assert!(db >= 0);
    loop {
        let da = poly_degree(a);
        if da < db {
            return a;
        }
        a ^= b << (da - db);
    }
}

fn poly_gcd(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        let r = poly_rem(a, b);
        a = b;
        b = r;
    }
    a
}

/// Carry-less product of two words.
#[inline]
pub fn clmul(a: u64, b: u64) -> u128 {
    let wide = a as u128;
    let mut acc = 0u128;
    let mut rest = b;
    while rest != 0 {
        let i = rest.trailing_zeros();
        acc ^= wide << i;
        rest &= rest - 1;
    }
    acc
}

/// Reduces a product of two degree-<m polynomials modulo `modulus` (degree m).
#[inline]
fn reduce(mut p: u128, modulus: u128, degree: u32) -> u64 {
    let m = degree as i32;
    loop {
        let dp = poly_degree(p);
        if dp < m {
            return p as u64;
        }
        p ^= modulus << (dp - m);
    }
}

fn mulmod(a: u64, b: u64, modulus: u128, degree: u32) -> u64 {
    reduce(clmul(a, b), modulus, degree)
}

fn prime_factors(mut n: u32) -> Vec<u32> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            out.push(p);
            while n.is_multiple_of(p) {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Trial division by every monic polynomial of degree 1..=m/2.
fn irreducible_by_division(modulus: u128, degree: u32) -> bool {
    for d in 1..=degree / 2 {
        for low in 0u128..(1u128 << d) {
            let divisor = (1u128 << d) | low;
            if poly_rem(modulus, divisor) == 0 {
                return false;
            }
        }
    }
    true
}

/// x^(2^k) mod f by repeated squaring.
fn frobenius_power_of_x(k: u32, modulus: u128, degree: u32) -> u64 {
    let mut x = if degree == 1 { reduce(2, modulus, degree) } else { 2 };
    for _ in 0..k {
        x = mulmod(x, x, modulus, degree);
    }
    x
}

/// Rabin's test.
fn irreducible_rabin(modulus: u128, degree: u32) -> bool {
    let x = if degree == 1 { reduce(2, modulus, degree) } else { 2u64 };
    if frobenius_power_of_x(degree, modulus, degree) != x {
        return false;
    }
    for q in prime_factors(degree) {
        let h = frobenius_power_of_x(degree / q, modulus, degree) ^ x;
        if poly_gcd(modulus, h as u128) != 1 {
            return false;
        }
    }
    true
}

fn is_irreducible(modulus: u128, degree: u32) -> bool {
    if degree <= 32 {
        irreducible_by_division(modulus, degree)
    } else {
        irreducible_rabin(modulus, degree)
    }
}

/// Parameters of a binary field GF(2^m): the degree and an irreducible modulus.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct FieldSpec {
    degree: u32,
    modulus: u128,
}

impl FieldSpec {
    /// Validates `modulus` (bit m set, irreducible over GF(2)).
    pub fn new(degree: u32, modulus: u128) -> Result<Self> {
        if degree == 0 || degree as usize > MAX_BITS {
            return invalid(format!("field degree {degree} outside 1..={MAX_BITS}"));
        }
        if poly_degree(modulus) != degree as i32 {
            return invalid(format!("modulus {modulus:#x} does not have degree {degree}"));
        }
        if !is_irreducible(modulus, degree) {
            return invalid(format!("modulus {modulus:#x} is reducible"));
        }
        Ok(Self { degree, modulus })
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    /// Packed modulus including the leading `x^m` bit.
    pub fn modulus(&self) -> u128 {
        self.modulus
    }

    /// Number of field elements, 2^m, when it fits a u64.
    pub fn order(&self) -> Option<u64> {
        1u64.checked_shl(self.degree)
    }

    pub fn element_mask(&self) -> u64 {
        mask(self.degree as usize)
    }

    /// Multiplies packed elements. Inputs must already be reduced.
    #[inline]
    pub fn mul_raw(&self, a: u64, b: u64) -> u64 {
        mulmod(a, b, self.modulus, self.degree)
    }

    pub fn pow_raw(&self, base: u64, mut exp: u64) -> u64 {
        let mut acc = 1u64;
        let mut sq = base;
        while exp != 0 {
            if exp & 1 == 1 {
                acc = self.mul_raw(acc, sq);
            }
            sq = self.mul_raw(sq, sq);
            exp >>= 1;
        }
        acc
    }

    pub fn element(&self, value: u64) -> Result<FieldElement> {
        if value & !self.element_mask() != 0 {
            return invalid(format!("{value:#x} is not an element of GF(2^{})", self.degree));
        }
        Ok(FieldElement { spec: *self, value })
    }

    pub fn zero(&self) -> FieldElement {
        FieldElement { spec: *self, value: 0 }
    }

    pub fn one(&self) -> FieldElement {
        FieldElement { spec: *self, value: 1 }
    }

    /// Renders the modulus as a polynomial, e.g. `x^3+x+1`.
    pub fn modulus_polynomial(&self) -> String {
        let mut terms = Vec::new();
        for i in (0..=self.degree).rev() {
            if (self.modulus >> i) & 1 == 1 {
                terms.push(match i {
                    0 => "1".to_string(),
                    1 => "x".to_string(),
                    _ => format!("x^{i}"),
                });
            }
        }
        terms.join("+")
    }
}

impl fmt::Debug for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF(2^{}) mod {}", self.degree, self.modulus_polynomial())
    }
}

/// Deterministic field choice: the smallest irreducible polynomial of degree
/// `m` with nonzero constant term, scanning candidates in integer order.
pub fn find_irreducible(m: u32) -> Result<FieldSpec> {
    if m == 0 || m as usize > MAX_BITS {
        return invalid(format!("field degree {m} outside 1..={MAX_BITS}"));
    }
    static CACHE: OnceLock<Mutex<HashMap<u32, FieldSpec>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(spec) = cache.lock().expect("field cache poisoned").get(&m) {
        return Ok(*spec);
    }
    let top = 1u128 << m;
    let spec = (0u128..top)
        .map(|low| top | low)
        .filter(|p| p & 1 == 1)
        .find(|&p| is_irreducible(p, m))
        .map(|modulus| FieldSpec { degree: m, modulus })
        .ok_or_else(|| Error::NumericalFailure(format!("no irreducible polynomial of degree {m}")))?;
    cache.lock().expect("field cache poisoned").insert(m, spec);
    Ok(spec)
}

/// An element of GF(2^m), tagged with its field.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct FieldElement {
    spec: FieldSpec,
    value: u64,
}

impl FieldElement {
    pub fn spec(&self) -> &FieldSpec {
        &self.spec
    }

    pub fn value(&self) -> u64 {
        self.value
    }

    pub fn coeffs(&self) -> BitString {
        BitString { len: self.spec.degree as usize, bits: self.value }
    }

    pub fn is_zero(&self) -> bool {
        self.value == 0
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.spec != other.spec {
            return invalid(format!("field mismatch: {:?} vs {:?}", self.spec, other.spec));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(Self { spec: self.spec, value: self.value ^ other.value })
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(Self { spec: self.spec, value: self.spec.mul_raw(self.value, other.value) })
    }

    pub fn pow(&self, exp: u64) -> Self {
        Self { spec: self.spec, value: self.spec.pow_raw(self.value, exp) }
    }

    pub fn to_hex(&self) -> String {
        format!("{:#x}", self.value)
    }

    pub fn from_hex(spec: &FieldSpec, text: &str) -> Result<Self> {
        spec.element(parse_hex(text)?)
    }
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} in GF(2^{})", self.to_hex(), self.spec.degree)
    }
}

/// Product in the shared field of `a` and `b`.
pub fn gf_mul(a: &FieldElement, b: &FieldElement) -> Result<FieldElement> {
    a.mul(b)
}

pub fn gf_pow(a: &FieldElement, e: u64) -> FieldElement {
    a.pow(e)
}

/// Rank of a set of packed vectors by Gaussian elimination.
pub fn rank(vectors: &[u64]) -> usize {
    let mut pivots: Vec<u64> = Vec::new();
    for &v in vectors {
        let mut r = v;
        for &p in &pivots {
            r = r.min(r ^ p);
        }
        if r != 0 {
            pivots.push(r);
            pivots.sort_unstable_by(|a, b| b.cmp(a));
        }
    }
    pivots.len()
}

/// Enumerates the additive subgroup spanned by a basis.
///
/// Element number `c` is the XOR of the basis vectors selected by the bits of
/// `c`, so the order is lexicographic over coefficient vectors with the first
/// basis vector as the least significant coefficient.
#[derive(Clone, Debug)]
pub struct Span {
    len: usize,
    basis: Vec<u64>,
    next: u64,
    end: u64,
}

impl Span {
    pub fn size(&self) -> u64 {
        self.end
    }
}

impl Iterator for Span {
    type Item = BitString;

    fn next(&mut self) -> Option<BitString> {
        if self.next >= self.end {
            return None;
        }
        let c = self.next;
        self.next += 1;
        let bits = self.basis.iter().enumerate().filter(|(j, _)| (c >> j) & 1 == 1).fold(0u64, |acc, (_, v)| acc ^ v);
        Some(BitString { len: self.len, bits })
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let left = (self.end - self.next) as usize;
        (left, Some(left))
    }
}

/// Span of `basis` inside {0,1}^len. The basis must be linearly independent.
pub fn subgroup_span(len: usize, basis: &[BitString]) -> Result<Span> {
    if len == 0 || len > MAX_BITS {
        return invalid(format!("bit string length {len} outside 1..={MAX_BITS}"));
    }
    if let Some(bad) = basis.iter().find(|b| b.len != len) {
        return invalid(format!("basis vector {bad} does not have length {len}"));
    }
    if basis.len() >= 64 {
        return Err(Error::ResourceLimit(format!("span of {} vectors is too large", basis.len())));
    }
    let packed: Vec<u64> = basis.iter().map(|b| b.bits).collect();
    if rank(&packed) != packed.len() {
        return invalid("basis is linearly dependent");
    }
    Ok(Span { len, basis: packed, next: 0, end: 1u64 << basis.len() })
}
