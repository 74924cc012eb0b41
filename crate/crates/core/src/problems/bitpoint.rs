use std::fmt;
use std::str::FromStr;

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Largest supported string length. Keeps a whole point in one `u32` and a
/// full enumeration in memory.
pub const MAX_N: usize = 24;

/// A point of the search space: a binary string of fixed length `n`.
///
/// Locus 0 is the most significant of the low `n` bits, so the numeric order
/// of the packed word is the lexicographic order of the bit string and the
/// word doubles as a dense enumeration index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BitPoint {
    len: u8,
    word: u32,
}

impl BitPoint {
    pub fn new(word: u32, len: usize) -> Self {
        assert!((1..=MAX_N).contains(&len), "unsupported length {len}");
        debug_assert!(len == 32 || word < (1u32 << len));
        BitPoint { len: len as u8, word }
    }

    pub fn zeros(len: usize) -> Self {
        Self::new(0, len)
    }

    pub fn ones(len: usize) -> Self {
        Self::new(((1u64 << len) - 1) as u32, len)
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.len as usize
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        false
    }

    /// Dense index of the point: the packed word itself.
    #[inline]
    pub fn index(&self) -> u32 {
        self.word
    }

    /// Value of locus `i` (locus 0 = most significant).
    #[inline]
    pub fn bit(&self, i: usize) -> bool {
        debug_assert!(i < self.len());
        self.word >> (self.len() - 1 - i) & 1 == 1
    }

    /// A copy with locus `i` flipped.
    #[inline]
    pub fn flip(&self, i: usize) -> BitPoint {
        debug_assert!(i < self.len());
        BitPoint {
            len: self.len,
            word: self.word ^ (1 << (self.len() - 1 - i)),
        }
    }

    pub fn complement(&self) -> BitPoint {
        BitPoint {
            len: self.len,
            word: self.word ^ (((1u64 << self.len()) - 1) as u32),
        }
    }

    /// Hamming distance to a point of the same length; callers guarantee the
    /// lengths match (see [`hamming_distance`] for the checked form).
    #[inline]
    pub fn distance(&self, other: &BitPoint) -> u32 {
        debug_assert_eq!(self.len, other.len);
        (self.word ^ other.word).count_ones()
    }

    /// All points of length `len` in lexicographic order.
    pub fn enumerate(len: usize) -> impl Iterator<Item = BitPoint> {
        assert!(len <= MAX_N);
        (0..1u32 << len).map(move |w| BitPoint::new(w, len))
    }
}

/// Count of differing loci between two equal-length points.
///
/// Symmetric, zero iff the points are equal; unequal lengths are an input
/// error.
pub fn hamming_distance(a: &BitPoint, b: &BitPoint) -> Result<u32> {
    if a.len != b.len {
        return Err(Error::Input(format!(
            "hamming distance of points with lengths {} and {}",
            a.len, b.len
        )));
    }
    Ok(a.distance(b))
}

impl fmt::Display for BitPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.len() {
            f.write_str(if self.bit(i) { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl FromStr for BitPoint {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s.is_empty() || s.len() > MAX_N {
            return Err(Error::Input(format!("bad bit string length {}", s.len())));
        }
        let mut word = 0u32;
        for c in s.chars() {
            word = (word << 1)
                | match c {
                    '0' => 0,
                    '1' => 1,
                    _ => return Err(Error::Input(format!("bad bit character {c:?}"))),
                };
        }
        Ok(BitPoint::new(word, s.len()))
    }
}

impl Serialize for BitPoint {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for BitPoint {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(D::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> BitPoint {
        s.parse().unwrap()
    }

    #[test]
    fn hamming_examples() {
        assert_eq!(hamming_distance(&p("0000"), &p("0000")).unwrap(), 0);
        assert_eq!(hamming_distance(&p("0101"), &p("1010")).unwrap(), 4);
        assert_eq!(hamming_distance(&p("0011"), &p("0001")).unwrap(), 1);
        assert!(hamming_distance(&p("00"), &p("000")).is_err());
    }

    #[test]
    fn hamming_symmetry_and_triangle_exhaustive_n5() {
        let pts: Vec<BitPoint> = BitPoint::enumerate(5).collect();
        for a in &pts {
            for b in &pts {
                let dab = a.distance(b);
                assert_eq!(dab, b.distance(a));
                assert_eq!(dab == 0, a == b);
                for c in &pts {
                    assert!(a.distance(c) <= dab + b.distance(c));
                }
            }
        }
    }

    #[test]
    fn locus_zero_is_most_significant() {
        let x = p("100");
        assert!(x.bit(0) && !x.bit(1) && !x.bit(2));
        assert_eq!(x.index(), 4);
        assert_eq!(x.flip(2), p("101"));
        assert_eq!(x.to_string(), "100");
    }

    #[test]
    fn ordering_is_lexicographic() {
        assert!(p("0011") < p("0100"));
        assert!(p("10") > p("01"));
    }

    #[test]
    fn complement_and_roundtrip() {
        let x = p("0110");
        assert_eq!(x.complement(), p("1001"));
        let json = serde_json::to_string(&x).unwrap();
        assert_eq!(json, "\"0110\"");
        assert_eq!(serde_json::from_str::<BitPoint>(&json).unwrap(), x);
    }
}
