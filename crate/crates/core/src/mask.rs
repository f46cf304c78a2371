//! Fixed-width cell sets.
//!
//! Every proposition handled by this crate is a subset of a finite phase
//! space. [`Mask`] stores that subset as a little-endian array of 64-bit
//! words; cell `i` lives in bit `i % 64` of word `i / 64`. Masks over
//! different universes never compare equal.

use std::cmp::Ordering;
use std::fmt;

use smallvec::SmallVec;

use crate::error::{Error, Result};

/// Largest universe a mask may range over.
pub const MAX_CELLS: usize = 1 << 16;

type Words = SmallVec<[u64; 4]>;

/// A subset of `{0, .., len-1}`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Mask {
    len: u32,
    words: Words,
}

/// Cell sets are the carrier of every logic element.
pub type Proposition = Mask;

#[inline]
fn word_count(len: usize) -> usize {
    len.div_ceil(64)
}

impl Mask {
    /// The empty set over `len` cells.
    pub fn empty(len: usize) -> Self {
        assert!(len <= MAX_CELLS, "universe of {len} cells exceeds {MAX_CELLS}");
        Mask {
            len: len as u32,
            words: smallvec::smallvec![0; word_count(len)],
        }
    }

    /// The full set over `len` cells.
    pub fn full(len: usize) -> Self {
        let mut m = Self::empty(len);
        for w in m.words.iter_mut() {
            *w = u64::MAX;
        }
        m.trim();
        m
    }

    pub fn from_cells<I: IntoIterator<Item = usize>>(len: usize, cells: I) -> Self {
        let mut m = Self::empty(len);
        for c in cells {
            m.insert(c);
        }
        m
    }

    /// Builds a mask from raw words, clearing bits past `len`.
    pub fn from_words(len: usize, words: &[u64]) -> Self {
        let mut m = Self::empty(len);
        let n = m.words.len();
        m.words.copy_from_slice(&words[..n]);
        m.trim();
        m
    }

    fn trim(&mut self) {
        let rem = self.len as usize % 64;
        if rem != 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= (1u64 << rem) - 1;
            }
        }
    }

    /// Number of cells in the universe.
    #[inline]
    pub fn universe(&self) -> usize {
        self.len as usize
    }

    #[inline]
    pub fn words(&self) -> &[u64] {
        &self.words
    }

    #[inline]
    pub fn contains(&self, cell: usize) -> bool {
        debug_assert!(cell < self.universe());
        self.words[cell / 64] >> (cell % 64) & 1 == 1
    }

    #[inline]
    pub fn insert(&mut self, cell: usize) {
        assert!(cell < self.universe(), "cell {cell} out of range");
        self.words[cell / 64] |= 1 << (cell % 64);
    }

    #[inline]
    pub fn remove(&mut self, cell: usize) {
        self.words[cell / 64] &= !(1 << (cell % 64));
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn is_full(&self) -> bool {
        *self == Self::full(self.universe())
    }

    #[inline]
    pub fn count(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Lowest cell in the set.
    #[inline]
    pub fn first(&self) -> Option<usize> {
        self.words
            .iter()
            .enumerate()
            .find(|(_, &w)| w != 0)
            .map(|(i, w)| i * 64 + w.trailing_zeros() as usize)
    }

    #[inline]
    pub fn is_disjoint(&self, other: &Mask) -> bool {
        debug_assert_eq!(self.len, other.len);
        self.words.iter().zip(&other.words).all(|(a, b)| a & b == 0)
    }

    #[inline]
    pub fn is_subset(&self, other: &Mask) -> bool {
        debug_assert_eq!(self.len, other.len);
        self.words.iter().zip(&other.words).all(|(a, b)| a & !b == 0)
    }

    fn zip_with(&self, other: &Mask, f: impl Fn(u64, u64) -> u64) -> Mask {
        debug_assert_eq!(self.len, other.len);
        Mask {
            len: self.len,
            words: self.words.iter().zip(&other.words).map(|(&a, &b)| f(a, b)).collect(),
        }
    }

    pub fn union(&self, other: &Mask) -> Mask {
        self.zip_with(other, |a, b| a | b)
    }

    pub fn intersection(&self, other: &Mask) -> Mask {
        self.zip_with(other, |a, b| a & b)
    }

    pub fn difference(&self, other: &Mask) -> Mask {
        self.zip_with(other, |a, b| a & !b)
    }

    pub fn complement(&self) -> Mask {
        let mut m = Mask {
            len: self.len,
            words: self.words.iter().map(|w| !w).collect(),
        };
        m.trim();
        m
    }

    pub fn union_with(&mut self, other: &Mask) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a |= b;
        }
    }

    pub fn difference_with(&mut self, other: &Mask) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a &= !b;
        }
    }

    /// Iterates the cells in increasing order.
    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(i, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    None
                } else {
                    let t = w.trailing_zeros() as usize;
                    w &= w - 1;
                    Some(i * 64 + t)
                }
            })
        })
    }

    /// Lowercase hexadecimal rendering of the mask read as an unsigned
    /// integer, zero-padded to `ceil(len / 4)` digits.
    pub fn to_hex(&self) -> String {
        let digits = self.universe().div_ceil(4).max(1);
        let mut out = String::with_capacity(digits);
        for d in (0..digits).rev() {
            let bit = d * 4;
            let word = self.words.get(bit / 64).copied().unwrap_or(0);
            let nibble = (word >> (bit % 64)) & 0xf;
            out.push(char::from_digit(nibble as u32, 16).unwrap());
        }
        out
    }

    pub fn from_hex(len: usize, s: &str) -> Result<Mask> {
        let mut m = Mask::empty(len);
        let s = s.trim();
        if s.is_empty() {
            return Err(Error::Parse(format!("empty mask for universe of {len} cells")));
        }
        for (pos, ch) in s.chars().rev().enumerate() {
            let nibble = ch
                .to_digit(16)
                .ok_or_else(|| Error::Parse(format!("invalid hex digit {ch:?} in mask")))?
                as u64;
            if nibble == 0 {
                continue;
            }
            let bit = pos * 4;
            if bit + (64 - nibble.leading_zeros() as usize) > len {
                return Err(Error::Parse(format!("mask {s} exceeds universe of {len} cells")));
            }
            m.words[bit / 64] |= nibble << (bit % 64);
        }
        Ok(m)
    }
}

impl Ord for Mask {
    /// Universe size first, then the mask read as an unsigned integer.
    fn cmp(&self, other: &Self) -> Ordering {
        self.len
            .cmp(&other.len)
            .then_with(|| self.words.iter().rev().cmp(other.words.iter().rev()))
    }
}

impl PartialOrd for Mask {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Mask {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Mask({}:{})", self.len, self.to_hex())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn full_and_complement_respect_universe() {
        let full = Mask::full(70);
        assert_eq!(full.count(), 70);
        assert!(Mask::empty(70).complement() == full);
        assert!(full.complement().is_empty());
        assert!(full.is_full());
    }

    #[test]
    fn ordering_is_numeric() {
        let a = Mask::from_cells(80, [70]);
        let b = Mask::from_cells(80, [0, 1, 2, 3]);
        assert!(b < a);
        assert!(Mask::empty(80) < b);
    }

    #[test]
    fn hex_is_fixed_width() {
        let m = Mask::from_cells(16, [0, 4, 15]);
        assert_eq!(m.to_hex(), "8011");
        assert_eq!(Mask::empty(6).to_hex(), "00");
        assert!(Mask::from_hex(4, "1f").is_err());
    }

    proptest! {
        #[test]
        fn hex_round_trip(len in 1usize..300, seed in any::<u64>()) {
            let cells = (0..len).filter(|c| (seed.rotate_left(*c as u32 % 64) ^ *c as u64) & 3 == 0);
            let m = Mask::from_cells(len, cells);
            prop_assert_eq!(Mask::from_hex(len, &m.to_hex()).unwrap(), m);
        }

        #[test]
        fn set_algebra_identities(a in proptest::collection::vec(any::<bool>(), 130),
                                  b in proptest::collection::vec(any::<bool>(), 130)) {
            let ma = Mask::from_cells(130, a.iter().enumerate().filter(|x| *x.1).map(|x| x.0));
            let mb = Mask::from_cells(130, b.iter().enumerate().filter(|x| *x.1).map(|x| x.0));
            prop_assert_eq!(ma.union(&mb).complement(), ma.complement().intersection(&mb.complement()));
            prop_assert!(ma.difference(&mb).is_disjoint(&mb));
            prop_assert_eq!(ma.is_disjoint(&mb), ma.intersection(&mb).is_empty());
            prop_assert_eq!(ma.iter().count(), ma.count());
            prop_assert_eq!(ma.first(), ma.iter().next());
        }
    }
}
