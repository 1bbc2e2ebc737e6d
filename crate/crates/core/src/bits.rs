//! Packed bit sequences.

use std::fmt;

/// A finite, ordered sequence of bits.
///
/// Bit `i` lives in word `i / 64` at position `i % 64` (least significant
/// first). [`to_bytes`](Self::to_bytes) gives the MSB-first packing used on
/// disk.
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct BitStream {
    words: Vec<u64>,
    len: usize,
}

impl BitStream {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_capacity(bits: usize) -> Self {
        Self {
            words: Vec::with_capacity(bits.div_ceil(64)),
            len: 0,
        }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn push(&mut self, bit: bool) {
        let offset = self.len % 64;
        if offset == 0 {
            self.words.push(0);
        }
        if bit {
            *self.words.last_mut().unwrap() |= 1 << offset;
        }
        self.len += 1;
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        assert!(i < self.len, "bit index {i} out of range for length {}", self.len);
        (self.words[i / 64] >> (i % 64)) & 1 == 1
    }

    /// Bit `i` as `0` or `1`.
    #[inline]
    pub fn bit(&self, i: usize) -> u8 {
        self.get(i) as u8
    }

    pub fn iter(&self) -> Iter<'_> {
        Iter { stream: self, pos: 0 }
    }

    /// One byte per bit, each `0` or `1`.
    pub fn to_unpacked(&self) -> Vec<u8> {
        self.iter().map(u8::from).collect()
    }

    pub fn from_unpacked(bits: &[u8]) -> Self {
        bits.iter().map(|&b| b != 0).collect()
    }

    /// Parses `'0'`/`'1'` characters, skipping whitespace. Returns the offending
    /// character's byte offset on failure.
    pub fn from_ascii(text: &str) -> Result<Self, usize> {
        let mut out = Self::with_capacity(text.len());
        for (offset, ch) in text.char_indices() {
            match ch {
                '0' => out.push(false),
                '1' => out.push(true),
                c if c.is_whitespace() => {}
                _ => return Err(offset),
            }
        }
        Ok(out)
    }

    pub fn to_ascii(&self) -> String {
        self.iter().map(|b| if b { '1' } else { '0' }).collect()
    }

    /// Packs into bytes, first bit in the most significant bit of byte 0.
    /// A partial final byte is zero-padded.
    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = vec![0u8; self.len.div_ceil(8)];
        for (i, b) in self.iter().enumerate() {
            if b {
                out[i / 8] |= 0x80 >> (i % 8);
            }
        }
        out
    }

    /// Inverse of [`to_bytes`](Self::to_bytes) taking every bit of `bytes`.
    pub fn from_bytes(bytes: &[u8]) -> Self {
        bytes
            .iter()
            .flat_map(|&byte| (0..8).map(move |j| byte & (0x80 >> j) != 0))
            .collect()
    }

    /// Lowercase hex of [`to_bytes`](Self::to_bytes).
    pub fn to_hex(&self) -> String {
        self.to_bytes().iter().map(|b| format!("{b:02x}")).collect()
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// `len` bits starting at `start`, repacked from bit 0.
    pub fn slice(&self, start: usize, len: usize) -> BitStream {
        assert!(start + len <= self.len);
        let mut out = Self::with_capacity(len);
        for i in start..start + len {
            out.push(self.get(i));
        }
        out
    }

    /// Appends all bits of `other`.
    pub fn extend_from(&mut self, other: &BitStream) {
        for b in other.iter() {
            self.push(b);
        }
    }

    /// Bits `start .. start + len` (len <= 64) as an integer whose bit `j`
    /// is stream bit `start + j`.
    #[inline]
    pub fn word_at(&self, start: usize, len: usize) -> u64 {
        debug_assert!(len <= 64 && start + len <= self.len);
        if len == 0 {
            return 0;
        }
        let (w, off) = (start / 64, start % 64);
        let mut v = self.words[w] >> off;
        if off != 0 && off + len > 64 {
            v |= self.words[w + 1] << (64 - off);
        }
        if len < 64 {
            v &= (1u64 << len) - 1;
        }
        v
    }

    /// Packed words; bits past `len` in the last word are zero.
    pub fn words(&self) -> &[u64] {
        &self.words
    }

    /// The complement of every bit.
    pub fn complement(&self) -> BitStream {
        self.iter().map(|b| !b).collect()
    }

    pub fn reversed(&self) -> BitStream {
        (0..self.len).rev().map(|i| self.get(i)).collect()
    }
}

impl FromIterator<bool> for BitStream {
    fn from_iter<T: IntoIterator<Item = bool>>(iter: T) -> Self {
        let iter = iter.into_iter();
        let mut out = Self::with_capacity(iter.size_hint().0);
        for b in iter {
            out.push(b);
        }
        out
    }
}

impl Extend<bool> for BitStream {
    fn extend<T: IntoIterator<Item = bool>>(&mut self, iter: T) {
        for b in iter {
            self.push(b);
        }
    }
}

impl fmt::Debug for BitStream {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        const SHOWN: usize = 64;
        let head: String = self.iter().take(SHOWN).map(|b| if b { '1' } else { '0' }).collect();
        let ellipsis = if self.len > SHOWN { "..." } else { "" };
        write!(f, "BitStream(len={}, {head}{ellipsis})", self.len)
    }
}

pub struct Iter<'a> {
    stream: &'a BitStream,
    pos: usize,
}

impl Iterator for Iter<'_> {
    type Item = bool;

    #[inline]
    fn next(&mut self) -> Option<bool> {
        if self.pos >= self.stream.len {
            return None;
        }
        let b = (self.stream.words[self.pos / 64] >> (self.pos % 64)) & 1 == 1;
        self.pos += 1;
        Some(b)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let rest = self.stream.len - self.pos;
        (rest, Some(rest))
    }
}

impl ExactSizeIterator for Iter<'_> {}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn push_get_and_ascii() {
        let s = BitStream::from_ascii("1011 0101\n01").unwrap();
        assert_eq!(s.len(), 10);
        assert_eq!(s.to_ascii(), "1011010101");
        assert_eq!(s.count_ones(), 6);
        assert_eq!(BitStream::from_ascii("10x1"), Err(2));
    }

    #[test]
    fn word_at_crosses_boundaries() {
        let bits: BitStream = (0..200).map(|i| (i * 7 + i / 3) % 5 < 2).collect();
        for start in [0usize, 1, 60, 63, 64, 100, 130] {
            for len in [1usize, 9, 32, 63, 64] {
                if start + len > bits.len() {
                    continue;
                }
                let expect = (0..len).fold(0u64, |acc, j| acc | (bits.bit(start + j) as u64) << j);
                assert_eq!(bits.word_at(start, len), expect, "start={start} len={len}");
            }
        }
    }

    #[test]
    fn slice_complement_reverse() {
        let s = BitStream::from_ascii("110010").unwrap();
        assert_eq!(s.slice(1, 3).to_ascii(), "100");
        assert_eq!(s.complement().to_ascii(), "001101");
        assert_eq!(s.reversed().to_ascii(), "010011");
    }

    #[test]
    fn byte_packing_is_msb_first() {
        let s = BitStream::from_ascii("10000000 01").unwrap();
        assert_eq!(s.to_bytes(), vec![0x80, 0x40]);
        assert_eq!(s.to_hex(), "8040");
        assert_eq!(BitStream::from_bytes(&[0xA5]).to_ascii(), "10100101");
    }
}
