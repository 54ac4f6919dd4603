//! The bounded word universe: all words over a fixed finite alphabet up to a
//! length bound, indexed densely in (length, lexicographic) order.

use crate::error::{Error, Result};
use crate::words::{Letter, Word};

#[derive(Debug, Clone)]
pub struct Universe {
    m: usize,
    bound: usize,
    /// offsets[len] = index of the first word of that length (len in 1..=bound)
    offsets: Vec<usize>,
    /// powers[k] = m^k
    powers: Vec<usize>,
    total: usize,
}

impl Universe {
    pub fn new(m: usize, bound: usize, cap: usize) -> Result<Universe> {
        assert!(m >= 1 && bound >= 1);
        let mut powers = vec![1usize];
        let mut offsets = vec![0usize; bound + 2];
        let mut total = 0usize;
        for len in 1..=bound {
            let p = powers[len - 1]
                .checked_mul(m)
                .ok_or_else(|| Error::ResourceLimit("word universe overflows".into()))?;
            powers.push(p);
            offsets[len] = total;
            total = total
                .checked_add(p)
                .ok_or_else(|| Error::ResourceLimit("word universe overflows".into()))?;
            if total > cap {
                return Err(Error::ResourceLimit(format!(
                    "word universe for alphabet {m}, bound {bound} exceeds cap {cap}"
                )));
            }
        }
        offsets[bound + 1] = total;
        Ok(Universe { m, bound, offsets, powers, total })
    }

    pub fn alphabet(&self) -> usize {
        self.m
    }

    pub fn bound(&self) -> usize {
        self.bound
    }

    pub fn len(&self) -> usize {
        self.total
    }

    pub fn is_empty(&self) -> bool {
        self.total == 0
    }

    pub fn power(&self, k: usize) -> usize {
        self.powers[k]
    }

    /// Index of a word given as digits (all < m, length ≤ bound).
    pub fn index_of_digits(&self, digits: &[u32]) -> u32 {
        let len = digits.len();
        debug_assert!(len >= 1 && len <= self.bound);
        let mut value = 0usize;
        for &d in digits {
            value = value * self.m + d as usize;
        }
        (self.offsets[len] + value) as u32
    }

    pub fn index_of_word(&self, w: &Word) -> Result<u32> {
        if w.len() > self.bound {
            return Err(Error::BoundTooSmall {
                bound: self.bound,
                reason: format!("word {w} has length {}", w.len()),
            });
        }
        let mut value = 0usize;
        for &l in w.letters() {
            if l.index() >= self.m {
                return Err(Error::DomainMismatch { letter: l.to_string() });
            }
            value = value * self.m + l.index();
        }
        Ok((self.offsets[w.len()] + value) as u32)
    }

    pub fn len_of(&self, ix: u32) -> usize {
        let ix = ix as usize;
        let mut len = 1;
        while self.offsets[len + 1] <= ix {
            len += 1;
        }
        len
    }

    /// (length, base-m value) of an index.
    pub fn decompose(&self, ix: u32) -> (usize, usize) {
        let len = self.len_of(ix);
        (len, ix as usize - self.offsets[len])
    }

    pub fn word_at(&self, ix: u32) -> Word {
        let (len, mut value) = self.decompose(ix);
        let mut digits = vec![0u32; len];
        for i in (0..len).rev() {
            digits[i] = (value % self.m) as u32;
            value /= self.m;
        }
        Word::new(digits.into_iter().map(Letter).collect())
    }

    /// Index of `w · c`; the extended word must fit in the bound.
    pub fn append(&self, ix: u32, c: usize) -> u32 {
        let (len, value) = self.decompose(ix);
        debug_assert!(len + 1 <= self.bound);
        (self.offsets[len + 1] + value * self.m + c) as u32
    }

    /// Index of `c · w`; the extended word must fit in the bound.
    pub fn prepend(&self, ix: u32, c: usize) -> u32 {
        let (len, value) = self.decompose(ix);
        debug_assert!(len + 1 <= self.bound);
        (self.offsets[len + 1] + c * self.powers[len] + value) as u32
    }

    /// Index of the concatenation of two indexed words, if it fits.
    pub fn concat(&self, a: u32, b: u32) -> Option<u32> {
        let (la, va) = self.decompose(a);
        let (lb, vb) = self.decompose(b);
        if la + lb > self.bound {
            return None;
        }
        Some((self.offsets[la + lb] + va * self.powers[lb] + vb) as u32)
    }

    pub fn indices(&self) -> impl Iterator<Item = u32> {
        0..self.total as u32
    }

    /// Indices of all words of the given exact length.
    pub fn indices_of_len(&self, len: usize) -> std::ops::Range<u32> {
        self.offsets[len] as u32..(self.offsets[len] + self.powers[len]) as u32
    }
}
