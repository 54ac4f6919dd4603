//! The free semigroup: words over a countably infinite alphabet.
//!
//! Letters are natural-number indices; the display names x, y, z, t, x5, x6, …
//! are a presentation layer only. Words are nonempty; there is no empty word
//! (semigroup, not monoid).

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// A letter of the alphabet, identified by its index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Letter(pub u32);

impl Letter {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

const NAMED: [char; 4] = ['x', 'y', 'z', 't'];

// Single-letter tokens other than x, y, z, t map to indices 4..=25 in this order.
const EXTRA: [char; 22] = [
    'a', 'b', 'c', 'd', 'e', 'f', 'g', 'h', 'i', 'j', 'k', 'l', 'm', 'n', 'o', 'p', 'q', 'r', 's',
    'u', 'v', 'w',
];

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.0 {
            i @ 0..=3 => write!(f, "{}", NAMED[i as usize]),
            i => write!(f, "x{}", i + 1),
        }
    }
}

fn letter_of_char(c: char) -> Option<Letter> {
    if let Some(i) = NAMED.iter().position(|&n| n == c) {
        return Some(Letter(i as u32));
    }
    EXTRA
        .iter()
        .position(|&n| n == c)
        .map(|i| Letter(4 + i as u32))
}

/// A nonempty word of the free semigroup.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Word(Vec<Letter>);

impl Word {
    /// Builds a word from letters. Panics on an empty sequence: the word
    /// universe has no identity element.
    pub fn new(letters: Vec<Letter>) -> Word {
        assert!(!letters.is_empty(), "words are nonempty");
        Word(letters)
    }

    pub fn from_indices(ix: &[u32]) -> Word {
        Word::new(ix.iter().map(|&i| Letter(i)).collect())
    }

    pub fn single(l: Letter) -> Word {
        Word(vec![l])
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    #[must_use]
    pub fn is_empty(&self) -> bool {
        false
    }

    /// con(a): the set of letters occurring in the word.
    pub fn content(&self) -> BTreeSet<Letter> {
        self.0.iter().copied().collect()
    }

    /// True iff no letter occurs twice.
    pub fn is_linear(&self) -> bool {
        self.content().len() == self.len()
    }

    /// Concatenation; associative by construction.
    pub fn concat(&self, other: &Word) -> Word {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Word(v)
    }

    /// The word with every occurrence of a letter replaced by its image
    /// under the renaming. All letters of the word must be in the domain.
    pub fn apply_renaming(&self, r: &Renaming) -> Result<Word> {
        let mut out = Vec::with_capacity(self.len());
        for &l in &self.0 {
            out.push(r.image(l).ok_or(Error::DomainMismatch { letter: l.to_string() })?);
        }
        Ok(Word(out))
    }

    /// Homomorphic image: each occurrence of a letter is replaced by the word
    /// it maps to. The substitution must be total on the content.
    pub fn substitute(&self, theta: &BTreeMap<Letter, Word>) -> Result<Word> {
        let mut out = Vec::new();
        for &l in &self.0 {
            let w = theta.get(&l).ok_or(Error::DomainMismatch { letter: l.to_string() })?;
            out.extend_from_slice(&w.0);
        }
        Ok(Word(out))
    }

    /// Letters renamed to 0, 1, 2, … in order of first occurrence.
    ///
    /// Idempotent; two words are similar iff their canonical forms are equal.
    pub fn canonical_form(&self) -> Word {
        let mut seen: BTreeMap<Letter, Letter> = BTreeMap::new();
        let mut out = Vec::with_capacity(self.len());
        for &l in &self.0 {
            let next = Letter(seen.len() as u32);
            let v = *seen.entry(l).or_insert(next);
            out.push(v);
        }
        Word(out)
    }

    pub fn is_canonical(&self) -> bool {
        *self == self.canonical_form()
    }

    /// The (length, lexicographic) key used for deterministic ordering.
    pub fn order_key(&self) -> (usize, &[Letter]) {
        (self.len(), &self.0)
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// Primary key length, secondary key lexicographic on letter indices.
impl Ord for Word {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.order_key().cmp(&other.order_key())
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for l in &self.0 {
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

impl FromStr for Word {
    type Err = Error;

    fn from_str(s: &str) -> Result<Word> {
        parse_word(s)
    }
}

/// Parses a word: juxtaposed letter tokens (`a`–`z`, or `x` followed by
/// digits), with `^k` repeating the preceding token. `x^2` ≡ `xx`.
pub fn parse_word(s: &str) -> Result<Word> {
    let mut letters = Vec::new();
    let mut chars = s.char_indices().peekable();
    let err = |col: usize, msg: &str| Error::Parse { line: 1, col: col + 1, msg: msg.into() };
    while let Some((col, c)) = chars.next() {
        if c.is_whitespace() {
            continue;
        }
        let letter = if c == 'x' {
            let mut digits = String::new();
            while let Some(&(_, d)) = chars.peek() {
                if d.is_ascii_digit() {
                    digits.push(d);
                    chars.next();
                } else {
                    break;
                }
            }
            if digits.is_empty() {
                Letter(0)
            } else {
                let k: u32 = digits
                    .parse()
                    .map_err(|_| err(col, "subscript out of range"))?;
                if k == 0 {
                    return Err(err(col, "letter subscripts start at 1"));
                }
                Letter(k - 1)
            }
        } else if let Some(l) = letter_of_char(c) {
            l
        } else {
            return Err(err(col, &format!("unknown symbol '{c}'")));
        };
        let mut reps = 1usize;
        if let Some(&(ecol, '^')) = chars.peek() {
            chars.next();
            let mut digits = String::new();
            while let Some(&(_, d)) = chars.peek() {
                if d.is_ascii_digit() {
                    digits.push(d);
                    chars.next();
                } else {
                    break;
                }
            }
            reps = digits
                .parse()
                .map_err(|_| err(ecol, "exponent expects digits"))?;
            if reps == 0 {
                return Err(err(ecol, "exponent must be at least 1"));
            }
        }
        letters.extend(std::iter::repeat(letter).take(reps));
    }
    if letters.is_empty() {
        return Err(err(s.len().saturating_sub(1), "empty word"));
    }
    Ok(Word(letters))
}

/// A bijection Letter → Letter on a finite domain.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Renaming {
    map: BTreeMap<Letter, Letter>,
}

impl Renaming {
    /// Builds a renaming, rejecting non-injective maps.
    pub fn new(map: BTreeMap<Letter, Letter>) -> Result<Renaming> {
        let images: BTreeSet<Letter> = map.values().copied().collect();
        if images.len() != map.len() {
            return Err(Error::Precondition("renaming is not injective".into()));
        }
        Ok(Renaming { map })
    }

    /// The identity renaming on the given domain.
    pub fn identity<I: IntoIterator<Item = Letter>>(domain: I) -> Renaming {
        Renaming { map: domain.into_iter().map(|l| (l, l)).collect() }
    }

    pub fn image(&self, l: Letter) -> Option<Letter> {
        self.map.get(&l).copied()
    }

    pub fn domain(&self) -> impl Iterator<Item = Letter> + '_ {
        self.map.keys().copied()
    }

    pub fn as_map(&self) -> &BTreeMap<Letter, Letter> {
        &self.map
    }

    /// Left-to-right composition: apply `self` first, then `other`.
    /// Requires the image of `self` to lie inside the domain of `other`.
    pub fn then(&self, other: &Renaming) -> Result<Renaming> {
        let mut map = BTreeMap::new();
        for (&a, &b) in &self.map {
            let c = other
                .image(b)
                .ok_or(Error::DomainMismatch { letter: b.to_string() })?;
            map.insert(a, c);
        }
        Renaming::new(map)
    }
}

/// The unique renaming turning `a` into `b`, when the two words are similar.
pub fn similar(a: &Word, b: &Word) -> Option<Renaming> {
    if a.len() != b.len() {
        return None;
    }
    let mut fwd: BTreeMap<Letter, Letter> = BTreeMap::new();
    let mut bwd: BTreeMap<Letter, Letter> = BTreeMap::new();
    for (&la, &lb) in a.letters().iter().zip(b.letters()) {
        match (fwd.get(&la), bwd.get(&lb)) {
            (None, None) => {
                fwd.insert(la, lb);
                bwd.insert(lb, la);
            }
            (Some(&ib), Some(&ia)) if ib == lb && ia == la => {}
            _ => return None,
        }
    }
    Some(Renaming { map: fwd })
}

/// All words over `m` fixed letters (indices 0..m) of length ≤ `max_len`,
/// in (length, lexicographic) order. Count is m + m² + … + m^max_len.
pub fn enumerate_words(m: usize, max_len: usize) -> Vec<Word> {
    assert!(m >= 1 && max_len >= 1);
    let mut out = Vec::new();
    let mut layer: Vec<Vec<u32>> = (0..m as u32).map(|i| vec![i]).collect();
    for len in 1..=max_len {
        out.extend(layer.iter().map(|v| Word::from_indices(v)));
        if len == max_len {
            break;
        }
        let mut next = Vec::with_capacity(layer.len() * m);
        for w in &layer {
            for c in 0..m as u32 {
                let mut v = w.clone();
                v.push(c);
                next.push(v);
            }
        }
        layer = next;
    }
    out
}

/// All canonical words (fixed points of `canonical_form`) of length ≤ `max_len`,
/// in (length, lexicographic) order.
pub fn canonical_words(max_len: usize) -> Vec<Word> {
    restricted_growth(max_len, 0).into_iter().map(|v| Word::from_indices(&v)).collect()
}

// Words of length 1..=max_len whose letters start from a pool of `base`
// pre-existing letters, every fresh letter being the least unused index.
fn restricted_growth(max_len: usize, base: u32) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    let mut layer: Vec<(Vec<u32>, u32)> = (0..=base).map(|c| (vec![c], base.max(c + 1))).collect();
    for len in 1..=max_len {
        out.extend(layer.iter().map(|(v, _)| v.clone()));
        if len == max_len {
            break;
        }
        let mut next = Vec::new();
        for (w, used) in &layer {
            for c in 0..=*used {
                let mut v = w.clone();
                v.push(c);
                next.push((v, (*used).max(c + 1)));
            }
        }
        layer = next;
    }
    out
}

/// All identities-as-pairs in joint canonical form with both sides of length
/// ≤ `max_len`: the left side is canonical and the right side continues the
/// first-occurrence numbering. Includes trivial pairs (u, u).
pub fn canonical_pairs(max_len: usize) -> Vec<(Word, Word)> {
    let mut out = Vec::new();
    for u in canonical_words(max_len) {
        let k = u.content().len() as u32;
        for v in restricted_growth(max_len, k) {
            out.push((u.clone(), Word::from_indices(&v)));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> Word {
        parse_word(s).unwrap()
    }

    #[test]
    fn concat_examples() {
        assert_eq!(w("xy").concat(&w("z")), w("xyz"));
        assert_eq!(w("x").concat(&w("x")), w("x^2"));
        assert_eq!(w("xy").concat(&w("yx")), w("xyyx"));
        assert_eq!(w("xy").concat(&w("z")).len(), 3);
    }

    #[test]
    fn content_and_length() {
        assert_eq!(w("xyx").content(), [Letter(0), Letter(1)].into());
        assert_eq!(w("x").content(), [Letter(0)].into());
        assert_eq!(w("x1x2x3").content().len(), 3);
        assert_eq!(w("xyx").len(), 3);
        assert_eq!(w("x").len(), 1);
        assert_eq!(w("x^2y").len(), 3);
    }

    #[test]
    fn linearity() {
        assert!(w("xyz").is_linear());
        assert!(!w("xyx").is_linear());
        assert!(w("x").is_linear());
    }

    #[test]
    fn similar_examples() {
        let r = similar(&w("xyx"), &w("yxy")).unwrap();
        assert_eq!(r.image(Letter(0)), Some(Letter(1)));
        assert_eq!(r.image(Letter(1)), Some(Letter(0)));
        assert!(similar(&w("xyx"), &w("xxy")).is_none());
        let r = similar(&w("x^2"), &w("y^2")).unwrap();
        assert_eq!(r.as_map().len(), 1);
        assert_eq!(r.image(Letter(0)), Some(Letter(1)));
    }

    #[test]
    fn renaming_application() {
        let swap = Renaming::new([(Letter(0), Letter(1)), (Letter(1), Letter(0))].into()).unwrap();
        assert_eq!(w("xyx").apply_renaming(&swap).unwrap(), w("yxy"));
        let id = Renaming::identity(w("xyzt").content());
        assert_eq!(w("xyzt").apply_renaming(&id).unwrap(), w("xyzt"));
        let cycle = Renaming::new(
            [(Letter(0), Letter(1)), (Letter(1), Letter(2)), (Letter(2), Letter(0))].into(),
        )
        .unwrap();
        assert_eq!(w("x1x2x3").apply_renaming(&cycle).unwrap(), w("x2x3x1"));
        // domain mismatch
        assert!(w("xyz").apply_renaming(&swap).is_err());
    }

    #[test]
    fn renaming_rejects_non_injective() {
        assert!(Renaming::new([(Letter(0), Letter(2)), (Letter(1), Letter(2))].into()).is_err());
    }

    #[test]
    fn substitution() {
        let theta: BTreeMap<Letter, Word> = [(Letter(0), w("x")), (Letter(1), w("x"))].into();
        assert_eq!(w("x^2y").substitute(&theta).unwrap(), w("x^3"));
        let theta: BTreeMap<Letter, Word> = [(Letter(0), w("ab")), (Letter(1), w("c"))].into();
        assert_eq!(w("xy").substitute(&theta).unwrap(), w("abc"));
        let theta: BTreeMap<Letter, Word> =
            [(Letter(0), w("x")), (Letter(1), w("y")), (Letter(2), w("xy"))].into();
        assert_eq!(w("xyz").substitute(&theta).unwrap(), w("xyxy"));
        let missing: BTreeMap<Letter, Word> = [(Letter(0), w("x"))].into();
        assert!(w("xy").substitute(&missing).is_err());
    }

    #[test]
    fn canonical_form_examples() {
        assert_eq!(w("zyz").canonical_form(), w("xyx"));
        assert_eq!(w("xyz").canonical_form(), w("xyz"));
        assert_eq!(w("y^2").canonical_form(), w("x^2"));
    }

    #[test]
    fn canonical_form_idempotent_exhaustive() {
        // all words up to length 6 over 4 letters
        for word in enumerate_words(4, 6) {
            let c = word.canonical_form();
            assert_eq!(c.canonical_form(), c);
            assert!(similar(&word, &c).is_some());
        }
    }

    #[test]
    fn enumeration_counts_and_order() {
        let ws = enumerate_words(1, 3);
        assert_eq!(ws, vec![w("x"), w("x^2"), w("x^3")]);
        let ws = enumerate_words(2, 2);
        assert_eq!(ws, vec![w("x"), w("y"), w("xx"), w("xy"), w("yx"), w("yy")]);
        assert_eq!(enumerate_words(3, 4).len(), 120);
        let mut sorted = enumerate_words(3, 4);
        sorted.sort();
        assert_eq!(sorted, enumerate_words(3, 4));
    }

    #[test]
    fn canonical_word_counts() {
        // restricted-growth strings: 1, 2, 5, 15, 52 per length
        let ws = canonical_words(5);
        assert_eq!(ws.len(), 1 + 2 + 5 + 15 + 52);
        assert!(ws.iter().all(|u| u.is_canonical()));
    }

    #[test]
    fn display_round_trip() {
        for s in ["xyx", "x1x2x3", "x^2y", "abc", "x5x6"] {
            let word = w(s);
            assert_eq!(parse_word(&word.to_string()).unwrap(), word);
        }
        assert_eq!(w("x^2").to_string(), "xx");
        assert_eq!(w("x1x2x3x4").to_string(), "xyzt");
    }

    #[test]
    fn parse_errors_have_positions() {
        match parse_word("xy?z") {
            Err(Error::Parse { col, .. }) => assert_eq!(col, 3),
            other => panic!("expected parse error, got {other:?}"),
        }
        assert!(parse_word("").is_err());
        assert!(parse_word("x^0").is_err());
        assert!(parse_word("x0").is_err());
    }
}
