//! Deduction sequences between two identity systems or varieties: word
//! sequences where every consecutive pair is derivable from one of the two
//! sides.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::Result;
use crate::identities::{Identity, IdentitySystem};
use crate::words::{Letter, Word};

use super::congruence::DEFAULT_UNIVERSE_CAP;
use super::universe::Universe;
use super::{decide, Budget};

/// Which of the two sides justifies a step.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StepTag {
    A,
    B,
}

impl fmt::Display for StepTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StepTag::A => write!(f, "A"),
            StepTag::B => write!(f, "B"),
        }
    }
}

/// A deduction: w_0, …, w_m with a per-step tag naming the side from which
/// w_i ≈ w_{i+1} is derivable. Consecutive words are distinct.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Deduction {
    pub words: Vec<Word>,
    pub tags: Vec<StepTag>,
}

impl Deduction {
    pub fn steps(&self) -> usize {
        self.tags.len()
    }
}

impl fmt::Display for Deduction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, w) in self.words.iter().enumerate() {
            if i == 0 {
                writeln!(f, "{i}. {w}")?;
            } else {
                writeln!(f, "{i}. {w}  [{}]", self.tags[i - 1])?;
            }
        }
        Ok(())
    }
}

/// The shared search core: a breadth-first shortest path in the graph whose
/// vertices are the usable word indices and whose edges connect words with an
/// equal A-key or an equal B-key. Returns the step-count-minimal path with
/// the lexicographically least word sequence; ties between tags go to A.
pub(crate) fn shortest_keyed_path(
    usable: &[u32],
    key_a: &BTreeMap<u32, u64>,
    key_b: &BTreeMap<u32, u64>,
    start: u32,
    goal: u32,
    max_steps: usize,
) -> Option<(Vec<u32>, Vec<StepTag>)> {
    let mut members_a: BTreeMap<u64, Vec<u32>> = BTreeMap::new();
    let mut members_b: BTreeMap<u64, Vec<u32>> = BTreeMap::new();
    for &ix in usable {
        members_a.entry(key_a[&ix]).or_default().push(ix);
        members_b.entry(key_b[&ix]).or_default().push(ix);
    }
    let mut dist: BTreeMap<u32, u32> = BTreeMap::new();
    dist.insert(goal, 0);
    let mut frontier = vec![goal];
    let mut level = 0u32;
    while !frontier.is_empty() && dist.get(&start).is_none() && (level as usize) < max_steps {
        level += 1;
        let mut next = Vec::new();
        for &w in &frontier {
            for list in [&members_a[&key_a[&w]], &members_b[&key_b[&w]]] {
                for &n in list.iter() {
                    dist.entry(n).or_insert_with(|| {
                        next.push(n);
                        level
                    });
                }
            }
        }
        frontier = next;
    }
    dist.get(&start)?;
    let mut path = vec![start];
    let mut tags = Vec::new();
    let mut cur = start;
    while cur != goal {
        let d = dist[&cur];
        let next = members_a[&key_a[&cur]]
            .iter()
            .chain(members_b[&key_b[&cur]].iter())
            .copied()
            .filter(|&n| n != cur && dist.get(&n) == Some(&(d - 1)))
            .min()
            .expect("distance decreases along some class sibling");
        let tag = if key_a[&next] == key_a[&cur] { StepTag::A } else { StepTag::B };
        path.push(next);
        tags.push(tag);
        cur = next;
    }
    Some((path, tags))
}

// Remaps the letters of u and v onto 0..k and prepares the bounded universe
// hosting the search.
pub(crate) struct SearchSpace {
    pub letters: Vec<Letter>,
    pub universe: Universe,
    pub usable: Vec<u32>,
    pub start: u32,
    pub goal: u32,
}

pub(crate) fn search_space(
    u: &Word,
    v: &Word,
    max_len: usize,
    extra_bound: usize,
) -> Result<Option<SearchSpace>> {
    if u.len() > max_len || v.len() > max_len {
        return Ok(None);
    }
    let letters: Vec<Letter> = u.content().union(&v.content()).copied().collect();
    let to_internal: BTreeMap<Letter, Letter> =
        letters.iter().enumerate().map(|(i, &l)| (l, Letter(i as u32))).collect();
    let remap = |w: &Word| Word::new(w.letters().iter().map(|l| to_internal[l]).collect());
    let universe = Universe::new(letters.len(), max_len.max(extra_bound), DEFAULT_UNIVERSE_CAP)?;
    let usable: Vec<u32> =
        universe.indices().filter(|&ix| universe.len_of(ix) <= max_len).collect();
    let start = universe.index_of_word(&remap(u))?;
    let goal = universe.index_of_word(&remap(v))?;
    Ok(Some(SearchSpace { letters, universe, usable, start, goal }))
}

impl SearchSpace {
    pub fn external_word(&self, ix: u32) -> Word {
        let w = self.universe.word_at(ix);
        Word::new(w.letters().iter().map(|l| self.letters[l.index()]).collect())
    }
}

/// Finds a shortest-by-step-count deduction from u to v where each step moves
/// inside a congruence class of system A (tag A) or system B (tag B), over
/// the letters of u and v, with every word of length ≤ max_len.
///
/// Deterministic: among shortest deductions the lexicographically least word
/// sequence (in (length, lex) word order) is returned, steps justified by
/// both systems are tagged A.
pub fn find_deduction(
    a: &IdentitySystem,
    b: &IdentitySystem,
    u: &Word,
    v: &Word,
    max_len: usize,
    max_steps: usize,
) -> Result<Option<Deduction>> {
    let extra = a.max_expanded_side_len().max(b.max_expanded_side_len());
    let Some(space) = search_space(u, v, max_len, extra)? else { return Ok(None) };
    let m = space.letters.len();
    let bound = space.universe.bound();
    let ca = super::saturate_capped(a, m, bound, DEFAULT_UNIVERSE_CAP)?;
    let cb = super::saturate_capped(b, m, bound, DEFAULT_UNIVERSE_CAP)?;
    let mut key_a = BTreeMap::new();
    let mut key_b = BTreeMap::new();
    for &ix in &space.usable {
        key_a.insert(ix, ca.class_index(ix) as u64);
        key_b.insert(ix, cb.class_index(ix) as u64);
    }
    Ok(shortest_keyed_path(&space.usable, &key_a, &key_b, space.start, space.goal, max_steps)
        .map(|(path, tags)| Deduction {
            words: path.into_iter().map(|ix| space.external_word(ix)).collect(),
            tags,
        }))
}

/// Verifies a deduction against the two systems: every consecutive pair must
/// be distinct and derivable from the tagged system.
pub fn verify_deduction(
    d: &Deduction,
    a: &IdentitySystem,
    b: &IdentitySystem,
    budget: &Budget,
) -> Result<bool> {
    if d.words.is_empty() || d.tags.len() + 1 != d.words.len() {
        return Ok(false);
    }
    for (i, tag) in d.tags.iter().enumerate() {
        let (wi, wj) = (&d.words[i], &d.words[i + 1]);
        if wi == wj {
            return Ok(false);
        }
        let system = match tag {
            StepTag::A => a,
            StepTag::B => b,
        };
        let id = Identity::Plain(wi.clone(), wj.clone());
        if !decide(system, &id, budget)?.holds() {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::identities::parse_system;
    use crate::words::parse_word;

    fn w(s: &str) -> Word {
        parse_word(s).unwrap()
    }

    #[test]
    fn one_step_commutative_deduction() {
        let comm = parse_system("xy = yx;").unwrap();
        let d = find_deduction(&comm, &comm, &w("xy"), &w("yx"), 4, 8).unwrap().unwrap();
        assert_eq!(d.steps(), 1);
        assert_eq!(d.words, vec![w("xy"), w("yx")]);
        assert!(verify_deduction(&d, &comm, &comm, &Budget::default()).unwrap());
    }

    #[test]
    fn composing_position_swaps() {
        // reversal and first-two swap together generate every arrangement
        let a = parse_system("xyz = zyx;").unwrap();
        let b = parse_system("xyz = yxz;").unwrap();
        let d = find_deduction(&a, &b, &w("xyz"), &w("xzy"), 5, 8).unwrap().unwrap();
        assert!(d.steps() <= 3);
        assert_eq!(d.words.first(), Some(&w("xyz")));
        assert_eq!(d.words.last(), Some(&w("xzy")));
        assert!(verify_deduction(&d, &a, &b, &Budget::default()).unwrap());
        // the reversal alone cannot reach an odd arrangement of three letters
        assert!(find_deduction(&a, &a, &w("xyz"), &w("xzy"), 5, 8).unwrap().is_none());
    }

    #[test]
    fn zero_absorption_step() {
        let a = parse_system("xxy = 0;").unwrap();
        let b = IdentitySystem::empty();
        // x³ and x⁴ are both zero (y ↦ x instance), hence one step apart
        let d = find_deduction(&a, &b, &w("x^3"), &w("x^4"), 5, 8).unwrap().unwrap();
        assert_eq!(d.steps(), 1);
        assert_eq!(d.tags, vec![StepTag::A]);
        assert!(verify_deduction(&d, &a, &b, &Budget::default()).unwrap());
        // x² is not zero here, so no deduction can reach it from x³
        assert!(find_deduction(&a, &b, &w("x^3"), &w("x^2"), 5, 8).unwrap().is_none());
    }

    #[test]
    fn corrupted_deduction_is_rejected() {
        let a = parse_system("xyz = zyx;").unwrap();
        let b = parse_system("xyz = yxz;").unwrap();
        let mut d = find_deduction(&a, &b, &w("xyz"), &w("xzy"), 5, 8).unwrap().unwrap();
        d.words[1] = w("zzz");
        assert!(!verify_deduction(&d, &a, &b, &Budget::default()).unwrap());
    }

    #[test]
    fn hand_built_sandwich_pattern() {
        // steps tagged B, A, B where the outer words move in system B and the
        // middle step moves in system A
        let a = parse_system("xyzt = 0; xyx = 0; xx = 0; xyz = yxz;").unwrap();
        let b = parse_system("xyzt = 0; xyx = 0; xx = 0; xyz = zyx;").unwrap();
        let d = Deduction {
            words: vec![w("xyz"), w("zyx"), w("yzx"), w("xzy")],
            tags: vec![StepTag::B, StepTag::A, StepTag::B],
        };
        assert!(verify_deduction(&d, &a, &b, &Budget::default()).unwrap());
    }

    #[test]
    fn deduction_display() {
        let d = Deduction { words: vec![w("xy"), w("yx")], tags: vec![StepTag::A] };
        assert_eq!(d.to_string(), "0. xy\n1. yx  [A]\n");
    }
}
