//! Total theory summaries for bounded-nil varieties.
//!
//! A summary packages a saturated congruence together with the effective
//! bound B_eff: the least length at which every word over the saturation
//! alphabet falls into the zero class. Once that happens, factor absorption
//! makes every longer word over that alphabet zero as well, so the finite
//! partition decides the whole theory fragment. When B_eff ≤ m the collapse
//! is witnessed on B_eff-letter words, hence holds over arbitrary alphabets
//! (`strong`), and the summary decides every identity outright.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::identities::{Identity, IdentitySystem};
use crate::words::Word;

use super::congruence::{saturate_capped, Congruence, DEFAULT_UNIVERSE_CAP};
use super::model::FiniteSemigroup;

/// Escalation ceiling for the bound schedule.
pub const DEFAULT_BOUND_CEILING: usize = 7;

#[derive(Debug, Clone)]
pub struct TheorySummary {
    basis: IdentitySystem,
    congruence: Congruence,
    zero_class: Option<u32>,
    b_eff: Option<usize>,
    total: bool,
}

impl TheorySummary {
    pub fn basis(&self) -> &IdentitySystem {
        &self.basis
    }

    pub fn congruence(&self) -> &Congruence {
        &self.congruence
    }

    pub fn alphabet(&self) -> usize {
        self.congruence.universe().alphabet()
    }

    pub fn bound(&self) -> usize {
        self.congruence.universe().bound()
    }

    /// Total: every word of length B_eff over the saturation alphabet is
    /// provably zero, so the summary decides all identities over at most
    /// `alphabet()` letters.
    pub fn total(&self) -> bool {
        self.total
    }

    pub fn b_eff(&self) -> Option<usize> {
        self.b_eff
    }

    /// Strong: B_eff ≤ alphabet, so the length-B_eff collapse covers words
    /// over arbitrary alphabets and the summary decides every identity.
    pub fn strong(&self) -> bool {
        matches!(self.b_eff, Some(b) if self.total && b <= self.alphabet())
    }

    pub fn zero_class(&self) -> Option<u32> {
        self.zero_class
    }
}

/// Default starting bound for a system: longest expanded side plus two. Zero
/// expansion adds one letter; one extra slot lets absorbing contexts fire.
pub fn default_bound(system: &IdentitySystem) -> usize {
    system.max_expanded_side_len() + 2
}

/// Builds the summary of the system over `m` letters at the given bound.
/// Totality failure is reported in the value, not as an error.
pub fn theory_summary(system: &IdentitySystem, m: usize, bound: usize) -> Result<TheorySummary> {
    theory_summary_capped(system, m, bound, DEFAULT_UNIVERSE_CAP)
}

pub fn theory_summary_capped(
    system: &IdentitySystem,
    m: usize,
    bound: usize,
    cap: usize,
) -> Result<TheorySummary> {
    let congruence = saturate_capped(system, m, bound, cap)?;
    let universe = congruence.universe();

    // The zero class is the class of the uniform one-letter instance of the
    // first zero identity; all zero witnesses must land there.
    let mut zero_class = None;
    for id in system.identities() {
        if let Identity::Zero(u) = id {
            let uniform = Word::from_indices(&vec![0u32; u.len()]);
            let class = congruence.class_of_word(&uniform)?;
            match zero_class {
                None => zero_class = Some(class),
                Some(z) if z == class => {}
                Some(_) => {
                    return Err(Error::Internal(
                        "zero witnesses fall into distinct classes".into(),
                    ))
                }
            }
        }
    }

    let b_eff = zero_class.and_then(|z| {
        (1..=universe.bound())
            .find(|&len| universe.indices_of_len(len).all(|ix| congruence.class_index(ix) == z))
    });

    Ok(TheorySummary {
        basis: system.clone(),
        congruence,
        zero_class,
        b_eff,
        total: b_eff.is_some(),
    })
}

/// Runs the bound schedule: the default bound, escalating by one up to the
/// ceiling, until the summary is total. Returns the last summary either way.
pub fn theory_summary_scheduled(
    system: &IdentitySystem,
    m: usize,
    ceiling: usize,
) -> Result<TheorySummary> {
    let start = default_bound(system);
    let mut last = None;
    for bound in start..=ceiling.max(start) {
        let s = theory_summary(system, m, bound)?;
        let done = s.total;
        last = Some(s);
        if done {
            break;
        }
    }
    last.ok_or_else(|| Error::Internal("empty bound schedule".into()))
}

impl TheorySummary {
    /// Is the word provably zero? Requires totality; errors when the word
    /// needs more letters than the summary can see.
    pub fn is_zero_word(&self, w: &Word) -> Result<bool> {
        if !self.total {
            return Err(Error::Undecidable("summary is not total".into()));
        }
        let b_eff = self.b_eff.unwrap();
        let k = w.content().len();
        if w.len() >= b_eff && (self.strong() || k <= self.alphabet()) {
            return Ok(true);
        }
        if k <= self.alphabet() {
            let c = self.congruence.class_of_word(&w.canonical_form())?;
            return Ok(Some(c) == self.zero_class);
        }
        // more letters than the alphabet and shorter than B_eff is impossible
        // when strong (k ≤ |w| < B_eff ≤ m); otherwise we cannot decide
        Err(Error::Undecidable(format!(
            "word {w} needs {k} letters, summary has {}",
            self.alphabet()
        )))
    }

    /// Decides the identity. Requires totality.
    pub fn holds(&self, id: &Identity) -> Result<bool> {
        if !self.total {
            return Err(Error::Undecidable("summary is not total".into()));
        }
        match id {
            Identity::Zero(u) => self.is_zero_word(u),
            Identity::Plain(u, v) => {
                if u == v {
                    return Ok(true);
                }
                if u.content() != v.content() {
                    // a nil theory can only identify words of distinct content
                    // by sending both to zero
                    return Ok(self.is_zero_word(u)? && self.is_zero_word(v)?);
                }
                let zu = self.is_zero_word(u)?;
                let zv = self.is_zero_word(v)?;
                if zu || zv {
                    return Ok(zu && zv);
                }
                // joint canonical form fits the alphabet: both sides are
                // nonzero, hence shorter than B_eff ≤ bound
                let joint = u.concat(v).canonical_form();
                let (lu, lv) = joint.letters().split_at(u.len());
                let cu = self.congruence.class_of_word(&Word::new(lu.to_vec()))?;
                let cv = self.congruence.class_of_word(&Word::new(lv.to_vec()))?;
                Ok(cu == cv)
            }
        }
    }

    /// All canonical words of length < B_eff (or ≤ bound when not total) that
    /// are not in the zero class, each with its class root, in (length, lex)
    /// order.
    pub fn nonzero_canonical_words(&self) -> Vec<(Word, u32)> {
        let max_len = self.b_eff.map(|b| b - 1).unwrap_or(self.bound());
        let mut out = Vec::new();
        for ix in self.congruence.universe().indices() {
            let w = self.congruence.universe().word_at(ix);
            if w.len() > max_len {
                break;
            }
            if w.is_canonical() {
                let c = self.congruence.class_index(ix);
                if Some(c) != self.zero_class {
                    out.push((w, c));
                }
            }
        }
        out
    }

    /// Canonical serialized report: effective bound, class count, zero-class
    /// size, and the nonzero canonical words with class labels.
    pub fn report(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "alphabet: {}", self.alphabet());
        let _ = writeln!(s, "bound: {}", self.bound());
        match self.b_eff {
            Some(b) => {
                let _ = writeln!(s, "effective bound: {b}");
            }
            None => {
                let _ = writeln!(s, "effective bound: none (not total)");
            }
        }
        let _ = writeln!(s, "total: {}", self.total);
        let _ = writeln!(s, "classes: {}", self.congruence.class_count());
        if let Some(z) = self.zero_class {
            let zero_size =
                self.congruence.universe().indices().filter(|&ix| self.congruence.class_index(ix) == z).count();
            let _ = writeln!(s, "zero class size: {zero_size}");
        }
        let words = self.nonzero_canonical_words();
        let mut label = std::collections::BTreeMap::new();
        let _ = writeln!(s, "nonzero canonical words: {}", words.len());
        for (w, class) in words {
            let next = label.len();
            let l = *label.entry(class).or_insert(next);
            let _ = writeln!(s, "  {w}  [class {l}]");
        }
        s
    }

    /// The quotient of the bounded relatively free semigroup: one element per
    /// nonzero class of words shorter than B_eff, plus the zero. The table is
    /// induced by concatenation of class representatives, with everything of
    /// length ≥ B_eff collapsing to zero.
    ///
    /// Returns the semigroup and, per alphabet letter, its element.
    pub fn quotient(&self) -> Result<(FiniteSemigroup, Vec<usize>)> {
        if !self.total {
            return Err(Error::Undecidable("quotient needs a total summary".into()));
        }
        let b_eff = self.b_eff.unwrap();
        let zero = self.zero_class.unwrap();
        let universe = self.congruence.universe();

        // representatives: least index per nonzero class among short words
        let mut reps: Vec<u32> = Vec::new();
        let mut class_to_elt: std::collections::BTreeMap<u32, usize> = Default::default();
        for ix in universe.indices() {
            if universe.len_of(ix) >= b_eff {
                break;
            }
            let c = self.congruence.class_index(ix);
            if c != zero && !class_to_elt.contains_key(&c) {
                class_to_elt.insert(c, reps.len());
                reps.push(ix);
            }
        }
        let n = reps.len() + 1;
        let zero_elt = reps.len();

        let elt_of_index = |ix: u32| -> Result<usize> {
            let c = self.congruence.class_index(ix);
            if c == zero {
                return Ok(zero_elt);
            }
            class_to_elt.get(&c).copied().ok_or_else(|| {
                Error::Internal(format!(
                    "class of {} has no short representative",
                    universe.word_at(ix)
                ))
            })
        };

        let mut table = vec![zero_elt; n * n];
        for (i, &a) in reps.iter().enumerate() {
            for (j, &b) in reps.iter().enumerate() {
                let e = match universe.concat(a, b) {
                    Some(ab) if universe.len_of(ab) < b_eff => elt_of_index(ab)?,
                    Some(ab) => {
                        // length ≥ B_eff: zero by totality; the congruence
                        // agrees because absorption merges it into the class
                        debug_assert_eq!(self.congruence.class_index(ab), zero);
                        zero_elt
                    }
                    None => zero_elt,
                };
                table[i * n + j] = e;
            }
        }
        let labels: Vec<String> = reps
            .iter()
            .map(|&ix| universe.word_at(ix).to_string())
            .chain(std::iter::once("0".into()))
            .collect();
        let s = FiniteSemigroup::new(n, table)?.with_labels(labels);

        let mut gen_map = Vec::with_capacity(universe.alphabet());
        for c in 0..universe.alphabet() {
            gen_map.push(elt_of_index(universe.index_of_digits(&[c as u32]))?);
        }
        Ok((s, gen_map))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::identities::{parse_identity, parse_system};
    use crate::words::parse_word;

    fn w(s: &str) -> Word {
        parse_word(s).unwrap()
    }

    #[test]
    fn first_system_is_total_at_four_letters() {
        // xyz ≈ zyx, x²y ≈ 0 at m=4, B=6: total, nonzero classes are the
        // linear words and the words similar to x² or xyx
        let sys = parse_system("xyz = zyx; xxy = 0;").unwrap();
        let s = theory_summary(&sys, 4, 6).unwrap();
        assert!(s.total());
        assert_eq!(s.b_eff(), Some(5));
        assert!(!s.strong());
        for (word, _) in s.nonzero_canonical_words() {
            let c = word.canonical_form();
            let ok = word.is_linear() || c == w("xx") || c == w("xyx");
            assert!(ok, "unexpected nonzero word {word}");
        }
        // linear words are nonzero
        assert!(!s.is_zero_word(&w("xyzt")).unwrap());
        assert!(s.is_zero_word(&w("xxy")).unwrap());
        assert!(s.is_zero_word(&w("x^3")).unwrap());
    }

    #[test]
    fn witness_basis_is_strongly_total() {
        let sys = parse_system("xyzt = 0; xyx = 0; xx = 0; xyz = yxz;").unwrap();
        let s = theory_summary(&sys, 4, 7).unwrap();
        assert!(s.total());
        assert_eq!(s.b_eff(), Some(4));
        assert!(s.strong());
        // strong summaries decide identities over arbitrarily many letters
        assert!(s.is_zero_word(&w("x1x2x3x4x5x6")).unwrap());
        assert!(s.holds(&parse_identity("x1x2x3x4 = x5x6x7x8").unwrap()).unwrap());
        assert!(!s.holds(&parse_identity("xy = yx").unwrap()).unwrap());
        assert!(s.holds(&parse_identity("xyz = yxz").unwrap()).unwrap());
    }

    #[test]
    fn commutative_variety_is_not_total() {
        let sys = parse_system("xy = yx;").unwrap();
        let s = theory_summary(&sys, 2, 4).unwrap();
        assert!(!s.total());
        assert!(s.holds(&parse_identity("xy = yx").unwrap()).is_err());
    }

    #[test]
    fn summary_decision_examples() {
        let sys = parse_system("xyz = zyx; xxy = 0;").unwrap();
        let s = theory_summary(&sys, 2, 6).unwrap();
        assert!(s.total());
        // y ↦ x instance of x²y ≈ 0
        assert!(s.holds(&parse_identity("xxx = 0").unwrap()).unwrap());
        assert!(!s.holds(&parse_identity("xyx = 0").unwrap()).unwrap());
        assert!(!s.holds(&parse_identity("xx = 0").unwrap()).unwrap());
        assert!(s.holds(&parse_identity("xxyy = 0").unwrap()).unwrap());
    }

    #[test]
    fn quotient_is_a_certified_model() {
        let sys = parse_system("xyzt = 0; xyx = 0; xx = 0; xyz = yxz;").unwrap();
        let s = theory_summary(&sys, 3, 5).unwrap();
        let (q, gens) = s.quotient().unwrap();
        // 3 letters + 6 nonzero length-2 words + 3 linear length-3 classes + zero
        assert_eq!(q.order(), 13);
        assert_eq!(gens.len(), 3);
        for id in sys.identities() {
            assert!(super::super::model::check_model(&q, id).unwrap());
        }
        // the generator evaluation distinguishes xyz from zyx
        let (a, b, c) = (gens[0], gens[1], gens[2]);
        let abc = q.mul(q.mul(a, b), c);
        let cba = q.mul(q.mul(c, b), a);
        assert_ne!(abc, cba);
    }

    #[test]
    fn scheduled_escalation() {
        let sys = parse_system("xyz = zyx; xxy = 0;").unwrap();
        let s = theory_summary_scheduled(&sys, 4, DEFAULT_BOUND_CEILING).unwrap();
        assert!(s.total());
    }
}
