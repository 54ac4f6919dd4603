//! Variety descriptors and the lattice view: flat-nil varieties with total
//! summaries, the semilattice variety and its joins, theory-level join and
//! meet, decidable theory equality, word classification, and recognition of
//! the known modular catalog.

pub mod catalog;
pub mod family;
pub mod witness;

use std::collections::BTreeMap;
use std::fmt;
use std::sync::{Arc, Mutex};

use crate::engine::{
    satisfies_system, theory_summary_scheduled, TheorySummary, DEFAULT_BOUND_CEILING,
};
use crate::error::{Error, Result};
use crate::identities::{holds_in_sl, Identity, IdentitySystem};
use crate::words::{canonical_pairs, canonical_words, Word};

/// A finitely based nil variety whose equational theory is totally decided by
/// a bounded congruence. Construction fails if the bound schedule never
/// reaches totality, or if the resulting quotient does not satisfy the basis
/// (which would mean the congruence under-converged).
#[derive(Debug, Clone)]
pub struct FlatNil {
    basis: IdentitySystem,
    base: Arc<TheorySummary>,
    cache: Arc<Mutex<BTreeMap<usize, Arc<TheorySummary>>>>,
}

impl FlatNil {
    pub fn new(basis: IdentitySystem) -> Result<FlatNil> {
        let m = 3.max(basis.max_letters());
        let base = Arc::new(certified_summary(&basis, m)?);
        Ok(FlatNil { basis, base, cache: Arc::new(Mutex::new(BTreeMap::new())) })
    }

    pub fn basis(&self) -> &IdentitySystem {
        &self.basis
    }

    pub fn base_summary(&self) -> &Arc<TheorySummary> {
        &self.base
    }

    /// A certified total summary over at least `m` letters.
    pub fn summary_for(&self, m: usize) -> Result<Arc<TheorySummary>> {
        if self.base.strong() || m <= self.base.alphabet() {
            return Ok(self.base.clone());
        }
        let mut cache = self.cache.lock().unwrap();
        if let Some(s) = cache.get(&m) {
            return Ok(s.clone());
        }
        let s = Arc::new(certified_summary(&self.basis, m)?);
        cache.insert(m, s.clone());
        Ok(s)
    }

    fn needed_alphabet(id: &Identity) -> usize {
        match id {
            Identity::Plain(u, v) => u.content().len().max(v.content().len()),
            Identity::Zero(u) => u.content().len(),
        }
    }

    /// Does the identity hold in this variety?
    pub fn holds(&self, id: &Identity) -> Result<bool> {
        self.summary_for(Self::needed_alphabet(id))?.holds(id)
    }

    /// Is the whole theory decided over arbitrary alphabets?
    pub fn strong(&self) -> bool {
        self.base.strong()
    }

    pub fn is_trivial_theory(&self) -> bool {
        self.base.b_eff() == Some(1)
    }
}

// Builds a total summary and certifies it: the quotient of the bounded
// relatively free semigroup must satisfy the basis, which pins the bounded
// congruence to the true theory on its fragment.
fn certified_summary(basis: &IdentitySystem, m: usize) -> Result<TheorySummary> {
    if !basis.has_zero() {
        return Err(Error::NotTotal(format!(
            "system has no zero identity: {}",
            basis.to_string().replace('\n', " ")
        )));
    }
    let s = theory_summary_scheduled(basis, m, DEFAULT_BOUND_CEILING)?;
    if !s.total() {
        return Err(Error::NotTotal(format!(
            "no effective bound within the schedule over {m} letters"
        )));
    }
    let (q, _) = s.quotient()?;
    if !satisfies_system(&q, basis)? {
        return Err(Error::Internal(
            "bounded congruence under-converged: quotient violates the basis".into(),
        ));
    }
    Ok(s)
}

/// A variety in the scope of the artifact: the trivial variety, the variety
/// of semilattices, a flat nil variety, or the join of the latter with SL.
#[derive(Debug, Clone)]
pub enum VarietyDescriptor {
    Trivial,
    SL,
    FlatNil(FlatNil),
    SLJoin(FlatNil),
}

impl VarietyDescriptor {
    pub fn flat_nil(basis: IdentitySystem) -> Result<VarietyDescriptor> {
        Ok(VarietyDescriptor::FlatNil(FlatNil::new(basis)?))
    }

    pub fn sl_join(basis: IdentitySystem) -> Result<VarietyDescriptor> {
        Ok(VarietyDescriptor::SLJoin(FlatNil::new(basis)?))
    }

    pub fn sl_flag(&self) -> bool {
        matches!(self, VarietyDescriptor::SL | VarietyDescriptor::SLJoin(_))
    }

    pub fn nil_part(&self) -> Option<&FlatNil> {
        match self {
            VarietyDescriptor::FlatNil(f) | VarietyDescriptor::SLJoin(f) => Some(f),
            _ => None,
        }
    }

    /// Reassembles a descriptor from an SL flag and an optional nil part,
    /// collapsing a trivial nil part into the plain variants.
    pub fn from_parts(sl: bool, nil: Option<FlatNil>) -> VarietyDescriptor {
        match nil {
            Some(f) if !f.is_trivial_theory() => {
                if sl {
                    VarietyDescriptor::SLJoin(f)
                } else {
                    VarietyDescriptor::FlatNil(f)
                }
            }
            _ => {
                if sl {
                    VarietyDescriptor::SL
                } else {
                    VarietyDescriptor::Trivial
                }
            }
        }
    }
}

impl fmt::Display for VarietyDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            VarietyDescriptor::Trivial => write!(f, "T"),
            VarietyDescriptor::SL => write!(f, "SL"),
            VarietyDescriptor::FlatNil(n) => {
                write!(f, "var{{{}}}", n.basis.to_string().trim().replace('\n', " "))
            }
            VarietyDescriptor::SLJoin(n) => {
                write!(f, "SL ∨ var{{{}}}", n.basis.to_string().trim().replace('\n', " "))
            }
        }
    }
}

/// Does the identity hold in the variety? The trivial variety satisfies
/// everything; SL decides by content; a join satisfies exactly the
/// identities of both parts.
pub fn holds_in(v: &VarietyDescriptor, id: &Identity) -> Result<bool> {
    match v {
        VarietyDescriptor::Trivial => Ok(true),
        VarietyDescriptor::SL => Ok(holds_in_sl(id)),
        VarietyDescriptor::FlatNil(f) => f.holds(id),
        VarietyDescriptor::SLJoin(f) => {
            if !holds_in_sl(id) {
                return Ok(false);
            }
            f.holds(id)
        }
    }
}

/// The join of varieties as a theory oracle: an identity holds in the join
/// iff it holds in every part.
#[derive(Debug, Clone)]
pub struct JoinTheory {
    parts: Vec<VarietyDescriptor>,
}

impl JoinTheory {
    pub fn parts(&self) -> &[VarietyDescriptor] {
        &self.parts
    }

    pub fn holds(&self, id: &Identity) -> Result<bool> {
        for p in &self.parts {
            if !holds_in(p, id)? {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

pub fn join_theory(a: &VarietyDescriptor, b: &VarietyDescriptor) -> JoinTheory {
    JoinTheory { parts: vec![a.clone(), b.clone()] }
}

/// The meet of two varieties as a descriptor. Nil parts meet by basis union
/// and re-summarization (failing with a totality error when the union does
/// not totalize); the SL flag distributes because SL is a neutral element.
pub fn meet(a: &VarietyDescriptor, b: &VarietyDescriptor) -> Result<VarietyDescriptor> {
    let sl = a.sl_flag() && b.sl_flag();
    let nil = match (a.nil_part(), b.nil_part()) {
        (Some(fa), Some(fb)) => {
            if fa.basis.same_identity_set(&fb.basis) {
                Some(fa.clone())
            } else if fa.strong() && fb.strong() && nil_subvariety(fa, fb)? {
                Some(fa.clone())
            } else if fa.strong() && fb.strong() && nil_subvariety(fb, fa)? {
                Some(fb.clone())
            } else {
                Some(FlatNil::new(fa.basis.union(&fb.basis))?)
            }
        }
        _ => None,
    };
    Ok(VarietyDescriptor::from_parts(sl, nil))
}

/// The join of two varieties as a descriptor, materializing the nil-nil join
/// through finite basis extraction. Both nil parts must decide their whole
/// theories (strong summaries).
pub fn join_descriptor(a: &VarietyDescriptor, b: &VarietyDescriptor) -> Result<VarietyDescriptor> {
    let sl = a.sl_flag() || b.sl_flag();
    let nil = match (a.nil_part(), b.nil_part()) {
        (None, x) | (x, None) => x.cloned(),
        (Some(fa), Some(fb)) => {
            if fa.basis.same_identity_set(&fb.basis) {
                Some(fa.clone())
            } else if fa.strong() && fb.strong() && nil_subvariety(fa, fb)? {
                Some(fb.clone())
            } else if fa.strong() && fb.strong() && nil_subvariety(fb, fa)? {
                Some(fa.clone())
            } else {
                Some(extract_join(fa, fb)?)
            }
        }
    };
    Ok(VarietyDescriptor::from_parts(sl, nil))
}

/// Is var(fa) a subvariety of var(fb)? Equivalently, does every identity of
/// fb hold in fa? Compared on the determining fragment; both summaries must
/// be strong.
fn nil_subvariety(fa: &FlatNil, fb: &FlatNil) -> Result<bool> {
    let l = fa.base.b_eff().unwrap_or(0).max(fb.base.b_eff().unwrap_or(0));
    let sa = fa.summary_for(l)?;
    let sb = fb.summary_for(l)?;
    // every fb-merge must be an fa-merge, and every fb-zero an fa-zero
    let mut map: BTreeMap<u32, u32> = BTreeMap::new();
    for w in crate::words::enumerate_words(l, l) {
        let (ca, cb) = (sa.congruence().class_of_word(&w)?, sb.congruence().class_of_word(&w)?);
        if *map.entry(cb).or_insert(ca) != ca {
            return Ok(false);
        }
        if Some(cb) == sb.zero_class() && Some(ca) != sa.zero_class() {
            return Ok(false);
        }
    }
    Ok(true)
}

// A finite basis for the intersection of two strongly total nil theories.
//
// The whole theory is axiomatized by its fragment on words of length ≤ L
// (L = the larger effective bound): identities with a long side reduce to
// zero-class membership by absorption, and same-content short identities are
// instances of jointly canonical ones. Candidates already derivable from the
// identities collected so far are skipped, which keeps the basis small.
fn extract_join(fa: &FlatNil, fb: &FlatNil) -> Result<FlatNil> {
    for f in [fa, fb] {
        if !f.strong() {
            return Err(Error::Undecidable(
                "join extraction needs nil parts with strong summaries".into(),
            ));
        }
    }
    let l = fa.base.b_eff().unwrap().max(fb.base.b_eff().unwrap());
    let sa = fa.summary_for(l)?;
    let sb = fb.summary_for(l)?;

    let mut sat = crate::engine::Saturator::new(l + 1, l + 2, crate::engine::congruence::DEFAULT_UNIVERSE_CAP)?;
    let mut picked: Vec<Identity> = Vec::new();

    let mut consider = |sat: &mut crate::engine::Saturator, id: Identity| -> Result<()> {
        if !(sa.holds(&id)? && sb.holds(&id)?) {
            return Ok(());
        }
        let already = match &id {
            Identity::Plain(u, v) => {
                let (iu, iv) = (sat.universe().index_of_word(u)?, sat.universe().index_of_word(v)?);
                sat.same_class(iu, iv)
            }
            Identity::Zero(u) => {
                let z = Word::single(crate::identities::fresh_letter(&u.content()));
                let (zu, uz, iu) = (
                    sat.universe().index_of_word(&z.concat(u))?,
                    sat.universe().index_of_word(&u.concat(&z))?,
                    sat.universe().index_of_word(u)?,
                );
                sat.same_class(zu, iu) && sat.same_class(uz, iu)
            }
        };
        if already {
            return Ok(());
        }
        for (lhs, rhs) in id.expand_zero() {
            sat.add_pair(&lhs, &rhs)?;
        }
        picked.push(id);
        Ok(())
    };

    for u in canonical_words(l) {
        consider(&mut sat, Identity::Zero(u))?;
    }
    for (u, v) in canonical_pairs(l) {
        if u != v && u.content() == v.content() {
            consider(&mut sat, Identity::Plain(u, v))?;
        }
    }
    FlatNil::new(IdentitySystem::new(picked))
}

/// Decidable theory equality.
///
/// The SL flags must agree (a nil variety never contains SL) and the nil
/// parts are compared on the finite fragment of words of length ≤ L over L
/// letters, L the larger effective bound. Absorption makes the fragment
/// determine the whole theory, so this is exact for strong summaries; other
/// descriptors raise an undecidable-descriptor error.
pub fn theory_equal(a: &VarietyDescriptor, b: &VarietyDescriptor) -> Result<bool> {
    if a.sl_flag() != b.sl_flag() {
        return Ok(false);
    }
    match (a.nil_part(), b.nil_part()) {
        (None, None) => Ok(true),
        (None, Some(f)) | (Some(f), None) => Ok(f.is_trivial_theory()),
        (Some(fa), Some(fb)) => {
            if fa.basis.same_identity_set(&fb.basis) {
                return Ok(true);
            }
            nil_theory_equal(fa, fb)
        }
    }
}

fn nil_theory_equal(fa: &FlatNil, fb: &FlatNil) -> Result<bool> {
    for f in [fa, fb] {
        if !f.strong() {
            return Err(Error::Undecidable(format!(
                "theory equality needs strong summaries; var{{{}}} only decides up to {} letters",
                f.basis.to_string().replace('\n', " "),
                f.base.alphabet(),
            )));
        }
    }
    let l = fa.base.b_eff().unwrap().max(fb.base.b_eff().unwrap());
    let sa = fa.summary_for(l)?;
    let sb = fb.summary_for(l)?;
    // the class maps on words of length ≤ L over L letters must be equal as
    // partitions, with the zero classes aligned
    let mut fwd: BTreeMap<u32, u32> = BTreeMap::new();
    let mut bwd: BTreeMap<u32, u32> = BTreeMap::new();
    for w in crate::words::enumerate_words(l, l) {
        let (ca, cb) = (sa.congruence().class_of_word(&w)?, sb.congruence().class_of_word(&w)?);
        if *fwd.entry(ca).or_insert(cb) != cb || *bwd.entry(cb).or_insert(ca) != ca {
            return Ok(false);
        }
        if (Some(ca) == sa.zero_class()) != (Some(cb) == sb.zero_class()) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Word classification against a flat nil variety: Z (provably zero),
/// L (linear, nonzero), S1/S2 (nonzero non-linear over one or two letters).
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub enum WordClass {
    Z,
    L,
    S1,
    S2,
}

impl fmt::Display for WordClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WordClass::Z => write!(f, "Z"),
            WordClass::L => write!(f, "L"),
            WordClass::S1 => write!(f, "S1"),
            WordClass::S2 => write!(f, "S2"),
        }
    }
}

pub fn classify_word(n: &FlatNil, w: &Word) -> Result<WordClass> {
    let m = w.content().len();
    if n.summary_for(m)?.is_zero_word(w)? {
        return Ok(WordClass::Z);
    }
    if w.is_linear() {
        return Ok(WordClass::L);
    }
    match m {
        1 => Ok(WordClass::S1),
        2 => Ok(WordClass::S2),
        _ => Err(Error::Precondition(format!(
            "nonzero non-linear word {w} over {m} letters has no class tag"
        ))),
    }
}

/// Finds a shortest deduction from u to v where each step is an identity
/// holding in descriptor `a` (tag A) or descriptor `b` (tag B), with all
/// words over the letters of u and v and of length ≤ max_len.
///
/// This is the variety-level counterpart of `engine::find_deduction`; for
/// SL-joined descriptors every step preserves content.
pub fn find_descriptor_deduction(
    a: &VarietyDescriptor,
    b: &VarietyDescriptor,
    u: &Word,
    v: &Word,
    max_len: usize,
    max_steps: usize,
) -> Result<Option<crate::engine::Deduction>> {
    use crate::engine::deduction::{search_space, shortest_keyed_path};

    let Some(space) = search_space(u, v, max_len, 1)? else { return Ok(None) };
    let k = space.letters.len();
    let summaries: [Option<Arc<TheorySummary>>; 2] = [
        a.nil_part().map(|f| f.summary_for(k)).transpose()?,
        b.nil_part().map(|f| f.summary_for(k)).transpose()?,
    ];
    // a word's class under M ∨ N: its content when M = SL, and its nil class
    // with everything provably zero collapsed
    let key_of = |d: &VarietyDescriptor, s: &Option<Arc<TheorySummary>>, w: &Word| -> Result<u64> {
        let mask: u64 = if d.sl_flag() {
            w.content().iter().fold(0, |acc, l| acc | 1 << l.index())
        } else {
            0
        };
        let nil: u64 = match s {
            None => 0,
            Some(s) => {
                if s.is_zero_word(w)? {
                    1
                } else {
                    2 + s.congruence().class_of_word(w)? as u64
                }
            }
        };
        Ok(mask << 40 | nil)
    };
    let mut key_a = BTreeMap::new();
    let mut key_b = BTreeMap::new();
    for &ix in &space.usable {
        let w = space.universe.word_at(ix);
        key_a.insert(ix, key_of(a, &summaries[0], &w)?);
        key_b.insert(ix, key_of(b, &summaries[1], &w)?);
    }
    Ok(
        shortest_keyed_path(&space.usable, &key_a, &key_b, space.start, space.goal, max_steps)
            .map(|(path, tags)| crate::engine::Deduction {
                words: path.into_iter().map(|ix| space.external_word(ix)).collect(),
                tags,
            }),
    )
}

/// The two possible non-nil factors of a catalog decomposition.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MPart {
    T,
    SL,
}

impl fmt::Display for MPart {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MPart::T => write!(f, "T"),
            MPart::SL => write!(f, "SL"),
        }
    }
}

/// Recognizes a descriptor as M ∨ N with N satisfying one of the four
/// catalog systems: returns the factor M and the index into
/// `catalog::modular_systems`. Recognition is by entailment of each system's
/// identities, not by syntactic basis match.
pub fn recognize_modular_catalog(v: &VarietyDescriptor) -> Result<Option<(MPart, usize)>> {
    let (m, f) = match v {
        VarietyDescriptor::FlatNil(f) => (MPart::T, f),
        VarietyDescriptor::SLJoin(f) => (MPart::SL, f),
        _ => {
            return Err(Error::Precondition(
                "recognition applies to flat-nil varieties and their SL joins".into(),
            ))
        }
    };
    'system: for (k, named) in catalog::modular_systems().iter().enumerate() {
        for id in named.system.identities() {
            if !f.holds(id)? {
                continue 'system;
            }
        }
        return Ok(Some((m, k)));
    }
    Ok(None)
}
