//! Decision machinery: bounded congruence closure, total theory summaries,
//! finite model checking and countermodel search, and two-variety deduction
//! search and verification.

pub mod congruence;
pub mod deduction;
pub mod model;
pub mod summary;
pub mod universe;

pub use congruence::{saturate, saturate_capped, Congruence, Saturator};
pub use deduction::{find_deduction, verify_deduction, Deduction, StepTag};
pub use model::{
    check_model, enumerate_models, find_countermodel_by_search, satisfies_system, FiniteSemigroup,
    ORDER_CAP,
};
pub use summary::{
    default_bound, theory_summary, theory_summary_scheduled, TheorySummary, DEFAULT_BOUND_CEILING,
};

use crate::error::{Error, Result};
use crate::identities::{Identity, IdentitySystem};
use crate::words::{Letter, Word};

/// Search budgets. Reports echo these so that Unknown outcomes are
/// reproducible.
#[derive(Debug, Clone)]
pub struct Budget {
    pub bound_ceiling: usize,
    pub max_order: usize,
    pub universe_cap: usize,
}

impl Default for Budget {
    fn default() -> Budget {
        Budget {
            bound_ceiling: DEFAULT_BOUND_CEILING,
            max_order: 4,
            universe_cap: congruence::DEFAULT_UNIVERSE_CAP,
        }
    }
}

/// Outcome of `decide`.
#[derive(Debug, Clone)]
pub enum Decision {
    /// Derivable: witnessed by a saturation merge, hence sound — every model
    /// of the system satisfies the identity.
    Holds,
    /// Refuted: the model satisfies the system and violates the identity.
    Fails(FiniteSemigroup),
    /// Both searches exhausted their budget.
    Unknown,
}

impl Decision {
    pub fn holds(&self) -> bool {
        matches!(self, Decision::Holds)
    }
}

// Joint canonical sides of an identity, together with the alphabet size the
// congruence needs to host the query.
fn canonical_query(id: &Identity) -> (Identity, usize) {
    match id {
        Identity::Plain(u, v) => {
            let joint = u.concat(v).canonical_form();
            let (lu, lv) = joint.letters().split_at(u.len());
            let k = joint.content().len();
            (Identity::Plain(Word::new(lu.to_vec()), Word::new(lv.to_vec())), k)
        }
        Identity::Zero(u) => {
            let c = u.canonical_form();
            let k = c.content().len();
            (Identity::Zero(c), k + 1)
        }
    }
}

/// Is the (canonical) identity witnessed by the congruence? For `u ≈ 0` both
/// expanded pairs must be merged, with the fresh letter drawn from the
/// congruence alphabet.
pub fn merged_in(cong: &Congruence, id: &Identity) -> Result<bool> {
    let (cid, k) = canonical_query(id);
    if k > cong.universe().alphabet() {
        return Err(Error::DomainMismatch { letter: format!("{k} letters needed") });
    }
    match &cid {
        Identity::Plain(u, v) => cong.same_class(u, v),
        Identity::Zero(u) => {
            let z = Word::single(Letter(u.content().len() as u32));
            Ok(cong.same_class(&z.concat(u), u)? && cong.same_class(&u.concat(&z), u)?)
        }
    }
}

/// Decides derivability of the identity from the system.
///
/// Holds is always backed by a saturation witness. Fails is always backed by
/// a finite semigroup that is checked to satisfy the system and violate the
/// identity; for systems with a total summary it comes from the bounded
/// relatively free quotient, so decide never answers Unknown there.
pub fn decide(system: &IdentitySystem, id: &Identity, budget: &Budget) -> Result<Decision> {
    if id.is_trivial() {
        return Ok(Decision::Holds);
    }
    let (cid, m) = canonical_query(id);
    let id_need = match &cid {
        Identity::Plain(u, v) => u.len().max(v.len()),
        Identity::Zero(u) => u.len() + 1,
    };
    let start = default_bound(system).max(id_need);
    let ceiling = budget.bound_ceiling.max(start);
    for bound in start..=ceiling {
        let s = summary::theory_summary_capped(system, m, bound, budget.universe_cap)?;
        if merged_in(s.congruence(), &cid)? {
            return Ok(Decision::Holds);
        }
        if s.total() {
            if let Some(model) = certified_quotient_refutation(&s, &cid)? {
                return Ok(Decision::Fails(model));
            }
        }
    }
    if let Some(model) =
        model::find_countermodel_by_search(system, id, budget.max_order.min(ORDER_CAP))?
    {
        return Ok(Decision::Fails(model));
    }
    Ok(Decision::Unknown)
}

// The quotient refutation: when the summary is total and the quotient
// semigroup passes the full model check against the system, an unmerged
// identity is violated there under the generator assignment.
fn certified_quotient_refutation(
    s: &TheorySummary,
    cid: &Identity,
) -> Result<Option<FiniteSemigroup>> {
    let (q, _gens) = s.quotient()?;
    if !satisfies_system(&q, s.basis())? {
        return Ok(None);
    }
    if check_model(&q, cid)? {
        return Ok(None);
    }
    Ok(Some(rees_minimize(&q, s.basis(), cid)))
}

// Shrinks a refuting model to the divisor closure of the elements that one
// violating evaluation touches, collapsing the rest to the zero (a Rees
// quotient). Falls back to the input if the shrunken table loses either the
// system or the violation.
fn rees_minimize(q: &FiniteSemigroup, system: &IdentitySystem, id: &Identity) -> FiniteSemigroup {
    let Some(needed) = violating_elements(q, id) else { return q.clone() };
    let n = q.order();
    let mut keep = vec![false; n];
    for e in needed {
        keep[e] = true;
    }
    if let Some(z) = q.absorbing() {
        keep[z] = false;
    }
    // divisor closure: a product inside the kept set forces both factors in
    loop {
        let mut changed = false;
        for a in 0..n {
            for b in 0..n {
                if keep[q.mul(a, b)] && (!keep[a] || !keep[b]) {
                    keep[a] = true;
                    keep[b] = true;
                    changed = true;
                }
            }
        }
        if !changed {
            break;
        }
    }
    let kept: Vec<usize> = (0..n).filter(|&e| keep[e]).collect();
    let size = kept.len() + 1;
    if size >= n {
        return q.clone();
    }
    let zero = kept.len();
    let elt = |e: usize| kept.iter().position(|&k| k == e).unwrap_or(zero);
    let mut table = vec![zero; size * size];
    for (i, &a) in kept.iter().enumerate() {
        for (j, &b) in kept.iter().enumerate() {
            table[i * size + j] = elt(q.mul(a, b));
        }
    }
    let labels = kept.iter().map(|&e| q.label(e)).chain(std::iter::once("0".into())).collect();
    match FiniteSemigroup::new(size, table) {
        Ok(small) => {
            let small = small.with_labels(labels);
            let ok = satisfies_system(&small, system).unwrap_or(false)
                && !check_model(&small, id).unwrap_or(true);
            if ok {
                small
            } else {
                q.clone()
            }
        }
        Err(_) => q.clone(),
    }
}

// Elements touched by the first violating evaluation of the identity:
// all prefix products of both sides, plus an absorption witness for zero
// identities.
fn violating_elements(q: &FiniteSemigroup, id: &Identity) -> Option<Vec<usize>> {
    let letters: Vec<Letter> = id.letters().into_iter().collect();
    let n = q.order();
    let mut assign = vec![0usize; letters.len()];
    let eval_prefixes = |w: &Word, assign: &[usize], out: &mut Vec<usize>| -> usize {
        let mut acc: Option<usize> = None;
        for l in w.letters() {
            let v = assign[letters.iter().position(|x| x == l).unwrap()];
            out.push(v);
            acc = Some(match acc {
                None => v,
                Some(a) => q.mul(a, v),
            });
            out.push(acc.unwrap());
        }
        acc.unwrap()
    };
    loop {
        let mut touched = Vec::new();
        let violated = match id {
            Identity::Plain(u, v) => {
                let a = eval_prefixes(u, &assign, &mut touched);
                let b = eval_prefixes(v, &assign, &mut touched);
                a != b
            }
            Identity::Zero(u) => match q.absorbing() {
                None => true,
                Some(z) => {
                    let a = eval_prefixes(u, &assign, &mut touched);
                    if a != z {
                        // keep a witness that a is not absorbing
                        if let Some(s) = (0..n).find(|&s| q.mul(a, s) != a || q.mul(s, a) != a) {
                            touched.push(s);
                        }
                        true
                    } else {
                        false
                    }
                }
            },
        };
        if violated {
            touched.sort_unstable();
            touched.dedup();
            return Some(touched);
        }
        // next assignment
        let mut i = 0;
        loop {
            if i == assign.len() {
                return None;
            }
            assign[i] += 1;
            if assign[i] < n {
                break;
            }
            assign[i] = 0;
            i += 1;
        }
    }
}

/// A semigroup satisfying the system and violating the identity: exhaustive
/// table search up to `max_order` first, then (for systems with a total
/// summary) a divisor-closed Rees quotient of the relatively free semigroup,
/// which may exceed `max_order`.
pub fn find_countermodel(
    system: &IdentitySystem,
    id: &Identity,
    max_order: usize,
    budget: &Budget,
) -> Result<Option<FiniteSemigroup>> {
    if let Some(m) = model::find_countermodel_by_search(system, id, max_order.min(ORDER_CAP))? {
        return Ok(Some(m));
    }
    let (cid, m) = canonical_query(id);
    let id_need = match &cid {
        Identity::Plain(u, v) => u.len().max(v.len()),
        Identity::Zero(u) => u.len() + 1,
    };
    let start = default_bound(system).max(id_need);
    for bound in start..=budget.bound_ceiling.max(start) {
        let s = summary::theory_summary_capped(system, m, bound, budget.universe_cap)?;
        if merged_in(s.congruence(), &cid)? {
            return Ok(None); // the identity holds; no countermodel exists
        }
        if s.total() {
            return certified_quotient_refutation(&s, &cid);
        }
    }
    Ok(None)
}
