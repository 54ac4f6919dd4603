//! Finite semigroups as multiplication tables: model checking identities and
//! exhaustive countermodel search.

use crate::error::{Error, Result};
use crate::identities::{Identity, IdentitySystem};
use crate::words::{Letter, Word};

/// Hard ceiling for the exhaustive table search.
pub const ORDER_CAP: usize = 5;

const MAX_ASSIGNMENTS: usize = 200_000_000;

/// A finite semigroup of order k given by its multiplication table.
/// Associativity is checked at construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteSemigroup {
    order: usize,
    table: Vec<usize>,
    labels: Option<Vec<String>>,
}

impl FiniteSemigroup {
    pub fn new(order: usize, table: Vec<usize>) -> Result<FiniteSemigroup> {
        if table.len() != order * order || table.iter().any(|&v| v >= order) {
            return Err(Error::Precondition("malformed multiplication table".into()));
        }
        let s = FiniteSemigroup { order, table, labels: None };
        for a in 0..order {
            for b in 0..order {
                for c in 0..order {
                    if s.mul(s.mul(a, b), c) != s.mul(a, s.mul(b, c)) {
                        return Err(Error::Precondition(format!(
                            "not associative at ({a}, {b}, {c})"
                        )));
                    }
                }
            }
        }
        Ok(s)
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> FiniteSemigroup {
        debug_assert_eq!(labels.len(), self.order);
        self.labels = Some(labels);
        self
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.order + b]
    }

    pub fn label(&self, e: usize) -> String {
        match &self.labels {
            Some(ls) => ls[e].clone(),
            None => format!("e{e}"),
        }
    }

    /// The two-element semilattice (meet of {0, 1}).
    pub fn semilattice2() -> FiniteSemigroup {
        FiniteSemigroup::new(2, vec![0, 0, 0, 1]).unwrap()
    }

    /// The two-element left-zero semigroup: a·b = a.
    pub fn left_zero2() -> FiniteSemigroup {
        FiniteSemigroup::new(2, vec![0, 0, 1, 1]).unwrap()
    }

    fn eval(&self, word: &Word, letters: &[Letter], assign: &[usize]) -> usize {
        let mut it = word.letters().iter();
        let pos = |l: &Letter| letters.iter().position(|x| x == l).unwrap();
        let mut acc = assign[pos(it.next().unwrap())];
        for l in it {
            acc = self.mul(acc, assign[pos(l)]);
        }
        acc
    }

    /// The element absorbing on both sides, if present.
    pub fn absorbing(&self) -> Option<usize> {
        (0..self.order).find(|&z| (0..self.order).all(|s| self.mul(z, s) == z && self.mul(s, z) == z))
    }
}

/// Does every assignment of elements to letters satisfy the identity?
///
/// `u ≈ 0` is checked through its expansion semantics: the model must have a
/// two-sided absorbing element and every evaluation of u must equal it, which
/// is equivalent to all assignments satisfying both expanded identities.
pub fn check_model(s: &FiniteSemigroup, id: &Identity) -> Result<bool> {
    match id {
        Identity::Plain(u, v) => {
            let letters: Vec<Letter> = id.letters().into_iter().collect();
            let mut assign = vec![0usize; letters.len()];
            check_assignments(s, &letters, &mut assign, 0, &mut |s, letters, assign| {
                s.eval(u, letters, assign) == s.eval(v, letters, assign)
            })
        }
        Identity::Zero(u) => {
            let Some(z) = s.absorbing() else { return Ok(false) };
            let letters: Vec<Letter> = u.content().into_iter().collect();
            let mut assign = vec![0usize; letters.len()];
            check_assignments(s, &letters, &mut assign, 0, &mut |s, letters, assign| {
                s.eval(u, letters, assign) == z
            })
        }
    }
}

fn check_assignments(
    s: &FiniteSemigroup,
    letters: &[Letter],
    assign: &mut [usize],
    i: usize,
    ok: &mut dyn FnMut(&FiniteSemigroup, &[Letter], &[usize]) -> bool,
) -> Result<bool> {
    if s.order.checked_pow(letters.len() as u32).map_or(true, |n| n > MAX_ASSIGNMENTS) {
        return Err(Error::ResourceLimit(format!(
            "too many assignments: {}^{}",
            s.order,
            letters.len()
        )));
    }
    fn rec(
        s: &FiniteSemigroup,
        letters: &[Letter],
        assign: &mut [usize],
        i: usize,
        ok: &mut dyn FnMut(&FiniteSemigroup, &[Letter], &[usize]) -> bool,
    ) -> bool {
        if i == letters.len() {
            return ok(s, letters, assign);
        }
        for v in 0..s.order {
            assign[i] = v;
            if !rec(s, letters, assign, i + 1, ok) {
                return false;
            }
        }
        true
    }
    Ok(rec(s, letters, assign, i, ok))
}

pub fn satisfies_system(s: &FiniteSemigroup, system: &IdentitySystem) -> Result<bool> {
    for id in system.identities() {
        if !check_model(s, id)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Exhaustive backtracking enumeration of multiplication tables with
/// associativity forward-checking.
///
/// With `prune_symmetry`, the first table cell is restricted to {0, 1}; every
/// semigroup is isomorphic to one of that shape, so existence queries are
/// unaffected while the search space shrinks.
fn search_tables(
    order: usize,
    prune_symmetry: bool,
    visit: &mut dyn FnMut(&FiniteSemigroup) -> Result<bool>,
) -> Result<bool> {
    let mut table = vec![usize::MAX; order * order];

    fn assoc_consistent(table: &[usize], n: usize) -> bool {
        for a in 0..n {
            for b in 0..n {
                let ab = table[a * n + b];
                if ab == usize::MAX {
                    continue;
                }
                for c in 0..n {
                    let bc = table[b * n + c];
                    if bc == usize::MAX {
                        continue;
                    }
                    let left = table[ab * n + c];
                    let right = table[a * n + bc];
                    if left != usize::MAX && right != usize::MAX && left != right {
                        return false;
                    }
                }
            }
        }
        true
    }

    fn rec(
        table: &mut Vec<usize>,
        n: usize,
        cell: usize,
        prune: bool,
        visit: &mut dyn FnMut(&FiniteSemigroup) -> Result<bool>,
    ) -> Result<bool> {
        if cell == n * n {
            let s = FiniteSemigroup { order: n, table: table.clone(), labels: None };
            return visit(&s);
        }
        let limit = if prune && cell == 0 { 2.min(n) } else { n };
        for v in 0..limit {
            table[cell] = v;
            if assoc_consistent(table, n) {
                if rec(table, n, cell + 1, prune, visit)? {
                    return Ok(true);
                }
            }
        }
        table[cell] = usize::MAX;
        Ok(false)
    }

    rec(&mut table, order, 0, prune_symmetry, visit)
}

/// All semigroups of exactly the given order satisfying the system.
/// Unpruned (every labelled table); meant for small orders.
pub fn enumerate_models(system: &IdentitySystem, order: usize) -> Result<Vec<FiniteSemigroup>> {
    if order > 4 {
        return Err(Error::ResourceLimit(format!(
            "unpruned model enumeration is limited to order 4, got {order}"
        )));
    }
    let mut out = Vec::new();
    search_tables(order, false, &mut |s| {
        if satisfies_system(s, system)? {
            out.push(s.clone());
        }
        Ok(false)
    })?;
    Ok(out)
}

/// A semigroup of order ≤ max_order satisfying the system and violating the
/// identity, found by exhaustive search. Orders above the cap are rejected.
pub fn find_countermodel_by_search(
    system: &IdentitySystem,
    id: &Identity,
    max_order: usize,
) -> Result<Option<FiniteSemigroup>> {
    if max_order > ORDER_CAP {
        return Err(Error::ResourceLimit(format!(
            "model search is capped at order {ORDER_CAP}, got {max_order}"
        )));
    }
    for order in 1..=max_order {
        let mut found: Option<FiniteSemigroup> = None;
        search_tables(order, true, &mut |s| {
            if satisfies_system(s, system)? && !check_model(s, id)? {
                found = Some(s.clone());
                return Ok(true);
            }
            Ok(false)
        })?;
        if found.is_some() {
            return Ok(found);
        }
    }
    Ok(None)
}
