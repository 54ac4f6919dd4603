//! Bounded congruence closure over the free semigroup.
//!
//! `saturate` computes the least equivalence on all words of length ≤ B over
//! m letters that contains every substitution instance of the (expanded)
//! system identities fitting in the bound and is compatible with
//! multiplication inside the bound: if u ~ v and both aub and avb fit, then
//! aub ~ avb.

use std::collections::VecDeque;

use crate::error::{Error, Result};
use crate::identities::IdentitySystem;
use crate::words::Word;

use super::universe::Universe;

pub const DEFAULT_UNIVERSE_CAP: usize = 3_000_000;

struct UnionFind {
    parent: Vec<u32>,
    rank: Vec<u8>,
    /// Least member (by index, i.e. by (length, lex)) of each class, kept on
    /// roots. Extensions of the anchor stand in for extensions of every
    /// member: the anchor is shortest, so it fits wherever any member does.
    anchor: Vec<u32>,
}

impl UnionFind {
    fn new(n: usize) -> UnionFind {
        UnionFind {
            parent: (0..n as u32).collect(),
            rank: vec![0; n],
            anchor: (0..n as u32).collect(),
        }
    }

    fn find(&mut self, mut x: u32) -> u32 {
        while self.parent[x as usize] != x {
            let grand = self.parent[self.parent[x as usize] as usize];
            self.parent[x as usize] = grand;
            x = grand;
        }
        x
    }

    /// Unites the classes of a and b; returns the pre-merge anchors when the
    /// classes were distinct.
    fn union(&mut self, a: u32, b: u32) -> Option<(u32, u32)> {
        let ra = self.find(a);
        let rb = self.find(b);
        if ra == rb {
            return None;
        }
        let (anch_a, anch_b) = (self.anchor[ra as usize], self.anchor[rb as usize]);
        let (hi, lo) = if self.rank[ra as usize] >= self.rank[rb as usize] { (ra, rb) } else { (rb, ra) };
        self.parent[lo as usize] = hi;
        if self.rank[hi as usize] == self.rank[lo as usize] {
            self.rank[hi as usize] += 1;
        }
        self.anchor[hi as usize] = anch_a.min(anch_b);
        Some((anch_a, anch_b))
    }
}

/// The saturated bounded congruence: a partition of the word universe.
#[derive(Debug, Clone)]
pub struct Congruence {
    universe: Universe,
    /// class_of[ix] = root index of the class, fully resolved
    class_of: Vec<u32>,
}

pub struct Saturator {
    universe: Universe,
    uf: UnionFind,
    queue: VecDeque<(u32, u32)>,
}

impl Saturator {
    pub fn new(m: usize, bound: usize, cap: usize) -> Result<Saturator> {
        let universe = Universe::new(m, bound, cap)?;
        let n = universe.len();
        Ok(Saturator { universe, uf: UnionFind::new(n), queue: VecDeque::new() })
    }

    pub fn universe(&self) -> &Universe {
        &self.universe
    }

    /// Seeds every bounded substitution instance of the system's expanded
    /// identities and closes under one-letter context extensions.
    pub fn add_system(&mut self, system: &IdentitySystem) -> Result<()> {
        let bound = self.universe.bound();
        for id in system.identities() {
            for (l, r) in id.expand_zero() {
                if l.len() > bound || r.len() > bound {
                    return Err(Error::BoundTooSmall {
                        bound,
                        reason: format!("identity side {l} = {r} does not fit"),
                    });
                }
                self.seed_instances(&l, &r);
            }
        }
        self.close();
        Ok(())
    }

    pub fn add_pair(&mut self, l: &Word, r: &Word) -> Result<()> {
        self.seed_instances(l, r);
        self.close();
        Ok(())
    }

    // Enumerates all substitutions of the identity's letters by words over the
    // universe alphabet such that both instantiated sides fit in the bound.
    fn seed_instances(&mut self, l: &Word, r: &Word) {
        let letters: Vec<u32> = {
            let mut v: Vec<u32> =
                l.content().union(&r.content()).map(|lt| lt.0).collect();
            v.sort_unstable();
            v
        };
        let occ = |w: &Word, letter: u32| w.letters().iter().filter(|x| x.0 == letter).count();
        let occ_l: Vec<usize> = letters.iter().map(|&x| occ(l, x)).collect();
        let occ_r: Vec<usize> = letters.iter().map(|&x| occ(r, x)).collect();
        let digits_l: Vec<usize> =
            l.letters().iter().map(|x| letters.binary_search(&x.0).unwrap()).collect();
        let digits_r: Vec<usize> =
            r.letters().iter().map(|x| letters.binary_search(&x.0).unwrap()).collect();

        // assigned[i] = (len, value) of the word substituted for letters[i]
        let mut assigned: Vec<(usize, usize)> = Vec::with_capacity(letters.len());
        self.instance_rec(&occ_l, &occ_r, &digits_l, &digits_r, &mut assigned);
    }

    fn instance_rec(
        &mut self,
        occ_l: &[usize],
        occ_r: &[usize],
        digits_l: &[usize],
        digits_r: &[usize],
        assigned: &mut Vec<(usize, usize)>,
    ) {
        let i = assigned.len();
        if i == occ_l.len() {
            let a = self.encode_side(digits_l, assigned);
            let b = self.encode_side(digits_r, assigned);
            self.enqueue_union(a, b);
            return;
        }
        let bound = self.universe.bound();
        // room left on each side once every unassigned letter takes length 1
        let used = |occ: &[usize]| -> usize {
            let mut s = 0;
            for (j, &(len, _)) in assigned.iter().enumerate() {
                s += occ[j] * len;
            }
            for &o in &occ[i..] {
                s += o;
            }
            s
        };
        let slack_l = bound.saturating_sub(used(occ_l));
        let slack_r = bound.saturating_sub(used(occ_r));
        let max_extra = if occ_l[i] == 0 && occ_r[i] == 0 {
            0 // letter absent from both sides: substitution value is irrelevant
        } else {
            let per_l = if occ_l[i] == 0 { usize::MAX } else { slack_l / occ_l[i] };
            let per_r = if occ_r[i] == 0 { usize::MAX } else { slack_r / occ_r[i] };
            per_l.min(per_r)
        };
        for len in 1..=(1 + max_extra).min(bound) {
            for value in 0..self.universe.power(len) {
                assigned.push((len, value));
                self.instance_rec(occ_l, occ_r, digits_l, digits_r, assigned);
                assigned.pop();
            }
        }
    }

    fn encode_side(&self, digits: &[usize], assigned: &[(usize, usize)]) -> u32 {
        let mut len = 0usize;
        let mut value = 0usize;
        for &d in digits {
            let (bl, bv) = assigned[d];
            len += bl;
            value = value * self.universe.power(bl) + bv;
        }
        debug_assert!(len >= 1);
        value as u32 + self.universe.indices_of_len(len).start
    }

    fn enqueue_union(&mut self, a: u32, b: u32) {
        if a != b {
            self.queue.push_back((a, b));
            self.close();
        }
    }

    /// Drains the worklist. On every effective merge the two class anchors
    /// get extended by each alphabet letter on both sides, which suffices for
    /// full multiplicative compatibility within the bound.
    fn close(&mut self) {
        let m = self.universe.alphabet();
        let bound = self.universe.bound();
        while let Some((a, b)) = self.queue.pop_front() {
            if let Some((sa, sb)) = self.uf.union(a, b) {
                if self.universe.len_of(sa) < bound && self.universe.len_of(sb) < bound {
                    for c in 0..m {
                        self.queue.push_back((self.universe.prepend(sa, c), self.universe.prepend(sb, c)));
                        self.queue.push_back((self.universe.append(sa, c), self.universe.append(sb, c)));
                    }
                }
            }
        }
    }

    pub fn same_class(&mut self, a: u32, b: u32) -> bool {
        self.uf.find(a) == self.uf.find(b)
    }

    pub fn finish(mut self) -> Congruence {
        let n = self.universe.len();
        let mut class_of = vec![0u32; n];
        for ix in 0..n as u32 {
            class_of[ix as usize] = self.uf.find(ix);
        }
        Congruence { universe: self.universe, class_of }
    }
}

/// The least congruence on words of length ≤ `bound` over `m` letters
/// containing all bounded substitution instances of the expanded system.
/// The result is a least fixed point, independent of processing order.
pub fn saturate(system: &IdentitySystem, m: usize, bound: usize) -> Result<Congruence> {
    saturate_capped(system, m, bound, DEFAULT_UNIVERSE_CAP)
}

pub fn saturate_capped(
    system: &IdentitySystem,
    m: usize,
    bound: usize,
    cap: usize,
) -> Result<Congruence> {
    let need = system.max_expanded_side_len();
    if !system.is_empty() && bound < need {
        return Err(Error::BoundTooSmall {
            bound,
            reason: format!("system needs bound at least {need} after zero expansion"),
        });
    }
    let mut sat = Saturator::new(m, bound, cap)?;
    sat.add_system(system)?;
    Ok(sat.finish())
}

impl Congruence {
    pub fn universe(&self) -> &Universe {
        &self.universe
    }

    pub fn class_index(&self, ix: u32) -> u32 {
        self.class_of[ix as usize]
    }

    pub fn class_of_word(&self, w: &Word) -> Result<u32> {
        Ok(self.class_of[self.universe.index_of_word(w)? as usize])
    }

    pub fn same_class(&self, a: &Word, b: &Word) -> Result<bool> {
        Ok(self.class_of_word(a)? == self.class_of_word(b)?)
    }

    /// Number of classes.
    pub fn class_count(&self) -> usize {
        let mut roots: Vec<u32> = self.class_of.clone();
        roots.sort_unstable();
        roots.dedup();
        roots.len()
    }

    /// Groups all word indices by class root.
    pub fn classes(&self) -> std::collections::BTreeMap<u32, Vec<u32>> {
        let mut map: std::collections::BTreeMap<u32, Vec<u32>> = Default::default();
        for (ix, &root) in self.class_of.iter().enumerate() {
            map.entry(root).or_default().push(ix as u32);
        }
        map
    }
}
