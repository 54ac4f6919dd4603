//! Permutations of {1..n}, subgroup generation, stabilizers, subgroup
//! lattices for small degrees, and the permutation-group view of varieties.

use std::collections::BTreeSet;
use std::fmt;

use crate::error::{Error, Result};

/// A permutation of {1..n}, stored as the image sequence.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Permutation {
    images: Vec<usize>, // images[i-1] = image of i, values in 1..=n
}

impl Permutation {
    pub fn new(images: Vec<usize>) -> Result<Permutation> {
        let n = images.len();
        let mut seen = vec![false; n + 1];
        for &v in &images {
            if v == 0 || v > n || seen[v] {
                return Err(Error::Precondition(format!("{images:?} is not a permutation")));
            }
            seen[v] = true;
        }
        Ok(Permutation { images })
    }

    pub fn identity(n: usize) -> Permutation {
        Permutation { images: (1..=n).collect() }
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    /// Image of the point i (1-based).
    pub fn image(&self, i: usize) -> usize {
        self.images[i - 1]
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &v)| v == i + 1)
    }

    /// Left-to-right composition: apply `self` first, then `other`.
    pub fn then(&self, other: &Permutation) -> Permutation {
        let images = (1..=self.degree()).map(|i| other.image(self.image(i))).collect();
        Permutation { images }
    }

    pub fn inverse(&self) -> Permutation {
        let mut images = vec![0; self.degree()];
        for i in 1..=self.degree() {
            images[self.image(i) - 1] = i;
        }
        Permutation { images }
    }

    /// Parses cycle notation: `(12)`, `(123)`, `(12)(34)`, `()` for the
    /// identity. Points are single digits, fixed points omitted.
    pub fn from_cycles(text: &str, n: usize) -> Result<Permutation> {
        let mut images: Vec<usize> = (1..=n).collect();
        let mut chars = text.chars().filter(|c| !c.is_whitespace()).peekable();
        let parse_err = |msg: &str| Error::Parse { line: 1, col: 1, msg: msg.into() };
        let mut any = false;
        while let Some(c) = chars.next() {
            if c != '(' {
                return Err(parse_err(&format!("expected '(' in cycle notation, found '{c}'")));
            }
            let mut cycle = Vec::new();
            loop {
                match chars.next() {
                    Some(')') => break,
                    Some(d) if d.is_ascii_digit() => {
                        let p = d.to_digit(10).unwrap() as usize;
                        if p == 0 || p > n {
                            return Err(parse_err(&format!("point {p} outside 1..={n}")));
                        }
                        if cycle.contains(&p) {
                            return Err(parse_err(&format!("point {p} repeated in cycle")));
                        }
                        cycle.push(p);
                    }
                    _ => return Err(parse_err("unterminated cycle")),
                }
            }
            any = true;
            for w in cycle.windows(2) {
                images[w[0] - 1] = w[1];
            }
            if cycle.len() > 1 {
                images[cycle[cycle.len() - 1] - 1] = cycle[0];
            }
        }
        if !any {
            return Err(parse_err("empty cycle notation"));
        }
        Permutation::new(images)
    }

    fn cycles(&self) -> Vec<Vec<usize>> {
        let n = self.degree();
        let mut seen = vec![false; n + 1];
        let mut out = Vec::new();
        for start in 1..=n {
            if seen[start] || self.image(start) == start {
                continue;
            }
            let mut cycle = vec![start];
            seen[start] = true;
            let mut p = self.image(start);
            while p != start {
                seen[p] = true;
                cycle.push(p);
                p = self.image(p);
            }
            out.push(cycle);
        }
        out
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return write!(f, "()");
        }
        for cycle in cycles {
            write!(f, "(")?;
            for p in cycle {
                write!(f, "{p}")?;
            }
            write!(f, ")")?;
        }
        Ok(())
    }
}

/// All elements of the full symmetric group on {1..n}, sorted.
pub fn symmetric_elements(n: usize) -> Vec<Permutation> {
    let mut out = Vec::new();
    let mut images: Vec<usize> = (1..=n).collect();
    permute_rec(&mut images, 0, &mut out);
    out.sort();
    out
}

fn permute_rec(images: &mut Vec<usize>, k: usize, out: &mut Vec<Permutation>) {
    if k == images.len() {
        out.push(Permutation { images: images.clone() });
        return;
    }
    for i in k..images.len() {
        images.swap(k, i);
        permute_rec(images, k + 1, out);
        images.swap(k, i);
    }
}

/// A subgroup of S_n, given by generators together with the enumerated
/// element set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PermGroup {
    degree: usize,
    generators: Vec<Permutation>,
    elements: BTreeSet<Permutation>,
}

impl PermGroup {
    /// The least subgroup containing the generators.
    pub fn generated(n: usize, gens: &[Permutation]) -> Result<PermGroup> {
        for g in gens {
            if g.degree() != n {
                return Err(Error::DegreeMismatch { left: n, right: g.degree() });
            }
        }
        let mut elements: BTreeSet<Permutation> = BTreeSet::new();
        elements.insert(Permutation::identity(n));
        let mut queue: Vec<Permutation> = gens.to_vec();
        while let Some(p) = queue.pop() {
            if elements.contains(&p) {
                continue;
            }
            // closing a finite set under composition also yields inverses
            let snapshot: Vec<Permutation> = elements.iter().cloned().collect();
            elements.insert(p.clone());
            for q in snapshot {
                queue.push(p.then(&q));
                queue.push(q.then(&p));
            }
            queue.push(p.then(&p));
        }
        Ok(PermGroup { degree: n, generators: gens.to_vec(), elements })
    }

    /// Builds a group from a full element set, checking closure.
    pub fn from_elements(n: usize, elements: BTreeSet<Permutation>) -> Result<PermGroup> {
        let gens: Vec<Permutation> = elements.iter().cloned().collect();
        let g = PermGroup::generated(n, &gens)?;
        if g.elements != elements {
            return Err(Error::Precondition("element set is not closed under composition".into()));
        }
        Ok(g)
    }

    pub fn trivial(n: usize) -> PermGroup {
        PermGroup::generated(n, &[]).unwrap()
    }

    pub fn symmetric(n: usize) -> PermGroup {
        let elements: BTreeSet<Permutation> = symmetric_elements(n).into_iter().collect();
        let gens = elements.iter().cloned().collect::<Vec<_>>();
        PermGroup { degree: n, generators: gens, elements }
    }

    /// The point stabilizer Stab_i(n): all π with iπ = i. Order (n−1)!.
    pub fn stabilizer(i: usize, n: usize) -> Result<PermGroup> {
        if i == 0 || i > n {
            return Err(Error::Precondition(format!("point {i} outside 1..={n}")));
        }
        let elements: BTreeSet<Permutation> =
            symmetric_elements(n).into_iter().filter(|p| p.image(i) == i).collect();
        PermGroup::from_elements(n, elements)
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn is_trivial(&self) -> bool {
        self.order() == 1
    }

    pub fn contains(&self, p: &Permutation) -> bool {
        self.elements.contains(p)
    }

    pub fn elements(&self) -> impl Iterator<Item = &Permutation> {
        self.elements.iter()
    }

    pub fn element_set(&self) -> &BTreeSet<Permutation> {
        &self.elements
    }

    pub fn generators(&self) -> &[Permutation] {
        &self.generators
    }

    pub fn is_subgroup_of(&self, other: &PermGroup) -> bool {
        self.degree == other.degree && self.elements.is_subset(&other.elements)
    }

    /// Intersection of the element sets.
    pub fn meet(&self, other: &PermGroup) -> Result<PermGroup> {
        if self.degree != other.degree {
            return Err(Error::DegreeMismatch { left: self.degree, right: other.degree });
        }
        let elements: BTreeSet<Permutation> =
            self.elements.intersection(&other.elements).cloned().collect();
        PermGroup::from_elements(self.degree, elements)
    }

    /// The subgroup generated by the union of the two groups.
    pub fn join(&self, other: &PermGroup) -> Result<PermGroup> {
        if self.degree != other.degree {
            return Err(Error::DegreeMismatch { left: self.degree, right: other.degree });
        }
        let mut gens = self.generators.clone();
        gens.extend(other.generators.iter().cloned());
        PermGroup::generated(self.degree, &gens)
    }

    /// A short display name: T, S_n, gr{π}, Stab_i(n), or gr{…} with a small
    /// generating set.
    pub fn name(&self) -> String {
        let n = self.degree;
        if self.is_trivial() {
            return "T".into();
        }
        if self.order() == factorial(n) {
            return format!("S{n}");
        }
        if let Some(g) = self
            .elements
            .iter()
            .find(|g| PermGroup::generated(n, std::slice::from_ref(g)).unwrap().elements == self.elements)
        {
            return format!("gr{{{g}}}");
        }
        for i in 1..=n {
            if self.elements.iter().all(|p| p.image(i) == i) && self.order() == factorial(n - 1) {
                return format!("Stab_{i}({n})");
            }
        }
        let mut gens: Vec<String> = Vec::new();
        let mut sub = PermGroup::trivial(n);
        for g in &self.elements {
            if !sub.contains(g) {
                gens.push(g.to_string());
                sub = sub.join(&PermGroup::generated(n, std::slice::from_ref(g)).unwrap()).unwrap();
                if sub.elements == self.elements {
                    break;
                }
            }
        }
        format!("gr{{{}}}", gens.join(","))
    }
}

pub fn factorial(n: usize) -> usize {
    (1..=n).product()
}

/// The permutation-group view of a variety at degree n: `lower` collects the
/// arrangements with a derivability witness, `upper` everything not refuted.
/// `exact` means the two coincide, which always happens when the nil part has
/// a certified total summary.
#[derive(Debug, Clone)]
pub struct PermComputation {
    pub lower: PermGroup,
    pub upper: PermGroup,
    pub exact: bool,
}

impl PermComputation {
    pub fn display(&self) -> String {
        if self.exact {
            format!("{} (exact)", self.lower.name())
        } else {
            format!("between {} and {}", self.lower.name(), self.upper.name())
        }
    }
}

/// The subgroup of S_n of all arrangements π such that the variety satisfies
/// x_1⋯x_n ≈ x_1π⋯x_nπ.
///
/// The trivial and semilattice varieties satisfy every such identity. For a
/// nil part the identities are decided against its summary over n letters;
/// certification of the summary makes the answer exact in both directions.
pub fn perm_n(
    v: &crate::varlattice::VarietyDescriptor,
    n: usize,
) -> crate::error::Result<PermComputation> {
    use crate::error::Error;
    if n < 2 {
        return Err(Error::Precondition("permutational identities need degree at least 2".into()));
    }
    let f = match v.nil_part() {
        None => {
            let s = PermGroup::symmetric(n);
            return Ok(PermComputation { lower: s.clone(), upper: s, exact: true });
        }
        Some(f) => f,
    };
    // A certified total summary decides each arrangement in both directions.
    // Without totality the merges still give a sound lower bound.
    let (summary, exact) = match f.summary_for(n) {
        Ok(s) => (s, true),
        Err(Error::NotTotal(_)) => {
            let s = crate::engine::theory_summary_scheduled(
                f.basis(),
                n,
                crate::engine::DEFAULT_BOUND_CEILING,
            )?;
            (std::sync::Arc::new(s), false)
        }
        Err(e) => return Err(e),
    };
    let base = crate::words::Word::from_indices(&(0..n as u32).collect::<Vec<_>>());
    let mut elements = BTreeSet::new();
    for pi in symmetric_elements(n) {
        let image = crate::words::Word::new(
            (1..=n).map(|i| crate::words::Letter(pi.image(i) as u32 - 1)).collect(),
        );
        let satisfied = if exact {
            summary.holds(&crate::identities::Identity::Plain(base.clone(), image))?
        } else {
            summary.congruence().same_class(&base, &image)?
        };
        if satisfied {
            elements.insert(pi);
        }
    }
    let lower = PermGroup::from_elements(n, elements)
        .map_err(|_| Error::Internal("satisfied arrangements do not form a subgroup".into()))?;
    let full = lower.order() == factorial(n);
    let upper = if exact || full { lower.clone() } else { PermGroup::symmetric(n) };
    Ok(PermComputation { exact: exact || full, lower, upper })
}

/// The guaranteed lower bound on the group of satisfied arrangements that a
/// single seed identity yields:
/// a length-3 seed swapping the first two letters gives Stab_n(n) for n ≥ 4,
/// one swapping the last two gives Stab_n(1), any other non-trivial
/// arrangement of three letters gives all of S_n, and the four-letter seed
/// xyzt ≈ xzty gives Stab_n(1) for n ≥ 5.
pub fn lower_bound_from_seed(
    seed: &crate::identities::Identity,
    n: usize,
) -> crate::error::Result<PermGroup> {
    use crate::error::Error;
    use crate::identities::{make_permutational, Identity};

    let canon = seed.canonical();
    let flipped = match seed {
        Identity::Plain(u, v) => Identity::Plain(v.clone(), u.clone()).canonical(),
        Identity::Zero(_) => {
            return Err(Error::Precondition("seed must be a plain identity".into()))
        }
    };
    let matches = |id: &Identity| *id == canon || *id == flipped;

    for pi in symmetric_elements(3) {
        if pi.is_identity() {
            continue;
        }
        if matches(&make_permutational(3, &pi)?) {
            return match pi.to_string().as_str() {
                "(12)" => {
                    require_degree(n, 4)?;
                    PermGroup::stabilizer(n, n)
                }
                "(23)" => {
                    require_degree(n, 4)?;
                    PermGroup::stabilizer(1, n)
                }
                _ => {
                    require_degree(n, 4)?;
                    Ok(PermGroup::symmetric(n))
                }
            };
        }
    }
    let swap_tail = Identity::Plain(
        crate::words::Word::from_indices(&[0, 1, 2, 3]),
        crate::words::Word::from_indices(&[0, 2, 3, 1]),
    );
    if matches(&swap_tail) {
        require_degree(n, 5)?;
        return PermGroup::stabilizer(1, n);
    }
    Err(Error::Precondition(format!("identity {seed} is not a supported seed")))
}

fn require_degree(n: usize, least: usize) -> crate::error::Result<()> {
    if n < least {
        return Err(crate::error::Error::Precondition(format!(
            "seed bound needs degree at least {least}, got {n}"
        )));
    }
    Ok(())
}

/// The lattice of all subgroups of S_n, with the Hasse (cover) relation.
#[derive(Debug, Clone)]
pub struct SubgroupLattice {
    pub degree: usize,
    pub groups: Vec<PermGroup>,
    /// Cover edges as (lower, upper) indices into `groups`.
    pub hasse: Vec<(usize, usize)>,
}

/// Every subgroup of S_n with its Hasse diagram. Resource-bounded to n ≤ 4.
pub fn all_subgroups(n: usize) -> Result<SubgroupLattice> {
    if n > 4 {
        return Err(Error::ResourceLimit(format!(
            "subgroup lattice enumeration is limited to degree 4, got {n}"
        )));
    }
    let sn = symmetric_elements(n);
    let mut found: Vec<PermGroup> = vec![PermGroup::trivial(n)];
    let mut seen: BTreeSet<Vec<Permutation>> = BTreeSet::new();
    seen.insert(found[0].elements.iter().cloned().collect());
    let mut frontier = found.clone();
    while let Some(h) = frontier.pop() {
        for g in &sn {
            if h.contains(g) {
                continue;
            }
            let mut gens = h.generators.clone();
            gens.push(g.clone());
            let bigger = PermGroup::generated(n, &gens)?;
            let key: Vec<Permutation> = bigger.elements.iter().cloned().collect();
            if seen.insert(key) {
                found.push(bigger.clone());
                frontier.push(bigger);
            }
        }
    }
    found.sort_by_key(|g| (g.order(), g.elements.iter().cloned().collect::<Vec<_>>()));
    let mut hasse = Vec::new();
    for (i, h) in found.iter().enumerate() {
        for (j, k) in found.iter().enumerate() {
            if i == j || !h.is_subgroup_of(k) {
                continue;
            }
            let covered = found.iter().enumerate().any(|(l, m)| {
                l != i && l != j && h.is_subgroup_of(m) && m.is_subgroup_of(k) && m.order() != h.order() && m.order() != k.order()
            });
            if !covered {
                hasse.push((i, j));
            }
        }
    }
    Ok(SubgroupLattice { degree: n, groups: found, hasse })
}

impl SubgroupLattice {
    /// DOT-compatible edge list of the Hasse diagram.
    pub fn dot_edges(&self) -> String {
        let mut out = String::new();
        for &(lo, hi) in &self.hasse {
            out.push_str(&format!(
                "  \"{}\" -> \"{}\";\n",
                self.groups[lo].name(),
                self.groups[hi].name()
            ));
        }
        out
    }
}

/// Is `g` a maximal proper subgroup of S_n?
pub fn is_maximal(g: &PermGroup) -> Result<bool> {
    let n = g.degree();
    let full = factorial(n);
    if g.order() == full {
        return Ok(false);
    }
    let lattice = all_subgroups(n)?;
    Ok(!lattice.groups.iter().any(|k| {
        k.order() != full && k.order() != g.order() && g.is_subgroup_of(k)
    }))
}
