//! Finite closed families of lattice elements with modularity, cancellation
//! and neutrality checks. A family is a label set with join/meet tables; it
//! can be built from explicit tables (abstract lattices such as the
//! pentagon) or by closing a set of variety descriptors under join and meet.

use std::collections::BTreeMap;

use crate::error::{Error, Result};

use super::{join_descriptor, meet, theory_equal, VarietyDescriptor};

#[derive(Debug, Clone)]
pub struct FiniteFamily {
    labels: Vec<String>,
    join: Vec<Vec<usize>>,
    meet: Vec<Vec<usize>>,
    members: Option<Vec<VarietyDescriptor>>,
}

pub const DEFAULT_FAMILY_CAP: usize = 64;

impl FiniteFamily {
    /// Builds a family from explicit tables, validating the lattice axioms.
    pub fn from_tables(
        labels: Vec<String>,
        join: Vec<Vec<usize>>,
        meet: Vec<Vec<usize>>,
    ) -> Result<FiniteFamily> {
        let f = FiniteFamily { labels, join, meet, members: None };
        f.validate()?;
        Ok(f)
    }

    fn validate(&self) -> Result<()> {
        let n = self.labels.len();
        let check = |t: &Vec<Vec<usize>>, name: &str| -> Result<()> {
            if t.len() != n || t.iter().any(|r| r.len() != n || r.iter().any(|&v| v >= n)) {
                return Err(Error::LatticeClosure(format!("{name} table is malformed")));
            }
            for a in 0..n {
                if t[a][a] != a {
                    return Err(Error::LatticeClosure(format!("{name} is not idempotent")));
                }
                for b in 0..n {
                    if t[a][b] != t[b][a] {
                        return Err(Error::LatticeClosure(format!("{name} is not commutative")));
                    }
                    for c in 0..n {
                        if t[t[a][b]][c] != t[a][t[b][c]] {
                            return Err(Error::LatticeClosure(format!("{name} is not associative")));
                        }
                    }
                }
            }
            Ok(())
        };
        check(&self.join, "join")?;
        check(&self.meet, "meet")?;
        for a in 0..n {
            for b in 0..n {
                if self.meet[a][self.join[a][b]] != a || self.join[a][self.meet[a][b]] != a {
                    return Err(Error::LatticeClosure("absorption fails".into()));
                }
            }
        }
        Ok(())
    }

    /// Closes a set of descriptors under join and meet, comparing members by
    /// theory equality. Errors out beyond the size cap.
    pub fn close_descriptors(seeds: &[VarietyDescriptor], cap: usize) -> Result<FiniteFamily> {
        let mut members: Vec<VarietyDescriptor> = Vec::new();
        fn find_or_push(
            members: &mut Vec<VarietyDescriptor>,
            d: VarietyDescriptor,
            cap: usize,
        ) -> Result<usize> {
            for (i, m) in members.iter().enumerate() {
                if theory_equal(m, &d)? {
                    return Ok(i);
                }
            }
            if members.len() == cap {
                return Err(Error::ResourceLimit(format!("family exceeds cap {cap}")));
            }
            members.push(d);
            Ok(members.len() - 1)
        }
        for s in seeds {
            find_or_push(&mut members, s.clone(), cap)?;
        }
        let mut joins: BTreeMap<(usize, usize), usize> = BTreeMap::new();
        let mut meets: BTreeMap<(usize, usize), usize> = BTreeMap::new();
        loop {
            let n = members.len();
            let mut progressed = false;
            for i in 0..n {
                for j in i..n {
                    if !joins.contains_key(&(i, j)) {
                        let d = join_descriptor(&members[i], &members[j])?;
                        let k = find_or_push(&mut members, d, cap)?;
                        joins.insert((i, j), k);
                        joins.insert((j, i), k);
                        progressed = true;
                    }
                    if !meets.contains_key(&(i, j)) {
                        let d = meet(&members[i], &members[j])?;
                        let k = find_or_push(&mut members, d, cap)?;
                        meets.insert((i, j), k);
                        meets.insert((j, i), k);
                        progressed = true;
                    }
                }
            }
            if !progressed && members.len() == n {
                break;
            }
        }
        // canonical member order: by serialized theory key
        let n = members.len();
        let keys: Vec<String> = members.iter().map(member_key).collect();
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&i, &j| keys[i].cmp(&keys[j]));
        let mut place = vec![0usize; n];
        for (new_ix, &old_ix) in order.iter().enumerate() {
            place[old_ix] = new_ix;
        }
        let members: Vec<VarietyDescriptor> =
            order.iter().map(|&old| members[old].clone()).collect();
        let mut join = vec![vec![0usize; n]; n];
        let mut meet_t = vec![vec![0usize; n]; n];
        for ((i, j), k) in joins {
            join[place[i]][place[j]] = place[k];
        }
        for ((i, j), k) in meets {
            meet_t[place[i]][place[j]] = place[k];
        }
        let labels = members.iter().map(|m| m.to_string()).collect();
        let f = FiniteFamily { labels, join, meet: meet_t, members: Some(members) };
        f.validate()?;
        Ok(f)
    }

    pub fn size(&self) -> usize {
        self.labels.len()
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn members(&self) -> Option<&[VarietyDescriptor]> {
        self.members.as_deref()
    }

    pub fn join_of(&self, a: usize, b: usize) -> usize {
        self.join[a][b]
    }

    pub fn meet_of(&self, a: usize, b: usize) -> usize {
        self.meet[a][b]
    }

    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.meet[a][b] == a
    }

    /// Finds the member theory-equal to the descriptor.
    pub fn index_of(&self, d: &VarietyDescriptor) -> Result<usize> {
        let members = self
            .members
            .as_ref()
            .ok_or_else(|| Error::Precondition("abstract family has no members".into()))?;
        for (i, m) in members.iter().enumerate() {
            if theory_equal(m, d)? {
                return Ok(i);
            }
        }
        Err(Error::Precondition("descriptor is not in the family".into()))
    }

    /// Modularity of x inside the family: checks (x∨y)∧z = (x∧z)∨y for every
    /// y ≤ z. Returns the first violating pair in canonical order, if any.
    pub fn modular_counterexample(&self, x: usize) -> Option<(usize, usize)> {
        for y in 0..self.size() {
            for z in 0..self.size() {
                if !self.leq(y, z) {
                    continue;
                }
                if self.meet[self.join[x][y]][z] != self.join[self.meet[x][z]][y] {
                    return Some((y, z));
                }
            }
        }
        None
    }

    pub fn is_modular(&self, x: usize) -> bool {
        self.modular_counterexample(x).is_none()
    }

    /// Cancellability of x: a witness is a pair y ≠ z with x∨y = x∨z and
    /// x∧y = x∧z. Returns the first witness in canonical order, if any.
    pub fn cancellation_witness(&self, x: usize) -> Option<(usize, usize)> {
        for y in 0..self.size() {
            for z in (y + 1)..self.size() {
                if self.join[x][y] == self.join[x][z] && self.meet[x][y] == self.meet[x][z] {
                    return Some((y, z));
                }
            }
        }
        None
    }

    pub fn is_cancellable(&self, x: usize) -> bool {
        self.cancellation_witness(x).is_none()
    }

    /// Neutrality of x: every sublattice generated by x and two other
    /// members is distributive.
    pub fn is_neutral(&self, x: usize) -> bool {
        for y in 0..self.size() {
            for z in 0..self.size() {
                let sub = self.generated_sublattice(&[x, y, z]);
                if !self.is_distributive_on(&sub) {
                    return false;
                }
            }
        }
        true
    }

    fn generated_sublattice(&self, gens: &[usize]) -> Vec<usize> {
        let mut sub: Vec<usize> = gens.to_vec();
        sub.sort_unstable();
        sub.dedup();
        loop {
            let mut next = sub.clone();
            for &a in &sub {
                for &b in &sub {
                    for v in [self.join[a][b], self.meet[a][b]] {
                        if !next.contains(&v) {
                            next.push(v);
                        }
                    }
                }
            }
            next.sort_unstable();
            next.dedup();
            if next == sub {
                return sub;
            }
            sub = next;
        }
    }

    fn is_distributive_on(&self, sub: &[usize]) -> bool {
        for &a in sub {
            for &b in sub {
                for &c in sub {
                    if self.meet[a][self.join[b][c]] != self.join[self.meet[a][b]][self.meet[a][c]]
                    {
                        return false;
                    }
                }
            }
        }
        true
    }
}

// Deterministic serialization key: the SL flag and the nil part's summary
// report over a fixed alphabet.
fn member_key(d: &VarietyDescriptor) -> String {
    let nil = match d.nil_part() {
        None => "trivial".to_string(),
        Some(f) => {
            let m = f.base_summary().b_eff().unwrap_or(3).max(3);
            match f.summary_for(m) {
                Ok(s) => s.report(),
                Err(_) => f.basis().to_string(),
            }
        }
    };
    format!("sl={} nil={nil}", d.sl_flag())
}

/// The pentagon: 0 < a < c < 1 with b incomparable to a and c.
/// The classical witness that modularity can fail.
pub fn pentagon() -> FiniteFamily {
    let labels = ["0", "a", "b", "c", "1"].map(String::from).to_vec();
    let join = vec![
        vec![0, 1, 2, 3, 4],
        vec![1, 1, 4, 3, 4],
        vec![2, 4, 2, 4, 4],
        vec![3, 3, 4, 3, 4],
        vec![4, 4, 4, 4, 4],
    ];
    let meet = vec![
        vec![0, 0, 0, 0, 0],
        vec![0, 1, 0, 1, 1],
        vec![0, 0, 2, 0, 2],
        vec![0, 1, 0, 3, 3],
        vec![0, 1, 2, 3, 4],
    ];
    FiniteFamily::from_tables(labels, join, meet).unwrap()
}

/// A chain lattice 0 < 1 < … < k−1; every element is cancellable and neutral.
pub fn chain(k: usize) -> FiniteFamily {
    let labels = (0..k).map(|i| i.to_string()).collect();
    let join = (0..k).map(|a| (0..k).map(|b| a.max(b)).collect()).collect();
    let meet = (0..k).map(|a| (0..k).map(|b| a.min(b)).collect()).collect();
    FiniteFamily::from_tables(labels, join, meet).unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pentagon_modularity_counterexample() {
        let n5 = pentagon();
        // b is the incomparable short-chain element
        let b = 2;
        let (y, z) = n5.modular_counterexample(b).unwrap();
        assert!(n5.leq(y, z));
        assert_eq!((n5.label(y), n5.label(z)), ("a", "c"));
        // the doubly irreducible element is not neutral
        assert!(!n5.is_neutral(b));
        // 0 and 1 are modular even in the pentagon
        assert!(n5.is_modular(0));
        assert!(n5.is_modular(4));
    }

    #[test]
    fn chains_are_distributive() {
        let c = chain(5);
        for x in 0..c.size() {
            assert!(c.is_modular(x));
            assert!(c.is_cancellable(x));
            assert!(c.is_neutral(x));
        }
    }

    #[test]
    fn bottom_is_always_cancellable() {
        for f in [pentagon(), chain(4)] {
            assert!(f.is_cancellable(0));
        }
    }

    #[test]
    fn malformed_tables_are_rejected() {
        let labels = vec!["0".into(), "1".into()];
        let join = vec![vec![0, 1], vec![1, 0]];
        let meet = vec![vec![0, 0], vec![0, 1]];
        assert!(FiniteFamily::from_tables(labels, join, meet).is_err());
    }
}
